#include "tp/derive_doc.hpp"

#include <sstream>

#include "tp/modulation.hpp"

namespace tp {

namespace {

std::string term_list(const std::vector<CubicTerm>& terms) {
    if (terms.empty()) return "0";
    std::ostringstream out;
    for (size_t i = 0; i < terms.size(); ++i) {
        if (i) out << " + ";
        out << terms[i].mult;
        for (const auto& f : terms[i].f) out << "*A[" << f.m << "," << f.j << "]";
    }
    return out.str();
}

} // namespace

std::string derive_document(int order_n) {
    const int N = order_n - 1;
    const Hierarchy& h = hierarchy(N);
    std::ostringstream out;

    out << "modulation hierarchy, order n=" << order_n << " (N=" << N << ")\n";
    out << "ansatz: Psi = sum_(m,j) r^(alpha(m)+j) A[m,j](xbar) e^(imx),"
        << " alpha(m)=||m|-1|, A[-m,j]=conj(A[m,j])\n";
    out << "\n";

    out << "critical evolution equations (m=1; m=-1 by conjugation):\n";
    out << "damping c_j(t) per chart: chart1 = -1+eps1/2, chart2 = v2,"
        << " chart3 j=1 = 1+eps3/2, chart3 j>=2 = 1-eps3/2\n";
    out << "NOTE: the chart-3 eps3/2 sign differs between the leading row (j=1)"
        << " and the higher rows (j>=2); both are kept exactly as printed in the"
        << " chart equations rather than harmonized.\n";
    for (int j = 1; j <= N - 2; ++j) {
        out << "  dA[1," << j << "]/dt = 4*dxx*A[1," << j << "] + c_" << j << "(t)*A[1," << j
            << "]";
        out << " - (" << term_list(h.critical_cubic.at(j)) << ")";
        if (j - 1 >= 1) out << " - 4i*dxxx*A[1," << j - 1 << "]";
        if (j - 2 >= 1) out << " - dxxxx*A[1," << j - 2 << "]";
        if (j == 2) out << " + src(t)*nu[1]   (src: eps1 | 1 | eps3)";
        out << "\n";
    }
    out << "\n";

    out << "graph equations for |m| != 1 (increasing weight alpha(m)+j):\n";
    for (const auto& slot : h.graph_slots) {
        const int m = slot.m, j = slot.j;
        const double q = 1.0 - static_cast<double>(m) * m;
        const int w = slot.weight();
        out << "  (m=" << m << ", j=" << j << ", weight=" << w << ")  L0 = -(1-m^2)^2 = "
            << -q * q << "\n";
        out << "    A[" << m << "," << j << "] = -(1/" << q * q << ")*[";
        bool first = true;
        auto part = [&](const std::string& text) {
            if (!first) out << " + ";
            out << text;
            first = false;
        };
        if (j - 1 >= 1) part("L1*A[" + std::to_string(m) + "," + std::to_string(j - 1) + "]");
        if (j - 2 >= 1) part("~L2*A[" + std::to_string(m) + "," + std::to_string(j - 2) + "]");
        if (j - 3 >= 1) part("L3*A[" + std::to_string(m) + "," + std::to_string(j - 3) + "]");
        if (j - 4 >= 1) part("L4*A[" + std::to_string(m) + "," + std::to_string(j - 4) + "]");
        part("-(" + term_list(h.graph_cubic.at(slot)) + ")");
        if (w == 4) part("src(t)*nu[" + std::to_string(m) + "]");
        out << "]\n";

        // closed forms of the lowest slots, for golden checks
        if (m == 3 && j == 1) out << "    A[3,1] = (-1/64) * A[1,1]^3\n";
        if ((m == 0 || m == 2) && (j == 1 || j == 2) && h.graph_cubic.at(slot).empty())
            out << "    A[" << m << "," << j << "] = 0\n";
    }
    out << "\n";
    out << "operators: L1 = -4im(1-m^2)*dx, ~L2 = -d/dt - rinv_dr - 2(1-3m^2)*dxx + vbar,"
        << " L3 = -4im*dxxx, L4 = -dxxxx\n";
    return out.str();
}

} // namespace tp
