#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tp/mode_index.hpp"
#include "tp/spectral_field.hpp"

namespace tp {

// Scalar base-flow variables of one blow-up chart, plus their drift along the
// chart flow. value is eps1 | v2 | eps3 for charts 1 | 2 | 3.
struct ChartScalars {
    int chart = 2;
    double value = 0.0;

    double vbar() const { return chart == 1 ? -1.0 : chart == 2 ? value : 1.0; }
    double rinv_dr() const {
        return chart == 1 ? -0.5 * value : chart == 2 ? 0.0 : 0.5 * value;
    }
    // Coefficient of nu_m in the source slot (eps1 | 1 | eps3).
    double source_factor() const { return chart == 2 ? 1.0 : value; }

    // Linear coefficient of the j-th critical evolution equation. Rows j >= 2
    // carry vbar - r^{-1}dr; the chart-3 leading row is kept with the opposite
    // eps3/2 sign, as printed in the chart equations (see derive output).
    double damping(int j) const {
        if (chart == 3 && j == 1) return 1.0 + 0.5 * value;
        return vbar() - rinv_dr();
    }

    // Time derivatives along the chart flow.
    double d_value() const {
        return chart == 1 ? 2.0 * value * value : chart == 2 ? 1.0 : -2.0 * value * value;
    }
    double d_vbar() const { return chart == 2 ? 1.0 : 0.0; }
    double d_rinv_dr() const { return chart == 2 ? 0.0 : -value * value; }
    double d_source_factor() const { return chart == 2 ? 0.0 : d_value(); }
};

// The indexed family {A_{mj}} of complex envelope fields on the slow grid.
// Only m >= 0 is stored; A_{-mj} = conj(A_{mj}) by the reality pairing.
class ModulationSet {
public:
    ModulationSet() = default;
    ModulationSet(const Grid1D& slow_grid, int order_n);

    int order() const { return N_ + 1; }
    int truncation() const { return N_; } // N = n - 1
    const Grid1D& grid() const { return grid_; }

    ComplexField field(int m, int j) const; // conjugated for m < 0
    const ComplexField& stored(int m, int j) const;
    void set_field(int m, int j, ComplexField f);

    std::vector<ModeIndex> stored_indices() const; // m >= 0, (m, j) order
    double max_abs() const;

private:
    Grid1D grid_;
    int N_ = 4;
    std::map<ModeIndex, ComplexField> fields_;
};

// Cached enumeration tables for one truncation level.
struct Hierarchy {
    int N = 4;
    std::vector<ModeIndex> graph_slots;                    // |m| != 1, m >= 0, by weight
    std::map<ModeIndex, std::vector<CubicTerm>> graph_cubic; // weight alpha(m)+j lists
    std::map<int, std::vector<CubicTerm>> critical_cubic;    // j -> weight j+2 lists
};
const Hierarchy& hierarchy(int N);

// Sum of the monomials, evaluated pointwise on the slow grid.
ComplexField evaluate_cubic(const ModulationSet& ms, const std::vector<CubicTerm>& terms);

// Apply the i-th matched linear operator at band m. i = 2 is the tilde
// variant and needs the time derivative of f supplied by the caller.
ComplexField linear_op_apply(int i, int m, const ComplexField& f, const ChartScalars& sc,
                             const ComplexField* dt_f = nullptr);

// Time derivative of the critical field A_{1j} from its evolution equation.
ComplexField critical_rhs(const ModulationSet& ms, const ChartScalars& sc,
                          const std::map<int, cdouble>& nu, int j);

// Evolution right-hand sides for all critical orders j = 1..N-2.
std::map<int, ComplexField> modulation_rhs(const ModulationSet& ms, const ChartScalars& sc,
                                           const std::map<int, cdouble>& nu);

// Fills every non-critical A_{mj} from the algebraic graph equations, in
// increasing order of alpha(m)+j. The time derivative inside the tilde
// operator is obtained by substituting the evolution right-hand side of the
// lower-order field (one more substitution level for non-critical fields).
ModulationSet gl_graph_eval(const ModulationSet& ms, const ChartScalars& sc,
                            const std::map<int, cdouble>& nu);

// d/dt of a non-critical graph field, by differentiating its graph formula.
ComplexField graph_time_derivative(const ModulationSet& ms, const ChartScalars& sc,
                                   const std::map<int, cdouble>& nu, int m, int j);

// Closed-form base flow of one chart over local time.
struct ChartFlow {
    int chart = 2;
    double T_end = 0.0;                                  // transition time
    std::function<ChartScalars(double)> scalars;         // eps1(t) | v2(t) | eps3(t)
    std::function<double(double)> radius;                // r_l(t)
    std::function<double(int, double, double)> damping_integral; // j, t, h
};

struct ModulationTrajectory {
    bool ok = true;
    std::string failure;
    std::vector<double> times;
    std::vector<ModulationSet> sets; // graph entries refreshed at sample times
};

// Exponential-midpoint stepping of the critical cascade in order j = 1, 2, ...
ModulationTrajectory solve_modulation(const ModulationSet& ms0, const ChartFlow& flow,
                                      const std::map<int, cdouble>& nu, double T, double h,
                                      const std::vector<double>& sample_times);

// Psi(x) = sum_{m,j} r^{alpha(m)+j} A_{mj}(r x) e^{imx}, assembled exactly in
// Fourier space (envelope modes must land on fast-grid wavenumbers).
SpectralField assemble_psi(const ModulationSet& ms, double r, const Grid1D& fast_grid);

} // namespace tp
