#include "tp/mode_index.hpp"

#include <algorithm>

namespace tp {

std::vector<ModeIndex> all_indices(int N) {
    if (N < 3 || N > 8) throw config_error("all_indices: N out of supported range 3..8");
    std::vector<ModeIndex> out;
    for (int m = -N; m <= N; ++m)
        for (int j = 1; j <= tilde_alpha(m, N); ++j)
            out.push_back({m, j});
    return out;
}

std::vector<CubicTerm> enumerate_cubic_weight(int m, int w, int N) {
    std::vector<ModeIndex> idx = all_indices(N);
    std::vector<CubicTerm> out;
    const size_t n = idx.size();
    for (size_t a = 0; a < n; ++a) {
        if (idx[a].weight() > w - 2) continue;
        for (size_t b = a; b < n; ++b) {
            int w2 = idx[a].weight() + idx[b].weight();
            if (w2 > w - 1) continue;
            for (size_t c = b; c < n; ++c) {
                if (w2 + idx[c].weight() != w) continue;
                if (idx[a].m + idx[b].m + idx[c].m != m) continue;
                CubicTerm term;
                term.f[0] = idx[a];
                term.f[1] = idx[b];
                term.f[2] = idx[c];
                bool ab = idx[a] == idx[b], bc = idx[b] == idx[c];
                term.mult = (ab && bc) ? 1 : (ab || bc) ? 3 : 6;
                out.push_back(term);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CubicTerm> enumerate_cubic(int m, int j, int N) {
    if (!valid_index({m, j}, N)) throw domain_error("enumerate_cubic: invalid (m, j) index");
    return enumerate_cubic_weight(m, alpha_of(m) + j + 2, N);
}

} // namespace tp
