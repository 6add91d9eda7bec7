#pragma once

#include <vector>

#include "tp/errors.hpp"

namespace tp {

// alpha(m) = ||m| - 1|: distance of the band around wavenumber m from the
// critical bands at |m| = 1.
inline int alpha_of(int m) { return std::abs(std::abs(m) - 1); }

// Number of amplitude orders carried at band m for truncation level N.
inline int tilde_alpha(int m, int N) {
    return N - alpha_of(m) - (std::abs(m) == 1 ? 2 : 0);
}

// Index (m, j) of one modulation function A_{mj}; weight(m,j) = alpha(m) + j
// is the power of the blow-up radius it carries in the ansatz.
struct ModeIndex {
    int m = 0;
    int j = 1;

    int weight() const { return alpha_of(m) + j; }
    bool critical() const { return std::abs(m) == 1; }

    bool operator==(const ModeIndex& o) const { return m == o.m && j == o.j; }
    bool operator<(const ModeIndex& o) const {
        return m != o.m ? m < o.m : j < o.j;
    }
};

inline bool valid_index(const ModeIndex& idx, int N) {
    return idx.m >= -N && idx.m <= N && idx.j >= 1 && idx.j <= tilde_alpha(idx.m, N);
}

// All valid indices for truncation level N, in (m, j) order.
std::vector<ModeIndex> all_indices(int N);

// One cubic monomial mult * A_{m1j1} A_{m2j2} A_{m3j3}; factors are kept
// sorted, mult is the trinomial count of the ordered arrangements.
struct CubicTerm {
    ModeIndex f[3];
    int mult = 1;

    bool operator==(const CubicTerm& o) const {
        return mult == o.mult && f[0] == o.f[0] && f[1] == o.f[1] && f[2] == o.f[2];
    }
    bool operator<(const CubicTerm& o) const {
        for (int i = 0; i < 3; ++i)
            if (!(f[i] == o.f[i])) return f[i] < o.f[i];
        return mult < o.mult;
    }
};

// All monomials of (sum_mj r^{weight} A_{mj} z^m)^3 landing at band m with
// total radial weight w: m1+m2+m3 = m and sum of weights = w. Sorted.
std::vector<CubicTerm> enumerate_cubic_weight(int m, int w, int N);

// Cubic coefficient a_{mj} as it appears in the matched equation for the
// critical modulation functions: total weight alpha(m) + j + 2, the slot the
// cube of the ansatz occupies two radial orders above A_{mj}.
std::vector<CubicTerm> enumerate_cubic(int m, int j, int N);

} // namespace tp
