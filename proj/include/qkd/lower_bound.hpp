#pragma once

#include <array>

#include "qkd/qmath.hpp"

namespace qkd {

/// Two-qubit Bell-diagonal state given by its four eigenvalues. The QBER of
/// a z-basis measurement is lambda3 + lambda4.
struct BellDiagonalState {
    std::array<double, 4> lambda{1.0, 0.0, 0.0, 0.0};
    double qber() const { return lambda[2] + lambda[3]; }
    bool valid(double tol = 1e-9) const;
};

struct PreprocessedRate {
    double q = 0.0;   // bit-flip probability used by Alice
    double rate = 0.0;
    BellDiagonalState lambda_star;  // worst-case state attaining the infimum
};

/// Key-rate functional 1 - S(rho_E) + (S(sigma0_E)+S(sigma1_E)
/// - S(sigma0_B)-S(sigma1_B))/2 for a Bell-diagonal state and flip
/// probability q. The 4x4 conditional states split into 2x2 blocks, so only
/// closed-form 2x2 eigenvalues are needed.
double rate_R(const BellDiagonalState& s, double q);

/// Worst case over the protocol's constrained lambda set at fixed q.
PreprocessedRate worst_case_rate(Protocol protocol, double qber, double q);

/// One-way lower bound r1 = sup_q inf_lambda R. Requires qber in [0, 0.3].
/// With allow_preprocessing = false the flip probability is pinned to zero.
PreprocessedRate r1_bound(Protocol protocol, double qber,
                          bool allow_preprocessing = true);

/// QBER at which r1 crosses zero, bisected to better than 5e-4 absolute.
double qber_threshold(Protocol protocol, bool allow_preprocessing);

}  // namespace qkd
