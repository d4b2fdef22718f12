#pragma once

#include <array>

#include "qkd/qmath.hpp"

namespace qkd {

/// Eve's four unnormalized post-sifting vectors in span{|00>,|01>,|10>},
/// indexed by (Alice bit a, Bob bit b) as 00, 01, 10, 11. The squared norms
/// are the acceptance probabilities (1/2, D, D, 1/2).
struct AttackUnitaryState {
    double disturbance = 0.0;
    std::array<std::array<double, 3>, 4> eve_vectors{};

    const std::array<double, 3>& vec(int a, int b) const {
        return eve_vectors[2 * a + b];
    }
};

/// Measurement outcomes of the sign observable, labelled by the eigenvalue
/// branch: 0 (null), + (guess 0), - (guess 1).
enum class HelstromOutcome { Zero = 0, Plus = 1, Minus = 2 };

struct HelstromResult {
    std::array<double, 3> outcome_probs{};  // indexed by HelstromOutcome
    std::array<double, 3> posteriors{};     // p(A'=0 | E=e), post bit flip
    double info = 0.0;                      // I(A':E) in bits
};

enum class Target { Alice, Bob };

/// QBER of the induced depolarizing channel: Q = D / (1/2 + D).
double qber_from_disturbance(double d);

/// Inverse map D = Q / (2(1-Q)); rejects Q >= 0.5.
double disturbance_from_qber(double q);

AttackUnitaryState build_attack(double d);

/// Minimum-error (Helstrom) measurement on the 3-dimensional ancilla:
/// eigendecomposition of rho_E^{t=0} - rho_E^{t=1}, outcome probabilities
/// under rho_E, Bayesian posteriors, and the resulting mutual information
/// after Alice's optional bit flip with probability q.
HelstromResult helstrom_info(const AttackUnitaryState& s, Target target,
                             double q);

struct UpperRate {
    double r_sk = 0.0;
    double q_opt = 0.0;
};

/// Csiszar-Korner bound max_q [1 - h(Q') - I(A':E)] against this attack.
UpperRate upper_rate(double qber, bool optimize_q);

/// QBER where the upper bound crosses zero, bisected on [0.10, 0.20].
double upper_threshold(bool optimize_q);

/// QBER of a depolarizing channel of visibility V: (1-V)/2 for BB84,
/// (1-V)/(2-V) for either SARG04 variant.
double visibility_qber(Protocol p, double v);

}  // namespace qkd
