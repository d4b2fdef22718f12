#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qkd/detection.hpp"
#include "qkd/linprog.hpp"
#include "qkd/qmath.hpp"

namespace qkd {

inline constexpr int kDefaultNmax = 7;

/// Eve's per-photon-number attack mix. Pulses with one photon are blocked
/// or attacked unitarily (probability p_u1, disturbance d_tilde); n = 2
/// pulses are blocked or stored; n = 3 pulses are stored or unambiguously
/// discriminated (p_i32 = p_I(3) r(2|3) is the joint probability of a USD
/// attack that forwards two photons); n >= 4 pulses are stored or USD'd
/// with two photons forwarded.
struct PnsStrategy {
    double p_u1 = 0.0;
    std::vector<double> p_s;  // storage probabilities, index 0 <-> n = 2
    double p_i32 = 0.0;
    double d_tilde = 0.0;
    int n_max = kDefaultNmax;

    double storage_prob(int n) const;  // p_S(n) for n in [2, n_max]
};

/// Photon-number distribution Eve forwards to Bob; support {0, 1, 2}.
struct ForwardDistribution {
    std::array<double, 3> p_fwd{};
};

/// I(A':E) split by attack channel.
struct AttackInfoBreakdown {
    double total = 0.0;
    double u_term = 0.0;
    std::vector<double> s_terms;  // storage, n = 2..n_max
    double i3_term = 0.0;         // USD on three-photon pulses
    std::vector<double> i_terms;  // USD, n = 4..n_max
};

/// Storage-attack information 1 - h((1-q) p_k + q(1-p_k)) with
/// p_k = 1/2 + sqrt(1 - 2^{-k})/2 for k stored photons.
double storage_info(int stored_photons, double q);

/// Success probability of unambiguous discrimination on n >= 3 copies:
/// 1 - (1/2)^floor((n-1)/2).
double usd_success(int n);

/// The linear system Eve's parameters must satisfy: two count-rate
/// equalities, the error-budget equality pinning p_u1 when V < 1, the
/// forward-compatibility inequalities, and unit-box bounds. Variable order:
/// p_u1, p_s2, p_s3, p_i32, p_s4..p_s(n_max).
struct PnsConstraintSystem {
    BoxedLp lp;  // objective left zero; filled in by the optimizer
    double e1_rhs = 0.0;
    double e2_rhs = 0.0;
    double e3_rhs = 0.0;
    double pinned_p_u1 = -1.0;  // set when V < 1 fixes p_u1 at this d_tilde
    bool feasible = false;
    PhotonDistribution photon;  // source distribution up to n_max
};

PnsConstraintSystem constraint_system(const OpticalSetup& s, double d_tilde,
                                      int n_max = kDefaultNmax);

ForwardDistribution forward_distribution(const OpticalSetup& s,
                                         const PnsStrategy& strategy);

/// Eve's information for an explicit strategy; throws on invalid strategies.
AttackInfoBreakdown eve_info(const OpticalSetup& s, const PnsStrategy& strategy,
                             double q);

struct PnsOptimum {
    PnsStrategy strategy;
    AttackInfoBreakdown info;
};

/// Maximizes I(A':E) under the constraint system. For V = 1 this is a single
/// linear program; for V < 1 an outer scan over d_tilde (500 points, then
/// golden-section) with p_u1 fixed by the error budget at each point.
/// Returns nullopt when no strategy satisfies the constraints.
std::optional<PnsOptimum> maximize_eve(const OpticalSetup& s, double q,
                                       int n_max = kDefaultNmax);

/// Distance-free diagnostics of the optimal attack structure: the gain
/// curve K(d_tilde) for the unitary channel and the storage-vs-USD margins
/// L(n); argmax K is the disturbance Eve concentrates on attacked singles.
struct AnalyticAttackOracle {
    std::vector<std::pair<double, double>> k_curve;  // (d_tilde, K)
    std::vector<double> l_values;                    // L(n), n = 3..n_max
    double d_tilde_star = 0.0;
};

AnalyticAttackOracle analytic_oracle(const OpticalSetup& s,
                                     int n_max = kDefaultNmax);

}  // namespace qkd
