#pragma once

#include <vector>

#include "qkd/pns.hpp"

namespace qkd {

struct SweepParams {
    double alpha_db_km = 0.25;
    double eta = 0.1;
    double p_dark = 1e-5;
    double visibility = 1.0;
    bool allow_preprocessing = true;
    int n_max = kDefaultNmax;
};

/// Per-distance optimization result. `feasible` reports whether any mean
/// photon number admits a constraint-satisfying attack; `past_limit` marks
/// feasible points whose best rate is not positive.
struct SweepRecord {
    double distance_km = 0.0;
    double mu_opt = 0.0;
    double q_opt = 0.0;
    double r_sk = 0.0;
    double qber = 0.0;
    PnsStrategy eve_strategy;
    bool feasible = false;
    bool past_limit = false;
};

/// Maximizes R_sk = I(A':B) - I(A':E) over mu in [0.01, 3] (120-point log
/// scan plus golden refinement) and, when enabled, over the preprocessing
/// flip probability q (scan plus refinement, alternating with mu).
SweepRecord optimize_point(double distance_km, const SweepParams& params);

/// Independent optimize_point per distance; points are evaluated in
/// parallel (threads = 0 picks the hardware count) and assembled by index,
/// so the output does not depend on completion order.
std::vector<SweepRecord> sweep(double d_min, double d_max, double step,
                               const SweepParams& params, unsigned threads = 0);

/// Closed-form estimates: mu ~ 2 sqrt(t), rate ~ (eta/3)(1 - I_S(1)) t^{3/2},
/// the critical mu = 2 sqrt(3t), and the semi-analytic one-dimensional model
/// maximized numerically over mu.
struct ApproxModel {
    double mu_approx = 0.0;
    double r_approx = 0.0;
    double mu_critical = 0.0;
    double semi_mu_opt = 0.0;
    double semi_r_sk = 0.0;
};

ApproxModel approx_point(double distance_km, const SweepParams& params);

/// Single-photon bound table row at one QBER, with the visibilities that
/// would produce that QBER on a depolarizing channel.
struct CompareRow {
    double qber = 0.0;
    double lower_sarg04 = 0.0;
    double lower_bb84 = 0.0;
    double upper_sarg04 = 0.0;
    double vis_sarg04 = 0.0;
    double vis_bb84 = 0.0;
};

std::vector<CompareRow> comparison_table(const std::vector<double>& qber_grid,
                                         bool allow_preprocessing = true);

struct VisibilityRow {
    double visibility = 0.0;
    double qber_sarg04 = 0.0;
    double qber_bb84 = 0.0;
};

std::vector<VisibilityRow> visibility_table(const std::vector<double>& grid);

/// Last swept distance with a positive rate (r_sk > 1e-12); 0 when none.
double limiting_distance(const std::vector<SweepRecord>& records);

/// Post-hoc check that mu_opt and r_sk decrease with distance over the
/// positive-rate region, within a relative slack for optimizer noise.
bool monotone_decreasing(const std::vector<SweepRecord>& records,
                         double rel_tol = 0.02);

}  // namespace qkd
