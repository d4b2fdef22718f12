#include "qkd/lower_bound.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qkd/optimize.hpp"

namespace qkd {

bool BellDiagonalState::valid(double tol) const {
    double sum = 0.0;
    for (double l : lambda) {
        if (l < -tol) return false;
        sum += l;
    }
    return std::abs(sum - 1.0) <= tol;
}

namespace {

// Entropy of the 2x2 block [[a, c], [c, b]] through its eigenvalues.
double block_entropy(double a, double b, double c) {
    const double m = 0.5 * (a + b);
    const double r = std::sqrt(0.25 * (a - b) * (a - b) + c * c);
    return entropy_term(std::max(0.0, m + r)) +
           entropy_term(std::max(0.0, m - r));
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double rate_R(const BellDiagonalState& s, double q) {
    if (!s.valid(1e-9)) throw std::invalid_argument("rate_R: invalid lambdas");
    if (q < 0.0 || q > 0.5) throw std::invalid_argument("rate_R: q outside [0,0.5]");

    const double l1 = std::max(0.0, s.lambda[0]);
    const double l2 = std::max(0.0, s.lambda[1]);
    const double l3 = std::max(0.0, s.lambda[2]);
    const double l4 = std::max(0.0, s.lambda[3]);

    const double s_rho_e =
        entropy_term(l1) + entropy_term(l2) + entropy_term(l3) + entropy_term(l4);

    // sigma0_E = (1-q) rho0_E + q rho1_E keeps the block structure with the
    // off-diagonal scaled by (1-2q); sigma1_E flips its sign.
    const double c12 = std::sqrt(l1 * l2), c34 = std::sqrt(l3 * l4);
    const double k = 1.0 - 2.0 * q;
    const double s_sigma0_e =
        block_entropy(l1, l2, k * c12) + block_entropy(l3, l4, k * c34);
    const double s_sigma1_e =
        block_entropy(l1, l2, -k * c12) + block_entropy(l3, l4, -k * c34);

    const double big_q = l3 + l4;
    const double qp = (1.0 - q) * big_q + q * (1.0 - big_q);
    const double s_sigma0_b = binary_entropy(qp);
    const double s_sigma1_b = binary_entropy(1.0 - qp);

    return 1.0 - s_rho_e +
           0.5 * (s_sigma0_e + s_sigma1_e - s_sigma0_b - s_sigma1_b);
}

namespace {

BellDiagonalState sarg_four_set_state(double qber, double x) {
    return BellDiagonalState{
        {1.0 - qber - x, x, x - 0.5 * qber, 1.5 * qber - x}};
}

BellDiagonalState bb84_state(double qber, double l4) {
    const double l3 = qber - l4;
    return BellDiagonalState{{1.0 - qber - l3, l3, l3, l4}};
}

PreprocessedRate inf_four_set(double qber, double q) {
    PreprocessedRate out;
    out.q = q;
    const double lo = 0.5 * qber, hi = qber;
    if (hi - lo < 1e-15) {
        out.lambda_star = sarg_four_set_state(qber, lo);
        out.rate = rate_R(out.lambda_star, q);
        return out;
    }
    auto f = [&](double x) { return rate_R(sarg_four_set_state(qber, x), q); };
    OptResult r = scan_golden_min(f, lo, hi, 200, 1e-10);
    out.lambda_star = sarg_four_set_state(qber, r.x);
    out.rate = r.fx;
    return out;
}

PreprocessedRate inf_bb84(double qber, double q) {
    PreprocessedRate out;
    out.q = q;
    if (qber < 1e-15) {
        out.lambda_star = bb84_state(0.0, 0.0);
        out.rate = rate_R(out.lambda_star, q);
        return out;
    }
    auto f = [&](double l4) { return rate_R(bb84_state(qber, l4), q); };
    OptResult r = scan_golden_min(f, 0.0, qber, 200, 1e-10);
    out.lambda_star = bb84_state(qber, r.x);
    out.rate = r.fx;
    return out;
}

// Two-set feasible region: lambda2 in [0, 1-Q], lambda4 in
// [lambda2/2, min(2 lambda2, Q)], with lambda1, lambda3 fixed by
// normalization and the QBER.
bool two_set_state(double qber, double l2, double l4, BellDiagonalState* s) {
    const double tol = 1e-12;
    if (l2 < -tol || l2 > 1.0 - qber + tol) return false;
    if (l4 < 0.5 * l2 - tol || l4 > std::min(2.0 * l2, qber) + tol) return false;
    const double l1 = 1.0 - qber - l2;
    const double l3 = qber - l4;
    if (l1 < -tol || l3 < -tol) return false;
    *s = BellDiagonalState{{std::max(0.0, l1), std::max(0.0, l2),
                            std::max(0.0, l3), std::max(0.0, l4)}};
    return true;
}

PreprocessedRate inf_two_set(double qber, double q) {
    PreprocessedRate out;
    out.q = q;
    if (qber < 1e-15) {
        out.lambda_star = BellDiagonalState{{1.0, 0.0, 0.0, 0.0}};
        out.rate = rate_R(out.lambda_star, q);
        return out;
    }

    auto eval = [&](double l2, double l4) {
        BellDiagonalState s;
        if (!two_set_state(qber, l2, l4, &s)) return kInf;
        return rate_R(s, q);
    };

    const double l2_hi = std::min(1.0 - qber, 2.0 * qber);
    constexpr int kGrid = 100;
    double best = kInf, best_l2 = 0.0, best_l4 = 0.0;
    for (int i = 0; i < kGrid; ++i) {
        const double l2 = l2_hi * (i + 0.5) / kGrid;
        const double l4_lo = 0.5 * l2;
        const double l4_hi = std::min(2.0 * l2, qber);
        if (l4_hi < l4_lo) continue;
        for (int j = 0; j < kGrid; ++j) {
            const double l4 = l4_lo + (l4_hi - l4_lo) * j / (kGrid - 1.0);
            const double f = eval(l2, l4);
            if (f < best) {
                best = f;
                best_l2 = l2;
                best_l4 = l4;
            }
        }
    }

    NmResult nm = nelder_mead_2d(eval, best_l2, best_l4, 0.01 * l2_hi,
                                 0.01 * qber, 1e-12, 400);
    if (nm.f < best) {
        best = nm.f;
        best_l2 = nm.x0;
        best_l4 = nm.x1;
    }
    BellDiagonalState s;
    two_set_state(qber, best_l2, best_l4, &s);
    out.lambda_star = s;
    out.rate = best;
    return out;
}

PreprocessedRate inf_rate(Protocol p, double qber, double q) {
    switch (p) {
        case Protocol::Sarg04FourSet: return inf_four_set(qber, q);
        case Protocol::Sarg04TwoSet: return inf_two_set(qber, q);
        case Protocol::Bb84: return inf_bb84(qber, q);
    }
    throw std::logic_error("inf_rate: unknown protocol");
}

}  // namespace

PreprocessedRate worst_case_rate(Protocol protocol, double qber, double q) {
    if (qber < 0.0 || qber > 0.3)
        throw std::domain_error("worst_case_rate: qber outside [0, 0.3]");
    return inf_rate(protocol, qber, q);
}

PreprocessedRate r1_bound(Protocol protocol, double qber,
                          bool allow_preprocessing) {
    if (qber < 0.0 || qber > 0.3)
        throw std::domain_error("r1_bound: qber outside [0, 0.3]");
    if (!allow_preprocessing) return inf_rate(protocol, qber, 0.0);

    // sup over q: coarse scan {0, 0.005, ..., 0.495}, then golden refinement.
    double best_q = 0.0, best_rate = -kInf;
    for (int i = 0; i < 100; ++i) {
        const double q = 0.005 * i;
        const double r = inf_rate(protocol, qber, q).rate;
        if (r > best_rate) {
            best_rate = r;
            best_q = q;
        }
    }
    auto f = [&](double q) { return inf_rate(protocol, qber, q).rate; };
    const double lo = std::max(0.0, best_q - 0.005);
    const double hi = std::min(0.4999, best_q + 0.005);
    OptResult g = golden_max(f, lo, hi, 1e-7);
    const double q_opt = g.fx > best_rate ? g.x : best_q;
    return inf_rate(protocol, qber, q_opt);
}

double qber_threshold(Protocol protocol, bool allow_preprocessing) {
    auto f = [&](double qber) {
        return r1_bound(protocol, qber, allow_preprocessing).rate;
    };
    return bisect_zero(f, 0.02, 0.2, 1e-4);
}

}  // namespace qkd
