#include "qkd/pns.hpp"

#include <cmath>
#include <stdexcept>

#include "qkd/incoherent.hpp"
#include "qkd/optimize.hpp"

namespace qkd {

double PnsStrategy::storage_prob(int n) const {
    if (n < 2 || n > n_max)
        throw std::out_of_range("PnsStrategy: n outside [2, n_max]");
    return p_s[n - 2];
}

double storage_info(int stored_photons, double q) {
    if (stored_photons < 1)
        throw std::domain_error("storage_info: need at least one stored photon");
    if (q < 0.0 || q > 0.5) throw std::domain_error("storage_info: bad q");
    const double pk =
        0.5 + 0.5 * std::sqrt(1.0 - std::pow(0.5, stored_photons));
    const double pk_flipped = (1.0 - q) * pk + q * (1.0 - pk);
    return 1.0 - binary_entropy(pk_flipped);
}

double usd_success(int n) {
    if (n < 3) throw std::domain_error("usd_success: defined for n >= 3");
    return 1.0 - std::pow(0.5, (n - 1) / 2);
}

namespace {

void check_n_max(int n_max) {
    if (n_max < 3 || n_max > 10)
        throw std::invalid_argument("n_max outside [3, 10]");
}

int var_count(int n_max) { return n_max + 1; }  // p_u1, p_s2, p_s3, p_i32, p_s4..

constexpr int kU1 = 0, kS2 = 1, kS3 = 2, kI32 = 3, kS4 = 4;

}  // namespace

PnsConstraintSystem constraint_system(const OpticalSetup& s, double d_tilde,
                                      int n_max) {
    check_n_max(n_max);
    if (d_tilde < 0.0 || d_tilde > 0.5)
        throw std::domain_error("constraint_system: d_tilde outside [0, 0.5]");
    if (s.visibility < 1.0 && d_tilde <= 0.0)
        throw std::domain_error(
            "constraint_system: V < 1 requires a positive d_tilde");

    PnsConstraintSystem cs;
    cs.photon = poisson_distribution(s.mu, n_max);
    const auto& p = cs.photon.probs;
    const double mt = s.mu * s.transmission();
    const double x = mt * s.eta;

    cs.e1_rhs = mt - mt * mt;
    cs.e2_rhs = 0.5 * mt * mt;
    cs.e3_rhs = std::exp(-x * s.fidelity()) - std::exp(-x);

    const int n = var_count(n_max);
    BoxedLp& lp = cs.lp;
    lp.n = n;
    lp.c.assign(n, 0.0);

    // Forwarded one-photon rate: storage always sends one photon on, a USD
    // success on n = 3 sends one unless two were chosen (p_i32).
    std::vector<double> e1(n, 0.0);
    e1[kU1] = p[1];
    e1[kS2] = p[2];
    e1[kS3] = 0.5 * p[3];
    e1[kI32] = -0.5 * p[3];
    for (int m = 4; m <= n_max; ++m) e1[kS4 + m - 4] = p[m];
    lp.eq_a.push_back(e1);
    lp.eq_b.push_back(cs.e1_rhs - 0.5 * p[3]);

    // Forwarded two-photon rate: USD successes that send two photons on.
    std::vector<double> e2(n, 0.0);
    e2[kI32] = 0.5 * p[3];
    double usd_full = 0.0;
    for (int m = 4; m <= n_max; ++m) {
        const double w = p[m] * usd_success(m);
        e2[kS4 + m - 4] = -w;
        usd_full += w;
    }
    lp.eq_a.push_back(e2);
    lp.eq_b.push_back(cs.e2_rhs - usd_full);

    if (s.visibility < 1.0) {
        const double denom = p[1] * s.eta * d_tilde;
        cs.pinned_p_u1 = denom > 0.0 ? cs.e3_rhs / denom : 2.0;
        if (cs.pinned_p_u1 < -1e-12 || cs.pinned_p_u1 > 1.0 + 1e-12) {
            cs.feasible = false;
            return cs;  // this d_tilde cannot reproduce the observed error
        }
        std::vector<double> pin(n, 0.0);
        pin[kU1] = 1.0;
        lp.eq_a.push_back(pin);
        lp.eq_b.push_back(cs.pinned_p_u1);
    }

    std::vector<double> g1(n, 0.0), g2(n, 0.0);
    g1[kS2] = 1.0;
    g1[kI32] = 1.0;  // p_S(2) + p_I(3,2) <= 1
    g2[kS3] = 1.0;
    g2[kI32] = 1.0;  // r(2|3) <= 1, i.e. p_I(3,2) <= 1 - p_S(3)
    lp.ineq_g = {g1, g2};
    lp.ineq_h = {1.0, 1.0};

    cs.feasible = lp_feasible(lp);
    return cs;
}

namespace {

PnsStrategy strategy_from_vertex(const std::vector<double>& x, double d_tilde,
                                 int n_max) {
    PnsStrategy st;
    st.n_max = n_max;
    st.d_tilde = d_tilde;
    st.p_u1 = x[kU1];
    st.p_s.assign(n_max - 1, 0.0);
    st.p_s[0] = x[kS2];
    st.p_s[1] = x[kS3];
    st.p_i32 = x[kI32];
    for (int m = 4; m <= n_max; ++m) st.p_s[m - 2] = x[kS4 + m - 4];
    return st;
}

void validate_strategy(const PnsStrategy& st) {
    const double tol = 1e-9;
    auto in_unit = [&](double v) { return v >= -tol && v <= 1.0 + tol; };
    if (!in_unit(st.p_u1) || !in_unit(st.p_i32))
        throw std::invalid_argument("PnsStrategy: probability outside [0, 1]");
    if (st.d_tilde < -tol || st.d_tilde > 0.5 + tol)
        throw std::invalid_argument("PnsStrategy: d_tilde outside [0, 0.5]");
    if (static_cast<int>(st.p_s.size()) != st.n_max - 1)
        throw std::invalid_argument("PnsStrategy: p_s size mismatch");
    for (double v : st.p_s)
        if (!in_unit(v))
            throw std::invalid_argument("PnsStrategy: probability outside [0, 1]");
    if (st.storage_prob(2) + st.p_i32 > 1.0 + tol)
        throw std::invalid_argument("PnsStrategy: p_S(2) + p_I(3,2) > 1");
    if (st.storage_prob(3) + st.p_i32 > 1.0 + tol)
        throw std::invalid_argument("PnsStrategy: r(2|3) > 1");
}

double unitary_info(double d_tilde, double q) {
    if (d_tilde <= 0.0) return 0.0;
    return helstrom_info(build_attack(d_tilde), Target::Alice, q).info;
}

}  // namespace

ForwardDistribution forward_distribution(const OpticalSetup& s,
                                         const PnsStrategy& st) {
    validate_strategy(st);
    const auto p = poisson_distribution(s.mu, st.n_max).probs;
    ForwardDistribution f;
    double one = p[1] * st.p_u1 + p[2] * st.storage_prob(2) +
                 0.5 * p[3] * (1.0 - st.storage_prob(3) - st.p_i32) +
                 p[3] * st.storage_prob(3);
    double two = 0.5 * p[3] * st.p_i32;
    for (int m = 4; m <= st.n_max; ++m) {
        one += p[m] * st.storage_prob(m);
        two += p[m] * (1.0 - st.storage_prob(m)) * usd_success(m);
    }
    f.p_fwd = {1.0 - one - two, one, two};
    return f;
}

AttackInfoBreakdown eve_info(const OpticalSetup& s, const PnsStrategy& st,
                             double q) {
    validate_strategy(st);
    if (q < 0.0 || q > 0.5) throw std::invalid_argument("eve_info: bad q");

    const auto p = poisson_distribution(s.mu, st.n_max).probs;
    const double acc1 = p_acc(1, 1.0, s);
    const double acc2 = p_acc(2, 1.0, s);
    const double i_i = 1.0 - binary_entropy(q);

    AttackInfoBreakdown b;
    b.u_term = p[1] * st.p_u1 * unitary_info(st.d_tilde, q) *
               p_acc(1, 1.0 - 2.0 * st.d_tilde, s);
    b.s_terms.resize(st.n_max - 1);
    for (int m = 2; m <= st.n_max; ++m)
        b.s_terms[m - 2] =
            p[m] * st.storage_prob(m) * storage_info(m - 1, q) * acc1;
    const double usd3_one = (1.0 - st.storage_prob(3)) - st.p_i32;
    b.i3_term = 0.5 * p[3] * i_i * (usd3_one * acc1 + st.p_i32 * acc2);
    b.i_terms.resize(std::max(0, st.n_max - 3));
    for (int m = 4; m <= st.n_max; ++m)
        b.i_terms[m - 4] = p[m] * (1.0 - st.storage_prob(m)) * usd_success(m) *
                           i_i * acc2;

    b.total = b.u_term + b.i3_term;
    for (double v : b.s_terms) b.total += v;
    for (double v : b.i_terms) b.total += v;
    return b;
}

namespace {

// Linear objective of the constrained maximization; the additive constant
// collects the strategy-independent USD contributions.
struct Objective {
    std::vector<double> c;
    double constant = 0.0;
};

Objective build_objective(const OpticalSetup& s, const PhotonDistribution& ph,
                          double d_tilde, double q, int n_max) {
    const auto& p = ph.probs;
    const double acc1 = p_acc(1, 1.0, s);
    const double acc2 = p_acc(2, 1.0, s);
    const double i_i = 1.0 - binary_entropy(q);

    Objective obj;
    obj.c.assign(var_count(n_max), 0.0);
    obj.c[kU1] = p[1] * unitary_info(d_tilde, q) *
                 p_acc(1, 1.0 - 2.0 * d_tilde, s);
    obj.c[kS2] = p[2] * storage_info(1, q) * acc1;
    obj.c[kS3] = p[3] * (storage_info(2, q) - 0.5 * i_i) * acc1;
    obj.c[kI32] = 0.5 * p[3] * i_i * (acc2 - acc1);
    obj.constant = 0.5 * p[3] * i_i * acc1;
    for (int m = 4; m <= n_max; ++m) {
        const double pok = usd_success(m);
        obj.c[kS4 + m - 4] =
            p[m] * (storage_info(m - 1, q) * acc1 - pok * i_i * acc2);
        obj.constant += p[m] * pok * i_i * acc2;
    }
    return obj;
}

}  // namespace

std::optional<PnsOptimum> maximize_eve(const OpticalSetup& s, double q,
                                       int n_max) {
    check_n_max(n_max);
    if (q < 0.0 || q > 0.5) throw std::invalid_argument("maximize_eve: bad q");

    auto solve_at = [&](double d_tilde) -> std::optional<PnsOptimum> {
        PnsConstraintSystem cs = constraint_system(s, d_tilde, n_max);
        if (!cs.feasible) return std::nullopt;
        Objective obj = build_objective(s, cs.photon, d_tilde, q, n_max);
        cs.lp.c = obj.c;
        auto vertex = lp_solve_enumerate(cs.lp);
        if (!vertex) return std::nullopt;
        PnsOptimum opt;
        opt.strategy = strategy_from_vertex(vertex->x, d_tilde, n_max);
        opt.info = eve_info(s, opt.strategy, q);
        return opt;
    };

    if (s.visibility >= 1.0) return solve_at(0.0);

    // Outer scan over the concentrated single-photon disturbance.
    constexpr int kScan = 500;
    double best_d = -1.0, best_val = 0.0;
    for (int i = 0; i < kScan; ++i) {
        const double d = 0.001 + (0.5 - 0.001) * i / (kScan - 1);
        auto opt = solve_at(d);
        if (opt && (best_d < 0.0 || opt->info.total > best_val)) {
            best_val = opt->info.total;
            best_d = d;
        }
    }
    if (best_d < 0.0) return std::nullopt;

    const double step = (0.5 - 0.001) / (kScan - 1);
    auto value_at = [&](double d) {
        auto opt = solve_at(d);
        return opt ? opt->info.total
                   : -std::numeric_limits<double>::infinity();
    };
    OptResult refined =
        golden_max(value_at, std::max(0.001, best_d - step),
                   std::min(0.5, best_d + step), 1e-5);
    const double d_star =
        std::isfinite(refined.fx) && refined.fx > best_val ? refined.x : best_d;
    return solve_at(d_star);
}

AnalyticAttackOracle analytic_oracle(const OpticalSetup& s, int n_max) {
    check_n_max(n_max);
    AnalyticAttackOracle oracle;
    const double acc1 = p_acc(1, 1.0, s);
    const double is1 = storage_info(1, 0.0);

    auto k_of = [&](double d) {
        const double ratio = p_acc(1, 1.0 - 2.0 * d, s) / acc1;
        return (ratio * unitary_info(d, 0.0) - is1) / d;
    };

    constexpr int kScan = 600;
    oracle.k_curve.reserve(kScan);
    for (int i = 0; i < kScan; ++i) {
        const double d = 0.001 + (0.5 - 0.001) * i / (kScan - 1);
        oracle.k_curve.emplace_back(d, k_of(d));
    }
    OptResult best = scan_golden_max(k_of, 0.001, 0.5, kScan, 1e-6);
    oracle.d_tilde_star = best.x;

    for (int m = 3; m <= n_max; ++m)
        oracle.l_values.push_back(storage_info(m - 1, 0.0) - is1 -
                                  usd_success(m) * (1.0 - is1));
    return oracle;
}

}  // namespace qkd
