#include "qkd/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qkd/incoherent.hpp"
#include "qkd/lower_bound.hpp"
#include "qkd/optimize.hpp"

namespace qkd {

namespace {

constexpr double kMuLo = 0.01, kMuHi = 3.0;
constexpr int kMuScan = 120;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

OpticalSetup make_setup(double distance_km, const SweepParams& p, double mu) {
    OpticalSetup s;
    s.alpha_db_km = p.alpha_db_km;
    s.distance_km = distance_km;
    s.visibility = p.visibility;
    s.eta = p.eta;
    s.p_dark = p.p_dark;
    s.mu = mu;
    return s;
}

struct PointEval {
    double r_sk = kNegInf;
    std::optional<PnsOptimum> eve;
};

PointEval eval_point(double distance_km, const SweepParams& p, double mu,
                     double q) {
    PointEval e;
    if (mu <= 0.0) return e;
    const OpticalSetup s = make_setup(distance_km, p, mu);
    e.eve = maximize_eve(s, q, p.n_max);
    if (!e.eve) return e;
    e.r_sk = info_ab(s, q) - e.eve->info.total;
    return e;
}

}  // namespace

SweepRecord optimize_point(double distance_km, const SweepParams& params) {
    SweepRecord rec;
    rec.distance_km = distance_km;

    auto rate_at = [&](double mu, double q) {
        return eval_point(distance_km, params, mu, q).r_sk;
    };

    // Log-scale scan over mu at q = 0.
    const double log_lo = std::log(kMuLo), log_hi = std::log(kMuHi);
    double best_mu = 0.0, best_rate = kNegInf;
    for (int i = 0; i < kMuScan; ++i) {
        const double mu = std::exp(log_lo + (log_hi - log_lo) * i / (kMuScan - 1));
        const double r = rate_at(mu, 0.0);
        if (r > best_rate) {
            best_rate = r;
            best_mu = mu;
        }
    }
    if (!std::isfinite(best_rate)) return rec;  // infeasible at every mu

    const double log_step = (log_hi - log_lo) / (kMuScan - 1);
    auto refine_mu = [&](double mu0, double q) {
        OptResult r = golden_max([&](double mu) { return rate_at(mu, q); },
                                 std::max(kMuLo, mu0 * std::exp(-log_step)),
                                 std::min(kMuHi, mu0 * std::exp(log_step)), 1e-4);
        return r;
    };
    OptResult mu_ref = refine_mu(best_mu, 0.0);
    if (mu_ref.fx > best_rate) {
        best_rate = mu_ref.fx;
        best_mu = mu_ref.x;
    }

    double best_q = 0.0;
    if (params.allow_preprocessing) {
        // Coordinate refinement: scan q at the current mu, then re-refine.
        for (int round = 0; round < 2; ++round) {
            double q_scan_best = best_q, q_scan_rate = best_rate;
            for (int i = 0; i < 25; ++i) {
                const double q = 0.02 * i;
                const double r = rate_at(best_mu, q);
                if (r > q_scan_rate) {
                    q_scan_rate = r;
                    q_scan_best = q;
                }
            }
            OptResult qr = golden_max(
                [&](double q) { return rate_at(best_mu, q); },
                std::max(0.0, q_scan_best - 0.02),
                std::min(0.4999, q_scan_best + 0.02), 1e-4);
            if (qr.fx > q_scan_rate) {
                q_scan_rate = qr.fx;
                q_scan_best = qr.x;
            }
            if (q_scan_rate <= best_rate + 1e-12) break;  // q = 0 already optimal
            best_rate = q_scan_rate;
            best_q = q_scan_best;
            OptResult mu2 = refine_mu(best_mu, best_q);
            if (mu2.fx > best_rate) {
                best_rate = mu2.fx;
                best_mu = mu2.x;
            }
        }
    }

    PointEval final = eval_point(distance_km, params, best_mu, best_q);
    if (!final.eve) return rec;  // should not happen once feasible
    rec.feasible = true;
    rec.mu_opt = best_mu;
    rec.q_opt = best_q;
    rec.r_sk = final.r_sk;
    rec.eve_strategy = final.eve->strategy;
    rec.qber = rates(make_setup(distance_km, params, best_mu)).qber;
    rec.past_limit = rec.r_sk <= 1e-12;
    return rec;
}

std::vector<SweepRecord> sweep(double d_min, double d_max, double step,
                               const SweepParams& params, unsigned threads) {
    if (step <= 0.0 || d_max < d_min)
        throw std::invalid_argument("sweep: bad distance range");
    std::vector<double> distances;
    for (double d = d_min; d <= d_max + 1e-9; d += step) distances.push_back(d);

    std::vector<SweepRecord> out(distances.size());
    if (threads == 0) threads = std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, distances.size()));

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= distances.size()) break;
            out[i] = optimize_point(distances[i], params);
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return out;
}

ApproxModel approx_point(double distance_km, const SweepParams& params) {
    ApproxModel m;
    const OpticalSetup base = make_setup(distance_km, params, 1.0);
    const double t = base.transmission();
    const double is1 = storage_info(1, 0.0);
    m.mu_approx = 2.0 * std::sqrt(t);
    m.r_approx = params.eta / 3.0 * (1.0 - is1) * std::pow(t, 1.5);
    m.mu_critical = 2.0 * std::sqrt(3.0 * t);

    // Semi-analytic model: leading-order detection rate against the storage
    // and USD contributions, maximized over mu.
    auto semi_rate = [&](double mu) {
        const double mte = mu * t * params.eta;
        const double q_det = 1.0 / (2.0 + mte / (2.0 * params.p_dark));
        double i_ab = (0.25 * mte + params.p_dark) *
                      (1.0 - binary_entropy(q_det));
        double i_ae = mu * t * is1 +
                      0.5 * poisson_pmf(3, mu) * (1.0 - is1);
        for (int n = 4; n <= params.n_max; ++n)
            i_ae += poisson_pmf(n, mu) * (storage_info(n - 1, 0.0) - is1);
        return i_ab - 0.25 * params.eta * i_ae;
    };
    OptResult r = scan_golden_max(semi_rate, kMuLo, kMuHi, 400, 1e-6);
    m.semi_mu_opt = r.x;
    m.semi_r_sk = r.fx;
    return m;
}

std::vector<CompareRow> comparison_table(const std::vector<double>& qber_grid,
                                         bool allow_preprocessing) {
    std::vector<CompareRow> rows;
    rows.reserve(qber_grid.size());
    for (double q : qber_grid) {
        CompareRow row;
        row.qber = q;
        row.lower_sarg04 =
            r1_bound(Protocol::Sarg04FourSet, q, allow_preprocessing).rate;
        row.lower_bb84 = r1_bound(Protocol::Bb84, q, allow_preprocessing).rate;
        row.upper_sarg04 = upper_rate(q, allow_preprocessing).r_sk;
        row.vis_sarg04 = q < 1.0 ? (1.0 - 2.0 * q) / (1.0 - q) : 0.0;
        row.vis_bb84 = 1.0 - 2.0 * q;
        rows.push_back(row);
    }
    return rows;
}

std::vector<VisibilityRow> visibility_table(const std::vector<double>& grid) {
    std::vector<VisibilityRow> rows;
    rows.reserve(grid.size());
    for (double v : grid)
        rows.push_back({v, visibility_qber(Protocol::Sarg04FourSet, v),
                        visibility_qber(Protocol::Bb84, v)});
    return rows;
}

double limiting_distance(const std::vector<SweepRecord>& records) {
    double lim = 0.0;
    for (const auto& r : records)
        if (r.feasible && r.r_sk > 1e-12) lim = std::max(lim, r.distance_km);
    return lim;
}

bool monotone_decreasing(const std::vector<SweepRecord>& records,
                         double rel_tol) {
    const SweepRecord* prev = nullptr;
    for (const auto& r : records) {
        if (!r.feasible || r.past_limit) continue;
        if (prev) {
            if (r.mu_opt > prev->mu_opt * (1.0 + rel_tol)) return false;
            if (r.r_sk > prev->r_sk * (1.0 + rel_tol)) return false;
        }
        prev = &r;
    }
    return true;
}

}  // namespace qkd
