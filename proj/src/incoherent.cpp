#include "qkd/incoherent.hpp"

#include <cmath>
#include <stdexcept>

#include "qkd/optimize.hpp"

namespace qkd {

double qber_from_disturbance(double d) {
    if (d < 0.0 || d > 0.5)
        throw std::domain_error("qber_from_disturbance: D outside [0, 0.5]");
    return d / (0.5 + d);
}

double disturbance_from_qber(double q) {
    if (q < 0.0 || q >= 0.5)
        throw std::domain_error("disturbance_from_qber: no valid D for Q >= 0.5");
    return q / (2.0 * (1.0 - q));
}

AttackUnitaryState build_attack(double d) {
    if (d < 0.0 || d > 0.5)
        throw std::domain_error("build_attack: D outside [0, 0.5]");
    AttackUnitaryState s;
    s.disturbance = d;
    const double a = std::sqrt(std::max(0.0, (1.0 - 2.0 * d) / 2.0));
    const double b = std::sqrt(d / 2.0);
    const double r = std::sqrt(d);
    // basis order within the span: |00>, |01>, |10>
    s.eve_vectors[0] = {a, b, -b};   // psi_00 = (sqrt(1-2D)|00> + sqrt(2D)|Psi->)/sqrt2
    s.eve_vectors[1] = {0.0, 0.0, r};  // psi_01 = sqrt(D)|10>
    s.eve_vectors[2] = {0.0, r, 0.0};  // psi_10 = sqrt(D)|01>
    s.eve_vectors[3] = {a, -b, b};
    return s;
}

namespace {

SymMatrix outer_sum(const std::array<double, 3>& u,
                    const std::array<double, 3>& v, double norm) {
    SymMatrix m = SymMatrix::zero(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            m.set(i, j, (u[i] * u[j] + v[i] * v[j]) / norm);
    return m;
}

double expectation(const SymMatrix& m, const double* v) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) acc += v[i] * m(i, j) * v[j];
    return acc;
}

}  // namespace

HelstromResult helstrom_info(const AttackUnitaryState& s, Target target,
                             double q) {
    if (q < 0.0 || q > 0.5)
        throw std::invalid_argument("helstrom_info: q outside [0, 0.5]");
    const double d = s.disturbance;
    const double norm = 0.5 + d;

    SymMatrix rho_t0 = SymMatrix::zero(3), rho_t1 = SymMatrix::zero(3);
    if (target == Target::Alice) {
        rho_t0 = outer_sum(s.vec(0, 0), s.vec(0, 1), norm);
        rho_t1 = outer_sum(s.vec(1, 0), s.vec(1, 1), norm);
    } else {
        rho_t0 = outer_sum(s.vec(0, 0), s.vec(1, 0), norm);
        rho_t1 = outer_sum(s.vec(0, 1), s.vec(1, 1), norm);
    }

    SymMatrix diff = SymMatrix::zero(3);
    SymMatrix rho_e = SymMatrix::zero(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            diff.set(i, j, rho_t0(i, j) - rho_t1(i, j));
            rho_e.set(i, j, 0.5 * (rho_t0(i, j) + rho_t1(i, j)));
        }

    const EigSym eig = eig_sym(diff);
    // eig is sorted descending: column 0 -> Plus, 1 -> Zero, 2 -> Minus.
    const int order[3] = {1, 0, 2};  // HelstromOutcome order {Zero, Plus, Minus}

    HelstromResult out;
    double info = 1.0;
    for (int e = 0; e < 3; ++e) {
        const int col = order[e];
        const double v[3] = {eig.vectors[0][col], eig.vectors[1][col],
                             eig.vectors[2][col]};
        const double pe = std::max(0.0, expectation(rho_e, v));
        // Vanishing outcomes carry no information; posterior 1/2 keeps the
        // pe*h term at its limit value 0.
        double posterior = 0.5;
        if (pe > 1e-15)
            posterior = std::clamp(0.5 * expectation(rho_t0, v) / pe, 0.0, 1.0);
        const double flipped = (1.0 - q) * posterior + q * (1.0 - posterior);
        out.outcome_probs[e] = pe;
        out.posteriors[e] = flipped;
        info -= pe * binary_entropy(flipped);
    }
    out.info = (info < 0.0 && info > -1e-12) ? 0.0 : info;
    return out;
}

UpperRate upper_rate(double qber, bool optimize_q) {
    if (qber < 0.0 || qber > 0.45)
        throw std::domain_error("upper_rate: qber outside [0, 0.45]");
    const AttackUnitaryState attack = build_attack(disturbance_from_qber(qber));

    auto rate_at = [&](double q) {
        const double qp = (1.0 - q) * qber + q * (1.0 - qber);
        return (1.0 - binary_entropy(qp)) -
               helstrom_info(attack, Target::Alice, q).info;
    };

    if (!optimize_q) return {rate_at(0.0), 0.0};

    double best_q = 0.0, best = rate_at(0.0);
    for (int i = 1; i < 100; ++i) {
        const double q = 0.005 * i;
        const double r = rate_at(q);
        if (r > best) {
            best = r;
            best_q = q;
        }
    }
    OptResult g = golden_max(rate_at, std::max(0.0, best_q - 0.005),
                             std::min(0.4999, best_q + 0.005), 1e-7);
    if (g.fx > best) return {g.fx, g.x};
    return {best, best_q};
}

double upper_threshold(bool optimize_q) {
    auto f = [&](double qber) { return upper_rate(qber, optimize_q).r_sk; };
    return bisect_zero(f, 0.10, 0.20, 1e-4);
}

double visibility_qber(Protocol p, double v) {
    if (v < 0.0 || v > 1.0)
        throw std::domain_error("visibility_qber: V outside [0, 1]");
    if (p == Protocol::Bb84) return (1.0 - v) / 2.0;
    return (1.0 - v) / (2.0 - v);
}

}  // namespace qkd
