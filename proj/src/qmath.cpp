#include "qkd/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkd {

const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Sarg04FourSet: return "sarg04";
        case Protocol::Sarg04TwoSet: return "sarg04-2set";
        case Protocol::Bb84: return "bb84";
    }
    return "?";
}

double entropy_term(double p) {
    if (p <= 0.0) return 0.0;
    return -p * std::log2(p);
}

double binary_entropy(double p) {
    if (p < -1e-12 || p > 1.0 + 1e-12)
        throw std::domain_error("binary_entropy: p outside [0,1]");
    p = std::clamp(p, 0.0, 1.0);
    return entropy_term(p) + entropy_term(1.0 - p);
}

double poisson_pmf(int n, double mu) {
    if (n < 0) throw std::domain_error("poisson_pmf: negative n");
    if (mu < 0.0) throw std::domain_error("poisson_pmf: negative mean");
    if (mu == 0.0) return n == 0 ? 1.0 : 0.0;
    if (n <= 20) {
        double p = std::exp(-mu);
        for (int k = 1; k <= n; ++k) p *= mu / k;
        return p;
    }
    return std::exp(n * std::log(mu) - mu - std::lgamma(n + 1.0));
}

PhotonDistribution poisson_distribution(double mu, int n_max) {
    if (n_max < 0) throw std::domain_error("poisson_distribution: n_max < 0");
    PhotonDistribution d;
    d.probs.resize(n_max + 1);
    double sum = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        d.probs[n] = poisson_pmf(n, mu);
        sum += d.probs[n];
    }
    d.tail = std::max(0.0, 1.0 - sum);
    return d;
}

SymMatrix SymMatrix::zero(int dim) {
    if (dim < 2 || dim > 4) throw std::domain_error("SymMatrix: dim must be 2..4");
    SymMatrix m;
    m.dim = dim;
    return m;
}

SymMatrix SymMatrix::identity(int dim) {
    SymMatrix m = zero(dim);
    for (int i = 0; i < dim; ++i) m.a[i][i] = 1.0;
    return m;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
    SymMatrix m = zero(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim; ++i) m.a[i][i] = d[i];
    return m;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < dim; ++i) t += a[i][i];
    return t;
}

namespace {

void sort_eigensystem(EigSym& e) {
    int idx[4] = {0, 1, 2, 3};
    std::sort(idx, idx + e.dim,
              [&](int i, int j) { return e.values[i] > e.values[j]; });
    EigSym out;
    out.dim = e.dim;
    for (int k = 0; k < e.dim; ++k) {
        out.values[k] = e.values[idx[k]];
        for (int r = 0; r < e.dim; ++r) out.vectors[r][k] = e.vectors[r][idx[k]];
    }
    e = out;
}

EigSym eig_sym_2x2(const SymMatrix& m) {
    EigSym e;
    e.dim = 2;
    const double a = m.a[0][0], b = m.a[1][1], c = m.a[0][1];
    if (c == 0.0) {
        e.values = {a, b, 0, 0};
        e.vectors[0][0] = 1.0;
        e.vectors[1][1] = 1.0;
    } else {
        const double tau = (b - a) / (2.0 * c);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        e.values = {a - t * c, b + t * c, 0, 0};
        e.vectors[0][0] = cs;
        e.vectors[1][0] = -sn;
        e.vectors[0][1] = sn;
        e.vectors[1][1] = cs;
    }
    sort_eigensystem(e);
    return e;
}

}  // namespace

EigSym eig_sym(const SymMatrix& m) {
    if (m.dim == 2) return eig_sym_2x2(m);

    const int n = m.dim;
    double a[4][4], v[4][4] = {};
    for (int i = 0; i < n; ++i) {
        v[i][i] = 1.0;
        for (int j = 0; j < n; ++j) a[i][j] = m.a[i][j];
    }

    constexpr double kThreshold = 1e-14;
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a[p][q]));
        if (off < kThreshold) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < kThreshold * 1e-2) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double app = a[p][p], aqq = a[q][q], apq = a[p][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = a[q][p] = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = a[p][k] = c * akp - s * akq;
                    a[k][q] = a[q][k] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    EigSym e;
    e.dim = n;
    for (int i = 0; i < n; ++i) {
        e.values[i] = a[i][i];
        for (int r = 0; r < n; ++r) e.vectors[r][i] = v[r][i];
    }
    sort_eigensystem(e);
    return e;
}

double von_neumann_entropy(const SymMatrix& m) {
    if (std::abs(m.trace() - 1.0) > 1e-9)
        throw std::domain_error("von_neumann_entropy: trace must be 1");
    EigSym e = eig_sym(m);
    double s = 0.0;
    for (int i = 0; i < e.dim; ++i) {
        if (e.values[i] < -1e-8)
            throw std::domain_error("von_neumann_entropy: matrix not PSD");
        s += entropy_term(std::max(0.0, e.values[i]));
    }
    return s;
}

bool TwoQubitState::is_valid(double tol) const {
    using cd = std::complex<double>;
    cd tr = 0.0;
    for (int i = 0; i < 4; ++i) {
        tr += at(i, i);
        for (int j = 0; j < 4; ++j)
            if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
    }
    if (std::abs(tr - 1.0) > tol) return false;

    // Cholesky of m + 1e-10*I succeeds iff eigenvalues >= -1e-10 (up to
    // rounding), which is the allowance we need.
    cd l[4][4] = {};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j <= i; ++j) {
            cd sum = at(i, j);
            if (i == j) sum += 1e-10;
            for (int k = 0; k < j; ++k) sum -= l[i][k] * std::conj(l[j][k]);
            if (i == j) {
                if (sum.real() < 0.0) return false;
                l[i][i] = std::sqrt(sum.real());
            } else {
                if (std::abs(l[j][j]) < 1e-30) {
                    if (std::abs(sum) > 1e-12) return false;
                    l[i][j] = 0.0;
                } else {
                    l[i][j] = sum / l[j][j];
                }
            }
        }
    }
    return true;
}

namespace {

// Bell basis as real column vectors over |00>,|01>,|10>,|11>.
constexpr double kInvSqrt2 = 0.70710678118654752440;
const double kBell[4][4] = {
    {kInvSqrt2, 0, 0, kInvSqrt2},    // Phi+
    {kInvSqrt2, 0, 0, -kInvSqrt2},   // Phi-
    {0, kInvSqrt2, kInvSqrt2, 0},    // Psi+
    {0, kInvSqrt2, -kInvSqrt2, 0},   // Psi-
};

double sandwich(const TwoQubitState& rho, const double v[4]) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) acc += v[i] * rho.at(i, j) * v[j];
    return acc.real();
}

struct Mat4 {
    double m[4][4] = {};
};

Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    k.m[2 * i + r][2 * j + c] = a.m[i][j] * b.m[r][c];
    return k;
}

// K rho K^T for a real operator K.
TwoQubitState conjugate_by(const Mat4& k, const TwoQubitState& rho) {
    std::complex<double> tmp[4][4] = {};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int l = 0; l < 4; ++l) tmp[i][j] += k.m[i][l] * rho.at(l, j);
    TwoQubitState out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::complex<double> acc = 0.0;
            for (int l = 0; l < 4; ++l) acc += tmp[i][l] * k.m[j][l];
            out.at(i, j) = acc;
        }
    return out;
}

const std::array<std::pair<int, int>, 4> kFourSets = {
    std::pair{+1, +1}, std::pair{-1, -1}, std::pair{+1, -1}, std::pair{-1, +1}};
const std::array<std::pair<int, int>, 2> kTwoSets = {std::pair{+1, +1},
                                                     std::pair{-1, -1}};

}  // namespace

Mat2 encoding_operator(int sigma, int omega) {
    Mat2 a;
    // row 0 = <sigma z|, row 1 = <omega x|
    if (sigma > 0)
        a.m[0][0] = 1.0;
    else
        a.m[0][1] = 1.0;
    a.m[1][0] = kInvSqrt2;
    a.m[1][1] = omega > 0 ? kInvSqrt2 : -kInvSqrt2;
    return a;
}

Mat2 decoding_operator(int sigma, int omega) {
    Mat2 b;
    // row 0 = sigma <-omega x| / sqrt2, row 1 = omega <-sigma z| / sqrt2
    b.m[0][0] = sigma * 0.5;
    b.m[0][1] = sigma * (-omega) * 0.5;
    if (sigma > 0)
        b.m[1][1] = omega * kInvSqrt2;
    else
        b.m[1][0] = omega * kInvSqrt2;
    return b;
}

std::array<double, 4> bell_diagonal(const TwoQubitState& rho) {
    return {sandwich(rho, kBell[0]), sandwich(rho, kBell[1]),
            sandwich(rho, kBell[2]), sandwich(rho, kBell[3])};
}

std::array<double, 4> sift_map(const TwoQubitState& rho0, Protocol protocol) {
    if (protocol == Protocol::Bb84)
        throw std::invalid_argument("sift_map: defined for the SARG04 variants");

    TwoQubitState rho1;
    auto accumulate = [&](int sigma, int omega) {
        const Mat4 k = kron(encoding_operator(sigma, omega),
                            decoding_operator(sigma, omega));
        const TwoQubitState term = conjugate_by(k, rho0);
        for (int i = 0; i < 16; ++i) rho1.m[i] += term.m[i];
    };
    if (protocol == Protocol::Sarg04FourSet)
        for (auto [s, w] : kFourSets) accumulate(s, w);
    else
        for (auto [s, w] : kTwoSets) accumulate(s, w);

    std::complex<double> tr = 0.0;
    for (int i = 0; i < 4; ++i) tr += rho1.at(i, i);
    const double norm = tr.real();
    if (norm <= 0.0) throw std::domain_error("sift_map: vanishing sifted state");
    for (int i = 0; i < 16; ++i) rho1.m[i] /= norm;
    return bell_diagonal(rho1);
}

std::array<double, 4> sift_lambdas_closed_form(const TwoQubitState& rho0,
                                               Protocol protocol) {
    if (protocol == Protocol::Bb84)
        throw std::invalid_argument(
            "sift_lambdas_closed_form: defined for the SARG04 variants");

    const auto b = bell_diagonal(rho0);  // Phi+, Phi-, Psi+, Psi-
    std::array<double, 4> l{};
    if (protocol == Protocol::Sarg04FourSet) {
        l[0] = b[0];
        l[1] = b[3] + b[1] + b[2];
        l[2] = 0.5 * (b[1] + b[2]);
        l[3] = 0.5 * (4.0 * b[3] + b[1] + b[2]);
    } else {
        // chi± = (Phi- ± Psi+)/sqrt2
        const double chi_p[4] = {0.5, 0.5, 0.5, -0.5};
        const double chi_m[4] = {0.5, -0.5, -0.5, -0.5};
        const double cp = sandwich(rho0, chi_p);
        const double cm = sandwich(rho0, chi_m);
        l[0] = b[0];
        l[1] = b[3] + 2.0 * cm;
        l[2] = cp;
        l[3] = 2.0 * b[3] + cm;
    }
    const double sum = l[0] + l[1] + l[2] + l[3];
    if (sum <= 0.0)
        throw std::domain_error("sift_lambdas_closed_form: vanishing state");
    for (double& x : l) x /= sum;
    return l;
}

}  // namespace qkd
