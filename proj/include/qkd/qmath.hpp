#pragma once

#include <array>
#include <complex>
#include <vector>

namespace qkd {

/// Four-state protocols handled by this library. The two SARG04 variants
/// differ only in how many sifting sets the classical phase uses.
enum class Protocol { Sarg04FourSet, Sarg04TwoSet, Bb84 };

const char* protocol_name(Protocol p);

/// -p*log2(p) with the convention 0*log2(0) = 0.
double entropy_term(double p);

/// Binary entropy h(p) in bits. Accepts p in [0,1] with 1e-12 slack.
double binary_entropy(double p);

/// Poisson probability e^{-mu} mu^n / n!. Evaluated in log space for n > 20.
double poisson_pmf(int n, double mu);

/// Poisson distribution truncated at n_max; the discarded tail mass is kept.
struct PhotonDistribution {
    std::vector<double> probs;  // p(n), n = 0..n_max
    double tail = 0.0;
    int n_max() const { return static_cast<int>(probs.size()) - 1; }
};

PhotonDistribution poisson_distribution(double mu, int n_max);

/// Dense real symmetric matrix, dim in {2,3,4}.
struct SymMatrix {
    int dim = 2;
    double a[4][4] = {};

    static SymMatrix zero(int dim);
    static SymMatrix identity(int dim);
    static SymMatrix diagonal(const std::vector<double>& d);

    void set(int i, int j, double v) {
        a[i][j] = v;
        a[j][i] = v;
    }
    double operator()(int i, int j) const { return a[i][j]; }
    double trace() const;
};

struct EigSym {
    int dim = 0;
    std::array<double, 4> values{};  // sorted descending
    double vectors[4][4] = {};       // column k pairs with values[k]
};

/// Eigendecomposition of a small real symmetric matrix: closed form for
/// dim 2, cyclic Jacobi (threshold 1e-14, at most 100 sweeps) for dim 3 and 4.
EigSym eig_sym(const SymMatrix& m);

/// -sum lambda log2 lambda over the spectrum. Requires trace 1 within 1e-9
/// and eigenvalues >= -1e-8.
double von_neumann_entropy(const SymMatrix& m);

/// Two-qubit density operator on the product basis |00>,|01>,|10>,|11>.
struct TwoQubitState {
    std::array<std::complex<double>, 16> m{};

    std::complex<double>& at(int i, int j) { return m[4 * i + j]; }
    std::complex<double> at(int i, int j) const { return m[4 * i + j]; }

    /// Hermitian within 1e-12, unit trace within 1e-12, and positive
    /// semidefinite up to a -1e-10 eigenvalue allowance.
    bool is_valid(double tol = 1e-12) const;
};

/// Bell components <B_i|rho|B_i> in the fixed order Phi+, Phi-, Psi+, Psi-,
/// with Phi± = (|00>±|11>)/sqrt2 and Psi± = (|01>±|10>)/sqrt2.
std::array<double, 4> bell_diagonal(const TwoQubitState& rho);

struct Mat2 {
    double m[2][2] = {};
};

/// A_{sigma omega} = |0><sigma z| + |1><omega x|, sigma/omega in {+1,-1}.
Mat2 encoding_operator(int sigma, int omega);

/// B_{sigma omega} = (sigma|0><-omega x| + omega|1><-sigma z|)/sqrt2.
Mat2 decoding_operator(int sigma, int omega);

/// Applies the sifting channel rho1 = C sum_j (A_j (x) B_j) rho0 (A_j (x) B_j)^dag
/// over the protocol's sifting sets (all four for the four-set variant, the
/// ++ and -- sets only for the two-set variant), normalizing by the trace,
/// and returns the Bell diagonal of rho1. This is the brute-force reference
/// the closed-form lambdas are checked against.
std::array<double, 4> sift_map(const TwoQubitState& rho0, Protocol protocol);

/// Closed-form Bell diagonal of the sifted state in terms of rho0 sandwiches.
std::array<double, 4> sift_lambdas_closed_form(const TwoQubitState& rho0,
                                               Protocol protocol);

}  // namespace qkd
