#include <doctest.h>

#include <cmath>
#include <random>

#include "qkd/qmath.hpp"
#include "test_util.hpp"

using namespace qkd;

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(std::abs(binary_entropy(0.25) - 0.811278124459133) < 1e-12);
    CHECK(binary_entropy(0.3) == binary_entropy(0.7));
    CHECK_THROWS_AS(binary_entropy(-0.01), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(1.01), std::domain_error);
}

TEST_CASE("von Neumann entropy") {
    CHECK(von_neumann_entropy(SymMatrix::diagonal({1, 0, 0, 0})) == 0.0);
    CHECK(std::abs(von_neumann_entropy(
                       SymMatrix::diagonal({0.25, 0.25, 0.25, 0.25})) -
                   2.0) < 1e-12);
    // block reduction: diag(1-Q, Q) has entropy h(Q)
    CHECK(std::abs(von_neumann_entropy(SymMatrix::diagonal({0.9, 0.1})) -
                   0.468995593589281) < 1e-12);
    CHECK_THROWS_AS(von_neumann_entropy(SymMatrix::diagonal({0.5, 0.4})),
                    std::domain_error);
    CHECK_THROWS_AS(von_neumann_entropy(SymMatrix::diagonal({1.5, -0.5})),
                    std::domain_error);
}

TEST_CASE("eig_sym closed forms") {
    EigSym id3 = eig_sym(SymMatrix::identity(3));
    for (int i = 0; i < 3; ++i) CHECK(id3.values[i] == doctest::Approx(1.0));

    SymMatrix pauli_x = SymMatrix::zero(2);
    pauli_x.set(0, 1, 1.0);
    EigSym e = eig_sym(pauli_x);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("eig_sym random reconstruction and orthonormality") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = 2 + trial % 3;
        SymMatrix m = SymMatrix::zero(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = i; j < dim; ++j) m.set(i, j, u(rng));
        EigSym e = eig_sym(m);

        double sum = 0.0;
        for (int i = 0; i < dim; ++i) sum += e.values[i];
        CHECK(std::abs(sum - m.trace()) < 1e-10);

        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double recon = 0.0, dot = 0.0;
                for (int k = 0; k < dim; ++k) {
                    recon += e.vectors[i][k] * e.values[k] * e.vectors[j][k];
                    dot += e.vectors[k][i] * e.vectors[k][j];
                }
                CHECK(std::abs(recon - m(i, j)) < 1e-10);
                CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-10);
            }
        for (int i = 0; i + 1 < dim; ++i) CHECK(e.values[i] >= e.values[i + 1]);
    }
}

TEST_CASE("poisson pmf") {
    CHECK(poisson_pmf(0, 0.0) == 1.0);
    CHECK(poisson_pmf(3, 0.0) == 0.0);
    CHECK(std::abs(poisson_pmf(0, 1.7) - std::exp(-1.7)) < 1e-15);
    CHECK(std::abs(poisson_pmf(2, 1.0) - 0.183939720585721) < 1e-12);
    CHECK_THROWS_AS(poisson_pmf(1, -0.5), std::domain_error);
    CHECK_THROWS_AS(poisson_pmf(-1, 0.5), std::domain_error);

    // log-space branch agrees with the recurrence across the switchover
    double direct = poisson_pmf(20, 9.0) * 9.0 / 21.0;
    CHECK(std::abs(poisson_pmf(21, 9.0) - direct) < 1e-16);

    double sum = 0.0;
    for (int n = 0; n <= 100; ++n) sum += poisson_pmf(n, 5.0);
    CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("photon distribution records its tail") {
    PhotonDistribution d = poisson_distribution(1.55, 7);
    CHECK(d.n_max() == 7);
    double sum = 0.0;
    for (double p : d.probs) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        sum += p;
    }
    CHECK(std::abs(sum + d.tail - 1.0) < 1e-12);
    CHECK(d.tail > 0.0);
    CHECK(d.tail < 1e-3);
}

TEST_CASE("decoding operators implement the two projective measurements") {
    // B^dag |0><0| B = |{-omega x}><{-omega x}| / 2 for all four sets
    for (int sigma : {+1, -1}) {
        for (int omega : {+1, -1}) {
            Mat2 b = decoding_operator(sigma, omega);
            double proj[2][2];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) proj[i][j] = b.m[0][i] * b.m[0][j];
            // |-omega x><-omega x| = [[1, -omega], [-omega, 1]] / 2
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const double expect = (i == j ? 0.5 : -omega * 0.5);
                    CHECK(std::abs(proj[i][j] - 0.5 * expect) < 1e-14);
                }

            // and B^dag |1><1| B = |{-sigma z}><{-sigma z}| / 2
            double proj1[2][2];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) proj1[i][j] = b.m[1][i] * b.m[1][j];
            const int idx = sigma > 0 ? 1 : 0;  // |-z> = (0,1), |+z> = (1,0)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(std::abs(proj1[i][j] -
                                   0.5 * ((i == idx && j == idx) ? 1.0 : 0.0)) <
                          1e-14);
        }
    }
}

namespace {

TwoQubitState bell_projector(int which) {
    const double s = 1.0 / std::sqrt(2.0);
    double v[4] = {};
    if (which == 0) { v[0] = s; v[3] = s; }        // Phi+
    else if (which == 1) { v[0] = s; v[3] = -s; }  // Phi-
    else if (which == 2) { v[1] = s; v[2] = s; }   // Psi+
    else { v[1] = s; v[2] = -s; }                  // Psi-
    TwoQubitState rho;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rho.at(i, j) = v[i] * v[j];
    return rho;
}

}  // namespace

TEST_CASE("sift map on Bell projectors") {
    // error-free channel: only the Phi+ component survives
    for (Protocol p : {Protocol::Sarg04FourSet, Protocol::Sarg04TwoSet}) {
        auto l = sift_map(bell_projector(0), p);
        CHECK(std::abs(l[0] - 1.0) < 1e-12);
        CHECK(std::abs(l[1]) < 1e-12);
        CHECK(std::abs(l[2]) < 1e-12);
        CHECK(std::abs(l[3]) < 1e-12);
    }
    // Psi- input, four sets: lambda proportional to (0, 1, 0, 2)
    auto l = sift_map(bell_projector(3), Protocol::Sarg04FourSet);
    CHECK(std::abs(l[0]) < 1e-12);
    CHECK(std::abs(l[1] - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(l[2]) < 1e-12);
    CHECK(std::abs(l[3] - 2.0 / 3.0) < 1e-12);

    CHECK_THROWS_AS(sift_map(bell_projector(0), Protocol::Bb84),
                    std::invalid_argument);
}

TEST_CASE("sift map matches the closed-form lambdas on random states") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 1000; ++trial) {
        TwoQubitState rho = test::random_density_matrix(rng);
        REQUIRE(rho.is_valid(1e-10));

        auto brute4 = sift_map(rho, Protocol::Sarg04FourSet);
        auto closed4 = sift_lambdas_closed_form(rho, Protocol::Sarg04FourSet);
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
            CHECK(std::abs(brute4[i] - closed4[i]) < 1e-10);
            sum += brute4[i];
        }
        CHECK(std::abs(sum - 1.0) < 1e-10);
        // lambda4 + 3 lambda3 = 2 lambda2 and lambda4 >= lambda3
        CHECK(std::abs(brute4[3] + 3.0 * brute4[2] - 2.0 * brute4[1]) < 1e-10);
        CHECK(brute4[3] >= brute4[2] - 1e-10);

        auto brute2 = sift_map(rho, Protocol::Sarg04TwoSet);
        auto closed2 = sift_lambdas_closed_form(rho, Protocol::Sarg04TwoSet);
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(brute2[i] - closed2[i]) < 1e-10);
        // lambda2 / 2 <= lambda4 <= 2 lambda2
        CHECK(brute2[3] >= 0.5 * brute2[1] - 1e-10);
        CHECK(brute2[3] <= 2.0 * brute2[1] + 1e-10);
    }
}

TEST_CASE("two-qubit state validity") {
    std::mt19937_64 rng(11);
    TwoQubitState rho = test::random_density_matrix(rng);
    CHECK(rho.is_valid());

    TwoQubitState bad_trace = rho;
    bad_trace.at(0, 0) += 0.1;
    CHECK_FALSE(bad_trace.is_valid());

    TwoQubitState not_hermitian = rho;
    not_hermitian.at(0, 1) += std::complex<double>(0.0, 1e-3);
    CHECK_FALSE(not_hermitian.is_valid());

    TwoQubitState neg;
    neg.at(0, 0) = 0.6;
    neg.at(1, 1) = 0.5;
    neg.at(2, 2) = -0.1;
    CHECK_FALSE(neg.is_valid());
}
