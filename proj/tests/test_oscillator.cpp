#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>

#include "finrot/oscillator.hpp"
#include "oracle_wigner.hpp"
#include "test_helpers.hpp"

using namespace finrot;
using finrot_test::orthogonality_residual;
using finrot_test::wigner_little_d_direct;

namespace {

using CMat = Eigen::MatrixXcd;

CMat to_complex(const std::vector<double>& m, int n) {
    CMat out(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) out(r, c) = m[static_cast<std::size_t>(r) * n + c];
    }
    return out;
}

CMat to_complex(const std::vector<std::complex<double>>& m, int n) {
    CMat out(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) out(r, c) = m[static_cast<std::size_t>(r) * n + c];
    }
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("oscillator");

TEST_CASE("representation labels and positions") {
    const auto rep = OscillatorRep::from_size(11);
    CHECK(rep.two_j() == 10);
    CHECK(rep.j() == doctest::Approx(5.0));
    CHECK(rep.integral_j());
    CHECK(rep.position(0) == doctest::Approx(-5.0));
    CHECK(rep.position(10) == doctest::Approx(5.0));

    const auto half = OscillatorRep::from_two_j(1);
    CHECK(half.size() == 2);
    CHECK(!half.integral_j());
    CHECK(half.position(0) == doctest::Approx(-0.5));

    CHECK_THROWS_AS(OscillatorRep::from_size(0), DomainError);
    CHECK_THROWS_AS(OscillatorRep::from_two_j(-1), DomainError);
}

TEST_CASE("su2 generators: printed entries") {
    SUBCASE("j=1/2 position matrix") {
        const auto gens = su2_generators(OscillatorRep::from_two_j(1));
        CHECK(gens.q[0] == doctest::Approx(-0.5));
        CHECK(gens.q[3] == doctest::Approx(0.5));
        CHECK(gens.q[1] == 0.0);
    }
    SUBCASE("j=1 K matrix has sqrt(2)/2 off-diagonals") {
        const auto gens = su2_generators(OscillatorRep::from_two_j(2));
        const double expect = std::sqrt(2.0) / 2.0;
        CHECK(gens.k[0 * 3 + 1] == doctest::Approx(expect).epsilon(1e-14));
        CHECK(gens.k[1 * 3 + 0] == doctest::Approx(expect).epsilon(1e-14));
        CHECK(gens.k[1 * 3 + 2] == doctest::Approx(expect).epsilon(1e-14));
        CHECK(gens.k[2 * 3 + 1] == doctest::Approx(expect).epsilon(1e-14));
        for (int i = 0; i < 3; ++i) CHECK(gens.k[i * 3 + i] == 0.0);
    }
}

TEST_CASE("su2 generators: self-adjointness and commutators") {
    // The matrices with the entries as defined satisfy [Q,P] = iK together
    // with [K,Q] = +iP and [K,P] = -iQ (the standard cyclic su(2) triple for
    // (J1,J2,J3) = (Q,P,K)).
    for (int two_j : {1, 2, 3, 8, 17, 32}) {
        const int n = two_j + 1;
        const auto gens = su2_generators(OscillatorRep::from_two_j(two_j));
        const CMat q = to_complex(gens.q, n);
        const CMat p = to_complex(gens.p, n);
        const CMat k = to_complex(gens.k, n);
        const std::complex<double> i(0.0, 1.0);

        CHECK((q - q.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((p - p.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((k - k.adjoint()).cwiseAbs().maxCoeff() < 1e-15);

        CHECK(((q * p - p * q) - i * k).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(((k * q - q * k) - i * p).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(((k * p - p * k) + i * q).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("su2 generators: Q, P, K all have spectrum {-j..j}") {
    const int two_j = 6;
    const int n = two_j + 1;
    const auto gens = su2_generators(OscillatorRep::from_two_j(two_j));
    const auto check_spectrum = [&](const CMat& m) {
        Eigen::SelfAdjointEigenSolver<CMat> eig(m);
        for (int t = 0; t < n; ++t) {
            CHECK(eig.eigenvalues()(t) == doctest::Approx(-3.0 + t).epsilon(1e-10));
        }
    };
    check_spectrum(to_complex(gens.q, n));
    check_spectrum(to_complex(gens.p, n));
    check_spectrum(to_complex(gens.k, n));
}

TEST_CASE("su2 generators: j=3/2 [Q,P] = iK entrywise") {
    const int n = 4;
    const auto gens = su2_generators(OscillatorRep::from_two_j(3));
    const CMat q = to_complex(gens.q, n);
    const CMat p = to_complex(gens.p, n);
    const CMat k = to_complex(gens.k, n);
    const CMat lhs = q * p - p * q;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            CHECK(std::abs(lhs(r, c) - std::complex<double>(0, 1) * k(r, c)) < 1e-13);
        }
    }
}

TEST_CASE("wigner little-d: closed-form spot values") {
    CHECK(wigner_little_d(1, 1, 1, M_PI_2) == doctest::Approx(std::cos(M_PI / 4)).epsilon(1e-14));
    CHECK(wigner_little_d(1, 1, -1, 0.8) == doctest::Approx(-std::sin(0.4)).epsilon(1e-14));
    CHECK(wigner_little_d(1, -1, 1, 0.8) == doctest::Approx(std::sin(0.4)).epsilon(1e-14));
    CHECK(wigner_little_d(2, 2, 0, 0.6) ==
          doctest::Approx(-std::sin(0.6) / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("wigner little-d: identity at beta = 0") {
    for (int two_j : {1, 2, 5, 12}) {
        for (int two_mp = -two_j; two_mp <= two_j; two_mp += 2) {
            for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
                const double expect = two_mp == two_m ? 1.0 : 0.0;
                CHECK(wigner_little_d(two_j, two_mp, two_m, 0.0) == expect);
            }
        }
    }
}

TEST_CASE("wigner little-d: domain errors") {
    CHECK_THROWS_AS(wigner_little_d(2, 4, 0, 0.3), DomainError);   // |m'| > j
    CHECK_THROWS_AS(wigner_little_d(2, 0, -4, 0.3), DomainError);  // |m| > j
    CHECK_THROWS_AS(wigner_little_d(2, 1, 0, 0.3), DomainError);   // parity mismatch
    CHECK_THROWS_AS(wigner_little_d(-2, 0, 0, 0.3), DomainError);
}

TEST_CASE("wigner little-d: j=10 value against multiprecision sum") {
    // mp = 3, m = -2, beta = 0.7
    const double ours = wigner_little_d(20, 6, -4, 0.7);
    const double oracle = wigner_little_d_direct(20, 6, -4, 0.7);
    CHECK(std::abs(ours - oracle) < 1e-12);
}

TEST_CASE("wigner little-d: recurrence matches the direct sum (property)") {
    std::mt19937 rng(20240811);
    double worst = 0.0;
    for (int two_j = 1; two_j <= 40; ++two_j) {
        std::uniform_int_distribution<int> proj(0, two_j);
        std::uniform_real_distribution<double> angle(-7.0, 7.0);
        const int cases = two_j <= 20 ? 5 : 2;
        for (int t = 0; t < cases; ++t) {
            const int two_mp = 2 * proj(rng) - two_j;
            const int two_m = 2 * proj(rng) - two_j;
            const double beta = angle(rng);
            const double a = wigner_little_d(two_j, two_mp, two_m, beta);
            const double b = wigner_little_d_direct(two_j, two_mp, two_m, beta);
            worst = std::max(worst, std::abs(a - b));
        }
    }
    CHECK(worst < 1e-11);
}

TEST_CASE("wigner little-d: transposition symmetry d(-beta)") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(-6.0, 6.0);
    for (int two_j : {1, 3, 8, 21}) {
        std::uniform_int_distribution<int> proj(0, two_j);
        for (int t = 0; t < 20; ++t) {
            const int two_mp = 2 * proj(rng) - two_j;
            const int two_m = 2 * proj(rng) - two_j;
            const double beta = angle(rng);
            CHECK(wigner_little_d(two_j, two_mp, two_m, -beta) ==
                  doctest::Approx(wigner_little_d(two_j, two_m, two_mp, beta)).epsilon(1e-11));
        }
    }
}

TEST_CASE("wigner d-matrix: orthogonality through the largest kernel block orders") {
    // N = 52 kernels consume blocks up to order 2j = 102
    for (int two_j : {1, 2, 7, 16, 33, 50, 64, 101}) {
        for (double beta : {1e-9, 1e-4, 0.3, M_PI_2, M_PI - 1e-5, 2.9, 6.1, -1.7}) {
            const auto d = wigner_d_matrix(two_j, beta);
            CHECK(orthogonality_residual(d, two_j + 1) < 1e-10);
        }
    }
}

TEST_CASE("wigner d-matrix: group property d(b1) d(b2) = d(b1+b2)") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> angle(-5.0, 5.0);
    for (int two_j : {1, 4, 13, 32, 64}) {
        const int dim = two_j + 1;
        for (int t = 0; t < 4; ++t) {
            const double b1 = angle(rng), b2 = angle(rng);
            const auto d1 = wigner_d_matrix(two_j, b1);
            const auto d2 = wigner_d_matrix(two_j, b2);
            const auto d12 = wigner_d_matrix(two_j, b1 + b2);
            double worst = 0.0;
            for (int r = 0; r < dim; ++r) {
                for (int c = 0; c < dim; ++c) {
                    double acc = 0.0;
                    for (int k = 0; k < dim; ++k) {
                        acc += d1[static_cast<std::size_t>(r) * dim + k] *
                               d2[static_cast<std::size_t>(k) * dim + c];
                    }
                    worst = std::max(worst,
                                     std::abs(acc - d12[static_cast<std::size_t>(r) * dim + c]));
                }
            }
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("kravchuk psi: j=1/2 values") {
    const auto rep = OscillatorRep::from_two_j(1);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(kravchuk_psi(rep, 0, 0) == doctest::Approx(r).epsilon(1e-14));
    CHECK(kravchuk_psi(rep, 0, 1) == doctest::Approx(r).epsilon(1e-14));
    CHECK(kravchuk_psi(rep, 1, 0) == doctest::Approx(-r).epsilon(1e-14));
    CHECK(kravchuk_psi(rep, 1, 1) == doctest::Approx(r).epsilon(1e-14));
}

TEST_CASE("kravchuk psi: domain errors") {
    const auto rep = OscillatorRep::from_two_j(4);
    CHECK_THROWS_AS(kravchuk_psi(rep, -1, 0), DomainError);
    CHECK_THROWS_AS(kravchuk_psi(rep, 5, 0), DomainError);
    CHECK_THROWS_AS(kravchuk_psi(rep, 0, -1), DomainError);
    CHECK_THROWS_AS(kravchuk_psi(rep, 0, 5), DomainError);
}

TEST_CASE("kravchuk psi: rows are K eigenvectors (j = 25)") {
    // K Psi_n = (j - n) Psi_n for the K matrix as built; the aligned mode
    // operator is j*1 - K, which counts n upward from the all-positive ground
    // state. Checked against an independent eigendecomposition.
    const auto rep = OscillatorRep::from_size(51);
    const int n_side = rep.size();
    const auto gens = su2_generators(rep);
    const WavefunctionTable table(rep);

    Eigen::MatrixXd k(n_side, n_side);
    for (int r = 0; r < n_side; ++r) {
        for (int c = 0; c < n_side; ++c) {
            k(r, c) = gens.k[static_cast<std::size_t>(r) * n_side + c];
        }
    }
    for (int n = 0; n < n_side; ++n) {
        Eigen::VectorXd psi(n_side);
        for (int i = 0; i < n_side; ++i) psi(i) = table.psi(n, i);
        const double lambda = rep.j() - n;
        CHECK((k * psi - lambda * psi).cwiseAbs().maxCoeff() < 1e-10);
    }

    // eigenvalue multiset from an independent solver matches {-j..j}
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    for (int t = 0; t < n_side; ++t) {
        CHECK(eig.eigenvalues()(t) == doctest::Approx(-rep.j() + t).epsilon(1e-9));
    }
}

TEST_CASE("wavefunction table: j=1/2 exact matrix") {
    const WavefunctionTable table(OscillatorRep::from_two_j(1));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(table.psi(0, 0) == doctest::Approx(r));
    CHECK(table.psi(0, 1) == doctest::Approx(r));
    CHECK(table.psi(1, 0) == doctest::Approx(-r));
    CHECK(table.psi(1, 1) == doctest::Approx(r));
}

TEST_CASE("wavefunction table: orthonormality") {
    SUBCASE("j=5 rows within 1e-12") {
        const WavefunctionTable table(OscillatorRep::from_two_j(10));
        CHECK(orthogonality_residual(table.values(), table.size()) < 1e-12);
    }
    SUBCASE("j=25 rows within 1e-10") {
        const WavefunctionTable table(OscillatorRep::from_two_j(50));
        CHECK(orthogonality_residual(table.values(), table.size()) < 1e-10);
    }
    SUBCASE("columns (half-integer j = 9/2)") {
        const WavefunctionTable table(OscillatorRep::from_two_j(9));
        const int n = table.size();
        double worst = 0.0;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) acc += table.psi(k, a) * table.psi(k, b);
                worst = std::max(worst, std::abs(acc - (a == b ? 1.0 : 0.0)));
            }
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("wavefunction table: signed transpose symmetry holds exactly") {
    // psi(n, i) = (-1)^(n-i) psi(i, n), bitwise as stored.
    for (int two_j : {1, 2, 9, 24}) {
        const WavefunctionTable table(OscillatorRep::from_two_j(two_j));
        const int n = table.size();
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                const double sign = (a - b) % 2 ? -1.0 : 1.0;
                CHECK(table.psi(a, b) == sign * table.psi(b, a));
            }
        }
    }
}

TEST_CASE("wavefunction table: agrees with kravchuk_psi") {
    const auto rep = OscillatorRep::from_two_j(7);
    const WavefunctionTable table(rep);
    for (int n = 0; n < rep.size(); ++n) {
        for (int i = 0; i < rep.size(); ++i) {
            CHECK(table.psi(n, i) == doctest::Approx(kravchuk_psi(rep, n, i)).epsilon(1e-13));
        }
    }
}

TEST_SUITE_END();
