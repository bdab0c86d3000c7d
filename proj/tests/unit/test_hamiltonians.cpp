#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace harmsep;
namespace ht = harmsep::testing;

TEST(RingPotential, ThreeSitesNoTrap) {
    const PotentialMatrix pm = ring_potential(RingParams{3, 1.0, 0.0, 1.0});
    Matrix expected(3, 3);
    expected << 2, -1, -1, -1, 2, -1, -1, -1, 2;
    EXPECT_TRUE(pm.v().isApprox(expected, 1e-15));
    EXPECT_TRUE(pm.v().isApprox(ht::ring_potential_by_polarisation(3, 1.0, 0.0), 1e-15));
}

TEST(RingPotential, MatchesPolarisationOfLiteralSum) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int n : {1, 2, 3, 4, 5, 8, 13}) {
        const double w = u(rng), d = u(rng);
        EXPECT_LT((ring_potential(RingParams{n, w, d, 1.0}).v() - ht::ring_potential_by_polarisation(n, w, d)).cwiseAbs().maxCoeff(),
                  1e-13)
            << "n=" << n;
    }
}

TEST(RingPotential, DecoupledTraps) {
    const double d = 1.3;
    const PotentialMatrix pm = ring_potential(RingParams{2, 0.0, d, 1.0});
    EXPECT_TRUE(pm.v().isApprox(d * d * Matrix::Identity(2, 2), 1e-15));
}

TEST(RingPotential, EigenvaluesAreSquaredDispersion) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int n = 1; n <= 256; n = n < 8 ? n + 1 : n * 2) {
        const RingParams p{n, u(rng), u(rng), 1.0};
        const auto a = spectrum_from_potential(ring_potential(p)).frequencies();
        const auto b = ring_dispersion(p).frequencies();
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-10 * std::max(1.0, b[k])) << "n=" << n;
    }
}

TEST(RingDispersion, ThreeSitesExact) {
    const auto s = ring_dispersion(RingParams{3, 1.0, 1.0, 1.0});
    ASSERT_EQ(s.size(), 3u);
    EXPECT_NEAR(s.frequencies()[0], 1.0, 1e-15);
    EXPECT_NEAR(s.frequencies()[1], 2.0, 1e-15);
    EXPECT_NEAR(s.frequencies()[2], 2.0, 1e-15);
    EXPECT_NEAR(s.ratio(), 2.0, 1e-15);
}

TEST(RingDispersion, NoTrapHasFreeMode) {
    const int n = 10;
    const double w = 0.8;
    const auto s = ring_dispersion(RingParams{n, w, 0.0, 1.0});
    EXPECT_EQ(s.omega_min(), 0.0);
    EXPECT_TRUE(std::isinf(s.ratio()));
    std::vector<double> expect;
    for (int j = 0; j < n; ++j) expect.push_back(2.0 * w * std::abs(std::sin(std::numbers::pi * j / n)));
    std::sort(expect.begin(), expect.end());
    for (int j = 0; j < n; ++j) EXPECT_NEAR(s.frequencies()[j], expect[j], 1e-15);
}

TEST(RingDispersion, SpectralRatioOfEvenRing) {
    const auto s = ring_dispersion(RingParams{64, 1.0, 0.5, 1.0});
    EXPECT_NEAR(s.omega_min(), 0.5, 1e-15);
    EXPECT_NEAR(s.ratio(), std::sqrt(17.0), 1e-13);
}

TEST(SpectrumFromPotential, DiagonalAndFreeParticle) {
    const auto s = spectrum_from_potential(PotentialMatrix(Eigen::Vector3d(9, 1, 4).asDiagonal().toDenseMatrix()));
    EXPECT_NEAR(s.frequencies()[0], 1.0, 1e-15);
    EXPECT_NEAR(s.frequencies()[1], 2.0, 1e-15);
    EXPECT_NEAR(s.frequencies()[2], 3.0, 1e-15);

    const auto free = spectrum_from_potential(PotentialMatrix(Matrix::Zero(1, 1)));
    EXPECT_EQ(free.frequencies(), std::vector<double>{0.0});
    EXPECT_TRUE(std::isinf(free.ratio()));
}

TEST(SpectrumFromPotential, NonPsdNamesMinEigenvalue) {
    Matrix v(2, 2);
    v << 1, 2, 2, 1;  // eigenvalues -1, 3
    try {
        PotentialMatrix pm(v);
        FAIL() << "expected NotPsdError";
    } catch (const NotPsdError& e) {
        EXPECT_NEAR(e.min_eigenvalue, -1.0, 1e-14);
        EXPECT_NE(std::string(e.what()).find("-1"), std::string::npos);
    }
}

TEST(SpectrumFromPotential, InvariantUnderSitePermutation) {
    std::mt19937_64 rng(4);
    const Matrix v = ht::random_potential(ht::random_frequencies(6, 0.3, 3.0, rng), rng);
    std::vector<int> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix pv(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) pv(i, j) = v(perm[i], perm[j]);
    const auto a = spectrum_from_potential(PotentialMatrix(v)).frequencies();
    const auto b = spectrum_from_potential(PotentialMatrix(pv)).frequencies();
    for (int k = 0; k < 6; ++k) {
        EXPECT_NEAR(a[k], b[k], 1e-12);
        EXPECT_GE(a[k], 0.0);
    }
}

TEST(SpectrumFromQuadratic, SingleOscillator) {
    const double m = 2.5, w = 1.7;
    const QuadraticCoefficients c(Eigen::Vector2d(m * w * w / 2.0, 1.0 / (2.0 * m)).asDiagonal().toDenseMatrix(),
                                  Ordering::XpInterleaved);
    const auto s = spectrum_from_quadratic(c);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_NEAR(s.frequencies()[0], w, 1e-14);
}

TEST(SpectrumFromQuadratic, KineticPotentialMatchesPotentialSpectrum) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const PotentialMatrix pm(ht::random_potential(ht::random_frequencies(n, 0.2, 4.0, rng), rng), 0.5 + trial * 0.3);
        const auto a = spectrum_from_quadratic(kinetic_potential_coefficients(pm)).frequencies();
        const auto b = spectrum_from_potential(pm).frequencies();
        for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(a[k], b[k], 1e-9 * b[k]);
    }
}

TEST(SpectrumFromQuadratic, ScalesLinearly) {
    std::mt19937_64 rng(6);
    const PotentialMatrix pm(ht::random_potential(ht::random_frequencies(4, 0.5, 2.0, rng), rng));
    const QuadraticCoefficients c = kinetic_potential_coefficients(pm);
    const double lam = 3.7;
    const auto a = spectrum_from_quadratic(c).frequencies();
    const auto b = spectrum_from_quadratic(QuadraticCoefficients(lam * c.matrix(), c.ordering())).frequencies();
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(b[k], lam * a[k], 1e-12 * b[k]);
}

TEST(SpectrumFromQuadratic, RejectsIndefiniteC) {
    EXPECT_THROW(QuadraticCoefficients(Eigen::Vector2d(1.0, 0.0).asDiagonal().toDenseMatrix(), Ordering::Xxpp),
                 NotPositiveDefinite);
}

TEST(ShiftInvariance, Certificates) {
    EXPECT_TRUE(is_shift_invariant(ring_potential(RingParams{7, 1.1, 0.4, 1.0})));
    EXPECT_FALSE(is_shift_invariant(PotentialMatrix(Eigen::Vector2d(1, 2).asDiagonal().toDenseMatrix())));
    EXPECT_TRUE(is_shift_invariant(PotentialMatrix(2.25 * Matrix::Identity(5, 5))));
}

TEST(RingParams, Validation) {
    EXPECT_THROW(ring_potential(RingParams{0, 1.0, 0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(ring_dispersion(RingParams{3, -1.0, 0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(ring_dispersion(RingParams{3, 1.0, -0.1, 1.0}), std::invalid_argument);
    EXPECT_THROW(ring_potential(RingParams{3, 1.0, 0.1, 0.0}), std::invalid_argument);
}
