#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace harmsep;
namespace ht = harmsep::testing;

namespace {

ThermalPoint at(double beta) { return ThermalPoint{beta, 1.0, 1.0}; }

}  // namespace

TEST(PMeasure, OneAboveCriticalTemperature) {
    const FrequencySpectrum s({1.0, 2.0, 3.5});
    const double bc = critical_beta(s, false).beta_crit;
    for (double f : {0.01, 0.5, 0.9, 1.0}) {
        const auto r = p_measure(s, at(f * bc));
        EXPECT_EQ(r.p, 1.0) << f;
        EXPECT_EQ(r.neg_log_p, 0.0);
        EXPECT_FALSE(r.underflow);
    }
    EXPECT_LT(p_measure(s, at(1.001 * bc)).p, 1.0);
}

TEST(PMeasure, DegenerateSpectrumNeverEntangled) {
    const FrequencySpectrum s({1.3, 1.3, 1.3});
    for (double beta : {1e-3, 1.0, 1e3}) {
        const auto r = p_measure(s, at(beta));
        EXPECT_EQ(r.p, 1.0);
        EXPECT_NEAR(r.omega0_star, 1.3, 1e-14);
    }
}

TEST(PMeasure, TwoLevelAgainstGridOracle) {
    const std::vector<double> w{1.0, 2.0};
    const auto r = p_measure(FrequencySpectrum(w), at(4.0));
    EXPECT_LT(r.p, 1.0);
    EXPECT_NEAR(r.p, ht::p_oracle(w, 4.0), 1e-8);
    EXPECT_NEAR(ht::p_objective(w, 4.0, r.omega0_star), r.p, 1e-12);
}

TEST(PMeasure, RandomSpectraAgainstGridOracle) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lb(std::log(0.05), std::log(20.0));
    for (int trial = 0; trial < 30; ++trial) {
        const auto w = ht::random_frequencies(2 + trial % 6, 0.2, 5.0, rng);
        const double beta = std::exp(lb(rng));
        const auto r = p_measure(FrequencySpectrum(w), at(beta));
        EXPECT_NEAR(r.p, ht::p_oracle(w, beta, 20000), 1e-8) << "trial=" << trial;
    }
}

TEST(PMeasure, LargeRandomSpectraAroundBetaCrit) {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> lf(std::log(0.01), std::log(100.0));
    for (std::size_t n : {8u, 16u, 32u, 64u}) {
        for (int rep = 0; rep < 3; ++rep) {
            const auto w = ht::random_frequencies(n, 0.1, 10.0, rng);
            const FrequencySpectrum s(w);
            const double beta = std::exp(lf(rng)) * critical_beta(s, false).beta_crit;
            EXPECT_NEAR(p_measure(s, at(beta)).p, ht::p_oracle(w, beta, 20000), 1e-8) << "n=" << n;
        }
    }
}

TEST(PMeasure, MonotoneInBeta) {
    const FrequencySpectrum s({0.4, 1.0, 2.2});
    double prev = 1.0;
    for (int i = 0; i <= 200; ++i) {
        const double beta = 1e-2 * std::pow(1e4, i / 200.0);
        const double p = p_measure(s, at(beta)).p;
        EXPECT_LE(p, prev + 1e-15);
        prev = p;
    }
}

TEST(PMeasure, ThresholdIsBetaCrit) {
    for (double r : {1.5, 2.0, 5.0, 100.0}) {
        const FrequencySpectrum s({1.0, r});
        double lo = 1e-3, hi = 1e3;
        while (hi / lo > 1.0 + 1e-8) {
            const double mid = std::sqrt(lo * hi);
            if (p_measure(s, at(mid)).p == 1.0) lo = mid; else hi = mid;
        }
        EXPECT_LE(ht::rel_err(lo, critical_beta(s, false).beta_crit), 1e-6) << r;
    }
}

TEST(PMeasure, ZeroModeAndUnderflow) {
    EXPECT_THROW(p_measure(FrequencySpectrum({0.0, 1.0}), at(1.0)), ZeroModeError);
    const auto r = p_measure(FrequencySpectrum({1e-6, 1e6}), at(1e4));
    EXPECT_GT(r.neg_log_p, 0.0);
    EXPECT_GE(r.p, kMinP);
}

TEST(SqueezedPair, ProperCovarianceMatrix) {
    EXPECT_TRUE(squeezed_cm(SqueezedPair{0.0}).matrix().isApprox(Matrix::Identity(4, 4), 0.0));
    for (double tau : {0.1, 0.7, 2.0}) {
        const CovarianceMatrix g = squeezed_cm(SqueezedPair{tau});
        EXPECT_NEAR(g.matrix().determinant(), 1.0, 1e-10 * std::pow(std::cosh(tau), 4));
        for (double nu : symplectic_eigenvalues(g)) EXPECT_NEAR(nu, 1.0, 1e-9 * std::cosh(tau));
        EXPECT_GE(uncertainty_margin(g, 2.0), -1e-10 * std::cosh(tau));
    }
    EXPECT_THROW(squeezed_cm(SqueezedPair{-1.0}), std::invalid_argument);
}

TEST(SqueezedPair, BipartitePIsExpMinusTau) {
    // vacuum = identity corresponds to hbar = 2; product comparators diag(a, 1/a) (+) diag(b, 1/b)
    for (double tau : {0.2, 0.8, 1.5}) {
        const CovarianceMatrix g = squeezed_cm(SqueezedPair{tau});
        double best = 0.0;
        for (int i = -200; i <= 200; ++i) {
            const double a = std::exp(4.0 * i / 200.0);
            for (int k = -200; k <= 200; k += 1) {
                const double b = std::exp(4.0 * k / 200.0);
                Matrix c = Matrix::Zero(4, 4);
                c(0, 0) = a;
                c(1, 1) = 1.0 / a;
                c(2, 2) = b;
                c(3, 3) = 1.0 / b;
                best = std::max(best, dominance_factor(g, CovarianceMatrix(c, Ordering::XpInterleaved)));
            }
        }
        EXPECT_NEAR(best, std::exp(-tau), 1e-6) << tau;
    }
}

TEST(DominanceFactor, Basics) {
    const CovarianceMatrix vac(Matrix::Identity(2, 2), Ordering::XpInterleaved);
    EXPECT_EQ(dominance_factor(vac, vac), 1.0);
    const CovarianceMatrix half(0.5 * Matrix::Identity(2, 2), Ordering::XpInterleaved);
    EXPECT_NEAR(dominance_factor(half, vac), 0.5, 1e-15);
    EXPECT_THROW(dominance_factor(vac, CovarianceMatrix(Matrix::Identity(4, 4), Ordering::XpInterleaved)),
                 std::invalid_argument);
}

TEST(HyperbolicEntropy, Values) {
    EXPECT_EQ(hyperbolic_entropy(0.0), 0.0);
    for (double tau : {1e-3, 0.1, 0.5, 1.0, 3.0}) {
        const double c2 = std::pow(std::cosh(tau), 2), s2 = std::pow(std::sinh(tau), 2);
        EXPECT_NEAR(hyperbolic_entropy(tau), c2 * std::log2(c2) - s2 * std::log2(s2), 1e-10 * c2) << tau;
    }
    double prev = 0.0;
    for (int i = 1; i <= 500; ++i) {
        const double h = hyperbolic_entropy(0.02 * i);
        EXPECT_GT(h, prev);
        prev = h;
    }
    const double big = hyperbolic_entropy(400.0);
    EXPECT_TRUE(std::isfinite(big));
    EXPECT_NEAR(big, 2.0 * 400.0 / std::numbers::ln2 - 2.0 + 1.0 / std::numbers::ln2, 1e-9 * big);
    EXPECT_THROW(hyperbolic_entropy(-0.1), std::invalid_argument);
}

TEST(EofCorrection, Limits) {
    EXPECT_LE(std::abs(eof_correction(1.0)), 1e-12);
    EXPECT_NEAR(eof_correction(1e-300), 1.0 / std::numbers::ln2 - 2.0, 1e-5);
    EXPECT_NEAR(eof_correction(0.0), -0.557304, 1e-6);
    EXPECT_THROW(eof_correction(1.5), std::invalid_argument);
}

TEST(EofCorrection, MonotoneAndConvex) {
    std::vector<double> v;
    for (int i = 0; i <= 400; ++i) v.push_back(eof_correction(i / 400.0));
    for (std::size_t i = 1; i < v.size(); ++i) EXPECT_GT(v[i], v[i - 1]) << i;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) EXPECT_GE(v[i - 1] + v[i + 1] - 2.0 * v[i], -1e-12) << i;
}

TEST(EofLowerBound, TightOnSqueezedPairs) {
    for (double tau : {0.1, 0.6, 1.7}) {
        EXPECT_NEAR(eof_lower_bound(std::exp(-tau)), hyperbolic_entropy(tau), 1e-12 * hyperbolic_entropy(tau));
    }
}

TEST(EofLowerBound, ConsistentWithCorrectionForm) {
    for (int i = 1; i <= 1000; ++i) {
        const double p = i / 1000.0;
        EXPECT_GE(eof_lower_bound(p), -2.0 * std::log2(p) + eof_correction(p) - 1e-10) << p;
    }
}

TEST(EofLowerBound, Values) {
    EXPECT_EQ(eof_lower_bound(1.0), 0.0);
    EXPECT_NEAR(eof_lower_bound(std::exp(-1.0)), hyperbolic_entropy(1.0), 1e-14);
    EXPECT_THROW(eof_lower_bound(0.0), std::invalid_argument);
    const auto r = p_measure(FrequencySpectrum({1.0, 2.0}), at(4.0));
    EXPECT_NEAR(eof_lower_bound(r), eof_lower_bound(r.p), 1e-12);
    EXPECT_GT(eof_lower_bound(r), 0.0);
}
