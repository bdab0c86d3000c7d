// measures.hpp: sub-critical entanglement: P-measure, squeezed pairs, EoF bound

#pragma once

#include "harmsep/errors.hpp"
#include "harmsep/gaussian_core.hpp"
#include "harmsep/hamiltonians.hpp"
#include "harmsep/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace harmsep {

struct PMeasureResult {
    double p = 1.0;
    double neg_log_p = 0.0;  // natural log
    double omega0_star = 0.0;
    bool underflow = false;  // p clamped at kMinP
};

inline constexpr double kMinP = 1e-300;

namespace detail {

inline double log_coth_positive(double x) {
    if (x < 1e-4) return std::log(coth_positive(x));
    return std::log1p(2.0 / std::expm1(2.0 * x));
}

}  // namespace detail

// P = max_{w0} min_j { (w_j/w0) coth(beta hbar w_j/2), (w0/w_j) coth(beta hbar w_j/2), 1 }.
//
// With u = ln w0 the log of the inner minimum is the lower envelope of lines of
// slope -1 (a_j - u), +1 (u - b_j) and 0, where a_j = ln(w_j coth), b_j = ln(w_j / coth).
// Its maximum is min(0, (A - B)/2) at u* = (A + B)/2, A = min a_j, B = max b_j.
inline PMeasureResult p_measure(const FrequencySpectrum& spec, const ThermalPoint& t) {
    t.validate();
    if (!(spec.omega_min() > 0.0)) {
        throw ZeroModeError("p_measure: zero frequency in spectrum", spec.omega_min());
    }
    double a = std::numeric_limits<double>::infinity();
    double b = -std::numeric_limits<double>::infinity();
    for (double w : spec.frequencies()) {
        const double lw = std::log(w);
        const double lc = detail::log_coth_positive(0.5 * t.beta * t.hbar * w);
        a = std::min(a, lw + lc);
        b = std::max(b, lw - lc);
    }
    PMeasureResult res;
    res.omega0_star = std::exp(0.5 * (a + b));
    const double deficit = 0.5 * (b - a);
    // rounding noise in A and B around the threshold is not entanglement
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, std::abs(a), std::abs(b)});
    if (deficit <= noise) return res;
    res.neg_log_p = deficit;
    res.p = std::exp(-deficit);
    if (res.p < kMinP) {
        res.p = kMinP;
        res.underflow = true;
    }
    return res;
}

// Largest p <= 1 with gamma >= p * comparator (comparator positive definite).
inline double dominance_factor(const CovarianceMatrix& gamma, const CovarianceMatrix& comparator) {
    if (gamma.dim() != comparator.dim() || gamma.ordering() != comparator.ordering()) {
        throw std::invalid_argument("dominance_factor: dimension or ordering mismatch");
    }
    Eigen::LLT<Matrix> llt(comparator.matrix());
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("dominance_factor: comparator is not positive definite", 0.0);
    }
    const Matrix linv = llt.matrixL().solve(Matrix::Identity(gamma.dim(), gamma.dim()));
    const Matrix w = linv * gamma.matrix() * linv.transpose();
    return std::min(1.0, psd_margin(detail::symmetrized(w)));
}

struct SqueezedPair {
    double tau = 0.0;
};

// Two-mode squeezed CM (x1, p1, x2, p2), vacuum = identity.
inline CovarianceMatrix squeezed_cm(const SqueezedPair& s) {
    if (!(s.tau >= 0.0) || !std::isfinite(s.tau)) throw std::invalid_argument("squeezed_cm: tau must be >= 0");
    const double c = std::cosh(s.tau);
    const double sh = std::sinh(s.tau);
    Matrix m(4, 4);
    m << c, 0, sh, 0,
         0, c, 0, -sh,
         sh, 0, c, 0,
         0, -sh, 0, c;
    return CovarianceMatrix(std::move(m), Ordering::XpInterleaved);
}

// H(tau) = cosh^2 log2 cosh^2 - sinh^2 log2 sinh^2, written as
// log2(N + 1) + N log2(1 + 1/N) with N = sinh^2 tau so that large tau stays finite.
inline double hyperbolic_entropy(double tau) {
    if (!(tau >= 0.0) || std::isnan(tau)) throw std::invalid_argument("hyperbolic_entropy: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    if (std::isinf(tau)) return tau;
    constexpr double ln2 = std::numbers::ln2;
    const double e = std::exp(-2.0 * tau);
    const double log2_cosh2 = 2.0 * (tau + std::log1p(e) - ln2) / ln2;
    const double inv_n = 4.0 * e / (std::expm1(-2.0 * tau) * std::expm1(-2.0 * tau));  // 1 / sinh^2
    const double tail = inv_n == 0.0 ? 1.0 / ln2 : std::log1p(inv_n) / inv_n / ln2;
    return log2_cosh2 + tail;
}

// Delta(p) = H(-ln p) + 2 log2 p, with Delta(0) = 1/ln2 - 2.
inline double eof_correction(double p) {
    if (!(p >= 0.0) || p > 1.0) throw std::invalid_argument("eof_correction: p must be in [0, 1]");
    if (p == 0.0) return 1.0 / std::numbers::ln2 - 2.0;
    return hyperbolic_entropy(-std::log(p)) + 2.0 * std::log2(p);
}

// Lower bound H(-ln p) on the Gaussian entanglement of formation across a cut with P = p.
inline double eof_lower_bound(double p) {
    if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("eof_lower_bound: p must be in (0, 1]");
    return hyperbolic_entropy(-std::log(p));
}

inline double eof_lower_bound(const PMeasureResult& r) {
    return hyperbolic_entropy(r.neg_log_p);
}

}  // namespace harmsep
