// septemp.hpp: scaling function, critical temperatures and separability witnesses
//
// For kinetic + potential Hamiltonians the thermal state at inverse temperature
// beta dominates n copies of one minimum-uncertainty comparator eta(w0) iff
//     beta <= (1 / hbar w0) min{ s(w_min / w0), s(w_max / w0) },
// with the scaling function s(x) = (1/x) ln|(1+x)/(1-x)|. Maximising over w0 gives
// beta_crit = sigma(r) / (hbar w_max), r = w_max / w_min. The bound is exact when
// the site permutations leaving H invariant act transitively.

#pragma once

#include "harmsep/errors.hpp"
#include "harmsep/gaussian_core.hpp"
#include "harmsep/hamiltonians.hpp"
#include "harmsep/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace harmsep {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Spectral ratios at or beyond this are treated as r = infinity.
inline constexpr double kRatioInfinity = 1e12;

namespace detail {

// s(e^v), accurate for v near 0 on either side of the singularity.
inline double scaling_s_log(double v) {
    const double x = std::exp(v);
    if (v < 0.0) {
        const double one_minus_x = -std::expm1(v);
        return std::log1p(2.0 * x / one_minus_x) / x;
    }
    const double x_minus_one = std::expm1(v);
    return std::log1p(2.0 / x_minus_one) / x;
}

// Bisection for the sign change of a decreasing function on the open interval (lo, hi).
// Endpoints are never evaluated.
template <class G>
double bisect_open(G&& g, double lo, double hi, int max_iter = 200) {
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Unique t > 1 with s(t) = 2.
inline double t_infinity() {
    static const double t = std::exp(bisect_open(
        [](double v) { return std::log(scaling_s_log(v)) - std::log(2.0); }, 0.0, std::log(2.0)));
    return t;
}

// Unique 1 < t < r with s(t) = s(t/r); the comparison is made on ln s.
inline double t_star(double r) {
    if (r >= kRatioInfinity) return t_infinity();
    const double len = std::log(r);
    const double v = bisect_open(
        [len](double u) { return std::log(scaling_s_log(u)) - std::log(scaling_s_log(u - len)); }, 0.0, len);
    return std::exp(v);
}

// s(x) with the limits s(0) = 2 and s(1) = +inf.
inline double scaling_s_extended(double x) {
    if (x == 0.0) return 2.0;
    if (x == 1.0) return kInf;
    const double v = std::log(x);
    if (v == 0.0) return kInf;
    return scaling_s_log(v);
}

}  // namespace detail

// s(x) = (1/x) ln|(1+x)/(1-x)| for x > 0, x != 1.
inline double scaling_s(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("scaling_s: x must be positive and finite");
    if (x == 1.0) throw std::domain_error("scaling_s: singular at x = 1");
    if (x < 1.0) return 2.0 * std::atanh(x) / x;
    return std::log1p(2.0 / (x - 1.0)) / x;
}

// sigma(r) = t s(t) for the unique 1 <= t <= r with s(t) = s(t/r).
// sigma(1) = +inf; sigma(r >= 1e12) = sigma(inf) = 2 t_inf.
inline double sigma(double r) {
    if (!(r >= 1.0)) throw std::invalid_argument("sigma: r must be >= 1");
    if (r == 1.0) return kInf;
    const double t = detail::t_star(r);
    return t * detail::scaling_s_log(std::log(t));
}

// Largest beta certified separable with comparator frequency w0.
inline double beta_of_omega0(const FrequencySpectrum& spec, double omega0, double hbar = 1.0) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("beta_of_omega0: omega0 must be > 0");
    const double lo = detail::scaling_s_extended(spec.omega_min() / omega0);
    const double hi = detail::scaling_s_extended(spec.omega_max() / omega0);
    return std::min(lo, hi) / (hbar * omega0);
}

enum class CriticalMethod { SymmetricExact, SymmetricBound, RoughBound };

inline const char* to_string(CriticalMethod m) noexcept {
    switch (m) {
        case CriticalMethod::SymmetricExact: return "symmetric_exact";
        case CriticalMethod::SymmetricBound: return "symmetric_bound";
        case CriticalMethod::RoughBound: return "rough_bound";
    }
    return "unknown";
}

struct CriticalResult {
    double beta_crit = kInf;
    double sigma_r = kInf;
    double t_star = 1.0;
    double omega0_star = 0.0;
    bool exact = false;
    CriticalMethod method = CriticalMethod::SymmetricBound;
};

// beta_crit = sigma(r) / (hbar w_max), attained at w0* = w_max / t*.
// `symmetric_exact` is the caller's certificate that the site symmetry group acts
// transitively (e.g. is_shift_invariant); without it the value is a bound only.
inline CriticalResult critical_beta(const FrequencySpectrum& spec, bool symmetric_exact, double hbar = 1.0) {
    if (!(spec.omega_max() > 0.0)) {
        throw InvalidHamiltonian("critical_beta: spectrum has no non-zero frequency");
    }
    CriticalResult res;
    res.exact = symmetric_exact;
    res.method = symmetric_exact ? CriticalMethod::SymmetricExact : CriticalMethod::SymmetricBound;
    const double r = spec.ratio();
    if (r == 1.0) {
        res.omega0_star = spec.omega_min();
        return res;
    }
    res.t_star = detail::t_star(r);
    res.sigma_r = res.t_star * detail::scaling_s_log(std::log(res.t_star));
    res.beta_crit = res.sigma_r / (hbar * spec.omega_max());
    res.omega0_star = spec.omega_max() / res.t_star;
    return res;
}

// Coarse bound (1 / hbar w_max) ln((2 l0 + 1) / (2 l0 - 1)) from comparing the
// smallest normal-mode eigenvalue with the largest comparator eigenvalue l0.
inline double rough_bound(double lambda0, double omega_max, double hbar = 1.0) {
    if (!(lambda0 > 0.5)) throw std::invalid_argument("rough_bound: lambda0 must exceed 1/2");
    if (!(omega_max > 0.0)) throw std::invalid_argument("rough_bound: omega_max must be > 0");
    return std::log1p(2.0 / (2.0 * lambda0 - 1.0)) / (hbar * omega_max);
}

// --------------------------- Separability witness search ---------------------

enum class SeparabilityStatus { SeparableCertified, EntangledCertified, Unknown };

inline const char* to_string(SeparabilityStatus s) noexcept {
    switch (s) {
        case SeparabilityStatus::SeparableCertified: return "SEPARABLE_CERTIFIED";
        case SeparabilityStatus::EntangledCertified: return "ENTANGLED_CERTIFIED";
        case SeparabilityStatus::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

struct SeparabilityVerdict {
    SeparabilityStatus status = SeparabilityStatus::Unknown;
    std::optional<double> witness_omega0;
    std::vector<double> witness_per_mode;  // set when certified mode by mode
    double margin = -kInf;                 // psd margin of the best comparator found
    double beta = 0.0;
    double beta_crit = kInf;
};

struct WitnessSearchOptions {
    int grid_points = 512;
    int refine_iterations = 200;
    double tol_psd = kTolPsd;
};

namespace detail {

// psd_margin(gamma - (+) eta(w0)) for an XXPP gamma.
inline double comparator_margin(const Matrix& gxxpp, double omega0, double mass, double hbar) {
    const Eigen::Index n = gxxpp.rows() / 2;
    Matrix d = gxxpp;
    const double a = hbar / (2.0 * mass * omega0);
    const double b = mass * hbar * omega0 / 2.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        d(j, j) -= a;
        d(n + j, n + j) -= b;
    }
    return psd_margin(d);
}

inline bool is_diagonal(const Matrix& m, double rel_tol) {
    const double scale = m.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (i != j && std::abs(m(i, j)) > rel_tol * scale) return false;
    return true;
}

}  // namespace detail

// Full separability of gamma into its physical sites, tested against comparators
// (+) eta(w0) for w0 on a log grid over [w_min, w_max] refined by golden section.
// A diagonal gamma (decoupled modes) is certified with one comparator per mode.
// Entanglement is only reported when `exact` is set and beta > beta_crit.
inline SeparabilityVerdict check_full_separability(const CovarianceMatrix& gamma, const FrequencySpectrum& spec,
                                                   const ThermalPoint& t, bool exact, double mass = 1.0,
                                                   const WitnessSearchOptions& opts = {}) {
    t.validate();
    if (static_cast<std::size_t>(gamma.n_modes()) != spec.size()) {
        throw std::invalid_argument("check_full_separability: CM and spectrum sizes differ");
    }
    if (!(spec.omega_max() > 0.0)) throw InvalidHamiltonian("check_full_separability: spectrum is all zero");

    const Matrix g = reorder(gamma, Ordering::Xxpp).matrix();
    const double hbar = t.hbar;
    SeparabilityVerdict v;
    v.beta = t.beta;
    v.beta_crit = critical_beta(spec, exact, hbar).beta_crit;

    const double w_lo = spec.omega_min() > 0.0 ? spec.omega_min() : spec.omega_max() * 1e-12;
    const double u_lo = std::log(w_lo);
    const double u_hi = std::log(spec.omega_max());
    const int points = (u_hi > u_lo) ? std::max(2, opts.grid_points) : 1;
    auto grid_u = [&](int i) { return points == 1 ? u_lo : u_lo + (u_hi - u_lo) * i / (points - 1); };
    auto margin_at = [&](double u) { return detail::comparator_margin(g, std::exp(u), mass, hbar); };

    int best = 0;
    double best_margin = -kInf;
    for (int i = 0; i < points; ++i) {
        const double m = margin_at(grid_u(i));
        if (m >= -opts.tol_psd) {
            v.status = SeparabilityStatus::SeparableCertified;
            v.witness_omega0 = std::exp(grid_u(i));
            v.margin = m;
            return v;
        }
        if (m > best_margin) {
            best_margin = m;
            best = i;
        }
    }

    // Golden-section refinement between the neighbours of the best grid point.
    double best_u = grid_u(best);
    if (points > 1) {
        double a = grid_u(std::max(0, best - 1));
        double b = grid_u(std::min(points - 1, best + 1));
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - invphi * (b - a);
        double d = a + invphi * (b - a);
        double fc = margin_at(c);
        double fd = margin_at(d);
        for (int it = 0; it < opts.refine_iterations && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - invphi * (b - a);
                fc = margin_at(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = margin_at(d);
            }
        }
        const double u = fc > fd ? c : d;
        const double m = std::max(fc, fd);
        if (m > best_margin) {
            best_margin = m;
            best_u = u;
        }
    }
    v.margin = best_margin;
    if (best_margin >= -opts.tol_psd) {
        v.status = SeparabilityStatus::SeparableCertified;
        v.witness_omega0 = std::exp(best_u);
        return v;
    }

    // Decoupled modes: each diagonal block dominates its own pure comparator.
    if (detail::is_diagonal(g, 1e-10)) {
        const Eigen::Index n = gamma.n_modes();
        std::vector<double> w(static_cast<std::size_t>(n));
        Matrix d = g;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double gx = g(j, j);
            const double gp = g(n + j, n + j);
            const double wj = std::sqrt(gp / gx) / mass;
            w[static_cast<std::size_t>(j)] = wj;
            d(j, j) -= hbar / (2.0 * mass * wj);
            d(n + j, n + j) -= mass * hbar * wj / 2.0;
        }
        const double m = psd_margin(d);
        if (m >= -opts.tol_psd) {
            v.status = SeparabilityStatus::SeparableCertified;
            v.witness_per_mode = std::move(w);
            v.margin = m;
            return v;
        }
    }

    v.status = (exact && t.beta > v.beta_crit) ? SeparabilityStatus::EntangledCertified : SeparabilityStatus::Unknown;
    return v;
}

}  // namespace harmsep
