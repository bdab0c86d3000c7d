// hamiltonians.hpp: quadratic Hamiltonians and their normal-mode spectra

#pragma once

#include "harmsep/errors.hpp"
#include "harmsep/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace harmsep {

// Normal-mode frequencies, ascending. Multiplicities are kept.
class FrequencySpectrum {
public:
    explicit FrequencySpectrum(std::vector<double> frequencies) : freqs_(std::move(frequencies)) {
        if (freqs_.empty()) throw std::invalid_argument("FrequencySpectrum: empty spectrum");
        for (double w : freqs_) {
            if (!std::isfinite(w) || w < 0.0) {
                throw std::invalid_argument("FrequencySpectrum: frequencies must be finite and >= 0");
            }
        }
        std::sort(freqs_.begin(), freqs_.end());
    }

    const std::vector<double>& frequencies() const noexcept { return freqs_; }
    std::size_t size() const noexcept { return freqs_.size(); }
    double omega_min() const noexcept { return freqs_.front(); }
    double omega_max() const noexcept { return freqs_.back(); }

    // omega_max / omega_min; +inf when the lowest mode is free.
    double ratio() const noexcept {
        if (omega_min() == 0.0) return std::numeric_limits<double>::infinity();
        return omega_max() / omega_min();
    }

    // Distinct frequencies (exact comparison), for reporting.
    std::vector<double> distinct() const {
        std::vector<double> d = freqs_;
        d.erase(std::unique(d.begin(), d.end()), d.end());
        return d;
    }

private:
    std::vector<double> freqs_;
};

// H = sum_j p_j^2 / 2m + (m/2) sum_jk V_jk x_j x_k, V in units of frequency^2.
class PotentialMatrix {
public:
    explicit PotentialMatrix(Matrix v, double mass = 1.0) : v_(std::move(v)), mass_(mass) {
        if (v_.rows() != v_.cols() || v_.rows() == 0) {
            throw std::invalid_argument("PotentialMatrix: V must be square and non-empty");
        }
        if (!(mass_ > 0.0) || !std::isfinite(mass_)) {
            throw std::invalid_argument("PotentialMatrix: mass must be positive");
        }
        if (!v_.allFinite() || !detail::is_symmetric(v_, 1e-12)) {
            throw InvalidHamiltonian("PotentialMatrix: V must be finite and symmetric");
        }
        v_ = detail::symmetrized(v_);
        Eigen::SelfAdjointEigenSolver<Matrix> es(v_, Eigen::EigenvaluesOnly);
        eigenvalues_ = es.eigenvalues();
        if (eigenvalues_(0) < -1e-12) {
            std::ostringstream os;
            os << "potential matrix is not positive semi-definite: min eigenvalue " << eigenvalues_(0);
            throw NotPsdError(os.str(), eigenvalues_(0));
        }
    }

    Eigen::Index n() const noexcept { return v_.rows(); }
    const Matrix& v() const noexcept { return v_; }
    double mass() const noexcept { return mass_; }
    // Ascending eigenvalues of V (the squared normal-mode frequencies).
    const Vector& eigenvalues() const noexcept { return eigenvalues_; }

private:
    Matrix v_;
    double mass_;
    Vector eigenvalues_;
};

// H = R^T C R for the canonical vector R in the given ordering (no linear terms).
class QuadraticCoefficients {
public:
    QuadraticCoefficients(Matrix c, Ordering ordering) : c_(std::move(c)), ordering_(ordering) {
        detail::modes_of(c_, "QuadraticCoefficients");
        if (!c_.allFinite() || !detail::is_symmetric(c_, 1e-12)) {
            throw InvalidHamiltonian("QuadraticCoefficients: C must be finite and symmetric");
        }
        c_ = detail::symmetrized(c_);
        Eigen::SelfAdjointEigenSolver<Matrix> es(c_, Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues()(0);
        if (!(lmin > 0.0)) {
            throw NotPositiveDefinite("QuadraticCoefficients: C is not positive definite (min eigenvalue " +
                                          std::to_string(lmin) + ")",
                                      lmin);
        }
    }

    Eigen::Index n_modes() const noexcept { return c_.rows() / 2; }
    const Matrix& matrix() const noexcept { return c_; }
    Ordering ordering() const noexcept { return ordering_; }

private:
    Matrix c_;
    Ordering ordering_;
};

// Ring of n equal oscillators: on-site trap delta, nearest-neighbour coupling omega
// (both frequencies), periodic boundary.
struct RingParams {
    int n = 1;
    double omega = 1.0;
    double delta = 0.0;
    double mass = 1.0;

    void validate() const {
        if (n < 1) throw std::invalid_argument("RingParams: n must be >= 1");
        if (!(omega >= 0.0) || !std::isfinite(omega)) throw std::invalid_argument("RingParams: omega must be >= 0");
        if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("RingParams: delta must be >= 0");
        if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("RingParams: mass must be > 0");
    }
};

// Circulant V: diagonal delta^2 + 2 omega^2, neighbours -omega^2 (indices mod n).
// Contributions are accumulated so that n = 1 and n = 2 expand consistently.
inline PotentialMatrix ring_potential(const RingParams& p) {
    p.validate();
    const Eigen::Index n = p.n;
    const double w2 = p.omega * p.omega;
    Matrix v = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index next = (j + 1) % n;
        v(j, j) += p.delta * p.delta;
        // omega^2 (x_next - x_j)^2 split symmetrically over the quadratic form
        v(j, j) += w2;
        v(next, next) += w2;
        v(j, next) -= w2;
        v(next, j) -= w2;
    }
    return PotentialMatrix(std::move(v), p.mass);
}

// omega_j = sqrt(4 omega^2 sin^2(pi j / n) + delta^2), j = 0..n-1.
inline FrequencySpectrum ring_dispersion(const RingParams& p) {
    p.validate();
    std::vector<double> w(static_cast<std::size_t>(p.n));
    for (int j = 0; j < p.n; ++j) {
        const double s = std::sin(std::numbers::pi * j / p.n);
        w[static_cast<std::size_t>(j)] = std::sqrt(4.0 * p.omega * p.omega * s * s + p.delta * p.delta);
    }
    return FrequencySpectrum(std::move(w));
}

inline FrequencySpectrum spectrum_from_potential(const PotentialMatrix& pm) {
    const Vector& lam = pm.eigenvalues();
    std::vector<double> w(static_cast<std::size_t>(lam.size()));
    for (Eigen::Index i = 0; i < lam.size(); ++i) w[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, lam(i)));
    return FrequencySpectrum(std::move(w));
}

// Normal-mode frequencies are twice the symplectic eigenvalues of C.
inline FrequencySpectrum spectrum_from_quadratic(const QuadraticCoefficients& c) {
    std::vector<double> nu = symplectic_eigenvalues(c.matrix(), c.ordering());
    for (double& x : nu) x *= 2.0;
    return FrequencySpectrum(std::move(nu));
}

// XXPP coefficient matrix (m/2) V (+) (1/2m) I of a kinetic + potential Hamiltonian.
inline QuadraticCoefficients kinetic_potential_coefficients(const PotentialMatrix& pm) {
    const Eigen::Index n = pm.n();
    Matrix c = Matrix::Zero(2 * n, 2 * n);
    c.topLeftCorner(n, n) = 0.5 * pm.mass() * pm.v();
    c.bottomRightCorner(n, n) = Matrix::Identity(n, n) / (2.0 * pm.mass());
    return QuadraticCoefficients(std::move(c), Ordering::Xxpp);
}

// True iff V commutes with the cyclic site shift. A true result certifies a
// transitive symmetry group (the cyclic group) acting on the sites.
inline bool is_shift_invariant(const PotentialMatrix& pm, double tol = 1e-10) {
    const Eigen::Index n = pm.n();
    const Matrix& v = pm.v();
    const double scale = std::max(1.0, detail::max_abs(v));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(v((i + 1) % n, (j + 1) % n) - v(i, j)) > tol * scale) return false;
        }
    }
    return true;
}

}  // namespace harmsep
