// thermal.hpp: Gibbs-state covariance matrices in site and normal-mode bases

#pragma once

#include "harmsep/errors.hpp"
#include "harmsep/gaussian_core.hpp"
#include "harmsep/hamiltonians.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace harmsep {

struct ThermalPoint {
    double beta = 1.0;  // inverse energy, 1 / (kB T)
    double hbar = 1.0;
    double k_B = 1.0;

    void validate() const {
        if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("ThermalPoint: beta must be positive and finite");
        if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("ThermalPoint: hbar must be positive");
        if (!(k_B > 0.0) || !std::isfinite(k_B)) throw std::invalid_argument("ThermalPoint: k_B must be positive");
    }

    double temperature() const noexcept { return 1.0 / (k_B * beta); }

    static ThermalPoint from_temperature(double t, double hbar = 1.0, double k_B = 1.0) {
        return ThermalPoint{1.0 / (k_B * t), hbar, k_B};
    }
};

// coth(x) for x > 0 without overflow at large x or cancellation at small x.
inline double coth_positive(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("coth_positive: x must be > 0");
    if (x < 1e-4) return 1.0 / x + x / 3.0;
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

struct ModeBlock {
    double omega = 1.0;
    double mass = 1.0;
    Eigen::Matrix2d block = Eigen::Matrix2d::Identity();
    bool unit_free = false;
};

// Thermal CM of one mode. With units: diag(hbar/(2 m w), m hbar w / 2) * coth(beta hbar w / 2).
// Unit-free: the length unit is fixed so that both entries equal 1/2 coth(beta hbar w / 2).
inline ModeBlock mode_block(double omega, double mass, const ThermalPoint& t, bool unit_free) {
    t.validate();
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw ZeroModeError("mode_block: frequency must be > 0", omega);
    }
    const double c = coth_positive(0.5 * t.beta * t.hbar * omega);
    ModeBlock mb{omega, mass, Eigen::Matrix2d::Zero(), unit_free};
    if (unit_free) {
        mb.block(0, 0) = 0.5 * c;
        mb.block(1, 1) = 0.5 * c;
    } else {
        mb.block(0, 0) = t.hbar / (2.0 * mass * omega) * c;
        mb.block(1, 1) = mass * t.hbar * omega / 2.0 * c;
    }
    return mb;
}

// Site-basis thermal CM of a kinetic + potential Hamiltonian, XXPP:
//   gamma_x = (hbar/2m) V^{-1/2} coth(beta hbar V^{1/2} / 2)
//   gamma_p = (m hbar/2) V^{1/2} coth(beta hbar V^{1/2} / 2)
inline CovarianceMatrix thermal_cm(const PotentialMatrix& pm, const ThermalPoint& t) {
    t.validate();
    constexpr double kEpsV = 1e-10;
    const double lmin = pm.eigenvalues()(0);
    if (!(lmin > kEpsV)) {
        std::ostringstream os;
        os << "thermal_cm: potential has a zero mode (eigenvalue " << lmin
           << "); a free centre of mass has no thermal state, add an on-site trap";
        throw ZeroModeError(os.str(), lmin);
    }
    const double m = pm.mass();
    const double bh = t.beta * t.hbar;
    const Matrix gx = matrix_function(pm.v(), [&](double lam) {
        const double w = std::sqrt(lam);
        return t.hbar / (2.0 * m) * coth_positive(0.5 * bh * w) / w;
    });
    const Matrix gp = matrix_function(pm.v(), [&](double lam) {
        const double w = std::sqrt(lam);
        return m * t.hbar / 2.0 * w * coth_positive(0.5 * bh * w);
    });
    const Eigen::Index n = pm.n();
    Matrix g = Matrix::Zero(2 * n, 2 * n);
    g.topLeftCorner(n, n) = gx;
    g.bottomRightCorner(n, n) = gp;
    return CovarianceMatrix(std::move(g), Ordering::Xxpp);
}

// Normal-mode-basis thermal CM: direct sum of mode blocks, XXPP.
inline CovarianceMatrix normal_mode_cm(const FrequencySpectrum& spec, const ThermalPoint& t, bool unit_free,
                                       double mass = 1.0) {
    std::vector<Eigen::Matrix2d> blocks;
    blocks.reserve(spec.size());
    for (double w : spec.frequencies()) blocks.push_back(mode_block(w, mass, t, unit_free).block);
    return direct_sum(blocks, Ordering::Xxpp);
}

// Minimum-uncertainty single-mode CM diag(hbar/(2 m w0), m hbar w0 / 2).
inline Eigen::Matrix2d eta_matrix(double omega0, double mass = 1.0, double hbar = 1.0) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("eta_block: omega0 must be > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("eta_block: mass must be > 0");
    Eigen::Matrix2d e = Eigen::Matrix2d::Zero();
    e(0, 0) = hbar / (2.0 * mass * omega0);
    e(1, 1) = mass * hbar * omega0 / 2.0;
    return e;
}

inline CovarianceMatrix eta_block(double omega0, double mass = 1.0, double hbar = 1.0) {
    return CovarianceMatrix(eta_matrix(omega0, mass, hbar), Ordering::Xxpp);
}

// n copies of eta(w0) laid out in `ordering`.
inline CovarianceMatrix eta_direct_sum(Eigen::Index n, double omega0, Ordering ordering, double mass = 1.0,
                                       double hbar = 1.0) {
    const std::vector<Eigen::Matrix2d> blocks(static_cast<std::size_t>(n), eta_matrix(omega0, mass, hbar));
    return direct_sum(blocks, ordering);
}

}  // namespace harmsep
