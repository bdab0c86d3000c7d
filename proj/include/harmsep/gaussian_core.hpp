// gaussian_core.hpp: symplectic linear algebra for Gaussian covariance matrices
//
// Natural units (hbar = kB = 1) unless a caller passes hbar explicitly. The
// canonical internal ordering is XXPP (x_1..x_n, p_1..p_n); the interleaved
// ordering (x_1, p_1, x_2, p_2, ...) is accepted at boundaries.

#pragma once

#include "harmsep/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace harmsep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Ordering { XpInterleaved, Xxpp };

inline const char* to_string(Ordering o) noexcept {
    return o == Ordering::Xxpp ? "xxpp" : "xp_interleaved";
}

// Absolute tolerance on eigenvalues of difference matrices when declaring A >= 0.
inline constexpr double kTolPsd = 1e-9;

namespace detail {

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_symmetric(const Matrix& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, max_abs(m));
    return max_abs(m - m.transpose()) <= rel_tol * scale;
}

inline Matrix symmetrized(const Matrix& m) {
    return 0.5 * (m + m.transpose());
}

// Position of canonical coordinate `k` (given in `from` ordering) in `to` ordering.
inline Eigen::Index remap_index(Eigen::Index k, Eigen::Index n, Ordering from, Ordering to) {
    if (from == to) return k;
    if (from == Ordering::XpInterleaved) {
        // 2j -> j, 2j+1 -> n+j
        return (k % 2 == 0) ? k / 2 : n + k / 2;
    }
    // j -> 2j, n+j -> 2j+1
    return (k < n) ? 2 * k : 2 * (k - n) + 1;
}

inline Matrix permute(const Matrix& m, Eigen::Index n, Ordering from, Ordering to) {
    if (from == to) return m;
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const Eigen::Index pi = remap_index(i, n, from, to);
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out(pi, remap_index(j, n, from, to)) = m(i, j);
        }
    }
    return out;
}

inline Eigen::Index modes_of(const Matrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0 || m.rows() % 2 != 0) {
        std::ostringstream os;
        os << who << ": expected a non-empty 2n x 2n matrix, got " << m.rows() << 'x' << m.cols();
        throw std::invalid_argument(os.str());
    }
    return m.rows() / 2;
}

}  // namespace detail

// --------------------------- Symplectic form ---------------------------------

class SymplecticForm {
public:
    SymplecticForm(Matrix entries, Ordering ordering)
        : entries_(std::move(entries)), ordering_(ordering) {
        const Eigen::Index n = detail::modes_of(entries_, "SymplecticForm");
        const Matrix sq = entries_ * entries_ + Matrix::Identity(2 * n, 2 * n);
        if (detail::max_abs(sq) > 1e-12 || detail::max_abs(entries_ + entries_.transpose()) > 1e-12) {
            throw std::invalid_argument("SymplecticForm: matrix is not an antisymmetric square root of -I");
        }
    }

    Eigen::Index n_modes() const noexcept { return entries_.rows() / 2; }
    const Matrix& matrix() const noexcept { return entries_; }
    Ordering ordering() const noexcept { return ordering_; }

private:
    Matrix entries_;
    Ordering ordering_;
};

inline SymplecticForm standard_form(Eigen::Index n, Ordering ordering) {
    if (n < 1) throw std::invalid_argument("standard_form: n must be >= 1");
    Matrix s = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index x = detail::remap_index(2 * j, n, Ordering::XpInterleaved, ordering);
        const Eigen::Index p = detail::remap_index(2 * j + 1, n, Ordering::XpInterleaved, ordering);
        s(x, p) = 1.0;
        s(p, x) = -1.0;
    }
    return SymplecticForm(std::move(s), ordering);
}

// --------------------------- Covariance matrix -------------------------------

class CovarianceMatrix {
public:
    CovarianceMatrix(Matrix entries, Ordering ordering)
        : entries_(std::move(entries)), ordering_(ordering) {
        detail::modes_of(entries_, "CovarianceMatrix");
        if (!entries_.allFinite()) {
            throw std::invalid_argument("CovarianceMatrix: non-finite entry");
        }
        if (!detail::is_symmetric(entries_, 1e-12)) {
            throw std::invalid_argument("CovarianceMatrix: matrix is not symmetric");
        }
    }

    Eigen::Index n_modes() const noexcept { return entries_.rows() / 2; }
    Eigen::Index dim() const noexcept { return entries_.rows(); }
    const Matrix& matrix() const noexcept { return entries_; }
    Ordering ordering() const noexcept { return ordering_; }

    // 2x2 block of mode j (x_j, p_j).
    Eigen::Matrix2d mode_block(Eigen::Index j) const {
        const Eigen::Index n = n_modes();
        const Eigen::Index x = detail::remap_index(2 * j, n, Ordering::XpInterleaved, ordering_);
        const Eigen::Index p = detail::remap_index(2 * j + 1, n, Ordering::XpInterleaved, ordering_);
        Eigen::Matrix2d b;
        b << entries_(x, x), entries_(x, p), entries_(p, x), entries_(p, p);
        return b;
    }

private:
    Matrix entries_;
    Ordering ordering_;
};

inline CovarianceMatrix reorder(const CovarianceMatrix& gamma, Ordering target) {
    return CovarianceMatrix(
        detail::permute(gamma.matrix(), gamma.n_modes(), gamma.ordering(), target), target);
}

// Direct sum of single-mode 2x2 blocks, laid out in `ordering`.
inline CovarianceMatrix direct_sum(std::span<const Eigen::Matrix2d> blocks, Ordering ordering) {
    const auto n = static_cast<Eigen::Index>(blocks.size());
    if (n == 0) throw std::invalid_argument("direct_sum: no blocks");
    Matrix m = Matrix::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index x = detail::remap_index(2 * j, n, Ordering::XpInterleaved, ordering);
        const Eigen::Index p = detail::remap_index(2 * j + 1, n, Ordering::XpInterleaved, ordering);
        const auto& b = blocks[static_cast<std::size_t>(j)];
        m(x, x) = b(0, 0);
        m(x, p) = b(0, 1);
        m(p, x) = b(1, 0);
        m(p, p) = b(1, 1);
    }
    return CovarianceMatrix(std::move(m), ordering);
}

// --------------------------- Symplectic transform ----------------------------

class SymplecticTransform {
public:
    SymplecticTransform(Matrix entries, Ordering ordering)
        : entries_(std::move(entries)), ordering_(ordering) {
        const Eigen::Index n = detail::modes_of(entries_, "SymplecticTransform");
        const Matrix s = standard_form(n, ordering_).matrix();
        const double scale = std::max(1.0, detail::max_abs(entries_) * detail::max_abs(entries_));
        if (detail::max_abs(entries_ * s * entries_.transpose() - s) > 1e-10 * scale) {
            throw std::invalid_argument("SymplecticTransform: S sigma S^T != sigma");
        }
    }

    static SymplecticTransform identity(Eigen::Index n, Ordering ordering) {
        return SymplecticTransform(Matrix::Identity(2 * n, 2 * n), ordering);
    }

    Eigen::Index n_modes() const noexcept { return entries_.rows() / 2; }
    const Matrix& matrix() const noexcept { return entries_; }
    Ordering ordering() const noexcept { return ordering_; }

private:
    Matrix entries_;
    Ordering ordering_;
};

inline CovarianceMatrix apply_symplectic(const SymplecticTransform& s, const CovarianceMatrix& gamma) {
    if (s.n_modes() != gamma.n_modes()) {
        throw std::invalid_argument("apply_symplectic: dimension mismatch");
    }
    if (s.ordering() != gamma.ordering()) {
        throw std::invalid_argument("apply_symplectic: ordering mismatch");
    }
    const Matrix& m = s.matrix();
    return CovarianceMatrix(detail::symmetrized(m * gamma.matrix() * m.transpose()), gamma.ordering());
}

// --------------------------- Spectral kernels --------------------------------

// Minimum eigenvalue of a symmetric matrix; A >= 0 iff psd_margin(A) >= -kTolPsd.
inline double psd_margin(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw std::invalid_argument("psd_margin: matrix must be square and non-empty");
    }
    if (!detail::is_symmetric(a, 1e-12)) {
        throw std::invalid_argument("psd_margin: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(detail::symmetrized(a), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("psd_margin: eigensolver failed");
    return es.eigenvalues()(0);
}

// Q f(Lambda) Q^T for symmetric V = Q Lambda Q^T. Eigenvalues in [-1e-12, 0) are clamped to 0.
template <class F>
Matrix matrix_function(const Matrix& v, F&& f) {
    if (v.rows() != v.cols() || v.rows() == 0) {
        throw std::invalid_argument("matrix_function: matrix must be square and non-empty");
    }
    if (!detail::is_symmetric(v, 1e-12)) {
        throw std::invalid_argument("matrix_function: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(detail::symmetrized(v));
    if (es.info() != Eigen::Success) throw std::runtime_error("matrix_function: eigensolver failed");
    Vector lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < -1e-12) {
            throw NotPsdError("matrix_function: eigenvalue " + std::to_string(lam(i)) + " below -1e-12", lam(i));
        }
        if (lam(i) < 0.0) lam(i) = 0.0;
        const double fl = f(lam(i));
        if (!std::isfinite(fl)) {
            std::ostringstream os;
            os << "matrix_function: function undefined at eigenvalue " << lam(i);
            throw SingularSpectrum(os.str(), lam(i));
        }
        lam(i) = fl;
    }
    const Matrix& q = es.eigenvectors();
    return detail::symmetrized(q * lam.asDiagonal() * q.transpose());
}

// Symplectic eigenvalues of a symmetric positive-definite 2n x 2n matrix given in
// `ordering`, i.e. the moduli of the eigenvalues of i sigma M, one per +/- pair,
// in descending order. Evaluated through the Hermitian similar matrix
// i M^{1/2} sigma M^{1/2}.
inline std::vector<double> symplectic_eigenvalues(const Matrix& m, Ordering ordering) {
    const Eigen::Index n = detail::modes_of(m, "symplectic_eigenvalues");
    if (!detail::is_symmetric(m, 1e-12)) {
        throw std::invalid_argument("symplectic_eigenvalues: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(detail::symmetrized(m));
    if (es.info() != Eigen::Success) throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");
    const double lmin = es.eigenvalues()(0);
    if (!(lmin > 0.0)) {
        throw NotPositiveDefinite("symplectic_eigenvalues: matrix is not positive definite (min eigenvalue " +
                                      std::to_string(lmin) + ")",
                                  lmin);
    }
    const Matrix root = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    const Matrix s = standard_form(n, ordering).matrix();
    const Matrix a = root * s * root;  // real antisymmetric
    const Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    if (hs.info() != Eigen::Success) throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");

    std::vector<double> mod(static_cast<std::size_t>(2 * n));
    for (Eigen::Index i = 0; i < 2 * n; ++i) mod[static_cast<std::size_t>(i)] = std::abs(hs.eigenvalues()(i));
    std::sort(mod.begin(), mod.end(), std::greater<>());
    std::vector<double> out(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = 0.5 * (mod[2 * k] + mod[2 * k + 1]);
    return out;
}

inline std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& gamma) {
    return symplectic_eigenvalues(gamma.matrix(), gamma.ordering());
}

// Minimum eigenvalue of the Hermitian matrix gamma + i (hbar/2) sigma.
// A bona fide quantum covariance matrix has margin >= 0.
inline double uncertainty_margin(const CovarianceMatrix& gamma, double hbar = 1.0) {
    const Matrix s = standard_form(gamma.n_modes(), gamma.ordering()).matrix();
    Eigen::MatrixXcd h = gamma.matrix().cast<std::complex<double>>();
    h += std::complex<double>(0.0, 0.5 * hbar) * s.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("uncertainty_margin: eigensolver failed");
    return es.eigenvalues()(0);
}

inline bool is_physical(const CovarianceMatrix& gamma, double hbar = 1.0, double tol = 1e-10) {
    return uncertainty_margin(gamma, hbar) >= -tol;
}

}  // namespace harmsep
