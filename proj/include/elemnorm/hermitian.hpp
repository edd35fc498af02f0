#pragma once

#include <string_view>

#include "elemnorm/types.hpp"

namespace elemnorm {

namespace tol {
/// Relative bound on ||M - M*||_max for inputs accepted as Hermitian.
inline constexpr double hermitian = 1e-9;
/// Eigenvalues in [-psd_clamp * max|lambda|, 0) are clamped to zero.
inline constexpr double psd_clamp = 1e-9;
}  // namespace tol

void require_finite(const Matrix& m, std::string_view what);
void require_square(const Matrix& m, std::string_view what);

/// Largest absolute entry.
double max_abs(const Matrix& m);

/// Hermitian matrix. The stored entries are exactly Hermitian: the checked
/// constructor rejects inputs outside `tol::hermitian`, then symmetrizes.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const Matrix& m);

    /// For matrices that are Hermitian analytically (Gram forms); no rejection.
    static HermitianMatrix symmetrized(const Matrix& m);

    Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }

private:
    struct Unchecked {};
    HermitianMatrix(Unchecked, Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

struct EigenDecomposition {
    RealVector values;  ///< non-increasing
    Matrix vectors;     ///< orthonormal columns, vectors.col(i) <-> values(i)
};

EigenDecomposition eig_hermitian(const HermitianMatrix& m);

/// Positive semidefinite matrix. Construction validates and caches the
/// clamped spectral decomposition that the square root and means reuse.
class PsdMatrix {
public:
    explicit PsdMatrix(const Matrix& m);
    explicit PsdMatrix(const HermitianMatrix& m);

    static PsdMatrix from_gram(const Matrix& m);
    static PsdMatrix identity(Index dim);

    Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    const EigenDecomposition& spectrum() const { return eig_; }
    /// Most negative eigenvalue that was clamped to zero (0 if none).
    double eigen_floor() const { return floor_; }
    double trace() const { return eig_.values.sum(); }

private:
    Matrix m_;
    EigenDecomposition eig_;
    double floor_ = 0.0;
};

PsdMatrix psd_sqrt(const PsdMatrix& x);
double trace_norm(const Matrix& m);
double spectral_norm(const Matrix& m);
RealVector singular_values(const Matrix& m);

namespace detail {

/// Descending eigen-decomposition of a matrix assumed Hermitian (lower triangle used).
EigenDecomposition eig_sym(const Matrix& m);
/// PSD square root with negative eigenvalues clamped to zero; no validation.
Matrix sqrt_clamped(const Matrix& m);
/// U_r V_r^* from the SVD of m, keeping singular values above rel_tol * sigma_max.
/// Returns the trace norm through `trace_norm` when non-null.
Matrix polar_factor(const Matrix& m, double* trace_norm, double rel_tol = 1e-10);

}  // namespace detail

}  // namespace elemnorm
