#pragma once

#include "elemnorm/hermitian.hpp"

namespace elemnorm {

/// Tracial geometric mean trace sqrt(sqrt(X) Y sqrt(X)), evaluated as the sum
/// of square roots of the eigenvalues of the Hermitian sqrt(X) Y sqrt(X).
double tgm(const PsdMatrix& x, const PsdMatrix& y);

/// Same quantity from the (non-Hermitian) spectrum of X Y. Kept as an
/// independent evaluation route for cross-checking.
double tgm_product_spectrum(const PsdMatrix& x, const PsdMatrix& y);

struct SharpMean {
    PsdMatrix mean;
    /// Multiple of the identity added to a singular base X (0 when X is definite).
    double regularization = 0.0;
};

/// X # Y = sqrt(X) (X^{-1/2} Y X^{-1/2})^{1/2} sqrt(X).
/// A singular X is replaced by X + eps I, eps = 1e-10 trace(X) / dim.
SharpMean sharp_mean(const PsdMatrix& x, const PsdMatrix& y);

/// PXP + (I-P)X(I-P) for an orthogonal projection P.
PsdMatrix pinch(const PsdMatrix& x, const Matrix& projection);

struct TransformCheck {
    double lhs = 0.0;  ///< tgm(a* X a, a^{-1} Y a^{-*})
    double rhs = 0.0;  ///< tgm(X, Y)
    double condition = 1.0;
    bool within_contract = false;  ///< |lhs - rhs| <= 1e-7 (1 + rhs) cond(a)
};

TransformCheck tgm_transform_check(const PsdMatrix& x, const PsdMatrix& y, const Matrix& alpha);

/// 2-norm condition number; throws IllConditioned above `limit`.
double checked_condition(const Matrix& alpha, double limit = 1e12);

}  // namespace elemnorm
