#include "elemnorm/tgm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace elemnorm {

namespace {

void require_same_dim(const PsdMatrix& x, const PsdMatrix& y) {
    if (x.dim() != y.dim()) {
        std::ostringstream os;
        os << "tgm arguments have dimensions " << x.dim() << " and " << y.dim();
        throw Error(ErrorCode::DimMismatch, os.str());
    }
}

Matrix from_spectrum(const EigenDecomposition& e, const RealVector& values) {
    return e.vectors * values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

/// Eigenvalues below this are roundoff from a spectrum of size `scale`.
double noise_floor(Index dim, double scale) {
    return 8.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(dim) * std::max(scale, 0.0);
}

/// sum of sqrt(lambda) with roundoff-level eigenvalues dropped; sqrt would
/// otherwise turn 1e-17 noise into 3e-9.
double sqrt_trace(const RealVector& values, double scale) {
    const double floor = noise_floor(values.size(), scale);
    double sum = 0.0;
    for (Index i = 0; i < values.size(); ++i) {
        if (values(i) > floor) {
            sum += std::sqrt(values(i));
        }
    }
    return sum;
}

double top(const PsdMatrix& m) {
    return std::max(m.spectrum().values(0), 0.0);
}

}  // namespace

double tgm(const PsdMatrix& x, const PsdMatrix& y) {
    require_same_dim(x, y);
    const double x_floor = noise_floor(x.dim(), top(x));
    const RealVector roots =
        x.spectrum().values.unaryExpr([x_floor](double v) { return v > x_floor ? std::sqrt(v) : 0.0; });
    const Matrix root = from_spectrum(x.spectrum(), roots);
    const Matrix inner = root * y.matrix() * root;
    const EigenDecomposition e = eig_hermitian(HermitianMatrix::symmetrized(inner));
    return sqrt_trace(e.values, top(x) * top(y));
}

double tgm_product_spectrum(const PsdMatrix& x, const PsdMatrix& y) {
    require_same_dim(x, y);
    const Matrix product = x.matrix() * y.matrix();
    Eigen::ComplexEigenSolver<Matrix> solver(product, false);
    return sqrt_trace(solver.eigenvalues().real(), top(x) * top(y));
}

SharpMean sharp_mean(const PsdMatrix& x, const PsdMatrix& y) {
    require_same_dim(x, y);
    const Index dim = x.dim();
    EigenDecomposition e = x.spectrum();
    const double top = e.values(0);
    double eps = 0.0;
    if (top <= 0.0 || e.values(dim - 1) <= 1e-12 * top) {
        eps = 1e-10 * x.trace() / static_cast<double>(dim);
        if (!(eps > 0.0)) {
            throw Error(ErrorCode::SingularBase, "base matrix of the # mean is zero");
        }
        e.values.array() += eps;
    }
    const Matrix root = from_spectrum(e, e.values.cwiseSqrt());
    const Matrix inv_root = from_spectrum(e, e.values.cwiseSqrt().cwiseInverse());
    const Matrix inner = inv_root * y.matrix() * inv_root;
    const Matrix middle = detail::sqrt_clamped((inner + inner.adjoint()) / 2.0);
    return SharpMean{PsdMatrix::from_gram(root * middle * root), eps};
}

PsdMatrix pinch(const PsdMatrix& x, const Matrix& projection) {
    require_square(projection, "projection");
    if (projection.rows() != x.dim()) {
        throw Error(ErrorCode::DimMismatch, "projection and matrix dimensions differ");
    }
    const Matrix& p = projection;
    if (max_abs(p * p - p) > 1e-9 || max_abs(p - p.adjoint()) > 1e-9) {
        throw Error(ErrorCode::InvalidProjection, "P is not an orthogonal projection (P^2 = P = P*)");
    }
    const Matrix q = Matrix::Identity(x.dim(), x.dim()) - p;
    return PsdMatrix::from_gram(p * x.matrix() * p + q * x.matrix() * q);
}

double checked_condition(const Matrix& alpha, double limit) {
    require_square(alpha, "alpha");
    const RealVector s = singular_values(alpha);
    const double smallest = s(s.size() - 1);
    const double cond = smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity();
    if (!(cond <= limit)) {
        std::ostringstream os;
        os << "condition number " << cond << " exceeds " << limit;
        throw Error(ErrorCode::IllConditioned, os.str());
    }
    return cond;
}

TransformCheck tgm_transform_check(const PsdMatrix& x, const PsdMatrix& y, const Matrix& alpha) {
    require_same_dim(x, y);
    if (alpha.rows() != x.dim() || alpha.cols() != x.dim()) {
        throw Error(ErrorCode::DimMismatch, "alpha must match the tgm dimension");
    }
    TransformCheck out;
    out.condition = checked_condition(alpha);
    const Matrix inv = alpha.partialPivLu().inverse();
    const PsdMatrix xt = PsdMatrix::from_gram(alpha.adjoint() * x.matrix() * alpha);
    const PsdMatrix yt = PsdMatrix::from_gram(inv * y.matrix() * inv.adjoint());
    out.lhs = tgm(xt, yt);
    out.rhs = tgm(x, y);
    out.within_contract = std::abs(out.lhs - out.rhs) <= 1e-7 * (1.0 + out.rhs) * out.condition;
    return out;
}

}  // namespace elemnorm
