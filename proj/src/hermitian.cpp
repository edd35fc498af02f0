#include "elemnorm/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elemnorm {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::SingularBase: return "SingularBase";
        case ErrorCode::InvalidProjection: return "InvalidProjection";
        case ErrorCode::IllConditioned: return "IllConditioned";
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::ResourceGuard: return "ResourceGuard";
    }
    return "Unknown";
}

void require_finite(const Matrix& m, std::string_view what) {
    if (m.size() == 0) {
        throw Error(ErrorCode::InvalidInput, std::string(what) + " is empty");
    }
    if (!m.allFinite()) {
        throw Error(ErrorCode::InvalidInput, std::string(what) + " has non-finite entries");
    }
}

void require_square(const Matrix& m, std::string_view what) {
    require_finite(m, what);
    if (m.rows() != m.cols()) {
        std::ostringstream os;
        os << what << " is " << m.rows() << "x" << m.cols() << ", expected square";
        throw Error(ErrorCode::DimMismatch, os.str());
    }
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

HermitianMatrix::HermitianMatrix(const Matrix& m) {
    require_square(m, "Hermitian input");
    const double asym = max_abs(m - m.adjoint());
    if (asym > tol::hermitian * std::max(1.0, max_abs(m))) {
        std::ostringstream os;
        os << "matrix is not Hermitian (||M - M*||_max = " << asym << ")";
        throw Error(ErrorCode::InvalidInput, os.str());
    }
    m_ = (m + m.adjoint()) / 2.0;
}

HermitianMatrix HermitianMatrix::symmetrized(const Matrix& m) {
    require_square(m, "Gram form");
    return HermitianMatrix(Unchecked{}, (m + m.adjoint()) / 2.0);
}

namespace detail {

EigenDecomposition eig_sym(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    const Index n = m.rows();
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    // Eigen returns ascending order.
    for (Index i = 0; i < n; ++i) {
        out.values(i) = solver.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return out;
}

Matrix sqrt_clamped(const Matrix& m) {
    const EigenDecomposition e = eig_sym(m);
    const RealVector roots = e.values.cwiseMax(0.0).cwiseSqrt();
    return e.vectors * roots.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

Matrix polar_factor(const Matrix& m, double* trace_norm, double rel_tol) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& s = svd.singularValues();
    if (trace_norm != nullptr) {
        *trace_norm = s.sum();
    }
    const double cutoff = s.size() > 0 ? rel_tol * s(0) : 0.0;
    Index r = 0;
    while (r < s.size() && s(r) > cutoff) {
        ++r;
    }
    return svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).adjoint();
}

}  // namespace detail

EigenDecomposition eig_hermitian(const HermitianMatrix& m) {
    require_finite(m.matrix(), "eig_hermitian input");
    return detail::eig_sym(m.matrix());
}

namespace {

double clamp_spectrum(EigenDecomposition& eig) {
    const Index n = eig.values.size();
    double scale = 0.0;
    for (Index i = 0; i < n; ++i) {
        scale = std::max(scale, std::abs(eig.values(i)));
    }
    double floor = 0.0;
    for (Index i = 0; i < n; ++i) {
        double& v = eig.values(i);
        if (v < 0.0) {
            if (v < -tol::psd_clamp * scale) {
                std::ostringstream os;
                os << "eigenvalue " << v << " below clamp tolerance (largest |eigenvalue| " << scale
                   << ")";
                throw Error(ErrorCode::NotPSD, os.str());
            }
            floor = std::min(floor, v);
            v = 0.0;
        }
    }
    return floor;
}

}  // namespace

PsdMatrix::PsdMatrix(const HermitianMatrix& m) : m_(m.matrix()), eig_(detail::eig_sym(m_)) {
    floor_ = clamp_spectrum(eig_);
}

PsdMatrix::PsdMatrix(const Matrix& m) : PsdMatrix(HermitianMatrix(m)) {}

PsdMatrix PsdMatrix::from_gram(const Matrix& m) {
    return PsdMatrix(HermitianMatrix::symmetrized(m));
}

PsdMatrix PsdMatrix::identity(Index dim) {
    return PsdMatrix(Matrix(Matrix::Identity(dim, dim)));
}

PsdMatrix psd_sqrt(const PsdMatrix& x) {
    const EigenDecomposition& e = x.spectrum();
    const RealVector roots = e.values.cwiseSqrt();
    const Matrix r = e.vectors * roots.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    return PsdMatrix::from_gram(r);
}

RealVector singular_values(const Matrix& m) {
    require_finite(m, "matrix");
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
}

double trace_norm(const Matrix& m) {
    return singular_values(m).sum();
}

double spectral_norm(const Matrix& m) {
    const RealVector s = singular_values(m);
    return s.size() > 0 ? s(0) : 0.0;
}

}  // namespace elemnorm
