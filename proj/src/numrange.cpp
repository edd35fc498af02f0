#include "elemnorm/numrange.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace elemnorm {

CoefficientTuple::CoefficientTuple(std::vector<Matrix> matrices, Orientation orientation)
    : m_(std::move(matrices)), orientation_(orientation) {
    if (m_.empty()) {
        throw Error(ErrorCode::InvalidInput, "coefficient tuple must have length >= 1");
    }
    const Index n = m_.front().rows();
    for (std::size_t j = 0; j < m_.size(); ++j) {
        require_finite(m_[j], "coefficient");
        if (m_[j].rows() != n || m_[j].cols() != n) {
            std::ostringstream os;
            os << "coefficient " << j << " is " << m_[j].rows() << "x" << m_[j].cols()
               << ", expected " << n << "x" << n;
            throw Error(ErrorCode::DimMismatch, os.str());
        }
    }
}

CoefficientTuple CoefficientTuple::adjoint() const {
    std::vector<Matrix> adj;
    adj.reserve(m_.size());
    for (const Matrix& m : m_) {
        adj.emplace_back(m.adjoint());
    }
    return CoefficientTuple(std::move(adj),
                            orientation_ == Orientation::Row ? Orientation::Column : Orientation::Row);
}

Matrix CoefficientTuple::applied_to(const Vector& v) const {
    Matrix out(dim(), length());
    for (Index j = 0; j < length(); ++j) {
        out.col(j) = m_[static_cast<std::size_t>(j)] * v;
    }
    return out;
}

UnitVector::UnitVector(const Vector& v) {
    require_finite(v, "vector");
    const double n = v.norm();
    if (!(n > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "cannot normalize the zero vector");
    }
    v_ = v / n;
    deviation_ = std::abs(v_.norm() - 1.0);
}

DensityMatrix::DensityMatrix(const Matrix& rho, Index rank_bound) : rank_bound_(rank_bound) {
    if (rank_bound < 1) {
        throw Error(ErrorCode::InvalidState, "rank bound must be >= 1");
    }
    try {
        const PsdMatrix psd(rho);
        const double tr = psd.matrix().trace().real();
        if (std::abs(tr - 1.0) > 1e-10) {
            std::ostringstream os;
            os << "density matrix trace is " << tr;
            throw Error(ErrorCode::InvalidState, os.str());
        }
        Index rank = 0;
        for (Index i = 0; i < psd.spectrum().values.size(); ++i) {
            if (psd.spectrum().values(i) > 1e-10) {
                ++rank;
            }
        }
        if (rank > rank_bound) {
            std::ostringstream os;
            os << "density matrix has rank " << rank << " > bound " << rank_bound;
            throw Error(ErrorCode::InvalidState, os.str());
        }
        rho_ = psd.matrix();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidState) {
            throw;
        }
        throw Error(ErrorCode::InvalidState, e.what());
    }
}

DensityMatrix DensityMatrix::pure(const UnitVector& v) {
    return DensityMatrix(v.vector() * v.vector().adjoint(), 1);
}

DensityMatrix DensityMatrix::from_factor(const Matrix& c) {
    require_finite(c, "density factor");
    const double n2 = c.squaredNorm();
    if (!(n2 > 0.0)) {
        throw Error(ErrorCode::InvalidState, "density factor is zero");
    }
    const Matrix rho = c * c.adjoint() / n2;
    return DensityMatrix((rho + rho.adjoint()) / 2.0, c.cols());
}

namespace {

void require_column(const CoefficientTuple& b, const char* op) {
    if (b.orientation() != Orientation::Column) {
        throw Error(ErrorCode::InvalidInput,
                    std::string(op) + " expects a column tuple; pass the adjoint of a row tuple");
    }
}

}  // namespace

Matrix gram_block(const CoefficientTuple& b) {
    require_column(b, "gram_block");
    const Index n = b.dim();
    const Index l = b.length();
    Matrix out(l * n, l * n);
    for (Index i = 0; i < l; ++i) {
        for (Index j = 0; j < l; ++j) {
            out.block(i * n, j * n, n, n) = b[i].adjoint() * b[j];
        }
    }
    return out;
}

PsdMatrix gram_at_vector(const CoefficientTuple& b, const UnitVector& eta) {
    require_column(b, "gram_at_vector");
    if (eta.dim() != b.dim()) {
        throw Error(ErrorCode::DimMismatch, "vector dimension differs from the tuple dimension");
    }
    const Matrix stacked = b.applied_to(eta.vector());
    return PsdMatrix::from_gram(stacked.adjoint() * stacked);
}

PsdMatrix gram_at_state(const CoefficientTuple& b, const DensityMatrix& rho) {
    require_column(b, "gram_at_state");
    if (rho.dim() != b.dim()) {
        throw Error(ErrorCode::DimMismatch, "state dimension differs from the tuple dimension");
    }
    const Index l = b.length();
    Matrix q(l, l);
    for (Index i = 0; i < l; ++i) {
        for (Index j = 0; j < l; ++j) {
            q(i, j) = (rho.matrix() * b[i].adjoint() * b[j]).trace();
        }
    }
    return PsdMatrix::from_gram(q);
}

ExtremalRange extremal_range_basis(const CoefficientTuple& b) {
    const Index n = b.dim();
    Matrix sum = Matrix::Zero(n, n);
    for (const Matrix& m : b.matrices()) {
        sum += b.orientation() == Orientation::Column ? Matrix(m.adjoint() * m)
                                                      : Matrix(m * m.adjoint());
    }
    const EigenDecomposition e = eig_hermitian(HermitianMatrix::symmetrized(sum));
    const double top = e.values(0);
    Index count = 0;
    while (count < n && e.values(count) >= top - eigengap_tol * std::max(std::abs(top), 1e-300)) {
        ++count;
    }
    return ExtremalRange{std::max(top, 0.0), e.vectors.leftCols(count)};
}

EqualityGap haagerup_equality_gap(const CoefficientTuple& a_row, const CoefficientTuple& b_column,
                                  const OptimizerConfig& cfg) {
    if (a_row.orientation() != Orientation::Row || b_column.orientation() != Orientation::Column) {
        throw Error(ErrorCode::InvalidInput, "equality gap expects a row tuple a and a column tuple b");
    }
    if (a_row.length() != b_column.length() || a_row.dim() != b_column.dim()) {
        throw Error(ErrorCode::DimMismatch, "tuples a and b must share length and dimension");
    }
    const CoefficientTuple a_star = a_row.adjoint();
    const ExtremalRange ra = extremal_range_basis(a_star);
    const ExtremalRange rb = extremal_range_basis(b_column);
    if (!(ra.max_trace > 0.0) || !(rb.max_trace > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "equality gap is undefined for a zero tuple");
    }
    const double sa = 1.0 / std::sqrt(ra.max_trace);
    const double sb = 1.0 / std::sqrt(rb.max_trace);
    const Index l = a_row.length();

    const SpherePairObjective objective = [&](const Vector& u, const Vector& v, Vector* gu,
                                              Vector* gv) {
        const Vector xi = ra.basis * u;
        const Vector eta = rb.basis * v;
        const Matrix amat = sa * a_star.applied_to(xi);
        const Matrix bmat = sb * b_column.applied_to(eta);
        const Matrix d = amat.adjoint() * amat - bmat.adjoint() * bmat;
        const double value = -d.squaredNorm();
        if (gu != nullptr && gv != nullptr) {
            const Matrix ad = amat * d;
            const Matrix bd = bmat * d;
            Vector gxi = Vector::Zero(xi.size());
            Vector geta = Vector::Zero(eta.size());
            for (Index j = 0; j < l; ++j) {
                gxi += a_star[j].adjoint() * ad.col(j);
                geta += b_column[j].adjoint() * bd.col(j);
            }
            *gu = -4.0 * sa * (ra.basis.adjoint() * gxi);
            *gv = 4.0 * sb * (rb.basis.adjoint() * geta);
        }
        return value;
    };
    const auto result =
        maximize_sphere_pair(objective, ra.basis.cols(), rb.basis.cols(), cfg);
    EqualityGap out;
    out.gap = std::sqrt(std::max(0.0, -result.best_value));
    out.converged = result.best_converged();
    out.restarts_used = static_cast<int>(result.per_restart_values.size());
    for (double v : result.per_restart_values) {
        out.per_restart_gaps.push_back(std::isfinite(v) ? std::sqrt(std::max(0.0, -v)) : v);
    }
    out.xi = ra.basis * result.best_point.xi;
    out.eta = rb.basis * result.best_point.eta;
    return out;
}

IndependenceResult linearly_independent(const CoefficientTuple& b) {
    const Index n = b.dim();
    const Index l = b.length();
    Matrix sum = Matrix::Zero(l, l);
    for (Index k = 0; k < n; ++k) {
        const Vector e = Vector::Unit(n, k);
        const Matrix stacked = b.applied_to(e);
        sum += stacked.adjoint() * stacked;
    }
    PsdMatrix witness = PsdMatrix::from_gram(sum);
    const RealVector& lambda = witness.spectrum().values;
    const bool independent = lambda(0) > 0.0 && lambda(l - 1) > indep_tol * lambda(0);
    return IndependenceResult{independent, std::move(witness)};
}

}  // namespace elemnorm
