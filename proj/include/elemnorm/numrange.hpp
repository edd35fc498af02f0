#pragma once

#include <vector>

#include "elemnorm/hermitian.hpp"
#include "elemnorm/optimizer.hpp"

namespace elemnorm {

enum class Orientation { Row, Column };

/// l square matrices of a common size n, read as a row [a_1, ..., a_l] or a
/// column [b_1, ..., b_l]^t of operators on C^n.
class CoefficientTuple {
public:
    CoefficientTuple(std::vector<Matrix> matrices, Orientation orientation);

    Index length() const { return static_cast<Index>(m_.size()); }
    Index dim() const { return m_.front().rows(); }
    Orientation orientation() const { return orientation_; }
    const Matrix& operator[](Index j) const { return m_[static_cast<std::size_t>(j)]; }
    const std::vector<Matrix>& matrices() const { return m_; }

    /// Entrywise adjoint with the orientation flipped (a -> a^*).
    CoefficientTuple adjoint() const;

    /// n x l matrix whose j-th column is m_j v.
    Matrix applied_to(const Vector& v) const;

private:
    std::vector<Matrix> m_;
    Orientation orientation_;
};

class UnitVector {
public:
    explicit UnitVector(const Vector& v);

    Index dim() const { return v_.size(); }
    const Vector& vector() const { return v_; }
    /// | ||v|| - 1 | after normalization.
    double norm_deviation() const { return deviation_; }

private:
    Vector v_;
    double deviation_ = 0.0;
};

/// Unit-trace PSD matrix of rank at most `rank_bound` (a state of M_n that is
/// a convex combination of at most k vector states).
class DensityMatrix {
public:
    DensityMatrix(const Matrix& rho, Index rank_bound);

    static DensityMatrix pure(const UnitVector& v);
    /// C C^* / trace(C C^*), rank bound = columns of C.
    static DensityMatrix from_factor(const Matrix& c);

    Index dim() const { return rho_.rows(); }
    Index rank_bound() const { return rank_bound_; }
    const Matrix& matrix() const { return rho_; }

private:
    Matrix rho_;
    Index rank_bound_;
};

/// (l n) x (l n) block matrix with block (i, j) = b_i^* b_j.
Matrix gram_block(const CoefficientTuple& b);

/// Q(b, eta)_{ij} = <b_j eta, b_i eta>.
PsdMatrix gram_at_vector(const CoefficientTuple& b, const UnitVector& eta);

/// Q(b, rho)_{ij} = trace(rho b_i^* b_j).
PsdMatrix gram_at_state(const CoefficientTuple& b, const DensityMatrix& rho);

struct ExtremalRange {
    double max_trace = 0.0;  ///< || sum_j b_j^* b_j ||
    Matrix basis;            ///< orthonormal columns spanning the top eigenspace
};

/// Relative eigengap for membership in the top eigenspace.
inline constexpr double eigengap_tol = 1e-8;

ExtremalRange extremal_range_basis(const CoefficientTuple& b);

struct EqualityGap {
    double gap = 0.0;
    bool converged = false;
    int restarts_used = 0;
    std::vector<double> per_restart_gaps;
    Vector xi;   ///< minimizer in the extremal subspace of a^*
    Vector eta;  ///< minimizer in the extremal subspace of b
};

/// Heuristic distance between the maximal-trace parts of the matrix numerical
/// ranges of a^* and b, after scaling both tuples to unit norm:
/// inf ||Q(a^*, xi) - Q(b, eta)||_F over unit xi, eta in the extremal
/// subspaces. Near-zero gaps indicate ||T|| = ||a|| ||b||. Never a certificate.
EqualityGap haagerup_equality_gap(const CoefficientTuple& a_row, const CoefficientTuple& b_column,
                                  const OptimizerConfig& cfg);

/// HS Gram rank threshold for linear independence.
inline constexpr double indep_tol = 1e-10;

struct IndependenceResult {
    bool independent = false;
    PsdMatrix witness;  ///< sum of Q(b, e_k) over the standard basis
};

IndependenceResult linearly_independent(const CoefficientTuple& b);

}  // namespace elemnorm
