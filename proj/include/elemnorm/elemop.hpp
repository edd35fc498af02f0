#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elemnorm/numrange.hpp"
#include "elemnorm/optimizer.hpp"

namespace elemnorm {

/// T(x) = sum_j a_j x b_j with a a row tuple and b a column tuple.
class ElementaryOperator {
public:
    ElementaryOperator(CoefficientTuple a, CoefficientTuple b);
    ElementaryOperator(std::vector<Matrix> a, std::vector<Matrix> b);

    const CoefficientTuple& a() const { return a_; }
    const CoefficientTuple& b() const { return b_; }
    Index dim() const { return a_.dim(); }
    Index length() const { return a_.length(); }

private:
    CoefficientTuple a_;
    CoefficientTuple b_;
};

enum class NormMethod {
    TgmFormula,
    S1Formula,
    OracleUnitary,
    OracleFunctional,
    Amplified,
    FactorialState,
    HaagerupBound,
};

const char* to_string(NormMethod method);

/// Unit vectors xi, eta and a contraction x with <T(x) eta, xi> = value
/// (up to cert_tol). For k-norms the vectors live in C^{kn}.
struct Certificate {
    Vector xi;
    Vector eta;
    Matrix x;
};

inline constexpr double cert_tol = 1e-6;

struct NormReport {
    double value = 0.0;
    NormMethod method = NormMethod::TgmFormula;
    std::optional<Certificate> certificate;
    int restarts_used = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    double converged_fraction = 0.0;
    std::vector<double> per_restart_values;
};

/// Amplification guard; ELEMNORM_MAX_DIM overrides the default of 64.
Index max_dim();

Matrix apply(const ElementaryOperator& t, const Matrix& x);

/// (a alpha) . (alpha^{-1} b): same operator, different coefficients.
ElementaryOperator rewrite(const ElementaryOperator& t, const Matrix& alpha);

/// Norm of the functional x -> <T(x) eta, xi>: tgm(Q(a^*, xi), Q(b, eta)).
/// Also evaluated as the trace norm of sum_j (b_j eta)(a_j^* xi)^*; the two
/// must agree to 1e-8 (relative to 1 + value) or std::logic_error is thrown.
double functional_norm(const ElementaryOperator& t, const UnitVector& xi, const UnitVector& eta);

/// sup over unit xi, eta of the functional norm (projected ascent, multistart).
NormReport norm_tgm(const ElementaryOperator& t, const OptimizerConfig& cfg,
                    const std::vector<SpherePair>& extra_starts = {});

/// trace sqrt of the Gram matrix (<v_i, v_j>).
double s1_vector_norm(const std::vector<Vector>& vectors);

/// sup over unit eta of || sqrt(Q(b, eta)^t) a^* ||_{S1}, with an inner
/// maximization over xi for each eta.
NormReport norm_s1(const ElementaryOperator& t, const OptimizerConfig& cfg);

/// Coefficients I_k (x) a_j, I_k (x) b_j acting on M_k(M_n) = M_{kn}.
ElementaryOperator amplify(const ElementaryOperator& t, Index k);

NormReport knorm(const ElementaryOperator& t, Index k, const OptimizerConfig& cfg,
                 const std::vector<SpherePair>& extra_starts = {});

/// sup of tgm(Q(a^*, rho1), Q(b, rho2)) over density matrices of rank <= k.
NormReport knorm_factorial(const ElementaryOperator& t, Index k, const OptimizerConfig& cfg);

/// ||T||_cb = ||T||_m with m = min(l, n).
NormReport cb_norm(const ElementaryOperator& t, const OptimizerConfig& cfg);

/// sqrt(||sum a_j a_j^*|| ||sum b_j^* b_j||); with `balance`, the smaller of
/// that and the bound after an optimized diagonal rewrite.
double haagerup_upper_bound(const ElementaryOperator& t, bool balance);

/// max ||T(U)|| over unitaries U (extreme points of the unit ball of M_n).
NormReport oracle_norm_unitary(const ElementaryOperator& t, const OptimizerConfig& cfg);

struct GrowthRow {
    Index k = 0;
    double norm = 0.0;        ///< ||T||_k
    double k_bound = 0.0;     ///< max(k, sqrt(l)) ||T||
    double step_bound = 0.0;  ///< (1 + 2 sqrt(k-1)/k) ||T||_{k-1}, k >= 2
    bool k_bound_ok = true;
    bool step_bound_ok = true;
};

struct GrowthTable {
    std::vector<GrowthRow> rows;
    std::optional<double> cb;  ///< absent when the cb route exceeds the guard
    double cb_bound = 0.0;     ///< sqrt(l) ||T||
    bool cb_bound_ok = true;
    bool multiplicative_ok = true;  ///< f(k1 k2) <= k1 f(k2) for all k1 k2 <= k_max
    bool monotone_ok = true;
    bool all_ok() const;
};

GrowthTable growth_check(const ElementaryOperator& t, Index k_max, const OptimizerConfig& cfg,
                         double slack = 1e-5);

/// The transpose x -> x^t on M_n as sum_{ij} e_ij x e_ij.
ElementaryOperator transpose_operator(Index n);
/// x -> e_11 x^t = sum_j e_1j x e_1j on M_n.
ElementaryOperator first_row_transpose_operator(Index n);
/// Complex Gaussian coefficients.
ElementaryOperator random_operator(Index n, Index l, std::mt19937_64& rng);

}  // namespace elemnorm
