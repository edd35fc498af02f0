#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "elemnorm/types.hpp"

namespace elemnorm {

struct OptimizerConfig {
    int restarts = 64;
    int max_iters = 500;
    double step_init = 1.0;
    double step_min = 1e-12;
    /// Relative per-iteration improvement below which a restart counts as converged.
    double value_tol = 1e-13;
    std::uint64_t seed = 0;
    bool parallel = false;
    int threads = 0;  ///< 0 = hardware concurrency when parallel

    void validate() const;
};

template <class Point>
struct OptimizerResult {
    double best_value = -std::numeric_limits<double>::infinity();
    Point best_point{};
    int best_restart = -1;
    /// One entry per restart (extra starts first); discarded restarts hold -inf.
    std::vector<double> per_restart_values;
    std::vector<int> iterations;
    std::vector<bool> converged;
    double converged_fraction = 0.0;
    int discarded = 0;

    bool best_converged() const { return best_restart >= 0 && converged[best_restart]; }
};

/// Random source keyed by (seed, restart index); streams are independent of
/// evaluation order, which is what keeps parallel runs reproducible.
std::mt19937_64 keyed_rng(std::uint64_t seed, std::uint64_t stream);

/// Uniform point on the complex unit sphere of the given dimension.
Vector random_unit_vector(Index dim, std::mt19937_64& rng);
Matrix random_gaussian(Index rows, Index cols, std::mt19937_64& rng);

// Objectives return the value and, when the pointers are non-null, the
// Euclidean gradient g with df = Re <g, dz>. At nonsmooth points any gradient
// of a smooth minorant touching f at the current point works.

using SphereObjective = std::function<double(const Vector& z, Vector* grad)>;
using SpherePairObjective =
    std::function<double(const Vector& xi, const Vector& eta, Vector* g_xi, Vector* g_eta)>;

struct SpherePair {
    Vector xi;
    Vector eta;
};

OptimizerResult<Vector> maximize_sphere(const SphereObjective& f, Index dim,
                                        const OptimizerConfig& cfg,
                                        const std::vector<Vector>& extra_starts = {});

OptimizerResult<SpherePair> maximize_sphere_pair(const SpherePairObjective& f, Index dim_xi,
                                                 Index dim_eta, const OptimizerConfig& cfg,
                                                 const std::vector<SpherePair>& extra_starts = {});

/// Objective on unitaries; gradient G satisfies df = Re trace(G^* dU).
using UnitaryObjective = std::function<double(const Matrix& u, Matrix* grad)>;

/// U = exp(iH) parameterization: random Hermitian starts, geodesic ascent
/// U <- exp(i s K) U along the Hermitian direction K of steepest increase.
OptimizerResult<Matrix> maximize_unitary(const UnitaryObjective& f, Index dim,
                                         const OptimizerConfig& cfg);

/// A pair of density matrices rho = C C^* stored through factors C (n x k)
/// with unit Frobenius norm, so rank(rho) <= k and trace(rho) = 1.
struct DensityPair {
    Matrix left;
    Matrix right;
    Matrix rho_left() const { return left * left.adjoint(); }
    Matrix rho_right() const { return right * right.adjoint(); }
};

/// Objective on the factors; gradients with df = Re <g, dC>_F.
using DensityPairObjective =
    std::function<double(const Matrix& c_left, const Matrix& c_right, Matrix* g_left, Matrix* g_right)>;

/// Objective on the density matrices; Hermitian gradients G with df = trace(G drho).
using StatePairObjective =
    std::function<double(const Matrix& rho_left, const Matrix& rho_right, Matrix* g_left, Matrix* g_right)>;

/// Chain rule through rho = C C^*: dF/dC = 2 G C.
DensityPairObjective from_state_objective(StatePairObjective f);

OptimizerResult<DensityPair> maximize_density_pair(const DensityPairObjective& f, Index dim,
                                                   Index rank, const OptimizerConfig& cfg,
                                                   const std::vector<DensityPair>& extra_starts = {});

/// Single local ascent from `start` (no random restarts).
OptimizerResult<Vector> refine_sphere(const SphereObjective& f, const Vector& start,
                                      const OptimizerConfig& cfg);

/// Runs job(r) for r in [0, count), on worker threads when cfg.parallel.
void for_each_restart(int count, const OptimizerConfig& cfg, const std::function<void(int)>& job);

/// Unitary exp(iH) for Hermitian H.
Matrix exp_i_hermitian(const Matrix& h);

}  // namespace elemnorm
