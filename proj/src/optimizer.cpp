#include "elemnorm/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <numbers>
#include <thread>

#include "elemnorm/hermitian.hpp"

namespace elemnorm {

void OptimizerConfig::validate() const {
    if (restarts < 1) {
        throw Error(ErrorCode::InvalidInput, "optimizer restarts must be >= 1");
    }
    if (max_iters < 1) {
        throw Error(ErrorCode::InvalidInput, "optimizer max_iters must be >= 1");
    }
    if (!(step_min < step_init) || !(step_min > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "optimizer requires 0 < step_min < step_init");
    }
    if (!(value_tol > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "optimizer value_tol must be positive");
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 keyed_rng(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t key = splitmix64(seed ^ splitmix64(stream + 0x5851F42D4C957F2DULL));
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(seed)};
    return std::mt19937_64(seq);
}

Matrix random_gaussian(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    // Column-major fill order is part of the reproducibility contract.
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

Vector random_unit_vector(Index dim, std::mt19937_64& rng) {
    Vector v = random_gaussian(dim, 1, rng);
    return v / v.norm();
}

Matrix exp_i_hermitian(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    const RealVector& lambda = solver.eigenvalues();
    Vector phases(lambda.size());
    for (Index i = 0; i < lambda.size(); ++i) {
        phases(i) = std::polar(1.0, lambda(i));
    }
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

namespace {

using Blocks = std::vector<Matrix>;
using BlockObjective = std::function<double(const Blocks&, Blocks*)>;

template <class Point>
struct Outcome {
    double value = -std::numeric_limits<double>::infinity();
    Point point{};
    int iterations = 0;
    bool converged = false;
    bool discarded = false;
};

double re_inner(const Matrix& a, const Matrix& b) {
    return (a.conjugate().cwiseProduct(b)).sum().real();
}

bool normalize_blocks(Blocks& x) {
    for (Matrix& b : x) {
        const double n = b.norm();
        if (!(n > 0.0) || !std::isfinite(n)) {
            return false;
        }
        b /= n;
    }
    return true;
}

/// Projected ascent on a product of unit spheres (Frobenius norm per block).
/// Trial point per block: normalize(x + sigma * s_b * t_b) with t_b the tangent
/// gradient and s_b = 1 / Re<x_b, g_b> when positive (sigma = 1 is then the
/// fixed-point step normalize(g_b)), else 1 / |t_b|. sigma is halved until
/// the objective increases.
Outcome<Blocks> ascend_spheres(const BlockObjective& f, Blocks x, const OptimizerConfig& cfg) {
    Outcome<Blocks> out;
    if (!normalize_blocks(x)) {
        out.discarded = true;
        return out;
    }
    Blocks g(x.size());
    double fx = f(x, &g);
    if (!std::isfinite(fx)) {
        out.discarded = true;
        return out;
    }
    double sigma = cfg.step_init;
    Blocks t(x.size()), cand(x.size()), gc(x.size());
    std::vector<double> scale(x.size());
    int it = 0;
    bool converged = false;
    for (; it < cfg.max_iters; ++it) {
        double tnorm2 = 0.0;
        for (std::size_t b = 0; b < x.size(); ++b) {
            const double c = re_inner(x[b], g[b]);
            t[b] = g[b] - c * x[b];
            const double tn = t[b].norm();
            tnorm2 += tn * tn;
            scale[b] = c > 1e-12 * (1.0 + std::abs(fx)) ? 1.0 / c : (tn > 0.0 ? 1.0 / tn : 0.0);
        }
        if (!std::isfinite(tnorm2)) {
            out.discarded = true;
            return out;
        }
        if (std::sqrt(tnorm2) <= 1e-14 * (1.0 + std::abs(fx))) {
            converged = true;
            break;
        }
        bool accepted = false;
        double fc = fx;
        while (sigma >= cfg.step_min) {
            for (std::size_t b = 0; b < x.size(); ++b) {
                cand[b] = x[b] + (sigma * scale[b]) * t[b];
            }
            if (normalize_blocks(cand)) {
                fc = f(cand, &gc);
                if (std::isfinite(fc) && fc > fx) {
                    accepted = true;
                    break;
                }
            }
            sigma /= 2.0;
        }
        if (!accepted) {
            converged = true;
            break;
        }
        assert(fc > fx);
        const double improvement = fc - fx;
        std::swap(x, cand);
        std::swap(g, gc);
        fx = fc;
        sigma = std::min(cfg.step_init, 2.0 * sigma);
        if (improvement <= cfg.value_tol * (1.0 + std::abs(fx))) {
            converged = true;
            ++it;
            break;
        }
    }
    out.value = fx;
    out.point = std::move(x);
    out.iterations = it;
    out.converged = converged;
    return out;
}

Outcome<Matrix> ascend_unitary(const UnitaryObjective& f, Matrix u, const OptimizerConfig& cfg) {
    Outcome<Matrix> out;
    Matrix g;
    double fu = f(u, &g);
    if (!std::isfinite(fu)) {
        out.discarded = true;
        return out;
    }
    const Complex i_unit(0.0, 1.0);
    double sigma = cfg.step_init;
    int it = 0;
    bool converged = false;
    Matrix gc;
    for (; it < cfg.max_iters; ++it) {
        const Matrix a = i_unit * u * g.adjoint();
        const Matrix k = (a + a.adjoint()) / 2.0;
        const double kn = k.norm();
        if (!std::isfinite(kn)) {
            out.discarded = true;
            return out;
        }
        if (kn <= 1e-14 * (1.0 + std::abs(fu))) {
            converged = true;
            break;
        }
        const Matrix direction = k / kn;
        bool accepted = false;
        double fc = fu;
        Matrix uc;
        while (sigma >= cfg.step_min) {
            uc = exp_i_hermitian(sigma * direction) * u;
            fc = f(uc, &gc);
            if (std::isfinite(fc) && fc > fu) {
                accepted = true;
                break;
            }
            sigma /= 2.0;
        }
        if (!accepted) {
            converged = true;
            break;
        }
        const double improvement = fc - fu;
        u = std::move(uc);
        g = gc;
        fu = fc;
        sigma = std::min(cfg.step_init, 2.0 * sigma);
        if ((it + 1) % 64 == 0) {
            // Re-unitarize against accumulated roundoff.
            u = detail::polar_factor(u, nullptr, 0.0);
            fu = f(u, &g);
        }
        if (improvement <= cfg.value_tol * (1.0 + std::abs(fu))) {
            converged = true;
            ++it;
            break;
        }
    }
    out.value = fu;
    out.point = std::move(u);
    out.iterations = it;
    out.converged = converged;
    return out;
}

}  // namespace

void for_each_restart(int count, const OptimizerConfig& cfg, const std::function<void(int)>& job) {
    int threads = 1;
    if (cfg.parallel) {
        threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        threads = std::min(threads, count);
    }
    if (threads <= 1) {
        for (int r = 0; r < count; ++r) {
            job(r);
        }
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int r = next++; r < count; r = next++) {
                job(r);
            }
        });
    }
    for (std::thread& th : pool) {
        th.join();
    }
}

namespace {

template <class Point>
OptimizerResult<Point> run_restarts(int count, const std::function<Outcome<Point>(int)>& job,
                                    const OptimizerConfig& cfg) {
    std::vector<Outcome<Point>> outcomes(static_cast<std::size_t>(count));
    for_each_restart(count, cfg, [&](int r) { outcomes[r] = job(r); });
    // Reduction in restart order; the first maximal value wins ties.
    OptimizerResult<Point> result;
    int converged = 0;
    for (int r = 0; r < count; ++r) {
        Outcome<Point>& o = outcomes[r];
        result.per_restart_values.push_back(o.discarded ? -std::numeric_limits<double>::infinity()
                                                        : o.value);
        result.iterations.push_back(o.iterations);
        result.converged.push_back(!o.discarded && o.converged);
        if (o.discarded) {
            ++result.discarded;
            continue;
        }
        if (o.converged) {
            ++converged;
        }
        if (o.value > result.best_value) {
            result.best_value = o.value;
            result.best_point = std::move(o.point);
            result.best_restart = r;
        }
    }
    result.converged_fraction = static_cast<double>(converged) / static_cast<double>(count);
    return result;
}

}  // namespace

OptimizerResult<Vector> maximize_sphere(const SphereObjective& f, Index dim,
                                        const OptimizerConfig& cfg,
                                        const std::vector<Vector>& extra_starts) {
    cfg.validate();
    const int extra = static_cast<int>(extra_starts.size());
    const BlockObjective wrapped = [&](const Blocks& x, Blocks* g) {
        if (g == nullptr) {
            return f(x[0], nullptr);
        }
        Vector gv;
        const double v = f(x[0], &gv);
        (*g)[0] = gv;
        return v;
    };
    const std::function<Outcome<Vector>(int)> job = [&](int r) {
        Blocks start(1);
        if (r < extra) {
            start[0] = extra_starts[r];
        } else {
            auto rng = keyed_rng(cfg.seed, static_cast<std::uint64_t>(r - extra));
            start[0] = random_unit_vector(dim, rng);
        }
        Outcome<Blocks> o = ascend_spheres(wrapped, std::move(start), cfg);
        Outcome<Vector> v{o.value, {}, o.iterations, o.converged, o.discarded};
        if (!o.discarded) {
            v.point = o.point[0];
        }
        return v;
    };
    return run_restarts<Vector>(cfg.restarts + extra, job, cfg);
}

OptimizerResult<Vector> refine_sphere(const SphereObjective& f, const Vector& start,
                                      const OptimizerConfig& cfg) {
    OptimizerConfig single = cfg;
    single.restarts = 0;
    single.parallel = false;
    const BlockObjective wrapped = [&](const Blocks& x, Blocks* g) {
        if (g == nullptr) {
            return f(x[0], nullptr);
        }
        Vector gv;
        const double v = f(x[0], &gv);
        (*g)[0] = gv;
        return v;
    };
    const std::function<Outcome<Vector>(int)> job = [&](int) {
        Outcome<Blocks> o = ascend_spheres(wrapped, Blocks{start}, single);
        Outcome<Vector> v{o.value, {}, o.iterations, o.converged, o.discarded};
        if (!o.discarded) {
            v.point = o.point[0];
        }
        return v;
    };
    return run_restarts<Vector>(1, job, single);
}

OptimizerResult<SpherePair> maximize_sphere_pair(const SpherePairObjective& f, Index dim_xi,
                                                 Index dim_eta, const OptimizerConfig& cfg,
                                                 const std::vector<SpherePair>& extra_starts) {
    cfg.validate();
    const int extra = static_cast<int>(extra_starts.size());
    const BlockObjective wrapped = [&](const Blocks& x, Blocks* g) {
        if (g == nullptr) {
            return f(x[0], x[1], nullptr, nullptr);
        }
        Vector g0, g1;
        const double v = f(x[0], x[1], &g0, &g1);
        (*g)[0] = g0;
        (*g)[1] = g1;
        return v;
    };
    const std::function<Outcome<SpherePair>(int)> job = [&](int r) {
        Blocks start(2);
        if (r < extra) {
            start[0] = extra_starts[r].xi;
            start[1] = extra_starts[r].eta;
        } else {
            auto rng = keyed_rng(cfg.seed, static_cast<std::uint64_t>(r - extra));
            start[0] = random_unit_vector(dim_xi, rng);
            start[1] = random_unit_vector(dim_eta, rng);
        }
        Outcome<Blocks> o = ascend_spheres(wrapped, std::move(start), cfg);
        Outcome<SpherePair> p{o.value, {}, o.iterations, o.converged, o.discarded};
        if (!o.discarded) {
            p.point = SpherePair{o.point[0], o.point[1]};
        }
        return p;
    };
    return run_restarts<SpherePair>(cfg.restarts + extra, job, cfg);
}

OptimizerResult<Matrix> maximize_unitary(const UnitaryObjective& f, Index dim,
                                         const OptimizerConfig& cfg) {
    cfg.validate();
    const double bound = std::numbers::pi * static_cast<double>(dim);
    const std::function<Outcome<Matrix>(int)> job = [&](int r) {
        auto rng = keyed_rng(cfg.seed, static_cast<std::uint64_t>(r));
        const Matrix z = random_gaussian(dim, dim, rng);
        Matrix h = std::numbers::pi * (z + z.adjoint()) / 2.0;
        for (Index j = 0; j < dim; ++j) {
            for (Index i = 0; i < dim; ++i) {
                const double m = std::abs(h(i, j));
                if (m > bound) {
                    h(i, j) *= bound / m;
                }
            }
        }
        return ascend_unitary(f, exp_i_hermitian(h), cfg);
    };
    return run_restarts<Matrix>(cfg.restarts, job, cfg);
}

DensityPairObjective from_state_objective(StatePairObjective f) {
    return [f = std::move(f)](const Matrix& c1, const Matrix& c2, Matrix* g1, Matrix* g2) {
        const Matrix rho1 = c1 * c1.adjoint();
        const Matrix rho2 = c2 * c2.adjoint();
        if (g1 == nullptr || g2 == nullptr) {
            return f(rho1, rho2, nullptr, nullptr);
        }
        Matrix h1, h2;
        const double v = f(rho1, rho2, &h1, &h2);
        *g1 = 2.0 * h1 * c1;
        *g2 = 2.0 * h2 * c2;
        return v;
    };
}

OptimizerResult<DensityPair> maximize_density_pair(const DensityPairObjective& f, Index dim,
                                                   Index rank, const OptimizerConfig& cfg,
                                                   const std::vector<DensityPair>& extra_starts) {
    cfg.validate();
    if (rank < 1 || dim < 1) {
        throw Error(ErrorCode::InvalidInput, "density pair requires dim >= 1 and rank >= 1");
    }
    const int extra = static_cast<int>(extra_starts.size());
    const BlockObjective wrapped = [&](const Blocks& x, Blocks* g) {
        if (g == nullptr) {
            return f(x[0], x[1], nullptr, nullptr);
        }
        return f(x[0], x[1], &(*g)[0], &(*g)[1]);
    };
    const std::function<Outcome<DensityPair>(int)> job = [&](int r) {
        Blocks start(2);
        if (r < extra) {
            start[0] = extra_starts[r].left;
            start[1] = extra_starts[r].right;
        } else {
            auto rng = keyed_rng(cfg.seed, static_cast<std::uint64_t>(r - extra));
            start[0] = random_gaussian(dim, rank, rng);
            start[1] = random_gaussian(dim, rank, rng);
        }
        Outcome<Blocks> o = ascend_spheres(wrapped, std::move(start), cfg);
        Outcome<DensityPair> p{o.value, {}, o.iterations, o.converged, o.discarded};
        if (!o.discarded) {
            p.point = DensityPair{o.point[0], o.point[1]};
        }
        return p;
    };
    return run_restarts<DensityPair>(cfg.restarts + extra, job, cfg);
}

}  // namespace elemnorm
