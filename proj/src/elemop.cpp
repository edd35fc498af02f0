#include "elemnorm/elemop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "elemnorm/tgm.hpp"

namespace elemnorm {

const char* to_string(NormMethod method) {
    switch (method) {
        case NormMethod::TgmFormula: return "tgm_formula";
        case NormMethod::S1Formula: return "s1_formula";
        case NormMethod::OracleUnitary: return "oracle_unitary";
        case NormMethod::OracleFunctional: return "oracle_functional";
        case NormMethod::Amplified: return "amplified";
        case NormMethod::FactorialState: return "factorial_state";
        case NormMethod::HaagerupBound: return "haagerup_bound";
    }
    return "unknown";
}

ElementaryOperator::ElementaryOperator(CoefficientTuple a, CoefficientTuple b)
    : a_(std::move(a)), b_(std::move(b)) {
    if (a_.orientation() != Orientation::Row || b_.orientation() != Orientation::Column) {
        throw Error(ErrorCode::InvalidInput, "elementary operator needs a row tuple a and a column tuple b");
    }
    if (a_.length() != b_.length() || a_.dim() != b_.dim()) {
        std::ostringstream os;
        os << "tuples disagree: a has l=" << a_.length() << ", n=" << a_.dim() << "; b has l="
           << b_.length() << ", n=" << b_.dim();
        throw Error(ErrorCode::DimMismatch, os.str());
    }
}

ElementaryOperator::ElementaryOperator(std::vector<Matrix> a, std::vector<Matrix> b)
    : ElementaryOperator(CoefficientTuple(std::move(a), Orientation::Row),
                         CoefficientTuple(std::move(b), Orientation::Column)) {}

Index max_dim() {
    if (const char* env = std::getenv("ELEMNORM_MAX_DIM")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<Index>(v);
        }
    }
    return 64;
}

Matrix apply(const ElementaryOperator& t, const Matrix& x) {
    require_finite(x, "x");
    if (x.rows() != t.dim() || x.cols() != t.dim()) {
        std::ostringstream os;
        os << "x is " << x.rows() << "x" << x.cols() << ", operator acts on " << t.dim() << "x"
           << t.dim();
        throw Error(ErrorCode::DimMismatch, os.str());
    }
    Matrix out = Matrix::Zero(t.dim(), t.dim());
    for (Index j = 0; j < t.length(); ++j) {
        out.noalias() += t.a()[j] * x * t.b()[j];
    }
    return out;
}

ElementaryOperator rewrite(const ElementaryOperator& t, const Matrix& alpha) {
    const Index l = t.length();
    if (alpha.rows() != l || alpha.cols() != l) {
        throw Error(ErrorCode::DimMismatch, "alpha must be l x l");
    }
    checked_condition(alpha);
    const Matrix inv = alpha.partialPivLu().inverse();
    const Index n = t.dim();
    std::vector<Matrix> a(static_cast<std::size_t>(l), Matrix::Zero(n, n));
    std::vector<Matrix> b(static_cast<std::size_t>(l), Matrix::Zero(n, n));
    for (Index j = 0; j < l; ++j) {
        for (Index i = 0; i < l; ++i) {
            a[j] += alpha(i, j) * t.a()[i];
            b[j] += inv(j, i) * t.b()[i];
        }
    }
    return ElementaryOperator(std::move(a), std::move(b));
}

namespace {

/// ||sum_j (b_j eta)(a_j^* xi)^*||_1 with gradients from its polar factor W:
/// with Y = T(W^*), grad_xi = Y eta and grad_eta = Y^* xi.
class FunctionalObjective {
public:
    explicit FunctionalObjective(const ElementaryOperator& t) : t_(t), a_star_(t.a().adjoint()) {}

    double operator()(const Vector& xi, const Vector& eta, Vector* g_xi, Vector* g_eta) const {
        const Matrix m = t_.b().applied_to(eta) * a_star_.applied_to(xi).adjoint();
        double value = 0.0;
        const Matrix w = detail::polar_factor(m, &value);
        if (g_xi != nullptr && g_eta != nullptr) {
            const Matrix y = apply_unchecked(w.adjoint());
            *g_xi = y * eta;
            *g_eta = y.adjoint() * xi;
        }
        return value;
    }

    Matrix contraction(const Vector& xi, const Vector& eta) const {
        const Matrix m = t_.b().applied_to(eta) * a_star_.applied_to(xi).adjoint();
        return detail::polar_factor(m, nullptr).adjoint();
    }

private:
    Matrix apply_unchecked(const Matrix& x) const {
        Matrix out = Matrix::Zero(t_.dim(), t_.dim());
        for (Index j = 0; j < t_.length(); ++j) {
            out.noalias() += t_.a()[j] * x * t_.b()[j];
        }
        return out;
    }

    const ElementaryOperator& t_;
    CoefficientTuple a_star_;
};

template <class Point>
void fill_diagnostics(NormReport& report, const OptimizerResult<Point>& r, const OptimizerConfig& cfg) {
    report.value = std::max(0.0, r.best_value);
    report.restarts_used = static_cast<int>(r.per_restart_values.size());
    report.converged = r.best_converged();
    report.converged_fraction = r.converged_fraction;
    report.per_restart_values = r.per_restart_values;
    report.seed = cfg.seed;
}

void require_k(Index k, Index n) {
    if (k < 1) {
        throw Error(ErrorCode::InvalidInput, "k must be >= 1");
    }
    if (k * n > max_dim()) {
        std::ostringstream os;
        os << "amplified dimension k*n = " << k * n << " exceeds max_dim = " << max_dim()
           << " (set ELEMNORM_MAX_DIM to raise)";
        throw Error(ErrorCode::ResourceGuard, os.str());
    }
}

}  // namespace

double functional_norm(const ElementaryOperator& t, const UnitVector& xi, const UnitVector& eta) {
    if (xi.dim() != t.dim() || eta.dim() != t.dim()) {
        throw Error(ErrorCode::DimMismatch, "unit vectors must live in C^n");
    }
    const PsdMatrix x = gram_at_vector(t.a().adjoint(), xi);
    const PsdMatrix y = gram_at_vector(t.b(), eta);
    const double via_tgm = tgm(x, y);
    Matrix m = Matrix::Zero(t.dim(), t.dim());
    for (Index j = 0; j < t.length(); ++j) {
        m += (t.b()[j] * eta.vector()) * (t.a()[j].adjoint() * xi.vector()).adjoint();
    }
    const double via_trace_norm = trace_norm(m);
    if (std::abs(via_tgm - via_trace_norm) > 1e-8 * (1.0 + via_trace_norm)) {
        std::ostringstream os;
        os.precision(17);
        os << "functional norm routes disagree: tgm " << via_tgm << " vs trace norm "
           << via_trace_norm;
        throw std::logic_error(os.str());
    }
    return via_tgm;
}

NormReport norm_tgm(const ElementaryOperator& t, const OptimizerConfig& cfg,
                    const std::vector<SpherePair>& extra_starts) {
    const FunctionalObjective objective(t);
    const auto r = maximize_sphere_pair(std::cref(objective), t.dim(), t.dim(), cfg, extra_starts);
    NormReport report;
    report.method = NormMethod::TgmFormula;
    fill_diagnostics(report, r, cfg);
    if (r.best_restart >= 0) {
        const Vector& xi = r.best_point.xi;
        const Vector& eta = r.best_point.eta;
        report.certificate = Certificate{xi, eta, objective.contraction(xi, eta)};
    }
    return report;
}

double s1_vector_norm(const std::vector<Vector>& vectors) {
    if (vectors.empty()) {
        throw Error(ErrorCode::InvalidInput, "s1 norm needs at least one vector");
    }
    const Index n = vectors.front().size();
    const Index l = static_cast<Index>(vectors.size());
    Matrix stacked(n, l);
    for (Index j = 0; j < l; ++j) {
        if (vectors[j].size() != n) {
            throw Error(ErrorCode::DimMismatch, "s1 norm vectors must share a dimension");
        }
        stacked.col(j) = vectors[j];
    }
    require_finite(stacked, "s1 vectors");
    // Gram entry (i, j) = <v_i, v_j> = v_j^* v_i.
    const Matrix gram = (stacked.adjoint() * stacked).transpose();
    const PsdMatrix g = PsdMatrix::from_gram(gram);
    const RealVector& lambda = g.spectrum().values;
    const double floor = 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(l) *
                         std::max(lambda(0), 0.0);
    double sum = 0.0;
    for (Index i = 0; i < l; ++i) {
        if (lambda(i) > floor) {
            sum += std::sqrt(lambda(i));
        }
    }
    return sum;
}

namespace {

/// Rewrite at a fixed eta with alpha = sqrt(Q~^t), where Q~ = Q(b~, eta~) for
/// the embedding b~_j = [[b_j, 0], [eps s e_j eta^*, 0]] on C^{n+l}
/// (s = ||b||). Only the top-left n x n corner of a~ alpha = (a alpha) (+) 0
/// matters for sup over xi.
struct S1Rewrite {
    Matrix q_tilde;  ///< Q(b, eta) + (eps s)^2 I
    Matrix root;     ///< sqrt(Q~) (Hermitian); alpha = root^t
    EigenDecomposition eig;
    std::vector<Matrix> a_rewritten;  ///< (a alpha)_j, n x n
};

S1Rewrite s1_rewrite_at(const ElementaryOperator& t, const Matrix& b_eta, double eps_abs) {
    S1Rewrite rw;
    const Index l = t.length();
    rw.q_tilde = b_eta.adjoint() * b_eta;
    rw.q_tilde.diagonal().array() += eps_abs * eps_abs;
    rw.q_tilde = ((rw.q_tilde + rw.q_tilde.adjoint()) / 2.0).eval();
    rw.eig = detail::eig_sym(rw.q_tilde);
    const RealVector roots = rw.eig.values.cwiseMax(0.0).cwiseSqrt();
    rw.root = rw.eig.vectors * roots.cast<Complex>().asDiagonal() * rw.eig.vectors.adjoint();
    const Matrix alpha = rw.root.transpose();
    rw.a_rewritten.assign(static_cast<std::size_t>(l), Matrix::Zero(t.dim(), t.dim()));
    for (Index j = 0; j < l; ++j) {
        for (Index i = 0; i < l; ++i) {
            rw.a_rewritten[j] += alpha(i, j) * t.a()[i];
        }
    }
    return rw;
}

/// || [ (a alpha)_j^* xi ]_j ||_1 and its gradient sum_j (a alpha)_j W_j.
double s1_inner(const std::vector<Matrix>& a_rw, const Vector& xi, Vector* grad, Matrix* polar) {
    const Index l = static_cast<Index>(a_rw.size());
    Matrix v(xi.size(), l);
    for (Index j = 0; j < l; ++j) {
        v.col(j) = a_rw[j].adjoint() * xi;
    }
    double value = 0.0;
    const Matrix w = detail::polar_factor(v, &value);
    if (grad != nullptr) {
        *grad = Vector::Zero(xi.size());
        for (Index j = 0; j < l; ++j) {
            *grad += a_rw[j] * w.col(j);
        }
    }
    if (polar != nullptr) {
        *polar = w;
    }
    return value;
}

class S1Search {
public:
    S1Search(const ElementaryOperator& t, const OptimizerConfig& cfg, double eps_abs)
        : t_(t), a_star_(t.a().adjoint()), cfg_(cfg), eps_abs_(eps_abs) {
        inner_cfg_ = cfg;
        inner_cfg_.parallel = false;
        inner_cfg_.restarts = std::max(4, cfg.restarts / 8);
    }

    /// g(eta) = sup_xi s1 norm, warm-started from the best xi seen so far.
    double evaluate(const Vector& eta, Vector* grad, bool full_inner) {
        const Matrix b_eta = t_.b().applied_to(eta);
        const S1Rewrite rw = s1_rewrite_at(t_, b_eta, eps_abs_);
        const SphereObjective inner = [&](const Vector& xi, Vector* g) {
            return s1_inner(rw.a_rewritten, xi, g, nullptr);
        };
        OptimizerResult<Vector> best;
        if (warm_.size() > 0) {
            best = refine_sphere(inner, warm_, inner_cfg_);
        }
        if (full_inner || warm_.size() == 0) {
            OptimizerConfig c = inner_cfg_;
            c.seed = inner_cfg_.seed ^ (0x9E3779B97F4A7C15ULL * (++inner_calls_));
            auto multi = maximize_sphere(inner, t_.dim(), c);
            if (multi.best_value > best.best_value) {
                best = std::move(multi);
            }
        }
        const Vector& xi = best.best_point;
        if (best.best_value > best_value_) {
            best_value_ = best.best_value;
            warm_ = xi;
        }
        if (grad != nullptr) {
            *grad = outer_gradient(rw, b_eta, xi);
        }
        last_xi_ = xi;
        return best.best_value;
    }

    void reset() {
        warm_.resize(0);
        best_value_ = -std::numeric_limits<double>::infinity();
    }

    const Vector& xi() const { return last_xi_; }

private:
    /// d/d eta of ||A_xi sqrt(Q~(eta))||_1 through the Frechet derivative of
    /// the square root: dR solves R dR + dR R = dQ.
    Vector outer_gradient(const S1Rewrite& rw, const Matrix& b_eta, const Vector& xi) const {
        const Index l = t_.length();
        const Matrix a_xi = a_star_.applied_to(xi);
        Matrix w;
        s1_inner(rw.a_rewritten, xi, nullptr, &w);
        const Matrix p = w.adjoint() * a_xi;
        const Matrix& e = rw.eig.vectors;
        Matrix k = e.adjoint() * p * e;
        const RealVector roots = rw.eig.values.cwiseMax(0.0).cwiseSqrt();
        for (Index i = 0; i < l; ++i) {
            for (Index j = 0; j < l; ++j) {
                const double denom = roots(i) + roots(j);
                k(i, j) = denom > 0.0 ? k(i, j) / denom : Complex(0.0);
            }
        }
        Matrix z = e * k * e.adjoint();
        z = ((z + z.adjoint()) / 2.0).eval();
        const Matrix bz = b_eta * z;
        Vector g = Vector::Zero(t_.dim());
        for (Index j = 0; j < l; ++j) {
            g += t_.b()[j].adjoint() * bz.col(j);
        }
        return 2.0 * g;
    }

    const ElementaryOperator& t_;
    CoefficientTuple a_star_;
    OptimizerConfig cfg_;
    OptimizerConfig inner_cfg_;
    double eps_abs_;
    Vector warm_;
    Vector last_xi_;
    double best_value_ = -std::numeric_limits<double>::infinity();
    std::uint64_t inner_calls_ = 0;
};

/// s1 norm of the rewritten tuple at (xi, eta), through the Gram square root.
double s1_value_at(const ElementaryOperator& t, const Vector& xi, const Vector& eta, double eps_abs) {
    const S1Rewrite rw = s1_rewrite_at(t, t.b().applied_to(eta), eps_abs);
    std::vector<Vector> vs;
    for (const Matrix& a : rw.a_rewritten) {
        vs.emplace_back(a.adjoint() * xi);
    }
    return s1_vector_norm(vs);
}

}  // namespace

NormReport norm_s1(const ElementaryOperator& t, const OptimizerConfig& cfg) {
    cfg.validate();
    constexpr double eps1 = 1e-6;
    constexpr double eps2 = 1e-7;
    double b_norm = 0.0;
    {
        Matrix sum = Matrix::Zero(t.dim(), t.dim());
        for (const Matrix& b : t.b().matrices()) {
            sum += b.adjoint() * b;
        }
        b_norm = std::sqrt(std::max(0.0, detail::eig_sym(sum).values(0)));
    }
    const double scale = b_norm > 0.0 ? b_norm : 1.0;

    struct Outcome {
        double value = -std::numeric_limits<double>::infinity();
        Vector xi, eta;
        bool converged = false;
    };
    std::vector<Outcome> outcomes(static_cast<std::size_t>(cfg.restarts));
    for_each_restart(cfg.restarts, cfg, [&](int r) {
        OptimizerConfig inner_seed = cfg;
        inner_seed.seed = cfg.seed ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(r + 1));
        S1Search search(t, inner_seed, eps1 * scale);
        const SphereObjective outer = [&](const Vector& eta, Vector* g) {
            return search.evaluate(eta, g, false);
        };
        auto rng = keyed_rng(cfg.seed, static_cast<std::uint64_t>(r));
        Vector eta = random_unit_vector(t.dim(), rng);
        search.evaluate(eta, nullptr, true);
        OptimizerResult<Vector> res;
        double value = -std::numeric_limits<double>::infinity();
        bool converged = false;
        // Re-run the outer ascent while a fresh inner multistart finds a better xi.
        for (int round = 0; round < 4; ++round) {
            res = refine_sphere(outer, eta, cfg);
            if (res.best_restart < 0) {
                break;
            }
            eta = res.best_point;
            converged = res.best_converged();
            const double before = res.best_value;
            const double polished = search.evaluate(eta, nullptr, true);
            value = std::max(before, polished);
            if (polished <= before + 1e-12 * (1.0 + std::abs(before))) {
                break;
            }
        }
        Outcome& o = outcomes[static_cast<std::size_t>(r)];
        if (std::isfinite(value)) {
            o.value = value;
            o.eta = eta;
            o.xi = search.xi();
            o.converged = converged;
        }
    });

    NormReport report;
    report.method = NormMethod::S1Formula;
    report.seed = cfg.seed;
    report.restarts_used = cfg.restarts;
    int best = -1;
    int converged = 0;
    for (int r = 0; r < cfg.restarts; ++r) {
        const Outcome& o = outcomes[static_cast<std::size_t>(r)];
        report.per_restart_values.push_back(o.value);
        converged += o.converged ? 1 : 0;
        if (std::isfinite(o.value) && (best < 0 || o.value > outcomes[best].value)) {
            best = r;
        }
    }
    report.converged_fraction = static_cast<double>(converged) / cfg.restarts;
    if (best < 0) {
        return report;
    }
    const Outcome& o = outcomes[static_cast<std::size_t>(best)];
    report.converged = o.converged;

    // Remove the O(eps) bias of the embedding by linear extrapolation to eps = 0,
    // re-maximizing over xi at each eps from the found xi.
    const auto value_at_eps = [&](double eps) {
        const S1Rewrite rw = s1_rewrite_at(t, t.b().applied_to(o.eta), eps * scale);
        const SphereObjective inner = [&](const Vector& xi, Vector* g) {
            return s1_inner(rw.a_rewritten, xi, g, nullptr);
        };
        const auto res = refine_sphere(inner, o.xi, cfg);
        return std::make_pair(s1_value_at(t, res.best_point, o.eta, eps * scale), res.best_point);
    };
    const auto [v1, xi1] = value_at_eps(eps1);
    const auto [v2, xi2] = value_at_eps(eps2);
    report.value = std::max(0.0, v2 + (v2 - v1) * eps2 / (eps1 - eps2));
    report.certificate = Certificate{xi2, o.eta, FunctionalObjective(t).contraction(xi2, o.eta)};
    return report;
}

ElementaryOperator amplify(const ElementaryOperator& t, Index k) {
    require_k(k, t.dim());
    const Index n = t.dim();
    const auto lift = [&](const Matrix& m) {
        Matrix out = Matrix::Zero(k * n, k * n);
        for (Index r = 0; r < k; ++r) {
            out.block(r * n, r * n, n, n) = m;
        }
        return out;
    };
    std::vector<Matrix> a, b;
    for (Index j = 0; j < t.length(); ++j) {
        a.push_back(lift(t.a()[j]));
        b.push_back(lift(t.b()[j]));
    }
    return ElementaryOperator(std::move(a), std::move(b));
}

NormReport knorm(const ElementaryOperator& t, Index k, const OptimizerConfig& cfg,
                 const std::vector<SpherePair>& extra_starts) {
    NormReport report = norm_tgm(amplify(t, k), cfg, extra_starts);
    report.method = NormMethod::Amplified;
    return report;
}

NormReport knorm_factorial(const ElementaryOperator& t, Index k, const OptimizerConfig& cfg) {
    require_k(k, t.dim());
    const Index n = t.dim();
    const Index l = t.length();
    const CoefficientTuple a_star = t.a().adjoint();
    // Column j of the stacks is vec(a_j^* C1), vec(b_j C2); rho = C C^*.
    const auto stack = [&](const CoefficientTuple& tuple, const Matrix& c) {
        Matrix s(n * k, l);
        for (Index j = 0; j < l; ++j) {
            const Matrix applied = tuple[j] * c;
            s.col(j) = Eigen::Map<const Vector>(applied.data(), n * k);
        }
        return s;
    };
    const DensityPairObjective objective = [&](const Matrix& c1, const Matrix& c2, Matrix* g1,
                                               Matrix* g2) {
        const Matrix sa = stack(a_star, c1);
        const Matrix sb = stack(t.b(), c2);
        double value = 0.0;
        const Matrix w = detail::polar_factor(sb * sa.adjoint(), &value);
        if (g1 != nullptr && g2 != nullptr) {
            const Matrix grad_a = w.adjoint() * sb;
            const Matrix grad_b = w * sa;
            *g1 = Matrix::Zero(n, k);
            *g2 = Matrix::Zero(n, k);
            for (Index j = 0; j < l; ++j) {
                *g1 += t.a()[j] * Eigen::Map<const Matrix>(grad_a.col(j).data(), n, k);
                *g2 += t.b()[j].adjoint() * Eigen::Map<const Matrix>(grad_b.col(j).data(), n, k);
            }
        }
        return value;
    };
    const auto r = maximize_density_pair(objective, n, k, cfg);
    NormReport report;
    report.method = NormMethod::FactorialState;
    fill_diagnostics(report, r, cfg);
    if (r.best_restart >= 0) {
        const DensityMatrix rho1 = DensityMatrix::from_factor(r.best_point.left);
        const DensityMatrix rho2 = DensityMatrix::from_factor(r.best_point.right);
        report.value = tgm(gram_at_state(a_star, rho1), gram_at_state(t.b(), rho2));
        const Vector xi = Eigen::Map<const Vector>(r.best_point.left.data(), n * k).normalized();
        const Vector eta = Eigen::Map<const Vector>(r.best_point.right.data(), n * k).normalized();
        const Matrix sa = stack(a_star, r.best_point.left);
        const Matrix sb = stack(t.b(), r.best_point.right);
        // x in M_k(M_n) realising the value: the adjoint of the polar factor.
        const Matrix x = detail::polar_factor(sb * sa.adjoint(), nullptr).adjoint();
        report.certificate = Certificate{xi, eta, x};
    }
    return report;
}

NormReport cb_norm(const ElementaryOperator& t, const OptimizerConfig& cfg) {
    const Index m = std::min(t.length(), t.dim());
    return knorm(t, m, cfg);
}

namespace {

double largest_eigenvalue(const Matrix& h) {
    return std::max(0.0, detail::eig_sym((h + h.adjoint()) / 2.0).values(0));
}

}  // namespace

double haagerup_upper_bound(const ElementaryOperator& t, bool balance) {
    const Index l = t.length();
    const Index n = t.dim();
    std::vector<Matrix> pa, pb;
    for (Index j = 0; j < l; ++j) {
        pa.emplace_back(t.a()[j] * t.a()[j].adjoint());
        pb.emplace_back(t.b()[j].adjoint() * t.b()[j]);
    }
    // Product for the diagonal rewrite alpha = diag(exp(s_j / 2)).
    const auto product = [&](const std::vector<double>& s) {
        Matrix sa = Matrix::Zero(n, n);
        Matrix sb = Matrix::Zero(n, n);
        for (Index j = 0; j < l; ++j) {
            sa += std::exp(s[j]) * pa[j];
            sb += std::exp(-s[j]) * pb[j];
        }
        return largest_eigenvalue(sa) * largest_eigenvalue(sb);
    };
    std::vector<double> s(static_cast<std::size_t>(l), 0.0);
    const double plain = product(s);
    if (!balance) {
        return std::sqrt(plain);
    }
    // Cyclic coordinate descent with golden-section line searches on s_j.
    constexpr double golden = 0.6180339887498949;
    double current = plain;
    for (int sweep = 0; sweep < 40; ++sweep) {
        const double start = current;
        for (Index j = 0; j < l; ++j) {
            double lo = s[j] - 8.0;
            double hi = s[j] + 8.0;
            const auto at = [&](double v) {
                std::vector<double> trial = s;
                trial[j] = v;
                return product(trial);
            };
            double x1 = hi - golden * (hi - lo);
            double x2 = lo + golden * (hi - lo);
            double f1 = at(x1);
            double f2 = at(x2);
            for (int it = 0; it < 80; ++it) {
                if (f1 <= f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - golden * (hi - lo);
                    f1 = at(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + golden * (hi - lo);
                    f2 = at(x2);
                }
            }
            const double candidate = 0.5 * (lo + hi);
            const double fc = at(candidate);
            if (fc < current) {
                s[j] = candidate;
                current = fc;
            }
        }
        if (start - current <= 1e-14 * start) {
            break;
        }
    }
    return std::sqrt(std::min(plain, current));
}

NormReport oracle_norm_unitary(const ElementaryOperator& t, const OptimizerConfig& cfg) {
    const Index n = t.dim();
    // ||T(U)|| with gradient G = sum_j a_j^* u v^* b_j^* from the top singular pair.
    const UnitaryObjective objective = [&](const Matrix& u, Matrix* grad) {
        Matrix y = Matrix::Zero(n, n);
        for (Index j = 0; j < t.length(); ++j) {
            y.noalias() += t.a()[j] * u * t.b()[j];
        }
        Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (grad != nullptr) {
            const Matrix uv = svd.matrixU().col(0) * svd.matrixV().col(0).adjoint();
            *grad = Matrix::Zero(n, n);
            for (Index j = 0; j < t.length(); ++j) {
                *grad += t.a()[j].adjoint() * uv * t.b()[j].adjoint();
            }
        }
        return svd.singularValues()(0);
    };
    const auto r = maximize_unitary(objective, n, cfg);
    NormReport report;
    report.method = NormMethod::OracleUnitary;
    fill_diagnostics(report, r, cfg);
    if (r.best_restart >= 0) {
        const Matrix y = apply(t, r.best_point);
        Eigen::JacobiSVD<Matrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
        report.certificate = Certificate{svd.matrixU().col(0), svd.matrixV().col(0), r.best_point};
    }
    return report;
}

bool GrowthTable::all_ok() const {
    for (const GrowthRow& row : rows) {
        if (!row.k_bound_ok || !row.step_bound_ok) {
            return false;
        }
    }
    return cb_bound_ok && multiplicative_ok && monotone_ok;
}

namespace {

std::vector<SpherePair> padded_start(const NormReport& previous, Index new_dim) {
    if (!previous.certificate) {
        return {};
    }
    SpherePair p{Vector::Zero(new_dim), Vector::Zero(new_dim)};
    p.xi.head(previous.certificate->xi.size()) = previous.certificate->xi;
    p.eta.head(previous.certificate->eta.size()) = previous.certificate->eta;
    return {p};
}

bool within(double lhs, double rhs, double slack) {
    return lhs <= rhs + slack * std::max(1.0, std::abs(rhs));
}

}  // namespace

GrowthTable growth_check(const ElementaryOperator& t, Index k_max, const OptimizerConfig& cfg,
                         double slack) {
    require_k(k_max, t.dim());
    const Index n = t.dim();
    const double sqrt_l = std::sqrt(static_cast<double>(t.length()));
    GrowthTable table;
    std::vector<NormReport> reports;
    for (Index k = 1; k <= k_max; ++k) {
        // Warm start from the (k-1)-optimum padded with zeros keeps ||T||_k monotone.
        const auto extra = k > 1 ? padded_start(reports.back(), k * n) : std::vector<SpherePair>{};
        reports.push_back(knorm(t, k, cfg, extra));
    }
    const double base = reports.front().value;
    for (Index k = 1; k <= k_max; ++k) {
        GrowthRow row;
        row.k = k;
        row.norm = reports[k - 1].value;
        row.k_bound = std::max(static_cast<double>(k), sqrt_l) * base;
        row.k_bound_ok = within(row.norm, row.k_bound, slack);
        if (k >= 2) {
            const double km1 = static_cast<double>(k - 1);
            row.step_bound = (1.0 + 2.0 * std::sqrt(km1) / (km1 + 1.0)) * reports[k - 2].value;
            row.step_bound_ok = within(row.norm, row.step_bound, slack);
            if (row.norm < reports[k - 2].value - slack * std::max(1.0, reports[k - 2].value)) {
                table.monotone_ok = false;
            }
        } else {
            row.step_bound = row.norm;
        }
        table.rows.push_back(row);
    }
    for (Index k1 = 1; k1 <= k_max; ++k1) {
        for (Index k2 = 1; k1 * k2 <= k_max; ++k2) {
            const double f12 = reports[k1 * k2 - 1].value;
            const double f2 = reports[k2 - 1].value;
            if (!within(f12, static_cast<double>(k1) * f2, slack)) {
                table.multiplicative_ok = false;
            }
        }
    }
    const Index m = std::min(t.length(), n);
    if (m <= k_max) {
        table.cb = reports[m - 1].value;
    } else if (m * n <= max_dim()) {
        table.cb = knorm(t, m, cfg, padded_start(reports.back(), m * n)).value;
    }
    table.cb_bound = sqrt_l * base;
    if (table.cb) {
        table.cb_bound_ok = within(*table.cb, table.cb_bound, slack);
    }
    return table;
}

namespace {

Matrix unit_matrix(Index n, Index i, Index j) {
    Matrix e = Matrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

}  // namespace

ElementaryOperator transpose_operator(Index n) {
    std::vector<Matrix> a, b;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            a.push_back(unit_matrix(n, i, j));
            b.push_back(unit_matrix(n, i, j));
        }
    }
    return ElementaryOperator(std::move(a), std::move(b));
}

ElementaryOperator first_row_transpose_operator(Index n) {
    std::vector<Matrix> a, b;
    for (Index j = 0; j < n; ++j) {
        a.push_back(unit_matrix(n, 0, j));
        b.push_back(unit_matrix(n, 0, j));
    }
    return ElementaryOperator(std::move(a), std::move(b));
}

ElementaryOperator random_operator(Index n, Index l, std::mt19937_64& rng) {
    if (n < 1 || l < 1) {
        throw Error(ErrorCode::InvalidInput, "random operator needs n >= 1 and l >= 1");
    }
    std::vector<Matrix> a, b;
    for (Index j = 0; j < l; ++j) {
        a.push_back(random_gaussian(n, n, rng));
    }
    for (Index j = 0; j < l; ++j) {
        b.push_back(random_gaussian(n, n, rng));
    }
    return ElementaryOperator(std::move(a), std::move(b));
}

}  // namespace elemnorm
