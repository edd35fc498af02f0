#include "elemnorm/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "elemnorm/tgm.hpp"

namespace elemnorm::checks {

Matrix random_psd(Index dim, std::mt19937_64& rng, Index rank) {
    if (rank <= 0 || rank > dim) {
        rank = dim;
    }
    const Matrix g = random_gaussian(dim, rank, rng);
    std::uniform_real_distribution<double> scale(-2.0, 2.0);
    const Matrix m = std::pow(10.0, scale(rng)) * g * g.adjoint() / static_cast<double>(rank);
    return ((m + m.adjoint()) / 2.0).eval();
}

Matrix random_unitary(Index dim, std::mt19937_64& rng) {
    const Matrix g = random_gaussian(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        if (std::abs(d) > 0.0) {
            q.col(i) *= d / std::abs(d);
        }
    }
    return q;
}

Matrix random_conditioned(Index dim, double cond, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    RealVector s(dim);
    for (Index i = 0; i < dim; ++i) {
        s(i) = 1.0 + (cond - 1.0) * unit(rng);
    }
    return random_unitary(dim, rng) * s.cast<Complex>().asDiagonal() * random_unitary(dim, rng);
}

namespace {

using io::Json;

/// One trial: returns (excess, instance). excess > 0 is a violation.
using Trial = std::function<std::pair<double, Json>(std::mt19937_64&, int)>;

struct Property {
    const char* name;
    bool uses_optimizer;
    std::function<Trial(const SuiteConfig&)> make;
};

Index pick(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Index dims(std::mt19937_64& rng) {
    return pick(rng, 1, 6);
}

Index random_rank(Index dim, std::mt19937_64& rng) {
    // Mostly full rank, sometimes singular.
    return std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? pick(rng, 1, static_cast<int>(dim))
                                                               : dim;
}

Json psd_pair(const Matrix& x, const Matrix& y) {
    Json j;
    j["x"] = io::square_to_json(x);
    j["y"] = io::square_to_json(y);
    return j;
}

double excess(double lhs, double rhs, double rel_tol) {
    return lhs - rhs - rel_tol * (1.0 + std::abs(rhs));
}

double tgm_of(const Matrix& x, const Matrix& y) {
    return tgm(PsdMatrix::from_gram(x), PsdMatrix::from_gram(y));
}

double trace_of(const Matrix& m) {
    return m.trace().real();
}

Matrix random_projection(Index dim, std::mt19937_64& rng) {
    const Index rank = pick(rng, 0, static_cast<int>(dim));
    const Matrix u = random_unitary(dim, rng).leftCols(rank);
    return u * u.adjoint();
}

const std::vector<Property>& registry() {
    static const std::vector<Property> props = {
        {"psd_sqrt_reconstruct", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const Index d = dims(rng);
                 const Matrix x = random_psd(d, rng, random_rank(d, rng));
                 const PsdMatrix r = psd_sqrt(psd_sqrt(PsdMatrix(x)));
                 const Matrix m = r.matrix();
                 const Matrix back = m * m * m * m;
                 const double err = max_abs(back - x) - 1e-8 * (1.0 + max_abs(x));
                 return std::make_pair(err, io::square_to_json(x));
             };
         }},
        {"trace_norm_dominates", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int trial) {
                 const Index d = dims(rng);
                 Matrix m = random_gaussian(d, d, rng);
                 if (trial % 2 == 1) {
                     // rank one: the two norms coincide
                     m = random_gaussian(d, 1, rng) * random_gaussian(d, 1, rng).adjoint();
                     const double tn = trace_norm(m);
                     const double sn = spectral_norm(m);
                     return std::make_pair(std::abs(tn - sn) - 1e-9 * (1.0 + sn),
                                           io::square_to_json(m));
                 }
                 return std::make_pair(excess(spectral_norm(m), trace_norm(m), 1e-12),
                                       io::square_to_json(m));
             };
         }},
        {"unitary_spectrum", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const Index d = dims(rng);
                 const Matrix g = random_gaussian(d, d, rng);
                 const Matrix h = ((g + g.adjoint()) / 2.0).eval();
                 const Matrix u = random_unitary(d, rng);
                 const RealVector l1 = eig_hermitian(HermitianMatrix(h)).values;
                 const RealVector l2 =
                     eig_hermitian(HermitianMatrix::symmetrized(u.adjoint() * h * u)).values;
                 const double err = (l1 - l2).cwiseAbs().maxCoeff() -
                                    1e-9 * (1.0 + l1.cwiseAbs().maxCoeff());
                 return std::make_pair(err, io::square_to_json(h));
             };
         }},
        {"tgm_two_routes", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const Index d = dims(rng);
                 const Matrix x = random_psd(d, rng) + 0.1 * Matrix::Identity(d, d);
                 const Matrix y = random_psd(d, rng, random_rank(d, rng));
                 const PsdMatrix px = PsdMatrix::from_gram(x);
                 const PsdMatrix py = PsdMatrix::from_gram(y);
                 const double v = tgm(px, py);
                 const double w = tgm_product_spectrum(px, py);
                 return std::make_pair(std::abs(v - w) - 1e-8 * (1.0 + v), psd_pair(x, y));
             };
         }},
        {"tgm_symmetry", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const Index d = dims(rng);
                 const Matrix x = random_psd(d, rng, random_rank(d, rng));
                 const Matrix y = random_psd(d, rng, random_rank(d, rng));
                 const double v = tgm_of(x, y);
                 return std::make_pair(std::abs(v - tgm_of(y, x)) - 1e-7 * (1.0 + v),
                                       psd_pair(x, y));
             };
         }},
        {"tgm_agm", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int trial) {
                 const Index d = dims(rng);
                 const Matrix x = random_psd(d, rng, random_rank(d, rng));
                 if (trial % 4 == 3) {
                     // Y = c X attains the geometric bound
                     const double c = std::uniform_real_distribution<double>(0.0, 10.0)(rng);
                     const Matrix y = c * x;
                     const double geo = std::sqrt(trace_of(x) * trace_of(y));
                     return std::make_pair(std::abs(tgm_of(x, y) - geo) - 1e-9 * (1.0 + geo),
                                           psd_pair(x, y));
                 }
                 const Matrix y = random_psd(d, rng, random_rank(d, rng));
                 const double v = tgm_of(x, y);
                 const double geo = std::sqrt(trace_of(x) * trace_of(y));
                 const double arith = (trace_of(x) + trace_of(y)) / 2.0;
                 return std::make_pair(std::max(excess(v, geo, 1e-7), excess(geo, arith, 1e-7)),
                                       psd_pair(x, y));
             };
         }},
        {"sharp_mean_comparison", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const Index d = dims(rng);
                 const Matrix x = random_psd(d, rng) + 1e-3 * Matrix::Identity(d, d);
                 const Matrix y = random_psd(d, rng, random_rank(d, rng));
                 const PsdMatrix px = PsdMatrix::from_gram(x);
                 const PsdMatrix py = PsdMatrix::from_gram(y);
                 const double mean = sharp_mean(px, py).mean.trace();
                 const double v = tgm(px, py);
                 return std::make_pair(mean - v - 1e-9 * (1.0 + v), psd_pair(x, y));
             };
         }},
        {"sharp_mean_riccati", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const Index d = dims(rng);
                 const Matrix x = random_psd(d, rng) + 0.1 * Matrix::Identity(d, d);
                 const Matrix y = random_psd(d, rng) + 0.1 * Matrix::Identity(d, d);
                 const Matrix g =
                     sharp_mean(PsdMatrix::from_gram(x), PsdMatrix::from_gram(y)).mean.matrix();
                 const Matrix back = g * x.inverse() * g;
                 return std::make_pair(max_abs(back - y) - 1e-7 * (1.0 + max_abs(y)),
                                       psd_pair(x, y));
             };
         }},
        {"tgm_monotone", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const Index d = dims(rng);
                 const Matrix x = random_psd(d, rng, random_rank(d, rng));
                 const Matrix y = random_psd(d, rng, random_rank(d, rng));
                 const Matrix x1 = x + random_psd(d, rng, random_rank(d, rng));
                 const Matrix y1 = y + random_psd(d, rng, random_rank(d, rng));
                 Json inst = psd_pair(x, y);
                 inst["x1"] = io::square_to_json(x1);
                 inst["y1"] = io::square_to_json(y1);
                 return std::make_pair(excess(tgm_of(x, y), tgm_of(x1, y1), 1e-9), inst);
             };
         }},
        {"tgm_pinching", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const Index d = dims(rng);
                 const Matrix x = random_psd(d, rng, random_rank(d, rng));
                 const Matrix y = random_psd(d, rng, random_rank(d, rng));
                 const Matrix p = random_projection(d, rng);
                 const Matrix q = Matrix::Identity(d, d) - p;
                 const PsdMatrix px = PsdMatrix::from_gram(x);
                 const PsdMatrix py = PsdMatrix::from_gram(y);
                 const double pinched = tgm(pinch(px, p), pinch(py, p));
                 const double split = tgm_of(p * x * p, p * y * p) + tgm_of(q * x * q, q * y * q);
                 Json inst = psd_pair(x, y);
                 inst["p"] = io::square_to_json(p);
                 const double err = std::max(excess(tgm(px, py), pinched, 1e-7),
                                             std::abs(pinched - split) - 1e-7 * (1.0 + split));
                 return std::make_pair(err, inst);
             };
         }},
        {"tgm_subadditive", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const Index d = dims(rng);
                 const Index nx = pick(rng, 1, 3);
                 const Index ny = pick(rng, 1, 3);
                 std::vector<Matrix> xs, ys;
                 Matrix sx = Matrix::Zero(d, d);
                 Matrix sy = Matrix::Zero(d, d);
                 Json inst;
                 inst["xs"] = Json::array();
                 inst["ys"] = Json::array();
                 for (Index i = 0; i < nx; ++i) {
                     xs.push_back(random_psd(d, rng, random_rank(d, rng)));
                     sx += xs.back();
                     inst["xs"].push_back(io::square_to_json(xs.back()));
                 }
                 for (Index i = 0; i < ny; ++i) {
                     ys.push_back(random_psd(d, rng, random_rank(d, rng)));
                     sy += ys.back();
                     inst["ys"].push_back(io::square_to_json(ys.back()));
                 }
                 // Single-sum form against ys[0].
                 double single = 0.0;
                 for (const Matrix& x : xs) {
                     single += tgm_of(x, ys[0]);
                 }
                 double sum = 0.0;
                 double sum_sq = 0.0;
                 for (const Matrix& x : xs) {
                     for (const Matrix& y : ys) {
                         const double v = tgm_of(x, y);
                         sum += v;
                         sum_sq += v * v;
                     }
                 }
                 const double lhs = tgm_of(sx, sy);
                 const double cs = static_cast<double>(nx * ny) * sum_sq;
                 const double err = std::max({excess(tgm_of(sx, ys[0]), single, 1e-7),
                                              excess(lhs, sum, 1e-7),
                                              excess(lhs * lhs, cs, 1e-7)});
                 return std::make_pair(err, inst);
             };
         }},
        {"tgm_concave", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const Index d = dims(rng);
                 const Matrix x1 = random_psd(d, rng, random_rank(d, rng));
                 const Matrix x2 = random_psd(d, rng, random_rank(d, rng));
                 const Matrix y = random_psd(d, rng, random_rank(d, rng));
                 const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                 const double lhs = tgm_of(t * x1 + (1.0 - t) * x2, y);
                 const double rhs = t * tgm_of(x1, y) + (1.0 - t) * tgm_of(x2, y);
                 Json inst = psd_pair(x1, y);
                 inst["x2"] = io::square_to_json(x2);
                 inst["t"] = t;
                 return std::make_pair(rhs - lhs - 1e-9 * (1.0 + lhs), inst);
             };
         }},
        {"tgm_alpha_transform", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int trial) {
                 const Index d = dims(rng);
                 const Matrix x = random_psd(d, rng, random_rank(d, rng));
                 const Matrix y = random_psd(d, rng, random_rank(d, rng));
                 const Matrix alpha =
                     trial % 3 == 0 ? random_unitary(d, rng) : random_conditioned(d, 10.0, rng);
                 const TransformCheck c = tgm_transform_check(PsdMatrix::from_gram(x),
                                                              PsdMatrix::from_gram(y), alpha);
                 Json inst = psd_pair(x, y);
                 inst["alpha"] = io::square_to_json(alpha);
                 const double err =
                     std::abs(c.lhs - c.rhs) - 1e-7 * (1.0 + c.rhs) * c.condition;
                 return std::make_pair(err, inst);
             };
         }},
        {"tgm_trace_norm_identity", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const Index n = dims(rng);
                 const Index l = dims(rng);
                 const Matrix u = random_gaussian(n, l, rng);
                 const Matrix v = random_gaussian(n, l, rng);
                 // Gram(W)_{ij} = <w_j, w_i>
                 const Matrix gu = (u.adjoint() * u).transpose();
                 const Matrix gv = (v.adjoint() * v).transpose();
                 const double lhs = tgm_of(gv, gu);
                 const double rhs = trace_norm(u * v.adjoint());
                 Json inst;
                 inst["shape"] = Json::array({n, l});
                 inst["u"] = io::entries_to_json(u);
                 inst["v"] = io::entries_to_json(v);
                 return std::make_pair(std::abs(lhs - rhs) - 1e-8 * (1.0 + rhs), inst);
             };
         }},
        {"gram_psd", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const ElementaryOperator t =
                     random_operator(pick(rng, 1, 4), pick(rng, 1, 4), rng);
                 const UnitVector eta(random_unit_vector(t.dim(), rng));
                 const PsdMatrix q = gram_at_vector(t.b(), eta);
                 const Matrix m = q.matrix();
                 const double lmin = detail::eig_sym(m).values.minCoeff();
                 return std::make_pair(-1e-10 * (1.0 + max_abs(m)) - lmin, io::operator_to_json(t));
             };
         }},
        {"gram_max_trace", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int trial) {
                 const ElementaryOperator t =
                     random_operator(pick(rng, 1, 4), pick(rng, 1, 4), rng);
                 const ExtremalRange er = extremal_range_basis(t.b());
                 if (trial % 2 == 1) {
                     const Vector c = random_unit_vector(er.basis.cols(), rng);
                     const UnitVector eta(er.basis * c);
                     const double tr = gram_at_vector(t.b(), eta).trace();
                     return std::make_pair(std::abs(tr - er.max_trace) - 1e-9 * (1.0 + er.max_trace),
                                           io::operator_to_json(t));
                 }
                 const UnitVector eta(random_unit_vector(t.dim(), rng));
                 const double tr = gram_at_vector(t.b(), eta).trace();
                 return std::make_pair(excess(tr, er.max_trace, 1e-9), io::operator_to_json(t));
             };
         }},
        {"gram_state_linear", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const ElementaryOperator t =
                     random_operator(pick(rng, 1, 4), pick(rng, 1, 4), rng);
                 const Index n = t.dim();
                 const Index k = pick(rng, 1, static_cast<int>(n));
                 const DensityMatrix r1 = DensityMatrix::from_factor(random_gaussian(n, k, rng));
                 const DensityMatrix r2 = DensityMatrix::from_factor(random_gaussian(n, k, rng));
                 const double s = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                 const Matrix mix = s * r1.matrix() + (1.0 - s) * r2.matrix();
                 const DensityMatrix r(mix, n);
                 const Matrix lhs = gram_at_state(t.b(), r).matrix();
                 const Matrix rhs = s * gram_at_state(t.b(), r1).matrix() +
                                    (1.0 - s) * gram_at_state(t.b(), r2).matrix();
                 return std::make_pair(max_abs(lhs - rhs) - 1e-12 * (1.0 + max_abs(rhs)),
                                       io::operator_to_json(t));
             };
         }},
        {"independence_rank", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int trial) {
                 const Index n = pick(rng, 1, 3);
                 const Index l = pick(rng, 1, static_cast<int>(std::min<Index>(n * n + 2, 9)));
                 std::vector<Matrix> b;
                 for (Index j = 0; j < l; ++j) {
                     b.push_back(random_gaussian(n, n, rng));
                 }
                 if (trial % 2 == 1 && l >= 2) {
                     // dependent family: last member is a combination of the others
                     Matrix combo = Matrix::Zero(n, n);
                     for (Index j = 0; j + 1 < l; ++j) {
                         combo += random_gaussian(1, 1, rng)(0, 0) * b[j];
                     }
                     b.back() = combo;
                 }
                 Matrix vec(l, n * n);
                 for (Index j = 0; j < l; ++j) {
                     vec.row(j) = Eigen::Map<const Vector>(b[j].data(), n * n).transpose();
                 }
                 Eigen::JacobiSVD<Matrix> svd(vec);
                 const RealVector s = svd.singularValues();
                 Index rank = 0;
                 for (Index i = 0; i < s.size(); ++i) {
                     rank += s(i) > 1e-8 * s(0) ? 1 : 0;
                 }
                 const bool truth = rank == l;
                 const bool got = linearly_independent(CoefficientTuple(b, Orientation::Column)).independent;
                 Json inst;
                 inst["b"] = Json::array();
                 for (const Matrix& m : b) {
                     inst["b"].push_back(io::square_to_json(m));
                 }
                 inst["expected_independent"] = truth;
                 return std::make_pair(truth == got ? -1.0 : 1.0, inst);
             };
         }},
        {"functional_identity", false,
         [](const SuiteConfig&) -> Trial {
             return [](std::mt19937_64& rng, int) {
                 const ElementaryOperator t =
                     random_operator(pick(rng, 1, 4), pick(rng, 1, 4), rng);
                 const UnitVector xi(random_unit_vector(t.dim(), rng));
                 const UnitVector eta(random_unit_vector(t.dim(), rng));
                 try {
                     functional_norm(t, xi, eta);
                     return std::make_pair(-1.0, io::operator_to_json(t));
                 } catch (const std::logic_error&) {
                     return std::make_pair(1.0, io::operator_to_json(t));
                 }
             };
         }},
        {"rewrite_invariance", true,
         [](const SuiteConfig& suite) -> Trial {
             return [cfg = suite.optimizer](std::mt19937_64& rng, int) {
                 const ElementaryOperator t =
                     random_operator(pick(rng, 1, 3), pick(rng, 1, 3), rng);
                 const Matrix alpha = random_conditioned(t.length(), 10.0, rng);
                 const ElementaryOperator r = rewrite(t, alpha);
                 // Each side is warm-started from the other's optimum, so a
                 // missed basin on one side does not read as a violation.
                 NormReport v = norm_tgm(t, cfg);
                 NormReport w = norm_tgm(r, cfg, {SpherePair{v.certificate->xi, v.certificate->eta}});
                 if (w.value > v.value) {
                     v = norm_tgm(t, cfg, {SpherePair{w.certificate->xi, w.certificate->eta}});
                 }
                 Json inst = io::operator_to_json(t);
                 inst["alpha"] = io::square_to_json(alpha);
                 return std::make_pair(std::abs(v.value - w.value) - 1e-5 * std::max(v.value, 1e-300),
                                       inst);
             };
         }},
    };
    return props;
}

}  // namespace

const std::vector<std::string>& property_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const Property& p : registry()) {
            out.emplace_back(p.name);
        }
        return out;
    }();
    return names;
}

PropertyResult run_property(const std::string& name, const SuiteConfig& cfg) {
    const auto& props = registry();
    const auto it = std::find_if(props.begin(), props.end(),
                                 [&](const Property& p) { return name == p.name; });
    if (it == props.end()) {
        throw Error(ErrorCode::InvalidInput, "unknown property: " + name);
    }
    const std::size_t index = static_cast<std::size_t>(it - props.begin());
    const Trial trial = it->make(cfg);
    PropertyResult result;
    result.name = name;
    result.worst_excess = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.trials; ++i) {
        auto rng = keyed_rng(cfg.seed ^ (0xA24BAED4963EE407ULL * (index + 1)), static_cast<std::uint64_t>(i));
        auto [err, instance] = trial(rng, i);
        ++result.trials;
        result.worst_excess = std::max(result.worst_excess, err);
        if (err > 0.0 || std::isnan(err)) {
            ++result.violations;
            if (!result.counterexample) {
                instance["property"] = name;
                instance["trial"] = i;
                instance["excess"] = err;
                result.counterexample = std::move(instance);
            }
        }
    }
    return result;
}

std::vector<PropertyResult> run_suite(const SuiteConfig& cfg, const std::vector<std::string>& names) {
    const std::vector<std::string>& chosen = names.empty() ? property_names() : names;
    std::vector<PropertyResult> out;
    for (const std::string& n : chosen) {
        out.push_back(run_property(n, cfg));
    }
    return out;
}

}  // namespace elemnorm::checks
