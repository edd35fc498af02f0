#include "elemnorm/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include "elemnorm/checks.hpp"
#include "elemnorm/io.hpp"
#include "elemnorm/tgm.hpp"

namespace elemnorm::cli {

namespace {

using io::Json;

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_failure = 2;

/// Raised for tolerance failures after the report has been written.
class ToleranceFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    int restarts = 64;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    bool json = false;
    int threads = 1;

    OptimizerConfig optimizer() const {
        OptimizerConfig cfg;
        cfg.restarts = restarts;
        cfg.seed = seed;
        cfg.parallel = threads != 1;
        cfg.threads = threads;
        cfg.validate();
        return cfg;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

void print_text(std::ostream& out, const Json& j, const std::string& indent = "") {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Json& v = it.value();
        if (v.is_object()) {
            out << indent << it.key() << ":\n";
            print_text(out, v, indent + "  ");
        } else if (v.is_number_float()) {
            out << indent << it.key() << ": " << fmt(v.get<double>()) << "\n";
        } else if (v.is_array() && v.size() > 8) {
            out << indent << it.key() << ": [" << v.size() << " entries]\n";
        } else {
            out << indent << it.key() << ": " << v.dump() << "\n";
        }
    }
}

void emit(std::ostream& out, const Globals& g, const Json& j) {
    if (g.json) {
        out << j.dump(2) << "\n";
    } else {
        print_text(out, j);
    }
}

/// Report for an operator norm, with its certificate re-evaluated.
void emit_norm(std::ostream& out, const Globals& g, const ElementaryOperator& t,
               const NormReport& report, std::optional<double> cb = std::nullopt,
               Json extra = Json::object()) {
    std::optional<double> recomputed;
    std::string problem;
    if (report.certificate) {
        recomputed = io::certificate_value(t, *report.certificate).real();
        const double x_norm = spectral_norm(report.certificate->x);
        if (std::abs(*recomputed - report.value) > g.tol) {
            problem = "certificate value " + fmt(*recomputed) + " differs from reported " +
                      fmt(report.value) + " by more than --tol";
        } else if (x_norm > 1.0 + g.tol) {
            problem = "certificate contraction has norm " + fmt(x_norm);
        }
    }
    Json j = io::report_to_json(report, io::Bounds{haagerup_upper_bound(t, true), cb}, recomputed);
    for (auto it = extra.begin(); it != extra.end(); ++it) {
        j[it.key()] = it.value();
    }
    emit(out, g, j);
    if (!problem.empty()) {
        throw ToleranceFailure(problem);
    }
}

ElementaryOperator load_operator(const std::string& path) {
    return io::operator_from_json(io::read_json_file(path));
}

PsdMatrix load_psd(const std::string& path) {
    return PsdMatrix(io::square_from_json(io::read_json_file(path)));
}

Json plain_report(double value, const char* method) {
    Json j;
    j["value"] = value;
    j["method"] = method;
    j["certificate"] = nullptr;
    j["restarts_used"] = 0;
    j["converged"] = true;
    return j;
}

double relative_gap(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

bool near_singular(const PsdMatrix& m) {
    const RealVector& v = m.spectrum().values;
    return v(v.size() - 1) <= 1e-8 * std::max(v(0), 1e-300);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Norms of elementary operators on matrix algebras", "elemnorm"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--restarts", g.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
    app.add_option("--tol", g.tol, "Certificate and agreement tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Random seed");
    app.add_flag("--json", g.json, "Machine-readable report");
    app.add_option("--threads", g.threads, "Worker threads for restarts (0 = all cores)")
        ->check(CLI::NonNegativeNumber);

    std::string input;
    const auto with_input = [&](CLI::App* sub) {
        sub->add_option("-i,--input", input, "Operator JSON file")->required();
        return sub;
    };

    std::function<void()> action;

    auto* norm = with_input(app.add_subcommand("norm", "Norm via the tracial geometric mean formula"));
    norm->callback([&] {
        action = [&] {
            const ElementaryOperator t = load_operator(input);
            emit_norm(out, g, t, norm_tgm(t, g.optimizer()));
        };
    });

    auto* norm_s1_cmd = with_input(app.add_subcommand("norm-s1", "Norm via the S1 vector-norm formula"));
    norm_s1_cmd->callback([&] {
        action = [&] {
            const ElementaryOperator t = load_operator(input);
            emit_norm(out, g, t, norm_s1(t, g.optimizer()));
        };
    });

    auto* oracle = with_input(app.add_subcommand("oracle", "Norm by search over unitaries"));
    oracle->callback([&] {
        action = [&] {
            const ElementaryOperator t = load_operator(input);
            emit_norm(out, g, t, oracle_norm_unitary(t, g.optimizer()));
        };
    });

    Index k = 1;
    std::string method = "amplify";
    auto* knorm_cmd = with_input(app.add_subcommand("knorm", "k-norm ||T||_k"));
    knorm_cmd->add_option("--k", k, "Amplification level")->required()->check(CLI::PositiveNumber);
    knorm_cmd->add_option("--method", method, "Route")
        ->check(CLI::IsMember({"amplify", "factorial", "both"}));
    knorm_cmd->callback([&] {
        action = [&] {
            const ElementaryOperator t = load_operator(input);
            const OptimizerConfig cfg = g.optimizer();
            if (method == "amplify") {
                emit_norm(out, g, t, knorm(t, k, cfg));
            } else if (method == "factorial") {
                emit_norm(out, g, t, knorm_factorial(t, k, cfg));
            } else {
                const NormReport amp = knorm(t, k, cfg);
                const NormReport fac = knorm_factorial(t, k, cfg);
                const double gap = relative_gap(amp.value, fac.value);
                Json extra;
                extra["routes"] = {{"amplified", amp.value}, {"factorial", fac.value}};
                extra["relative_gap"] = gap;
                emit_norm(out, g, t, amp, std::nullopt, extra);
                if (gap > std::max(g.tol, 1e-4)) {
                    throw ToleranceFailure("amplified and factorial routes differ by " + fmt(gap));
                }
            }
        };
    });

    auto* cb = with_input(app.add_subcommand("cbnorm", "Completely bounded norm"));
    cb->callback([&] {
        action = [&] {
            const ElementaryOperator t = load_operator(input);
            const NormReport r = cb_norm(t, g.optimizer());
            Json extra;
            extra["k_used"] = std::min(t.length(), t.dim());
            emit_norm(out, g, t, r, r.value, extra);
        };
    });

    std::string x_path;
    std::string y_path;
    auto* tgm_cmd = app.add_subcommand("tgm", "Tracial geometric mean of two PSD matrices");
    auto* sharp_cmd = app.add_subcommand("sharp", "Matrix geometric mean X # Y");
    for (auto* sub : {tgm_cmd, sharp_cmd}) {
        sub->add_option("--x", x_path, "First matrix JSON")->required();
        sub->add_option("--y", y_path, "Second matrix JSON")->required();
    }
    tgm_cmd->callback([&] {
        action = [&] {
            const PsdMatrix x = load_psd(x_path);
            const PsdMatrix y = load_psd(y_path);
            const double v = tgm(x, y);
            const double w = tgm_product_spectrum(x, y);
            // The product XY is diagonalizable only when one factor is invertible.
            const bool checked = !(near_singular(x) && near_singular(y));
            Json j = plain_report(v, "tgm");
            j["product_spectrum"] = w;
            j["routes_checked"] = checked;
            emit(out, g, j);
            if (checked && std::abs(v - w) > 1e-8 * (1.0 + v)) {
                throw ToleranceFailure("tgm evaluation routes disagree");
            }
        };
    });
    sharp_cmd->callback([&] {
        action = [&] {
            const SharpMean m = sharp_mean(load_psd(x_path), load_psd(y_path));
            Json j = plain_report(m.mean.trace(), "sharp_mean_trace");
            j["mean"] = io::square_to_json(m.mean.matrix());
            j["regularization"] = m.regularization;
            emit(out, g, j);
        };
    });

    auto* s1 = with_input(app.add_subcommand("s1norm", "S1 norm of a vector family"));
    s1->callback([&] {
        action = [&] {
            const double v = s1_vector_norm(io::vectors_from_json(io::read_json_file(input)));
            emit(out, g, plain_report(v, "s1_vector_norm"));
        };
    });

    Index kmax = 3;
    double slack = 1e-5;
    auto* growth = with_input(app.add_subcommand("growth", "Growth of ||T||_k against the bounds"));
    growth->add_option("--kmax", kmax, "Largest k")->required()->check(CLI::PositiveNumber);
    growth->add_option("--slack", slack, "Relative slack for the inequalities");
    growth->callback([&] {
        action = [&] {
            const ElementaryOperator t = load_operator(input);
            const GrowthTable table = growth_check(t, kmax, g.optimizer(), slack);
            Json j;
            j["method"] = "growth_check";
            j["rows"] = Json::array();
            for (const GrowthRow& row : table.rows) {
                j["rows"].push_back({{"k", row.k},
                                     {"norm", row.norm},
                                     {"k_bound", row.k_bound},
                                     {"step_bound", row.step_bound},
                                     {"k_bound_ok", row.k_bound_ok},
                                     {"step_bound_ok", row.step_bound_ok}});
            }
            j["cb"] = table.cb ? Json(*table.cb) : Json(nullptr);
            j["cb_bound"] = table.cb_bound;
            j["cb_bound_ok"] = table.cb_bound_ok;
            j["multiplicative_ok"] = table.multiplicative_ok;
            j["monotone_ok"] = table.monotone_ok;
            j["all_ok"] = table.all_ok();
            j["seed"] = g.seed;
            if (g.json) {
                emit(out, g, j);
            } else {
                out << std::setw(4) << "k" << std::setw(18) << "norm" << std::setw(18) << "k_bound"
                    << std::setw(18) << "step_bound" << "  ok\n";
                for (const GrowthRow& row : table.rows) {
                    out << std::setw(4) << row.k << std::setw(18) << fmt(row.norm) << std::setw(18)
                        << fmt(row.k_bound) << std::setw(18) << fmt(row.step_bound) << "  "
                        << (row.k_bound_ok && row.step_bound_ok ? "yes" : "NO") << "\n";
                }
                out << "cb: " << (table.cb ? fmt(*table.cb) : std::string("skipped (guard)"))
                    << "  bound " << fmt(table.cb_bound) << "\n";
                out << "all_ok: " << (table.all_ok() ? "true" : "false") << "\n";
            }
            if (!table.all_ok()) {
                throw ToleranceFailure("growth inequalities violated");
            }
        };
    });

    std::string which = "b";
    auto* indep = with_input(app.add_subcommand("independent", "Linear independence of a coefficient tuple"));
    indep->add_option("--tuple", which, "Which tuple to test")->check(CLI::IsMember({"a", "b"}));
    indep->callback([&] {
        action = [&] {
            const ElementaryOperator t = load_operator(input);
            const CoefficientTuple tuple = which == "a" ? t.a().adjoint() : t.b();
            const IndependenceResult r = linearly_independent(tuple);
            const RealVector& s = r.witness.spectrum().values;
            Json j;
            j["independent"] = r.independent;
            j["tuple"] = which;
            j["witness_max_eigenvalue"] = s(0);
            j["witness_min_eigenvalue"] = s(s.size() - 1);
            emit(out, g, j);
        };
    });

    bool balance = false;
    auto* haag = with_input(app.add_subcommand("haagerup", "Haagerup tensor upper bound"));
    haag->add_flag("--balance", balance, "Optimize a diagonal rewrite first");
    haag->callback([&] {
        action = [&] {
            const ElementaryOperator t = load_operator(input);
            const double v = haagerup_upper_bound(t, balance);
            Json j = plain_report(v, "haagerup_bound");
            j["seed"] = g.seed;
            j["bounds"] = {{"haagerup", v}, {"cb", nullptr}};
            j["balanced"] = balance;
            emit(out, g, j);
        };
    });

    auto* eqgap = with_input(app.add_subcommand("eqgap", "Distance between extremal numerical-range parts"));
    eqgap->callback([&] {
        action = [&] {
            const ElementaryOperator t = load_operator(input);
            const EqualityGap r = haagerup_equality_gap(t.a(), t.b(), g.optimizer());
            Json j;
            j["value"] = r.gap;
            j["method"] = "equality_gap";
            j["certificate"] = {{"xi", io::vector_to_json(r.xi)}, {"eta", io::vector_to_json(r.eta)}};
            j["restarts_used"] = r.restarts_used;
            j["converged"] = r.converged;
            j["seed"] = g.seed;
            emit(out, g, j);
        };
    });

    int trials = 1000;
    std::vector<std::string> properties;
    auto* check = app.add_subcommand("check", "Randomized property suite");
    check->add_option("--trials", trials, "Trials per property")->check(CLI::PositiveNumber);
    check->add_option("--property", properties, "Restrict to these properties")
        ->check(CLI::IsMember(checks::property_names()));
    check->callback([&] {
        action = [&] {
            checks::SuiteConfig cfg;
            cfg.trials = trials;
            cfg.seed = g.seed;
            cfg.optimizer = g.optimizer();
            const auto results = checks::run_suite(cfg, properties);
            Json summary = Json::array();
            const checks::PropertyResult* failed = nullptr;
            for (const auto& r : results) {
                summary.push_back({{"property", r.name},
                                   {"trials", r.trials},
                                   {"violations", r.violations},
                                   {"worst_excess", r.worst_excess}});
                if (!r.ok() && failed == nullptr) {
                    failed = &r;
                }
            }
            if (g.json) {
                Json j;
                j["properties"] = summary;
                j["ok"] = failed == nullptr;
                j["counterexample"] = failed ? *failed->counterexample : Json(nullptr);
                emit(out, g, j);
            } else {
                for (const auto& r : results) {
                    out << std::left << std::setw(26) << r.name << std::right << std::setw(6)
                        << r.trials << " trials  " << std::setw(4) << r.violations
                        << " violations  worst excess " << fmt(r.worst_excess) << "\n";
                }
                if (failed != nullptr) {
                    out << failed->counterexample->dump(2) << "\n";
                }
            }
            if (failed != nullptr) {
                throw ToleranceFailure("property " + failed->name + " violated");
            }
        };
    });

    Index gen_n = 2;
    Index gen_l = 2;
    std::string output;
    auto* gen = app.add_subcommand("gen", "Random operator instance");
    gen->add_option("--n", gen_n, "Matrix size")->required()->check(CLI::PositiveNumber);
    gen->add_option("--l", gen_l, "Tuple length")->required()->check(CLI::PositiveNumber);
    gen->add_option("-o,--output", output, "Write to a file instead of stdout");
    gen->callback([&] {
        action = [&] {
            auto rng = keyed_rng(g.seed, 0);
            const std::string text = io::operator_to_json(random_operator(gen_n, gen_l, rng)).dump() + "\n";
            if (output.empty()) {
                out << text;
            } else {
                io::write_text_file(output, text);
            }
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        action();
        return exit_ok;
    } catch (const io::InputError& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const ToleranceFailure& e) {
        err << "tolerance failure: " << e.what() << "\n";
        return exit_failure;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_failure;
    }
}

}  // namespace elemnorm::cli
