// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "elemnorm/checks.hpp"
#include "elemnorm/cli.hpp"
#include "elemnorm/elemop.hpp"
#include "elemnorm/io.hpp"
#include "elemnorm/tgm.hpp"

using namespace elemnorm;
using io::Json;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) {
                note << "failed: ";
            } else {
                note << "; ";
            }
            note << what;
            pass = false;
        }
    }
};

std::string fixture(const std::string& name) {
    return std::string(ELEMNORM_FIXTURES) + "/" + name;
}

Json run_cli(std::vector<std::string> args, int* code) {
    args.insert(args.begin(), "elemnorm");
    args.push_back("--json");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    *code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    if (*code != 0) {
        std::cerr << err.str();
        return Json();
    }
    return Json::parse(out.str());
}

double cli_value(std::vector<std::string> args, Verdict& v) {
    int code = 0;
    const Json j = run_cli(args, &code);
    v.require(code == 0, args[0] + " exited with " + std::to_string(code));
    return code == 0 ? j["value"].get<double>() : std::nan("");
}

std::string fmt(double x, int precision = 10) {
    std::ostringstream os;
    os << std::setprecision(precision) << x;
    return os.str();
}

double relative_spread(const std::vector<double>& values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return (*hi - *lo) / std::max(std::abs(*hi), 1e-300);
}

Verdict criterion1() {
    Verdict v;
    const std::string t = fixture("transpose3.json");
    const double norm = cli_value({"norm", "--input", t}, v);
    v.require(std::abs(norm - 1.0) <= 1e-4, "norm = " + fmt(norm));
    std::vector<std::string> ks;
    for (int k = 1; k <= 3; ++k) {
        const double nk = cli_value({"knorm", "--k", std::to_string(k), "--input", t}, v);
        v.require(std::abs(nk - k) <= 1e-3, "knorm k=" + std::to_string(k) + " = " + fmt(nk));
        ks.push_back(fmt(nk, 8));
    }
    int code = 0;
    const Json cb = run_cli({"cbnorm", "--input", t}, &code);
    v.require(code == 0 && cb["k_used"] == 3, "cbnorm did not use k = 3");
    if (code == 0) {
        v.require(std::abs(cb["value"].get<double>() - 3.0) <= 1e-3, "cbnorm = " + fmt(cb["value"].get<double>()));
    }
    if (v.pass) {
        v.note << "transpose on M3: norm " << fmt(norm, 8) << ", k-norms " << ks[0] << " " << ks[1]
               << " " << ks[2] << ", cb " << fmt(cb["value"].get<double>(), 8);
    }
    return v;
}

Verdict criterion2() {
    Verdict v;
    const std::string s = fixture("s4.json");
    const double norm = cli_value({"norm", "--input", s}, v);
    v.require(std::abs(norm - 1.0) <= 1e-4, "norm = " + fmt(norm));
    double worst = 0.0;
    for (int k = 1; k <= 4; ++k) {
        const double nk = cli_value({"knorm", "--k", std::to_string(k), "--input", s}, v);
        const double err = std::abs(nk - std::sqrt(static_cast<double>(k)));
        worst = std::max(worst, err);
        v.require(err <= 1e-3, "knorm k=" + std::to_string(k) + " = " + fmt(nk));
    }
    if (v.pass) {
        v.note << "S on M4: norm " << fmt(norm, 8) << ", max |knorm - sqrt k| " << fmt(worst, 3);
    }
    return v;
}

Verdict criterion3() {
    Verdict v;
    const double t = cli_value({"tgm", "--x", fixture("tgm_x.json"), "--y", fixture("tgm_y.json")}, v);
    const double m = cli_value({"sharp", "--x", fixture("tgm_x.json"), "--y", fixture("tgm_y.json")}, v);
    v.require(std::abs(t - 1.1180339887) <= 1e-9, "tgm = " + fmt(t, 14));
    v.require(std::abs(m - 0.6708203932) <= 1e-9, "trace(X#Y) = " + fmt(m, 14));
    v.require(m < t, "no strict gap");
    if (v.pass) {
        v.note << "tgm " << fmt(t, 12) << " > trace(X#Y) " << fmt(m, 12);
    }
    return v;
}

Verdict criterion4() {
    Verdict v;
    OptimizerConfig cfg;
    cfg.seed = 2024;
    double worst = 0.0;
    int evaluations = 0;
    for (int i = 0; i < 100; ++i) {
        auto rng = keyed_rng(4, static_cast<std::uint64_t>(i));
        const Index n = 2 + i % 2;
        const Index l = 1 + (i / 2) % 3;
        const ElementaryOperator t = random_operator(n, l, rng);
        const NormReport a = norm_tgm(t, cfg);
        const NormReport b = norm_s1(t, cfg);
        const NormReport c = oracle_norm_unitary(t, cfg);
        const double spread = relative_spread({a.value, b.value, c.value});
        worst = std::max(worst, spread);
        v.require(spread <= 1e-3, "instance " + std::to_string(i) + " spread " + fmt(spread, 3));
        // The identity is enforced inside functional_norm, which throws on a miss.
        try {
            for (const NormReport* r : {&a, &b}) {
                functional_norm(t, UnitVector(r->certificate->xi), UnitVector(r->certificate->eta));
                ++evaluations;
            }
            for (int s = 0; s < 20; ++s) {
                functional_norm(t, UnitVector(random_unit_vector(n, rng)), UnitVector(random_unit_vector(n, rng)));
                ++evaluations;
            }
        } catch (const std::logic_error& e) {
            v.require(false, e.what());
        }
    }
    if (v.pass) {
        v.note << "100 instances, max relative spread " << fmt(worst, 3) << ", " << evaluations
               << " functional-norm identity evaluations";
    }
    return v;
}

Verdict criterion5() {
    Verdict v;
    checks::SuiteConfig cfg;
    cfg.trials = 1000;
    cfg.seed = 5;
    const std::vector<std::string> names = {
        "tgm_symmetry", "tgm_agm", "sharp_mean_comparison", "tgm_monotone", "tgm_pinching",
        "tgm_subadditive", "tgm_concave", "tgm_alpha_transform", "rewrite_invariance"};
    int trials = 0;
    for (const auto& r : checks::run_suite(cfg, names)) {
        trials += r.trials;
        v.require(r.ok(), r.name + " (" + std::to_string(r.violations) + " violations, e.g. " +
                              (r.counterexample ? r.counterexample->dump() : "") + ")");
    }
    if (v.pass) {
        v.note << names.size() << " properties, " << trials << " trials, no violations";
    }
    return v;
}

Verdict criterion6() {
    Verdict v;
    OptimizerConfig cfg;
    cfg.seed = 6;
    for (int i = 0; i < 50; ++i) {
        auto rng = keyed_rng(6, static_cast<std::uint64_t>(i));
        const ElementaryOperator t = random_operator(1 + i % 3, 1 + (i / 3) % 3, rng);
        const GrowthTable g = growth_check(t, 3, cfg, 1e-5);
        v.require(g.all_ok(), "instance " + std::to_string(i) + " violates a growth bound");
        v.require(g.cb.has_value(), "instance " + std::to_string(i) + " has no cb value");
    }
    const GrowthTable tr = growth_check(transpose_operator(3), 3, cfg, 1e-5);
    const double k_tight = std::abs(tr.rows[2].norm - tr.rows[2].k_bound);
    v.require(tr.all_ok() && k_tight <= 1e-3, "k-bound not tight on the transpose: " + fmt(k_tight, 3));
    const ElementaryOperator s = first_row_transpose_operator(4);
    const GrowthTable sg = growth_check(s, 3, cfg, 1e-5);
    const double cb_tight = sg.cb ? std::abs(*sg.cb - sg.cb_bound) : 1.0;
    v.require(sg.all_ok() && cb_tight <= 1e-3, "sqrt(l)-bound not tight on S: " + fmt(cb_tight, 3));
    if (v.pass) {
        v.note << "50 instances within slack 1e-5; transpose |T|_3 = " << fmt(tr.rows[2].norm, 8)
               << " = k-bound, S cb " << fmt(*sg.cb, 8) << " = sqrt(l) |S|";
    }
    return v;
}

Verdict criterion7() {
    Verdict v;
    OptimizerConfig cfg;
    cfg.seed = 7;
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
        auto rng = keyed_rng(7, static_cast<std::uint64_t>(i));
        const Index n = 1 + i % 3;
        const ElementaryOperator t = random_operator(n, 1 + (i / 3) % 3, rng);
        for (Index k = 1; k <= 3; ++k) {
            const double a = knorm(t, k, cfg).value;
            const double f = knorm_factorial(t, k, cfg).value;
            const double gap = relative_spread({a, f});
            worst = std::max(worst, gap);
            v.require(gap <= 1e-3, "instance " + std::to_string(i) + " k=" + std::to_string(k) +
                                       ": " + fmt(a) + " vs " + fmt(f));
        }
    }
    if (v.pass) {
        v.note << "25 instances, k = 1..3, max relative gap " << fmt(worst, 3);
    }
    return v;
}

Verdict criterion8() {
    Verdict v;
    checks::SuiteConfig cfg;
    cfg.trials = 1000;
    cfg.seed = 8;
    const checks::PropertyResult r = checks::run_property("independence_rank", cfg);
    v.require(r.ok(), std::to_string(r.violations) + " mismatches with the vectorized rank");
    if (v.pass) {
        v.note << r.trials << " tuples (half with a constructed dependency) match the vectorized rank";
    }
    return v;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        double limit_seconds;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, 60, criterion1},  {2, 90, criterion2},  {3, 60, criterion3},  {4, 600, criterion4},
        {5, 300, criterion5}, {6, 600, criterion6}, {7, 600, criterion7}, {8, 600, criterion8},
    };
    bool all = true;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.limit_seconds) {
            v.require(false, "took " + fmt(seconds, 3) + " s, limit " + fmt(c.limit_seconds, 3) + " s");
        }
        all = all && v.pass;
        std::cout << "criterion " << c.id << ": " << (v.pass ? "PASS" : "FAIL") << "  " << v.note.str()
                  << "  [" << std::fixed << std::setprecision(1) << seconds << " s]" << std::defaultfloat
                  << std::endl;
    }
    return all ? 0 : 1;
}
