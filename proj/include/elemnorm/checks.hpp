#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "elemnorm/io.hpp"

namespace elemnorm::checks {

struct PropertyResult {
    std::string name;
    int trials = 0;
    int violations = 0;
    double worst_excess = 0.0;  ///< largest (lhs - rhs - allowance) seen, <= 0 when clean
    std::optional<io::Json> counterexample;
    bool ok() const { return violations == 0; }
};

struct SuiteConfig {
    int trials = 1000;
    std::uint64_t seed = 0;
    OptimizerConfig optimizer;
};

/// Names accepted by run_property, in suite order.
const std::vector<std::string>& property_names();

PropertyResult run_property(const std::string& name, const SuiteConfig& cfg);
std::vector<PropertyResult> run_suite(const SuiteConfig& cfg,
                                      const std::vector<std::string>& names = {});

/// Random PSD of the given rank (full rank when rank <= 0 or >= dim).
Matrix random_psd(Index dim, std::mt19937_64& rng, Index rank = 0);
/// Haar-like unitary from the QR factorization of a Gaussian matrix.
Matrix random_unitary(Index dim, std::mt19937_64& rng);
/// u diag(s) v with singular values in [1, cond].
Matrix random_conditioned(Index dim, double cond, std::mt19937_64& rng);

}  // namespace elemnorm::checks
