#include <doctest.h>

#include "elemnorm/checks.hpp"

using namespace elemnorm;

TEST_CASE("every property runs clean on a short suite") {
    checks::SuiteConfig cfg;
    cfg.trials = 40;
    cfg.optimizer.restarts = 16;
    for (const auto& r : checks::run_suite(cfg)) {
        INFO(r.name);
        CHECK(r.trials == 40);
        CHECK(r.ok());
    }
}

TEST_CASE("unknown property") {
    CHECK_THROWS_AS(checks::run_property("no_such_property", checks::SuiteConfig{}), Error);
}

TEST_CASE("random helpers") {
    auto rng = keyed_rng(1, 0);
    const Matrix u = checks::random_unitary(4, rng);
    CHECK((u.adjoint() * u - Matrix::Identity(4, 4)).norm() < 1e-12);
    const Matrix a = checks::random_conditioned(4, 10.0, rng);
    const RealVector s = singular_values(a);
    CHECK(s(0) / s(3) <= 10.0 + 1e-9);
    const Matrix p = checks::random_psd(5, rng, 2);
    CHECK(eig_hermitian(HermitianMatrix(p)).values(2) < 1e-10 * (1.0 + p.norm()));
}
