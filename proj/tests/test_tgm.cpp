#include <doctest.h>

#include <cmath>

#include "elemnorm/tgm.hpp"
#include "elemnorm/optimizer.hpp"

using namespace elemnorm;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

PsdMatrix psd(const Matrix& m) {
    return PsdMatrix(m);
}

// trace sqrt(M) = sqrt(tr M + 2 sqrt(det M)) for 2x2 PSD M, and the
// eigenvalues of sqrt(X) Y sqrt(X) are those of XY.
double tgm_2x2(const Matrix& x, const Matrix& y) {
    const Matrix p = x * y;
    const double det = std::max(0.0, p.determinant().real());
    return std::sqrt(std::max(0.0, p.trace().real() + 2.0 * std::sqrt(det)));
}

Matrix random_psd(Index n, std::mt19937_64& rng, Index rank) {
    const Matrix g = random_gaussian(n, rank, rng);
    return g * g.adjoint();
}

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an elemnorm::Error");
    return ErrorCode::InvalidInput;
}

const Matrix fixture_x = mat2(1.25, 1.0, 1.0, 1.25);
const Matrix fixture_y = mat2(1.0, 0.0, 0.0, 0.0);

}  // namespace

TEST_CASE("strict gap between the tracial and the matrix geometric mean") {
    const double v = tgm(psd(fixture_x), psd(fixture_y));
    CHECK(std::abs(v - std::sqrt(5.0) / 2.0) < 1e-9);
    CHECK(std::abs(v - 1.1180339887) < 1e-9);

    const SharpMean m = sharp_mean(psd(fixture_x), psd(fixture_y));
    CHECK(m.regularization == 0.0);
    const Matrix expected = mat2(3.0 / (2.0 * std::sqrt(5.0)), 0.0, 0.0, 0.0);
    CHECK((m.mean.matrix() - expected).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(m.mean.trace() - 0.6708203932) < 1e-9);
    CHECK(m.mean.trace() < v);
}

TEST_CASE("equal arguments and scalar arguments") {
    auto rng = keyed_rng(1, 0);
    for (Index n = 1; n <= 5; ++n) {
        const Matrix x = random_psd(n, rng, n);
        CHECK(tgm(psd(x), psd(x)) == doctest::Approx(x.trace().real()).epsilon(1e-10));

        const Matrix y = random_psd(n, rng, n);
        const double lambda = 2.5;
        const Matrix scaled = lambda * Matrix::Identity(n, n);
        const double expected = std::sqrt(lambda) * psd_sqrt(psd(y)).trace();
        CHECK(tgm(psd(scaled), psd(y)) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("closed form on 2x2 inputs and the product-spectrum route") {
    auto rng = keyed_rng(2, 0);
    for (int trial = 0; trial < 200; ++trial) {
        // full rank: the closed form cancels in det(XY) when a factor is singular
        const Matrix x = random_psd(2, rng, 2);
        const Matrix y = random_psd(2, rng, 2);
        const double v = tgm(PsdMatrix::from_gram(x), PsdMatrix::from_gram(y));
        CHECK(std::abs(v - tgm_2x2(x, y)) < 1e-8 * (1.0 + v));
        CHECK(std::abs(v - tgm_product_spectrum(PsdMatrix::from_gram(x), PsdMatrix::from_gram(y))) <
              1e-8 * (1.0 + v));
    }
}

TEST_CASE("rank-one argument: tgm(v v^*, Y) = sqrt(v^* Y v)") {
    auto rng = keyed_rng(8, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const Index n = 1 + trial % 6;
        const Vector v = random_gaussian(n, 1, rng);
        const Matrix y = random_psd(n, rng, 1 + trial % static_cast<int>(n));
        const double expected = std::sqrt(std::max(0.0, v.dot(y * v).real()));
        const PsdMatrix px = PsdMatrix::from_gram(v * v.adjoint());
        const PsdMatrix py = PsdMatrix::from_gram(y);
        CHECK(std::abs(tgm(px, py) - expected) < 1e-8 * (1.0 + expected));
        CHECK(std::abs(tgm(py, px) - expected) < 1e-8 * (1.0 + expected));
    }
}

TEST_CASE("dimension mismatch") {
    CHECK(code_of([] { tgm(PsdMatrix::identity(2), PsdMatrix::identity(3)); }) ==
          ErrorCode::DimMismatch);
}

TEST_CASE("sharp mean solves the Riccati equation") {
    auto rng = keyed_rng(3, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = 1 + trial % 5;
        const Matrix x = random_psd(n, rng, n) + 0.1 * Matrix::Identity(n, n);
        const Matrix y = random_psd(n, rng, n);
        const Matrix g = sharp_mean(PsdMatrix::from_gram(x), PsdMatrix::from_gram(y)).mean.matrix();
        CHECK((g * x.inverse() * g - y).cwiseAbs().maxCoeff() < 1e-7 * (1.0 + y.cwiseAbs().maxCoeff()));
    }
    const SharpMean id = sharp_mean(PsdMatrix::identity(3), PsdMatrix::identity(3));
    CHECK((id.mean.matrix() - Matrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("singular base is regularized, zero base is rejected") {
    const SharpMean m = sharp_mean(psd(fixture_y), psd(fixture_x));
    CHECK(m.regularization == doctest::Approx(0.5e-10));
    CHECK(code_of([] { sharp_mean(PsdMatrix(Matrix::Zero(2, 2)), PsdMatrix::identity(2)); }) ==
          ErrorCode::SingularBase);
}

TEST_CASE("pinching") {
    const Matrix ones = mat2(1.0, 1.0, 1.0, 1.0);
    const Matrix p = mat2(1.0, 0.0, 0.0, 0.0);
    CHECK((pinch(psd(ones), p).matrix() - Matrix::Identity(2, 2)).norm() < 1e-15);
    CHECK((pinch(psd(ones), Matrix::Identity(2, 2)).matrix() - ones).norm() < 1e-15);
    CHECK((pinch(psd(ones), Matrix::Zero(2, 2)).matrix() - ones).norm() < 1e-15);
    CHECK(code_of([&] { pinch(psd(ones), mat2(1.0, 1.0, 0.0, 0.0)); }) == ErrorCode::InvalidProjection);
    CHECK(code_of([&] { pinch(psd(ones), mat2(0.5, 0.0, 0.0, 0.0)); }) == ErrorCode::InvalidProjection);
}

TEST_CASE("congruence invariance") {
    auto rng = keyed_rng(4, 0);
    const Matrix x = random_psd(3, rng, 3);
    const Matrix y = random_psd(3, rng, 2);
    const TransformCheck same = tgm_transform_check(psd(x), psd(y), Matrix::Identity(3, 3));
    CHECK(same.lhs == doctest::Approx(same.rhs).epsilon(1e-12));

    const Matrix u = Eigen::HouseholderQR<Matrix>(random_gaussian(3, 3, rng)).householderQ();
    const double direct = tgm(PsdMatrix::from_gram(u.adjoint() * x * u),
                              PsdMatrix::from_gram(u.adjoint() * y * u));
    CHECK(direct == doctest::Approx(tgm(psd(x), psd(y))).epsilon(1e-10));

    const Matrix alpha = random_gaussian(3, 3, rng);
    const TransformCheck c = tgm_transform_check(psd(x), psd(y), alpha);
    CHECK(c.within_contract);
    // direct evaluation of both sides
    const Matrix inv = alpha.inverse();
    const double lhs = tgm(PsdMatrix::from_gram(alpha.adjoint() * x * alpha),
                           PsdMatrix::from_gram(inv * y * inv.adjoint()));
    CHECK(std::abs(lhs - c.rhs) < 1e-7 * (1.0 + c.rhs) * c.condition);

    Matrix singular = Matrix::Identity(3, 3);
    singular(2, 2) = 1e-14;
    CHECK(code_of([&] { tgm_transform_check(psd(x), psd(y), singular); }) == ErrorCode::IllConditioned);
}

TEST_CASE("linearly dependent arguments attain the geometric bound") {
    auto rng = keyed_rng(6, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = random_psd(4, rng, 1 + trial % 4);
        const double c = 0.1 * (trial + 1);
        const double bound = std::sqrt(x.trace().real() * (c * x).trace().real());
        CHECK(std::abs(tgm(PsdMatrix::from_gram(x), PsdMatrix::from_gram(c * x)) - bound) <
              1e-9 * (1.0 + bound));
    }
}

TEST_CASE("trace norm identity on Gram matrices") {
    auto rng = keyed_rng(7, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix u = random_gaussian(3, 4, rng);
        const Matrix v = random_gaussian(3, 4, rng);
        const Matrix gu = (u.adjoint() * u).transpose();
        const Matrix gv = (v.adjoint() * v).transpose();
        const double lhs = tgm(PsdMatrix::from_gram(gv), PsdMatrix::from_gram(gu));
        CHECK(std::abs(lhs - trace_norm(u * v.adjoint())) < 1e-8 * (1.0 + lhs));
    }
}
