#include <doctest.h>

#include <cmath>

#include "elemnorm/hermitian.hpp"
#include "elemnorm/optimizer.hpp"

using namespace elemnorm;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
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

}  // namespace

TEST_CASE("hermitian check accepts roundoff and rejects real asymmetry") {
    const Matrix h = mat2(2.0, Complex(1.0, 1.0), Complex(1.0, -1.0 + 1e-12), 3.0);
    const HermitianMatrix ok(h);
    CHECK(ok.matrix()(0, 1) == std::conj(ok.matrix()(1, 0)));

    const Matrix bad = mat2(1.0, 1.0, 0.0, 1.0);
    CHECK(code_of([&] { HermitianMatrix{bad}; }) == ErrorCode::InvalidInput);
}

TEST_CASE("non-square and non-finite input") {
    CHECK(code_of([] { HermitianMatrix{Matrix::Zero(2, 3)}; }) == ErrorCode::DimMismatch);
    Matrix m = Matrix::Identity(2, 2);
    m(0, 0) = std::nan("");
    CHECK(code_of([&] { PsdMatrix{m}; }) == ErrorCode::InvalidInput);
}

TEST_CASE("eigenvalues are sorted and vectors match") {
    const Matrix h = mat2(2.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 2.0);
    const EigenDecomposition e = eig_hermitian(HermitianMatrix(h));
    CHECK(e.values(0) == doctest::Approx(3.0));
    CHECK(e.values(1) == doctest::Approx(1.0));
    for (int i = 0; i < 2; ++i) {
        const Vector r = h * e.vectors.col(i) - e.values(i) * e.vectors.col(i);
        CHECK(r.norm() < 1e-12);
    }
}

TEST_CASE("PSD validation and clamping") {
    const Matrix tiny_neg = mat2(1.0, 0.0, 0.0, -1e-12);
    const PsdMatrix p(tiny_neg);
    CHECK(p.eigen_floor() == doctest::Approx(-1e-12));
    CHECK(p.spectrum().values(1) == 0.0);

    const Matrix neg = mat2(1.0, 0.0, 0.0, -1e-3);
    CHECK(code_of([&] { PsdMatrix{neg}; }) == ErrorCode::NotPSD);
}

TEST_CASE("square root of a diagonal and of a rank-one matrix") {
    const PsdMatrix d(mat2(4.0, 0.0, 0.0, 9.0));
    const Matrix r = psd_sqrt(d).matrix();
    CHECK(std::abs(r(0, 0) - 2.0) < 1e-14);
    CHECK(std::abs(r(1, 1) - 3.0) < 1e-14);

    // (v v^*)^{1/2} = v v^* / |v|
    Vector v(2);
    v << Complex(1.0, 2.0), Complex(-1.0, 0.5);
    const Matrix vv = v * v.adjoint();
    const Matrix root = psd_sqrt(PsdMatrix(vv)).matrix();
    CHECK((root - vv / v.norm()).norm() < 1e-12);
}

TEST_CASE("fourth power of the fourth root") {
    auto rng = keyed_rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix g = random_gaussian(4, 3, rng);
        const Matrix x = g * g.adjoint();
        const Matrix q = psd_sqrt(psd_sqrt(PsdMatrix::from_gram(x))).matrix();
        CHECK((q * q * q * q - x).cwiseAbs().maxCoeff() < 1e-8 * (1.0 + x.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("trace norm and spectral norm") {
    const Matrix d = mat2(3.0, 0.0, 0.0, -4.0);
    CHECK(trace_norm(d) == doctest::Approx(7.0));
    CHECK(spectral_norm(d) == doctest::Approx(4.0));

    // rank one: |u v^*|_1 = |u| |v| = operator norm
    Vector u(2), w(2);
    u << 1.0, Complex(0.0, 1.0);
    w << 2.0, 1.0;
    const Matrix r1 = u * w.adjoint();
    CHECK(trace_norm(r1) == doctest::Approx(u.norm() * w.norm()));
    CHECK(spectral_norm(r1) == doctest::Approx(u.norm() * w.norm()));
    CHECK(trace_norm(Matrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("polar factor realizes the trace norm") {
    auto rng = keyed_rng(5, 1);
    const Matrix m = random_gaussian(3, 5, rng);
    double tn = 0.0;
    const Matrix w = detail::polar_factor(m, &tn);
    CHECK(tn == doctest::Approx(trace_norm(m)).epsilon(1e-12));
    CHECK((w.adjoint() * m).trace().real() == doctest::Approx(tn).epsilon(1e-12));
    CHECK(spectral_norm(w) <= 1.0 + 1e-12);
}

TEST_CASE("spectrum is invariant under unitary conjugation") {
    auto rng = keyed_rng(3, 2);
    const Matrix g = random_gaussian(5, 5, rng);
    const Matrix h = ((g + g.adjoint()) / 2.0).eval();
    const Matrix u = Eigen::HouseholderQR<Matrix>(random_gaussian(5, 5, rng)).householderQ();
    const RealVector a = eig_hermitian(HermitianMatrix(h)).values;
    const RealVector b = eig_hermitian(HermitianMatrix::symmetrized(u.adjoint() * h * u)).values;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
}
