import math

import numpy as np
import pytest

import elemnorm


def test_tgm_pair():
    x = np.array([[1.25, 1.0], [1.0, 1.25]], dtype=complex)
    y = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    assert abs(elemnorm.tgm(x, y) - math.sqrt(5) / 2) < 1e-9
    mean, reg = elemnorm.sharp_mean(x, y)
    assert reg == 0.0
    assert abs(np.trace(mean).real - 3 / (2 * math.sqrt(5))) < 1e-9


def test_transpose():
    t = elemnorm.transpose_operator(3)
    x = np.arange(9, dtype=complex).reshape(3, 3)
    assert np.allclose(t(x), x.T)
    r = elemnorm.norm_tgm(t, restarts=8)
    assert r.method == "tgm_formula"
    assert abs(r.value - 1.0) < 1e-6
    assert r.certificate is not None
    assert abs(elemnorm.knorm(t, 2, restarts=8).value - 2.0) < 1e-6
    assert abs(elemnorm.knorm(t, 2, method="factorial", restarts=8).value - 2.0) < 1e-6


def test_routes_agree():
    t = elemnorm.random_operator(2, 2, seed=4)
    a = elemnorm.norm_tgm(t, restarts=16).value
    b = elemnorm.norm_s1(t, restarts=8).value
    c = elemnorm.oracle_norm_unitary(t, restarts=16).value
    assert abs(a - b) <= 1e-4 * a
    assert abs(a - c) <= 1e-4 * a
    assert a <= elemnorm.haagerup_upper_bound(t, balance=True) + 1e-9


def test_operator_from_arrays():
    rng = np.random.default_rng(0)
    a = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(2)]
    b = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(2)]
    t = elemnorm.ElementaryOperator(a, b)
    x = rng.normal(size=(2, 2)).astype(complex)
    assert np.allclose(t(x), a[0] @ x @ b[0] + a[1] @ x @ b[1])
    assert elemnorm.linearly_independent(b)
    assert not elemnorm.linearly_independent([b[0], 2 * b[0]])


def test_errors():
    with pytest.raises(elemnorm.ElemnormError):
        elemnorm.ElementaryOperator([np.eye(2)], [np.eye(3)])
    with pytest.raises(elemnorm.ElemnormError):
        elemnorm.tgm(np.eye(2), np.eye(3))
