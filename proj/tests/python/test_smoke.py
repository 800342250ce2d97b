import math

import numpy as np
import pytest

import floqcert as fc


def test_kernels():
    x = fc.collocation_points(8)
    assert len(x) == 9
    D = fc.diff_matrix(8)
    assert np.allclose(D @ np.asarray(x) ** 3, 3 * np.asarray(x) ** 2, atol=1e-12)
    for n in range(1, 8):
        assert fc.little_l_N(n, -1.0) == pytest.approx((-1) ** n * n * 2.0 ** (2 - n), rel=1e-13)


def test_registry_monodromy():
    sys = fc.registry_dde("intro_dde", {"a": -1.1, "b": 1.0})
    M = fc.build_monodromy(sys, 64)
    assert M.matrix.shape == (65, 65)
    assert M.spectral_radius == pytest.approx(0.9369, abs=5e-4)
    assert abs(M.eigenvalues[0]) == pytest.approx(M.spectral_radius)


def test_callable_system_matches_registry():
    a, b = -1.1, 1.0
    sys = fc.scalar_dde(lambda t: a, lambda t: b + math.sin(3 * math.pi * t))
    reg = fc.registry_dde("intro_dde", {"a": a, "b": b})
    r1 = fc.build_monodromy(sys, 40).spectral_radius
    r2 = fc.build_monodromy(reg, 40).spectral_radius
    assert r1 == pytest.approx(r2, abs=1e-12)


def test_certify_intro():
    c = fc.certify_registry("intro_dde", {"a": -1.1, "b": 1.0}, N=184, delta=0.2, ellipse_s=0.5)
    assert c["verdict"] == "stable"
    assert 0.02 <= c["radius"] <= 0.09
    assert len(c["omega"]) == 184


def test_certify_callable_constant():
    sys = fc.scalar_dde(lambda t: 0.0, lambda t: 0.0)
    c = fc.certify(sys, 16, delta=0.2, ellipse_s=2.0, A_E=0.0, B_E=0.0)
    assert c["verdict"] == "not-stable"
    assert abs(c["lambdas"][0]) == pytest.approx(1.0)


def test_bootstrap_and_solve():
    b = fc.bootstrap_homogeneous("mathieu_homogeneous", N=50)
    assert b["value"] == pytest.approx(19.587, rel=0.02)
    s = fc.solve_registry("rotation", N=32)
    assert s["values"].shape == (33, 2)
    assert s["err_sup"] < 1e-8


def test_errors():
    with pytest.raises(ValueError):
        fc.registry_dde("no_such_problem")
    with pytest.raises(ValueError):
        fc.certify_registry("intro_dde", delta=1.5)
    A = np.diag([1.0, 2.0]).astype(complex)
    assert fc.bauer_fike(A, A) == 0.0
