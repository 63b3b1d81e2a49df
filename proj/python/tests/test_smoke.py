import math
import pathlib

import numpy as np
import pytest
import yaml

import qhqr

ROOT = pathlib.Path(__file__).resolve().parents[2]


def test_gamma_of_one_is_one():
    one = qhqr.Symbol([1, 2], qhqr.QuasiRadialSymbol.constant(1.0))
    for alpha in qhqr.basis(3, 4):
        assert qhqr.gamma(one, [1, 2, 3], alpha) == pytest.approx(1.0, abs=1e-12)


def test_disk_eigenvalue_matches_hand_formula():
    a = qhqr.Symbol([1], qhqr.QuasiRadialSymbol.monomial([2.0]))
    for m in range(6):
        assert qhqr.gamma(a, [1], [m]) == pytest.approx((m + 1) / (m + 2), rel=1e-14)
        assert qhqr.gamma(a, [1], [m], path="quadrature") == pytest.approx(
            (m + 1) / (m + 2), rel=1e-12
        )


def test_volume_and_inner_product():
    assert qhqr.domain_volume([1, 1]) == pytest.approx(math.pi**2 / 2)
    assert qhqr.domain_volume([1, 2]) == pytest.approx(2 * math.pi**2 / 3)
    assert qhqr.monomial_inner_product([1, 1], [1, 0], [0, 1]) == 0.0
    assert qhqr.sphere_monomial_integral([2, 3], [0, 0], [0, 0]) == 1.0


def test_matrices_agree():
    s = qhqr.Symbol([2], qhqr.QuasiRadialSymbol.monomial([1.0]), [1, 0], [0, 1])
    closed = qhqr.matrix_closed(s, [1, 1], 2)
    oracle, err = qhqr.matrix_oracle(s, [1, 1], 2, 200_000, 3)
    assert closed.shape == (6, 6)
    assert closed.dtype == np.complex128
    assert np.all(np.abs(closed - oracle) <= 4 * err + 1e-15)


def test_pair_decisions_and_witness():
    p, k = [1, 1, 1], [3]
    assert not qhqr.pair_commutes(p, k, [1, 0, 0], [0, 1, 0], [0, 1, 0], [0, 0, 1])
    f = qhqr.Symbol(k, qhqr.QuasiRadialSymbol.constant(1.0), [1, 0, 0], [0, 1, 0])
    g = qhqr.Symbol(k, qhqr.QuasiRadialSymbol.constant(1.0), [0, 1, 0], [0, 0, 1])
    assert qhqr.restricted_commutator_max_abs(f, g, p, 4) > 1e-3
    assert qhqr.radial_pair_commutes([1, 2], [2], [2, 0], [0, 4])
    assert qhqr.comm_condition([1, 2], [2], [1, 0], [0, 1]) == [False]


def test_class_membership_codes():
    f = qhqr.Symbol([3], qhqr.QuasiRadialSymbol.constant(1.0), [1, 0, 0], [0, 1, 0])
    g = qhqr.Symbol([3], qhqr.QuasiRadialSymbol.constant(1.0), [0, 1, 0], [0, 0, 1])
    assert qhqr.validate_akh([1, 1, 1], [1], f)[:2] == (True, "ok")
    assert qhqr.validate_akh([1, 1, 1], [1], g)[:2] == (False, "nu_support")


def test_errors_map_to_value_error():
    with pytest.raises(ValueError):
        qhqr.domain_volume([1, 0])
    with pytest.raises(qhqr.ConfigError):
        qhqr.run("gamma", str(ROOT / "tests" / "data" / "invalid.yaml"))


def test_run_small_config(tmp_path):
    res = qhqr.run("gamma", str(ROOT / "tests" / "data" / "small.yaml"), str(tmp_path))
    assert res["passed"]
    doc = yaml.safe_load(pathlib.Path(res["report_path"]).read_text())
    assert doc["status"] == "pass"
    rows = doc["results"]["gamma"][0]["rows"]
    assert all(r["closed_form"] == pytest.approx(1.0, abs=1e-12) for r in rows)
