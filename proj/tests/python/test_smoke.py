import numpy as np
import pytest

import fpres


def test_load_and_modular_data():
    th = fpres.load("su2:4")
    assert th.size == 5
    assert th.h[2] == "1/3"
    S = th.S()
    assert S.shape == (5, 5)
    assert np.allclose(S @ S.conj().T, np.eye(5), atol=1e-12)
    assert th.modular_deviation() < 1e-12
    assert fpres.modular_data(th)["labels"] == th.labels


def test_tensor_and_currents():
    th = fpres.load("su2:4") * fpres.load("ising")
    assert th.size == 15
    cur = fpres.currents(th)
    assert cur["schema"] == "currents v1"
    assert len(cur["currents"]) == 4


def test_extension_of_su2_level4():
    ext = fpres.extend(fpres.load("su2:4"), ["4"])
    et = ext.theory
    assert et.size == 3
    assert et.modular_deviation() < 1e-9
    assert fpres.fusion(et)["integral"]
    assert fpres.conditions(et)["passes"]
    assert ext.report["checks"]["problems"] == []


def test_three_factor_extension_resolves_bundles():
    th = fpres.load("su2:4*su2:6*su2:2")
    ext = fpres.extend(th, ["(4,6,2)"])
    assert ext.residual_orders == [2, 2]
    bundles = ext.bundles()
    assert bundles
    for doc in bundles.values():
        assert doc["schema"] == "fp-bundle v1"
    assert fpres.conditions(ext.theory)["passes"]


def test_half_integer_current_is_rejected():
    with pytest.raises(fpres.FpresError):
        fpres.extend(fpres.load("su2:2"), ["2"])


def test_unknown_field_is_rejected():
    with pytest.raises(fpres.FpresError):
        fpres.extend(fpres.load("su2:4"), ["(9)"])
