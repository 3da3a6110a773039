import pytest

from conftest import connection, structure
from parasasaki.catalog import DEFAULT_GRID
from parasasaki.fibration import (
    base_connection,
    base_curvature,
    base_integrability,
    base_structure,
    fibration_checks,
)

GRID = DEFAULT_GRID + ["sum:sl2_std+sl_r:2,1"]


def test_sl2_base(sl2):
    b = base_structure(sl2)
    assert b.I.tolist() == [[-1, 0], [0, 1]]
    assert b.g_bar[0, 1] == 4
    assert b.omega[0, 1] == 4


def test_quad_ext_base(d1):
    b = base_structure(d1)
    # basis e2, e3, eta2, eta3: e2 <-> e3, eta2 -> -eta3, eta3 -> -eta2
    assert b.I.tolist() == [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, -1, 0]]
    assert b.g_bar.tolist() == [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]


@pytest.mark.parametrize("spec", ["sl2_std", "quad_ext:1"])
def test_base_connection_vanishes(spec):
    a, b = base_connection(structure(spec), connection(spec))
    assert not a.any()
    assert not b.any()


def test_sl2_base_curvature_value(sl2):
    way1, way2, _ = base_curvature(sl2, connection("sl2_std"))
    # R_bar(x, y)y = -[[x,y],y] = -[h,y] = 2y
    assert list(way1[0, 1, 1]) == [0, 2]
    assert list(way2[0, 1, 1]) == [0, 2, 0]
    assert not way1[0, 0].any()


def test_integrability(sl2):
    assert not base_integrability(base_structure(sl2)).any()


@pytest.mark.parametrize("spec", GRID)
def test_fibration_suite_passes(spec):
    res = fibration_checks(structure(spec), connection(spec))
    bad = [(r.check_id, r.witness) for r in res if r.status == "fail"]
    assert not bad
