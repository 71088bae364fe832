import numpy as np
import pytest

from gausscalc import catalog
from gausscalc.catalog import Expected


def test_names_are_stable():
    assert catalog.names() == [
        "plane", "graph2d", "sphere", "cylinder", "torus", "catenoid", "helicoid", "clifford_torus",
    ]


def test_expected_facts():
    assert catalog.get("catenoid").expected.is_minimal
    ct = catalog.get("clifford_torus").expected
    assert (ct.is_minimal, ct.is_parallel_H, ct.codim) == (False, True, 2)
    assert catalog.get("plane").expected.B2(np.zeros(2)) == 0.0


def test_unknown_name_lists_choices():
    with pytest.raises(KeyError, match="catenoid"):
        catalog.get("nosuch")


def test_parameters():
    e = catalog.get("sphere", r=2.0, m=3)
    assert (e.chart.m, e.chart.N) == (3, 4)
    assert e.expected.H_norm(None) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        catalog.get("sphere", m=4)
    with pytest.raises(ValueError):
        catalog.get("torus", R=1.0, r=2.0)


def test_parse_params():
    assert catalog.parse_params("r=2,m=3") == {"r": 2.0, "m": 3.0}
    assert catalog.parse_params("") == {}
    with pytest.raises(ValueError):
        catalog.parse_params("r")


def test_minimal_implies_parallel():
    with pytest.raises(ValueError):
        Expected(1, True, False)


def test_codim_matches_chart(entry):
    assert entry.expected.codim == entry.chart.k
    if entry.expected.is_minimal:
        assert entry.expected.is_parallel_H


def test_default_domains_avoid_singularities(entry):
    chart = entry.chart
    lo, hi = chart.domain[:, 0], chart.domain[:, 1]
    for t in np.linspace(0, 1, 7):
        sv = np.linalg.svd(chart.jacobian(lo + t * (hi - lo)), compute_uv=False)
        assert sv[-1] > 1e-3
