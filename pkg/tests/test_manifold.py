import numpy as np
import pytest

from gausscalc import catalog
from gausscalc.algebra import Multivector, basis_blades, grade_involution, pseudoscalar, wedge
from gausscalc.blades import RankDeficiencyError, hodge_dual
from gausscalc.curvature import second_fundamental
from gausscalc.manifold import (
    Chart,
    FDConfig,
    NotTangentError,
    StencilError,
    ambient_field,
    covariant_derivative,
    curl,
    curl_right,
    directional_derivative,
    divergence,
    divergence_right,
    frame_at,
    gauss_map,
    graded_laplacian,
    identity_field,
    laplace_beltrami,
    normal_map,
    second_derivative,
    vector_derivative,
    vector_derivative_right,
)

E3 = basis_blades(3)


def interior_points(chart, n, seed=0, inset=0.1):
    rng = np.random.default_rng(seed)
    lo, hi = chart.domain[:, 0] + inset, chart.domain[:, 1] - inset
    return lo + (hi - lo) * rng.random((n, chart.m))


# ---- frames ----------------------------------------------------------------

def test_plane_frame():
    fp = frame_at(catalog.get("plane").chart, [0.3, -0.2])
    assert fp.T == E3["e12"]
    assert fp.Nps == E3["e3"]


def test_sphere_equator_frame():
    chart = catalog.get("sphere").chart
    fp = frame_at(chart, [np.pi / 2, 0.0])
    assert np.allclose(fp.x, [1, 0, 0])
    assert np.allclose(fp.normal[0], [1, 0, 0])  # outward
    assert abs(fp.tangent @ fp.x).max() < 1e-12


def test_degenerate_chart_rejected():
    chart = Chart(lambda u: np.array([u[0], u[0], 0.0]), 2, 3, [[-1, 1], [-1, 1]],
                  lambda u: np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 0.0]]))
    with pytest.raises(RankDeficiencyError):
        frame_at(chart, [0.0, 0.0])


def test_point_outside_domain():
    with pytest.raises(StencilError):
        frame_at(catalog.get("plane").chart, [2.0, 0.0])


def test_frame_invariants(entry):
    chart = entry.chart
    i = pseudoscalar(chart.N)
    for u in interior_points(chart, 5):
        fp = frame_at(chart, u)
        basis = np.vstack([fp.tangent, fp.normal])
        assert np.allclose(basis @ basis.T, np.eye(chart.N), atol=1e-9)
        assert ((fp.T * fp.Nps) - i).norm() < 1e-9
        assert np.all(np.linalg.eigvalsh(fp.metric) > 0)
        assert (fp.T - gauss_map(chart)(u)).norm() < 1e-9


def test_normal_map_is_dual_of_gauss_map(entry):
    chart = entry.chart
    T, N = gauss_map(chart), normal_map(chart)
    for u in interior_points(chart, 20, seed=1):
        assert (hodge_dual(T(u)) - N(u)).norm() < 1e-12


def test_cylinder_gauss_map():
    chart = catalog.get("cylinder").chart
    for a in (-1.0, 0.4, 2.0):
        T = gauss_map(chart)([a, 0.1])
        expected = Multivector.vector([-np.sin(a), np.cos(a), 0.0]) ^ E3["e3"]
        assert (T - expected).norm() < 1e-12
        assert abs(T.norm() - 1) < 1e-12


def test_numeric_jacobian_fallback():
    ref = catalog.get("torus").chart
    chart = Chart(ref.func, 2, 3, ref.domain)
    u = [0.3, 1.1]
    assert np.allclose(chart.jacobian(u), ref.jacobian(u), atol=1e-8)


# ---- first derivatives -----------------------------------------------------

def test_directional_derivative_examples():
    chart = catalog.get("sphere").chart
    u = np.array([1.0, 0.5])
    fp = frame_at(chart, u)
    const = ambient_field(chart, lambda x: 2.0)
    assert directional_derivative(const, u, fp.tangent[0]).norm() == 0.0
    d = directional_derivative(identity_field(chart), u, fp.tangent[0])
    assert np.allclose(d.vector_part, fp.tangent[0], atol=1e-9)
    # the unit-sphere Gauss map turns at unit rate along any unit tangent
    for t in fp.tangent:
        assert abs(directional_derivative(gauss_map(chart), u, t).norm() - 1.0) < 1e-8


def test_non_tangent_direction_rejected():
    chart = catalog.get("sphere").chart
    u = np.array([1.0, 0.5])
    with pytest.raises(NotTangentError):
        directional_derivative(identity_field(chart), u, chart(u))


def test_stencil_leaving_domain():
    chart = catalog.get("plane").chart
    fp = frame_at(chart, [1.0, 0.0])
    with pytest.raises(StencilError):
        directional_derivative(identity_field(chart), [1.0, 0.0], fp.tangent[0])


def test_vector_derivative_examples():
    plane = catalog.get("plane").chart
    u = [0.2, 0.1]
    assert (vector_derivative(ambient_field(plane, lambda x: x[0]), u) - E3["e1"]).norm() < 1e-9
    for name in ("sphere", "torus", "clifford_torus"):
        chart = catalog.get(name).chart
        dx = vector_derivative(identity_field(chart), chart.center() + 0.1)
        assert (dx - float(chart.m)).norm() < 1e-8
    cat = catalog.get("catenoid").chart
    assert vector_derivative(gauss_map(cat), [0.3, 0.4]).norm() < 1e-6


def test_divergence_and_curl(entry):
    chart = entry.chart
    u = interior_points(chart, 1, seed=3)[0]
    x = identity_field(chart)
    assert abs(divergence(x, u).scalar_part - chart.m) < 1e-8
    assert curl(x, u).norm() < 1e-8
    assert curl(normal_map(chart), u).norm() < 1e-8
    assert divergence(gauss_map(chart), u).norm() < 1e-8
    for F in (x, gauss_map(chart), normal_map(chart)):
        assert (divergence(F, u) + curl(F, u) - vector_derivative(F, u)).norm() < 1e-10


def test_frame_independence(entry, rng):
    chart = entry.chart
    u = interior_points(chart, 1, seed=4)[0]
    fp = frame_at(chart, u)
    Q, _ = np.linalg.qr(rng.normal(size=(chart.m, chart.m)))
    rotated = Q @ fp.tangent
    for F in (gauss_map(chart), identity_field(chart)):
        assert (vector_derivative(F, u) - vector_derivative(F, u, frame=rotated)).norm() < 1e-8


def test_left_right_relations(entry):
    chart = entry.chart
    u = interior_points(chart, 1, seed=5)[0]
    F = gauss_map(chart) if chart.N == 3 else normal_map(chart)
    G = ambient_field(chart, lambda x: Multivector.vector(x) ^ Multivector.vector(np.roll(x, 1)) + x[0])
    for field in (F, G):
        assert (divergence(field, u) - grade_involution(divergence_right(field, u))).norm() < 1e-8
        assert (curl(field, u) + grade_involution(curl_right(field, u))).norm() < 1e-8


def test_monogenicity_equivalence():
    for name in ("catenoid", "helicoid"):
        chart = catalog.get(name).chart
        u = [0.2, 0.3]
        T = gauss_map(chart)
        assert vector_derivative(T, u).norm() < 1e-6
        assert vector_derivative_right(T, u).norm() < 1e-6
    chart = catalog.get("sphere").chart
    T = gauss_map(chart)
    assert vector_derivative(T, [1.0, 0.2]).norm() > 1.0
    assert vector_derivative_right(T, [1.0, 0.2]).norm() > 1.0


def test_fd_convergence_second_order():
    chart = catalog.get("sphere").chart
    u = np.array([1.0, 0.3])
    fp = frame_at(chart, u)
    exact = directional_derivative(identity_field(chart), u, fp.tangent[0]).vector_part  # ~exact at h=1e-5
    errs = []
    for h in (2e-2, 1e-2):
        d = directional_derivative(identity_field(chart), u, fp.tangent[0], FDConfig(h1=h))
        errs.append(np.linalg.norm(d.vector_part - exact))
    assert 3.0 <= errs[0] / errs[1] <= 5.0
    rich = directional_derivative(identity_field(chart), u, fp.tangent[0], FDConfig(h1=1e-2, richardson=True))
    assert np.linalg.norm(rich.vector_part - exact) < 0.05 * errs[1]


# ---- second derivatives ----------------------------------------------------

def test_second_derivative_of_identity_vanishes():
    chart = catalog.get("sphere").chart
    assert second_derivative(identity_field(chart), [1.0, 0.2]).norm() < 1e-4


def test_second_derivative_of_sphere_gauss_map():
    chart = catalog.get("sphere").chart
    assert second_derivative(gauss_map(chart), [1.0, 0.2]).norm() < 1e-3


def test_graded_laplacian_examples():
    sphere = catalog.get("sphere").chart
    u = np.array([1.0, 0.2])
    assert graded_laplacian(identity_field(sphere), u, grades=[1]).norm() < 1e-4
    phi = ambient_field(sphere, lambda x: x[2])
    H = second_fundamental(sphere, u).H
    assert abs(graded_laplacian(phi, u).scalar_part - H[2]) < 1e-4
    ct = catalog.get("clifford_torus").chart
    assert graded_laplacian(gauss_map(ct), [0.4, -0.7]).norm() < 1e-3


def test_graded_laplacian_routes_agree(entry):
    chart = entry.chart
    u = interior_points(chart, 1, seed=6)[0]
    for F in (gauss_map(chart), normal_map(chart)):
        g = graded_laplacian(F, u, route="grade")
        for route in ("mean", "split"):
            assert (graded_laplacian(F, u, route=route) - g).norm() < 1e-6


def test_graded_laplacian_bad_route():
    chart = catalog.get("plane").chart
    with pytest.raises(ValueError):
        graded_laplacian(identity_field(chart), [0.0, 0.0], route="nope")


def test_laplace_beltrami_examples():
    sphere = catalog.get("sphere").chart
    u = np.array([1.0, 0.2])
    n = frame_at(sphere, u).normal[0]
    lap_x = laplace_beltrami(identity_field(sphere), u).vector_part
    assert np.allclose(lap_x, -2 * n, atol=1e-5)
    assert laplace_beltrami(ambient_field(sphere, lambda x: 3.0), u).norm() == 0.0
    assert abs(laplace_beltrami(ambient_field(sphere, lambda x: x[2]), u).scalar_part + 2 * n[2]) < 1e-5


def test_laplace_beltrami_bridge(entry):
    # ◇F - sum_j S_j x D_j F equals the metric-formula Laplacian
    from gausscalc.algebra import commutator

    chart = entry.chart
    u = interior_points(chart, 1, seed=7)[0]
    sf = second_fundamental(chart, u)
    T = gauss_map(chart)
    bridge = graded_laplacian(T, u)
    for t, S in zip(sf.frame.tangent, sf.S):
        bridge = bridge - commutator(S, directional_derivative(T, u, t))
    assert (bridge - laplace_beltrami(T, u)).norm() < 1e-3


def test_covariant_derivative_examples(entry):
    chart = entry.chart
    u = interior_points(chart, 1, seed=8)[0]
    assert covariant_derivative(gauss_map(chart), u).norm() < 1e-6
    assert covariant_derivative(ambient_field(chart, lambda x: 1.0), u).norm() == 0.0
    assert (covariant_derivative(identity_field(chart), u) - float(chart.m)).norm() < 1e-8
