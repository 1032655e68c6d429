import numpy as np
import pytest

from torsionlab.errors import SolverDiverged, TwistBoundViolation
from torsionlab.expr import ExprField
from torsionlab.genfunc import (
    GenIsotopy, MORSE_DEGENERATE, MORSE_MIN, MORSE_SADDLE, PolynomialField,
    _solve_X, alt_jacobian_path, alt_trajectory, find_critical_points,
    gf_alt_apply, gf_apply, gf_jacobian, jacobian_path, verify_twist_bound,
)


def make_iso(text, c, **kw):
    return GenIsotopy(ExprField(text), twist_bound_c=c, **kw)


def random_generating_field(rng, degree=3, box=2.0, c_target=None):
    """Random polynomial g scaled so the sampled twist bound is < 0.9."""
    if c_target is None:
        c_target = rng.uniform(0.1, 0.85)
    coeffs = rng.uniform(-1.0, 1.0, size=(degree + 1, degree + 1))
    for i in range(degree + 1):
        for j in range(degree + 1):
            if i + j > degree:
                coeffs[i, j] = 0.0
    raw = PolynomialField(coeffs)
    xs = np.linspace(-box, box, 17)
    worst = max(abs(raw.jet2(x, y).fxy) for x in xs for y in xs)
    scale = c_target / worst if worst > 0 else 1.0
    return PolynomialField(coeffs * scale), c_target


def test_zero_field_is_identity():
    iso = make_iso("0", 0.0)
    for t in (0.0, 0.3, 1.0):
        assert gf_apply(iso, t, (3.0, -2.0)) == (3.0, -2.0)
    assert np.allclose(gf_jacobian(iso, 1.0, (3.0, -2.0)), np.eye(2))


def test_linear_shear_closed_form():
    iso = make_iso("y^2/2", 0.0)
    x, y = 1.7, -0.4
    X, Y = gf_apply(iso, 1.0, (x, y))
    assert (X, Y) == pytest.approx((x + y, y), abs=1e-14)


def test_quadratic_example_point():
    iso = make_iso("x^2+y^2", 0.0)
    assert gf_apply(iso, 1.0, (1.0, 0.0)) == pytest.approx((1.0, -2.0), abs=1e-12)
    assert gf_apply(iso, 0.0, (1.0, 0.0)) == (1.0, 0.0)  # exact identity at t=0


def test_jacobian_closed_form_half_quadratic():
    iso = make_iso("(x^2+y^2)/2", 0.0)
    J = gf_jacobian(iso, 1.0, (0.3, -1.1))
    assert np.allclose(J, [[1.0, 1.0], [-1.0, 0.0]], atol=1e-12)
    assert np.linalg.det(J) == pytest.approx(1.0, abs=1e-12)


def test_jacobian_matches_finite_differences():
    rng = np.random.default_rng(5)
    for _ in range(25):
        field, _ = random_generating_field(rng)
        iso = GenIsotopy(field, twist_bound_c=0.9)
        t = rng.uniform(0.0, 1.0)
        z = rng.uniform(-1.5, 1.5, size=2)
        J = gf_jacobian(iso, t, z)
        h = 1e-5
        fd = np.empty((2, 2))
        for k in range(2):
            dz = np.zeros(2)
            dz[k] = h
            plus = np.array(gf_apply(iso, t, z + dz))
            minus = np.array(gf_apply(iso, t, z - dz))
            fd[:, k] = (plus - minus) / (2 * h)
        assert np.allclose(J, fd, rtol=1e-5, atol=1e-5)


def test_area_preservation_and_orientation_random_family():
    rng = np.random.default_rng(12)
    for _ in range(50):
        field, _ = random_generating_field(rng)
        iso = GenIsotopy(field, twist_bound_c=0.9)
        for _ in range(5):
            t = rng.uniform(0.0, 1.0)
            z = rng.uniform(-1.5, 1.5, size=2)
            J = gf_jacobian(iso, t, z)
            det = float(np.linalg.det(J))
            assert abs(det - 1.0) <= 1e-9
            assert det > 0.0


def test_alt_apply_endpoints_and_midpoints():
    iso = make_iso("(x^2+y^2)/2", 0.0)
    z = (1.0, 0.0)
    assert gf_alt_apply(iso, 0.0, z) == pytest.approx(z)
    assert gf_alt_apply(iso, 0.5, z) == pytest.approx((1.0, 0.0), abs=1e-12)
    assert gf_alt_apply(iso, 1.0, z) == pytest.approx((1.0, -1.0), abs=1e-12)
    assert gf_alt_apply(iso, 1.0, z) == pytest.approx(gf_apply(iso, 1.0, z))

    shear = make_iso("y^2/2", 0.0)
    assert gf_alt_apply(shear, 0.25, (0.0, 1.0)) == pytest.approx((0.5, 1.0))


def test_contraction_residuals_decrease_monotonically():
    rng = np.random.default_rng(21)
    for _ in range(20):
        field, _ = random_generating_field(rng)
        iso = GenIsotopy(field, twist_bound_c=0.9)
        history = []
        _solve_X(iso, rng.uniform(0.2, 1.0), rng.uniform(-1, 1),
                 rng.uniform(-1, 1), history=history)
        tail = [r for r in history[2:] if r > 0.0]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(tail, tail[1:]))


def test_solver_diverges_when_bound_is_wrong():
    # d12 g = 2 > 1: the implicit equation is not a contraction
    iso = GenIsotopy(ExprField("2*x*y"), twist_bound_c=0.5,
                     solver_max_iter=50)
    with pytest.raises(SolverDiverged):
        gf_apply(iso, 1.0, (0.5, 0.7))


def test_twist_bound_verification():
    iso = make_iso("x^2+y^2", 0.1)  # d12 g = 0 everywhere
    assert verify_twist_bound(iso, (-2, 2, -2, 2)) == 0.0
    bad = GenIsotopy(ExprField("2*x*y"), twist_bound_c=0.5)
    with pytest.raises(TwistBoundViolation):
        verify_twist_bound(bad, (-1, 1, -1, 1))
    with pytest.raises(TwistBoundViolation):
        GenIsotopy(ExprField("0"), twist_bound_c=1.0)


def test_critical_points_quadratics():
    iso = make_iso("x^2+y^2", 0.0)
    pts = find_critical_points(iso, (-1, 1, -1, 1), 16)
    assert len(pts) == 1
    assert pts[0].location == pytest.approx((0.0, 0.0), abs=1e-9)
    assert pts[0].morse_type == MORSE_MIN
    assert pts[0].gradient_residual <= 1e-9

    saddle = make_iso("x^2-y^2", 0.0)
    pts = find_critical_points(saddle, (-1, 1, -1, 1), 16)
    assert len(pts) == 1
    assert pts[0].morse_type == MORSE_SADDLE


def test_critical_points_degenerate_detection():
    iso = make_iso("x^2+y^4", 0.0)  # hess at 0 is diag(2, 0)
    pts = find_critical_points(iso, (-1, 1, -1, 1), 16)
    assert len(pts) == 1
    assert pts[0].morse_type == MORSE_DEGENERATE


def test_fixed_points_agree_with_critical_points():
    rng = np.random.default_rng(9)
    for _ in range(5):
        field, _ = random_generating_field(rng, degree=3)
        iso = GenIsotopy(field, twist_bound_c=0.9)
        for p in find_critical_points(iso, (-1.5, 1.5, -1.5, 1.5), 24):
            img = gf_apply(iso, 1.0, p.location)
            assert img == pytest.approx(p.location, abs=1e-7)


def test_jacobian_path_matches_gf_jacobian_at_fixed_point():
    iso = make_iso("x^2-y^2", 0.0)
    dpath = jacobian_path(iso, (0.0, 0.0))
    for t in (0.0, 0.3, 0.7, 1.0):
        assert np.allclose(dpath(t), gf_jacobian(iso, t, (0.0, 0.0)) if t > 0
                           else np.eye(2), atol=1e-12)
    # time-one derivative of the generated map
    assert np.allclose(dpath(1.0), [[1.0, -2.0], [-2.0, 5.0]])


def test_alt_jacobian_path_endpoints():
    iso = make_iso("(x^2+y^2)/2", 0.0)
    d = alt_jacobian_path(iso, (0.0, 0.0))
    assert np.allclose(d(0.0), np.eye(2))
    assert np.allclose(d(1.0), jacobian_path(iso, (0.0, 0.0))(1.0), atol=1e-12)
    # continuity at the phase switch
    assert np.allclose(d(0.5 - 1e-12), d(0.5 + 1e-12), atol=1e-9)


def test_trajectories_are_polylines():
    iso = make_iso("(x^2+y^2)/2", 0.0)
    path = alt_trajectory(iso, (1.0, 0.0), 65)
    assert path.points.shape[1] == 2
    assert path.params[0] == 0.0 and path.params[-1] == 1.0
    assert 0.5 in path.params
