"""Area-preserving maps and isotopies generated by a scalar function.

A scalar g with mixed second derivative bounded by c < 1 defines a
diffeomorphism implicitly through X - x = d2g(X, y), Y - y = -d1g(X, y);
the isotopy comes from scaling g by t.  Fixed points of the time-one map
are exactly the critical points of g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SolverDiverged, TwistBoundViolation
from .expr import Jet2
from .geom import Polyline

MORSE_MIN = "Min"
MORSE_MAX = "Max"
MORSE_SADDLE = "Saddle"
MORSE_DEGENERATE = "Degenerate"

DEGENERATE_DET_TOL = 1e-8


class PolynomialField:
    """Bivariate polynomial scalar field with exact jets from coefficients.

    coeffs[i, j] multiplies x^i y^j.
    """

    def __init__(self, coeffs):
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.ndim != 2:
            raise ValueError("coeffs must be a 2-D array")

    def jet2(self, x: float, y: float) -> Jet2:
        c = self.coeffs
        nx, ny = c.shape
        px = [1.0] * nx
        for i in range(1, nx):
            px[i] = px[i - 1] * x
        py = [1.0] * ny
        for j in range(1, ny):
            py[j] = py[j - 1] * y
        f = fx = fy = fxx = fxy = fyy = 0.0
        for i in range(nx):
            for j in range(ny):
                a = c[i, j]
                if a == 0.0:
                    continue
                f += a * px[i] * py[j]
                if i >= 1:
                    fx += a * i * px[i - 1] * py[j]
                if j >= 1:
                    fy += a * j * px[i] * py[j - 1]
                if i >= 2:
                    fxx += a * i * (i - 1) * px[i - 2] * py[j]
                if i >= 1 and j >= 1:
                    fxy += a * i * j * px[i - 1] * py[j - 1]
                if j >= 2:
                    fyy += a * j * (j - 1) * px[i] * py[j - 2]
        return Jet2(f, fx, fy, fxx, fxy, fyy)


@dataclass
class GenIsotopy:
    """Isotopy (f_t) generated by t*g for a scalar field g."""

    field: object  # anything with jet2(x, y) -> Jet2
    twist_bound_c: float
    solver_tol: float = 1e-12
    solver_max_iter: int = 200

    def __post_init__(self):
        if not self.twist_bound_c < 1.0:
            raise TwistBoundViolation(
                f"twist bound c = {self.twist_bound_c} must be < 1")


def verify_twist_bound(iso: GenIsotopy, region: Sequence[float],
                       grid: int = 64) -> float:
    """Sample d2g/dxdy on a grid over region; a violation is a hard error.

    Returns the sampled maximum.  The certificate is only as global as the
    sampling region (unbounded second derivatives stay the caller's risk).
    """
    xmin, xmax, ymin, ymax = map(float, region)
    worst = -math.inf
    for i in range(grid):
        x = xmin + (xmax - xmin) * i / (grid - 1)
        for j in range(grid):
            y = ymin + (ymax - ymin) * j / (grid - 1)
            worst = max(worst, iso.field.jet2(x, y).fxy)
    if worst > iso.twist_bound_c:
        raise TwistBoundViolation(
            f"sampled d12 g = {worst:.6g} exceeds declared bound "
            f"{iso.twist_bound_c:.6g}")
    return worst


def _solve_X(iso: GenIsotopy, t: float, x: float, y: float,
             history: list | None = None):
    """Contraction X_{k+1} = x + t d2g(X_k, y); returns (X, jet at (X, y))."""
    X = x
    jet = iso.field.jet2(X, y)
    residual = abs(X - x - t * jet.fy)
    if history is not None:
        history.append(residual)
    if residual <= iso.solver_tol:
        return X, jet
    for k in range(1, iso.solver_max_iter + 1):
        X = x + t * jet.fy
        jet = iso.field.jet2(X, y)
        residual = abs(X - x - t * jet.fy)
        if history is not None:
            history.append(residual)
        if not math.isfinite(residual):
            raise SolverDiverged(k, residual)
        if residual <= iso.solver_tol:
            return X, jet
    raise SolverDiverged(iso.solver_max_iter, residual)


def gf_apply(iso: GenIsotopy, t: float, z) -> tuple:
    """Apply f_t to z = (x, y)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    x, y = float(z[0]), float(z[1])
    if t == 0.0:
        return (x, y)
    X, jet = _solve_X(iso, t, x, y)
    return (X, y - t * jet.fx)


def gf_jacobian(iso: GenIsotopy, t: float, z) -> np.ndarray:
    """Closed-form Jacobian of f_t at z, evaluated at (X, y); det = 1."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    x, y = float(z[0]), float(z[1])
    if t == 0.0:
        return np.eye(2)
    _, jet = _solve_X(iso, t, x, y)
    s = t * jet.fxy
    r = t * jet.fxx
    q = t * jet.fyy
    return (1.0 / (1.0 - s)) * np.array(
        [[1.0, q],
         [-r, -r * q + (1.0 - s) ** 2]])


def gf_alt_apply(iso: GenIsotopy, t: float, z) -> tuple:
    """Two-phase isotopy: horizontal to (X, y) first, vertical after t = 1/2."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    x, y = float(z[0]), float(z[1])
    X, Y = gf_apply(iso, 1.0, z)
    if t <= 0.5:
        return (x + 2.0 * t * (X - x), y)
    return (X, y + (2.0 * t - 1.0) * (Y - y))


def trajectory(iso: GenIsotopy, z, n_samples: int = 65) -> Polyline:
    """Sampled natural trajectory t -> f_t(z)."""
    ts = np.linspace(0.0, 1.0, n_samples)
    pts = np.array([gf_apply(iso, t, z) for t in ts])
    return Polyline(params=ts, points=pts)


def alt_trajectory(iso: GenIsotopy, z, n_samples: int = 65) -> Polyline:
    """Sampled two-phase trajectory t -> f'_t(z) (includes t = 1/2)."""
    ts = np.linspace(0.0, 1.0, n_samples)
    if 0.5 not in ts:
        ts = np.sort(np.append(ts, 0.5))
    pts = np.array([gf_alt_apply(iso, t, z) for t in ts])
    return Polyline(params=ts, points=pts)


def jacobian_path(iso: GenIsotopy, z_fixed):
    """t -> Jacobian of f_t at a fixed point (derivative isotopy path)."""
    x, y = float(z_fixed[0]), float(z_fixed[1])
    jet = iso.field.jet2(x, y)
    if math.hypot(jet.fx, jet.fy) > 1e-8:
        raise ValueError(f"{z_fixed!r} is not a critical point of g")
    rho, sigma, tau = jet.fxx, jet.fxy, jet.fyy

    def dpath(t: float) -> np.ndarray:
        s = t * sigma
        return (1.0 / (1.0 - s)) * np.array(
            [[1.0, t * tau],
             [-t * rho, -t * t * rho * tau + (1.0 - s) ** 2]])

    return dpath


def alt_jacobian_path(iso: GenIsotopy, z_fixed):
    """t -> Jacobian of the two-phase isotopy f'_t at a fixed point."""
    x, y = float(z_fixed[0]), float(z_fixed[1])
    jet = iso.field.jet2(x, y)
    if math.hypot(jet.fx, jet.fy) > 1e-8:
        raise ValueError(f"{z_fixed!r} is not a critical point of g")
    rho, sigma, tau = jet.fxx, jet.fxy, jet.fyy
    d1X = 1.0 / (1.0 - sigma)
    d2X = tau / (1.0 - sigma)
    d1Y = -rho / (1.0 - sigma)
    d2Y = 1.0 - sigma - rho * tau / (1.0 - sigma)

    def dpath(t: float) -> np.ndarray:
        if t <= 0.5:
            return np.array([[1.0 + 2.0 * t * (d1X - 1.0), 2.0 * t * d2X],
                             [0.0, 1.0]])
        u = 2.0 * t - 1.0
        return np.array([[d1X, d2X],
                         [u * d1Y, (1.0 - u) + u * d2Y]])

    return dpath


@dataclass
class CriticalPoint:
    location: tuple
    gradient_residual: float
    hessian: np.ndarray
    morse_type: str


def _morse_type(hess: np.ndarray) -> str:
    det = hess[0, 0] * hess[1, 1] - hess[0, 1] * hess[1, 0]
    if abs(det) <= DEGENERATE_DET_TOL:
        return MORSE_DEGENERATE
    if det < 0.0:
        return MORSE_SADDLE
    return MORSE_MIN if hess[0, 0] + hess[1, 1] > 0.0 else MORSE_MAX


def find_critical_points(iso: GenIsotopy, region: Sequence[float],
                         grid_n: int,
                         residual_tol: float = 1e-9) -> list:
    """Newton on grad g seeded from grid cells with a sign change.

    A cell is seeded when either gradient component changes sign across it
    (a conjunction would miss zeros that touch without crossing, e.g. a
    non-negative component with a double zero).  Completeness is relative
    to the grid.
    """
    if grid_n < 8:
        raise ValueError("grid_n must be >= 8")
    xmin, xmax, ymin, ymax = map(float, region)
    xs = np.linspace(xmin, xmax, grid_n + 1)
    ys = np.linspace(ymin, ymax, grid_n + 1)
    gx = np.empty((grid_n + 1, grid_n + 1))
    gy = np.empty((grid_n + 1, grid_n + 1))
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            jet = iso.field.jet2(x, y)
            gx[i, j] = jet.fx
            gy[i, j] = jet.fy

    def cell_changes_sign(a):
        corners = a
        return corners.min() <= 0.0 <= corners.max()

    found = []
    for i in range(grid_n):
        for j in range(grid_n):
            cx = np.array([gx[i, j], gx[i + 1, j], gx[i, j + 1], gx[i + 1, j + 1]])
            cy = np.array([gy[i, j], gy[i + 1, j], gy[i, j + 1], gy[i + 1, j + 1]])
            if not (cell_changes_sign(cx) or cell_changes_sign(cy)):
                continue
            seed = (0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]))
            pt = _newton_on_gradient(iso.field, seed, residual_tol)
            if pt is None:
                continue
            x, y, res, hess = pt
            if not (xmin - 1e-9 <= x <= xmax + 1e-9
                    and ymin - 1e-9 <= y <= ymax + 1e-9):
                continue
            if any(math.hypot(x - p.location[0], y - p.location[1]) < 1e-6
                   for p in found):
                continue
            found.append(CriticalPoint(location=(x, y), gradient_residual=res,
                                       hessian=hess,
                                       morse_type=_morse_type(hess)))
    found.sort(key=lambda p: (p.location[1], p.location[0]))
    return found


def _newton_on_gradient(field, seed, residual_tol, max_iter=200):
    # iterate to stall so degenerate (linearly converging) zeros are pinned
    # well inside the 1e-6 deduplication radius
    x, y = seed
    best = None
    stall = 0
    for _ in range(max_iter):
        jet = field.jet2(x, y)
        res = math.hypot(jet.fx, jet.fy)
        if not math.isfinite(res):
            return None
        if best is None or res < best[2]:
            best = (x, y, res)
            stall = 0
        else:
            stall += 1
        if res == 0.0 or stall >= 3:
            break
        H = np.array([[jet.fxx, jet.fxy], [jet.fxy, jet.fyy]])
        rhs = -np.array([jet.fx, jet.fy])
        try:
            delta = np.linalg.solve(H, rhs)
        except np.linalg.LinAlgError:
            delta, *_ = np.linalg.lstsq(H, rhs, rcond=None)
        if not np.all(np.isfinite(delta)):
            return None
        step = float(np.hypot(delta[0], delta[1]))
        if step > 1.0:  # runaway Newton step: damp to a unit walk
            delta = delta / step
        x += float(delta[0])
        y += float(delta[1])
    if best is None or best[2] > residual_tol:
        return None
    x, y, res = best
    jet = field.jet2(x, y)
    hess = np.array([[jet.fxx, jet.fxy], [jet.fxy, jet.fyy]])
    return x, y, res, hess
