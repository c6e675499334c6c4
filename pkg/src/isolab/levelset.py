"""Points on level hypersurfaces of V: normals, frames, projection along
normal circles, and deterministic sampling.

Projection exploits the structure of genuine families: along a normal great
circle V is a cosine in the arc parameter, so jumping by the phase difference
(arccos V(x) - arccos s)/g is an exact move, and repeating it is a rapidly
converging iteration that also tolerates approximate (user) polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputContractError, SamplingError, StartAtFocalError
from .families import IsoparametricFamily
from .sphere import SpherePoint, TangentFrame, tangent_basis

_GRAD_FLOOR = 1e-8


@dataclass(frozen=True)
class SurfacePoint:
    """A framed point of the level hypersurface M_s (or of a focal
    submanifold when s = +/-1, in which case there is no normal)."""

    family: IsoparametricFamily
    level: float
    x: SpherePoint
    xi: np.ndarray | None
    frame: TangentFrame

    @property
    def tangent_vectors(self):
        """Frame vectors spanning the hypersurface tangent space."""
        return self.frame.surface_tangents


def spherical_gradient(fam: IsoparametricFamily, x):
    """Gradient of V within the sphere at unit x: the ambient gradient minus
    its radial component g F(x) x (Euler's identity)."""
    coords = x.coords if isinstance(x, SpherePoint) else np.asarray(x, float)
    single = coords.ndim == 1
    pts = coords[None, :] if single else coords
    grad = fam.polynomial.gradient(pts)
    vals = fam.polynomial.value(pts)
    vals = np.atleast_1d(vals)
    out = grad - fam.g * vals[:, None] * pts
    return out[0] if single else out


def _normalize_rows(x):
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _project_batch(fam, s, points, tol=None, accept=None, max_iter=40):
    """Drive each row of `points` to the level V = s along its own normal
    circle.  Returns (projected, ok); rows where the normal direction was
    lost (gradient below 1e-8 away from the target) are marked not ok.

    Regular levels converge by repeated phase jumps: along a normal circle V
    is a cosine in arc length, so moving by (arccos V - arccos s)/g is exact
    for a genuine family and a contraction otherwise.  The focal levels
    s = +/-1 sit at quadratically flat extrema of V where the phase jump
    loses half the digits, so there the jump is followed by a Newton solve
    of the tangency condition dV/dtau = 0 along the (frozen) circle, which
    has a simple root and lands on the focal set to machine precision.
    """
    focal = abs(abs(s) - 1.0) < 1e-14
    if focal:
        return _project_focal_batch(fam, float(np.sign(s)), points,
                                    accept=1e-10 if accept is None else accept)
    g = fam.g
    poly = fam.polynomial
    if tol is None:
        tol = 1e-14
    if accept is None:
        accept = 1e-12
    target_phase = float(np.arccos(np.clip(s, -1.0, 1.0))) / g
    X = _normalize_rows(np.array(points, dtype=np.float64))
    ok = np.ones(X.shape[0], dtype=bool)
    for _ in range(max_iter):
        v = np.atleast_1d(poly.value(X))
        live = ok & (np.abs(v - s) > tol)
        if not live.any():
            break
        idx = np.flatnonzero(live)
        Xl = X[idx]
        vl = v[idx]
        grad = poly.gradient(Xl)
        W = grad - g * vl[:, None] * Xl
        wn = np.linalg.norm(W, axis=1)
        stuck = wn < _GRAD_FLOOR
        if stuck.any():
            ok[idx[stuck]] = False
        move = ~stuck
        if not move.any():
            continue
        i2 = idx[move]
        eta = W[move] / wn[move, None]
        tau = np.arccos(np.clip(vl[move], -1.0, 1.0)) / g - target_phase
        Xn = np.cos(tau)[:, None] * X[i2] + np.sin(tau)[:, None] * eta
        X[i2] = _normalize_rows(Xn)
    v = np.atleast_1d(poly.value(X))
    ok &= np.abs(v - s) <= accept
    return X, ok


def _project_focal_batch(fam, side, points, accept=1e-10, outer=3, inner=4):
    """Project onto the focal submanifold V = side (+1 or -1).

    Each outer pass freezes the normal circle at the current point (whose
    gradient is still healthy) and solves the tangency condition dV = 0
    along it; for a genuine family the first pass is already exact.  The
    iteration is gated on the spherical gradient norm, not on |V - side|:
    V is quartically blind to small transverse offsets (a point h off the
    focal set changes V by only O(h^2)), while the gradient norm measures
    the offset linearly (|grad_S V| ~ g^2 h), which is what stencil-grade
    positioning needs.
    """
    g = fam.g
    poly = fam.polynomial
    X = _normalize_rows(np.array(points, dtype=np.float64))
    ok = np.ones(X.shape[0], dtype=bool)
    target_phase = 0.0 if side > 0 else np.pi / g
    grad_goal = 3e-13

    def clean_gradient(pts):
        # the spherical gradient is tangent by construction, but near the
        # focal set its norm drops to the scale of the Euler-identity
        # roundoff; removing the residual radial component keeps the walking
        # direction honest (a phantom radial part of relative size eps/|W|
        # would otherwise dominate the tangency residual)
        v = np.atleast_1d(poly.value(pts))
        w = poly.gradient(pts) - g * v[:, None] * pts
        w -= np.einsum("ij,ij->i", w, pts)[:, None] * pts
        return v, w

    for _ in range(outer):
        v, W = clean_gradient(X)
        wn = np.linalg.norm(W, axis=1)
        live = ok & (wn > grad_goal)
        if not live.any():
            break
        i2 = np.flatnonzero(live)
        base = X[i2]
        eta = W[i2] / wn[i2, None]
        tau = np.arccos(np.clip(v[i2], -1.0, 1.0)) / g - target_phase
        for _ in range(inner):
            ct, st = np.cos(tau)[:, None], np.sin(tau)[:, None]
            Xn = ct * base + st * eta
            vals, Wn = clean_gradient(Xn)
            dx = -st * base + ct * eta
            slope = np.einsum("ij,ij->i", Wn, dx)
            hess = poly.hessian(Xn)
            curv = np.einsum("ij,ijk,ik->i", dx, hess, dx) - g * vals
            curv = np.where(np.abs(curv) < 1e-9, 1.0, curv)
            tau = tau - slope / curv
        ct, st = np.cos(tau)[:, None], np.sin(tau)[:, None]
        X[i2] = _normalize_rows(ct * base + st * eta)
    v, W = clean_gradient(X)
    wn = np.linalg.norm(W, axis=1)
    # the gradient bound pins the transverse offset; the value bound rejects
    # rows that settled on the opposite focal sheet
    ok &= (wn <= 1e-11) & (np.abs(v - side) <= accept)
    return X, ok


def _frames_batch(fam, points):
    """Normals and hypersurface tangent frames for a batch of points on a
    regular level.  Returns (xi (B, D), tangents (B, n, D)); frames come from
    a batched QR of [x, xi, coordinate axes], deterministic given the input.
    """
    X = np.asarray(points, dtype=np.float64)
    b, d = X.shape
    W = spherical_gradient(fam, X)
    wn = np.linalg.norm(W, axis=1, keepdims=True)
    xi = W / wn
    cols = np.empty((b, d, d + 2))
    cols[:, :, 0] = X
    cols[:, :, 1] = xi
    cols[:, :, 2:] = np.eye(d)[None, :, :]
    q, r = np.linalg.qr(cols)
    sign = np.sign(np.einsum("bii->bi", r[:, :, :d]))
    sign[sign == 0.0] = 1.0
    q = q * sign[:, None, :]
    tangents = np.swapaxes(q[:, :, 2:d], 1, 2)
    return xi, tangents


def surface_point(fam: IsoparametricFamily, x: SpherePoint, level=None) -> SurfacePoint:
    """Wrap a point already lying on a level into a framed SurfacePoint."""
    v = float(fam.polynomial.value(x.coords))
    s = v if level is None else float(level)
    focal = abs(abs(s) - 1.0) < 1e-9
    if abs(v - s) > (1e-10 if not focal else 1e-8):
        raise InputContractError(f"point has V = {v!r}, not the level {s!r}")
    if focal:
        return SurfacePoint(fam, s, x, None, tangent_basis(x))
    w = spherical_gradient(fam, x)
    wn = float(np.linalg.norm(w))
    if wn < _GRAD_FLOOR:
        raise StartAtFocalError("normal direction undefined at this point")
    xi = w / wn
    return SurfacePoint(fam, s, x, xi, tangent_basis(x, xi))


def project_to_level(fam: IsoparametricFamily, s, x0: SpherePoint) -> SurfacePoint:
    """Walk from x0 along its normal circle to the level V = s and return a
    fully framed point there.

    Raises StartAtFocalError when x0 sits on the focal set with V(x0) != s,
    where the walking direction is undefined; callers restart with a
    perturbed x0.
    """
    s = float(s)
    if not -1.0 <= s <= 1.0:
        raise InputContractError("levels live in [-1, 1]")
    v0 = float(fam.polynomial.value(x0.coords))
    w0 = spherical_gradient(fam, x0)
    if float(np.linalg.norm(w0)) < _GRAD_FLOOR and abs(v0 - s) > 1e-10:
        raise StartAtFocalError(
            "projection started on the focal set; perturb the start point")
    X, ok = _project_batch(fam, s, x0.coords[None, :])
    if not ok[0]:
        raise StartAtFocalError("projection lost the normal direction")
    return surface_point(fam, SpherePoint(X[0]), level=s)


def sample_points(fam: IsoparametricFamily, s, count, seed) -> list[SurfacePoint]:
    """Deterministic sample of framed points on the level V = s: ambient
    Gaussians pushed to the sphere, then projected; failed projections are
    retried with fresh draws, up to a budget of 10x count."""
    if count < 1:
        raise InputContractError("count must be at least 1")
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0xA11CE)))
    out = []
    budget = 10 * count
    drawn = 0
    while len(out) < count and drawn < budget:
        take = min(count - len(out) + 4, budget - drawn)
        drawn += take
        raw = rng.normal(size=(take, fam.ambient_dim))
        X, ok = _project_batch(fam, s, raw)
        for row, good in zip(X, ok):
            if good and len(out) < count:
                out.append(surface_point(fam, SpherePoint(row), level=s))
    if len(out) < count:
        raise SamplingError(
            f"could not draw {count} points on level {s} within {budget} tries")
    return out
