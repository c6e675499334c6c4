"""Critical points of spherical distance functions d_p on level hypersurfaces
and on focal submanifolds, found by two independent routes and classified by
two independent index computations.

Route one is a multistart Newton solve of the criticality condition: x is
critical for d_p exactly when p lies in the plane spanned by x and the
hypersurface normal at x, so the tangential component of p must vanish.
Route two uses the normal great circle through p: it meets every level
hypersurface 2g times (and each focal submanifold g times) at arc positions
available in closed form from the cosine profile of V, so the expected
critical set is constructed analytically and the Newton route must agree
with it point for point.

Index route one is the sign count of a finite-difference Hessian; since the
height function <p, .> has the same critical points as d_p and is smooth
everywhere, the Hessian is taken of the height function and converted
(Hess d_p = -Hess l_p / sin t at critical points).  Index route two counts
focal points, with multiplicity, strictly between the critical point and the
pole along the connecting geodesic.  The two must agree at every
non-degenerate critical point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (InputContractError, NearFocalPoleError, PoleIsFocalError,
                     SamplingError)
from .levelset import (SurfacePoint, _frames_batch, _normalize_rows,
                       _project_batch, spherical_gradient, surface_point)
from .shape import PrincipalSpectrum, arccot, spectrum_at
from .sphere import SpherePoint

NEWTON_TOL = 1e-11
DEDUP_RADIUS = 1e-6
_H_JACOBIAN = 1e-6
_H_HESSIAN = 1e-4
_DEGENERATE_REPORT = 1e-6   # flag threshold in reports
_DEGENERATE_PROBE = 1e-4    # threshold used by the totally-focal probe
_HESSIAN_FLOOR = 1e-6       # below this absolute scale the Hessian is zero
_POLE_MARGIN = 1e-3
_T_GUARD = 1e-8


@dataclass(frozen=True)
class CriticalPoint:
    """A critical point of d_p on a level set, with both index computations."""

    location: SpherePoint
    t: float
    index_hessian: int
    index_focal: int | None
    degenerate: bool
    min_abs_hessian_eig: float
    hessian_margin: float  # min |eig| / max |eig| of the distance Hessian

    def to_dict(self):
        return {
            "coords": [float(v) for v in self.location.coords],
            "t": self.t,
            "index_hessian": self.index_hessian,
            "index_focal": self.index_focal,
            "degenerate": self.degenerate,
            "margin": self.hessian_margin,
        }


@dataclass
class TightnessReport:
    """Per-pole critical-point counts and index bookkeeping for one level."""

    family: str
    level: float
    g: int
    m1: int
    m2: int
    expected_count: int
    seed: int
    poles: list = field(default_factory=list)
    passed: bool = True
    index_histogram: dict = field(default_factory=dict)
    worst_match_distance: float = 0.0
    worst_level_residual: float = 0.0
    min_hessian_margin: float = float("inf")
    rejected_poles: int = 0
    failures: list = field(default_factory=list)

    def to_dict(self):
        return {
            "family": self.family,
            "level": self.level,
            "g": self.g,
            "m1": self.m1,
            "m2": self.m2,
            "expected_count": self.expected_count,
            "seed": self.seed,
            "poles": self.poles,
            "pass": self.passed,
            "index_histogram": {str(k): v for k, v in
                                sorted(self.index_histogram.items())},
            "worst_match_distance": self.worst_match_distance,
            "worst_level_residual": self.worst_level_residual,
            "min_hessian_margin": self.min_hessian_margin,
            "rejected_poles": self.rejected_poles,
            "failures": self.failures,
        }


# -- shared internals --------------------------------------------------------

def _tangential_residual(fam, p, X, xi):
    """Component of p orthogonal to both x and the normal, rowwise."""
    proj = p[None, :] - (X @ p)[:, None] * X - np.einsum("ij,j->i", xi, p)[:, None] * xi
    return proj


def _normals_batch(fam, X):
    """Unit normals (toward increasing V) without the frame QR."""
    W = spherical_gradient(fam, X)
    return W / np.linalg.norm(W, axis=1, keepdims=True)


def _retract(fam, s, X, tol=1e-15, accept=1e-11):
    out, ok = _project_batch(fam, s, X, tol=tol, accept=accept)
    return out, ok


def _newton_multistart(fam, s, p, starts, tol=NEWTON_TOL, max_iter=40):
    """Drive each start to a zero of the tangential residual on M_s.

    Newton in the chart spanned by the frame at the current iterate, with a
    finite-difference Jacobian and a pseudoinverse step (so the same solver
    also walks onto critical manifolds when the pole is focal and the
    Jacobian is singular).  Returns (solutions, residual_norms, diagnostics).
    """
    X = np.array(starts, dtype=np.float64)
    n = fam.hypersurface_dim
    active = np.ones(X.shape[0], dtype=bool)
    h = _H_JACOBIAN
    for _ in range(max_iter):
        xi, frames = _frames_batch(fam, X)
        q = _tangential_residual(fam, p, X, xi)
        rnorm = np.abs(q).max(axis=1)
        active &= rnorm > tol
        if not active.any():
            break
        idx = np.flatnonzero(active)
        Xa = X[idx]
        Ta = frames[idx]
        b = len(idx)
        jac = np.empty((b, n, n))
        for j in range(n):
            step = h * Ta[:, j, :]
            plus, okp = _retract(fam, s, _normalize_rows(Xa + step))
            minus, okm = _retract(fam, s, _normalize_rows(Xa - step))
            qp = _tangential_residual(fam, p, plus, _normals_batch(fam, plus))
            qm = _tangential_residual(fam, p, minus, _normals_batch(fam, minus))
            gp = np.einsum("bnd,bd->bn", Ta, qp)
            gm = np.einsum("bnd,bd->bn", Ta, qm)
            jac[:, :, j] = (gp - gm) / (2 * h)
        g0 = np.einsum("bnd,bd->bn", Ta, q[idx])
        delta = -np.einsum("bij,bj->bi", np.linalg.pinv(jac, rcond=1e-12), g0)
        norms = np.linalg.norm(delta, axis=1)
        cap = 0.4
        scale = np.where(norms > cap, cap / np.maximum(norms, cap), 1.0)
        delta *= scale[:, None]
        moved = Xa + np.einsum("bi,bid->bd", delta, Ta)
        moved, okmv = _retract(fam, s, _normalize_rows(moved))
        X[idx[okmv]] = moved[okmv]
        active[idx[~okmv]] = False  # lost the level: discard this start
    xi, _ = _frames_batch(fam, X)
    q = _tangential_residual(fam, p, X, xi)
    rnorm = np.abs(q).max(axis=1)
    converged = rnorm <= tol
    diag = {"starts": int(X.shape[0]), "converged": int(converged.sum()),
            "discarded": int((~converged).sum())}
    return X[converged], rnorm[converged], diag


def _dedup(fam, X, rnorm, radius=DEDUP_RADIUS):
    """Merge solutions within geodesic `radius`, keeping the best residual."""
    if len(X) == 0:
        return X
    order = np.argsort(rnorm)
    kept = []
    for i in order:
        xi_ = X[i]
        dup = False
        for k in kept:
            ang = float(np.arccos(np.clip(xi_ @ k, -1.0, 1.0)))
            if ang < radius:
                dup = True
                break
        if not dup:
            kept.append(xi_)
    return np.array(kept)


def _hessian_stencil(fam, s, p, X):
    """Finite-difference Hessians of the height function l_p on M_s at each
    row of X (assumed critical), in the local tangent chart.

    Returns (hessians (M, n, n), t values (M,)).  The chart is the frame at
    the point with moves retracted back to the level; at a critical point
    the chart curvature terms vanish with the gradient, so the Hessian is
    chart-invariant.  Retraction is run to machine tolerance because the
    second difference divides by h^2 = 1e-8.
    """
    m = X.shape[0]
    n = fam.hypersurface_dim
    h = _H_HESSIAN
    xi, frames = _frames_batch(fam, X)
    moves = []
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for k in range(m):
        t_ = frames[k]
        for i in range(n):
            moves.append(X[k] + h * t_[i])
            moves.append(X[k] - h * t_[i])
        for i, j in pairs:
            moves.append(X[k] + h * t_[i] + h * t_[j])
            moves.append(X[k] + h * t_[i] - h * t_[j])
            moves.append(X[k] - h * t_[i] + h * t_[j])
            moves.append(X[k] - h * t_[i] - h * t_[j])
    moved, _ = _retract(fam, s, _normalize_rows(np.array(moves)),
                        tol=1e-16, accept=1e-9)
    ell = moved @ p
    ell0 = X @ p
    per = 2 * n + 4 * len(pairs)
    hessians = np.empty((m, n, n))
    for k in range(m):
        seg = ell[k * per:(k + 1) * per]
        hmat = np.empty((n, n))
        for i in range(n):
            hmat[i, i] = (seg[2 * i] - 2 * ell0[k] + seg[2 * i + 1]) / h ** 2
        base = 2 * n
        for w, (i, j) in enumerate(pairs):
            v = (seg[base + 4 * w] - seg[base + 4 * w + 1]
                 - seg[base + 4 * w + 2] + seg[base + 4 * w + 3]) / (4 * h ** 2)
            hmat[i, j] = hmat[j, i] = v
        hessians[k] = hmat
    ts = np.arccos(np.clip(ell0, -1.0, 1.0))
    return hessians, ts


def _classify(fam, s, p, X, spectra=None, degenerate_threshold=_DEGENERATE_REPORT):
    """Build CriticalPoint records for each row of X (critical for d_p)."""
    if len(X) == 0:
        return []
    hessians, ts = _hessian_stencil(fam, s, p, np.asarray(X))
    out = []
    for k in range(X.shape[0]):
        t = float(ts[k])
        sin_t = max(np.sin(t), 1e-12)
        dist_hess = -hessians[k] / sin_t
        eig = np.linalg.eigvalsh(dist_hess)
        abs_eig = np.abs(eig)
        max_abs = float(abs_eig.max())
        min_abs = float(abs_eig.min())
        margin = min_abs / max_abs if max_abs > 0 else 0.0
        degenerate = (max_abs < _HESSIAN_FLOOR
                      or min_abs < degenerate_threshold * max_abs)
        index_h = int(np.sum(eig < 0))
        sp = surface_point(fam, SpherePoint(X[k]), level=s)
        spec = spectra[k] if spectra is not None else spectrum_at(sp)
        try:
            index_f = index_via_focal_count(SpherePoint(p), sp, spec)
        except NearFocalPoleError:
            index_f = None
            degenerate = True
        out.append(CriticalPoint(
            location=sp.x, t=t, index_hessian=index_h, index_focal=index_f,
            degenerate=bool(degenerate), min_abs_hessian_eig=min_abs,
            hessian_margin=float(margin)))
    out.sort(key=lambda cp: cp.t)
    return out


# -- public operations -------------------------------------------------------

def index_via_focal_count(pole: SpherePoint, cp: SurfacePoint,
                          spectrum: PrincipalSpectrum) -> int:
    """Morse index of d_pole at the critical point cp, computed as the sum of
    multiplicities of the focal points lying strictly between cp and the pole
    on the connecting geodesic.

    The focal parameters are arccot of the principal curvatures measured
    toward the pole: when the geodesic leaves cp against the surface normal,
    the spectrum flips sign.  A focal parameter within 1e-8 of the pole
    distance means the pole is numerically focal and the index undefined.
    """
    p = pole.coords
    x = cp.x.coords
    tangential = p - (p @ x) * x
    tn = float(np.linalg.norm(tangential))
    t = float(np.arccos(np.clip(p @ x, -1.0, 1.0)))
    if tn < 1e-12 or t <= _T_GUARD:
        return 0  # pole on the normal line at distance ~0: nothing passed
    w = tangential / tn
    toward = float(w @ np.asarray(cp.xi))
    values = np.asarray(spectrum.values)
    if toward < 0:
        values = -values
    params = arccot(values)
    mults = np.asarray(spectrum.multiplicities)
    if np.any(np.abs(params - t) < _T_GUARD):
        raise NearFocalPoleError(
            f"focal parameter within {_T_GUARD:g} of the critical distance")
    return int(mults[params < t].sum())


def critical_points_newton(fam, s, pole: SpherePoint, num_starts=None, seed=0,
                           degenerate_threshold=_DEGENERATE_REPORT):
    """All critical points of d_pole on M_s by multistart Newton.

    Starts are drawn deterministically on the level; converged solutions are
    deduplicated at geodesic distance 1e-6 and classified (index via the
    finite-difference Hessian and via the focal count, degeneracy flag from
    the relative smallest Hessian eigenvalue).
    """
    if not -1.0 < s < 1.0:
        raise InputContractError("levels of hypersurfaces live in (-1, 1)")
    if num_starts is None:
        num_starts = 60 * fam.g
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0x5EED)))
    raw = rng.normal(size=(num_starts, fam.ambient_dim))
    starts, ok = _project_batch(fam, s, raw)
    starts = starts[ok]
    if len(starts) == 0:
        raise SamplingError("no usable Newton starts")
    p = pole.coords
    sols, rnorm, _diag = _newton_multistart(fam, s, p, starts)
    unique = _dedup(fam, sols, rnorm)
    return _classify(fam, s, p, unique,
                     degenerate_threshold=degenerate_threshold)


def normal_circle_critical_points(fam, s, pole: SpherePoint, classify=True):
    """Critical points of d_pole on M_s from the normal great circle through
    the pole.

    There is exactly one great circle through a non-focal pole meeting the
    family orthogonally (its direction is the normalized spherical gradient
    of V at the pole); V restricted to it is a cosine of g times arc length,
    so the crossings of the level s sit at 2g closed-form arc positions.
    """
    if not -1.0 < s < 1.0:
        raise InputContractError("levels of hypersurfaces live in (-1, 1)")
    p = pole.coords
    w = spherical_gradient(fam, pole)
    wn = float(np.linalg.norm(w))
    if wn < 1e-8:
        raise PoleIsFocalError("the pole lies on the focal set")
    eta = w / wn
    g = fam.g
    v0 = float(fam.polynomial.value(p))
    psi0 = float(np.arccos(np.clip(v0, -1.0, 1.0))) / g
    beta = float(np.arccos(np.clip(s, -1.0, 1.0)))
    taus = []
    for j in range(-g - 1, g + 2):
        for sgn in (1.0, -1.0):
            tau = psi0 - (sgn * beta + 2 * np.pi * j) / g
            if -np.pi < tau <= np.pi:
                taus.append(tau)
    taus = sorted(set(np.round(taus, 14)))
    pts = []
    for tau in taus:
        x = np.cos(tau) * p + np.sin(tau) * eta
        # one secant polish pass keeps |V - s| at roundoff even for
        # polynomials that satisfy the identities only approximately
        for _ in range(2):
            val = float(fam.polynomial.value(x))
            grad = fam.polynomial.gradient(x)
            dtan = -np.sin(tau) * p + np.cos(tau) * eta
            slope = float(grad @ dtan)
            if abs(slope) < 1e-9:
                break
            tau -= (val - s) / slope
            x = np.cos(tau) * p + np.sin(tau) * eta
        pts.append(x)
    X = np.array(pts)
    if classify:
        return _classify(fam, s, p, X)
    return [surface_point(fam, SpherePoint(row), level=s) for row in X]


def _draw_pole(fam, rng, margin=_POLE_MARGIN):
    """Uniform pole with |V| bounded away from 1 (non-focal, well
    conditioned)."""
    for _ in range(1000):
        raw = rng.normal(size=fam.ambient_dim)
        p = raw / np.linalg.norm(raw)
        if abs(float(fam.polynomial.value(p))) <= 1.0 - margin:
            return SpherePoint(p)
    raise SamplingError("could not draw a non-focal pole")


def _match_sets(a, b):
    """Greedy geodesic matching; returns worst pair distance or inf."""
    if len(a) != len(b):
        return float("inf")
    used = [False] * len(b)
    worst = 0.0
    for pa in a:
        best, best_j = None, None
        for j, pb in enumerate(b):
            if used[j]:
                continue
            d = float(np.arccos(np.clip(pa.location.coords @ pb.location.coords,
                                        -1.0, 1.0)))
            if best is None or d < best:
                best, best_j = d, j
        used[best_j] = True
        worst = max(worst, best)
    return worst


def tightness_report(fam, s, num_poles=100, seed=0) -> TightnessReport:
    """Certify the critical-point count 2g for distance functions on M_s.

    For each non-focal pole both algorithms run; the report passes only if
    every pole yields exactly 2g critical points from each, the two point
    sets agree within 1e-6, and the two index computations agree at every
    point.  Nothing is tolerated on the counts themselves.
    """
    report = TightnessReport(
        family=fam.label, level=float(s), g=fam.g, m1=fam.m1, m2=fam.m2,
        expected_count=fam.betti_sum_hypersurface, seed=seed)
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0x7161)))
    done = 0
    while done < num_poles:
        pole = _draw_pole(fam, rng)
        try:
            newton_pts = critical_points_newton(fam, s, pole, seed=seed + done)
            circle_pts = normal_circle_critical_points(fam, s, pole)
        except (NearFocalPoleError, PoleIsFocalError):
            report.rejected_poles += 1
            continue
        ts = [cp.t for cp in newton_pts + circle_pts]
        if any(t > np.pi - _T_GUARD or t < _T_GUARD for t in ts):
            report.rejected_poles += 1
            continue
        done += 1
        match = _match_sets(newton_pts, circle_pts)
        level_res = max(
            abs(float(fam.polynomial.value(cp.location.coords)) - s)
            for cp in newton_pts + circle_pts)
        index_ok = all(cp.index_focal == cp.index_hessian
                       for cp in newton_pts + circle_pts
                       if not cp.degenerate)
        pole_pass = (len(newton_pts) == report.expected_count
                     and len(circle_pts) == report.expected_count
                     and match < DEDUP_RADIUS and index_ok)
        if not pole_pass:
            report.passed = False
            report.failures.append({
                "pole": [float(v) for v in pole.coords],
                "count_newton": len(newton_pts),
                "count_circle": len(circle_pts),
                "match_distance": match,
                "index_agreement": index_ok,
            })
        for cp in newton_pts:
            report.index_histogram[cp.index_hessian] = \
                report.index_histogram.get(cp.index_hessian, 0) + 1
            report.min_hessian_margin = min(report.min_hessian_margin,
                                            cp.hessian_margin)
        report.worst_match_distance = max(report.worst_match_distance, match)
        report.worst_level_residual = max(report.worst_level_residual, level_res)
        report.poles.append({
            "pole": [float(v) for v in pole.coords],
            "count_newton": len(newton_pts),
            "count_circle": len(circle_pts),
            "points": [cp.to_dict() for cp in newton_pts],
        })
    return report


# -- focal submanifolds ------------------------------------------------------

def _focal_tangent_projector(fam, Y):
    """Orthogonal projectors onto the tangent spaces of the focal submanifold
    at each row of Y (points with V = +/-1).

    The restriction of V to the sphere has Hessian zero along the focal
    submanifold and -g^2 transverse to it (V is a cosine of g times arc
    length along every normal circle), so the tangent space is the kernel of
    the tangential Hessian, separated from the transverse eigenvalues by an
    O(g^2) gap.  Returns (projectors (B, D, D), dims (B,)).
    """
    Y = np.asarray(Y, dtype=np.float64)
    b, d = Y.shape
    cols = np.empty((b, d, d + 1))
    cols[:, :, 0] = Y
    cols[:, :, 2 - 1:] = np.eye(d)[None, :, :]
    q, _ = np.linalg.qr(cols)
    sph = np.swapaxes(q[:, :, 1:d], 1, 2)  # (B, d-1, D) sphere tangent frames
    hess = fam.polynomial.hessian(Y)
    vals = np.atleast_1d(fam.polynomial.value(Y))
    core = hess - fam.g * vals[:, None, None] * np.eye(d)[None, :, :]
    bmat = np.einsum("bid,bde,bje->bij", sph, core, sph)
    bmat = 0.5 * (bmat + np.swapaxes(bmat, 1, 2))
    eigval, eigvec = np.linalg.eigh(bmat)
    cut = fam.g ** 2 / 2.0
    proj = np.zeros((b, d, d))
    dims = np.empty(b, dtype=int)
    for i in range(b):
        keep = np.abs(eigval[i]) < cut
        dims[i] = int(keep.sum())
        if dims[i]:
            amb = sph[i].T @ eigvec[i][:, keep]  # (D, dims)
            proj[i] = amb @ amb.T
    return proj, dims


def _focal_newton(fam, side, p, starts, tol=1e-13, max_iter=48, polish=2):
    """Newton multistart for critical points of d_p on the focal submanifold
    V = side: zeros of the projection of p onto the (smoothly varying)
    tangent spaces, with retraction back to the focal level.

    After the masked iteration, every converged point gets `polish`
    unconditional extra steps: along nearly degenerate Hessian directions
    the residual tolerance alone leaves position error up to tol/|J|, and
    the polish pushes positions to the evaluation-noise floor instead."""
    Y = np.array(starts, dtype=np.float64)
    proj, dims = _focal_tangent_projector(fam, Y)
    d_foc = int(dims[0])
    if not np.all(dims == d_foc):
        raise SamplingError(f"focal tangent ranks disagree: {sorted(set(dims))}")
    if d_foc == 0:
        # the focal set is a point; every projected start already solves it
        return Y, np.zeros(Y.shape[0]), 0
    h = _H_JACOBIAN

    def step(idx):
        Ya = Y[idx]
        proj_a, _ = _focal_tangent_projector(fam, Ya)
        q = np.einsum("bij,j->bi", proj_a, p)
        # chart basis: top-d_foc eigenvectors of the projector at the iterate
        w, v = np.linalg.eigh(proj_a)
        chart = np.swapaxes(v[:, :, -d_foc:], 1, 2)  # (b, d_foc, D)
        jac = np.empty((len(idx), d_foc, d_foc))
        for j in range(d_foc):
            delta_x = h * chart[:, j, :]
            plus, _ = _retract(fam, float(side), _normalize_rows(Ya + delta_x))
            minus, _ = _retract(fam, float(side), _normalize_rows(Ya - delta_x))
            prj_p, _ = _focal_tangent_projector(fam, plus)
            prj_m, _ = _focal_tangent_projector(fam, minus)
            qp = np.einsum("bnd,bde,e->bn", chart, prj_p, p)
            qm = np.einsum("bnd,bde,e->bn", chart, prj_m, p)
            jac[:, :, j] = (qp - qm) / (2 * h)
        g0 = np.einsum("bnd,bd->bn", chart, q)
        delta = -np.einsum("bij,bj->bi", np.linalg.pinv(jac, rcond=1e-12), g0)
        norms = np.linalg.norm(delta, axis=1)
        cap = 0.4
        delta *= np.where(norms > cap, cap / np.maximum(norms, cap), 1.0)[:, None]
        moved = Ya + np.einsum("bi,bid->bd", delta, chart)
        moved, okm = _retract(fam, float(side), _normalize_rows(moved))
        Y[idx[okm]] = moved[okm]
        return idx[okm]

    active = np.ones(Y.shape[0], dtype=bool)
    for _ in range(max_iter):
        proj, _dims = _focal_tangent_projector(fam, Y)
        q = np.einsum("bij,j->bi", proj, p)
        rnorm = np.linalg.norm(q, axis=1)
        active &= rnorm > tol
        if not active.any():
            break
        idx = np.flatnonzero(active)
        kept = step(idx)
        dropped = np.setdiff1d(idx, kept)
        active[dropped] = False
    proj, _ = _focal_tangent_projector(fam, Y)
    q = np.einsum("bij,j->bi", proj, p)
    rnorm = np.linalg.norm(q, axis=1)
    conv = rnorm <= tol
    conv_idx = np.flatnonzero(conv)
    for _ in range(polish):
        if len(conv_idx):
            step(conv_idx)
    proj, _ = _focal_tangent_projector(fam, Y)
    q = np.einsum("bij,j->bi", proj, p)
    rnorm = np.linalg.norm(q, axis=1)
    return Y[conv], rnorm[conv], d_foc


def _focal_circle_points(fam, side, pole):
    """The g points where the normal great circle through the pole meets the
    focal submanifold V = side, in closed form from the cosine profile."""
    p = pole.coords
    w = spherical_gradient(fam, pole)
    wn = float(np.linalg.norm(w))
    if wn < 1e-8:
        raise PoleIsFocalError("the pole lies on the focal set")
    eta = w / wn
    g = fam.g
    v0 = float(fam.polynomial.value(p))
    psi0 = float(np.arccos(np.clip(v0, -1.0, 1.0))) / g
    shift = 0.0 if side > 0 else np.pi / g
    taus = []
    for j in range(-g - 1, g + 2):
        tau = psi0 - shift - 2 * np.pi * j / g
        if -np.pi < tau <= np.pi:
            taus.append(tau)
    taus = sorted(set(np.round(taus, 14)))
    out = []
    for tau in taus:
        x = np.cos(tau) * p + np.sin(tau) * eta
        # polish: extremize V along the circle (tangential root of dV)
        for _ in range(3):
            grad = fam.polynomial.gradient(x)
            dtan = -np.sin(tau) * p + np.cos(tau) * eta
            slope = float(grad @ dtan)
            hess = fam.polynomial.hessian(x)
            curv = float(dtan @ hess @ dtan) - fam.g * float(fam.polynomial.value(x))
            if abs(curv) < 1e-9:
                break
            tau -= slope / curv
            x = np.cos(tau) * p + np.sin(tau) * eta
        out.append((tau, x))
    return eta, out


def _focal_index(fam, side, p, Y, d_foc):
    """Height-function Hessian index in the focal chart at each row of Y."""
    if d_foc == 0:
        return [0] * len(Y), [1.0] * len(Y)
    proj, _ = _focal_tangent_projector(fam, Y)
    w, v = np.linalg.eigh(proj)
    chart = np.swapaxes(v[:, :, -d_foc:], 1, 2)
    h = _H_HESSIAN
    indices, margins = [], []
    pairs = [(i, j) for i in range(d_foc) for j in range(i + 1, d_foc)]
    for k in range(Y.shape[0]):
        moves = []
        for i in range(d_foc):
            moves.append(Y[k] + h * chart[k, i])
            moves.append(Y[k] - h * chart[k, i])
        for i, j in pairs:
            moves.append(Y[k] + h * chart[k, i] + h * chart[k, j])
            moves.append(Y[k] + h * chart[k, i] - h * chart[k, j])
            moves.append(Y[k] - h * chart[k, i] + h * chart[k, j])
            moves.append(Y[k] - h * chart[k, i] - h * chart[k, j])
        moved, _ = _retract(fam, float(side), _normalize_rows(np.array(moves)),
                            tol=1e-16, accept=1e-8)
        ell = moved @ p
        ell0 = float(Y[k] @ p)
        hmat = np.empty((d_foc, d_foc))
        for i in range(d_foc):
            hmat[i, i] = (ell[2 * i] - 2 * ell0 + ell[2 * i + 1]) / h ** 2
        base = 2 * d_foc
        for widx, (i, j) in enumerate(pairs):
            val = (ell[base + 4 * widx] - ell[base + 4 * widx + 1]
                   - ell[base + 4 * widx + 2] + ell[base + 4 * widx + 3]) / (4 * h ** 2)
            hmat[i, j] = hmat[j, i] = val
        eig = np.linalg.eigvalsh(hmat)
        indices.append(int(np.sum(eig > 0)))  # index of d_p = #pos of Hess l_p
        abs_eig = np.abs(eig)
        margins.append(float(abs_eig.min() / abs_eig.max())
                       if abs_eig.max() > _HESSIAN_FLOOR else 0.0)
    return indices, margins


def focal_tautness_report(fam, side, num_poles=50, seed=0,
                          starts_per_pole=None) -> TightnessReport:
    """Certify the critical-point count g for distance functions on the
    focal submanifold V = side.

    The analytic route intersects the unique normal great circle through
    each pole with the focal level (g points); the Newton route solves the
    tangency condition by multistart on the focal submanifold.  The report
    additionally verifies that all critical points lie on one great circle
    through the pole (collinearity residual below 1e-8).
    """
    side = int(side)
    if side not in (1, -1):
        raise InputContractError("side must be +1 or -1")
    report = TightnessReport(
        family=fam.label, level=float(side), g=fam.g, m1=fam.m1, m2=fam.m2,
        expected_count=fam.betti_sum_focal, seed=seed)
    if starts_per_pole is None:
        starts_per_pole = 24 * fam.g
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0xF0CA)))
    done = 0
    while done < num_poles:
        pole = _draw_pole(fam, rng)
        try:
            eta, circle = _focal_circle_points(fam, side, pole)
        except PoleIsFocalError:
            report.rejected_poles += 1
            continue
        done += 1
        raw = rng.normal(size=(starts_per_pole, fam.ambient_dim))
        starts, ok = _project_batch(fam, float(side), raw)
        starts = starts[ok]
        sols, rnorm, d_foc = _focal_newton(fam, side, pole.coords, starts)
        unique = _dedup(fam, sols, rnorm)
        circle_x = np.array([x for _tau, x in circle])
        # collinearity: independently found points must lie in span{p, eta}
        plane = np.stack([pole.coords, eta])
        colin = 0.0
        for row in unique:
            res = row - plane.T @ (plane @ row)
            colin = max(colin, float(np.linalg.norm(res)))
        match = float("inf")
        if len(unique) == len(circle_x):
            match = 0.0
            used = [False] * len(circle_x)
            for row in unique:
                dists = [np.arccos(np.clip(row @ c, -1, 1)) if not used[j]
                         else np.inf for j, c in enumerate(circle_x)]
                j = int(np.argmin(dists))
                used[j] = True
                match = max(match, float(dists[j]))
        indices, margins = _focal_index(fam, side, pole.coords, circle_x, d_foc)
        level_res = max(abs(abs(float(fam.polynomial.value(c))) - 1.0)
                        for c in circle_x)
        pole_pass = (len(circle_x) == report.expected_count
                     and len(unique) == report.expected_count
                     and match < 10 * DEDUP_RADIUS and colin < 1e-8)
        if not pole_pass:
            report.passed = False
            report.failures.append({
                "pole": [float(v) for v in pole.coords],
                "count_newton": len(unique),
                "count_circle": len(circle_x),
                "match_distance": match,
                "collinearity": colin,
            })
        for idx_val, mg in zip(indices, margins):
            report.index_histogram[idx_val] = \
                report.index_histogram.get(idx_val, 0) + 1
            report.min_hessian_margin = min(report.min_hessian_margin, mg)
        report.worst_match_distance = max(report.worst_match_distance,
                                          0.0 if match == float("inf") else match)
        report.worst_level_residual = max(report.worst_level_residual, level_res)
        report.poles.append({
            "pole": [float(v) for v in pole.coords],
            "count_newton": len(unique),
            "count_circle": len(circle_x),
            "collinearity": colin,
            "points": [{"coords": [float(v) for v in c],
                        "t": float(np.arccos(np.clip(pole.coords @ c, -1, 1))),
                        "index_hessian": int(iv)}
                       for c, iv in zip(circle_x, indices)],
        })
    return report


def totally_focal_probe(fam, s, seed=0, num_nonfocal=50, num_focal=10,
                        num_starts=None):
    """Probe the all-or-nothing degeneracy dichotomy of distance functions.

    (a) For non-focal poles every critical point of d_p on M_s must be
    non-degenerate (relative smallest Hessian eigenvalue above 1e-4).
    (b) For poles placed on a focal submanifold every Newton solution must
    be degenerate by the same threshold; the critical set is then a
    continuum and shows up as a cloud of non-isolated solutions.
    A pole violating the dichotomy in either direction is a hard failure.
    Also reports (without asserting) the margin for a pole offset 1e-5 from
    the focal set, to document boundary behavior.
    """
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0x70FA)))
    nonfocal = {"poles": 0, "points": 0, "degenerate_points": 0,
                "min_margin": float("inf")}
    mixed_failures = []
    for i in range(num_nonfocal):
        pole = _draw_pole(fam, rng)
        pts = critical_points_newton(fam, s, pole, seed=seed + i,
                                     degenerate_threshold=_DEGENERATE_PROBE)
        flags = [cp.degenerate for cp in pts]
        nonfocal["poles"] += 1
        nonfocal["points"] += len(pts)
        nonfocal["degenerate_points"] += sum(flags)
        nonfocal["min_margin"] = min(nonfocal["min_margin"],
                                     min(cp.hessian_margin for cp in pts))
        if any(flags) and not all(flags):
            mixed_failures.append({"pole": [float(v) for v in pole.coords],
                                   "kind": "non-focal"})
    focal = {"poles": 0, "points": 0, "degenerate_points": 0,
             "max_margin": 0.0}
    if num_starts is None:
        num_starts = 60 * fam.g
    for i in range(num_focal):
        side = 1.0 if i % 2 == 0 else -1.0
        raw = rng.normal(size=fam.ambient_dim)
        pole_sp = project_to_level_focal(fam, side, raw)
        p = pole_sp.coords
        raws = rng.normal(size=(num_starts, fam.ambient_dim))
        starts, ok = _project_batch(fam, s, raws)
        sols, rnorm, _diag = _newton_multistart(fam, s, p, starts[ok])
        unique = _dedup(fam, sols, rnorm)
        cps = _classify(fam, s, p, unique,
                        degenerate_threshold=_DEGENERATE_PROBE)
        flags = [cp.degenerate for cp in cps]
        focal["poles"] += 1
        focal["points"] += len(cps)
        focal["degenerate_points"] += sum(flags)
        if cps:
            focal["max_margin"] = max(focal["max_margin"],
                                      max(cp.hessian_margin for cp in cps))
        if any(flags) and not all(flags):
            mixed_failures.append({"pole": [float(v) for v in p],
                                   "kind": "focal"})
    # boundary demonstration: a pole just off the focal set
    raw = rng.normal(size=fam.ambient_dim)
    base = project_to_level_focal(fam, 1.0, raw)
    w = rng.normal(size=fam.ambient_dim)
    w -= (w @ base.coords) * base.coords
    w /= np.linalg.norm(w)
    near = SpherePoint(np.cos(1e-5) * base.coords + np.sin(1e-5) * w)
    near_pts = critical_points_newton(fam, s, near, seed=seed + 991,
                                      degenerate_threshold=_DEGENERATE_PROBE)
    boundary = {
        "offset": 1e-5,
        "min_margin": min((cp.hessian_margin for cp in near_pts),
                          default=float("nan")),
        "count": len(near_pts),
    }
    passed = (nonfocal["degenerate_points"] == 0
              and focal["points"] > 0
              and focal["degenerate_points"] == focal["points"]
              and not mixed_failures)
    return {
        "family": fam.label,
        "level": float(s),
        "seed": seed,
        "nonfocal": nonfocal,
        "focal": focal,
        "boundary": boundary,
        "mixed_failures": mixed_failures,
        "pass": passed,
    }


def project_to_level_focal(fam, side, raw) -> SpherePoint:
    """Project an ambient seed onto the focal submanifold V = side."""
    X, ok = _project_batch(fam, float(side), np.asarray(raw, float)[None, :])
    if not ok[0]:
        raise SamplingError("failed to reach the focal level from this seed")
    return SpherePoint(X[0])
