"""Measure geometry of the unit sphere S^d in R^(d+1).

Polar coordinates are colatitude-first and recursive: a point of S^d is
``(cos t, sin t * y)`` where ``t`` is the colatitude measured from the +e1
axis and ``y`` is a point of S^(d-1).  On S^1 the single angle is the
azimuth in [0, 2*pi).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import betainc, beta as beta_fn, gammaln

UNIT_NORM_TOL = 1e-9


class DomainError(ValueError):
    """An argument lies outside the domain of a geometric operation."""


def _check_dim(d: int, minimum: int = 1) -> int:
    if int(d) != d or d < minimum:
        raise DomainError(f"dimension must be an integer >= {minimum}, got {d!r}")
    return int(d)


def sphere_area(d: int) -> float:
    """Surface area of S^d, ``2 pi^((d+1)/2) / Gamma((d+1)/2)``.

    ``d = 0`` is accepted (the two-point sphere has measure 2) because the
    cap area of S^1 is built from it.
    """
    d = _check_dim(d, minimum=0)
    if d == 0:
        return 2.0
    if d == 1:
        return 2 * math.pi
    if d == 2:
        return 4 * math.pi
    if d == 3:
        return 2 * math.pi**2
    h = (d + 1) / 2
    return 2 * math.exp(h * math.log(math.pi) - gammaln(h))


def sin_power_integral(n: int, theta):
    """Integral of ``sin(t)**n`` over ``[0, theta]`` for ``theta`` in [0, pi].

    Uses the regularized incomplete beta function; the half above pi/2 is
    obtained by reflection so that accuracy is kept near both poles.  Above
    pi/4 the complementary form in ``cos^2`` is used, since ``1 - sin^2``
    loses half the digits next to the equator.
    """
    theta = np.asarray(theta, dtype=float)
    a = (n + 1) / 2
    full = beta_fn(a, 0.5)
    low = np.minimum(theta, math.pi - theta)
    near_pole = low <= math.pi / 4
    part = 0.5 * full * np.where(
        near_pole,
        betainc(a, 0.5, np.sin(low) ** 2),
        1.0 - betainc(0.5, a, np.cos(low) ** 2),
    )
    out = np.where(theta <= math.pi / 2, part, full - part)
    return out if out.ndim else float(out)


def _check_theta(theta) -> np.ndarray:
    t = np.asarray(theta, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t < 0) or np.any(t > math.pi):
        raise DomainError("cap radius must lie in [0, pi]")
    return t


def cap_area(d: int, theta):
    """Area of a spherical cap of angular radius ``theta`` on S^d.

    Closed forms are used for d <= 3, the incomplete beta representation
    otherwise.  Accepts scalars or arrays.
    """
    d = _check_dim(d)
    t = _check_theta(theta)
    if d == 1:
        out = 2 * t
    elif d == 2:
        # 2 pi (1 - cos t), written with sin^2 to avoid cancellation at small t
        out = 4 * math.pi * np.sin(t / 2) ** 2
    elif d == 3:
        out = 2 * math.pi * (t - np.sin(t) * np.cos(t))
    else:
        out = sphere_area(d - 1) * np.asarray(sin_power_integral(d - 1, t))
    out = np.asarray(out, dtype=float)
    return out if out.ndim else float(out)


def cap_colatitude(d: int, area: float, tol: float = 1e-12) -> float:
    """Angular radius of the cap of S^d with the given area.

    Newton's method on ``cap_area`` kept inside a shrinking bisection
    bracket.  The bracket guarantees termination where the derivative
    ``sin^(d-1)`` vanishes near the poles.
    """
    d = _check_dim(d)
    total = sphere_area(d)
    area = float(area)
    slack = 4 * np.finfo(float).eps * total
    if not (-slack <= area <= total + slack):
        raise DomainError(f"cap area {area} outside [0, {total}]")
    if area <= 0:
        return 0.0
    if area >= total:
        return math.pi
    if d == 1:
        return area / 2
    lo, hi = 0.0, math.pi
    # seed: a few bisection steps, then Newton
    for _ in range(4):
        mid = 0.5 * (lo + hi)
        if cap_area(d, mid) < area:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    scale = sphere_area(d - 1)
    eps = np.finfo(float).eps
    best_t, best_err = t, math.inf
    for _ in range(200):
        f = cap_area(d, t) - area
        if abs(f) < best_err:
            best_t, best_err = t, abs(f)
        if f == 0:
            break
        if f < 0:
            lo = t
        else:
            hi = t
        deriv = scale * math.sin(t) ** (d - 1)
        nxt = t - f / deriv if deriv > 0 else math.nan
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if abs(nxt - t) <= 2 * eps * t or hi - lo <= 2 * eps * hi:
            break
        t = nxt
    if best_err > tol * total:
        raise ArithmeticError(f"cap_colatitude did not converge: residual {best_err}")
    return best_t


def to_cartesian(angles) -> np.ndarray:
    """Map polar angles of shape ``(..., d)`` to unit vectors ``(..., d+1)``."""
    a = np.asarray(angles, dtype=float)
    d = a.shape[-1]
    _check_dim(d)
    out = np.empty(a.shape[:-1] + (d + 1,))
    scale = np.ones(a.shape[:-1])
    for k in range(d - 1):
        out[..., k] = scale * np.cos(a[..., k])
        scale = scale * np.sin(a[..., k])
    out[..., d - 1] = scale * np.cos(a[..., d - 1])
    out[..., d] = scale * np.sin(a[..., d - 1])
    return out


def check_unit(x, tol: float = UNIT_NORM_TOL) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] < 2:
        raise DomainError("points need at least two coordinates")
    norms = np.linalg.norm(x, axis=-1)
    if np.any(~np.isfinite(norms)) or np.any(np.abs(norms - 1) > tol):
        raise DomainError("points must be unit vectors")
    return x


def from_cartesian(x) -> np.ndarray:
    """Inverse of :func:`to_cartesian`.

    Where the tail of the vector vanishes (a pole at some level) the
    remaining angles are set to 0.  Azimuths are returned in [0, 2*pi).
    """
    x = check_unit(x)
    d = x.shape[-1] - 1
    out = np.empty(x.shape[:-1] + (d,))
    # tail[k] = norm of x[k:]
    sq = x[..., ::-1] ** 2
    tail = np.sqrt(np.cumsum(sq, axis=-1))[..., ::-1]
    for k in range(d - 1):
        out[..., k] = np.arctan2(tail[..., k + 1], x[..., k])
    phi = np.arctan2(x[..., d], x[..., d - 1])
    phi = np.where(phi < 0, phi + 2 * math.pi, phi)
    out[..., d - 1] = np.where(phi >= 2 * math.pi, 0.0, phi)
    return out


def chord_to_angle(chord):
    """Geodesic angle subtended by a chord of the given Euclidean length."""
    c = np.clip(np.asarray(chord, dtype=float) / 2, 0.0, 1.0)
    out = 2 * np.arcsin(c)
    return out if out.ndim else float(out)


def angle_to_chord(angle):
    out = 2 * np.sin(np.asarray(angle, dtype=float) / 2)
    return out if out.ndim else float(out)
