"""Scalar root finding, line search, finite differences and Perron roots."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import ConvergenceError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def bisect_decreasing(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    rtol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Root of a decreasing function on ``[lo, hi]`` with ``f(lo) >= 0 >= f(hi)``.

    Stops once ``|f(x)| <= rtol * max(1, |x|)`` or the bracket has collapsed
    to a few ulps.
    """
    flo = f(lo)
    if abs(flo) <= rtol * max(1.0, abs(lo)):
        return lo
    fhi = f(hi)
    if abs(fhi) <= rtol * max(1.0, abs(hi)):
        return hi
    if flo < 0 or fhi > 0:
        raise ConvergenceError(f"bracket [{lo}, {hi}] does not straddle a root ({flo}, {fhi})")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) <= rtol * max(1.0, abs(mid)):
            return mid
        if fm > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4.0 * np.finfo(float).eps * max(1.0, abs(hi)):
            return 0.5 * (lo + hi)
    raise ConvergenceError(f"bisection did not converge in {max_iter} iterations")


def expand_upper(f: Callable[[float], float], start: float, max_doublings: int = 200) -> float:
    """Double ``start`` until the decreasing function ``f`` goes negative."""
    hi = max(start, 1.0)
    for _ in range(max_doublings):
        if f(hi) < 0:
            return hi
        hi *= 2.0
    raise ConvergenceError("could not bracket the root from above")


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10) -> float:
    """Maximiser of a unimodal ``f`` on ``[lo, hi]`` to within ``tol``."""
    a, b = lo, hi
    h = b - a
    if h <= tol:
        return 0.5 * (a + b)
    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(steps):
        if fc > fd:
            b, d, fd = d, c, fc
            h *= INV_PHI
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h *= INV_PHI
            d = a + INV_PHI * h
            fd = f(d)
    return c if fc > fd else d


def central_difference(f: Callable[[float], float | np.ndarray], x: float, h: float = 1e-5):
    """Central difference at ``x``, with Richardson extrapolation as a fallback.

    The fallback kicks in when the estimates at steps ``10h`` and ``h`` differ
    by more than 1e-3 relative.
    """
    def d(step):
        return (np.asarray(f(x + step), dtype=float) - np.asarray(f(x - step), dtype=float)) / (2.0 * step)

    fine = d(h)
    coarse = d(10.0 * h)
    scale = max(float(np.max(np.abs(fine))), 1e-300)
    if float(np.max(np.abs(fine - coarse))) / scale > 1e-3:
        half = d(0.5 * h)
        fine = (4.0 * half - fine) / 3.0
    return fine if np.ndim(fine) else float(fine)


def spectral_radius(a: np.ndarray, tol: float = 1e-12, max_iter: int = 20_000) -> float:
    """Perron root of a nonnegative square matrix.

    Power iteration on ``A + tau*I`` (the shift removes the periodicity of
    bipartite patterns without moving the Perron root off the top). Symmetric
    inputs use the Rayleigh quotient; otherwise the max Collatz-Wielandt ratio,
    which decreases monotonically to the root. Falls back to a dense
    eigensolver if the iteration stalls.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if n == 0 or not np.any(a):
        return 0.0
    if np.any(a < 0):
        raise ValueError("spectral_radius expects a nonnegative matrix")
    symmetric = np.allclose(a, a.T, rtol=0, atol=1e-15)
    scale = float(np.max(np.sum(a, axis=1)))
    tau = 0.5 * scale
    b = a + tau * np.eye(n)
    x = np.full(n, 1.0 / math.sqrt(n))
    prev = math.inf
    for _ in range(max_iter):
        y = b @ x
        if symmetric:
            lam = float(x @ y)
            resid = float(np.linalg.norm(y - lam * x))
            x = y / np.linalg.norm(y)
            if resid <= tol * max(scale, 1.0):
                return lam - tau
        else:
            lam = float(np.max(y / x))
            x = y / np.linalg.norm(y)
            if abs(lam - prev) <= tol * max(abs(lam), 1.0):
                return lam - tau
            prev = lam
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def spectral_radius_sigma_g(shares: np.ndarray, weights: np.ndarray, tol: float = 1e-12) -> float:
    """rho(diag(shares) @ weights) via the similar symmetric matrix D^1/2 G D^1/2."""
    r = np.sqrt(np.asarray(shares, dtype=float))
    return spectral_radius(r[:, None] * weights * r[None, :], tol=tol)
