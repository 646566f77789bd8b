"""Laguerre functions of order 0, Bessel J0 and sinc."""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

J0_SWITCH = 12.0


def laguerre(l: int, u):
    """Laguerre function e^{-u/2} L_l(u); accepts scalars or arrays.

    L_l comes from the three-term recurrence
    (n+1) L_{n+1} = (2n+1-u) L_n - n L_{n-1}, never from Rodrigues' formula.
    """
    if int(l) != l or l < 0 or l > 200:
        raise ValueError(f"order must be an integer in [0, 200], got {l}")
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0):
        raise ValueError("laguerre needs u >= 0")
    prev = np.zeros_like(u_arr)
    cur = np.ones_like(u_arr)
    for n in range(int(l)):
        prev, cur = cur, ((2 * n + 1 - u_arr) * cur - n * prev) / (n + 1)
    out = np.exp(-u_arr / 2) * cur
    return float(out) if out.ndim == 0 else out


def _j0_series_exact(u: float) -> float:
    # the float is a dyadic rational, so every partial sum is exact
    q = -(Fraction(u) ** 2) / 4
    term = Fraction(1)
    total = Fraction(1)
    k = 0
    while True:
        k += 1
        term = term * q / (k * k)
        total += term
        if abs(term) < Fraction(1, 10**17):
            return float(total)


def _j0_series(u: np.ndarray) -> np.ndarray:
    q = -(u * u) / 4
    term = np.ones_like(u)
    total = np.ones_like(u)
    k = 0
    while True:
        k += 1
        term = term * q / (k * k)
        total = total + term
        if np.all(np.abs(term) < 1e-17):
            return total


def _j0_asymptotic(u: np.ndarray) -> np.ndarray:
    """Hankel expansion sqrt(2/(pi u)) (P cos w - Q sin w), w = u - pi/4.

    Summed up to the smallest term (optimal truncation), per argument.
    """
    u = np.asarray(u, dtype=float)
    P = np.zeros_like(u)
    Q = np.zeros_like(u)
    a = np.ones_like(u)
    last = np.full_like(u, np.inf)
    live = np.ones(u.shape, dtype=bool)
    for k in range(60):
        if k:
            a = a * (-((2 * k - 1) ** 2)) / (k * 8 * u)
        mag = np.abs(a)
        live &= mag < last
        if not live.any():
            break
        last = np.where(live, mag, last)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            P = P + np.where(live, sign * a, 0.0)
        else:
            Q = Q + np.where(live, sign * a, 0.0)
    w = u - math.pi / 4
    return np.sqrt(2 / (math.pi * u)) * (P * np.cos(w) - Q * np.sin(w))


def bessel_j0(u):
    """Bessel function of the first kind of order 0.

    Power series for |u| <= 12 and the Hankel asymptotic expansion beyond.
    Scalars take the series in exact rational arithmetic; arrays use float
    arithmetic (absolute error a few 1e-13 near the switch point).
    """
    arr = np.abs(np.asarray(u, dtype=float))
    if np.any(arr >= 1e6):
        raise ValueError("bessel_j0 supports |u| < 1e6")
    if arr.ndim == 0:
        v = float(arr)
        if v <= J0_SWITCH:
            return _j0_series_exact(v)
        return float(_j0_asymptotic(np.array([v]))[0])
    out = np.empty_like(arr)
    small = arr <= J0_SWITCH
    if small.any():
        out[small] = _j0_series(arr[small])
    if (~small).any():
        out[~small] = _j0_asymptotic(arr[~small])
    return out


def j0_series(u: float) -> float:
    """Series branch alone (exposed for the branch cross-check)."""
    return _j0_series_exact(abs(float(u)))


def j0_asymptotic(u: float) -> float:
    """Asymptotic branch alone (exposed for the branch cross-check)."""
    return float(_j0_asymptotic(np.array([abs(float(u))]))[0])


def sinc(u):
    """sin(u)/u with the removable singularity filled in by Taylor series."""
    arr = np.asarray(u, dtype=float)
    small = np.abs(arr) < 1e-4
    safe = np.where(small, 1.0, arr)
    u2 = arr * arr
    out = np.where(small, 1 - u2 / 6 + u2 * u2 / 120, np.sin(safe) / safe)
    return float(out) if out.ndim == 0 else out
