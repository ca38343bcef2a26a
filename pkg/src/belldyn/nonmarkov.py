"""Non-Markovianity diagnostics and trajectory-feature detectors.

The memory quantifier accumulates changes of the entanglement between the
evolving qubit and a noise-isolated ancilla prepared with it in a
maximally entangled state. Two accumulation conventions are provided:

* ``increase_counting`` (default): each grid step adds 2*max(dE, 0), so
  only entanglement revivals count and purely decaying segments give 0;
* ``literal``: each step adds |dE| - dE, the integral-minus-variation
  form taken verbatim, which instead accumulates during decay.

Both are non-decreasing and start at zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import bell_spectrum_to_density, evolve_bell_spectrum, validate_spectrum
from .linalg import trace_distance

CONVENTIONS = ("increase_counting", "literal")


def _h2(p):
    q = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where((q > 0) & (q < 1), q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
        b = np.where((q > 0) & (q < 1), (1 - q) * np.log2(np.where(q < 1, 1 - q, 1.0)), 0.0)
    return -(a + b)


def ancilla_entanglement(tau):
    """Entanglement E(tau) of the ancilla protocol, in bits.

    The evolved ancilla pair is cos^2(tau) |2+><2+| + sin^2(tau) |1-><1-|,
    so E = 1 - h(max(cos^2 tau, sin^2 tau)) when the max exceeds 1/2 and 0
    otherwise. Accepts scalars or arrays.
    """
    t = np.asarray(tau, dtype=float)
    if np.any(t < 0):
        raise ValueError("tau must be non-negative")
    p = np.maximum(np.cos(t) ** 2, np.sin(t) ** 2)
    e = np.where(p > 0.5, 1.0 - _h2(p), 0.0)
    return float(e) if np.isscalar(tau) or np.ndim(tau) == 0 else e


@dataclass(frozen=True)
class NonMarkovTrace:
    """Ancilla entanglement and accumulated non-Markovianity on a tau grid."""

    tau_grid: np.ndarray
    e_anc: np.ndarray
    i_e: np.ndarray
    convention: str


def nonmarkovianity_measure(tau_grid, convention: str = "increase_counting") -> NonMarkovTrace:
    """Accumulate the non-Markovianity quantifier along an ascending grid
    starting at tau = 0. See the module docstring for the two conventions."""
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    g = np.asarray(tau_grid, dtype=float).reshape(-1)
    if g.size < 2:
        raise ValueError("tau grid needs at least 2 points")
    if abs(g[0]) > 1e-12:
        raise ValueError("tau grid must start at 0")
    if np.any(np.diff(g) <= 0):
        raise ValueError("tau grid must be strictly ascending")
    e = ancilla_entanglement(g)
    d = np.diff(e)
    if convention == "increase_counting":
        inc = 2.0 * np.clip(d, 0.0, None)
    else:
        inc = np.abs(d) - d
    i_e = np.concatenate([[0.0], np.cumsum(inc)])
    return NonMarkovTrace(g.copy(), e, i_e, convention)


def composition_violation(lam0, tau1, tau2) -> float:
    """Trace distance between direct evolution to tau2 and evolution
    restarted from the tau1 state; nonzero values witness failure of the
    two-step composition law."""
    t1, t2 = float(tau1), float(tau2)
    if t1 < 0 or t2 < t1:
        raise ValueError("need 0 <= tau1 <= tau2")
    lam = validate_spectrum(lam0)
    direct = evolve_bell_spectrum(lam, t2)
    restarted = evolve_bell_spectrum(evolve_bell_spectrum(lam, t1), t2 - t1)
    return trace_distance(
        bell_spectrum_to_density(direct), bell_spectrum_to_density(restarted)
    )


def _check_uniform(grid):
    g = np.asarray(grid, dtype=float).reshape(-1)
    if g.size < 2:
        raise ValueError("grid needs at least 2 points")
    steps = np.diff(g)
    if np.any(steps <= 0):
        raise ValueError("grid must be strictly ascending")
    if np.max(np.abs(steps - steps[0])) > 1e-9 * steps[0]:
        raise ValueError("grid must be uniform")
    return g


def detect_frozen_intervals(tau_grid, values, tol: float = 1e-6):
    """Maximal intervals where the series stays within tol of its interval
    mean at every grid point. Intervals shorter than 3 grid points are
    discarded. Returns a list of (start_tau, end_tau) pairs."""
    g = _check_uniform(tau_grid)
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.size != g.size:
        raise ValueError("values and tau grid must have equal length")
    out = []
    i = 0
    n = v.size
    while i < n:
        total = v[i]
        lo = hi = v[i]
        j = i + 1
        while j < n:
            total_new = total + v[j]
            lo_new = min(lo, v[j])
            hi_new = max(hi, v[j])
            mean = total_new / (j - i + 1)
            if hi_new - mean < tol and mean - lo_new < tol:
                total, lo, hi = total_new, lo_new, hi_new
                j += 1
            else:
                break
        if j - i >= 3:
            out.append((float(g[i]), float(g[j - 1])))
        i = max(j, i + 1)
    return out


def _spectrum_at(lam0, tau):
    f = np.sin(2.0 * tau) ** 2 / 2.0
    return (1.0 - f) * lam0 + f * lam0[::-1]


def detect_switching_times(lam0, tau_max, n_points: int = 2001):
    """Times where the Bell label of the second-largest coefficient
    changes, bracketed on a grid and refined by bisection to 1e-9.
    Permanent ties (e.g. the maximally mixed spectrum) yield no switches."""
    lam = validate_spectrum(lam0)
    if tau_max <= 0:
        raise ValueError("tau_max must be positive")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    grid = np.linspace(0.0, float(tau_max), n_points)
    f = np.sin(2.0 * grid) ** 2 / 2.0
    spectra = (1.0 - f)[:, None] * lam[None, :] + f[:, None] * lam[::-1][None, :]
    second = np.argsort(-spectra, axis=1, kind="stable")[:, 1]

    times = []
    for k in np.nonzero(np.diff(second))[0]:
        a, b = int(second[k]), int(second[k + 1])
        lo, hi = float(grid[k]), float(grid[k + 1])

        def gap(t):
            s = _spectrum_at(lam, t)
            return s[a] - s[b]

        glo, ghi = gap(lo), gap(hi)
        if glo == ghi or glo * ghi > 0:
            times.append(0.5 * (lo + hi))
            continue
        while hi - lo > 1e-9:
            mid = 0.5 * (lo + hi)
            if (gap(mid) > 0) == (glo > 0):
                lo = mid
            else:
                hi = mid
        times.append(0.5 * (lo + hi))

    deduped = []
    for t in times:
        if not deduped or t - deduped[-1] > 1e-9:
            deduped.append(t)
    return deduped


def detect_death_revival(tau_grid, e_values, threshold: float = 1e-12, refine=None):
    """Maximal intervals where the entanglement series is <= threshold.

    If `refine` is a callable E(tau), interior boundaries are sharpened by
    bisection between the bracketing grid points. Returns a list of
    (start_tau, end_tau) pairs."""
    g = _check_uniform(tau_grid)
    e = np.asarray(e_values, dtype=float).reshape(-1)
    if e.size != g.size:
        raise ValueError("values and tau grid must have equal length")
    dead = e <= threshold
    out = []
    i = 0
    n = e.size
    while i < n:
        if not dead[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and dead[j + 1]:
            j += 1
        start, end = float(g[i]), float(g[j])
        if refine is not None:
            if i > 0:
                start = _bisect_threshold(refine, float(g[i - 1]), start, threshold, False)
            if j + 1 < n:
                end = _bisect_threshold(refine, end, float(g[j + 1]), threshold, True)
        out.append((start, end))
        i = j + 1
    return out


def _bisect_threshold(fn, lo, hi, threshold, rising):
    # rising=True: fn <= threshold at lo and > threshold at hi.
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        below = fn(mid) <= threshold
        if below == rising:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    return 0.5 * (lo + hi)
