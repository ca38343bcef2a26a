"""Correlation quantifiers for two-qubit states, in bits.

Total correlations T, discord D, classical correlations C and
entanglement E are relative-entropy distances to the closest product,
classical and separable states. For Bell-diagonal states all four closest
states are known in closed form; `quantifier_report` uses them and falls
back to the brute-force search of `belldyn.oracle` for states that are
not Bell-diagonal (where E is only witnessed via the partial transpose).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    BELL_RESIDUAL_TOL,
    bell_spectrum_of,
    bell_spectrum_to_density,
    validate_spectrum,
)
from .linalg import (
    PAULI,
    check_density,
    partial_trace,
    relative_entropy,
    tensor,
    von_neumann_entropy,
)
from .oracle import SearchConfig, oracle_closest_classical

#: c-vector of each Bell basis state, rows ordered (1+, 1-, 2+, 2-).
BELL_C_VECTORS = np.array([
    [1.0, 1.0, -1.0],
    [-1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0],
    [-1.0, 1.0, 1.0],
])


def binary_entropy(x) -> float:
    """h(x) = -x log2 x - (1-x) log2(1-x), zero at both endpoints."""
    v = float(x)
    if v < -1e-12 or v > 1.0 + 1e-12:
        raise ValueError(f"binary_entropy argument must be in [0, 1], got {v!r}")
    v = min(max(v, 0.0), 1.0)
    if v == 0.0 or v == 1.0:
        return 0.0
    return float(-v * math.log2(v) - (1.0 - v) * math.log2(1.0 - v))


def correlation_c_vector(rho) -> np.ndarray:
    """(c1, c2, c3) with c_k = Tr[rho (sigma_k x sigma_k)]."""
    a = check_density(rho)
    if a.shape != (4, 4):
        raise ValueError("correlation_c_vector expects a 4x4 state")
    return np.array([float(np.trace(a @ tensor(p, p)).real) for p in PAULI])


def c_vector_of_spectrum(lam) -> np.ndarray:
    """c-vector of the Bell-diagonal state with spectrum lam."""
    return validate_spectrum(lam) @ BELL_C_VECTORS


def spectrum_of_c_vector(c) -> np.ndarray:
    """Inverse of c_vector_of_spectrum: lam_s = (1 + c(s).c) / 4."""
    v = np.asarray(c, dtype=float).reshape(-1)
    if v.size != 3:
        raise ValueError("c-vector needs 3 entries")
    return (1.0 + BELL_C_VECTORS @ v) / 4.0


def closest_product(rho) -> np.ndarray:
    """Tensor product of the two marginals, the relative-entropy-closest
    product state. Equals I/4 for every Bell-diagonal input."""
    a = check_density(rho)
    if a.shape != (4, 4):
        raise ValueError("closest_product expects a 4x4 state")
    return tensor(partial_trace(a, "A"), partial_trace(a, "B"))


def closest_classical_bd(lam) -> np.ndarray:
    """Closest classical state to a Bell-diagonal state.

    Keeps only the dominant correlation direction:
    chi = (I + c_m sigma_m x sigma_m) / 4 with m = argmax_k |c_k|, ties
    broken toward the smallest index (D and C depend only on |c_m|).
    """
    c = c_vector_of_spectrum(lam)
    m = int(np.argmax(np.abs(c)))
    p = PAULI[m]
    return (np.eye(4, dtype=complex) + c[m] * tensor(p, p)) / 4.0


def closest_separable_spectrum(lam) -> np.ndarray:
    """Bell spectrum of the closest separable state.

    Separable inputs (largest coefficient <= 1/2) are returned unchanged.
    Otherwise the dominant coefficient is capped at 1/2 and the remaining
    three are rescaled to lam_j / (2 (1 - lam_max)). For a pure Bell state
    the rescaling is degenerate and the spare half is put on the lowest
    non-dominant slot; the distance does not depend on that choice.
    """
    a = validate_spectrum(lam)
    m = int(np.argmax(a))
    lmax = float(a[m])
    if lmax <= 0.5 + 1e-12:
        return a.copy()
    rest = 1.0 - lmax
    out = np.zeros(4)
    if rest < 1e-15:
        out[m] = 0.5
        out[0 if m != 0 else 1] = 0.5
    else:
        out = a / (2.0 * rest)
        out[m] = 0.5
    return out


def closest_separable_bd(lam) -> np.ndarray:
    """Closest separable state to a Bell-diagonal state, as a matrix."""
    return bell_spectrum_to_density(closest_separable_spectrum(lam))


def negativity(rho) -> float:
    """Sum of |negative eigenvalues| of the partial transpose; a PPT
    entanglement witness valid for any two-qubit state."""
    a = check_density(rho)
    if a.shape != (4, 4):
        raise ValueError("negativity expects a 4x4 state")
    pt = a.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    w = np.linalg.eigvalsh(pt)
    return float(-w[w < 0].sum())


@dataclass(frozen=True)
class CorrelationReport:
    """Correlation quantifiers of a two-qubit state, in bits.

    E and separable_state are None when the input is not Bell-diagonal;
    in that case entanglement is only witnessed by `negativity`.
    """

    T: float
    D: float
    C: float
    E: float | None
    product_state: np.ndarray
    classical_state: np.ndarray
    separable_state: np.ndarray | None
    bell_diagonal: bool
    negativity: float


def quantifier_report(rho, search: SearchConfig | None = None) -> CorrelationReport:
    """Compute T, D, C, E and the closest-state certificates.

    T = S(pi) - S(rho), D = S(chi) - S(rho), C = S(pi_chi) - S(chi) and
    E = S(rho || sigma). Bell-diagonal inputs (Bell-basis residual below
    BELL_RESIDUAL_TOL) use the closed-form closest states; anything else
    gets chi from the brute-force classical search configured by
    `search`, no E value, and the PPT witness.
    """
    a = check_density(rho)
    if a.shape != (4, 4):
        raise ValueError("quantifier_report expects a 4x4 state")
    lam, residual = bell_spectrum_of(a)
    s_rho = von_neumann_entropy(a)
    pi = closest_product(a)
    t = von_neumann_entropy(pi) - s_rho
    neg = negativity(a)

    if residual < BELL_RESIDUAL_TOL:
        lam = np.clip(lam, 0.0, None)
        lam = validate_spectrum(lam / lam.sum())
        chi = closest_classical_bd(lam)
        sig = closest_separable_bd(lam)
        s_chi = von_neumann_entropy(chi)
        d = s_chi - s_rho
        c = von_neumann_entropy(closest_product(chi)) - s_chi
        e = relative_entropy(a, sig)
        return CorrelationReport(t, d, c, e, pi, chi, sig, True, neg)

    found = oracle_closest_classical(a, search if search is not None else SearchConfig())
    chi = found.minimizer
    s_chi = von_neumann_entropy(chi)
    d = s_chi - s_rho
    c = von_neumann_entropy(closest_product(chi)) - s_chi
    return CorrelationReport(t, d, c, None, pi, chi, None, False, neg)
