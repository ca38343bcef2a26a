"""Dense complex matrix primitives for 2x2 and 4x4 Hermitian operators.

All entropic quantities are in bits (log base 2). Functions are pure,
operate on plain numpy arrays and validate their inputs against the
tolerances below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
EIGENVALUE_TOL = 1e-10
SUPPORT_CUTOFF = 1e-12
SUPPORT_OVERLAP_TOL = 1e-8

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)


def _as_square(m, name="matrix"):
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in (2, 4):
        raise ValueError(f"{name} must be 2x2 or 4x4, got shape {a.shape}")
    return a


def check_hermitian(m, tol=HERMITICITY_TOL, name="matrix"):
    """Validate Hermiticity within tol and return the array as complex."""
    a = _as_square(m, name)
    dev = float(np.max(np.abs(a - a.conj().T)))
    if dev > tol:
        raise ValueError(f"{name} is not Hermitian (max deviation {dev:.3e})")
    return a


def check_density(rho, name="state"):
    """Validate a density matrix: Hermitian, unit trace, positive semidefinite."""
    a = check_hermitian(rho, name=name)
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"{name} trace is {tr!r}, expected 1")
    w = np.linalg.eigvalsh(a)
    if float(w.min()) < -EIGENVALUE_TOL:
        raise ValueError(f"{name} has negative eigenvalue {w.min():.3e}")
    return a


def _xlog2(p):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log2(p[pos])
    return out


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition with eigenvalues sorted descending.

    `vectors[:, k]` is the orthonormal eigenvector for `values[k]`.
    """

    values: np.ndarray
    vectors: np.ndarray


def hermitian_eig(m) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""
    a = check_hermitian(m)
    w, v = np.linalg.eigh(a)
    return Spectrum(values=w[::-1].copy(), vectors=v[:, ::-1].copy())


def von_neumann_entropy(rho) -> float:
    """S(rho) = -sum_k w_k log2 w_k in bits, with 0 log 0 := 0.

    Eigenvalues in [-1e-8, 0) are clamped to zero; anything more negative
    is rejected.
    """
    a = check_hermitian(rho, name="state")
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"state trace is {tr!r}, expected 1")
    w = np.linalg.eigvalsh(a)
    if float(w.min()) < -1e-8:
        raise ValueError(f"state has negative eigenvalue {w.min():.3e}")
    w = np.clip(w, 0.0, None)
    return float(-np.sum(_xlog2(w)))


def relative_entropy(rho, sigma) -> float:
    """S(rho || sigma) = -Tr(rho log2 sigma) - S(rho), in bits.

    Returns +inf when the support of rho is not contained in the support
    of sigma (sigma eigenvalue below the support cutoff carrying more
    than SUPPORT_OVERLAP_TOL of rho's weight).
    """
    r = check_density(rho, name="rho")
    s = check_density(sigma, name="sigma")
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {s.shape}")
    w, v = np.linalg.eigh(s)
    overlap = np.clip(np.real(np.einsum("ik,ij,jk->k", v.conj(), r, v)), 0.0, None)
    small = w < SUPPORT_CUTOFF
    if np.any(overlap[small] > SUPPORT_OVERLAP_TOL):
        return math.inf
    cross = -float(np.sum(overlap[~small] * np.log2(w[~small])))
    val = cross - von_neumann_entropy(r)
    if -1e-9 < val < 0.0:
        return 0.0
    return val


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two 2x2 operators, qubit-A-major ordering |ab>."""
    x = np.asarray(a, dtype=complex)
    y = np.asarray(b, dtype=complex)
    if x.shape != (2, 2) or y.shape != (2, 2):
        raise ValueError(f"tensor expects two 2x2 factors, got {x.shape} and {y.shape}")
    return np.kron(x, y)


def partial_trace(rho, keep) -> np.ndarray:
    """Reduce a two-qubit state to the marginal of subsystem 'A' or 'B'."""
    a = check_density(rho)
    if a.shape != (4, 4):
        raise ValueError("partial_trace expects a 4x4 state")
    t = a.reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("abcb->ac", t)
    if keep == "B":
        return np.einsum("abad->bd", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def local_basis(theta, phi) -> np.ndarray:
    """Orthonormal single-qubit basis from Bloch angles, as columns.

    Column 0 points along (sin t cos p, sin t sin p, cos t); column 1 is
    its orthogonal partner.
    """
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    e = complex(math.cos(phi), math.sin(phi))
    return np.array([[c, -s], [e * s, e * c]], dtype=complex)


def product_basis(angles) -> np.ndarray:
    """4x4 matrix whose columns are the product basis |a_i b_j> from
    local angles (thetaA, phiA, thetaB, phiB)."""
    ta, pa, tb, pb = (float(x) for x in angles)
    return np.kron(local_basis(ta, pa), local_basis(tb, pb))


def dephase_in_basis(rho, angles) -> np.ndarray:
    """Zero all off-diagonal elements of rho in the given product basis."""
    a = check_density(rho)
    if a.shape != (4, 4):
        raise ValueError("dephase_in_basis expects a 4x4 state")
    b = product_basis(angles)
    p = np.clip(np.real(np.einsum("ik,ij,jk->k", b.conj(), a, b)), 0.0, None)
    return (b * p) @ b.conj().T


def trace_distance(rho, sigma) -> float:
    """(1/2) sum of |eigenvalues| of rho - sigma."""
    r = _as_square(rho, "rho")
    s = _as_square(sigma, "sigma")
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {s.shape}")
    w = np.linalg.eigvalsh(r - s)
    return float(0.5 * np.sum(np.abs(w)))
