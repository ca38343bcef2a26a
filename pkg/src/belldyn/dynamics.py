"""Random-external-field channels for one and two qubits.

Each local field has fixed amplitude and a phase that is 0 or pi with
probability 1/2, so the channel is an equal-weight mixture of unitary
branches. The dynamics depends on the coupling g and time t only through
the dimensionless combination tau = g*t.

Basis conventions: the single-qubit computational ordering is {|0>, |1>}
and the two-qubit ordering is |00>, |01>, |10>, |11> (qubit A major).
`branch_unitary` reports the branch evolution in the {|1>, |0>} ordering
(the form in which it is usually quoted); the channels conjugate by the
basis swap once, so every state passed in or out of this module uses the
computational ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import check_density, tensor

BRANCH_PHASES = (0.0, math.pi)

#: Bell basis columns in the order |1+>, |1->, |2+>, |2->, where
#: |1±> = (|01> ± |10>)/sqrt(2) and |2±> = (|00> ± |11>)/sqrt(2).
_S = 1.0 / math.sqrt(2.0)
BELL_VECTORS = np.array([
    [0, 0, _S, _S],
    [_S, _S, 0, 0],
    [_S, -_S, 0, 0],
    [0, 0, _S, -_S],
], dtype=complex)

BELL_LABELS = ("1+", "1-", "2+", "2-")

#: Partner of each Bell label under the channel: (1+,2-) and (1-,2+) mix.
#: In the fixed label order this is exactly index reversal.
BELL_PARTNER = (3, 2, 1, 0)

BELL_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class FieldChannel:
    """Parameters of the random-external-fields channel.

    The qubit frequency omega is recorded for bookkeeping only: in the
    rotating frame at resonance it drops out of the dynamics, which
    depends on g*t alone.
    """

    g: float = 1.0
    omega: float = 0.0
    phases: tuple = BRANCH_PHASES
    probabilities: tuple = (0.5, 0.5)

    def __post_init__(self):
        if self.g <= 0:
            raise ValueError("coupling g must be positive")
        if len(self.phases) != len(self.probabilities):
            raise ValueError("phases and probabilities must have equal length")
        if abs(sum(self.probabilities) - 1.0) > 1e-12:
            raise ValueError("branch probabilities must sum to 1")
        for p in self.phases:
            if not (abs(p) < 1e-12 or abs(p - math.pi) < 1e-12):
                raise ValueError("branch phases are fixed to {0, pi}")

    def tau(self, t: float) -> float:
        """Dimensionless time g*t for an absolute time t."""
        return self.g * t


def validate_spectrum(lam) -> np.ndarray:
    """Validate a Bell-basis probability vector (lam_1+, lam_1-, lam_2+, lam_2-)."""
    a = np.asarray(lam, dtype=float).reshape(-1)
    if a.size != 4:
        raise ValueError(f"Bell spectrum needs 4 entries, got {a.size}")
    if float(a.min()) < -1e-12:
        raise ValueError(f"Bell spectrum has negative entry {a.min():.3e}")
    if abs(float(a.sum()) - 1.0) > 1e-12:
        raise ValueError(f"Bell spectrum sums to {a.sum()!r}, expected 1")
    return np.clip(a, 0.0, None)


def mixing_fraction(tau) -> float:
    """Branch mixing fraction f = sin^2(2 tau) / 2, in [0, 1/2]."""
    t = float(tau)
    if t < 0:
        raise ValueError("tau must be non-negative")
    return math.sin(2.0 * t) ** 2 / 2.0


def _phase_sign(phase) -> float:
    p = float(phase)
    if abs(p) < 1e-12:
        return 1.0
    if abs(p - math.pi) < 1e-12:
        return -1.0
    raise ValueError(f"branch phase must be 0 or pi, got {p!r}")


def branch_unitary(phase, tau) -> np.ndarray:
    """Branch time-evolution operator in the {|1>, |0>} ordering:

        [[cos tau, -e^{-i phase} sin tau],
         [e^{i phase} sin tau, cos tau]]

    Only the two model phases 0 and pi are accepted.
    """
    e = _phase_sign(phase)
    c, s = math.cos(float(tau)), math.sin(float(tau))
    return np.array([[c, -e * s], [e * s, c]], dtype=complex)


def _branch_unitary_comp(phase, tau) -> np.ndarray:
    # Same operator re-expressed in the computational {|0>, |1>} ordering
    # (conjugation by the basis swap).
    e = _phase_sign(phase)
    c, s = math.cos(float(tau)), math.sin(float(tau))
    return np.array([[c, e * s], [-e * s, c]], dtype=complex)


def single_qubit_map(rho, tau) -> np.ndarray:
    """Equal-weight average of the two branch evolutions of a qubit state."""
    a = check_density(rho)
    if a.shape != (2, 2):
        raise ValueError("single_qubit_map expects a 2x2 state")
    out = np.zeros((2, 2), dtype=complex)
    for p in BRANCH_PHASES:
        u = _branch_unitary_comp(p, tau)
        out += u @ a @ u.conj().T
    return out / 2.0


def two_qubit_map(rho, tau) -> np.ndarray:
    """Four-branch average (1/4) sum_ij (U_i x U_j) rho (U_i x U_j)^dag."""
    a = check_density(rho)
    if a.shape != (4, 4):
        raise ValueError("two_qubit_map expects a 4x4 state")
    out = np.zeros((4, 4), dtype=complex)
    for pa in BRANCH_PHASES:
        ua = _branch_unitary_comp(pa, tau)
        for pb in BRANCH_PHASES:
            w = tensor(ua, _branch_unitary_comp(pb, tau))
            out += w @ a @ w.conj().T
    return out / 4.0


def ancilla_evolve(rho, tau) -> np.ndarray:
    """Evolve only qubit B of a two-qubit state, qubit A acting as a
    noise-isolated ancilla: (1/2) sum_i (I x U_i) rho (I x U_i)^dag."""
    a = check_density(rho)
    if a.shape != (4, 4):
        raise ValueError("ancilla_evolve expects a 4x4 state")
    eye = np.eye(2, dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    for p in BRANCH_PHASES:
        w = tensor(eye, _branch_unitary_comp(p, tau))
        out += w @ a @ w.conj().T
    return out / 2.0


def evolve_bell_spectrum(lam, tau) -> np.ndarray:
    """Closed-form evolution of a Bell-diagonal spectrum:

        lam_i(tau) = (1 - f) lam_i(0) + f lam_partner(i)(0)

    with f = mixing_fraction(tau) and partner pairs (1+,2-), (1-,2+).
    """
    a = validate_spectrum(lam)
    f = mixing_fraction(tau)
    return (1.0 - f) * a + f * a[::-1]


def bell_spectrum_to_density(lam) -> np.ndarray:
    """Assemble the Bell-diagonal density matrix with the given spectrum."""
    a = validate_spectrum(lam)
    return (BELL_VECTORS * a) @ BELL_VECTORS.conj().T


def bell_spectrum_of(rho):
    """Bell-basis diagonal of a two-qubit state and the off-diagonal residual.

    Returns (lam, residual) where residual is the max-abs off-diagonal
    element in the Bell basis. A residual above BELL_RESIDUAL_TOL means
    the state is not Bell-diagonal; the diagonal is still returned, never
    silently truncated into a state.
    """
    a = check_density(rho)
    if a.shape != (4, 4):
        raise ValueError("bell_spectrum_of expects a 4x4 state")
    m = BELL_VECTORS.conj().T @ a @ BELL_VECTORS
    lam = np.real(np.diag(m)).copy()
    off = m - np.diag(np.diag(m))
    residual = float(np.max(np.abs(off)))
    return lam, residual
