"""Joint outcome statistics, the complex correlation function, and the Bell quantity."""

from __future__ import annotations

import numpy as np

from .quantum import ALPHA, tensor, tritter_unitary

# Largest value the Bell quantity can take under local realism.
LOCAL_REALISM_BOUND = np.sqrt(3.0)
# Value reached by the source state with the standard settings.
QUANTUM_BELL_VALUE = 2.0 * (2.0 + np.sqrt(3.0)) / 3.0
# Visibility below which the Bell inequality is no longer violated.
CRITICAL_VISIBILITY = (6.0 * np.sqrt(3.0) - 9.0) / 2.0

_OUTCOME_PHASE = ALPHA ** np.add.outer(np.arange(3), np.arange(3))


def _checked_table(p: np.ndarray) -> np.ndarray:
    # Clamp floating-point dust; anything more negative is a construction bug.
    if p.min() < -1e-12:
        raise ValueError(f"negative probability {p.min():.3e}")
    total = p.sum()
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"probabilities sum to {total!r}, not 1")
    return np.clip(p, 0.0, None)


def joint_probs(state, phases_a, phases_b) -> np.ndarray:
    """Outcome probabilities p[a, b] after both tritters act on a pure state."""
    psi = np.asarray(state, dtype=complex)
    if psi.shape != (9,):
        raise ValueError(f"state must be a 9-vector, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"state is not normalized (norm {norm})")
    amp = tensor(tritter_unitary(phases_a), tritter_unitary(phases_b)) @ psi
    return _checked_table(np.abs(amp.reshape(3, 3)) ** 2)


def joint_probs_rho(rho, phases_a, phases_b) -> np.ndarray:
    """Same table as joint_probs for a 9x9 two-qutrit density matrix."""
    r = np.asarray(rho, dtype=complex)
    if r.shape != (9, 9):
        raise ValueError(f"density matrix must be 9x9, got shape {r.shape}")
    u = tensor(tritter_unitary(phases_a), tritter_unitary(phases_b))
    p = np.einsum("ij,jk,ik->i", u, r, u.conj()).real
    return _checked_table(p.reshape(3, 3))


def correlation_q(table) -> complex:
    """Complex correlation: sum of ALPHA**(a+b) * p[a, b] over the table."""
    p = np.asarray(table, dtype=float)
    return complex(np.sum(_OUTCOME_PHASE * p))


def correlation_q_closed(phases_a, phases_b) -> complex:
    """Correlation of the source state, straight from the phase settings.

    Equals the mean of exp(i * (da + db)) over the three cyclic phase
    differences d = (phi_0 - phi_1, phi_1 - phi_2, phi_2 - phi_0) of each
    observer, which is what the probability-table path yields on the
    maximally entangled state.
    """
    pa = np.asarray(phases_a, dtype=float)
    pb = np.asarray(phases_b, dtype=float)
    d = (pa - np.roll(pa, -1)) + (pb - np.roll(pb, -1))
    return complex(np.mean(np.exp(1j * d)))


def bell_s(q11: complex, q12: complex, q21: complex, q22: complex) -> float:
    """Bell quantity Im(-ALPHA**2*q11 + ALPHA*q12 + ALPHA**2*q21 - ALPHA**2*q22)."""
    a2 = ALPHA**2
    return float((-a2 * q11 + ALPHA * q12 + a2 * q21 - a2 * q22).imag)


def thresholds() -> tuple[float, float, float]:
    """(local-realism bound, quantum Bell value, critical visibility).

    The critical visibility is exactly bound/value: attenuating all
    correlations by it lands the Bell quantity on the local-realism line.
    """
    return (LOCAL_REALISM_BOUND, QUANTUM_BELL_VALUE, CRITICAL_VISIBILITY)
