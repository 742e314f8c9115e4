"""Dense complex linear algebra for small qutrit systems.

Everything here works on plain numpy arrays: state vectors are flat complex
vectors (a two-qutrit ket |ab> sits at index 3a+b), operators are square
complex matrices. All functions are pure and inputs are never mutated.
"""

from __future__ import annotations

import numpy as np

# Primitive cube root of unity; the outcome value attached to detector k is ALPHA**k.
ALPHA = np.exp(2j * np.pi / 3)

_HERMITIAN_ATOL = 1e-10


class InfeasibleGramError(ValueError):
    """Requested Gram matrix is not positive semidefinite."""


def _check_phases(phases) -> np.ndarray:
    p = np.asarray(phases, dtype=float)
    if p.shape != (3,):
        raise ValueError(f"expected three phases, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError(f"phases must be finite, got {p}")
    return p


def tritter_unitary(phases) -> np.ndarray:
    """3x3 unitary of an unbiased six-port beamsplitter with tunable phases.

    Entry (k, l) is ALPHA**(k*l) * exp(i*phases[l]) / sqrt(3): input port k,
    exit port l, with the l-th phase shift attached to the exit index.  Every
    entry has magnitude 1/sqrt(3), so a particle entering any port leaves
    through each exit port with equal probability.
    """
    p = _check_phases(phases)
    k = np.arange(3).reshape(3, 1)
    l = np.arange(3).reshape(1, 3)
    return np.exp(2j * np.pi / 3 * (k * l)) * np.exp(1j * p[None, :]) / np.sqrt(3)


def standard_settings() -> tuple[tuple[np.ndarray, ...], tuple[np.ndarray, ...]]:
    """The three phase-shift settings per observer used by the protocol.

    Returns (alice, bob), each a tuple of three phase triples.  The third
    setting pair produces strictly correlated outcomes and generates the key;
    the first two pairs feed the Bell test.
    """
    alice = (
        np.array([0.0, 0.0, 0.0]),
        np.array([0.0, np.pi / 3, -np.pi / 3]),
        np.array([np.pi, 0.0, -np.pi]),
    )
    bob = (
        np.array([0.0, np.pi / 6, -np.pi / 6]),
        np.array([0.0, -np.pi / 6, np.pi / 6]),
        np.array([-np.pi, 0.0, np.pi]),
    )
    return alice, bob


def max_entangled_state() -> np.ndarray:
    """(|00> + |11> + |22>) / sqrt(3) as a flat 9-vector."""
    psi = np.zeros(9, dtype=complex)
    psi[[0, 4, 8]] = 1.0 / np.sqrt(3)
    return psi


def chi_state(k: int) -> np.ndarray:
    """Maximally entangled two-qutrit states orthogonal to the source state.

    k=1 carries diagonal phases (1, ALPHA, ALPHA**2); k=2 the conjugate
    pattern (1, ALPHA**2, ALPHA).  Both are orthogonal to max_entangled_state
    and to each other because 1 + ALPHA + ALPHA**2 = 0.
    """
    if k not in (1, 2):
        raise ValueError(f"k must be 1 or 2, got {k!r}")
    vec = np.zeros(9, dtype=complex)
    vec[[0, 4, 8]] = ALPHA ** (k * np.arange(3)) / np.sqrt(3)
    return vec


def tensor(a, b) -> np.ndarray:
    """Tensor (Kronecker) product; composite index = index(a)*dim(b) + index(b)."""
    return np.kron(np.asarray(a), np.asarray(b))


def inv_sqrt(m, tol: float = 1e-12) -> np.ndarray:
    """Inverse square root of a Hermitian PSD matrix, restricted to its support.

    Eigenvalues above tol map to 1/sqrt(value); the rest map to 0, so for
    singular input this is the pseudo-inverse square root.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.allclose(m, m.conj().T, atol=_HERMITIAN_ATOL, rtol=0.0):
        raise ValueError("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(m)
    keep = vals > tol
    inv = np.where(keep, 1.0 / np.sqrt(np.where(keep, vals, 1.0)), 0.0)
    return (vecs * inv) @ vecs.conj().T


def vectors_from_gram(gram) -> list[np.ndarray]:
    """Realize unit-or-not vectors with a prescribed Hermitian PSD Gram matrix.

    Uses the PSD square root, so vector i is column i of gram**(1/2) and every
    pairwise inner product <v_i|v_j> reproduces gram[i, j].  Any realization
    with the same Gram is equivalent for observable quantities; this one
    treats the vectors symmetrically.
    """
    g = np.asarray(gram, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"expected a square Gram matrix, got shape {g.shape}")
    if not np.allclose(g, g.conj().T, atol=_HERMITIAN_ATOL, rtol=0.0):
        raise ValueError("Gram matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(g)
    if vals.min() < -1e-10:
        raise InfeasibleGramError(
            f"Gram matrix has negative eigenvalue {vals.min():.3e}"
        )
    # Zero out rank-cutoff eigenvalues so degenerate Grams (e.g. all-ones)
    # don't leak sqrt(eps)-size noise into the realized vectors.
    cutoff = 1e-12 * max(float(vals.max()), np.finfo(float).tiny)
    vals = np.where(vals > cutoff, vals, 0.0)
    root = (vecs * np.sqrt(vals)) @ vecs.conj().T
    return [root[:, i].copy() for i in range(g.shape[0])]


def trace_out_ancilla(vec, sys_dim: int, anc_dim: int) -> np.ndarray:
    """Reduced density matrix of a pure state after tracing out the trailing factor."""
    m = np.asarray(vec, dtype=complex).reshape(sys_dim, anc_dim)
    return m @ m.conj().T
