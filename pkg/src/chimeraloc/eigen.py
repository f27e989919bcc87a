"""Full eigendecomposition of dense real symmetric Hamiltonians.

The solver contract is: ascending eigenvalues, orthonormal eigenvectors,
deterministic output for identical input, residual and trace accuracy as
checked by :func:`validate`.  We delegate to LAPACK's divide-and-conquer
driver (via numpy), which tridiagonalizes and back-transforms; no gauge is
imposed inside degenerate subspaces, so downstream quantities must be
gauge-invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .model import DenseHamiltonian


class EigensolverError(RuntimeError):
    """Eigensolver failed to converge; carries caller-supplied context."""

    def __init__(self, message: str, context=None):
        super().__init__(message if context is None else f"{message} (context: {context})")
        self.context = context


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray   # ascending, length D
    vectors: np.ndarray  # D x D, column n belongs to values[n]
    source_dim: int


def diagonalize(h: DenseHamiltonian, context=None) -> EigenDecomposition:
    """Full spectrum and eigenvectors of a dense symmetric Hamiltonian.

    `context` (e.g. a disorder seed) is attached to the non-convergence
    diagnostic so failed realizations can be replayed.
    """
    if not np.all(np.isfinite(h.matrix)):
        raise EigensolverError("matrix has non-finite entries", context)
    try:
        values, vectors = np.linalg.eigh(h.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver did not converge: {exc}", context) from exc
    return EigenDecomposition(values=values, vectors=vectors, source_dim=h.dim)


def eigenvalues_only(h: DenseHamiltonian, context=None) -> np.ndarray:
    """Ascending spectrum without vectors (cheaper; used for level statistics)."""
    if not np.all(np.isfinite(h.matrix)):
        raise EigensolverError("matrix has non-finite entries", context)
    try:
        return np.linalg.eigvalsh(h.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver did not converge: {exc}", context) from exc


def middle_index(dim: int) -> int:
    """Index of the mid-spectrum eigenstate (floor convention)."""
    return dim // 2


def middle_state(e: EigenDecomposition) -> np.ndarray:
    """Eigenvector in the middle of the ascending spectrum."""
    if e.source_dim < 2:
        raise ValueError("need at least a 2-dimensional spectrum")
    return e.vectors[:, middle_index(e.source_dim)]


def validate(e: EigenDecomposition, h: DenseHamiltonian) -> None:
    """Raise unless the decomposition meets the accuracy contract.

    Checks: ascending order; residual ||H v - lam v|| <= 1e-10 ||H||_F;
    eigenvalue sum matching trace(H) to 1e-9 ||H||_F; orthonormality of the
    vectors to 1e-10 per entry.
    """
    scale = np.linalg.norm(h.matrix)
    if np.any(np.diff(e.values) < 0):
        raise ValueError("eigenvalues not ascending")
    resid = h.matrix @ e.vectors - e.vectors * e.values
    worst = np.max(np.linalg.norm(resid, axis=0))
    if worst > 1e-10 * scale:
        raise ValueError(f"residual {worst:.3e} exceeds 1e-10 * ||H||_F = {1e-10 * scale:.3e}")
    tr_gap = abs(e.values.sum() - np.trace(h.matrix))
    if tr_gap > 1e-9 * scale:
        raise ValueError(f"eigenvalue sum off trace by {tr_gap:.3e}")
    gram_gap = np.max(np.abs(e.vectors.T @ e.vectors - np.eye(e.source_dim)))
    if gram_gap > 1e-10:
        raise ValueError(f"orthonormality defect {gram_gap:.3e}")


def write_values_csv(e: EigenDecomposition, stream: TextIO) -> None:
    """Debug dump of the spectrum, one eigenvalue per line."""
    stream.write("index,value\n")
    for n, v in enumerate(e.values):
        stream.write(f"{n},{v!r}\n")
