"""Dense complex linear algebra over labeled tensor products of subsystems.

Ordering convention: label index 0 is the leftmost tensor factor and the most
significant digit of the computational-basis index (big-endian).
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotHermitian, UnknownLabel

HERMITIAN_TOL = 1e-9


@dataclass(frozen=True)
class SystemLayout:
    labels: tuple[str, ...]
    dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.labels) != len(self.dims):
            raise DimensionMismatch(
                f"{len(self.labels)} labels but {len(self.dims)} dims"
            )
        if not self.labels:
            raise DimensionMismatch("layout needs at least one subsystem")
        if len(set(self.labels)) != len(self.labels):
            raise UnknownLabel(f"duplicate subsystem labels in {self.labels}")
        if any(d < 2 for d in self.dims):
            raise DimensionMismatch(f"local dimensions must be >= 2, got {self.dims}")

    @classmethod
    def qubits(cls, labels: Iterable[str] | int) -> "SystemLayout":
        """Qubit layout; an integer ``n`` gives labels A, B, C, ..."""
        if isinstance(labels, int):
            labels = string.ascii_uppercase[:labels]
        labels = tuple(labels)
        return cls(labels, (2,) * len(labels))

    @property
    def dim(self) -> int:
        return prod(self.dims)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"unknown subsystem label {label!r}; layout has {self.labels}") from None

    def local_dim(self, label: str) -> int:
        return self.dims[self.index(label)]

    def sub(self, labels: Sequence[str]) -> "SystemLayout":
        return SystemLayout(tuple(labels), tuple(self.local_dim(l) for l in labels))


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionMismatch("matrix has non-finite entries")
    return a


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def reduced(rho: np.ndarray, layout: SystemLayout, labels: Sequence[str]) -> np.ndarray:
    """Partial trace onto ``labels``, with factors ordered as given.

    Unlike :func:`partial_trace` the output order follows ``labels``, which
    is what the measurement code needs when a pair is listed out of layout
    order.
    """
    n = len(layout.labels)
    if n > 26:
        raise DimensionMismatch("at most 26 subsystems supported")
    keep = [layout.index(l) for l in labels]
    if len(set(keep)) != len(keep):
        raise UnknownLabel(f"repeated label in {tuple(labels)}")
    rows = list(string.ascii_lowercase[:n])
    cols = list(string.ascii_uppercase[:n])
    for q in range(n):
        if q not in keep:
            cols[q] = rows[q]
    subscripts = "".join(rows) + "".join(cols) + "->"
    subscripts += "".join(rows[q] for q in keep) + "".join(cols[q] for q in keep)
    t = rho.reshape(layout.dims * 2)
    d = prod(layout.dims[q] for q in keep)
    return np.einsum(subscripts, t).reshape(d, d)


def partial_trace(rho, layout: SystemLayout, keep: Iterable[str]) -> np.ndarray:
    """Reduced operator on ``keep``, factors in layout order."""
    rho = as_matrix(rho)
    if rho.shape != (layout.dim, layout.dim):
        raise DimensionMismatch(
            f"matrix shape {rho.shape} does not match layout dimension {layout.dim}"
        )
    keep = set(keep)
    if not keep:
        raise UnknownLabel("keep set must be nonempty")
    for label in keep:
        layout.index(label)
    ordered = [l for l in layout.labels if l in keep]
    return reduced(rho, layout, ordered)


def check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"matrix is not square: {m.shape}")
    err = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if err > tol:
        raise NotHermitian(f"max |m - m^dagger| = {err:.3e} exceeds {tol:.1e}")


def hermitian_eigensystem(m, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order and the matching orthonormal columns."""
    m = as_matrix(m)
    check_hermitian(m, tol)
    lam, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    return lam[::-1].copy(), vecs[:, ::-1].copy()


def hermitian_eigenvalues(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = as_matrix(m)
    check_hermitian(m, tol)
    return np.linalg.eigvalsh((m + m.conj().T) / 2)[::-1].copy()


def embed(op: np.ndarray, layout: SystemLayout, label: str) -> np.ndarray:
    """``I ⊗ ... ⊗ op ⊗ ... ⊗ I`` with ``op`` acting on ``label``."""
    q = layout.index(label)
    if op.shape != (layout.dims[q],) * 2:
        raise DimensionMismatch(
            f"operator of shape {op.shape} cannot act on {label!r} (dim {layout.dims[q]})"
        )
    left = prod(layout.dims[:q])
    right = prod(layout.dims[q + 1 :])
    return np.kron(np.kron(np.eye(left), op), np.eye(right))
