"""Projective measurements on one subsystem and what they do to a state."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import qla
from .errors import DimensionMismatch, GeurError, NotADistribution, UnknownLabel
from .qla import SystemLayout
from .states import DensityMatrix

ORTHO_TOL = 1e-9
NEG_PROB_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Nondegenerate observable, stored as its eigenbasis.

    ``basis`` holds the eigenvectors as columns; eigenvalues are irrelevant
    because only outcome entropies enter the bounds.
    """

    name: str
    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=complex)
        if b.ndim != 2 or b.shape[0] != b.shape[1] or b.shape[0] < 2:
            raise DimensionMismatch(
                f"measurement {self.name!r} needs a complete square basis, got shape {b.shape}"
            )
        gram = b.conj().T @ b
        err = float(np.max(np.abs(gram - np.eye(b.shape[0]))))
        if err > ORTHO_TOL:
            raise GeurError(
                f"measurement {self.name!r} basis is not orthonormal (Gram error {err:.3e})"
            )
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def vectors(self) -> list[np.ndarray]:
        return [self.basis[:, i] for i in range(self.dim)]

    def projectors(self) -> list[np.ndarray]:
        return [np.outer(v, v.conj()) for v in self.vectors()]

    @classmethod
    def from_qubit_state(cls, psi, name: str = "custom") -> "ProjectiveMeasurement":
        """Qubit basis ``{psi, psi_perp}`` built from one (unnormalized) vector."""
        a, b = np.asarray(psi, dtype=complex) / np.linalg.norm(psi)
        return cls(name, np.array([[a, -b.conjugate()], [b, a.conjugate()]]))

    def __repr__(self):
        return f"ProjectiveMeasurement({self.name!r}, dim={self.dim})"


_S = 1 / math.sqrt(2)
_PAULI = {
    "X": np.array([[_S, _S], [_S, -_S]]),
    "Y": np.array([[_S, _S], [1j * _S, -1j * _S]]),
    "Z": np.eye(2),
}


def pauli(which: str) -> ProjectiveMeasurement:
    key = which.upper()
    if key not in _PAULI:
        raise GeurError(f"unknown Pauli {which!r}; expected X, Y or Z")
    return ProjectiveMeasurement(key, _PAULI[key])


def measurement_from_json(doc, name: str = "custom") -> ProjectiveMeasurement:
    """Basis from a unitary given as ``{"re": [[...]], "im": [[...]]}``.

    The columns of the unitary are the measurement eigenvectors.
    """
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    re = np.asarray(doc["re"], dtype=float)
    im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=float)
    return ProjectiveMeasurement(doc.get("name", name), re + 1j * im)


def _same_dim(r: ProjectiveMeasurement, k: ProjectiveMeasurement) -> None:
    if r.dim != k.dim:
        raise DimensionMismatch(f"{r.name} has dim {r.dim} but {k.name} has dim {k.dim}")


def overlaps(r: ProjectiveMeasurement, k: ProjectiveMeasurement) -> np.ndarray:
    """Matrix of squared overlaps ``|<r_i|k_j>|^2``."""
    _same_dim(r, k)
    return np.abs(r.basis.conj().T @ k.basis) ** 2


def max_overlap(r: ProjectiveMeasurement, k: ProjectiveMeasurement) -> float:
    """``max |<r_i|k_j>|^2``; round-off within 1e-12 of the endpoints 1/d and 1 is snapped."""
    c = float(np.max(overlaps(r, k)))
    for exact in (1 / r.dim, 1.0):
        if abs(c - exact) <= 1e-12:
            return exact
    return c


def is_mub_pair(r: ProjectiveMeasurement, k: ProjectiveMeasurement, tol: float = 1e-9) -> bool:
    return bool(np.all(np.abs(overlaps(r, k) - 1 / r.dim) <= tol))


def _check_target(layout: SystemLayout, m: ProjectiveMeasurement, target: str) -> None:
    d = layout.local_dim(target)
    if d != m.dim:
        raise DimensionMismatch(
            f"measurement {m.name} has dim {m.dim} but subsystem {target!r} has dim {d}"
        )


def dephase(matrix: np.ndarray, layout: SystemLayout, m: ProjectiveMeasurement, target: str) -> np.ndarray:
    """Array-level ``sum_i (P_i ⊗ I) rho (P_i ⊗ I)`` with ``P_i`` on ``target``."""
    _check_target(layout, m, target)
    out = np.zeros_like(matrix, dtype=complex)
    for proj in m.projectors():
        e = qla.embed(proj, layout, target)
        out += e @ matrix @ e
    return (out + out.conj().T) / 2


def post_measurement_state(rho: DensityMatrix, m: ProjectiveMeasurement, target: str) -> DensityMatrix:
    return DensityMatrix(rho.layout, dephase(rho.matrix, rho.layout, m, target))


def clean_probabilities(p) -> np.ndarray:
    p = np.real(np.asarray(p, dtype=complex)).astype(float)
    if np.any(p < -NEG_PROB_TOL):
        raise NotADistribution(f"negative probability {p.min():.3e}")
    return np.clip(p, 0.0, None)


def outcome_distribution(rho: DensityMatrix, m: ProjectiveMeasurement, target: str) -> np.ndarray:
    _check_target(rho.layout, m, target)
    local = qla.reduced(rho.matrix, rho.layout, [target])
    return clean_probabilities(np.einsum("ai,ab,bi->i", m.basis.conj(), local, m.basis))


def bilateral_distribution(
    rho: DensityMatrix,
    m1: ProjectiveMeasurement,
    t1: str,
    m2: ProjectiveMeasurement,
    t2: str,
) -> np.ndarray:
    """Joint table ``p[i, j]`` for outcome i of ``m1`` on ``t1`` and j of ``m2`` on ``t2``."""
    if t1 == t2:
        raise UnknownLabel(f"bilateral measurement needs two distinct sites, got {t1!r} twice")
    _check_target(rho.layout, m1, t1)
    _check_target(rho.layout, m2, t2)
    pair = qla.reduced(rho.matrix, rho.layout, [t1, t2])
    basis = np.kron(m1.basis, m2.basis)
    diag = np.einsum("ai,ab,bi->i", basis.conj(), pair, basis)
    return clean_probabilities(diag).reshape(m1.dim, m2.dim)


@dataclass(frozen=True)
class MeasurementAssignment:
    """Observables on ``target`` each paired with its own memory subsystem."""

    pairs: tuple[tuple[ProjectiveMeasurement, str], ...]
    target: str = "A"

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((m, str(l)) for m, l in self.pairs))
        mems = [l for _, l in self.pairs]
        if len(set(mems)) != len(mems):
            raise UnknownLabel(f"memory labels must be distinct, got {mems}")
        if self.target in mems:
            raise UnknownLabel(f"target {self.target!r} cannot also be a memory")

    @property
    def measurements(self) -> list[ProjectiveMeasurement]:
        return [m for m, _ in self.pairs]

    @property
    def memories(self) -> list[str]:
        return [l for _, l in self.pairs]

    def check(self, layout: SystemLayout) -> None:
        for label in [self.target, *self.memories]:
            layout.index(label)
        for m in self.measurements:
            _check_target(layout, m, self.target)

    @classmethod
    def parse(cls, text: str, target: str = "A") -> "MeasurementAssignment":
        """``"X:B,Y:C,Z:D"`` -> Pauli X paired with memory B, and so on."""
        return cls(tuple((pauli(name), mem) for name, mem in parse_pairing(text)), target)


def parse_pairing(text: str) -> list[tuple[str, str]]:
    pairs = []
    for item in text.split(","):
        name, sep, mem = item.strip().rpartition(":")
        if not sep or not name or not mem:
            raise GeurError(f"bad pairing entry {item!r}; expected OBS:LABEL")
        pairs.append((name, mem))
    return pairs


def as_labels(memory: str | Sequence[str]) -> list[str]:
    return [memory] if isinstance(memory, str) else list(memory)
