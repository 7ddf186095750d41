"""Validated density matrices and the state families used by the bounds.

Random factories draw from ``numpy.random.default_rng(seed)`` (the PCG64
bit generator) and its ``standard_normal`` sampler, so every sample is
reproducible from the integer seed alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import qla
from .errors import DomainError, InvalidArity, InvariantViolation, RankError
from .qla import SystemLayout

TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator on ``layout``."""

    layout: SystemLayout
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvariantViolation("shape", f"density matrix must be square, got {m.shape}")
        if m.shape[0] != self.layout.dim:
            raise InvariantViolation(
                "shape",
                f"matrix dimension {m.shape[0]} does not match layout dimension {self.layout.dim}",
            )
        if not np.all(np.isfinite(m)):
            raise InvariantViolation("finite", "matrix has NaN or infinite entries")
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > TOL:
            raise InvariantViolation("hermitian", f"max |rho - rho^dagger| = {herm:.3e}")
        tr = np.trace(m)
        if abs(tr - 1) > TOL:
            raise InvariantViolation("trace", f"trace is {tr.real:.12g}, expected 1")
        lam_min = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
        if lam_min < -TOL:
            raise InvariantViolation(
                "positive_semidefinite", f"smallest eigenvalue {lam_min:.3e} is negative"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.layout.labels

    @property
    def dim(self) -> int:
        return self.layout.dim

    def reduce(self, keep: Iterable[str]) -> "DensityMatrix":
        keep = set(keep)
        ordered = [l for l in self.layout.labels if l in keep]
        return DensityMatrix(self.layout.sub(ordered), qla.partial_trace(self.matrix, self.layout, keep))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return self.layout == other.layout and np.allclose(self.matrix, other.matrix, atol=1e-12)

    __hash__ = None


def from_ket(psi, layout: SystemLayout) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(layout, np.outer(psi, psi.conj()))


def maximally_mixed(layout: SystemLayout) -> DensityMatrix:
    return DensityMatrix(layout, np.eye(layout.dim) / layout.dim)


def product_zero(layout: SystemLayout) -> DensityMatrix:
    m = np.zeros((layout.dim, layout.dim))
    m[0, 0] = 1
    return DensityMatrix(layout, m)


def bell_phi_plus() -> DensityMatrix:
    return ghz(2)


def ghz(n: int, labels: Iterable[str] | None = None) -> DensityMatrix:
    if n < 2:
        raise InvalidArity(f"GHZ state needs n >= 2 qubits, got {n}")
    layout = SystemLayout.qubits(labels if labels is not None else n)
    if len(layout.labels) != n:
        raise InvalidArity(f"{n} qubits but {len(layout.labels)} labels")
    psi = np.zeros(2**n)
    psi[0] = psi[-1] = 1 / math.sqrt(2)
    return from_ket(psi, layout)


def ghz4_theta(theta: float) -> DensityMatrix:
    """``cos θ |0000> + sin θ |1111>`` on parties A, B, C, D."""
    if not 0 <= theta <= math.pi / 2:
        raise DomainError(f"theta must lie in [0, pi/2], got {theta}")
    psi = np.zeros(16)
    psi[0], psi[15] = math.cos(theta), math.sin(theta)
    return from_ket(psi, SystemLayout.qubits("ABCD"))


def werner3(p: float) -> DensityMatrix:
    """Three-qubit Werner state on parties A, B, D (D is the eavesdropper)."""
    if not 0 <= p <= 1:
        raise DomainError(f"mixing weight p must lie in [0, 1], got {p}")
    g = ghz(3, "ABD")
    return DensityMatrix(g.layout, p * g.matrix + (1 - p) / 8 * np.eye(8))


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure(n: int, seed: int, labels: Iterable[str] | None = None) -> DensityMatrix:
    if n < 1:
        raise InvalidArity(f"need n >= 1 qubits, got {n}")
    layout = SystemLayout.qubits(labels if labels is not None else n)
    rng = np.random.default_rng(seed)
    return from_ket(_complex_gaussian(rng, 2**n), layout)


def random_mixed(n: int, rank: int, seed: int, labels: Iterable[str] | None = None) -> DensityMatrix:
    """``G G^dagger / tr(G G^dagger)`` with ``G`` a 2^n x rank Ginibre matrix."""
    if n < 1:
        raise InvalidArity(f"need n >= 1 qubits, got {n}")
    dim = 2**n
    if not 1 <= rank <= dim:
        raise RankError(f"rank must lie in [1, {dim}], got {rank}")
    layout = SystemLayout.qubits(labels if labels is not None else n)
    rng = np.random.default_rng(seed)
    g = _complex_gaussian(rng, (dim, rank))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(layout, m / np.trace(m).real)


# -- state files -----------------------------------------------------------

def state_from_dict(doc: dict) -> DensityMatrix:
    """Parse ``{"labels", "dims", "matrix_re", "matrix_im"}`` with full validation."""
    if not isinstance(doc, dict):
        raise InvariantViolation("schema", "state file must hold a JSON object")
    missing = [k for k in ("labels", "dims", "matrix_re", "matrix_im") if k not in doc]
    if missing:
        raise InvariantViolation("schema", f"missing keys {missing}")
    try:
        re = np.asarray(doc["matrix_re"], dtype=float)
        im = np.asarray(doc["matrix_im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvariantViolation("shape", f"matrix entries must be numeric rows: {exc}") from None
    if re.shape != im.shape:
        raise InvariantViolation("shape", f"matrix_re {re.shape} and matrix_im {im.shape} differ")
    try:
        layout = SystemLayout(tuple(str(l) for l in doc["labels"]), tuple(doc["dims"]))
    except (TypeError, ValueError) as exc:
        raise InvariantViolation("layout", str(exc)) from None
    return DensityMatrix(layout, re + 1j * im)


def state_to_dict(rho: DensityMatrix) -> dict:
    return {
        "labels": list(rho.layout.labels),
        "dims": list(rho.layout.dims),
        "matrix_re": rho.matrix.real.tolist(),
        "matrix_im": rho.matrix.imag.tolist(),
    }


def load_state(path) -> DensityMatrix:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvariantViolation("json", f"malformed state file: {exc}") from None
    return state_from_dict(doc)


def save_state(rho: DensityMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(rho), fh)
