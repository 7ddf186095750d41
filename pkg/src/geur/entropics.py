"""Entropy functionals, all in bits.

Eigenvalues and probabilities below ``CLAMP`` count as zero; anything below
``-NEG_TOL`` is treated as a broken input rather than round-off.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import qla
from .errors import EmptyRemainder, NotADistribution, NotHermitian
from .measure import ProjectiveMeasurement, as_labels, dephase, outcome_distribution
from .states import DensityMatrix

CLAMP = 1e-12
NEG_TOL = 1e-9


def _snap_nonnegative(x: float) -> float:
    """Round-off just below zero becomes 0; larger negatives pass through untouched."""
    return 0.0 if -NEG_TOL < x < 0 else x


def _entropy_of_spectrum(lam: np.ndarray) -> float:
    lam = np.asarray(lam, dtype=float)
    if lam.size and lam.min() < -NEG_TOL:
        raise NotHermitian(f"eigenvalue {lam.min():.3e} is negative beyond round-off")
    lam = lam[lam > CLAMP]
    s = float(-np.sum(lam * np.log2(lam)))
    return max(s, 0.0)


def entropy_of_matrix(m: np.ndarray) -> float:
    return _entropy_of_spectrum(qla.hermitian_eigenvalues(m))


def von_neumann(rho: DensityMatrix | np.ndarray) -> float:
    m = rho.matrix if isinstance(rho, DensityMatrix) else rho
    return entropy_of_matrix(m)


def shannon(p: Iterable[float]) -> float:
    p = np.asarray(list(p) if not isinstance(p, np.ndarray) else p, dtype=float).ravel()
    if p.size == 0 or np.any(p < -NEG_TOL) or abs(p.sum() - 1) > 1e-9:
        raise NotADistribution(f"not a probability distribution: sum={p.sum():.12g}, min={p.min() if p.size else 'n/a'}")
    p = p[p > CLAMP]
    return max(float(-np.sum(p * np.log2(p))), 0.0)


def binary_entropy(x: float) -> float:
    return shannon([x, 1 - x])


def conditional_entropy(rho: DensityMatrix, condition_on: Iterable[str]) -> float:
    """``S(full) - S(condition_on)``."""
    cond = set(condition_on)
    if not cond:
        raise EmptyRemainder("conditioning set is empty")
    for label in cond:
        rho.layout.index(label)
    if cond >= set(rho.layout.labels):
        raise EmptyRemainder("conditioning on every subsystem leaves nothing to condition")
    return von_neumann(rho) - von_neumann(qla.partial_trace(rho.matrix, rho.layout, cond))


def _qc_pair(rho: DensityMatrix, m: ProjectiveMeasurement, target: str, memory: Sequence[str]):
    """Measured state on ``target`` + ``memory`` (target first) and its layout."""
    if target in memory:
        raise EmptyRemainder(f"target {target!r} cannot be part of its own memory")
    labels = [target, *memory]
    layout = rho.layout.sub(labels)
    pair = qla.reduced(rho.matrix, rho.layout, labels)
    return dephase(pair, layout, m, target), layout


def measured_conditional_entropy(
    rho: DensityMatrix, m: ProjectiveMeasurement, target: str, memory: str | Sequence[str]
) -> float:
    """``S(m|memory)`` of the state after measuring ``m`` on ``target``."""
    memory = as_labels(memory)
    qc, layout = _qc_pair(rho, m, target, memory)
    s_mem = entropy_of_matrix(qla.reduced(qc, layout, memory))
    return _snap_nonnegative(entropy_of_matrix(qc) - s_mem)


def holevo(rho: DensityMatrix, m: ProjectiveMeasurement, target: str, memory: str | Sequence[str]) -> float:
    """Mutual information ``S(m) + S(memory) - S(m, memory)`` of the measured state."""
    memory = as_labels(memory)
    qc, layout = _qc_pair(rho, m, target, memory)
    s_m = entropy_of_matrix(qla.reduced(qc, layout, [target]))
    s_mem = entropy_of_matrix(qla.reduced(qc, layout, memory))
    return _snap_nonnegative(s_m + s_mem - entropy_of_matrix(qc))


def holevo_via_shannon(rho: DensityMatrix, m: ProjectiveMeasurement, target: str, memory) -> float:
    """Second route to the Holevo quantity: ``H(m) - S(m|memory)``."""
    return shannon(outcome_distribution(rho, m, target)) - measured_conditional_entropy(
        rho, m, target, memory
    )


def classical_conditional_entropy(table) -> float:
    """``H(rows, cols) - H(cols)``: rows are conditioned on columns."""
    t = np.asarray(table, dtype=float)
    if t.ndim != 2:
        raise NotADistribution(f"joint table must be 2-d, got shape {t.shape}")
    return shannon(t.ravel()) - shannon(t.sum(axis=0))
