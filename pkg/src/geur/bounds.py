"""Uncertainty bounds, key-rate bounds and randomized certification of both."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import states
from .entropics import (
    classical_conditional_entropy,
    conditional_entropy,
    holevo,
    measured_conditional_entropy,
    von_neumann,
)
from .errors import GeurError, InvalidArity, UnknownLabel
from .measure import (
    MeasurementAssignment,
    ProjectiveMeasurement,
    bilateral_distribution,
    max_overlap,
    pauli,
)
from .states import DensityMatrix

TIGHT_TOL = 1e-9
VIOLATION_TOL = 1e-7


def q_mu(r: ProjectiveMeasurement, k: ProjectiveMeasurement) -> float:
    """Incompatibility ``-log2 c(r; k)`` in bits."""
    return max(0.0, -math.log2(max_overlap(r, k)))


@dataclass(frozen=True)
class EurReport:
    """Two-measurement bound evaluation.

    For ``scenario == "theorem1"``, ``rb_bound`` is ``q_mu`` and
    ``new_bound = q_mu + max(0, delta)``.  For ``"berta"`` the memory is
    shared, ``delta`` carries ``S(A|B)`` and ``new_bound = q_mu + delta``
    without clamping, since that bound may legitimately be negative.
    """

    scenario: str
    measurements: tuple[str, str]
    memories: tuple[str, str]
    target: str
    lhs_terms: tuple[float, float]
    lhs_total: float
    q_mu: float
    s_a: float
    holevo_terms: tuple[float, float]
    delta: float
    rb_bound: float
    new_bound: float
    slack_new: float
    slack_rb: float
    tight: bool

    def to_dict(self) -> dict:
        return {"schema": "geur.eur_report/1", **_jsonable(asdict(self))}


@dataclass(frozen=True)
class GeurReport:
    n: int
    measurements: tuple[str, ...]
    memories: tuple[str, ...]
    target: str
    overlap_matrix: tuple[tuple[float, ...], ...]
    b_mu: float
    s_a: float
    holevo_terms: tuple[float, ...]
    delta_n: float
    lhs_terms: tuple[float, ...]
    lhs_total: float
    rb_bound: float
    new_bound: float
    slack_new: float
    slack_rb: float
    tight: bool

    def to_dict(self) -> dict:
        return {"schema": "geur.geur_report/1", **_jsonable(asdict(self))}


@dataclass(frozen=True)
class KeyRateReport:
    measurements: tuple[str, str]
    parties: tuple[str, str, str]
    q_mu: float
    delta: float
    s_r_given_b: float
    s_k_given_b: float
    s_r_given_rprime: float
    s_k_given_kprime: float
    k_old_unilateral: float
    k_old_bilateral: float
    k_new_unilateral: float
    k_new_bilateral: float
    improvement: float

    def to_dict(self) -> dict:
        return {"schema": "geur.key_rate_report/1", **_jsonable(asdict(self))}


def _jsonable(d: dict) -> dict:
    def conv(v):
        if isinstance(v, (list, tuple)):
            return [conv(x) for x in v]
        if isinstance(v, (np.floating, float)):
            return float(v)
        if isinstance(v, np.bool_):
            return bool(v)
        return v

    return {k: conv(v) for k, v in d.items()}


def _require_parties(rho: DensityMatrix, labels: Sequence[str], minimum: int, kind: str) -> None:
    if len(rho.layout.labels) < minimum:
        raise InvalidArity(
            f"{kind} layout required: state has {len(rho.layout.labels)} subsystem(s) {rho.layout.labels}"
        )
    if len(set(labels)) != len(labels):
        raise UnknownLabel(f"labels must be distinct, got {tuple(labels)}")
    for label in labels:
        rho.layout.index(label)


def berta_bound(
    rho_ab: DensityMatrix,
    r: ProjectiveMeasurement,
    k: ProjectiveMeasurement,
    target: str = "A",
    memory: str = "B",
) -> EurReport:
    """Shared-memory relation ``S(r|B) + S(k|B) >= q_mu + S(A|B)``."""
    _require_parties(rho_ab, [target, memory], 2, "bipartite")
    if len(rho_ab.layout.labels) != 2:
        rho_ab = rho_ab.reduce([target, memory])
    lhs = (
        measured_conditional_entropy(rho_ab, r, target, memory),
        measured_conditional_entropy(rho_ab, k, target, memory),
    )
    q = q_mu(r, k)
    s_a_given_b = conditional_entropy(rho_ab, [memory])
    total = lhs[0] + lhs[1]
    bound = q + s_a_given_b
    return EurReport(
        scenario="berta",
        measurements=(r.name, k.name),
        memories=(memory, memory),
        target=target,
        lhs_terms=lhs,
        lhs_total=total,
        q_mu=q,
        s_a=von_neumann(rho_ab.reduce([target])),
        holevo_terms=(holevo(rho_ab, r, target, memory), holevo(rho_ab, k, target, memory)),
        delta=s_a_given_b,
        rb_bound=q,
        new_bound=bound,
        slack_new=total - bound,
        slack_rb=total - q,
        tight=total - bound <= TIGHT_TOL,
    )


def theorem1_report(
    rho_abc: DensityMatrix,
    r: ProjectiveMeasurement,
    memory_r: str,
    k: ProjectiveMeasurement,
    memory_k: str,
    target: str = "A",
) -> EurReport:
    """Tripartite bound ``S(r|B) + S(k|C) >= q_mu + max(0, delta)``.

    ``delta = S(A) - I(r:B) - I(k:C)``; the report keeps the raw, possibly
    negative value.
    """
    _require_parties(rho_abc, [target, memory_r, memory_k], 3, "tripartite")
    lhs = (
        measured_conditional_entropy(rho_abc, r, target, memory_r),
        measured_conditional_entropy(rho_abc, k, target, memory_k),
    )
    info = (holevo(rho_abc, r, target, memory_r), holevo(rho_abc, k, target, memory_k))
    s_a = von_neumann(rho_abc.reduce([target]))
    delta = s_a - info[0] - info[1]
    q = q_mu(r, k)
    new = q + max(0.0, delta)
    total = lhs[0] + lhs[1]
    return EurReport(
        scenario="theorem1",
        measurements=(r.name, k.name),
        memories=(memory_r, memory_k),
        target=target,
        lhs_terms=lhs,
        lhs_total=total,
        q_mu=q,
        s_a=s_a,
        holevo_terms=info,
        delta=delta,
        rb_bound=q,
        new_bound=new,
        slack_new=total - new,
        slack_rb=total - q,
        tight=total - new <= TIGHT_TOL,
    )


def geur_report(rho: DensityMatrix, assignment: MeasurementAssignment) -> GeurReport:
    """N-measurement bound, each observable guessed from its own memory.

    The incompatibility term averages ``-log2 c`` over the N(N-1)/2
    unordered pairs and divides by N - 1, so three qubit Paulis give 3/2.
    """
    n = len(assignment.pairs)
    if n < 2:
        raise InvalidArity(f"need at least two measurements, got {n}")
    _require_parties(rho, [assignment.target, *assignment.memories], n + 1, f"{n + 1}-partite")
    assignment.check(rho.layout)
    ms, mems, a = assignment.measurements, assignment.memories, assignment.target

    c = np.ones((n, n))
    for i, j in itertools.combinations(range(n), 2):
        c[i, j] = c[j, i] = max_overlap(ms[i], ms[j])
    b_mu = sum(q_mu(ms[i], ms[j]) for i, j in itertools.combinations(range(n), 2)) / (n - 1)

    lhs = tuple(measured_conditional_entropy(rho, m, a, b) for m, b in zip(ms, mems))
    info = tuple(holevo(rho, m, a, b) for m, b in zip(ms, mems))
    s_a = von_neumann(rho.reduce([a]))
    delta_n = n / 2 * s_a - sum(info)
    new = b_mu + max(0.0, delta_n)
    total = sum(lhs)
    return GeurReport(
        n=n,
        measurements=tuple(m.name for m in ms),
        memories=tuple(mems),
        target=a,
        overlap_matrix=tuple(tuple(float(x) for x in row) for row in c),
        b_mu=b_mu,
        s_a=s_a,
        holevo_terms=info,
        delta_n=delta_n,
        lhs_terms=lhs,
        lhs_total=total,
        rb_bound=b_mu,
        new_bound=new,
        slack_new=total - new,
        slack_rb=total - b_mu,
        tight=total - new <= TIGHT_TOL,
    )


def bilateral_conditional_entropy(rho: DensityMatrix, m: ProjectiveMeasurement, alice: str, bob: str) -> float:
    """``S(m|m')``: Alice's outcome given Bob measuring the same observable."""
    return classical_conditional_entropy(bilateral_distribution(rho, m, alice, m, bob))


def key_rate_report(
    rho_abd: DensityMatrix,
    r: ProjectiveMeasurement,
    k: ProjectiveMeasurement,
    alice: str = "A",
    bob: str = "B",
    eve: str = "D",
) -> KeyRateReport:
    """Old and improved secret-key-rate lower bounds.

    ``delta`` pairs ``r`` with Bob's memory and ``k`` with Eve's.
    """
    _require_parties(rho_abd, [alice, bob, eve], 3, "tripartite")
    q = q_mu(r, k)
    s_a = von_neumann(rho_abd.reduce([alice]))
    delta = s_a - holevo(rho_abd, r, alice, bob) - holevo(rho_abd, k, alice, eve)
    gain = max(0.0, delta)
    s_rb = measured_conditional_entropy(rho_abd, r, alice, bob)
    s_kb = measured_conditional_entropy(rho_abd, k, alice, bob)
    s_rr = bilateral_conditional_entropy(rho_abd, r, alice, bob)
    s_kk = bilateral_conditional_entropy(rho_abd, k, alice, bob)
    old_uni = q - s_rb - s_kb
    old_bi = q - s_rr - s_kk
    return KeyRateReport(
        measurements=(r.name, k.name),
        parties=(alice, bob, eve),
        q_mu=q,
        delta=delta,
        s_r_given_b=s_rb,
        s_k_given_b=s_kb,
        s_r_given_rprime=s_rr,
        s_k_given_kprime=s_kk,
        k_old_unilateral=old_uni,
        k_old_bilateral=old_bi,
        k_new_unilateral=old_uni + gain,
        k_new_bilateral=old_bi + gain,
        improvement=gain,
    )


# -- certification ---------------------------------------------------------

SCENARIOS = ("Theorem1", "Theorem2_N3", "Berta", "KeyRateOrdering")
_DEFAULT_QUBITS = {"Theorem1": 3, "Theorem2_N3": 4, "Berta": 2, "KeyRateOrdering": 3}
_PAULI_PAIRS = [(a, b) for a in "XYZ" for b in "XYZ" if a != b]


@dataclass(frozen=True)
class CertificationSummary:
    """Outcome of a fuzzing run.

    ``min_slack`` is the smallest ``lhs - bound`` seen; ``min_gain`` the
    smallest ``new_bound - old_bound`` (key-rate scenario: ``k_new - k_old``).
    A trial violates when either drops below ``-VIOLATION_TOL``.
    """

    scenario: str
    trials: int
    n_qubits: int
    seed: int
    random_bases: bool
    min_slack: float
    min_gain: float
    worst_trial: int
    violations: int
    passed: bool
    violating_trials: tuple[int, ...] = field(default=())

    def to_dict(self) -> dict:
        return {"schema": "geur.certification/1", **_jsonable(asdict(self))}

    def summary_line(self) -> str:
        return (
            f"scenario={self.scenario} trials={self.trials} n_qubits={self.n_qubits} "
            f"seed={self.seed} min_slack={self.min_slack:.12e} min_gain={self.min_gain:.12e} "
            f"worst_trial={self.worst_trial} violations={self.violations} "
            f"status={'PASS' if self.passed else 'FAIL'}"
        )


def normalize_scenario(name: str) -> str:
    for s in SCENARIOS:
        if s.lower() == name.lower().replace("-", "_"):
            return s
    raise GeurError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Generator that depends only on ``(seed, trial)``."""
    return np.random.default_rng([seed, trial])


def _random_basis(rng: np.random.Generator, name: str) -> ProjectiveMeasurement:
    psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return ProjectiveMeasurement.from_qubit_state(psi, name)


def certify_trial(
    scenario: str, n_qubits: int, seed: int, trial: int, random_bases: bool = False
) -> tuple[float, float]:
    """``(slack, gain)`` for one random trial; see :class:`CertificationSummary`."""
    rng = trial_rng(seed, trial)
    rank = int(rng.integers(1, 2**n_qubits + 1))
    state_seed = int(rng.integers(2**63))
    labels = "ABD" + "CEFGHIJ"[: n_qubits - 3] if scenario == "KeyRateOrdering" else None
    rho = states.random_mixed(n_qubits, rank, state_seed, labels=labels)

    if scenario == "Theorem2_N3":
        if random_bases:
            ms = [_random_basis(rng, f"U{i}") for i in range(3)]
        else:
            ms = [pauli(p) for p in "XYZ"]
        rep = geur_report(rho, MeasurementAssignment(tuple(zip(ms, "BCD")), "A"))
        return rep.slack_new, rep.new_bound - rep.rb_bound

    if random_bases:
        r, k = _random_basis(rng, "U0"), _random_basis(rng, "U1")
    else:
        a, b = _PAULI_PAIRS[int(rng.integers(len(_PAULI_PAIRS)))]
        r, k = pauli(a), pauli(b)

    if scenario == "Theorem1":
        rep = theorem1_report(rho, r, "B", k, "C", "A")
        return rep.slack_new, rep.new_bound - rep.rb_bound
    if scenario == "Berta":
        return berta_bound(rho.reduce("AB"), r, k).slack_new, 0.0
    rep = key_rate_report(rho, r, k, "A", "B", "D")
    # measuring Bob's qubit can only lose information: S(r|B) <= S(r|r')
    slack = min(rep.s_r_given_rprime - rep.s_r_given_b, rep.s_k_given_kprime - rep.s_k_given_b)
    gain = min(
        rep.k_new_unilateral - rep.k_old_unilateral,
        rep.k_new_bilateral - rep.k_old_bilateral,
    )
    return slack, gain


def certify(
    trials: int,
    n_qubits: int | None = None,
    seed: int = 0,
    scenario: str = "Theorem1",
    random_bases: bool = False,
) -> CertificationSummary:
    """Fuzz one inequality over random mixed states; violations are reported, not raised."""
    scenario = normalize_scenario(scenario)
    if trials < 1:
        raise GeurError(f"trials must be >= 1, got {trials}")
    need = _DEFAULT_QUBITS[scenario]
    n_qubits = need if n_qubits is None else n_qubits
    if n_qubits < need:
        raise InvalidArity(f"{scenario} needs at least {need} qubits, got {n_qubits}")

    results = [certify_trial(scenario, n_qubits, seed, t, random_bases) for t in range(trials)]
    slacks = [s for s, _ in results]
    gains = [g for _, g in results]
    worst = int(np.argmin(slacks))
    bad = tuple(
        t for t, (s, g) in enumerate(results) if s < -VIOLATION_TOL or g < -VIOLATION_TOL
    )
    return CertificationSummary(
        scenario=scenario,
        trials=trials,
        n_qubits=n_qubits,
        seed=seed,
        random_bases=random_bases,
        min_slack=float(slacks[worst]),
        min_gain=float(min(gains)),
        worst_trial=worst,
        violations=len(bad),
        passed=not bad,
        violating_trials=bad,
    )
