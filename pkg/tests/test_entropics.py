import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geur import states
from geur.entropics import (
    binary_entropy,
    classical_conditional_entropy,
    conditional_entropy,
    holevo,
    holevo_via_shannon,
    measured_conditional_entropy,
    shannon,
    von_neumann,
)
from geur.errors import EmptyRemainder, NotADistribution, UnknownLabel
from geur.measure import pauli
from geur.qla import SystemLayout

import oracle


def random_unitary(dim, rng):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_von_neumann_basics():
    assert abs(von_neumann(states.random_pure(3, 4))) < 1e-9
    for n in (1, 2, 3, 4):
        layout = SystemLayout.qubits(n)
        assert abs(von_neumann(states.maximally_mixed(layout)) - n) < 1e-12
    expected = -(9 / 16) * math.log2(9 / 16) - 7 * (1 / 16) * math.log2(1 / 16)
    assert abs(von_neumann(states.werner3(0.5)) - expected) < 1e-12
    assert abs(expected - 2.2169) < 1e-4


def test_shannon():
    assert shannon([1, 0]) == 0
    assert shannon([0.5, 0.5]) == 1
    assert abs(shannon([0.75, 0.25]) - 0.8112781244591328) < 1e-12
    with pytest.raises(NotADistribution):
        shannon([0.5, 0.6])
    with pytest.raises(NotADistribution):
        shannon([1.2, -0.2])


def test_conditional_entropy():
    assert abs(conditional_entropy(states.bell_phi_plus(), {"B"}) + 1) < 1e-12
    assert abs(conditional_entropy(states.product_zero(SystemLayout.qubits(2)), {"B"})) < 1e-12
    classical = states.DensityMatrix(SystemLayout.qubits(2), np.diag([0.5, 0, 0, 0.5]))
    assert abs(conditional_entropy(classical, {"B"})) < 1e-12
    with pytest.raises(EmptyRemainder):
        conditional_entropy(classical, {"A", "B"})
    with pytest.raises(EmptyRemainder):
        conditional_entropy(classical, set())
    with pytest.raises(UnknownLabel):
        conditional_entropy(classical, {"Z"})


@pytest.mark.parametrize("theta", np.linspace(0, math.pi / 2, 11))
def test_measured_conditional_entropy_ghz_theta(theta):
    rho = states.ghz4_theta(theta)
    assert abs(measured_conditional_entropy(rho, pauli("X"), "A", "B") - 1) < 1e-9
    assert abs(measured_conditional_entropy(rho, pauli("Z"), "A", "D")) < 1e-9
    h = binary_entropy(math.cos(theta) ** 2)
    assert abs(holevo(rho, pauli("Z"), "A", "D") - h) < 1e-9
    # matches the explicit-loop oracle
    ref_i, ref_c = oracle.holevo_and_cond(oracle.ghz_theta_rho(theta), 0, 3, oracle.PAULI_BASES["Z"])
    assert abs(holevo(rho, pauli("Z"), "A", "D") - ref_i) < 1e-9
    assert abs(measured_conditional_entropy(rho, pauli("Z"), "A", "D") - ref_c) < 1e-9


def test_product_states_have_no_information():
    zero = states.product_zero(SystemLayout.qubits(3))
    assert abs(measured_conditional_entropy(zero, pauli("Z"), "A", "B")) < 1e-12
    for m in "XYZ":
        assert abs(holevo(zero, pauli(m), "A", "C")) < 1e-12
    a = states.random_mixed(1, 2, 1).matrix
    b = states.random_mixed(2, 3, 2).matrix
    prod = states.DensityMatrix(SystemLayout.qubits(3), np.kron(a, b))
    assert abs(holevo(prod, pauli("X"), "A", ["B", "C"])) < 1e-9


def test_holevo_bell():
    assert abs(holevo(states.bell_phi_plus(), pauli("Z"), "A", "B") - 1) < 1e-12


def test_classical_conditional_entropy():
    assert abs(classical_conditional_entropy([[0.5, 0], [0, 0.5]])) < 1e-12
    assert abs(classical_conditional_entropy(np.full((2, 2), 0.25)) - 1) < 1e-12
    table = [[3 / 8, 1 / 8], [1 / 8, 3 / 8]]
    joint = 2 * (-(3 / 8) * math.log2(3 / 8) - (1 / 8) * math.log2(1 / 8))
    assert abs(joint - 1.8112781244591327) < 1e-12
    assert abs(classical_conditional_entropy(table) - (joint - 1)) < 1e-12
    with pytest.raises(NotADistribution):
        classical_conditional_entropy([[0.5, 0.5], [0.5, 0.5]])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_von_neumann_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    rho = states.random_mixed(3, 1 + seed % 8, seed)
    u = random_unitary(8, rng)
    rotated = states.DensityMatrix(rho.layout, u @ rho.matrix @ u.conj().T)
    assert abs(von_neumann(rho) - von_neumann(rotated)) < 1e-9


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 2**31),
    which=st.sampled_from("XYZ"),
    memory=st.sampled_from(["B", "C", ("B", "C")]),
)
def test_measured_entropy_and_two_holevo_routes(seed, which, memory):
    rho = states.random_mixed(3, 1 + seed % 8, seed)
    m = pauli(which)
    assert measured_conditional_entropy(rho, m, "A", memory) >= 0
    i1 = holevo(rho, m, "A", memory)
    i2 = holevo_via_shannon(rho, m, "A", memory)
    assert abs(i1 - i2) < 1e-9
    # capped by log2 of the measured qubit's dimension
    assert -1e-12 <= i1 <= 1 + 1e-9


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**31), which=st.sampled_from("XYZ"))
def test_holevo_data_processing(seed, which):
    rho = states.random_mixed(3, 1 + seed % 8, seed)
    m = pauli(which)
    assert holevo(rho, m, "A", "B") <= holevo(rho, m, "A", ["B", "C"]) + 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_pure_bipartite_marginals_equal_entropy(seed):
    rho = states.random_pure(2, seed)
    assert abs(von_neumann(rho.reduce("A")) - von_neumann(rho.reduce("B"))) < 1e-9


def test_measured_entropy_nonnegative_many():
    for seed in range(1000):
        rho = states.random_mixed(3, 1 + seed % 8, seed)
        m = pauli("XYZ"[seed % 3])
        assert measured_conditional_entropy(rho, m, "A", "BC"[seed % 2]) >= 0
