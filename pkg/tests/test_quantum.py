import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noclone.errors import PreconditionError, StateValidationError
from noclone.geometry import UnitVector3, complete_triple, unit
from noclone.quantum import (
    DensityOperator,
    joint_table,
    measure,
    spin_bit_entropy,
    spin_zero_projector,
    squared_spin,
    star_closed_form,
    twinned_joint_prob,
    verify_101_resolution,
)

X, Y, Z = UnitVector3(1, 0, 0), UnitVector3(0, 1, 0), UnitVector3(0, 0, 1)


@st.composite
def directions(draw):
    xyz = draw(st.tuples(*[st.floats(-1, 1) for _ in range(3)]).filter(
        lambda v: sum(c * c for c in v) > 1e-4))
    return unit(*xyz)


def _oracle(u, i, v, j):
    # direct Lüders product: tr(P_j(v) P_i(u) (I/3) P_i(u) P_j(v))
    def proj(w, b):
        p = np.outer(w.array, w.array)
        return p if b == 0 else np.eye(3) - p
    pu, pv = proj(u, i), proj(v, j)
    return float(np.trace(pv @ pu @ (np.eye(3) / 3) @ pu @ pv))


def test_projector_basics():
    assert np.array_equal(spin_zero_projector(Z).matrix, np.diag([0.0, 0.0, 1.0]))
    total = sum(spin_zero_projector(w).matrix for w in (X, Y, Z))
    assert np.array_equal(total, np.eye(3))
    p = spin_zero_projector(unit(1, 2, 3))
    assert np.allclose(p.matrix @ p.matrix, p.matrix, atol=1e-12)
    assert p.rank == 1 and p.complement.rank == 2
    assert np.trace(p.complement.matrix) == pytest.approx(2, abs=1e-12)


def test_squared_spin_spectrum_and_sum():
    u = unit(1, 2, 2)
    v = unit(2, -1, 0)
    w = complete_triple(u, v)
    ops = [squared_spin(x) for x in (u, v, w)]
    for op in ops:
        assert np.allclose(np.sort(np.linalg.eigvalsh(op)), [0, 1, 1], atol=1e-12)
    for a, b in itertools.combinations(ops, 2):
        assert np.allclose(a @ b, b @ a, atol=1e-12)
    assert np.allclose(sum(ops), 2 * np.eye(3), atol=1e-12)


def test_measure_maximally_mixed():
    rho = DensityOperator.maximally_mixed()
    m = measure(rho, unit(0.3, -0.2, 0.9))
    assert m.prob0 == pytest.approx(1 / 3, abs=1e-15)
    assert m.prob0 + m.prob1 == pytest.approx(1, abs=1e-12)
    m = measure(rho, Z)
    assert np.allclose(m.post0.matrix, np.diag([0, 0, 1]), atol=1e-15)


def test_measure_eigenstate():
    w = unit(1, 1, 0)
    rho = DensityOperator(spin_zero_projector(w).matrix)
    m = measure(rho, w)
    assert m.prob0 == pytest.approx(1, abs=1e-12)
    assert np.allclose(m.post0.matrix, rho.matrix, atol=1e-12)
    assert m.post1 is None


@pytest.mark.parametrize("matrix", [
    np.eye(3),                       # trace 3
    np.diag([1.5, -0.5, 0.0]),      # not PSD
    np.array([[0.5, 0.1, 0], [0, 0.5, 0], [0, 0, 0]]),  # not symmetric
    np.eye(2) / 2,                   # wrong shape
])
def test_density_validation(matrix):
    with pytest.raises(StateValidationError):
        DensityOperator(matrix)


def test_twinned_joint_prob_examples():
    v = unit(1, 1, 0)
    assert twinned_joint_prob(X, 0, v, 0) == pytest.approx(1 / 6, abs=1e-15)
    assert twinned_joint_prob(v, 0, v, 1) == pytest.approx(0, abs=1e-15)
    assert twinned_joint_prob(X, 0, Y, 0) == 0


def test_star_closed_form_examples():
    u = unit(0.2, 0.4, -0.1)
    assert star_closed_form(u, 0, u, 0) == pytest.approx(1 / 3, abs=1e-15)
    assert star_closed_form(u, 1, u, 1) == pytest.approx(2 / 3, abs=1e-15)
    v = unit(1, -3, 2)
    assert star_closed_form(u, 0, v, 1) == star_closed_form(u, 1, v, 0)


@settings(max_examples=200)
@given(directions(), directions())
def test_projector_calculus_matches_closed_form(u, v):
    table = joint_table(u, v)
    for i, j in itertools.product((0, 1), repeat=2):
        assert abs(table[i, j] - star_closed_form(u, i, v, j)) <= 1e-12
        assert abs(table[i, j] - _oracle(u, i, v, j)) <= 1e-12
    assert abs(table.sum() - 1) <= 1e-12
    assert abs(table[0].sum() - 1 / 3) <= 1e-12
    assert abs(table[1].sum() - 2 / 3) <= 1e-12


@settings(max_examples=200)
@given(directions(), directions(), st.sampled_from([0, 1]))
def test_luders_post_states_are_states(u, v, i):
    m = measure(DensityOperator.maximally_mixed(), u)
    _, post = m.branch(i)
    m2 = measure(post, v)
    for prob, state in ((m2.prob0, m2.post0), (m2.prob1, m2.post1)):
        if prob > 1e-10:
            assert state is not None
            mat = state.matrix
            assert np.max(np.abs(mat - mat.T)) <= 1e-12
            assert abs(np.trace(mat) - 1) <= 1e-12
            assert np.linalg.eigvalsh(mat).min() >= -1e-10


def _tree_oracle(triple):
    # every branch of the sequential tree, computed by explicit products
    out = {}
    for bits in itertools.product((0, 1), repeat=3):
        ops = [np.outer(w.array, w.array) if b == 0 else np.eye(3) - np.outer(w.array, w.array)
               for w, b in zip(triple, bits)]
        k = ops[2] @ ops[1] @ ops[0]
        out[bits] = float(np.trace(k @ (np.eye(3) / 3) @ k.T))
    return out


def test_101_resolution_standard_basis():
    rep = verify_101_resolution((X, Y, Z))
    assert rep.ok
    oracle = _tree_oracle((X, Y, Z))
    for bits, p in rep.pattern_probs.items():
        assert p == pytest.approx(oracle[bits], abs=1e-15)
        if bits.count(0) == 1:
            assert p == pytest.approx(1 / 3, abs=1e-12)
        else:
            assert p == 0


def test_101_resolution_rotated():
    u = unit(1, 2, 2)
    v = unit(2, -1, 0)
    triple = (u, v, complete_triple(u, v))
    rep = verify_101_resolution(triple)
    assert rep.ok and rep.resolution_residual <= 1e-12
    assert sum(rep.pattern_probs.values()) == pytest.approx(1, abs=1e-12)


def test_101_resolution_rejects_non_orthogonal():
    with pytest.raises(PreconditionError):
        verify_101_resolution((X, Y, unit(1, 0, 1)))


def test_entropy():
    h = spin_bit_entropy()
    assert abs(h - 0.9182958336) <= 1e-9
    assert h < 45 / 49
    assert abs(h - (math.log(3) / math.log(2) - 2 / 3)) <= 1e-12
