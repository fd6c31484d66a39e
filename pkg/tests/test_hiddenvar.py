import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noclone.errors import PreconditionError, SchemaError, SizeError
from noclone.geometry import LABELS, build_figure1, graph_from_edges, orthogonality_graph
from noclone.hiddenvar import (
    TARGET_EVENT,
    EventSpec,
    assignments_to_csv,
    chain_constraints,
    enumerate_valid,
    event_mass_identity,
    feasibility,
    is_valid,
    uniform_constraints,
)
from noclone.proofchain import final_value

GRAPH = orthogonality_graph(build_figure1(math.pi / 4, math.pi / 4))
SWAP = {"a": "d", "d": "a", "e": "b", "b": "e", "c": "f", "f": "c", "g": "g"}
angles = st.floats(min_value=0.01, max_value=math.pi / 2 - 0.01)


def _brute_force_valid():
    # independent of is_valid: hard-coded frames and orthogonal pairs
    triangles = [("a", "e", "c"), ("d", "b", "f")]
    edges = ["ae", "ac", "ec", "db", "df", "bf", "be", "gc", "gf"]
    out = []
    for bits in itertools.product((0, 1), repeat=7):
        asg = dict(zip("abcdefg", bits))
        if any(asg[p] == 0 and asg[q] == 0 for p, q in edges):
            continue
        if any([asg[x] for x in tri].count(0) != 1 for tri in triangles):
            continue
        out.append(asg)
    return out


def test_is_valid_examples():
    good = dict(a=0, e=1, c=1, d=0, b=1, f=1, g=1)
    assert is_valid(good, GRAPH)
    assert not is_valid(dict(good, e=0, b=0), GRAPH)
    assert not is_valid({k: 1 for k in LABELS}, GRAPH)


def test_is_valid_schema_errors():
    with pytest.raises(SchemaError):
        is_valid({**{k: 1 for k in LABELS}, "z": 0}, GRAPH)
    with pytest.raises(SchemaError):
        is_valid({k: 1 for k in "abcdef"}, GRAPH)


def test_enumerate_matches_brute_force():
    valid = enumerate_valid(GRAPH)
    assert len(valid) == 11
    assert valid == _brute_force_valid()
    keys = [tuple(a[k] for k in LABELS) for a in valid]
    assert keys == sorted(keys)


def test_enumerate_small_graphs():
    tri = graph_from_edges("xyz", [("x", "y"), ("y", "z"), ("x", "z")])
    assert len(enumerate_valid(tri)) == 3
    single = graph_from_edges("x", [])
    assert enumerate_valid(single) == [{"x": 0}, {"x": 1}]


def test_enumerate_size_limit():
    big = graph_from_edges([f"n{i}" for i in range(25)], [])
    with pytest.raises(SizeError):
        enumerate_valid(big)


def test_enumeration_closed_under_swap():
    valid = enumerate_valid(GRAPH)
    as_set = {tuple(sorted(a.items())) for a in valid}
    for asg in valid:
        swapped = {SWAP[k]: v for k, v in asg.items()}
        assert is_valid(swapped, GRAPH)
        assert tuple(sorted(swapped.items())) in as_set


def test_two_zeros_when_g_is_one():
    for asg in enumerate_valid(GRAPH):
        if asg["g"] == 1:
            assert sum(asg[k] == 0 for k in "aecdbf") == 2


def test_event_mass_identity():
    rep = event_mass_identity(GRAPH)
    assert len(rep.assignments) == 11
    assert rep.residuals == [0] * 11
    assert rep.ok
    # hand evaluation: a0 d0 g1 forces e1 c1 b1 f1, giving 1 = 1 - 0 + 0
    asg = dict(a=0, d=0, g=1, e=1, c=1, b=1, f=1)
    assert asg in rep.assignments
    # g0 with a0 d0: both sides 0 = 1 - 1 + 0
    asg = dict(a=0, d=0, g=0, e=1, c=1, b=1, f=1)
    assert asg in rep.assignments
    assert EventSpec.of(a=0, d=0).holds(asg) and EventSpec.of(e=1, g=0).holds(asg)
    assert not TARGET_EVENT.holds(asg)


def test_event_mass_identity_requires_figure1():
    tri = graph_from_edges("xyz", [("x", "y"), ("y", "z"), ("x", "z")])
    with pytest.raises(PreconditionError):
        event_mass_identity(tri)


def test_event_spec_validation():
    with pytest.raises(SchemaError):
        EventSpec((("a", 0), ("a", 1)))
    with pytest.raises(ValueError):
        EventSpec((("a", 2),))
    with pytest.raises(SchemaError):
        feasibility(GRAPH, [(EventSpec.of(z=0), 0.5)])
    with pytest.raises(SchemaError):
        feasibility(GRAPH, [(EventSpec.of(a=0), 1.5)])
    with pytest.raises(SchemaError):
        feasibility(GRAPH, [(("a", 0), 0.5)])


def test_paper_constraints_infeasible_at_45():
    cfg = build_figure1(math.pi / 4, math.pi / 4)
    res = feasibility(GRAPH, chain_constraints(cfg))
    assert res.verdict == "infeasible"
    cert = res.certificate
    assert cert.value == pytest.approx(-1 / 36, abs=1e-12)
    assert cert.bounded_event == TARGET_EVENT
    assert cert.multipliers == (1.0, -1.0, 1.0, 0.0)
    # combined function is the indicator of {a0, d0, g1}
    assert cert.combined == tuple(float(TARGET_EVENT.holds(a)) for a in res.assignments)


def test_uniform_constraints_feasible():
    events = [EventSpec.of(a=0, d=0), EventSpec.of(e=1, g=0), EventSpec.of(b=0, g=0),
              EventSpec.of(g=1), EventSpec.of(c=0)]
    cons = uniform_constraints(GRAPH, events)
    res = feasibility(GRAPH, cons)
    assert res.feasible
    w = np.array(res.witness)
    assert w.min() >= -1e-10 and abs(w.sum() - 1) <= 1e-9
    for ev, p in cons:
        mass = sum(wk for wk, a in zip(w, res.assignments) if ev.holds(a))
        assert abs(mass - p) <= 1e-9
    # the constructing distribution is itself a witness
    uniform = np.full(11, 1 / 11)
    for ev, p in cons:
        assert abs(sum(uk for uk, a in zip(uniform, res.assignments) if ev.holds(a)) - p) <= 1e-12


def test_sure_event_only():
    res = feasibility(GRAPH, [(EventSpec(()), 1.0)])
    assert res.feasible


def test_generic_infeasible_gets_lp_certificate():
    # a and e are orthogonal, so both 0 has zero mass in every model
    res = feasibility(GRAPH, [(EventSpec.of(a=0, e=0), 0.25)])
    assert not res.feasible
    cert = res.certificate
    assert cert.source == "lp"
    assert cert.value < -1e-12
    assert min(cert.combined) >= 0


@settings(max_examples=100, deadline=None)
@given(angles, angles)
def test_feasibility_sound_for_paper_constraints(theta, theta_prime):
    cfg = build_figure1(theta, theta_prime)
    graph = orthogonality_graph(cfg)
    res = feasibility(graph, chain_constraints(cfg))
    assert not res.feasible
    cert = res.certificate
    assert abs(cert.value - final_value(cfg.params)) <= 1e-12
    # recompute the signed combination independently per assignment
    cons = chain_constraints(cfg)
    for asg, comb in zip(res.assignments, cert.combined):
        direct = sum(y * ev.holds(asg) for y, (ev, _) in zip(cert.multipliers, cons)) + cert.multipliers[-1]
        assert direct == comb
        assert comb >= 0
        assert comb >= float(TARGET_EVENT.holds(asg))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=11, max_size=11).filter(lambda w: sum(w) > 0.1))
def test_feasible_witness_reproduces_constraints(weights):
    w = np.array(weights) / sum(weights)
    valid = enumerate_valid(GRAPH)
    events = [EventSpec.of(a=0, d=0), EventSpec.of(e=1, g=0), EventSpec.of(b=0, g=0), EventSpec.of(f=1)]
    cons = [(ev, float(sum(wk for wk, a in zip(w, valid) if ev.holds(a)))) for ev in events]
    res = feasibility(GRAPH, cons)
    assert res.feasible
    for ev, p in cons:
        mass = sum(wk for wk, a in zip(res.witness, res.assignments) if ev.holds(a))
        assert abs(mass - p) <= 1e-9


def test_assignments_csv():
    text = assignments_to_csv(enumerate_valid(GRAPH), GRAPH.nodes)
    lines = text.splitlines()
    assert lines[0] == "a,b,c,d,e,f,g"
    assert len(lines) == 12
    assert all(set(ln.split(",")) <= {"0", "1"} for ln in lines[1:])
