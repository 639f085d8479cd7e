"""Smoke tests for the python bindings."""

import pytest

import edenca


@pytest.fixture(scope="module")
def f2():
    return edenca.make_group("F2")


def test_group_arithmetic(f2):
    assert f2.multiply("a.b", "b^-1.a") == "a.a"
    assert f2.inverse("a.b") == "b^-1.a^-1"
    assert f2.generators() == ["a", "a^-1", "b", "b^-1"]


def test_ball_sizes(f2):
    assert len(f2.ball(0)) == 1
    assert len(f2.ball(2)) == 17
    assert len(f2.ball(4)) == 161
    z2 = edenca.make_group("Z2")
    assert len(z2.ball(2)) == 13


def test_tree_field(f2):
    field = edenca.build_tree_field(f2)
    assert field.f("e") == "b"
    assert field.f("a") == "e"
    assert field.fiber("b") == ["e", "b.a"]
    report = field.verify(5)
    assert report["violations"] == 0
    assert "digraph" in field.to_dot(2)


def test_field_rule_roundtrip(f2):
    rule = edenca.build_field_rule(f2)
    assert rule.num_states == 32
    assert rule.q0 == "(a,0,a)"
    result = rule.roundtrip_check(radius=2, count=10, seed=7)
    assert result["passed"] == result["count"] == 10
    psi = rule.preimage({"e": "(a,0,a)"})
    assert psi["a^-1"] == "(a^-1,0,a)"
    assert rule.evolve(psi)["e"] == "(a,0,a)"


def test_mep_witness(f2):
    rule = edenca.build_field_rule(f2)
    _, psi2, cells, cert = rule.mep_witness("e", {"e": "(a,0,a)"})
    assert cert
    assert cells == ["a^-1"]
    assert psi2["a^-1"] == "(a^-1,1,a)"


def test_slot_rule(f2):
    rule = edenca.build_slot_rule(f2, m=4, n=2)
    assert rule.num_states == 16384
    result = rule.roundtrip_check(radius=1, count=5, seed=7)
    assert result["passed"] == 5
    _, _, cells, cert = rule.mep_witness("e", {"e": rule_q0(rule, f2)})
    assert cert
    assert len(cells) == 1


def rule_q0(rule, group):
    # the minimal state name: every slot points along 'a' with zero payload
    return "((a,0,a,a),(a,0,a,a))"


def test_correspondence(f2):
    rep = edenca.build_correspondence(f2, m=2, n=1, radius=3)
    assert rep["feasible"]
    assert rep["recount_ok"]
    z2 = edenca.make_group("Z2")
    rep2 = edenca.build_correspondence(z2, m=2, n=1, radius=3)
    assert not rep2["feasible"]
    assert rep2["deficiency"] > 0


def test_linear(f2):
    c = edenca.make_group("C2*C2*C2")
    assert edenca.convolve(c, "x", "x") == "e"
    assert edenca.convolve(c, "y + z", "y + z") == "y.z + z.y"
    scans = edenca.muller_kernel_scan(2)
    assert all(s["empty"] for s in scans)
    assert edenca.muller_goe_confirmed()


def test_sweep():
    table = edenca.moore_sweep(max_width=3)
    assert table["all_consistent"]
    assert len(table["rows"]) == 16
