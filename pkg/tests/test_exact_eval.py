from fractions import Fraction

import pytest

from qreliab.cq import parse_query
from qreliab.errors import CapExceededError, NonHierarchicalQueryError
from qreliab.evaluate import (
    pqe_brute,
    pqe_safe,
    rewrite_prob1,
    ur_brute,
    ur_safe,
)
from qreliab.gadgets import q1_query
from qreliab.instances import Instance, ProbAssignment, parse_instance

Q1 = q1_query()
HALF = ProbAssignment.uniform(Fraction(1, 2))


def test_ur_brute_single_triangle():
    i = parse_instance("R(a)\nS(a,b)\nT(b)\n")
    # exactly the worlds containing all three facts
    assert ur_brute(Q1, i) == 1


def test_ur_brute_five_fact_instance():
    i = parse_instance("R(a)\nR(b)\nS(a,c)\nS(b,c)\nT(c)\n")
    assert ur_brute(Q1, i) == 7


def test_ur_brute_no_match():
    i = parse_instance("R(a)\nT(b)\n")
    assert ur_brute(Q1, i) == 0


def test_ur_brute_free_facts_double():
    base = parse_instance("R(a)\nS(a,b)\nT(b)\n")
    extra = parse_instance("R(a)\nS(a,b)\nT(b)\nT(zzz)\n")
    assert ur_brute(Q1, extra) == 2 * ur_brute(Q1, base)


def test_ur_brute_cap():
    facts = "".join(f"R(c{i})\nS(c{i},d)\n" for i in range(20)) + "T(d)\n"
    with pytest.raises(CapExceededError):
        ur_brute(Q1, parse_instance(facts), cap=20)


def test_pqe_brute_uniform_half():
    i = parse_instance("R(a)\nS(a,b)\nT(b)\n")
    assert pqe_brute(Q1, i, HALF) == Fraction(1, 8)


def test_pqe_brute_certain_facts_not_enumerated():
    i = parse_instance("R(a)\nS(a,b)\nT(b)\n")
    phi = ProbAssignment.for_relations(
        {"R": Fraction(1, 3), "S": Fraction(1), "T": Fraction(1, 2)}
    )
    assert pqe_brute(Q1, i, phi, cap=2) == Fraction(1, 6)


def test_pqe_brute_empty_instance():
    assert pqe_brute(Q1, Instance(), HALF) == 0


def test_pqe_brute_certain_match():
    i = parse_instance("R(a)\nS(a,b)\nT(b)\n")
    assert pqe_brute(Q1, i, ProbAssignment.uniform(Fraction(1))) == 1


def test_pqe_safe_requires_hierarchical():
    with pytest.raises(NonHierarchicalQueryError):
        pqe_safe(Q1, Instance(), HALF)


def test_pqe_safe_simple_join():
    q = parse_query("R(x), S(x,y)")
    i = parse_instance("R(a)\nS(a,b)\nS(a,c)\n")
    # P = r * (1 - (1-s)^2) with r = s = 1/2
    assert pqe_safe(q, i, HALF) == Fraction(1, 2) * Fraction(3, 4)
    assert pqe_safe(q, i, HALF) == pqe_brute(q, i, HALF)


def test_pqe_safe_cross_product():
    q = parse_query("R(x), T(y)")
    i = parse_instance("R(a)\nT(b)\nT(c)\n")
    assert pqe_safe(q, i, HALF) == Fraction(1, 2) * Fraction(3, 4)


def test_pqe_safe_ground_atom():
    q = parse_query("R('a')")
    i = parse_instance("R(a)\nR(b)\n")
    phi = ProbAssignment.uniform(Fraction(2, 3))
    assert pqe_safe(q, i, phi) == Fraction(2, 3)
    assert pqe_safe(q, parse_instance("R(b)\n"), phi) == 0


def test_pqe_safe_nested_hierarchy():
    q = parse_query("S(x,y), U(x,y,z)")
    i = parse_instance("S(a,b)\nU(a,b,c)\nU(a,b,d)\nS(a,c)\n")
    assert pqe_safe(q, i, HALF) == pqe_brute(q, i, HALF)


def test_ur_safe_matches_brute():
    q = parse_query("R(x), S(x,y)")
    i = parse_instance("R(a)\nR(b)\nS(a,c)\nS(b,d)\n")
    assert ur_safe(q, i) == ur_brute(q, i)


def test_rewrite_prob1_drops_dangling_edges():
    i = parse_instance("R(a)\nS(a,b)\nS(a,c)\nT(b)\n")
    r, s = Fraction(1, 2), Fraction(1, 3)
    # S(a,c) has no T(c): only S(a,b) can contribute.
    assert rewrite_prob1(i, r, s) == r * s


def test_rewrite_prob1_matches_brute():
    i = parse_instance("R(a)\nR(b)\nS(a,b)\nS(b,b)\nS(b,c)\nT(b)\nT(c)\n")
    r, s = Fraction(2, 5), Fraction(3, 7)
    phi = ProbAssignment.for_relations({"R": r, "S": s, "T": Fraction(1)})
    assert rewrite_prob1(i, r, s) == pqe_brute(Q1, i, phi)


def test_brute_cap_env_override(monkeypatch):
    facts = "".join(f"R(c{i})\nS(c{i},d)\n" for i in range(8)) + "T(d)\n"
    i = parse_instance(facts)
    monkeypatch.setenv("QRELIAB_BRUTE_CAP", "8")
    with pytest.raises(CapExceededError):
        ur_brute(Q1, i)
    monkeypatch.setenv("QRELIAB_BRUTE_CAP", "20")
    assert ur_brute(Q1, i) > 0
