"""The main counting reduction: from bipartite independent-set-pair counting
to uniform reliability of the R*/S*/T* query family.

Builds the oracle instances D_p, assembles the linear system whose matrix is
a Vandermonde in the per-pair coefficients, solves it exactly, and recovers
the independent-set-pair count.  Also provides the query-generalization
transform (arbitrary non-hierarchical query <- R*/S*/T* family) and the
power-of-two probability merge.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .bipartite import BipartiteGraph, iter_pairs, profile_of_masks
from .cq import Query, noncomparable_pair_and_rst
from .errors import (
    DuplicateNodeError,
    InvalidProfileError,
    QReliabError,
    SchemaMismatchError,
)
from .evaluate import ur_brute
from .gadgets import GadgetCounts, closed_counts, qrst_query
from .instances import Fact, Instance, ProbAssignment, fresh_constant

# Mersenne primes used by the modular solver path.
_SOLVER_PRIMES = [(1 << 61) - 1, (1 << 89) - 1, (1 << 107) - 1]

ProfileKey = tuple[int, int, int, int, int]


@dataclass(frozen=True)
class ReductionParams:
    r: int
    s: int
    t: int
    m: int
    n_left: int
    n_right: int
    M1: int
    M2: int
    M3: int
    M: int


@dataclass(frozen=True)
class ReductionRun:
    params: ReductionParams
    counts: GadgetCounts
    cells: tuple[ProfileKey, ...]
    alpha: Mapping[ProfileKey, Fraction]
    n_vector: list[int]
    y_vector: Mapping[ProfileKey, int]
    p_result: int


def reduction_params(g: BipartiteGraph, r: int, s: int, t: int) -> ReductionParams:
    if r < 1 or s < 1 or t < 1:
        raise QReliabError("r, s, t must all be positive")
    m = g.m
    n_left, n_right = len(g.left), len(g.right)
    m1 = 4 * m * s + 1
    m2 = m1 + 2 * m * (t + s) * m1 + 1
    m3 = m1 + m2 + n_left * (t + s) * m2 + 1
    big_m = (n_left + 1) * (n_right + 1) * (m + 1) ** 3
    return ReductionParams(r, s, t, m, n_left, n_right, m1, m2, m3, big_m)


def override_params(params: ReductionParams, M1: int, M2: int, M3: int) -> ReductionParams:
    """Replace the multiplicities with tiny test values.

    Breaks the invertibility guarantees of the full reduction; intended only
    for downsized verification of the per-pair count formula.
    """
    return replace(params, M1=M1, M2=M2, M3=M3)


def _ab_gadget_facts(r: int, s: int, t: int, a: str, b: str) -> list[Fact]:
    facts = [Fact(f"R{k}", (a,)) for k in range(1, r + 1)]
    facts += [Fact(f"S{k}", (a, b)) for k in range(1, s + 1)]
    facts += [Fact(f"T{k}", (b,)) for k in range(1, t + 1)]
    return facts


def _ordered_edges(g: BipartiteGraph) -> list[tuple[str, str]]:
    left_pos = {u: i for i, u in enumerate(g.left)}
    right_pos = {w: i for i, w in enumerate(g.right)}
    return sorted(g.edges, key=lambda e: (left_pos[e[0]], right_pos[e[1]]))


def build_Dp(
    g: BipartiteGraph,
    r: int,
    s: int,
    t: int,
    p: int,
    params: ReductionParams | None = None,
    override: Mapping[str, int] | None = None,
) -> Instance:
    """The p-th oracle instance: graph vertices as R*/T* bundles, plus the
    gadget copies whose multiplicities encode p into the world counts.

    ``override`` replaces individual multiplicities (keys M1, M2, M3) for
    downsized testing; such instances are not usable for the full reduction.
    """
    if p < 0:
        raise QReliabError("p must be non-negative")
    if params is None:
        params = reduction_params(g, r, s, t)
    if override:
        unknown = set(override) - {"M1", "M2", "M3"}
        if unknown:
            raise QReliabError(f"unknown override keys {sorted(unknown)}")
        params = override_params(
            params,
            override.get("M1", params.M1),
            override.get("M2", params.M2),
            override.get("M3", params.M3),
        )
    facts: list[Fact] = []
    for u in g.left:
        facts += [Fact(f"R{k}", (u,)) for k in range(1, r + 1)]
    for w in g.right:
        facts += [Fact(f"T{k}", (w,)) for k in range(1, t + 1)]
    for ei, (u, w) in enumerate(_ordered_edges(g)):
        for copy in range(1, p + 1):
            b = fresh_constant(f"e{ei}.b", [copy])
            c = fresh_constant(f"e{ei}.c", [copy])
            # chain gadget (u, b, c, w)
            facts += [Fact(f"S{k}", (u, b)) for k in range(1, s + 1)]
            facts += [Fact(f"T{k}", (b,)) for k in range(1, t + 1)]
            facts += [Fact(f"S{k}", (c, b)) for k in range(1, s + 1)]
            facts += [Fact(f"R{k}", (c,)) for k in range(1, r + 1)]
            facts += [Fact(f"S{k}", (c, w)) for k in range(1, s + 1)]
        for copy in range(1, params.M1 * p + 1):
            b = fresh_constant(f"e{ei}.m", [copy])
            facts += _ab_gadget_facts(r, s, t, u, b)
    for ui, u in enumerate(g.left):
        for copy in range(1, params.M2 * p + 1):
            b = fresh_constant(f"u{ui}.b", [copy])
            facts += _ab_gadget_facts(r, s, t, u, b)
    for wi, w in enumerate(g.right):
        for copy in range(1, params.M3 * p + 1):
            a = fresh_constant(f"w{wi}.a", [copy])
            facts += _ab_gadget_facts(r, s, t, a, w)
    return Instance(facts)


def profile_cells(params: ReductionParams) -> tuple[ProfileKey, ...]:
    """All (i, j, c, d, d') index cells in lexicographic order."""
    m = params.m
    return tuple(
        (i, j, c, d, dp)
        for i in range(params.n_left + 1)
        for j in range(params.n_right + 1)
        for c in range(m + 1)
        for d in range(m + 1)
        for dp in range(m + 1)
    )


def _alpha_cell(
    key: ProfileKey, counts: GadgetCounts, params: ReductionParams
) -> Fraction:
    """Per-pair world-count coefficient, extended to the full index grid.

    Cells with c + d + d' > m have no realizing pair (their count variable is
    identically zero) and get a negative excluded-edge exponent; the value is
    then a non-integer rational, which is fine since only its distinctness
    matters for the system matrix.
    """
    i, j, c, d, dp = key
    e = params.m - c - d - dp
    value = Fraction(counts.gamma) ** c
    value *= Fraction(counts.delta_r) ** d
    value *= Fraction(counts.delta_t) ** dp
    value *= Fraction(counts.delta_bot) ** e
    value *= Fraction(counts.lam_r) ** (params.M1 * (c + d) + params.M2 * i)
    value *= Fraction(counts.lam_t) ** (params.M3 * j)
    value *= Fraction(counts.lam_rbar) ** (
        params.M1 * (dp + e) + params.M2 * (params.n_left - i)
    )
    value *= Fraction(counts.lam_tbar) ** (params.M3 * (params.n_right - j))
    return value


def alpha_coefficient(
    profile_key: ProfileKey,
    counts: GadgetCounts,
    params: ReductionParams,
) -> int:
    """The coefficient for a realizable profile (c + d + d' <= m)."""
    i, j, c, d, dp = profile_key
    if min(i, j, c, d, dp) < 0 or c + d + dp > params.m:
        raise InvalidProfileError(f"profile {profile_key} is not realizable")
    if i > params.n_left or j > params.n_right:
        raise InvalidProfileError(f"profile {profile_key} is out of range")
    e = params.m - c - d - dp
    s, t = params.s, params.t
    # Exponent layering that makes the coefficients distinct: each summand
    # stays below the next multiplicity level.
    assert s * (d + dp + 2 * e) < params.M1 or params.M1 != 4 * params.m * s + 1
    value = _alpha_cell(profile_key, counts, params)
    assert value.denominator == 1
    return value.numerator


def _profile_weights(
    g: BipartiteGraph, params: ReductionParams, cap: int | None = None
) -> dict[ProfileKey, int]:
    """Number of pairs per profile cell, times the dropped-vertex weights."""
    pr = (1 << params.r) - 1
    pt = (1 << params.t) - 1
    weights: dict[ProfileKey, int] = {}
    for r_mask, t_mask in iter_pairs(g, cap):
        key = profile_of_masks(g, r_mask, t_mask).key
        weights[key] = weights.get(key, 0) + 1
    return {
        key: count
        * pr ** (params.n_left - key[0])
        * pt ** (params.n_right - key[1])
        for key, count in weights.items()
    }


def np_analytic(
    g: BipartiteGraph,
    r: int,
    s: int,
    t: int,
    p: int,
    params: ReductionParams | None = None,
    cap: int | None = None,
) -> int:
    """Violating-world count of D_p predicted by the per-pair formula."""
    if params is None:
        params = reduction_params(g, r, s, t)
    counts = closed_counts(r, s, t)
    total = 0
    for key, weight in _profile_weights(g, params, cap).items():
        total += weight * alpha_coefficient(key, counts, params) ** p
    return total


def _n_vector_analytic(
    g: BipartiteGraph,
    counts: GadgetCounts,
    params: ReductionParams,
    cap: int | None = None,
) -> list[int]:
    """All N_p at once, with incrementally maintained coefficient powers."""
    weights = _profile_weights(g, params, cap)
    alphas = {
        key: alpha_coefficient(key, counts, params) for key in weights
    }
    powers = {key: 1 for key in weights}
    n_vector = []
    for _ in range(params.M):
        n_vector.append(sum(w * powers[k] for k, w in weights.items()))
        for k in powers:
            powers[k] *= alphas[k]
    return n_vector


def solve_vandermonde(nodes: Sequence, rhs: Sequence) -> list[Fraction]:
    """Exact solution of sum_k y_k * node_k**p = rhs_p, p = 0..n-1.

    Quadratic in n: one master-polynomial build plus a synthetic division and
    two dot products per node.  Nodes must be pairwise distinct.
    """
    n = len(nodes)
    if len(rhs) != n:
        raise QReliabError("nodes and right-hand side differ in length")
    if len(set(nodes)) != n:
        raise DuplicateNodeError("interpolation nodes are not pairwise distinct")
    if n == 0:
        return []

    # master[p] = coefficient of x^p in prod_k (x - node_k)
    master = [1]
    for node in nodes:
        master = [0] + master
        for p in range(len(master) - 1):
            master[p] -= node * master[p + 1]

    solution = []
    for node in nodes:
        # quotient of master by (x - node)
        quotient = [0] * n
        quotient[n - 1] = master[n]
        for p in range(n - 1, 0, -1):
            quotient[p - 1] = master[p] + node * quotient[p]
        denom = 0
        for p in range(n - 1, -1, -1):
            denom = denom * node + quotient[p]
        numer = sum(q * b for q, b in zip(quotient, rhs))
        if isinstance(numer, int) and isinstance(denom, int) and numer % denom == 0:
            solution.append(Fraction(numer // denom))
        else:
            solution.append(Fraction(numer, denom))
    return solution


def _solve_vandermonde_mod(nodes: list[int], rhs: list[int], prime: int) -> list[int]:
    """The same dual-Vandermonde solve, in the prime field."""
    n = len(nodes)
    xs = [x % prime for x in nodes]
    bs = [b % prime for b in rhs]
    if len(set(xs)) != n:
        raise DuplicateNodeError("node collision modulo solver prime")
    master = [1]
    for x in xs:
        master = [0] + master
        for p in range(len(master) - 1):
            master[p] = (master[p] - x * master[p + 1]) % prime
    out = []
    for x in xs:
        quotient = [0] * n
        quotient[n - 1] = master[n]
        for p in range(n - 1, 0, -1):
            quotient[p - 1] = (master[p] + x * quotient[p]) % prime
        denom = 0
        for p in range(n - 1, -1, -1):
            denom = (denom * x + quotient[p]) % prime
        numer = sum(q * b for q, b in zip(quotient, bs)) % prime
        out.append(numer * pow(denom, -1, prime) % prime)
    return out


def _solve_scaled_system(nodes: list[int], rhs: list[int], bound: int) -> list[int]:
    """Solve with two-prime CRT; valid when every solution entry lies in
    [0, bound).  Verified afterwards against the first few equations."""
    residues = []
    primes = []
    for prime in _SOLVER_PRIMES:
        if len(primes) == 2:
            break
        try:
            residues.append(_solve_vandermonde_mod(nodes, rhs, prime))
            primes.append(prime)
        except DuplicateNodeError:
            continue
    if len(primes) < 2:
        raise DuplicateNodeError("node collisions modulo every solver prime")
    p1, p2 = primes
    if p1 * p2 <= bound:
        raise QReliabError("solution bound exceeds the CRT modulus")
    inv = pow(p1, -1, p2)
    solution = []
    for a1, a2 in zip(*residues):
        y = (a1 + ((a2 - a1) * inv % p2) * p1) % (p1 * p2)
        if y >= bound:
            raise QReliabError("recovered value exceeds its combinatorial bound")
        solution.append(y)
    for p in range(min(4, len(rhs))):
        lhs = sum(y * node**p for y, node in zip(solution, nodes))
        if lhs != rhs[p]:
            raise QReliabError(f"modular solution fails exact equation p={p}")
    return solution


def run_reduction(
    g: BipartiteGraph,
    r: int,
    s: int,
    t: int,
    oracle: str = "analytic",
    solver: str = "auto",
    emit_dir: str | None = None,
    pair_cap: int | None = None,
    ur_cap: int | None = None,
) -> ReductionRun:
    """End-to-end reduction: oracle counts N_p, Vandermonde solve, recovery
    of the independent-set-pair count."""
    if oracle not in ("analytic", "brute"):
        raise QReliabError(f"unknown oracle {oracle!r}")
    if solver not in ("auto", "exact", "modular"):
        raise QReliabError(f"unknown solver {solver!r}")
    params = reduction_params(g, r, s, t)
    counts = closed_counts(r, s, t)
    cells = profile_cells(params)
    alpha = {key: _alpha_cell(key, counts, params) for key in cells}
    if len(set(alpha.values())) != len(cells):
        raise DuplicateNodeError(
            "coefficients are not pairwise distinct; the system is singular"
        )

    query = qrst_query(r, s, t)
    n_vector: list[int] = []
    if oracle == "brute" or emit_dir is not None:
        for p in range(params.M):
            dp_inst = build_Dp(g, r, s, t, p, params)
            if emit_dir is not None:
                os.makedirs(emit_dir, exist_ok=True)
                path = os.path.join(emit_dir, f"D_{p}.facts")
                with open(path, "w") as fh:
                    fh.write(dp_inst.serialize())
            if oracle == "brute":
                satisfied = ur_brute(query, dp_inst, cap=ur_cap)
                n_vector.append((1 << len(dp_inst)) - satisfied)
    if oracle == "analytic":
        n_vector = _n_vector_analytic(g, counts, params, cap=pair_cap)

    # Clear denominators: nodes scaled by L stay distinct, and the right-hand
    # side picks up L**p.
    scale = 1
    for value in alpha.values():
        scale = math.lcm(scale, value.denominator)
    nodes = []
    for key in cells:
        scaled = alpha[key] * scale
        assert scaled.denominator == 1
        nodes.append(scaled.numerator)
    rhs = []
    power = 1
    for n_p in n_vector:
        rhs.append(n_p * power)
        power *= scale

    pr = (1 << r) - 1
    pt = (1 << t) - 1
    if solver == "exact" or (solver == "auto" and params.M <= 40):
        raw = solve_vandermonde(nodes, rhs)
        y_values = []
        for value in raw:
            if value.denominator != 1:
                raise QReliabError("non-integral solution entry")
            y_values.append(value.numerator)
    else:
        bound = (
            (1 << (params.n_left + params.n_right))
            * pr**params.n_left
            * pt**params.n_right
            + 1
        )
        y_values = _solve_scaled_system(nodes, rhs, bound)

    y_vector = dict(zip(cells, y_values))
    p_result = 0
    for (i, j, c, d, dp), y in y_vector.items():
        if c != 0:
            continue
        weight = pr ** (params.n_left - i) * pt ** (params.n_right - j)
        if y % weight != 0:
            raise QReliabError("non-integral division during count recovery")
        p_result += y // weight
    return ReductionRun(params, counts, cells, alpha, n_vector, y_vector, p_result)


def _qrst_role_relations(q: Query) -> tuple[str, str, list[int], list[int], list[int], list[int]]:
    """Witness pair and the atom indices per role (x-only, shared, y-only, rest)."""
    x, y, _r, _s, _t = noncomparable_pair_and_rst(q)
    ax = {i for i, a in enumerate(q.atoms) if x in a.variables}
    ay = {i for i, a in enumerate(q.atoms) if y in a.variables}
    x_only = sorted(ax - ay)
    shared = sorted(ax & ay)
    y_only = sorted(ay - ax)
    rest = sorted(set(range(len(q.atoms))) - ax - ay)
    return x, y, x_only, shared, y_only, rest


def lemma_binary_transform(q: Query, i_prime: Instance) -> Instance:
    """Map an instance of the R*/S*/T* family to an instance of q with the
    same number of satisfying subsets.

    The k-th relation of each family role corresponds to the k-th atom (in
    query order) of the matching role of q.  All variables other than the
    witness pair are filled with one shared generated constant, and every atom
    containing neither witness variable receives a single mandatory fact.
    """
    x, y, x_only, shared, y_only, rest = _qrst_role_relations(q)
    r, s, t = len(x_only), len(shared), len(y_only)
    expected = {f"R{k}": 1 for k in range(1, r + 1)}
    expected |= {f"S{k}": 2 for k in range(1, s + 1)}
    expected |= {f"T{k}": 1 for k in range(1, t + 1)}
    for fact in i_prime.facts:
        if fact.relation not in expected or len(fact.args) != expected[fact.relation]:
            raise SchemaMismatchError(
                f"fact {fact} does not fit the R*/S*/T* schema for (r,s,t)="
                f"({r},{s},{t})"
            )

    c0 = fresh_constant("c0", [])

    def instantiate(atom_idx: int, binding: dict[str, str]) -> Fact:
        atom = q.atoms[atom_idx]
        args = tuple(
            binding.get(term.name, c0) if term.is_variable else term.name
            for term in atom.args
        )
        return Fact(atom.relation, args)

    facts = []
    for k in range(1, r + 1):
        for fact in i_prime.facts_of(f"R{k}"):
            facts.append(instantiate(x_only[k - 1], {x: fact.args[0]}))
    for k in range(1, s + 1):
        for fact in i_prime.facts_of(f"S{k}"):
            facts.append(instantiate(shared[k - 1], {x: fact.args[0], y: fact.args[1]}))
    for k in range(1, t + 1):
        for fact in i_prime.facts_of(f"T{k}"):
            facts.append(instantiate(y_only[k - 1], {y: fact.args[0]}))
    for atom_idx in rest:
        facts.append(instantiate(atom_idx, {}))
    return Instance(facts)


def merge_power2(q_rst: Query, i_prime: Instance) -> tuple[Instance, ProbAssignment]:
    """Merge each complete R*/S*/T* bundle into one fact with a power-of-two
    probability, after discarding facts from incomplete bundles (which can
    never join a query match)."""
    _x, _y, x_only, shared, y_only, _rest = _qrst_role_relations(q_rst)
    r, s, t = len(x_only), len(shared), len(y_only)
    if _rest or any(len(q_rst.atoms[i].args) != 1 for i in x_only + y_only):
        raise SchemaMismatchError("query is not of the R*/S*/T* family shape")

    r_names = [q_rst.atoms[i].relation for i in x_only]
    s_names = [q_rst.atoms[i].relation for i in shared]
    t_names = [q_rst.atoms[i].relation for i in y_only]

    merged: list[Fact] = []
    elems = {f.args[0] for name in r_names for f in i_prime.facts_of(name)}
    for a in elems:
        if all(Fact(name, (a,)) in i_prime for name in r_names):
            merged.append(Fact("R", (a,)))
    pairs = {f.args for name in s_names for f in i_prime.facts_of(name)}
    for ab in pairs:
        if all(Fact(name, ab) in i_prime for name in s_names):
            merged.append(Fact("S", ab))
    elems = {f.args[0] for name in t_names for f in i_prime.facts_of(name)}
    for b in elems:
        if all(Fact(name, (b,)) in i_prime for name in t_names):
            merged.append(Fact("T", (b,)))

    phi = ProbAssignment.for_relations(
        {"R": Fraction(1, 1 << r), "S": Fraction(1, 1 << s), "T": Fraction(1, 1 << t)}
    )
    return Instance(merged), phi
