"""
The refutation checker, proof restriction, the variable-disjoint split,
and the proof text format.
"""

import random

import pytest

from proofbench.core import Cnf, cnf, eval_cnf, restrict_cnf
from proofbench.encoder import build_php
from proofbench.oracle import dpll_refute, dpll_sat
from proofbench.resolution import (
    ResolutionProof,
    check_refutation,
    emit_proof,
    join_disjoint,
    parse_proof,
    restrict_proof,
    split_disjoint_refutation,
)

PAIR = cnf(1, [[1], [-1]])
PAIR_PROOF = ResolutionProof(
    PAIR,
    (
        (frozenset({1}), ("A", 0)),
        (frozenset({-1}), ("A", 1)),
        (frozenset(), ("R", 0, 1, 1)),
    ),
)


def test_smallest_resolvable_pair():
    rep = check_refutation(PAIR, PAIR_PROOF)
    assert rep.ok and rep.lines == 3
    assert rep.bit_size == len(emit_proof(PAIR_PROOF).encode())


def test_php_2_1_five_lines():
    php = build_php(2, 1)
    assert php == cnf(2, [[1], [2], [-1, -2]])
    proof = ResolutionProof(
        php,
        (
            (frozenset({1}), ("A", 0)),
            (frozenset({2}), ("A", 1)),
            (frozenset({-1, -2}), ("A", 2)),
            (frozenset({-2}), ("R", 0, 2, 1)),
            (frozenset(), ("R", 1, 3, 2)),
        ),
    )
    assert check_refutation(php, proof).ok


def test_pivot_missing_is_invalid():
    proof = ResolutionProof(
        PAIR,
        (
            (frozenset({1}), ("A", 0)),
            (frozenset({1}), ("A", 0)),
            (frozenset(), ("R", 0, 1, 1)),
        ),
    )
    rep = check_refutation(PAIR, proof)
    assert not rep.ok and rep.step == 2 and "pivot" in rep.reason


def test_weakening_accepts_supersets_strict_does_not():
    f = cnf(2, [[1], [-1]])
    proof = ResolutionProof(
        f,
        (
            (frozenset({1, 2}), ("A", 0)),
            (frozenset({-1, 2}), ("A", 1)),
            (frozenset({2}), ("R", 0, 1, 1)),
            (frozenset({-1}), ("A", 1)),
            (frozenset({1}), ("A", 0)),
            (frozenset(), ("R", 4, 3, 1)),
        ),
    )
    assert check_refutation(f, proof, mode="weakening").ok
    assert not check_refutation(f, proof, mode="strict").ok


def test_non_empty_final_clause_rejected():
    proof = ResolutionProof(PAIR, ((frozenset({1}), ("A", 0)),))
    rep = check_refutation(PAIR, proof)
    assert not rep.ok and "empty" in rep.reason


# ---------------------------------------------------------------------------
# restriction


def test_restrict_empty_assignment_is_identity():
    out = restrict_proof(PAIR, PAIR_PROOF, {})
    assert out.lines == PAIR_PROOF.lines
    assert check_refutation(PAIR, out, mode="weakening").ok


def test_restrict_five_line_example():
    f = cnf(2, [[1, 2], [-1], [-2]])
    proof = ResolutionProof(
        f,
        (
            (frozenset({1, 2}), ("A", 0)),
            (frozenset({-1}), ("A", 1)),
            (frozenset({2}), ("R", 0, 1, 1)),
            (frozenset({-2}), ("A", 2)),
            (frozenset(), ("R", 2, 3, 2)),
        ),
    )
    assert check_refutation(f, proof).ok
    out = restrict_proof(f, proof, {2: 0})
    g = restrict_cnf(f, {2: 0})
    assert g == cnf(2, [[1], [-1]])
    rep = check_refutation(g, out, mode="weakening")
    assert rep.ok and rep.lines <= len(proof.lines)


def test_restrict_trivializes():
    f = cnf(1, [[1]])
    proof = ResolutionProof(f, ((frozenset({1}), ("A", 0)),))
    with pytest.raises(ValueError, match="trivializes"):
        restrict_proof(f, proof, {1: 1})


def _random_unsat_with_proof(rng, max_n=4):
    while True:
        n = rng.randint(1, max_n)
        clauses = []
        for _ in range(rng.randint(2, 2 * n + 2)):
            width = rng.randint(1, min(2, n))
            vs = rng.sample(range(1, n + 1), width)
            clauses.append([v if rng.random() < 0.5 else -v for v in vs])
        f = cnf(n, clauses)
        if dpll_sat(f)[0] == "unsat":
            return f, dpll_refute(f)


def test_restriction_never_lengthens_suite():
    rng = random.Random(1106)
    for _ in range(60):
        f, proof = _random_unsat_with_proof(rng)
        rho = {
            v: rng.randint(0, 1)
            for v in rng.sample(range(1, f.n + 1), rng.randint(0, f.n - 1) if f.n > 1 else 0)
        }
        out = restrict_proof(f, proof, rho)
        rep = check_refutation(restrict_cnf(f, rho), out, mode="weakening")
        assert rep.ok and rep.lines <= len(proof.lines)


# ---------------------------------------------------------------------------
# feasible-disjunction split


def test_split_b_side_when_a_satisfiable():
    a0 = cnf(1, [[1]])
    b0 = cnf(1, [[1], [-1]])
    a, b, joined = join_disjoint(a0, b0)
    side, out = split_disjoint_refutation(a, b, dpll_refute(joined))
    assert side == "B"
    assert check_refutation(b, out, mode="weakening").ok


def test_split_a_side_when_b_satisfiable():
    a0 = cnf(1, [[1], [-1]])
    b0 = cnf(1, [[1]])
    a, b, joined = join_disjoint(a0, b0)
    side, out = split_disjoint_refutation(a, b, dpll_refute(joined))
    assert side in ("A", "B")
    target = a if side == "A" else b
    assert check_refutation(target, out, mode="weakening").ok
    # b is satisfiable, so the refuted side must be a
    assert side == "A"


def test_split_both_unsat_still_valid():
    a0 = cnf(1, [[1], [-1]])
    b0 = cnf(2, [[1], [2], [-1, -2]])
    a, b, joined = join_disjoint(a0, b0)
    side, out = split_disjoint_refutation(a, b, dpll_refute(joined))
    target = a if side == "A" else b
    assert check_refutation(target, out, mode="weakening").ok


def test_split_rejects_shared_variables():
    f = cnf(1, [[1], [-1]])
    with pytest.raises(ValueError):
        split_disjoint_refutation(f, f, dpll_refute(f))


# ---------------------------------------------------------------------------
# proof text format


def test_parse_three_line_refutation():
    proof = parse_proof("A 0\nA 1\nR 0 1 1 :\n", PAIR)
    assert proof.lines == PAIR_PROOF.lines


def test_proof_round_trip_suite():
    rng = random.Random(86)
    for _ in range(200):
        f, proof = _random_unsat_with_proof(rng)
        text = emit_proof(proof)
        again = parse_proof(text, f)
        assert again.lines == proof.lines
        assert emit_proof(again) == text


def test_forward_reference_rejected():
    with pytest.raises(ValueError, match="line 1"):
        parse_proof("R 2 1 1 :\n", PAIR)


def test_weakened_axiom_line_grammar():
    f = cnf(2, [[1]])
    proof = parse_proof("A 0 : 1 2\n", f)
    assert proof.lines[0][0] == frozenset({1, 2})


# ---------------------------------------------------------------------------
# soundness cross-check


def test_checker_sound_against_oracle():
    # valid refutations exist only for formulas with no satisfying assignment
    rng = random.Random(3111)
    refuted = satisfied = 0
    for _ in range(200):
        n = rng.randint(1, 10)
        clauses = []
        for _ in range(rng.randint(1, 2 * n)):
            width = rng.randint(1, min(3, n))
            vs = rng.sample(range(1, n + 1), width)
            clauses.append([v if rng.random() < 0.5 else -v for v in vs])
        f = cnf(n, clauses)
        res = dpll_sat(f)
        if res[0] == "sat":
            assert eval_cnf(f, res[1])
            satisfied += 1
        else:
            proof = dpll_refute(f)
            assert check_refutation(f, proof).ok
            # exhaustive confirmation that no model exists
            assert all(
                not eval_cnf(f, [(x >> i) & 1 for i in range(n)])
                for x in range(1 << n)
            )
            refuted += 1
    assert refuted >= 20 and satisfied >= 20


def test_strict_validity_implies_weakening_validity():
    rng = random.Random(99)
    for _ in range(50):
        f, proof = _random_unsat_with_proof(rng)
        if check_refutation(f, proof, mode="strict").ok:
            assert check_refutation(f, proof, mode="weakening").ok
