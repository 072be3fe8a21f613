"""
The formula families: prf / sat / rfn / lrfn / con, the satisfiability-to-
proof-search reduction, benchmark CNFs, and template codes.
"""

import itertools
import math
import random

import pytest

from proofbench.core import (
    Cnf,
    CnfCode,
    cnf,
    code_pos,
    decode_cnf,
    emit_dimacs,
    encode_cnf,
    eval_cnf,
    instantiate_template,
    is_normalized_code,
)
from proofbench.encoder import (
    PolyBudget,
    PrfLayout,
    am_reduce,
    build_clique_color,
    build_con,
    build_lrfn,
    build_php,
    build_prf,
    build_prf_template,
    build_rfn,
    build_sat,
    build_strongly_friendly,
    decode_prf_assignment,
    layout_map_text,
)
from proofbench.oracle import circuit_truth_table, dpll_refute, dpll_sat, is_tautology
from proofbench.proofgen import encode_witness, refute_prf_nontaut
from proofbench.resolution import check_refutation

PAIR = cnf(1, [[1], [-1]])


# ---------------------------------------------------------------------------
# layout arithmetic


def test_layout_closed_form():
    for m, n, k in itertools.product((1, 2, 3), repeat=3):
        lay = PrfLayout(m, n, k)
        assert lay.vars_proof == m * (3 * n + k + m)
    assert PrfLayout(2, 1, 1).vars_proof == 12


def test_artifact_variable_counts_match_layout():
    for m, n, k in itertools.product((1, 2), (1, 2), (1, 2)):
        art = build_prf(m, n, k)  # symbolic: code bits are inputs too
        assert art.formula.n == art.layout.total_vars
        assert art.layout.total_vars == m * (3 * n + k + m) + 2 * n * k
        inst = build_prf(m, n, k, encode_cnf(cnf(n, [[1]] * k)))
        assert inst.formula.n == inst.layout.total_vars == m * (3 * n + k + m)


def test_layout_map_covers_every_variable_once():
    lay = PrfLayout(2, 1, 1, symbolic=True)
    lines = layout_map_text(lay).splitlines()
    assert len(lines) == lay.total_vars
    indices = [int(line.split()[0]) for line in lines]
    assert indices == list(range(1, lay.total_vars + 1))
    names = [line.split()[1] for line in lines]
    assert len(set(names)) == len(names)
    assert names[0] == "y[e=0,i=1,j=1]" and names[4] == "ax[j=1]"


# ---------------------------------------------------------------------------
# sat


def int_from_bits(bits):
    return sum(b << i for i, b in enumerate(bits))


def test_sat_single_clause_examples():
    table = circuit_truth_table(build_sat(1, 1))
    code = encode_cnf(cnf(1, [[1]]))
    assert (table >> int_from_bits(code.bits + (1,))) & 1 == 1
    assert (table >> int_from_bits(code.bits + (0,))) & 1 == 0


def test_sat_agrees_with_eval_cnf_exhaustively():
    # every normalized code, every assignment, n,k <= 3, via one truth table
    for n, k in itertools.product((1, 2, 3), (1, 2, 3)):
        table = circuit_truth_table(build_sat(n, k))
        for cols in itertools.product(((0, 0), (0, 1), (1, 0)), repeat=n * k):
            bits = [0] * (2 * n * k)
            pos = 0
            for l in range(1, k + 1):
                for i in range(1, n + 1):
                    c0, c1 = cols[pos]
                    pos += 1
                    bits[code_pos(0, i, l, n, k)] = c0
                    bits[code_pos(1, i, l, n, k)] = c1
            code = CnfCode(n, k, tuple(bits))
            assert is_normalized_code(code)
            f = decode_cnf(code)
            for z in itertools.product((0, 1), repeat=n):
                row = int_from_bits(tuple(bits) + z)
                assert ((table >> row) & 1) == int(eval_cnf(f, z))


def test_sat_pair_is_never_satisfied():
    sat = build_sat(1, 2)
    code = encode_cnf(PAIR)
    table = circuit_truth_table(sat)
    for z in ((0,), (1,)):
        row = int_from_bits(code.bits + z)
        assert ((table >> row) & 1) == 0


# ---------------------------------------------------------------------------
# prf


def test_prf_2_1_1_exhaustive_decode_iff_satisfy():
    art = build_prf(2, 1, 1, encode_cnf(cnf(1, [[1]])))
    f = decode_cnf(art.code)
    assert art.formula.n == 12
    hits = 0
    for x in range(1 << 12):
        bits = [(x >> i) & 1 for i in range(12)]
        sat = eval_cnf(art.formula, bits)
        proof = decode_prf_assignment(art, bits)
        valid = proof is not None and check_refutation(f, proof, mode="weakening").ok
        assert sat == valid
        hits += sat
    # {(x1)} is satisfiable: no refutation of any length exists
    assert hits == 0


def test_prf_pair_witness_satisfies():
    art = build_prf(3, 1, 2, encode_cnf(PAIR))
    proof = dpll_refute(PAIR)
    bits = encode_witness(PAIR, proof, 3, art)
    assert eval_cnf(art.formula, bits)
    # and clause-by-clause, for a sharper failure message on regression
    assert all(any((l > 0) == bool(bits[abs(l) - 1]) for l in cl) for cl in art.formula.clauses)


def test_prf_clause_count_2_1_1():
    art = build_prf(2, 1, 1, encode_cnf(cnf(1, [[1]])))
    assert len(art.formula.clauses) == 18


# ---------------------------------------------------------------------------
# reflection circuits


@pytest.mark.parametrize("m,n,k", [(1, 1, 1), (2, 1, 1), (1, 2, 1), (1, 1, 2)])
def test_rfn_tautologies(m, n, k):
    assert is_tautology(build_rfn(m, n, k)) == ("yes",)


def test_rfn_input_counts():
    expected = {(1, 1, 1): 8, (1, 2, 2): 19, (2, 1, 1): 15, (2, 1, 2): 19}
    for (m, n, k), inputs in expected.items():
        assert build_rfn(m, n, k).n_vars == inputs


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_con_tautologies(m, n):
    c = build_con(m, n)
    assert c.n_vars == PrfLayout(m, n, 0).vars_proof
    assert is_tautology(c) == ("yes",)


def test_lrfn_tautologies():
    assert is_tautology(build_lrfn(cnf(1, [[1]]), 2)) == ("yes",)
    assert is_tautology(build_lrfn(PAIR, 2)) == ("yes",)


def test_lrfn_tautological_clause_tolerated():
    # non-normalized targets are representable and still reflect truthfully
    taut = cnf(1, [[1, -1]])
    assert is_tautology(build_lrfn(taut, 1)) == ("yes",)


# ---------------------------------------------------------------------------
# the reduction


def test_am_satisfiable_source_gives_unsat_instance():
    # a generated checker-valid refutation certifies unsatisfiability
    rng = random.Random(42)
    for _ in range(10):
        n = rng.randint(1, 3)
        f = None
        while f is None:
            cand = cnf(
                n,
                [
                    [v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), rng.randint(1, n))]
                    for _ in range(rng.randint(1, 4))
                ],
            )
            res = dpll_sat(cand)
            if res[0] == "sat":
                f, a = cand, res[1]
        art = am_reduce(f, PolyBudget(p=(0, 1), q=(0, 0, 0, 1)))
        proof = refute_prf_nontaut(f, a, art.layout.m)
        assert check_refutation(art.formula, proof, mode="weakening").ok


def test_am_unsat_source_gives_sat_instance():
    art = am_reduce(PAIR, PolyBudget(p=(0, 1), q=(0, 0, 0, 1)))
    proof = dpll_refute(PAIR)
    assert len(proof.lines) <= art.layout.m
    bits = encode_witness(PAIR, proof, art.layout.m, art)
    assert eval_cnf(art.formula, bits)


def test_am_growth_degree_over_ladder():
    # |rho| measured as variable count; the clause count's cubic term makes
    # its finite-ladder fit hover just above 3 (documented in the notes),
    # while variables grow quadratically: m*(3n+k+m) with m = p(s).
    xs, ys = [], []
    for j in (1, 2, 3, 4, 5, 6):
        f = cnf(j, [[i] for i in range(1, j + 1)] + [[-i] for i in range(1, j + 1)])
        s = len(emit_dimacs(f).encode())
        art = am_reduce(f, PolyBudget(p=(0, 1), q=(0, 0, 0, 1)))
        assert art.layout.m == s and art.params["source_bytes"] == s
        xs.append(s)
        ys.append(art.formula.n)
    lx, ly = [math.log(x) for x in xs], [math.log(y) for y in ys]
    mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
    slope = sum((a - mx) * (b - my) for a, b in zip(lx, ly)) / sum(
        (a - mx) ** 2 for a in lx
    )
    assert slope <= 3.0, f"degree {slope:.2f} exceeds deg(p)+2"


def test_am_rejects_empty_budget():
    with pytest.raises(ValueError):
        PolyBudget(p=(1,), q=(0, 1))


# ---------------------------------------------------------------------------
# benchmark families


def test_php_2_1_definition():
    assert build_php(2, 1) == cnf(2, [[1], [2], [-1, -2]])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_php_pigeonhole_unsat(n):
    assert dpll_sat(build_php(n + 1, n))[0] == "unsat"


def test_php_satisfiable_when_holes_suffice():
    res = dpll_sat(build_php(2, 2))
    assert res[0] == "sat"


def test_clique_color_shapes_and_semantics():
    clique, color, edges = build_clique_color(1, 2)
    assert clique.n == color.n  # shared variable space
    assert set(edges) == {(1, 2)}
    joined = Cnf(clique.n, clique.clauses + color.clauses)
    assert dpll_sat(joined)[0] == "unsat"
    # each side alone is satisfiable for a suitable graph
    assert dpll_sat(clique)[0] == "sat"
    assert dpll_sat(color)[0] == "sat"
    # witness variables are disjoint across the two sides
    mention = lambda f: {abs(l) for cl in f.clauses for l in cl}
    shared = set(edges.values())
    assert (mention(clique) - shared) & (mention(color) - shared) == set()


def test_clique_color_sides_disagree_on_edges():
    # a 2-clique needs the edge; a 1-coloring forbids it
    clique, color, edges = build_clique_color(1, 2)
    e = edges[(1, 2)]
    for f, want in ((clique, 1), (color, 0)):
        res = dpll_sat(f)
        assert res[0] == "sat" and res[1][e - 1] == want


# ---------------------------------------------------------------------------
# templates and the strongly friendly disjunction


def test_template_matches_direct_build():
    for m, n, k in ((1, 1, 1), (2, 1, 1), (1, 2, 2), (2, 1, 2)):
        tpl = build_prf_template(m, n, k)
        for psi_bits in _some_codes(n, k):
            psi = CnfCode(n, k, psi_bits)
            direct = build_prf(m, n, k, psi)
            inst = instantiate_template(tpl, psi.bits)
            assert inst == encode_cnf(direct.formula, strict=False)


def _some_codes(n, k):
    rng = random.Random(n * 10 + k)
    combos = list(itertools.product((0, 1), repeat=2 * n * k))
    rng.shuffle(combos)
    return combos[:6]


def test_strongly_friendly_case_ii_inner_nontaut():
    # psi unsatisfiable with a short refutation: the inner "z is no
    # refutation of psi" disjunct fails on the witness assignment
    m = 3
    tpl = build_prf_template(m, 1, 2)
    inner_code = instantiate_template(tpl, encode_cnf(PAIR).bits)
    inner = decode_cnf(inner_code, strict=False)
    proof = dpll_refute(PAIR)
    art = build_prf(m, 1, 2, encode_cnf(PAIR))
    assert inner == art.formula
    bits = encode_witness(PAIR, proof, m, art)
    assert eval_cnf(inner, bits)  # so not-prf is falsified: non-tautology


def test_strongly_friendly_case_i_outer_refutable():
    # psi satisfiable: the inner prf formula is unsatisfiable and the
    # generator finds its short refutation
    psi = cnf(1, [[1]])
    m = 3
    art = build_prf(m, 1, 1, encode_cnf(psi))
    proof = refute_prf_nontaut(psi, (1,), m)
    assert check_refutation(art.formula, proof, mode="weakening").ok


def test_strongly_friendly_circuit_builds_at_minimum_scale():
    c = build_strongly_friendly(1, PolyBudget(p=(0, 2), q=(0, 0, 0, 1)), k=1)
    assert c.n_vars == 246
    assert len(c.gates) == 7705
