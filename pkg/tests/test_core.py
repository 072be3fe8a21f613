"""
Formula/circuit plumbing: evaluation, codes, templates, and the two
serialization boundaries (DIMACS, gate lists).
"""

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from proofbench.core import (
    CircuitBuilder,
    Cnf,
    CnfCode,
    TemplateCode,
    cnf,
    cnf_to_circuit,
    code_pos,
    decode_cnf,
    emit_dimacs,
    emit_gates,
    encode_cnf,
    eval_circuit,
    eval_cnf,
    instantiate_template,
    is_normalized,
    is_normalized_code,
    parse_dimacs,
    parse_gates,
    restrict_cnf,
    shift_cnf,
)


# ---------------------------------------------------------------------------
# evaluation


def test_eval_circuit_basics():
    b = CircuitBuilder(1)
    assert eval_circuit(b.build(b.var(1)), (1,)) is True
    assert eval_circuit(b.build(b.var(1)), (0,)) is False

    b = CircuitBuilder(1)
    contradiction = b.build(b.and_(b.var(1), b.not_(b.var(1))))
    assert eval_circuit(contradiction, (0,)) is False
    assert eval_circuit(contradiction, (1,)) is False

    b = CircuitBuilder(1)
    ex_falso = b.build(b.imp(b.const(0), b.var(1)))
    assert eval_circuit(ex_falso, (0,)) is True


def test_eval_cnf_basics():
    f = cnf(2, [[1, -2]])
    assert eval_cnf(f, (0, 0)) is True
    assert eval_cnf(f, (0, 1)) is False
    pair = cnf(1, [[1], [-1]])
    assert not eval_cnf(pair, (0,)) and not eval_cnf(pair, (1,))


def test_eval_cnf_dimension_mismatch():
    with pytest.raises(ValueError):
        eval_cnf(cnf(2, [[1]]), (0,))


# ---------------------------------------------------------------------------
# codes


def test_single_literal_code():
    code = encode_cnf(cnf(1, [[1]]))
    assert code.get(1, 1, 1) == 1 and code.get(0, 1, 1) == 0


def test_empty_cnf_code_dimensions():
    code = encode_cnf(Cnf(2, ()))
    assert (code.n, code.k) == (2, 0) and code.bits == ()
    assert decode_cnf(code) == Cnf(2, ())


def _normalized_clauses(n):
    """All clauses over n variables with at most one polarity per variable."""
    out = []
    for choice in itertools.product((0, 1, -1), repeat=n):
        out.append(frozenset(s * v for v, s in enumerate(choice, start=1) if s))
    return out


def test_code_round_trip_exhaustive():
    # both directions, all normalized objects with n <= 2, k <= 2
    for n in (1, 2):
        pool = _normalized_clauses(n)
        for k in (0, 1, 2):
            for clauses in itertools.product(pool, repeat=k):
                f = Cnf(n, clauses)
                assert decode_cnf(encode_cnf(f)) == f
            for bits in itertools.product((0, 1), repeat=2 * n * k):
                code = CnfCode(n, k, bits)
                if is_normalized_code(code):
                    assert encode_cnf(decode_cnf(code)) == code


def test_non_normalized_rejected_in_strict_mode():
    taut = cnf(1, [[1, -1]])
    assert not is_normalized(taut)
    with pytest.raises(ValueError):
        encode_cnf(taut)
    # tolerant mode keeps both bits; decode refuses only in strict mode
    code = encode_cnf(taut, strict=False)
    assert code.get(0, 1, 1) == 1 and code.get(1, 1, 1) == 1
    with pytest.raises(ValueError):
        decode_cnf(code)
    assert decode_cnf(code, strict=False) == taut


def test_code_pos_covers_exactly_once():
    n, k = 3, 4
    seen = {code_pos(e, i, l, n, k) for e in (0, 1)
            for i in range(1, n + 1) for l in range(1, k + 1)}
    assert seen == set(range(2 * n * k))


# ---------------------------------------------------------------------------
# templates


def test_all_constant_template_is_itself():
    t = TemplateCode(1, 1, 0, (("const", 0), ("const", 1)))
    assert instantiate_template(t, ()) == CnfCode(1, 1, (0, 1))


def test_template_single_ref():
    t = TemplateCode(1, 1, 1, (("const", 0), ("ref", 0)))
    assert instantiate_template(t, (1,)).bits == (0, 1)
    assert instantiate_template(t, (0,)).bits == (0, 0)
    neg = TemplateCode(1, 1, 1, (("negref", 0), ("const", 0)))
    assert instantiate_template(neg, (0,)).bits == (1, 0)


def test_template_length_mismatch():
    t = TemplateCode(1, 1, 1, (("const", 0), ("ref", 0)))
    with pytest.raises(ValueError):
        instantiate_template(t, (1, 0))


# ---------------------------------------------------------------------------
# DIMACS


def test_parse_dimacs_pair():
    assert parse_dimacs("p cnf 1 2\n1 0\n-1 0\n") == cnf(1, [[1], [-1]])


def test_parse_dimacs_comments_and_layout():
    text = "c intro\np cnf 3 2\nc mid\n1 -2 0 3 0\n"
    assert parse_dimacs(text) == cnf(3, [[1, -2], [3]])


@pytest.mark.parametrize(
    "text",
    [
        "p cnf x 1\n1 0\n",
        "p dnf 1 1\n1 0\n",
        "p cnf 1 2\n1 0\n",
        "p cnf 1 1\n2 0\n",
        "p cnf 1 1\n1\n",
        "1 0\n",
    ],
)
def test_parse_dimacs_errors(text):
    with pytest.raises(ValueError):
        parse_dimacs(text)


def test_parse_dimacs_error_names_line():
    with pytest.raises(ValueError, match="line 2"):
        parse_dimacs("c ok\np cnf 1\n")


def _random_cnf(rng, max_n=8, max_k=10):
    n = rng.randint(1, max_n)
    clauses = []
    for _ in range(rng.randint(0, max_k)):
        width = rng.randint(0, min(4, n))
        vs = rng.sample(range(1, n + 1), width)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return cnf(n, clauses)


def test_dimacs_emission_is_stable():
    rng = random.Random(2403)
    for _ in range(300):
        f = _random_cnf(rng)
        text = emit_dimacs(f)
        assert parse_dimacs(text) == f
        assert emit_dimacs(parse_dimacs(text)) == text


@given(st.integers(1, 6), st.data())
def test_dimacs_round_trip_property(n, data):
    clauses = data.draw(
        st.lists(
            st.lists(
                st.integers(-n, n).filter(lambda x: x != 0), max_size=4
            ),
            max_size=6,
        )
    )
    f = cnf(n, clauses)
    assert parse_dimacs(emit_dimacs(f)) == f


# ---------------------------------------------------------------------------
# circuits and gate lists


def test_cnf_circuit_agrees_with_eval_cnf():
    rng = random.Random(517)
    for _ in range(200):
        f = _random_cnf(rng, max_n=10, max_k=8)
        c = cnf_to_circuit(f)
        for _ in range(20):
            a = [rng.randint(0, 1) for _ in range(f.n)]
            assert eval_circuit(c, a) == eval_cnf(f, a)


def test_cnf_circuit_agrees_exhaustively_small():
    for n in (1, 2, 3):
        pool = _normalized_clauses(n)
        rng = random.Random(n)
        for _ in range(50):
            f = Cnf(n, tuple(rng.choice(pool) for _ in range(rng.randint(0, 3))))
            c = cnf_to_circuit(f)
            for bits in itertools.product((0, 1), repeat=n):
                assert eval_circuit(c, bits) == eval_cnf(f, bits)


def test_gate_list_round_trip():
    b = CircuitBuilder(2)
    root = b.imp(b.or_(b.var(1), b.not_(b.var(2))), b.and_(b.var(2), b.const(1)))
    c = b.build(root)
    again = parse_gates(emit_gates(c))
    assert again == c
    assert emit_gates(again) == emit_gates(c)


def test_gate_list_rejects_forward_reference():
    with pytest.raises(ValueError):
        parse_gates("inputs 1\ng0 := not g1\ng1 := var 1\nout g0\n")


def test_builder_hash_consing_dedups():
    b = CircuitBuilder(2)
    x = b.and_(b.var(1), b.var(2))
    y = b.and_(b.var(1), b.var(2))
    assert x == y


def test_builder_rejects_out_of_range_var():
    b = CircuitBuilder(1)
    with pytest.raises(ValueError):
        b.var(2)


# ---------------------------------------------------------------------------
# restriction and shifting


def test_restrict_cnf():
    f = cnf(2, [[1, 2], [-1], [-2]])
    assert restrict_cnf(f, {2: 0}) == cnf(2, [[1], [-1]])
    assert restrict_cnf(f, {}) == f


def test_shift_cnf_disjoint_union():
    a = cnf(1, [[1]])
    b = shift_cnf(cnf(1, [[-1]]), 1, 2)
    assert b == Cnf(2, (frozenset({-2}),))
    with pytest.raises(ValueError):
        shift_cnf(cnf(2, [[1]]), 1, 2)
