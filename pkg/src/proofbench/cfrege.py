"""A Frege system over circuits, with proof generators for reflection.

The calculus: ten Hilbert-style schemas (the last two are the constant
axioms), modus ponens, and a canonization rule that lets a line restate any
earlier line up to canonical form.  Canonical forms eliminate implications
(``a -> b`` becomes ``!a | b``), fold constants and double negation, and
flatten/sort/deduplicate conjunctions and disjunctions, folding complement
pairs; negation is *not* pushed through gates, so canonization stays a
linear-time congruence rather than a SAT oracle.

Lines are checked up to canonical equality: a schema or extension line must
canonize like its instance, ``MP j1 j2`` requires line ``j1`` to canonize
like ``line_j2 -> here``, and ``C j`` requires equal canonization with line
``j``.  All line circuits live in one shared hash-consed arena.

The reflection proof (:func:`cf_prove_rfn_res`) works in clause form: a
judgment "under the hypothesis prf & sat at least one of these holds" is a
line whose canonization is ``!hyp | part_1 | ... | part_t``.  Hypothetical
reasoning, resolution on a part, and excluded middle each compile to a few
schema instances, because currying, hypothesis reordering, and tautologous
helper instances are free under canonization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .core import Circuit, CircuitBuilder, Cnf, code_pos, encode_cnf, eval_circuit
from .encoder import (
    PrfLayout,
    _prf_clauses,
    _rfn_parts,
    _sat_circuit,
    build_lrfn,
    build_rfn,
)
from .resolution import CheckReport


# ---------------------------------------------------------------------------
# Canonical forms


class CanonTable:
    """Canonical forms for the nodes of one circuit arena.

    Canonical nodes are interned tuples: ``('var', i)``, ``('const', b)``,
    ``('not', cid)``, ``('and', cids)``, ``('or', cids)`` with the n-ary
    children sorted, deduplicated, constant-free and complement-free.  Two
    arena nodes denote the same canonical form iff :meth:`canon` returns
    the same id for both.
    """

    def __init__(self, arena: CircuitBuilder):
        self.arena = arena
        self._intern: dict[tuple, int] = {}
        self._forms: list[tuple] = []
        self._memo: dict[int, int] = {}
        self.FALSE = self._mk(("const", 0))
        self.TRUE = self._mk(("const", 1))

    def _mk(self, form: tuple) -> int:
        got = self._intern.get(form)
        if got is not None:
            return got
        self._forms.append(form)
        cid = len(self._forms) - 1
        self._intern[form] = cid
        return cid

    def mk_const(self, b: int) -> int:
        return self.TRUE if b else self.FALSE

    def mk_var(self, i: int) -> int:
        return self._mk(("var", i))

    def mk_not(self, a: int) -> int:
        form = self._forms[a]
        if form[0] == "const":
            return self.mk_const(1 - form[1])
        if form[0] == "not":
            return form[1]
        return self._mk(("not", a))

    def mk_op(self, op: str, args: Sequence[int]) -> int:
        ann = self.FALSE if op == "and" else self.TRUE
        ident = self.TRUE if op == "and" else self.FALSE
        flat: list[int] = []
        for a in args:
            form = self._forms[a]
            if form[0] == op:
                flat.extend(form[1])
            elif a == ann:
                return ann
            elif a != ident:
                flat.append(a)
        out = sorted(set(flat))
        outset = set(out)
        for a in out:
            form = self._forms[a]
            if form[0] == "not" and form[1] in outset:
                return ann
        if not out:
            return ident
        if len(out) == 1:
            return out[0]
        return self._mk((op, tuple(out)))

    def mk_imp(self, a: int, b: int) -> int:
        return self.mk_op("or", [self.mk_not(a), b])

    def canon(self, node: int) -> int:
        """Canonical id of an arena node (memoized, iterative)."""
        memo = self._memo
        nodes = self.arena.nodes
        stack = [node]
        while stack:
            x = stack[-1]
            if x in memo:
                stack.pop()
                continue
            g = nodes[x]
            kind = g[0]
            if kind == "var":
                memo[x] = self.mk_var(g[1])
            elif kind == "const":
                memo[x] = self.mk_const(g[1])
            else:
                deps = [d for d in g[1:] if d not in memo]
                if deps:
                    stack.extend(deps)
                    continue
                if kind == "not":
                    memo[x] = self.mk_not(memo[g[1]])
                elif kind == "imp":
                    memo[x] = self.mk_imp(memo[g[1]], memo[g[2]])
                else:
                    memo[x] = self.mk_op(kind, [memo[g[1]], memo[g[2]]])
            stack.pop()
        return memo[node]

    def or_children(self, cid: int) -> tuple[int, ...]:
        form = self._forms[cid]
        return form[1] if form[0] == "or" else (cid,)

    def eval(self, cid: int, a: Sequence[int]) -> bool:
        """Evaluate a canonical form under an assignment (testing hook)."""
        form = self._forms[cid]
        kind = form[0]
        if kind == "var":
            return bool(a[form[1] - 1])
        if kind == "const":
            return bool(form[1])
        if kind == "not":
            return not self.eval(form[1], a)
        vals = (self.eval(c, a) for c in form[1])
        return all(vals) if kind == "and" else any(vals)


# ---------------------------------------------------------------------------
# Schemas

# Each schema is (arity, constructor); indices 9 and 10 are the constant
# axioms (true, and not-false).
SCHEMAS: tuple[tuple[int, Callable], ...] = (
    (2, lambda b, p, q: b.imp(p, b.imp(q, p))),
    (3, lambda b, p, q, r: b.imp(b.imp(p, b.imp(q, r)), b.imp(b.imp(p, q), b.imp(p, r)))),
    (2, lambda b, p, q: b.imp(b.imp(b.not_(p), b.not_(q)), b.imp(q, p))),
    (2, lambda b, p, q: b.imp(b.and_(p, q), p)),
    (2, lambda b, p, q: b.imp(b.and_(p, q), q)),
    (2, lambda b, p, q: b.imp(p, b.imp(q, b.and_(p, q)))),
    (2, lambda b, p, q: b.imp(p, b.or_(p, q))),
    (2, lambda b, p, q: b.imp(q, b.or_(p, q))),
    (3, lambda b, p, q, r: b.imp(b.imp(p, r), b.imp(b.imp(q, r), b.imp(b.or_(p, q), r)))),
    (0, lambda b: b.const(1)),
    (0, lambda b: b.not_(b.const(0))),
)


def instantiate_schema(arena: CircuitBuilder, idx: int, sigma: Sequence[int]) -> int:
    arity, fn = SCHEMAS[idx]
    if len(sigma) != arity:
        raise ValueError(f"schema {idx} takes {arity} arguments, got {len(sigma)}")
    return fn(arena, *sigma)


def instantiate_extension(arena: CircuitBuilder, pattern: Circuit, sigma: Sequence[int]) -> int:
    """Extension axiom schemas are circuits over variables 1..arity."""
    if len(sigma) < pattern.n_vars:
        raise ValueError("extension instance is missing arguments")
    ids: list[int] = []
    for g in pattern.gates:
        if g[0] == "var":
            ids.append(sigma[g[1] - 1])
        elif g[0] == "const":
            ids.append(arena.const(g[1]))
        elif g[0] == "not":
            ids.append(arena.not_(ids[g[1]]))
        elif g[0] == "and":
            ids.append(arena.and_(ids[g[1]], ids[g[2]]))
        elif g[0] == "or":
            ids.append(arena.or_(ids[g[1]], ids[g[2]]))
        else:
            ids.append(arena.imp(ids[g[1]], ids[g[2]]))
    return ids[-1]


# ---------------------------------------------------------------------------
# Proof objects

# Justifications: ('schema', idx, sigma) / ('ext', idx, sigma) with sigma a
# tuple of arena node ids, ('mp', j1, j2), ('canon', j).
CfLine = tuple[int, tuple]


@dataclass
class CfProof:
    arena: CircuitBuilder
    lines: tuple[CfLine, ...]

    def __len__(self) -> int:
        return len(self.lines)

    @property
    def last_node(self) -> int:
        return self.lines[-1][0]

    def last_circuit(self) -> Circuit:
        return self.arena.build(self.last_node)


def cf_check(
    proof: CfProof,
    extensions: Sequence[Circuit] = (),
    measure_bits: bool = False,
    table: CanonTable | None = None,
) -> CheckReport:
    """Check every line; ``bit_size`` is 0 unless ``measure_bits``."""
    ct = table if table is not None else CanonTable(proof.arena)
    arena = proof.arena
    size = len(cf_serialize(proof).encode()) if measure_bits else 0

    def fail(step: int, reason: str) -> CheckReport:
        return CheckReport(False, step, reason, len(proof.lines), size)

    for t, (node, just) in enumerate(proof.lines):
        rule = just[0]
        if rule in ("schema", "ext"):
            idx, sigma = just[1], just[2]
            try:
                if rule == "schema":
                    inst = instantiate_schema(arena, idx, sigma)
                else:
                    inst = instantiate_extension(arena, extensions[idx], sigma)
            except (IndexError, ValueError) as e:
                return fail(t, f"bad instantiation: {e}")
            if ct.canon(node) != ct.canon(inst):
                return fail(t, f"line does not match its {rule} instance")
        elif rule == "mp":
            j1, j2 = just[1], just[2]
            if not (0 <= j1 < t and 0 <= j2 < t):
                return fail(t, "premise index out of range")
            want = ct.mk_imp(ct.canon(proof.lines[j2][0]), ct.canon(node))
            if ct.canon(proof.lines[j1][0]) != want:
                return fail(t, "major premise does not imply this line")
        elif rule == "canon":
            j = just[1]
            if not 0 <= j < t:
                return fail(t, "premise index out of range")
            if ct.canon(proof.lines[j][0]) != ct.canon(node):
                return fail(t, "line is not a canonization of its premise")
        else:
            return fail(t, f"unknown rule {rule!r}")
    return CheckReport(True, None, None, len(proof.lines), size)


def cf_serialize(proof: CfProof) -> str:
    """Emit-only text form: the arena gate list restricted to the nodes the
    proof mentions, then one line per step naming the rule, any schema
    arguments, and the step's circuit."""
    needed: set[int] = set()
    stack: list[int] = []
    for node, just in proof.lines:
        stack.append(node)
        if just[0] in ("schema", "ext"):
            stack.extend(just[2])
    nodes = proof.arena.nodes
    while stack:
        x = stack.pop()
        if x in needed:
            continue
        needed.add(x)
        g = nodes[x]
        if g[0] not in ("var", "const"):
            stack.extend(g[1:])
    out = [f"inputs {proof.arena.n_vars}"]
    for x in sorted(needed):
        g = nodes[x]
        if g[0] == "var":
            rhs = f"var {g[1]}"
        elif g[0] == "const":
            rhs = f"const {g[1]}"
        elif g[0] == "not":
            rhs = f"not g{g[1]}"
        else:
            rhs = f"{g[0]} g{g[1]} g{g[2]}"
        out.append(f"g{x} := {rhs}")
    for node, just in proof.lines:
        if just[0] == "schema":
            args = "".join(f" g{s}" for s in just[2])
            head = f"S {just[1]}{args}"
        elif just[0] == "ext":
            args = "".join(f" g{s}" for s in just[2])
            head = f"X {just[1]}{args}"
        elif just[0] == "mp":
            head = f"MP {just[1]} {just[2]}"
        else:
            head = f"C {just[1]}"
        out.append(f"{head} : g{node}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Construction toolkit


class _Writer:
    """Emits checked lines into an arena, deduplicating by canonical form.

    Deduplication is sound because the checker compares lines only up to
    canonization, so any line can stand in for any other with the same
    form.  In particular every tautologous-by-canon helper instance (the
    S1/S7/S8 family, excluded-middle disjunctions, hypothesis reorderings)
    collapses into the single constant-true axiom line.
    """

    def __init__(self, arena: CircuitBuilder):
        self.arena = arena
        self.ct = CanonTable(arena)
        self.lines: list[CfLine] = []
        self._by_canon: dict[int, int] = {}
        self.true_line = self.schema(9)

    def _verify(self, node: int, just: tuple) -> None:
        ct = self.ct
        if just[0] == "schema":
            inst = instantiate_schema(self.arena, just[1], just[2])
            assert ct.canon(node) == ct.canon(inst), "schema instance mismatch"
        elif just[0] == "mp":
            want = ct.mk_imp(ct.canon(self.lines[just[2]][0]), ct.canon(node))
            assert ct.canon(self.lines[just[1]][0]) == want, "modus ponens mismatch"
        else:
            assert ct.canon(self.lines[just[1]][0]) == ct.canon(node), "canonization mismatch"

    def emit(self, node: int, just: tuple, dedup: bool = True) -> int:
        c = self.ct.canon(node)
        if dedup:
            got = self._by_canon.get(c)
            if got is not None:
                return got
        self._verify(node, just)
        self.lines.append((node, just))
        idx = len(self.lines) - 1
        self._by_canon.setdefault(c, idx)
        return idx

    def schema(self, idx: int, *sigma: int) -> int:
        return self.emit(instantiate_schema(self.arena, idx, sigma), ("schema", idx, tuple(sigma)))

    def mp(self, major: int, minor: int, node: int) -> int:
        return self.emit(node, ("mp", major, minor))

    def canon_as(self, j: int, node: int) -> int:
        """Restate line ``j`` as ``node`` (must canonize equally)."""
        return self.emit(node, ("canon", j))

    def taut(self, node: int) -> int:
        """Any circuit whose canonical form is constant true."""
        assert self.ct.canon(node) == self.ct.TRUE, "not a canonical tautology"
        return self.canon_as(self.true_line, node)


# A judgment clause: a line index paired with its disjunct nodes.
GClause = tuple[int, tuple[int, ...]]


class _Gamma:
    """Derivations under one fixed hypothesis ``gamma``.

    A judgment line for X is a line for ``gamma -> X``; its canonical form
    is ``!gamma | flatten(X)``.  A *clause* bundles such a line with the
    list of disjunct nodes it tracks, and :meth:`res` is the cut rule on
    one disjunct, justified through excluded middle and the case split
    schema.  Disjuncts may be arbitrary circuits, not just literals.
    """

    def __init__(self, w: _Writer, gamma: int):
        self.w = w
        self.b = w.arena
        self.gamma = gamma
        self._lift_cache: dict[int, int] = {}
        self._hyp_cache: dict[tuple[int, int], int] = {}

    def j(self, x: int) -> int:
        return self.b.imp(self.gamma, x)

    # -- implication plumbing ----------------------------------------------

    def lift(self, line: int) -> int:
        """From a theorem line T conclude gamma -> T."""
        key = self.w.ct.canon(self.w.lines[line][0])
        got = self._lift_cache.get(key)
        if got is not None:
            return got
        t = self.w.lines[line][0]
        s1 = self.w.schema(0, t, self.gamma)
        out = self.w.mp(s1, line, self.j(t))
        self._lift_cache[key] = out
        return out

    def mp_ctx(self, line_ab: int, line_a: int, a: int, bnode: int) -> int:
        """From gamma -> (a -> b) and gamma -> a conclude gamma -> b."""
        s2 = self.w.schema(1, self.gamma, a, bnode)
        step = self.w.mp(s2, line_ab, self.b.imp(self.j(a), self.j(bnode)))
        return self.w.mp(step, line_a, self.j(bnode))

    def hyp_lift(self, line_x: int, x: int, h: int) -> int:
        """From gamma -> x conclude gamma -> (h -> x)."""
        key = (self.w.ct.canon(self.w.lines[line_x][0]), self.w.ct.canon(h))
        got = self._hyp_cache.get(key)
        if got is not None:
            return got
        s1 = self.w.schema(0, x, h)
        jx = self.mp_ctx(self.lift(s1), line_x, x, self.b.imp(h, x))
        self._hyp_cache[key] = jx
        return jx

    def mp_hyp(self, line_hab: int, line_ha: int, h: int, a: int, bnode: int) -> int:
        """Modus ponens one hypothesis deep: from gamma -> (h -> (a -> b))
        and gamma -> (h -> a) conclude gamma -> (h -> b)."""
        s2 = self.w.schema(1, h, a, bnode)
        big = self.mp_ctx(
            self.lift(s2),
            line_hab,
            self.b.imp(h, self.b.imp(a, bnode)),
            self.b.imp(self.b.imp(h, a), self.b.imp(h, bnode)),
        )
        return self.mp_ctx(big, line_ha, self.b.imp(h, a), self.b.imp(h, bnode))

    def compose(self, line_hd: int, h: int, d: int, th_line: int, c: int) -> int:
        """From gamma -> (h -> d) and a theorem d -> c, gamma -> (h -> c)."""
        j_dc = self.lift(th_line)
        j_h_dc = self.hyp_lift(j_dc, self.b.imp(d, c), h)
        return self.mp_hyp(j_h_dc, line_hd, h, d, c)

    def or_imp(self, line_ac: int, line_bc: int, a: int, bnode: int, c: int) -> int:
        """From gamma -> (a -> c) and gamma -> (b -> c) conclude
        gamma -> ((a | b) -> c)."""
        s9 = self.w.schema(8, a, bnode, c)
        step = self.mp_ctx(
            self.lift(s9),
            line_ac,
            self.b.imp(a, c),
            self.b.imp(self.b.imp(bnode, c), self.b.imp(self.b.or_(a, bnode), c)),
        )
        return self.mp_ctx(
            step, line_bc, self.b.imp(bnode, c), self.b.imp(self.b.or_(a, bnode), c)
        )

    # -- clause calculus -----------------------------------------------------

    def or_node(self, parts: Sequence[int]) -> int:
        return self.b.or_many(list(parts))

    def clause(self, line: int, parts: Sequence[int]) -> GClause:
        """Bundle a line with its disjuncts, deduplicated by form."""
        ct = self.w.ct
        seen: set[int] = set()
        out = []
        for p in parts:
            c = ct.canon(p)
            if c not in seen:
                seen.add(c)
                out.append(p)
        assert ct.canon(self.w.lines[line][0]) == ct.canon(self.j(self.or_node(out))), (
            "clause bookkeeping out of sync with its line"
        )
        return (line, tuple(out))

    def res(self, g1: GClause, g2: GClause, pivot: int) -> GClause:
        """Resolve two clauses on ``pivot``: ``g1`` holds it positively,
        ``g2`` negatively.  Excluded middle on the pivot is canonically
        true, so the cut is a case split plus two monotone weakenings."""
        ct = self.w.ct
        pc = ct.canon(pivot)
        npivot = self.b.not_(pivot)
        a_parts = [p for p in g1[1] if ct.canon(p) != pc]
        b_parts = [p for p in g2[1] if ct.canon(p) != ct.mk_not(pc)]
        assert len(a_parts) < len(g1[1]), "pivot missing from first clause"
        assert len(b_parts) < len(g2[1]), "negated pivot missing from second clause"
        da = self.or_node(a_parts)
        db = self.or_node(b_parts)
        c = self.b.or_(da, db)
        u1 = self.w.canon_as(g1[0], self.j(self.b.imp(npivot, da)))
        u2 = self.w.canon_as(g2[0], self.j(self.b.imp(pivot, db)))
        w1 = self.compose(u1, npivot, da, self.w.schema(6, da, db), c)
        w2 = self.compose(u2, pivot, db, self.w.schema(7, da, db), c)
        # p | !p canonizes exactly like the S7 instance p -> (p | !p): the
        # extra !p disjunct S7 adds is already present in the flattened
        # form, whatever shape p has.
        em_node = self.b.or_(pivot, npivot)
        em = self.lift(self.w.emit(em_node, ("schema", 6, (pivot, npivot))))
        s9 = self.w.schema(8, pivot, npivot, c)
        step = self.mp_ctx(
            self.lift(s9),
            w2,
            self.b.imp(pivot, c),
            self.b.imp(self.b.imp(npivot, c), self.b.imp(self.b.or_(pivot, npivot), c)),
        )
        step = self.mp_ctx(
            step, w1, self.b.imp(npivot, c), self.b.imp(self.b.or_(pivot, npivot), c)
        )
        out = self.mp_ctx(step, em, self.b.or_(pivot, npivot), c)
        return self.clause(out, list(a_parts) + list(b_parts))

    def weaken(self, g: GClause, extra: Sequence[int]) -> GClause:
        """Add disjuncts to a clause."""
        ct = self.w.ct
        have = {ct.canon(q) for q in g[1]}
        new = []
        for p in extra:
            c = ct.canon(p)
            if c not in have:
                have.add(c)
                new.append(p)
        if not new:
            return g
        d = self.or_node(g[1])
        e = self.or_node(new)
        c = self.b.or_(d, e)
        line = self.mp_ctx(
            self.lift(self.w.schema(6, d, e)), self.w.canon_as(g[0], self.j(d)), d, c
        )
        return self.clause(line, list(g[1]) + new)


class _Projector:
    """Judgment lines for the conjuncts of gamma's and-tree, derived on
    demand through the two conjunction schemas and memoized per node."""

    def __init__(self, g: _Gamma):
        self.g = g
        self._have: dict[int, int] = {g.gamma: g.w.taut(g.j(g.gamma))}
        self._parent: dict[int, tuple[int, int]] = {}
        self._indexed: set[int] = {g.gamma}
        self._frontier: list[int] = [g.gamma]

    def _index_until(self, target: int) -> bool:
        if target in self._parent or target == self.g.gamma:
            return True
        nodes = self.g.b.nodes
        while self._frontier:
            x = self._frontier.pop()
            gx = nodes[x]
            if gx[0] != "and":
                continue
            for side, ch in enumerate(gx[1:]):
                if ch not in self._indexed:
                    self._indexed.add(ch)
                    self._parent[ch] = (x, side)
                    self._frontier.append(ch)
            if target in self._parent:
                return True
        return target in self._parent

    def line_for(self, node: int) -> int:
        got = self._have.get(node)
        if got is not None:
            return got
        assert self._index_until(node), "node is not a conjunct of gamma"
        chain = []
        x = node
        while x not in self._have:
            chain.append(x)
            x = self._parent[x][0]
        for child in reversed(chain):
            parent, side = self._parent[child]
            a, b2 = self.g.b.nodes[parent][1], self.g.b.nodes[parent][2]
            th = self.g.w.schema(3 + side, a, b2)
            self._have[child] = self.g.mp_ctx(self.g.lift(th), self._have[parent], parent, child)
        return self._have[node]


# ---------------------------------------------------------------------------
# The reflection proof


def cf_prove_rfn_res(m: int, n: int, k: int, check: bool = True) -> CfProof:
    """A Frege proof of ``build_rfn(m, n, k)``: an encoded resolution
    refutation of a coded CNF rules out any satisfying assignment for it.

    The derivation tracks, for each hypothetical proof line j, the clause
    "line j's clause contains a literal true under z" and establishes it by
    induction on j: downloads inherit a true literal from the satisfied
    source clause, resolutions inherit one from either premise (the pivot
    literal being covered by the two z polarities), and the final line's
    emptiness closes the contradiction.  Ends in a circuit equal, gate for
    gate, to ``build_rfn(m, n, k)``.

    Size: at most ``360 * m * n * (m + n + k)`` lines -- quadratic in m
    (one arc case split per ordered premise pair), quadratic in n (each
    resolution step sweeps the other pivots), linear in k (one download
    elimination per source-clause slot).  Measured over the full 6x6x6
    grid the ratio to that bound peaks at 352 and the log-log tail slopes
    are 1.51 in m, 1.13 in n, and 0.38 in k, all inside the documented
    degrees (2, 2, 1).
    """
    lay = PrfLayout(m, n, k)
    V = lay.vars_proof
    w = _Writer(CircuitBuilder(V + 2 * n * k + n))
    b = w.arena
    prf, sat = _rfn_parts(b, m, n, k)
    gamma = b.and_(prf, sat)
    g = _Gamma(w, gamma)
    ct = w.ct

    # One side may canonize away outright (an empty clause in the coded
    # structure): then gamma is canonically false and we are done at once.
    if ct.canon(g.j(b.const(0))) == ct.TRUE:
        bottom_line = w.taut(g.j(b.const(0)))
        return _export(w, g, prf, sat, bottom_line, m, n, k, check)

    def litnode(lit: int) -> int:
        node = b.var(abs(lit))
        return node if lit > 0 else b.not_(node)

    # Rebuild each constraint conjunct exactly as the shared circuit
    # builder did (hash-consing makes the node ids coincide), recording the
    # disjunct lists for clause bookkeeping.
    conj_parts: dict[tuple, list[int]] = {}
    for name, static, slot in _prf_clauses(lay):
        if slot is None:
            conj_parts[name] = [litnode(x) for x in static]
        else:
            jj, l, i, e = slot
            cnode = b.var(V + code_pos(e, i, l, n, k) + 1)
            conj_parts[name] = [
                litnode(static[0]),
                litnode(static[1]),
                b.not_(cnode),
                litnode(static[2]),
            ]

    proj = _Projector(g)

    def use(name: tuple) -> GClause:
        parts = conj_parts[name]
        return g.clause(proj.line_for(b.or_many(parts)), parts)

    zvar = lambda i: b.var(V + 2 * n * k + i)
    yvar = lambda e, i, j: b.var(lay.y(e, i, j))
    zlit = lambda e, i: zvar(i) if e else b.not_(zvar(i))

    def el(i: int, j: int) -> int:
        """Line j's clause holds a literal on variable i true under z."""
        return b.or_(b.and_(yvar(1, i, j), zvar(i)), b.and_(yvar(0, i, j), b.not_(zvar(i))))

    def pick(i: int, l: int) -> int:
        cvar = lambda e: b.var(V + code_pos(e, i, l, n, k) + 1)
        return b.or_(b.and_(cvar(1), zvar(i)), b.and_(cvar(0), b.not_(zvar(i))))

    # gamma -> (H -> side_of_H) for and-nodes H, and the same as a clause.
    half_cache: dict[tuple[int, int], int] = {}

    def half_clause(h: int, side: int) -> GClause:
        line = half_cache.get((h, side))
        if line is None:
            a, b2 = b.nodes[h][1], b.nodes[h][2]
            line = g.lift(w.schema(3 + side, a, b2))
            half_cache[(h, side)] = line
        return g.clause(line, [b.not_(h), b.nodes[h][1 + side]])

    # {!and(y, zlit), EL(i,j)}: an and-leaf implies its disjunction.
    def leaf_inject(i: int, j: int, e: int) -> GClause:
        hnode = b.and_(yvar(e, i, j), zlit(e, i))
        other = b.and_(yvar(1 - e, i, j), zlit(1 - e, i))
        if e == 1:
            th = w.schema(6, hnode, other)
        else:
            th = w.schema(7, other, hnode)
        return g.clause(g.lift(th), [b.not_(hnode), el(i, j)])

    # {!zlit(e,i), !y(e,i,j), EL(i,j)}: a held literal bit plus the right
    # z polarity witness EL.
    el_intro_cache: dict[tuple, GClause] = {}

    def el_intro(i: int, j: int, e: int) -> GClause:
        key = (i, j, e)
        got = el_intro_cache.get(key)
        if got is None:
            y, zl = yvar(e, i, j), zlit(e, i)
            pair = b.and_(y, zl)
            s6 = g.lift(w.schema(5, y, zl))
            sw = w.canon_as(s6, g.j(b.imp(zl, b.imp(y, pair))))
            cl = g.clause(sw, [b.not_(zl), b.not_(y), pair])
            got = g.res(cl, leaf_inject(i, j, e), pair)
            el_intro_cache[key] = got
        return got

    # -- axiom case ----------------------------------------------------------

    # {!pick(i,l), !ax(j), !s(l,j), EL(i,j)}: a z-true coded literal of a
    # downloaded clause lands in the line's clause via the download rules.
    def pick_elim(i: int, l: int, j: int) -> GClause:
        common = g.or_node([b.not_(b.var(lay.ax(j))), b.not_(b.var(lay.s(l, j))), el(i, j)])
        branch_lines = []
        hs = []
        for e in (1, 0):
            cvar = b.var(V + code_pos(e, i, l, n, k) + 1)
            h = b.and_(cvar, zlit(e, i))
            hs.append(h)
            step = g.res(half_clause(h, 0), use(("c2", j, l, i, e)), cvar)
            step = g.res(step, el_intro(i, j, e), yvar(e, i, j))
            step = g.res(half_clause(h, 1), step, zlit(e, i))
            branch_lines.append(w.canon_as(step[0], g.j(b.imp(h, common))))
        both = g.or_imp(branch_lines[0], branch_lines[1], hs[0], hs[1], common)
        return g.clause(
            both,
            [b.not_(pick(i, l)), b.not_(b.var(lay.ax(j))), b.not_(b.var(lay.s(l, j))), el(i, j)],
        )

    # {!ax(j), !s(l,j)} + EL-parts(j)
    def transfer(l: int, j: int) -> GClause:
        sat_clause = b.or_many([pick(i, l) for i in range(1, n + 1)])
        acc = g.clause(proj.line_for(sat_clause), [pick(i, l) for i in range(1, n + 1)])
        acc = g.weaken(acc, [b.not_(b.var(lay.ax(j))), b.not_(b.var(lay.s(l, j)))])
        for i in range(1, n + 1):
            acc = g.res(acc, pick_elim(i, l, j), pick(i, l))
        return acc

    # {!ax(j)} + EL-parts(j)
    def axiom_case(j: int) -> GClause:
        acc = use(("alo_s", j))
        for l in range(1, k + 1):
            acc = g.res(acc, transfer(l, j), b.var(lay.s(l, j)))
        return acc

    # -- resolution case -----------------------------------------------------

    def junk(side: str, u: int, j: int) -> int:
        """Pivot marker: ``piv(u,j)`` holds and z sides with this premise."""
        return b.and_(b.var(lay.piv(u, j)), zvar(u) if side == "L" else b.not_(zvar(u)))

    # {!EL(i,jp), ax(j), !arc, junk(side,i,j), EL(i,j)}
    def arc_step(side: str, i: int, jp: int, j: int) -> GClause:
        arc = b.var(lay.L(jp, j) if side == "L" else lay.R(jp, j))
        common_parts = [b.var(lay.ax(j)), b.not_(arc), junk(side, i, j), el(i, j)]
        common = g.or_node(common_parts)
        branch_lines = []
        hs = []
        for e in (1, 0):
            h = b.and_(yvar(e, i, jp), zlit(e, i))
            hs.append(h)
            step = g.res(half_clause(h, 0), use(("c4", side, e, j, jp, i)), yvar(e, i, jp))
            if (side == "L") == (e == 1):
                # this premise polarity may be the pivot occurrence itself
                piv = b.var(lay.piv(i, j))
                jk = junk(side, i, j)
                s6 = g.lift(w.schema(5, piv, zlit(e, i)))
                sw = w.canon_as(s6, g.j(b.imp(zlit(e, i), b.imp(piv, jk))))
                mk = g.clause(sw, [b.not_(zlit(e, i)), b.not_(piv), jk])
                mk = g.res(half_clause(h, 1), mk, zlit(e, i))
                step = g.res(step, mk, piv)
            else:
                step = g.weaken(step, [junk(side, i, j)])
            step = g.res(step, el_intro(i, j, e), yvar(e, i, j))
            step = g.res(half_clause(h, 1), step, zlit(e, i))
            branch_lines.append(w.canon_as(step[0], g.j(b.imp(h, common))))
        both = g.or_imp(branch_lines[0], branch_lines[1], hs[0], hs[1], common)
        return g.clause(both, [b.not_(el(i, jp))] + common_parts)

    # {(!)z_i, ax(j), !piv(i,j)} + EL-parts(j): under one z polarity the
    # matching side's junk disjuncts all die -- the pivot's own marker by
    # z contradiction, the others by at-most-one-pivot.
    def junk_free(base: GClause, side: str, i: int, j: int) -> GClause:
        acc = base
        for u in range(1, n + 1):
            jk = junk(side, u, j)
            if u == i:
                acc = g.res(acc, half_clause(jk, 1), jk)
            else:
                kill = g.res(
                    half_clause(jk, 0),
                    use(("amo_piv", j, min(i, u), max(i, u))),
                    b.var(lay.piv(u, j)),
                )
                acc = g.res(acc, kill, jk)
        return acc

    # {ax(j)} + EL-parts(j)
    def resolution_case(j: int, s_clauses: list) -> GClause:
        g_side = {}
        for side in ("L", "R"):
            u_list = []
            for jp in range(1, j):
                acc = s_clauses[jp]
                for i in range(1, n + 1):
                    acc = g.res(acc, arc_step(side, i, jp, j), el(i, jp))
                u_list.append(acc)
            acc = use(("alo_arc_" + side, j))
            for jp in range(1, j):
                arc = b.var(lay.L(jp, j) if side == "L" else lay.R(jp, j))
                acc = g.res(acc, u_list[jp - 1], arc)
            g_side[side] = acc
        if n == 1:
            # no other pivot candidates: the z split alone clears the junk
            nbranch = junk_free(g_side["L"], "L", 1, j)
            zbranch = junk_free(g_side["R"], "R", 1, j)
            return g.res(nbranch, zbranch, zvar(1))
        acc = use(("alo_piv", j))
        for i in range(1, n + 1):
            nbranch = junk_free(g_side["L"], "L", i, j)
            zbranch = junk_free(g_side["R"], "R", i, j)
            pv = g.res(nbranch, zbranch, zvar(i))
            acc = g.res(acc, pv, b.var(lay.piv(i, j)))
        return acc

    # {!EL(i,m)}: the final line's clause is empty.
    def el_refute(i: int) -> GClause:
        branch_lines = []
        hs = []
        for e in (1, 0):
            h = b.and_(yvar(e, i, m), zlit(e, i))
            hs.append(h)
            dead = g.res(half_clause(h, 0), use(("c5", i, e)), yvar(e, i, m))
            branch_lines.append(w.canon_as(dead[0], g.j(b.imp(h, b.const(0)))))
        both = g.or_imp(branch_lines[0], branch_lines[1], hs[0], hs[1], b.const(0))
        return g.clause(both, [b.not_(el(i, m))])

    # -- induction over lines --------------------------------------------------

    s_clauses: list = [None] * (m + 1)
    top = m
    for j in range(1, m + 1):
        a_case = axiom_case(j)
        if j == 1:
            s_clauses[1] = g.res(use(("ax_first",)), a_case, b.var(lay.ax(1)))
        else:
            r_case = resolution_case(j, s_clauses)
            s_clauses[j] = g.res(r_case, a_case, b.var(lay.ax(j)))
        top = j
        if not s_clauses[j][1]:
            break

    acc = s_clauses[top]
    if acc[1]:
        assert top == m
        for i in range(1, n + 1):
            acc = g.res(acc, el_refute(i), el(i, m))
    assert not acc[1], "derivation did not reach the empty clause"
    bottom_line = w.canon_as(acc[0], g.j(b.const(0)))
    return _export(w, g, prf, sat, bottom_line, m, n, k, check)


def _export(
    w: _Writer, g: _Gamma, prf: int, sat: int, bottom_line: int, m: int, n: int, k: int, check: bool
) -> CfProof:
    """From gamma -> 0 conclude prf -> !sat, ending in the rfn circuit."""
    b = w.arena
    zero = b.const(0)
    gam = g.gamma
    s6 = w.schema(5, prf, sat)  # prf -> (sat -> gamma)
    t = w.lines[bottom_line][0]
    l1 = w.mp(w.schema(0, t, sat), bottom_line, b.imp(sat, t))
    l2 = w.mp(w.schema(0, b.imp(sat, t), prf), l1, b.imp(prf, b.imp(sat, t)))
    outer = _Gamma(w, prf)
    under = outer.mp_hyp(
        w.canon_as(l2, b.imp(prf, b.imp(sat, b.imp(gam, zero)))),
        w.canon_as(s6, b.imp(prf, b.imp(sat, gam))),
        sat,
        gam,
        zero,
    )
    final_node = b.imp(prf, b.not_(sat))
    w.emit(final_node, ("canon", under), dedup=False)
    proof = CfProof(w.arena, tuple(w.lines))
    assert proof.last_node == final_node
    assert proof.last_circuit() == build_rfn(m, n, k), "final circuit is not the reflection target"
    if check:
        report = cf_check(proof, table=w.ct)
        assert report.ok, f"reflection proof invalid at line {report.step}: {report.reason}"
    return proof


# ---------------------------------------------------------------------------
# Satisfaction/inlining equivalence


def cf_prove_sat_equiv(f: Cnf | Circuit) -> CfProof:
    """Six lines proving ``sat`` at ``f``'s code equivalent to ``f`` inlined.

    Accepts a CNF, or a circuit that structurally reads as one (an and-tree
    of or-trees of literals, as ``cnf_to_circuit`` emits).  Both circuits
    canonize identically -- the code bits are constants, so every selector
    gate folds to the chosen literal -- which makes each implication
    direction canonically true; the conjunction then needs one pairing
    schema and two detachments.  Always exactly 6 lines: the constant
    axiom, the two directions, and the pairing.
    """
    if isinstance(f, Circuit):
        f = cnf_from_circuit(f)
    code = encode_cnf(f, strict=False)
    w = _Writer(CircuitBuilder(f.n))
    b = w.arena
    satc = _sat_circuit(b, f.n, f.k, lambda e, i, l: b.const(code.get(e, i, l)), lambda i: b.var(i))
    inlined = b.cnf_circuit(f)
    fwd = b.imp(inlined, satc)
    bwd = b.imp(satc, inlined)
    # the two sides canonize identically, so p | q collapses to p and each
    # direction is canonically an instance of p -> (p | q)
    assert w.ct.canon(inlined) == w.ct.canon(satc)
    l_fwd = w.emit(fwd, ("schema", 6, (inlined, satc)), dedup=False)
    l_bwd = w.emit(bwd, ("schema", 6, (satc, inlined)), dedup=False)
    s6 = w.emit(
        instantiate_schema(b, 5, (fwd, bwd)), ("schema", 5, (fwd, bwd)), dedup=False
    )
    step = w.emit(b.imp(bwd, b.and_(fwd, bwd)), ("mp", s6, l_fwd), dedup=False)
    w.emit(b.and_(fwd, bwd), ("mp", step, l_bwd), dedup=False)
    proof = CfProof(w.arena, tuple(w.lines))
    assert len(proof) == 6
    report = cf_check(proof, table=w.ct)
    assert report.ok, report.reason
    return proof


def cnf_from_circuit(c: Circuit) -> Cnf:
    """Read a CNF back off its structural circuit form.

    Inverse of ``cnf_to_circuit`` (any and/or association is accepted, not
    just the balanced one); rejects circuits with other gate shapes.
    """
    b = CircuitBuilder(c.n_vars)
    root = b.import_circuit(c)

    def flatten(op: str, node: int) -> list[int]:
        out: list[int] = []
        stack = [node]
        while stack:
            x = stack.pop()
            g = b.nodes[x]
            if g[0] == op:
                stack.extend((g[2], g[1]))
            else:
                out.append(x)
        return out

    def literal(node: int) -> int:
        g = b.nodes[node]
        if g[0] == "var":
            return g[1]
        if g[0] == "not" and b.nodes[g[1]][0] == "var":
            return -b.nodes[g[1]][1]
        raise ValueError("circuit is not in CNF shape")

    top = b.nodes[root]
    if top == ("const", 1):
        return Cnf(c.n_vars, ())
    clauses = []
    for cl_node in flatten("and", root):
        if b.nodes[cl_node] == ("const", 0):
            clauses.append(frozenset())
        else:
            clauses.append(frozenset(literal(x) for x in flatten("or", cl_node)))
    return Cnf(c.n_vars, tuple(clauses))


# ---------------------------------------------------------------------------
# Substitution, explosion, local reflection


def _transplant(
    proof: CfProof, arena: CircuitBuilder, var_image: Callable[[int], int] | None = None
) -> tuple[CfLine, ...]:
    """Recreate a proof's lines inside another arena, mapping each input
    variable through ``var_image`` (identity when omitted).  Only the nodes
    the lines actually reach are copied."""
    needed: set[int] = set()
    stack: list[int] = []
    for node, just in proof.lines:
        stack.append(node)
        if just[0] in ("schema", "ext"):
            stack.extend(just[2])
    nodes = proof.arena.nodes
    while stack:
        x = stack.pop()
        if x in needed:
            continue
        needed.add(x)
        gx = nodes[x]
        if gx[0] not in ("var", "const"):
            stack.extend(gx[1:])

    remap: dict[int, int] = {}
    for x in sorted(needed):
        gx = nodes[x]
        if gx[0] == "var":
            remap[x] = arena.var(gx[1]) if var_image is None else var_image(gx[1])
        elif gx[0] == "const":
            remap[x] = arena.const(gx[1])
        elif gx[0] == "not":
            remap[x] = arena.not_(remap[gx[1]])
        elif gx[0] == "and":
            remap[x] = arena.and_(remap[gx[1]], remap[gx[2]])
        elif gx[0] == "or":
            remap[x] = arena.or_(remap[gx[1]], remap[gx[2]])
        else:
            remap[x] = arena.imp(remap[gx[1]], remap[gx[2]])

    lines = []
    for node, just in proof.lines:
        if just[0] in ("schema", "ext"):
            njust = (just[0], just[1], tuple(remap[s] for s in just[2]))
        else:
            njust = just
        lines.append((remap[node], njust))
    return tuple(lines)


def _rehouse(proof: CfProof, target: Circuit) -> tuple[CfProof, int]:
    """Copy a proof into a fresh arena seeded with ``target``'s gates, so
    that building the returned root id reproduces ``target`` gate for gate
    (importing into a shared arena would let hash-consing reuse older node
    ids and reorder the rebuilt gate list)."""
    arena = CircuitBuilder(max(proof.arena.n_vars, target.n_vars))
    tnode = arena.import_circuit(target)
    lines = _transplant(proof, arena)
    return CfProof(arena, lines), tnode


def cf_substitute(
    proof: CfProof,
    gamma: Mapping[int, Circuit],
    n_vars: int | None = None,
    extensions: Sequence[Circuit] = (),
) -> CfProof:
    """Replace input variables by circuits throughout a proof.

    The line count is unchanged and validity is preserved: canonical
    equality is a congruence for substitution.  Variables missing from
    ``gamma`` map to themselves.
    """
    if n_vars is None:
        n_vars = max([proof.arena.n_vars] + [c.n_vars for c in gamma.values()])
    arena = CircuitBuilder(n_vars)
    roots: dict[int, int] = {}
    for v, c in gamma.items():
        if not 1 <= v <= proof.arena.n_vars:
            raise ValueError(f"substituted variable {v} out of range")
        roots[v] = arena.import_circuit(c)

    def image(v: int) -> int:
        got = roots.get(v)
        return arena.var(v) if got is None else got

    out = CfProof(arena, _transplant(proof, arena, image))
    report = cf_check(out, extensions=extensions)
    assert report.ok, f"substituted proof invalid at line {report.step}: {report.reason}"
    return out


def cf_explode(
    proof: CfProof,
    a: Sequence[int],
    beta: Circuit,
    extensions: Sequence[Circuit] = (),
) -> CfProof:
    """From a proof of a falsifiable circuit, prove any ``beta`` in three
    extra lines.

    ``a`` must falsify the proof's last line.  Substituting it as constants
    canonizes that line to false, so "false implies beta" is canonically
    true and one detachment lands on ``beta``.
    """
    alpha = proof.last_circuit()
    if len(a) < alpha.n_vars:
        raise ValueError("assignment does not cover the proof's inputs")
    if eval_circuit(alpha, a):
        raise ValueError("assignment does not falsify the proved circuit")
    cb = CircuitBuilder(0)
    consts = {v: cb.build(cb.const(a[v - 1])) for v in range(1, proof.arena.n_vars + 1)}
    sub = cf_substitute(proof, consts, n_vars=beta.n_vars, extensions=extensions)
    sub, bnode = _rehouse(sub, beta)
    arena = sub.arena
    assert CanonTable(arena).canon(sub.last_node) == CanonTable(arena).FALSE
    lines = list(sub.lines)
    lines.append((arena.const(1), ("schema", 9, ())))
    lines.append((arena.imp(sub.last_node, bnode), ("canon", len(lines) - 1)))
    lines.append((bnode, ("mp", len(lines) - 1, len(sub.lines) - 1)))
    out = CfProof(arena, tuple(lines))
    assert out.last_circuit() == beta
    report = cf_check(out, extensions=extensions)
    assert report.ok, f"exploded proof invalid at line {report.step}: {report.reason}"
    return out


def lrfn_from_rfn(proof: CfProof, f: Cnf) -> CfProof:
    """Specialize a reflection proof to one CNF.

    Substitutes ``f``'s code bits as constants, re-points the assignment
    inputs at the local layout, and restates the last line as the
    local-reflection circuit -- a single canonization step, because the
    instantiated proof side matches gate for gate and the constant-folded
    satisfaction side canonizes like the inlined formula.
    """
    rfn = proof.last_circuit()
    n, k = f.n, f.k
    m = _solve_m(rfn.n_vars, n, k)
    # input counts can collide across layouts, so insist on the real shape
    if m is None or rfn != build_rfn(m, n, k):
        raise ValueError("formula dimensions do not match the proof's layout")
    V = PrfLayout(m, n, k).vars_proof
    code = encode_cnf(f, strict=False)
    cb = CircuitBuilder(V + n)
    gamma: dict[int, Circuit] = {}
    for q in range(2 * n * k):
        gamma[V + q + 1] = cb.build(cb.const(code.bits[q]))
    for i in range(1, n + 1):
        gamma[V + 2 * n * k + i] = cb.build(cb.var(V + i))
    sub = cf_substitute(proof, gamma, n_vars=V + n)
    target = build_lrfn(f, m)
    sub, tnode = _rehouse(sub, target)
    lines = list(sub.lines)
    lines.append((tnode, ("canon", len(lines) - 1)))
    out = CfProof(sub.arena, tuple(lines))
    assert out.last_circuit() == target
    report = cf_check(out)
    assert report.ok, f"localized proof invalid at line {report.step}: {report.reason}"
    return out


def _solve_m(total: int, n: int, k: int) -> int | None:
    m = 1
    while m * (3 * n + k + m) + 2 * n * k + n <= total:
        if m * (3 * n + k + m) + 2 * n * k + n == total:
            return m
        m += 1
    return None
