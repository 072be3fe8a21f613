"""Propositional encodings of refutation existence and satisfiability.

The central object is the refutation-existence CNF ``prf``: its variables
describe an ``m``-line resolution refutation (with weakening) of a CNF with
``n`` variables and ``k`` clauses, given either as a concrete clause code or
left symbolic as extra code inputs.  Satisfying assignments decode to
checkable refutations and vice versa; see :func:`build_prf`.

On top of it sit the circuit forms: ``sat`` (a coded CNF is satisfied by an
assignment), ``rfn`` (a refutation of a coded CNF certifies that no
assignment satisfies it), ``lrfn`` (the code is fixed, the formula is
inlined), and ``con`` (no refutation of the empty-clause-free trivial code
of the contradiction exists... for ``k = 0`` no download can ever produce
the empty clause, so ``con`` states plain non-provability).

Variable layout of ``prf`` (all blocks 1-based, ``j`` indexes proof lines):

====================  ==========================================  =========
block                 meaning                                     count.
====================  ==========================================  =========
``y(e, i, j)``        literal (e, i) occurs in line j's clause    ``2nm``
``ax(j)``             line j downloads an input clause            ``m``
``s(l, j)``           ... namely clause l                         ``km``
``piv(i, j)``         line j resolves on variable i               ``nm``
``L(j', j)``          ... with positive premise j'                ``m(m-1)/2``
``R(j', j)``          ... and negative premise j'                 ``m(m-1)/2``
====================  ==========================================  =========

for ``m(3n + k + m)`` variables in total, plus ``2nk`` code inputs
``c(e, i, l)`` in the symbolic variant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .core import (
    Circuit,
    CircuitBuilder,
    Cnf,
    CnfCode,
    TemplateCode,
    TemplateEntry,
    code_pos,
    emit_dimacs,
    encode_cnf,
    shift_cnf,
)
from .resolution import ResolutionProof


# ---------------------------------------------------------------------------
# Size budgets


@dataclass(frozen=True)
class PolyBudget:
    """A pair of polynomials (ascending coefficients) bounding the
    translation: ``p`` maps input size to line count, ``q`` maps line count
    to generated-refutation length."""

    p: tuple[int, ...] = (0, 4)
    q: tuple[int, ...] = (0, 0, 0, 1)

    def __post_init__(self) -> None:
        for coeffs in (self.p, self.q):
            if not coeffs or any(c < 0 for c in coeffs):
                raise ValueError("budget coefficients must be nonnegative")
            if all(c == 0 for c in coeffs[1:]):
                raise ValueError("budget polynomial must have degree >= 1")

    @staticmethod
    def _eval(coeffs: tuple[int, ...], s: int) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = acc * s + c
        return acc

    def eval_p(self, s: int) -> int:
        return self._eval(self.p, s)

    def eval_q(self, s: int) -> int:
        return self._eval(self.q, s)


DEFAULT_BUDGET = PolyBudget()


# ---------------------------------------------------------------------------
# Variable layout


@dataclass(frozen=True)
class PrfLayout:
    m: int
    n: int
    k: int
    symbolic: bool = False

    def __post_init__(self) -> None:
        assert self.m >= 1 and self.n >= 0 and self.k >= 0

    @property
    def vars_proof(self) -> int:
        """Variables describing the proof itself (the x block)."""
        m, n, k = self.m, self.n, self.k
        return m * (3 * n + k + m)

    @property
    def total_vars(self) -> int:
        return self.vars_proof + (2 * self.n * self.k if self.symbolic else 0)

    def y(self, e: int, i: int, j: int) -> int:
        assert e in (0, 1) and 1 <= i <= self.n and 1 <= j <= self.m
        return (j - 1) * 2 * self.n + 2 * (i - 1) + e + 1

    def ax(self, j: int) -> int:
        assert 1 <= j <= self.m
        return 2 * self.n * self.m + j

    def s(self, l: int, j: int) -> int:
        assert 1 <= l <= self.k and 1 <= j <= self.m
        return 2 * self.n * self.m + self.m + (j - 1) * self.k + l

    def piv(self, i: int, j: int) -> int:
        assert 1 <= i <= self.n and 1 <= j <= self.m
        return self.m * (2 * self.n + 1 + self.k) + (j - 1) * self.n + i

    def _arc_base(self) -> int:
        return self.m * (3 * self.n + 1 + self.k)

    def L(self, jp: int, j: int) -> int:
        assert 2 <= j <= self.m and 1 <= jp < j
        return self._arc_base() + (j - 2) * (j - 1) // 2 + jp

    def R(self, jp: int, j: int) -> int:
        assert 2 <= j <= self.m and 1 <= jp < j
        return self._arc_base() + self.m * (self.m - 1) // 2 + (j - 2) * (j - 1) // 2 + jp

    def code(self, e: int, i: int, l: int) -> int:
        assert self.symbolic, "instantiated layout has no code inputs"
        return self.vars_proof + code_pos(e, i, l, self.n, self.k) + 1

    def var_name(self, v: int) -> str:
        """Human-readable name for variable ``v``, for map sidecars."""
        m, n, k = self.m, self.n, self.k
        assert 1 <= v <= self.total_vars
        if v <= 2 * n * m:
            j, r = divmod(v - 1, 2 * n)
            i, e = divmod(r, 2)
            return f"y[e={e},i={i + 1},j={j + 1}]"
        v2 = v - 2 * n * m
        if v2 <= m:
            return f"ax[j={v2}]"
        v2 -= m
        if v2 <= k * m:
            j, l = divmod(v2 - 1, k)
            return f"s[l={l + 1},j={j + 1}]"
        v2 -= k * m
        if v2 <= n * m:
            j, i = divmod(v2 - 1, n)
            return f"piv[i={i + 1},j={j + 1}]"
        v2 -= n * m
        half = m * (m - 1) // 2
        side = "L" if v2 <= half else "R"
        if v2 > half:
            v2 -= half
        j = 2
        while (j - 1) * j // 2 < v2:
            j += 1
        jp = v2 - (j - 2) * (j - 1) // 2
        return f"{side}[j'={jp},j={j}]"


# ---------------------------------------------------------------------------
# Clause stream

# Each constraint clause is (name, static_lits, slot) where ``slot`` is None
# for ordinary clauses and (j, l, i, e) for the code-dependent ones: those
# carry literal +y(e,i,j) when code bit (e,i,l) is 1 and the tautologizing
# literal +s(l,j) when it is 0 (clause counts stay code-independent).


def _prf_clauses(lay: PrfLayout) -> Iterator[tuple[tuple, list[int], tuple | None]]:
    m, n, k = lay.m, lay.n, lay.k
    # Structural constraints: every line is a download or a resolution with
    # one-hot selector groups.
    for j in range(1, m + 1):
        if j == 1:
            yield ("ax_first",), [lay.ax(1)], None
        else:
            yield ("alo_arc_L", j), [lay.ax(j)] + [lay.L(jp, j) for jp in range(1, j)], None
            yield ("alo_arc_R", j), [lay.ax(j)] + [lay.R(jp, j) for jp in range(1, j)], None
            yield ("alo_piv", j), [lay.ax(j)] + [lay.piv(i, j) for i in range(1, n + 1)], None
        yield ("alo_s", j), [-lay.ax(j)] + [lay.s(l, j) for l in range(1, k + 1)], None
        for l1 in range(1, k + 1):
            for l2 in range(l1 + 1, k + 1):
                yield ("amo_s", j, l1, l2), [-lay.ax(j), -lay.s(l1, j), -lay.s(l2, j)], None
        if j >= 2:
            for i1 in range(1, n + 1):
                for i2 in range(i1 + 1, n + 1):
                    yield ("amo_piv", j, i1, i2), [lay.ax(j), -lay.piv(i1, j), -lay.piv(i2, j)], None
            for side, var in (("L", lay.L), ("R", lay.R)):
                for a in range(1, j):
                    for b in range(a + 1, j):
                        yield ("amo_arc_" + side, j, a, b), [lay.ax(j), -var(a, j), -var(b, j)], None
    # Downloaded lines contain the selected clause.
    for j in range(1, m + 1):
        for l in range(1, k + 1):
            for i in range(1, n + 1):
                for e in (1, 0):
                    yield ("c2", j, l, i, e), [-lay.ax(j), -lay.s(l, j), lay.y(e, i, j)], (j, l, i, e)
    # The pivot occurs positively in the L premise and negatively in the R.
    for j in range(2, m + 1):
        for jp in range(1, j):
            for i in range(1, n + 1):
                yield ("c3", "L", j, jp, i), [lay.ax(j), -lay.L(jp, j), -lay.piv(i, j), lay.y(1, i, jp)], None
                yield ("c3", "R", j, jp, i), [lay.ax(j), -lay.R(jp, j), -lay.piv(i, j), lay.y(0, i, jp)], None
    # Premise literals flow into the resolvent, except the pivot pair.
    for j in range(2, m + 1):
        for jp in range(1, j):
            for i in range(1, n + 1):
                yield ("c4", "L", 1, j, jp, i), [lay.ax(j), -lay.L(jp, j), -lay.y(1, i, jp), lay.piv(i, j), lay.y(1, i, j)], None
                yield ("c4", "L", 0, j, jp, i), [lay.ax(j), -lay.L(jp, j), -lay.y(0, i, jp), lay.y(0, i, j)], None
                yield ("c4", "R", 1, j, jp, i), [lay.ax(j), -lay.R(jp, j), -lay.y(1, i, jp), lay.y(1, i, j)], None
                yield ("c4", "R", 0, j, jp, i), [lay.ax(j), -lay.R(jp, j), -lay.y(0, i, jp), lay.piv(i, j), lay.y(0, i, j)], None
    # The final line is the empty clause.
    for i in range(1, n + 1):
        for e in (1, 0):
            yield ("c5", i, e), [-lay.y(e, i, m)], None


@dataclass(frozen=True)
class EncodingArtifact:
    """A built formula together with its layout and bookkeeping.

    ``clause_index`` maps constraint names to clause positions; ``params``
    records construction inputs for reports.  Both are bookkeeping, not
    identity.
    """

    formula: Cnf
    layout: PrfLayout
    family: str
    code: CnfCode | None
    params: dict = field(compare=False, default_factory=dict)
    clause_index: dict = field(compare=False, default_factory=dict)


def build_prf(m: int, n: int, k: int, code: CnfCode | None = None) -> EncodingArtifact:
    """The refutation-existence CNF (see module docstring).

    With ``code`` given, its bits select which download slots are real;
    without it, the formula is symbolic over ``2nk`` trailing code inputs.
    Satisfying assignments are exactly the bit images of ``m``-line
    weakening refutations of the coded CNF (junk bits in unread selector
    blocks aside); :func:`decode_prf_assignment` realizes one direction,
    :func:`proofgen.encode_witness <proofbench.proofgen.encode_witness>`
    the other.
    """
    if code is not None and (code.n, code.k) != (n, k):
        raise ValueError("code dimensions do not match n, k")
    lay = PrfLayout(m, n, k, symbolic=code is None)
    clauses: list[frozenset[int]] = []
    index: dict[tuple, int] = {}
    for name, static, slot in _prf_clauses(lay):
        if slot is None:
            cl = frozenset(static)
        else:
            j, l, i, e = slot
            if code is None:
                cl = frozenset(static[:2] + [-lay.code(e, i, l), static[2]])
            elif code.get(e, i, l):
                cl = frozenset(static)
            else:
                cl = frozenset(static[:2] + [lay.s(l, j)])
        index[name] = len(clauses)
        clauses.append(cl)
    formula = Cnf(lay.total_vars, tuple(clauses))
    params = {"m": m, "n": n, "k": k, "symbolic": code is None}
    return EncodingArtifact(formula, lay, "prf", code, params, index)


def _one_hot(bits: Sequence[int], vars_: Sequence[int]) -> int | None:
    """Index (1-based within the group) of the single set variable, if any."""
    hot = [t for t, v in enumerate(vars_, start=1) if bits[v - 1]]
    return hot[0] if len(hot) == 1 else None


def decode_prf_assignment(artifact: EncodingArtifact, bits: Sequence[int]) -> ResolutionProof | None:
    """Read a proof out of an assignment to a ``prf`` formula.

    Returns ``None`` when a needed selector group is not exactly one-hot
    (such assignments never satisfy the formula).  The result refutes the
    coded CNF and checks in weakening mode exactly when ``bits`` satisfies
    the formula.
    """
    from .core import decode_cnf

    lay = artifact.layout
    if lay.symbolic:
        raise ValueError("cannot decode against a symbolic artifact")
    assert artifact.code is not None
    if len(bits) != lay.total_vars:
        raise ValueError(f"expected {lay.total_vars} bits, got {len(bits)}")
    target = decode_cnf(artifact.code, strict=False)
    lines = []
    for j in range(1, lay.m + 1):
        clause = frozenset(
            (i if e else -i)
            for i in range(1, lay.n + 1)
            for e in (0, 1)
            if bits[lay.y(e, i, j) - 1]
        )
        if bits[lay.ax(j) - 1]:
            l = _one_hot(bits, [lay.s(l, j) for l in range(1, lay.k + 1)])
            if l is None:
                return None
            lines.append((clause, ("A", l - 1)))
        else:
            if j == 1:
                return None
            i = _one_hot(bits, [lay.piv(i, j) for i in range(1, lay.n + 1)])
            jl = _one_hot(bits, [lay.L(jp, j) for jp in range(1, j)])
            jr = _one_hot(bits, [lay.R(jp, j) for jp in range(1, j)])
            if i is None or jl is None or jr is None:
                return None
            lines.append((clause, ("R", jl - 1, jr - 1, i)))
    return ResolutionProof(target, tuple(lines))


# ---------------------------------------------------------------------------
# Circuit forms


def _prf_circuit(
    b: CircuitBuilder,
    lay: PrfLayout,
    x_of: Callable[[int], int],
    code_of: Callable[[int, int, int], int],
) -> int:
    """The prf constraints as one conjunction; code bits come from
    ``code_of`` so instantiated, shared-input, and template-wired variants
    all share this shape."""

    def litnode(lit: int) -> int:
        node = x_of(abs(lit))
        return node if lit > 0 else b.not_(node)

    conj = []
    for _name, static, slot in _prf_clauses(lay):
        if slot is None:
            conj.append(b.or_many([litnode(l) for l in static]))
        else:
            j, l, i, e = slot
            parts = [litnode(static[0]), litnode(static[1]), b.not_(code_of(e, i, l)), litnode(static[2])]
            conj.append(b.or_many(parts))
    return b.and_many(conj)


def _sat_circuit(
    b: CircuitBuilder,
    n: int,
    k: int,
    code_of: Callable[[int, int, int], int],
    z_of: Callable[[int], int],
) -> int:
    """Truth of the coded CNF under the assignment z: every clause has a
    coded literal made true."""
    clause_nodes = []
    for l in range(1, k + 1):
        picks = []
        for i in range(1, n + 1):
            z = z_of(i)
            picks.append(b.or_(b.and_(code_of(1, i, l), z), b.and_(code_of(0, i, l), b.not_(z))))
        clause_nodes.append(b.or_many(picks))
    return b.and_many(clause_nodes)


def build_sat(n: int, k: int) -> Circuit:
    """sat(c, z): inputs are the ``2nk`` code bits then the ``n`` bits of z."""
    b = CircuitBuilder(2 * n * k + n)
    root = _sat_circuit(
        b,
        n,
        k,
        lambda e, i, l: b.var(code_pos(e, i, l, n, k) + 1),
        lambda i: b.var(2 * n * k + i),
    )
    return b.build(root)


def build_rfn(m: int, n: int, k: int) -> Circuit:
    """rfn: a refutation of the coded CNF implies no assignment satisfies it.

    Inputs: proof bits x (``m(3n+k+m)``), then code bits c (``2nk``), then
    the candidate assignment z (``n``).
    """
    b = CircuitBuilder(PrfLayout(m, n, k).vars_proof + 2 * n * k + n)
    prf, sat = _rfn_parts(b, m, n, k)
    return b.build(b.imp(prf, b.not_(sat)))


def _rfn_parts(b: CircuitBuilder, m: int, n: int, k: int) -> tuple[int, int]:
    """The two sides of rfn inside a caller-owned builder (the Frege-proof
    generator rebuilds them to state its final theorem)."""
    lay = PrfLayout(m, n, k)
    V = lay.vars_proof
    code_of = lambda e, i, l: b.var(V + code_pos(e, i, l, n, k) + 1)
    prf = _prf_circuit(b, lay, lambda v: b.var(v), code_of)
    sat = _sat_circuit(b, n, k, code_of, lambda i: b.var(V + 2 * n * k + i))
    return prf, sat


def build_lrfn(f: Cnf, m: int) -> Circuit:
    """Local reflection at a fixed CNF: either x is no refutation of
    ``f``'s code, or ``f`` itself (inlined over fresh z inputs) fails.

    Inputs: proof bits x, then z (``f.n``).  A tautology for every ``f``
    and ``m``; never a tautology if prf and the inlining disagreed, which
    is what the tautology harness probes.
    """
    code = encode_cnf(f, strict=False)
    lay = PrfLayout(m, f.n, f.k)
    V = lay.vars_proof
    b = CircuitBuilder(V + f.n)
    prf = _prf_circuit(
        b, lay, lambda v: b.var(v), lambda e, i, l: b.const(code.get(e, i, l))
    )
    inlined = b.cnf_circuit(shift_cnf(f, V, V + f.n))
    return b.build(b.or_(b.not_(prf), b.not_(inlined)))


def build_con(m: int, n: int) -> Circuit:
    """Consistency: no ``m``-line refutation of the empty CNF (``k = 0``)
    exists.  All inputs are proof bits; with nothing to download every
    assignment fails the download constraints, so this is a tautology."""
    lay = PrfLayout(m, n, 0)
    b = CircuitBuilder(lay.vars_proof)
    prf = _prf_circuit(b, lay, lambda v: b.var(v), lambda e, i, l: b.const(0))
    return b.build(b.not_(prf))


# ---------------------------------------------------------------------------
# Reduction


def am_reduce(f: Cnf, budget: PolyBudget = DEFAULT_BUDGET) -> EncodingArtifact:
    """Map a CNF to the refutation-existence instance at the budgeted size.

    The line budget is ``p`` applied to the byte length of the canonical
    DIMACS form.  The result is satisfiable iff ``f`` has an ``m``-line
    weakening refutation; for unsatisfiable ``f`` of modest size the DPLL
    refutation fits (its witness satisfies the instance), while satisfiable
    ``f`` admit no refutation at all, so the instance flips to
    unsatisfiable.
    """
    s = len(emit_dimacs(f).encode())
    m = budget.eval_p(s)
    if m < 1:
        raise ValueError("budget gives no proof lines")
    art = build_prf(m, f.n, f.k, encode_cnf(f, strict=False))
    art.params.update({"source_bytes": s, "source_n": f.n, "source_k": f.k,
                       "p": budget.p, "q": budget.q})
    return art


# ---------------------------------------------------------------------------
# Benchmark families


def build_php(pigeons: int, holes: int) -> Cnf:
    """Pigeonhole: every pigeon sits somewhere, no hole holds two.
    Variable ``(i-1)*holes + j`` places pigeon i in hole j."""
    assert pigeons >= 1 and holes >= 0
    p = lambda i, j: (i - 1) * holes + j
    clauses = []
    for i in range(1, pigeons + 1):
        clauses.append(frozenset(p(i, j) for j in range(1, holes + 1)))
    for j in range(1, holes + 1):
        for i1 in range(1, pigeons + 1):
            for i2 in range(i1 + 1, pigeons + 1):
                clauses.append(frozenset([-p(i1, j), -p(i2, j)]))
    return Cnf(pigeons * holes, tuple(clauses))


def build_clique_color(k: int, vertices: int) -> tuple[Cnf, Cnf, dict[tuple[int, int], int]]:
    """The clique/coloring pair over a shared edge-variable block.

    Side one says the edge set contains a ``k+1``-clique, side two says it
    is ``k``-colorable; both live in the same variable space, mention
    disjoint witness blocks, and are jointly unsatisfiable.  Returns both
    CNFs and the edge-variable map.
    """
    assert k >= 1 and vertices >= 1
    edge: dict[tuple[int, int], int] = {}
    for u in range(1, vertices + 1):
        for v in range(u + 1, vertices + 1):
            edge[(u, v)] = len(edge) + 1
    E = len(edge)
    q = lambda a, u: E + (a - 1) * vertices + u  # clique slot a -> vertex u
    c = lambda u, t: E + (k + 1) * vertices + (u - 1) * k + t  # vertex color
    n = E + (k + 1) * vertices + vertices * k

    clique = []
    for a in range(1, k + 2):
        clique.append(frozenset(q(a, u) for u in range(1, vertices + 1)))
    for a in range(1, k + 2):
        for b2 in range(a + 1, k + 2):
            for u in range(1, vertices + 1):
                clique.append(frozenset([-q(a, u), -q(b2, u)]))
    for a in range(1, k + 2):
        for b2 in range(1, k + 2):
            if a == b2:
                continue
            for u in range(1, vertices + 1):
                for v in range(1, vertices + 1):
                    if u == v:
                        continue
                    if u < v:
                        clique.append(frozenset([-q(a, u), -q(b2, v), edge[(u, v)]]))

    color = []
    for u in range(1, vertices + 1):
        color.append(frozenset(c(u, t) for t in range(1, k + 1)))
    for (u, v), ev in edge.items():
        for t in range(1, k + 1):
            color.append(frozenset([-ev, -c(u, t), -c(v, t)]))

    return Cnf(n, tuple(clique)), Cnf(n, tuple(color)), edge


# ---------------------------------------------------------------------------
# Templates and the friendly disjunction


def build_prf_template(m: int, n: int, k: int) -> TemplateCode:
    """The prf CNF as a clause-code template over the ``2nk`` code bits.

    Only the download slots depend on the code: bit (e,i,l) turns literal
    ``+y(e,i,j)`` on and the tautologizing ``+s(l,j)`` off.  Instantiating
    the template and encoding ``build_prf(m, n, k, code)`` give the same
    code for every value of the parameters.
    """
    lay = PrfLayout(m, n, k)
    stream = list(_prf_clauses(lay))
    V, K = lay.vars_proof, len(stream)
    entries: list[TemplateEntry] = [("const", 0)] * (2 * V * K)

    def put(e: int, v: int, col: int, entry: TemplateEntry) -> None:
        entries[code_pos(e, v, col, V, K)] = entry

    for col, (_name, static, slot) in enumerate(stream, start=1):
        if slot is None:
            for lit in static:
                put(1 if lit > 0 else 0, abs(lit), col, ("const", 1))
        else:
            j, l, i, e = slot
            put(0, abs(static[0]), col, ("const", 1))  # -ax(j)
            put(0, abs(static[1]), col, ("const", 1))  # -s(l,j)
            put(1, static[2], col, ("ref", code_pos(e, i, l, n, k)))  # +y
            put(1, lay.s(l, j), col, ("negref", code_pos(e, i, l, n, k)))  # +s
    return TemplateCode(V, K, 2 * n * k, tuple(entries))


def build_strongly_friendly(
    n: int, budget: PolyBudget = DEFAULT_BUDGET, k: int | None = None
) -> Circuit:
    """The disjunction "x is no refutation of prf's code, or that code is
    satisfiable", with the inner prf's code template-wired to the ``2nk``
    bits of an arbitrary coded CNF.

    One disjunct is satisfied whichever way the coded refutation-existence
    question falls, which is what makes the disjunction easy to settle per
    instance.  Inputs: x (outer proof bits), then the ``2nk`` inner code
    bits y, then u (a candidate assignment for the inner prf variables).
    """
    if k is None:
        k = 2 * n
    m = budget.eval_p(n)
    tpl = build_prf_template(m, n, k)
    n_in, k_in = tpl.n, tpl.k  # inner prf: variable and clause counts
    m_out = budget.eval_p(m)
    lay_out = PrfLayout(m_out, n_in, k_in)
    V_out = lay_out.vars_proof
    params = 2 * n * k
    b = CircuitBuilder(V_out + params + n_in)

    def wired(e: int, i: int, l: int) -> int:
        kind, v = tpl.entries[code_pos(e, i, l, n_in, k_in)]
        if kind == "const":
            return b.const(v)
        ref = b.var(V_out + v + 1)
        return ref if kind == "ref" else b.not_(ref)

    prf_outer = _prf_circuit(b, lay_out, lambda v: b.var(v), wired)
    sat_outer = _sat_circuit(b, n_in, k_in, wired, lambda i: b.var(V_out + params + i))
    return b.build(b.or_(b.not_(prf_outer), sat_outer))


# ---------------------------------------------------------------------------
# Sidecar variable maps


def layout_map_text(lay: PrfLayout) -> str:
    """One ``<index> <name>`` line per variable, grouped by block."""
    out = []
    for v in range(1, lay.total_vars + 1):
        if lay.symbolic and v > lay.vars_proof:
            q = v - lay.vars_proof - 1
            e, r = divmod(q, lay.n * lay.k)
            i, l = divmod(r, lay.k)
            out.append(f"{v} c[e={e},i={i + 1},l={l + 1}]")
        else:
            out.append(f"{v} {lay.var_name(v)}")
    return "\n".join(out) + "\n"
