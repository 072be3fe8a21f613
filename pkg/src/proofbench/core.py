"""Core value types: CNFs, clause codes, templates, circuits, and file formats.

Conventions used throughout the package:

* Variables are positive integers ``1..n``; a literal is a DIMACS-signed
  integer (``-3`` is the negation of variable ``3``).  A clause is a
  ``frozenset`` of literals and a CNF is an ordered tuple of clauses.
* A total assignment is a sequence of ``n`` bits indexed by ``var - 1``.
  Partial assignments are ``{var: bit}`` mappings.
* Clause codes use a 2 x n x k bit matrix: bit ``(e, i, l)`` says that
  clause ``l`` contains variable ``i`` with polarity ``e`` (``e = 1`` for
  the positive literal).  The matrix is stored flattened in the fixed order
  ``e * n * k + (i - 1) * k + (l - 1)``.
* Circuits are gate lists over ``var/const/not/and/or/imp`` with gates
  referencing earlier gates only; implication is first-class so that
  Hilbert-style schemas can be stated without rewriting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


# ---------------------------------------------------------------------------
# CNFs


@dataclass(frozen=True)
class Cnf:
    """A CNF with a declared variable count and an ordered clause tuple."""

    n: int
    clauses: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        assert self.n >= 0
        for cl in self.clauses:
            for lit in cl:
                if lit == 0 or abs(lit) > self.n:
                    raise ValueError(f"literal {lit} out of range for n={self.n}")

    @property
    def k(self) -> int:
        return len(self.clauses)


def cnf(n: int, clause_lists: Iterable[Iterable[int]]) -> Cnf:
    """Convenience constructor from literal lists."""
    return Cnf(n, tuple(frozenset(c) for c in clause_lists))


def is_normalized(f: Cnf) -> bool:
    """True when no clause contains a variable in both polarities."""
    return all(not any(-lit in cl for lit in cl) for cl in f.clauses)


def lit_true(lit: int, a: Sequence[int]) -> bool:
    v = abs(lit)
    return bool(a[v - 1]) == (lit > 0)


def eval_clause(cl: frozenset[int], a: Sequence[int]) -> bool:
    return any(lit_true(lit, a) for lit in cl)


def eval_cnf(f: Cnf, a: Sequence[int]) -> bool:
    """True iff every clause contains a satisfied literal."""
    if len(a) != f.n:
        raise ValueError(f"assignment length {len(a)} != n={f.n}")
    return all(eval_clause(cl, a) for cl in f.clauses)


def restrict_clause(cl: frozenset[int], rho: Mapping[int, int]) -> frozenset[int] | None:
    """Apply a partial assignment; ``None`` means the clause was satisfied."""
    out = []
    for lit in cl:
        v = abs(lit)
        if v in rho:
            if bool(rho[v]) == (lit > 0):
                return None
            # falsified literal: drop it
        else:
            out.append(lit)
    return frozenset(out)


def restrict_cnf(f: Cnf, rho: Mapping[int, int]) -> Cnf:
    """Delete satisfied clauses, strip falsified literals; keeps ``n``."""
    kept = []
    for cl in f.clauses:
        r = restrict_clause(cl, rho)
        if r is not None:
            kept.append(r)
    return Cnf(f.n, tuple(kept))


def shift_cnf(f: Cnf, offset: int, n: int) -> Cnf:
    """Re-embed ``f`` with every variable moved up by ``offset`` inside a
    space of ``n`` variables (used to build variable-disjoint pairs)."""
    if offset < 0 or f.n + offset > n:
        raise ValueError("shift does not fit the target variable space")
    move = lambda lit: lit + offset if lit > 0 else lit - offset
    return Cnf(n, tuple(frozenset(move(l) for l in cl) for cl in f.clauses))


# ---------------------------------------------------------------------------
# Clause codes and templates


def code_pos(e: int, i: int, l: int, n: int, k: int) -> int:
    """Position of bit (e, i, l) in the flattened 2 x n x k code."""
    assert e in (0, 1) and 1 <= i <= n and 1 <= l <= k
    return e * n * k + (i - 1) * k + (l - 1)


@dataclass(frozen=True)
class CnfCode:
    """The flattened bit string representing a CNF (see module docstring)."""

    n: int
    k: int
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != 2 * self.n * self.k:
            raise ValueError("code has wrong dimensions")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("code bits must be 0/1")

    def get(self, e: int, i: int, l: int) -> int:
        return self.bits[code_pos(e, i, l, self.n, self.k)]


def is_normalized_code(code: CnfCode) -> bool:
    return all(
        not (code.get(0, i, l) and code.get(1, i, l))
        for i in range(1, code.n + 1)
        for l in range(1, code.k + 1)
    )


def encode_cnf(f: Cnf, strict: bool = True) -> CnfCode:
    """Build the 2 x n x k code of ``f``.

    In strict mode a clause holding both polarities of a variable is
    rejected; family generators only emit such clauses deliberately (they
    are tautological) and must opt out.
    """
    if strict and not is_normalized(f):
        raise ValueError("non-normalized CNF (tautological clause)")
    bits = [0] * (2 * f.n * f.k)
    for l, cl in enumerate(f.clauses, start=1):
        for lit in cl:
            e = 1 if lit > 0 else 0
            bits[code_pos(e, abs(lit), l, f.n, f.k)] = 1
    return CnfCode(f.n, f.k, tuple(bits))


def decode_cnf(code: CnfCode, strict: bool = True) -> Cnf:
    """Inverse of :func:`encode_cnf`; exact round-trip in both directions."""
    if strict and not is_normalized_code(code):
        raise ValueError("non-normalized code (clause with both polarities)")
    clauses = []
    for l in range(1, code.k + 1):
        cl = []
        for i in range(1, code.n + 1):
            if code.get(1, i, l):
                cl.append(i)
            if code.get(0, i, l):
                cl.append(-i)
        clauses.append(frozenset(cl))
    return Cnf(code.n, tuple(clauses))


# Template entries: ('const', b) | ('ref', j) | ('negref', j).  A negated
# reference is needed because some constraint slots of the proof encodings
# must appear exactly when a code bit is *zero*; with positive references
# alone a template could never remove a literal when a parameter flips on.
TemplateEntry = tuple[str, int]


@dataclass(frozen=True)
class TemplateCode:
    """A clause code whose bits may reference parameter variables."""

    n: int
    k: int
    params: int
    entries: tuple[TemplateEntry, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != 2 * self.n * self.k:
            raise ValueError("template has wrong dimensions")
        for kind, v in self.entries:
            if kind == "const":
                if v not in (0, 1):
                    raise ValueError("bad constant entry")
            elif kind in ("ref", "negref"):
                if not 0 <= v < self.params:
                    raise ValueError("parameter reference out of range")
            else:
                raise ValueError(f"unknown template entry kind {kind!r}")


def instantiate_template(t: TemplateCode, values: Sequence[int]) -> CnfCode:
    if len(values) != t.params:
        raise ValueError(f"expected {t.params} parameter bits, got {len(values)}")
    if any(v not in (0, 1) for v in values):
        raise ValueError("parameter bits must be 0/1")
    bits = []
    for kind, v in t.entries:
        if kind == "const":
            bits.append(v)
        elif kind == "ref":
            bits.append(values[v])
        else:
            bits.append(1 - values[v])
    return CnfCode(t.n, t.k, tuple(bits))


# ---------------------------------------------------------------------------
# Circuits

# Gate forms: ('var', i) with i >= 1, ('const', b), ('not', g),
# ('and', g, h), ('or', g, h), ('imp', g, h); g, h index earlier gates.
Gate = tuple

GATE_KINDS = ("var", "const", "not", "and", "or", "imp")


@dataclass(frozen=True)
class Circuit:
    """An immutable gate list; the last gate is the output."""

    n_vars: int
    gates: tuple[Gate, ...]

    def __post_init__(self) -> None:
        if not self.gates:
            raise ValueError("empty circuit")
        for idx, g in enumerate(self.gates):
            kind = g[0]
            if kind == "var":
                if not 1 <= g[1] <= self.n_vars:
                    raise ValueError(f"gate {idx}: input {g[1]} out of range")
            elif kind == "const":
                if g[1] not in (0, 1):
                    raise ValueError(f"gate {idx}: bad constant")
            elif kind == "not":
                if not 0 <= g[1] < idx:
                    raise ValueError(f"gate {idx}: bad reference")
            elif kind in ("and", "or", "imp"):
                if not (0 <= g[1] < idx and 0 <= g[2] < idx):
                    raise ValueError(f"gate {idx}: bad reference")
            else:
                raise ValueError(f"gate {idx}: unknown kind {kind!r}")

    @property
    def output(self) -> int:
        return len(self.gates) - 1

    def size(self) -> int:
        return len(self.gates)


def eval_circuit(c: Circuit, a: Sequence[int]) -> bool:
    """Evaluate under the standard gate semantics (iterative, DAG-sized)."""
    if len(a) < c.n_vars:
        raise ValueError(f"assignment length {len(a)} < inputs {c.n_vars}")
    vals = [False] * len(c.gates)
    for idx, g in enumerate(c.gates):
        kind = g[0]
        if kind == "var":
            vals[idx] = bool(a[g[1] - 1])
        elif kind == "const":
            vals[idx] = bool(g[1])
        elif kind == "not":
            vals[idx] = not vals[g[1]]
        elif kind == "and":
            vals[idx] = vals[g[1]] and vals[g[2]]
        elif kind == "or":
            vals[idx] = vals[g[1]] or vals[g[2]]
        else:  # imp
            vals[idx] = (not vals[g[1]]) or vals[g[2]]
    return vals[-1]


class CircuitBuilder:
    """Hash-consing builder; identical gates share one node.

    Node ids index ``self.nodes``.  ``build(root)`` trims to the gates
    reachable from ``root`` and renumbers them topologically, so two
    structurally identical constructions serialize identically.
    """

    def __init__(self, n_vars: int):
        assert n_vars >= 0
        self.n_vars = n_vars
        self.nodes: list[Gate] = []
        self._memo: dict[Gate, int] = {}

    def _add(self, node: Gate) -> int:
        got = self._memo.get(node)
        if got is not None:
            return got
        self.nodes.append(node)
        nid = len(self.nodes) - 1
        self._memo[node] = nid
        return nid

    def var(self, i: int) -> int:
        if not 1 <= i <= self.n_vars:
            raise ValueError(f"input {i} out of range (n_vars={self.n_vars})")
        return self._add(("var", i))

    def const(self, b: int) -> int:
        return self._add(("const", 1 if b else 0))

    def not_(self, g: int) -> int:
        return self._add(("not", g))

    def and_(self, g: int, h: int) -> int:
        return self._add(("and", g, h))

    def or_(self, g: int, h: int) -> int:
        return self._add(("or", g, h))

    def imp(self, g: int, h: int) -> int:
        return self._add(("imp", g, h))

    def lit(self, lit: int) -> int:
        """Literal as a circuit: var or its negation."""
        v = self.var(abs(lit))
        return v if lit > 0 else self.not_(v)

    def _fold(self, op, items: Sequence[int], empty: int) -> int:
        """Balanced fold for deterministic, shallow n-ary gates."""
        if not items:
            return self.const(empty)
        items = list(items)
        while len(items) > 1:
            nxt = []
            for j in range(0, len(items) - 1, 2):
                nxt.append(op(items[j], items[j + 1]))
            if len(items) % 2:
                nxt.append(items[-1])
            items = nxt
        return items[0]

    def or_many(self, items: Sequence[int]) -> int:
        return self._fold(self.or_, items, 0)

    def and_many(self, items: Sequence[int]) -> int:
        return self._fold(self.and_, items, 1)

    def clause_circuit(self, cl: frozenset[int]) -> int:
        return self.or_many([self.lit(l) for l in sorted(cl, key=lambda x: (abs(x), x))])

    def cnf_circuit(self, f: Cnf) -> int:
        return self.and_many([self.clause_circuit(cl) for cl in f.clauses])

    def import_circuit(self, c: Circuit) -> int:
        """Copy a finished circuit into this builder, returning its root."""
        if c.n_vars > self.n_vars:
            raise ValueError("imported circuit has more inputs than builder")
        ids = []
        for g in c.gates:
            if g[0] in ("var", "const"):
                ids.append(self._add(g))
            elif g[0] == "not":
                ids.append(self.not_(ids[g[1]]))
            else:
                ids.append(self._add((g[0], ids[g[1]], ids[g[2]])))
        return ids[-1]

    def build(self, root: int) -> Circuit:
        """Trim to the cone of ``root`` and renumber topologically."""
        reach: set[int] = set()
        stack = [root]
        while stack:
            g = stack.pop()
            if g in reach:
                continue
            reach.add(g)
            stack.extend(n for n in self.nodes[g][1:] if self.nodes[g][0] not in ("var", "const"))
        order = sorted(reach)
        newid = {old: i for i, old in enumerate(order)}
        gates = []
        for old in order:
            node = self.nodes[old]
            if node[0] in ("var", "const"):
                gates.append(node)
            elif node[0] == "not":
                gates.append(("not", newid[node[1]]))
            else:
                gates.append((node[0], newid[node[1]], newid[node[2]]))
        return Circuit(self.n_vars, tuple(gates))


def cnf_to_circuit(f: Cnf) -> Circuit:
    """Structural translation; agrees with eval_cnf on every assignment."""
    b = CircuitBuilder(f.n)
    return b.build(b.cnf_circuit(f))


# ---------------------------------------------------------------------------
# DIMACS


def parse_dimacs(text: str) -> Cnf:
    """Parse standard DIMACS CNF (``c`` comments allowed, one header line)."""
    n = k = None
    clauses: list[frozenset[int]] = []
    cur: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n is not None:
                raise ValueError(f"line {lineno}: duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: malformed header")
            try:
                n, k = int(parts[2]), int(parts[3])
            except ValueError:
                raise ValueError(f"line {lineno}: malformed header") from None
            if n < 0 or k < 0:
                raise ValueError(f"line {lineno}: malformed header")
            continue
        if n is None:
            raise ValueError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ValueError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(frozenset(cur))
                cur = []
            else:
                if abs(lit) > n:
                    raise ValueError(f"line {lineno}: literal {lit} out of range")
                cur.append(lit)
    if n is None:
        raise ValueError("missing DIMACS header")
    if cur:
        raise ValueError("missing terminating 0 in final clause")
    if len(clauses) != k:
        raise ValueError(f"header declares {k} clauses, found {len(clauses)}")
    return Cnf(n, tuple(clauses))


def emit_dimacs(f: Cnf) -> str:
    """Canonical emission: ascending variable order inside each clause
    (negative literal first on a tie), original clause order, no comments.
    ``emit(parse(emit(f))) == emit(f)`` byte-for-byte.
    """
    lines = [f"p cnf {f.n} {f.k}"]
    for cl in f.clauses:
        lits = sorted(cl, key=lambda x: (abs(x), x))
        lines.append(" ".join(str(l) for l in lits + [0]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Gate-list circuit format


def emit_gates(c: Circuit) -> str:
    """Line-oriented gate list with an explicit input-count header.

    The header keeps the declared arity through round-trips even when the
    highest input is never mentioned by a gate.
    """
    lines = [f"inputs {c.n_vars}"]
    for idx, g in enumerate(c.gates):
        kind = g[0]
        if kind == "var":
            rhs = f"var {g[1]}"
        elif kind == "const":
            rhs = f"const {g[1]}"
        elif kind == "not":
            rhs = f"not g{g[1]}"
        else:
            rhs = f"{kind} g{g[1]} g{g[2]}"
        lines.append(f"g{idx} := {rhs}")
    lines.append(f"out g{c.output}")
    return "\n".join(lines) + "\n"


def _gate_ref(tok: str, upto: int, lineno: int) -> int:
    if not tok.startswith("g"):
        raise ValueError(f"line {lineno}: expected gate reference, got {tok!r}")
    try:
        idx = int(tok[1:])
    except ValueError:
        raise ValueError(f"line {lineno}: bad gate reference {tok!r}") from None
    if not 0 <= idx < upto:
        raise ValueError(f"line {lineno}: forward or dangling reference {tok!r}")
    return idx


def parse_gates(text: str) -> Circuit:
    n_vars = None
    gates: list[Gate] = []
    out: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "inputs":
            if n_vars is not None or len(parts) != 2:
                raise ValueError(f"line {lineno}: malformed inputs header")
            n_vars = int(parts[1])
            continue
        if parts[0] == "out":
            if len(parts) != 2 or n_vars is None:
                raise ValueError(f"line {lineno}: malformed out line")
            out = _gate_ref(parts[1], len(gates), lineno)
            continue
        if n_vars is None:
            raise ValueError(f"line {lineno}: gate before inputs header")
        if out is not None:
            raise ValueError(f"line {lineno}: content after out line")
        if len(parts) < 4 or parts[1] != ":=" or parts[0] != f"g{len(gates)}":
            raise ValueError(f"line {lineno}: malformed gate line")
        kind = parts[2]
        args = parts[3:]
        if kind == "var" and len(args) == 1:
            i = int(args[0])
            if not 1 <= i <= n_vars:
                raise ValueError(f"line {lineno}: input {i} out of range")
            gates.append(("var", i))
        elif kind == "const" and len(args) == 1:
            b = int(args[0])
            if b not in (0, 1):
                raise ValueError(f"line {lineno}: bad constant")
            gates.append(("const", b))
        elif kind == "not" and len(args) == 1:
            gates.append(("not", _gate_ref(args[0], len(gates), lineno)))
        elif kind in ("and", "or", "imp") and len(args) == 2:
            gates.append(
                (kind, _gate_ref(args[0], len(gates), lineno), _gate_ref(args[1], len(gates), lineno))
            )
        else:
            raise ValueError(f"line {lineno}: malformed gate line")
    if n_vars is None or out is None:
        raise ValueError("missing inputs header or out line")
    if out != len(gates) - 1:
        # Renumber so the output is last, matching canonical emission.
        b = CircuitBuilder(n_vars)
        ids = []
        for g in gates:
            if g[0] in ("var", "const"):
                ids.append(b._add(g))
            elif g[0] == "not":
                ids.append(b.not_(ids[g[1]]))
            else:
                ids.append(b._add((g[0], ids[g[1]], ids[g[2]])))
        return b.build(ids[out])
    return Circuit(n_vars, tuple(gates))
