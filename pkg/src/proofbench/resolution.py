"""Resolution refutations: representation, checking, restriction, splitting.

A proof is a sequence of lines, each carrying the clause it claims and a
justification:

* ``('A', l)`` — download of input clause ``l`` (0-based index into the
  target CNF);
* ``('R', j1, j2, i)`` — resolution of earlier lines ``j1`` and ``j2`` on
  variable ``i`` (``x_i`` must occur in line ``j1``, ``¬x_i`` in ``j2``).

Two checking modes: ``'strict'`` requires each claimed clause to equal the
downloaded clause or resolvent exactly; ``'weakening'`` only requires it to
be a superset.  A refutation must end in the empty clause.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .core import Cnf, restrict_clause, restrict_cnf, shift_cnf


Justification = tuple
ProofLine = tuple[frozenset[int], Justification]


@dataclass(frozen=True)
class ResolutionProof:
    target: Cnf
    lines: tuple[ProofLine, ...]

    def __len__(self) -> int:
        return len(self.lines)

    def bit_size(self) -> int:
        """Serialized length in bytes; the size measure used in reports."""
        return len(emit_proof(self).encode())


@dataclass(frozen=True)
class CheckReport:
    """Verdict of a proof check.

    ``step`` and ``reason`` locate the first failure; ``lines`` and
    ``bit_size`` describe the proof itself so callers can log sizes without
    re-serializing.
    """

    ok: bool
    step: int | None
    reason: str | None
    lines: int
    bit_size: int


MODES = ("strict", "weakening")


def check_refutation(f: Cnf, proof: ResolutionProof, mode: str = "strict") -> CheckReport:
    """Check that ``proof`` refutes ``f``; see module docstring for modes."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if proof.target != f:
        raise ValueError("proof target does not match the formula being checked")

    def fail(step: int, reason: str) -> CheckReport:
        return CheckReport(False, step, reason, len(proof.lines), proof.bit_size())

    if not proof.lines:
        return fail(0, "empty proof")

    for t, (clause, just) in enumerate(proof.lines):
        if just[0] == "A":
            if len(just) != 2:
                return fail(t, "malformed axiom justification")
            l = just[1]
            if not 0 <= l < f.k:
                return fail(t, f"axiom index {l} out of range")
            expected = f.clauses[l]
            if mode == "strict":
                if clause != expected:
                    return fail(t, "axiom clause mismatch")
            else:
                if not expected <= clause:
                    return fail(t, "clause does not contain the axiom")
        elif just[0] == "R":
            if len(just) != 4:
                return fail(t, "malformed resolution justification")
            j1, j2, i = just[1], just[2], just[3]
            if not (0 <= j1 < t and 0 <= j2 < t):
                return fail(t, "premise index out of range")
            if not 1 <= i <= f.n:
                return fail(t, f"pivot variable {i} out of range")
            c1, c2 = proof.lines[j1][0], proof.lines[j2][0]
            if i not in c1:
                return fail(t, "pivot missing from first premise")
            if -i not in c2:
                return fail(t, "negated pivot missing from second premise")
            resolvent = (c1 - {i}) | (c2 - {-i})
            if mode == "strict":
                if clause != resolvent:
                    return fail(t, "resolvent mismatch")
            else:
                if not resolvent <= clause:
                    return fail(t, "clause does not contain the resolvent")
        else:
            return fail(t, f"unknown rule {just[0]!r}")

    if proof.lines[-1][0] != frozenset():
        return fail(len(proof.lines) - 1, "final line is not the empty clause")
    return CheckReport(True, None, None, len(proof.lines), proof.bit_size())


# ---------------------------------------------------------------------------
# Restriction


def restrict_proof(f: Cnf, proof: ResolutionProof, rho: Mapping[int, int]) -> ResolutionProof:
    """Turn a refutation of ``f`` into one of ``f`` restricted by ``rho``.

    Lines whose clause is satisfied by ``rho`` are dropped.  A resolution
    step whose pivot is assigned loses one premise to satisfaction (the
    premise whose pivot literal became true); the surviving premise's
    restricted clause is contained in the line's restricted clause, so the
    line inherits that premise's justification.  The result never has more
    lines than the input and checks in weakening mode.

    Raises ``ValueError`` if the restriction satisfies every clause of
    ``f`` (there is nothing left to refute).
    """
    g = restrict_cnf(f, rho)
    if g.k == 0:
        raise ValueError("restriction trivializes the formula")

    # Map original clause indices to their positions in g.
    axiom_map: dict[int, int] = {}
    pos = 0
    for l, cl in enumerate(f.clauses):
        if restrict_clause(cl, rho) is not None:
            axiom_map[l] = pos
            pos += 1

    new_lines: list[ProofLine] = []
    new_index: dict[int, int] = {}
    for t, (clause, just) in enumerate(proof.lines):
        rclause = restrict_clause(clause, rho)
        if rclause is None:
            continue
        if just[0] == "A":
            # The downloaded clause is inside this line's clause; had it been
            # satisfied, the line's clause would be too and we'd have skipped.
            assert just[1] in axiom_map, "axiom satisfied but line survived"
            njust: Justification = ("A", axiom_map[just[1]])
        else:
            _, j1, j2, i = just
            if i in rho:
                # The premise whose pivot literal became true is satisfied
                # and drops; the other survives (any other satisfied literal
                # of it would sit inside our clause as well), and its clause
                # minus the now-false pivot literal is inside ours, so we
                # inherit its repaired justification.
                survivor = j2 if rho[i] == 1 else j1
                assert survivor in new_index, "surviving premise was dropped"
                njust = new_lines[new_index[survivor]][1]
            else:
                # With the pivot untouched, a dropped premise would force a
                # satisfied literal into our clause; both must survive.
                assert j1 in new_index and j2 in new_index
                njust = ("R", new_index[j1], new_index[j2], i)
        new_index[t] = len(new_lines)
        new_lines.append((rclause, njust))

    result = ResolutionProof(g, tuple(new_lines))
    report = check_refutation(g, result, mode="weakening")
    assert report.ok, f"restricted proof invalid at step {report.step}: {report.reason}"
    return result


# ---------------------------------------------------------------------------
# Feasible disjunction splitting


def join_disjoint(a: Cnf, b: Cnf) -> tuple[Cnf, Cnf, Cnf]:
    """Embed ``a`` and ``b`` into one variable space with ``b`` shifted up.

    Returns the two re-embedded CNFs and their concatenation (clauses of
    ``a`` first), which is unsatisfiable whenever either side is.
    """
    n = a.n + b.n
    a2 = Cnf(n, a.clauses)
    b2 = shift_cnf(b, a.n, n)
    return a2, b2, Cnf(n, a2.clauses + b2.clauses)


def split_disjoint_refutation(a: Cnf, b: Cnf, proof: ResolutionProof):
    """Given a refutation of the union of two variable-disjoint CNFs,
    produce a refutation of one side, identified as ``('A', pa)`` or
    ``('B', pb)``.

    ``a`` and ``b`` must share the proof's variable space (``a.n == b.n ==
    proof.target.n``) while mentioning disjoint variable sets, and the
    target's clauses must be ``a``'s followed by ``b``'s.

    If ``a`` is satisfiable, restricting the proof by a satisfying
    assignment of ``a``'s variables kills every ``a``-clause and leaves a
    refutation of ``b`` (and symmetrically).  If both are unsatisfiable the
    restriction argument is unavailable, so a refutation of ``a`` is built
    directly from its clauses.
    """
    from .oracle import dpll_refute, dpll_sat

    if not (a.n == b.n == proof.target.n):
        raise ValueError("sides must share the proof's variable space")
    if proof.target.clauses != a.clauses + b.clauses:
        raise ValueError("proof target is not the concatenation of the sides")
    mention_a = {abs(l) for cl in a.clauses for l in cl}
    mention_b = {abs(l) for cl in b.clauses for l in cl}
    if mention_a & mention_b:
        raise ValueError("sides mention a common variable")

    res_a = dpll_sat(a)
    if res_a[0] == "sat":
        # Restricting by a's satisfying assignment (projected to the
        # variables a actually mentions) deletes exactly a's clauses, so
        # the restricted target is b itself.
        rho = {v: res_a[1][v - 1] for v in mention_a}
        if rho:
            pb = restrict_proof(proof.target, proof, rho)
            assert pb.target == b
        else:
            # a is clause-free; the proof already refutes b alone.
            pb = ResolutionProof(b, proof.lines)
        report = check_refutation(b, pb, mode="weakening")
        assert report.ok, f"split produced invalid proof: {report.reason}"
        return ("B", pb)

    res_b = dpll_sat(b)
    if res_b[0] == "sat":
        rho = {v: res_b[1][v - 1] for v in mention_b}
        if rho:
            # a's clauses come first in the target, so surviving axiom
            # indices already match a's clause positions.
            pa = restrict_proof(proof.target, proof, rho)
            assert pa.target == a
        else:
            pa = ResolutionProof(a, proof.lines)
        report = check_refutation(a, pa, mode="weakening")
        assert report.ok, f"split produced invalid proof: {report.reason}"
        return ("A", pa)

    if res_a[0] == "exhausted" or res_b[0] == "exhausted":
        raise RuntimeError("satisfiability probe exhausted its budget")

    # Both sides unsatisfiable: refute a on its own.
    pa = dpll_refute(a)
    return ("A", pa)


# ---------------------------------------------------------------------------
# Text format


def emit_proof(proof: ResolutionProof) -> str:
    """Canonical text form.

    ``A <l>`` for an exact download; ``A <l> : <lits>`` when the line's
    clause weakens the download; ``R <j1> <j2> <pivot> : <lits>`` for
    resolution lines (the clause is always spelled out so weakening steps
    round-trip).  Literals are sorted by variable with the negative literal
    first on ties.
    """
    out = []
    for clause, just in proof.lines:
        lits = " ".join(str(l) for l in sorted(clause, key=lambda x: (abs(x), x)))
        if just[0] == "A":
            if clause == proof.target.clauses[just[1]]:
                out.append(f"A {just[1]}")
            else:
                out.append(f"A {just[1]} : {lits}".rstrip())
        else:
            out.append(f"R {just[1]} {just[2]} {just[3]} : {lits}".rstrip())
    return "\n".join(out) + "\n"


def parse_proof(text: str, target: Cnf) -> ResolutionProof:
    def read_clause(tail: str, lineno: int) -> frozenset[int]:
        lits = []
        for tok in tail.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ValueError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0 or abs(lit) > target.n:
                raise ValueError(f"line {lineno}: literal {lit} out of range")
            lits.append(lit)
        return frozenset(lits)

    lines: list[ProofLine] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        head, _, tail = line.partition(":")
        parts = head.split()
        if not parts:
            raise ValueError(f"line {lineno}: malformed proof line")
        if parts[0] == "A":
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: malformed axiom line")
            l = int(parts[1])
            if not 0 <= l < target.k:
                raise ValueError(f"line {lineno}: axiom index {l} out of range")
            clause = read_clause(tail, lineno) if ":" in line else target.clauses[l]
            lines.append((clause, ("A", l)))
        elif parts[0] == "R":
            if len(parts) != 4 or ":" not in line:
                raise ValueError(f"line {lineno}: malformed resolution line")
            j1, j2, piv = int(parts[1]), int(parts[2]), int(parts[3])
            if j1 >= len(lines) or j2 >= len(lines) or j1 < 0 or j2 < 0:
                raise ValueError(f"line {lineno}: forward or dangling premise reference")
            lines.append((read_clause(tail, lineno), ("R", j1, j2, piv)))
        else:
            raise ValueError(f"line {lineno}: unknown rule {parts[0]!r}")
    return ResolutionProof(target, tuple(lines))
