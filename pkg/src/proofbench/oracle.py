"""Semantic oracles: truth-table evaluation, DPLL, and minimal-proof search.

These are deliberately independent of the encoders and generators in the
rest of the package — they only consume :mod:`proofbench.core` values — so
they can serve as ground truth when testing everything else.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

from .core import Circuit, Cnf, eval_clause
from .resolution import ResolutionProof, check_refutation


def _env_seconds() -> float:
    raw = os.environ.get("PROOFBENCH_MAX_SECONDS")
    return float(raw) if raw else 60.0


@dataclass(frozen=True)
class SearchBudget:
    """Caps for the exhaustive procedures below.

    ``max_assignments`` bounds truth-table size, ``max_nodes`` bounds search
    tree nodes, and ``max_seconds`` is a wall-clock cutoff (default taken
    from ``PROOFBENCH_MAX_SECONDS``).  Hitting any cap yields an explicit
    ``'exhausted'`` outcome, never a silent wrong answer.
    """

    max_assignments: int = 1 << 24
    max_nodes: int = 10_000_000
    max_seconds: float | None = None

    def deadline(self) -> float:
        limit = self.max_seconds if self.max_seconds is not None else _env_seconds()
        return time.monotonic() + limit


DEFAULT_BUDGET = SearchBudget()


# ---------------------------------------------------------------------------
# Bit-parallel tautology checking


def _input_column(i: int, n_vars: int) -> int:
    """Truth table of variable ``i`` (1-based) over all ``2**n_vars``
    assignments, packed into one integer: assignment ``a`` sits at bit
    ``a`` and reads variable ``i`` from bit ``i-1`` of ``a``.  Built by
    width doubling, so cost is linear in the table size."""
    half = 1 << (i - 1)
    col = ((1 << half) - 1) << half  # one period: half zeros, half ones
    width = half * 2
    total = 1 << n_vars
    while width < total:
        col |= col << width
        width *= 2
    return col


def circuit_truth_table(c: Circuit) -> int:
    """All ``2**n_vars`` outputs of ``c`` packed into one integer.

    Gate tables are freed after their last use, so peak memory follows the
    circuit's live width rather than its size.
    """
    total = 1 << c.n_vars
    mask = (1 << total) - 1
    last_use = [idx for idx in range(len(c.gates))]
    for idx, g in enumerate(c.gates):
        if g[0] in ("not", "and", "or", "imp"):
            for ref in g[1:]:
                last_use[ref] = idx
    vals: dict[int, int] = {}
    for idx, g in enumerate(c.gates):
        kind = g[0]
        if kind == "var":
            vals[idx] = _input_column(g[1], c.n_vars)
        elif kind == "const":
            vals[idx] = mask if g[1] else 0
        elif kind == "not":
            vals[idx] = vals[g[1]] ^ mask
        elif kind == "and":
            vals[idx] = vals[g[1]] & vals[g[2]]
        elif kind == "or":
            vals[idx] = vals[g[1]] | vals[g[2]]
        else:  # imp
            vals[idx] = (vals[g[1]] ^ mask) | vals[g[2]]
        if kind in ("not", "and", "or", "imp"):
            for ref in set(g[1:]):
                if last_use[ref] == idx:
                    del vals[ref]
    out = vals[len(c.gates) - 1]
    return out


def is_tautology(c: Circuit, budget: SearchBudget = DEFAULT_BUDGET):
    """('yes',) | ('no', counterexample) | ('exhausted',).

    Exhaustive over all assignments, evaluated bit-parallel on Python
    integers; a counterexample is the lowest falsifying assignment.
    """
    total = 1 << c.n_vars
    if total > budget.max_assignments:
        return ("exhausted",)
    deadline = budget.deadline()
    table = circuit_truth_table(c)
    if time.monotonic() > deadline:
        return ("exhausted",)
    mask = (1 << total) - 1
    missing = table ^ mask
    if missing == 0:
        return ("yes",)
    a = missing & -missing  # lowest zero of the table
    idx = a.bit_length() - 1
    assignment = tuple((idx >> i) & 1 for i in range(c.n_vars))
    return ("no", assignment)


# ---------------------------------------------------------------------------
# DPLL


def _unit_propagate(clauses, assign, trail, reasons):
    """Propagate units; returns a falsified clause index or None.

    ``assign`` maps var -> bit, ``trail`` records assignment order, and
    ``reasons[var]`` is the clause index that forced ``var`` (absent for
    decisions).
    """
    changed = True
    while changed:
        changed = False
        for ci, cl in enumerate(clauses):
            unassigned = None
            satisfied = False
            count = 0
            for lit in cl:
                v = abs(lit)
                if v in assign:
                    if assign[v] == (1 if lit > 0 else 0):
                        satisfied = True
                        break
                else:
                    unassigned = lit
                    count += 1
            if satisfied:
                continue
            if count == 0:
                return ci
            if count == 1:
                v = abs(unassigned)
                assign[v] = 1 if unassigned > 0 else 0
                trail.append(v)
                reasons[v] = ci
                changed = True
    return None


def dpll_sat(f: Cnf, budget: SearchBudget = DEFAULT_BUDGET):
    """('sat', model) | ('unsat',) | ('exhausted',).

    Plain DPLL: unit propagation, branch on the first unassigned variable,
    try false first.  Decision heuristics are pinned so every run of the
    package explores the same tree.
    """
    deadline = budget.deadline()
    nodes = 0
    clauses = list(f.clauses)

    def solve(assign: dict[int, int]):
        nonlocal nodes
        nodes += 1
        if nodes > budget.max_nodes or time.monotonic() > deadline:
            return ("exhausted",)
        trail: list[int] = []
        conflict = _unit_propagate(clauses, assign, trail, {})
        if conflict is not None:
            for v in trail:
                del assign[v]
            return ("unsat",)
        var = next((i for i in range(1, f.n + 1) if i not in assign), None)
        if var is None:
            model = tuple(assign[i] for i in range(1, f.n + 1))
            return ("sat", model)
        for bit in (0, 1):
            assign[var] = bit
            res = solve(assign)
            if res[0] != "unsat":
                return res
            del assign[var]
        for v in trail:
            del assign[v]
        return ("unsat",)

    if any(not cl for cl in clauses):
        return ("unsat",)
    return solve({})


def dpll_refute(f: Cnf, budget: SearchBudget = DEFAULT_BUDGET) -> ResolutionProof:
    """Extract a resolution refutation from the DPLL search tree.

    Same branching order as :func:`dpll_sat`.  Each closed branch yields a
    clause over the decision literals on it, obtained by resolving the
    falsified clause backward through propagation reasons; sibling branches
    then resolve on the decision variable.  The result checks in strict
    mode.  Raises ``ValueError`` on satisfiable input and ``TimeoutError``
    when the budget runs out.
    """
    deadline = budget.deadline()
    nodes = 0
    clauses = list(f.clauses)
    lines: list[tuple[frozenset[int], tuple]] = []
    line_of: dict[frozenset[int], int] = {}
    # Path state, shared across decision levels so that explanations can
    # chase reasons recorded by any ancestor.
    assign: dict[int, int] = {}
    reasons: dict[int, int] = {}

    def emit(clause: frozenset[int], just: tuple) -> int:
        # Duplicate clauses reuse their first derivation.
        got = line_of.get(clause)
        if got is not None:
            return got
        lines.append((clause, just))
        line_of[clause] = len(lines) - 1
        return len(lines) - 1

    def axiom(ci: int) -> int:
        return emit(clauses[ci], ("A", ci))

    def resolve(j1: int, j2: int, pivot: int) -> int:
        c1, c2 = lines[j1][0], lines[j2][0]
        assert pivot in c1 and -pivot in c2
        return emit((c1 - {pivot}) | (c2 - {-pivot}), ("R", j1, j2, pivot))

    def explain(start: int, keep: int | None) -> int:
        """From proof line ``start``, resolve away every literal whose
        variable was propagated (skipping ``keep``), leaving a clause over
        decision literals only."""
        line = start
        while True:
            cl = lines[line][0]
            falsified = next(
                (lit for lit in cl if abs(lit) != keep and abs(lit) in reasons), None
            )
            if falsified is None:
                return line
            v = abs(falsified)
            # The reason clause forced v's current value, so it contains the
            # true literal on v -- the complement of ours.
            reason_line = explain(axiom(reasons[v]), v)
            if falsified > 0:
                line = resolve(line, reason_line, v)
            else:
                line = resolve(reason_line, line, v)
        # unreachable

    def solve(var_from: int):
        """Returns a proof line whose clause is falsified by the current
        decisions alone, or None if a model was found."""
        nonlocal nodes
        nodes += 1
        if nodes > budget.max_nodes or time.monotonic() > deadline:
            raise TimeoutError("refutation extraction budget exhausted")
        trail: list[int] = []
        conflict = _unit_propagate(clauses, assign, trail, reasons)
        if conflict is not None:
            line = explain(axiom(conflict), None)
            for v in trail:
                del assign[v]
                del reasons[v]
            return line
        var = next((i for i in range(var_from, f.n + 1) if i not in assign), None)
        if var is None:
            for v in trail:
                del assign[v]
                del reasons[v]
            return None

        def unwind():
            for v in trail:
                del assign[v]
                del reasons[v]

        branch_lines = []
        for bit in (0, 1):
            assign[var] = bit
            sub = solve(var + 1)
            del assign[var]
            if sub is None:
                unwind()
                return None
            # The branch clause mentions the decision only if the conflict
            # depended on it; otherwise it already works for both branches.
            lit = var if bit == 0 else -var
            if lit not in lines[sub][0]:
                unwind()
                return sub
            branch_lines.append(sub)
        merged = resolve(branch_lines[0], branch_lines[1], var)
        unwind()
        return merged

    for ci, cl in enumerate(clauses):
        if not cl:
            axiom(ci)
            return ResolutionProof(f, tuple(lines))

    root = solve(1)
    if root is None:
        raise ValueError("input is satisfiable; no refutation exists")
    final = lines[root][0]
    assert final == frozenset(), f"root clause not empty: {final}"
    proof = ResolutionProof(f, tuple(lines))
    report = check_refutation(f, proof, mode="strict")
    assert report.ok, f"internal refutation invalid at step {report.step}: {report.reason}"
    return proof


# ---------------------------------------------------------------------------
# Clausification


def clausify_circuit(c: Circuit) -> tuple[Cnf, dict[int, int]]:
    """Equisatisfiable CNF via fresh definition variables per gate.

    Returns the CNF and a map from gate index to its CNF variable; input
    gates map to their own variable index.  The CNF asserts the output.
    """
    var_of: dict[int, int] = {}
    clauses: list[frozenset[int]] = []
    next_var = c.n_vars

    def fresh() -> int:
        nonlocal next_var
        next_var += 1
        return next_var

    for idx, g in enumerate(c.gates):
        kind = g[0]
        if kind == "var":
            var_of[idx] = g[1]
            continue
        v = fresh()
        var_of[idx] = v
        if kind == "const":
            clauses.append(frozenset([v if g[1] else -v]))
        elif kind == "not":
            a = var_of[g[1]]
            clauses.append(frozenset([-v, -a]))
            clauses.append(frozenset([v, a]))
        elif kind == "and":
            a, b = var_of[g[1]], var_of[g[2]]
            clauses.append(frozenset([-v, a]))
            clauses.append(frozenset([-v, b]))
            clauses.append(frozenset([v, -a, -b]))
        elif kind == "or":
            a, b = var_of[g[1]], var_of[g[2]]
            clauses.append(frozenset([-v, a, b]))
            clauses.append(frozenset([v, -a]))
            clauses.append(frozenset([v, -b]))
        else:  # imp: v <-> (-a or b)
            a, b = var_of[g[1]], var_of[g[2]]
            clauses.append(frozenset([-v, -a, b]))
            clauses.append(frozenset([v, a]))
            clauses.append(frozenset([v, -b]))

    clauses.append(frozenset([var_of[c.output]]))
    return Cnf(next_var, tuple(clauses)), var_of


# ---------------------------------------------------------------------------
# Minimal refutation length


def _distinct_clauses(f: Cnf) -> list[frozenset[int]]:
    seen = []
    for cl in f.clauses:
        if cl not in seen:
            seen.append(cl)
    return seen


def min_refutation_length(
    f: Cnf,
    max_lines: int,
    mode: str = "weakening",
    budget: SearchBudget = DEFAULT_BUDGET,
):
    """Exact minimal refutation length by iterative deepening.

    Returns one of::

        ('found', length, proof)      shortest refutation, valid in ``mode``
        ('none-up-to', max_lines)     certified: nothing of that length exists
        ('satisfiable', model)        no refutation of any length exists
        ('exhausted',)                search budget hit before an answer

    The minimum does not depend on ``mode``: any weakening refutation can be
    shrunk line-by-line (replace each clause by the subset actually forced
    by its justification, then deduplicate), giving a refutation of equal or
    smaller length in which every line is an exact axiom or exact resolvent.
    The search therefore runs over that tight space only, and its witness
    checks in both modes.

    Search-space prunes, each preserving at least one minimal refutation:

    * candidate equal to or a superset of an earlier line (the T-transform
      argument above shows the superset line can be replaced by the earlier
      one);
    * tautological candidates (never resolve to the empty clause usefully:
      dropping them and re-deriving children from their other premise
      shortens the proof);
    * proper supersets of an input clause (replaceable by the axiom);
    * width cap: a resolvent is at least as wide as either premise minus
      one, so a clause needs as many following lines as it has literals to
      reach the empty clause;
    * unused-line cap: at the current depth limit every non-final line must
      feed a later one (else a shorter refutation exists and an earlier
      iteration would have found it); each added line consumes at most two
      unused lines while itself needing consumption, so ``u`` unused lines
      with ``r`` slots left are hopeless once ``u > r + 1``.
    """
    sat = dpll_sat(f, budget)
    if sat[0] == "sat":
        return ("satisfiable", sat[1])
    if sat[0] == "exhausted":
        return ("exhausted",)
    if mode not in ("strict", "weakening"):
        raise ValueError(f"unknown mode {mode!r}")

    axioms = _distinct_clauses(f)
    if frozenset() in axioms:
        # Empty clause is an input: one-line refutation (if budget allows).
        if max_lines >= 1:
            proof = ResolutionProof(
                f, ((frozenset(), ("A", f.clauses.index(frozenset()))),)
            )
            return ("found", 1, proof)
        return ("none-up-to", max_lines)

    axiom_sets = set(axioms)
    deadline = budget.deadline()
    nodes = 0
    exhausted = False

    def candidates(derived: list[frozenset[int]]):
        """All possible next lines: input downloads and resolvents of
        earlier pairs (ordered so the positive pivot sits in the first
        premise)."""
        for cl in axioms:
            yield cl, ("A", f.clauses.index(cl))
        for j1 in range(len(derived)):
            for j2 in range(len(derived)):
                c1, c2 = derived[j1], derived[j2]
                for lit in c1:
                    if lit > 0 and -lit in c2:
                        yield (c1 - {lit}) | (c2 - {-lit}), ("R", j1, j2, lit)

    def is_taut(cl: frozenset[int]) -> bool:
        return any(-l in cl for l in cl)

    def search(derived, justs, used, limit, memo):
        nonlocal nodes, exhausted
        nodes += 1
        if nodes > budget.max_nodes or time.monotonic() > deadline:
            exhausted = True
            return None
        remaining = limit - len(derived)
        if remaining == 0:
            return None
        unused = [derived[t] for t in range(len(derived)) if not used[t]]
        if len(unused) > remaining + 1:
            return None
        # Derived clauses are pairwise distinct (supersets are pruned), so
        # the clause set plus the unused subset captures the whole state.
        key = (frozenset(derived), frozenset(unused))
        if key in memo:
            return None
        seen_here = set()
        for cl, just in candidates(derived):
            if cl in seen_here:
                continue
            seen_here.add(cl)
            if cl == frozenset():
                return derived + [cl], justs + [just]
            if remaining == 1:
                continue
            if is_taut(cl):
                continue
            if len(cl) > remaining - 1:
                # cannot shrink to empty: each later step sheds at most one
                # literal and only remaining - 1 lines follow this one
                continue
            if any(d <= cl for d in derived):
                continue
            if cl not in axiom_sets and any(ax < cl for ax in axiom_sets):
                continue
            new_used = list(used)
            if just[0] == "R":
                new_used[just[1]] = True
                new_used[just[2]] = True
            res = search(derived + [cl], justs + [just], new_used + [False], limit, memo)
            if res is not None:
                return res
            if exhausted:
                return None
        memo.add(key)
        return None

    for limit in range(1, max_lines + 1):
        res = search([], [], [], limit, set())
        if exhausted:
            return ("exhausted",)
        if res is not None:
            derived, justs = res
            assert len(derived) == limit, "shorter refutation missed earlier"
            lines = tuple(zip((frozenset(c) for c in derived), justs))
            proof = ResolutionProof(f, tuple(lines))
            for m in ("strict", "weakening"):
                rep = check_refutation(f, proof, mode=m)
                assert rep.ok, f"minimal witness fails {m} check: {rep.reason}"
            return ("found", limit, proof)
    return ("none-up-to", max_lines)
