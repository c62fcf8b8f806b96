"""Satisfaction, models, reducts, fixpoints, and stable models.

An interpretation is a plain dict mapping every propositional symbol of
a program to a value in [0, 1]; constants evaluate to themselves.

The reduct of a program with respect to an interpretation M freezes
negation: every maximal negation subtree all of whose atoms the body
consumes antitonely is replaced by the constant it evaluates to under
M.  Antitone dependencies built from arithmetic alone (a subtrahend, a
divisor) are left in place; at a fixpoint the two readings agree, and
for programs whose order-reversing occurrences are all negation-mediated
(in particular every MANLP) the reduct is a positive program.

Least models are computed by Kleene iteration of the immediate
consequence operator from the bottom interpretation, with a tolerance
and an iteration cap; non-convergence is a flagged result, never an
exception.  Constraints never feed the operator (they have no head atom
to update); they act as satisfaction filters on stable-model checks.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Mapping, Optional

from .lattice import DEFAULT_TOL, eval_conjunctor, eval_implication, lattice_grid
from .program import (
    Apply,
    Atom,
    BodyExpr,
    Const,
    MalpError,
    Program,
    Rule,
    eval_body,
    eval_expr,
    occurrences,
    op_spec,
    NEGATION_OPS,
)

DEFAULT_MAX_ITER = 10_000

Interpretation = dict[str, float]


def bottom_interpretation(atoms) -> Interpretation:
    return {a: 0.0 for a in atoms}


def top_interpretation(atoms) -> Interpretation:
    return {a: 1.0 for a in atoms}


def interp_leq(a: Mapping[str, float], b: Mapping[str, float], tol: float = DEFAULT_TOL) -> bool:
    return all(a[k] <= b[k] + tol for k in a)


def interp_distance(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    if not a:
        return 0.0
    return max(abs(a[k] - b[k]) for k in a)


def require_total(I: Mapping[str, float], program: Program) -> None:
    missing = [a for a in program.atoms() if a not in I]
    if missing:
        raise MalpError(f"interpretation is not total: missing {', '.join(missing)}")


def satisfies(I: Mapping[str, float], rule: Rule, tol: float = DEFAULT_TOL) -> bool:
    """weight <= (head <-i body) under I, with tolerance."""
    body_value = eval_body(rule.body, I, tol)
    head_value = rule.head.value if rule.is_constraint else I[rule.head.name]
    return rule.weight <= eval_implication(rule.impl, head_value, body_value) + tol


def is_model(I: Mapping[str, float], program: Program, tol: float = DEFAULT_TOL) -> bool:
    require_total(I, program)
    return all(satisfies(I, r, tol) for r in program.rules)


# ---------------------------------------------------------------------------
# reduct


def _freeze(node: BodyExpr, sign: int, M: Mapping[str, float], tol: float) -> BodyExpr:
    if isinstance(node, (Const, Atom)):
        return node
    if node.op in NEGATION_OPS:
        occs = occurrences(node, sign)
        if occs and all(o.sign < 0 for o in occs):
            return Const(eval_expr(node, M, tol))
    spec = op_spec(node.op)
    return Apply(node.op, tuple(
        _freeze(arg, sign * spec.polarity(i), M, tol) for i, arg in enumerate(node.args)
    ))


def reduct(program: Program, M: Mapping[str, float], tol: float = DEFAULT_TOL) -> Program:
    """Freeze every negation subtree at its value under M; heads and weights unchanged."""
    require_total(M, program)
    return Program(tuple(
        Rule(r.head, r.impl, _freeze(r.body, 1, M, tol), r.weight) for r in program.rules
    ))


# ---------------------------------------------------------------------------
# fixpoints


@dataclass(frozen=True)
class FixpointTrace:
    iterates: tuple[Interpretation, ...]
    converged: bool
    iterations: int

    def to_json(self) -> dict:
        return {
            "iterates": [dict(sorted(i.items())) for i in self.iterates],
            "converged": self.converged,
            "iterations": self.iterations,
        }


def immediate_consequence(program: Program, I: Mapping[str, float],
                          tol: float = DEFAULT_TOL) -> Interpretation:
    """T(I): atom-wise sup of weight &_i body over the atom-headed rules.

    Atoms with no rule map to bottom (the sup over an empty set).
    """
    out = {a: 0.0 for a in I}
    for r in program.rules:
        if r.is_constraint:
            continue
        v = eval_conjunctor(r.impl, r.weight, eval_body(r.body, I, tol))
        name = r.head.name
        if name not in out or v > out[name]:
            out[name] = v
    return out


def least_model(program: Program, tol: float = DEFAULT_TOL,
                max_iter: int = DEFAULT_MAX_ITER,
                atoms=None) -> tuple[Interpretation, FixpointTrace]:
    """Kleene iteration of T from the bottom interpretation.

    Stops when successive iterates differ by less than tol at every atom
    (the confirming iterate is kept in the trace) or when the cap is hit,
    in which case the trace is flagged unconverged.  The result is the
    least model when the program is positive.
    """
    names = program.atoms() if atoms is None else tuple(sorted(atoms))
    I = bottom_interpretation(names)
    iterates = [dict(I)]
    if not names:
        return I, FixpointTrace((dict(I),), True, 0)
    converged = False
    for _ in range(max_iter):
        J = immediate_consequence(program, I, tol)
        iterates.append(dict(J))
        if interp_distance(I, J) < tol:
            converged = True
            break
        I = J
    return iterates[-1], FixpointTrace(tuple(iterates), converged, len(iterates) - 1)


def stable_operator(program: Program, M: Mapping[str, float], tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER) -> tuple[Interpretation, FixpointTrace]:
    """Least model of the constraint-free part of the reduct with respect to M.

    Interpretations that are fixpoints of this operator and satisfy the
    frozen constraints are exactly the stable models.
    """
    frozen = reduct(program, M, tol)
    rest = Program(frozen.definite_rules())
    return least_model(rest, tol, max_iter, atoms=program.atoms())


def is_stable(program: Program, M: Mapping[str, float], tol: float = DEFAULT_TOL,
              max_iter: int = DEFAULT_MAX_ITER) -> Optional[bool]:
    """True/False verdict, or None when the inner fixpoint fails to converge."""
    require_total(M, program)
    frozen = reduct(program, M, tol)
    for r in frozen.constraints():
        if not satisfies(M, r, tol):
            return False
    lfp, trace = least_model(Program(frozen.definite_rules()), tol, max_iter,
                             atoms=program.atoms())
    if not trace.converged:
        return None
    return interp_distance(lfp, M) <= tol


# ---------------------------------------------------------------------------
# stable-model search


@dataclass(frozen=True)
class StableSearchConfig:
    mode: str = "grid"            # "grid" | "iterate"
    grid_step: float = 0.5
    seeds: int = 16
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    rng_seed: int = 0
    prefilter_tol: float = 1e-6   # slack for the grid fixpoint prune


def _sort_models(models: list[Interpretation], atoms) -> list[Interpretation]:
    return sorted(models, key=lambda m: tuple(m[a] for a in atoms))


def _dedup(models: list[Interpretation], tol: float) -> list[Interpretation]:
    kept: list[Interpretation] = []
    for m in models:
        if all(interp_distance(m, k) > tol for k in kept):
            kept.append(m)
    return kept


def _grid_candidates(program: Program, step: float, pre_tol: float, tol: float):
    """Grid points that are fixpoints of T and satisfy all constraints.

    At I = M the frozen and live readings of a body coincide, so the
    prune needs no reduct: it evaluates the original bodies at M.
    """
    atoms = program.atoms()
    values = lattice_grid(step)
    definite = program.definite_rules()
    constraints = program.constraints()
    for point in itertools.product(values, repeat=len(atoms)):
        M = dict(zip(atoms, point))
        consequence = {a: 0.0 for a in atoms}
        for r in definite:
            v = eval_conjunctor(r.impl, r.weight, eval_body(r.body, M, tol))
            if v > consequence[r.head.name]:
                consequence[r.head.name] = v
        if any(abs(consequence[a] - M[a]) > pre_tol for a in atoms):
            continue
        if any(not satisfies(M, r, tol) for r in constraints):
            continue
        yield M


def find_stable_models(program: Program, cfg: StableSearchConfig) -> list[Interpretation]:
    """Search for stable models.

    Grid mode enumerates every grid interpretation and keeps those that
    verify stable (complete on the grid).  Iterate mode runs the stable
    operator to a fixpoint from bottom, top, and seeded random starts,
    then verifies the candidates.  Results are deduplicated within tol
    (earliest kept) and sorted lexicographically by atom values.
    """
    atoms = program.atoms()
    found: list[Interpretation] = []
    if cfg.mode == "grid":
        for M in _grid_candidates(program, cfg.grid_step, cfg.prefilter_tol, cfg.tol):
            if is_stable(program, M, cfg.tol, cfg.max_iter) is True:
                found.append(M)
    elif cfg.mode == "iterate":
        rng = random.Random(cfg.rng_seed)
        starts = [bottom_interpretation(atoms), top_interpretation(atoms)]
        for _ in range(max(0, cfg.seeds - 2)):
            starts.append({a: rng.random() for a in atoms})
        starts = starts[:max(1, cfg.seeds)]
        outer_cap = min(cfg.max_iter, 100)
        for I in starts:
            M = I
            for _ in range(outer_cap):
                N, trace = stable_operator(program, M, cfg.tol, cfg.max_iter)
                if not trace.converged:
                    break
                if interp_distance(M, N) <= cfg.tol:
                    if is_stable(program, N, cfg.tol, cfg.max_iter) is True:
                        found.append(N)
                    break
                M = N
    else:
        raise MalpError(f"unknown search mode: {cfg.mode!r}")
    return _sort_models(_dedup(found, cfg.tol), atoms)


def is_minimal_model(program: Program, M: Mapping[str, float], grid_step: float,
                     tol: float = DEFAULT_TOL) -> bool:
    """No grid interpretation strictly below M is a model of the program.

    Strictly below means below-or-equal everywhere and strictly below at
    at least one atom; the check enumerates the whole sub-grid.
    """
    require_total(M, program)
    atoms = program.atoms()
    values = lattice_grid(grid_step)
    choices = [[v for v in values if v <= M[a] + tol] for a in atoms]
    for point in itertools.product(*choices):
        N = dict(zip(atoms, point))
        if not any(N[a] < M[a] - tol for a in atoms):
            continue
        if is_model(N, program, tol):
            return False
    return True
