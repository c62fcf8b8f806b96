"""Semantics-preserving program transformations.

Three rewrites, each recorded in a TranslationRecord that names the
fresh atoms it introduced and knows how to move interpretations across:

* constraint elimination, threshold style ("fc"): every constraint
  <c <-i B; 1> becomes <p_bot <-i f(0, neg(p_bot)) & f(c, B); 1> with a
  single fresh witness atom p_bot shared by all constraints.  The rule
  count is unchanged.  Stable models of the target pin p_bot to 0.

* constraint elimination, two-rule style ("janssen"): the constraint
  head constant c is replaced by a fresh atom p_c, and per distinct c
  two rules are added, <p_c <-j c; 1> and
  <p_bot <-j g(0, neg(p_bot)) & g(c, p_c); 1>.  The target has
  2 * |distinct constants| more rules than the source.

* normalization ("manlp"): for every atom q with an order-reversing
  occurrence, a fresh atom not_q and the rule <not_q <-g neg(q); 1> are
  added, and each order-reversing occurrence of q is rewired to
  neg(not_q), which makes not_q order-preserving in the whole body.
  Requires an involutive negation (neg1).  The target is a MANLP.

Lifting extends an interpretation to the fresh atoms (p_bot to 0, p_c
to c, not_q to neg(q)); projection restricts to the source symbols.
`verify_equivalence` checks, exhaustively on a grid, that lift/project
form a bijection between the stable-model sets of source and target.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .lattice import DEFAULT_TOL, eval_negation, lattice_grid
from .program import (
    Apply,
    Atom,
    BodyExpr,
    Const,
    MalpError,
    Polarity,
    Program,
    Rule,
    body_ops,
    op_spec,
    polarity_of,
)
from .semantics import (
    DEFAULT_MAX_ITER,
    StableSearchConfig,
    find_stable_models,
    interp_distance,
)


class TransformError(MalpError):
    pass


class BudgetExceeded(MalpError):
    pass


_CONJ_OPS = {"godel": "and_g", "product": "and_p", "lukasiewicz": "and_l"}


@dataclass(frozen=True)
class FreshAtom:
    name: str
    role: str                        # "bottom_witness" | "constant_witness" | "negation_witness"
    source_atom: Optional[str] = None  # for negation witnesses
    value: Optional[float] = None      # for constant witnesses

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "role": self.role}
        if self.source_atom is not None:
            out["source_atom"] = self.source_atom
        if self.value is not None:
            out["value"] = self.value
        return out


@dataclass(frozen=True)
class TranslationRecord:
    method: str                      # "fc" | "janssen" | "manlp"
    source: Program
    target: Program
    fresh_atoms: tuple[FreshAtom, ...] = ()
    negation: str = "neg1"

    @property
    def bottom_atom(self) -> Optional[str]:
        for a in self.fresh_atoms:
            if a.role == "bottom_witness":
                return a.name
        return None

    @property
    def negation_witnesses(self) -> dict[str, str]:
        return {a.source_atom: a.name for a in self.fresh_atoms if a.role == "negation_witness"}

    @property
    def constant_witnesses(self) -> tuple[FreshAtom, ...]:
        return tuple(a for a in self.fresh_atoms if a.role == "constant_witness")

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "negation": self.negation,
            "source_atoms": list(self.source.atoms()),
            "target_atoms": list(self.target.atoms()),
            "fresh_atoms": [a.to_json() for a in self.fresh_atoms],
        }


def record_from_json(data: Mapping, source: Program, target: Program) -> TranslationRecord:
    fresh = tuple(
        FreshAtom(d["name"], d["role"], d.get("source_atom"), d.get("value"))
        for d in data.get("fresh_atoms", ())
    )
    return TranslationRecord(data["method"], source, target, fresh, data.get("negation", "neg1"))


def _fresh_name(base: str, taken: set[str]) -> str:
    name = base
    n = 0
    while name in taken:
        n += 1
        name = f"{base}_{n}"
    taken.add(name)
    return name


def eliminate_constraints_fc(program: Program, impl_choice: str = "lukasiewicz",
                             conj_choice: str = "godel",
                             neg_choice: str = "neg1") -> TranslationRecord:
    """Rewrite each constraint into a threshold rule on a shared fresh atom.

    Non-constraint rules are copied verbatim, so the target has exactly
    as many rules as the source and is constraint-free.
    """
    conj = _CONJ_OPS[conj_choice]
    constraints = program.constraints()
    if not constraints:
        return TranslationRecord("fc", program, program)
    taken = set(program.atoms())
    p_bot = _fresh_name("p_bot", taken)
    rules = []
    for r in program.rules:
        if not r.is_constraint:
            rules.append(r)
            continue
        guard = Apply("f", (Const(0.0), Apply(neg_choice, (Atom(p_bot),))))
        bound = Apply("f", (Const(r.head.value), r.body))
        rules.append(Rule(Atom(p_bot), impl_choice, Apply(conj, (guard, bound)), 1.0))
    target = Program(tuple(rules))
    return TranslationRecord("fc", program, target,
                             (FreshAtom(p_bot, "bottom_witness"),), neg_choice)


def eliminate_constraints_janssen(program: Program, impl_choice: str = "lukasiewicz",
                                  conj_choice: str = "godel",
                                  neg_choice: str = "neg1") -> TranslationRecord:
    """Replace constraint heads by witness atoms pinned to their constants.

    Per distinct constraint-head constant c, two rules create and guard
    the witness, so the target has 2 * |distinct constants| extra rules.
    """
    conj = _CONJ_OPS[conj_choice]
    constraints = program.constraints()
    if not constraints:
        return TranslationRecord("janssen", program, program)
    taken = set(program.atoms())
    p_bot = _fresh_name("p_bot", taken)
    witnesses: dict[float, str] = {}
    for r in constraints:
        if r.head.value not in witnesses:
            witnesses[r.head.value] = _fresh_name(f"p_c_{len(witnesses) + 1}", taken)
    rules = []
    for r in program.rules:
        if r.is_constraint:
            rules.append(Rule(Atom(witnesses[r.head.value]), r.impl, r.body, 1.0))
        else:
            rules.append(r)
    for c, name in witnesses.items():
        rules.append(Rule(Atom(name), impl_choice, Const(c), 1.0))
        guard = Apply("g", (Const(0.0), Apply(neg_choice, (Atom(p_bot),))))
        bound = Apply("g", (Const(c), Atom(name)))
        rules.append(Rule(Atom(p_bot), impl_choice, Apply(conj, (guard, bound)), 1.0))
    target = Program(tuple(rules))
    fresh = (FreshAtom(p_bot, "bottom_witness"),) + tuple(
        FreshAtom(name, "constant_witness", value=c) for c, name in witnesses.items()
    )
    return TranslationRecord("janssen", program, target, fresh, neg_choice)


def _rewire(node: BodyExpr, sign: int, witnesses: dict[str, str], neg: str) -> BodyExpr:
    if isinstance(node, Const):
        return node
    if isinstance(node, Atom):
        if sign < 0 and node.name in witnesses:
            return Apply(neg, (Atom(witnesses[node.name]),))
        return node
    spec = op_spec(node.op)
    return Apply(node.op, tuple(
        _rewire(a, sign * spec.polarity(i), witnesses, neg) for i, a in enumerate(node.args)
    ))


def to_manlp(program: Program, neg_choice: str = "neg1") -> TranslationRecord:
    """Rewire order-reversing atom occurrences through fresh negation witnesses.

    Only defined for constraint-free programs and an involutive negation.
    """
    if program.constraints():
        raise TransformError("program has constraints; eliminate them first")
    if neg_choice != "neg1":
        raise TransformError("normalization is defined for the involutive negation neg1 only")
    negative: set[str] = set()
    for r in program.rules:
        for atom, pol in polarity_of(r.body).items():
            if pol is Polarity.NEGATIVE:
                negative.add(atom)
    if not negative:
        return TranslationRecord("manlp", program, program, (), neg_choice)
    taken = set(program.atoms())
    witnesses = {q: _fresh_name(f"not_{q}", taken) for q in sorted(negative)}
    rules = [Rule(r.head, r.impl, _rewire(r.body, 1, witnesses, neg_choice), r.weight)
             for r in program.rules]
    for q in sorted(negative):
        rules.append(Rule(Atom(witnesses[q]), "godel", Apply(neg_choice, (Atom(q),)), 1.0))
    target = Program(tuple(rules))
    fresh = tuple(FreshAtom(witnesses[q], "negation_witness", source_atom=q)
                  for q in sorted(negative))
    return TranslationRecord("manlp", program, target, fresh, neg_choice)


def lift_interpretation(M: Mapping[str, float], rec: TranslationRecord) -> dict[str, float]:
    """Extend a source interpretation to the target's fresh atoms."""
    out = {a: M[a] for a in rec.source.atoms()}
    for a in rec.fresh_atoms:
        if a.role == "bottom_witness":
            out[a.name] = 0.0
        elif a.role == "constant_witness":
            out[a.name] = a.value
        else:
            out[a.name] = eval_negation(rec.negation, M[a.source_atom])
    return out


def project_interpretation(M: Mapping[str, float], rec: TranslationRecord) -> dict[str, float]:
    """Restrict a target interpretation to the source's symbols."""
    return {a: M[a] for a in rec.source.atoms()}


@dataclass(frozen=True)
class ContinuityReport:
    continuous: bool
    discontinuous_sites: tuple[tuple[int, str, float], ...]  # (rule index, op, threshold)
    notes: str

    def to_json(self) -> dict:
        return {
            "continuous": self.continuous,
            "discontinuous_sites": [
                {"rule": r, "op": op, "threshold": c} for r, op, c in self.discontinuous_sites
            ],
            "notes": self.notes,
        }


def check_continuity(program: Program) -> ContinuityReport:
    """Report whether every operator used by the program is continuous.

    Rule conjunctors are always continuous; body operators carry a flag,
    with the threshold maps the only discontinuous builtins.  For a
    finite program built from continuous operators the report notes that
    at least one stable model is guaranteed to exist.
    """
    sites = []
    for idx, r in enumerate(program.rules):
        for node in body_ops(r.body):
            if not op_spec(node.op).continuous:
                c = node.args[0].value if isinstance(node.args[0], Const) else float("nan")
                sites.append((idx, node.op, c))
    continuous = not sites
    if continuous:
        notes = ("all operators continuous on a finite program: "
                 "a stable model is guaranteed to exist")
    else:
        notes = "discontinuous threshold operators present: no existence guarantee"
    return ContinuityReport(continuous, tuple(sites), notes)


@dataclass(frozen=True)
class EquivalenceReport:
    bijection: bool
    source_models: tuple[dict, ...]
    target_models: tuple[dict, ...]
    counterexamples: tuple[str, ...]
    bottom_exact: Optional[bool]     # every target stable model pins p_bot to 0
    witnesses_exact: Optional[bool]  # every target stable model matches not_q = neg(q)
    points_checked: int

    def to_json(self) -> dict:
        return {
            "bijection": self.bijection,
            "source_count": len(self.source_models),
            "target_count": len(self.target_models),
            "source_models": [dict(sorted(m.items())) for m in self.source_models],
            "target_models": [dict(sorted(m.items())) for m in self.target_models],
            "counterexamples": list(self.counterexamples),
            "bottom_exact": self.bottom_exact,
            "witnesses_exact": self.witnesses_exact,
            "points_checked": self.points_checked,
        }


def _contains(models, M, tol) -> bool:
    return any(interp_distance(M, other) <= tol for other in models)


def verify_equivalence(source: Program, rec: TranslationRecord, grid_step: float,
                       tol: float = DEFAULT_TOL, max_points: int = 2_000_000,
                       max_iter: int = DEFAULT_MAX_ITER) -> EquivalenceReport:
    """Exhaustive grid check that lift/project pair up the stable models.

    Enumerates every grid interpretation of source and target, collects
    the stable ones, and reports any model left unmatched, any target
    model whose bottom witness is not exactly 0, and any negation
    witness that differs from the negation of its atom.
    """
    expected = set(source.atoms()) | {a.name for a in rec.fresh_atoms}
    if set(rec.target.atoms()) - expected or set(source.atoms()) != set(rec.source.atoms()):
        raise MalpError("record does not link the given source and target programs")
    n_values = len(lattice_grid(grid_step))
    points = n_values ** len(source.atoms()) + n_values ** len(rec.target.atoms())
    if points > max_points:
        raise BudgetExceeded(f"{points} grid points exceed the budget of {max_points}")
    cfg = StableSearchConfig(mode="grid", grid_step=grid_step, tol=tol, max_iter=max_iter)
    source_models = find_stable_models(source, cfg)
    target_models = find_stable_models(rec.target, cfg)
    problems: list[str] = []

    for M in source_models:
        lifted = lift_interpretation(M, rec)
        if not _contains(target_models, lifted, tol):
            problems.append(f"lift of source model {M} is not a target stable model")
    for N in target_models:
        back = project_interpretation(N, rec)
        if not _contains(source_models, back, tol):
            problems.append(f"projection of target model {N} is not a source stable model")
        if interp_distance(lift_interpretation(back, rec), N) > tol:
            problems.append(f"target model {N} differs from the lift of its projection")

    bottom_exact: Optional[bool] = None
    if rec.bottom_atom is not None:
        bottom_exact = all(N[rec.bottom_atom] == 0.0 for N in target_models)
        if not bottom_exact:
            problems.append("a target stable model does not pin the bottom witness to 0")
    witnesses_exact: Optional[bool] = None
    if rec.negation_witnesses:
        witnesses_exact = all(
            abs(N[w] - eval_negation(rec.negation, N[q])) <= tol
            for N in target_models for q, w in rec.negation_witnesses.items()
        )
        if not witnesses_exact:
            problems.append("a target stable model breaks a negation witness equation")

    bijection = not problems and len(source_models) == len(target_models)
    if len(source_models) != len(target_models):
        problems.append(f"model counts differ: {len(source_models)} vs {len(target_models)}")
    return EquivalenceReport(bijection, tuple(source_models), tuple(target_models),
                             tuple(problems), bottom_exact, witnesses_exact, points)
