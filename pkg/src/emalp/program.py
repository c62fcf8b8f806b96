"""Program data model: body expression trees, polarity analysis,
rules, programs, and validation.

A rule body is a tree over atoms, constants in [0, 1], and builtin
operators.  Every atom occurrence has a polarity computed by structural
induction: min/max/and_*/or_l/add/mul and the thresholds preserve the
polarity of their arguments, negations flip it, and the second argument
of sub and div1 flips it.  A body in which some atom occurs under both
polarities is rejected at validation.

Intermediate values of add/sub/mul/div1 may leave [0, 1]; the top-level
value of a body must not, which is checked conservatively by natural
interval extension at validation and asserted again at evaluation.
Arguments of negations and thresholds must stay inside [0, 1], since
those are operators of the truth-value lattice proper.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Optional, Union

from .errors import MalpError
from .lattice import (
    DEFAULT_TOL,
    eval_negation,
    eval_threshold,
    t_godel,
    t_lukasiewicz,
    t_product,
)


class RangeViolation(MalpError):
    """A body evaluated to a value outside [0, 1] by more than the tolerance."""


@dataclass(frozen=True)
class Const:
    value: float

    def __str__(self) -> str:
        return format_value(self.value)


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Apply:
    op: str
    args: tuple["BodyExpr", ...]

    def __str__(self) -> str:
        return f"{self.op}({', '.join(str(a) for a in self.args)})"


BodyExpr = Union[Const, Atom, Apply]

Interval = tuple[float, float]


def format_value(v: float) -> str:
    if v == int(v):
        return str(int(v))
    return repr(v)


# ---------------------------------------------------------------------------
# builtin operators


def _iv_min(ivs: list[Interval]) -> Interval:
    return (min(lo for lo, _ in ivs), min(hi for _, hi in ivs))


def _iv_max(ivs: list[Interval]) -> Interval:
    return (max(lo for lo, _ in ivs), max(hi for _, hi in ivs))


def _iv_add(ivs: list[Interval]) -> Interval:
    (a, b), (c, d) = ivs
    return (a + c, b + d)


def _iv_sub(ivs: list[Interval]) -> Interval:
    (a, b), (c, d) = ivs
    return (a - d, b - c)


def _iv_mul(ivs: list[Interval]) -> Interval:
    (a, b), (c, d) = ivs
    corners = (a * c, a * d, b * c, b * d)
    return (min(corners), max(corners))


def _iv_and_l(ivs: list[Interval]) -> Interval:
    (a, b), (c, d) = ivs
    return (max(0.0, a + c - 1.0), max(0.0, b + d - 1.0))


def _iv_or_l(ivs: list[Interval]) -> Interval:
    (a, b), (c, d) = ivs
    return (min(1.0, a + c), min(1.0, b + d))


def _iv_div1(ivs: list[Interval]) -> Interval:
    (a, b), (c, d) = ivs
    if c > 0.0 or d < 0.0:
        corners = (a / c, a / d, b / c, b / d)
        return (min(1.0, min(corners)), min(1.0, max(corners)))
    # denominator interval touches 0: near 0+ the quotient blows up and
    # div1 clips it at 1; a possibly negative numerator is unbounded below
    if a < 0.0 or c < 0.0:
        return (float("-inf"), 1.0)
    if d == 0.0:
        return (1.0, 1.0)
    return (min(1.0, a / d), 1.0)


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def _iv_neg1(ivs: list[Interval]) -> Interval:
    lo, hi = ivs[0]
    return (1.0 - hi, 1.0 - lo)


def _iv_neg2(ivs: list[Interval]) -> Interval:
    lo, hi = ivs[0]
    return (eval_negation("neg2", _clamp01(hi)), eval_negation("neg2", _clamp01(lo)))


def _iv_threshold(ivs: list[Interval]) -> Interval:
    (c, _), (lo, hi) = ivs
    if hi <= c:
        return (0.0, 0.0)
    if lo > c:
        return (1.0, 1.0)
    return (0.0, 1.0)


@dataclass(frozen=True)
class OpSpec:
    name: str
    min_arity: int
    max_arity: Optional[int]            # None = unbounded
    polarities: Optional[tuple[int, ...]]  # None = all-preserving (variadic)
    continuous: bool
    fn: Callable[..., float]
    interval: Callable[[list[Interval]], Interval]
    lattice_domain: tuple[int, ...] = ()  # argument indices that must stay in [0, 1]
    const_first: bool = False             # first argument must be a constant (f/g)

    def polarity(self, i: int) -> int:
        if self.polarities is None:
            return 1
        return self.polarities[i]


def _fn_min(*vs: float) -> float:
    return min(vs)


def _fn_max(*vs: float) -> float:
    return max(vs)


def _fn_or_l(x: float, y: float) -> float:
    return min(1.0, x + y)


def _fn_add(x: float, y: float) -> float:
    return x + y


def _fn_sub(x: float, y: float) -> float:
    return x - y


def _fn_mul(x: float, y: float) -> float:
    return x * y


def _fn_div1(x: float, y: float) -> float:
    if y == 0.0:
        return 1.0
    return min(1.0, x / y)


BUILTINS: dict[str, OpSpec] = {
    "min": OpSpec("min", 2, None, None, True, _fn_min, _iv_min),
    "max": OpSpec("max", 2, None, None, True, _fn_max, _iv_max),
    "and_g": OpSpec("and_g", 2, 2, (1, 1), True, t_godel, _iv_min),
    "and_p": OpSpec("and_p", 2, 2, (1, 1), True, t_product, _iv_mul),
    "and_l": OpSpec("and_l", 2, 2, (1, 1), True, t_lukasiewicz, _iv_and_l),
    "or_l": OpSpec("or_l", 2, 2, (1, 1), True, _fn_or_l, _iv_or_l),
    "add": OpSpec("add", 2, 2, (1, 1), True, _fn_add, _iv_add),
    "sub": OpSpec("sub", 2, 2, (1, -1), True, _fn_sub, _iv_sub),
    "mul": OpSpec("mul", 2, 2, (1, 1), True, _fn_mul, _iv_mul),
    "div1": OpSpec("div1", 2, 2, (1, -1), True, _fn_div1, _iv_div1),
    "neg1": OpSpec("neg1", 1, 1, (-1,), True,
                   lambda x: eval_negation("neg1", x), _iv_neg1, lattice_domain=(0,)),
    "neg2": OpSpec("neg2", 1, 1, (-1,), True,
                   lambda x: eval_negation("neg2", x), _iv_neg2, lattice_domain=(0,)),
    "f": OpSpec("f", 2, 2, (1, 1), False, None, _iv_threshold,
                lattice_domain=(1,), const_first=True),
    "g": OpSpec("g", 2, 2, (1, 1), False, None, _iv_threshold,
                lattice_domain=(1,), const_first=True),
}

NEGATION_OPS = ("neg1", "neg2")


def op_spec(name: str) -> OpSpec:
    spec = BUILTINS.get(name)
    if spec is None:
        raise MalpError(f"unknown builtin: {name!r}")
    return spec


# ---------------------------------------------------------------------------
# evaluation


def eval_expr(node: BodyExpr, env: Mapping[str, float], tol: float = DEFAULT_TOL) -> float:
    """Homomorphic evaluation of a (sub)tree, without the top-level range check."""
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Atom):
        try:
            return env[node.name]
        except KeyError:
            raise MalpError(f"interpretation is not total: missing atom {node.name!r}") from None
    spec = op_spec(node.op)
    vals = [eval_expr(a, env, tol) for a in node.args]
    if spec.const_first:
        return eval_threshold(node.op, vals[0], vals[1], tol)
    return spec.fn(*vals)


def eval_body(body: BodyExpr, env: Mapping[str, float], tol: float = DEFAULT_TOL) -> float:
    """Evaluate a rule body; the result must lie in [0, 1].

    Values within tol of the interval are clamped onto it; anything
    further out raises RangeViolation.
    """
    v = eval_expr(body, env, tol)
    if v < -tol or v > 1.0 + tol:
        raise RangeViolation(f"body value {v} outside [0, 1]: {body}")
    return _clamp01(v)


# ---------------------------------------------------------------------------
# polarity


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    MIXED = "mixed"
    ABSENT = "absent"


@dataclass(frozen=True)
class Occurrence:
    atom: str
    sign: int             # +1 order-preserving, -1 order-reversing
    direct_negation: bool  # atom is the argument of a negation sitting at a positive position


def occurrences(body: BodyExpr, sign: int = 1) -> list[Occurrence]:
    out: list[Occurrence] = []
    _collect(body, sign, False, out)
    return out


def _collect(node: BodyExpr, sign: int, direct_neg: bool, out: list[Occurrence]) -> None:
    if isinstance(node, Atom):
        out.append(Occurrence(node.name, sign, direct_neg))
        return
    if isinstance(node, Const):
        return
    spec = op_spec(node.op)
    for i, arg in enumerate(node.args):
        _collect(arg, sign * spec.polarity(i), node.op in NEGATION_OPS and sign > 0, out)


def polarity_of(body: BodyExpr) -> dict[str, Polarity]:
    """Polarity of every atom occurring in the body.

    Atoms the body does not mention are not listed; an atom that occurs
    both covariantly and contravariantly maps to MIXED.
    """
    signs: dict[str, set[int]] = {}
    for occ in occurrences(body):
        signs.setdefault(occ.atom, set()).add(occ.sign)
    out: dict[str, Polarity] = {}
    for atom, ss in signs.items():
        if ss == {1}:
            out[atom] = Polarity.POSITIVE
        elif ss == {-1}:
            out[atom] = Polarity.NEGATIVE
        else:
            out[atom] = Polarity.MIXED
    return out


def body_atoms(body: BodyExpr) -> set[str]:
    return {occ.atom for occ in occurrences(body)}


def body_ops(body: BodyExpr) -> Iterator[Apply]:
    if isinstance(body, Apply):
        yield body
        for a in body.args:
            yield from body_ops(a)


def body_interval(body: BodyExpr) -> Interval:
    """Natural interval extension with atoms ranging over [0, 1]."""
    if isinstance(body, Const):
        return (body.value, body.value)
    if isinstance(body, Atom):
        return (0.0, 1.0)
    spec = op_spec(body.op)
    return spec.interval([body_interval(a) for a in body.args])


# ---------------------------------------------------------------------------
# rules and programs


IMPLICATION_TAGS = {"godel": "g", "product": "p", "lukasiewicz": "l"}
TAG_IMPLICATIONS = {v: k for k, v in IMPLICATION_TAGS.items()}


@dataclass(frozen=True)
class Rule:
    head: Union[Atom, Const]
    impl: str               # "godel" | "product" | "lukasiewicz"
    body: BodyExpr
    weight: float

    @property
    def is_constraint(self) -> bool:
        return isinstance(self.head, Const)

    def __str__(self) -> str:
        tag = IMPLICATION_TAGS[self.impl]
        return f"{self.head} <-{tag} {self.body} with {format_value(self.weight)};"


class ProgramClass(enum.Enum):
    POSITIVE = "positive"
    MANLP = "MANLP"
    CONSTRAINT_FREE = "constraint-free EMALP"
    EMALP = "EMALP"


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))

    def __len__(self) -> int:
        return len(self.rules)

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)

    def atoms(self) -> tuple[str, ...]:
        names: set[str] = set()
        for r in self.rules:
            if isinstance(r.head, Atom):
                names.add(r.head.name)
            names.update(body_atoms(r.body))
        return tuple(sorted(names))

    def constraints(self) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.is_constraint)

    def definite_rules(self) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if not r.is_constraint)

    def classify(self) -> ProgramClass:
        has_constraints = bool(self.constraints())
        occs = [occ for r in self.rules for occ in occurrences(r.body)]
        negatives = [o for o in occs if o.sign < 0]
        if not has_constraints and not negatives:
            return ProgramClass.POSITIVE
        if not has_constraints and all(o.direct_negation for o in negatives):
            return ProgramClass.MANLP
        if not has_constraints:
            return ProgramClass.CONSTRAINT_FREE
        return ProgramClass.EMALP


@dataclass(frozen=True)
class ValidationIssue:
    rule: Optional[int]
    message: str

    def __str__(self) -> str:
        where = "program" if self.rule is None else f"rule {self.rule}"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...]
    program_class: ProgramClass

    @property
    def ok(self) -> bool:
        return not self.issues


class ValidationFailure(MalpError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(str(i) for i in report.issues))


def _check_expr(node: BodyExpr, issues: list[str]) -> Interval:
    """Structural and range checks in one bottom-up pass; returns the interval."""
    if isinstance(node, Const):
        if not 0.0 <= node.value <= 1.0:
            issues.append(f"constant {node.value} outside [0, 1]")
        return (node.value, node.value)
    if isinstance(node, Atom):
        return (0.0, 1.0)
    spec = BUILTINS.get(node.op)
    if spec is None:
        issues.append(f"unknown builtin: {node.op!r}")
        return (0.0, 1.0)
    n = len(node.args)
    if n < spec.min_arity or (spec.max_arity is not None and n > spec.max_arity):
        issues.append(f"{node.op} applied to {n} arguments")
        return (0.0, 1.0)
    if spec.const_first and not isinstance(node.args[0], Const):
        issues.append(f"first argument of {node.op} must be a constant")
        return (0.0, 1.0)
    ivs = [_check_expr(a, issues) for a in node.args]
    for i in spec.lattice_domain:
        lo, hi = ivs[i]
        if lo < -1e-12 or hi > 1.0 + 1e-12:
            issues.append(f"argument of {node.op} may leave [0, 1] (interval [{lo}, {hi}])")
            ivs[i] = (_clamp01(lo), _clamp01(hi))
    return spec.interval(ivs)


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _check_atom_names(rule: Rule, local: list[str]) -> None:
    names = set(body_atoms(rule.body))
    if isinstance(rule.head, Atom):
        names.add(rule.head.name)
    for name in sorted(names):
        if name == "with" or not _IDENT_RE.match(name):
            local.append(f"invalid atom name {name!r}")


def validate_program(program: Program, allow_repeats: bool = False,
                     tol: float = DEFAULT_TOL) -> ValidationReport:
    """Collect every invariant violation and classify the program.

    Violations are data, not errors; callers that need a hard failure
    (the parser, the CLI) raise ValidationFailure on a non-empty report.
    """
    issues: list[ValidationIssue] = []
    for idx, rule in enumerate(program.rules):
        local: list[str] = []
        _check_atom_names(rule, local)
        if not -tol <= rule.weight <= 1.0 + tol:
            local.append(f"weight {rule.weight} outside [0, 1]")
        if rule.is_constraint:
            if not 0.0 <= rule.head.value <= 1.0:
                local.append(f"constraint head {rule.head.value} outside [0, 1]")
            if abs(rule.weight - 1.0) > tol:
                local.append(f"constraint weight must be 1, got {format_value(rule.weight)}")
        top = _check_expr(rule.body, local)
        if top[0] < -tol or top[1] > 1.0 + tol:
            local.append(f"body may leave [0, 1] (interval [{top[0]}, {top[1]}])")
        counts: dict[tuple[str, int], int] = {}
        for occ in occurrences(rule.body):
            counts[(occ.atom, occ.sign)] = counts.get((occ.atom, occ.sign), 0) + 1
        for atom, pol in polarity_of(rule.body).items():
            if pol is Polarity.MIXED:
                local.append(f"atom {atom!r} occurs with both polarities")
        if not allow_repeats:
            for (atom, sign), n in sorted(counts.items()):
                if n > 1:
                    local.append(f"atom {atom!r} occurs {n} times with the same polarity")
        issues.extend(ValidationIssue(idx, m) for m in local)
    return ValidationReport(tuple(issues), program.classify())
