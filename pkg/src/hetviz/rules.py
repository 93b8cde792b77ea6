"""Logical classification rules over typed attributes.

Rules are expression trees of atoms combined with and/or/not, plus a class
consequent (optionally with an else-class). Validation checks every atom
against the measurement-scale permission guard, so a rule that passes
validation never performs a forbidden relation.

Atoms on missing values evaluate false; their negations become true only
through an explicit Not. This is a two-valued projection of three-valued
logic, chosen for simplicity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Union

from .core import (
    Dataset,
    HetvizError,
    Level,
    MISSING,
    Relation,
    Scale,
    Value,
    check_operation,
    value_symbol,
)


class RuleError(HetvizError):
    """Raised for malformed rule documents."""


@dataclass(frozen=True)
class Equals:
    attr: str
    value: str


@dataclass(frozen=True)
class NotEquals:
    attr: str
    value: str


@dataclass(frozen=True)
class InSet:
    attr: str
    values: frozenset[str]


@dataclass(frozen=True)
class InRankRange:
    attr: str
    start_rank: int
    end_rank: int


@dataclass(frozen=True)
class InInterval:
    attr: str
    lo: Optional[float]  # None = unbounded below
    hi: Optional[float]  # None = unbounded above


@dataclass(frozen=True)
class PairEquals:
    """Tests x.attr = y.attr across two points (first-order rule form)."""

    attr: str


Atom = Union[Equals, NotEquals, InSet, InRankRange, InInterval, PairEquals]


@dataclass(frozen=True)
class And:
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Not:
    arg: "Expr"


Expr = Union[Atom, And, Or, Not]


@dataclass(frozen=True)
class Rule:
    antecedent: Expr
    consequent: str
    else_class: Optional[str] = None


@dataclass(frozen=True)
class Violation:
    atom: Atom
    attr: str
    relation: Relation
    reason: str


@dataclass(frozen=True)
class RuleMetrics:
    coverage: int
    correct: int
    precision: Optional[float]  # None when coverage is 0
    error_rate: Optional[float]


def _atoms(expr: Expr) -> list[Atom]:
    if isinstance(expr, (And, Or)):
        out: list[Atom] = []
        for a in expr.args:
            out.extend(_atoms(a))
        return out
    if isinstance(expr, Not):
        return _atoms(expr.arg)
    return [expr]


_ATOM_RELATION: dict[type, Relation] = {
    Equals: Relation.EQUALITY,
    NotEquals: Relation.EQUALITY,
    InSet: Relation.EQUALITY,
    PairEquals: Relation.EQUALITY,
    InRankRange: Relation.ORDER,
    InInterval: Relation.ORDER,
}


def validate_rule(rule: Rule, ds: Dataset) -> list[Violation]:
    """Type-legality check: every atom must pass the permission guard."""
    violations: list[Violation] = []
    for atom in _atoms(rule.antecedent):
        attr = ds.attribute(atom.attr)  # raises on unknown attribute
        rel = _ATOM_RELATION[type(atom)]
        decision = check_operation(attr, rel)
        if not decision:
            violations.append(
                Violation(atom=atom, attr=atom.attr, relation=rel, reason=decision.reason or "")
            )
    return violations


def _eval_atom(
    atom: Atom, ds: Dataset, x: tuple[Value, ...], y: Optional[tuple[Value, ...]]
) -> bool:
    i = ds.attr_index(atom.attr)
    v = x[i]
    if isinstance(atom, PairEquals):
        if y is None:
            raise RuleError("pairwise atom evaluated without a second point")
        w = y[i]
        if v is MISSING or w is MISSING:
            return False
        return v == w
    if v is MISSING:
        return False
    if isinstance(atom, Equals):
        return value_symbol(v) == atom.value
    if isinstance(atom, NotEquals):
        return value_symbol(v) != atom.value
    if isinstance(atom, InSet):
        return value_symbol(v) in atom.values
    if isinstance(atom, InRankRange):
        if not isinstance(v, Level):
            raise RuleError(f"rank-range atom on non-ordinal value {v!r}")
        return atom.start_rank <= v.rank <= atom.end_rank
    if not isinstance(v, float):
        raise RuleError(f"interval atom on non-numeric value {v!r}")
    if atom.lo is not None and v < atom.lo:
        return False
    if atom.hi is not None and v > atom.hi:
        return False
    return True


def _eval(
    expr: Expr, ds: Dataset, x: tuple[Value, ...], y: Optional[tuple[Value, ...]]
) -> bool:
    if isinstance(expr, And):
        return all(_eval(a, ds, x, y) for a in expr.args)
    if isinstance(expr, Or):
        return any(_eval(a, ds, x, y) for a in expr.args)
    if isinstance(expr, Not):
        return not _eval(expr.arg, ds, x, y)
    return _eval_atom(expr, ds, x, y)


def eval_rule(rule: Rule, ds: Dataset, x: tuple[Value, ...]) -> bool:
    """Evaluate the antecedent on one point. An empty conjunction is true."""
    return _eval(rule.antecedent, ds, x, None)


def eval_pairwise_rule(
    rule: Rule, ds: Dataset, x: tuple[Value, ...], y: tuple[Value, ...]
) -> bool:
    """Evaluate a rule containing pairwise atoms on the point pair (x, y)."""
    return _eval(rule.antecedent, ds, x, y)


def classify(rule: Rule, ds: Dataset) -> tuple[RuleMetrics, tuple[Optional[str], ...]]:
    """Apply the rule to every row; metrics are computed against the target.

    Covered rows are predicted as the consequent; uncovered rows get the
    else-class when present, otherwise no decision.
    """
    targets = tuple(value_symbol(v) for v in ds.target_column())
    decisions: list[Optional[str]] = []
    coverage = 0
    correct = 0
    for row, cls in zip(ds.rows, targets):
        if eval_rule(rule, ds, row):
            coverage += 1
            if cls == rule.consequent:
                correct += 1
            decisions.append(rule.consequent)
        else:
            decisions.append(rule.else_class)
    precision = correct / coverage if coverage else None
    error_rate = 1 - precision if precision is not None else None
    return (
        RuleMetrics(coverage=coverage, correct=correct, precision=precision, error_rate=error_rate),
        tuple(decisions),
    )


def normalize_rule(rule: Rule, code_maps: dict[str, dict[str, float]]) -> Rule:
    """Eliminate threshold atoms over integer-coded nominal attributes.

    Every interval atom on an attribute with a code map is rewritten to an
    in-set atom over the original values whose codes satisfy the threshold,
    so the normalized rule validates cleanly on nominal attributes. An empty
    matching set yields a constant-false atom (empty in-set).
    """

    def rewrite(expr: Expr) -> Expr:
        if isinstance(expr, And):
            return And(tuple(rewrite(a) for a in expr.args))
        if isinstance(expr, Or):
            return Or(tuple(rewrite(a) for a in expr.args))
        if isinstance(expr, Not):
            return Not(rewrite(expr.arg))
        if isinstance(expr, InInterval) and expr.attr in code_maps:
            codes = code_maps[expr.attr]
            matched = frozenset(
                v
                for v, c in codes.items()
                if (expr.lo is None or c >= expr.lo) and (expr.hi is None or c <= expr.hi)
            )
            return InSet(expr.attr, matched)
        return expr

    return Rule(
        antecedent=rewrite(rule.antecedent),
        consequent=rule.consequent,
        else_class=rule.else_class,
    )


# --- JSON (de)serialization --------------------------------------------------


def _expr_to_json(expr: Expr) -> dict:
    if isinstance(expr, And):
        return {"op": "and", "args": [_expr_to_json(a) for a in expr.args]}
    if isinstance(expr, Or):
        return {"op": "or", "args": [_expr_to_json(a) for a in expr.args]}
    if isinstance(expr, Not):
        return {"op": "not", "args": [_expr_to_json(expr.arg)]}
    if isinstance(expr, Equals):
        return {"atom": "equals", "attr": expr.attr, "value": expr.value}
    if isinstance(expr, NotEquals):
        return {"atom": "not_equals", "attr": expr.attr, "value": expr.value}
    if isinstance(expr, InSet):
        return {"atom": "in_set", "attr": expr.attr, "values": sorted(expr.values)}
    if isinstance(expr, InRankRange):
        return {
            "atom": "in_rank_range",
            "attr": expr.attr,
            "start": expr.start_rank,
            "end": expr.end_rank,
        }
    if isinstance(expr, InInterval):
        out: dict = {"atom": "in_interval", "attr": expr.attr}
        if expr.lo is not None:
            out["lo"] = expr.lo
        if expr.hi is not None:
            out["hi"] = expr.hi
        return out
    return {"atom": "pair_equals", "attr": expr.attr}


def _expr_from_json(obj: dict) -> Expr:
    if not isinstance(obj, dict):
        raise RuleError(f"expected an object, got {obj!r}")
    if "op" in obj:
        op = obj["op"]
        args = [_expr_from_json(a) for a in obj.get("args", [])]
        if op == "and":
            return And(tuple(args))
        if op == "or":
            return Or(tuple(args))
        if op == "not":
            if len(args) != 1:
                raise RuleError("'not' takes exactly one argument")
            return Not(args[0])
        raise RuleError(f"unknown operator {op!r}")
    kind = obj.get("atom")
    attr = obj.get("attr")
    if not attr:
        raise RuleError(f"atom {kind!r} is missing its attribute")
    if kind == "equals":
        return Equals(attr, obj["value"])
    if kind == "not_equals":
        return NotEquals(attr, obj["value"])
    if kind == "in_set":
        return InSet(attr, frozenset(obj.get("values", [])))
    if kind == "in_rank_range":
        return InRankRange(attr, int(obj["start"]), int(obj["end"]))
    if kind == "in_interval":
        lo = float(obj["lo"]) if "lo" in obj else None
        hi = float(obj["hi"]) if "hi" in obj else None
        return InInterval(attr, lo, hi)
    if kind == "pair_equals":
        return PairEquals(attr)
    raise RuleError(f"unknown atom kind {kind!r}")


def rule_to_json(rule: Rule) -> dict:
    out: dict = {"if": _expr_to_json(rule.antecedent), "then": rule.consequent}
    if rule.else_class is not None:
        out["else"] = rule.else_class
    return out


def rule_from_json(obj: dict) -> Rule:
    if "if" not in obj or "then" not in obj:
        raise RuleError("a rule document needs 'if' and 'then' fields")
    return Rule(
        antecedent=_expr_from_json(obj["if"]),
        consequent=str(obj["then"]),
        else_class=str(obj["else"]) if "else" in obj else None,
    )


def loads(text: str) -> Rule:
    try:
        return rule_from_json(json.loads(text))
    except json.JSONDecodeError as e:
        raise RuleError(f"malformed rule JSON: {e}") from None


def dumps(rule: Rule) -> str:
    return json.dumps(rule_to_json(rule), indent=2)
