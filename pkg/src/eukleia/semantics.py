"""Model side: proof variables valued as concrete angles.

A judgment becomes true or false once every variable denotes an angle.  The
checker's rules are exercised against this model by drawing randomized
valuations that satisfy a derivation's hypotheses and asserting every step's
judgment; a failure is a counterexample to the rule set, not an exception.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence

from .calculus import (
    Congr,
    Derivation,
    Eq,
    Falsum,
    Judgment,
    Lit,
    Lt,
    Rule,
    Split,
    Step,
    Term,
    Var,
    format_judgment,
    judgment_variables,
    literal_judgment_truth,
    MultisetExpr,
)
from .kernel import AngleLit, AngleOverflow, add_two, angle_from_slope_vector

__all__ = [
    "Counterexample",
    "ModelCheckReport",
    "Unsatisfied",
    "UnboundVariable",
    "Valuation",
    "eval_judgment",
    "model_check_derivation",
    "random_valuation",
    "substitute",
]

Valuation = Dict[str, AngleLit]

DEFAULT_BUDGET = 10_000


class UnboundVariable(KeyError):
    """A judgment mentions a variable the valuation does not cover."""


class Unsatisfied(Exception):
    """The retry budget ran out before the hypotheses held.

    Signals that the hypothesis set resisted sampling, not that it is
    unsatisfiable.
    """

    def __init__(self, attempts: int):
        super().__init__(f"no satisfying valuation found in {attempts} attempts")
        self.attempts = attempts


def _subst_term(t: Term, valuation: Mapping[str, AngleLit]) -> Term:
    if isinstance(t, Var):
        try:
            return Lit(valuation[t.name])
        except KeyError:
            raise UnboundVariable(t.name) from None
    return t


def substitute(j: Judgment, valuation: Mapping[str, AngleLit]) -> Judgment:
    """Replace every variable in ``j`` by its angle under ``valuation``."""
    if isinstance(j, (Eq, Lt)):
        return type(j)(
            MultisetExpr(tuple(_subst_term(t, valuation) for t in j.lhs.terms)),
            MultisetExpr(tuple(_subst_term(t, valuation) for t in j.rhs.terms)),
        )
    if isinstance(j, Split):
        return Split(
            _subst_term(j.whole, valuation),
            _subst_term(j.part1, valuation),
            _subst_term(j.part2, valuation),
        )
    if isinstance(j, Congr):
        return Congr(_subst_term(j.a, valuation), _subst_term(j.b, valuation))
    return j


def eval_judgment(j: Judgment, valuation: Mapping[str, AngleLit]) -> bool:
    """Truth of a judgment once its variables denote concrete angles.

    Eq/Lt compare total measures exactly; Split holds when the parts compose
    to the whole; Congr holds for identical canonical angles; False never
    holds.  Raises UnboundVariable for a variable missing from the valuation.
    """
    return literal_judgment_truth(substitute(j, valuation))


# ---------------------------------------------------------------------------
# Randomized valuations

_COORD_RANGE = 20


def _random_angle(rng: random.Random) -> AngleLit:
    # Coordinates uniform in [-20, 20], rejecting the closed lower half-plane;
    # canonicalization folds non-reduced duplicates.
    while True:
        x = rng.randint(-_COORD_RANGE, _COORD_RANGE)
        y = rng.randint(-_COORD_RANGE, _COORD_RANGE)
        if y > 0:
            return angle_from_slope_vector(x, y)


def random_valuation(
    variables: Iterable[str],
    hypotheses: Sequence[Judgment],
    seed: int = 0,
    *,
    budget: int = DEFAULT_BUDGET,
) -> Valuation:
    """Draw a valuation of ``variables`` satisfying every hypothesis.

    Deterministic for a fixed seed.  Split hypotheses are satisfied by
    construction where possible: parts are drawn first and wholes composed,
    rejecting overflow.  Congr aliases its two sides.  Everything else -
    Eq/Lt hypotheses, splits onto fixed wholes - goes through rejection
    sampling.  Raises Unsatisfied once the retry budget is spent.
    """
    names = list(dict.fromkeys(variables))
    hyps = list(hypotheses)
    known = set(names)
    for h in hyps:
        stray = judgment_variables(h) - known
        if stray:
            raise UnboundVariable(sorted(stray)[0])

    # Union-find over variables aliased by Congr; a group may be pinned to a
    # concrete angle by a Congr with a literal side.
    parent: dict[str, str] = {n: n for n in names}

    def find(n: str) -> str:
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    def union(a: str, b: str) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    pinned: dict[str, AngleLit] = {}
    impossible = False
    splits: list[Split] = []
    for h in hyps:
        if isinstance(h, Congr):
            sides = (h.a, h.b)
            if all(isinstance(t, Var) for t in sides):
                union(h.a.name, h.b.name)  # type: ignore[union-attr]
            elif all(isinstance(t, Lit) for t in sides):
                if sides[0] != sides[1]:
                    impossible = True
        elif isinstance(h, Split):
            splits.append(h)
        elif isinstance(h, Falsum):
            impossible = True
    for h in hyps:
        if isinstance(h, Congr):
            var_side = next((t for t in (h.a, h.b) if isinstance(t, Var)), None)
            lit_side = next((t for t in (h.a, h.b) if isinstance(t, Lit)), None)
            if var_side is not None and lit_side is not None:
                root = find(var_side.name)
                if root in pinned and pinned[root] != lit_side.angle:
                    impossible = True
                pinned[root] = lit_side.angle

    composed_roots = {find(s.whole.name) for s in splits if isinstance(s.whole, Var)}

    def term_value(t: Term, values: dict[str, AngleLit]) -> Optional[AngleLit]:
        if isinstance(t, Lit):
            return t.angle
        return values.get(find(t.name))

    rng = random.Random(seed)
    for _ in range(budget):
        if impossible:
            continue
        values = dict(pinned)
        ok = True
        for n in names:
            root = find(n)
            if root not in values and root not in composed_roots:
                values[root] = _random_angle(rng)
        # Compose split wholes from their parts until no split makes progress;
        # chained splits resolve in dependency order, cycles simply stall.
        remaining = list(splits)
        while ok and remaining:
            progressed = False
            deferred = []
            for s in remaining:
                p1 = term_value(s.part1, values)
                p2 = term_value(s.part2, values)
                if p1 is None or p2 is None:
                    deferred.append(s)
                    continue
                try:
                    whole = add_two(p1, p2)
                except AngleOverflow:
                    ok = False
                    break
                known = term_value(s.whole, values)
                if known is not None:
                    if known != whole:
                        ok = False
                        break
                else:
                    values[find(s.whole.name)] = whole  # type: ignore[union-attr]
                progressed = True
            if not ok:
                break
            if deferred and not progressed:
                ok = False  # stalled on a cyclic split chain
                break
            remaining = deferred
        if not ok:
            continue
        if any(find(n) not in values for n in names):
            continue
        valuation = {n: values[find(n)] for n in names}
        if all(eval_judgment(h, valuation) for h in hyps):
            return valuation
    raise Unsatisfied(budget)


# ---------------------------------------------------------------------------
# Model checking derivations

@dataclass(frozen=True)
class Counterexample:
    trial: int
    step: str
    judgment: Judgment
    valuation: Valuation


@dataclass(frozen=True)
class ModelCheckReport:
    """Outcome of model-checking a derivation.

    ``trials`` counts attempts made (the full request, unless a
    counterexample stopped the run early); ``satisfied`` counts attempts
    whose sampled valuation met the hypotheses.
    """

    trials: int
    satisfied: int
    counterexample: Optional[Counterexample]

    def to_dict(self) -> dict:
        cx = None
        if self.counterexample is not None:
            cx = {
                "trial": self.counterexample.trial,
                "step": self.counterexample.step,
                "judgment": format_judgment(self.counterexample.judgment),
                "valuation": {k: str(v) for k, v in sorted(self.counterexample.valuation.items())},
            }
        return {"trials": self.trials, "satisfied": self.satisfied, "counterexample": cx}


def _first_false(steps: Sequence[Step], valuation: Valuation) -> Optional[Step]:
    for step in steps:
        if step.rule is Rule.CASES and step.case_pair is not None:
            m, n = step.case_pair
            for hyp, branch in zip((Lt(m, n), Eq(m, n), Lt(n, m)), step.branches):
                if eval_judgment(hyp, valuation):
                    bad = _first_false(branch, valuation)
                    if bad is not None:
                        return bad
                    break
        if not eval_judgment(step.judgment, valuation):
            return step
    return None


def model_check_derivation(derivation: Derivation, trials: int, seed: int = 0) -> ModelCheckReport:
    """Assert every step's judgment over hypothesis-satisfying valuations.

    Steps inside a Cases branch are checked only when that branch's
    comparison holds under the valuation.  The first counterexample (lowest
    trial index) stops the run.  Identical inputs produce identical reports.
    """
    hyp_judgments = [h.judgment for h in derivation.hypotheses]
    satisfied = 0
    for i in range(trials):
        try:
            valuation = random_valuation(derivation.variables, hyp_judgments, seed=seed * 1_000_003 + i)
        except Unsatisfied:
            continue
        satisfied += 1
        bad = _first_false(derivation.steps, valuation)
        if bad is not None:
            return ModelCheckReport(
                trials=i + 1,
                satisfied=satisfied,
                counterexample=Counterexample(i, bad.label, bad.judgment, dict(valuation)),
            )
    return ModelCheckReport(trials=trials, satisfied=satisfied, counterexample=None)
