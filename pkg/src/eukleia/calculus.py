"""Multiset judgments over angle terms, the inference rules, and the checker.

The judgment language has no connectives: a proof is a straight sequence of
Eq/Lt/Split/Congr/False claims, each justified by one rule applied to earlier
lines.  Three-way comparisons are eliminated with a dedicated Cases step
carrying one sub-derivation per branch; the absurd judgment False, once
established, yields any goal through the Hypothesis rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, NoReturn, Optional, Union

from .kernel import (
    AngleLit,
    AngleOverflow,
    Ordering,
    add_two,
    compare_multisets,
    right_angle,
)

if TYPE_CHECKING:
    from .dsl import SourceSpan


# ---------------------------------------------------------------------------
# Terms and multiset expressions

@dataclass(frozen=True)
class Var:
    """Angle variable, bound by a proof script's ``vars`` header."""

    name: str


@dataclass(frozen=True)
class Lit:
    """Concrete angle embedded in an expression."""

    angle: AngleLit


Term = Union[Var, Lit]

_RIGHT = right_angle()


def _term_key(t: Term) -> tuple[int, str, int, int]:
    if isinstance(t, Var):
        return (0, t.name, 0, 0)
    return (1, "", t.angle.x, t.angle.y)


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if t.angle == _RIGHT:
        return "R"
    return str(t.angle)


@dataclass(frozen=True)
class MultisetExpr:
    """Finite multiset of terms, kept in a canonical sorted order.

    Two expressions are equal exactly when they contain the same terms with
    the same multiplicities; the listed order never matters.
    """

    terms: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(sorted(self.terms, key=_term_key)))

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def add(self, t: Term) -> "MultisetExpr":
        return MultisetExpr(self.terms + (t,))

    def union(self, other: "MultisetExpr") -> "MultisetExpr":
        return MultisetExpr(self.terms + other.terms)

    def counts(self) -> dict[Term, int]:
        out: dict[Term, int] = {}
        for t in self.terms:
            out[t] = out.get(t, 0) + 1
        return out

    def variables(self) -> set[str]:
        return {t.name for t in self.terms if isinstance(t, Var)}

    def __str__(self) -> str:
        return "{" + ", ".join(format_term(t) for t in self.terms) + "}"


def multiset(*terms: Term) -> MultisetExpr:
    return MultisetExpr(tuple(terms))


# ---------------------------------------------------------------------------
# Judgments

@dataclass(frozen=True)
class Eq:
    lhs: MultisetExpr
    rhs: MultisetExpr


@dataclass(frozen=True)
class Lt:
    lhs: MultisetExpr
    rhs: MultisetExpr


@dataclass(frozen=True)
class Split:
    """Hypothesis form: a ray divides ``whole`` into the two parts."""

    whole: Term
    part1: Term
    part2: Term


@dataclass(frozen=True)
class Congr:
    """Hypothesis form: the two angles coincide when applied to each other."""

    a: Term
    b: Term


@dataclass(frozen=True)
class Falsum:
    """The absurd judgment; no valuation models it."""


Judgment = Union[Eq, Lt, Split, Congr, Falsum]


def format_judgment(j: Judgment) -> str:
    if isinstance(j, Eq):
        return f"Eq {j.lhs} {j.rhs}"
    if isinstance(j, Lt):
        return f"Lt {j.lhs} {j.rhs}"
    if isinstance(j, Split):
        return f"Split {format_term(j.whole)} {format_term(j.part1)} {format_term(j.part2)}"
    if isinstance(j, Congr):
        return f"Congr {format_term(j.a)} {format_term(j.b)}"
    return "False"


def _term_variables(t: Term) -> set[str]:
    return {t.name} if isinstance(t, Var) else set()


def judgment_variables(j: Judgment) -> set[str]:
    if isinstance(j, (Eq, Lt)):
        return j.lhs.variables() | j.rhs.variables()
    if isinstance(j, Split):
        return _term_variables(j.whole) | _term_variables(j.part1) | _term_variables(j.part2)
    if isinstance(j, Congr):
        return _term_variables(j.a) | _term_variables(j.b)
    return set()


def literal_judgment_truth(j: Judgment) -> bool:
    """Kernel truth value of a judgment that contains no variables."""
    if judgment_variables(j):
        raise ValueError("judgment contains variables")
    if isinstance(j, Eq):
        return compare_multisets(_angles(j.lhs), _angles(j.rhs)) is Ordering.EQUAL
    if isinstance(j, Lt):
        return compare_multisets(_angles(j.lhs), _angles(j.rhs)) is Ordering.LESS
    if isinstance(j, Split):
        try:
            composed = add_two(_angle(j.part1), _angle(j.part2))
        except AngleOverflow:
            return False
        return composed == _angle(j.whole)
    if isinstance(j, Congr):
        return _angle(j.a) == _angle(j.b)
    return False


def _angles(e: MultisetExpr) -> list[AngleLit]:
    return [_angle(t) for t in e.terms]


def _angle(t: Term) -> AngleLit:
    assert isinstance(t, Lit)
    return t.angle


# ---------------------------------------------------------------------------
# Rules and derivations

class Rule(Enum):
    """The closed set of inference rules a step may cite."""

    EQ_REFL = "eqrefl"
    EQ_SYM = "eqsym"
    EQ_TRANS = "eqtrans"
    SUBST_LEFT = "substleft"
    SUBST_RIGHT = "substright"
    LT_TRANS = "lttrans"
    ADD_BOTH = "addboth"
    SINGLETON_POS = "singletonpos"
    WHOLE_PART = "wholepart"
    SPLIT_EQ = "spliteq"
    CONGR_EQ = "congreq"
    LT_IRREFL = "ltirrefl"
    LT_ASYM = "ltasym"
    EQ_LT_CLASH = "eqltclash"
    CASES = "cases"
    HYPOTHESIS = "hypothesis"
    KERNEL_EVAL = "kerneleval"


# Expected premise count per rule; None means the rule checks arity itself.
_PREMISE_COUNT: dict[Rule, Optional[int]] = {
    Rule.EQ_REFL: 0,
    Rule.EQ_SYM: 1,
    Rule.EQ_TRANS: 2,
    Rule.SUBST_LEFT: 2,
    Rule.SUBST_RIGHT: 2,
    Rule.LT_TRANS: 2,
    Rule.ADD_BOTH: 1,
    Rule.SINGLETON_POS: 0,
    Rule.WHOLE_PART: 0,
    Rule.SPLIT_EQ: 1,
    Rule.CONGR_EQ: 1,
    Rule.LT_IRREFL: 1,
    Rule.LT_ASYM: 2,
    Rule.EQ_LT_CLASH: 2,
    Rule.CASES: 0,
    Rule.HYPOTHESIS: 1,
    Rule.KERNEL_EVAL: 0,
}


@dataclass(frozen=True)
class Hypothesis:
    label: str
    judgment: Judgment


@dataclass(frozen=True)
class Step:
    """One proof line: a judgment, the rule that licenses it, and the cited
    premise labels.  A Cases step additionally carries the compared pair and
    its three branch sub-derivations."""

    label: str
    judgment: Judgment
    rule: Rule
    premises: tuple[str, ...] = ()
    case_pair: Optional[tuple[MultisetExpr, MultisetExpr]] = None
    branches: tuple[tuple["Step", ...], ...] = ()
    span: Optional["SourceSpan"] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Derivation:
    variables: tuple[str, ...] = ()
    hypotheses: tuple[Hypothesis, ...] = ()
    steps: tuple[Step, ...] = ()


class StepError(Exception):
    """A proof step that its cited rule does not license."""

    def __init__(self, label: str, reason: str, span: Optional["SourceSpan"] = None):
        super().__init__(f"step {label}: {reason}")
        self.label = label
        self.reason = reason
        self.span = span


class EmptyPart(ValueError):
    """derive_whole_part was asked to add an empty part."""


class Context:
    """Judgments visible to a step: hypotheses and earlier steps, chained
    through enclosing Cases branches."""

    def __init__(self, parent: Optional["Context"] = None, declared: Optional[frozenset[str]] = None):
        self._entries: dict[str, Judgment] = {}
        self._parent = parent
        self.declared: frozenset[str] = parent.declared if parent is not None else frozenset(declared or ())

    def lookup(self, label: str) -> Optional[Judgment]:
        ctx: Optional[Context] = self
        while ctx is not None:
            j = ctx._entries.get(label)
            if j is not None:
                return j
            ctx = ctx._parent
        return None

    def defines(self, label: str) -> bool:
        return self.lookup(label) is not None

    def bind(self, label: str, judgment: Judgment) -> None:
        self._entries[label] = judgment


# ---------------------------------------------------------------------------
# Checking

def _single_added(base: MultisetExpr, extended: MultisetExpr) -> Optional[Term]:
    """The one term whose addition turns ``base`` into ``extended``, if any."""
    if len(extended) != len(base) + 1:
        return None
    bc, ec = base.counts(), extended.counts()
    extra: Optional[Term] = None
    for t, n in ec.items():
        d = n - bc.get(t, 0)
        if d == 0:
            continue
        if d != 1 or extra is not None:
            return None
        extra = t
    for t, n in bc.items():
        if ec.get(t, 0) < n:
            return None
    return extra


def _is_submultiset(a: MultisetExpr, b: MultisetExpr) -> bool:
    bc = b.counts()
    return all(n <= bc.get(t, 0) for t, n in a.counts().items())


def check_step(step: Step, context: Context) -> None:
    """Validate one step against its cited rule; raises StepError on failure.

    The step's judgment must be exactly what the rule produces from the
    cited premises; multiset sides match up to multiplicity, never by the
    order terms were written in.
    """

    def fail(reason: str) -> NoReturn:
        raise StepError(step.label, reason, step.span)

    if context.defines(step.label):
        fail("duplicate label")
    undeclared = judgment_variables(step.judgment) - context.declared
    if undeclared:
        fail(f"undeclared variable {sorted(undeclared)[0]!r}")

    premises: list[Judgment] = []
    for ref in step.premises:
        j = context.lookup(ref)
        if j is None:
            fail(f"unknown premise {ref!r}")
        premises.append(j)

    rule = step.rule
    if rule is not Rule.CASES and (step.branches or step.case_pair is not None):
        fail("case blocks are only meaningful under the cases rule")
    expected = _PREMISE_COUNT[rule]
    if expected is not None and len(premises) != expected:
        fail(f"rule {rule.value} takes {expected} premise(s), got {len(premises)}")

    goal = step.judgment

    if rule is Rule.EQ_REFL:
        if not (isinstance(goal, Eq) and goal.lhs == goal.rhs):
            fail("conclusion is not of the form Eq(M, M)")

    elif rule is Rule.EQ_SYM:
        (p,) = premises
        if not isinstance(p, Eq):
            fail("premise is not an equality")
        if goal != Eq(p.rhs, p.lhs):
            fail("conclusion is not the mirrored premise")

    elif rule is Rule.EQ_TRANS:
        p1, p2 = premises
        if not (isinstance(p1, Eq) and isinstance(p2, Eq)):
            fail("both premises must be equalities")
        if p1.rhs != p2.lhs:
            fail("middle expressions differ")
        if goal != Eq(p1.lhs, p2.rhs):
            fail("conclusion does not chain the premises")

    elif rule in (Rule.SUBST_LEFT, Rule.SUBST_RIGHT):
        eq, k = premises
        if not isinstance(eq, Eq):
            fail("first premise must be an equality")
        if not isinstance(k, (Eq, Lt)):
            fail("second premise must be a comparison")
        if rule is Rule.SUBST_LEFT:
            if k.lhs != eq.rhs:
                fail("left side of the comparison does not match the equality")
            produced: Judgment = type(k)(eq.lhs, k.rhs)
        else:
            if k.rhs != eq.rhs:
                fail("right side of the comparison does not match the equality")
            produced = type(k)(k.lhs, eq.lhs)
        if goal != produced:
            fail("conclusion is not the substituted comparison")

    elif rule is Rule.LT_TRANS:
        p1, p2 = premises
        if not (isinstance(p1, Lt) and isinstance(p2, Lt)):
            fail("both premises must be strict comparisons")
        if p1.rhs != p2.lhs:
            fail("middle expressions differ")
        if goal != Lt(p1.lhs, p2.rhs):
            fail("conclusion does not chain the premises")

    elif rule is Rule.ADD_BOTH:
        (p,) = premises
        if not isinstance(p, (Eq, Lt)):
            fail("premise must be a comparison")
        if type(goal) is not type(p):
            fail("conclusion must be the same kind of comparison as the premise")
        assert isinstance(goal, (Eq, Lt))
        added_l = _single_added(p.lhs, goal.lhs)
        added_r = _single_added(p.rhs, goal.rhs)
        if added_l is None or added_r is None:
            fail("each side must gain exactly one term")
        if added_l != added_r:
            fail("the two sides gained different terms")

    elif rule is Rule.SINGLETON_POS:
        if not (isinstance(goal, Lt) and goal.lhs.is_empty and len(goal.rhs) == 1):
            fail("conclusion is not of the form Lt({}, {t})")

    elif rule is Rule.WHOLE_PART:
        if not isinstance(goal, Lt):
            fail("conclusion must be a strict comparison")
        if not (_is_submultiset(goal.lhs, goal.rhs) and len(goal.rhs) > len(goal.lhs)):
            fail("right side must extend the left side by a nonempty part")

    elif rule is Rule.SPLIT_EQ:
        (p,) = premises
        if not isinstance(p, Split):
            fail("premise is not a split")
        if goal != Eq(multiset(p.whole), multiset(p.part1, p.part2)):
            fail("conclusion does not equate the whole with its two parts")

    elif rule is Rule.CONGR_EQ:
        (p,) = premises
        if not isinstance(p, Congr):
            fail("premise is not a congruence")
        if goal != Eq(multiset(p.a), multiset(p.b)):
            fail("conclusion does not equate the congruent singletons")

    elif rule is Rule.LT_IRREFL:
        (p,) = premises
        if not (isinstance(p, Lt) and p.lhs == p.rhs):
            fail("premise is not of the form Lt(M, M)")
        if not isinstance(goal, Falsum):
            fail("conclusion must be False")

    elif rule is Rule.LT_ASYM:
        p1, p2 = premises
        if not (isinstance(p1, Lt) and isinstance(p2, Lt)):
            fail("both premises must be strict comparisons")
        if not (p1.lhs == p2.rhs and p1.rhs == p2.lhs):
            fail("premises are not mirrored comparisons")
        if not isinstance(goal, Falsum):
            fail("conclusion must be False")

    elif rule is Rule.EQ_LT_CLASH:
        eq, lt = premises
        if not (isinstance(eq, Eq) and isinstance(lt, Lt)):
            fail("premises must be one equality and one strict comparison")
        same = lt.lhs == eq.lhs and lt.rhs == eq.rhs
        mirrored = lt.lhs == eq.rhs and lt.rhs == eq.lhs
        if not (same or mirrored):
            fail("the comparison does not relate the equated expressions")
        if not isinstance(goal, Falsum):
            fail("conclusion must be False")

    elif rule is Rule.HYPOTHESIS:
        (p,) = premises
        if not isinstance(p, Falsum) and goal != p:
            fail("conclusion neither restates the premise nor follows from False")

    elif rule is Rule.KERNEL_EVAL:
        if judgment_variables(goal):
            fail("kernel evaluation needs a variable-free judgment")
        if isinstance(goal, Falsum):
            fail("kernel evaluation cannot produce False")
        if not literal_judgment_truth(goal):
            fail("kernel refutes this judgment")

    elif rule is Rule.CASES:
        _check_cases(step, context, fail)

    else:  # pragma: no cover - Rule is a closed enumeration
        fail(f"unhandled rule {rule.value}")


def _check_cases(step: Step, context: Context, fail) -> None:
    if step.case_pair is None:
        fail("cases needs the pair of expressions being compared")
    if len(step.branches) != 3:
        fail("cases needs exactly three branches")
    m, n = step.case_pair
    undeclared = (m.variables() | n.variables()) - context.declared
    if undeclared:
        fail(f"undeclared variable {sorted(undeclared)[0]!r}")
    for idx, (branch, hyp) in enumerate(zip(step.branches, (Lt(m, n), Eq(m, n), Lt(n, m))), start=1):
        if not branch:
            fail(f"branch {idx} is empty")
        child = Context(parent=context)
        child.bind("case", hyp)
        for sub in branch:
            check_step(sub, child)
            child.bind(sub.label, sub.judgment)
        if branch[-1].judgment != step.judgment:
            fail(f"branch {idx} concludes {format_judgment(branch[-1].judgment)}, not the goal")


def check_derivation(derivation: Derivation) -> None:
    """Check every step in order; raises StepError at the first failure."""
    ctx = Context(declared=frozenset(derivation.variables))
    for h in derivation.hypotheses:
        if ctx.defines(h.label):
            raise StepError(h.label, "duplicate label")
        undeclared = judgment_variables(h.judgment) - ctx.declared
        if undeclared:
            raise StepError(h.label, f"undeclared variable {sorted(undeclared)[0]!r}")
        ctx.bind(h.label, h.judgment)
    for s in derivation.steps:
        check_step(s, ctx)
        ctx.bind(s.label, s.judgment)


# ---------------------------------------------------------------------------
# Derived construction

def derive_whole_part(m: MultisetExpr, n: MultisetExpr, label_prefix: str = "wp") -> tuple[Step, ...]:
    """Steps concluding Lt(m, m + n), built from SingletonPos, AddBoth and LtTrans.

    The returned fragment is self-contained: every premise cites one of its
    own labels, so it checks inside any derivation whose label space does
    not collide with ``label_prefix``.  Raises EmptyPart when ``n`` is empty.
    """
    if n.is_empty:
        raise EmptyPart("the added part must be nonempty")
    steps: list[Step] = []
    counter = 0

    def emit(judgment: Judgment, rule: Rule, *premises: str) -> str:
        nonlocal counter
        counter += 1
        label = f"{label_prefix}{counter}"
        steps.append(Step(label, judgment, rule, tuple(premises)))
        return label

    base = m
    total_label: Optional[str] = None
    total: Optional[Lt] = None
    for t in n.terms:
        cur = Lt(MultisetExpr(), multiset(t))
        label = emit(cur, Rule.SINGLETON_POS)
        for u in base.terms:
            cur = Lt(cur.lhs.add(u), cur.rhs.add(u))
            label = emit(cur, Rule.ADD_BOTH, label)
        if total is None:
            total_label, total = label, cur
        else:
            total = Lt(total.lhs, cur.rhs)
            total_label = emit(total, Rule.LT_TRANS, total_label, label)
        base = base.add(t)
    return tuple(steps)
