"""Exact comparison of finite multisets of angles, plus a proof checker for
Euclid-style derivations over them and a randomized model checker for the
rule set."""

from .kernel import (
    AngleLit,
    AngleOverflow,
    AngleSum,
    DegenerateAngle,
    Ordering,
    PlaneVector,
    add_two,
    angle_from_rays,
    angle_from_slope_vector,
    compare_args,
    compare_multisets,
    right_angle,
    sum_multiset,
)
from .calculus import (
    Congr,
    Context,
    Derivation,
    EmptyPart,
    Eq,
    Falsum,
    Hypothesis,
    Judgment,
    Lit,
    Lt,
    MultisetExpr,
    Rule,
    Split,
    Step,
    StepError,
    Term,
    Var,
    check_derivation,
    check_step,
    derive_whole_part,
    format_judgment,
    multiset,
)
from .dsl import ParseError, SourceSpan, format_derivation, parse_expr, parse_proof
from .semantics import (
    Counterexample,
    ModelCheckReport,
    UnboundVariable,
    Unsatisfied,
    Valuation,
    eval_judgment,
    model_check_derivation,
    random_valuation,
)

__version__ = "0.1.0"
