"""Reader and printer for the ``.eap`` proof-script format.

Scripts are plain UTF-8 text: a ``vars`` header, ``hyp`` lines, then labeled
steps citing a rule and premise labels, every statement terminated by a
semicolon.  ``#`` starts a comment running to the end of the line.  Keywords
and rule names are case-insensitive; variable names and labels are
case-sensitive, and ``R`` (exactly uppercase) is the reserved right angle.

Grammar::

    proof    := "vars" IDENT* ";" hyp* step*
    hyp      := "hyp" IDENT ":" judgment ";"
    step     := IDENT ":" judgment "by" RULE refs ";"
    refs     := IDENT*                                  (labels, or "case")
              | expr expr "{" step* "}" "{" step* "}" "{" step* "}"
                                                        (cases rule only)
    judgment := "Eq" expr expr | "Lt" expr expr
              | "Split" term term term | "Congr" term term | "False"
    expr     := "{" [ term ("," term)* ] "}"
    term     := IDENT | "R" | "ang" "(" INT "/" INT ")"

References are resolved while parsing: citing a label that is not yet in
scope (including any forward reference) is a parse error.  Within a cases
branch the branch's comparison is cited as ``case``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .calculus import (
    Congr,
    Derivation,
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
    Term,
    Var,
    format_judgment,
)
from .kernel import DegenerateAngle, angle_from_slope_vector

__all__ = [
    "ParseError",
    "SourceSpan",
    "format_derivation",
    "format_expr",
    "parse_expr",
    "parse_proof",
]


@dataclass(frozen=True)
class SourceSpan:
    """1-based position and length of a piece of source text."""

    line: int
    column: int
    length: int


class ParseError(Exception):
    """Input text the grammar does not accept, located by a source span."""

    def __init__(self, span: SourceSpan, message: str, expected: tuple[str, ...] = ()):
        detail = message
        if expected:
            detail = f"{message} (expected {', '.join(expected)})"
        super().__init__(f"{span.line}:{span.column}: {detail}")
        self.span = span
        self.message = message
        self.expected = expected


_PUNCT = {
    "{": "lbrace",
    "}": "rbrace",
    "(": "lparen",
    ")": "rparen",
    ",": "comma",
    ":": "colon",
    ";": "semi",
    "/": "slash",
}

# Words that cannot serve as variable names or labels, compared lowercase.
_RESERVED = {"vars", "hyp", "by", "eq", "lt", "split", "congr", "false", "ang", "case", "cases"}

_RULES_BY_NAME = {r.value: r for r in Rule}


@dataclass(frozen=True)
class _Token:
    kind: str  # ident | int | one of _PUNCT values | eof
    text: str
    line: int
    column: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.line, self.column, max(1, len(self.text)))


def _lex(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, line, col))
            col += 1
            i += 1
        elif ch == "-" or ch.isdigit():
            start_col, start = col, i
            i += 1
            col += 1
            while i < n and text[i].isdigit():
                i += 1
                col += 1
            word = text[start:i]
            if word == "-":
                raise ParseError(SourceSpan(line, start_col, 1), "malformed integer")
            tokens.append(_Token("int", word, line, start_col))
        elif ch.isalpha() or ch == "_":
            start_col, start = col, i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            tokens.append(_Token("ident", text[start:i], line, start_col))
        else:
            raise ParseError(SourceSpan(line, col, 1), f"unexpected character {ch!r}")
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._pos = 0

    # -- token plumbing ----------------------------------------------------

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _take(self) -> _Token:
        tok = self._tokens[self._pos]
        if tok.kind != "eof":
            self._pos += 1
        return tok

    def _expect(self, kind: str, what: str) -> _Token:
        tok = self._peek()
        if tok.kind != kind:
            raise ParseError(tok.span, f"unexpected {self._describe(tok)}", expected=(what,))
        return self._take()

    @staticmethod
    def _describe(tok: _Token) -> str:
        return "end of input" if tok.kind == "eof" else f"{tok.text!r}"

    def _at_keyword(self, word: str) -> bool:
        tok = self._peek()
        return tok.kind == "ident" and tok.text.lower() == word

    def _expect_keyword(self, word: str) -> _Token:
        tok = self._peek()
        if not self._at_keyword(word):
            raise ParseError(tok.span, f"unexpected {self._describe(tok)}", expected=(word,))
        return self._take()

    def expect_eof(self) -> None:
        tok = self._peek()
        if tok.kind != "eof":
            raise ParseError(tok.span, f"unexpected {self._describe(tok)} after the expression",
                             expected=("end of input",))

    # -- names -------------------------------------------------------------

    def _name(self, what: str) -> _Token:
        tok = self._expect("ident", what)
        if tok.text.lower() in _RESERVED or tok.text == "R":
            raise ParseError(tok.span, f"{tok.text!r} is reserved and cannot name a {what}")
        return tok

    # -- expressions -------------------------------------------------------

    def parse_expr(self, declared: Optional[set[str]]) -> MultisetExpr:
        self._expect("lbrace", "{")
        terms: list[Term] = []
        if self._peek().kind != "rbrace":
            terms.append(self._parse_term(declared))
            while self._peek().kind == "comma":
                self._take()
                terms.append(self._parse_term(declared))
        self._expect("rbrace", "}")
        return MultisetExpr(tuple(terms))

    def _parse_term(self, declared: Optional[set[str]]) -> Term:
        tok = self._expect("ident", "term")
        if tok.text == "R":
            return Lit(angle_from_slope_vector(0, 1))
        if tok.text.lower() == "ang":
            self._expect("lparen", "(")
            x_tok = self._expect("int", "integer")
            self._expect("slash", "/")
            y_tok = self._expect("int", "integer")
            close = self._expect("rparen", ")")
            try:
                angle = angle_from_slope_vector(int(x_tok.text), int(y_tok.text))
            except DegenerateAngle:
                length = close.column + 1 - tok.column if close.line == tok.line else len(tok.text)
                raise ParseError(
                    SourceSpan(tok.line, tok.column, length),
                    "degenerate angle literal: the argument is not strictly between 0 and pi",
                ) from None
            return Lit(angle)
        if tok.text.lower() in _RESERVED:
            raise ParseError(tok.span, f"{tok.text!r} is reserved and cannot name a variable")
        if declared is not None and tok.text not in declared:
            raise ParseError(tok.span, f"undeclared variable {tok.text!r}")
        return Var(tok.text)

    # -- judgments ---------------------------------------------------------

    def _parse_judgment(self, declared: Optional[set[str]]) -> Judgment:
        tok = self._peek()
        head = tok.text.lower() if tok.kind == "ident" else ""
        if head == "eq":
            self._take()
            return Eq(self.parse_expr(declared), self.parse_expr(declared))
        if head == "lt":
            self._take()
            return Lt(self.parse_expr(declared), self.parse_expr(declared))
        if head == "split":
            self._take()
            return Split(self._parse_term(declared), self._parse_term(declared), self._parse_term(declared))
        if head == "congr":
            self._take()
            return Congr(self._parse_term(declared), self._parse_term(declared))
        if head == "false":
            self._take()
            return Falsum()
        raise ParseError(tok.span, f"unexpected {self._describe(tok)}",
                         expected=("Eq", "Lt", "Split", "Congr", "False"))

    # -- proofs ------------------------------------------------------------

    def parse_derivation(self) -> Derivation:
        header = self._peek()
        if not self._at_keyword("vars"):
            raise ParseError(header.span, "missing vars header", expected=("vars",))
        self._take()
        variables: list[str] = []
        declared: set[str] = set()
        while self._peek().kind == "ident":
            tok = self._name("variable")
            if tok.text in declared:
                raise ParseError(tok.span, f"variable {tok.text!r} declared twice")
            declared.add(tok.text)
            variables.append(tok.text)
        self._expect("semi", ";")

        all_labels: set[str] = set()
        scope: list[set[str]] = [set()]

        def declare_label(tok: _Token) -> None:
            if tok.text in all_labels:
                raise ParseError(tok.span, f"duplicate label {tok.text!r}")
            all_labels.add(tok.text)
            scope[-1].add(tok.text)

        hypotheses: list[Hypothesis] = []
        while self._at_keyword("hyp"):
            self._take()
            label = self._name("hypothesis label")
            declare_label(label)
            self._expect("colon", ":")
            judgment = self._parse_judgment(declared)
            self._expect("semi", ";")
            hypotheses.append(Hypothesis(label.text, judgment))

        steps: list[Step] = []
        while self._peek().kind != "eof":
            steps.append(self._parse_step(declared, scope, declare_label))

        return Derivation(tuple(variables), tuple(hypotheses), tuple(steps))

    def _parse_step(self, declared: set[str], scope: list[set[str]], declare_label) -> Step:
        label = self._name("step label")
        self._expect("colon", ":")
        judgment = self._parse_judgment(declared)
        self._expect_keyword("by")
        rule_tok = self._expect("ident", "rule name")
        rule = _RULES_BY_NAME.get(rule_tok.text.lower())
        if rule is None:
            raise ParseError(rule_tok.span, f"unknown rule {rule_tok.text!r}")

        case_pair: Optional[tuple[MultisetExpr, MultisetExpr]] = None
        branches: tuple[tuple[Step, ...], ...] = ()
        premises: list[str] = []

        if rule is Rule.CASES:
            lhs = self.parse_expr(declared)
            rhs = self.parse_expr(declared)
            case_pair = (lhs, rhs)
            parsed: list[tuple[Step, ...]] = []
            for _ in range(3):
                self._expect("lbrace", "{")
                scope.append({"case"})
                block: list[Step] = []
                while self._peek().kind != "rbrace":
                    block.append(self._parse_step(declared, scope, declare_label))
                scope.pop()
                self._expect("rbrace", "}")
                parsed.append(tuple(block))
            branches = tuple(parsed)
        else:
            while self._peek().kind == "ident":
                ref = self._take()
                if not any(ref.text in frame for frame in scope):
                    raise ParseError(ref.span, f"unknown reference {ref.text!r}")
                premises.append(ref.text)

        self._expect("semi", ";")
        declare_label(label)
        return Step(
            label.text,
            judgment,
            rule,
            tuple(premises),
            case_pair=case_pair,
            branches=branches,
            span=label.span,
        )


def parse_expr(text: str) -> MultisetExpr:
    """Parse a standalone multiset expression such as ``{R, ang(3/4), a}``.

    Variables are accepted syntactically; callers that need a literal-only
    expression check for variables themselves.
    """
    parser = _Parser(_lex(text))
    expr = parser.parse_expr(declared=None)
    parser.expect_eof()
    return expr


def parse_proof(text: str) -> Derivation:
    """Parse a full proof script; raises ParseError with a source span."""
    return _Parser(_lex(text)).parse_derivation()


# ---------------------------------------------------------------------------
# Pretty printing

def format_expr(e: MultisetExpr) -> str:
    return str(e)


def _format_step(step: Step, indent: int, out: list[str]) -> None:
    pad = "    " * indent
    head = f"{pad}{step.label}: {format_judgment(step.judgment)} by {step.rule.value}"
    if step.rule is Rule.CASES and step.case_pair is not None:
        lhs, rhs = step.case_pair
        out.append(f"{head} {lhs} {rhs} {{")
        for i, branch in enumerate(step.branches):
            if i:
                out.append(f"{pad}}} {{")
            for sub in branch:
                _format_step(sub, indent + 1, out)
        out.append(f"{pad}}};")
    elif step.premises:
        out.append(f"{head} {' '.join(step.premises)};")
    else:
        out.append(f"{head};")


def format_derivation(d: Derivation) -> str:
    """Render a derivation back to script text; reparsing yields an equal value."""
    lines: list[str] = []
    lines.append("vars" + ("" if not d.variables else " " + " ".join(d.variables)) + ";")
    if d.hypotheses:
        lines.append("")
        for h in d.hypotheses:
            lines.append(f"hyp {h.label}: {format_judgment(h.judgment)};")
    if d.steps:
        lines.append("")
        for s in d.steps:
            _format_step(s, 0, lines)
    return "\n".join(lines) + "\n"
