"""AST for the object-specification language.

A specification is a header (package, imports, name, typed parameters)
followed by rules. Rules are built from ordinary atoms plus four extension
atoms (constructor calls, method invocations, parameter membership,
returns) and from cardinality constructs. All nodes are immutable and
hashable; ``to_source`` renders a node back to concrete syntax such that
re-parsing yields a structurally equal tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

COMPARISON_OPS = ("==", "!=", "<", ">", "<=", ">=")


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class IntTerm:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True)
class SymbolTerm:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class VarTerm:
    name: str  # without the trailing "?"

    def __str__(self) -> str:
        return f"{self.name}?"


@dataclass(frozen=True, slots=True)
class AnonTerm:
    def __str__(self) -> str:
        return "_"


@dataclass(frozen=True, slots=True)
class ScalarRefTerm:
    """Reference to a declared scalar (int) parameter."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class MethodValueTerm:
    """``V?.method()`` — the integer a host accessor returns for V?."""

    var: str
    method: str

    def __str__(self) -> str:
        return f"{self.var}?.{self.method}()"


@dataclass(frozen=True, slots=True)
class ArithTerm:
    left: Term
    op: str  # "+" or "-"
    right: Term

    def __str__(self) -> str:
        return f"{self.left}{self.op}{self.right}"


Term = IntTerm | SymbolTerm | VarTerm | AnonTerm | ScalarRefTerm | MethodValueTerm | ArithTerm


# ---------------------------------------------------------------------------
# Atoms and literals
# ---------------------------------------------------------------------------

def _terms_str(terms: tuple) -> str:
    return ", ".join(str(t) for t in terms)


@dataclass(frozen=True, slots=True)
class OrdinaryAtom:
    pred: str
    terms: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.terms:
            return self.pred
        return f"{self.pred}({_terms_str(self.terms)})"


@dataclass(frozen=True, slots=True)
class ParamMembership:
    """``V?param(I?)`` — V? is the object at index I? of an array parameter."""

    var: str
    param: str
    index: Term

    def __str__(self) -> str:
        return f"{self.var}?{self.param}({self.index})"


@dataclass(frozen=True, slots=True)
class CreationRef:
    """``V?Class(args)`` — V? is the object built by ``new Class(args)``."""

    var: str
    cls: str
    terms: tuple[Term, ...]

    def __str__(self) -> str:
        return f"{self.var}?{self.cls}({_terms_str(self.terms)})"


@dataclass(frozen=True, slots=True)
class Comparison:
    lhs: Term
    op: str
    rhs: Term

    def __str__(self) -> str:
        return f"{self.lhs} {self.op} {self.rhs}"


@dataclass(frozen=True, slots=True)
class Naf:
    """Default negation wrapper: ``not atom``."""

    atom: OrdinaryAtom | ParamMembership | CreationRef

    def __str__(self) -> str:
        return f"not {self.atom}"


@dataclass(frozen=True, slots=True)
class CardElement:
    """``template : cond : cond`` inside braces."""

    template: OrdinaryAtom
    conditions: tuple[ParamMembership | OrdinaryAtom | CreationRef | Comparison, ...] = ()

    def __str__(self) -> str:
        parts = [str(self.template)] + [str(c) for c in self.conditions]
        return " : ".join(parts)


@dataclass(frozen=True, slots=True)
class CardinalityLiteral:
    lower: Term | None
    element: CardElement
    upper: Term | None

    def __str__(self) -> str:
        lo = f"{self.lower} " if self.lower is not None else ""
        up = f" {self.upper}" if self.upper is not None else ""
        return f"{lo}{{{self.element}}}{up}"


@dataclass(frozen=True, slots=True)
class CountAssignment:
    """``N? = {element}`` — binds N? to the number of true element atoms."""

    var: str
    element: CardElement

    def __str__(self) -> str:
        return f"{self.var}? = {{{self.element}}}"


BodyLiteral = (
    OrdinaryAtom | ParamMembership | CreationRef | Naf | Comparison
    | CardinalityLiteral | CountAssignment
)


# ---------------------------------------------------------------------------
# Heads
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class ChoiceHead:
    lower: Term | None
    element: CardElement
    upper: Term | None

    def __str__(self) -> str:
        lo = f"{self.lower} " if self.lower is not None else ""
        up = f" {self.upper}" if self.upper is not None else ""
        return f"{lo}{{{self.element}}}{up}"


@dataclass(frozen=True, slots=True)
class NewAtom:
    cls: str
    terms: tuple[Term, ...]

    def __str__(self) -> str:
        return f"new {self.cls}({_terms_str(self.terms)})"


@dataclass(frozen=True, slots=True)
class ExeAtom:
    """``exe[stage] Target?.method(args)``; plain ``exe`` means stage 0."""

    stage: int
    target: str  # variable name
    method: str
    terms: tuple[Term, ...]

    def __str__(self) -> str:
        stage = f"[{self.stage}]" if self.stage != 0 else ""
        return f"exe{stage} {self.target}?.{self.method}({_terms_str(self.terms)})"


@dataclass(frozen=True, slots=True)
class ReturnAtom:
    target: str  # variable name

    def __str__(self) -> str:
        return f"return {self.target}?"


HeadAtom = OrdinaryAtom | ChoiceHead | NewAtom | ExeAtom | ReturnAtom


# ---------------------------------------------------------------------------
# Rules and programs
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Rule:
    head: HeadAtom | None
    body: tuple[BodyLiteral, ...]
    line: int = field(default=0, compare=False)

    def __str__(self) -> str:
        if self.head is not None and not self.body:
            return f"{self.head}."
        body = ", ".join(str(b) for b in self.body)
        head = f"{self.head} " if self.head is not None else ""
        return f"{head}:- {body}."


@dataclass(frozen=True, slots=True)
class MinimizeStatement:
    element: CardElement

    def __str__(self) -> str:
        return f"#minimize{{{self.element}}}."


@dataclass(frozen=True, slots=True)
class ParamDecl:
    name: str
    cls: str | None  # None for scalar int, class name for object arrays

    @property
    def is_array(self) -> bool:
        return self.cls is not None

    def __str__(self) -> str:
        return f"{self.cls}[] {self.name}" if self.is_array else f"int {self.name}"


@dataclass(frozen=True, slots=True)
class SpecProgram:
    name: str
    params: tuple[ParamDecl, ...] = ()
    rules: tuple[Rule, ...] = ()
    minimize: MinimizeStatement | None = None
    package: str | None = None
    imports: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ValueError("specification name must be nonempty")
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise ValueError("parameter names must be pairwise distinct")

    @property
    def array_params(self) -> dict[str, str]:
        return {p.name: p.cls for p in self.params if p.is_array}

    @property
    def scalar_params(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params if not p.is_array)

    def to_source(self) -> str:
        lines = []
        if self.package:
            lines.append(f"package {self.package};")
        for imp in self.imports:
            lines.append(f"import {imp};")
        params = ", ".join(str(p) for p in self.params)
        lines.append(f"{self.name}({params}) {{")
        for rule in self.rules:
            lines.append(f"    {rule}")
        if self.minimize is not None:
            lines.append(f"    {self.minimize}")
        lines.append("}")
        return "\n".join(lines) + "\n"


def walk_terms(node) -> list[Term]:
    """All term occurrences inside a literal/atom, in syntactic order."""
    out: list[Term] = []

    def term(t):
        out.append(t)
        if isinstance(t, ArithTerm):
            term(t.left)
            term(t.right)

    if isinstance(node, (OrdinaryAtom, CreationRef, NewAtom, ExeAtom)):
        for t in node.terms:
            term(t)
    elif isinstance(node, ParamMembership):
        term(node.index)
    elif isinstance(node, Comparison):
        term(node.lhs)
        term(node.rhs)
    elif isinstance(node, Naf):
        out.extend(walk_terms(node.atom))
    elif isinstance(node, (CardinalityLiteral, ChoiceHead)):
        if node.lower is not None:
            term(node.lower)
        if node.upper is not None:
            term(node.upper)
        out.extend(walk_terms(node.element))
    elif isinstance(node, CountAssignment):
        out.extend(walk_terms(node.element))
    elif isinstance(node, CardElement):
        out.extend(walk_terms(node.template))
        for c in node.conditions:
            out.extend(walk_terms(c))
    return out


def variables_of(node) -> set[str]:
    """Variable names occurring anywhere inside a node (incl. binders)."""
    vars_: set[str] = set()
    for t in walk_terms(node):
        if isinstance(t, VarTerm):
            vars_.add(t.name)
        elif isinstance(t, MethodValueTerm):
            vars_.add(t.var)
    if isinstance(node, ParamMembership):
        vars_.add(node.var)
    elif isinstance(node, CreationRef):
        vars_.add(node.var)
    elif isinstance(node, ExeAtom):
        vars_.add(node.target)
    elif isinstance(node, ReturnAtom):
        vars_.add(node.target)
    elif isinstance(node, Naf):
        vars_ |= variables_of(node.atom)
    elif isinstance(node, (CardinalityLiteral, ChoiceHead, CountAssignment)):
        vars_ |= variables_of(node.element)
        if isinstance(node, CountAssignment):
            vars_.add(node.var)
    elif isinstance(node, CardElement):
        vars_ |= variables_of(node.template)
        for c in node.conditions:
            vars_ |= variables_of(c)
    return vars_
