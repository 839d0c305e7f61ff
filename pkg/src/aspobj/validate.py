"""Static checks on parsed specifications.

The central check is safety: every variable must be bound by a positive
literal so grounding ranges over finite domains. Variables that occur only
inside a cardinality element (and nowhere else in the rule) are scoped to
that element and must be bound by one of its positive conditions; all
other variables are rule-scoped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast_nodes import (
    CardElement, CardinalityLiteral, ChoiceHead, CountAssignment,
    CreationRef, ExeAtom, MethodValueTerm, Naf, NewAtom, OrdinaryAtom,
    ParamMembership, ReturnAtom, Rule, SpecProgram, VarTerm, walk_terms,
)

#: Predicate names claimed by the solver-facing text rendering.
RESERVED_PREDICATES = frozenset({"param_member", "method_val", "created", "exe", "ret"})


@dataclass(frozen=True, slots=True)
class Diagnostic:
    code: str
    message: str
    line: int = 0

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line else ""
        return f"{where}[{self.code}] {self.message}"


def _direct_var_args(atom) -> set[str]:
    """Variables an atom binds: its direct variable arguments only."""
    bound: set[str] = set()
    if isinstance(atom, ParamMembership):
        bound.add(atom.var)
        if isinstance(atom.index, VarTerm):
            bound.add(atom.index.name)
    elif isinstance(atom, CreationRef):
        bound.add(atom.var)
        for t in atom.terms:
            if isinstance(t, VarTerm):
                bound.add(t.name)
    elif isinstance(atom, OrdinaryAtom):
        for t in atom.terms:
            if isinstance(t, VarTerm):
                bound.add(t.name)
    return bound


def _vars_in(node) -> set[str]:
    out: set[str] = set()
    for t in walk_terms(node):
        if isinstance(t, VarTerm):
            out.add(t.name)
        elif isinstance(t, MethodValueTerm):
            out.add(t.var)
    if isinstance(node, (ParamMembership, CreationRef)):
        out.add(node.var)
    elif isinstance(node, ExeAtom):
        out.add(node.target)
    elif isinstance(node, ReturnAtom):
        out.add(node.target)
    return out


def _method_value_terms(node) -> list[MethodValueTerm]:
    return [t for t in walk_terms(node) if isinstance(t, MethodValueTerm)]


def _elements_of(rule: Rule) -> list[CardElement]:
    elements = []
    if isinstance(rule.head, ChoiceHead):
        elements.append(rule.head.element)
    for lit in rule.body:
        if isinstance(lit, (CardinalityLiteral, CountAssignment)):
            elements.append(lit.element)
    return elements


def _head_level_vars(rule: Rule) -> set[str]:
    """Head variables occurring outside of any cardinality element."""
    out: set[str] = set()
    head = rule.head
    if isinstance(head, ChoiceHead):
        for bound in (head.lower, head.upper):
            if bound is not None:
                out |= _vars_in_term(bound)
    elif head is not None:
        out |= _vars_in(head)
    return out


def _body_level_vars(rule: Rule) -> set[str]:
    """Body variables occurring outside of any cardinality element."""
    out: set[str] = set()
    for lit in rule.body:
        if isinstance(lit, CardinalityLiteral):
            for bound in (lit.lower, lit.upper):
                if bound is not None:
                    out |= _vars_in_term(bound)
        elif isinstance(lit, CountAssignment):
            out.add(lit.var)
        elif isinstance(lit, Naf):
            out |= _vars_in(lit.atom)
        else:
            out |= _vars_in(lit)
    return out


def _vars_in_term(term) -> set[str]:
    out: set[str] = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, VarTerm):
            out.add(t.name)
        elif isinstance(t, MethodValueTerm):
            out.add(t.var)
        elif hasattr(t, "left"):
            stack.extend((t.left, t.right))
    return out


def validate(spec: SpecProgram) -> list[Diagnostic]:
    """Return all well-formedness diagnostics; empty means the spec is safe."""
    diags: list[Diagnostic] = []

    def check_reserved(atom, line: int):
        if isinstance(atom, OrdinaryAtom) and atom.pred in RESERVED_PREDICATES:
            diags.append(Diagnostic("reserved-predicate",
                                    f"predicate {atom.pred!r} is reserved", line))

    for idx, rule in enumerate(spec.rules):
        line = rule.line
        body = rule.body
        head_vars = _head_level_vars(rule)
        body_vars = _body_level_vars(rule)
        rule_vars = head_vars | body_vars

        # Rule-scoped positive binders.
        binders: set[str] = set()
        pm_bound: set[str] = set()
        ref_or_pm_bound: set[str] = set()
        for lit in body:
            if isinstance(lit, (ParamMembership, CreationRef, OrdinaryAtom)):
                b = _direct_var_args(lit)
                binders |= b
                if isinstance(lit, ParamMembership):
                    pm_bound.add(lit.var)
                    ref_or_pm_bound.add(lit.var)
                elif isinstance(lit, CreationRef):
                    ref_or_pm_bound.add(lit.var)
            elif isinstance(lit, CountAssignment):
                binders.add(lit.var)

        for v in sorted(rule_vars - binders):
            code = "unsafe-variable" if v in body_vars else "unbound-variable"
            diags.append(Diagnostic(code, f"variable {v}? has no positive binder", line))

        # Element-scoped variables.
        for element in _elements_of(rule):
            elem_vars = _vars_in(element.template)
            for cond in element.conditions:
                elem_vars |= _vars_in(cond)
            local = elem_vars - rule_vars
            elem_binders: set[str] = set()
            elem_pm: set[str] = set()
            for cond in element.conditions:
                if isinstance(cond, (ParamMembership, CreationRef, OrdinaryAtom)):
                    elem_binders |= _direct_var_args(cond)
                    if isinstance(cond, ParamMembership):
                        elem_pm.add(cond.var)
            for v in sorted(local - elem_binders):
                diags.append(Diagnostic(
                    "unsafe-variable",
                    f"variable {v}? is local to a cardinality element but has no "
                    "positive condition binding it", line))
            # Method values on element-local variables need a membership
            # condition inside the element itself.
            for node in (element.template, *element.conditions):
                for mv in _method_value_terms(node):
                    if mv.var in local and mv.var not in elem_pm:
                        diags.append(Diagnostic(
                            "method-value-base",
                            f"{mv.var}?.{mv.method}() requires {mv.var}? to be bound "
                            "by parameter membership", line))

        # Method values at rule level must sit on parameter-array objects:
        # values for created objects are not available before solving.
        rule_nodes: list = []
        if rule.head is not None:
            rule_nodes.append(rule.head)
        rule_nodes.extend(l.atom if isinstance(l, Naf) else l for l in body)
        for node in rule_nodes:
            for mv in _method_value_terms(node):
                if mv.var in rule_vars and mv.var not in pm_bound:
                    diags.append(Diagnostic(
                        "method-value-base",
                        f"{mv.var}?.{mv.method}() requires {mv.var}? to be bound "
                        "by parameter membership", line))

        # Head-form specific checks.
        head = rule.head
        if isinstance(head, ReturnAtom) and head.target not in ref_or_pm_bound:
            diags.append(Diagnostic(
                "unbound-variable",
                f"return target {head.target}? must be bound by a creation "
                "reference or parameter membership", line))
        if isinstance(head, ExeAtom) and head.target not in ref_or_pm_bound:
            diags.append(Diagnostic(
                "unbound-variable",
                f"invocation target {head.target}? must be bound by a creation "
                "reference or parameter membership", line))
        if isinstance(head, NewAtom):
            if _method_value_terms(head):
                diags.append(Diagnostic(
                    "nested-call",
                    "method-value terms cannot appear in constructor arguments", line))
            for v in sorted(_vars_in(head)):
                if v not in pm_bound:
                    diags.append(Diagnostic(
                        "creation-domain",
                        f"constructor argument {v}? must be bound by parameter "
                        "membership", line))
            if any(isinstance(l, CreationRef) for l in body):
                diags.append(Diagnostic(
                    "creation-domain",
                    "a constructor rule cannot depend on another created object", line))

        # Reserved predicate names anywhere in the rule.
        for lit in body:
            target = lit.atom if isinstance(lit, Naf) else lit
            check_reserved(target, line)
            if isinstance(target, (CardinalityLiteral, CountAssignment)):
                check_reserved(target.element.template, line)
                for cond in target.element.conditions:
                    check_reserved(cond, line)
        if isinstance(head, OrdinaryAtom):
            check_reserved(head, line)
        elif isinstance(head, ChoiceHead):
            check_reserved(head.element.template, line)
            for cond in head.element.conditions:
                check_reserved(cond, line)

    if spec.minimize is not None:
        check_reserved(spec.minimize.element.template, 0)
        for cond in spec.minimize.element.conditions:
            check_reserved(cond, 0)
            if isinstance(cond, (OrdinaryAtom, CreationRef)):
                diags.append(Diagnostic(
                    "minimize-condition",
                    "minimize conditions must be parameter memberships or "
                    "comparisons", 0))

    return diags
