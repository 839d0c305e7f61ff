"""Instantiation of validated specs over finite object domains.

Grounding proceeds in three passes:

1. the created-object domain: every constructor-head instance reachable
   over parameter-object bindings (constructor arguments never depend on
   other created objects, so one pass over membership facts suffices);
2. a fixpoint of "possible" ordinary atoms, overapproximating everything
   any rule could derive (negation and cardinalities assumed satisfiable);
3. rule instantiation proper, where comparisons and arithmetic are
   evaluated away, membership literals are resolved against the facts,
   creation references are replaced by the guarding constructor atoms, and
   cardinality elements expand to sets of possible instances.

Choice heads are grounded per substitution of their condition-bound
variables: the conditions are hoisted into the rule body, so a bounded
choice reads "for each binding, choose within the bounds". Cardinality
literals in rule bodies keep their element-local variables and expand
into a single counted set, which is what bounds over totals (cable
budgets, per-object degrees) require.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast_nodes import (
    AnonTerm, ArithTerm, CardElement, CardinalityLiteral, ChoiceHead, Comparison,
    CountAssignment, CreationRef, ExeAtom, IntTerm, MethodValueTerm, Naf, NewAtom,
    OrdinaryAtom, ParamMembership, ReturnAtom, Rule, ScalarRefTerm, SpecProgram,
    SymbolTerm, VarTerm,
)
from .binding import CreatedObj, FactBase, ObjectId, ObjectUniverse, ParamObj, value_key, value_str
from .errors import GroundingError
from .validate import validate, _direct_var_args, _vars_in


# ---------------------------------------------------------------------------
# Ground atoms
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class GOrdinary:
    pred: str
    args: tuple

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({', '.join(value_str(a) for a in self.args)})"


@dataclass(frozen=True, slots=True)
class GParamMember:
    param: str
    index: int
    obj: ObjectId

    def __str__(self) -> str:
        return f"param_member({self.param}, {self.index}, {self.obj})"


@dataclass(frozen=True, slots=True)
class GNew:
    cls: str
    args: tuple

    def __str__(self) -> str:
        return f"new {self.cls}({', '.join(value_str(a) for a in self.args)})"

    @property
    def obj(self) -> CreatedObj:
        return CreatedObj(self.cls, self.args)


@dataclass(frozen=True, slots=True)
class GExe:
    stage: int
    target: ObjectId
    method: str
    args: tuple

    def __str__(self) -> str:
        args = ", ".join(value_str(a) for a in self.args)
        return f"exe[{self.stage}] {self.target}.{self.method}({args})"


@dataclass(frozen=True, slots=True)
class GReturn:
    target: ObjectId

    def __str__(self) -> str:
        return f"return {self.target}"


GroundAtom = GOrdinary | GParamMember | GNew | GExe | GReturn


def atom_sort_key(atom: GroundAtom):
    if isinstance(atom, GOrdinary):
        return (0, atom.pred, tuple(value_key(a) for a in atom.args))
    if isinstance(atom, GParamMember):
        return (1, atom.param, (value_key(atom.index), value_key(atom.obj)))
    if isinstance(atom, GNew):
        return (2, atom.cls, tuple(value_key(a) for a in atom.args))
    if isinstance(atom, GExe):
        return (3, atom.method, (atom.stage, value_key(atom.target),
                                 *(value_key(a) for a in atom.args)))
    return (4, "", (value_key(atom.target),))


# ---------------------------------------------------------------------------
# Ground rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class GroundCardinality:
    """Counted set with smodels-style bounds; groups are conjunctions that
    each contribute one to the count when all members hold."""

    lower: int
    upper: int | None
    groups: tuple[tuple[int, ...], ...]


@dataclass(frozen=True, slots=True)
class GroundChoice:
    lower: int | None
    upper: int | None
    lits: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class GroundRule:
    head: int | GroundChoice | None
    body_pos: tuple[int, ...] = ()
    body_neg: tuple[int, ...] = ()
    cards: tuple[GroundCardinality, ...] = ()
    src: int = field(default=-1, compare=False)

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def is_fact(self) -> bool:
        return (self.head is not None and not isinstance(self.head, GroundChoice)
                and not self.body_pos and not self.body_neg and not self.cards)


class GroundProgram:
    """Variable-free rules over densely indexed ground atoms."""

    def __init__(self, rules: list[GroundRule], minimize_ids: frozenset[int],
                 atoms: list[GroundAtom]):
        self.rules = rules
        self.minimize_ids = minimize_ids
        self.atoms = atoms
        self.atom_id = {a: i for i, a in enumerate(atoms)}

    @property
    def atom_count(self) -> int:
        return len(self.atoms)

    def atom_str(self, atom_id: int) -> str:
        return str(self.atoms[atom_id])

    def _card_str(self, card: GroundCardinality) -> str:
        groups = ", ".join(
            " : ".join(self.atom_str(a) for a in g) for g in card.groups)
        up = f" {card.upper}" if card.upper is not None else ""
        return f"{card.lower} {{{groups}}}{up}"

    def rule_str(self, rule: GroundRule) -> str:
        parts = []
        parts.extend(self.atom_str(a) for a in rule.body_pos)
        parts.extend(f"not {self.atom_str(a)}" for a in rule.body_neg)
        parts.extend(self._card_str(c) for c in rule.cards)
        body = ", ".join(parts)
        if isinstance(rule.head, GroundChoice):
            lits = ", ".join(self.atom_str(a) for a in rule.head.lits)
            lo = f"{rule.head.lower} " if rule.head.lower is not None else ""
            up = f" {rule.head.upper}" if rule.head.upper is not None else ""
            head = f"{lo}{{{lits}}}{up}"
        elif rule.head is not None:
            head = self.atom_str(rule.head)
        else:
            head = None
        if head is None:
            return f":- {body}."
        if not body:
            return f"{head}."
        return f"{head} :- {body}."

    def to_text(self) -> str:
        lines = [self.rule_str(r) for r in self.rules]
        if self.minimize_ids:
            atoms = ", ".join(self.atom_str(a) for a in sorted(self.minimize_ids))
            lines.append(f"#minimize{{{atoms}}}.")
        return "\n".join(lines) + ("\n" if lines else "")


class ProgramBuilder:
    """Direct construction of ground programs (tests, toy inputs)."""

    def __init__(self):
        self._atoms: list[GroundAtom] = []
        self._ids: dict[GroundAtom, int] = {}
        self._rules: list[GroundRule] = []
        self._minimize: set[int] = set()

    def atom(self, name_or_atom) -> int:
        a = GOrdinary(name_or_atom, ()) if isinstance(name_or_atom, str) else name_or_atom
        if a not in self._ids:
            self._ids[a] = len(self._atoms)
            self._atoms.append(a)
        return self._ids[a]

    def fact(self, head) -> None:
        self._rules.append(GroundRule(head=self.atom(head)))

    def rule(self, head, pos=(), neg=(), cards=()) -> None:
        self._rules.append(GroundRule(
            head=self.atom(head),
            body_pos=tuple(self.atom(a) for a in pos),
            body_neg=tuple(self.atom(a) for a in neg),
            cards=tuple(self._card(c) for c in cards)))

    def constraint(self, pos=(), neg=(), cards=()) -> None:
        self._rules.append(GroundRule(
            head=None,
            body_pos=tuple(self.atom(a) for a in pos),
            body_neg=tuple(self.atom(a) for a in neg),
            cards=tuple(self._card(c) for c in cards)))

    def choice(self, lits, lower=None, upper=None, pos=(), neg=(), cards=()) -> None:
        self._rules.append(GroundRule(
            head=GroundChoice(lower, upper, tuple(self.atom(a) for a in lits)),
            body_pos=tuple(self.atom(a) for a in pos),
            body_neg=tuple(self.atom(a) for a in neg),
            cards=tuple(self._card(c) for c in cards)))

    def _card(self, spec_tuple) -> GroundCardinality:
        lower, upper, lits = spec_tuple
        groups = tuple(
            tuple(self.atom(a) for a in g) if isinstance(g, (tuple, list)) else (self.atom(g),)
            for g in lits)
        return GroundCardinality(lower, upper, groups)

    def minimize(self, atoms) -> None:
        self._minimize.update(self.atom(a) for a in atoms)

    def build(self) -> GroundProgram:
        return GroundProgram(list(self._rules), frozenset(self._minimize),
                             list(self._atoms))


# ---------------------------------------------------------------------------
# The grounder
# ---------------------------------------------------------------------------

_UNSET = object()


class _Grounder:
    def __init__(self, spec: SpecProgram, facts: FactBase, universe: ObjectUniverse,
                 atom_cap: int):
        self.spec = spec
        self.universe = universe
        self.atom_cap = atom_cap
        self.scalars = dict(facts.scalars)
        self.members: dict[str, list[tuple[int, ParamObj]]] = {}
        for pname, idx, obj in facts.param_member_facts:
            self.members.setdefault(pname, []).append((idx, obj))
        for pname in spec.array_params:
            self.members.setdefault(pname, [])
        self.method_vals = {(o, m): v for o, m, v in facts.method_val_facts}
        self.created: dict[CreatedObj, None] = {}
        self.possible: dict[str, dict[tuple, None]] = {}
        self.atoms: list[GroundAtom] = []
        self.atom_ids: dict[GroundAtom, int] = {}
        self.rules: list[GroundRule] = []
        self.minimize_ids: set[int] = set()

    # -- term evaluation ----------------------------------------------------

    def fold(self, term, env):
        """Evaluate a term under env; returns _UNSET while variables are free."""
        if isinstance(term, IntTerm):
            return term.value
        if isinstance(term, SymbolTerm):
            return term.name
        if isinstance(term, ScalarRefTerm):
            return self.scalars[term.name]
        if isinstance(term, VarTerm):
            return env.get(term.name, _UNSET)
        if isinstance(term, MethodValueTerm):
            obj = env.get(term.var, _UNSET)
            if obj is _UNSET:
                return _UNSET
            try:
                return self.method_vals[(obj, term.method)]
            except KeyError:
                raise GroundingError(
                    f"no precomputed value for {obj}.{term.method}(); "
                    "method-value table is incomplete") from None
        if isinstance(term, ArithTerm):
            left = self.fold(term.left, env)
            right = self.fold(term.right, env)
            if left is _UNSET or right is _UNSET:
                return _UNSET
            if not isinstance(left, int) or not isinstance(right, int):
                raise GroundingError(f"arithmetic over non-integers: {term}")
            return left + right if term.op == "+" else left - right
        raise GroundingError(f"cannot evaluate term {term!r}")

    def _foldable(self, term, env) -> bool:
        return self.fold(term, env) is not _UNSET

    def _compare(self, op: str, a, b) -> bool:
        if op == "==":
            return a == b
        if op == "!=":
            return a != b
        ka, kb = value_key(a), value_key(b)
        if op == "<":
            return ka < kb
        if op == ">":
            return ka > kb
        if op == "<=":
            return ka <= kb
        return ka >= kb

    # -- joins ---------------------------------------------------------------

    def _match_term(self, term, value, env):
        """Unify one pattern term with a value; None means mismatch."""
        if isinstance(term, AnonTerm):
            return env
        if isinstance(term, VarTerm):
            bound = env.get(term.name, _UNSET)
            if bound is _UNSET:
                env = dict(env)
                env[term.name] = value
                return env
            return env if bound == value else None
        folded = self.fold(term, env)
        if folded is _UNSET:
            raise GroundingError(f"term {term} not ground at match time")
        return env if folded == value else None

    def _match_tuple(self, terms, values, env):
        if len(terms) != len(values):
            return None
        for t, v in zip(terms, values):
            env = self._match_term(t, v, env)
            if env is None:
                return None
        return env

    def _item_ready(self, item, env) -> bool:
        if isinstance(item, ParamMembership):
            idx = item.index
            return isinstance(idx, (VarTerm, AnonTerm)) or self._foldable(idx, env)
        if isinstance(item, (CreationRef, OrdinaryAtom)):
            return all(isinstance(t, (VarTerm, AnonTerm)) or self._foldable(t, env)
                       for t in item.terms)
        if isinstance(item, Comparison):
            return self._foldable(item.lhs, env) and self._foldable(item.rhs, env)
        if isinstance(item, CountAssignment):
            needed = self._element_free_vars(item.element)
            return needed <= env.keys()
        raise GroundingError(f"unexpected join item {item!r}")

    def _element_free_vars(self, element: CardElement) -> set[str]:
        """Element variables that must come from the enclosing rule."""
        bound: set[str] = set()
        for cond in element.conditions:
            if isinstance(cond, (ParamMembership, CreationRef, OrdinaryAtom)):
                bound |= _direct_var_args(cond)
        all_vars = _vars_in(element.template)
        for cond in element.conditions:
            all_vars |= _vars_in(cond)
        return all_vars - bound

    def _iter_item(self, item, env):
        """Yield extended environments for one positive join item."""
        if isinstance(item, ParamMembership):
            obj_bound = env.get(item.var, _UNSET)
            for idx, obj in self.members.get(item.param, ()):
                if obj_bound is not _UNSET and obj_bound != obj:
                    continue
                env2 = self._match_term(item.index, idx, env)
                if env2 is None:
                    continue
                if obj_bound is _UNSET:
                    env2 = dict(env2)
                    env2[item.var] = obj
                yield env2
        elif isinstance(item, CreationRef):
            obj_bound = env.get(item.var, _UNSET)
            for created in list(self.created):
                if created.cls != item.cls:
                    continue
                if obj_bound is not _UNSET and obj_bound != created:
                    continue
                env2 = self._match_tuple(item.terms, created.args, env)
                if env2 is None:
                    continue
                if obj_bound is _UNSET:
                    env2 = dict(env2)
                    env2[item.var] = created
                yield env2
        elif isinstance(item, OrdinaryAtom):
            # Snapshot: the possible-atom fixpoint mutates these dicts
            # while joins are being consumed.
            for args in list(self.possible.get(item.pred, ())):
                env2 = self._match_tuple(item.terms, args, env)
                if env2 is not None:
                    yield env2
        elif isinstance(item, CountAssignment):
            groups = self.expand_element(item.element, env)
            for k in range(len(groups) + 1):
                env2 = self._match_term(VarTerm(item.var), k, env)
                if env2 is not None:
                    yield env2
        else:
            raise GroundingError(f"unexpected join item {item!r}")

    def join(self, items: list, env: dict):
        """Enumerate all environments satisfying the positive join items."""
        if not items:
            yield env
            return
        for i, item in enumerate(items):
            if not self._item_ready(item, env):
                continue
            rest = items[:i] + items[i + 1:]
            if isinstance(item, Comparison):
                if self._compare(item.op, self.fold(item.lhs, env),
                                 self.fold(item.rhs, env)):
                    yield from self.join(rest, env)
                return
            for env2 in self._iter_item(item, env):
                yield from self.join(rest, env2)
            return
        raise GroundingError("stuck join: unresolved variables in "
                             + ", ".join(str(i) for i in items))

    # -- atom interning -------------------------------------------------------

    def intern(self, atom: GroundAtom) -> int:
        aid = self.atom_ids.get(atom)
        if aid is None:
            aid = len(self.atoms)
            if aid >= self.atom_cap:
                raise GroundingError(f"ground atom count exceeds cap ({self.atom_cap})")
            self.atom_ids[atom] = aid
            self.atoms.append(atom)
        return aid

    def _add_possible(self, atom: GOrdinary) -> bool:
        args = self.possible.setdefault(atom.pred, {})
        key = atom.args
        if key in args:
            return False
        if sum(len(v) for v in self.possible.values()) >= self.atom_cap:
            raise GroundingError(f"possible-atom fixpoint exceeds cap ({self.atom_cap})")
        args[key] = None
        return True

    def _is_possible(self, atom: GOrdinary) -> bool:
        return atom.args in self.possible.get(atom.pred, ())

    # -- element expansion ----------------------------------------------------

    def expand_element(self, element: CardElement, env: dict):
        """Instances of a cardinality element under env.

        Returns a deduplicated, deterministically ordered list of groups;
        each group is a tuple of ground atoms that must all hold for the
        instance to count.
        """
        binder_items = []
        filters = []
        residual_templates = []
        for cond in element.conditions:
            if isinstance(cond, ParamMembership):
                binder_items.append(cond)
            elif isinstance(cond, Comparison):
                binder_items.append(cond)
            elif isinstance(cond, OrdinaryAtom):
                binder_items.append(cond)
                residual_templates.append(cond)
            elif isinstance(cond, CreationRef):
                binder_items.append(cond)
                residual_templates.append(cond)
        groups: dict[tuple, None] = {}
        for env2 in self.join(binder_items, env):
            inst = self._ground_ordinary(element.template, env2)
            if not self._is_possible(inst):
                continue
            group = [inst]
            dead = False
            for cond in residual_templates:
                if isinstance(cond, OrdinaryAtom):
                    group.append(self._ground_ordinary(cond, env2))
                else:
                    ginst = self._ground_creation(cond, env2)
                    if ginst is None or ginst.obj not in self.created:
                        dead = True
                        break
                    group.append(ginst)
            if dead:
                continue
            seen: dict[GroundAtom, None] = {}
            for a in group:
                seen.setdefault(a, None)
            groups[tuple(seen)] = None
        ordered = sorted(groups, key=lambda g: tuple(atom_sort_key(a) for a in g))
        return ordered

    def _ground_ordinary(self, atom: OrdinaryAtom, env) -> GOrdinary:
        args = tuple(self.fold(t, env) for t in atom.terms)
        if any(a is _UNSET for a in args):
            raise GroundingError(f"atom {atom} not fully bound during grounding")
        return GOrdinary(atom.pred, args)

    def _ground_creation(self, ref: CreationRef, env) -> GNew | None:
        """Ground instance of a creation reference, or None on a definite
        pattern mismatch (the atom is then simply false)."""
        obj = env.get(ref.var, _UNSET)
        if obj is not _UNSET:
            if (not isinstance(obj, CreatedObj) or obj.cls != ref.cls
                    or self._match_tuple(ref.terms, obj.args, env) is None):
                return None
            return GNew(obj.cls, obj.args)
        args = tuple(self.fold(t, env) for t in ref.terms)
        if any(a is _UNSET for a in args):
            raise GroundingError(f"creation reference {ref} not fully bound")
        return GNew(ref.cls, args)

    # -- phases ----------------------------------------------------------------

    def compute_created_domain(self) -> None:
        for rule in self.spec.rules:
            if not isinstance(rule.head, NewAtom):
                continue
            memberships = [l for l in rule.body if isinstance(l, ParamMembership)]
            comparisons = [l for l in rule.body if isinstance(l, Comparison)]
            for env in self.join(list(memberships), {}):
                ok = True
                for comp in comparisons:
                    if self._item_ready(comp, env) and not self._compare(
                            comp.op, self.fold(comp.lhs, env), self.fold(comp.rhs, env)):
                        ok = False
                        break
                if not ok:
                    continue
                args = tuple(self.fold(t, env) for t in rule.head.terms)
                if any(a is _UNSET for a in args):
                    raise GroundingError(
                        f"constructor head {rule.head} not fully bound")
                self.created.setdefault(CreatedObj(rule.head.cls, args), None)

    def _binder_items(self, rule: Rule) -> list:
        items = []
        for lit in rule.body:
            if isinstance(lit, (ParamMembership, CreationRef, OrdinaryAtom,
                                Comparison, CountAssignment)):
                items.append(lit)
        if isinstance(rule.head, ChoiceHead):
            items.extend(rule.head.element.conditions)
        return items

    def compute_possible(self) -> None:
        changed = True
        while changed:
            changed = False
            for rule in self.spec.rules:
                head = rule.head
                if isinstance(head, OrdinaryAtom):
                    for env in self.join(self._binder_items(rule), {}):
                        if self._add_possible(self._ground_ordinary(head, env)):
                            changed = True
                elif isinstance(head, ChoiceHead):
                    for env in self.join(self._binder_items(rule), {}):
                        inst = self._ground_ordinary(head.element.template, env)
                        if self._add_possible(inst):
                            changed = True

    def emit_facts(self) -> None:
        for pname in self.spec.array_params:
            for idx, obj in self.members.get(pname, ()):
                self.rules.append(GroundRule(head=self.intern(
                    GParamMember(pname, idx, obj))))

    def _fold_bound(self, term, env, default):
        if term is None:
            return default
        value = self.fold(term, env)
        if value is _UNSET or not isinstance(value, int):
            raise GroundingError(f"cardinality bound {term} is not an integer")
        return value

    def emit_rules(self) -> None:
        for src, rule in enumerate(self.spec.rules):
            seen: set = set()
            for env in self.join(self._binder_items(rule), {}):
                ground = self._instantiate(rule, env, src)
                if ground is None:
                    continue
                key = (ground.head, ground.body_pos, ground.body_neg, ground.cards)
                if key not in seen:
                    seen.add(key)
                    self.rules.append(ground)

    def _instantiate(self, rule: Rule, env: dict, src: int) -> GroundRule | None:
        body_pos: dict[int, None] = {}
        body_neg: dict[int, None] = {}
        cards: list[GroundCardinality] = []

        def card_from(lower_t, element, upper_t, exact=None):
            groups = [tuple(self.intern(a) for a in g)
                      for g in self.expand_element(element, env)]
            groups = sorted({tuple(sorted(set(g))) for g in groups})
            if exact is not None:
                lo = up = exact
            else:
                lo = max(0, self._fold_bound(lower_t, env, 0))
                up = self._fold_bound(upper_t, env, None)
            if up is not None and (lo > up or up < 0):
                return False
            if lo > len(groups):
                return False
            if lo <= 0 and up is None:
                return True  # trivially satisfied
            cards.append(GroundCardinality(lo, up, tuple(groups)))
            return True

        for lit in rule.body:
            if isinstance(lit, (ParamMembership, Comparison)):
                continue  # resolved by the join
            if isinstance(lit, OrdinaryAtom):
                body_pos[self.intern(self._ground_ordinary(lit, env))] = None
            elif isinstance(lit, CreationRef):
                inst = self._ground_creation(lit, env)
                if inst is None or inst.obj not in self.created:
                    return None
                body_pos[self.intern(inst)] = None
            elif isinstance(lit, Naf):
                atom = lit.atom
                if isinstance(atom, OrdinaryAtom):
                    inst = self._ground_ordinary(atom, env)
                    if self._is_possible(inst):
                        body_neg[self.intern(inst)] = None
                elif isinstance(atom, ParamMembership):
                    if self._membership_holds(atom, env):
                        return None
                else:
                    inst = self._ground_creation(atom, env)
                    if inst is not None and inst.obj in self.created:
                        body_neg[self.intern(inst)] = None
            elif isinstance(lit, CardinalityLiteral):
                if not card_from(lit.lower, lit.element, lit.upper):
                    return None
            elif isinstance(lit, CountAssignment):
                k = env[lit.var]
                if not card_from(None, lit.element, None, exact=k):
                    return None

        head = rule.head
        if head is None:
            ghead = None
        elif isinstance(head, OrdinaryAtom):
            ghead = self.intern(self._ground_ordinary(head, env))
        elif isinstance(head, NewAtom):
            args = tuple(self.fold(t, env) for t in head.terms)
            ghead = self.intern(GNew(head.cls, args))
        elif isinstance(head, ExeAtom):
            target = env.get(head.target)
            if not isinstance(target, (ParamObj, CreatedObj)):
                raise GroundingError(f"invocation target {head.target}? is not an object")
            args = tuple(self.fold(t, env) for t in head.terms)
            ghead = self.intern(GExe(head.stage, target, head.method, args))
        elif isinstance(head, ReturnAtom):
            target = env.get(head.target)
            if not isinstance(target, (ParamObj, CreatedObj)):
                raise GroundingError(f"return target {head.target}? is not an object")
            ghead = self.intern(GReturn(target))
        else:  # ChoiceHead: conditions were hoisted into the join
            for cond in head.element.conditions:
                if isinstance(cond, OrdinaryAtom):
                    body_pos[self.intern(self._ground_ordinary(cond, env))] = None
                elif isinstance(cond, CreationRef):
                    inst = self._ground_creation(cond, env)
                    if inst is None or inst.obj not in self.created:
                        return None
                    body_pos[self.intern(inst)] = None
            lit = self.intern(self._ground_ordinary(head.element.template, env))
            lo = None if head.lower is None else self._fold_bound(head.lower, env, 0)
            up = None if head.upper is None else self._fold_bound(head.upper, env, None)
            ghead = GroundChoice(lo, up, (lit,))

        if set(body_pos) & set(body_neg):
            return None  # contradictory body can never fire
        return GroundRule(head=ghead, body_pos=tuple(sorted(body_pos)),
                          body_neg=tuple(sorted(body_neg)), cards=tuple(cards),
                          src=src)

    def _membership_holds(self, atom: ParamMembership, env) -> bool:
        obj = env.get(atom.var, _UNSET)
        if obj is _UNSET:
            raise GroundingError(f"negated membership over unbound {atom.var}?")
        for idx, member in self.members.get(atom.param, ()):
            if member != obj:
                continue
            if isinstance(atom.index, AnonTerm):
                return True
            env2 = self._match_term(atom.index, idx, env)
            if env2 is not None:
                return True
        return False

    def emit_minimize(self) -> None:
        stmt = self.spec.minimize
        if stmt is None:
            return
        element = stmt.element
        items: list = [element.template]
        items.extend(element.conditions)
        for env in self.join(items, {}):
            inst = self._ground_ordinary(element.template, env)
            if self._is_possible(inst):
                self.minimize_ids.add(self.intern(inst))

    def run(self) -> GroundProgram:
        self.compute_created_domain()
        self.compute_possible()
        self.emit_facts()
        self.emit_rules()
        self.emit_minimize()
        return GroundProgram(self.rules, frozenset(self.minimize_ids), self.atoms)


def ground(spec: SpecProgram, facts: FactBase, universe: ObjectUniverse,
           atom_cap: int = 200_000) -> GroundProgram:
    """Ground a validated spec over bound parameters into a finite program."""
    diagnostics = validate(spec)
    if diagnostics:
        from .errors import SpecValidationError

        raise SpecValidationError(diagnostics)
    return _Grounder(spec, facts, universe, atom_cap).run()
