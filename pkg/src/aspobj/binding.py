"""Binding runtime parameter values to a specification.

Array elements receive stable identifiers ``p0, p1, ...`` in
first-parameter-then-index order; objects built by constructor rules get
functional identifiers ``new(Class, args)``. Together they carry a strict
total order (parameter objects first, then created objects by class name
and argument tuple) which is what the spec-language ``<`` compares.

Integer values every referenced accessor returns are computed eagerly at
bind time, so grounding and solving never call back into host code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .ast_nodes import MethodValueTerm, SpecProgram, walk_terms, CreationRef, Naf, NewAtom
from .errors import BindError


@dataclass(frozen=True, slots=True)
class ParamObj:
    """Identifier of an object supplied in a parameter array."""

    seq: int

    def __str__(self) -> str:
        return f"p{self.seq}"


@dataclass(frozen=True, slots=True)
class CreatedObj:
    """Functional identifier of a constructed object: new(Class, args)."""

    cls: str
    args: tuple

    def __str__(self) -> str:
        inner = ",".join(value_str(a) for a in self.args)
        return f"new({self.cls}{',' if inner else ''}{inner})"


ObjectId = ParamObj | CreatedObj
#: Engine values: integers, object identifiers, and symbolic constants.
Value = int | ObjectId | str


def value_str(v) -> str:
    return str(v)


def value_key(v):
    """Total order over values: integers, then objects, then symbols."""
    if isinstance(v, int):
        return (0, 0, v, "", ())
    if isinstance(v, ParamObj):
        return (1, 0, v.seq, "", ())
    if isinstance(v, CreatedObj):
        return (1, 1, 0, v.cls, tuple(value_key(a) for a in v.args))
    return (2, 0, 0, v, ())


@dataclass
class ClassRegistry:
    """Host-side invokers standing in for runtime reflection.

    ``constructors`` build a fresh host object from resolved argument
    values; ``methods`` perform an invocation on a host object; and
    ``accessors`` are pure getters used to precompute method-value tables.
    """

    constructors: dict[str, Callable[..., Any]] = field(default_factory=dict)
    methods: dict[tuple[str, str], Callable[..., Any]] = field(default_factory=dict)
    accessors: dict[tuple[str, str], Callable[[Any], int]] = field(default_factory=dict)

    @classmethod
    def from_classes(cls, classes: dict[str, type],
                     accessor_methods: dict[str, tuple[str, ...]] | None = None,
                     invocable_methods: dict[str, tuple[str, ...]] | None = None):
        """Wire a registry from plain Python classes via attribute lookup."""
        reg = cls()
        for name, pycls in classes.items():
            reg.constructors[name] = pycls
        for name, methods in (accessor_methods or {}).items():
            for m in methods:
                reg.accessors[(name, m)] = _getter(m)
        for name, methods in (invocable_methods or {}).items():
            for m in methods:
                reg.methods[(name, m)] = _invoker(m)
        return reg


def _getter(method: str):
    return lambda host: getattr(host, method)()


def _invoker(method: str):
    return lambda host, *args: getattr(host, method)(*args)


@dataclass
class ObjectUniverse:
    """Parameter values bound to a spec, with order and method tables."""

    param_objects: dict[str, list[ParamObj]]
    scalar_params: dict[str, int]
    method_table: dict[tuple[ParamObj, str], int]
    order_index: dict[ParamObj, int]
    hosts: dict[ParamObj, Any]
    param_class: dict[str, str]

    @property
    def object_count(self) -> int:
        return len(self.order_index)

    def class_of(self, obj: ObjectId) -> str:
        if isinstance(obj, CreatedObj):
            return obj.cls
        return self._class_by_obj[obj]

    def __post_init__(self):
        self._class_by_obj = {}
        for pname, objs in self.param_objects.items():
            for o in objs:
                self._class_by_obj[o] = self.param_class[pname]


@dataclass
class FactBase:
    """Parameter facts plus the scalar substitution environment."""

    param_member_facts: tuple[tuple[str, int, ParamObj], ...]
    method_val_facts: tuple[tuple[ParamObj, str, int], ...]
    scalars: dict[str, int]

    def to_text(self) -> str:
        lines = [f"param_member({p}, {i}, {o})." for p, i, o in self.param_member_facts]
        lines += [f"method_val({o}, {m}, {v})." for o, m, v in self.method_val_facts]
        lines += [f"% scalar {name} = {value}" for name, value in sorted(self.scalars.items())]
        return "\n".join(lines) + ("\n" if lines else "")


def referenced_methods(spec: SpecProgram) -> list[str]:
    """Method names appearing as value terms anywhere in the spec."""
    seen: dict[str, None] = {}

    def scan(node):
        for t in walk_terms(node):
            if isinstance(t, MethodValueTerm):
                seen.setdefault(t.method, None)

    for rule in spec.rules:
        if rule.head is not None:
            scan(rule.head)
        for lit in rule.body:
            scan(lit)
    if spec.minimize is not None:
        scan(spec.minimize)
    return list(seen)


def referenced_classes(spec: SpecProgram) -> set[str]:
    """Class names appearing in constructor atoms or creation references."""
    classes: set[str] = set()
    for rule in spec.rules:
        if isinstance(rule.head, NewAtom):
            classes.add(rule.head.cls)
        for lit in rule.body:
            atom = lit.atom if isinstance(lit, Naf) else lit
            if isinstance(atom, CreationRef):
                classes.add(atom.cls)
    return classes


def bind_params(spec: SpecProgram, args: list, registry: ClassRegistry) -> ObjectUniverse:
    """Assign object identifiers to the arguments and precompute accessors.

    ``args`` is positional and must match ``spec.params``: an int for each
    scalar parameter, a sequence of host objects for each array parameter.
    """
    if len(args) != len(spec.params):
        raise BindError(f"{spec.name} expects {len(spec.params)} argument(s), "
                        f"got {len(args)}")
    for cls in sorted(referenced_classes(spec)):
        if cls not in registry.constructors:
            raise BindError(f"registry has no constructor for class {cls!r}")

    param_objects: dict[str, list[ParamObj]] = {}
    scalar_params: dict[str, int] = {}
    order_index: dict[ParamObj, int] = {}
    hosts: dict[ParamObj, Any] = {}
    param_class: dict[str, str] = {}
    seq = 0
    for decl, value in zip(spec.params, args):
        if decl.is_array:
            try:
                elements = list(value)
            except TypeError:
                raise BindError(f"parameter {decl.name!r} expects an array") from None
            ids = []
            for host in elements:
                obj = ParamObj(seq)
                order_index[obj] = seq
                hosts[obj] = host
                ids.append(obj)
                seq += 1
            param_objects[decl.name] = ids
            param_class[decl.name] = decl.cls
        else:
            if isinstance(value, bool) or not isinstance(value, int):
                raise BindError(f"parameter {decl.name!r} expects an int, "
                                f"got {type(value).__name__}")
            scalar_params[decl.name] = value

    method_table: dict[tuple[ParamObj, str], int] = {}
    methods = referenced_methods(spec)
    for decl in spec.params:
        if not decl.is_array:
            continue
        for obj in param_objects[decl.name]:
            for method in methods:
                accessor = registry.accessors.get((decl.cls, method))
                if accessor is None:
                    raise BindError(f"registry has no accessor for "
                                    f"{decl.cls}.{method}()")
                try:
                    result = accessor(hosts[obj])
                except Exception as exc:
                    raise BindError(f"accessor {decl.cls}.{method}() failed on "
                                    f"{obj}: {exc}") from exc
                if isinstance(result, bool) or not isinstance(result, int):
                    raise BindError(f"accessor {decl.cls}.{method}() returned "
                                    f"non-integer for {obj}")
                method_table[(obj, method)] = result

    return ObjectUniverse(param_objects=param_objects, scalar_params=scalar_params,
                          method_table=method_table, order_index=order_index,
                          hosts=hosts, param_class=param_class)


def encode_facts(universe: ObjectUniverse) -> FactBase:
    """Turn a bound universe into membership and method-value facts."""
    pm = []
    for pname, objs in universe.param_objects.items():
        for i, obj in enumerate(objs):
            pm.append((pname, i, obj))
    mv = [(obj, m, v) for (obj, m), v in universe.method_table.items()]
    mv.sort(key=lambda f: (f[0].seq, f[1]))
    return FactBase(param_member_facts=tuple(pm), method_val_facts=tuple(mv),
                    scalars=dict(universe.scalar_params))
