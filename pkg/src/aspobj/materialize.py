"""From answer sets to host objects.

Each stable model is distilled into a construction plan: the constructor
calls it asserts, the method invocations to perform on the materialized
objects, and the single object to hand back. Plans execute against a
class registry; creations always run before invocations, and invocations
are ordered by (stage, target, method, arguments).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .ast_nodes import SpecProgram
from .binding import (
    ClassRegistry, CreatedObj, ObjectId, ObjectUniverse, ParamObj, bind_params,
    encode_facts, value_key,
)
from .errors import ExecutionError, PlanError, RegistryError
from .grounding import GExe, GNew, GReturn, GroundProgram, ground
from .solver import AnswerSet, enumerate_models


@dataclass(frozen=True)
class ConstructionPlan:
    creations: tuple[tuple[CreatedObj, str, tuple], ...]
    invocations: tuple[tuple[int, ObjectId, str, tuple], ...]
    returns: ObjectId

    def creation_count(self) -> int:
        return len(self.creations)


@dataclass(frozen=True)
class Solution:
    plan: ConstructionPlan
    root: Any


def extract_plan(answer_set: AnswerSet, program: GroundProgram) -> ConstructionPlan:
    """Distill one answer set into an ordered construction plan."""
    creations = []
    invocations = []
    returns = []
    for aid in answer_set.atoms:
        atom = program.atoms[aid]
        if isinstance(atom, GNew):
            creations.append((atom.obj, atom.cls, atom.args))
        elif isinstance(atom, GExe):
            invocations.append((atom.stage, atom.target, atom.method, atom.args))
        elif isinstance(atom, GReturn):
            returns.append(atom.target)
    if not returns:
        raise PlanError("no return derived", answer_set)
    if len(returns) > 1:
        raise PlanError("ambiguous return", answer_set)
    creations.sort(key=lambda c: (c[1], tuple(value_key(a) for a in c[2])))
    invocations.sort(key=lambda i: (i[0], value_key(i[1]), i[2],
                                    tuple(value_key(a) for a in i[3])))
    return ConstructionPlan(tuple(creations), tuple(invocations), returns[0])


def execute_plan(plan: ConstructionPlan, registry: ClassRegistry,
                 universe: ObjectUniverse) -> Solution:
    """Run the plan's constructor calls and invocations against the host."""
    env: dict[ObjectId, Any] = dict(universe.hosts)

    def resolve(value):
        if isinstance(value, (ParamObj, CreatedObj)):
            try:
                return env[value]
            except KeyError:
                raise ExecutionError(f"no host object for {value}") from None
        return value

    position = 0
    for obj, cls, args in plan.creations:
        ctor = registry.constructors.get(cls)
        if ctor is None:
            raise RegistryError(f"no constructor registered for class {cls!r}")
        try:
            env[obj] = ctor(*[resolve(a) for a in args])
        except Exception as exc:
            raise ExecutionError(f"constructor {cls} failed at plan position "
                                 f"{position}: {exc}", position) from exc
        position += 1
    for stage, target, method, args in plan.invocations:
        cls = universe.class_of(target) if isinstance(target, ParamObj) else target.cls
        invoker = registry.methods.get((cls, method))
        if invoker is None:
            raise RegistryError(f"no method registered for {cls}.{method}")
        try:
            invoker(resolve(target), *[resolve(a) for a in args])
        except Exception as exc:
            raise ExecutionError(f"invocation {cls}.{method} failed at plan "
                                 f"position {position}: {exc}", position) from exc
        position += 1
    return Solution(plan, resolve(plan.returns))


def evaluate(spec: SpecProgram, args: list, count: int, registry: ClassRegistry,
             optimize: bool = False) -> list[Solution]:
    """Full pipeline: bind, encode, ground, enumerate, extract, execute.

    Returns up to ``count`` solutions (all for count 0); the empty list
    means no object satisfies the specification for these arguments.
    """
    universe = bind_params(spec, args, registry)
    facts = encode_facts(universe)
    program = ground(spec, facts, universe)
    models = enumerate_models(program, count=count, optimize=optimize)
    solutions = []
    for model in models:
        plan = extract_plan(model, program)
        solutions.append(execute_plan(plan, registry, universe))
    return solutions


def has_solution(result: list[Solution]) -> bool:
    return len(result) > 0


class ObjectSpec:
    """Convenience handle bundling a parsed spec with a registry.

    ``evaluate`` caches its solutions so ``has_solution`` and
    ``get_solutions`` can be queried afterwards.
    """

    def __init__(self, spec: SpecProgram, registry: ClassRegistry):
        self.spec = spec
        self.registry = registry
        self._solutions: list[Solution] = []

    @classmethod
    def from_source(cls, source: str, registry: ClassRegistry) -> "ObjectSpec":
        from .parser import parse_spec
        from .validate import validate
        from .errors import SpecValidationError

        spec = parse_spec(source)
        diagnostics = validate(spec)
        if diagnostics:
            raise SpecValidationError(diagnostics)
        return cls(spec, registry)

    def evaluate(self, *args, count: int = 0, optimize: bool = False) -> list[Solution]:
        self._solutions = evaluate(self.spec, list(args), count, self.registry,
                                   optimize=optimize)
        return self._solutions

    def has_solution(self) -> bool:
        return has_solution(self._solutions)

    def get_solutions(self) -> list[Solution]:
        return list(self._solutions)
