"""Command-line front end.

Solves a specification against a JSON universe document. The document
carries precomputed accessor values instead of executable methods, so the
CLI needs no host code: created objects are plain records that log their
constructor arguments and every invocation performed on them, and the
plan documents printed per solution include that effect log.

Exit status: 0 with solutions, 1 when unsatisfiable, 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .ast_nodes import ExeAtom, SpecProgram
from .binding import (
    ClassRegistry, CreatedObj, bind_params, encode_facts,
    referenced_classes, referenced_methods,
)
from .coretext import solve_external
from .errors import BindError, EngineError
from .grounding import ground
from .materialize import execute_plan, extract_plan
from .parser import parse_spec
from .solver import enumerate_models
from .validate import validate


class DataObject:
    """Record standing in for a host object on the CLI path."""

    __slots__ = ("cls", "values", "args", "calls")

    def __init__(self, cls: str, values: dict | None = None, args: tuple = ()):
        self.cls = cls
        self.values = values or {}
        self.args = args
        self.calls: list[tuple[str, tuple]] = []


def _exe_methods(spec: SpecProgram) -> set[str]:
    return {r.head.method for r in spec.rules if isinstance(r.head, ExeAtom)}


def build_data_registry(spec: SpecProgram, universe_doc: dict) -> ClassRegistry:
    """Registry whose constructors build records and whose accessors read
    the universe document's value maps."""
    registry = ClassRegistry()
    classes = set(referenced_classes(spec))
    classes.update(p.cls for p in spec.params if p.is_array)
    for decl in spec.params:
        if decl.is_array:
            records = universe_doc.get(decl.name, [])
            for rec in records:
                if isinstance(rec, dict) and rec.get("class", decl.cls) != decl.cls:
                    raise BindError(f"object in array {decl.name!r} has class "
                                    f"{rec.get('class')!r}, expected {decl.cls!r}")
    for cls in sorted(classes):
        registry.constructors[cls] = _constructor(cls)
        for method in _exe_methods(spec):
            registry.methods[(cls, method)] = _logger(method)
        for method in referenced_methods(spec):
            registry.accessors[(cls, method)] = _reader(method)
    return registry


def _constructor(cls: str):
    return lambda *args: DataObject(cls, args=tuple(args))


def _logger(method: str):
    def invoke(host, *args):
        host.calls.append((method, tuple(args)))
    return invoke


def _reader(method: str):
    def read(host):
        try:
            return host.values[method]
        except KeyError:
            raise ValueError(f"universe document has no {method!r} value") from None
    return read


def load_universe(spec: SpecProgram, doc: dict) -> list:
    """Positional arguments for bind_params from a universe document."""
    if not isinstance(doc, dict):
        raise BindError("universe document must be a JSON object")
    unknown = set(doc) - {p.name for p in spec.params}
    if unknown:
        raise BindError(f"universe document has unknown parameters: "
                        f"{', '.join(sorted(unknown))}")
    args = []
    for decl in spec.params:
        if decl.name not in doc:
            raise BindError(f"universe document is missing parameter {decl.name!r}")
        value = doc[decl.name]
        if decl.is_array:
            if not isinstance(value, list):
                raise BindError(f"parameter {decl.name!r} must be an array of objects")
            hosts = []
            for rec in value:
                if not isinstance(rec, dict):
                    raise BindError(f"objects in {decl.name!r} must be JSON objects")
                hosts.append(DataObject(rec.get("class", decl.cls),
                                        values=dict(rec.get("values", {}))))
            args.append(hosts)
        else:
            args.append(value)
    return args


def _value_json(v):
    if isinstance(v, int):
        return v
    return str(v)


def _plan_document(index: int, solution, universe) -> dict:
    plan = solution.plan
    doc = {
        "solution": index,
        "plan": {
            "creations": [
                {"id": str(obj), "class": cls, "args": [_value_json(a) for a in args]}
                for obj, cls, args in plan.creations],
            "invocations": [
                {"stage": stage, "target": str(target), "method": method,
                 "args": [_value_json(a) for a in args]}
                for stage, target, method, args in plan.invocations],
            "returns": str(plan.returns),
        },
    }
    objects = []
    record_index: dict = {}
    for obj, cls, args in plan.creations:
        record_index[obj] = {"id": str(obj), "class": cls,
                             "args": [_value_json(a) for a in args], "calls": []}
    for obj in universe.order_index:
        record_index.setdefault(obj, {"id": str(obj),
                                      "class": universe.class_of(obj), "calls": []})
    for stage, target, method, args in plan.invocations:
        record_index[target]["calls"].append(
            {"stage": stage, "method": method,
             "args": [_value_json(a) for a in args]})
    for obj, record in record_index.items():
        if isinstance(obj, CreatedObj) or record["calls"]:
            objects.append(record)
    doc["objects"] = objects
    return doc


def cli_solve(spec_path: str, universe_path: str, count: int = 0,
              optimize: bool = False, emit: str = "plans",
              backend: str = "embedded", solver_cmd: str | None = None,
              out=None) -> int:
    """Run the pipeline; returns the process exit status."""
    out = out or sys.stdout
    try:
        with open(spec_path, encoding="utf-8") as fh:
            source = fh.read()
        with open(universe_path, encoding="utf-8") as fh:
            universe_doc = json.load(fh)
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error[io]: universe document is not valid JSON: {exc}",
              file=sys.stderr)
        return 2

    try:
        spec = parse_spec(source)
        diagnostics = validate(spec)
        if diagnostics:
            for d in diagnostics:
                print(f"error[validate]: {d}", file=sys.stderr)
            return 2
        registry = build_data_registry(spec, universe_doc)
        args = load_universe(spec, universe_doc)
        universe = bind_params(spec, args, registry)
        facts = encode_facts(universe)
        if emit == "facts":
            out.write(facts.to_text())
            return 0
        program = ground(spec, facts, universe)
        if emit == "ground":
            out.write(program.to_text())
            return 0
        if backend == "external":
            if not solver_cmd:
                print("error[usage]: --backend external requires --solver-cmd",
                      file=sys.stderr)
                return 2
            models = solve_external(program, count=count, optimize=optimize,
                                    solver_cmd=solver_cmd)
        else:
            models = enumerate_models(program, count=count, optimize=optimize)
        solutions = []
        for model in models:
            plan = extract_plan(model, program)
            solutions.append(execute_plan(plan, registry, universe))
    except EngineError as exc:
        print(f"error[{exc.stage}]: {exc}", file=sys.stderr)
        return 2

    document = {
        "spec": spec.name,
        "satisfiable": bool(solutions),
        "solutions": [_plan_document(i, s, universe)
                      for i, s in enumerate(solutions)],
    }
    out.write(json.dumps(document, indent=2) + "\n")
    return 0 if solutions else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="aspobj",
        description="Solve an object specification against a universe document.")
    parser.add_argument("spec", help="specification file (.ospec)")
    parser.add_argument("universe", help="universe document (JSON)")
    parser.add_argument("-n", "--count", type=int, default=0,
                        help="number of solutions to report (0 = all)")
    parser.add_argument("--optimize", action="store_true",
                        help="apply the spec's minimize statement")
    parser.add_argument("--emit", choices=("plans", "ground", "facts"),
                        default="plans", help="what to print (default: plans)")
    parser.add_argument("--backend", choices=("embedded", "external"),
                        default="embedded")
    parser.add_argument("--solver-cmd", default=None,
                        help="external solver command (reads program on stdin)")
    parser.add_argument("--seedless", action="store_true",
                        help="deterministic mode (the default and only mode)")
    ns = parser.parse_args(argv)
    if ns.count < 0:
        parser.error("count must be >= 0")
    return cli_solve(ns.spec, ns.universe, count=ns.count, optimize=ns.optimize,
                     emit=ns.emit, backend=ns.backend, solver_cmd=ns.solver_cmd)


if __name__ == "__main__":
    sys.exit(main())
