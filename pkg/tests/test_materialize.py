"""Plan extraction, plan execution, and the evaluate pipeline."""

from __future__ import annotations

import random

import pytest

from aspobj import (
    ClassRegistry, bind_params, encode_facts, enumerate_models, evaluate,
    execute_plan, extract_plan, ground, has_solution, parse_spec,
)
from aspobj.binding import CreatedObj, ObjectUniverse, ParamObj, value_key
from aspobj.errors import ExecutionError, PlanError, RegistryError
from aspobj.grounding import GOrdinary
from aspobj.materialize import ConstructionPlan, ObjectSpec

from conftest import Component, Node


def network_program(spec, registry, components, nr_cables=9):
    universe = bind_params(spec, [components, nr_cables], registry)
    program = ground(spec, encode_facts(universe), universe)
    return universe, program


class RecordingRegistry:
    """Registry double: logs every constructor call and invocation."""

    def __init__(self, classes=("A", "B", "Node"), methods=("poke", "addNode")):
        self.log: list[tuple] = []
        self.registry = ClassRegistry()
        for cls in classes:
            self.registry.constructors[cls] = self._ctor(cls)
            for m in methods:
                self.registry.methods[(cls, m)] = self._invoker(cls, m)
        # parameter hosts may be dispatched on too
        for m in methods:
            self.registry.methods[("P", m)] = self._invoker("P", m)

    def _ctor(self, cls):
        def construct(*args):
            host = {"cls": cls, "args": args}
            self.log.append(("new", cls, args))
            return host
        return construct

    def _invoker(self, cls, method):
        def invoke(host, *args):
            self.log.append(("call", id(host), method, args))
        return invoke


def plain_universe(n_params: int) -> ObjectUniverse:
    objs = [ParamObj(i) for i in range(n_params)]
    return ObjectUniverse(
        param_objects={"xs": objs}, scalar_params={},
        method_table={}, order_index={o: i for i, o in enumerate(objs)},
        hosts={o: {"cls": "P", "index": i} for i, o in enumerate(objs)},
        param_class={"xs": "P"})


class TestExtractPlan:
    def test_network_plan_shape(self, network_spec, registry, components):
        universe, program = network_program(network_spec, registry, components)
        model = enumerate_models(program, count=1)[0]
        plan = extract_plan(model, program)
        assert len(plan.creations) == 6
        assert all(cls == "Node" for _, cls, _ in plan.creations)
        edges = {a for a in model.atoms
                 if isinstance(program.atoms[a], GOrdinary)
                 and program.atoms[a].pred == "edge"}
        assert len(plan.invocations) == len(edges)  # one call per direction
        assert isinstance(plan.returns, CreatedObj)

    def test_plan_is_pure_function_of_answer_set(self, network_spec, registry,
                                                 components):
        universe, program = network_program(network_spec, registry, components)
        model = enumerate_models(program, count=1)[0]
        assert extract_plan(model, program) == extract_plan(model, program)

    def test_creations_sorted_by_skolem_order(self, network_spec, registry,
                                              components):
        universe, program = network_program(network_spec, registry, components)
        model = enumerate_models(program, count=1)[0]
        plan = extract_plan(model, program)
        keys = [(cls, tuple(value_key(a) for a in args))
                for _, cls, args in plan.creations]
        assert keys == sorted(keys)

    def test_no_return_derived(self, registry):
        spec = parse_spec("""S(Component[] comps){
            new Node(C?) :- C?comps(_).
        }""")
        universe = bind_params(spec, [[Component(1)]], registry)
        program = ground(spec, encode_facts(universe), universe)
        model = enumerate_models(program, count=1)[0]
        with pytest.raises(PlanError, match="no return derived") as err:
            extract_plan(model, program)
        assert err.value.answer_set is model

    def test_ambiguous_return(self, registry):
        # two objects, no tie-breaking rules: both return atoms survive
        spec = parse_spec("""S(Component[] comps){
            new Node(C?) :- C?comps(_).
            return N? :- N?Node(C?).
        }""")
        universe = bind_params(spec, [[Component(1), Component(2)]], registry)
        program = ground(spec, encode_facts(universe), universe)
        model = enumerate_models(program, count=1)[0]
        with pytest.raises(PlanError, match="ambiguous return"):
            extract_plan(model, program)


class TestExecutePlan:
    def test_single_object_plan(self):
        rec = RecordingRegistry()
        universe = plain_universe(1)
        obj = CreatedObj("Node", (ParamObj(0),))
        plan = ConstructionPlan(((obj, "Node", (ParamObj(0),)),), (), obj)
        solution = execute_plan(plan, rec.registry, universe)
        assert rec.log == [("new", "Node", (universe.hosts[ParamObj(0)],))]
        assert solution.root["cls"] == "Node"

    def test_parameter_target_dispatch(self):
        # invocation on p2 must hit the host at array index 2
        rec = RecordingRegistry()
        universe = plain_universe(3)
        obj = CreatedObj("A", ())
        plan = ConstructionPlan(
            ((obj, "A", ()),),
            ((0, ParamObj(2), "poke", (5,)),),
            obj)
        execute_plan(plan, rec.registry, universe)
        assert rec.log[-1] == ("call", id(universe.hosts[ParamObj(2)]), "poke", (5,))

    def test_log_matches_plan_order(self):
        rng = random.Random(2024)
        for _ in range(25):
            rec = RecordingRegistry()
            universe = plain_universe(3)
            plan = random_plan(rng, universe)
            execute_plan(plan, rec.registry, universe)
            assert len(rec.log) == len(plan.creations) + len(plan.invocations)
            for entry, (obj, cls, args) in zip(rec.log, plan.creations):
                assert entry[0] == "new" and entry[1] == cls
            stages = [inv[0] for inv in plan.invocations]
            assert stages == sorted(stages)
            for entry, inv in zip(rec.log[len(plan.creations):], plan.invocations):
                assert entry[0] == "call" and entry[2] == inv[2]

    def test_registry_miss(self):
        universe = plain_universe(1)
        obj = CreatedObj("Ghost", ())
        plan = ConstructionPlan(((obj, "Ghost", ()),), (), obj)
        with pytest.raises(RegistryError, match="no constructor"):
            execute_plan(plan, ClassRegistry(), universe)

    def test_host_failure_carries_position(self):
        registry = ClassRegistry()
        registry.constructors["Bomb"] = lambda: (_ for _ in ()).throw(RuntimeError("x"))
        universe = plain_universe(0)
        obj = CreatedObj("Bomb", ())
        plan = ConstructionPlan(((obj, "Bomb", ()),), (), obj)
        with pytest.raises(ExecutionError) as err:
            execute_plan(plan, registry, universe)
        assert err.value.position == 0


def random_plan(rng: random.Random, universe) -> ConstructionPlan:
    classes = ["A", "B"]
    creations = []
    for cls in classes:
        for k in range(rng.randint(0, 3)):
            creations.append((CreatedObj(cls, (k,)), cls, (k,)))
    creations.sort(key=lambda c: (c[1], tuple(value_key(a) for a in c[2])))
    if not creations:
        obj = CreatedObj("A", (0,))
        creations = [(obj, "A", (0,))]
    targets = [c[0] for c in creations] + list(universe.order_index)
    invocations = []
    for _ in range(rng.randint(0, 6)):
        target = rng.choice(targets)
        invocations.append((rng.randint(0, 2), target, "poke",
                            (rng.randint(0, 9),)))
    invocations.sort(key=lambda i: (i[0], value_key(i[1]), i[2],
                                    tuple(value_key(a) for a in i[3])))
    return ConstructionPlan(tuple(creations), tuple(invocations), creations[0][0])


class TestEvaluate:
    def test_count_one(self, network_spec, registry, components):
        solutions = evaluate(network_spec, [components, 9], 1, registry)
        assert len(solutions) == 1
        assert isinstance(solutions[0].root, Node)

    def test_unsatisfiable_instance(self, network_spec, registry, components):
        solutions = evaluate(network_spec, [components, 4], 0, registry)
        assert solutions == []
        assert not has_solution(solutions)

    def test_all_solutions_count(self, network_spec, registry, components):
        solutions = evaluate(network_spec, [components, 9], 0, registry)
        assert len(solutions) == 54

    def test_object_graph_mirrors_edge_relation(self, network_spec, registry,
                                                components):
        universe, program = network_program(network_spec, registry, components)
        models = enumerate_models(program, count=5)
        for model in models:
            plan = extract_plan(model, program)
            solution = execute_plan(plan, registry, universe)
            node_of = {}
            hosts = dict(universe.hosts)
            for obj, cls, args in plan.creations:
                comp_host = hosts[args[0]]
                node_of[args[0]] = None  # filled below via adjacency walk
            # reconstruct adjacency from the executed objects
            root = solution.root
            seen = {}
            stack = [root]
            while stack:
                node = stack.pop()
                if id(node) in seen:
                    continue
                seen[id(node)] = node
                stack.extend(node.nodes)
            executed_edges = set()
            comp_index = {id(universe.hosts[o]): o.seq
                          for o in universe.order_index}
            for node in seen.values():
                i = comp_index[id(node.component)]
                for other in node.nodes:
                    j = comp_index[id(other.component)]
                    executed_edges.add((i, j))
            model_edges = {
                (program.atoms[a].args[0].seq, program.atoms[a].args[1].seq)
                for a in model.atoms
                if isinstance(program.atoms[a], GOrdinary)
                and program.atoms[a].pred == "edge"}
            assert executed_edges == model_edges
            assert executed_edges == {(j, i) for i, j in executed_edges}

    def test_stage_ordering(self):
        rec = RecordingRegistry()
        universe = plain_universe(2)
        a = CreatedObj("A", (0,))
        plan = ConstructionPlan(
            ((a, "A", (0,)),),
            ((0, a, "poke", (1,)), (1, ParamObj(0), "poke", (2,)),
             (2, a, "poke", (3,))),
            a)
        execute_plan(plan, rec.registry, universe)
        calls = [e for e in rec.log if e[0] == "call"]
        assert [c[3][0] for c in calls] == [1, 2, 3]

    def test_has_solution_cases(self):
        assert not has_solution([])
        assert has_solution([object()])
        assert has_solution([object()] * 5)


class TestStagedPipeline:
    SRC = """
    Builder(Widget[] widgets, int k) {
        new Panel(W?) :- W?widgets(_).
        exe[1] P?.attach(W?) :- P?Panel(W?).
        exe[0] W?.reset() :- W?widgets(_).
        exe[2] P?.seal() :- P?Panel(W?).
        return P? :- P?Panel(W?), W?widgets(0).
    }
    """

    def _run(self):
        log = []

        class Widget:
            def __init__(self, tag):
                self.tag = tag

            def reset(self):
                log.append(("reset", self.tag))

        class Panel:
            def __init__(self, w):
                self.w = w
                log.append(("panel", w.tag))

            def attach(self, w):
                log.append(("attach", self.w.tag, w.tag))

            def seal(self):
                log.append(("seal", self.w.tag))

        registry = ClassRegistry.from_classes(
            {"Panel": Panel, "Widget": Widget},
            invocable_methods={"Panel": ("attach", "seal"),
                               "Widget": ("reset",)})
        spec = parse_spec(self.SRC)
        solutions = evaluate(spec, [[Widget("a"), Widget("b")], 0], 0, registry)
        return log, solutions

    def test_stages_order_invocations_across_targets(self):
        log, solutions = self._run()
        assert len(solutions) == 1
        # creations first, then stage 0 on the parameter objects, then
        # stages 1 and 2 on the created ones
        assert log == [("panel", "a"), ("panel", "b"),
                       ("reset", "a"), ("reset", "b"),
                       ("attach", "a", "a"), ("attach", "b", "b"),
                       ("seal", "a"), ("seal", "b")]

    def test_return_picks_widget_zero_panel(self):
        log, solutions = self._run()
        assert solutions[0].root.w.tag == "a"


class TestObjectSpecHandle:
    def test_handle_workflow(self, network_source, registry, components):
        spec = ObjectSpec.from_source(network_source, registry)
        spec.evaluate(components, 9, count=1)
        assert spec.has_solution()
        root = spec.get_solutions()[0].root
        assert isinstance(root, Node)

    def test_no_solution(self, network_source, registry, components):
        spec = ObjectSpec.from_source(network_source, registry)
        spec.evaluate(components, 4, count=1)
        assert not spec.has_solution()
        assert spec.get_solutions() == []
