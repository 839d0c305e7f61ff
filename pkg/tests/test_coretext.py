"""Solver text rendering, transcript parsing, and backend equivalence."""

from __future__ import annotations

import random

import pytest

from aspobj import (
    ClassRegistry, ProgramBuilder, bind_params, encode_facts, enumerate_models,
    ground,
)
from aspobj.coretext import (
    emit_core_text, format_transcript, parse_solver_output, solve_external,
)
from aspobj.errors import CoreTextError

from conftest import DATA_DIR, Component, Node
from genprograms import random_ground_program


@pytest.fixture()
def toy_program(toy_spec):
    universe = bind_params(toy_spec, [], ClassRegistry())
    return ground(toy_spec, encode_facts(universe), universe)


@pytest.fixture()
def net2_program(network_spec, registry):
    universe = bind_params(network_spec, [[Component(1), Component(2)], 9], registry)
    return ground(network_spec, encode_facts(universe), universe), universe


class TestEmit:
    def test_toy_golden_bytes(self, toy_program):
        golden = (DATA_DIR / "toy_core.lp").read_text()
        assert emit_core_text(toy_program).text == golden

    def test_network_golden_bytes(self, net2_program):
        program, _ = net2_program
        golden = (DATA_DIR / "net2_core.lp").read_text()
        assert emit_core_text(program).text == golden

    def test_choice_rule_bound_form(self, net2_program):
        program, _ = net2_program
        text = emit_core_text(program).text
        assert "0 { edge(p0,p1) } 1." in text

    def test_return_atom_form(self, net2_program):
        program, _ = net2_program
        core = emit_core_text(program)
        assert 'ret(new("Node",p0))' in core.atom_table

    def test_reserved_forms(self, net2_program):
        program, _ = net2_program
        text = emit_core_text(program).text
        assert "param_member(comps,0,p0)." in text
        assert 'created("Node",p0).' in text
        assert 'exe(0,new("Node",p0),"addNode",new("Node",p1))' in text

    def test_table_is_bijective(self, net2_program):
        program, _ = net2_program
        core = emit_core_text(program)
        assert len(core.atom_table) == program.atom_count
        assert sorted(core.atom_table.values()) == list(range(program.atom_count))
        assert core.mapping_text().count("\n") == program.atom_count

    def test_uppercase_predicate_mangled(self):
        b = ProgramBuilder()
        b.fact("Upper")
        b.fact("u_Upper")  # force a collision with the mangled name
        core = emit_core_text(b.build())
        names = set(core.atom_table)
        assert "u_Upper" in names and "u_Upper_" in names
        assert len(names) == 2

    def test_quoted_symbols(self):
        from aspobj.grounding import GOrdinary
        b = ProgramBuilder()
        b.fact(GOrdinary("p", ("ok", "Needs Quoting")))
        core = emit_core_text(b.build())
        assert 'p(ok,"Needs Quoting")' in core.atom_table


class TestParseSolverOutput:
    def test_golden_transcript(self, toy_program):
        core = emit_core_text(toy_program)
        transcript = (DATA_DIR / "toy_transcript.txt").read_text()
        models = parse_solver_output(transcript, core.atom_table)
        assert [sorted(str(toy_program.atoms[a]) for a in m) for m in models] == [
            ["b(o)", "c(o)"], ["a(o)", "c(o)"]]

    def test_unsatisfiable(self, toy_program):
        core = emit_core_text(toy_program)
        assert parse_solver_output("UNSATISFIABLE\n", core.atom_table) == []

    def test_two_blocks_order_preserved(self, toy_program):
        core = emit_core_text(toy_program)
        out = "Answer: 1\na(o) c(o)\nAnswer: 2\nb(o) c(o)\nSATISFIABLE\n"
        models = parse_solver_output(out, core.atom_table)
        assert len(models) == 2
        first = {str(toy_program.atoms[a]) for a in models[0]}
        assert first == {"a(o)", "c(o)"}  # block order, not model order

    def test_unknown_atom(self, toy_program):
        core = emit_core_text(toy_program)
        with pytest.raises(CoreTextError, match="unknown atom"):
            parse_solver_output("Answer: 1\nmystery(o)\nSATISFIABLE\n",
                                core.atom_table)

    def test_missing_verdict(self, toy_program):
        core = emit_core_text(toy_program)
        with pytest.raises(CoreTextError, match="verdict"):
            parse_solver_output("Answer: 1\na(o)\n", core.atom_table)

    def test_malformed_header(self, toy_program):
        core = emit_core_text(toy_program)
        with pytest.raises(CoreTextError, match="malformed"):
            parse_solver_output("Answer: one\na(o)\nSATISFIABLE\n", core.atom_table)

    def test_blocks_under_unsat_rejected(self, toy_program):
        core = emit_core_text(toy_program)
        with pytest.raises(CoreTextError):
            parse_solver_output("Answer: 1\na(o)\nUNSATISFIABLE\n", core.atom_table)

    def test_empty_model_line(self):
        b = ProgramBuilder()
        b.choice(["a"], lower=0, upper=1)
        program = b.build()
        core = emit_core_text(program)
        models = parse_solver_output("Answer: 1\n\nSATISFIABLE\n", core.atom_table)
        assert models == [frozenset()]


class TestBackendEquivalence:
    def test_toy_transcript_double(self, toy_program):
        transcript = (DATA_DIR / "toy_transcript.txt").read_text()
        external = solve_external(toy_program, transcript=transcript)
        embedded = enumerate_models(toy_program)
        assert [(m.sorted_atoms(), m.cost) for m in external] == \
               [(m.sorted_atoms(), m.cost) for m in embedded]

    def test_network_transcript_double(self, net2_program):
        program, _ = net2_program
        transcript = (DATA_DIR / "net2_transcript.txt").read_text()
        external = solve_external(program, transcript=transcript)
        embedded = enumerate_models(program)
        assert [(m.sorted_atoms(), m.cost) for m in external] == \
               [(m.sorted_atoms(), m.cost) for m in embedded]

    def test_roundtrip_on_random_programs(self):
        # emitting, formatting a transcript, and parsing it back must
        # reproduce the embedded model set exactly
        rng = random.Random(5150)
        for _ in range(60):
            program = random_ground_program(rng)
            embedded = enumerate_models(program)
            core = emit_core_text(program)
            transcript = format_transcript(core, embedded)
            external = solve_external(program, transcript=transcript)
            assert [(m.sorted_atoms(), m.cost) for m in external] == \
                   [(m.sorted_atoms(), m.cost) for m in embedded]

    def test_count_and_optimize_applied_locally(self, toy_program):
        transcript = (DATA_DIR / "toy_transcript.txt").read_text()
        capped = solve_external(toy_program, count=1, transcript=transcript)
        assert len(capped) == 1
        assert capped[0].atoms == enumerate_models(toy_program, count=1)[0].atoms

    def test_requires_exactly_one_source(self, toy_program):
        with pytest.raises(CoreTextError):
            solve_external(toy_program)
        with pytest.raises(CoreTextError):
            solve_external(toy_program, solver_cmd="x", transcript="y")
