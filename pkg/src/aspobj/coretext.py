"""Textual rendering of ground programs and the external-solver adapter.

The rendering uses the reserved predicates ``param_member/3``,
``created/…``, ``exe/…`` and ``ret/1`` for the extension atoms and keeps
user predicates as-is (mangled only when they would not survive a
conventional solver's lexer). A name table accompanies the text: it maps
every rendered atom string back to its atom id, which is how solver
output is translated into answer sets. Optimization statements are not
rendered; the adapter applies minimization locally after parsing, so the
output contract stays a plain SATISFIABLE/UNSATISFIABLE run.
"""

from __future__ import annotations

import re
import shlex
import subprocess
from dataclasses import dataclass

from .binding import CreatedObj, ParamObj
from .errors import CoreTextError
from .grounding import (
    GExe, GNew, GOrdinary, GParamMember, GReturn, GroundChoice, GroundProgram,
)
from .solver import AnswerSet, _lex_key, model_cost

_BARE = re.compile(r"[a-z_][A-Za-z0-9_]*$")


def _const(text: str) -> str:
    """Render a symbolic constant: bare when lexable, quoted otherwise."""
    if _BARE.match(text):
        return text
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _value(v) -> str:
    if isinstance(v, int):
        return str(v)
    if isinstance(v, ParamObj):
        return f"p{v.seq}"
    if isinstance(v, CreatedObj):
        inner = ",".join(_value(a) for a in v.args)
        return f'new("{v.cls}"{"," if inner else ""}{inner})'
    return _const(v)


class _PredNames:
    """Injective mapping from user predicate names to lexable ones."""

    def __init__(self):
        self.by_pred: dict[str, str] = {}
        self.taken: set[str] = set()

    def get(self, pred: str) -> str:
        name = self.by_pred.get(pred)
        if name is None:
            name = pred if _BARE.match(pred) else "u_" + pred
            while name in self.taken:
                name += "_"
            self.taken.add(name)
            self.by_pred[pred] = name
        return name


@dataclass
class CoreText:
    """Solver-consumable program text plus the atom-name table."""

    text: str
    atom_table: dict[str, int]
    names: list[str]

    def mapping_text(self) -> str:
        lines = [f"{name}\t{aid}" for name, aid in sorted(self.atom_table.items(),
                                                          key=lambda kv: kv[1])]
        return "\n".join(lines) + ("\n" if lines else "")


def emit_core_text(program: GroundProgram) -> CoreText:
    """Render a ground program as conventional solver input text."""
    preds = _PredNames()
    names: list[str] = []
    table: dict[str, int] = {}

    def atom_name(aid: int) -> str:
        return names[aid]

    for aid, atom in enumerate(program.atoms):
        if isinstance(atom, GOrdinary):
            pred = preds.get(atom.pred)
            args = ",".join(_value(a) for a in atom.args)
            text = f"{pred}({args})" if args else pred
        elif isinstance(atom, GParamMember):
            text = f"param_member({_const(atom.param)},{atom.index},{_value(atom.obj)})"
        elif isinstance(atom, GNew):
            args = ",".join(_value(a) for a in atom.args)
            text = f'created("{atom.cls}"{"," if args else ""}{args})'
        elif isinstance(atom, GExe):
            parts = [str(atom.stage), _value(atom.target), f'"{atom.method}"']
            parts += [_value(a) for a in atom.args]
            text = f"exe({','.join(parts)})"
        elif isinstance(atom, GReturn):
            text = f"ret({_value(atom.target)})"
        else:
            raise CoreTextError(f"unrenderable atom {atom!r}")
        if text in table:
            raise CoreTextError(f"atom name collision: {text}")
        table[text] = aid
        names.append(text)

    def card_text(card) -> str:
        elems = []
        for g in card.groups:
            if len(g) == 1:
                elems.append(atom_name(g[0]))
            else:
                elems.append(f"{atom_name(g[0])} : "
                             + ", ".join(atom_name(a) for a in g[1:]))
        up = f" {card.upper}" if card.upper is not None else ""
        return f"{card.lower} {{ {'; '.join(elems)} }}{up}"

    lines = []
    for rule in program.rules:
        body = []
        body.extend(atom_name(a) for a in rule.body_pos)
        body.extend(f"not {atom_name(a)}" for a in rule.body_neg)
        body.extend(card_text(c) for c in rule.cards)
        body_text = ", ".join(body)
        if isinstance(rule.head, GroundChoice):
            lits = "; ".join(atom_name(a) for a in rule.head.lits)
            lo = f"{rule.head.lower} " if rule.head.lower is not None else ""
            up = f" {rule.head.upper}" if rule.head.upper is not None else ""
            head = f"{lo}{{ {lits} }}{up}"
        elif rule.head is not None:
            head = atom_name(rule.head)
        else:
            head = None
        if head is None:
            lines.append(f":- {body_text}.")
        elif body_text:
            lines.append(f"{head} :- {body_text}.")
        else:
            lines.append(f"{head}.")
    return CoreText("\n".join(lines) + ("\n" if lines else ""), table, names)


def parse_solver_output(text: str, atom_table: dict[str, int]) -> list[frozenset[int]]:
    """Answer sets from conventional solver output.

    Accepts zero or more ``Answer: k`` blocks, each followed by a
    whitespace-separated atom list, and a final SATISFIABLE or
    UNSATISFIABLE verdict; any other noise lines are skipped.
    """
    lines = text.splitlines()
    answers: list[frozenset[int]] = []
    verdict: str | None = None
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        if line.startswith("Answer:"):
            tail = line[len("Answer:"):].strip()
            if not tail.isdigit():
                raise CoreTextError(f"malformed answer header: {line!r}")
            if i + 1 >= len(lines):
                raise CoreTextError("answer block missing its atom list")
            atoms = lines[i + 1].split()
            ids = set()
            for name in atoms:
                aid = atom_table.get(name)
                if aid is None:
                    raise CoreTextError(f"unknown atom name {name!r}")
                ids.add(aid)
            answers.append(frozenset(ids))
            i += 2
            continue
        if line in ("SATISFIABLE", "UNSATISFIABLE"):
            verdict = line
        i += 1
    if verdict is None:
        raise CoreTextError("solver output has no satisfiability verdict")
    if verdict == "UNSATISFIABLE":
        if answers:
            raise CoreTextError("answer blocks in an UNSATISFIABLE run")
        return []
    return answers


def format_transcript(core: CoreText, models: list[AnswerSet]) -> str:
    """Render models in the conventional output format parsed above."""
    lines = []
    for k, model in enumerate(models, start=1):
        lines.append(f"Answer: {k}")
        lines.append(" ".join(core.names[a] for a in sorted(model.atoms)))
    lines.append("SATISFIABLE" if models else "UNSATISFIABLE")
    return "\n".join(lines) + "\n"


def solve_external(program: GroundProgram, count: int = 0, optimize: bool = False,
                   solver_cmd: str | None = None,
                   transcript: str | None = None) -> list[AnswerSet]:
    """External backend: delegate model search, keep all post-processing.

    The program is rendered with :func:`emit_core_text` and fed to the
    solver command on stdin (or replaced by a recorded ``transcript``).
    Parsed models are re-ordered into the engine's deterministic order and
    count/optimize are applied here, so the backend only has to enumerate.
    """
    if (solver_cmd is None) == (transcript is None):
        raise CoreTextError("exactly one of solver_cmd or transcript is required")
    core = emit_core_text(program)
    if transcript is None:
        proc = subprocess.run(shlex.split(solver_cmd), input=core.text,
                              capture_output=True, text=True)
        output = proc.stdout
    else:
        output = transcript
    atom_sets = parse_solver_output(output, core.atom_table)
    models = [AnswerSet(s, model_cost(program, s)) for s in atom_sets]
    models.sort(key=lambda m: _lex_key(program, m.atoms))
    if optimize:
        best = min((m.cost for m in models), default=0)
        models = [m for m in models if m.cost == best]
    if count:
        models = models[:count]
    return models
