"""Stable-model enumeration for ground programs.

Semantics implemented here (and mirrored by the search kernels):

* a candidate atom set must satisfy every rule: bodies count cardinality
  groups against both bounds, integrity constraints must not fire, and a
  choice head whose body holds restricts how many of its literals are in
  the candidate;
* the candidate must equal the closure of its reduct, where rules with a
  true negative literal are dropped, remaining negative literals are
  deleted, cardinalities keep only their lower bound, and a choice rule
  contributes support for exactly the candidate-true literals it covers.

``enumerate_models`` dispatches to a search kernel: the compiled
extension when built, otherwise a pure-Python twin with identical
behavior. Models are always emitted in lexicographic order of their
atom-id bitvectors, so a bounded enumeration is a prefix of the full one.

``brute_force_models`` is the independent oracle: it tests every subset
of atoms against ``is_stable_model`` and is deliberately kept separate
from the kernels.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import SolveError
from .grounding import GroundCardinality, GroundChoice, GroundProgram

from . import _kernel_py

_compiled_kernel = None
if os.environ.get("ASPOBJ_KERNEL", "") != "pure":
    try:
        from . import _kernel as _compiled_kernel  # type: ignore[attr-defined]
    except ImportError:
        _compiled_kernel = None

#: When true, every model a kernel emits is re-checked with
#: :func:`is_stable_model`. The test suite switches this on.
SELF_CHECK = False


def active_kernel_name() -> str:
    return "compiled" if _compiled_kernel is not None else "pure"


def available_kernels() -> dict[str, object]:
    kernels: dict[str, object] = {"pure": _kernel_py}
    if _compiled_kernel is not None:
        kernels["compiled"] = _compiled_kernel
    return kernels


@dataclass(frozen=True, slots=True)
class AnswerSet:
    atoms: frozenset[int]
    cost: int = 0

    def sorted_atoms(self) -> tuple[int, ...]:
        return tuple(sorted(self.atoms))


@dataclass(frozen=True, slots=True)
class SolveRequest:
    program: GroundProgram
    count: int = 0
    optimize: bool = False


# ---------------------------------------------------------------------------
# Reference semantics
# ---------------------------------------------------------------------------

def _group_count(card: GroundCardinality, truth) -> int:
    return sum(1 for g in card.groups if all(a in truth for a in g))


def evaluate_cardinality(card: GroundCardinality, truth) -> bool:
    """True iff the number of satisfied groups lies within the bounds."""
    count = _group_count(card, truth)
    if count < card.lower:
        return False
    return card.upper is None or count <= card.upper


def _body_satisfied(rule, s: frozenset[int]) -> bool:
    if any(a not in s for a in rule.body_pos):
        return False
    if any(a in s for a in rule.body_neg):
        return False
    return all(evaluate_cardinality(c, s) for c in rule.cards)


def _reduct_closure(program: GroundProgram, s: frozenset[int]) -> set[int]:
    """Closure of the reduct of the program relative to s.

    Upper bounds act like default negation: a rule whose cardinality
    exceeds its upper bound under s is dropped, the survivors keep only
    their monotone lower-bound residual.
    """
    derived: set[int] = set()
    changed = True
    while changed:
        changed = False
        for rule in program.rules:
            if rule.head is None:
                continue
            if any(a in s for a in rule.body_neg):
                continue
            if any(c.upper is not None and _group_count(c, s) > c.upper
                   for c in rule.cards):
                continue
            if any(a not in derived for a in rule.body_pos):
                continue
            if any(_group_count(c, derived) < c.lower for c in rule.cards):
                continue
            if isinstance(rule.head, GroundChoice):
                for lit in rule.head.lits:
                    if lit in s and lit not in derived:
                        derived.add(lit)
                        changed = True
            elif rule.head not in derived:
                derived.add(rule.head)
                changed = True
    return derived


def is_stable_model(program: GroundProgram, candidate) -> bool:
    """Reference check that ``candidate`` is a stable model."""
    s = frozenset(candidate)
    for rule in program.rules:
        if not _body_satisfied(rule, s):
            continue
        if rule.head is None:
            return False
        if isinstance(rule.head, GroundChoice):
            n = sum(1 for lit in rule.head.lits if lit in s)
            lo = rule.head.lower if rule.head.lower is not None else 0
            if n < lo:
                return False
            if rule.head.upper is not None and n > rule.head.upper:
                return False
        elif rule.head not in s:
            return False
    return _reduct_closure(program, s) == s


def model_cost(program: GroundProgram, atoms) -> int:
    return len(program.minimize_ids & frozenset(atoms))


def _lex_key(program: GroundProgram, atoms: frozenset[int]) -> tuple[int, ...]:
    return tuple(1 if i in atoms else 0 for i in range(program.atom_count))


def brute_force_models(program: GroundProgram, cap: int = 22) -> list[AnswerSet]:
    """All stable models by exhaustive subset enumeration (test oracle)."""
    n = program.atom_count
    if n > cap:
        raise SolveError(f"program has {n} atoms, above the brute-force cap {cap}")
    models = []
    for mask in range(1 << n):
        s = frozenset(i for i in range(n) if mask >> i & 1)
        if is_stable_model(program, s):
            models.append(AnswerSet(s, model_cost(program, s)))
    models.sort(key=lambda m: _lex_key(program, m.atoms))
    return models


# ---------------------------------------------------------------------------
# Kernel interface
# ---------------------------------------------------------------------------

@dataclass
class CompiledProgram:
    """Integer-encoded program shared by both search kernels.

    ``head`` holds the head atom id, -1 for integrity constraints and -2
    for choice rules. Cardinalities are (lower, upper, groups) with -1
    standing for an absent upper bound.
    """

    n_atoms: int
    head: list[int]
    pos: list[tuple[int, ...]]
    neg: list[tuple[int, ...]]
    cards: list[tuple[tuple[int, int, tuple[tuple[int, ...], ...]], ...]]
    choice_lits: list[tuple[int, ...]]
    choice_lo: list[int]
    choice_up: list[int]
    minimize: tuple[int, ...]


def compile_program(program: GroundProgram) -> CompiledProgram:
    head, pos, neg, cards, ch_lits, ch_lo, ch_up = [], [], [], [], [], [], []
    for rule in program.rules:
        if rule.head is None:
            head.append(-1)
            ch_lits.append(())
            ch_lo.append(-1)
            ch_up.append(-1)
        elif isinstance(rule.head, GroundChoice):
            head.append(-2)
            ch_lits.append(tuple(dict.fromkeys(rule.head.lits)))
            ch_lo.append(-1 if rule.head.lower is None else rule.head.lower)
            ch_up.append(-1 if rule.head.upper is None else rule.head.upper)
        else:
            head.append(rule.head)
            ch_lits.append(())
            ch_lo.append(-1)
            ch_up.append(-1)
        pos.append(tuple(dict.fromkeys(rule.body_pos)))
        neg.append(tuple(dict.fromkeys(rule.body_neg)))
        rcards = []
        for c in rule.cards:
            groups = tuple(sorted({tuple(sorted(set(g))) for g in c.groups}))
            rcards.append((c.lower, -1 if c.upper is None else c.upper, groups))
        cards.append(tuple(rcards))
    return CompiledProgram(program.atom_count, head, pos, neg, cards,
                           ch_lits, ch_lo, ch_up,
                           tuple(sorted(program.minimize_ids)))


def enumerate_models(program: GroundProgram, count: int = 0, optimize: bool = False,
                     kernel: str | None = None, trace=None) -> list[AnswerSet]:
    """Stable models in deterministic (bitvector-lexicographic) order.

    ``count`` caps the result (0 means all). With ``optimize`` only models
    whose minimize-atom count is globally minimal are returned, still
    capped by ``count``. ``trace`` (a callable receiving one line per
    search event) routes the run through the pure kernel, which is the
    only one instrumented for it.
    """
    if count < 0:
        raise SolveError("count must be >= 0")
    impl = available_kernels().get(kernel) if kernel else (
        _compiled_kernel if _compiled_kernel is not None else _kernel_py)
    if impl is None:
        raise SolveError(f"unknown kernel {kernel!r}")
    cp = compile_program(program)
    if trace is not None:
        raw = _kernel_py.solve(cp, 0 if optimize else count, trace=trace)
    else:
        raw = impl.solve(cp, 0 if optimize else count)
    models = [AnswerSet(frozenset(atoms), cost) for atoms, cost in raw]
    if optimize:
        best = min((m.cost for m in models), default=0)
        models = [m for m in models if m.cost == best]
        if count:
            models = models[:count]
    if SELF_CHECK:
        for m in models:
            if not is_stable_model(program, m.atoms):
                raise SolveError(f"kernel emitted a non-stable model: "
                                 f"{sorted(m.atoms)}")
    return models


def solve(request: SolveRequest) -> list[AnswerSet]:
    return enumerate_models(request.program, request.count, request.optimize)
