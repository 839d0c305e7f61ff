"""Random ground-program generator shared by solver tests and benchmarks."""

from __future__ import annotations

import random

from aspobj import ProgramBuilder


def random_ground_program(rng: random.Random, max_atoms: int = 8,
                          max_rules: int = 12, max_cards: int = 2):
    """Small program with negation, choices, and up to ``max_cards``
    cardinality literals; all atom names are 0-ary predicates."""
    n = rng.randint(1, max_atoms)
    atoms = [f"a{i}" for i in range(n)]
    b = ProgramBuilder()
    for a in atoms:
        b.atom(a)
    cards_used = 0
    for _ in range(rng.randint(1, max_rules)):
        kind = rng.choice(["fact", "rule", "rule", "constraint", "choice", "choice"])
        pos = rng.sample(atoms, rng.randint(0, min(2, n)))
        neg = rng.sample(atoms, rng.randint(0, min(2, n)))
        cards = []
        while cards_used < max_cards and rng.random() < 0.3:
            lits = rng.sample(atoms, rng.randint(1, min(4, n)))
            if rng.random() < 0.25 and len(lits) >= 2:
                # conjunction group: first two atoms count as one element
                lits = [tuple(lits[:2])] + lits[2:]
                if rng.random() < 0.5 and n >= 2:
                    # overlapping group sharing an atom with the first
                    lits.append((lits[0][0], rng.choice(atoms)))
            lo = rng.randint(0, len(lits))
            up = rng.choice([None, rng.randint(lo, len(lits))])
            cards.append((lo, up, lits))
            cards_used += 1
        if kind == "fact":
            b.fact(rng.choice(atoms))
        elif kind == "rule":
            b.rule(rng.choice(atoms), pos=pos, neg=neg, cards=cards)
        elif kind == "constraint":
            b.constraint(pos=pos, neg=neg, cards=cards)
        else:
            lits = rng.sample(atoms, rng.randint(1, min(3, n)))
            lo = rng.randint(0, len(lits))
            up = rng.choice([None, rng.randint(lo, len(lits))])
            b.choice(lits, lower=lo, upper=up, pos=pos, neg=neg, cards=cards)
    if rng.random() < 0.3:
        b.minimize(rng.sample(atoms, rng.randint(1, n)))
    return b.build()
