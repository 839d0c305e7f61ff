"""Pure-Python search kernel.

Chronological DFS over atoms in id order, false branch first, which makes
models come out in bitvector-lexicographic order. Propagation implements
the usual deterministic consequences:

* a satisfied body forces its head true (or a conflict for constraints,
  or a bound check for choice heads);
* a false head with a body one literal away from satisfied forces that
  literal the other way;
* an atom whose potential supporting rules are all dead is forced false;
* cardinality groups are counted incrementally so bound violations prune
  as soon as they are decided.

Propagation never detects unfounded positive loops, so every total
assignment is verified with a reduct-closure check before it is emitted.
The compiled kernel mirrors this module operation for operation.
"""

from __future__ import annotations

UNDEF, TRUE, FALSE = 0, 1, 2


class _Search:
    def __init__(self, cp):
        self.n = n = cp.n_atoms
        self.head = list(cp.head)
        self.pos = [tuple(p) for p in cp.pos]
        self.neg = [tuple(p) for p in cp.neg]
        self.choice_lits = [tuple(c) for c in cp.choice_lits]
        self.choice_lo = list(cp.choice_lo)
        self.choice_up = list(cp.choice_up)
        self.minimize = tuple(cp.minimize)
        nrules = len(self.head)
        self.nrules = nrules

        # Flatten cardinalities: global card and group indices.
        self.card_rule: list[int] = []
        self.card_lo: list[int] = []
        self.card_up: list[int] = []
        self.rule_cards: list[list[int]] = [[] for _ in range(nrules)]
        self.group_card: list[int] = []
        self.group_atoms: list[tuple[int, ...]] = []
        self.card_groups: list[list[int]] = []
        for r, rcards in enumerate(cp.cards):
            for lo, up, groups in rcards:
                c = len(self.card_rule)
                self.card_rule.append(r)
                self.card_lo.append(lo)
                self.card_up.append(up)
                self.rule_cards[r].append(c)
                gidxs = []
                for g in groups:
                    gi = len(self.group_card)
                    self.group_card.append(c)
                    self.group_atoms.append(tuple(g))
                    gidxs.append(gi)
                self.card_groups.append(gidxs)
        ncards_total = len(self.card_rule)
        ngroups = len(self.group_card)

        # Occurrence lists.
        self.occ_pos = [[] for _ in range(n)]
        self.occ_neg = [[] for _ in range(n)]
        self.occ_group = [[] for _ in range(n)]
        self.occ_choice = [[] for _ in range(n)]
        self.occ_head = [[] for _ in range(n)]
        for r in range(nrules):
            for a in self.pos[r]:
                self.occ_pos[a].append(r)
            for a in self.neg[r]:
                self.occ_neg[a].append(r)
            for a in self.choice_lits[r]:
                self.occ_choice[a].append(r)
            if self.head[r] >= 0:
                self.occ_head[self.head[r]].append(r)
        for gi, atoms in enumerate(self.group_atoms):
            for a in atoms:
                self.occ_group[a].append(gi)

        # Support targets per rule and raw support counts per atom.
        self.supp_targets: list[tuple[int, ...]] = []
        self.supports = [0] * n
        for r in range(nrules):
            if self.head[r] >= 0:
                targets = (self.head[r],)
            elif self.head[r] == -2:
                targets = self.choice_lits[r]
            else:
                targets = ()
            self.supp_targets.append(targets)
            for a in targets:
                self.supports[a] += 1

        # Dynamic state.
        self.val = bytearray(n)
        self.trail: list[int] = []
        self.qhead = 0
        self.n_true = 0
        self.conflict = False

        self.pos_undef = [len(p) for p in self.pos]
        self.pos_false = [0] * nrules
        self.neg_undef = [len(p) for p in self.neg]
        self.neg_true = [0] * nrules
        self.ch_true = [0] * nrules
        self.ch_undef = [len(c) for c in self.choice_lits]
        self.ncards = [len(c) for c in self.rule_cards]
        self.cards_dtrue = [0] * nrules
        self.cards_dfalse = [0] * nrules
        self.r_fals = bytearray(nrules)
        self.r_sat = bytearray(nrules)

        self.g_undef = [len(a) for a in self.group_atoms]
        self.g_false = [0] * ngroups
        self.gstate = bytearray(ngroups)
        self.ct_true = [0] * ncards_total
        self.ct_undef = [0] * ncards_total
        self.cstate = bytearray(ncards_total)

        # Reduct-closure scratch templates.
        self._cl_posleft_tpl = list(self.pos_undef)
        self._cl_gneed_tpl = list(self.g_undef)
        self._cl_cardsok_tpl = [0] * nrules
        for c in range(ncards_total):
            if self.card_lo[c] <= 0:
                self._cl_cardsok_tpl[self.card_rule[c]] += 1
        self._cl_elig_tpl = bytearray(1 if h != -1 else 0 for h in self.head)
        self._rules_with_neg = [r for r in range(nrules) if self.neg[r]]
        self._cards_with_upper = [c for c in range(ncards_total)
                                  if self.card_up[c] >= 0]

    # -- initialisation -----------------------------------------------------

    def init(self) -> None:
        for gi, atoms in enumerate(self.group_atoms):
            if not atoms:
                self.gstate[gi] = 1
        for c, gidxs in enumerate(self.card_groups):
            t = sum(1 for g in gidxs if self.gstate[g] == 1)
            self.ct_true[c] = t
            self.ct_undef[c] = len(gidxs) - t
            self.cstate[c] = 0
            st = self._card_state(c)
            if st:
                self.cstate[c] = st
                r = self.card_rule[c]
                if st == 1:
                    self.cards_dtrue[r] += 1
                else:
                    self.cards_dfalse[r] += 1
        for r in range(self.nrules):
            self._update_rule_forward(r)
        for a in range(self.n):
            if self.supports[a] == 0 and self.val[a] == UNDEF:
                self.assign(a, FALSE)

    # -- assignment and propagation -------------------------------------------

    def assign(self, a: int, v: int) -> None:
        cur = self.val[a]
        if cur == v:
            return
        if cur != UNDEF:
            self.conflict = True
            return
        self.val[a] = v
        if v == TRUE:
            self.n_true += 1
        self.trail.append(a)

    def propagate(self) -> None:
        while self.qhead < len(self.trail) and not self.conflict:
            a = self.trail[self.qhead]
            self.qhead += 1
            self._effects(a)

    def _card_state(self, c: int) -> int:
        t = self.ct_true[c]
        u = self.ct_undef[c]
        lo = self.card_lo[c]
        up = self.card_up[c]
        if t + u < lo or (up >= 0 and t > up):
            return 2
        if t >= lo and (up < 0 or t + u <= up):
            return 1
        return 0

    def _rule_falsified(self, r: int) -> bool:
        return bool(self.pos_false[r] or self.neg_true[r] or self.cards_dfalse[r])

    def _rule_satisfied(self, r: int) -> bool:
        return (self.pos_undef[r] == 0 and self.pos_false[r] == 0
                and self.neg_undef[r] == 0 and self.neg_true[r] == 0
                and self.cards_dtrue[r] == self.ncards[r])

    def _effects(self, a: int) -> None:
        v = self.val[a]
        if v == TRUE and self.supports[a] == 0:
            self.conflict = True
        for r in self.occ_pos[a]:
            self.pos_undef[r] -= 1
            if v == FALSE:
                self.pos_false[r] += 1
            self._update_rule_forward(r)
        for r in self.occ_neg[a]:
            self.neg_undef[r] -= 1
            if v == TRUE:
                self.neg_true[r] += 1
            self._update_rule_forward(r)
        for gi in self.occ_group[a]:
            old = self.gstate[gi]
            self.g_undef[gi] -= 1
            if v == FALSE:
                self.g_false[gi] += 1
            new = 2 if self.g_false[gi] else (1 if self.g_undef[gi] == 0 else 0)
            if new != old:
                self.gstate[gi] = new
                self._card_delta(self.group_card[gi], old, new)
        for r in self.occ_choice[a]:
            if v == TRUE:
                self.ch_true[r] += 1
            self.ch_undef[r] -= 1
            if self.r_sat[r]:
                self._choice_check(r)
        if v == FALSE:
            for r in self.occ_head[a]:
                if self.r_sat[r]:
                    self.conflict = True
                elif not self.r_fals[r]:
                    self._try_unit(r)

    def _card_delta(self, c: int, old_g: int, new_g: int) -> None:
        if old_g == 0:
            self.ct_undef[c] -= 1
        elif old_g == 1:
            self.ct_true[c] -= 1
        if new_g == 1:
            self.ct_true[c] += 1
        elif new_g == 0:
            self.ct_undef[c] += 1
        oldc = self.cstate[c]
        newc = self._card_state(c)
        if newc != oldc:
            self.cstate[c] = newc
            r = self.card_rule[c]
            if oldc == 1:
                self.cards_dtrue[r] -= 1
            elif oldc == 2:
                self.cards_dfalse[r] -= 1
            if newc == 1:
                self.cards_dtrue[r] += 1
            elif newc == 2:
                self.cards_dfalse[r] += 1
            self._update_rule_forward(r)

    def _update_rule_forward(self, r: int) -> None:
        f = self._rule_falsified(r)
        if f and not self.r_fals[r]:
            self.r_fals[r] = 1
            for t in self.supp_targets[r]:
                self.supports[t] -= 1
                if self.supports[t] == 0:
                    if self.val[t] == TRUE:
                        self.conflict = True
                    elif self.val[t] == UNDEF:
                        self.assign(t, FALSE)
        s = self._rule_satisfied(r)
        if s and not self.r_sat[r]:
            self.r_sat[r] = 1
            h = self.head[r]
            if h == -1:
                self.conflict = True
            elif h >= 0:
                self.assign(h, TRUE)
            else:
                self._choice_check(r)
        if not f and not s and not self.conflict:
            h = self.head[r]
            if h == -1 or (h >= 0 and self.val[h] == FALSE):
                self._try_unit(r)

    def _try_unit(self, r: int) -> None:
        """Head is false (or absent): the last open literal must break the body."""
        if self.cards_dtrue[r] != self.ncards[r]:
            return
        if self.pos_false[r] or self.neg_true[r]:
            return
        if self.pos_undef[r] + self.neg_undef[r] != 1:
            return
        if self.pos_undef[r]:
            for a in self.pos[r]:
                if self.val[a] == UNDEF:
                    self.assign(a, FALSE)
                    return
        else:
            for a in self.neg[r]:
                if self.val[a] == UNDEF:
                    self.assign(a, TRUE)
                    return

    def _choice_check(self, r: int) -> None:
        lo = self.choice_lo[r]
        up = self.choice_up[r]
        t = self.ch_true[r]
        u = self.ch_undef[r]
        if up >= 0 and t > up:
            self.conflict = True
            return
        if lo > 0 and t + u < lo:
            self.conflict = True
            return
        if u == 0:
            return
        if up >= 0 and t == up:
            for a in self.choice_lits[r]:
                if self.val[a] == UNDEF:
                    self.assign(a, FALSE)
        elif lo > 0 and t + u == lo:
            for a in self.choice_lits[r]:
                if self.val[a] == UNDEF:
                    self.assign(a, TRUE)

    # -- undo -------------------------------------------------------------------

    def undo_to(self, mark: int) -> None:
        while len(self.trail) > mark:
            a = self.trail.pop()
            if len(self.trail) < self.qhead:
                self._reverse_effects(a)
            if self.val[a] == TRUE:
                self.n_true -= 1
            self.val[a] = UNDEF
        if self.qhead > mark:
            self.qhead = mark
        self.conflict = False

    def _reverse_effects(self, a: int) -> None:
        v = self.val[a]
        for r in self.occ_pos[a]:
            self.pos_undef[r] += 1
            if v == FALSE:
                self.pos_false[r] -= 1
            self._update_rule_reverse(r)
        for r in self.occ_neg[a]:
            self.neg_undef[r] += 1
            if v == TRUE:
                self.neg_true[r] -= 1
            self._update_rule_reverse(r)
        for gi in self.occ_group[a]:
            old = self.gstate[gi]
            self.g_undef[gi] += 1
            if v == FALSE:
                self.g_false[gi] -= 1
            new = 2 if self.g_false[gi] else (1 if self.g_undef[gi] == 0 else 0)
            if new != old:
                self.gstate[gi] = new
                c = self.group_card[gi]
                if old == 0:
                    self.ct_undef[c] -= 1
                elif old == 1:
                    self.ct_true[c] -= 1
                if new == 1:
                    self.ct_true[c] += 1
                elif new == 0:
                    self.ct_undef[c] += 1
                oldc = self.cstate[c]
                newc = self._card_state(c)
                if newc != oldc:
                    self.cstate[c] = newc
                    r = self.card_rule[c]
                    if oldc == 1:
                        self.cards_dtrue[r] -= 1
                    elif oldc == 2:
                        self.cards_dfalse[r] -= 1
                    if newc == 1:
                        self.cards_dtrue[r] += 1
                    elif newc == 2:
                        self.cards_dfalse[r] += 1
                    self._update_rule_reverse(r)
        for r in self.occ_choice[a]:
            if v == TRUE:
                self.ch_true[r] -= 1
            self.ch_undef[r] += 1

    def _update_rule_reverse(self, r: int) -> None:
        if self.r_fals[r] and not self._rule_falsified(r):
            self.r_fals[r] = 0
            for t in self.supp_targets[r]:
                self.supports[t] += 1
        if self.r_sat[r] and not self._rule_satisfied(r):
            self.r_sat[r] = 0

    # -- leaf verification --------------------------------------------------------

    def leaf_stable(self) -> bool:
        """Candidate = current total assignment; check it equals the
        closure of its reduct."""
        val = self.val
        derived = bytearray(self.n)
        pos_left = self._cl_posleft_tpl.copy()
        g_need = self._cl_gneed_tpl.copy()
        c_count = [0] * len(self.card_rule)
        cards_ok = self._cl_cardsok_tpl.copy()
        fired = bytearray(self.nrules)
        elig = bytearray(self._cl_elig_tpl)
        for r in self._rules_with_neg:
            for a in self.neg[r]:
                if val[a] == TRUE:
                    elig[r] = 0
                    break
        # Violated upper bounds behave like true negative literals: they
        # remove the rule from the reduct. All groups are decided at a
        # leaf, so ct_true is the exact count under the candidate.
        for c in self._cards_with_upper:
            if self.ct_true[c] > self.card_up[c]:
                elig[self.card_rule[c]] = 0
        stack: list[int] = []
        n_derived = 0
        ncards = self.ncards

        def fire(r: int) -> bool:
            nonlocal n_derived
            h = self.head[r]
            if h >= 0:
                targets = (h,)
            else:
                targets = tuple(a for a in self.choice_lits[r] if val[a] == TRUE)
            for a in targets:
                if derived[a]:
                    continue
                if val[a] != TRUE:
                    return False
                derived[a] = 1
                n_derived += 1
                stack.append(a)
            return True

        for r in range(self.nrules):
            if elig[r] and pos_left[r] == 0 and cards_ok[r] == ncards[r]:
                fired[r] = 1
                if not fire(r):
                    return False
        while stack:
            a = stack.pop()
            for r in self.occ_pos[a]:
                pos_left[r] -= 1
                if (elig[r] and not fired[r] and pos_left[r] == 0
                        and cards_ok[r] == ncards[r]):
                    fired[r] = 1
                    if not fire(r):
                        return False
            for gi in self.occ_group[a]:
                g_need[gi] -= 1
                if g_need[gi] == 0:
                    c = self.group_card[gi]
                    c_count[c] += 1
                    if c_count[c] == self.card_lo[c] and self.card_lo[c] > 0:
                        r = self.card_rule[c]
                        cards_ok[r] += 1
                        if (elig[r] and not fired[r] and pos_left[r] == 0
                                and cards_ok[r] == ncards[r]):
                            fired[r] = 1
                            if not fire(r):
                                return False
        return n_derived == self.n_true

    def extract(self) -> tuple[int, ...]:
        return tuple(a for a in range(self.n) if self.val[a] == TRUE)

    def cost(self) -> int:
        return sum(1 for a in self.minimize if self.val[a] == TRUE)


def solve(cp, count: int = 0, trace=None):
    """Enumerate stable models of a compiled program.

    Returns (sorted-atom-tuple, cost) pairs in bitvector-lexicographic
    order; at most ``count`` of them when count > 0. ``trace``, when
    given, receives one line per search-tree event (decision, flip,
    leaf verdict).
    """
    s = _Search(cp)
    models: list[tuple[tuple[int, ...], int]] = []
    s.init()
    s.propagate()
    if s.conflict:
        s.conflict = False
        if trace:
            trace("conflict at root: unsatisfiable")
        return models
    decisions: list[list[int]] = []  # [trail mark, atom, value]

    def backtrack() -> bool:
        while decisions:
            frame = decisions[-1]
            s.undo_to(frame[0])
            if frame[2] == FALSE:
                frame[2] = TRUE
                if trace:
                    trace(f"{'  ' * len(decisions)}flip atom {frame[1]} -> true")
                s.assign(frame[1], TRUE)
                s.propagate()
                if not s.conflict:
                    return True
            else:
                decisions.pop()
        return False

    while True:
        scan = decisions[-1][1] + 1 if decisions else 0
        a = -1
        val = s.val
        for i in range(scan, s.n):
            if val[i] == UNDEF:
                a = i
                break
        if a < 0:
            stable = s.leaf_stable()
            if trace:
                trace(f"{'  ' * len(decisions)}leaf: "
                      f"{'stable' if stable else 'unfounded'}")
            if stable:
                models.append((s.extract(), s.cost()))
                if count and len(models) >= count:
                    return models
            if not backtrack():
                return models
            continue
        decisions.append([len(s.trail), a, FALSE])
        if trace:
            trace(f"{'  ' * len(decisions)}decide atom {a} -> false")
        s.assign(a, FALSE)
        s.propagate()
        if s.conflict:
            if trace:
                trace(f"{'  ' * len(decisions)}conflict")
            if not backtrack():
                return models
