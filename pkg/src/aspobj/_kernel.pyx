# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernel.

Operation-for-operation mirror of ``_kernel_py``: chronological DFS over
atoms in id order (false first), unit-style propagation with incremental
cardinality counting and support tracking, and a reduct-closure check at
every leaf. Jagged program structure is flattened into offset/data array
pairs so the hot loops run over typed memoryviews.
"""

from cpython cimport array
import array

cdef int UNDEF = 0
cdef int TRUE = 1
cdef int FALSE = 2


cdef array.array _flat(lists):
    out = array.array('i')
    for xs in lists:
        out.extend(xs)
    return out


cdef array.array _offsets(lists):
    out = array.array('i', [0] * (len(lists) + 1))
    cdef int i, acc = 0
    for i, xs in enumerate(lists):
        acc += len(xs)
        out[i + 1] = acc
    return out


cdef class _Search:
    cdef int n, nrules, ncards, ngroups
    cdef int[::1] head, choice_lo, choice_up
    cdef int[::1] pos_off, pos_dat, neg_off, neg_dat, ch_off, ch_dat
    cdef int[::1] card_rule, card_lo, card_up
    cdef int[::1] cgrp_off, cgrp_dat
    cdef int[::1] group_card, gat_off, gat_dat
    cdef int[::1] op_off, op_dat, on_off, on_dat, og_off, og_dat
    cdef int[::1] oc_off, oc_dat, oh_off, oh_dat
    cdef int[::1] supp_off, supp_dat, supports
    cdef int[::1] minimize
    cdef int[::1] ncards_r

    cdef unsigned char[::1] val, r_fals, r_sat, gstate, cstate
    cdef int[::1] trail
    cdef int trail_len, qhead, n_true
    cdef bint conflict
    cdef int[::1] pos_undef, pos_false, neg_undef, neg_true
    cdef int[::1] ch_true, ch_undef, cards_dtrue, cards_dfalse
    cdef int[::1] g_undef, g_false, ct_true, ct_undef

    cdef int[::1] cl_posleft_tpl, cl_gneed_tpl, cl_cardsok_tpl
    cdef unsigned char[::1] cl_elig_tpl
    cdef int[::1] cl_posleft, cl_gneed, cl_cardsok, cl_ccount, cl_stack
    cdef unsigned char[::1] cl_derived, cl_fired, cl_elig
    cdef int[::1] rules_with_neg, cards_with_upper

    def __init__(self, cp):
        cdef int n = cp.n_atoms
        cdef int nrules = len(cp.head)
        self.n = n
        self.nrules = nrules
        self.head = array.array('i', cp.head)
        self.choice_lo = array.array('i', cp.choice_lo)
        self.choice_up = array.array('i', cp.choice_up)
        self.pos_off = _offsets(cp.pos)
        self.pos_dat = _flat(cp.pos) if any(cp.pos) else array.array('i', [0])
        self.neg_off = _offsets(cp.neg)
        self.neg_dat = _flat(cp.neg) if any(cp.neg) else array.array('i', [0])
        self.ch_off = _offsets(cp.choice_lits)
        self.ch_dat = _flat(cp.choice_lits) if any(cp.choice_lits) else array.array('i', [0])
        self.minimize = array.array('i', cp.minimize) if cp.minimize else array.array('i', [0])[:0]

        card_rule, card_lo, card_up = [], [], []
        rule_cards = [[] for _ in range(nrules)]
        group_card, group_atoms, card_groups = [], [], []
        cdef int r
        for r in range(nrules):
            for lo, up, groups in cp.cards[r]:
                c = len(card_rule)
                card_rule.append(r)
                card_lo.append(lo)
                card_up.append(up)
                rule_cards[r].append(c)
                gidxs = []
                for g in groups:
                    gi = len(group_card)
                    group_card.append(c)
                    group_atoms.append(tuple(g))
                    gidxs.append(gi)
                card_groups.append(gidxs)
        self.ncards = len(card_rule)
        self.ngroups = len(group_card)
        self.card_rule = array.array('i', card_rule) or array.array('i', [0])[:0]
        self.card_lo = array.array('i', card_lo) or array.array('i', [0])[:0]
        self.card_up = array.array('i', card_up) or array.array('i', [0])[:0]
        self.cgrp_off = _offsets(card_groups)
        self.cgrp_dat = _flat(card_groups) if any(card_groups) else array.array('i', [0])
        self.group_card = array.array('i', group_card) or array.array('i', [0])[:0]
        self.gat_off = _offsets(group_atoms)
        self.gat_dat = _flat(group_atoms) if any(group_atoms) else array.array('i', [0])

        occ_pos = [[] for _ in range(n)]
        occ_neg = [[] for _ in range(n)]
        occ_grp = [[] for _ in range(n)]
        occ_ch = [[] for _ in range(n)]
        occ_hd = [[] for _ in range(n)]
        for r in range(nrules):
            for a in cp.pos[r]:
                occ_pos[a].append(r)
            for a in cp.neg[r]:
                occ_neg[a].append(r)
            for a in cp.choice_lits[r]:
                occ_ch[a].append(r)
            if cp.head[r] >= 0:
                occ_hd[cp.head[r]].append(r)
        cdef int gi2
        for gi2 in range(len(group_atoms)):
            for a in group_atoms[gi2]:
                occ_grp[a].append(gi2)
        self.op_off = _offsets(occ_pos)
        self.op_dat = _flat(occ_pos) if any(occ_pos) else array.array('i', [0])
        self.on_off = _offsets(occ_neg)
        self.on_dat = _flat(occ_neg) if any(occ_neg) else array.array('i', [0])
        self.og_off = _offsets(occ_grp)
        self.og_dat = _flat(occ_grp) if any(occ_grp) else array.array('i', [0])
        self.oc_off = _offsets(occ_ch)
        self.oc_dat = _flat(occ_ch) if any(occ_ch) else array.array('i', [0])
        self.oh_off = _offsets(occ_hd)
        self.oh_dat = _flat(occ_hd) if any(occ_hd) else array.array('i', [0])

        supp = [[] for _ in range(nrules)]
        supports = [0] * n
        for r in range(nrules):
            if cp.head[r] >= 0:
                supp[r] = [cp.head[r]]
            elif cp.head[r] == -2:
                supp[r] = list(cp.choice_lits[r])
            for a in supp[r]:
                supports[a] += 1
        self.supp_off = _offsets(supp)
        self.supp_dat = _flat(supp) if any(supp) else array.array('i', [0])
        self.supports = array.array('i', supports) or array.array('i', [0])[:0]

        self.val = bytearray(n)
        self.trail = array.array('i', [0] * (n + 1))
        self.trail_len = 0
        self.qhead = 0
        self.n_true = 0
        self.conflict = False

        self.pos_undef = array.array('i', [len(p) for p in cp.pos])
        self.pos_false = array.array('i', [0] * nrules)
        self.neg_undef = array.array('i', [len(p) for p in cp.neg])
        self.neg_true = array.array('i', [0] * nrules)
        self.ch_true = array.array('i', [0] * nrules)
        self.ch_undef = array.array('i', [len(c) for c in cp.choice_lits])
        self.ncards_r = array.array('i', [len(c) for c in rule_cards])
        self.cards_dtrue = array.array('i', [0] * nrules)
        self.cards_dfalse = array.array('i', [0] * nrules)
        self.r_fals = bytearray(nrules)
        self.r_sat = bytearray(nrules)

        self.g_undef = array.array('i', [len(a) for a in group_atoms]) \
            if group_atoms else array.array('i', [0])[:0]
        self.g_false = array.array('i', [0] * len(group_atoms)) \
            if group_atoms else array.array('i', [0])[:0]
        self.gstate = bytearray(len(group_atoms))
        self.ct_true = array.array('i', [0] * len(card_rule)) \
            if card_rule else array.array('i', [0])[:0]
        self.ct_undef = array.array('i', [0] * len(card_rule)) \
            if card_rule else array.array('i', [0])[:0]
        self.cstate = bytearray(len(card_rule))

        self.cl_posleft_tpl = array.array('i', [len(p) for p in cp.pos])
        self.cl_gneed_tpl = array.array('i', [len(a) for a in group_atoms]) \
            if group_atoms else array.array('i', [0])[:0]
        cardsok = [0] * nrules
        cdef int c2
        for c2 in range(len(card_rule)):
            if card_lo[c2] <= 0:
                cardsok[card_rule[c2]] += 1
        self.cl_cardsok_tpl = array.array('i', cardsok) or array.array('i', [0])[:0]
        self.cl_elig_tpl = bytearray(1 if h != -1 else 0 for h in cp.head)
        self.rules_with_neg = array.array(
            'i', [r for r in range(nrules) if cp.neg[r]]) or array.array('i', [0])[:0]
        self.cards_with_upper = array.array(
            'i', [c for c in range(len(card_rule)) if card_up[c] >= 0]) \
            or array.array('i', [0])[:0]

        self.cl_posleft = array.array('i', [0] * nrules) or array.array('i', [0])[:0]
        self.cl_gneed = array.array('i', [0] * max(1, len(group_atoms)))
        self.cl_cardsok = array.array('i', [0] * max(1, nrules))
        self.cl_ccount = array.array('i', [0] * max(1, len(card_rule)))
        self.cl_stack = array.array('i', [0] * (n + 1))
        self.cl_derived = bytearray(n)
        self.cl_fired = bytearray(nrules)
        self.cl_elig = bytearray(nrules)

    # -- assignment & propagation -------------------------------------------

    cdef inline void assign(self, int a, int v):
        cdef int cur = self.val[a]
        if cur == v:
            return
        if cur != UNDEF:
            self.conflict = True
            return
        self.val[a] = <unsigned char>v
        if v == TRUE:
            self.n_true += 1
        self.trail[self.trail_len] = a
        self.trail_len += 1

    cdef void propagate(self):
        while self.qhead < self.trail_len and not self.conflict:
            a = self.trail[self.qhead]
            self.qhead += 1
            self._effects(a)

    cdef inline int _card_state(self, int c):
        cdef int t = self.ct_true[c]
        cdef int u = self.ct_undef[c]
        cdef int lo = self.card_lo[c]
        cdef int up = self.card_up[c]
        if t + u < lo or (up >= 0 and t > up):
            return 2
        if t >= lo and (up < 0 or t + u <= up):
            return 1
        return 0

    cdef inline bint _rule_falsified(self, int r):
        return self.pos_false[r] or self.neg_true[r] or self.cards_dfalse[r]

    cdef inline bint _rule_satisfied(self, int r):
        return (self.pos_undef[r] == 0 and self.pos_false[r] == 0
                and self.neg_undef[r] == 0 and self.neg_true[r] == 0
                and self.cards_dtrue[r] == self.ncards_r[r])

    cdef void _effects(self, int a):
        cdef int v = self.val[a]
        cdef int i, r, gi, old, new
        if v == TRUE and self.supports[a] == 0:
            self.conflict = True
        for i in range(self.op_off[a], self.op_off[a + 1]):
            r = self.op_dat[i]
            self.pos_undef[r] -= 1
            if v == FALSE:
                self.pos_false[r] += 1
            self._update_rule_forward(r)
        for i in range(self.on_off[a], self.on_off[a + 1]):
            r = self.on_dat[i]
            self.neg_undef[r] -= 1
            if v == TRUE:
                self.neg_true[r] += 1
            self._update_rule_forward(r)
        for i in range(self.og_off[a], self.og_off[a + 1]):
            gi = self.og_dat[i]
            old = self.gstate[gi]
            self.g_undef[gi] -= 1
            if v == FALSE:
                self.g_false[gi] += 1
            new = 2 if self.g_false[gi] else (1 if self.g_undef[gi] == 0 else 0)
            if new != old:
                self.gstate[gi] = <unsigned char>new
                self._card_delta(self.group_card[gi], old, new, True)
        for i in range(self.oc_off[a], self.oc_off[a + 1]):
            r = self.oc_dat[i]
            if v == TRUE:
                self.ch_true[r] += 1
            self.ch_undef[r] -= 1
            if self.r_sat[r]:
                self._choice_check(r)
        if v == FALSE:
            for i in range(self.oh_off[a], self.oh_off[a + 1]):
                r = self.oh_dat[i]
                if self.r_sat[r]:
                    self.conflict = True
                elif not self.r_fals[r]:
                    self._try_unit(r)

    cdef void _card_delta(self, int c, int old_g, int new_g, bint forward):
        cdef int oldc, newc, r
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
            self.cstate[c] = <unsigned char>newc
            r = self.card_rule[c]
            if oldc == 1:
                self.cards_dtrue[r] -= 1
            elif oldc == 2:
                self.cards_dfalse[r] -= 1
            if newc == 1:
                self.cards_dtrue[r] += 1
            elif newc == 2:
                self.cards_dfalse[r] += 1
            if forward:
                self._update_rule_forward(r)
            else:
                self._update_rule_reverse(r)

    cdef void _update_rule_forward(self, int r):
        cdef bint f = self._rule_falsified(r)
        cdef int i, t, h
        if f and not self.r_fals[r]:
            self.r_fals[r] = 1
            for i in range(self.supp_off[r], self.supp_off[r + 1]):
                t = self.supp_dat[i]
                self.supports[t] -= 1
                if self.supports[t] == 0:
                    if self.val[t] == TRUE:
                        self.conflict = True
                    elif self.val[t] == UNDEF:
                        self.assign(t, FALSE)
        cdef bint s = self._rule_satisfied(r)
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

    cdef void _try_unit(self, int r):
        cdef int i, a
        if self.cards_dtrue[r] != self.ncards_r[r]:
            return
        if self.pos_false[r] or self.neg_true[r]:
            return
        if self.pos_undef[r] + self.neg_undef[r] != 1:
            return
        if self.pos_undef[r]:
            for i in range(self.pos_off[r], self.pos_off[r + 1]):
                a = self.pos_dat[i]
                if self.val[a] == UNDEF:
                    self.assign(a, FALSE)
                    return
        else:
            for i in range(self.neg_off[r], self.neg_off[r + 1]):
                a = self.neg_dat[i]
                if self.val[a] == UNDEF:
                    self.assign(a, TRUE)
                    return

    cdef void _choice_check(self, int r):
        cdef int lo = self.choice_lo[r]
        cdef int up = self.choice_up[r]
        cdef int t = self.ch_true[r]
        cdef int u = self.ch_undef[r]
        cdef int i, a
        if up >= 0 and t > up:
            self.conflict = True
            return
        if lo > 0 and t + u < lo:
            self.conflict = True
            return
        if u == 0:
            return
        if up >= 0 and t == up:
            for i in range(self.ch_off[r], self.ch_off[r + 1]):
                a = self.ch_dat[i]
                if self.val[a] == UNDEF:
                    self.assign(a, FALSE)
        elif lo > 0 and t + u == lo:
            for i in range(self.ch_off[r], self.ch_off[r + 1]):
                a = self.ch_dat[i]
                if self.val[a] == UNDEF:
                    self.assign(a, TRUE)

    # -- init -------------------------------------------------------------------

    cdef void init(self):
        cdef int gi, c, r, a, t, i
        for gi in range(self.ngroups):
            if self.gat_off[gi + 1] == self.gat_off[gi]:
                self.gstate[gi] = 1
        for c in range(self.ncards):
            t = 0
            for i in range(self.cgrp_off[c], self.cgrp_off[c + 1]):
                if self.gstate[self.cgrp_dat[i]] == 1:
                    t += 1
            self.ct_true[c] = t
            self.ct_undef[c] = (self.cgrp_off[c + 1] - self.cgrp_off[c]) - t
            self.cstate[c] = 0
            st = self._card_state(c)
            if st:
                self.cstate[c] = <unsigned char>st
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

    # -- undo ---------------------------------------------------------------------

    cdef void undo_to(self, int mark):
        cdef int a
        while self.trail_len > mark:
            self.trail_len -= 1
            a = self.trail[self.trail_len]
            if self.trail_len < self.qhead:
                self._reverse_effects(a)
            if self.val[a] == TRUE:
                self.n_true -= 1
            self.val[a] = UNDEF
        if self.qhead > mark:
            self.qhead = mark
        self.conflict = False

    cdef void _reverse_effects(self, int a):
        cdef int v = self.val[a]
        cdef int i, r, gi, old, new
        for i in range(self.op_off[a], self.op_off[a + 1]):
            r = self.op_dat[i]
            self.pos_undef[r] += 1
            if v == FALSE:
                self.pos_false[r] -= 1
            self._update_rule_reverse(r)
        for i in range(self.on_off[a], self.on_off[a + 1]):
            r = self.on_dat[i]
            self.neg_undef[r] += 1
            if v == TRUE:
                self.neg_true[r] -= 1
            self._update_rule_reverse(r)
        for i in range(self.og_off[a], self.og_off[a + 1]):
            gi = self.og_dat[i]
            old = self.gstate[gi]
            self.g_undef[gi] += 1
            if v == FALSE:
                self.g_false[gi] -= 1
            new = 2 if self.g_false[gi] else (1 if self.g_undef[gi] == 0 else 0)
            if new != old:
                self.gstate[gi] = <unsigned char>new
                self._card_delta(self.group_card[gi], old, new, False)
        for i in range(self.oc_off[a], self.oc_off[a + 1]):
            r = self.oc_dat[i]
            if v == TRUE:
                self.ch_true[r] -= 1
            self.ch_undef[r] += 1

    cdef void _update_rule_reverse(self, int r):
        cdef int i
        if self.r_fals[r] and not self._rule_falsified(r):
            self.r_fals[r] = 0
            for i in range(self.supp_off[r], self.supp_off[r + 1]):
                self.supports[self.supp_dat[i]] += 1
        if self.r_sat[r] and not self._rule_satisfied(r):
            self.r_sat[r] = 0

    # -- leaf verification ------------------------------------------------------------

    cdef bint _fire(self, int r, int *n_derived, int *sp):
        cdef int i, a, h = self.head[r]
        if h >= 0:
            if not self.cl_derived[h]:
                if self.val[h] != TRUE:
                    return False
                self.cl_derived[h] = 1
                n_derived[0] += 1
                self.cl_stack[sp[0]] = h
                sp[0] += 1
            return True
        for i in range(self.ch_off[r], self.ch_off[r + 1]):
            a = self.ch_dat[i]
            if self.val[a] == TRUE and not self.cl_derived[a]:
                self.cl_derived[a] = 1
                n_derived[0] += 1
                self.cl_stack[sp[0]] = a
                sp[0] += 1
        return True

    cdef bint leaf_stable(self):
        cdef int r, a, i, j, c, gi, n_derived = 0, sp = 0
        cdef int nrules = self.nrules
        self.cl_posleft[:] = self.cl_posleft_tpl
        if self.ngroups:
            self.cl_gneed[:self.ngroups] = self.cl_gneed_tpl
        self.cl_cardsok[:nrules] = self.cl_cardsok_tpl
        for c in range(self.ncards):
            self.cl_ccount[c] = 0
        cdef unsigned char[::1] derived = self.cl_derived
        cdef unsigned char[::1] fired = self.cl_fired
        cdef unsigned char[::1] elig = self.cl_elig
        for a in range(self.n):
            derived[a] = 0
        for r in range(nrules):
            fired[r] = 0
            elig[r] = self.cl_elig_tpl[r]
        for i in range(self.rules_with_neg.shape[0]):
            r = self.rules_with_neg[i]
            for j in range(self.neg_off[r], self.neg_off[r + 1]):
                if self.val[self.neg_dat[j]] == TRUE:
                    elig[r] = 0
                    break
        for i in range(self.cards_with_upper.shape[0]):
            c = self.cards_with_upper[i]
            if self.ct_true[c] > self.card_up[c]:
                elig[self.card_rule[c]] = 0
        for r in range(nrules):
            if elig[r] and self.cl_posleft[r] == 0 \
                    and self.cl_cardsok[r] == self.ncards_r[r]:
                fired[r] = 1
                if not self._fire(r, &n_derived, &sp):
                    return False
        while sp > 0:
            sp -= 1
            a = self.cl_stack[sp]
            for i in range(self.op_off[a], self.op_off[a + 1]):
                r = self.op_dat[i]
                self.cl_posleft[r] -= 1
                if elig[r] and not fired[r] and self.cl_posleft[r] == 0 \
                        and self.cl_cardsok[r] == self.ncards_r[r]:
                    fired[r] = 1
                    if not self._fire(r, &n_derived, &sp):
                        return False
            for i in range(self.og_off[a], self.og_off[a + 1]):
                gi = self.og_dat[i]
                self.cl_gneed[gi] -= 1
                if self.cl_gneed[gi] == 0:
                    c = self.group_card[gi]
                    self.cl_ccount[c] += 1
                    if self.card_lo[c] > 0 and self.cl_ccount[c] == self.card_lo[c]:
                        r = self.card_rule[c]
                        self.cl_cardsok[r] += 1
                        if elig[r] and not fired[r] and self.cl_posleft[r] == 0 \
                                and self.cl_cardsok[r] == self.ncards_r[r]:
                            fired[r] = 1
                            if not self._fire(r, &n_derived, &sp):
                                return False
        return n_derived == self.n_true

    cdef tuple extract(self):
        cdef int a
        out = []
        for a in range(self.n):
            if self.val[a] == TRUE:
                out.append(a)
        return tuple(out)

    cdef int cost(self):
        cdef int i, total = 0
        for i in range(self.minimize.shape[0]):
            if self.val[self.minimize[i]] == TRUE:
                total += 1
        return total


def solve(cp, int count=0):
    """Enumerate stable models; mirror of the pure-Python kernel."""
    cdef _Search s = _Search(cp)
    models = []
    s.init()
    s.propagate()
    if s.conflict:
        return models

    cdef int n = s.n
    cdef array.array dec_mark_a = array.array('i', [0] * (n + 1))
    cdef array.array dec_atom_a = array.array('i', [0] * (n + 1))
    cdef array.array dec_val_a = array.array('i', [0] * (n + 1))
    cdef int[::1] dec_mark = dec_mark_a
    cdef int[::1] dec_atom = dec_atom_a
    cdef int[::1] dec_val = dec_val_a
    cdef int depth = 0
    cdef int a, scan
    cdef bint progressed

    while True:
        if s.conflict:
            progressed = False
            while depth > 0:
                s.undo_to(dec_mark[depth - 1])
                if dec_val[depth - 1] == FALSE:
                    dec_val[depth - 1] = TRUE
                    s.assign(dec_atom[depth - 1], TRUE)
                    s.propagate()
                    if not s.conflict:
                        progressed = True
                        break
                else:
                    depth -= 1
            if not progressed and depth == 0:
                return models
            continue
        scan = dec_atom[depth - 1] + 1 if depth > 0 else 0
        a = -1
        for i in range(scan, n):
            if s.val[i] == UNDEF:
                a = i
                break
        if a < 0:
            if s.leaf_stable():
                models.append((s.extract(), s.cost()))
                if count and len(models) >= count:
                    return models
            s.conflict = True  # force backtracking
            continue
        dec_mark[depth] = s.trail_len
        dec_atom[depth] = a
        dec_val[depth] = FALSE
        depth += 1
        s.assign(a, FALSE)
        s.propagate()
