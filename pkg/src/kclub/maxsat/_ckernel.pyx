# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled search kernel.

A line-for-line port of ``_pykernel``: same data layout, same branching
and tie-breaking, same floating-point operations on activities. The two
kernels must agree on every returned value, including the decision and
conflict counters; the test suite checks this.
"""

import time

from libcpp.vector cimport vector
from libcpp.pair cimport pair
from libcpp.algorithm cimport sort

OPTIMAL, FEASIBLE, UNKNOWN, UNSAT = 0, 1, 2, 3

cdef enum:
    NO_REASON = -1
    BOUND_REASON = -2
    NO_CONFLICT = -1
    BOUND_CONFLICT = -2
    CHECK_MASK = 255
    RESTART_BASE = 100

cdef double VAR_DECAY = 0.95

ctypedef pair[int, pair[int, int]] RankKey


cdef long luby(long i):
    cdef long size = 1, seq = 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


cdef class Kernel:
    cdef int nv, nsoft, count_false, soft_assigned, limit
    cdef long decisions, conflicts, n_learnts, max_learnts
    cdef int qhead
    cdef bint unsat
    cdef double var_inc
    cdef vector[int] assign, level, reason, tpos, phase, is_soft, hpos, heap
    cdef vector[char] seen, lvl_seen
    cdef vector[double] activity
    cdef vector[int] trail, trail_lim, soft
    cdef vector[vector[int]] clauses, watches
    cdef vector[char] learnt, deleted
    cdef vector[int] lbd
    cdef vector[int] scratch, scratch2

    def __init__(self, int num_vars, clauses, soft, order):
        cdef int nv = num_vars, v, idx
        cdef double span
        cdef vector[int] lits
        self.nv = nv
        self.assign.assign(nv + 1, -1)
        self.level.assign(nv + 1, 0)
        self.reason.assign(nv + 1, NO_REASON)
        self.tpos.assign(nv + 1, 0)
        self.phase.assign(nv + 1, 0)
        self.seen.assign(nv + 1, 0)
        self.lvl_seen.assign(nv + 2, 0)
        self.is_soft.assign(nv + 1, 0)
        self.activity.assign(nv + 1, 0.0)
        self.var_inc = 1.0
        self.qhead = 0
        self.watches.resize(2 * nv + 2)
        for v in soft:
            self.soft.push_back(v)
        self.nsoft = <int>self.soft.size()
        for v in soft:
            self.is_soft[v] = 1
        self.count_false = 0
        self.soft_assigned = 0
        self.limit = self.nsoft
        self.decisions = 0
        self.conflicts = 0
        self.n_learnts = 0
        self.max_learnts = max(2000, len(clauses) // 3)
        self.unsat = False

        if order:
            span = <double>len(order)
            for idx, v in enumerate(order):
                self.activity[v] = (span - idx) / span
        self.hpos.assign(nv + 1, -1)
        for v in range(1, nv + 1):
            self._heap_insert(v)

        for c in clauses:
            lits.clear()
            for x in c:
                lits.push_back(2 * x if x > 0 else -2 * x + 1)
            self._add_input(lits)

    # --- heap ordered by (activity desc, var asc) ------------------------

    cdef inline bint _before(self, int a, int b):
        cdef double aa = self.activity[a], ab = self.activity[b]
        return aa > ab or (aa == ab and a < b)

    cdef void _heap_up(self, int i):
        cdef int v = self.heap[i], parent
        while i > 0:
            parent = (i - 1) >> 1
            if not self._before(v, self.heap[parent]):
                break
            self.heap[i] = self.heap[parent]
            self.hpos[self.heap[i]] = i
            i = parent
        self.heap[i] = v
        self.hpos[v] = i

    cdef void _heap_down(self, int i):
        cdef int v = self.heap[i], child
        cdef int n = <int>self.heap.size()
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            if child + 1 < n and self._before(self.heap[child + 1], self.heap[child]):
                child += 1
            if not self._before(self.heap[child], v):
                break
            self.heap[i] = self.heap[child]
            self.hpos[self.heap[i]] = i
            i = child
        self.heap[i] = v
        self.hpos[v] = i

    cdef void _heap_insert(self, int v):
        self.hpos[v] = <int>self.heap.size()
        self.heap.push_back(v)
        self._heap_up(<int>self.heap.size() - 1)

    cdef int _heap_pop(self):
        cdef int top = self.heap[0]
        cdef int last = self.heap.back()
        self.heap.pop_back()
        self.hpos[top] = -1
        if self.heap.size() > 0:
            self.heap[0] = last
            self.hpos[last] = 0
            self._heap_down(0)
        return top

    cdef void _bump(self, int v):
        cdef int u
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.nv + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
        if self.hpos[v] >= 0:
            self._heap_up(self.hpos[v])

    # --- assignment ----------------------------------------------------------

    cdef inline int _value(self, int lit):
        cdef int a = self.assign[lit >> 1]
        return a if a < 0 else a ^ (lit & 1)

    cdef void _enqueue(self, int lit, int why):
        cdef int v = lit >> 1
        self.assign[v] = 1 - (lit & 1)
        self.level[v] = <int>self.trail_lim.size()
        self.reason[v] = why
        self.tpos[v] = <int>self.trail.size()
        self.trail.push_back(lit)
        if self.is_soft[v]:
            self.soft_assigned += 1
            if lit & 1:
                self.count_false += 1

    cdef void _backtrack(self, int lvl):
        cdef int stop, idx, lit, v
        if <int>self.trail_lim.size() <= lvl:
            return
        stop = self.trail_lim[lvl]
        idx = <int>self.trail.size() - 1
        while idx >= stop:
            lit = self.trail[idx]
            v = lit >> 1
            if self.is_soft[v]:
                self.soft_assigned -= 1
                if lit & 1:
                    self.count_false -= 1
            self.phase[v] = self.assign[v]
            self.assign[v] = -1
            self.reason[v] = NO_REASON
            if self.hpos[v] < 0:
                self._heap_insert(v)
            idx -= 1
        self.trail.resize(stop)
        self.trail_lim.resize(lvl)
        self.qhead = <int>self.trail.size()

    cdef void _add_input(self, vector[int]& lits):
        cdef int val
        if self.unsat:
            return
        if lits.size() == 0:
            self.unsat = True
            return
        if lits.size() == 1:
            val = self._value(lits[0])
            if val == 0:
                self.unsat = True
            elif val < 0:
                self._enqueue(lits[0], NO_REASON)
            return
        self._attach(lits, False, 0)

    cdef int _attach(self, vector[int]& lits, bint is_learnt, int lbd):
        cdef int ci = <int>self.clauses.size()
        self.clauses.push_back(lits)
        self.learnt.push_back(is_learnt)
        self.lbd.push_back(lbd)
        self.deleted.push_back(False)
        self.watches[lits[0]].push_back(ci)
        self.watches[lits[1]].push_back(ci)
        if is_learnt:
            self.n_learnts += 1
        return ci

    # --- propagation -------------------------------------------------------

    cdef int _propagate(self):
        cdef int p, false_lit, i, j, n, ci, first, a, t, q, aq, clen
        cdef bint found
        cdef vector[int]* ws
        cdef vector[int]* c
        while self.qhead < <int>self.trail.size():
            p = self.trail[self.qhead]
            self.qhead += 1
            if (p & 1) and self.is_soft[p >> 1] and self.count_false > self.limit:
                return BOUND_CONFLICT
            false_lit = p ^ 1
            ws = &self.watches[false_lit]
            i = 0
            j = 0
            n = <int>ws.size()
            while i < n:
                ci = ws[0][i]
                i += 1
                if self.deleted[ci]:
                    continue
                c = &self.clauses[ci]
                if c[0][0] == false_lit:
                    c[0][0] = c[0][1]
                    c[0][1] = false_lit
                first = c[0][0]
                a = self.assign[first >> 1]
                if a >= 0 and (a ^ (first & 1)) == 1:
                    ws[0][j] = ci
                    j += 1
                    continue
                found = False
                clen = <int>c.size()
                for t in range(2, clen):
                    q = c[0][t]
                    aq = self.assign[q >> 1]
                    if aq < 0 or (aq ^ (q & 1)) == 1:
                        c[0][1] = q
                        c[0][t] = false_lit
                        self.watches[q].push_back(ci)
                        found = True
                        break
                if found:
                    continue
                ws[0][j] = ci
                j += 1
                if a >= 0:
                    while i < n:
                        ws[0][j] = ws[0][i]
                        j += 1
                        i += 1
                    ws.resize(j)
                    return ci
                self._enqueue(first, ci)
            ws.resize(j)
        return NO_CONFLICT

    cdef void _bound_clause(self, int before, vector[int]& out):
        cdef int v
        out.clear()
        for v in self.soft:
            if self.assign[v] == 0 and self.tpos[v] < before:
                out.push_back(2 * v)

    cdef void _reason_lits(self, int v, vector[int]& out):
        cdef int why = self.reason[v]
        if why == BOUND_REASON:
            self._bound_clause(self.tpos[v], out)
        else:
            out = self.clauses[why]

    # --- conflict analysis -----------------------------------------------

    cdef int _analyze(self, vector[int]& confl, vector[int]& kept, int* lbd_out):
        cdef int cur = <int>self.trail_lim.size()
        cdef vector[int] learnt, touched, lits
        cdef int path = 0, p = -1, idx = <int>self.trail.size() - 1
        cdef int q, v, u, r, why, t, best, bt, tmp, nlev
        cdef size_t s
        learnt.push_back(0)
        lits = confl
        while True:
            for q in lits:
                v = q >> 1
                if p >= 0 and v == (p >> 1):
                    continue
                if not self.seen[v] and self.level[v] > 0:
                    self._bump(v)
                    self.seen[v] = 1
                    touched.push_back(v)
                    if self.level[v] >= cur:
                        path += 1
                    else:
                        learnt.push_back(q)
            while not self.seen[self.trail[idx] >> 1]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            self.seen[p >> 1] = 0
            path -= 1
            if path <= 0:
                break
            self._reason_lits(p >> 1, lits)
        learnt[0] = p ^ 1

        kept.clear()
        kept.push_back(learnt[0])
        for s in range(1, learnt.size()):
            q = learnt[s]
            v = q >> 1
            why = self.reason[v]
            if why == NO_REASON:
                kept.push_back(q)
                continue
            self._reason_lits(v, self.scratch2)
            for r in self.scratch2:
                u = r >> 1
                if u != v and not self.seen[u] and self.level[u] > 0:
                    kept.push_back(q)
                    break
        for v in touched:
            self.seen[v] = 0
        self.var_inc /= VAR_DECAY

        bt = 0
        if kept.size() > 1:
            best = 1
            for t in range(2, <int>kept.size()):
                if self.level[kept[t] >> 1] > self.level[kept[best] >> 1]:
                    best = t
            tmp = kept[1]
            kept[1] = kept[best]
            kept[best] = tmp
            bt = self.level[kept[1] >> 1]
        nlev = 0
        for q in kept:
            t = self.level[q >> 1]
            if not self.lvl_seen[t]:
                self.lvl_seen[t] = 1
                nlev += 1
        for q in kept:
            self.lvl_seen[self.level[q >> 1]] = 0
        lbd_out[0] = nlev
        return bt

    cdef bint _conflict(self, vector[int]& confl):
        cdef int top = 0, lv, q, bt, lbd, ci
        cdef vector[int] learnt
        for q in confl:
            lv = self.level[q >> 1]
            if lv > top:
                top = lv
        if top == 0:
            return False
        if top < <int>self.trail_lim.size():
            self._backtrack(top)
        bt = self._analyze(confl, learnt, &lbd)
        self._backtrack(bt)
        if learnt.size() == 1:
            self._enqueue(learnt[0], NO_REASON)
        else:
            ci = self._attach(learnt, True, lbd)
            self._enqueue(learnt[0], ci)
        return True

    cdef void _reduce_db(self):
        cdef vector[RankKey] cand
        cdef int ci, v, nc = <int>self.clauses.size()
        cdef size_t t
        for ci in range(nc):
            if not self.learnt[ci] or self.deleted[ci] or self.lbd[ci] <= 2:
                continue
            v = self.clauses[ci][0] >> 1
            if self.reason[v] == ci and self.assign[v] >= 0:
                continue
            cand.push_back(RankKey(-self.lbd[ci],
                                   pair[int, int](-<int>self.clauses[ci].size(), ci)))
        sort(cand.begin(), cand.end())
        for t in range(cand.size() // 2):
            ci = cand[t].second.second
            self.deleted[ci] = True
            self.clauses[ci].resize(2)
            self.n_learnts -= 1

    # --- main loop -----------------------------------------------------------

    cdef list _snapshot(self):
        cdef int v
        return [v if self.assign[v] == 1 else -v for v in range(1, self.nv + 1)]

    cdef int _fixed_false(self):
        cdef int v, total = 0
        for v in self.soft:
            if self.assign[v] == 0 and self.level[v] == 0:
                total += 1
        return total

    def search(self, initial, double deadline, long node_limit):
        """Return ``(status, model, cost, fixed_false, decisions, conflicts)``."""
        cdef list best = None
        cdef int best_cost = -1, confl, v, u
        cdef long restarts = 0, next_restart, since_restart = 0, ticks = 0
        cdef vector[int] lits
        if initial is not None:
            best = list(initial)
            best_cost = sum(1 for v in self.soft if best[v - 1] < 0)
            self.limit = best_cost - 1
            if self.limit < 0:
                return OPTIMAL, best, best_cost, 0, 0, 0
        if self.unsat:
            return UNSAT, None, -1, 0, 0, 0

        next_restart = RESTART_BASE * luby(0)
        while True:
            confl = self._propagate()
            if confl != NO_CONFLICT:
                self.conflicts += 1
                since_restart += 1
                ticks += 1
                if confl == BOUND_CONFLICT:
                    self._bound_clause(<int>self.trail.size(), lits)
                else:
                    lits = self.clauses[confl]
                if not self._conflict(lits):
                    break
                if (ticks & CHECK_MASK) == 0 and time.monotonic() > deadline:
                    return self._stopped(best, best_cost)
                continue

            if self.count_false == self.limit and self.soft_assigned < self.nsoft:
                for v in self.soft:
                    if self.assign[v] < 0:
                        self._enqueue(2 * v, BOUND_REASON)
                continue

            if since_restart >= next_restart:
                restarts += 1
                since_restart = 0
                next_restart = RESTART_BASE * luby(restarts)
                self._backtrack(0)
                continue
            if self.n_learnts >= self.max_learnts + <long>self.trail.size():
                self._reduce_db()
                self.max_learnts = self.max_learnts * 11 // 10

            v = 0
            while self.heap.size() > 0:
                u = self._heap_pop()
                if self.assign[u] < 0:
                    v = u
                    break
            if v == 0:
                best = self._snapshot()
                best_cost = self.count_false
                self.limit = best_cost - 1
                if self.limit < 0:
                    break
                ticks += 1
                self._bound_clause(<int>self.trail.size(), lits)
                if not self._conflict(lits):
                    break
                continue

            if node_limit >= 0 and self.decisions >= node_limit:
                self._heap_insert(v)
                return self._stopped(best, best_cost)
            ticks += 1
            if (ticks & CHECK_MASK) == 0 and time.monotonic() > deadline:
                self._heap_insert(v)
                return self._stopped(best, best_cost)
            self.decisions += 1
            self.trail_lim.push_back(<int>self.trail.size())
            if self.is_soft[v] or self.phase[v] == 1:
                self._enqueue(2 * v, NO_REASON)
            else:
                self._enqueue(2 * v + 1, NO_REASON)

        if best is None:
            return UNSAT, None, -1, 0, self.decisions, self.conflicts
        return OPTIMAL, best, best_cost, self._fixed_false(), self.decisions, self.conflicts

    cdef tuple _stopped(self, list best, int best_cost):
        status = UNKNOWN if best is None else FEASIBLE
        return status, best, best_cost, self._fixed_false(), self.decisions, self.conflicts


def search(num_vars, clauses, soft, order, initial, deadline, node_limit):
    return Kernel(num_vars, clauses, soft, order).search(initial, deadline, node_limit)
