"""Pure-Python search kernel; the fallback when the compiled one is missing.

The algorithm is model-improving branch and bound for partial MAX-SAT
with unit-weight positive soft clauses: depth-first search with unit
propagation over the hard clauses plus a bound ``#false softs <= limit``,
where ``limit`` is one below the incumbent's cost. Conflicts (from clauses
or from the bound) are analysed to a first-UIP learned clause and the
search backjumps. When the search space is exhausted the incumbent is
optimal. ``_ckernel.pyx`` implements the same steps in the same order, so
both kernels return identical results and counters.

Literals are encoded internally as ``2*v`` (x_v) and ``2*v + 1`` (not x_v).
"""

import time

OPTIMAL, FEASIBLE, UNKNOWN, UNSAT = 0, 1, 2, 3

_NO_REASON = -1
_BOUND_REASON = -2
_NO_CONFLICT = -1
_BOUND_CONFLICT = -2
_CHECK_MASK = 255
_VAR_DECAY = 0.95
_RESTART_BASE = 100


def _luby(i):
    # i-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 ...
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class Kernel:
    def __init__(self, num_vars, clauses, soft, order):
        nv = num_vars
        self.nv = nv
        self.assign = [-1] * (nv + 1)
        self.level = [0] * (nv + 1)
        self.reason = [_NO_REASON] * (nv + 1)
        self.tpos = [0] * (nv + 1)
        self.phase = [0] * (nv + 1)
        self.seen = [0] * (nv + 1)
        self.is_soft = [0] * (nv + 1)
        self.activity = [0.0] * (nv + 1)
        self.var_inc = 1.0
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.clauses = []
        self.learnt = []
        self.lbd = []
        self.deleted = []
        self.watches = [[] for _ in range(2 * nv + 2)]
        self.soft = list(soft)
        self.nsoft = len(self.soft)
        for v in self.soft:
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
            span = float(len(order))
            for idx, v in enumerate(order):
                self.activity[v] = (span - idx) / span
        self.heap = []
        self.hpos = [-1] * (nv + 1)
        for v in range(1, nv + 1):
            self._heap_insert(v)

        for c in clauses:
            lits = []
            for x in c:
                lits.append(2 * x if x > 0 else -2 * x + 1)
            self._add_input(lits)

    # --- heap ordered by (activity desc, var asc) --------------------------

    def _before(self, a, b):
        act = self.activity
        return act[a] > act[b] or (act[a] == act[b] and a < b)

    def _heap_up(self, i):
        heap, hpos = self.heap, self.hpos
        v = heap[i]
        while i > 0:
            parent = (i - 1) >> 1
            if not self._before(v, heap[parent]):
                break
            heap[i] = heap[parent]
            hpos[heap[i]] = i
            i = parent
        heap[i] = v
        hpos[v] = i

    def _heap_down(self, i):
        heap, hpos = self.heap, self.hpos
        v = heap[i]
        n = len(heap)
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            if child + 1 < n and self._before(heap[child + 1], heap[child]):
                child += 1
            if not self._before(heap[child], v):
                break
            heap[i] = heap[child]
            hpos[heap[i]] = i
            i = child
        heap[i] = v
        hpos[v] = i

    def _heap_insert(self, v):
        self.hpos[v] = len(self.heap)
        self.heap.append(v)
        self._heap_up(len(self.heap) - 1)

    def _heap_pop(self):
        heap = self.heap
        top = heap[0]
        last = heap.pop()
        self.hpos[top] = -1
        if heap:
            heap[0] = last
            self.hpos[last] = 0
            self._heap_down(0)
        return top

    def _bump(self, v):
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.nv + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
        if self.hpos[v] >= 0:
            self._heap_up(self.hpos[v])

    # --- assignment ---------------------------------------------------------

    def _value(self, lit):
        a = self.assign[lit >> 1]
        return a if a < 0 else a ^ (lit & 1)

    def _enqueue(self, lit, why):
        v = lit >> 1
        self.assign[v] = 1 - (lit & 1)
        self.level[v] = len(self.trail_lim)
        self.reason[v] = why
        self.tpos[v] = len(self.trail)
        self.trail.append(lit)
        if self.is_soft[v]:
            self.soft_assigned += 1
            if lit & 1:
                self.count_false += 1

    def _backtrack(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        trail = self.trail
        for idx in range(len(trail) - 1, stop - 1, -1):
            lit = trail[idx]
            v = lit >> 1
            if self.is_soft[v]:
                self.soft_assigned -= 1
                if lit & 1:
                    self.count_false -= 1
            self.phase[v] = self.assign[v]
            self.assign[v] = -1
            self.reason[v] = _NO_REASON
            if self.hpos[v] < 0:
                self._heap_insert(v)
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = len(trail)

    def _add_input(self, lits):
        if self.unsat:
            return
        if not lits:
            self.unsat = True
            return
        if len(lits) == 1:
            val = self._value(lits[0])
            if val == 0:
                self.unsat = True
            elif val < 0:
                self._enqueue(lits[0], _NO_REASON)
            return
        self._attach(lits, False, 0)

    def _attach(self, lits, learnt, lbd):
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.learnt.append(learnt)
        self.lbd.append(lbd)
        self.deleted.append(False)
        self.watches[lits[0]].append(ci)
        self.watches[lits[1]].append(ci)
        if learnt:
            self.n_learnts += 1
        return ci

    # --- propagation ----------------------------------------------------------

    def _propagate(self):
        trail = self.trail
        assign = self.assign
        clauses = self.clauses
        deleted = self.deleted
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            if (p & 1) and self.is_soft[p >> 1] and self.count_false > self.limit:
                return _BOUND_CONFLICT
            false_lit = p ^ 1
            ws = self.watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                if deleted[ci]:
                    continue
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                a = assign[first >> 1]
                if a >= 0 and (a ^ (first & 1)) == 1:
                    ws[j] = ci
                    j += 1
                    continue
                found = False
                for t in range(2, len(c)):
                    q = c[t]
                    aq = assign[q >> 1]
                    if aq < 0 or (aq ^ (q & 1)) == 1:
                        c[1] = q
                        c[t] = false_lit
                        self.watches[q].append(ci)
                        found = True
                        break
                if found:
                    continue
                ws[j] = ci
                j += 1
                if a >= 0:
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    return ci
                self._enqueue(first, ci)
            del ws[j:]
        return _NO_CONFLICT

    def _bound_clause(self, before):
        # positive literals of the false softs assigned before trail position `before`
        out = []
        for v in self.soft:
            if self.assign[v] == 0 and self.tpos[v] < before:
                out.append(2 * v)
        return out

    def _reason_lits(self, v):
        why = self.reason[v]
        if why == _BOUND_REASON:
            return self._bound_clause(self.tpos[v])
        return self.clauses[why]

    # --- conflict analysis --------------------------------------------------

    def _analyze(self, confl):
        seen = self.seen
        level = self.level
        trail = self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        touched = []
        path = 0
        p = -1
        idx = len(trail) - 1
        lits = confl
        while True:
            for q in lits:
                v = q >> 1
                if p >= 0 and v == (p >> 1):
                    continue
                if not seen[v] and level[v] > 0:
                    self._bump(v)
                    seen[v] = 1
                    touched.append(v)
                    if level[v] >= cur:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            seen[p >> 1] = 0
            path -= 1
            if path <= 0:
                break
            lits = self._reason_lits(p >> 1)
        learnt[0] = p ^ 1

        # drop literals implied by the rest of the clause
        kept = [learnt[0]]
        for q in learnt[1:]:
            v = q >> 1
            why = self.reason[v]
            if why == _NO_REASON:
                kept.append(q)
                continue
            for r in self._reason_lits(v):
                u = r >> 1
                if u != v and not seen[u] and level[u] > 0:
                    kept.append(q)
                    break
        for v in touched:
            seen[v] = 0
        self.var_inc /= _VAR_DECAY

        bt = 0
        if len(kept) > 1:
            best = 1
            for t in range(2, len(kept)):
                if level[kept[t] >> 1] > level[kept[best] >> 1]:
                    best = t
            kept[1], kept[best] = kept[best], kept[1]
            bt = level[kept[1] >> 1]
        levels = set()
        for q in kept:
            levels.add(level[q >> 1])
        return kept, bt, len(levels)

    def _conflict(self, confl):
        # returns False once the conflict is at level 0 (search exhausted)
        top = 0
        for q in confl:
            lv = self.level[q >> 1]
            if lv > top:
                top = lv
        if top == 0:
            return False
        if top < len(self.trail_lim):
            self._backtrack(top)
        learnt, bt, lbd = self._analyze(confl)
        self._backtrack(bt)
        if len(learnt) == 1:
            self._enqueue(learnt[0], _NO_REASON)
        else:
            ci = self._attach(learnt, True, lbd)
            self._enqueue(learnt[0], ci)
        return True

    def _reduce_db(self):
        cand = []
        for ci in range(len(self.clauses)):
            if not self.learnt[ci] or self.deleted[ci] or self.lbd[ci] <= 2:
                continue
            c = self.clauses[ci]
            v = c[0] >> 1
            if self.reason[v] == ci and self.assign[v] >= 0:
                continue
            cand.append((-self.lbd[ci], -len(c), ci))
        cand.sort()
        for t in range(len(cand) // 2):
            ci = cand[t][2]
            self.deleted[ci] = True
            self.clauses[ci] = [self.clauses[ci][0], self.clauses[ci][1]]
            self.n_learnts -= 1

    # --- main loop ------------------------------------------------------------

    def _snapshot(self):
        return [v if self.assign[v] == 1 else -v for v in range(1, self.nv + 1)]

    def _fixed_false(self):
        return sum(1 for v in self.soft if self.assign[v] == 0 and self.level[v] == 0)

    def search(self, initial, deadline, node_limit):
        """Return ``(status, model, cost, fixed_false, decisions, conflicts)``."""
        best = None
        best_cost = -1
        if initial is not None:
            best = list(initial)
            best_cost = sum(1 for v in self.soft if best[v - 1] < 0)
            self.limit = best_cost - 1
            if self.limit < 0:
                return OPTIMAL, best, best_cost, 0, 0, 0
        if self.unsat:
            return UNSAT, None, -1, 0, 0, 0

        restarts = 0
        next_restart = _RESTART_BASE * _luby(0)
        since_restart = 0
        ticks = 0
        while True:
            confl = self._propagate()
            if confl != _NO_CONFLICT:
                self.conflicts += 1
                since_restart += 1
                ticks += 1
                if confl == _BOUND_CONFLICT:
                    lits = self._bound_clause(len(self.trail))
                else:
                    lits = list(self.clauses[confl])
                if not self._conflict(lits):
                    break
                if (ticks & _CHECK_MASK) == 0 and time.monotonic() > deadline:
                    return self._stopped(best, best_cost)
                continue

            if self.count_false == self.limit and self.soft_assigned < self.nsoft:
                for v in self.soft:
                    if self.assign[v] < 0:
                        self._enqueue(2 * v, _BOUND_REASON)
                continue

            if since_restart >= next_restart:
                restarts += 1
                since_restart = 0
                next_restart = _RESTART_BASE * _luby(restarts)
                self._backtrack(0)
                continue
            if self.n_learnts >= self.max_learnts + len(self.trail):
                self._reduce_db()
                self.max_learnts = self.max_learnts * 11 // 10

            v = 0
            while self.heap:
                u = self._heap_pop()
                if self.assign[u] < 0:
                    v = u
                    break
            if v == 0:
                # complete assignment: new incumbent, then demand a better one
                best = self._snapshot()
                best_cost = self.count_false
                self.limit = best_cost - 1
                if self.limit < 0:
                    break
                ticks += 1
                if not self._conflict(self._bound_clause(len(self.trail))):
                    break
                continue

            if node_limit >= 0 and self.decisions >= node_limit:
                self._heap_insert(v)
                return self._stopped(best, best_cost)
            ticks += 1
            if (ticks & _CHECK_MASK) == 0 and time.monotonic() > deadline:
                self._heap_insert(v)
                return self._stopped(best, best_cost)
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            if self.is_soft[v] or self.phase[v] == 1:
                self._enqueue(2 * v, _NO_REASON)
            else:
                self._enqueue(2 * v + 1, _NO_REASON)

        if best is None:
            return UNSAT, None, -1, 0, self.decisions, self.conflicts
        return OPTIMAL, best, best_cost, self._fixed_false(), self.decisions, self.conflicts

    def _stopped(self, best, best_cost):
        status = UNKNOWN if best is None else FEASIBLE
        return status, best, best_cost, self._fixed_false(), self.decisions, self.conflicts


def search(num_vars, clauses, soft, order, initial, deadline, node_limit):
    return Kernel(num_vars, clauses, soft, order).search(initial, deadline, node_limit)
