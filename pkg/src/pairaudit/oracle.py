"""Reference priority queue and trace-level comparison against the pairing heap."""

from __future__ import annotations

import bisect

from sortedcontainers import SortedList

from . import _scan
from .analyzer import Report
from .heap import EmptyHeap, Heap, InvalidHandle, NotADecrease
from .potential import StickyTracker, total_potential
from .workloads import DecreaseKey, DeleteMin, GetMin, Insert


class NaiveQueue:
    """Sorted list of keys plus, per key, the ids holding it.

    ``id`` is the insertion index. O(log n) per operation amortized. Ties between equal
    keys resolve to the smaller id; the generated traces never contain ties,
    so the returned key sequence never depends on that choice.
    """

    def __init__(self):
        self.sorted_keys = SortedList()
        self.holders = {}      # key -> sorted ids currently holding it
        self.keys = {}         # id -> key
        self.next_id = 0

    def __len__(self):
        return len(self.sorted_keys)

    def _add(self, key, ident):
        self.sorted_keys.add(key)
        ids = self.holders.get(key)
        if ids is None:
            self.holders[key] = [ident]
        else:
            bisect.insort(ids, ident)
        self.keys[ident] = key

    def _drop(self, key, ident):
        self.sorted_keys.remove(key)
        ids = self.holders[key]
        ids.remove(ident)
        if not ids:
            del self.holders[key]
        del self.keys[ident]

    def insert(self, key):
        ident = self.next_id
        self.next_id += 1
        self._add(key, ident)
        return ident

    def get_min(self):
        if not self.sorted_keys:
            raise EmptyHeap('get_min on empty queue')
        return self.sorted_keys[0]

    def delete_min(self):
        if not self.sorted_keys:
            raise EmptyHeap('delete_min on empty queue')
        key = self.sorted_keys[0]
        self._drop(key, self.holders[key][0])
        return key

    def decrease_key(self, ident, key):
        if ident not in self.keys:
            raise InvalidHandle(ident)
        old = self.keys[ident]
        if not key < old:
            raise NotADecrease(f'{key!r} is not below current key {old!r}')
        self._drop(old, ident)
        self._add(key, ident)


def naive_insert(q, key):
    return q.insert(key)


def naive_get_min(q):
    return q.get_min()


def naive_delete_min(q):
    return q.delete_min()


def naive_decrease_key(q, ident, key):
    q.decrease_key(ident, key)


def run_and_compare(trace, subject=None, recount_every=0) -> Report:
    """Replay ``trace`` on a pairing heap and on :class:`NaiveQueue` in lockstep.

    ``subject`` may be a :class:`Heap` or an :class:`Analyzer` (a fresh
    integer-keyed heap by default). The report records the first position
    where the two disagree on a returned key or on raising an error.

    With ``recount_every`` set and a plain heap as subject, the sticky size
    is tracked alongside and every ``recount_every`` operations the heap is
    recounted from scratch: structure, size, and a potential inside the
    linear range.
    """
    if subject is None:
        subject = Heap(int_keys=True)
    rep = Report('oracle equivalence')
    sticky = StickyTracker() if recount_every and isinstance(subject, Heap) else None
    naive = NaiveQueue()
    handles = []
    outputs = 0
    for i, op in enumerate(trace):
        if sticky is not None and i and i % recount_every == 0:
            if not _recount(subject, sticky, i, rep):
                break
        t = type(op)
        try:
            if t is Insert:
                handles.append(subject.insert(op.key))
                naive.insert(op.key)
                if sticky is not None:
                    sticky.update(subject.n)
                continue
            if t is DecreaseKey:
                target = handles[op.id] if 0 <= op.id < len(handles) else -1
                got_err = want_err = None
                try:
                    subject.decrease_key(target, op.key)
                except (InvalidHandle, NotADecrease) as exc:
                    got_err = type(exc)
                try:
                    naive.decrease_key(op.id, op.key)
                except (InvalidHandle, NotADecrease) as exc:
                    want_err = type(exc)
                if got_err is not want_err:
                    rep.violations.append(f'op {i}: heap raised {got_err}, oracle {want_err}')
                    break
                if sticky is not None:
                    sticky.update(subject.n)
                continue
            if t is GetMin:
                got, want = _both(subject.get_min, naive.get_min)
            elif t is DeleteMin:
                got, want = _both(subject.delete_min, naive.delete_min)
            else:
                raise TypeError(f'not a trace op: {op!r}')
        except _Mismatch as m:
            rep.violations.append(f'op {i}: {m}')
            break
        if sticky is not None:
            sticky.update(subject.n)
        outputs += 1
        rep.checked += 1
        if got != want:
            rep.violations.append(f'op {i} ({t.__name__}): heap returned {got!r}, '
                                  f'oracle {want!r}')
            break
    else:
        if sticky is not None and not rep.violations:
            _recount(subject, sticky, len(trace), rep)
    rep.stats['outputs'] = outputs
    rep.stats['ops'] = len(trace)
    return rep


def _recount(heap, sticky, i, rep):
    rep.stats['recounts'] = rep.stats.get('recounts', 0) + 1
    status, node, count, _ = _scan.scan(heap, check_keys=True)
    if status != _scan.OK:
        rep.violations.append(f'op {i}: structure: {_scan.STATUS_TEXT[status]} at {node}')
        return False
    if count != heap.n:
        rep.violations.append(f'op {i}: {count} nodes reachable but n={heap.n}')
        return False
    phi = total_potential(heap, sticky.N).total
    if not 0 <= phi <= 1700 * heap.n + 2000:
        rep.violations.append(f'op {i}: potential {phi!r} outside the linear range, n={heap.n}')
        return False
    return True


class _Mismatch(Exception):
    pass


def _both(f, g):
    try:
        a = f()
    except EmptyHeap:
        a = EmptyHeap
    try:
        b = g()
    except EmptyHeap:
        b = EmptyHeap
    if (a is EmptyHeap) != (b is EmptyHeap):
        raise _Mismatch(f'heap gave {a!r}, oracle gave {b!r}')
    return a, b


__all__ = ['NaiveQueue', 'naive_insert', 'naive_get_min', 'naive_delete_min',
           'naive_decrease_key', 'run_and_compare']
