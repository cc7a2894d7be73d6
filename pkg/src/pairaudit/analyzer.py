"""Shadow a pairing heap and account for every operation against the potential.

:class:`Analyzer` owns a :class:`~pairaudit.heap.Heap` and listens to its
events. It keeps an incremental cache of binary-view subtree sizes, node
categories and node potentials (O(1) work per pairing, O(depth) per
decrease-key detach), so the exact potential is known after every operation
without a full recount. Full recounts happen only at checkpoints, where they
are compared against the cache.

Each operation becomes an :class:`OpRecord` in the :class:`Ledger`. Delete-mins
additionally carry a :class:`DeleteMinAudit` with the per-category pairing
tallies and the extreme values the lemma checks need. The ``check_*``
functions read a ledger and never modify it.
"""

from __future__ import annotations

import csv
import math
import random
from array import array
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from numba import njit

from . import _scan
from .heap import NIL, Heap, Pairing, Pass, RootRemoved
from .potential import (EDGE_LL, NODE_BASE, NODE_SCALE, SIZE_RATE, Category,
                        PotentialBreakdown, SizePair, StickyTracker,
                        categories_and_potentials, classic_potential,
                        size_potential, total_potential)

__all__ = [
    'Analyzer', 'InstrumentationGap', 'Ledger', 'OpRecord', 'PairingRecord',
    'DeleteMinAudit', 'Report', 'check_linear_range', 'check_pairing_lemmas',
    'check_amortized_bounds', 'check_telescoping', 'check_decomposition',
    'delete_min_ratio', 'classic_potential', 'BUCKETS',
]

SMALL, MIXED, LARGE = Category.SMALL, Category.MIXED, Category.LARGE
_CATS = tuple(Category)

BUCKETS = ('LL', 'MM', 'SS', 'ML', 'MS', 'LS')
LL, MM, SS, ML, MS, LS = range(6)
# unordered category pair -> bucket
_BUCKET = (
    (SS, MS, LS),
    (MS, MM, ML),
    (LS, ML, LL),
)

# slack on per-pairing inequalities; these are pure floating-point error
PAIR_TOL = 1e-3
# absolute tolerance for comparing two evaluations of the same potential
PHI_TOL = 1e-6
# insert bound: +400 node, +900 size, actual cost 2
INSERT_BOUND = NODE_BASE + SIZE_RATE + 2


@njit(cache=True)
def _classify_one(sl, sr, t, div):
    if sl > t:
        if sr > t:
            return 2, NODE_BASE + NODE_SCALE * math.log2(sl + sr + 1)
        return 1, NODE_BASE + NODE_SCALE * (sr / div) * math.log2(sl + sr + 1)
    if sr > t:
        return 1, NODE_BASE + NODE_SCALE * (sl / div) * math.log2(sl + sr + 1)
    return 0, 0.0


@njit(cache=True)
def _detach_kernel(left, right, parent, size, cat, phi, p, t, div):
    # p leaves with its left subtree; its right subtree r takes p's place
    # under q. Every binary ancestor of p loses |p| - |r| nodes and may
    # change category, and so may the right edge hanging off each of them.
    # Returns (old node potential, new node potential, change in -7 edges)
    # over the touched nodes; runs before the heap relinks anything.
    q = parent[p]
    r = right[p]
    was_right = right[q] == p
    r_s = size[r] if r != -1 else 0
    loss = size[p] - r_s

    before = 0
    if r != -1 and cat[p] == 2 and cat[r] == 2:
        before += 1
    old_phi = phi[p]
    a = q
    while a != -1:
        ra = right[a]
        if ra != -1 and cat[a] == 2 and cat[ra] == 2:
            before += 1
        old_phi += phi[a]
        size[a] -= loss
        a = parent[a]
    size[p] = loss
    lp = left[p]
    c, v = _classify_one(size[lp] if lp != -1 else 0, 0, t, div)
    cat[p] = c
    phi[p] = v
    new_phi = v
    # categories first, then edges, since an edge reads both ends
    a = q
    while a != -1:
        la = left[a]
        ra = right[a]
        if a == q:
            if was_right:
                ra = r
            else:
                la = r
        c, v = _classify_one(size[la] if la != -1 else 0, size[ra] if ra != -1 else 0,
                             t, div)
        cat[a] = c
        phi[a] = v
        new_phi += v
        a = parent[a]
    after = 0
    a = q
    while a != -1:
        ra = r if (a == q and was_right) else right[a]
        if ra != -1 and cat[a] == 2 and cat[ra] == 2:
            after += 1
        a = parent[a]
    return old_phi, new_phi, after - before


class InstrumentationGap(RuntimeError):
    """The heap performed pairings the analyzer was not told about."""


class PairingRecord(NamedTuple):
    pass_: Pass
    x: int
    y: int
    winner: int
    cat_x: Category
    cat_y: Category
    sizes_x: SizePair
    sizes_y: SizePair
    delta_node: float
    delta_edge: float
    # binary right subtree of y before the pairing
    y_right_size: int
    # mixed-large first-pass pairing whose y_right_size exceeds lg N
    normal: bool
    cat_winner: Category
    cat_loser: Category

    @property
    def bucket(self):
        return BUCKETS[_BUCKET[self.cat_x][self.cat_y]]

    def describe(self):
        return (f'{self.pass_.name} {self.bucket} pairing x={self.x} y={self.y} '
                f'winner={self.winner} cats={self.cat_x.letter}{self.cat_y.letter}'
                f'->{self.cat_winner.letter}{self.cat_loser.letter} '
                f'|x_L|,|x_R|={tuple(self.sizes_x)} |y_L|,|y_R|={tuple(self.sizes_y)} '
                f'dnode={self.delta_node:.6f} dedge={self.delta_edge:g}')


class DeleteMinAudit:
    """Per-delete-min pairing statistics the lemma checks are evaluated on."""

    __slots__ = (
        'kappa', 'psum', 'children', 'mm_merge_mixed', 'mm_merge_large',
        'mm_heavy', 'mm_second', 'ss_to_mixed', 'ml_second', 'ml_second_edge_losses',
        'ml_second_edge',
        'ml_abnormal', 'ml_window', 'ml_windows', 'ml_first_node',
        '_run', 'pairings',
    )

    def __init__(self, keep_pairings=False):
        # kappa[pass * 6 + bucket], pass 0 = first, 1 = second
        self.kappa = [0] * 12
        self.psum = [0.0] * 12
        self.children = 0
        # worst (largest) delta_node with the record that produced it
        self.mm_merge_mixed = None
        self.mm_merge_large = None
        self.mm_heavy = 0
        self.mm_second = None
        self.ss_to_mixed = [0, 0]
        self.ml_second = None
        self.ml_second_edge_losses = 0
        # net edge-potential change over all second-pass mixed-large pairings
        self.ml_second_edge = 0.0
        self.ml_abnormal = 0
        # worst (largest) edge-potential change over three consecutive normal
        # mixed-large first-pass pairings
        self.ml_window = None
        self.ml_windows = 0
        self.ml_first_node = 0.0
        self._run = []
        self.pairings = [] if keep_pairings else None

    def first(self, bucket):
        return self.kappa[bucket]

    def second(self, bucket):
        return self.kappa[6 + bucket]

    def first_pass_total(self):
        return sum(self.kappa[:6])


def _worse(current, value, rec):
    if current is None or value > current[0]:
        return (value, rec)
    return current


class NeumaierSum:
    """Running compensated sum, so long add/remove histories do not drift."""

    __slots__ = ('s', 'c')

    def __init__(self, value=0.0):
        self.s = value
        self.c = 0.0

    def add(self, v):
        s = self.s
        t = s + v
        if abs(s) >= abs(v):
            self.c += (s - t) + v
        else:
            self.c += (v - t) + s
        self.s = t

    @property
    def value(self):
        return self.s + self.c


@dataclass(eq=False)
class OpRecord:
    index: int
    kind: str
    n_before: int
    n_after: int
    N_before: int
    N_after: int
    actual: int
    phi_before: PotentialBreakdown
    phi_after: PotentialBreakdown
    amortized: float
    audit: Optional[DeleteMinAudit] = None
    # potential change split into: removed root, pairings, detach, size
    # potential at the old N, and reclassification when N moved
    parts: Optional[dict] = None
    pairing_records: Optional[list] = None

    def kappa_row(self):
        if self.audit is None:
            return [0] * 12
        return list(self.audit.kappa)


CSV_COLUMNS = (['op', 'kind', 'n', 'N', 'actual', 'phi_node', 'phi_edge', 'phi_size',
                'phi_total', 'amortized']
               + [f'k1_{b}' for b in BUCKETS] + [f'k2_{b}' for b in BUCKETS])


@dataclass
class Ledger:
    records: list = field(default_factory=list)
    label: str = ''

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def of_kind(self, kind):
        return [r for r in self.records if r.kind == kind]

    def write_csv(self, fh):
        w = csv.writer(fh, lineterminator='\n')
        w.writerow(CSV_COLUMNS)
        for r in self.records:
            p = r.phi_after
            w.writerow([r.index, r.kind, r.n_after, r.N_after, r.actual,
                        repr(p.node), repr(p.edge), repr(p.size), repr(p.total),
                        repr(r.amortized)] + r.kappa_row())


@dataclass
class Report:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def merge(self, other: Report):
        self.checked += other.checked
        self.violations.extend(other.violations)
        self.notes.extend(other.notes)
        for k, v in other.stats.items():
            if isinstance(v, (int, float)) and k in self.stats and not k.startswith('max'):
                self.stats[k] += v
            elif k.startswith('max') and k in self.stats:
                vals = [x for x in (self.stats[k], v) if x is not None]
                self.stats[k] = max(vals) if vals else None
            else:
                self.stats[k] = v
        return self

    def summary(self):
        status = 'PASS' if self.ok else 'FAIL'
        return f'{status} {self.name}: {self.checked} checked, {len(self.violations)} violations'


class Analyzer:
    """A pairing heap plus an exact running account of its potential.

    ``checkpoint_every`` operations (and after every delete-min unless
    ``check_delete_min`` is off) the structure is recounted from scratch and
    compared with the caches; potentials are recounted every
    ``checkpoint_every`` operations. Problems found there land in
    ``self.violations``.
    """

    def __init__(self, int_keys=True, checkpoint_every=1000, check_delete_min=True,
                 keep_pairings=False, label=''):
        self.heap = Heap(listener=self._on_event, int_keys=int_keys)
        self.sticky = StickyTracker()
        self.size = array('q')
        self.cat = bytearray()
        self.phi = array('d')
        self.node_sum = NeumaierSum()
        self.neg_edges = 0
        self.ledger = Ledger(label=label)
        self.checkpoint_every = checkpoint_every
        self.check_delete_min = check_delete_min
        self.keep_pairings = keep_pairings
        self.violations = []
        self.checkpoints = 0
        self._t = 0
        self._div = 1
        self._reset_op()

    # ---------------------------------------------------------------- state

    @property
    def n(self):
        return self.heap.n

    @property
    def N(self):
        return self.sticky.N

    def potential(self) -> PotentialBreakdown:
        return PotentialBreakdown.of(self.node_sum.value, float(EDGE_LL * self.neg_edges),
                                     float(size_potential(self.sticky.N, self.heap.n)))

    def sizes_of(self, h) -> SizePair:
        left, right, size = self.heap.left, self.heap.right, self.size
        l, r = left[h], right[h]
        return SizePair(size[l] if l != NIL else 0, size[r] if r != NIL else 0)

    def category_of(self, h) -> Category:
        return Category(self.cat[h])

    def _reset_op(self):
        self._events = 0
        self._audit = None
        self._records = None
        self._d_pairs = 0.0
        self._d_root = 0.0
        self._d_detach = 0.0

    def _grow(self, h):
        while len(self.size) <= h:
            self.size.append(1)
            self.cat.append(SMALL)
            self.phi.append(0.0)

    def _set_sticky_consts(self):
        t = self.sticky.lg
        self._t = t
        self._div = t if t > 0 else 1

    # --------------------------------------------------------------- events

    def _on_event(self, ev):
        self._events += 1
        if type(ev) is Pairing:
            self._on_pairing(ev)
        elif type(ev) is RootRemoved:
            self._events -= 1
            self._on_root_removed(ev.root)
        else:
            self._events -= 1
            self._on_detach(ev.node)

    def _classify(self, sl, sr):
        """(category, potential) for subtree sizes under the current N."""
        t = self._t
        if sl > t:
            if sr > t:
                return LARGE, NODE_BASE + NODE_SCALE * math.log2(sl + sr + 1)
            return MIXED, NODE_BASE + NODE_SCALE * (sr / self._div) * math.log2(sl + sr + 1)
        if sr > t:
            return MIXED, NODE_BASE + NODE_SCALE * (sl / self._div) * math.log2(sl + sr + 1)
        return SMALL, 0.0

    def _on_pairing(self, ev):
        pass_, x, y, w = ev
        h = self.heap
        left, right, parent = h.left, h.right, h.parent
        size, cat, phi = self.size, self.cat, self.phi
        if max(x, y) >= len(size):
            self._grow(max(x, y))
        l = y if w == x else x

        sibling = right[x] == y
        p = parent[x]
        via_right = p != NIL and right[p] == x
        yr = right[y]
        wl = left[w]
        ll = left[l]

        xl_s = size[left[x]] if left[x] != NIL else 0
        xr_s = size[right[x]] if right[x] != NIL else 0
        yl_s = size[left[y]] if left[y] != NIL else 0
        yr_s = size[yr] if yr != NIL else 0
        wl_s = size[wl] if wl != NIL else 0
        ll_s = size[ll] if ll != NIL else 0

        cx, cy = cat[x], cat[y]
        ox, oy = phi[x], phi[y]

        # loser keeps its left subtree and takes the winner's old left
        # subtree as its right; the winner takes the loser and keeps y's
        # right subtree (siblings) or nothing (separate roots)
        l_size = 1 + ll_s + wl_s
        w_right = yr if sibling else NIL
        wr_s = yr_s if sibling else 0
        cl, pl = self._classify(ll_s, wl_s)
        cw, pw = self._classify(l_size, wr_s)

        before = 0
        after = 0
        if via_right and cat[p] == LARGE:
            before += cx == LARGE
            after += cw == LARGE
        if sibling:
            before += cx == LARGE and cy == LARGE
        if yr != NIL and cat[yr] == LARGE:
            before += cy == LARGE
            if w_right != NIL:
                after += cw == LARGE
        if wl != NIL and cat[wl] == LARGE:
            after += cl == LARGE

        size[l] = l_size
        size[w] = 1 + l_size + wr_s
        cat[l] = cl
        cat[w] = cw
        phi[l] = pl
        phi[w] = pw
        ns = self.node_sum
        ns.add(pw)
        ns.add(pl)
        ns.add(-ox)
        ns.add(-oy)
        self.neg_edges += after - before
        d_node = (pw + pl) - (ox + oy)
        d_edge = float(EDGE_LL * (after - before))
        self._d_pairs += d_node + d_edge

        audit = self._audit
        if audit is None:
            return
        t = self._t
        normal = (pass_ is Pass.FIRST and yr_s > t
                  and ((cx == MIXED and cy == LARGE) or (cx == LARGE and cy == MIXED)))
        bucket = _BUCKET[cx][cy]
        # records are only built where a check may keep them
        if audit.pairings is not None or normal or bucket == MM or bucket == ML:
            rec = PairingRecord(pass_, x, y, w, _CATS[cx], _CATS[cy],
                                SizePair(xl_s, xr_s), SizePair(yl_s, yr_s), d_node, d_edge,
                                yr_s, normal, _CATS[cw], _CATS[cl])
            if audit.pairings is not None:
                audit.pairings.append(rec)
        else:
            rec = None
        if pass_ is Pass.FIRST:
            audit.kappa[bucket] += 1
            audit.psum[bucket] += d_node + d_edge
            if bucket == MM:
                if xl_s > t or yl_s > t:
                    audit.mm_heavy += 1
                elif cw == MIXED:
                    audit.mm_merge_mixed = _worse(audit.mm_merge_mixed, d_node, rec)
                elif cw == LARGE:
                    audit.mm_merge_large = _worse(audit.mm_merge_large, d_node, rec)
            elif bucket == SS:
                if cw != SMALL:
                    audit.ss_to_mixed[0] += 1
            elif bucket == ML:
                audit.ml_first_node += d_node
                if not normal:
                    audit.ml_abnormal += 1
            if normal:
                run = audit._run
                run.append(rec)
                if len(run) >= 3:
                    window = run[-3:]
                    audit.ml_windows += 1
                    audit.ml_window = _worse(audit.ml_window,
                                             sum(r.delta_edge for r in window), tuple(window))
                    del run[0]
            else:
                audit._run = []
        else:
            audit.kappa[6 + bucket] += 1
            audit.psum[6 + bucket] += d_node + d_edge
            if bucket == MM:
                audit.mm_second = _worse(audit.mm_second, d_node, rec)
            elif bucket == SS:
                if cw != SMALL:
                    audit.ss_to_mixed[1] += 1
            elif bucket == ML:
                audit.ml_second = _worse(audit.ml_second, d_node, rec)
                audit.ml_second_edge += d_edge
                if d_edge > PAIR_TOL:
                    audit.ml_second_edge_losses += 1

    def _on_root_removed(self, r):
        h = self.heap
        # the root has no right child and is nobody's right child, so only its
        # node potential leaves with it
        self._d_root -= self.phi[r]
        self.node_sum.add(-self.phi[r])
        if self._audit is not None:
            c = 0
            s = h.left[r]
            while s != NIL:
                c += 1
                s = h.right[s]
            self._audit.children = c
        self.size[r] = 0
        self.cat[r] = SMALL
        self.phi[r] = 0.0

    def _on_detach(self, p):
        h = self.heap
        size = np.frombuffer(self.size, dtype=np.int64)
        cat = np.frombuffer(self.cat, dtype=np.uint8)
        phi = np.frombuffer(self.phi, dtype=np.float64)
        try:
            old_phi, new_phi, d_neg = _detach_kernel(
                np.frombuffer(h.left, dtype=np.int64), np.frombuffer(h.right, dtype=np.int64),
                np.frombuffer(h.parent, dtype=np.int64), size, cat, phi, p,
                self._t, float(self._div))
        finally:
            del size, cat, phi
        ns = self.node_sum
        ns.add(-old_phi)
        ns.add(new_phi)
        self.neg_edges += d_neg
        self._d_detach += (new_phi - old_phi) + EDGE_LL * d_neg

    # ----------------------------------------------------------- rebuilding

    def rebuild(self):
        """Recompute every cache from a full traversal of the heap."""
        status, node, _, sizes = _scan.scan(self.heap, check_keys=False)
        if status != _scan.OK:
            raise ValueError(f'corrupt heap at node {node}: {_scan.STATUS_TEXT[status]}')
        cap = self.heap.capacity
        self.size = array('q', sizes.tolist())
        self._reclassify()
        assert len(self.size) == cap

    def _reclassify(self):
        """Recompute categories, potentials and -7 edges for the current N."""
        self._set_sticky_consts()
        h = self.heap
        cap = h.capacity
        if len(self.size) < cap:
            self._grow(cap - 1)
        sizes = np.array(self.size, dtype=np.int64)
        alive = np.frombuffer(h.alive, dtype=np.uint8).astype(bool)
        left = np.array(h.left, dtype=np.int64)
        right = np.array(h.right, dtype=np.int64)
        padded = np.append(sizes, 0)
        cat, phi = categories_and_potentials(padded[left], padded[right], self.sticky.N)
        cat[~alive] = 0
        phi[~alive] = 0.0
        large = cat == LARGE
        has_right = right != NIL
        right_large = np.zeros_like(large)
        right_large[has_right] = large[right[has_right]]
        self.cat = bytearray(cat.astype(np.uint8).tobytes())
        self.phi = array('d', phi.tolist())
        self.node_sum = NeumaierSum(math.fsum(self.phi))
        self.neg_edges = int(np.count_nonzero(large & right_large))

    # ------------------------------------------------------------ operations

    def _begin(self, kind):
        self._reset_op()
        if kind == 'delete_min':
            self._audit = DeleteMinAudit(self.keep_pairings)
        return (self.heap.n, self.sticky.N, self.potential(), self.heap.pairings)

    def _finish(self, kind, pre, sticky_settle=False):
        n0, N0, phi0, pairings0 = pre
        h = self.heap
        performed = h.pairings - pairings0
        if performed != self._events:
            raise InstrumentationGap(
                f'{kind}: heap performed {performed} pairings, analyzer saw {self._events}')
        actual = 1 + performed
        mid = self.potential()
        changed = self.sticky.settle(h.n) if sticky_settle else self.sticky.update(h.n)
        if changed:
            self._reclassify()
        phi1 = self.potential()
        parts = None
        if kind in ('delete_min', 'decrease_key', 'insert'):
            parts = {
                'root': self._d_root,
                'pairings': self._d_pairs,
                'detach': self._d_detach,
                'size': float(size_potential(N0, h.n) - size_potential(N0, n0)),
                'sticky': phi1.total - mid.total,
            }
        rec = OpRecord(len(self.ledger.records), kind, n0, h.n, N0, self.sticky.N, actual,
                       phi0, phi1, actual + phi1.total - phi0.total, self._audit, parts)
        if self._audit is not None and self._audit.pairings is not None:
            rec.pairing_records = self._audit.pairings
        self.ledger.records.append(rec)
        self._reset_op()
        if self.checkpoint_every and len(self.ledger.records) % self.checkpoint_every == 0:
            self.checkpoint(potential=True)
        elif kind == 'delete_min' and self.check_delete_min:
            self.checkpoint(potential=False)
        return rec

    def insert(self, key):
        pre = self._begin('insert')
        handle = self.heap.insert(key)
        self._grow(handle)
        self._finish('insert', pre)
        return handle

    def get_min(self):
        pre = self._begin('get_min')
        key = self.heap.get_min()
        self._finish('get_min', pre)
        return key

    def delete_min(self):
        pre = self._begin('delete_min')
        key = self.heap.delete_min()
        self._finish('delete_min', pre)
        return key

    def decrease_key(self, handle, key):
        pre = self._begin('decrease_key')
        self.heap.decrease_key(handle, key)
        self._finish('decrease_key', pre)

    def merge(self, other: Analyzer) -> int:
        """Absorb ``other``'s heap. Returns the handle offset for its nodes.

        The new sticky size is the larger of the two, settled against the
        combined size. Merge is recorded in the ledger but no bound applies.
        """
        if other is self:
            raise ValueError('cannot merge an analyzer with itself')
        phi_other = other.potential()
        n_other = other.heap.n
        self._reset_op()
        h = self.heap
        n0, N0, phi_self, pairings0 = h.n, self.sticky.N, self.potential(), h.pairings
        phi0 = PotentialBreakdown.of(phi_self.node + phi_other.node,
                                     phi_self.edge + phi_other.edge,
                                     phi_self.size + phi_other.size)
        h.listener = None
        try:
            offset = h.merge(other.heap)
        finally:
            h.listener = self._on_event
        self._events = h.pairings - pairings0
        self.sticky.N = max(self.sticky.N, other.sticky.N)
        self.sticky.settle(h.n)
        self.rebuild()
        other._clear()
        self._finish('merge', (n0 + n_other, N0, phi0, pairings0), sticky_settle=True)
        return offset

    def _clear(self):
        self.sticky = StickyTracker()
        self.size = array('q')
        self.cat = bytearray()
        self.phi = array('d')
        self.node_sum = NeumaierSum()
        self.neg_edges = 0
        self._set_sticky_consts()
        self._reset_op()

    # ------------------------------------------------------------ checking

    def checkpoint(self, potential=True):
        """Recount the heap and compare with every cache."""
        self.checkpoints += 1
        h = self.heap
        idx = len(self.ledger.records)
        status, node, count = _scan.verify(h, self.size)
        if status == _scan.SIZE_MISMATCH:
            self.violations.append(f'op {idx}: size cache differs from recount at {node}')
            return
        if status != _scan.OK:
            self.violations.append(f'op {idx}: structure: {_scan.STATUS_TEXT[status]} at {node}')
            return
        if count != h.n:
            self.violations.append(f'op {idx}: {count} nodes reachable but n={h.n}')
            return
        if h.n and self.size[h.root] != h.n:
            self.violations.append(f'op {idx}: cached root size {self.size[h.root]} != n={h.n}')
        N, n = self.sticky.N, h.n
        if N < 1 or N & (N - 1):
            self.violations.append(f'op {idx}: sticky size {N} not a power of two')
        if n >= 1 and not (N <= 2 * n and n < 2 * N):
            self.violations.append(f'op {idx}: sticky size {N} out of range for n={n}')
        if n >= 4 and self.cat[h.root] != MIXED:
            self.violations.append(
                f'op {idx}: root is {Category(self.cat[h.root]).name} with n={n}')
        if potential:
            fresh = total_potential(h, N)
            mine = self.potential()
            for part in ('node', 'edge', 'size', 'total'):
                a, b = getattr(fresh, part), getattr(mine, part)
                if abs(a - b) > PHI_TOL:
                    self.violations.append(
                        f'op {idx}: incremental {part} potential {b!r} != recount {a!r}')


# ---------------------------------------------------------------- checks

def _lg(n):
    return math.log2(n) if n > 0 else 0.0


def check_linear_range(ledger, per_node=1700, slack=2000) -> Report:
    """Every recorded state satisfies ``0 <= total <= per_node * n + slack``."""
    rep = Report('linear range')
    worst = 0.0
    states = [(ledger.records[0].n_before, ledger.records[0].phi_before)] if ledger.records else []
    states += [(r.n_after, r.phi_after) for r in ledger.records]
    for i, (n, phi) in enumerate(states):
        rep.checked += 1
        if phi.total < -PHI_TOL or phi.total > per_node * n + slack:
            rep.violations.append(f'state {i}: n={n} total={phi.total!r}')
        if n > 0:
            worst = max(worst, phi.total / n)
    rep.stats['max_total_per_n'] = worst
    return rep


def _gate(r):
    return r.n_before >= 4 and r.N_before >= 4


def check_pairing_lemmas(ledger) -> Report:
    """Per-category potential inequalities for every gated delete-min."""
    rep = Report('pairing lemmas')
    totals = [0] * 12
    first_pass = 0
    ml_excess = 0
    per_check = dict.fromkeys('abcdefghijk', 0)
    ml2_net = 0.0
    for r in ledger.records:
        a = r.audit
        if a is None or not _gate(r):
            continue
        rep.checked += 1
        for i in range(12):
            totals[i] += a.kappa[i]
        first_pass += a.first_pass_total()
        t = r.N_before.bit_length() - 1
        lgn = _lg(r.n_before)
        where = f'op {r.index} (n={r.n_before}, N={r.N_before})'

        def bad(tag, msg, context=None):
            if context is not None:
                if isinstance(context, tuple):
                    msg += ' | ' + ' ; '.join(c.describe() for c in context)
                else:
                    msg += ' | ' + context.describe()
            rep.violations.append(f'({tag}) {where}: {msg}')
            per_check[tag] += 1

        k_ll = a.first(LL)
        bound = -393 * k_ll + 200 * lgn + 400
        if a.psum[LL] > bound + PAIR_TOL:
            bad('a', f'p_LL={a.psum[LL]:.3f} > {bound:.3f} with kappa_LL={k_ll}')
        if a.second(LL):
            bad('b', f'{a.second(LL)} large-large pairings in the second pass')
        if a.mm_merge_mixed and a.mm_merge_mixed[0] > -150 + PAIR_TOL:
            bad('c', f'mixed-mixed to mixed released only {-a.mm_merge_mixed[0]:.3f}',
                a.mm_merge_mixed[1])
        if a.mm_merge_large and a.mm_merge_large[0] > -300 + PAIR_TOL:
            bad('d', f'mixed-mixed to large released only {-a.mm_merge_large[0]:.3f}',
                a.mm_merge_large[1])
        if a.mm_heavy > 1:
            bad('e', f'{a.mm_heavy} first-pass mixed-mixed pairings with a left-heavy node')
        if a.mm_second and a.mm_second[0] > PAIR_TOL:
            bad('f', f'second-pass mixed-mixed gained {a.mm_second[0]:.3f}', a.mm_second[1])
        if a.first(MS) + a.first(LS) > 2:
            bad('g', f'kappa_MS + kappa_LS = {a.first(MS) + a.first(LS)} > 2')
        for pass_no, k_ss in enumerate((a.first(SS), a.second(SS))):
            if k_ss >= t + 1:
                bad('h', f'{k_ss} small-small pairings in pass {pass_no + 1}, lg N = {t}')
            if a.ss_to_mixed[pass_no] > 1:
                bad('h', f'{a.ss_to_mixed[pass_no]} small-small winners turned non-small '
                         f'in pass {pass_no + 1}')
        if a.ml_second and a.ml_second[0] > PAIR_TOL:
            bad('i', f'second-pass mixed-large gained {a.ml_second[0]:.3f} node potential',
                a.ml_second[1])
        ml2_net = max(ml2_net, a.ml_second_edge)
        if a.ml_second_edge_losses > 1:
            bad('i', f'{a.ml_second_edge_losses} second-pass mixed-large edge losses '
                     f'(net edge change {a.ml_second_edge:+g})')
        if a.ml_abnormal > 1:
            bad('j', f'{a.ml_abnormal} abnormal first-pass mixed-large pairings')
        if a.ml_window and a.ml_window[0] > EDGE_LL + PAIR_TOL:
            bad('k', f'three normal mixed-large pairings changed edge potential by '
                     f'{a.ml_window[0]:g}', a.ml_window[1])
        if a.ml_first_node > 200 * lgn + 800:
            ml_excess += 1
            rep.notes.append(f'{where}: first-pass mixed-large node potential sum '
                             f'{a.ml_first_node:.1f} exceeds 200 lg n + 800')
    for i, b in enumerate(BUCKETS):
        rep.stats[f'k1_{b}'] = totals[i]
        rep.stats[f'k2_{b}'] = totals[6 + i]
    rep.stats['first_pass_pairings'] = first_pass
    rep.stats['ml_node_excess'] = ml_excess
    rep.stats['max_ml2_net_edge'] = ml2_net
    for tag, c in per_check.items():
        rep.stats[f'violations_{tag}'] = c
    return rep


def delete_min_ratio(r):
    return r.amortized / (_lg(r.n_before) + 2)


def check_amortized_bounds(ledger, c_dm=None) -> Report:
    """Insert <= 1302, decrease-key <= 1000 (lg n + 2), delete-min <= c_dm (lg n + 2).

    Without ``c_dm`` only the delete-min ratio is measured (``max_dm_ratio``).
    get-min must cost exactly 1. Merges are not bounded.
    """
    rep = Report('amortized bounds')
    max_ratio = -math.inf
    max_insert = -math.inf
    max_dk = -math.inf
    for r in ledger.records:
        if r.kind == 'get_min':
            rep.checked += 1
            if r.amortized != 1 or r.phi_before != r.phi_after:
                rep.violations.append(f'op {r.index}: get_min amortized {r.amortized!r}')
            continue
        if r.kind == 'merge' or r.n_before < 4:
            continue
        rep.checked += 1
        if r.kind == 'insert':
            max_insert = max(max_insert, r.amortized)
            if r.amortized > INSERT_BOUND + PAIR_TOL:
                rep.violations.append(f'op {r.index}: insert amortized {r.amortized:.3f} '
                                      f'(n={r.n_before}, N={r.N_before})')
        elif r.kind == 'decrease_key':
            bound = 1000 * (_lg(r.n_before) + 2)
            max_dk = max(max_dk, r.amortized / (_lg(r.n_before) + 2))
            if r.amortized > bound:
                rep.violations.append(f'op {r.index}: decrease-key amortized '
                                      f'{r.amortized:.3f} > {bound:.3f}')
        elif r.kind == 'delete_min':
            ratio = delete_min_ratio(r)
            max_ratio = max(max_ratio, ratio)
            if c_dm is not None and ratio > c_dm:
                rep.violations.append(f'op {r.index}: delete-min amortized {r.amortized:.3f} '
                                      f'is {ratio:.3f} (lg n + 2), limit {c_dm:.3f}')
    # None when no operation of that kind was measured
    rep.stats['max_insert'] = max_insert if max_insert > -math.inf else None
    rep.stats['max_dk_ratio'] = max_dk if max_dk > -math.inf else None
    rep.stats['max_dm_ratio'] = max_ratio if max_ratio > -math.inf else None
    return rep


def check_telescoping(ledger, ranges=100, seed=0) -> Report:
    """Sum of actual costs equals start potential - end potential + sum of amortized."""
    rep = Report('telescoping')
    recs = ledger.records
    if not recs:
        return rep
    rng = random.Random(seed)
    spans = [(0, len(recs) - 1)]
    for _ in range(ranges - 1):
        i = rng.randrange(len(recs))
        j = rng.randrange(i, len(recs))
        spans.append((i, j))
    for i, j in spans:
        rep.checked += 1
        actual = sum(r.actual for r in recs[i:j + 1])
        amort = math.fsum(r.amortized for r in recs[i:j + 1])
        rhs = recs[i].phi_before.total - recs[j].phi_after.total + amort
        if abs(actual - rhs) > 1e-6 * (j - i + 1):
            rep.violations.append(f'range {i}..{j}: actual {actual} vs {rhs!r}')
    for prev, cur in zip(recs, recs[1:]):
        if prev.phi_after != cur.phi_before:
            rep.violations.append(f'op {cur.index}: potential before differs from previous after')
            break
    return rep


def check_decomposition(ledger) -> Report:
    """Root removal + pairings + detach + size + sticky parts add up to the change."""
    rep = Report('potential decomposition')
    for r in ledger.records:
        if r.parts is None:
            continue
        rep.checked += 1
        delta = r.phi_after.total - r.phi_before.total
        total = math.fsum(r.parts.values())
        if abs(delta - total) > PHI_TOL * max(1.0, abs(delta) / 1e3):
            rep.violations.append(f'op {r.index} {r.kind}: parts sum {total!r} != {delta!r}')
        if r.kind == 'delete_min' and r.n_before >= 4 and abs(r.parts['root'] + 400) > PHI_TOL:
            rep.violations.append(f'op {r.index}: root removal released {-r.parts["root"]!r}')
    return rep
