"""Linear-range potential of a pairing heap.

The potential has three parts:

* node potential: each node is small, mixed or large depending on whether its
  binary-view subtrees hold more than ``lg N`` nodes, where ``N`` is the
  sticky size; small nodes are worth 0, the others 400 plus a scaled
  ``100 lg |x|`` term;
* edge potential: -7 on every binary-view edge from a large node to its large
  right child;
* size potential: ``900 |N - n|``.

Sticky sizes are powers of two, so ``lg N`` is an exact integer and every
category threshold is an integer comparison.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _scan

NODE_BASE = 400
NODE_SCALE = 100
EDGE_LL = -7
SIZE_RATE = 900


class Category(enum.IntEnum):
    SMALL = 0
    MIXED = 1
    LARGE = 2

    @property
    def letter(self):
        return 'SML'[self]


class SizePair(NamedTuple):
    left: int
    right: int

    @property
    def total(self):
        return self.left + self.right + 1


@dataclass(frozen=True)
class PotentialBreakdown:
    node: float
    edge: float
    size: float
    total: float

    @classmethod
    def of(cls, node, edge, size):
        return cls(node, edge, size, node + edge + size)


def lg_sticky(N):
    """Exact ``lg N`` for a power of two."""
    if N < 1 or N & (N - 1):
        raise ValueError(f'sticky size must be a power of two, got {N}')
    return N.bit_length() - 1


def update_sticky(N, n):
    """One sticky-size step after an update that moved ``n`` by at most one.

    Doubles when ``n >= 2N`` and halves when ``n <= N/2``, never below 1.
    """
    if n >= 2 * N:
        return 2 * N
    if N > 1 and 2 * n <= N:
        return N // 2
    return N


def settle_sticky(N, n):
    """Apply the sticky rule until it stops moving (used after a merge)."""
    while True:
        nxt = update_sticky(N, n)
        if nxt == N:
            return N
        N = nxt


class StickyTracker:
    """Sticky size ``N``: starts at 1 and only ever doubles or halves."""

    def __init__(self, N=1):
        lg_sticky(N)
        self.N = N

    def __repr__(self):
        return f'StickyTracker(N={self.N})'

    @property
    def lg(self):
        return self.N.bit_length() - 1

    def update(self, n):
        """Returns True when ``N`` changed."""
        new = update_sticky(self.N, n)
        changed = new != self.N
        self.N = new
        return changed

    def settle(self, n):
        new = settle_sticky(self.N, n)
        changed = new != self.N
        self.N = new
        return changed


def classify(size_l, size_r, N):
    t = lg_sticky(N)
    if size_l > t:
        return Category.LARGE if size_r > t else Category.MIXED
    return Category.MIXED if size_r > t else Category.SMALL


def node_potential(size_l, size_r, N):
    """Potential of one node from its binary-view subtree sizes.

    At ``N = 1`` the mixed-node divisor ``lg N`` would be zero; it is clamped
    to 1 there.
    """
    t = lg_sticky(N)
    cat = classify(size_l, size_r, N)
    if cat is Category.SMALL:
        return 0.0
    lg_x = math.log2(size_l + size_r + 1)
    if cat is Category.LARGE:
        return NODE_BASE + NODE_SCALE * lg_x
    return NODE_BASE + NODE_SCALE * (min(size_l, size_r) / max(t, 1)) * lg_x


def node_potential_min_form(size_l, size_r, N):
    """Single-formula version of the mixed/large potential (0 for small)."""
    t = lg_sticky(N)
    if size_l <= t and size_r <= t:
        return 0.0
    return NODE_BASE + NODE_SCALE * min(1.0, min(size_l, size_r) / max(t, 1)) * \
        math.log2(size_l + size_r + 1)


def edge_potential_value(parent_cat, right_cat):
    """Potential of a binary-view parent -> right-child edge."""
    if parent_cat == Category.LARGE and right_cat == Category.LARGE:
        return EDGE_LL
    return 0


def size_potential(N, n):
    return SIZE_RATE * abs(N - n)


def subtree_sizes(heap) -> dict[int, SizePair]:
    """Binary-view (left, right) subtree sizes of every node, by full traversal."""
    status, node, _, sizes = _scan.scan(heap, check_keys=False)
    if status != _scan.OK:
        raise ValueError(f'corrupt heap at node {node}: {_scan.STATUS_TEXT[status]}')
    left, right = heap.left, heap.right
    out = {}
    for h in heap.handles():
        l, r = left[h], right[h]
        out[h] = SizePair(int(sizes[l]) if l != -1 else 0,
                          int(sizes[r]) if r != -1 else 0)
    return out


def size_arrays(heap, sizes):
    """Per-live-node left/right subtree sizes and right-child handles."""
    alive = np.frombuffer(heap.alive, dtype=np.uint8).astype(bool)
    left = np.array(heap.left, dtype=np.int64)
    right = np.array(heap.right, dtype=np.int64)
    padded = np.append(sizes, 0)  # index -1 reads the trailing zero
    return alive, padded[left], padded[right], right


def categories_and_potentials(sl, sr, N):
    """Vectorised :func:`classify` and :func:`node_potential`."""
    t = lg_sticky(N)
    big_l = sl > t
    big_r = sr > t
    cat = big_l.astype(np.int8) + big_r.astype(np.int8)
    lg_x = np.log2(sl + sr + 1)
    frac = np.minimum(np.minimum(sl, sr) / max(t, 1), 1.0)
    # the two-big case is large; frac is then 1 because both sides exceed t
    phi = np.where(cat == 0, 0.0, NODE_BASE + NODE_SCALE * frac * lg_x)
    return cat, phi


def total_potential(heap, N) -> PotentialBreakdown:
    """Potential of ``heap`` under sticky size ``N``, recomputed from scratch."""
    if isinstance(N, StickyTracker):
        N = N.N
    lg_sticky(N)
    if heap.n == 0:
        return PotentialBreakdown.of(0.0, 0.0, float(size_potential(N, 0)))
    status, node, _, sizes = _scan.scan(heap, check_keys=False)
    if status != _scan.OK:
        raise ValueError(f'corrupt heap at node {node}: {_scan.STATUS_TEXT[status]}')
    alive, sl, sr, right = size_arrays(heap, sizes)
    cat, phi = categories_and_potentials(sl, sr, N)
    cat[~alive] = 0
    phi[~alive] = 0.0
    large = cat == Category.LARGE
    has_right = right != -1
    right_large = np.zeros_like(large)
    right_large[has_right] = large[right[has_right]]
    neg_edges = int(np.count_nonzero(large & right_large))
    return PotentialBreakdown.of(math.fsum(phi.tolist()), float(EDGE_LL * neg_edges),
                                 float(size_potential(N, heap.n)))


def classic_potential(heap):
    """Sum of ``lg |x|`` over all nodes (the original pairing-heap potential)."""
    if heap.n == 0:
        return 0.0
    status, node, _, sizes = _scan.scan(heap, check_keys=False)
    if status != _scan.OK:
        raise ValueError(f'corrupt heap at node {node}: {_scan.STATUS_TEXT[status]}')
    live = sizes[sizes > 0]
    return math.fsum(np.log2(live).tolist())
