"""Two-pass pairing heap stored in the binary (leftmost-child, right-sibling) view.

Nodes live in a handle arena: parallel arrays indexed by an integer handle.
A handle is issued once per insert and never reused by the same heap, so a
stale handle is always detectable.

Every pairing is announced to an optional listener *before* any link is
touched, which lets an observer read the pre-pairing shape of the tree.
"""

from __future__ import annotations

import enum
from array import array
from typing import Any, Callable, Iterator, NamedTuple, Optional

NIL = -1


class EmptyHeap(Exception):
    """get_min or delete_min on a heap with no elements."""


class InvalidHandle(KeyError):
    """Handle was never issued by this heap or its element was deleted."""


class NotADecrease(ValueError):
    """decrease_key was asked for a key that is not strictly smaller."""


class Pass(enum.IntEnum):
    FIRST = 0
    SECOND = 1
    INSERT = 2
    DECREASE_KEY = 3
    MERGE = 4


class Pairing(NamedTuple):
    """Pairing of ``x`` with ``y``.

    For delete-min passes ``y`` is the binary right child of ``x`` (its next
    sibling). For the other passes both are roots of separate trees and
    ``x`` is the first argument of the pairing.
    """

    pass_: Pass
    x: int
    y: int
    winner: int


class RootRemoved(NamedTuple):
    root: int


class Detach(NamedTuple):
    node: int


HeapEvent = Pairing | RootRemoved | Detach


class Node(NamedTuple):
    key: Any
    left: Optional[int]
    right: Optional[int]
    parent: Optional[int]


class Heap:
    """Pairing heap with stable integer handles.

    ``int_keys=True`` stores keys in a signed 64-bit array instead of a list;
    the structural checker can then scan the heap without touching Python
    objects. Any totally ordered key type works otherwise.
    """

    def __init__(self, listener: Optional[Callable[[HeapEvent], None]] = None,
                 int_keys: bool = False):
        self.listener = listener
        self.int_keys = int_keys
        self.keys = array('q') if int_keys else []
        self.left = array('q')
        self.right = array('q')
        self.parent = array('q')
        self.alive = bytearray()
        self.root = NIL
        self.n = 0
        # total pairings ever performed; an operation's actual cost is
        # one plus the growth of this counter
        self.pairings = 0

    def __len__(self):
        return self.n

    def __bool__(self):
        return self.n > 0

    def __contains__(self, handle):
        return 0 <= handle < len(self.alive) and self.alive[handle] == 1

    @property
    def capacity(self):
        """Number of handles issued so far (live or dead)."""
        return len(self.alive)

    def key(self, handle):
        self._check(handle)
        return self.keys[handle]

    def node(self, handle) -> Node:
        self._check(handle)

        def opt(v):
            return None if v == NIL else v

        return Node(self.keys[handle], opt(self.left[handle]),
                    opt(self.right[handle]), opt(self.parent[handle]))

    def children(self, handle) -> list[int]:
        """General-view children of ``handle``, left to right."""
        self._check(handle)
        out = []
        c = self.left[handle]
        while c != NIL:
            out.append(c)
            c = self.right[c]
        return out

    def handles(self) -> Iterator[int]:
        """Live handles in binary-view preorder."""
        if self.root == NIL:
            return
        stack = [self.root]
        left, right = self.left, self.right
        while stack:
            x = stack.pop()
            yield x
            if right[x] != NIL:
                stack.append(right[x])
            if left[x] != NIL:
                stack.append(left[x])

    def _check(self, handle):
        if not (isinstance(handle, int) and handle in self):
            raise InvalidHandle(handle)

    def _new(self, key):
        h = len(self.alive)
        self.keys.append(key)
        self.left.append(NIL)
        self.right.append(NIL)
        self.parent.append(NIL)
        self.alive.append(1)
        return h

    def _link(self, a, b, pass_):
        """Pair two roots; the first argument wins ties."""
        keys, left, right, parent = self.keys, self.left, self.right, self.parent
        if keys[a] <= keys[b]:
            w, l = a, b
        else:
            w, l = b, a
        if self.listener is not None:
            self.listener(Pairing(pass_, a, b, w))
        self.pairings += 1
        c = left[w]
        right[l] = c
        if c != NIL:
            parent[c] = l
        left[w] = l
        parent[l] = w
        return w

    def insert(self, key) -> int:
        h = self._new(key)
        self.n += 1
        if self.root == NIL:
            self.root = h
        else:
            self.root = self._link(h, self.root, Pass.INSERT)
        return h

    def get_min(self):
        if self.root == NIL:
            raise EmptyHeap('get_min on empty heap')
        return self.keys[self.root]

    def delete_min(self):
        r = self.root
        if r == NIL:
            raise EmptyHeap('delete_min on empty heap')
        keys, left, right, parent = self.keys, self.left, self.right, self.parent
        listener = self.listener
        if listener is not None:
            listener(RootRemoved(r))
        key = keys[r]
        head = left[r]
        left[r] = NIL
        self.alive[r] = 0
        self.n -= 1
        if head == NIL:
            self.root = NIL
            return key
        parent[head] = NIL

        # first pass: pair siblings left to right in groups of two; an odd
        # leftover stays for the second pass
        winners = []
        paired = 0
        prev = NIL
        x = head
        while x != NIL:
            y = right[x]
            if y == NIL:
                winners.append(x)
                break
            nxt = right[y]
            if keys[x] <= keys[y]:
                w, l = x, y
            else:
                w, l = y, x
            if listener is not None:
                listener(Pairing(Pass.FIRST, x, y, w))
            c = left[w]
            right[l] = c
            if c != NIL:
                parent[c] = l
            left[w] = l
            parent[l] = w
            right[w] = nxt
            if nxt != NIL:
                parent[nxt] = w
            parent[w] = prev
            if prev != NIL:
                right[prev] = w
            winners.append(w)
            paired += 1
            prev = w
            x = nxt
        # c children: c // 2 first-pass pairings, one fewer than the number of
        # survivors in the second pass, c - 1 in total
        self.pairings += paired + len(winners) - 1

        # second pass: repeatedly pair the two rightmost trees
        y = winners.pop()
        while winners:
            x = winners.pop()
            if keys[x] <= keys[y]:
                w, l = x, y
            else:
                w, l = y, x
            if listener is not None:
                listener(Pairing(Pass.SECOND, x, y, w))
            p = parent[x]
            c = left[w]
            right[l] = c
            if c != NIL:
                parent[c] = l
            left[w] = l
            parent[l] = w
            right[w] = NIL
            parent[w] = p
            if p != NIL:
                right[p] = w
            y = w
        self.root = y
        return key

    def decrease_key(self, handle, key):
        self._check(handle)
        if not key < self.keys[handle]:
            raise NotADecrease(f'{key!r} is not below current key {self.keys[handle]!r}')
        self.keys[handle] = key
        if handle == self.root:
            return
        left, right, parent = self.left, self.right, self.parent
        if self.listener is not None:
            self.listener(Detach(handle))
        q = parent[handle]
        r = right[handle]
        if left[q] == handle:
            left[q] = r
        else:
            right[q] = r
        if r != NIL:
            parent[r] = q
        parent[handle] = NIL
        right[handle] = NIL
        self.root = self._link(handle, self.root, Pass.DECREASE_KEY)

    def merge(self, other: Heap) -> int:
        """Absorb ``other`` into this heap and return the handle offset.

        A handle ``h`` issued by ``other`` is ``h + offset`` afterwards.
        ``other`` is left empty. The arena copy is linear in the size of
        ``other``; the structural change is a single pairing.
        """
        if other is self:
            raise ValueError('cannot merge a heap with itself')
        offset = len(self.alive)

        def shift(v):
            return v + offset if v != NIL else NIL

        self.keys.extend(other.keys)
        self.left.extend(shift(v) for v in other.left)
        self.right.extend(shift(v) for v in other.right)
        self.parent.extend(shift(v) for v in other.parent)
        self.alive.extend(other.alive)
        other_root = shift(other.root)
        self.n += other.n
        other.__init__(other.listener, other.int_keys)
        if other_root == NIL:
            return offset
        if self.root == NIL:
            self.root = other_root
        else:
            self.root = self._link(self.root, other_root, Pass.MERGE)
        return offset


def make_heap(listener=None, int_keys=False) -> Heap:
    return Heap(listener, int_keys)


def merge(h1: Heap, h2: Heap) -> Heap:
    """Merge two independent heaps. An empty input yields the other unchanged."""
    if h1.n == 0:
        return h2
    if h2.n == 0:
        return h1
    h1.merge(h2)
    return h1
