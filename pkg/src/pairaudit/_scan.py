"""Full O(n) recount of a heap's binary-view structure.

The numba kernel runs on the arena arrays directly; the pure-Python twin is
used for heaps whose keys are arbitrary Python objects.
"""

import numpy as np
from numba import njit

OK = 0
REVISITED = 1
BAD_PARENT = 2
HEAP_ORDER = 3
DEAD_NODE = 4
BAD_ROOT = 5

STATUS_TEXT = {
    OK: 'ok',
    REVISITED: 'node reached twice (cycle or shared child)',
    BAD_PARENT: 'child does not point back to its parent',
    HEAP_ORDER: 'general-view child key below its parent key',
    DEAD_NODE: 'deleted node reachable from the root',
    BAD_ROOT: 'root has a parent or a right sibling',
}


@njit(cache=True)
def _scan_kernel(left, right, parent, alive, keys, root, check_keys):
    cap = left.shape[0]
    sizes = np.zeros(cap, dtype=np.int64)
    if root < 0:
        return OK, -1, 0, sizes
    if parent[root] != -1 or right[root] != -1:
        return BAD_ROOT, root, 0, sizes
    seen = np.zeros(cap, dtype=np.uint8)
    order = np.empty(cap, dtype=np.int64)
    stack = np.empty(cap + 1, dtype=np.int64)
    top = 0
    stack[0] = root
    top = 1
    count = 0
    while top > 0:
        top -= 1
        x = stack[top]
        if seen[x]:
            return REVISITED, x, count, sizes
        if not alive[x]:
            return DEAD_NODE, x, count, sizes
        seen[x] = 1
        order[count] = x
        count += 1
        c = left[x]
        if c != -1:
            if parent[c] != x:
                return BAD_PARENT, c, count, sizes
            if check_keys:
                s = c
                while s != -1:
                    if keys[s] < keys[x]:
                        return HEAP_ORDER, s, count, sizes
                    s = right[s]
            if top >= cap:
                return REVISITED, c, count, sizes
            stack[top] = c
            top += 1
        c = right[x]
        if c != -1:
            if parent[c] != x:
                return BAD_PARENT, c, count, sizes
            if top >= cap:
                return REVISITED, c, count, sizes
            stack[top] = c
            top += 1
    for i in range(count - 1, -1, -1):
        x = order[i]
        s = 1
        if left[x] != -1:
            s += sizes[left[x]]
        if right[x] != -1:
            s += sizes[right[x]]
        sizes[x] = s
    return OK, -1, count, sizes


SIZE_MISMATCH = 6
STATUS_TEXT[SIZE_MISMATCH] = 'cached subtree size differs from 1 + sizes of its children'


@njit(cache=True)
def _verify_kernel(left, right, parent, alive, keys, cache, root, n):
    # single pass: structure, heap order, and cache[x] == 1 + cache[l] + cache[r]
    # at every reachable node, which with the node count pins every cached
    # size to the true subtree size.
    # No visited set is needed: a node is only entered through the edge its
    # parent pointer names, and the root has none, so with left != right no
    # node can be entered twice. Heap order is checked against the key of
    # the general-view parent, carried down the stack.
    cap = left.shape[0]
    if root < 0:
        return OK, -1, 0
    if parent[root] != -1 or right[root] != -1:
        return BAD_ROOT, root, 0
    stack = np.empty(cap + 1, dtype=np.int64)
    above = np.empty(cap + 1, dtype=keys.dtype)
    stack[0] = root
    above[0] = keys[root]
    top = 1
    count = 0
    while top > 0:
        top -= 1
        x = stack[top]
        kp = above[top]
        if not alive[x]:
            return DEAD_NODE, x, count
        count += 1
        if count > n:
            return REVISITED, x, count
        kx = keys[x]
        if kx < kp:
            return HEAP_ORDER, x, count
        expect = 1
        c = left[x]
        r = right[x]
        if c != -1 and c == r:
            return REVISITED, c, count
        if c != -1:
            if parent[c] != x:
                return BAD_PARENT, c, count
            expect += cache[c]
            stack[top] = c
            above[top] = kx
            top += 1
        if r != -1:
            if parent[r] != x:
                return BAD_PARENT, r, count
            expect += cache[r]
            stack[top] = r
            above[top] = kp
            top += 1
        if cache[x] != expect:
            return SIZE_MISMATCH, x, count
    return OK, -1, count


def verify(heap, cache):
    """Check structure, heap order and a subtree-size cache in one traversal.

    Returns ``(status, node, count)``. Only integer-keyed heaps take the
    compiled path; others fall back to :func:`scan` plus a comparison.
    """
    if heap.capacity == 0 or heap.root < 0:
        return OK, -1, 0
    if len(cache) < heap.capacity:
        return SIZE_MISMATCH, len(cache), 0
    if not heap.int_keys:
        status, node, count, sizes = _scan_python(heap, True)
        if status == OK:
            for h in heap.handles():
                if cache[h] != sizes[h]:
                    return SIZE_MISMATCH, h, count
        return status, node, count
    left = np.frombuffer(heap.left, dtype=np.int64)
    right = np.frombuffer(heap.right, dtype=np.int64)
    parent = np.frombuffer(heap.parent, dtype=np.int64)
    alive = np.frombuffer(heap.alive, dtype=np.uint8)
    keys = np.frombuffer(heap.keys, dtype=np.int64)
    sizes = np.frombuffer(cache, dtype=np.int64)
    try:
        status, node, count = _verify_kernel(left, right, parent, alive, keys, sizes,
                                             heap.root, heap.n)
    finally:
        del left, right, parent, alive, keys, sizes
    return int(status), int(node), int(count)


def _scan_python(heap, check_keys):
    left, right, parent, alive, keys = heap.left, heap.right, heap.parent, heap.alive, heap.keys
    cap = len(alive)
    sizes = np.zeros(cap, dtype=np.int64)
    root = heap.root
    if root < 0:
        return OK, -1, 0, sizes
    if parent[root] != -1 or right[root] != -1:
        return BAD_ROOT, root, 0, sizes
    seen = bytearray(cap)
    order = []
    stack = [root]
    while stack:
        x = stack.pop()
        if seen[x]:
            return REVISITED, x, len(order), sizes
        if not alive[x]:
            return DEAD_NODE, x, len(order), sizes
        seen[x] = 1
        order.append(x)
        c = left[x]
        if c != -1:
            if parent[c] != x:
                return BAD_PARENT, c, len(order), sizes
            if check_keys:
                s = c
                while s != -1:
                    if keys[s] < keys[x]:
                        return HEAP_ORDER, s, len(order), sizes
                    s = right[s]
            stack.append(c)
        c = right[x]
        if c != -1:
            if parent[c] != x:
                return BAD_PARENT, c, len(order), sizes
            stack.append(c)
    out = [0] * cap
    for x in reversed(order):
        s = 1
        if left[x] != -1:
            s += out[left[x]]
        if right[x] != -1:
            s += out[right[x]]
        out[x] = s
    return OK, -1, len(order), np.asarray(out, dtype=np.int64)


def scan(heap, check_keys=True):
    """Traverse ``heap`` from its root.

    Returns ``(status, node, count, sizes)`` where ``sizes[h]`` is the
    binary-view subtree size of every reachable handle (0 elsewhere) and
    ``node`` locates the first defect when ``status != OK``.
    """
    if heap.capacity == 0:
        return OK, -1, 0, np.zeros(0, dtype=np.int64)
    if not heap.int_keys:
        return _scan_python(heap, check_keys)
    # zero-copy views; they must not outlive this call or the arrays
    # could not grow again
    left = np.frombuffer(heap.left, dtype=np.int64)
    right = np.frombuffer(heap.right, dtype=np.int64)
    parent = np.frombuffer(heap.parent, dtype=np.int64)
    alive = np.frombuffer(heap.alive, dtype=np.uint8)
    keys = np.frombuffer(heap.keys, dtype=np.int64)
    try:
        status, node, count, sizes = _scan_kernel(left, right, parent, alive, keys,
                                                  heap.root, check_keys)
    finally:
        del left, right, parent, alive, keys
    return int(status), int(node), int(count), sizes
