"""Operation traces: text format, validation, replay and generators.

Trace file format, one operation per line::

    insert <key>
    deletemin
    getmin
    decreasekey <id> <key>

``<id>`` is the 0-based index of the insert that created the element (the
n-th ``insert`` line has id n-1). Keys are signed 64-bit integers. Blank
lines and lines starting with ``#`` are ignored.

All generators draw from :class:`SplitMix64`, so a (generator, parameters,
seed) triple names one exact trace on every platform.
"""

from __future__ import annotations

import heapq
from typing import Iterable, NamedTuple, Union

from .heap import InvalidHandle

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1
MASK64 = (1 << 64) - 1


class TraceError(ValueError):
    """Malformed or invalid trace; ``line`` is 1-based when known."""

    def __init__(self, msg, line=None):
        super().__init__(f'line {line}: {msg}' if line is not None else msg)
        self.line = line


class Insert(NamedTuple):
    key: int


class DeleteMin(NamedTuple):
    pass


class GetMin(NamedTuple):
    pass


class DecreaseKey(NamedTuple):
    id: int
    key: int


TraceOp = Union[Insert, DeleteMin, GetMin, DecreaseKey]
DELETE_MIN = DeleteMin()
GET_MIN = GetMin()


class SplitMix64:
    """SplitMix64 (Steele, Lea and Flood): a 64-bit state stepped by the
    golden-ratio increment and finalised with two xor-shift-multiply rounds.

    ``next()`` returns an unsigned 64-bit integer.
    """

    def __init__(self, seed):
        self.state = seed & MASK64

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound):
        """Integer in ``[0, bound)`` by modulo reduction."""
        return self.next() % bound


# ------------------------------------------------------------------ text io

def emit(trace: Iterable[TraceOp]) -> str:
    out = []
    for op in trace:
        if type(op) is Insert:
            out.append(f'insert {op.key}')
        elif type(op) is DeleteMin:
            out.append('deletemin')
        elif type(op) is GetMin:
            out.append('getmin')
        elif type(op) is DecreaseKey:
            out.append(f'decreasekey {op.id} {op.key}')
        else:
            raise TypeError(f'not a trace op: {op!r}')
    return '\n'.join(out) + ('\n' if out else '')


def _int64(tok, line):
    try:
        v = int(tok, 10)
    except ValueError:
        raise TraceError(f'not an integer: {tok!r}', line) from None
    if not INT64_MIN <= v <= INT64_MAX:
        raise TraceError(f'key out of signed 64-bit range: {tok}', line)
    return v


def parse(text: str) -> list[TraceOp]:
    ops = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        parts = line.split()
        cmd, args = parts[0], parts[1:]
        if cmd == 'insert' and len(args) == 1:
            ops.append(Insert(_int64(args[0], no)))
        elif cmd == 'deletemin' and not args:
            ops.append(DELETE_MIN)
        elif cmd == 'getmin' and not args:
            ops.append(GET_MIN)
        elif cmd == 'decreasekey' and len(args) == 2:
            ident = _int64(args[0], no)
            if ident < 0:
                raise TraceError(f'negative id {ident}', no)
            ops.append(DecreaseKey(ident, _int64(args[1], no)))
        else:
            raise TraceError(f'unrecognised operation: {line!r}', no)
    return ops


def read_trace(path) -> list[TraceOp]:
    with open(path, encoding='utf-8') as fh:
        return parse(fh.read())


def write_trace(path, trace):
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(emit(trace))


def validate(trace: Iterable[TraceOp]):
    """Raise :class:`TraceError` unless every operation is legal in sequence.

    ``line`` in the error is the 1-based operation index.
    """
    keys = []          # id -> current key
    present = set()
    pq = []            # (key, id), lazily pruned
    for i, op in enumerate(trace, 1):
        t = type(op)
        if t is Insert:
            present.add(len(keys))
            heapq.heappush(pq, (op.key, len(keys)))
            keys.append(op.key)
        elif t is DecreaseKey:
            if op.id not in present:
                raise TraceError(f'decreasekey on id {op.id} which is not present', i)
            if not op.key < keys[op.id]:
                raise TraceError(f'decreasekey {op.id} to {op.key} is not below '
                                 f'current key {keys[op.id]}', i)
            keys[op.id] = op.key
            heapq.heappush(pq, (op.key, op.id))
        elif t is DeleteMin or t is GetMin:
            if not present:
                raise TraceError(f'{"deletemin" if t is DeleteMin else "getmin"} '
                                 f'on empty queue', i)
            if t is DeleteMin:
                while True:
                    k, ident = heapq.heappop(pq)
                    if ident in present and keys[ident] == k:
                        break
                present.discard(ident)
        else:
            raise TraceError(f'not a trace op: {op!r}', i)


def replay(trace: Iterable[TraceOp], target) -> list:
    """Run ``trace`` against anything with the priority-queue methods.

    ``target.insert`` must return a handle accepted by
    ``target.decrease_key``. Returns the keys produced by get-min and
    delete-min in order.
    """
    handles = []
    out = []
    insert, delete_min = target.insert, target.delete_min
    get_min, decrease_key = target.get_min, target.decrease_key
    for op in trace:
        t = type(op)
        if t is Insert:
            handles.append(insert(op.key))
        elif t is DeleteMin:
            out.append(delete_min())
        elif t is GetMin:
            out.append(get_min())
        else:
            if not 0 <= op.id < len(handles):
                raise InvalidHandle(op.id)
            decrease_key(handles[op.id], op.key)
    return out


# --------------------------------------------------------------- generators

def gen_sorted(n, ascending=True) -> list[TraceOp]:
    """Insert keys 1..n in sorted order, then delete them all."""
    if n < 1:
        raise ValueError('n must be positive')
    keys = range(1, n + 1) if ascending else range(n, 0, -1)
    return [Insert(k) for k in keys] + [DELETE_MIN] * n


# generated keys are (drawn value << KEY_SHIFT) + counter: unique and >= 0
KEY_SHIFT = 24
DRAW_BITS = 24


def gen_random(n, ops_extra, seed) -> list[TraceOp]:
    """``n`` warm-up inserts, then ``ops_extra`` valid random operations.

    Each step draws ``u = next() % 100``: ``u < 50`` insert, ``u < 80``
    delete-min, ``u < 95`` decrease-key, otherwise get-min. Draws that would
    be invalid (empty queue, a key that is not a decrease) are skipped and
    do not count towards ``ops_extra``. A decrease-key picks its target as
    ``next() % live`` over the live ids in swap-remove order and its value
    as ``((next() >> 40) % (current >> 24 + 1)) << 24 | counter``.
    """
    rng = SplitMix64(seed)
    counter = 0
    keys = []
    live = []          # live ids, swap-remove order
    where = {}         # id -> index in live
    trace = []

    def new_key(value):
        nonlocal counter
        if counter >= 1 << KEY_SHIFT:
            raise ValueError('trace too long for the key encoding')
        k = (value << KEY_SHIFT) | counter
        counter += 1
        return k

    def do_insert():
        k = new_key(rng.next() >> (64 - DRAW_BITS))
        ident = len(keys)
        keys.append(k)
        where[ident] = len(live)
        live.append(ident)
        trace.append(Insert(k))

    for _ in range(n):
        do_insert()

    # a min-heap of (key, id) mirrors the queue so delete-min can update
    # ``live``; entries go stale after a decrease and are skipped
    pq = [(keys[i], i) for i in live]
    heapq.heapify(pq)

    def remove_live(ident):
        i = where.pop(ident)
        last = live.pop()
        if last != ident:
            live[i] = last
            where[last] = i

    emitted = 0
    while emitted < ops_extra:
        u = rng.below(100)
        if u < 50:
            do_insert()
            heapq.heappush(pq, (keys[-1], len(keys) - 1))
        elif u < 80:
            if not live:
                continue
            while True:
                k, ident = heapq.heappop(pq)
                if ident in where and keys[ident] == k:
                    break
            remove_live(ident)
            trace.append(DELETE_MIN)
        elif u < 95:
            if not live:
                continue
            ident = live[rng.below(len(live))]
            cur = keys[ident]
            value = (rng.next() >> (64 - DRAW_BITS)) % ((cur >> KEY_SHIFT) + 1)
            if (value << KEY_SHIFT) | counter >= cur:
                continue
            k = new_key(value)
            keys[ident] = k
            heapq.heappush(pq, (k, ident))
            trace.append(DecreaseKey(ident, k))
        else:
            if not live:
                continue
            trace.append(GET_MIN)
        emitted += 1
    return trace


DIJKSTRA_MAX_WEIGHT = 1000
DIJKSTRA_INF = 1 << 40


def gen_dijkstra_like(v, e, seed) -> list[TraceOp]:
    """Priority-queue trace of Dijkstra's algorithm from vertex 0.

    The graph is a random spanning tree (vertex i > 0 joins ``next() % i``)
    plus ``e - v + 1`` extra undirected edges between distinct random
    endpoints, weights ``1 + next() % 1000``. Every vertex is inserted up
    front (vertex i gets id i); the source with distance 0, the rest with a
    sentinel distance of 2**40. A vertex at distance d has key ``d * v + i``,
    which keeps keys distinct and ordered by distance.
    """
    if v < 1:
        raise ValueError('need at least one vertex')
    if e < v - 1:
        raise ValueError('a connected graph on v vertices needs e >= v - 1 edges')
    rng = SplitMix64(seed)
    adj = [[] for _ in range(v)]

    def add_edge(a, b):
        w = 1 + rng.below(DIJKSTRA_MAX_WEIGHT)
        adj[a].append((b, w))
        adj[b].append((a, w))

    for i in range(1, v):
        add_edge(i, rng.below(i))
    extra = e - (v - 1)
    while extra > 0 and v > 1:
        a = rng.below(v)
        b = rng.below(v)
        if a == b:
            continue
        add_edge(a, b)
        extra -= 1

    dist = [DIJKSTRA_INF] * v
    dist[0] = 0
    trace = [Insert(d * v + i) for i, d in enumerate(dist)]
    pq = [(d * v + i, i) for i, d in enumerate(dist)]
    heapq.heapify(pq)
    done = [False] * v
    for _ in range(v):
        while True:
            k, u = heapq.heappop(pq)
            if not done[u] and k == dist[u] * v + u:
                break
        done[u] = True
        trace.append(DELETE_MIN)
        du = dist[u]
        for w_, weight in adj[u]:
            if done[w_]:
                continue
            nd = du + weight
            if nd < dist[w_]:
                dist[w_] = nd
                k = nd * v + w_
                trace.append(DecreaseKey(w_, k))
                heapq.heappush(pq, (k, w_))
    return trace


GENERATORS = {
    'sorted': gen_sorted,
    'random': gen_random,
    'dijkstra': gen_dijkstra_like,
}
