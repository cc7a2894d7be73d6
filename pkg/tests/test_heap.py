import pytest
from hypothesis import given, strategies as st

from pairaudit import _scan
from pairaudit.heap import (Detach, EmptyHeap, Heap, InvalidHandle, NotADecrease,
                            Pairing, Pass, RootRemoved, make_heap, merge)

from conftest import general_tree


def keys_of(h, handles):
    return [h.key(x) for x in handles]


def build(keys, **kw):
    h = Heap(**kw)
    return h, [h.insert(k) for k in keys]


def structure_ok(h):
    status, node, count, _ = _scan.scan(h)
    return status == _scan.OK and count == h.n


# make_heap

def test_make_heap_is_empty():
    h = make_heap()
    assert h.n == 0 and h.root == -1


def test_get_min_on_fresh_heap():
    with pytest.raises(EmptyHeap):
        make_heap().get_min()


def test_single_insert_is_min():
    h = make_heap()
    h.insert(5)
    assert h.get_min() == 5


# pairing

def test_pair_smaller_key_wins_as_first_argument():
    h = Heap()
    a, b = h._new(3), h._new(5)
    assert h._link(a, b, Pass.INSERT) == a
    assert h.children(a) == [b]


def test_pair_smaller_key_wins_as_second_argument():
    h = Heap()
    a, b = h._new(5), h._new(3)
    assert h._link(a, b, Pass.INSERT) == b
    assert h.children(b) == [a]


def test_pair_tie_goes_to_first_argument():
    h = Heap()
    a, b = h._new(4), h._new(4)
    assert h._link(a, b, Pass.INSERT) == a
    h2 = Heap()
    c, d = h2._new(4), h2._new(4)
    assert h2._link(d, c, Pass.INSERT) == d


def test_pair_loser_takes_winner_old_left_as_right():
    h = Heap()
    w, old, l = h._new(1), h._new(5), h._new(3)
    h._link(w, old, Pass.INSERT)
    h._link(w, l, Pass.INSERT)
    assert h.node(w).left == l
    assert h.node(l).right == old
    assert h.node(old).parent == l


# insert

def test_insert_into_empty():
    events = []
    h = Heap(listener=events.append)
    x = h.insert(7)
    assert h.root == x and h.n == 1
    assert events == [] and h.pairings == 0


def test_insert_smaller_becomes_root():
    h, (a, b) = build([5, 3])
    assert h.root == b
    assert h.children(b) == [a]


def test_insert_larger_becomes_leftmost_child():
    h, (a, b) = build([3, 5])
    assert h.root == a
    assert h.children(a) == [b]
    assert h.pairings == 1


# get_min

def test_get_min_of_three():
    h, _ = build([3, 5, 7])
    assert h.get_min() == 3


def test_get_min_after_decrease():
    h, (a, b, c) = build([3, 5, 7])
    h.decrease_key(c, 1)
    assert h.get_min() == 1


# delete_min

def test_delete_min_on_nine_ascending_keys():
    events = []
    h, hs = build(range(1, 10), listener=events.append)
    assert keys_of(h, h.children(h.root)) == [9, 8, 7, 6, 5, 4, 3, 2]
    events.clear()
    before = h.pairings
    assert h.delete_min() == 1
    pairs = [e for e in events if type(e) is Pairing]
    first = [(h.key(e.x), h.key(e.y)) for e in pairs if e.pass_ is Pass.FIRST]
    assert first == [(9, 8), (7, 6), (5, 4), (3, 2)]
    assert sum(e.pass_ is Pass.SECOND for e in pairs) == 3
    assert 1 + h.pairings - before == 8
    assert h.get_min() == 2
    assert type(events[0]) is RootRemoved
    assert structure_ok(h)


def test_delete_min_second_pass_right_to_left():
    events = []
    h, hs = build(range(1, 10), listener=events.append)
    events.clear()
    h.delete_min()
    second = [(h.key(e.x), h.key(e.y)) for e in events
              if type(e) is Pairing and e.pass_ is Pass.SECOND]
    # first-pass winners are 8, 6, 4, 2; the rightmost pair goes first
    assert second == [(4, 2), (6, 2), (8, 2)]


def test_delete_min_single_node():
    h, _ = build([4])
    assert h.delete_min() == 4
    assert h.n == 0 and h.root == -1 and h.pairings == 0


def test_delete_min_single_child():
    h, (a, b) = build([3, 5])
    before = h.pairings
    assert h.delete_min() == 3
    assert h.root == b and h.pairings == before


def test_delete_min_empty():
    with pytest.raises(EmptyHeap):
        Heap().delete_min()


def test_odd_child_count_leaves_last_for_second_pass():
    events = []
    h, hs = build([1, 5, 4, 3, 2], listener=events.append)
    # children of 1 left to right: 2, 3, 4, 5
    h.delete_min()
    h.insert(0)
    h.insert(9)
    h.insert(8)
    h.insert(7)
    events.clear()
    # children of 0 left to right: 7, 8, 9, 2
    h.delete_min()
    first = [(h.key(e.x), h.key(e.y)) for e in events
             if type(e) is Pairing and e.pass_ is Pass.FIRST]
    assert first == [(7, 8), (9, 2)]
    h2, _ = build([1, 5, 4, 3])
    events2 = []
    h2.listener = events2.append
    h2.delete_min()
    first2 = [e for e in events2 if type(e) is Pairing and e.pass_ is Pass.FIRST]
    assert len(first2) == 1
    assert sum(type(e) is Pairing for e in events2) == 2


# decrease_key

def test_decrease_root_key_in_place():
    events = []
    h, (a, b) = build([3, 5], listener=events.append)
    events.clear()
    h.decrease_key(a, 1)
    assert events == [] and h.get_min() == 1 and h.children(a) == [b]


def test_decrease_leftmost_child_of_flat_heap():
    h, hs = build(range(1, 10))
    nine, eight, one = hs[8], hs[7], hs[0]
    h.decrease_key(nine, 0)
    assert h.root == nine
    assert h.children(nine)[0] == one
    assert h.node(eight).parent == one
    assert h.children(one)[0] == eight
    assert structure_ok(h)


def test_decrease_to_same_key_rejected():
    h, (a, b) = build([3, 5])
    with pytest.raises(NotADecrease):
        h.decrease_key(b, 5)
    with pytest.raises(NotADecrease):
        h.decrease_key(b, 6)


def test_decrease_unknown_handle():
    h, (a,) = build([3])
    with pytest.raises(InvalidHandle):
        h.decrease_key(17, 1)
    h.delete_min()
    with pytest.raises(InvalidHandle):
        h.decrease_key(a, 1)


def test_decrease_emits_detach_then_pairing():
    events = []
    h, hs = build([1, 2, 3], listener=events.append)
    events.clear()
    h.decrease_key(hs[1], 0)
    assert [type(e) for e in events] == [Detach, Pairing]
    assert events[1].pass_ is Pass.DECREASE_KEY


def test_handles_never_reused():
    h, hs = build([1, 2])
    h.delete_min()
    c = h.insert(0)
    assert c not in hs


# merge

def test_merge_with_empty_returns_other():
    a, _ = build([1, 2])
    assert merge(Heap(), a) is a
    assert merge(a, Heap()) is a


def test_merge_two_singletons():
    a, (x,) = build([3])
    b, _ = build([5])
    m = merge(a, b)
    assert m.n == 2 and m.get_min() == 3
    assert keys_of(m, m.children(m.root)) == [5]


def test_merge_winner_takes_other_root_as_leftmost_child():
    a, _ = build([1, 4])
    b, _ = build([2, 3])
    m = merge(a, b)
    assert m.get_min() == 1
    assert keys_of(m, m.children(m.root))[0] == 2
    assert m.n == 4 and structure_ok(m)


def test_merge_offsets_handles():
    a, _ = build([1, 4])
    b, hb = build([2, 3])
    off = a.merge(b)
    a.decrease_key(hb[1] + off, 0)
    assert a.get_min() == 0
    assert b.n == 0


# properties

ops = st.lists(st.tuples(st.sampled_from('iiddk'), st.integers(-50, 50),
                         st.integers(0, 10**6)), max_size=150)


@given(ops)
def test_random_ops_keep_invariants(script):
    events = []
    h = Heap(listener=events.append, int_keys=True)
    live = {}
    for kind, key, pick in script:
        if kind == 'i':
            live[h.insert(key)] = key
        elif kind == 'd' and live:
            before = h.pairings
            root = h.root
            c = len(h.children(root))
            events.clear()
            got = h.delete_min()
            assert got == min(live.values())
            del live[root]
            pairs = [e for e in events if type(e) is Pairing]
            assert len(pairs) == h.pairings - before == max(c - 1, 0)
            assert sum(e.pass_ is Pass.FIRST for e in pairs) == c // 2
        elif kind == 'k' and live:
            x = sorted(live)[pick % len(live)]
            h.decrease_key(x, live[x] - 1 - pick % 7)
            live[x] = h.key(x)
        assert h.n == len(live)
        assert structure_ok(h)
        assert sorted(general_tree(h)) == sorted(live)


@given(ops)
def test_replay_is_deterministic(script):
    def run():
        h = Heap(int_keys=True)
        hs = []
        for kind, key, pick in script:
            if kind == 'i':
                hs.append(h.insert(key % 5))
            elif kind == 'd' and h.n:
                h.delete_min()
            elif kind == 'k' and h.n:
                x = [y for y in hs if y in h][pick % h.n]
                h.decrease_key(x, h.key(x) - 1)
        return (list(h.keys), list(h.left), list(h.right), list(h.parent), h.root)
    assert run() == run()


def test_generic_keys():
    h = Heap()
    for k in ['pear', 'apple', 'fig']:
        h.insert(k)
    assert [h.delete_min() for _ in range(3)] == ['apple', 'fig', 'pear']
