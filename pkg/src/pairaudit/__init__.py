"""Instrumented pairing heap and an amortized-analysis validator for it."""

from .heap import (EmptyHeap, Heap, InvalidHandle, NotADecrease, Pass, make_heap,
                   merge)
from .potential import (Category, PotentialBreakdown, SizePair, StickyTracker,
                        classify, edge_potential_value, node_potential,
                        size_potential, subtree_sizes, total_potential,
                        update_sticky)
from .analyzer import Analyzer, Ledger, OpRecord, PairingRecord, Report

__all__ = [
    'EmptyHeap', 'Heap', 'InvalidHandle', 'NotADecrease', 'Pass', 'make_heap', 'merge',
    'Category', 'PotentialBreakdown', 'SizePair', 'StickyTracker', 'classify',
    'edge_potential_value', 'node_potential', 'size_potential', 'subtree_sizes',
    'total_potential', 'update_sticky', 'Analyzer', 'Ledger', 'OpRecord',
    'PairingRecord', 'Report',
]
