"""
Counting pairing matrices up to equivalence
===========================================

Enumerate one canonical matrix per class (rows and columns permuted,
values relabeled) and tabulate how many are invertible.
"""

import time

from pairing_automata import enumerate_pairings, theorem4_witness

# class counts for small shapes; the cell budget defaults to 24 cells
for n, m in [(2, 2), (2, 4), (3, 4), (4, 3), (2, 6), (3, 6), (4, 4)]:
    start = time.perf_counter()
    classes = list(enumerate_pairings(n, m))
    invertible = list(enumerate_pairings(n, m, invertible_only=True))
    print(f"{n} x {m}: {len(classes):4d} classes, {len(invertible):3d} invertible  ({time.perf_counter() - start:.2f}s)")

# every invertible 3 x 6 class, with the exponent of its constructive witness
for C in enumerate_pairings(3, 6, invertible_only=True):
    w = theorem4_witness(C)
    print(C, "->", w)
