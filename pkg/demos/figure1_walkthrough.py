"""
A pairing matrix and its automaton
==================================

Walk through the 3 x 4 example: validate it, build the automaton A_C,
look at its helix graph, and recover the matrix from the automaton.
"""

from pairing_automata import (
    build_a_automaton,
    build_helix,
    canonical_form,
    check_bireversible,
    dual_automaton,
    is_invertible_pairing,
    recognize_pairing,
    validate_pairing,
)

# every value appears twice, never twice in one row or column
C = validate_pairing([[1, 2, 3, 4], [5, 6, 2, 1], [3, 4, 5, 6]])
print("C =", C)
print("invertible pairing:", is_invertible_pairing(C))

# one arrow a_i -b_j|b_j'-> a_i' per pair of equal cells c_ij = c_i'j'
A = build_a_automaton(C)
for arrow in A.arrows():
    print("  ", arrow)
print("bireversible:", check_bireversible(A))

# the helix graph of a pairing automaton is a union of 2-cycles
H = build_helix(A)
print("helix cycle lengths:", sorted({len(c) for c in H.cycles()}))

# reading the 2-cycles back gives the matrix again, up to relabeling
print("recovered:", recognize_pairing(A))
print("same class:", canonical_form(recognize_pairing(A)) == canonical_form(C))

# the dual automaton swaps the roles of states and letters
D = dual_automaton(A)
print("dual arrows from b1:", [str(a) for a in D.arrows() if a.source == "b1"])
