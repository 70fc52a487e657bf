"""
Certified elements of finite order
==================================

Find words w and exponents k with w^k = e in the group of a pairing
matrix, and check each claim by replaying its certificate.
"""

from pairing_automata import (
    build_a_automaton,
    find_dual_letter_cycles,
    find_letter_cycles,
    format_word,
    theorem4_witness,
    validate_pairing,
    verify_certificate,
    verify_witness,
)
from pairing_automata.certify import relations_from_matrix, replay

# a cycle of arrows that all carry the label b1|b2 gives (b2 b1^-1)^3 = e
C = validate_pairing([[1, 2], [3, 1], [2, 3]])
for w in find_letter_cycles(build_a_automaton(C)):
    print(w, "verified:", verify_witness(C, w))

# on the 2 x 2 matrix both the b-side and the a-side searches succeed
S = validate_pairing([[1, 2], [2, 1]])
A = build_a_automaton(S)
for w in find_letter_cycles(A) + find_dual_letter_cycles(A):
    print(w)

# every 3-row invertible pairing has torsion; here is the constructive witness
F = validate_pairing([[1, 2, 3, 4], [5, 6, 2, 1], [3, 4, 5, 6]])
w = theorem4_witness(F)
print(w, "nontrivial:", w.nontrivial_guaranteed, "because", " != ".join(w.justification))

# the certificate is a list of relator insertions; replay it by hand
relations = relations_from_matrix(F)
print("start:", format_word(w.certificate.start))
print("steps:", len(w.certificate.steps), "-> final word:", format_word(replay(relations, w.certificate)))
print("verify_certificate:", verify_certificate(F, w.certificate))
