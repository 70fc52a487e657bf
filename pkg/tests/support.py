"""Shared matrices and slow reference implementations used as test oracles."""
import dataclasses
import functools
import itertools

from pairing_automata.automata import build_a_automaton, check_bireversible
from pairing_automata.certify import (
    Certificate,
    CertificateError,
    free_reduce,
    oriented_relator,
    relations_from_matrix,
    verify_certificate,
)
from pairing_automata.matrix import BudgetExceeded, PairingMatrix, enumerate_pairings, is_invertible_pairing, relabel_first_occurrence
from pairing_automata.torsion import (
    TorsionError,
    cyclic_bipartite_witness,
    detect_cyclic_bipartite,
    find_dual_letter_cycles,
    find_letter_cycles,
    find_word_cycles,
    theorem4_witness,
)

EXAMPLE_3X4 = [[1, 2, 3, 4], [5, 6, 2, 1], [3, 4, 5, 6]]
SWAP2 = [[1, 2], [2, 1]]
CYCLE3 = [[1, 2], [3, 1], [2, 3]]
# Non-invertible 3x4 pairing on which every torsion search comes back empty.
NO_WITNESS = [[1, 2, 3, 4], [2, 3, 5, 6], [4, 6, 1, 5]]

def orbit(C: PairingMatrix):
    """Every relabeled row/column rearrangement of C."""
    n, m = C.shape
    for rp in itertools.permutations(range(n)):
        for cp in itertools.permutations(range(m)):
            yield relabel_first_occurrence([[C.entries[r][c] for c in cp] for r in rp])


def canonical_bruteforce(C: PairingMatrix):
    return min(orbit(C), key=lambda rows: [v for r in rows for v in r])


def invertible_bruteforce(C: PairingMatrix) -> bool:
    n, m = C.shape
    for i in range(n):
        for j in range(m):
            row = set(C.entries[i])
            col = {C.entries[k][j] for k in range(n)}
            if len((row & col) - {C.entries[i][j]}) != 1:
                return False
    return True


def is_pairing_bruteforce(rows) -> bool:
    n, m = len(rows), len(rows[0])
    if (n * m) % 2:
        return False
    flat = [v for r in rows for v in r]
    if sorted(flat) != sorted(list(range(1, n * m // 2 + 1)) * 2):
        return False
    if any(len(set(r)) != m for r in rows):
        return False
    return all(len({rows[i][j] for i in range(n)}) == n for j in range(m))


def sizes(max_cells: int):
    """All shapes (n, m) with n, m >= 1, nm even and nm <= max_cells."""
    return [(n, m) for n in range(1, max_cells + 1) for m in range(1, max_cells + 1)
            if n * m <= max_cells and (n * m) % 2 == 0]


@functools.lru_cache(maxsize=None)
def classes(n: int, m: int, invertible_only: bool = False) -> tuple:
    return tuple(enumerate_pairings(n, m, invertible_only))


def all_classes(max_cells: int) -> list:
    return [C for n, m in sizes(max_cells) for C in classes(n, m)]


def torsion_witnesses(C):
    """Every witness the torsion module produces for C under default budgets."""
    A = build_a_automaton(C)
    out = find_letter_cycles(A) + find_dual_letter_cycles(A)
    if check_bireversible(A):
        out += find_word_cycles(A, 2, 2)
    if C.n_rows == 3 and is_invertible_pairing(C):
        out.append(theorem4_witness(C))
    try:
        out.append(cyclic_bipartite_witness(A, detect_cyclic_bipartite(A)))
    except (TorsionError, BudgetExceeded):
        pass
    return out


def single_field_mutations(C, cert):
    """Every certificate differing from ``cert`` in exactly one field of one step.

    Positions range over the whole current word plus one past its end,
    relation ids one past the last relation, and shifts over 0..4, so both
    in-range alternatives and structurally invalid values are produced.
    """
    rels = relations_from_matrix(C, cert.group_kind)
    word = free_reduce(cert.start)
    for k, step in enumerate(cert.steps):
        alternatives = [dataclasses.replace(step, position=p) for p in range(len(word) + 2) if p != step.position]
        alternatives += [dataclasses.replace(step, relation_id=r) for r in range(len(rels) + 1) if r != step.relation_id]
        alternatives.append(dataclasses.replace(step, inverted=not step.inverted))
        alternatives += [dataclasses.replace(step, cyclic_shift=s) for s in range(5) if s != step.cyclic_shift]
        for alt in alternatives:
            steps = list(cert.steps)
            steps[k] = alt
            yield Certificate(cert.group_kind, cert.start, tuple(steps))
        piece = oriented_relator(rels[step.relation_id], step.inverted, step.cyclic_shift)
        word = free_reduce(word[:step.position] + piece + word[step.position:])


def rejects(C, cert) -> bool:
    """True when verification returns False or refuses the certificate outright."""
    try:
        return not verify_certificate(C, cert)
    except CertificateError:
        return True
