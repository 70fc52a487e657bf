"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line before asserting, so

    pytest tests/test_acceptance.py -s

or ``python3 tests/test_acceptance.py`` gives a one-line-per-criterion report.
"""
import subprocess
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pairing_automata.automata import (  # noqa: E402
    RecognitionError,
    build_a_automaton,
    build_b_automaton,
    build_helix,
    check_bireversible,
    check_invertible,
    recognize_pairing,
)
from pairing_automata.certify import verify_certificate  # noqa: E402
from pairing_automata.matrix import (  # noqa: E402
    canonical_form,
    enumerate_pairings,
    is_invertible_pairing,
    partner_map,
    validate_pairing,
)
from pairing_automata.torsion import (  # noqa: E402
    find_dual_letter_cycles,
    find_letter_cycles,
    theorem4_witness,
)
from support import CYCLE3, EXAMPLE_3X4, SWAP2, rejects, single_field_mutations, sizes, torsion_witnesses  # noqa: E402


def exhaustive(max_cells):
    return [C for n, m in sizes(max_cells) for C in enumerate_pairings(n, m)]


def criterion_1():
    start = time.perf_counter()
    C = validate_pairing(EXAMPLE_3X4)
    arrows = {tuple(a) for a in build_a_automaton(C).arrows()}
    expected = {
        (f"a{i}", f"b{j}", f"b{l}", f"a{k}") for (i, j), (k, l) in partner_map(C).items()
    }
    elapsed = time.perf_counter() - start
    ok = (
        len(arrows) == 12
        and arrows == expected
        and ("a1", "b1", "b4", "a2") in arrows
        and ("a3", "b3", "b1", "a2") in arrows
        and ("a2", "b3", "b2", "a1") in arrows
        and elapsed < 1.0
    )
    return ok, f"12 arrows match the matrix, a2 -b3|b2-> a1, {elapsed:.3f}s"


def criterion_2():
    start = time.perf_counter()
    matrices = exhaustive(12)
    bad = 0
    for C in matrices:
        A = build_a_automaton(C)
        if not (is_invertible_pairing(C) == check_invertible(A) == check_bireversible(A)):
            bad += 1
    elapsed = time.perf_counter() - start
    return bad == 0 and elapsed < 60, f"{len(matrices)} classes, {bad} disagreements, {elapsed:.1f}s"


def criterion_3():
    matrices = exhaustive(12)
    bad = 0
    for C in matrices:
        A = build_a_automaton(C)
        eligible = check_bireversible(A) and all(t != s and y != x for s, x, y, t in A.arrows())
        try:
            recovered = recognize_pairing(A)
            ok = eligible and canonical_form(recovered) == canonical_form(C)
        except RecognitionError:
            ok = not eligible
        if not ok or any(len(c) != 2 for c in build_helix(A).cycles()):
            bad += 1
    return bad == 0, f"{len(matrices)} classes, {bad} exceptions"


def criterion_4():
    matrices = [C for n in (2, 4) for C in enumerate_pairings(n, n)]
    bad = sum(check_invertible(build_b_automaton(C)) for C in matrices)
    return bad == 0, f"{len(matrices)} square classes, {bad} invertible B_C"


def criterion_5():
    start = time.perf_counter()
    count = bad = 0
    for m in (2, 4, 6):
        n = m // 2
        for C in enumerate_pairings(3, m, True):
            count += 1
            w = theorem4_witness(C)
            exponent_ok = 2 <= w.exponent <= n or w.exponent == 3
            if not (verify_certificate(C, w.certificate) and w.nontrivial_guaranteed and exponent_ok):
                bad += 1
    elapsed = time.perf_counter() - start
    return bad == 0 and elapsed < 300, f"{count} invertible 3x2n classes, {bad} failures, {elapsed:.1f}s"


def criterion_6():
    C = validate_pairing(EXAMPLE_3X4)
    w = theorem4_witness(C)
    ok = w.word == ("b1", "B2") and w.exponent == 2 and verify_certificate(C, w.certificate)
    return ok, f"({'*'.join(w.word)})^{w.exponent}"


def criterion_7():
    C3 = validate_pairing(CYCLE3)
    three = [w for w in find_letter_cycles(build_a_automaton(C3)) if w.exponent == 3]
    ok3 = bool(three) and all(verify_certificate(C3, w.certificate) for w in three)
    C2 = validate_pairing(SWAP2)
    A2 = build_a_automaton(C2)
    letter = [w for w in find_letter_cycles(A2)
              if w.exponent == 2 and all(t[0] in "bB" for t in w.word) and verify_certificate(C2, w.certificate)]
    dual = [w for w in find_dual_letter_cycles(A2)
            if w.exponent == 2 and all(t[0] in "aA" for t in w.word) and verify_certificate(C2, w.certificate)]
    return ok3 and bool(letter) and bool(dual), (
        f"{len(three)} exponent-3 letter witnesses; {len(letter)} b-word and {len(dual)} a-word exponent-2 witnesses"
    )


def criterion_8():
    certificates = verified = mutations = rejected = 0
    for C in exhaustive(12):
        for w in torsion_witnesses(C):
            certificates += 1
            verified += verify_certificate(C, w.certificate)
            for mutated in single_field_mutations(C, w.certificate):
                mutations += 1
                rejected += rejects(C, mutated)
    ok = certificates > 0 and verified == certificates and rejected == mutations
    return ok, f"{verified}/{certificates} certificates verify, {rejected}/{mutations} mutations rejected"


def criterion_9():
    argv = [sys.executable, "-m", "pairing_automata", "enumerate", "--rows", "3", "--cols", "6",
            "--invertible-only", "--with-torsion"]
    first = subprocess.run(argv, capture_output=True, check=False)
    second = subprocess.run(argv, capture_output=True, check=False)
    ok = first.returncode == second.returncode == 0 and first.stdout == second.stdout and first.stdout
    lines = len(first.stdout.splitlines())
    return bool(ok), f"{len(first.stdout)} bytes, {lines} lines, identical={first.stdout == second.stdout}"


CRITERIA = [
    (1, "Worked-example fidelity", criterion_1),
    (2, "Invertibility equivalence suite", criterion_2),
    (3, "Recognition round trip", criterion_3),
    (4, "B_C never invertible", criterion_4),
    (5, "3 x 2n witness totality and soundness", criterion_5),
    (6, "Worked-example witness reproduction", criterion_6),
    (7, "Cycle-witness positive control", criterion_7),
    (8, "Certificate adversarial suite", criterion_8),
    (9, "Determinism", criterion_9),
]


def report(number, name, check):
    ok, detail = check()
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {name} ({detail})")
    return ok


@pytest.mark.parametrize("number, name, check", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, name, check):
    assert report(number, name, check)


if __name__ == "__main__":
    results = [report(*c) for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
