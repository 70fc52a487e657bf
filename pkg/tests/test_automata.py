import random

import pytest

from pairing_automata.automata import (
    Arrow,
    HasIdentityOutput,
    HasLoop,
    HelixCycleTooLong,
    MealyAutomaton,
    NotBireversible,
    automaton_from_json,
    automaton_to_dot,
    automaton_to_json,
    build_a_automaton,
    build_b_automaton,
    build_helix,
    check_bireversible,
    check_invertible,
    dual_automaton,
    helix_to_dot,
    power_automaton,
    recognize_pairing,
)
from pairing_automata.matrix import BudgetExceeded, NotSquare, canonical_form, is_invertible_pairing, validate_pairing
from support import all_classes, classes


def identity_automaton():
    return MealyAutomaton(("s",), ("x",), {("s", "x"): "s"}, {("s", "x"): "x"})


def arrow_set(A):
    return {(s, x, y, t) for s, x, y, t in A.arrows()}


# --- A_C and B_C -------------------------------------------------------------

def test_example_3x4_arrows(ex34):
    A = build_a_automaton(ex34)
    assert A.states == ("a1", "a2", "a3") and A.alphabet == ("b1", "b2", "b3", "b4")
    assert len(A.arrows()) == 12
    arrows = arrow_set(A)
    assert ("a1", "b1", "b4", "a2") in arrows
    assert ("a3", "b3", "b1", "a2") in arrows
    # The matrix pairs c_23 = c_12 = 2, so a2 reads b3 and writes b2.
    assert ("a2", "b3", "b2", "a1") in arrows
    assert not any(s == "a2" and y == "b1" and x == "b3" for s, x, y, t in arrows)


def test_swap2_arrows(swap2):
    assert arrow_set(build_a_automaton(swap2)) == {
        ("a1", "b1", "b2", "a2"),
        ("a2", "b2", "b1", "a1"),
        ("a1", "b2", "b1", "a2"),
        ("a2", "b1", "b2", "a1"),
    }


@pytest.mark.parametrize("C", all_classes(12), ids=str)
def test_arrows_follow_value_pairs(C):
    arrows = arrow_set(build_a_automaton(C))
    expected = set()
    for c1, c2 in C.value_cells().values():
        for (i, j), (k, l) in ((c1, c2), (c2, c1)):
            expected.add((f"a{i}", f"b{j}", f"b{l}", f"a{k}"))
    assert arrows == expected


def test_b_automaton(ex34, swap2):
    with pytest.raises(NotSquare):
        build_b_automaton(ex34)
    B = build_b_automaton(swap2)
    assert B.output["a1", "a1"] == "a2" and B.output["a1", "a2"] == "a2"
    assert not check_invertible(B)
    assert not check_bireversible(B)


def test_invertibility_examples(ex34, swap2):
    A = build_a_automaton(ex34)
    assert check_invertible(A)
    assert {x: A.output["a1", x] for x in A.alphabet} == {"b1": "b4", "b2": "b3", "b3": "b1", "b4": "b2"}
    assert check_invertible(identity_automaton())
    assert check_bireversible(A)
    assert check_bireversible(build_a_automaton(swap2))


def test_invertible_but_not_bireversible():
    # Two states that both send every letter to state p with the same output.
    A = MealyAutomaton(
        ("p", "q"), ("x", "y"),
        {(s, x): "p" for s in "pq" for x in "xy"},
        {("p", "x"): "x", ("p", "y"): "y", ("q", "x"): "x", ("q", "y"): "y"},
    )
    assert check_invertible(A) and not check_bireversible(A)


@pytest.mark.parametrize("C", all_classes(12), ids=str)
def test_invertibility_equivalence(C):
    A = build_a_automaton(C)
    assert is_invertible_pairing(C) == check_invertible(A) == check_bireversible(A)


@pytest.mark.parametrize("n", [2, 4])
def test_b_automaton_never_invertible(n):
    for C in classes(n, n):
        assert not check_invertible(build_b_automaton(C))


# --- helix and recognition ---------------------------------------------------

def test_helix_examples(ex34, swap2):
    H = build_helix(build_a_automaton(ex34))
    assert (("a1", "b1"), ("a2", "b4")) in H.cycles()
    assert len(H.edges()) == len(H.vertices) == 12
    assert build_helix(build_a_automaton(swap2)).cycles() == [
        (("a1", "b1"), ("a2", "b2")),
        (("a1", "b2"), ("a2", "b1")),
    ]


@pytest.mark.parametrize("C", all_classes(12), ids=str)
def test_pairing_automata_pass_recognition(C):
    A = build_a_automaton(C)
    H = build_helix(A)
    assert sorted(v for v, _ in H.edges()) == sorted(H.vertices)
    assert all(len(c) == 2 for c in H.cycles())
    assert all(t != s and y != x for s, x, y, t in A.arrows())
    if check_bireversible(A):
        assert canonical_form(recognize_pairing(A)) == canonical_form(C)
    else:
        with pytest.raises(NotBireversible):
            recognize_pairing(A)


def test_recognition_examples(ex34, swap2):
    assert canonical_form(recognize_pairing(build_a_automaton(ex34))) == canonical_form(ex34)
    assert recognize_pairing(build_a_automaton(swap2)).tolist() == [[1, 2], [2, 1]]
    with pytest.raises(HasLoop):
        recognize_pairing(identity_automaton())


def test_recognition_identity_output():
    # Bireversible, no loops, but x|x arrows.
    A = MealyAutomaton(
        ("p", "q"), ("x", "y"),
        {(s, x): ("q" if s == "p" else "p") for s in "pq" for x in "xy"},
        {(s, x): x for s in "pq" for x in "xy"},
    )
    with pytest.raises(HasIdentityOutput):
        recognize_pairing(A)


def test_recognition_long_helix_cycle():
    # Bireversible, loop and identity free, but the helix cycles have length 6.
    flip = {"p": "q", "q": "p"}
    rotate = {"x": "y", "y": "z", "z": "x"}
    B = MealyAutomaton(
        ("p", "q"), ("x", "y", "z"),
        {(s, x): flip[s] for s in "pq" for x in "xyz"},
        {(s, x): rotate[x] for s in "pq" for x in "xyz"},
    )
    assert check_bireversible(B)
    assert {len(c) for c in build_helix(B).cycles()} == {6}
    with pytest.raises(HelixCycleTooLong):
        recognize_pairing(B)


def test_recognition_rejects_non_bireversible(swap2):
    with pytest.raises(NotBireversible):
        recognize_pairing(build_b_automaton(swap2))


# --- dual and power ----------------------------------------------------------

def test_dual_examples(ex34, swap2):
    D = build_a_automaton(ex34)
    dual = dual_automaton(D)
    assert ("b1", "a1", "a2", "b4") in arrow_set(dual)
    assert dual.role == "dual"
    assert dual_automaton(dual) == D
    assert ("b1", "a1", "a2", "b2") in arrow_set(dual_automaton(build_a_automaton(swap2)))


def test_dual_requires_bireversible():
    C = validate_pairing([[1, 2, 3, 4], [2, 3, 5, 6], [4, 6, 1, 5]])
    with pytest.raises(NotBireversible):
        dual_automaton(build_a_automaton(C))


def test_power_examples(ex34):
    A = build_a_automaton(ex34)
    assert power_automaton(A, 1) is A
    P = power_automaton(A, 2)
    assert P.transition["a1", ("b1", "b1")] == "a3"
    assert P.output["a1", ("b1", "b1")] == ("b4", "b3")
    assert len(P.alphabet) == 16
    with pytest.raises(BudgetExceeded):
        power_automaton(A, 3, budget=63)
    with pytest.raises(ValueError):
        power_automaton(A, 0)


@pytest.mark.parametrize("L", [2, 3])
def test_power_action_agrees_with_iteration(ex34, L):
    rng = random.Random(L)
    A = build_a_automaton(ex34)
    P = power_automaton(A, L)
    for _ in range(100):
        s = rng.choice(A.states)
        blocks = [tuple(rng.choice(A.alphabet) for _ in range(L)) for _ in range(rng.randint(1, 4))]
        out, end = P.run(s, blocks)
        flat_out, flat_end = A.run(s, [x for b in blocks for x in b])
        assert [x for b in out for x in b] == list(flat_out)
        assert end == flat_end


# --- serialization -----------------------------------------------------------

def test_json_round_trip(ex34):
    A = build_a_automaton(ex34)
    assert automaton_from_json(automaton_to_json(A)) == A
    P = power_automaton(A, 2)
    assert automaton_from_json(automaton_to_json(P)) == P


def test_dot_exports(ex34):
    A = build_a_automaton(ex34)
    dot = automaton_to_dot(A)
    assert dot.startswith("digraph A {")
    assert '"a1" -> "a2" [label="b1|b4"];' in dot
    hdot = helix_to_dot(build_helix(A))
    assert '"(a1,b1)" -> "(a2,b4)";' in hdot


def test_automaton_validation():
    with pytest.raises(ValueError):
        MealyAutomaton(("s",), ("x",), {}, {})
    with pytest.raises(ValueError):
        MealyAutomaton(("s",), ("x",), {("s", "x"): "t"}, {("s", "x"): "x"})
    assert str(Arrow("a1", "b1", "b4", "a2")) == "a1 -b1|b4-> a2"
