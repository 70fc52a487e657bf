"""Mealy automata built from pairing matrices.

States and letters are opaque hashable labels (``"a1"``, ``"b3"``; tuples of
labels for the letters of a power automaton).  Their order in ``states`` and
``alphabet`` fixes every iteration order, so all constructions here are
deterministic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Mapping, NamedTuple

from .matrix import (
    BudgetExceeded,
    NotSquare,
    PairingMatrix,
    partner_map,
    relabel_first_occurrence,
    validate_pairing,
)

DEFAULT_POWER_BUDGET = 4096

Label = Hashable


class RecognitionError(ValueError):
    """The automaton does not come from any pairing matrix."""


class NotBireversible(RecognitionError):
    def __str__(self) -> str:
        return "NotBireversible"


class HasLoop(RecognitionError):
    def __init__(self, state, letter):
        super().__init__(state, letter)
        self.state, self.letter = state, letter

    def __str__(self) -> str:
        return f"HasLoop({label_str(self.state)},{label_str(self.letter)})"


class HasIdentityOutput(RecognitionError):
    def __init__(self, state, letter):
        super().__init__(state, letter)
        self.state, self.letter = state, letter

    def __str__(self) -> str:
        return f"HasIdentityOutput({label_str(self.state)},{label_str(self.letter)})"


class HelixCycleTooLong(RecognitionError):
    def __init__(self, vertex):
        super().__init__(vertex)
        self.vertex = vertex

    def __str__(self) -> str:
        s, x = self.vertex
        return f"HelixCycleTooLong(({label_str(s)},{label_str(x)}))"


def label_str(label: Label) -> str:
    if isinstance(label, tuple):
        return "".join(label_str(x) for x in label)
    return str(label)


class Arrow(NamedTuple):
    source: Label
    input: Label
    output: Label
    target: Label

    def __str__(self) -> str:
        return f"{label_str(self.source)} -{label_str(self.input)}|{label_str(self.output)}-> {label_str(self.target)}"


@dataclass(frozen=True, eq=False)
class MealyAutomaton:
    """Finite letter-to-letter transducer ``(S, X, transition, output)``.

    ``source`` records the pairing matrix an automaton was built from and
    ``role`` how its arrows read as group relations: ``"A"`` (arrow
    ``s -x|y-> t`` means ``s x = t y``), ``"dual"`` (arrow ``x -s|t-> y``
    means ``s x = t y``), ``"B"`` or ``"generic"``.  ``base`` is set on power
    automata and points at the automaton whose words they read.
    """

    states: tuple
    alphabet: tuple
    transition: Mapping
    output: Mapping
    source: PairingMatrix | None = field(default=None, repr=False)
    role: str = "generic"
    base: "MealyAutomaton | None" = field(default=None, repr=False)

    def __post_init__(self):
        if not self.states or not self.alphabet:
            raise ValueError("states and alphabet must be nonempty")
        if len(set(self.states)) != len(self.states) or len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("states and alphabet must be duplicate-free")
        states, letters = set(self.states), set(self.alphabet)
        for s in self.states:
            for x in self.alphabet:
                if (s, x) not in self.transition or (s, x) not in self.output:
                    raise ValueError(f"maps undefined at ({s!r}, {x!r})")
                if self.transition[s, x] not in states or self.output[s, x] not in letters:
                    raise ValueError(f"arrow at ({s!r}, {x!r}) leaves the automaton")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MealyAutomaton):
            return NotImplemented
        return (
            self.states == other.states
            and self.alphabet == other.alphabet
            and dict(self.transition) == dict(other.transition)
            and dict(self.output) == dict(other.output)
        )

    def __hash__(self):
        return hash((self.states, self.alphabet))

    def arrows(self) -> list[Arrow]:
        return [
            Arrow(s, x, self.output[s, x], self.transition[s, x])
            for s in self.states
            for x in self.alphabet
        ]

    def run(self, state, word):
        """Feed ``word`` from ``state``; return (output word, final state)."""
        out = []
        for x in word:
            out.append(self.output[state, x])
            state = self.transition[state, x]
        return tuple(out), state


def _a_labels(n):
    return tuple(f"a{i}" for i in range(1, n + 1))


def _b_labels(m):
    return tuple(f"b{j}" for j in range(1, m + 1))


def build_a_automaton(C: PairingMatrix) -> MealyAutomaton:
    """Automaton ``a_i -b_j|b_j'-> a_i'`` for each pair of equal cells."""
    states, letters = _a_labels(C.n_rows), _b_labels(C.n_cols)
    transition, output = {}, {}
    for (i, j), (i2, j2) in partner_map(C).items():
        transition[states[i - 1], letters[j - 1]] = states[i2 - 1]
        output[states[i - 1], letters[j - 1]] = letters[j2 - 1]
    return MealyAutomaton(states, letters, transition, output, source=C, role="A")


def build_b_automaton(C: PairingMatrix) -> MealyAutomaton:
    """Automaton ``a_i -a_j|a_i'-> a_j'`` for each pair of equal cells (square C)."""
    if C.n_rows != C.n_cols:
        raise NotSquare(C.shape)
    states = _a_labels(C.n_rows)
    transition, output = {}, {}
    for (i, j), (i2, j2) in partner_map(C).items():
        transition[states[i - 1], states[j - 1]] = states[j2 - 1]
        output[states[i - 1], states[j - 1]] = states[i2 - 1]
    return MealyAutomaton(states, states, transition, output, source=C, role="B")


def check_invertible(A: MealyAutomaton) -> bool:
    n = len(A.alphabet)
    return all(len({A.output[s, x] for x in A.alphabet}) == n for s in A.states)


def check_bireversible(A: MealyAutomaton) -> bool:
    """Invertible, and bijective on both ``S x X`` and ``S^-1 x X``.

    On ``S^-1 x X`` the inverse state ``s^-1`` reads ``y = output(s, x)``,
    writes ``x`` and moves to ``transition(s, x)^-1``.
    """
    if not check_invertible(A):
        return False
    size = len(A.states) * len(A.alphabet)
    forward = {(A.transition[s, x], A.output[s, x]) for s in A.states for x in A.alphabet}
    if len(forward) != size:
        return False
    backward = {(A.transition[s, x], x) for s in A.states for x in A.alphabet}
    return len(backward) == size


@dataclass(frozen=True)
class HelixGraph:
    vertices: tuple
    successor: Mapping

    def edges(self) -> list[tuple]:
        return [(v, self.successor[v]) for v in self.vertices]

    def cycles(self) -> list[tuple]:
        """Directed cycles, each listed from its first vertex in vertex order."""
        index = {v: k for k, v in enumerate(self.vertices)}
        seen, out = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            path, pos = [], {}
            w = v
            while w not in seen and w not in pos:
                pos[w] = len(path)
                path.append(w)
                w = self.successor[w]
            if w in pos:
                cyc = path[pos[w]:]
                start = min(range(len(cyc)), key=lambda k: index[cyc[k]])
                out.append(tuple(cyc[start:] + cyc[:start]))
            seen.update(path)
        return sorted(out, key=lambda c: index[c[0]])


def build_helix(A: MealyAutomaton) -> HelixGraph:
    vertices = tuple((s, x) for s in A.states for x in A.alphabet)
    succ = {(s, x): (A.transition[s, x], A.output[s, x]) for s, x in vertices}
    return HelixGraph(vertices, succ)


def recognize_pairing(A: MealyAutomaton) -> PairingMatrix:
    """Recover the pairing matrix of a pairing automaton.

    Rows follow ``A.states`` and columns ``A.alphabet``; values are numbered
    by first occurrence in row-major order.
    """
    if not check_bireversible(A):
        raise NotBireversible()
    for s in A.states:
        for x in A.alphabet:
            if A.transition[s, x] == s:
                raise HasLoop(s, x)
    for s in A.states:
        for x in A.alphabet:
            if A.output[s, x] == x:
                raise HasIdentityOutput(s, x)
    helix = build_helix(A)
    for v in helix.vertices:
        w = helix.successor[v]
        if w == v or helix.successor[w] != v:
            raise HelixCycleTooLong(v)
    srow = {s: i for i, s in enumerate(A.states)}
    xcol = {x: j for j, x in enumerate(A.alphabet)}
    ids: dict = {}
    grid = [[0] * len(A.alphabet) for _ in A.states]
    for s, x in helix.vertices:
        key = frozenset({(s, x), helix.successor[s, x]})
        ids.setdefault(key, len(ids) + 1)
        grid[srow[s]][xcol[x]] = ids[key]
    return validate_pairing(relabel_first_occurrence(grid))


def dual_automaton(A: MealyAutomaton) -> MealyAutomaton:
    """Exchange states and letters: ``s -x|y-> t`` becomes ``x -s|t-> y``."""
    if not check_bireversible(A):
        raise NotBireversible()
    transition, output = {}, {}
    for s, x, y, t in A.arrows():
        transition[x, s] = y
        output[x, s] = t
    role = {"A": "dual", "dual": "A"}.get(A.role, "generic")
    return MealyAutomaton(A.alphabet, A.states, transition, output, source=A.source, role=role)


def power_automaton(A: MealyAutomaton, L: int, budget: int = DEFAULT_POWER_BUDGET) -> MealyAutomaton:
    """Same states, letters are all words of length ``L`` read letter by letter.

    ``L == 1`` returns ``A`` itself so single letters keep their plain labels.
    """
    if L < 1:
        raise ValueError("power length must be positive")
    if L == 1:
        return A
    size = len(A.alphabet) ** L
    if size > budget:
        raise BudgetExceeded(f"{len(A.alphabet)}^{L} = {size} letters exceeds the budget {budget}")
    words = tuple(itertools.product(A.alphabet, repeat=L))
    transition, output = {}, {}
    for s in A.states:
        for w in words:
            out, t = A.run(s, w)
            transition[s, w] = t
            output[s, w] = out
    return MealyAutomaton(A.states, words, transition, output, source=A.source, role=A.role, base=A)


def automaton_to_dot(A: MealyAutomaton, name: str = "A") -> str:
    lines = [f"digraph {name} {{"]
    for s in A.states:
        lines.append(f'  "{label_str(s)}";')
    for s, x, y, t in A.arrows():
        lines.append(f'  "{label_str(s)}" -> "{label_str(t)}" [label="{label_str(x)}|{label_str(y)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def helix_to_dot(H: HelixGraph, name: str = "H") -> str:
    def node(v):
        return f'"({label_str(v[0])},{label_str(v[1])})"'

    lines = [f"digraph {name} {{"]
    for v in H.vertices:
        lines.append(f"  {node(v)};")
    for v, w in H.edges():
        lines.append(f"  {node(v)} -> {node(w)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _json_label(label):
    return [_json_label(x) for x in label] if isinstance(label, tuple) else label


def _from_json_label(label):
    return tuple(_from_json_label(x) for x in label) if isinstance(label, list) else label


def automaton_to_json(A: MealyAutomaton) -> dict:
    return {
        "states": [_json_label(s) for s in A.states],
        "alphabet": [_json_label(x) for x in A.alphabet],
        "arrows": [
            {"from": _json_label(s), "in": _json_label(x), "out": _json_label(y), "to": _json_label(t)}
            for s, x, y, t in A.arrows()
        ],
    }


def automaton_from_json(data: Mapping) -> MealyAutomaton:
    states = tuple(_from_json_label(s) for s in data["states"])
    alphabet = tuple(_from_json_label(x) for x in data["alphabet"])
    transition, output = {}, {}
    for arrow in data["arrows"]:
        key = (_from_json_label(arrow["from"]), _from_json_label(arrow["in"]))
        if key in transition:
            raise ValueError(f"duplicate arrow at {key}")
        transition[key] = _from_json_label(arrow["to"])
        output[key] = _from_json_label(arrow["out"])
    return MealyAutomaton(states, alphabet, transition, output)
