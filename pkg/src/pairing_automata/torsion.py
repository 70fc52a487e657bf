"""Finite-order elements of Gamma_C found from cycles in pairing automata.

Every witness carries a relator-insertion certificate for ``word**exponent``;
:func:`verify_witness` replays it independently of how it was produced.

Two certificate shapes are used.  Cycle witnesses telescope: a cycle of
arrows ``q_i -x|y-> q_(i+1)`` gives ``y x^-1 = q_(i+1)^-1 q_i`` for every
arrow, and the product over the cycle collapses.  Bipartite witnesses first
rewrite each copy of ``x_s x_s'^-1`` into the state word ``t_c t_(c+1)^-1``
and then back into the chain of representatives that cancels.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .automata import (
    DEFAULT_POWER_BUDGET,
    MealyAutomaton,
    NotBireversible,
    build_a_automaton,
    check_bireversible,
    dual_automaton,
    power_automaton,
)
from .certify import (
    GAMMA,
    Certificate,
    CertificateBuilder,
    format_word,
    free_reduce,
    invert,
    inverse_token,
    relations_from_matrix,
    verify_certificate,
)
from .matrix import (
    BudgetExceeded,
    PairingError,
    PairingMatrix,
    is_invertible_pairing,
    partner_map,
    relabel_first_occurrence,
    validate_pairing,
)

LETTER_CYCLE = "LetterCycle"
DUAL_LETTER_CYCLE = "DualLetterCycle"
WORD_CYCLE = "WordCycle"
THEOREM4 = "Theorem4"
CYCLIC_BIPARTITE = "CyclicBipartite"


class TorsionError(ValueError):
    pass


class NotThreeRows(TorsionError):
    def __str__(self):
        return "NotThreeRows"


class NotInvertible(TorsionError):
    def __str__(self):
        return "NotInvertible"


class OddColumns(TorsionError):
    def __str__(self):
        return "OddColumns"


class NoStructureFound(TorsionError):
    def __str__(self):
        return "NoStructureFound"


class StructureMismatch(TorsionError):
    def __str__(self):
        return f"StructureMismatch({self.args[0] if self.args else ''})"


@dataclass(frozen=True)
class TorsionWitness:
    word: tuple
    exponent: int
    nontrivial_guaranteed: bool
    provenance: str
    certificate: Certificate = field(repr=False)
    # Two distinct generators whose equality would be forced if word were e.
    justification: tuple = ()

    def to_json(self) -> dict:
        return {
            "word": list(self.word),
            "exponent": self.exponent,
            "provenance": self.provenance,
            "nontrivial_guaranteed": self.nontrivial_guaranteed,
            "justification": list(self.justification),
            "certificate": self.certificate.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TorsionWitness":
        return cls(
            tuple(data["word"]),
            int(data["exponent"]),
            bool(data["nontrivial_guaranteed"]),
            data["provenance"],
            Certificate.from_json(data["certificate"]),
            tuple(data.get("justification", ())),
        )

    def __str__(self) -> str:
        return f"({format_word(self.word)})^{self.exponent} = e  [{self.provenance}]"


def verify_witness(C: PairingMatrix, w: TorsionWitness) -> bool:
    """The certificate starts at ``word**exponent`` and replays to ``e``."""
    if not w.word or free_reduce(w.word) != tuple(w.word) or w.exponent < 1:
        return False
    if free_reduce(w.certificate.start) != free_reduce(tuple(w.word) * w.exponent):
        return False
    return verify_certificate(C, w.certificate)


# --- cycles --------------------------------------------------------------

def _map_cycles(succ: dict, order: dict) -> list[list]:
    """Cycles of a partial map, each rotated to start at its least element."""
    seen, cycles = set(), []
    for start in sorted(succ, key=order.__getitem__):
        if start in seen:
            continue
        path, pos, v = [], {}, start
        while v in succ and v not in seen and v not in pos:
            pos[v] = len(path)
            path.append(v)
            v = succ[v]
        if v in pos:
            cyc = path[pos[v]:]
            k = min(range(len(cyc)), key=lambda i: order[cyc[i]])
            cycles.append(cyc[k:] + cyc[:k])
        seen.update(path)
    return sorted(cycles, key=lambda c: order[c[0]])


def _tokens(label) -> tuple:
    if isinstance(label, tuple):
        return tuple(t for x in label for t in _tokens(x))
    return (label,)


def _expand(A: MealyAutomaton, source, inp):
    """Base arrows traversed by one arrow of ``A`` (a power expands)."""
    if A.base is None:
        return [(source, inp, A.output[source, inp], A.transition[source, inp])]
    steps, s = [], source
    for x in inp:
        y, t = A.base.output[s, x], A.base.transition[s, x]
        steps.append((s, x, y, t))
        s = t
    return steps


def _factor(step, side):
    """Formal factor of one base step and its telescoping ends.

    Returns ``(f, lam_prev, lam_next)`` with ``f = lam_prev^-1 lam_next`` in
    the group.
    """
    src, x, y, dst = step
    if side == "A":
        # q x = q' y  =>  y x^-1 = q'^-1 q
        return (y, inverse_token(x)), dst, src
    # dual arrow z -s|t-> z' encodes s z = t z'  =>  t^-1 s = z' z^-1
    return (inverse_token(y), x), inverse_token(dst), inverse_token(src)


def _telescoping_certificate(relations, factors) -> Certificate:
    start = free_reduce(t for f, _, _ in factors for t in f)
    builder = CertificateBuilder(relations, start)
    anchor = current = None
    for f, lam_prev, lam_next in factors:
        if anchor is None:
            builder.insert(0, (inverse_token(lam_prev), lam_next) + invert(f))
            anchor = lam_prev
        else:
            assert lam_prev == current
            builder.insert(1, (lam_next,) + invert(f) + (inverse_token(current),))
        current = lam_next
        if current == anchor:
            anchor = None
    assert builder.word == (), builder.word
    return builder.certificate()


def _cycle_witness(A, C, relations, cycle, label, side, provenance):
    if len(cycle) == 1:
        return None  # a fixed point certifies a relation, not torsion
    inp, out = label
    chain = []
    for v in cycle:
        chain.extend(_expand(A, v, inp))
    factors = [_factor(step, side) for step in reversed(chain)]
    per_step = len(chain) // len(cycle)
    word = free_reduce(t for f, _, _ in factors[:per_step] for t in f)
    if not word:
        return None
    cert = _telescoping_certificate(relations, factors)
    single = A.base is None
    nontrivial = single and inp != out
    justification = (_tokens(out)[0], _tokens(inp)[0]) if nontrivial else ()
    return TorsionWitness(word, len(cycle), nontrivial, provenance, cert, justification)


def _source(A: MealyAutomaton) -> PairingMatrix:
    if A.source is None:
        raise TorsionError("automaton was not built from a pairing matrix")
    return A.source


def find_letter_cycles(A: MealyAutomaton) -> list[TorsionWitness]:
    """Cycles of arrows all labelled by the same ``x|y``.

    For ``A_C`` a cycle of length ``k`` gives ``(y x^-1)^k = e``; on a dual
    automaton (arrows ``x -s|t-> y``) it gives ``(t^-1 s)^k = e``.  Power
    automata contribute word-level versions of both.
    """
    C = _source(A)
    relations = relations_from_matrix(C, GAMMA)
    side = "dual" if A.role == "dual" else "A"
    if A.role not in ("A", "dual"):
        raise TorsionError(f"no group semantics for automaton role {A.role!r}")
    if A.base is not None:
        provenance = WORD_CYCLE
    else:
        provenance = DUAL_LETTER_CYCLE if side == "dual" else LETTER_CYCLE
    letter_index = {x: k for k, x in enumerate(A.alphabet)}
    state_index = {s: k for k, s in enumerate(A.states)}
    buckets: dict = {}
    for s, x, y, t in A.arrows():
        buckets.setdefault((x, y), {})[s] = t
    witnesses = []
    for label in sorted(buckets, key=lambda xy: (letter_index[xy[0]], letter_index[xy[1]])):
        for cycle in _map_cycles(buckets[label], state_index):
            w = _cycle_witness(A, C, relations, cycle, label, side, provenance)
            if w is not None:
                witnesses.append(w)
    return witnesses


def find_dual_letter_cycles(A: MealyAutomaton) -> list[TorsionWitness]:
    """For each state pair ``(s, t)``, cycles of ``x -> output(s, x)`` restricted
    to letters sent to ``t``; a cycle of length ``k`` gives ``(t^-1 s)^k = e``.

    Works on any pairing automaton, bireversible or not.
    """
    C = _source(A)
    if A.role != "A":
        raise TorsionError("dual letter cycles need an A_C automaton")
    relations = relations_from_matrix(C, GAMMA)
    letter_index = {x: k for k, x in enumerate(A.alphabet)}
    state_index = {s: k for k, s in enumerate(A.states)}
    buckets: dict = {}
    for s, x, y, t in A.arrows():
        buckets.setdefault((s, t), {})[x] = y
    witnesses = []
    for s, t in sorted(buckets, key=lambda st: (state_index[st[0]], state_index[st[1]])):
        for cycle in _map_cycles(buckets[s, t], letter_index):
            if len(cycle) == 1:
                continue
            chain = [(z, s, t, buckets[s, t][z]) for z in cycle]
            factors = [_factor(step, "dual") for step in reversed(chain)]
            word = free_reduce(factors[0][0])
            cert = _telescoping_certificate(relations, factors)
            nontrivial = s != t
            witnesses.append(TorsionWitness(
                word, len(cycle), nontrivial, DUAL_LETTER_CYCLE, cert, (t, s) if nontrivial else ()
            ))
    return witnesses


def find_word_cycles(
    A: MealyAutomaton,
    max_input_len: int = 2,
    max_state_len: int = 2,
    budget: int = DEFAULT_POWER_BUDGET,
) -> list[TorsionWitness]:
    """Letter cycles of the powers of ``A`` and of its dual, deduplicated."""
    if not check_bireversible(A):
        raise NotBireversible()
    for L, size in ((max_input_len, len(A.alphabet)), (max_state_len, len(A.states))):
        if size ** L > budget:
            raise BudgetExceeded(f"{size}^{L} letters exceeds the budget {budget}")
    found, seen = [], set()

    def add(ws):
        for w in ws:
            key = (w.word, w.exponent)
            if key not in seen:
                seen.add(key)
                found.append(w)

    for L in range(1, max_input_len + 1):
        add(find_letter_cycles(power_automaton(A, L, budget)))
    D = dual_automaton(A)
    for K in range(1, max_state_len + 1):
        add(find_letter_cycles(power_automaton(D, K, budget)))
    return found


# --- the 3 x 2n construction ---------------------------------------------

@dataclass(frozen=True)
class BipartiteNormalForm:
    """Row order, column order and relabeling bringing C to bipartite shape.

    Permutations are 0-based tuples: ``row_order[k]``/``col_perm[k]`` is the
    source row/column placed at position ``k``; ``value_relabel[v - 1]`` is
    the new value of ``v``.  ``perm_i[s - 1] = i_s`` (1-based images) where
    ``t_1 = x_s y_(i_s)^-1``, likewise ``perm_j`` for ``t_2`` and ``perm_k``
    for ``t_3``.
    """

    row_order: tuple
    col_perm: tuple
    value_relabel: tuple
    perm_i: tuple
    perm_j: tuple
    perm_k: tuple
    matrix: PairingMatrix

    @property
    def n(self) -> int:
        return len(self.perm_i)


@dataclass(frozen=True)
class CyclicBipartiteStructure:
    """Cyclic state order and letter halves: ``A``-letters step forward
    (outputting ``B``-letters), ``B``-letters step back (outputting ``A``)."""

    state_cycle: tuple
    letter_part_A: tuple
    letter_part_B: tuple


def _coerce_invertible(C) -> PairingMatrix:
    if not isinstance(C, PairingMatrix):
        rows = [list(r) for r in C]
        if len(rows) != 3:
            raise NotThreeRows()
        try:
            C = validate_pairing(rows)
        except PairingError as exc:
            raise NotInvertible() from exc
    if C.n_rows != 3:
        raise NotThreeRows()
    if C.n_cols % 2:
        raise OddColumns()
    if not is_invertible_pairing(C):
        raise NotInvertible()
    return C


def _check_normal_shape(M: PairingMatrix) -> bool:
    n = M.n_cols // 2
    r1, r2, r3 = M.entries
    return (
        list(r1) == list(range(1, 2 * n + 1))
        and list(r2[:n]) == list(range(2 * n + 1, 3 * n + 1))
        and sorted(r2[n:]) == list(range(1, n + 1))
        and sorted(r3[:n]) == list(range(n + 1, 2 * n + 1))
        and sorted(r3[n:]) == list(range(2 * n + 1, 3 * n + 1))
    )


def normal_form_3x2n(C) -> BipartiteNormalForm:
    """Permute rows/columns and relabel a 3 x 2n invertible pairing into the
    shape ``[1..2n ; 2n+1..3n | perm of 1..n ; perm of n+1..2n | perm of 2n+1..3n]``.

    The first row order (lexicographically) that works is used; columns
    are the ``x``-columns (row-1 cells paired into row 2) in increasing
    order followed by the remaining ``y``-columns in increasing order.
    """
    C = _coerce_invertible(C)
    n = C.n_cols // 2
    partners = partner_map(C)
    for order in itertools.permutations(range(3)):
        r1, r2, r3 = order
        xcols = [j for j in range(C.n_cols) if partners[r1 + 1, j + 1].row == r2 + 1]
        if len(xcols) != n:
            continue
        ycols = [j for j in range(C.n_cols) if j not in xcols]
        col_perm = tuple(xcols + ycols)
        rows = [[C.entries[r][c] for c in col_perm] for r in order]
        M = PairingMatrix(relabel_first_occurrence(rows))
        if not _check_normal_shape(M):
            continue
        relabel = [0] * C.n_values
        for r in range(3):
            for k in range(C.n_cols):
                relabel[rows[r][k] - 1] = M.entries[r][k]
        perms = []
        for a, b in ((0, 1), (1, 2), (2, 0)):
            perm = []
            for s in range(n):
                v = M.entries[a][s]
                p = M.entries[b].index(v)
                assert p >= n
                perm.append(p - n + 1)
            perms.append(tuple(perm))
        return BipartiteNormalForm(tuple(order), col_perm, tuple(relabel), *perms, M)
    raise NotInvertible()


def _structure_holds(A: MealyAutomaton, S: CyclicBipartiteStructure) -> str | None:
    """None if ``S`` fits ``A``, else a reason."""
    part_a, part_b = set(S.letter_part_A), set(S.letter_part_B)
    if len(part_a) != len(part_b) or part_a & part_b or part_a | part_b != set(A.alphabet):
        return "parts do not split the alphabet in equal halves"
    if sorted(S.state_cycle, key=A.states.index) != list(A.states):
        return "state cycle is not an ordering of all states"
    N = len(S.state_cycle)
    for c, s in enumerate(S.state_cycle):
        nxt, prv = S.state_cycle[(c + 1) % N], S.state_cycle[(c - 1) % N]
        for x in A.alphabet:
            y, t = A.output[s, x], A.transition[s, x]
            if x in part_a and (y not in part_b or t != nxt):
                return f"arrow {s} -{x}|{y}-> {t} breaks the A|B rule"
            if x in part_b and (y not in part_a or t != prv):
                return f"arrow {s} -{x}|{y}-> {t} breaks the B|A rule"
    return None


def detect_cyclic_bipartite(
    A: MealyAutomaton, max_letters: int = 8, max_states: int = 6
) -> CyclicBipartiteStructure:
    """Lexicographically least cyclic-bipartite structure of ``A``.

    Candidates are ordered by state cycle (in state index order) and then
    by the ``A``-half, both as index sequences.
    """
    if len(A.alphabet) > max_letters or len(A.states) > max_states:
        raise BudgetExceeded(
            f"structure search limited to {max_states} states and {max_letters} letters"
        )
    m = len(A.alphabet)
    if m % 2:
        raise NoStructureFound()
    for cycle in itertools.permutations(A.states):
        if len(cycle) >= 3:
            halves = [tuple(x for x in A.alphabet if A.transition[cycle[0], x] == cycle[1])]
        else:
            halves = itertools.combinations(A.alphabet, m // 2)
        for half in halves:
            S = CyclicBipartiteStructure(
                tuple(cycle), tuple(half), tuple(x for x in A.alphabet if x not in half)
            )
            if _structure_holds(A, S) is None:
                return S
    raise NoStructureFound()


def _cycle_length(perm, s) -> int:
    k, v = 1, perm[s]
    while v != s:
        v = perm[v]
        k += 1
    return k


def _bipartite_witness(A, S, provenance) -> TorsionWitness:
    reason = _structure_holds(A, S)
    if reason is not None:
        raise StructureMismatch(reason)
    C = _source(A)
    if A.role != "A":
        raise TorsionError("bipartite witnesses need an A_C automaton")
    relations = relations_from_matrix(C, GAMMA)
    xs = [x for x in A.alphabet if x in S.letter_part_A]
    ys = [y for y in A.alphabet if y in S.letter_part_B]
    states = S.state_cycle
    N = len(states)
    # perms[c][s] = index p with s_c x_s = s_(c+1) y_p, i.e. t_c = x_s y_p^-1
    perms = [tuple(ys.index(A.output[st, x]) for x in xs) for st in states]

    def inv(tok):
        return inverse_token(tok)

    for c in range(N):
        d = (c + 1) % N
        if perms[c] == perms[d]:
            continue
        s = next(k for k in range(len(xs)) if perms[c][k] != perms[d][k])
        back = {p: k for k, p in enumerate(perms[d])}
        sigma = [back[perms[c][k]] for k in range(len(xs))]
        m = _cycle_length(sigma, s)
        word = (xs[s], inv(xs[sigma[s]]))
        sc, sd, se = states[c], states[d], states[(c + 2) % N]
        builder = CertificateBuilder(relations, word * m)
        # each x_s x_s'^-1 becomes t_c t_d^-1 = s_c^-1 s_d s_e^-1 s_d
        for _ in range(m):
            p = ys[perms[c][s]]
            builder.rewrite((xs[s],), (inv(sc), sd, p))
            builder.rewrite((p, inv(xs[sigma[s]])), (inv(se), sd))
        # then back to x_r y^-1 . y x_sigma(r)^-1 along the sigma-cycle of s
        r = s
        for _ in range(m):
            p = ys[perms[c][r]]
            builder.rewrite((inv(sc), sd), (xs[r], inv(p)))
            builder.rewrite((inv(se), sd), (p, inv(xs[sigma[r]])))
            r = sigma[r]
        assert builder.word == (), builder.word
        justification = (ys[perms[c][s]], ys[perms[d][s]])
        return TorsionWitness(word, m, True, provenance, builder.certificate(), justification)

    # every t_c has the same representative x_1 y^-1, and t_1 t_2 ... t_N = e
    p = ys[perms[0][0]]
    word = (xs[0], inv(p))
    builder = CertificateBuilder(relations, word * N)
    for c in range(N):
        builder.rewrite(word, (inv(states[c]), states[(c + 1) % N]))
    assert builder.word == (), builder.word
    return TorsionWitness(word, N, True, provenance, builder.certificate(), (states[0], states[1 % N]))


def cyclic_bipartite_witness(A: MealyAutomaton, S: CyclicBipartiteStructure) -> TorsionWitness:
    """Finite-order element from a cyclic-bipartite structure.

    With ``t_c = s_c^-1 s_(c+1)``: if consecutive ``t_c, t_(c+1)`` differ the
    witness is ``t_c t_(c+1)^-1``, written ``x_s x_s'^-1``; otherwise all
    ``t_c`` coincide and ``t_1^N = t_1 ... t_N = e``.
    """
    return _bipartite_witness(A, S, CYCLIC_BIPARTITE)


def structure_from_normal_form(C: PairingMatrix, nf: BipartiteNormalForm) -> CyclicBipartiteStructure:
    n = nf.n
    return CyclicBipartiteStructure(
        tuple(f"a{r + 1}" for r in nf.row_order),
        tuple(f"b{j + 1}" for j in sorted(nf.col_perm[:n])),
        tuple(f"b{j + 1}" for j in sorted(nf.col_perm[n:])),
    )


def theorem4_witness(C) -> TorsionWitness:
    """Nontrivial finite-order element of Gamma_C for a 3 x 2n invertible pairing.

    Returns ``t_1 t_2^-1`` (or the next differing consecutive pair) with the
    length of the bipartite cycle through a point where the two
    permutations differ, or ``t_1`` with exponent 3 when all three agree.
    """
    nf = normal_form_3x2n(C)
    C = _coerce_invertible(C)
    A = build_a_automaton(C)
    return _bipartite_witness(A, structure_from_normal_form(C, nf), THEOREM4)
