"""Group words, the relations of Gamma_C and G_C, and triviality certificates.

Words are tuples of tokens: ``"a2"`` is the generator ``a_2`` and ``"A2"`` its
inverse (likewise ``"b3"``/``"B3"``).  A certificate proves a word trivial by
a sequence of relator insertions, each followed by free reduction, that ends
at the empty word.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .matrix import Cell, NotSquare, PairingMatrix

GAMMA = "gamma_c"
G = "g_c"

_TOKEN = re.compile(r"^([abAB])([1-9][0-9]*)$")

Word = tuple  # tuple[str, ...]


class CertificateError(ValueError):
    pass


class BadRelationId(CertificateError):
    def __str__(self) -> str:
        return f"BadRelationId({self.args[0]})"


class BadPosition(CertificateError):
    def __str__(self) -> str:
        return f"BadPosition({self.args[0]})"


class BadShift(CertificateError):
    def __str__(self) -> str:
        return f"BadShift({self.args[0]})"


def token(gen: str, sign: int = 1) -> str:
    return gen.lower() if sign > 0 else gen.upper()


def parse_token(tok: str) -> tuple[str, int]:
    """``"B3"`` -> ``("b3", -1)``."""
    if not _TOKEN.match(tok):
        raise ValueError(f"bad generator token {tok!r}")
    return tok.lower(), (1 if tok[0].islower() else -1)


def inverse_token(tok: str) -> str:
    return tok.swapcase()


def invert(word: Sequence[str]) -> Word:
    return tuple(inverse_token(t) for t in reversed(word))


def free_reduce(word: Iterable[str]) -> Word:
    out: list[str] = []
    for t in word:
        if out and out[-1] == inverse_token(t):
            out.pop()
        else:
            out.append(t)
    return tuple(out)


def parse_word(text: str) -> Word:
    """Parse ``"a1*b1*B4*A2"`` (``"e"`` or ``""`` is the empty word)."""
    text = text.strip()
    if text in ("", "e", "1"):
        return ()
    tokens = tuple(t for t in text.split("*"))
    for t in tokens:
        parse_token(t)
    return tokens


def format_word(word: Sequence[str]) -> str:
    return "*".join(word) if word else "e"


@dataclass(frozen=True)
class Relation:
    """``left = right``; the relator is ``left * right^-1``."""

    left: Word
    right: Word
    source_cells: tuple[Cell, Cell]

    @property
    def relator(self) -> Word:
        return self.left + invert(self.right)

    def __str__(self) -> str:
        return f"{''.join(self.left)} = {''.join(self.right)}"


def relations_from_matrix(C: PairingMatrix, kind: str = GAMMA) -> list[Relation]:
    """One relation per value pair, ordered by value."""
    if kind not in (GAMMA, G):
        raise ValueError(f"unknown group kind {kind!r}")
    if kind == G and C.n_rows != C.n_cols:
        raise NotSquare(C.shape)
    second = "b" if kind == GAMMA else "a"
    rels = []
    for _, (c1, c2) in C.value_cells().items():
        rels.append(Relation(
            (f"a{c1.row}", f"{second}{c1.col}"),
            (f"a{c2.row}", f"{second}{c2.col}"),
            (c1, c2),
        ))
    return rels


def oriented_relator(rel: Relation, inverted: bool, shift: int) -> Word:
    r = invert(rel.relator) if inverted else rel.relator
    return r[shift:] + r[:shift]


def relator_lookup(relations: Sequence[Relation]) -> dict[Word, tuple[int, bool, int]]:
    """Map every oriented cyclic shift of every relator to ``(id, inverted, shift)``."""
    table: dict[Word, tuple[int, bool, int]] = {}
    for rid, rel in enumerate(relations):
        for inverted in (False, True):
            for shift in range(len(rel.relator)):
                table.setdefault(oriented_relator(rel, inverted, shift), (rid, inverted, shift))
    return table


@dataclass(frozen=True)
class Step:
    position: int
    relation_id: int
    inverted: bool
    cyclic_shift: int


@dataclass(frozen=True)
class Certificate:
    group_kind: str
    start: Word
    steps: tuple[Step, ...] = ()

    def to_json(self) -> dict:
        return {
            "group": self.group_kind,
            "start": list(self.start),
            "steps": [
                {"pos": s.position, "rel": s.relation_id, "inv": s.inverted, "shift": s.cyclic_shift}
                for s in self.steps
            ],
        }

    @classmethod
    def from_json(cls, data) -> "Certificate":
        if isinstance(data, str):
            data = json.loads(data)
        start = tuple(data["start"])
        for t in start:
            parse_token(t)
        steps = tuple(
            Step(int(s["pos"]), int(s["rel"]), bool(s["inv"]), int(s["shift"])) for s in data["steps"]
        )
        return cls(data["group"], start, steps)


def replay(relations: Sequence[Relation], cert: Certificate) -> Word:
    """Apply every step of ``cert`` and return the final reduced word."""
    word = free_reduce(cert.start)
    for step in cert.steps:
        if not 0 <= step.relation_id < len(relations):
            raise BadRelationId(step.relation_id)
        rel = relations[step.relation_id]
        if not 0 <= step.cyclic_shift < len(rel.relator):
            raise BadShift(step.cyclic_shift)
        if not 0 <= step.position <= len(word):
            raise BadPosition(step.position)
        piece = oriented_relator(rel, step.inverted, step.cyclic_shift)
        word = free_reduce(word[: step.position] + piece + word[step.position:])
    return word


def verify_certificate(C: PairingMatrix, cert: Certificate) -> bool:
    """True iff replaying ``cert`` against the relations of ``C`` ends at ``e``.

    Structurally broken steps raise :class:`CertificateError`.
    """
    return replay(relations_from_matrix(C, cert.group_kind), cert) == ()


class CertificateBuilder:
    """Records a derivation as relator insertions while tracking the word."""

    def __init__(self, relations: Sequence[Relation], start: Sequence[str], kind: str = GAMMA):
        self.relations = relations
        self.table = relator_lookup(relations)
        self.kind = kind
        self.start = free_reduce(start)
        self.word = self.start
        self.steps: list[Step] = []

    def insert(self, position: int, piece: Sequence[str]) -> None:
        piece = tuple(piece)
        if piece not in self.table:
            raise CertificateError(f"{format_word(piece)} is not a relator")
        rid, inverted, shift = self.table[piece]
        self.steps.append(Step(position, rid, inverted, shift))
        self.word = free_reduce(self.word[:position] + piece + self.word[position:])

    def rewrite(self, u: Sequence[str], v: Sequence[str], start: int = 0) -> None:
        """Replace the first occurrence of ``u`` (at or after ``start``) by ``v``.

        The relator goes in front of ``u`` unless ``u`` starts the word, so
        an insertion that empties the word is never at either end; that keeps
        the position of a final step unambiguous.
        """
        u, v = tuple(u), tuple(v)
        for p in range(start, len(self.word) - len(u) + 1):
            if self.word[p:p + len(u)] == u:
                if p > 0:
                    self.insert(p, v + invert(u))
                else:
                    self.insert(len(u), invert(u) + v)
                return
        raise CertificateError(f"{format_word(u)} does not occur in {format_word(self.word)}")

    def certificate(self) -> Certificate:
        return Certificate(self.kind, self.start, tuple(self.steps))


@dataclass(frozen=True)
class Presentation:
    group_kind: str
    shape: tuple[int, int]
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    distinct_generators: bool = field(default=True)


def presentation(C: PairingMatrix, kind: str = GAMMA) -> Presentation:
    rels = relations_from_matrix(C, kind)
    gens = tuple(f"a{i}" for i in range(1, C.n_rows + 1))
    if kind == GAMMA:
        gens += tuple(f"b{j}" for j in range(1, C.n_cols + 1))
    return Presentation(kind, C.shape, gens, tuple(free_reduce(r.relator) for r in rels))


def export_presentation(C: PairingMatrix, kind: str = GAMMA, fmt: str = "cas") -> str:
    """Serialize the presentation as CAS text (one relator per line) or JSON."""
    P = presentation(C, kind)
    if fmt == "json":
        return json.dumps({
            "schema_version": 1,
            "group": kind,
            "shape": list(P.shape),
            "generators": list(P.generators),
            "relators": [list(r) for r in P.relators],
        }, indent=2) + "\n"
    if fmt not in ("cas", "text"):
        raise ValueError(f"unknown presentation format {fmt!r}")
    n, m = P.shape
    header = f"gamma_c {n} {m}" if kind == GAMMA else f"g_c {n}"
    lines = [header]
    lines += [f"gen {g}" for g in P.generators]
    lines += [f"rel {format_word(r)}" for r in P.relators]
    return "\n".join(lines) + "\n"


def relations_from_presentation_json(text: str) -> list[Relation]:
    """Rebuild the relation list from :func:`export_presentation` JSON."""
    data = json.loads(text)
    second = "b" if data["group"] == GAMMA else "a"
    rels = []
    for r in data["relators"]:
        left, right = tuple(r[:2]), invert(r[2:])
        cells = tuple(Cell(int(a[1:]), int(b[1:])) for a, b in (left, right))
        if not (left[1].startswith(second) and right[1].startswith(second)):
            raise ValueError(f"relator {r} does not match group {data['group']}")
        rels.append(Relation(left, right, cells))
    return rels
