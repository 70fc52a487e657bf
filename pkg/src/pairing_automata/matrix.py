"""Pairing matrices: validation, partner cells, canonical forms and enumeration.

A pairing matrix is an ``n x m`` integer matrix whose ``n*m/2`` values each
occur exactly twice, never twice in the same row or column.  Rows index the
``a``-generators and columns the ``b``-generators of the associated group.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

DEFAULT_CELL_BUDGET = 24


class PairingError(ValueError):
    """Base class for every validation failure of a pairing matrix."""


class MalformedMatrix(PairingError):
    def __str__(self) -> str:
        return f"MalformedMatrix({self.args[0]})"


class OddCellCount(PairingError):
    def __init__(self, n_rows: int, n_cols: int):
        super().__init__(n_rows, n_cols)
        self.n_rows, self.n_cols = n_rows, n_cols

    def __str__(self) -> str:
        return f"OddCellCount({self.n_rows},{self.n_cols})"


class ValueOutOfRange(PairingError):
    def __init__(self, value, row: int, col: int):
        super().__init__(value, row, col)
        self.value, self.row, self.col = value, row, col

    def __str__(self) -> str:
        return f"ValueOutOfRange({self.value!r} at {self.row},{self.col})"


class BadMultiplicity(PairingError):
    def __init__(self, value: int, count: int):
        super().__init__(value, count)
        self.value, self.count = value, count

    def __str__(self) -> str:
        return f"BadMultiplicity({self.value})"


class RowRepeat(PairingError):
    def __init__(self, row: int, value: int):
        super().__init__(row, value)
        self.row, self.value = row, value

    def __str__(self) -> str:
        return f"RowRepeat({self.row},{self.value})"


class ColRepeat(PairingError):
    def __init__(self, col: int, value: int):
        super().__init__(col, value)
        self.col, self.value = col, value

    def __str__(self) -> str:
        return f"ColRepeat({self.col},{self.value})"


class NotSquare(PairingError):
    def __str__(self) -> str:
        return "NotSquare"


class BudgetExceeded(RuntimeError):
    """A search or construction would exceed its configured size budget."""


class Cell(NamedTuple):
    """1-based (row, col) address of a matrix cell."""

    row: int
    col: int


@dataclass(frozen=True)
class PairingMatrix:
    entries: tuple[tuple[int, ...], ...]

    @property
    def n_rows(self) -> int:
        return len(self.entries)

    @property
    def n_cols(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def n_values(self) -> int:
        return self.n_rows * self.n_cols // 2

    def __getitem__(self, cell) -> int:
        i, j = cell
        return self.entries[i - 1][j - 1]

    def cells(self) -> Iterator[Cell]:
        for i in range(1, self.n_rows + 1):
            for j in range(1, self.n_cols + 1):
                yield Cell(i, j)

    def value_cells(self) -> dict[int, tuple[Cell, Cell]]:
        """Map each value to its two cells, first one in row-major order."""
        seen: dict[int, list[Cell]] = {}
        for cell in self.cells():
            seen.setdefault(self[cell], []).append(cell)
        return {v: (cs[0], cs[1]) for v, cs in sorted(seen.items())}

    def row_major(self) -> tuple[int, ...]:
        return tuple(v for row in self.entries for v in row)

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def __str__(self) -> str:
        return " / ".join(" ".join(map(str, row)) for row in self.entries)


@dataclass(frozen=True)
class MatrixEquivalence:
    """Row permutation, column permutation and value relabeling (all 0-based).

    ``row_perm[k]`` is the source row placed at row ``k``, likewise for
    columns; ``value_relabel[v - 1]`` is the new name of value ``v``.
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    value_relabel: tuple[int, ...]

    def __post_init__(self):
        for name, perm, base in (
            ("row_perm", self.row_perm, 0),
            ("col_perm", self.col_perm, 0),
            ("value_relabel", self.value_relabel, 1),
        ):
            if sorted(perm) != list(range(base, base + len(perm))):
                raise ValueError(f"{name} is not a bijection: {perm}")

    def apply(self, C: PairingMatrix) -> PairingMatrix:
        if (len(self.row_perm), len(self.col_perm)) != C.shape:
            raise ValueError("equivalence does not match matrix shape")
        return PairingMatrix(tuple(
            tuple(self.value_relabel[C.entries[r][c] - 1] for c in self.col_perm)
            for r in self.row_perm
        ))


def validate_pairing(raw: Sequence[Sequence[int]]) -> PairingMatrix:
    """Check the pairing invariants and return the validated matrix.

    Errors are reported for the first offending value in row-major order,
    checking, in turn, cell parity, value range, multiplicity and finally
    row/column repeats.
    """
    if isinstance(raw, PairingMatrix):
        raw = raw.entries
    rows = [list(r) for r in raw]
    if not rows or not rows[0]:
        raise MalformedMatrix("matrix must have positive dimensions")
    n, m = len(rows), len(rows[0])
    if any(len(r) != m for r in rows):
        raise MalformedMatrix("matrix is not rectangular")
    if (n * m) % 2:
        raise OddCellCount(n, m)
    top = n * m // 2
    for i, row in enumerate(rows, 1):
        for j, v in enumerate(row, 1):
            if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= top:
                raise ValueOutOfRange(v, i, j)
    counts: dict[int, int] = {}
    for row in rows:
        for v in row:
            counts[v] = counts.get(v, 0) + 1
    for row in rows:
        for v in row:
            if counts[v] != 2:
                raise BadMultiplicity(v, counts[v])
    col_seen: list[set[int]] = [set() for _ in range(m)]
    for i, row in enumerate(rows, 1):
        row_seen: set[int] = set()
        for j, v in enumerate(row, 1):
            if v in row_seen:
                raise RowRepeat(i, v)
            if v in col_seen[j - 1]:
                raise ColRepeat(j, v)
            row_seen.add(v)
            col_seen[j - 1].add(v)
    return PairingMatrix(tuple(tuple(r) for r in rows))


def partner_cell(C: PairingMatrix, c: Cell) -> Cell:
    """The unique other cell carrying the same value as ``c``."""
    i, j = c
    if not (1 <= i <= C.n_rows and 1 <= j <= C.n_cols):
        raise IndexError(f"cell {tuple(c)} outside a {C.n_rows}x{C.n_cols} matrix")
    v = C[c]
    for other in C.cells():
        if other != (i, j) and C[other] == v:
            return other
    raise AssertionError("unreachable for a validated matrix")


def partner_map(C: PairingMatrix) -> dict[Cell, Cell]:
    pairs = {}
    for a, b in C.value_cells().values():
        pairs[a], pairs[b] = b, a
    return pairs


def is_invertible_pairing(C: PairingMatrix) -> bool:
    """Every row and column share exactly one value besides their intersection."""
    cols = [set(col) for col in zip(*C.entries)]
    for row in C.entries:
        row_set = set(row)
        for j, col_set in enumerate(cols):
            if len((row_set & col_set) - {row[j]}) != 1:
                return False
    return True


def transpose(C: PairingMatrix) -> PairingMatrix:
    return PairingMatrix(tuple(zip(*C.entries)))


def relabel_first_occurrence(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    names: dict[int, int] = {}
    out = []
    for row in rows:
        new_row = []
        for v in row:
            if v not in names:
                names[v] = len(names) + 1
            new_row.append(names[v])
        out.append(tuple(new_row))
    return tuple(out)


class _LexMin:
    """Lexicographically least relabeled row-major sequence over row/column orders.

    Row 0 of any arrangement relabels to ``1..m`` whatever the column order,
    so column positions are fixed lazily while the second row is scanned: a
    value of that row shared with row 0 gets the label of the partner
    column's position, and if that column is still unplaced the smallest
    label is reached by placing it next.  Only genuine ties branch.  From
    the third row on every column is placed and the sequence is determined.
    """

    def __init__(self, rows: Sequence[Sequence[int]], bound=None, stop_below=False):
        self.rows = [tuple(r) for r in rows]
        self.m = len(self.rows[0])
        self.col_of = [{v: c for c, v in enumerate(r)} for r in self.rows]
        self.best = list(bound) if bound is not None else None
        self.stop_below = stop_below
        self.found_below = False
        self.version = 0

    def run(self):
        for r0 in range(len(self.rows)):
            self._start(r0)
            if self.found_below and self.stop_below:
                break
        return self.best

    # Comparison state is a pair (version, less) where ``less`` records that
    # the current prefix is already strictly below ``best`` of that version.
    def _cmp(self, seq, state):
        version, less = state
        if self.best is None:
            return (self.version, True)
        if version != self.version:
            b = self.best[:len(seq)]
            if seq < b:
                return (self.version, True)
            if seq > b:
                return None
            return (self.version, False)
        if less:
            return state
        k = len(seq) - 1
        if seq[k] < self.best[k]:
            return (self.version, True)
        if seq[k] > self.best[k]:
            return None
        return (self.version, False)

    def _finish(self, seq, state):
        if self.best is None or state[1]:
            self.best = list(seq)
            self.version += 1
            self.found_below = True

    def _start(self, r0):
        seq, state = [], (self.version, False)
        for k in range(self.m):
            seq.append(k + 1)
            state = self._cmp(seq, state)
            if state is None:
                return
        label = {}
        if len(self.rows) == 1:
            self._finish(seq, state)
            return
        remaining = [r for r in range(len(self.rows)) if r != r0]
        for r1 in remaining:
            rest = [r for r in remaining if r != r1]
            self._row1(r0, r1, rest, 0, [], label, self.m + 1, seq, state)
            if self.found_below and self.stop_below:
                return

    def _row1(self, r0, r1, rest, k, sigma, label, fresh, seq, state):
        if self.found_below and self.stop_below:
            return
        if k == self.m:
            self._later(rest, sigma, label, fresh, seq, state)
            return
        row0, row1 = self.rows[r0], self.rows[r1]
        if k < len(sigma):
            candidates = [sigma[k]]
        else:
            placed = set(sigma)
            candidates = [c for c in range(self.m) if c not in placed]
        options = []
        for c in candidates:
            new_sigma = sigma if k < len(sigma) else sigma + [c]
            new_label = dict(label)
            if k >= len(sigma):
                new_label[row0[c]] = k + 1
            v = row1[c]
            new_fresh = fresh
            if v in new_label:
                lab = new_label[v]
            elif v in self.col_of[r0]:
                partner = self.col_of[r0][v]
                new_sigma = new_sigma + [partner]
                lab = len(new_sigma)
                new_label[v] = lab
            else:
                lab = fresh
                new_label[v] = lab
                new_fresh = fresh + 1
            options.append((lab, new_sigma, new_label, new_fresh))
        low = min(o[0] for o in options)
        for lab, new_sigma, new_label, new_fresh in options:
            if lab != low:
                continue
            seq.append(lab)
            st = self._cmp(seq, state)
            if st is not None:
                self._row1(r0, r1, rest, k + 1, new_sigma, new_label, new_fresh, seq, st)
            seq.pop()

    def _later(self, rest, sigma, label, fresh, seq, state):
        if self.found_below and self.stop_below:
            return
        if not rest:
            self._finish(seq, state)
            return
        for r in rest:
            row = self.rows[r]
            new_label = dict(label)
            nf = fresh
            st = state
            added = 0
            for c in sigma:
                v = row[c]
                if v not in new_label:
                    new_label[v] = nf
                    nf += 1
                seq.append(new_label[v])
                added += 1
                st = self._cmp(seq, st)
                if st is None:
                    break
            if st is not None:
                self._later([x for x in rest if x != r], sigma, new_label, nf, seq, st)
            del seq[len(seq) - added:]
            if self.found_below and self.stop_below:
                return


def canonical_form(C: PairingMatrix) -> PairingMatrix:
    """Least row-major relabeled matrix over all row and column permutations."""
    best = _LexMin(C.entries).run()
    m = C.n_cols
    return PairingMatrix(tuple(tuple(best[i:i + m]) for i in range(0, len(best), m)))


def is_canonical(C: PairingMatrix) -> bool:
    target = list(C.row_major())
    if relabel_first_occurrence(C.entries) != C.entries:
        return False
    return not _has_smaller_arrangement(C.entries, target)


def _has_smaller_arrangement(rows, target) -> bool:
    search = _LexMin(rows, bound=target, stop_below=True)
    search.run()
    return search.found_below


def cell_budget() -> int:
    env = os.environ.get("PAIRING_CELL_BUDGET")
    return int(env) if env else DEFAULT_CELL_BUDGET


def enumerate_pairings(
    n: int, m: int, invertible_only: bool = False, budget: int | None = None
) -> Iterator[PairingMatrix]:
    """Yield one canonical representative per equivalence class, ascending.

    Cells are filled in row-major order with either a still-open value or
    the next fresh one; every completed row prefix that some rearrangement
    of its own rows beats lexicographically is cut off.
    """
    if n < 1 or m < 1:
        raise ValueError("dimensions must be positive")
    if (n * m) % 2:
        raise OddCellCount(n, m)
    budget = cell_budget() if budget is None else budget
    if n * m > budget:
        raise BudgetExceeded(f"{n}x{m} = {n * m} cells exceeds the cell budget {budget}")
    top = n * m // 2
    grid = [[0] * m for _ in range(n)]
    rows_used = [set() for _ in range(n)]
    cols_used = [set() for _ in range(m)]
    open_values: set[int] = set()

    def fill(pos: int, fresh: int):
        if pos == n * m:
            if open_values:
                return
            C = PairingMatrix(tuple(tuple(r) for r in grid))
            if invertible_only and not is_invertible_pairing(C):
                return
            yield C
            return
        i, j = divmod(pos, m)
        remaining = n * m - pos
        candidates = sorted(v for v in open_values if v not in rows_used[i] and v not in cols_used[j])
        if fresh <= top and len(open_values) + 1 <= remaining - 1:
            candidates.append(fresh)
        for v in candidates:
            is_new = v == fresh
            grid[i][j] = v
            rows_used[i].add(v)
            cols_used[j].add(v)
            if is_new:
                open_values.add(v)
            else:
                open_values.discard(v)
            if j == m - 1 and i >= 1 and _has_smaller_arrangement(grid[: i + 1], [x for r in grid[: i + 1] for x in r]):
                pass
            else:
                yield from fill(pos + 1, fresh + 1 if is_new else fresh)
            if is_new:
                open_values.discard(v)
            else:
                open_values.add(v)
            rows_used[i].discard(v)
            cols_used[j].discard(v)
            grid[i][j] = 0

    yield from fill(0, 1)


def brute_force_pairings(n: int, m: int) -> Iterator[PairingMatrix]:
    """Every valid ``n x m`` pairing matrix, by exhaustive assignment.

    Exponential; meant as an independent oracle for tiny sizes only.
    """
    if (n * m) % 2:
        return
    top = n * m // 2
    for flat in itertools.product(range(1, top + 1), repeat=n * m):
        rows = [flat[i * m:(i + 1) * m] for i in range(n)]
        try:
            yield validate_pairing(rows)
        except PairingError:
            continue
