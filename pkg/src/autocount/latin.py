"""Latin and partial Latin squares, isotopisms and the autotopism test."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .permutations import (
    CycleStructure,
    Permutation,
    compose,
    cycle_structure,
    inverse,
)


class LatinError(ValueError):
    """Raised when a grid violates the Latin property."""

    def __init__(self, message: str, location: Optional[tuple] = None):
        super().__init__(message)
        self.location = location


class OrderMismatchError(ValueError):
    pass


def _as_grid(grid: Iterable[Sequence[Optional[int]]]) -> tuple[tuple[Optional[int], ...], ...]:
    rows = tuple(tuple(None if v is None or v == 0 else int(v) for v in row) for row in grid)
    n = len(rows)
    if n == 0:
        raise LatinError("empty grid")
    for r, row in enumerate(rows, 1):
        if len(row) != n:
            raise LatinError(f"row {r} has {len(row)} cells, expected {n}", (r,))
    return rows


def _check_lines(cells, n: int, allow_empty: bool) -> None:
    for i, row in enumerate(cells, 1):
        for j, v in enumerate(row, 1):
            if v is None:
                if not allow_empty:
                    raise LatinError(f"cell ({i},{j}) is empty", (i, j))
            elif not 1 <= v <= n:
                raise LatinError(f"symbol {v} at ({i},{j}) outside [1, {n}]", (i, j))
    for i, row in enumerate(cells, 1):
        seen: dict[int, int] = {}
        for j, v in enumerate(row, 1):
            if v is None:
                continue
            if v in seen:
                raise LatinError(
                    f"row duplicate: symbol {v} in row {i} at columns {seen[v]} and {j}",
                    (i, seen[v], j),
                )
            seen[v] = j
    for j in range(n):
        seen = {}
        for i in range(n):
            v = cells[i][j]
            if v is None:
                continue
            if v in seen:
                raise LatinError(
                    f"column duplicate: symbol {v} in column {j + 1} at rows {seen[v]} and {i + 1}",
                    (seen[v], i + 1, j + 1),
                )
            seen[v] = i + 1


@dataclass(frozen=True)
class PartialLatinSquare:
    """n x n array over [n] with ``None`` for empty cells."""

    cells: tuple[tuple[Optional[int], ...], ...]

    @property
    def n(self) -> int:
        return len(self.cells)

    def __getitem__(self, ij: tuple[int, int]) -> Optional[int]:
        i, j = ij
        return self.cells[i - 1][j - 1]

    def filled(self) -> list[tuple[int, int, int]]:
        """Filled cells as 1-based ``(row, column, symbol)`` triples."""
        return [
            (i, j, v)
            for i, row in enumerate(self.cells, 1)
            for j, v in enumerate(row, 1)
            if v is not None
        ]

    @classmethod
    def empty(cls, n: int) -> PartialLatinSquare:
        return cls(tuple((None,) * n for _ in range(n)))

    def to_text(self) -> str:
        return format_square(self)

    def to_json(self) -> dict:
        return {"n": self.n, "cells": [list(row) for row in self.cells]}


@dataclass(frozen=True)
class LatinSquare(PartialLatinSquare):
    """n x n array over [n], each symbol once per row and column."""

    cells: tuple[tuple[int, ...], ...]

    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self.cells


def validate_latin(grid) -> LatinSquare:
    cells = _as_grid(grid)
    _check_lines(cells, len(cells), allow_empty=False)
    return LatinSquare(cells)


def validate_partial(grid) -> PartialLatinSquare:
    cells = _as_grid(grid)
    _check_lines(cells, len(cells), allow_empty=True)
    return PartialLatinSquare(cells)


@dataclass(frozen=True)
class Isotopism:
    """A triple acting on rows (alpha), columns (beta) and symbols (gamma)."""

    alpha: Permutation
    beta: Permutation
    gamma: Permutation

    def __post_init__(self):
        if not self.alpha.n == self.beta.n == self.gamma.n:
            raise OrderMismatchError(
                f"isotopism components have orders {self.alpha.n}, {self.beta.n}, {self.gamma.n}"
            )

    @property
    def n(self) -> int:
        return self.alpha.n

    @classmethod
    def identity(cls, n: int) -> Isotopism:
        e = Permutation.identity(n)
        return cls(e, e, e)

    def cycle_structure(self) -> tuple[CycleStructure, CycleStructure, CycleStructure]:
        return (cycle_structure(self.alpha), cycle_structure(self.beta), cycle_structure(self.gamma))

    def __mul__(self, other: Isotopism) -> Isotopism:
        return Isotopism(
            compose(self.alpha, other.alpha),
            compose(self.beta, other.beta),
            compose(self.gamma, other.gamma),
        )

    def inverse(self) -> Isotopism:
        return Isotopism(inverse(self.alpha), inverse(self.beta), inverse(self.gamma))

    def conjugate(self, by: Isotopism) -> Isotopism:
        """``by . self . by^-1`` componentwise; preserves cycle structure."""
        return by * self * by.inverse()

    def __str__(self) -> str:
        return "({}, {}, {})".format(
            self.alpha.cycle_notation(), self.beta.cycle_notation(), self.gamma.cycle_notation()
        )


def apply_isotopism(t: Isotopism, L: LatinSquare) -> LatinSquare:
    """Return L' with ``L'(alpha(i), beta(j)) = gamma(L(i, j))``."""
    if t.n != L.n:
        raise OrderMismatchError(f"isotopism of order {t.n} applied to square of order {L.n}")
    n = L.n
    out = [[0] * n for _ in range(n)]
    a, b, g = t.alpha.image, t.beta.image, t.gamma.image
    for i in range(n):
        row = L.cells[i]
        target = out[a[i] - 1]
        for j in range(n):
            target[b[j] - 1] = g[row[j] - 1]
    return LatinSquare(tuple(tuple(r) for r in out))


def is_autotopism(t: Isotopism, L: LatinSquare) -> bool:
    if t.n != L.n:
        raise OrderMismatchError(f"isotopism of order {t.n} tested on square of order {L.n}")
    a, b, g = t.alpha.image, t.beta.image, t.gamma.image
    cells = L.cells
    for i in range(L.n):
        row = cells[i]
        target = cells[a[i] - 1]
        for j in range(L.n):
            if target[b[j] - 1] != g[row[j] - 1]:
                return False
    return True


def contains(P: PartialLatinSquare, L: LatinSquare) -> bool:
    if P.n != L.n:
        raise OrderMismatchError(f"partial square of order {P.n} vs square of order {L.n}")
    return all(L.cells[i - 1][j - 1] == v for i, j, v in P.filled())


def restrict(L: PartialLatinSquare, cells: Iterable[tuple[int, int]]) -> PartialLatinSquare:
    """Keep only the listed 1-based cells of ``L``."""
    keep = set(cells)
    return PartialLatinSquare(
        tuple(
            tuple(v if (i, j) in keep else None for j, v in enumerate(row, 1))
            for i, row in enumerate(L.cells, 1)
        )
    )


# -- file formats ------------------------------------------------------------


def format_square(P: PartialLatinSquare) -> str:
    lines = [str(P.n)]
    lines.extend(" ".join("0" if v is None else str(v) for v in row) for row in P.cells)
    return "\n".join(lines) + "\n"


def parse_square_text(text: str, partial: bool = False) -> PartialLatinSquare:
    """Read the text format: first line ``n``, then ``n`` rows (``0`` = empty)."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise LatinError("empty square file")
    try:
        n = int(lines[0])
        rows = [[int(v) for v in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise LatinError(f"malformed square file: {exc}") from None
    if len(rows) != n:
        raise LatinError(f"expected {n} rows, found {len(rows)}")
    return validate_partial(rows) if partial else validate_latin(rows)


def parse_square_json(data: str | dict, partial: bool = False) -> PartialLatinSquare:
    obj = json.loads(data) if isinstance(data, str) else data
    rows = obj["cells"]
    if len(rows) != obj["n"]:
        raise LatinError(f"expected {obj['n']} rows, found {len(rows)}")
    return validate_partial(rows) if partial else validate_latin(rows)


def load_square(path: str, partial: bool = False) -> PartialLatinSquare:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return parse_square_json(text, partial)
    return parse_square_text(text, partial)
