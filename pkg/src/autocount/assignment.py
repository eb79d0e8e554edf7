"""The 3-dimensional planar assignment model of Latin squares.

A 0/1 cube ``x[i, j, k]`` is feasible when every line of the cube (fixing two
of the three indices) contains exactly one 1; the feasible cubes are the
Latin squares via ``x[i, j, k] = 1 <=> L(i, j) = k``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .counting import all_latin_squares, enumerate_ls
from .latin import Isotopism, LatinError, LatinSquare, OrderMismatchError

MAX_N_PLAIN = 4
MAX_N_WITH_ISOTOPISM = 5


class InfeasibleError(ValueError):
    pass


class SolverGuardError(ValueError):
    pass


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BinaryTensor:
    """0/1 cube indexed by 1-based ``(i, j, k)``."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries)
        if arr.ndim != 3 or len(set(arr.shape)) != 1:
            raise ValueError(f"expected an n x n x n array, got shape {arr.shape}")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("tensor entries must be 0 or 1")
        object.__setattr__(self, "entries", _frozen(arr.astype(np.int8)))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, ijk: tuple[int, int, int]) -> int:
        i, j, k = ijk
        return int(self.entries[i - 1, j - 1, k - 1])

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryTensor) and np.array_equal(self.entries, other.entries)

    def ones(self) -> list[tuple[int, int, int]]:
        return [tuple(int(v) + 1 for v in idx) for idx in np.argwhere(self.entries == 1)]


@dataclass(frozen=True, eq=False)
class WeightTensor:
    weights: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.weights, dtype=float)
        if arr.ndim != 3 or len(set(arr.shape)) != 1:
            raise ValueError(f"expected an n x n x n array, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("weights must be finite")
        object.__setattr__(self, "weights", _frozen(arr))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @classmethod
    def zeros(cls, n: int) -> WeightTensor:
        return cls(np.zeros((n, n, n)))

    @classmethod
    def from_json(cls, data: str | dict) -> WeightTensor:
        obj = json.loads(data) if isinstance(data, str) else data
        w = cls(np.array(obj["weights"], dtype=float))
        if w.n != obj["n"]:
            raise ValueError(f"declared n={obj['n']} but weights have size {w.n}")
        return w

    def to_json(self) -> dict:
        return {"n": self.n, "weights": self.weights.tolist()}


def to_tensor(L: LatinSquare) -> BinaryTensor:
    n = L.n
    x = np.zeros((n, n, n), dtype=np.int8)
    for i, row in enumerate(L.cells):
        for j, k in enumerate(row):
            x[i, j, k - 1] = 1
    return BinaryTensor(x)


def is_feasible(X: BinaryTensor) -> bool:
    """All ``3 n^2`` line sums of the cube equal one."""
    e = X.entries
    return bool((e.sum(axis=0) == 1).all() and (e.sum(axis=1) == 1).all() and (e.sum(axis=2) == 1).all())


def from_tensor(X: BinaryTensor) -> LatinSquare:
    if not is_feasible(X):
        raise LatinError("tensor violates an assignment constraint")
    cells = tuple(tuple(int(k) + 1 for k in row) for row in X.entries.argmax(axis=2))
    return LatinSquare(cells)


def satisfies_autotopism_constraints(X: BinaryTensor, t: Isotopism) -> bool:
    """``x[i, j, k] == x[alpha(i), beta(j), gamma(k)]`` for every triple."""
    if X.n != t.n:
        raise OrderMismatchError(f"tensor of order {X.n} vs isotopism of order {t.n}")
    a = np.array(t.alpha.zero_based())
    b = np.array(t.beta.zero_based())
    g = np.array(t.gamma.zero_based())
    moved = X.entries[np.ix_(a, b, g)]
    return bool(np.array_equal(X.entries, moved))


def objective(X: BinaryTensor, W: WeightTensor) -> float:
    if X.n != W.n:
        raise OrderMismatchError(f"tensor of order {X.n} vs weights of order {W.n}")
    return math.fsum(W.weights[X.entries == 1].tolist())


def _square_objective(L_cells, W: np.ndarray) -> float:
    return math.fsum(W[i, j, k - 1] for i, row in enumerate(L_cells) for j, k in enumerate(row))


def solve_3pap_exact(W: WeightTensor, t: Optional[Isotopism] = None) -> tuple[BinaryTensor, float]:
    """Minimise the weight of a Latin square by exhaustive enumeration.

    Ties go to the lexicographically smallest square read row by row.
    With ``t`` only the squares having ``t`` as an autotopism compete.
    """
    n = W.n
    if t is None:
        if n > MAX_N_PLAIN:
            raise SolverGuardError(f"exhaustive 3PAP is limited to n <= {MAX_N_PLAIN}")
        squares = (tuple(tuple(int(v) + 1 for v in row) for row in sq) for sq in all_latin_squares(n))
    else:
        if t.n != n:
            raise OrderMismatchError(f"weights of order {n} vs isotopism of order {t.n}")
        if n > MAX_N_WITH_ISOTOPISM:
            raise SolverGuardError(
                f"exhaustive 3PAP with an autotopism is limited to n <= {MAX_N_WITH_ISOTOPISM}"
            )
        squares = (L.cells for L in enumerate_ls(t))
    best = None
    for cells in squares:
        cand = (_square_objective(cells, W.weights), cells)
        if best is None or cand < best:
            best = cand
    if best is None:
        raise InfeasibleError("no Latin square satisfies the autotopism constraints")
    value, cells = best
    return to_tensor(LatinSquare(cells)), value
