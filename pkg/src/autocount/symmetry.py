"""Orbit machinery of an isotopism acting on cells and triples.

The representative cell set ``S`` of an isotopism (alpha, beta, gamma) is made
of the rows led by a cycle leader of alpha: a row on a non-trivial alpha-cycle
keeps every column, a row fixed by alpha keeps only the columns that lead a
beta-cycle. Knowing a square fixed by the isotopism on ``S`` determines the
whole square, because every cell orbit of (alpha, beta) passes through ``S``.

All public functions take and return 1-based indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .latin import Isotopism, LatinError, LatinSquare, PartialLatinSquare, validate_latin
from .permutations import cycle_decomposition, fixed_points

PHI_TABLE_MAX_N = 16


class VariableIndex(NamedTuple):
    i: int
    j: int
    k: int


class ReconstructionError(LatinError):
    """The given cells do not extend to any square fixed by the isotopism."""


@dataclass(frozen=True)
class SThetaSet:
    indices: tuple[tuple[int, int], ...]
    n: int
    n_alpha: int
    n_beta: int
    fixed_alpha: int

    def __contains__(self, ij) -> bool:
        return tuple(ij) in self._lookup

    def __iter__(self):
        return iter(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def _lookup(self) -> frozenset:
        # frozen dataclass: build lazily and stash outside the field set
        try:
            return self.__dict__["_lookup_cache"]
        except KeyError:
            s = frozenset(self.indices)
            object.__setattr__(self, "_lookup_cache", s)
            return s

    def expected_size(self) -> int:
        return (self.n_alpha - self.fixed_alpha) * self.n + self.fixed_alpha * self.n_beta


def compute_s_theta(t: Isotopism) -> SThetaSet:
    n = t.n
    cyc_a = cycle_decomposition(t.alpha)
    cyc_b = cycle_decomposition(t.beta)
    fix_a = fixed_points(t.alpha)
    leaders_b = cyc_b.leaders
    indices = []
    for i in cyc_a.leaders:
        cols = leaders_b if i in fix_a else range(1, n + 1)
        indices.extend((i, j) for j in cols)
    return SThetaSet(tuple(sorted(indices)), n, len(cyc_a), len(cyc_b), len(fix_a))


def _step(t: Isotopism, v: VariableIndex, times: int = 1) -> VariableIndex:
    i, j, k = v
    for _ in range(times):
        i, j, k = t.alpha(i), t.beta(j), t.gamma(k)
    return VariableIndex(i, j, k)


def phi_with_exponent(t: Isotopism, v, s_theta: SThetaSet | None = None) -> tuple[VariableIndex, int]:
    """Return ``(phi(v), m)``; ``m`` is 0 when the cell of ``v`` is already in S."""
    v = VariableIndex(*v)
    s = s_theta if s_theta is not None else compute_s_theta(t)
    if (v.i, v.j) in s:
        return v, 0
    w = v
    for m in range(1, t.n + 1):
        w = _step(t, w)
        if (w.i, w.j) in s:
            return w, m
    raise AssertionError(f"orbit of cell ({v.i},{v.j}) never meets the representative set")


def phi(t: Isotopism, v) -> VariableIndex:
    return _phi_table(t)[_flat(t.n, VariableIndex(*v))]


def _flat(n: int, v: VariableIndex) -> int:
    return ((v.i - 1) * n + (v.j - 1)) * n + (v.k - 1)


@lru_cache(maxsize=64)
def _phi_table(t: Isotopism):
    s = compute_s_theta(t)
    n = t.n
    if n > PHI_TABLE_MAX_N:
        return _LazyPhi(t, s)
    table = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                table.append(phi_with_exponent(t, (i, j, k), s)[0])
    return table


class _LazyPhi:
    def __init__(self, t: Isotopism, s: SThetaSet):
        self.t, self.s = t, s

    def __getitem__(self, flat: int) -> VariableIndex:
        n = self.t.n
        rest, k = divmod(flat, n)
        i, j = divmod(rest, n)
        return phi_with_exponent(self.t, (i + 1, j + 1, k + 1), self.s)[0]


def orbit(t: Isotopism, v) -> list[VariableIndex]:
    start = VariableIndex(*v)
    out = [start]
    w = _step(t, start)
    while w != start:
        out.append(w)
        w = _step(t, w)
    return out


def cell_orbit(t: Isotopism, cell: tuple[int, int]) -> list[tuple[int, int]]:
    i0, j0 = cell
    out = [(i0, j0)]
    i, j = t.alpha(i0), t.beta(j0)
    while (i, j) != (i0, j0):
        out.append((i, j))
        i, j = t.alpha(i), t.beta(j)
    return out


def reconstruct(t: Isotopism, R: PartialLatinSquare) -> LatinSquare:
    """Rebuild the full square from its entries on the representative set."""
    if R.n != t.n:
        raise ReconstructionError(f"partial square of order {R.n} vs isotopism of order {t.n}")
    n = t.n
    s = compute_s_theta(t)
    filled = {(i, j) for i, j, _ in R.filled()}
    if filled != set(s.indices):
        extra = sorted(filled - set(s.indices))
        missing = sorted(set(s.indices) - filled)
        raise ReconstructionError(
            f"filled cells must be exactly the representative set (extra={extra[:4]}, missing={missing[:4]})"
        )
    g = t.gamma
    grid: list[list[int | None]] = [[None] * n for _ in range(n)]
    for i0, j0 in s.indices:
        if grid[i0 - 1][j0 - 1] is not None:
            continue
        cells = cell_orbit(t, (i0, j0))
        k = R[i0, j0]
        for i, j in cells:
            given = R[i, j]
            if given is not None and given != k:
                raise ReconstructionError(
                    f"propagation from ({i0},{j0}) puts {k} at ({i},{j}) but it holds {given}",
                    (i, j),
                )
            grid[i - 1][j - 1] = k
            k = g(k)
        if k != R[i0, j0]:
            raise ReconstructionError(
                f"orbit of ({i0},{j0}) returns with symbol {k} instead of {R[i0, j0]}", (i0, j0)
            )
    try:
        return validate_latin(grid)
    except LatinError as exc:
        raise ReconstructionError(f"propagated array is not Latin: {exc}", exc.location) from None
