"""Exact counting and enumeration of the Latin squares fixed by an isotopism.

The search assigns a symbol to one representative cell per (alpha, beta)
cell orbit and immediately writes the whole orbit: the cell ``Theta^l(c)``
receives ``gamma^l(k)``. Every (orbit, symbol) choice is precompiled into a
single integer bitmask over the "symbol s used in row r" and "symbol s used in
column c" flags, so feasibility of a choice is one ``state & mask`` test.

Choices that cannot close their orbit (``gamma^len(k) != k``) or that clash
with themselves inside a line are discarded up front. For cells fixed by both
alpha and beta this leaves exactly the symbols fixed by gamma.
"""
from __future__ import annotations

import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .latin import (
    Isotopism,
    LatinError,
    LatinSquare,
    PartialLatinSquare,
    is_autotopism,
    validate_partial,
)
from .symmetry import compute_s_theta

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_N = 5
_DEADLINE_CHECK_EVERY = 1 << 14
MEMO_LIMIT = 4_000_000


class SearchTimeout(RuntimeError):
    """Raised when a count exceeds its time limit."""


class GuardError(ValueError):
    """Raised when an instance exceeds a size guard."""


class PrefixError(ValueError):
    """Raised for a prefix that is not a valid input for Algorithm-style counting."""


class PrefixOutsideError(PrefixError):
    pass


class ContradictoryPrefixError(PrefixError):
    pass


@dataclass
class CountReport:
    delta: int
    nodes_explored: int = 0
    elapsed: float = 0.0
    method: str = "reduced_backtracking"

    def to_json(self, t: Optional[Isotopism] = None) -> dict:
        out: dict = {}
        if t is not None:
            out["n"] = t.n
            out["alpha"] = t.alpha.cycle_notation()
            out["beta"] = t.beta.cycle_notation()
            out["gamma"] = t.gamma.cycle_notation()
            out["cycle_structure"] = [str(cs) for cs in t.cycle_structure()]
        out["delta"] = str(self.delta)
        out["method"] = self.method
        out["nodes"] = self.nodes_explored
        out["elapsed_ms"] = round(self.elapsed * 1000, 3)
        return out


@dataclass(frozen=True)
class SymmetryInput:
    """Inputs of the symmetry decomposition: Delta = coefficient * |LS_P(theta)|."""

    theta: Isotopism
    prefix: Optional[PartialLatinSquare] = None
    coefficient: int = 1

    def __post_init__(self):
        if self.coefficient < 1:
            raise ValueError("the coefficient of symmetry must be a positive integer")


@dataclass
class OrbitModel:
    """Precompiled search space for one isotopism (0-based internally)."""

    theta: Isotopism
    orbits: list[list[tuple[int, int]]] = field(default_factory=list)
    # choices[o] maps a representative symbol k (0-based) to its orbit bitmask
    choices: list[dict[int, int]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.theta.n

    def row_bit(self, r: int, s: int) -> int:
        return 1 << (r * self.n + s)

    def col_bit(self, c: int, s: int) -> int:
        return 1 << (self.n * self.n + c * self.n + s)

    def placements(self, o: int, k: int) -> list[tuple[int, int, int]]:
        g = self.theta.gamma.zero_based()
        out = []
        for r, c in self.orbits[o]:
            out.append((r, c, k))
            k = g[k]
        return out


@lru_cache(maxsize=128)
def build_model(t: Isotopism) -> OrbitModel:
    n = t.n
    a, b, g = t.alpha.zero_based(), t.beta.zero_based(), t.gamma.zero_based()
    s_theta = compute_s_theta(t)
    model = OrbitModel(t)
    seen = [[False] * n for _ in range(n)]
    for i1, j1 in s_theta.indices:
        r0, c0 = i1 - 1, j1 - 1
        if seen[r0][c0]:
            continue
        cells = []
        r, c = r0, c0
        while not seen[r][c]:
            seen[r][c] = True
            cells.append((r, c))
            r, c = a[r], b[c]
        model.orbits.append(cells)
    assert all(all(row) for row in seen), "some cell orbit misses the representative set"

    for cells in model.orbits:
        opts = {}
        for k0 in range(n):
            mask = 0
            k = k0
            ok = True
            for r, c in cells:
                bits = model.row_bit(r, k) | model.col_bit(c, k)
                if mask & bits:
                    ok = False
                    break
                mask |= bits
                k = g[k]
            if ok and k == k0:
                opts[k0] = mask
        model.choices.append(opts)
    return model


def _search_order(model: OrbitModel, pinned: dict[int, int]) -> list[int]:
    """Static most-constrained-first ordering of the free orbits."""
    n = model.n
    free = [o for o in range(len(model.orbits)) if o not in pinned]
    touched_rows = [0] * n
    touched_cols = [0] * n
    for o in pinned:
        for r, c in model.orbits[o]:
            touched_rows[r] += 1
            touched_cols[c] += 1
    order = []
    while free:
        def score(o):
            cells = model.orbits[o]
            overlap = sum(touched_rows[r] + touched_cols[c] for r, c in cells)
            return (len(model.choices[o]), -overlap / len(cells), o)

        best = min(free, key=score)
        free.remove(best)
        order.append(best)
        for r, c in model.orbits[best]:
            touched_rows[r] += 1
            touched_cols[c] += 1
    return order


def _pin_prefix(model: OrbitModel, prefix: PartialLatinSquare) -> dict[int, int]:
    """Translate prefix cells into fixed representative symbols per orbit."""
    t = model.theta
    if prefix.n != t.n:
        raise PrefixError(f"prefix of order {prefix.n} vs isotopism of order {t.n}")
    s_theta = compute_s_theta(t)
    where = {}
    for o, cells in enumerate(model.orbits):
        for pos, cell in enumerate(cells):
            where[cell] = (o, pos)
    g_inv = t.gamma.zero_based()
    g_inv = [g_inv.index(x) for x in range(t.n)]
    pinned: dict[int, int] = {}
    for i, j, sym in prefix.filled():
        if (i, j) not in s_theta:
            raise PrefixOutsideError(f"prefix cell ({i},{j}) lies outside the representative set")
        o, pos = where[(i - 1, j - 1)]
        k = sym - 1
        for _ in range(pos):
            k = g_inv[k]
        if pinned.get(o, k) != k:
            raise ContradictoryPrefixError(
                f"prefix cell ({i},{j}) disagrees with another prefix cell on its orbit"
            )
        if k not in model.choices[o]:
            raise ContradictoryPrefixError(
                f"symbol {sym} at ({i},{j}) cannot be propagated over its orbit"
            )
        pinned[o] = k
    state = 0
    for o, k in pinned.items():
        mask = model.choices[o][k]
        if state & mask:
            raise ContradictoryPrefixError("prefix entries clash after orbit propagation")
        state |= mask
    return pinned


class _Counter:
    """Backtracking counter over precompiled choice masks.

    Sub-counts are memoized on ``(level, state & future)`` where ``future``
    holds every bit a remaining choice can touch: two partial fillings that
    agree there have identical completion counts.
    """

    def __init__(self, masks: list[list[int]], deadline: Optional[float], memo_limit: int = MEMO_LIMIT):
        self.masks = masks
        self.deadline = deadline
        self.memo_limit = memo_limit
        self.nodes = 0
        self.future = [0] * (len(masks) + 1)
        for level in range(len(masks) - 1, -1, -1):
            acc = self.future[level + 1]
            for m in masks[level]:
                acc |= m
            self.future[level] = acc

    def _tick(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout("search exceeded its time limit")

    def count(self, level: int, state: int) -> int:
        masks = self.masks
        last = len(masks) - 1
        if level > last:
            self.nodes += 1
            return 1
        every = _DEADLINE_CHECK_EVERY
        checker = self._tick
        future = self.future
        memo: dict[tuple[int, int], int] = {}
        limit = self.memo_limit

        def rec(level: int, state: int) -> int:
            self.nodes += 1
            if self.nodes % every == 0:
                checker()
            if level == last:
                hits = 0
                for m in masks[level]:
                    if not state & m:
                        hits += 1
                self.nodes += hits
                return hits
            key = (level, state & future[level])
            cached = memo.get(key)
            if cached is not None:
                return cached
            total = 0
            nxt = level + 1
            for m in masks[level]:
                if not state & m:
                    total += rec(nxt, state | m)
            if len(memo) < limit:
                memo[key] = total
            return total

        return rec(level, state)


def _count_subtree(args) -> tuple[int, int]:
    t, pinned, start_level, state, deadline = args
    model = build_model(t)
    order = _search_order(model, pinned)
    masks = [list(model.choices[o].values()) for o in order]
    counter = _Counter(masks, deadline)
    total = counter.count(start_level, state)
    return total, counter.nodes


def _run_count(
    t: Isotopism,
    prefix: Optional[PartialLatinSquare],
    jobs: int,
    time_limit: Optional[float],
) -> CountReport:
    start = time.monotonic()
    deadline = None if time_limit is None else start + time_limit
    model = build_model(t)
    pinned = _pin_prefix(model, prefix) if prefix is not None else {}
    state = 0
    for o, k in pinned.items():
        state |= model.choices[o][k]
    order = _search_order(model, pinned)
    masks = [list(model.choices[o].values()) for o in order]

    if jobs <= 1 or not masks:
        counter = _Counter(masks, deadline)
        delta = counter.count(0, state)
        nodes = counter.nodes
    else:
        # top-level split; the per-branch results are summed exactly
        tasks = [
            (t, pinned, 1, state | m, deadline) for m in masks[0] if not state & m
        ]
        delta, nodes = 0, 1
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for sub, sub_nodes in pool.map(_count_subtree, tasks):
                delta += sub
                nodes += sub_nodes
    return CountReport(delta, nodes, time.monotonic() - start, "reduced_backtracking")


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("AUTOCOUNT_JOBS", "1")))
    except ValueError:
        return 1


def count_ls(t: Isotopism, jobs: int = 1, time_limit: Optional[float] = None) -> CountReport:
    """Count the Latin squares having ``t`` as an autotopism.

    Returns 0 (not an error) when ``t`` is not an autotopism of any square.
    """
    return _run_count(t, None, jobs, time_limit)


def count_ls_with_prefix(
    s: SymmetryInput, jobs: int = 1, time_limit: Optional[float] = None
) -> CountReport:
    """Count the squares fixed by ``s.theta`` that contain ``s.prefix``.

    Raises:
        PrefixOutsideError: a prefix cell is not in the representative set.
        ContradictoryPrefixError: the prefix clashes once spread over orbits.
    """
    prefix = s.prefix
    if prefix is not None:
        try:
            prefix = validate_partial(prefix.cells)
        except LatinError as exc:
            raise ContradictoryPrefixError(str(exc)) from None
    return _run_count(s.theta, prefix, jobs, time_limit)


def delta_via_symmetry(
    s: SymmetryInput, jobs: int = 1, time_limit: Optional[float] = None
) -> CountReport:
    """``coefficient * |LS_P(theta)|``; a contradictory prefix yields 0."""
    try:
        report = count_ls_with_prefix(s, jobs, time_limit)
    except ContradictoryPrefixError:
        return CountReport(0, 0, 0.0, "reduced_backtracking")
    report.delta *= s.coefficient
    return report


def enumerate_ls(
    t: Isotopism,
    limit: Optional[int] = None,
    prefix: Optional[PartialLatinSquare] = None,
) -> Iterator[LatinSquare]:
    """Yield every square fixed by ``t`` (at most ``limit`` of them)."""
    if limit is not None and limit <= 0:
        return
    model = build_model(t)
    pinned = _pin_prefix(model, prefix) if prefix is not None else {}
    order = _search_order(model, pinned)
    n = model.n
    levels = [sorted(model.choices[o].items()) for o in order]
    chosen: dict[int, int] = dict(pinned)
    state = 0
    for o, k in pinned.items():
        state |= model.choices[o][k]
    emitted = 0

    def build() -> LatinSquare:
        grid = [[0] * n for _ in range(n)]
        for o, k in chosen.items():
            for r, c, sym in model.placements(o, k):
                grid[r][c] = sym + 1
        return LatinSquare(tuple(tuple(row) for row in grid))

    def rec(level: int, state: int):
        if level == len(order):
            yield build()
            return
        o = order[level]
        for k, m in levels[level]:
            if not state & m:
                chosen[o] = k
                yield from rec(level + 1, state | m)
        chosen.pop(o, None)

    for square in rec(0, state):
        yield square
        emitted += 1
        if limit is not None and emitted >= limit:
            return


# -- brute-force oracle --------------------------------------------------------


@lru_cache(maxsize=None)
def all_latin_squares(n: int) -> np.ndarray:
    """Every Latin square of order ``n`` as an ``(N, n, n)`` array over 0..n-1."""
    if n > BRUTE_FORCE_MAX_N:
        raise GuardError(f"brute-force enumeration is limited to n <= {BRUTE_FORCE_MAX_N}")
    full = (1 << n) - 1
    rows = [0] * n
    cols = [0] * n
    grid = [0] * (n * n)
    out = []

    def rec(pos: int):
        if pos == n * n:
            out.append(grid.copy())
            return
        r, c = divmod(pos, n)
        free = full & ~(rows[r] | cols[c])
        while free:
            bit = free & -free
            free ^= bit
            rows[r] |= bit
            cols[c] |= bit
            grid[pos] = bit.bit_length() - 1
            rec(pos + 1)
            rows[r] ^= bit
            cols[c] ^= bit

    rec(0)
    return np.array(out, dtype=np.int8).reshape(-1, n, n)


def autotopism_mask(t: Isotopism, squares: np.ndarray) -> np.ndarray:
    """Boolean vector: which of ``squares`` (0-based) have ``t`` as an autotopism."""
    a = np.array(t.alpha.zero_based())
    b = np.array(t.beta.zero_based())
    g = np.array(t.gamma.zero_based(), dtype=squares.dtype)
    moved = squares[:, a][:, :, b]
    return np.all(moved == g[squares], axis=(1, 2))


def brute_force_count(t: Isotopism) -> CountReport:
    """Filter the complete list of Latin squares of order n <= 5."""
    if t.n > BRUTE_FORCE_MAX_N:
        raise GuardError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {t.n}")
    start = time.monotonic()
    squares = all_latin_squares(t.n)
    delta = int(np.count_nonzero(autotopism_mask(t, squares)))
    return CountReport(delta, len(squares), time.monotonic() - start, "brute_force")


def brute_force_squares(t: Isotopism) -> list[LatinSquare]:
    squares = all_latin_squares(t.n)
    hits = squares[autotopism_mask(t, squares)] + 1
    out = [LatinSquare(tuple(tuple(int(v) for v in row) for row in sq)) for sq in hits]
    assert all(is_autotopism(t, L) for L in out)
    return out
