"""Permutations of [n] = {1, ..., n}, their cycle decompositions and cycle structures.

Elements are 1-based at every public surface. Composition follows the
right-to-left convention ``compose(p, q)(x) == p(q(x))``: ``q`` acts first.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence


class PermutationError(ValueError):
    """Base class for malformed permutation input."""


class DuplicateElementError(PermutationError):
    pass


class OutOfRangeError(PermutationError):
    pass


class PermutationSyntaxError(PermutationError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A bijection of [n]; ``image[i - 1]`` is the image of ``i``."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        n = len(image)
        if n < 1:
            raise PermutationError("a permutation needs n >= 1")
        seen = set()
        for v in image:
            if not 1 <= v <= n:
                raise OutOfRangeError(f"element {v} outside [1, {n}]")
            if v in seen:
                raise DuplicateElementError(f"element {v} appears twice")
            seen.add(v)

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> Permutation:
        image = list(range(1, n + 1))
        seen: set[int] = set()
        for cycle in cycles:
            for a in cycle:
                if not 1 <= a <= n:
                    raise OutOfRangeError(f"element {a} outside [1, {n}]")
                if a in seen:
                    raise DuplicateElementError(f"element {a} appears twice")
                seen.add(a)
            for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
                image[a - 1] = b
        return cls(tuple(image))

    def __call__(self, x: int) -> int:
        return self.image[x - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def __pow__(self, k: int) -> Permutation:
        return power(self, k)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.image, 1))

    @property
    def order(self) -> int:
        return math.lcm(*(len(c) for c in cycle_decomposition(self).cycles))

    def zero_based(self) -> tuple[int, ...]:
        return tuple(v - 1 for v in self.image)

    def cycle_notation(self) -> str:
        cycles = [c for c in cycle_decomposition(self).cycles if len(c) > 1]
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __str__(self) -> str:
        return " ".join(map(str, self.image))


@dataclass(frozen=True)
class CycleDecomposition:
    """Cycles led by their minimum, sorted by leader; fixed points included."""

    cycles: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.cycles)

    @property
    def leaders(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.cycles)

    def __len__(self) -> int:
        return len(self.cycles)

    def to_permutation(self) -> Permutation:
        return Permutation.from_cycles(self.cycles, self.n)


@dataclass(frozen=True)
class CycleStructure:
    """``counts[i - 1]`` is the number of cycles of length ``i``."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if any(c < 0 for c in counts):
            raise PermutationError("cycle counts must be non-negative")
        total = sum(i * c for i, c in enumerate(counts, 1))
        if total != len(counts):
            raise PermutationError(
                f"cycle structure {counts} covers {total} points, expected {len(counts)}"
            )

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def fixed(self) -> int:
        return self.counts[0]

    @classmethod
    def parse(cls, text: str) -> CycleStructure:
        body = text.strip()
        if not re.fullmatch(r"\(?\s*\d+(\s*,\s*\d+)*\s*\)?", body):
            raise PermutationSyntaxError(f"malformed cycle structure {text!r}")
        return cls(tuple(int(v) for v in re.findall(r"\d+", body)))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.counts)) + ")"


_CYCLE_FORM = re.compile(r"\s*(\(\s*\d*(?:[\s,]+\d+)*\s*\)\s*)+")
_ONE_LINE = re.compile(r"\s*\d+(?:[\s,]+\d+)*\s*")


def parse_permutation(text: str, n: int) -> Permutation:
    """Parse one-line form ``"3 1 2"`` or cycle form ``"(1 2)(3 4)"``.

    Elements missing from a cycle form are fixed points; ``"()"`` and
    ``"id"`` denote the identity.
    """
    body = text.strip()
    if body in ("", "()", "id", "e"):
        return Permutation.identity(n)
    if body.startswith("("):
        if not _CYCLE_FORM.fullmatch(body):
            raise PermutationSyntaxError(f"malformed cycle notation {text!r}")
        cycles = [
            [int(v) for v in re.findall(r"\d+", group)]
            for group in re.findall(r"\(([^()]*)\)", body)
        ]
        return Permutation.from_cycles([c for c in cycles if c], n)
    if not _ONE_LINE.fullmatch(body):
        raise PermutationSyntaxError(f"malformed one-line permutation {text!r}")
    values = [int(v) for v in re.findall(r"\d+", body)]
    if len(values) != n:
        raise PermutationSyntaxError(f"one-line form has {len(values)} values, expected {n}")
    return Permutation(tuple(values))


def cycle_decomposition(p: Permutation) -> CycleDecomposition:
    seen = [False] * (p.n + 1)
    cycles = []
    for start in range(1, p.n + 1):
        if seen[start]:
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = True
            cycle.append(x)
            x = p(x)
        cycles.append(tuple(cycle))
    # scanning starts in increasing order, so each cycle is already led by its minimum
    return CycleDecomposition(tuple(cycles))


def cycle_structure(p: Permutation) -> CycleStructure:
    counts = [0] * p.n
    for c in cycle_decomposition(p).cycles:
        counts[len(c) - 1] += 1
    return CycleStructure(tuple(counts))


def fixed_points(p: Permutation) -> frozenset[int]:
    return frozenset(i for i in range(1, p.n + 1) if p(i) == i)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return ``p . q``, i.e. ``x -> p(q(x))``."""
    if p.n != q.n:
        raise PermutationError(f"cannot compose permutations of orders {p.n} and {q.n}")
    return Permutation(tuple(p(q(x)) for x in range(1, p.n + 1)))


def inverse(p: Permutation) -> Permutation:
    image = [0] * p.n
    for i, v in enumerate(p.image, 1):
        image[v - 1] = i
    return Permutation(tuple(image))


def power(p: Permutation, k: int) -> Permutation:
    if k < 0:
        return power(inverse(p), -k)
    result = list(range(1, p.n + 1))
    for c in cycle_decomposition(p).cycles:
        shift = k % len(c)
        for idx, x in enumerate(c):
            result[x - 1] = c[(idx + shift) % len(c)]
    return Permutation(tuple(result))


def permutation_from_cycle_structure(cs: CycleStructure | Sequence[int]) -> Permutation:
    """Canonical representative: longest cycles on the smallest integers."""
    if not isinstance(cs, CycleStructure):
        cs = CycleStructure(tuple(cs))
    cycles = []
    nxt = 1
    for length in range(cs.n, 0, -1):
        for _ in range(cs.counts[length - 1]):
            cycles.append(tuple(range(nxt, nxt + length)))
            nxt += length
    return Permutation.from_cycles(cycles, cs.n)
