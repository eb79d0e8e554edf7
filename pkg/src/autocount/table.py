"""Reference counts for autotopisms of orders 8 and 9.

Each entry lists the cycle structures of alpha = beta and gamma together with
the number of Latin squares having such an isotopism as an autotopism.
"""
from __future__ import annotations

from dataclasses import dataclass

from .latin import Isotopism
from .permutations import CycleStructure, permutation_from_cycle_structure


@dataclass(frozen=True)
class TableEntry:
    n: int
    alpha: CycleStructure
    beta: CycleStructure
    gamma: CycleStructure
    delta: int

    def __post_init__(self):
        if not self.alpha.n == self.beta.n == self.gamma.n == self.n:
            raise ValueError(f"cycle structures of entry do not all have order {self.n}")

    def isotopism(self) -> Isotopism:
        return Isotopism(
            permutation_from_cycle_structure(self.alpha),
            permutation_from_cycle_structure(self.beta),
            permutation_from_cycle_structure(self.gamma),
        )

    @property
    def label(self) -> str:
        return f"n={self.n} {self.alpha}|{self.beta}|{self.gamma}"


_RAW = {
    8: [
        ("0,0,0,0,0,0,0,1", [
            ("0,0,0,2,0,0,0,0", 1152),
            ("0,2,0,1,0,0,0,0", 1408),
            ("0,4,0,0,0,0,0,0", 3456),
            ("2,1,0,1,0,0,0,0", 1408),
            ("2,3,0,0,0,0,0,0", 3456),
            ("4,0,0,1,0,0,0,0", 3456),
            ("4,2,0,0,0,0,0,0", 8064),
            ("6,1,0,0,0,0,0,0", 17280),
            ("8,0,0,0,0,0,0,0", 40320),
        ]),
        ("0,0,0,2,0,0,0,0", [
            ("0,0,0,2,0,0,0,0", 106496),
            ("0,2,0,1,0,0,0,0", 188416),
            ("0,4,0,0,0,0,0,0", 811008),
            ("2,1,0,1,0,0,0,0", 253952),
            ("2,3,0,0,0,0,0,0", 1007616),
            ("4,0,0,1,0,0,0,0", 712704),
            ("4,2,0,0,0,0,0,0", 2727936),
            ("6,1,0,0,0,0,0,0", 7741440),
            ("8,0,0,0,0,0,0,0", 23224320),
        ]),
        ("0,1,0,0,0,1,0,0", [
            ("2,0,0,0,0,1,0,0", 3456),
            ("2,0,2,0,0,0,0,0", 19008),
        ]),
        ("1,0,0,0,0,0,1,0", [("1,0,0,0,0,0,1,0", 931)]),
        ("0,2,0,1,0,0,0,0", [
            ("0,2,0,1,0,0,0,0", 16384),
            ("2,1,0,1,0,0,0,0", 16384),
            ("4,0,0,1,0,0,0,0", 147456),
        ]),
        ("2,0,0,0,0,1,0,0", [("2,0,0,0,0,1,0,0", 19584)]),
        ("0,4,0,0,0,0,0,0", [
            ("6,1,0,0,0,0,0,0", 198747095040),
            ("8,0,0,0,0,0,0,0", 828396011520),
        ]),
        ("2,1,0,1,0,0,0,0", [("2,1,0,1,0,0,0,0", 8192)]),
        ("3,0,0,0,1,0,0,0", [("3,0,0,0,1,0,0,0", 388800)]),
        ("4,0,0,1,0,0,0,0", [("4,0,0,1,0,0,0,0", 7962624)]),
        ("4,2,0,0,0,0,0,0", [("4,2,0,0,0,0,0,0", 509607936)]),
    ],
    9: [
        ("0,0,0,0,0,0,0,0,1", [
            ("0,0,0,0,0,0,0,0,1", 2025),
            ("0,0,3,0,0,0,0,0,0", 7128),
            ("3,0,2,0,0,0,0,0,0", 12960),
            ("6,0,1,0,0,0,0,0,0", 71280),
            ("9,0,0,0,0,0,0,0,0", 362880),
        ]),
        ("0,0,1,0,0,1,0,0,0", [
            ("0,0,1,0,0,1,0,0,0", 15552),
            ("0,3,1,0,0,0,0,0,0", 124416),
            ("3,0,0,0,0,1,0,0,0", 62208),
            ("3,3,0,0,0,0,0,0,0", 1244160),
        ]),
        ("1,0,0,0,0,0,0,1,0", [("1,0,0,0,0,0,0,1,0", 4096)]),
        ("0,0,3,0,0,0,0,0,0", [
            ("6,0,1,0,0,0,0,0,0", 403813278720),
            ("9,0,0,0,0,0,0,0,0", 948109639680),
        ]),
        ("1,0,0,2,0,0,0,0,0", [("1,0,0,2,0,0,0,0,0", 12189696)]),
        ("1,1,0,0,0,1,0,0,0", [("1,1,0,0,0,1,0,0,0", 69120)]),
        ("2,0,0,0,0,0,1,0,0", [("2,0,0,0,0,0,1,0,0", 438256)]),
        ("3,0,0,0,0,1,0,0,0", [("3,0,0,0,0,1,0,0,0", 3110400)]),
        ("4,0,0,0,1,0,0,0,0", [("4,0,0,0,1,0,0,0,0", 199065600)]),
    ],
}


def _cs(text: str) -> CycleStructure:
    return CycleStructure(tuple(int(v) for v in text.split(",")))


TABLE: tuple[TableEntry, ...] = tuple(
    TableEntry(n, _cs(ab), _cs(ab), _cs(g), delta)
    for n, groups in _RAW.items()
    for ab, rows in groups
    for g, delta in rows
)


def entries(only: int | None = None) -> list[TableEntry]:
    return [e for e in TABLE if only is None or e.n == only]
