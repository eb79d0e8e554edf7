import itertools
import random

import pytest

from autocount.counting import all_latin_squares
from autocount.latin import Isotopism, LatinSquare
from autocount.permutations import Permutation, permutation_from_cycle_structure


def latin_squares(n):
    """All Latin squares of order n as LatinSquare objects (n <= 4)."""
    return [
        LatinSquare(tuple(tuple(int(v) + 1 for v in row) for row in sq))
        for sq in all_latin_squares(n)
    ]


def all_permutations(n):
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def partitions(n, largest=None):
    largest = largest or n
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


def cycle_structures(n):
    out = []
    for parts in partitions(n):
        counts = [0] * n
        for k in parts:
            counts[k - 1] += 1
        out.append(tuple(counts))
    return out


def canonical(a, b, g):
    return Isotopism(*(permutation_from_cycle_structure(x) for x in (a, b, g)))


def structure_triples(n):
    css = cycle_structures(n)
    return [canonical(a, b, g) for a, b, g in itertools.product(css, repeat=3)]


def random_permutation(rng, n):
    image = list(range(1, n + 1))
    rng.shuffle(image)
    return Permutation(tuple(image))


def random_isotopism(rng, n):
    return Isotopism(*(random_permutation(rng, n) for _ in range(3)))


def cayley_autotopism(rng, n):
    """A random conjugate of an autotopism of the cyclic group table."""
    a, b = rng.randrange(n), rng.randrange(n)
    shift = lambda s: Permutation(tuple((x - 1 + s) % n + 1 for x in range(1, n + 1)))
    base = Isotopism(shift(a), shift(b), shift(a + b))
    return base.conjugate(random_isotopism(rng, n))


def isotopism_suite(seed, n, count):
    """Mix of identity, fixed-point-free, random and realisable isotopisms."""
    rng = random.Random(seed)
    suite = [Isotopism.identity(n)]
    fpf = Permutation(tuple(list(range(2, n + 1)) + [1]))
    suite.append(Isotopism(fpf, fpf, Permutation.identity(n)))
    while len(suite) < count:
        kind = len(suite) % 4
        if kind == 0:
            suite.append(random_isotopism(rng, n))
        elif kind == 1:
            suite.append(cayley_autotopism(rng, n))
        elif kind == 2:
            p = random_permutation(rng, n)
            suite.append(Isotopism(p, p, p).conjugate(random_isotopism(rng, n)))
        else:
            a, b = random_permutation(rng, n), random_permutation(rng, n)
            suite.append(Isotopism(a, b, random_permutation(rng, n)))
    return suite


@pytest.fixture(scope="session")
def ls3():
    return latin_squares(3)


@pytest.fixture(scope="session")
def ls4():
    return latin_squares(4)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
