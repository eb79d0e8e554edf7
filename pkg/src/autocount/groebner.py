"""Polynomial ideals for autotopism counting and a Buchberger engine over Q.

Monomials are packed into Python integers, one fixed-width field per
variable with a guard bit on top of each field. Products are integer sums
and divisibility is a single subtraction with the guard bits set, which keeps
the pure-Python reduction loop tolerable for the few dozen variables this
module is meant for.

The ideals count the Latin squares fixed by an isotopism: every variable
satisfies ``x^2 - x``, so the ideals are radical and zero-dimensional and the
number of standard monomials of a Groebner basis equals the number of
solutions.
"""
from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from gmpy2 import mpq

from .latin import Isotopism, PartialLatinSquare
from .symmetry import compute_s_theta, phi_with_exponent

logger = logging.getLogger(__name__)

FIELD_BITS = 8
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1
DEFAULT_VARIABLE_CAP = 64
DEFAULT_BASIS_CAP = 20000


class GroebnerError(RuntimeError):
    pass


class ResourceCapError(GroebnerError):
    """The instance is too large for the algebraic path; use the search."""


class GroebnerTimeout(ResourceCapError):
    pass


class NotZeroDimensionalError(GroebnerError):
    pass


class Ring:
    """Q[x_0, ..., x_{N-1}] with packed monomials.

    ``labels[v]`` is the ``(i, j, k)`` triple of variable ``v`` when the ring
    comes from a Latin square model, otherwise any hashable tag.
    """

    def __init__(self, labels: Sequence):
        self.labels = tuple(labels)
        self.nvars = len(self.labels)
        self.index = {lab: v for v, lab in enumerate(self.labels)}
        self._fmask = (1 << FIELD_BITS) - 1
        self.guards = 0
        self.ones = 0
        for v in range(self.nvars):
            self.guards |= 1 << (self._offset(v) + FIELD_BITS - 1)
            self.ones |= 1 << self._offset(v)

    def _offset(self, v: int) -> int:
        return (self.nvars - 1 - v) * FIELD_BITS

    # -- monomials ----------------------------------------------------------

    def monomial(self, exponents: dict[int, int] | None = None) -> int:
        m = 0
        for v, e in (exponents or {}).items():
            if e < 0 or e > MAX_EXPONENT:
                raise GroebnerError(f"exponent {e} out of range")
            m |= e << self._offset(v)
        return m

    def var(self, v: int) -> int:
        return 1 << self._offset(v)

    def exponents(self, m: int) -> dict[int, int]:
        out = {}
        for v in range(self.nvars):
            e = (m >> self._offset(v)) & self._fmask
            if e:
                out[v] = e
        return out

    def exponent_vector(self, m: int) -> tuple[int, ...]:
        f = self._fmask
        return tuple((m >> self._offset(v)) & f for v in range(self.nvars))

    def divides(self, a: int, b: int) -> bool:
        g = self.guards
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        g = self.guards
        ge = ((a | g) - b) & g  # guard set where a >= b
        fields = (ge >> (FIELD_BITS - 1)) * self._fmask
        return (a & fields) | (b & ~fields & ~g)

    def support(self, m: int) -> int:
        g = self.guards
        return ((m | g) - self.ones) & g

    def coprime(self, a: int, b: int) -> bool:
        return self.support(a) & self.support(b) == 0

    def degree(self, m: int) -> int:
        return sum(self.exponent_vector(m))

    def format_monomial(self, m: int) -> str:
        parts = []
        for v, e in self.exponents(m).items():
            name = self.var_name(v)
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def var_name(self, v: int) -> str:
        lab = self.labels[v]
        if isinstance(lab, tuple):
            return "x_" + "_".join(map(str, lab))
        return str(lab)


@dataclass(frozen=True)
class TermOrder:
    """``lex`` or ``degrevlex`` with ``ranking[0]`` the largest variable."""

    kind: str = "degrevlex"
    ranking: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in ("lex", "degrevlex"):
            raise ValueError(f"unknown term order {self.kind!r}")

    def key_function(self, ring: Ring):
        rank = self.ranking if self.ranking is not None else tuple(range(ring.nvars))
        if sorted(rank) != list(range(ring.nvars)):
            raise ValueError("ranking must be a permutation of the variable ids")
        n = ring.nvars
        cache: dict[int, int] = {}
        W = FIELD_BITS
        lex = self.kind == "lex"

        def key(m: int) -> int:
            k = cache.get(m)
            if k is not None:
                return k
            ev = ring.exponent_vector(m)
            k = 0
            if lex:
                for p, v in enumerate(rank):
                    k |= ev[v] << ((n - 1 - p) * W)
            else:
                deg = 0
                for p, v in enumerate(rank):
                    e = ev[v]
                    deg += e
                    k |= (MAX_EXPONENT - e) << (p * W)
                k |= deg << (n * W)
            cache[m] = k
            return k

        return key


@dataclass
class Polynomial:
    """Sparse polynomial: packed monomial -> non-zero rational coefficient."""

    ring: Ring
    terms: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {m: Fraction(c) for m, c in self.terms.items() if c != 0}

    @classmethod
    def constant(cls, ring: Ring, c) -> Polynomial:
        return cls(ring, {0: Fraction(c)})

    @classmethod
    def variable(cls, ring: Ring, v: int) -> Polynomial:
        return cls(ring, {ring.var(v): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(self.ring, other)

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        other = self._coerce(other)
        out: dict[int, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 + m2
                out[m] = out.get(m, 0) + c1 * c2
        for m in out:
            if any(e > MAX_EXPONENT for e in self.ring.exponent_vector(m)):
                raise GroebnerError("exponent overflow")
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            other = self._coerce(other)
        return self.terms == other.terms

    def leading_monomial(self, order: TermOrder) -> int:
        return max(self.terms, key=order.key_function(self.ring))

    def monic(self, key) -> Polynomial:
        lm = max(self.terms, key=key)
        lc = self.terms[lm]
        return Polynomial(self.ring, {m: c / lc for m, c in self.terms.items()})

    def degree(self) -> int:
        return max((self.ring.degree(m) for m in self.terms), default=0)

    def format(self, order: Optional[TermOrder] = None) -> str:
        if not self.terms:
            return "0"
        key = (order or TermOrder()).key_function(self.ring)
        out = []
        for m in sorted(self.terms, key=key, reverse=True):
            c = self.terms[m]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mono = self.ring.format_monomial(m)
            if mono == "1":
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            out.append((sign, body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.format()


@dataclass
class Ideal:
    ring: Ring
    generators: list[Polynomial]

    @property
    def variables(self) -> tuple:
        return self.ring.labels

    def dump(self, order: Optional[TermOrder] = None) -> str:
        """One generator per line, variables named ``x_i_j_k``."""
        return "".join(g.format(order) + "\n" for g in self.generators)


@dataclass
class GroebnerBasis:
    ring: Ring
    order: TermOrder
    polynomials: list[Polynomial]
    stats: dict = field(default_factory=dict)

    def leading_monomials(self) -> list[int]:
        key = self.order.key_function(self.ring)
        return [max(g.terms, key=key) for g in self.polynomials]

    def __len__(self) -> int:
        return len(self.polynomials)

    def __iter__(self):
        return iter(self.polynomials)


# -- ideal construction --------------------------------------------------------


def _unique_nonzero(polys: Iterable[Polynomial]) -> list[Polynomial]:
    out = []
    seen = set()
    for p in polys:
        if p.is_zero():
            continue
        sig = frozenset(p.terms.items())
        neg = frozenset((m, -c) for m, c in p.terms.items())
        if sig in seen or neg in seen:
            continue
        seen.add(sig)
        out.append(p)
    return out


def _unit_sum(ring: Ring, var_ids: Iterable[int]) -> Polynomial:
    terms: dict[int, Fraction] = {0: Fraction(-1)}
    for v in var_ids:
        m = ring.var(v)
        terms[m] = terms.get(m, 0) + 1
    return Polynomial(ring, terms)


def _field_equation(ring: Ring, v: int) -> Polynomial:
    m = ring.var(v)
    return Polynomial(ring, {m + m: Fraction(1), m: Fraction(-1)})


def _triples(n: int):
    r = range(1, n + 1)
    return [(i, j, k) for i in r for j in r for k in r]


def full_generator_families(t: Isotopism) -> tuple[Ring, dict[str, list[Polynomial]]]:
    """All five generator families over the n^3 variables, nothing dropped."""
    n = t.n
    ring = Ring(_triples(n))
    idx = ring.index
    r = range(1, n + 1)
    fam = {
        "symbol_in_column": [_unit_sum(ring, (idx[i, j, k] for i in r)) for j in r for k in r],
        "symbol_in_row": [_unit_sum(ring, (idx[i, j, k] for j in r)) for i in r for k in r],
        "cell": [_unit_sum(ring, (idx[i, j, k] for k in r)) for i in r for j in r],
        "boolean": [_field_equation(ring, v) for v in range(ring.nvars)],
        "autotopism": [
            Polynomial.variable(ring, idx[i, j, k])
            - Polynomial.variable(ring, idx[t.alpha(i), t.beta(j), t.gamma(k)])
            for i, j, k in _triples(n)
        ],
    }
    return ring, fam


def build_ideal_full(t: Isotopism) -> Ideal:
    """Ideal over all n^3 variables whose zeros are the squares fixed by ``t``."""
    ring, fam = full_generator_families(t)
    gens = [p for polys in fam.values() for p in polys]
    return Ideal(ring, _unique_nonzero(gens))


class _Collapse:
    """Rewrites triples through the orbit-representative map."""

    def __init__(self, t: Isotopism):
        self.t = t
        self.s = compute_s_theta(t)
        labels = [(i, j, k) for (i, j) in self.s.indices for k in range(1, t.n + 1)]
        self.ring = Ring(labels)
        self._cache: dict = {}

    def var(self, triple) -> int:
        v = self._cache.get(triple)
        if v is None:
            rep, _ = phi_with_exponent(self.t, triple, self.s)
            v = self.ring.index[tuple(rep)]
            self._cache[triple] = v
        return v

    def poly_var(self, triple) -> Polynomial:
        return Polynomial.variable(self.ring, self.var(triple))


def build_ideal_reduced(
    t: Isotopism,
    P: Optional[PartialLatinSquare] = None,
    orbit_links: bool = True,
) -> Ideal:
    """Ideal in the collapsed variables ``x_ijk`` with ``(i, j)`` representative.

    Generators: the three unit-sum families rewritten through the
    representative map, ``x_ijk`` for cells fixed by alpha and beta whose symbol
    is moved by gamma, ``x^2 - x`` for the kept variables and, when ``P`` is
    given, the pinning equations of its filled cells.

    ``orbit_links`` adds the rewritten autotopism binomials that survive the
    collapse. They only exist when a cell orbit visits the representative set
    more than once, and without them the zero set can contain arrays that are
    not fixed by ``t``.
    """
    n = t.n
    c = _Collapse(t)
    ring = c.ring
    r = range(1, n + 1)
    gens: list[Polynomial] = []
    gens += [_unit_sum(ring, (c.var((i, j, k)) for i in r)) for j in r for k in r]
    gens += [_unit_sum(ring, (c.var((i, j, k)) for j in r)) for i in r for k in r]
    gens += [_unit_sum(ring, (c.var((i, j, k)) for k in r)) for i in r for j in r]
    for i in r:
        if t.alpha(i) != i:
            continue
        for j in r:
            if t.beta(j) != j:
                continue
            gens += [c.poly_var((i, j, k)) for k in r if t.gamma(k) != k]
    gens += [_field_equation(ring, v) for v in range(ring.nvars)]
    if orbit_links:
        for i, j, k in _triples(n):
            a = c.var((i, j, k))
            b = c.var((t.alpha(i), t.beta(j), t.gamma(k)))
            if a != b:
                gens.append(Polynomial.variable(ring, a) - Polynomial.variable(ring, b))
    if P is not None:
        if P.n != n:
            raise ValueError(f"prefix of order {P.n} vs isotopism of order {n}")
        for i, j, p in P.filled():
            if (i, j) not in c.s:
                raise ValueError(f"prefix cell ({i},{j}) lies outside the representative set")
            for l in r:
                delta = 1 if l == p else 0
                gens.append(c.poly_var((i, j, l)) - delta)
                delta = 1 if l == j else 0
                gens.append(c.poly_var((i, l, p)) - delta)
                delta = 1 if l == i else 0
                gens.append(c.poly_var((l, j, p)) - delta)
    return Ideal(ring, _unique_nonzero(gens))


# -- reduction and Buchberger --------------------------------------------------


class _Reducer:
    """Multivariate division by a list of monic polynomials."""

    def __init__(self, ring: Ring, key):
        self.ring = ring
        self.key = key
        self.lms: list[int] = []
        self.tails: list[list[tuple[int, Fraction]]] = []

    def add(self, p: dict[int, Fraction]) -> None:
        lm = max(p, key=self.key)
        self.lms.append(lm)
        self.tails.append([(m, c) for m, c in p.items() if m != lm])

    def find_divisor(self, m: int, skip: int = -1) -> int:
        g = self.ring.guards
        mg = m | g
        for idx, lm in enumerate(self.lms):
            if idx != skip and (mg - lm) & g == g:
                return idx
        return -1

    def reduce(self, p: dict[int, Fraction], full: bool = True, skip: int = -1) -> dict[int, Fraction]:
        key = self.key
        p = dict(p)
        heap = [(-key(m), m) for m in p]
        heapq.heapify(heap)
        rem: dict[int, Fraction] = {}
        lms, tails = self.lms, self.tails
        while heap:
            _, m = heapq.heappop(heap)
            c = p.pop(m, None)
            if c is None or c == 0:
                continue
            idx = self.find_divisor(m, skip)
            if idx < 0:
                rem[m] = c
                if not full:
                    # top-reduced only: the rest is kept verbatim
                    rem.update({mm: cc for mm, cc in p.items() if cc != 0})
                    return rem
                continue
            q = m - lms[idx]
            for m2, c2 in tails[idx]:
                nm = m2 + q
                old = p.get(nm)
                if old is None:
                    p[nm] = -c * c2
                    heapq.heappush(heap, (-key(nm), nm))
                else:
                    p[nm] = old - c * c2
        return rem


def normal_form(p: Polynomial, gb: GroebnerBasis | Sequence[Polynomial], order: Optional[TermOrder] = None) -> Polynomial:
    """Remainder of ``p`` on division by ``gb`` (complete reduction)."""
    if isinstance(gb, GroebnerBasis):
        order, polys = gb.order, gb.polynomials
    else:
        order, polys = order or TermOrder(), list(gb)
    key = order.key_function(p.ring)
    red = _Reducer(p.ring, key)
    for g in polys:
        if g:
            red.add(g.monic(key).terms)
    return Polynomial(p.ring, red.reduce(p.terms))


def _spoly(ring: Ring, f: dict, g: dict, lf: int, lg: int) -> dict[int, Fraction]:
    # f and g are monic
    L = ring.lcm(lf, lg)
    qf, qg = L - lf, L - lg
    out: dict[int, Fraction] = {}
    for m, c in f.items():
        if m != lf:
            out[m + qf] = out.get(m + qf, 0) + c
    for m, c in g.items():
        if m != lg:
            nm = m + qg
            out[nm] = out.get(nm, 0) - c
    return {m: c for m, c in out.items() if c != 0}


def buchberger(
    ideal: Ideal,
    order: Optional[TermOrder] = None,
    variable_cap: int = DEFAULT_VARIABLE_CAP,
    basis_cap: int = DEFAULT_BASIS_CAP,
    time_limit: Optional[float] = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal``.

    Pairs are processed by smallest lcm degree (normal strategy); the coprime
    criterion and the Gebauer-Moeller chain criterion discard useless pairs.
    """
    order = order or TermOrder()
    ring = ideal.ring
    if ring.nvars > variable_cap:
        raise ResourceCapError(f"{ring.nvars} variables exceed the cap of {variable_cap}")
    key = order.key_function(ring)
    start = time.monotonic()

    polys: list[dict[int, Fraction]] = []
    lms: list[int] = []
    live: list[int] = []  # indices into polys forming the current basis
    pairs: list[tuple[int, int, int, int]] = []  # heap of (deg, key, i, j)
    red = _Reducer(ring, key)
    stats = {"pairs": 0, "zero_reductions": 0, "coprime_skips": 0, "chain_skips": 0}

    def update(h: dict[int, Fraction]) -> None:
        nonlocal pairs
        lh = max(h, key=key)
        lc = h[lh]
        h = {m: c / lc for m, c in h.items()}
        hi = len(polys)
        polys.append(h)
        lms.append(lh)
        lcm_h = {g: ring.lcm(lh, lms[g]) for g in live}
        # Gebauer-Moeller: drop (h, g) when another new pair's lcm divides its lcm
        pending = list(live)
        kept: list[int] = []
        while pending:
            g = pending.pop()
            Lg = lcm_h[g]
            if ring.coprime(lh, lms[g]) or not any(
                ring.divides(lcm_h[o], Lg) for o in pending + kept
            ):
                kept.append(g)
            else:
                stats["chain_skips"] += 1
        new_pairs = []
        for g in kept:
            if ring.coprime(lh, lms[g]):
                stats["coprime_skips"] += 1
                continue
            L = lcm_h[g]
            new_pairs.append((ring.degree(L), key(L), g, hi))
        # old pairs whose lcm is strictly chained through h
        survivors = []
        for entry in pairs:
            a, b = entry[2], entry[3]
            L = ring.lcm(lms[a], lms[b])
            if ring.divides(lh, L) and ring.lcm(lms[a], lh) != L and ring.lcm(lms[b], lh) != L:
                stats["chain_skips"] += 1
                continue
            survivors.append(entry)
        pairs = survivors + new_pairs
        heapq.heapify(pairs)
        keep = [pos for pos, g in enumerate(live) if not ring.divides(lh, lms[g])]
        live[:] = [live[pos] for pos in keep] + [hi]
        red.lms = [red.lms[pos] for pos in keep] + [lh]
        red.tails = [red.tails[pos] for pos in keep] + [[(m, c) for m, c in h.items() if m != lh]]
        if len(live) > basis_cap:
            raise ResourceCapError(f"basis grew beyond {basis_cap} polynomials")

    for gen in ideal.generators:
        if gen.is_zero():
            continue
        terms = {m: mpq(c.numerator, c.denominator) for m, c in gen.terms.items()}
        h = red.reduce(terms) if red.lms else terms
        if h:
            update(h)

    while pairs:
        if time_limit is not None and time.monotonic() - start > time_limit:
            raise GroebnerTimeout("Groebner basis computation exceeded its time limit")
        _, _, a, b = heapq.heappop(pairs)
        stats["pairs"] += 1
        if stats["pairs"] % 500 == 0:
            logger.debug(
                "%d pairs done, %d pending, basis %d, largest %d terms",
                stats["pairs"], len(pairs), len(live), max(len(polys[i]) for i in live),
            )
        s = _spoly(ring, polys[a], polys[b], lms[a], lms[b])
        h = red.reduce(s) if s else {}
        if not h:
            stats["zero_reductions"] += 1
            continue
        update(h)

    basis = _interreduce(ring, key, [polys[i] for i in live])
    stats["elapsed"] = time.monotonic() - start
    out = [Polynomial(ring, {m: _to_fraction(c) for m, c in p.items()}) for p in basis]
    return GroebnerBasis(ring, order, out, stats)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _interreduce(ring: Ring, key, basis: list[dict[int, Fraction]]) -> list[dict[int, Fraction]]:
    lead = [max(p, key=key) for p in basis]
    # drop elements whose leading monomial is divisible by another's
    keep = []
    for i, li in enumerate(lead):
        redundant = False
        for j, lj in enumerate(lead):
            if i == j or not ring.divides(lj, li):
                continue
            if lj != li or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(i)
    basis = [basis[i] for i in keep]
    out = []
    for idx, p in enumerate(basis):
        red = _Reducer(ring, key)
        for jdx, q in enumerate(basis):
            if jdx != idx:
                red.add(q)
        lm = max(p, key=key)
        tail = {m: c for m, c in p.items() if m != lm}
        reduced = red.reduce(tail) if tail else {}
        reduced[lm] = p[lm]
        lc = reduced[lm]
        out.append({m: c / lc for m, c in reduced.items()})
    out.sort(key=lambda p: key(max(p, key=key)))
    return out


def is_groebner_basis(gb: GroebnerBasis) -> bool:
    """Post-hoc check: every S-polynomial reduces to zero."""
    ring = gb.ring
    key = gb.order.key_function(ring)
    polys = [g.monic(key).terms for g in gb.polynomials]
    red = _Reducer(ring, key)
    for p in polys:
        red.add(p)
    for (a, f), (b, g) in combinations(enumerate(polys), 2):
        lf, lg = red.lms[a], red.lms[b]
        if ring.coprime(lf, lg):
            continue
        s = _spoly(ring, f, g, lf, lg)
        if s and red.reduce(s):
            return False
    return True


# -- standard monomials ----------------------------------------------------------


def degree_bounds(gb: GroebnerBasis) -> list[int]:
    """Per-variable exponent bound from pure-power leading terms."""
    ring = gb.ring
    bounds: list[Optional[int]] = [None] * ring.nvars
    for lm in gb.leading_monomials():
        ex = ring.exponents(lm)
        if len(ex) == 1:
            (v, e), = ex.items()
            if bounds[v] is None or e < bounds[v]:
                bounds[v] = e
    if any(lm == 0 for lm in gb.leading_monomials()):
        return [0] * ring.nvars
    missing = [ring.var_name(v) for v, b in enumerate(bounds) if b is None]
    if missing:
        raise NotZeroDimensionalError(f"no pure-power leading term for {', '.join(missing[:5])}")
    return bounds  # type: ignore[return-value]


def standard_monomials(gb: GroebnerBasis, limit: Optional[int] = None) -> list[int]:
    return list(_walk_staircase(gb, collect=True, limit=limit))


def quotient_dimension(gb: GroebnerBasis) -> int:
    """Count monomials divisible by no leading monomial of ``gb``."""
    return sum(1 for _ in _walk_staircase(gb, collect=False))


def _walk_staircase(gb: GroebnerBasis, collect: bool, limit: Optional[int] = None):
    ring = gb.ring
    lms = gb.leading_monomials()
    if any(lm == 0 for lm in lms):
        return  # the unit ideal has no standard monomials
    bounds = degree_bounds(gb)
    g = ring.guards
    # only leading monomials that are not pure powers can cut the box further
    mixed = [lm for lm in lms if len(ring.exponents(lm)) > 1]
    # variables with bound 1 never appear in a standard monomial
    active = [v for v in range(ring.nvars) if bounds[v] > 1]
    emitted = 0
    stack = [(0, 0)]
    while stack:
        pos, m = stack.pop()
        if any(((m | g) - lm) & g == g for lm in mixed):
            continue
        if pos == len(active):
            yield m if collect else 1
            emitted += 1
            if limit is not None and emitted >= limit:
                return
            continue
        v = active[pos]
        step = ring.var(v)
        for e in range(bounds[v] - 1, -1, -1):
            stack.append((pos + 1, m + e * step))
