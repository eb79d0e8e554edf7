import itertools
import random
from fractions import Fraction

import pytest
import sympy

from autocount.counting import brute_force_count, count_ls
from autocount.latin import Isotopism, validate_partial
from autocount.permutations import parse_permutation
from autocount.groebner import (
    GroebnerError,
    Ideal,
    NotZeroDimensionalError,
    Polynomial,
    ResourceCapError,
    Ring,
    TermOrder,
    build_ideal_full,
    build_ideal_reduced,
    buchberger,
    degree_bounds,
    full_generator_families,
    is_groebner_basis,
    normal_form,
    quotient_dimension,
    standard_monomials,
)

from conftest import isotopism_suite, structure_triples

ORDERS = [TermOrder("degrevlex"), TermOrder("lex")]


def iso(n, a="()", b="()", g="()"):
    return Isotopism(*(parse_permutation(x, n) for x in (a, b, g)))


def xs(ring):
    return [Polynomial.variable(ring, v) for v in range(ring.nvars)]


def to_sympy(p, symbols):
    out = 0
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in p.ring.exponents(m).items():
            term *= symbols[v] ** e
        out += term
    return sympy.expand(out)


def monic(basis, symbols, order):
    return {sympy.expand(g / sympy.LC(g, *symbols, order=order)) for g in basis.exprs}


def test_monomial_packing():
    ring = Ring(["a", "b", "c"])
    a, b, c = (ring.var(v) for v in range(3))
    m = ring.monomial({0: 2, 2: 1})
    assert ring.exponent_vector(m) == (2, 0, 1)
    assert ring.divides(a, m) and not ring.divides(b, m)
    assert ring.divides(m, m) and not ring.divides(m, a)
    assert ring.lcm(a + a, a + c) == a + a + c
    assert ring.coprime(a, b) and not ring.coprime(m, a)
    assert ring.degree(m) == 3
    assert ring.format_monomial(m) == "a^2*c"
    with pytest.raises(GroebnerError):
        ring.monomial({0: 200})


def test_polynomial_arithmetic():
    ring = Ring(["x", "y"])
    x, y = xs(ring)
    p = (x + 1) * (x - 1)
    assert p == x * x - 1
    assert (x - x).is_zero()
    assert 2 * y - y == y
    assert (x * y).degree() == 2
    assert Polynomial.constant(ring, Fraction(1, 2)).terms == {0: Fraction(1, 2)}


def test_term_orders():
    ring = Ring(["x", "y", "z"])
    x, y, z = xs(ring)
    p = x * z * z + y * y * y + x * x
    assert p.leading_monomial(TermOrder("lex")) == ring.monomial({0: 2})
    # degree 3: x*z^2 vs y^3; degrevlex prefers the monomial with the smaller last exponent
    assert p.leading_monomial(TermOrder("degrevlex")) == ring.monomial({1: 3})
    ranked = TermOrder("lex", ranking=(2, 1, 0))
    assert p.leading_monomial(ranked) == ring.monomial({0: 1, 2: 2})
    with pytest.raises(ValueError):
        TermOrder("grlex")
    with pytest.raises(ValueError):
        TermOrder("lex", ranking=(0, 0, 1)).key_function(ring)


def test_order_is_multiplicative_and_total():
    ring = Ring(["x", "y", "z"])
    rng = random.Random(0)
    mons = [ring.monomial({v: rng.randint(0, 3) for v in range(3)}) for _ in range(40)]
    for order in ORDERS:
        key = order.key_function(ring)
        for a, b, c in itertools.product(mons[:12], repeat=3):
            if key(a) < key(b):
                assert key(a + c) < key(b + c)
        assert len({key(m) for m in mons}) == len(set(mons))
        assert all(key(0) <= key(m) for m in mons)


def test_buchberger_examples():
    ring = Ring(["x"])
    (x,) = xs(ring)
    gb = buchberger(Ideal(ring, [x - 1]))
    assert gb.polynomials == [x - 1]
    gb = buchberger(Ideal(ring, [x * x - x, x - 1]))
    assert gb.polynomials == [x - 1]
    assert quotient_dimension(gb) == 1


def test_unit_ideal():
    ring = Ring(["x", "y"])
    x, y = xs(ring)
    gb = buchberger(Ideal(ring, [x, x - 1]))
    assert gb.polynomials == [Polynomial.constant(ring, 1)]
    assert quotient_dimension(gb) == 0
    assert standard_monomials(gb) == []


def test_not_zero_dimensional():
    ring = Ring(["x", "y"])
    x, y = xs(ring)
    gb = buchberger(Ideal(ring, [x * x - x]))
    with pytest.raises(NotZeroDimensionalError):
        quotient_dimension(gb)
    with pytest.raises(NotZeroDimensionalError):
        degree_bounds(gb)


def test_textbook_basis_matches_sympy():
    ring = Ring(["x", "y", "z"])
    x, y, z = xs(ring)
    gens = [x * x + y * z - 2, x * y - z * z + 1, x + y + z - 3]
    sx, sy, sz = sympy.symbols("x y z")
    for order, name in ((TermOrder("lex"), "lex"), (TermOrder("degrevlex"), "grevlex")):
        gb = buchberger(Ideal(ring, gens), order)
        ours = {to_sympy(g, (sx, sy, sz)) for g in gb}
        ref = sympy.groebner([to_sympy(g, (sx, sy, sz)) for g in gens], sx, sy, sz, order=name)
        assert ours == monic(ref, (sx, sy, sz), name)
        assert is_groebner_basis(gb)
        assert quotient_dimension(gb) == len(standard_monomials(gb))


@pytest.mark.parametrize("t", [iso(2), iso(2, "(1 2)", "(1 2)"), iso(3, "(1 2 3)", "(1 2 3)", "(1 2 3)")], ids=str)
def test_latin_ideal_basis_matches_sympy(t):
    ideal = build_ideal_reduced(t)
    symbols = sympy.symbols(" ".join(ideal.ring.var_name(v) for v in range(ideal.ring.nvars)))
    symbols = symbols if isinstance(symbols, tuple) else (symbols,)
    gb = buchberger(ideal, TermOrder("lex"))
    ours = {to_sympy(g, symbols) for g in gb}
    ref = sympy.groebner([to_sympy(g, symbols) for g in ideal.generators], *symbols, order="lex")
    assert ours == monic(ref, symbols, "lex")


def test_full_generator_counts():
    for n in (1, 2, 3):
        ring, fam = full_generator_families(iso(n))
        assert sum(len(v) for v in fam.values()) == 3 * n * n + 2 * n ** 3
        assert ring.nvars == n ** 3
    ring, fam = full_generator_families(iso(2))
    assert [len(fam[k]) for k in ("symbol_in_column", "symbol_in_row", "cell", "boolean", "autotopism")] == [4, 4, 4, 8, 8]


def test_full_ideal_n1():
    ideal = build_ideal_full(iso(1))
    assert len(ideal.generators) == 2
    gb = buchberger(ideal)
    assert [g.format() for g in gb] == ["x_1_1_1 - 1"]


def test_full_ideal_identity_n3():
    gb = buchberger(build_ideal_full(iso(3)))
    assert quotient_dimension(gb) == 12 == brute_force_count(iso(3)).delta


def test_full_and_reduced_agree_n2():
    for t in structure_triples(2) + isotopism_suite(1, 2, 8):
        full = quotient_dimension(buchberger(build_ideal_full(t)))
        reduced = quotient_dimension(buchberger(build_ideal_reduced(t)))
        assert full == reduced == brute_force_count(t).delta


def test_full_and_reduced_agree_n3_sample():
    for t in isotopism_suite(5, 3, 6):
        full = quotient_dimension(buchberger(build_ideal_full(t)))
        assert full == count_ls(t).delta


def test_reduced_ideal_examples():
    t = iso(2, "(1 2)", "(1 2)")
    ideal = build_ideal_reduced(t)
    assert ideal.variables == ((1, 1, 1), (1, 1, 2), (1, 2, 1), (1, 2, 2))
    assert quotient_dimension(buchberger(ideal)) == 2
    ideal = build_ideal_reduced(iso(3, g="(1 2 3)"))
    gb = buchberger(ideal)
    assert quotient_dimension(gb) == 0
    assert build_ideal_reduced(iso(3)).variables == build_ideal_full(iso(3)).variables


def test_dropped_trivial_generators():
    ideal = build_ideal_full(iso(2))
    assert all(not g.is_zero() for g in ideal.generators)
    assert len(ideal.generators) == len({frozenset(g.terms.items()) for g in ideal.generators})


def test_path_agreement_all_structures_n3():
    for t in structure_triples(3):
        expected = count_ls(t).delta
        for order in ORDERS:
            assert quotient_dimension(buchberger(build_ideal_reduced(t), order)) == expected, (str(t), order.kind)


def test_path_agreement_sample_n4():
    checked = 0
    for t in isotopism_suite(31, 4, 40):
        ideal = build_ideal_reduced(t)
        if ideal.ring.nvars >= 48:
            continue
        expected = count_ls(t).delta
        assert quotient_dimension(buchberger(ideal)) == expected, str(t)
        checked += 1
    assert checked >= 10


@pytest.mark.parametrize(
    "t",
    [
        # cell orbit of (1, 1) visits the representative row twice
        iso(4, "(1 2)(3 4)", "(1 2 3 4)"),
        # triple orbit returns to cell (1, 1) with the symbol moved by gamma^2
        iso(4, "()", "(1 2)(3 4)", "(1 2 3 4)"),
    ],
    ids=str,
)
def test_orbit_links_are_needed(t):
    expected = count_ls(t).delta
    with_links = quotient_dimension(buchberger(build_ideal_reduced(t)))
    without = quotient_dimension(buchberger(build_ideal_reduced(t, orbit_links=False)))
    assert with_links == expected == 0
    assert without == 24


def test_prefix_generators():
    t = iso(2, "(1 2)", "(1 2)")
    P = validate_partial([[1, None], [None, None]])
    assert quotient_dimension(buchberger(build_ideal_reduced(t, P))) == 1
    with pytest.raises(ValueError):
        build_ideal_reduced(t, validate_partial([[None, None], [1, None]]))
    t = iso(3)
    P = validate_partial([[1, 2, 3], [None] * 3, [None] * 3])
    assert quotient_dimension(buchberger(build_ideal_reduced(t, P))) == 2


def test_normal_form_properties():
    t = iso(3, "(1 2 3)", "(1 2 3)")
    ideal = build_ideal_reduced(t)
    gb = buchberger(ideal)
    ring = ideal.ring
    for g in ideal.generators:
        assert normal_form(g, gb).is_zero()
    one = Polynomial.constant(ring, 1)
    assert normal_form(one, gb) == one
    rng = random.Random(2)
    vs = xs(ring)
    lms = gb.leading_monomials()
    for _ in range(20):
        p = sum((Fraction(rng.randint(-3, 3)) * rng.choice(vs) * rng.choice(vs) for _ in range(4)), one)
        g = rng.choice(ideal.generators) * rng.choice(vs)
        nf = normal_form(p, gb)
        assert normal_form(nf, gb) == nf
        assert normal_form(p + g, gb) == nf
        assert not any(ring.divides(lm, m) for lm in lms for m in nf.terms)


def test_basis_is_reduced_and_monic():
    for t in isotopism_suite(3, 3, 8):
        for order in ORDERS:
            gb = buchberger(build_ideal_reduced(t), order)
            key = order.key_function(gb.ring)
            lms = gb.leading_monomials()
            assert is_groebner_basis(gb)
            for g, lm in zip(gb, lms):
                assert g.terms[lm] == 1
                others = [o for o in lms if o != lm]
                assert not any(gb.ring.divides(o, m) for o in others for m in g.terms)
            assert all(isinstance(c, Fraction) for g in gb for c in g.terms.values())
            assert all(type(c.numerator) is int for g in gb for c in g.terms.values())
            assert key is not None


def test_post_hoc_check_detects_non_basis():
    ring = Ring(["x", "y"])
    x, y = xs(ring)
    from autocount.groebner import GroebnerBasis

    fake = GroebnerBasis(ring, TermOrder("lex"), [x * x - y, x * y - 1], {})
    assert not is_groebner_basis(fake)


def test_resource_caps():
    ideal = build_ideal_reduced(iso(4))
    with pytest.raises(ResourceCapError):
        buchberger(ideal, variable_cap=10)
    with pytest.raises(ResourceCapError):
        buchberger(build_ideal_reduced(iso(3)), basis_cap=3)
    with pytest.raises(ResourceCapError):
        buchberger(build_ideal_full(iso(5)))


def test_dump_format():
    ideal = build_ideal_reduced(iso(2, "(1 2)", "(1 2)"))
    lines = ideal.dump().splitlines()
    assert len(lines) == len(ideal.generators)
    assert "x_1_1_1^2 - x_1_1_1" in lines
    assert all("x_" in ln for ln in lines)
