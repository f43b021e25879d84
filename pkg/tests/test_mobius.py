import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import alphabets
from oracles import trace_count
from tracesys.errors import InputError
from tracesys.mobius import (CliqueFunction, enumerate_cliques, growth_coefficients, inverse_series,
                             is_normal_pair, mobius_inverse, mobius_polynomial, mobius_transform)
from tracesys.polynomial import (INFINITE_ROOT, Polynomial, compare_roots, count_roots, determinant,
                                 parse_polynomial, polynomial_to_json, root_equals, smallest_root,
                                 sturm_sequence)
from tracesys.traces import IndependenceAlphabet

Z = sympy.Symbol("z")


def names(cliques):
    return ["".join(sorted(c)) for c in cliques]


def to_sympy(p: Polynomial):
    return sum(sympy.Rational(c.numerator, c.denominator) * Z**k for k, c in enumerate(p.coeffs))


# -- cliques ---------------------------------------------------------------------

def test_cliques_m1(m1):
    assert names(enumerate_cliques(m1)) == ["", "a", "b", "c", "d", "ad", "bd"]


def test_cliques_m2(m2):
    got = names(enumerate_cliques(m2))
    assert len(got) == 13
    assert set(got) == {"", "a0", "a1", "a2", "a3", "a4", "a0a2", "a0a3", "a0a4", "a1a3", "a1a4",
                        "a2a4", "a0a2a4"}


def test_cliques_empty_alphabet():
    assert enumerate_cliques(IndependenceAlphabet.of([], [])) == [frozenset()]


@given(alphabets())
def test_cliques_downward_closed(al):
    cl = set(enumerate_cliques(al))
    for c in cl:
        for a in c:
            assert c - {a} in cl


def test_normal_pairs(m1):
    assert is_normal_pair(m1, {"a", "d"}, {"b"})
    assert is_normal_pair(m1, {"a"}, set())
    assert is_normal_pair(m1, set(), set())
    assert not is_normal_pair(m1, set(), {"a"})
    assert not is_normal_pair(m1, {"a"}, {"d"})


# -- Möbius transform --------------------------------------------------------------

def test_transform_of_m1_valuation(m1):
    weights = {"a": Fraction(1, 3), "b": Fraction(1, 3), "c": Fraction(1, 4), "d": Fraction(1, 4)}

    def f(c):
        out = Fraction(1)
        for a in c:
            out *= weights[a]
        return out

    h = mobius_transform(CliqueFunction.from_rule(m1, f))
    assert h[frozenset()] == 0
    assert all(v >= 0 for _, v in h.items())
    assert h.total() == 1


def test_transform_of_constant_is_mobius_at_one(m1):
    h = mobius_transform(CliqueFunction.from_rule(m1, lambda c: 1))
    assert h[frozenset()] == -1 == mobius_polynomial(m1)(1)


@given(st.data())
def test_inverse_round_trip_and_total(data):
    al = data.draw(alphabets())
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    f = CliqueFunction.from_rule(al, lambda c: Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
    h = mobius_transform(f)
    assert mobius_inverse(h) == f
    assert h.total() == f[frozenset()]


def test_clique_function_domain_is_checked(m1):
    with pytest.raises(InputError):
        CliqueFunction(m1, {0: Fraction(1)})


# -- Möbius polynomial and growth ----------------------------------------------------

def test_mobius_polynomial_examples(m1, m2):
    assert mobius_polynomial(m1) == Polynomial([1, -4, 2])
    assert mobius_polynomial(m2) == Polynomial([1, -5, 6, -1])
    for n in range(5):
        comm = IndependenceAlphabet.free_commutative([f"x{k}" for k in range(n)])
        assert mobius_polynomial(comm) == Polynomial([1, -1]) ** n


@given(alphabets())
def test_mobius_polynomial_normalisation(al):
    mu = mobius_polynomial(al)
    assert mu(0) == 1
    assert mu[1] == -len(al.letters)


def test_growth_m1(m1):
    assert growth_coefficients(m1, 3) == [1, 4, 14, 48]


def test_growth_examples():
    comm2 = IndependenceAlphabet.free_commutative("ab")
    assert growth_coefficients(comm2, 6) == [n + 1 for n in range(7)]
    assert growth_coefficients(IndependenceAlphabet.of([], []), 4) == [1, 0, 0, 0, 0]


@pytest.mark.parametrize("name", ["m1", "m2"])
def test_growth_matches_enumeration(name, request):
    al = request.getfixturevalue(name)
    limit = 6 if name == "m1" else 5
    assert growth_coefficients(al, limit) == [trace_count(al, n) for n in range(limit + 1)]


@given(alphabets(max_letters=3))
def test_growth_matches_enumeration_random(al):
    assert growth_coefficients(al, 5) == [trace_count(al, n) for n in range(6)]


def test_inverse_series_checks_constant_term():
    with pytest.raises(InputError):
        inverse_series(Polynomial([0, 1]), 3)


# -- polynomial arithmetic ---------------------------------------------------------

def test_polynomial_basics():
    p = Polynomial([1, -4, 2])
    assert str(p) == "1 - 4z + 2z^2"
    assert Polynomial([]).is_zero()
    assert Polynomial([1, 0, 0]).degree == 0
    q, r = divmod(p * Polynomial([1, 1]) + 3, Polynomial([1, 1]))
    assert q == p and r == 3
    assert parse_polynomial(polynomial_to_json(p)) == p
    assert parse_polynomial({"coeffs": ["1", "-1/2", "0.25"]}) == Polynomial([1, Fraction(-1, 2), Fraction(1, 4)])


def test_parse_polynomial_locates_bad_coefficient():
    with pytest.raises(InputError) as err:
        parse_polynomial({"coeffs": ["1", "x"]})
    assert "coeffs[1]" in str(err.value)


@given(st.lists(st.integers(-5, 5), max_size=5), st.lists(st.integers(-5, 5), max_size=5))
def test_gcd_and_division_against_sympy(a, b):
    p, q = Polynomial(a), Polynomial(b)
    if q.is_zero():
        return
    quo, rem = divmod(p, q)
    assert quo * q + rem == p
    if not p.is_zero():
        expect = sympy.Poly(sympy.gcd(to_sympy(p), to_sympy(q)), Z).monic()
        assert to_sympy(p.gcd(q)).expand() == expect.as_expr().expand()


def test_determinant_against_sympy(sys_b):
    from tracesys.system import mobius_matrix
    mu = mobius_matrix(sys_b).entries
    expect = sympy.Matrix([[to_sympy(p) for p in row] for row in mu]).det(method="berkowitz")
    assert sympy.expand(to_sympy(determinant(mu)) - expect) == 0


# -- smallest root -----------------------------------------------------------------

def test_root_m1():
    r = smallest_root(Polynomial([1, -4, 2]))
    assert r.width <= Fraction(1, 10**12)
    assert abs(float(r) - (1 - 2**0.5 / 2)) < 1e-9


def test_root_rational_half():
    p = Polynomial([1, -1]) ** 2 * Polynomial([1, -2])
    r = smallest_root(p)
    assert root_equals(r, Fraction(1, 2))
    assert r.contains(Fraction(1, 2)) and r.width <= Fraction(1, 10**12)


def test_root_constant_and_zero():
    assert smallest_root(Polynomial([1])) is INFINITE_ROOT
    with pytest.raises(InputError):
        smallest_root(Polynomial([]))


def test_root_beyond_one_and_none():
    r = smallest_root(Polynomial([1, Fraction(-1, 3)]))  # root 3
    assert root_equals(r, 3)
    assert smallest_root(Polynomial([1, 0, 1])).infinite


def test_double_root_without_sign_change():
    r = smallest_root(Polynomial([1, -1]) ** 2)
    assert root_equals(r, 1)


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=6))
def test_root_against_sympy(coeffs):
    coeffs[0] = coeffs[0] or 1
    p = Polynomial(coeffs)
    if p.is_constant():
        return
    r = smallest_root(p)
    positive = sorted(x for x in sympy.real_roots(to_sympy(p)) if x > 0)
    if not positive:
        assert r.infinite
        return
    x = positive[0]
    assert not r.infinite
    assert sympy.Rational(r.lo.numerator, r.lo.denominator) <= x <= sympy.Rational(r.hi.numerator, r.hi.denominator)
    assert r.width <= Fraction(1, 10**12)
    # the squarefree part changes sign across a proper bracket
    if not r.exact:
        q = p.squarefree()
        assert q(r.lo) * q(r.hi) < 0 or q(r.hi) == 0


@given(alphabets())
def test_root_of_mobius_polynomial(al):
    r = smallest_root(mobius_polynomial(al))
    total = all(al.is_independent(a, b) for a in al.letters for b in al.letters if a != b)
    if total:
        assert r.infinite or root_equals(r, 1)
    else:
        assert compare_roots(r, smallest_root(Polynomial([1, -2]))) <= 0


def test_compare_roots_exact_equality():
    a = smallest_root(Polynomial([1, -1, -1]))  # golden ratio conjugate
    b = smallest_root(Polynomial([1, -1, -1]) * Polynomial([1, -1]))
    assert compare_roots(a, b) == 0
    assert compare_roots(a, smallest_root(Polynomial([1, -2]))) == 1
    assert compare_roots(a, INFINITE_ROOT) == -1


def test_count_roots_half_open():
    p = Polynomial([1, -1]) * Polynomial([1, -2])  # roots 1/2 and 1
    seq = sturm_sequence(p)
    assert count_roots(seq, Fraction(0), Fraction(1)) == 2
    assert count_roots(seq, Fraction(1, 2), Fraction(1)) == 1
