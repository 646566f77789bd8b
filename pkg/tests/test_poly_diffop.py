from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from nilh.algebra import (
    DiffOp,
    GaussPoly,
    Gauss,
    GroupPoint,
    Poly,
    Rotation,
    act,
    apply_exact,
    apply_numeric,
    commutator,
    compose,
    fields,
    generators,
    hilbert_basis,
    left_invariant_field,
    symmetrize,
)

GOLDEN = Path(__file__).parent / "golden"
x1, x2, x3, y1, y2, y3 = Poly.variables("N")


# ---------------------------------------------------------------------------
# polynomials

small_polys = st.dictionaries(
    st.tuples(*[st.integers(0, 2)] * 6),
    st.fractions(min_value=-5, max_value=5, max_denominator=6),
    max_size=4,
).map(lambda d: Poly("N", d))


def test_zero_coefficients_not_stored():
    p = Poly("N", {(1, 0, 0, 0, 0, 0): 0, (0, 0, 0, 0, 0, 1): 2})
    assert list(p.terms) == [(0, 0, 0, 0, 0, 1)]
    assert not (x1 - x1)


def test_bad_exponents_rejected():
    with pytest.raises(ValueError):
        Poly("N", {(1, 0, 0): 1})
    with pytest.raises(ValueError):
        Poly("N", {(-1, 0, 0, 0, 0, 0): 1})
    with pytest.raises(ValueError):
        x1 + Poly.var("N'", "t")


@given(small_polys, small_polys, small_polys)
@settings(max_examples=60)
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a


@given(small_polys, st.lists(st.floats(-2, 2), min_size=6, max_size=6))
@settings(max_examples=60)
def test_evaluation_matches_sympy(p, z):
    syms = sp.symbols("x1 x2 x3 y1 y2 y3")
    expr = sum(sp.Rational(c.re) * sp.prod([s**k for s, k in zip(syms, e)]) for e, c in p.terms.items())
    expected = float(expr.subs(dict(zip(syms, z)))) if p else 0.0
    assert p(z) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_gauss_rationals_render():
    assert str(Gauss(Fraction(1, 2))) == "1/2"
    assert str(Gauss(0, -1)) == "-i"
    assert str(Gauss(1, 2)) == "1+2i"
    assert Gauss(0, 1) * Gauss(0, 1) == Gauss(-1)


def test_substitute_restricts_to_quotient():
    xs, t = Poly.variables("N'")[:3], Poly.var("N'", "t")
    zero = Poly.zero("N'")
    q = (x1 * y3 + y1**2).substitute("N'", (*xs, zero, zero, t))
    assert q == xs[0] * t


@pytest.mark.parametrize("seed", range(5))
def test_hilbert_basis_invariant(seed):
    rng = np.random.default_rng(seed)
    k = Rotation.random(rng)
    g = GroupPoint.from_coords(rng.uniform(-1, 1, 6))
    for p in hilbert_basis("N"):
        assert p(act(k, g).coords) == pytest.approx(p(g.coords), abs=1e-12)


# ---------------------------------------------------------------------------
# fields, composition and symmetrisation

def _law_derivative(space, j):
    """Columns of d/ds (n . exp(s E_j)) at s = 0, from the group law in sympy."""
    s = sp.Symbol("s")
    x = sp.Matrix(sp.symbols("x1 x2 x3"))
    e = sp.zeros(3, 1)
    if j < 3:
        e[j] = s
    new_x = x + e
    if space == "N":
        c = sp.Matrix(sp.symbols("y1 y2 y3"))
        u = sp.zeros(3, 1)
        if j >= 3:
            u[j - 3] = s
        new_c = c + u + x.cross(e) / 2
        coords = list(new_x) + list(new_c)
    else:
        t = sp.Symbol("t")
        coords = list(new_x) + [t + int(j == 3) * s + x.cross(e)[2] / 2]
    return [sp.diff(v, s).subs(s, 0) for v in coords]


def _to_sympy(p: Poly):
    syms = sp.symbols({"N": "x1 x2 x3 y1 y2 y3", "N'": "x1 x2 x3 t"}[p.space])
    return sum(
        (sp.Rational(c.re) + sp.I * sp.Rational(c.im)) * sp.prod([v**k for v, k in zip(syms, e)])
        for e, c in p.terms.items()
    )


@pytest.mark.parametrize("space", ["N", "N'"])
def test_fields_follow_chain_rule(space):
    n = 6 if space == "N" else 4
    for j, X in enumerate(fields(space)):
        expected = _law_derivative(space, j)
        for k in range(n):
            a = [0] * n
            a[k] = 1
            got = _to_sympy(X.terms[tuple(a)]) if tuple(a) in X.terms else 0
            assert sp.simplify(got - expected[k]) == 0
        assert X.order() == 1


def test_field_examples():
    X1 = left_invariant_field("X1")
    expected = DiffOp.partial("N", "x1") + DiffOp.multiplication(x3 * Fraction(1, 2)) @ DiffOp.partial("N", "y2")
    expected = expected - DiffOp.multiplication(x2 * Fraction(1, 2)) @ DiffOp.partial("N", "y3")
    assert X1 == expected
    assert left_invariant_field("Y3") == DiffOp.partial("N", "y3")
    x2p = Poly.var("N'", "x2")
    assert left_invariant_field("X'1") == DiffOp.partial("N'", "x1") - DiffOp.multiplication(
        x2p * Fraction(1, 2)
    ) @ DiffOp.partial("N'", "t")


def test_compose_leibniz():
    dx1 = DiffOp.partial("N", "x1")
    b = DiffOp.multiplication(x1) @ DiffOp.partial("N", "y1")
    expected = DiffOp("N", {(1, 0, 0, 1, 0, 0): x1, (0, 0, 0, 1, 0, 0): 1})
    assert compose(dx1, b) == expected


def test_mixed_space_composition_rejected():
    with pytest.raises(ValueError):
        compose(left_invariant_field("X1"), left_invariant_field("T"))


def test_brackets():
    X1, X2, X3, Y1, Y2, Y3 = fields("N")
    assert commutator(X1, X2) == Y3
    assert commutator(X2, X3) == Y1
    assert commutator(X3, X1) == Y2
    for Y in (Y1, Y2, Y3):
        for Z in fields("N"):
            assert not commutator(Y, Z)
    Xp1, Xp2, Xp3, T = fields("N'")
    assert commutator(Xp1, Xp2) == T
    assert not commutator(Xp1, Xp3)


def test_symmetrize_generators():
    L, Delta, D = generators("N")
    X1, X2, X3, Y1, Y2, Y3 = fields("N")
    for P, op in zip(hilbert_basis("N"), (L, Delta, D)):
        assert symmetrize(P) == op
    assert Delta == -(DiffOp.partial("N", "y1", 2) + DiffOp.partial("N", "y2", 2) + DiffOp.partial("N", "y3", 2))
    for P, op in zip(hilbert_basis("N'"), generators("N'")):
        assert symmetrize(P) == op


def test_symmetrize_degree_one_has_i_factor():
    op = symmetrize(y3)
    assert op == DiffOp("N", {(0, 0, 0, 0, 0, 1): Gauss(0, -1)})
    assert not op.is_real()
    assert op.real_part() == DiffOp("N")


def _apply_sympy(op: DiffOp, f, syms):
    out = 0
    for a, c in op.terms.items():
        g = f
        for v, k in zip(syms, a):
            if k:
                g = sp.diff(g, v, k)
        out += _to_sympy(c) * g
    return sp.expand(out)


@pytest.mark.parametrize("mono", [(2, 0, 0, 0, 0, 0), (1, 0, 0, 0, 1, 0), (0, 1, 1, 0, 0, 0), (1, 1, 0, 0, 0, 1)])
def test_symmetrize_matches_definition(mono):
    # P(i^-1 d_u) F(n exp(u)) at u = 0 on a polynomial F, straight from the group law
    syms = sp.symbols("x1 x2 x3 y1 y2 y3")
    us = sp.symbols("u1:7")
    x = sp.Matrix(syms[:3])
    ux = sp.Matrix(us[:3])
    moved = list(x + ux) + list(sp.Matrix(syms[3:]) + sp.Matrix(us[3:]) + x.cross(ux) / 2)
    F = syms[0] ** 2 * syms[4] + syms[1] * syms[2] * syms[5] ** 2 + syms[3] * syms[0] ** 3
    G = F.subs(dict(zip(syms, moved)), simultaneous=True)
    for u, k in zip(us, mono):
        if k:
            G = sp.diff(G, u, k) * (-sp.I) ** k
    expected = sp.expand(G.subs({u: 0 for u in us}))
    P = Poly("N", {mono: 1})
    assert sp.expand(_apply_sympy(symmetrize(P), F, syms) - expected) == 0


@pytest.mark.parametrize(
    "name, op",
    [
        ("L", lambda: generators("N")[0]),
        ("Delta", lambda: generators("N")[1]),
        ("D", lambda: generators("N")[2]),
        ("L_prime", lambda: generators("N'")[0]),
        ("Delta_prime", lambda: generators("N'")[1]),
        ("D_prime", lambda: generators("N'")[2]),
        ("X1", lambda: left_invariant_field("X1")),
        ("X1_prime", lambda: left_invariant_field("X'1")),
    ],
)
def test_golden_renderings(name, op):
    assert str(op()) + "\n" == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


# ---------------------------------------------------------------------------
# numerical application

def test_apply_numeric_sub_laplacian_example():
    F = GaussPoly.isotropic("N", b=0)
    L = generators("N")[0]
    v, err = apply_numeric(L, F, GroupPoint((1, 0, 0), (0, 0, 0)))
    assert v == pytest.approx(2 * np.exp(-1), abs=1e-7)
    assert apply_exact(L, F)((1, 0, 0, 0, 0, 0)) == pytest.approx(2 * np.exp(-1), abs=1e-15)
    assert err < 1e-6


def test_apply_numeric_identity_exact():
    f = lambda g: np.sin(g.x[0]) + g.y[2] ** 3
    g = GroupPoint((0.3, 0.1, 0.2), (0.4, 0.5, 0.7))
    v, err = apply_numeric(DiffOp.identity("N"), f, g)
    assert v == f(g)
    assert err == 0


def test_apply_numeric_errors():
    f = lambda g: 1.0
    with pytest.raises(ValueError):
        apply_numeric(DiffOp.partial("N", "x1", 5), f, GroupPoint())
    with pytest.raises(FloatingPointError):
        apply_numeric(DiffOp.partial("N", "x1"), lambda g: np.inf, GroupPoint())


def test_apply_exact_examples():
    L, Delta, _ = generators("N")
    r2 = hilbert_basis("N")[0]
    s2 = hilbert_basis("N")[1]
    F = GaussPoly.isotropic("N", b=0)
    assert apply_exact(L, F) == F.with_poly(6 - 4 * r2)
    G = GaussPoly.isotropic("N", a=0)
    assert apply_exact(Delta, G) == G.with_poly(6 - 4 * s2)
    assert apply_exact(DiffOp("N"), F) == F.with_poly(Poly.zero("N"))
