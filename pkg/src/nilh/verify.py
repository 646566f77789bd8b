"""Property suites: every identity of the toolkit as a named, measured check."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .algebra import (
    GaussPoly,
    Poly,
    Rotation,
    act,
    apply_exact,
    apply_numeric,
    commutator,
    generators,
    hilbert_basis,
    hilbert_map,
    inner_product,
    inverse,
    l2_norm,
    left_invariant_field,
    multiply,
    symmetrize,
)
from .algebra.group import GroupPoint
from .quad import fsum_complex, gauss_legendre, so3_rule, sphere_rule
from .specfun import j0_asymptotic, j0_series, sinc
from .spectrum import SpectrumPoint, classify, classify_prime, embed, invert_regular, project_pi
from .spherical import (
    DEFAULT_SO3_ORDER,
    DEFAULT_SPHERE_ORDER,
    SphericalParams,
    default_so3,
    default_sphere,
    evaluator,
    functional_equation_residual,
)
from .transforms import (
    GelfandOrders,
    gelfand,
    gelfand_prime,
    moment_check,
    radon_exact,
    radon_numeric,
    radon_op,
)

SUITES = ("algebra", "eigen", "intertwine", "diagram", "moments", "quadrature", "spectrum")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    measured: float
    threshold: float
    passed: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


@dataclass(frozen=True)
class Settings:
    sphere: int = DEFAULT_SPHERE_ORDER
    so3: int = DEFAULT_SO3_ORDER
    gelfand: GelfandOrders = GelfandOrders()
    quick: bool = False

    @classmethod
    def from_order(cls, n: int | None, quick: bool = False) -> "Settings":
        if n is None:
            n = 32 if quick else DEFAULT_SPHERE_ORDER
        # radial order 3n/2 and SO(3) order 3n/8 reproduce the defaults at n = 64
        return cls(
            sphere=n,
            so3=max(4, 3 * n // 8),
            gelfand=GelfandOrders(radial=max(8, 3 * n // 2), angular=max(8, n // 2), inner=n),
            quick=quick,
        )


def _check(suite, name, measured, threshold) -> Check:
    measured = float(measured)
    return Check(suite, name, measured, threshold, bool(measured <= threshold))


def op_distance(a, b) -> float:
    """Largest coefficient of a - b; zero iff the canonical forms agree."""
    diff = a - b
    return max((abs(complex(c)) for p in diff.terms.values() for c in p.terms.values()), default=0.0)


# ---------------------------------------------------------------------------
# random test functions

def random_gausspoly(rng: np.random.Generator, space: str = "N", n_terms: int = 3, degree: int = 2) -> GaussPoly:
    """Random real GaussPoly whose (y1, y2) block is decoupled from the rest.

    Diagonal entries lie in [1/2, 2] and off-diagonal couplings in
    {-1/8, 0, 1/8}, so the form is diagonally dominant and positive definite.
    """
    n = 6 if space == "N" else 4
    A = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        A[i][i] = Fraction(int(rng.integers(2, 9)), 4)
    plane = (3, 4) if space == "N" else ()
    for i in range(n):
        for j in range(i + 1, n):
            if (i in plane) != (j in plane):
                continue
            A[i][j] = A[j][i] = Fraction(int(rng.integers(-1, 2)), 8)
    terms = {(0,) * n: 1}
    for _ in range(n_terms):
        e = [0] * n
        for _ in range(int(rng.integers(1, degree + 1))):
            e[int(rng.integers(n))] += 1
        terms[tuple(e)] = int(rng.choice([-3, -2, -1, 1, 2, 3]))
    return GaussPoly(Poly(space, terms), A)


def random_invariant_gausspoly(rng: np.random.Generator) -> GaussPoly:
    """Random SO(3)-invariant GaussPoly: invariant polynomial times exp(-a|x|^2 - b|y|^2)."""
    rho = hilbert_basis("N")
    p = Poly.const("N", 1)
    for q in rho:
        p = p + q * Fraction(int(rng.integers(-2, 3)), 2)
    a = Fraction(int(rng.integers(2, 7)), 4)
    b = Fraction(int(rng.integers(2, 7)), 4)
    return GaussPoly.isotropic("N", p, a, b)


def _rel(a, b) -> float:
    return abs(a - b) / max(1.0, abs(b))


# ---------------------------------------------------------------------------
# suites

def suite_algebra(rng, s: Settings) -> list[Check]:
    out = []
    add = lambda name, m, thr: out.append(_check("algebra", name, m, thr))

    L, Dl, D = generators("N")
    for label, P, op, nm in zip(("|x|^2", "|y|^2", "x.y"), hilbert_basis("N"), (L, Dl, D), ("L", "Delta", "D")):
        add(f"symmetrize({label})=={nm}", op_distance(symmetrize(P), op), 0)
    names = ("L'", "Delta'", "D'", "-X'3^2")
    for label, P, op, nm in zip(("|x|^2", "t^2", "x3*t", "x3^2"), hilbert_basis("N'"), generators("N'"), names):
        add(f"symmetrize'({label})=={nm}", op_distance(symmetrize(P), op), 0)
    X = [left_invariant_field(f"X{j}") for j in (1, 2, 3)]
    Y = [left_invariant_field(f"Y{j}") for j in (1, 2, 3)]
    add("[X1,X2]==Y3", op_distance(commutator(X[0], X[1]), Y[2]), 0)
    add("[X3,X1]==Y2", op_distance(commutator(X[2], X[0]), Y[1]), 0)
    add("[X2,X3]==Y1", op_distance(commutator(X[1], X[2]), Y[0]), 0)

    # group law
    pts = rng.uniform(-2, 2, (20, 3, 6))
    assoc = inv = 0.0
    for a, b, c in pts:
        g1, g2, g3 = (GroupPoint.from_coords(v) for v in (a, b, c))
        lhs = np.array(multiply(multiply(g1, g2), g3).coords)
        rhs = np.array(multiply(g1, multiply(g2, g3)).coords)
        assoc = max(assoc, float(np.max(np.abs(lhs - rhs))))
        inv = max(inv, float(np.max(np.abs(multiply(g1, inverse(g1)).coords))))
    add("multiply associative", assoc, 1e-12)
    add("multiply(g, inverse(g))==e", inv, 0)
    auto = rho_def = 0.0
    for i in range(100):
        k = Rotation.random(rng, proper=bool(i % 2))
        g1, g2 = (GroupPoint.from_coords(v) for v in rng.uniform(-1, 1, (2, 6)))
        lhs = np.array(act(k, multiply(g1, g2)).coords)
        rhs = np.array(multiply(act(k, g1), act(k, g2)).coords)
        auto = max(auto, float(np.max(np.abs(lhs - rhs))))
        if k.det > 0:
            # x.y changes sign under reflections, so rho is SO(3)-invariant only
            rho_def = max(rho_def, float(np.max(np.abs(np.subtract(hilbert_map(act(k, g1)), hilbert_map(g1))))))
    add("act automorphism (100 O(3) elements)", auto, 1e-12)
    add("rho invariant under act (50 rotations)", rho_def, 1e-12)

    # symmetry of L, Delta, D for the exact L^2 pairing
    sym = 0.0
    for _ in range(10):
        F1, F2 = random_gausspoly(rng), random_gausspoly(rng)
        scale = l2_norm(F1) * l2_norm(F2)
        for op in (L, Dl, D):
            d = inner_product(apply_exact(op, F1), F2) - inner_product(F1, apply_exact(op, F2))
            sym = max(sym, abs(d) / scale)
    add("<DF1,F2>==<F1,DF2> (10 pairs)", sym, 1e-10)

    # finite differences against exact application
    n_pairs, n_pts = (5, 3) if s.quick else (20, 10)
    basic = list(generators("N")) + [left_invariant_field(n) for n in ("X1", "X2", "X3", "Y1", "Y2", "Y3")]
    fd = 0.0
    for _ in range(n_pairs):
        op = basic[int(rng.integers(len(basic)))]
        F = random_gausspoly(rng)
        DF = apply_exact(op, F)
        zs = rng.uniform(-1, 1, (n_pts, 6))
        exact = DF(zs)
        scale = max(1.0, float(np.max(np.abs(exact))))
        for z, e in zip(zs, exact):
            v, _ = apply_numeric(op, F, z, vectorized=True)
            fd = max(fd, abs(v - e) / scale)
    add(f"apply_numeric==apply_exact ({n_pairs} pairs)", fd, 1e-6)
    return out


def eigen_params(quick: bool = False):
    regular = [(lam, l, r) for lam in (0.5, 1.0, 2.0) for l in (0, 1) for r in (0.0, 1.0)]
    if quick:
        regular = regular[::3]
    n_sing = [SphericalParams.singular(R) for R in (0.0, 0.5, 1.0, 2.0)]
    p_sing = [SphericalParams.singular_prime(z, r) for z, r in ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.5, 0.5))]
    return (
        [SphericalParams.regular(*p) for p in regular] + n_sing,
        [SphericalParams.regular_prime(*p) for p in regular] + p_sing,
    )


def _label(p: SphericalParams) -> str:
    d = p.as_dict()
    kind = d.pop("kind")
    return f"{kind}(" + ",".join(f"{k}={v:g}" for k, v in d.items()) + ")"


def eigen_residual(params, points, rule=None) -> float:
    """Largest |D phi - mu_D phi| / max(1, |mu_D|) over the generator family and points."""
    space = "N'" if params.on_prime else "N"
    ops = generators(space)
    mu = embed(params).eta
    f = evaluator(params, rule)
    worst = 0.0
    for z in points:
        base = float(np.asarray(f(np.asarray(z)[None, :]))[0])
        for op, m in zip(ops, mu):
            v, _ = apply_numeric(op, f, z, vectorized=True)
            worst = max(worst, abs(v - m * base) / max(1.0, abs(m)))
    return worst


def suite_eigen(rng, s: Settings) -> list[Check]:
    out = []
    rule = default_sphere(s.sphere)
    n_pts = 2 if s.quick else 5
    on_n, on_np = eigen_params(s.quick)
    for params in on_n:
        pts = rng.uniform(-1, 1, (n_pts, 6))
        out.append(_check("eigen", f"L,Delta,D on {_label(params)}", eigen_residual(params, pts, rule), 1e-4))
    for params in on_np:
        pts = rng.uniform(-1, 1, (n_pts, 4))
        out.append(_check("eigen", f"L',Delta',D',-X'3^2 on {_label(params)}", eigen_residual(params, pts), 1e-4))

    # spherical functional equation, with a doubling of the SO(3) order
    n_pairs = 2 if s.quick else 5
    fine_n = s.so3
    coarse_n = max(4, fine_n // 2)
    fine_rule, coarse_rule = default_so3(fine_n), default_so3(coarse_n)
    for params, thr in ((SphericalParams.regular(1.0, 0, 0.0), 5e-3), (SphericalParams.singular(1.0), 2e-3)):
        pairs = rng.uniform(-1, 1, (n_pairs, 2, 6))
        fine = [functional_equation_residual(params, a, b, fine_rule, rule) for a, b in pairs]
        coarse = [functional_equation_residual(params, a, b, coarse_rule, rule) for a, b in pairs]
        out.append(_check("eigen", f"functional equation {_label(params)}", max(fine), thr))
        # residuals at or below the quadrature floor cannot halve further
        excess = max(f - max(c / 2, 1e-10) for f, c in zip(fine, coarse))
        out.append(_check("eigen", f"functional equation {_label(params)} halves on doubling", max(excess, 0.0), 0))
    return out


def suite_intertwine(rng, s: Settings) -> list[Check]:
    out = []
    worst = 0.0
    numeric = 0.0
    profiles = []
    probes = rng.uniform(-1, 1, (20, 4))
    for _ in range(10):
        F = random_gausspoly(rng)
        RF = radon_exact(F)
        profiles.append(RF(probes))
        for P in hilbert_basis("N"):
            lhs = radon_exact(apply_exact(symmetrize(P), F))
            rhs = apply_exact(symmetrize(radon_op(P)), RF)
            a, b = lhs(probes), rhs(probes)
            worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b)))))
        for z in probes[:3]:
            numeric = max(numeric, _rel(radon_numeric(F, z), float(RF(z))))
    out.append(_check("intertwine", "R(D_P F)==D_(P|N') R(F) (10 F x 3 P x 20 pts)", worst, 1e-10))
    out.append(_check("intertwine", "radon_numeric==radon_exact", numeric, 1e-10))
    # distinct inputs give distinct images somewhere on the probe set
    sep = min(
        float(np.max(np.abs(profiles[i] - profiles[j])))
        for i in range(len(profiles))
        for j in range(i + 1, len(profiles))
    )
    out.append(_check("intertwine", "R separates distinct test functions (min gap, negated)", -sep, 0))
    return out


def diagram_params(rng, quick: bool = False):
    n_reg, n_sing = (3, 1) if quick else (8, 4)
    out = []
    for _ in range(n_reg):
        out.append(SphericalParams.regular_prime(
            float(rng.uniform(0.25, 2.0)), int(rng.integers(0, 3)), float(rng.uniform(-1.5, 1.5))
        ))
    for _ in range(n_sing):
        out.append(SphericalParams.singular_prime(float(rng.uniform(0, 2)), float(rng.uniform(-1.5, 1.5))))
    return out


def pi_params(params: SphericalParams) -> SphericalParams:
    """N parameters whose embedding is the projection of the N' embedding."""
    c = classify(project_pi(embed(params)))
    return c.params


def suite_diagram(rng, s: Settings) -> list[Check]:
    out = []
    orders = s.gelfand
    F = GaussPoly.isotropic("N").scale(math.pi**-3)
    RF = radon_exact(F)
    worst = 0.0
    for mp in diagram_params(rng, s.quick):
        lhs = gelfand_prime(RF, mp, orders).value
        rhs = gelfand(F, pi_params(mp), orders).value
        worst = max(worst, abs(lhs - rhs) / (1 + abs(rhs)))
    out.append(_check("diagram", "gelfand_prime(radon(F)) == gelfand(F)∘Pi", worst, 1e-6))
    sing = max(abs(gelfand(F, SphericalParams.singular(R), orders).value - math.exp(-R * R / 4)) for R in (0, 1, 2))
    out.append(_check("diagram", "gelfand(F)(R^2,0,0) == exp(-R^2/4), R in {0,1,2}", sing, 1e-8))
    G = GaussPoly.isotropic("N'").scale(math.pi**-2)
    norm = abs(gelfand_prime(G, SphericalParams.singular_prime(0, 0), orders).value - 1)
    out.append(_check("diagram", "gelfand_prime(normalised Gaussian)(0,0) == 1", norm, 1e-10))

    # eigenvalue transport through the transform
    n_f = 1 if s.quick else 2
    trans = 0.0
    ops = generators("N")
    for _ in range(n_f):
        H = random_invariant_gausspoly(rng)
        params = SphericalParams.regular(float(rng.uniform(0.5, 1.5)), int(rng.integers(0, 2)), float(rng.uniform(-1, 1)))
        for p in (params, SphericalParams.singular(float(rng.uniform(0.5, 2)))):
            base = gelfand(H, p, orders).value
            scale = max(1.0, abs(base))
            for op, m in zip(ops, embed(p).eta):
                v = gelfand(apply_exact(op, H), p, orders).value
                trans = max(trans, abs(v - m * base) / (max(1.0, abs(m)) * scale))
    out.append(_check("diagram", "gelfand(D F) == mu_D gelfand(F)", trans, 1e-6))
    return out


def suite_moments(rng, s: Settings) -> list[Check]:
    out = []
    G = radon_exact(GaussPoly.isotropic("N"))
    rep = moment_check(G, 3)
    out.append(_check("moments", "moment_check(R(Gaussian)) residual, j<=3", rep.residual, 1e-10))
    worst = 0.0
    for _ in range(2 if s.quick else 5):
        worst = max(worst, moment_check(radon_exact(random_invariant_gausspoly(rng)), 3).residual)
    out.append(_check("moments", "moment_check(R(invariant GaussPoly)) residual, j<=3", worst, 1e-10))
    x1, x2, x3, t = Poly.variables("N'")
    bad = GaussPoly.isotropic("N'", (x1 * x1 + x2 * x2) * x3 * t)
    rep = moment_check(bad, 1)
    # the counterexample must fail at j = 1 by a wide margin
    out.append(_check("moments", "counterexample fails at j=1 (0.01 - residual)", 0.01 - rep.residual_at(1), 0))
    out.append(_check("moments", "moment_check(0) residual", moment_check(GaussPoly.isotropic("N'", Poly.zero("N'")), 3).residual, 0))
    return out


def suite_quadrature(rng, s: Settings) -> list[Check]:
    out = []
    add = lambda name, m, thr: out.append(_check("quadrature", name, m, thr))
    wsum = 0.0
    for n in (1, 2, 7, 64, 512):
        r = gauss_legendre(n, -1.5, 2.0)
        wsum = max(wsum, abs(math.fsum(r.weights) - 3.5))
    for r in (sphere_rule(16), sphere_rule(64), so3_rule(8), so3_rule(24)):
        wsum = max(wsum, abs(math.fsum(r.weights) - 1))
    add("weights sum to reference measure", wsum, 1e-13)
    exact = 0.0
    for n in (2, 5, 17):
        r = gauss_legendre(n, 0.0, 2.0)
        for d in range(2 * n):
            exact = max(exact, abs(math.fsum(r.weights * r.nodes**d) - 2 ** (d + 1) / (d + 1)) / 2 ** (d + 1))
    add("Gauss-Legendre exact to degree 2n-1", exact, 1e-13)

    rule = default_sphere(s.sphere)
    worst = 0.0
    for _ in range(50):
        v = rng.normal(size=3)
        v *= rng.uniform(0, 20) / np.linalg.norm(v)
        avg = fsum_complex(np.exp(-1j * (rule.nodes @ v)) * rule.weights)
        worst = max(worst, abs(avg - sinc(float(np.linalg.norm(v)))))
    add(f"sphere average of exp(-iR u.x) == sinc(R|x|) (50 draws, n={s.sphere})", worst, 1e-10)

    so3 = default_so3(s.so3)
    K = so3.nodes
    mom = max(abs(math.fsum(K[:, 0, 0] * so3.weights)), abs(math.fsum(K[:, 0, 0] ** 2 * so3.weights) - 1 / 3))
    add("SO(3) moments of k11", mom, 1e-10)

    g = gauss_legendre(64, -8, 8)
    gauss = abs(math.fsum(np.exp(-g.nodes**2) * g.weights) - math.sqrt(math.pi))
    add("Gaussian integral on [-8,8], n=64", gauss, 1e-12)

    f = lambda u: np.cos(3 * u[:, 0] + u[:, 2]) * np.exp(-u[:, 1])
    a = fsum_complex(f(sphere_rule(32).nodes) * sphere_rule(32).weights)
    b = fsum_complex(f(sphere_rule(64).nodes) * sphere_rule(64).weights)
    add("sphere rule self-convergence on doubling", abs(a - b) / max(1.0, abs(b)), 1e-10)

    branch = max(abs(j0_series(u) - j0_asymptotic(u)) for u in np.linspace(12, 14, 41))
    add("J0 series and asymptotic branches agree on [12,14]", branch, 1e-12)
    return out


def suite_spectrum(rng, s: Settings) -> list[Check]:
    out = []
    add = lambda name, m, thr: out.append(_check("spectrum", name, m, thr))
    n = 200 if s.quick else 1000
    rt = 0.0
    miss = 0
    for _ in range(n):
        lam = float(10 ** rng.uniform(-3, 3))
        l = int(rng.integers(0, 11))
        r = float(rng.uniform(-10, 10))
        c = classify(embed(SphericalParams.regular(lam, l, r)), 1e-9)
        if not c.member or c.stratum != f"Gamma_{l}":
            miss += 1
            continue
        rt = max(rt, abs(c.params.lam - lam) / lam, abs(c.params.r - r) / max(1.0, abs(r)))
    add(f"classify(embed(p)) recovers (lambda,l,r) ({n} draws)", rt, 1e-9)
    add("classify(embed(p)) stratum misses", miss, 0)

    inj = 0
    for _ in range(200):
        p = SphericalParams.regular_prime(float(rng.uniform(0.1, 5)), int(rng.integers(0, 6)), float(rng.uniform(-3, 3)))
        lam, l, r = invert_regular(project_pi(embed(p)))
        if l != p.l or abs(lam - p.lam) > 1e-12 * p.lam or abs(r - p.r) > 1e-12 * max(1, abs(p.r)):
            inj += 1
    add("Pi injective on regular points (failures)", inj, 0)
    pre = {embed(q).eta for q in (SphericalParams.singular_prime(1.0, 0.0), SphericalParams.singular_prime(0.0, 1.0))}
    images = {project_pi(SpectrumPoint(e)).eta for e in pre}
    add("singular preimages of (1,0,0) (2 - count)", 2 - len(pre) if images == {(1.0, 0, 0)} else 2, 0)
    bad = 0
    for _ in range(200):
        e = embed(SphericalParams.singular_prime(float(rng.uniform(0, 5)), float(rng.uniform(-5, 5)))).eta
        if not (0 <= e[3] <= e[0]) or not classify_prime(SpectrumPoint(e)).member:
            bad += 1
    add("N' singular points satisfy 0 <= eta4 <= eta1 (failures)", bad, 0)
    return out


_RUNNERS = {
    "algebra": suite_algebra,
    "eigen": suite_eigen,
    "intertwine": suite_intertwine,
    "diagram": suite_diagram,
    "moments": suite_moments,
    "quadrature": suite_quadrature,
    "spectrum": suite_spectrum,
}


def run(suite: str = "all", seed: int = 42, settings: Settings | None = None) -> list[Check]:
    """Run one suite (or all of them) with a seeded, per-suite random stream."""
    settings = settings or Settings()
    names = SUITES if suite == "all" else (suite,)
    for name in names:
        if name not in _RUNNERS:
            raise ValueError(f"unknown suite {name!r}")
    streams = np.random.SeedSequence(seed).spawn(len(SUITES))
    checks = []
    for name in names:
        rng = np.random.default_rng(streams[SUITES.index(name)])
        checks.extend(_RUNNERS[name](rng, settings))
    return checks
