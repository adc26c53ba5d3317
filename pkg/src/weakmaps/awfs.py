"""Algebraic weak factorisation systems of split-epi type.

Every arrow f: A -> B factors through Ef = A + P(B) as

    f  =  ( A --inl--> A + PB --[f, eps_B]--> B )

where P is a comonad on the base (the identity comonad gives the plain
split-epi system).  The left factor carries a comonad L, the right a
monad R, on the arrow category; algebras for R are arrows with a chosen
P-indexed family of sections, coalgebras for L are arrows with a chosen
retraction datum, and every commuting square from a coalgebra to an
algebra acquires a canonical diagonal filler.

`SplitEpiAwfs` and `PSplitEpiAwfs` are deliberately independent
implementations of the same interface; their agreement at P = Id is a
test, not an assumption.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .fincat import (
    CategoryError,
    ComonadData,
    FinSetArrow,
    FinSetCategory,
    FunctorData,
    MonadData,
    canonical_set,
    compute_coproduct,
    fmt_obj,
    identity_comonad,
)
from .report import CheckReport


class SplitEpiAwfs:
    """Factorisation f = [f,1] . inl through A + B."""

    name = "split-epi"

    def __init__(self, cat):
        self.cat = cat
        self.comonad = identity_comonad(cat)
        self._cop = {}

    def cop(self, f):
        d = self._cop.get(f)
        if d is None:
            d = self._cop[f] = compute_coproduct(self.cat, self.cat.dom(f), self.cat.cod(f))
        return d

    def E(self, f):
        return self.cop(f).obj

    def lam(self, f):
        return self.cop(f).inl

    def rho(self, f):
        return self.cop(f).copair(f, self.cat.identity(self.cat.cod(f)))

    def factor(self, f):
        return self.lam(f), self.rho(f)

    def earr(self, f, g, h, k):
        """E(h,k): Ef -> Eg for a square (h,k): f -> g."""
        cg = self.cop(g)
        cat = self.cat
        return self.cop(f).copair(cat.compose(cg.inl, h), cat.compose(cg.inr, k))

    def comult(self, f):
        lf = self.lam(f)
        c2 = self.cop(lf)
        cat = self.cat
        return self.cop(f).copair(c2.inl, cat.compose(c2.inr, self.cop(f).inr))

    def mult(self, f):
        rf = self.rho(f)
        e = self.E(f)
        return self.cop(rf).copair(self.cat.identity(e), self.cop(f).inr)


class PSplitEpiAwfs:
    """Factorisation f = [f,eps] . inl through A + PB for a comonad P."""

    def __init__(self, cat, comonad: ComonadData):
        self.cat = cat
        self.comonad = comonad
        self.name = f"{comonad.name}-split-epi"
        self._cop = {}

    def cop(self, f):
        d = self._cop.get(f)
        if d is None:
            pb = self.comonad.functor.obj(self.cat.cod(f))
            d = self._cop[f] = compute_coproduct(self.cat, self.cat.dom(f), pb)
        return d

    def E(self, f):
        return self.cop(f).obj

    def lam(self, f):
        return self.cop(f).inl

    def rho(self, f):
        return self.cop(f).copair(f, self.comonad.counit(self.cat.cod(f)))

    def factor(self, f):
        return self.lam(f), self.rho(f)

    def earr(self, f, g, h, k):
        cg = self.cop(g)
        cat = self.cat
        pk = self.comonad.functor.arr(k)
        return self.cop(f).copair(cat.compose(cg.inl, h), cat.compose(cg.inr, pk))

    def comult(self, f):
        # A + PB -> A + P(A + PB): the PB summand duplicates, then lands in
        # the right summand of Ef under P
        lf = self.lam(f)
        c2 = self.cop(lf)
        cat = self.cat
        b = cat.cod(f)
        p_inr = self.comonad.functor.arr(self.cop(f).inr)
        leg = cat.compose(c2.inr, cat.compose(p_inr, self.comonad.comult(b)))
        return self.cop(f).copair(c2.inl, leg)

    def mult(self, f):
        rf = self.rho(f)
        return self.cop(rf).copair(self.cat.identity(self.E(f)), self.cop(f).inr)


def split_epi_awfs(cat) -> SplitEpiAwfs:
    return SplitEpiAwfs(cat)


def p_split_epi_awfs(cat, comonad: ComonadData) -> PSplitEpiAwfs:
    return PSplitEpiAwfs(cat, comonad)


# ---------------------------------------------------------------------------
# Algebras and coalgebras


@dataclass(frozen=True)
class RAlgebraArrow:
    """Arrow g: A -> B with witness sigma: PB -> A satisfying g.sigma = eps_B.

    The monad-algebra structure map p = [1_A, sigma]: Eg -> A is derived;
    its laws are consequences but validate() still checks them.
    """

    awfs: object
    arrow: object
    witness: object

    @property
    def p(self):
        a = self.awfs.cat.dom(self.arrow)
        return self.awfs.cop(self.arrow).copair(self.awfs.cat.identity(a), self.witness)

    def validate(self, report=None) -> CheckReport:
        rep = report if report is not None else CheckReport()
        cat, aw = self.awfs.cat, self.awfs
        g = self.arrow
        a, b = cat.dom(g), cat.cod(g)
        sub = repr(g)
        pb = aw.comonad.functor.obj(b)
        ok = cat.dom(self.witness) == pb and cat.cod(self.witness) == a
        rep.record("ralg.witness.endpoints", sub, ok)
        if not ok:
            return rep
        rep.eq("ralg.section", sub, cat.compose(g, self.witness), aw.comonad.counit(b))
        p = self.p
        rep.eq("ralg.unit", sub, cat.compose(p, aw.lam(g)), cat.identity(a))
        rep.eq("ralg.square", sub, cat.compose(g, p), aw.rho(g))
        e_p = aw.earr(aw.rho(g), g, p, cat.identity(b))
        rep.eq("ralg.assoc", sub, cat.compose(p, e_p), cat.compose(p, aw.mult(g)))
        return rep


@dataclass(frozen=True)
class LCoalgebraArrow:
    """Arrow f: A -> B with structure s: B -> Ef splitting rho(f)."""

    awfs: object
    arrow: object
    structure: object

    def validate(self, report=None) -> CheckReport:
        rep = report if report is not None else CheckReport()
        cat, aw = self.awfs.cat, self.awfs
        f, s = self.arrow, self.structure
        a, b = cat.dom(f), cat.cod(f)
        sub = repr(f)
        ok = cat.dom(s) == b and cat.cod(s) == aw.E(f)
        rep.record("lcoalg.structure.endpoints", sub, ok)
        if not ok:
            return rep
        rep.eq("lcoalg.retract", sub, cat.compose(aw.rho(f), s), cat.identity(b))
        rep.eq("lcoalg.square", sub, cat.compose(s, f), aw.lam(f))
        e_s = aw.earr(f, aw.lam(f), cat.identity(a), s)
        rep.eq("lcoalg.coassoc", sub, cat.compose(e_s, s), cat.compose(aw.comult(f), s))
        return rep


def cofree_coalgebra(awfs, f) -> LCoalgebraArrow:
    return LCoalgebraArrow(awfs, awfs.lam(f), awfs.comult(f))


def free_algebra(awfs, f) -> RAlgebraArrow:
    return RAlgebraArrow(awfs, awfs.rho(f), awfs.cop(f).inr)


def identity_algebra(awfs, b) -> RAlgebraArrow:
    return RAlgebraArrow(awfs, awfs.cat.identity(b), awfs.comonad.counit(b))


def canonical_filler(coalg: LCoalgebraArrow, alg: RAlgebraArrow, h, k):
    """Diagonal j = p . E(h,k) . s for a square (h,k): coalg -> alg.

    Checks the square commutes and that j actually fills both triangles.
    """
    aw = coalg.awfs
    cat = aw.cat
    f, g = coalg.arrow, alg.arrow
    if not cat.eq(cat.compose(g, h), cat.compose(k, f)):
        raise CategoryError("square does not commute: g.h != k.f")
    j = cat.compose(alg.p, cat.compose(aw.earr(f, g, h, k), coalg.structure))
    if not cat.eq(cat.compose(j, f), h):
        raise CategoryError("filler fails the upper triangle")
    if not cat.eq(cat.compose(g, j), k):
        raise CategoryError("filler fails the lower triangle")
    return j


def r_algebra_compose(outer: RAlgebraArrow, inner: RAlgebraArrow) -> RAlgebraArrow:
    """Composite algebra on outer.arrow . inner.arrow.

    For sections indexed by P: the composite witness peels one layer of
    comultiplication, applies P to the outer witness, then the inner one.
    """
    aw = outer.awfs
    cat = aw.cat
    g, f = outer.arrow, inner.arrow
    if cat.cod(f) != cat.dom(g):
        raise CategoryError("algebras are not composable")
    c = cat.cod(g)
    w = cat.compose(
        inner.witness,
        cat.compose(aw.comonad.functor.arr(outer.witness), aw.comonad.comult(c)),
    )
    return RAlgebraArrow(aw, cat.compose(g, f), w)


def right_connect(alg: RAlgebraArrow):
    """The square (f, 1): alg -> identity-algebra on the codomain."""
    cat = alg.awfs.cat
    b = cat.cod(alg.arrow)
    return alg.arrow, cat.identity(b)


def cartesian_lift(alg: RAlgebraArrow, f, u, v) -> RAlgebraArrow:
    """Algebra structure on f pulled back from alg along a pullback square.

    (u,v): f -> g must commute and exhibit dom(f) as the pullback of
    cod(f) -> cod(g) <- dom(g); the witness at w is the unique point over
    (eps(w), sigma_g(Pv(w))).  FinSet only.
    """
    aw = alg.awfs
    cat = aw.cat
    if not isinstance(cat, FinSetCategory):
        raise CategoryError("cartesian lifts are computed only over finite sets")
    g = alg.arrow
    if not cat.eq(cat.compose(g, u), cat.compose(v, f)):
        raise CategoryError("square does not commute: g.u != v.f")
    a, b = f.dom, f.cod
    fibre = {}
    for i, x in enumerate(a):
        key = (f.idx[i], u.idx[i])
        if key in fibre:
            raise CategoryError("not a pullback square: pairing map is not injective")
        fibre[key] = i
    need = {
        (j, i)
        for j in range(len(b))
        for i in range(len(g.dom))
        if v.idx[j] == g.idx[i]
    }
    if set(fibre) != need:
        raise CategoryError("not a pullback square: pairing map misses a matched pair")
    eps_b = aw.comonad.counit(b)
    pv = aw.comonad.functor.arr(v)
    over = cat.compose(alg.witness, pv)
    pb_labels = eps_b.dom
    idx = tuple(fibre[(eps_b.idx[w], over.idx[w])] for w in range(len(pb_labels)))
    return RAlgebraArrow(aw, f, FinSetArrow(pb_labels, a, idx))


# ---------------------------------------------------------------------------
# Law validation over an exhaustive finite fragment


def squares_between(cat, f, g):
    """All (h,k) with g.h = k.f, as arrows.  FinSet enumerates by forcing
    k on the image of f; other backends filter the full product."""
    if isinstance(cat, FinSetCategory):
        for h_idx, k_idx in _finset_squares(f, g):
            yield (FinSetArrow(f.dom, g.dom, h_idx), FinSetArrow(f.cod, g.cod, k_idx))
        return
    a, b = cat.dom(f), cat.cod(f)
    a2, b2 = cat.dom(g), cat.cod(g)
    for h in cat.hom(a, a2):
        gh = cat.compose(g, h)
        for k in cat.hom(b, b2):
            if cat.eq(gh, cat.compose(k, f)):
                yield (h, k)


def _finset_squares(f: FinSetArrow, g: FinSetArrow):
    na, nb = len(f.dom), len(f.cod)
    na2, nb2 = len(g.dom), len(g.cod)
    if na == 0:
        for k in itertools.product(range(nb2), repeat=nb):
            yield ((), k)
        return
    for h_idx in itertools.product(range(na2), repeat=na):
        forced = [-1] * nb
        ok = True
        for i in range(na):
            pos = f.idx[i]
            val = g.idx[h_idx[i]]
            if forced[pos] < 0:
                forced[pos] = val
            elif forced[pos] != val:
                ok = False
                break
        if not ok:
            continue
        free = [j for j in range(nb) if forced[j] < 0]
        if not free:
            yield (h_idx, tuple(forced))
            continue
        for choice in itertools.product(range(nb2), repeat=len(free)):
            k_idx = list(forced)
            for j, c in zip(free, choice):
                k_idx[j] = c
            yield (h_idx, tuple(k_idx))


def fragment_arrows(cat, max_size):
    objs = [canonical_set(n) for n in range(max_size + 1)]
    out = []
    for a in objs:
        for b in objs:
            out.extend(cat.hom(a, b))
    return out


def validate_awfs(awfs, max_size=3, report=None, squares=True) -> CheckReport:
    """Check every factorisation, comonad, monad, and distributivity law
    on the exhaustive fragment of finite sets of size <= max_size.

    Per-arrow equations are recorded individually; the four naturality
    equations are aggregated over all squares with failures itemised.
    Equations whose sides fail to compose (endpoint corruption) record a
    failure rather than raising.
    """
    rep = report if report is not None else CheckReport()
    cat = awfs.cat
    arrows = fragment_arrows(cat, max_size)

    def eq(name, sub, lhs_thunk, rhs_thunk):
        try:
            lhs, rhs = lhs_thunk(), rhs_thunk()
        except CategoryError as e:
            rep.record(name, sub, False, "<ill-typed>", str(e))
            return
        rep.record(name, sub, cat.eq(lhs, rhs), lhs, rhs)

    for f in arrows:
        sub = repr(f)
        lf, rf = awfs.lam(f), awfs.rho(f)
        one_e = cat.identity(awfs.E(f))
        one_a, one_b = cat.identity(cat.dom(f)), cat.identity(cat.cod(f))
        eq("factor", sub, lambda: cat.compose(rf, lf), lambda: f)
        eq("e.id", sub, lambda: awfs.earr(f, f, one_a, one_b), lambda: one_e)
        eq("comonad.counit1", sub,
           lambda: cat.compose(awfs.rho(lf), awfs.comult(f)), lambda: one_e)
        eq("comonad.counit2", sub,
           lambda: cat.compose(awfs.earr(lf, f, one_a, rf), awfs.comult(f)),
           lambda: one_e)
        eq("comonad.coassoc", sub,
           lambda: cat.compose(awfs.comult(lf), awfs.comult(f)),
           lambda: cat.compose(awfs.earr(lf, awfs.lam(lf), one_a, awfs.comult(f)),
                               awfs.comult(f)))
        eq("comult.square", sub,
           lambda: cat.compose(awfs.comult(f), lf), lambda: awfs.lam(lf))
        eq("monad.unit1", sub,
           lambda: cat.compose(awfs.mult(f), awfs.lam(rf)), lambda: one_e)
        eq("monad.unit2", sub,
           lambda: cat.compose(awfs.mult(f), awfs.earr(f, rf, lf, one_b)),
           lambda: one_e)
        eq("monad.assoc", sub,
           lambda: cat.compose(awfs.mult(f), awfs.mult(rf)),
           lambda: cat.compose(awfs.mult(f),
                               awfs.earr(awfs.rho(rf), rf, awfs.mult(f), one_b)))
        eq("mult.square", sub,
           lambda: cat.compose(rf, awfs.mult(f)), lambda: awfs.rho(rf))
        eq("dist.square", sub,
           lambda: cat.compose(awfs.rho(lf), awfs.comult(f)),
           lambda: cat.compose(awfs.mult(f), awfs.lam(rf)))
        eq("dist.pentagon", sub,
           lambda: cat.compose(awfs.comult(f), awfs.mult(f)),
           lambda: cat.compose(
               awfs.mult(lf),
               cat.compose(awfs.earr(awfs.lam(rf), awfs.rho(lf),
                                     awfs.comult(f), awfs.mult(f)),
                           awfs.comult(rf))))

    if not squares:
        return rep

    counts = {"nat.lambda": 0, "nat.rho": 0, "nat.comult": 0, "nat.mult": 0}
    fails = {name: 0 for name in counts}
    for f in arrows:
        lf, rf = awfs.lam(f), awfs.rho(f)
        dl_f, mu_f = awfs.comult(f), awfs.mult(f)
        for g in arrows:
            lg, rg = awfs.lam(g), awfs.rho(g)
            dl_g, mu_g = awfs.comult(g), awfs.mult(g)
            for h, k in squares_between(cat, f, g):
                e_hk = awfs.earr(f, g, h, k)
                sub = f"({h!r},{k!r}): {f!r} -> {g!r}"
                l1 = cat.compose(e_hk, lf)
                r1 = cat.compose(lg, h)
                counts["nat.lambda"] += 1
                if not cat.eq(l1, r1):
                    fails["nat.lambda"] += 1
                    rep.record("nat.lambda", sub, False, l1, r1)
                l2 = cat.compose(rg, e_hk)
                r2 = cat.compose(k, rf)
                counts["nat.rho"] += 1
                if not cat.eq(l2, r2):
                    fails["nat.rho"] += 1
                    rep.record("nat.rho", sub, False, l2, r2)
                l3 = cat.compose(awfs.earr(lf, lg, h, e_hk), dl_f)
                r3 = cat.compose(dl_g, e_hk)
                counts["nat.comult"] += 1
                if not cat.eq(l3, r3):
                    fails["nat.comult"] += 1
                    rep.record("nat.comult", sub, False, l3, r3)
                l4 = cat.compose(e_hk, mu_f)
                r4 = cat.compose(mu_g, awfs.earr(rf, rg, e_hk, k))
                counts["nat.mult"] += 1
                if not cat.eq(l4, r4):
                    fails["nat.mult"] += 1
                    rep.record("nat.mult", sub, False, l4, r4)
    for name, n in counts.items():
        rep.record(name, f"{n} squares", fails[name] == 0)
    return rep


def validate_e_functoriality(awfs, max_size=2, report=None) -> CheckReport:
    """E(h'h, k'k) = E(h',k').E(h,k) over all composable square pairs."""
    rep = report if report is not None else CheckReport()
    cat = awfs.cat
    arrows = fragment_arrows(cat, max_size)
    n = 0
    bad = None
    for f in arrows:
        for g in arrows:
            sq_fg = list(squares_between(cat, f, g))
            if not sq_fg:
                continue
            for e in arrows:
                for h2, k2 in squares_between(cat, g, e):
                    e2 = awfs.earr(g, e, h2, k2)
                    for h1, k1 in sq_fg:
                        n += 1
                        lhs = awfs.earr(f, e, cat.compose(h2, h1), cat.compose(k2, k1))
                        rhs = cat.compose(e2, awfs.earr(f, g, h1, k1))
                        if not cat.eq(lhs, rhs) and bad is None:
                            bad = (f, g, e, lhs, rhs)
    if bad is None:
        rep.record("e.compose", f"{n} composable square pairs", True)
    else:
        rep.record("e.compose", f"{bad[0]!r} -> {bad[1]!r} -> {bad[2]!r}",
                   False, bad[3], bad[4])
    return rep


def awfs_equal_on(a, b, max_size=2, report=None) -> CheckReport:
    """Componentwise agreement of two factorisation systems on a fragment."""
    rep = report if report is not None else CheckReport()
    cat = a.cat
    arrows = fragment_arrows(cat, max_size)
    for f in arrows:
        sub = repr(f)
        rep.eq("agree.lambda", sub, a.lam(f), b.lam(f))
        rep.eq("agree.rho", sub, a.rho(f), b.rho(f))
        rep.eq("agree.comult", sub, a.comult(f), b.comult(f))
        rep.eq("agree.mult", sub, a.mult(f), b.mult(f))
    bad = 0
    for f in arrows:
        for g in arrows:
            for h, k in squares_between(cat, f, g):
                lhs, rhs = a.earr(f, g, h, k), b.earr(f, g, h, k)
                if not cat.eq(lhs, rhs):
                    bad += 1
                    rep.record("agree.e", f"({h!r},{k!r})", False, lhs, rhs)
    rep.record("agree.e", "all squares", bad == 0)
    return rep


# ---------------------------------------------------------------------------
# Cofibrant replacement comonad


def cofibrant_replacement(awfs):
    """The comonad Q with QB = E(empty -> B), counit rho, comult from the
    factorisation comultiplication.  Over finite sets E(lam(!)) is QQB on
    the nose, so no coherence adjustments are needed."""
    cat = awfs.cat
    if not isinstance(cat, FinSetCategory):
        raise CategoryError("cofibrant replacement needs computed initial objects")

    def bang(b):
        return cat.from_initial(b)

    def qobj(b):
        return awfs.E(bang(b))

    def qarr(h):
        e = cat.identity(cat.initial())
        return awfs.earr(bang(h.dom), bang(h.cod), e, h)

    def counit(b):
        return awfs.rho(bang(b))

    def comult(b):
        return awfs.comult(bang(b))

    fun = FunctorData(qobj, qarr, "Q")
    return ComonadData(fun, counit, comult, f"Q[{awfs.name}]")


def replacement_comparison(awfs, b):
    """The iso QB -> PB (strip the empty summand) and its inverse."""
    cat = awfs.cat
    cop = awfs.cop(cat.from_initial(b))
    pb = awfs.comonad.functor.obj(b)
    tau = cop.copair(cat.from_initial(pb), cat.identity(pb))
    return tau, cop.inr


def validate_comonad_iso(cat, q: ComonadData, p: ComonadData, tau, tau_inv,
                         objects, report=None) -> CheckReport:
    """tau: Q -> P is a natural isomorphism of comonads."""
    rep = report if report is not None else CheckReport()
    for b in objects:
        sub = fmt_obj(b)
        t, ti = tau(b), tau_inv(b)
        rep.eq("iso.section", sub, cat.compose(t, ti), cat.identity(p.functor.obj(b)))
        rep.eq("iso.retract", sub, cat.compose(ti, t), cat.identity(q.functor.obj(b)))
        rep.eq("iso.counit", sub, cat.compose(p.counit(b), t), q.counit(b))
        lhs = cat.compose(p.comult(b), t)
        rhs = cat.compose(tau(p.functor.obj(b)),
                          cat.compose(q.functor.arr(t), q.comult(b)))
        rep.eq("iso.comult", sub, lhs, rhs)
    for a in objects:
        for b in objects:
            for h in cat.hom(a, b):
                lhs = cat.compose(tau(b), q.functor.arr(h))
                rhs = cat.compose(p.functor.arr(h), tau(a))
                if not cat.eq(lhs, rhs):
                    rep.record("iso.natural", repr(h), False, lhs, rhs)
    rep.record("iso.natural", f"fragment of {len(objects)} objects", True)
    return rep


# ---------------------------------------------------------------------------
# Monad-algebra sketches


@dataclass(frozen=True)
class TAlgebra:
    """Monad algebra (A, act: TA -> A)."""

    monad: MonadData
    obj: object
    act: object

    def validate(self, cat, report=None) -> CheckReport:
        rep = report if report is not None else CheckReport()
        t = self.monad
        sub = fmt_obj(self.obj)
        rep.eq("talg.unit", sub,
               cat.compose(self.act, t.unit(self.obj)), cat.identity(self.obj))
        rep.eq("talg.assoc", sub,
               cat.compose(self.act, t.mult(self.obj)),
               cat.compose(self.act, t.functor.arr(self.act)))
        return rep


@dataclass(frozen=True)
class TSplitMono:
    """j: c -> d with a Kleisli retraction k: d -> Tc, k.j = unit."""

    monad: MonadData
    j: object
    k: object

    def validate(self, cat, report=None) -> CheckReport:
        rep = report if report is not None else CheckReport()
        rep.eq("tsplit.retract", repr(self.j),
               cat.compose(self.k, self.j), self.monad.unit(cat.dom(self.j)))
        return rep


def sketch_canonical_lift(cat, mono: TSplitMono, alg: TAlgebra, h):
    """Extend h: c -> A along j to hbar = act . Th . k: d -> A."""
    t = mono.monad
    if cat.dom(h) != cat.dom(mono.j) or cat.cod(h) != alg.obj:
        raise CategoryError("lift input must run from dom(j) into the algebra carrier")
    if not cat.eq(cat.compose(mono.k, mono.j), t.unit(cat.dom(mono.j))):
        raise CategoryError("(j,k) is not a split mono for the monad")
    hbar = cat.compose(alg.act, cat.compose(t.functor.arr(h), mono.k))
    if not cat.eq(cat.compose(hbar, mono.j), h):
        raise CategoryError("canonical lift fails to extend h along j")
    return hbar


@dataclass(frozen=True)
class SketchTriangle:
    """A marked triangle: split mono (j,k) with a map phi: cod(j) -> X."""

    mono: TSplitMono
    phi: object


@dataclass(frozen=True)
class Sketch:
    obj: object
    triangles: tuple


def sketch_is_model_square(cat, sk: Sketch, alg: TAlgebra, f) -> bool:
    """Model condition as commuting squares: f.phi = act . T(f.phi.j) . k."""
    t = alg.monad
    for tri in sk.triangles:
        left = cat.compose(f, tri.phi)
        inner = cat.compose(left, tri.mono.j)
        right = cat.compose(alg.act, cat.compose(t.functor.arr(inner), tri.mono.k))
        if not cat.eq(left, right):
            return False
    return True


def sketch_is_model_lift(cat, sk: Sketch, alg: TAlgebra, f) -> bool:
    """Model condition as canonical lifting triangles: f.phi is the
    canonical extension of f.phi.j along j."""
    for tri in sk.triangles:
        left = cat.compose(f, tri.phi)
        h = cat.compose(left, tri.mono.j)
        if not cat.eq(left, sketch_canonical_lift(cat, tri.mono, alg, h)):
            return False
    return True
