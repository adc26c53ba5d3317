"""Weak maps for a split-epi style factorisation system, two ways.

A weak map A -> B is presented either as a co-Kleisli arrow QA -> B for
the cofibrant replacement comonad Q, or as a span

    A  <--(algebra)--  X  -->  B

whose left leg carries an algebra structure.  Every algebra induces a
comparison map phi from the replacement of its codomain, giving a
functor from spans to co-Kleisli arrows; conversely a co-Kleisli arrow
spreads out into a span with apex QA.  The two presentations agree up
to zigzags of span maps, and `compare_hom` measures both sides
exhaustively over finite sets.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .awfs import (
    RAlgebraArrow,
    cartesian_lift,
    free_algebra,
    identity_algebra,
    cofibrant_replacement,
    r_algebra_compose,
)
from .fincat import (
    CategoryError,
    FinSetArrow,
    FinSetCategory,
    KleisliArrow,
    canonical_set,
    co_kleisli,
)
from .report import CheckReport


class WeakMapCategory:
    """Co-Kleisli presentation: objects of the base, hom(A,B) = C(QA,B)."""

    def __init__(self, awfs):
        self.awfs = awfs
        self.cat = awfs.cat
        self.q = cofibrant_replacement(awfs)
        self.kleisli = co_kleisli(awfs.cat, self.q)

    def phi(self, alg: RAlgebraArrow) -> KleisliArrow:
        """The weak section cod(f) -> dom(f) of an algebra (f, sigma).

        Underlying arrow: Q(cod f) -> Ef -> dom f via the square from the
        empty-domain arrow into f, then the algebra structure map.
        """
        aw, cat = self.awfs, self.cat
        f = alg.arrow
        a, b = cat.dom(f), cat.cod(f)
        e = aw.earr(cat.from_initial(b), f, cat.from_initial(a), cat.identity(b))
        return KleisliArrow(b, a, cat.compose(alg.p, e))

    def phi_by_filler(self, alg: RAlgebraArrow) -> KleisliArrow:
        """Same map through the comultiplication route; agreement with
        phi() is a counit-law consequence that stays under test."""
        aw, cat = self.awfs, self.cat
        f = alg.arrow
        a, b = cat.dom(f), cat.cod(f)
        bang = cat.from_initial(b)
        e = aw.earr(aw.lam(bang), f, cat.from_initial(a), aw.rho(bang))
        under = cat.compose(alg.p, cat.compose(e, aw.comult(bang)))
        return KleisliArrow(b, a, under)

    def cofree(self, h) -> KleisliArrow:
        return self.kleisli.cofree(h)


def weak_maps_kleisli(awfs) -> WeakMapCategory:
    return WeakMapCategory(awfs)


# ---------------------------------------------------------------------------
# Spans


@dataclass(frozen=True)
class ASpan:
    """Span A <- X -> B with an algebra structure on the left leg."""

    left: RAlgebraArrow
    right: object

    @property
    def apex(self):
        return self.left.awfs.cat.dom(self.left.arrow)

    @property
    def src(self):
        return self.left.awfs.cat.cod(self.left.arrow)

    @property
    def dst(self):
        return self.left.awfs.cat.cod(self.right)

    def validate(self, report=None) -> CheckReport:
        rep = report if report is not None else CheckReport()
        cat = self.left.awfs.cat
        rep.record("span.apex", fmt_span(self),
                   cat.dom(self.right) == cat.dom(self.left.arrow))
        self.left.validate(rep)
        return rep


def fmt_span(s: ASpan) -> str:
    return f"{s.src}<-{s.apex}->{s.dst}"


def identity_span(awfs, a) -> ASpan:
    return ASpan(identity_algebra(awfs, a), awfs.cat.identity(a))


def span_to_kleisli(wm: WeakMapCategory, s: ASpan) -> KleisliArrow:
    cat = wm.cat
    ph = wm.phi(s.left)
    return KleisliArrow(s.src, s.dst, cat.compose(s.right, ph.under))


def kleisli_to_span(wm: WeakMapCategory, f: KleisliArrow) -> ASpan:
    bang = wm.cat.from_initial(f.dom)
    return ASpan(free_algebra(wm.awfs, bang), f.under)


def span_compose(s: ASpan, t: ASpan) -> ASpan:
    """Composite span via pullback; the left algebra pulls back along the
    pullback square and then composes."""
    aw = s.left.awfs
    cat = aw.cat
    if s.dst != t.src:
        raise CategoryError("spans are not composable")
    if not isinstance(cat, FinSetCategory):
        raise CategoryError("span composition needs computed pullbacks")
    pb = cat.pullback(s.right, t.left.arrow)
    lift = cartesian_lift(t.left, pb.p1, pb.p2, s.right)
    left = r_algebra_compose(s.left, lift)
    return ASpan(left, cat.compose(t.right, pb.p2))


def span_is_map(r, s: ASpan, t: ASpan) -> bool:
    """r: apex(s) -> apex(t) commuting with both legs and the witnesses."""
    cat = s.left.awfs.cat
    return (
        cat.eq(cat.compose(t.left.arrow, r), s.left.arrow)
        and cat.eq(cat.compose(t.right, r), s.right)
        and cat.eq(cat.compose(r, s.left.witness), t.left.witness)
    )


def span_maps(s: ASpan, t: ASpan):
    cat = s.left.awfs.cat
    return [r for r in cat.hom(s.apex, t.apex) if span_is_map(r, s, t)]


def normalize_span(s: ASpan) -> ASpan:
    """Relabel the apex canonically: sort points by (left image, right
    image, witness preimages) and rename positionally.  Tied points are
    interchangeable by a span automorphism, so the result is a class
    invariant."""
    aw = s.left.awfs
    cat = aw.cat
    if not isinstance(cat, FinSetCategory):
        raise CategoryError("span normalisation is defined over finite sets")
    l, r, w = s.left.arrow, s.right, s.left.witness
    pre = {i: [] for i in range(len(l.dom))}
    for j in range(len(w.dom)):
        pre[w.idx[j]].append(j)
    keys = sorted(range(len(l.dom)),
                  key=lambda i: (l.idx[i], r.idx[i], tuple(pre[i])))
    apex = canonical_set(len(keys), "s")
    rank = {old: new for new, old in enumerate(keys)}
    nl = FinSetArrow(apex, l.cod, tuple(l.idx[i] for i in keys))
    nr = FinSetArrow(apex, r.cod, tuple(r.idx[i] for i in keys))
    nw = FinSetArrow(w.dom, apex, tuple(rank[w.idx[j]] for j in range(len(w.dom))))
    return ASpan(RAlgebraArrow(aw, nl, nw), nr)


def canonical_span(wm: WeakMapCategory, s: ASpan) -> ASpan:
    """The span with apex Q(src) presenting the same weak map."""
    return kleisli_to_span(wm, span_to_kleisli(wm, s))


@dataclass(frozen=True)
class SpanZigzag:
    """Chain of span maps connecting spans[0] to spans[-1]; dirs[i] is
    "fwd" when maps[i]: spans[i] -> spans[i+1], "bwd" for the reverse."""

    spans: tuple
    maps: tuple
    dirs: tuple

    def verify(self) -> bool:
        for i, (r, d) in enumerate(zip(self.maps, self.dirs)):
            a, b = self.spans[i], self.spans[i + 1]
            if d == "fwd":
                ok = span_is_map(r, a, b)
            else:
                ok = span_is_map(r, b, a)
            if not ok:
                return False
        return True


@dataclass(frozen=True)
class SpanEquivResult:
    kind: str  # "equal" | "connected" | "not-found-within-bounds"
    zigzag: object = None

    @property
    def equivalent(self):
        return self.kind in ("equal", "connected")


def span_equiv(wm: WeakMapCategory, s: ASpan, t: ASpan,
               apex_bound=None, zigzag_bound=4) -> SpanEquivResult:
    """Decide zigzag-connectivity of two spans within explicit bounds.

    Tries, in order: equality after normalisation; a single span map in
    either direction; the canonical span with apex Q(src) mapping onto
    both (needs zigzag_bound >= 2 and Q(src) within apex_bound).  The
    not-found answer names exceeded bounds rather than claiming
    inequivalence.
    """
    if s.src != t.src or s.dst != t.dst:
        raise CategoryError("spans have different boundaries")
    if normalize_span(s) == normalize_span(t):
        return SpanEquivResult("equal", SpanZigzag((s,), (), ()))
    if zigzag_bound >= 1:
        for r in span_maps(s, t):
            return SpanEquivResult("connected", SpanZigzag((s, t), (r,), ("fwd",)))
        for r in span_maps(t, s):
            return SpanEquivResult("connected", SpanZigzag((s, t), (r,), ("bwd",)))
    ku, kv = span_to_kleisli(wm, s), span_to_kleisli(wm, t)
    if wm.kleisli.eq(ku, kv) and zigzag_bound >= 2:
        c = kleisli_to_span(wm, ku)
        if apex_bound is None or len(c.apex) <= apex_bound:
            rs = wm.phi(s.left).under
            rt = wm.phi(t.left).under
            if span_is_map(rs, c, s) and span_is_map(rt, c, t):
                return SpanEquivResult(
                    "connected",
                    SpanZigzag((s, c, t), (rs, rt), ("bwd", "fwd")))
    return SpanEquivResult("not-found-within-bounds")


# ---------------------------------------------------------------------------
# Exhaustive comparison of the two presentations


@dataclass(frozen=True)
class SpanClass:
    """All bounded spans sharing one co-Kleisli image."""

    kappa: tuple
    count: int


@dataclass
class HomComparison:
    src: tuple
    dst: tuple
    apex_bound: int
    kleisli_count: int
    span_count: int
    span_class_count: int
    classes: tuple  # of SpanClass, ordered by kappa
    report: CheckReport


def _int_spans(a, b, eps, max_apex):
    """All spans (k, l, sigma, r) over carriers of sizes a, b with witness
    base indexed by eps: positions of the counit.  Integer encoded."""
    pa = len(eps)
    for k in range(1, max_apex + 1):
        for l in itertools.product(range(a), repeat=k):
            fibres = []
            dead = False
            for w in range(pa):
                fb = [x for x in range(k) if l[x] == eps[w]]
                if not fb:
                    dead = True
                    break
                fibres.append(fb)
            if dead:
                continue
            for sigma in itertools.product(*fibres):
                for r in itertools.product(range(b), repeat=k):
                    yield k, l, sigma, r


def _api_span(awfs, a_labels, b_labels, k, l, sigma, r) -> ASpan:
    apex = canonical_set(k, "s")
    pa = awfs.comonad.functor.obj(a_labels)
    left = FinSetArrow(apex, a_labels, l)
    wit = FinSetArrow(pa, apex, sigma)
    return ASpan(RAlgebraArrow(awfs, left, wit), FinSetArrow(apex, b_labels, r))


def enumerate_spans(awfs, a_labels, b_labels, max_apex):
    """Every span a <- apex -> b with a chosen algebra left leg and
    apex size <= max_apex, one witness per structure."""
    a_labels, b_labels = tuple(a_labels), tuple(b_labels)
    eps = awfs.comonad.counit(a_labels).idx
    for k, l, sigma, r in _int_spans(len(a_labels), len(b_labels), eps,
                                     max_apex):
        yield _api_span(awfs, a_labels, b_labels, k, l, sigma, r)


def compare_hom(awfs, a_size=2, b_size=2, apex_bound=4, full_upto=3,
                sample=200, seed=0, report=None) -> HomComparison:
    """Census of weak maps A -> B in both presentations.

    Every span with apex size <= apex_bound is enumerated (integer
    encoded); its co-Kleisli image kappa is the class key.  Checks:

    * api.kappa: the integer kappa agrees with span_to_kleisli through
      the real category operations, exhaustively up to full_upto and on
      a seeded deterministic sample above;
    * roundtrip: kleisli -> span -> kleisli is the identity;
    * class.count: bounded span classes biject with co-Kleisli arrows
      (needs apex_bound >= |QA| so the canonical spans appear);
    * kappa.invariant: sampled one-step span maps preserve kappa, with
      sources built from arbitrary relabelings over a sampled target.
    """
    rep = report if report is not None else CheckReport()
    cat = awfs.cat
    a_labels = canonical_set(a_size, "a")
    b_labels = canonical_set(b_size, "b")
    wm = weak_maps_kleisli(awfs)
    eps = awfs.comonad.counit(a_labels).idx
    pa = len(eps)
    rng = random.Random(seed)

    kleisli_count = b_size ** pa if pa else 1
    classes = {}
    span_count = 0
    checked_api = 0
    for k, l, sigma, r in _int_spans(a_size, b_size, eps, apex_bound):
        span_count += 1
        kappa = tuple(r[sigma[w]] for w in range(pa))
        classes[kappa] = classes.get(kappa, 0) + 1
        if k <= full_upto or rng.randrange(1000) == 0:
            s = _api_span(awfs, a_labels, b_labels, k, l, sigma, r)
            u = span_to_kleisli(wm, s)
            if u.under.idx != kappa:
                rep.record("api.kappa", f"{(k, l, sigma, r)}", False,
                           u.under.idx, kappa)
            checked_api += 1
    ok_api = not any(c.name == "api.kappa" for c in rep.failures())
    rep.record("api.kappa", f"{checked_api} spans cross-checked", ok_api)

    qa = wm.q.functor.obj(a_labels)
    bad_rt = 0
    for under_idx in itertools.product(range(b_size), repeat=len(qa)):
        u = KleisliArrow(a_labels, b_labels,
                        FinSetArrow(qa, b_labels, under_idx))
        s = kleisli_to_span(wm, u)
        back = span_to_kleisli(wm, s)
        if not wm.kleisli.eq(back, u):
            bad_rt += 1
            rep.record("roundtrip", repr(u), False, back, u)
    rep.record("roundtrip", f"{kleisli_count} co-Kleisli arrows", bad_rt == 0)

    rep.record("class.count", f"apex<={apex_bound}",
               len(classes) == kleisli_count, len(classes), kleisli_count)

    # invariance: build sources over sampled targets by arbitrary relabeling
    targets = list(_int_spans(a_size, b_size, eps, min(2, apex_bound)))
    all_targets = targets if len(targets) <= sample else rng.sample(targets, sample)
    bad_inv = 0
    n_inv = 0
    for k, l, sigma, r in all_targets:
        t = _api_span(awfs, a_labels, b_labels, k, l, sigma, r)
        kt = span_to_kleisli(wm, t)
        for ksrc in range(1, min(3, apex_bound) + 1):
            for rmap in itertools.product(range(k), repeat=ksrc):
                fibres = [[x for x in range(ksrc) if rmap[x] == sigma[w]]
                          for w in range(pa)]
                if any(not fb for fb in fibres):
                    continue
                for s_sigma in itertools.product(*fibres):
                    sl = tuple(l[rmap[x]] for x in range(ksrc))
                    sr = tuple(r[rmap[x]] for x in range(ksrc))
                    s = _api_span(awfs, a_labels, b_labels, ksrc, sl, s_sigma, sr)
                    rarr = FinSetArrow(s.apex, t.apex, rmap)
                    n_inv += 1
                    if not span_is_map(rarr, s, t):
                        bad_inv += 1
                        rep.record("kappa.invariant", f"map {rmap} into {(k,l,sigma,r)}",
                                   False, "not a span map", "")
                    elif span_to_kleisli(wm, s).under.idx != kt.under.idx:
                        bad_inv += 1
                        rep.record("kappa.invariant", f"map {rmap} into {(k,l,sigma,r)}",
                                   False, span_to_kleisli(wm, s).under.idx,
                                   kt.under.idx)
    rep.record("kappa.invariant", f"{n_inv} one-step maps", bad_inv == 0)

    ordered = tuple(SpanClass(kappa, classes[kappa]) for kappa in sorted(classes))
    return HomComparison(a_labels, b_labels, apex_bound, kleisli_count,
                         span_count, len(classes), ordered, rep)
