"""Finite categories with computable structure.

Two interchangeable backends:

* FinSetCategory: objects are tuples of distinct element labels, arrows
  are tabulated total functions.  Hom-sets enumerate in lexicographic
  order of function graphs, coproducts are tagged unions (tags "L"/"R"),
  pullbacks are lexicographically ordered subsets of the product with a
  mediating-map solver.
* TableCategory: objects, arrows, identities and a composition table
  supplied explicitly (typically from JSON).  Any (co)limits it claims
  must be declared; validators check the universal property instead of
  searching for one.

On top of either backend: functor / comonad / monad data, their law
validators, and the co-Kleisli category of a comonad.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .report import CheckReport


class CategoryError(Exception):
    pass


def fmt_obj(x) -> str:
    if isinstance(x, tuple):
        return "{" + ",".join(x) + "}"
    return str(x)


# ---------------------------------------------------------------------------
# FinSet backend


@dataclass(frozen=True, slots=True)
class FinSetArrow:
    """Total function between label tuples; idx[i] is the cod-position of dom[i]."""

    dom: tuple
    cod: tuple
    idx: tuple

    def __call__(self, x):
        return self.cod[self.idx[self.dom.index(x)]]

    def graph(self):
        return tuple((x, self.cod[i]) for x, i in zip(self.dom, self.idx))

    def __repr__(self):
        imgs = ",".join(self.cod[i] for i in self.idx)
        return f"{fmt_obj(self.dom)}->{fmt_obj(self.cod)}[{imgs}]"


def fsarrow(dom, cod, images) -> FinSetArrow:
    """Build an arrow from an explicit mapping (dict or per-element iterable)."""
    dom, cod = tuple(dom), tuple(cod)
    if isinstance(images, dict):
        images = [images[x] for x in dom]
    pos = {y: j for j, y in enumerate(cod)}
    return FinSetArrow(dom, cod, tuple(pos[y] for y in images))


class CoproductData:
    """Chosen coproduct: tagged union object, injections, copair operation."""

    def __init__(self, obj, inl, inr):
        self.obj = obj
        self.inl = inl
        self.inr = inr

    def copair(self, f: FinSetArrow, g: FinSetArrow) -> FinSetArrow:
        if f.cod != g.cod:
            raise CategoryError("copair legs must share a codomain")
        if f.dom != self.inl.dom or g.dom != self.inr.dom:
            raise CategoryError("copair legs do not match the coproduct summands")
        return FinSetArrow(self.obj, f.cod, f.idx + g.idx)


class PullbackData:
    """Chosen pullback of a cospan f, g: subset of the product, lex ordered."""

    def __init__(self, f, g, obj, p1, p2):
        self.f = f
        self.g = g
        self.obj = obj
        self.p1 = p1
        self.p2 = p2

    def mediate(self, u: FinSetArrow, v: FinSetArrow) -> FinSetArrow:
        """The unique k with p1 k = u and p2 k = v; raises if the cone fails."""
        if u.dom != v.dom:
            raise CategoryError("cone legs must share a domain")
        spot = {(self.p1.idx[i], self.p2.idx[i]): i for i in range(len(self.obj))}
        idx = []
        for i in range(len(u.dom)):
            key = (u.idx[i], v.idx[i])
            if key not in spot:
                raise CategoryError(
                    f"cone does not commute at {u.dom[i]!r}: "
                    f"f(u(-)) != g(v(-)) there"
                )
            idx.append(spot[key])
        return FinSetArrow(u.dom, self.obj, tuple(idx))


class FinSetCategory:
    """Finite sets (tuples of distinct string labels) and all functions."""

    def identity(self, x) -> FinSetArrow:
        x = tuple(x)
        return FinSetArrow(x, x, tuple(range(len(x))))

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def eq(self, f, g) -> bool:
        return f == g

    def compose(self, g: FinSetArrow, f: FinSetArrow) -> FinSetArrow:
        if f.cod != g.dom:
            raise CategoryError(f"not composable: cod {f!r} != dom {g!r}")
        return FinSetArrow(f.dom, g.cod, tuple(g.idx[i] for i in f.idx))

    def hom(self, a, b) -> list:
        a, b = tuple(a), tuple(b)
        if len(a) > 0 and len(b) == 0:
            return []
        return [
            FinSetArrow(a, b, idx)
            for idx in itertools.product(range(len(b)), repeat=len(a))
        ]

    def initial(self):
        return ()

    def from_initial(self, x) -> FinSetArrow:
        return FinSetArrow((), tuple(x), ())

    def coproduct(self, a, b) -> CoproductData:
        a, b = tuple(a), tuple(b)
        obj = tuple(f"L:{x}" for x in a) + tuple(f"R:{y}" for y in b)
        inl = FinSetArrow(a, obj, tuple(range(len(a))))
        inr = FinSetArrow(b, obj, tuple(range(len(a), len(obj))))
        return CoproductData(obj, inl, inr)

    def pullback(self, f: FinSetArrow, g: FinSetArrow) -> PullbackData:
        if f.cod != g.cod:
            raise CategoryError("pullback needs a cospan")
        pairs = [
            (i, j)
            for i in range(len(f.dom))
            for j in range(len(g.dom))
            if f.idx[i] == g.idx[j]
        ]
        obj = tuple(f"({f.dom[i]},{g.dom[j]})" for i, j in pairs)
        p1 = FinSetArrow(obj, f.dom, tuple(i for i, _ in pairs))
        p2 = FinSetArrow(obj, g.dom, tuple(j for _, j in pairs))
        return PullbackData(f, g, obj, p1, p2)


# ---------------------------------------------------------------------------
# Table backend


class SchemaError(Exception):
    """Malformed input data; message carries a JSON-path style position."""


class TableCategory:
    def __init__(self, objects, arrows, identities, compose, limits=None):
        self.objects = list(objects)
        self.arrows = dict(arrows)  # id -> (dom, cod)
        self.identities = dict(identities)  # obj -> id
        self.table = dict(compose)  # (g, f) -> g.f
        self.limits = limits or {}

    @classmethod
    def from_dict(cls, data) -> "TableCategory":
        if not isinstance(data, dict):
            raise SchemaError("$: expected an object")
        objs = data.get("objects")
        if not isinstance(objs, list) or not all(isinstance(o, str) for o in objs):
            raise SchemaError("$.objects: expected a list of strings")
        arrows = {}
        for i, a in enumerate(data.get("arrows", [])):
            where = f"$.arrows[{i}]"
            if not isinstance(a, dict) or not {"id", "dom", "cod"} <= a.keys():
                raise SchemaError(f"{where}: expected {{id, dom, cod}}")
            if a["dom"] not in objs:
                raise SchemaError(f"{where}.dom: unknown object {a['dom']!r}")
            if a["cod"] not in objs:
                raise SchemaError(f"{where}.cod: unknown object {a['cod']!r}")
            if a["id"] in arrows:
                raise SchemaError(f"{where}.id: duplicate arrow id {a['id']!r}")
            arrows[a["id"]] = (a["dom"], a["cod"])
        idents = data.get("identities", {})
        for o, i in idents.items():
            if o not in objs:
                raise SchemaError(f"$.identities.{o}: unknown object")
            if i not in arrows:
                raise SchemaError(f"$.identities.{o}: unknown arrow {i!r}")
            if arrows[i] != (o, o):
                raise SchemaError(f"$.identities.{o}: {i!r} is not an endomorphism of {o!r}")
        missing = [o for o in objs if o not in idents]
        if missing:
            raise SchemaError(f"$.identities: missing identity for {missing[0]!r}")
        comp = {}
        for i, row in enumerate(data.get("compose", [])):
            where = f"$.compose[{i}]"
            if not (isinstance(row, list) and len(row) == 3):
                raise SchemaError(f"{where}: expected [g, f, gf]")
            g, f, gf = row
            for name in (g, f, gf):
                if name not in arrows:
                    raise SchemaError(f"{where}: unknown arrow {name!r}")
            if arrows[f][1] != arrows[g][0]:
                raise SchemaError(f"{where}: {g!r} after {f!r} is not composable")
            want = (arrows[f][0], arrows[g][1])
            if arrows[gf] != want:
                raise SchemaError(
                    f"{where}: composite {gf!r} has endpoints {arrows[gf]}, expected {want}"
                )
            comp[(g, f)] = gf
        return cls(objs, arrows, idents, comp, data.get("limits"))

    def identity(self, x):
        if x not in self.identities:
            raise CategoryError(f"unknown object identifier {x!r}")
        return self.identities[x]

    def dom(self, f):
        return self.arrows[f][0]

    def cod(self, f):
        return self.arrows[f][1]

    def eq(self, f, g):
        return f == g

    def compose(self, g, f):
        if self.arrows[f][1] != self.arrows[g][0]:
            raise CategoryError(f"not composable: {g!r} after {f!r}")
        key = (g, f)
        if key not in self.table:
            raise CategoryError(f"composite missing from table: {g!r} after {f!r}")
        return self.table[key]

    def hom(self, a, b):
        return sorted(i for i, (d, c) in self.arrows.items() if d == a and c == b)

    def copair(self, cop: CoproductData, f, g):
        """Unique mediating arrow out of a declared coproduct, found by search."""
        found = [
            h
            for h in self.hom(cop.obj, self.cod(f))
            if self.compose(h, cop.inl) == f and self.compose(h, cop.inr) == g
        ]
        if len(found) != 1:
            raise CategoryError(
                f"declared coproduct {cop.obj!r} has {len(found)} copairings, want 1"
            )
        return found[0]


# ---------------------------------------------------------------------------
# Functor / comonad / monad data


@dataclass
class FunctorData:
    """An endofunctor presented by callables (tables are wrapped the same way)."""

    obj: object  # obj -> obj
    arr: object  # arrow -> arrow
    name: str = "F"


@dataclass
class ComonadData:
    functor: FunctorData
    counit: object  # obj -> arrow P(obj) -> obj
    comult: object  # obj -> arrow P(obj) -> PP(obj)
    name: str = "P"


@dataclass
class MonadData:
    functor: FunctorData
    unit: object  # obj -> arrow obj -> T(obj)
    mult: object  # obj -> arrow TT(obj) -> T(obj)
    name: str = "T"


def identity_comonad(cat) -> ComonadData:
    f = FunctorData(lambda x: x, lambda a: a, "Id")
    return ComonadData(f, cat.identity, cat.identity, "Id")


def identity_monad(cat) -> MonadData:
    f = FunctorData(lambda x: x, lambda a: a, "Id")
    return MonadData(f, cat.identity, cat.identity, "Id")


def coreader_comonad(cat: FinSetCategory, s) -> ComonadData:
    """P(X) = X x S with counit the projection and comultiplication the
    duplication of the S coordinate.  Pair labels are "(x,s)"."""
    s = tuple(s)
    if not s:
        raise CategoryError("coreader comonad needs a nonempty label set")

    def pobj(x):
        return tuple(f"({e},{t})" for e in x for t in s)

    def parr(f: FinSetArrow) -> FinSetArrow:
        n = len(s)
        idx = tuple(f.idx[i] * n + k for i in range(len(f.dom)) for k in range(n))
        return FinSetArrow(pobj(f.dom), pobj(f.cod), idx)

    def counit(x):
        x = tuple(x)
        n = len(s)
        idx = tuple(i for i in range(len(x)) for _ in range(n))
        return FinSetArrow(pobj(x), x, idx)

    def comult(x):
        x = tuple(x)
        n = len(s)
        # (x,t) goes to ((x,t),t): position (i*n+k) maps to (i*n+k)*n + k
        idx = tuple((i * n + k) * n + k for i in range(len(x)) for k in range(n))
        return FinSetArrow(pobj(x), pobj(pobj(x)), idx)

    return ComonadData(FunctorData(pobj, parr, "(-)xS"), counit, comult, f"(-)x{fmt_obj(s)}")


def exception_monad(cat: FinSetCategory, e) -> MonadData:
    """T(X) = X + E as a label union.  Objects already ending in the full
    exception block are fixed by T (making T idempotent on its image);
    any other overlap with E is a genuine collision and rejected."""
    e = tuple(e)

    def tobj(x):
        x = tuple(x)
        if x[len(x) - len(e):] == e:
            return x
        clash = set(x) & set(e)
        if clash:
            raise CategoryError(f"exception labels collide with carrier: {sorted(clash)}")
        return x + e

    def tarr(f: FinSetArrow) -> FinSetArrow:
        dom, cod = tobj(f.dom), tobj(f.cod)
        pos = {lbl: i for i, lbl in enumerate(cod)}
        fmap = {x: f.cod[f.idx[i]] for i, x in enumerate(f.dom)}
        idx = tuple(pos[fmap.get(lbl, lbl)] for lbl in dom)
        return FinSetArrow(dom, cod, idx)

    def unit(x):
        x = tuple(x)
        t = tobj(x)
        pos = {lbl: i for i, lbl in enumerate(t)}
        return FinSetArrow(x, t, tuple(pos[lbl] for lbl in x))

    def mult(x):
        t = tobj(x)
        return FinSetArrow(tobj(t), t, tuple(range(len(t))))  # tobj(t) == t

    return MonadData(FunctorData(tobj, tarr, "(-)+E"), unit, mult, f"(-)+{fmt_obj(e)}")


# ---------------------------------------------------------------------------
# Validators


def _all_arrows(cat, objects):
    out = []
    for a in objects:
        for b in objects:
            out.extend(cat.hom(a, b))
    return out


def validate_category(cat, objects, report=None) -> CheckReport:
    """Identity and associativity laws on the full fragment spanned by `objects`."""
    rep = report if report is not None else CheckReport()
    objects = list(objects)
    for a in objects:
        i = cat.identity(a)
        rep.record("id.endpoints", fmt_obj(a), cat.dom(i) == a and cat.cod(i) == a)
    for a in objects:
        for b in objects:
            ia, ib = cat.identity(a), cat.identity(b)
            for f in cat.hom(a, b):
                lhs, rhs = cat.compose(ib, f), cat.compose(f, ia)
                ok = cat.eq(lhs, f) and cat.eq(rhs, f)
                rep.record("id.unit", repr(f), ok, lhs, f)
    for a in objects:
        for b in objects:
            for c in objects:
                for f in cat.hom(a, b):
                    for g in cat.hom(b, c):
                        gf = cat.compose(g, f)
                        ok = cat.dom(gf) == a and cat.cod(gf) == c
                        if not ok:
                            rep.record("compose.endpoints", f"{g!r} . {f!r}", False)
    triples = 0
    bad = None
    for a in objects:
        for b in objects:
            homs_ab = cat.hom(a, b)
            for c in objects:
                homs_bc = cat.hom(b, c)
                if not homs_ab or not homs_bc:
                    continue
                for d in objects:
                    for h in cat.hom(c, d):
                        for g in homs_bc:
                            hg = cat.compose(h, g)
                            for f in homs_ab:
                                triples += 1
                                lhs = cat.compose(hg, f)
                                rhs = cat.compose(h, cat.compose(g, f))
                                if not cat.eq(lhs, rhs) and bad is None:
                                    bad = (f, g, h, lhs, rhs)
    if bad is None:
        rep.record("assoc", f"{triples} triples", True)
    else:
        f, g, h, lhs, rhs = bad
        rep.record("assoc", f"h={h!r} g={g!r} f={f!r}", False, lhs, rhs)
    return rep


def validate_functor(cat, fun: FunctorData, objects, report=None) -> CheckReport:
    rep = report if report is not None else CheckReport()
    for a in objects:
        lhs = fun.arr(cat.identity(a))
        rep.eq(f"{fun.name}.id", fmt_obj(a), lhs, cat.identity(fun.obj(a)))
    for a in objects:
        for b in objects:
            for c in objects:
                for f in cat.hom(a, b):
                    for g in cat.hom(b, c):
                        lhs = fun.arr(cat.compose(g, f))
                        rhs = cat.compose(fun.arr(g), fun.arr(f))
                        if not cat.eq(lhs, rhs):
                            rep.record(f"{fun.name}.compose", f"{g!r} . {f!r}", False, lhs, rhs)
    rep.record(f"{fun.name}.compose", f"fragment of {len(objects)} objects", True)
    return rep


def validate_comonad(cat, p: ComonadData, objects, report=None) -> CheckReport:
    """Counit triangles, coassociativity, and both naturality squares."""
    rep = report if report is not None else CheckReport()
    validate_functor(cat, p.functor, objects, rep)
    P, eps, dup = p.functor, p.counit, p.comult
    for a in objects:
        pa = P.obj(a)
        rep.eq("comonad.counit.left", fmt_obj(a),
               cat.compose(eps(pa), dup(a)), cat.identity(pa))
        rep.eq("comonad.counit.right", fmt_obj(a),
               cat.compose(P.arr(eps(a)), dup(a)), cat.identity(pa))
        rep.eq("comonad.coassoc", fmt_obj(a),
               cat.compose(dup(pa), dup(a)), cat.compose(P.arr(dup(a)), dup(a)))
    for a in objects:
        for b in objects:
            for f in cat.hom(a, b):
                if not cat.eq(cat.compose(f, eps(a)), cat.compose(eps(b), P.arr(f))):
                    rep.record("comonad.counit.natural", repr(f), False,
                               cat.compose(f, eps(a)), cat.compose(eps(b), P.arr(f)))
                if not cat.eq(cat.compose(dup(b), P.arr(f)),
                              cat.compose(P.arr(P.arr(f)), dup(a))):
                    rep.record("comonad.comult.natural", repr(f), False)
    rep.record("comonad.natural", f"fragment of {len(objects)} objects", True)
    return rep


def validate_monad(cat, t: MonadData, objects, report=None) -> CheckReport:
    rep = report if report is not None else CheckReport()
    validate_functor(cat, t.functor, objects, rep)
    T, eta, mu = t.functor, t.unit, t.mult
    for a in objects:
        ta = T.obj(a)
        rep.eq("monad.unit.left", fmt_obj(a),
               cat.compose(mu(a), eta(ta)), cat.identity(ta))
        rep.eq("monad.unit.right", fmt_obj(a),
               cat.compose(mu(a), T.arr(eta(a))), cat.identity(ta))
        rep.eq("monad.assoc", fmt_obj(a),
               cat.compose(mu(a), mu(ta)), cat.compose(mu(a), T.arr(mu(a))))
    for a in objects:
        for b in objects:
            for f in cat.hom(a, b):
                if not cat.eq(cat.compose(T.arr(f), eta(a)), cat.compose(eta(b), f)):
                    rep.record("monad.unit.natural", repr(f), False)
                if not cat.eq(cat.compose(mu(b), T.arr(T.arr(f))),
                              cat.compose(T.arr(f), mu(a))):
                    rep.record("monad.mult.natural", repr(f), False)
    rep.record("monad.natural", f"fragment of {len(objects)} objects", True)
    return rep


# ---------------------------------------------------------------------------
# co-Kleisli


@dataclass(frozen=True, slots=True)
class KleisliArrow:
    """Arrow A -> B of the co-Kleisli category, carried by `under`: PA -> B."""

    dom: tuple
    cod: tuple
    under: object

    def __repr__(self):
        return f"kl[{fmt_obj(self.dom)}->{fmt_obj(self.cod)}; {self.under!r}]"


class CoKleisliCategory:
    """Same objects, hom(A,B) = hom(PA,B), composition through the comultiplication."""

    def __init__(self, cat, comonad: ComonadData):
        self.base = cat
        self.comonad = comonad

    def identity(self, a):
        return KleisliArrow(a, a, self.comonad.counit(a))

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def eq(self, f, g):
        return f.dom == g.dom and f.cod == g.cod and self.base.eq(f.under, g.under)

    def compose(self, g: KleisliArrow, f: KleisliArrow) -> KleisliArrow:
        if f.cod != g.dom:
            raise CategoryError("not composable in the co-Kleisli category")
        p = self.comonad
        under = self.base.compose(
            g.under, self.base.compose(p.functor.arr(f.under), p.comult(f.dom))
        )
        return KleisliArrow(f.dom, g.cod, under)

    def hom(self, a, b):
        pa = self.comonad.functor.obj(a)
        return [KleisliArrow(a, b, u) for u in self.base.hom(pa, b)]

    def cofree(self, h) -> KleisliArrow:
        """Image of a base arrow: precompose with the counit."""
        a = self.base.dom(h)
        return KleisliArrow(a, self.base.cod(h),
                            self.base.compose(h, self.comonad.counit(a)))


def co_kleisli(cat, comonad: ComonadData) -> CoKleisliCategory:
    return CoKleisliCategory(cat, comonad)


# ---------------------------------------------------------------------------
# Limit wrappers (FinSet computes, tables must declare)


def compute_coproduct(cat, a, b) -> CoproductData:
    if isinstance(cat, FinSetCategory):
        return cat.coproduct(a, b)
    decl = cat.limits.get("coproducts", []) if isinstance(cat, TableCategory) else []
    for d in decl:
        if d["left"] == a and d["right"] == b:
            return CoproductData(d["object"], d["inl"], d["inr"])
    raise CategoryError(f"no declared coproduct of {a!r} and {b!r}")


def compute_pullback(cat, f, g) -> PullbackData:
    if isinstance(cat, FinSetCategory):
        return cat.pullback(f, g)
    raise CategoryError("pullbacks are only computed in FinSetCategory")


def empty_sum_strip(cat: FinSetCategory, x):
    """The recorded isomorphism (initial + X) -> X and its inverse."""
    cop = cat.coproduct(cat.initial(), x)
    strip = cop.copair(cat.from_initial(x), cat.identity(x))
    return strip, cop.inr


def canonical_set(n: int, prefix="x"):
    """The n-element label set used by exhaustive FinSet fragments."""
    return tuple(f"{prefix}{i}" for i in range(n))


def finset_fragment(max_size: int, prefix="x"):
    return [canonical_set(n, prefix) for n in range(max_size + 1)]
