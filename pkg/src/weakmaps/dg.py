"""Chain complexes over the rationals with exact arithmetic.

Complexes have finite support; a graded map of degree n is a family of
matrix blocks X_k -> Y_{k+n}, stored only where both ends are nonzero.
The differential of a map is the graded commutator

    (Df)_k = d_Y . f_k  -  (-1)^n  f_{k-1} . d_X

so chain maps are the degree-0 cycles.  Tensor products order each
graded piece by ascending left degree, blocks laid out i-major, and the
sign conventions put the twist on the left factor's degree:

    d(x (x) y)     = dx (x) y + (-1)^|x| x (x) dy
    (f (x) g)(x,y) = (-1)^{|g||x|} f x (x) g y
    swap(x (x) y)  = (-1)^{|x||y|} y (x) x

A homological lali is a chain map g with strict section q and a
degree 1 homotopy xi collapsing its domain onto the section, subject to
g.xi = xi.q = xi.xi = 0.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .ratmat import (eye, is_zero, kron, madd, mmul, rank, smul,
                     transpose, zeros)
from .report import CheckReport


class DgError(Exception):
    pass


class ChainComplex:
    """dims: degree -> dimension; d: degree k -> matrix C_k -> C_{k-1}."""

    def __init__(self, dims, d, check=True):
        self.dims = {k: n for k, n in dims.items() if n}
        self.d = {}
        for k, m in d.items():
            if self.dim(k) and self.dim(k - 1) and not is_zero(m):
                self.d[k] = m
        if check:
            self._check()

    def _check(self):
        for k, m in self.d.items():
            if (len(m), len(m[0]) if m else 0) != (self.dim(k - 1), self.dim(k)):
                raise DgError(f"boundary at degree {k} has the wrong shape")
        for k in self.d:
            if k - 1 in self.d:
                if not is_zero(mmul(self.d[k - 1], self.d[k])):
                    raise DgError(f"d.d != 0 out of degree {k}")

    def dim(self, k) -> int:
        return self.dims.get(k, 0)

    def boundary(self, k):
        if k in self.d:
            return self.d[k]
        return zeros(self.dim(k - 1), self.dim(k))

    def degrees(self):
        return sorted(self.dims)

    def total_dim(self):
        return sum(self.dims.values())

    def __eq__(self, other):
        return (isinstance(other, ChainComplex)
                and self.dims == other.dims and self.d == other.d)

    def __hash__(self):
        return hash((tuple(sorted(self.dims.items())),
                     tuple(sorted((k, m) for k, m in self.d.items()))))

    def __repr__(self):
        ds = ",".join(f"{k}:{n}" for k, n in sorted(self.dims.items()))
        return f"Complex[{ds}]"


def unit_complex() -> ChainComplex:
    return ChainComplex({0: 1}, {})


class GradedMap:
    """Degree-homogeneous map between complexes, blockwise."""

    def __init__(self, src: ChainComplex, dst: ChainComplex, deg: int, mats):
        self.src = src
        self.dst = dst
        self.deg = deg
        self.mats = {}
        for k, m in mats.items():
            if src.dim(k) and dst.dim(k + deg) and not is_zero(m):
                if (len(m), len(m[0]) if m else 0) != (dst.dim(k + deg), src.dim(k)):
                    raise DgError(f"block at degree {k} has the wrong shape")
                self.mats[k] = m

    def block(self, k):
        if k in self.mats:
            return self.mats[k]
        return zeros(self.dst.dim(k + self.deg), self.src.dim(k))

    def is_zero(self):
        return not self.mats

    def __eq__(self, other):
        return (isinstance(other, GradedMap)
                and self.src == other.src and self.dst == other.dst
                and self.deg == other.deg and self.mats == other.mats)

    def __repr__(self):
        return f"GradedMap(deg={self.deg}, blocks={sorted(self.mats)})"


def zero_gmap(src, dst, deg=0) -> GradedMap:
    return GradedMap(src, dst, deg, {})


def id_gmap(x: ChainComplex) -> GradedMap:
    return GradedMap(x, x, 0, {k: eye(n) for k, n in x.dims.items()})


def gmap_compose(g: GradedMap, f: GradedMap) -> GradedMap:
    if g.src != f.dst:
        raise DgError("graded maps are not composable")
    mats = {}
    for k in f.src.dims:
        mid = k + f.deg
        if f.src.dim(k) and g.src.dim(mid) and g.dst.dim(mid + g.deg):
            mats[k] = mmul(g.block(mid), f.block(k))
    return GradedMap(f.src, g.dst, f.deg + g.deg, mats)


def gmap_add(f: GradedMap, g: GradedMap) -> GradedMap:
    if f.src != g.src or f.dst != g.dst or f.deg != g.deg:
        raise DgError("graded maps are not addable")
    keys = set(f.mats) | set(g.mats)
    return GradedMap(f.src, f.dst, f.deg,
                     {k: madd(f.block(k), g.block(k)) for k in keys})


def gmap_sub(f: GradedMap, g: GradedMap) -> GradedMap:
    return gmap_add(f, gmap_smul(-1, g))


def gmap_smul(c, f: GradedMap) -> GradedMap:
    return GradedMap(f.src, f.dst, f.deg, {k: smul(c, m) for k, m in f.mats.items()})


def boundary_gmap(x: ChainComplex) -> GradedMap:
    return GradedMap(x, x, -1, dict(x.d))


def graded_differential(f: GradedMap) -> GradedMap:
    """Df = d.f - (-1)^deg f.d, degree deg-1."""
    sign = -1 if f.deg % 2 else 1
    left = gmap_compose(boundary_gmap(f.dst), f)
    right = gmap_compose(f, boundary_gmap(f.src))
    return gmap_sub(left, gmap_smul(sign, right))


def is_chain_map(f: GradedMap) -> bool:
    return f.deg == 0 and graded_differential(f).is_zero()


# ---------------------------------------------------------------------------
# Tensor structure


class TensorComplex(ChainComplex):
    """Binary tensor with ascending-left-degree block layout."""

    def __init__(self, x: ChainComplex, y: ChainComplex):
        self.factors = (x, y)
        self._layout = {}
        dims = {}
        for p in x.degrees():
            for q in y.degrees():
                n = p + q
                block = self._layout.setdefault(n, [])
                off = dims.get(n, 0)
                block.append((p, q, off, x.dim(p), y.dim(q)))
                dims[n] = off + x.dim(p) * y.dim(q)
        d = {n: self._boundary(n) for n in dims}
        super().__init__(dims, d, check=False)
        self._check()

    def blocks(self, n):
        return self._layout.get(n, [])

    def offset(self, n, p):
        for bp, q, off, xd, yd in self.blocks(n):
            if bp == p:
                return off
        raise DgError(f"no block of left degree {p} in total degree {n}")

    def _boundary(self, n):
        x, y = self.factors
        rows = sum(b[3] * b[4] for b in self.blocks(n - 1))
        cols = sum(b[3] * b[4] for b in self.blocks(n))
        out = [[0] * cols for _ in range(rows)]
        tgt_off = {b[0]: b[2] for b in self.blocks(n - 1)}
        for p, q, off, xd, yd in self.blocks(n):
            if x.dim(p - 1):
                dx = x.boundary(p)
                base = tgt_off.get(p - 1)
                if base is not None:
                    m = kron(dx, eye(yd))
                    for i, row in enumerate(m):
                        orow = out[base + i]
                        for j, v in enumerate(row):
                            if v:
                                orow[off + j] += v
            if y.dim(q - 1):
                dy = y.boundary(q)
                base = tgt_off.get(p)
                if base is not None:
                    sign = -1 if p % 2 else 1
                    m = kron(eye(xd), dy)
                    for i, row in enumerate(m):
                        orow = out[base + i]
                        for j, v in enumerate(row):
                            if v:
                                orow[off + j] += sign * v
        return tuple(tuple(r) for r in out)


def tensor_complex(x: ChainComplex, y: ChainComplex) -> TensorComplex:
    return TensorComplex(x, y)


def tensor_map(f: GradedMap, g: GradedMap, src: TensorComplex = None,
               dst: TensorComplex = None) -> GradedMap:
    """f (x) g with the Koszul sign (-1)^{deg g * left degree}."""
    src = src if src is not None else tensor_complex(f.src, g.src)
    dst = dst if dst is not None else tensor_complex(f.dst, g.dst)
    if src.factors != (f.src, g.src) or dst.factors != (f.dst, g.dst):
        raise DgError("tensor endpoints do not match the factor maps")
    deg = f.deg + g.deg
    mats = {}
    for n in src.degrees():
        rows = dst.dim(n + deg)
        cols = src.dim(n)
        if not rows or not cols:
            continue
        out = [[0] * cols for _ in range(rows)]
        tgt_off = {b[0]: b[2] for b in dst.blocks(n + deg)}
        touched = False
        for p, q, off, xd, yd in src.blocks(n):
            fp, gq = f.block(p), g.block(q)
            if is_zero(fp) or is_zero(gq):
                continue
            base = tgt_off.get(p + f.deg)
            if base is None:
                continue
            sign = -1 if (g.deg * p) % 2 else 1
            m = kron(fp, gq)
            for i, row in enumerate(m):
                orow = out[base + i]
                for j, v in enumerate(row):
                    if v:
                        orow[off + j] += sign * v
            touched = True
        if touched:
            mats[n] = tuple(tuple(r) for r in out)
    return GradedMap(src, dst, deg, mats)


def _basis(t: TensorComplex, n):
    """Pairs ((p, i), (q, j)) in storage order at total degree n."""
    for p, q, off, xd, yd in t.blocks(n):
        for i in range(xd):
            for j in range(yd):
                yield (p, i), (q, j)


def assoc_iso(x, y, z):
    """(X (x) Y) (x) Z -> X (x) (Y (x) Z), a signless basis bijection."""
    xy = tensor_complex(x, y)
    src = tensor_complex(xy, z)
    yz = tensor_complex(y, z)
    dst = tensor_complex(x, yz)
    mats = {}
    for n in src.degrees():
        cols = src.dim(n)
        rows = dst.dim(n)
        out = [[0] * cols for _ in range(rows)]
        col = 0
        for pq, r, off, xyd, zd in src.blocks(n):
            pairs = list(_basis(xy, pq))
            for (p, i), (q, j) in pairs:
                for k in range(zd):
                    row = _locate(dst, x, yz, n, p, i, q + r,
                                  _yz_index(yz, q, j, r, k))
                    out[row][col] = 1
                    col += 1
        mats[n] = tuple(tuple(r) for r in out)
    return GradedMap(src, dst, 0, mats), src, dst


def _yz_index(yz: TensorComplex, q, j, r, k):
    z = yz.factors[1]
    off = yz.offset(q + r, q)
    return off + j * z.dim(r) + k


def _locate(t: TensorComplex, x, y, n, p, i, q, j):
    off = t.offset(n, p)
    return off + i * y.dim(q) + j


def lunit_iso(x: ChainComplex):
    """I (x) X -> X."""
    src = tensor_complex(unit_complex(), x)
    mats = {n: eye(x.dim(n)) for n in x.degrees()}
    return GradedMap(src, x, 0, mats), src


def runit_iso(x: ChainComplex):
    """X (x) I -> X."""
    src = tensor_complex(x, unit_complex())
    mats = {n: eye(x.dim(n)) for n in x.degrees()}
    return GradedMap(src, x, 0, mats), src


def symmetry_iso(x: ChainComplex, y: ChainComplex):
    """X (x) Y -> Y (x) X with sign (-1)^{pq} on the (p,q) block."""
    src = tensor_complex(x, y)
    dst = tensor_complex(y, x)
    mats = {}
    for n in src.degrees():
        cols = src.dim(n)
        rows = dst.dim(n)
        out = [[0] * cols for _ in range(rows)]
        for p, q, off, xd, yd in src.blocks(n):
            base = dst.offset(n, q)
            sign = -1 if (p * q) % 2 else 1
            for i in range(xd):
                for j in range(yd):
                    out[base + j * xd + i][off + i * yd + j] = sign
        mats[n] = tuple(tuple(r) for r in out)
    return GradedMap(src, dst, 0, mats), src, dst


def signed_perm_inverse(f: GradedMap) -> GradedMap:
    """Inverse of a degree-0 signed permutation map, blockwise transpose."""
    if f.deg != 0:
        raise DgError("only degree-0 isos are inverted blockwise")
    return GradedMap(f.dst, f.src, 0,
                     {k: transpose(m) for k, m in f.mats.items()})


# ---------------------------------------------------------------------------
# Homological lalis


class HomologicalLali:
    """g: A -> B with section q and contracting homotopy xi on A."""

    def __init__(self, g: GradedMap, q: GradedMap, xi: GradedMap):
        self.g = g
        self.q = q
        self.xi = xi

    @property
    def src(self):
        return self.g.src

    @property
    def dst(self):
        return self.g.dst

    def validate(self, report=None) -> CheckReport:
        rep = report if report is not None else CheckReport()
        g, q, xi = self.g, self.q, self.xi
        sub = f"{g.src!r}->{g.dst!r}"
        ok_shape = (q.src == g.dst and q.dst == g.src and q.deg == 0 == g.deg
                    and xi.src == g.src and xi.dst == g.src and xi.deg == 1)
        rep.record("lali.shape", sub, ok_shape)
        if not ok_shape:
            return rep
        rep.record("lali.g.chain", sub, is_chain_map(g))
        rep.record("lali.q.chain", sub, is_chain_map(q))
        rep.eq("lali.section", sub, gmap_compose(g, q), id_gmap(g.dst))
        want = gmap_sub(id_gmap(g.src), gmap_compose(q, g))
        rep.eq("lali.homotopy", sub, graded_differential(xi), want)
        rep.eq("lali.gxi", sub, gmap_compose(g, xi), zero_gmap(g.src, g.dst, 1))
        rep.eq("lali.xiq", sub, gmap_compose(xi, q), zero_gmap(q.src, g.src, 1))
        rep.eq("lali.xixi", sub, gmap_compose(xi, xi), zero_gmap(g.src, g.src, 2))
        return rep


def compose_lali(outer: HomologicalLali, inner: HomologicalLali) -> HomologicalLali:
    """Composite B->C after A->B: section composes backwards and the
    homotopies add after conjugating the outer one into A."""
    if inner.dst != outer.src:
        raise DgError("lalis are not composable")
    g = gmap_compose(outer.g, inner.g)
    q = gmap_compose(inner.q, outer.q)
    xi = gmap_add(inner.xi,
                  gmap_compose(inner.q, gmap_compose(outer.xi, inner.g)))
    return HomologicalLali(g, q, xi)


def identity_lali(x: ChainComplex) -> HomologicalLali:
    one = id_gmap(x)
    return HomologicalLali(one, one, zero_gmap(x, x, 1))


def lali_morphism_ok(u: GradedMap, v: GradedMap,
                     a: HomologicalLali, b: HomologicalLali) -> bool:
    """(u: srcA -> srcB, v: dstA -> dstB) commutes with g, q and xi."""
    return (is_chain_map(u) and is_chain_map(v)
            and gmap_compose(b.g, u) == gmap_compose(v, a.g)
            and gmap_compose(u, a.q) == gmap_compose(b.q, v)
            and gmap_compose(u, a.xi) == gmap_compose(b.xi, u))


# ---------------------------------------------------------------------------
# Homology


def homology_ranks(x: ChainComplex, degrees=None):
    """Betti numbers dim ker - dim im by exact rank computation."""
    if degrees is None:
        degrees = x.degrees()
    out = {}
    for k in degrees:
        n = x.dim(k)
        r_in = rank(x.boundary(k + 1)) if x.dim(k + 1) else 0
        r_out = rank(x.boundary(k)) if x.dim(k - 1) else 0
        out[k] = n - r_in - r_out
    return out


# ---------------------------------------------------------------------------
# Seeded random instances (direct sums of cells, conjugated)


def _unimodular(rng: random.Random, n):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(n):
            m[i][k] += c * m[j][k]
    return tuple(tuple(r) for r in m)


def _inv_unimodular(m):
    n = len(m)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[col])]
    return tuple(tuple(v for v in row[n:]) for row in aug)


def random_complex(rng: random.Random, max_deg=3, max_cells=4) -> ChainComplex:
    """Direct sum of spheres and disks in degrees <= max_deg, conjugated
    by unimodular changes of basis so the matrices look arbitrary while
    d.d = 0 holds by construction."""
    dims = {}
    cells = []
    for _ in range(rng.randrange(1, max_cells + 1)):
        k = rng.randrange(0, max_deg + 1)
        if rng.random() < 0.5:
            cells.append(("sphere", k))
            dims[k] = dims.get(k, 0) + 1
        else:
            cells.append(("disk", k))
            dims[k] = dims.get(k, 0) + 1
            dims[k - 1] = dims.get(k - 1, 0) + 1
    d = {}
    pos = {k: 0 for k in dims}
    spots = {}
    for kind, k in cells:
        i = pos[k]
        pos[k] += 1
        if kind == "disk":
            j = pos.get(k - 1, 0)
            pos[k - 1] = j + 1
            spots.setdefault(k, []).append((j, i))
    for k, pairs in spots.items():
        m = [[0] * dims.get(k, 0) for _ in range(dims.get(k - 1, 0))]
        for j, i in pairs:
            m[j][i] = rng.choice([1, -1, 2])
        d[k] = tuple(tuple(r) for r in m)
    base = ChainComplex(dims, d)
    u = {k: _unimodular(rng, n) for k, n in base.dims.items()}
    uinv = {k: _inv_unimodular(m) for k, m in u.items()}
    nd = {}
    for k in list(base.d):
        nd[k] = mmul(u.get(k - 1, eye(base.dim(k - 1))),
                     mmul(base.boundary(k), uinv.get(k, eye(base.dim(k)))))
    return ChainComplex(base.dims, nd)


def random_gmap(rng: random.Random, src: ChainComplex, dst: ChainComplex,
                deg=0) -> GradedMap:
    mats = {}
    for k in src.degrees():
        if dst.dim(k + deg):
            mats[k] = tuple(
                tuple(rng.randrange(-3, 4) for _ in range(src.dim(k)))
                for _ in range(dst.dim(k + deg)))
    return GradedMap(src, dst, deg, mats)


def random_lali(rng: random.Random, max_deg=3,
                base: ChainComplex = None) -> HomologicalLali:
    """B plus contractible disk summands, then a change of basis on the
    total space; the structure maps are transported along it."""
    b = base if base is not None else random_complex(rng, max_deg)
    disks = []
    for _ in range(rng.randrange(1, 3)):
        disks.append(rng.randrange(0, max_deg + 1))
    dims = dict(b.dims)
    for k in disks:
        dims[k] = dims.get(k, 0) + 1
        dims[k - 1] = dims.get(k - 1, 0) + 1
    a_d = {}
    off = {k: b.dim(k) for k in dims}
    extra = {}
    taken = dict(off)
    place = []
    for k in disks:
        i = taken.get(k, 0)
        taken[k] = i + 1
        j = taken.get(k - 1, 0)
        taken[k - 1] = j + 1
        place.append((k, i, j))
    for k in dims:
        m = [[0] * dims[k] for _ in range(dims.get(k - 1, 0))]
        bm = b.boundary(k)
        for r in range(b.dim(k - 1)):
            for c in range(b.dim(k)):
                m[r][c] = bm[r][c]
        a_d[k] = m
    for k, i, j in place:
        a_d[k][j][i] = 1
    a = ChainComplex(dims, {k: tuple(tuple(r) for r in m) for k, m in a_d.items()})
    g_mats = {}
    q_mats = {}
    xi_mats = {}
    for k in a.dims:
        bn, an = b.dim(k), a.dim(k)
        g_mats[k] = tuple(tuple(1 if (r == c and c < bn) else 0 for c in range(an))
                          for r in range(bn))
    for k in b.dims:
        bn, an = b.dim(k), a.dim(k)
        q_mats[k] = tuple(tuple(1 if (r == c) else 0 for c in range(bn))
                          for r in range(an))
    for k, i, j in place:
        m = xi_mats.setdefault(k - 1, [[0] * a.dim(k - 1) for _ in range(a.dim(k))])
        m[i][j] = 1
    xi_mats = {k: tuple(tuple(r) for r in m) for k, m in xi_mats.items()}
    g = GradedMap(a, b, 0, g_mats)
    q = GradedMap(b, a, 0, q_mats)
    xi = GradedMap(a, a, 1, xi_mats)
    u = {k: _unimodular(rng, n) for k, n in a.dims.items()}
    uinv = {k: _inv_unimodular(m) for k, m in u.items()}
    a2 = ChainComplex(a.dims, {
        k: mmul(u.get(k - 1, eye(a.dim(k - 1))),
                mmul(a.boundary(k), uinv.get(k, eye(a.dim(k)))))
        for k in a.d})
    ident = lambda k: eye(a.dim(k))
    g2 = GradedMap(a2, b, 0, {k: mmul(g.block(k), uinv.get(k, ident(k)))
                              for k in a.dims if b.dim(k)})
    q2 = GradedMap(b, a2, 0, {k: mmul(u.get(k, ident(k)), q.block(k))
                              for k in b.dims if a.dim(k)})
    xi2 = GradedMap(a2, a2, 1, {
        k: mmul(u.get(k + 1, ident(k + 1)), mmul(xi.block(k), uinv.get(k, ident(k))))
        for k in a.dims if a.dim(k + 1)})
    return HomologicalLali(g2, q2, xi2)
