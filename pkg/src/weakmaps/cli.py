"""Batch driver: load instance files, run validation suites, emit reports.

Output is deterministic: a header naming the subcommand, the effective
configuration and the seed, then one line per checked equation, optional
tables, and a summary.  Exit status is a pure function of the report:
0 with no FAIL lines (TRUNCATION-EXEMPT does not fail), 1 otherwise,
and 2 for schema or usage errors, printed to stderr with no partial
report.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys

from . import schemas
from .awfs import p_split_epi_awfs, split_epi_awfs, validate_awfs
from .bar import (
    BarCalculus,
    BarComplexData,
    bar_lali,
    codescent,
    lift_ulali,
    free_ulali_factor,
    nonequivariant_twist,
    normalized_level_dims,
    random_weak,
    thickened_lali,
    validate_bar,
    weak_add,
    weak_compose,
    weak_differential,
    weak_identity,
    weak_smul,
)
from .bar import BarError
from .dg import DgError, homology_ranks, is_chain_map
from .fincat import (
    CategoryError,
    FinSetCategory,
    SchemaError,
    canonical_set,
    coreader_comonad,
    finset_fragment,
    identity_comonad,
    validate_category,
    validate_comonad,
    validate_monad,
)
from .report import FAIL, CheckReport
from .spans import (
    canonical_span,
    compare_hom,
    enumerate_spans,
    span_equiv,
    weak_maps_kleisli,
)


def _positive(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


def _size(text):
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("expected a size >= 0")
    return n


def _fmt_dims(d) -> str:
    if not d:
        return "{}"
    return "{" + ", ".join(f"{k}: {d[k]}" for k in sorted(d)) + "}"


def _comonad_spec(cat, spec):
    if spec == "identity":
        return identity_comonad(cat)
    m = re.fullmatch(r"coreader:S=(\d+)", spec)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise SchemaError("--comonad: coreader needs |S| >= 1")
        return coreader_comonad(cat, canonical_set(n, "s"))
    raise SchemaError(
        f"--comonad: unknown spec {spec!r} (expected identity or coreader:S=N)")


def _load_dg_pair(ns):
    """Algebra and module from --dgalgebra/--builtin and --dgmodule/--module."""
    if ns.dgalgebra:
        alg = schemas.load_algebra(schemas.load_file(ns.dgalgebra))
    else:
        alg = schemas.load_algebra({"kind": ns.builtin}, "--builtin")
    if ns.dgmodule:
        mod = schemas.load_module(schemas.load_file(ns.dgmodule), alg)
    else:
        mod = schemas.load_module({"kind": ns.module}, alg, "--module")
    return alg, mod


def _dg_config(ns):
    cfg = {}
    if ns.dgalgebra:
        cfg["dgalgebra"] = ns.dgalgebra
    else:
        cfg["builtin"] = ns.builtin
    if ns.dgmodule:
        cfg["dgmodule"] = ns.dgmodule
    else:
        cfg["module"] = ns.module
    return cfg


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns (config, report, tables) where tables
# is a list of (title, [(key, value), ...]) pairs


def _run_validate(ns):
    rep = CheckReport()
    cfg = {}
    cat = None
    if ns.category:
        cfg["category"] = ns.category
        cat = schemas.load_category(schemas.load_file(ns.category))
        validate_category(cat, cat.objects, rep)
    for kind, path, load, check in (
            ("comonad", ns.comonad, schemas.load_comonad, validate_comonad),
            ("monad", ns.monad, schemas.load_monad, validate_monad)):
        if not path:
            continue
        cfg[kind] = path
        data = schemas.load_file(path)
        if cat is not None:
            eff = load(data, cat)
            check(cat, eff, cat.objects, rep)
        else:
            cfg["finset-max"] = str(ns.finset_max)
            fin = FinSetCategory()
            eff = load(data, fin)
            check(fin, eff, finset_fragment(ns.finset_max), rep)
    alg = None
    if ns.dgalgebra:
        cfg["dgalgebra"] = ns.dgalgebra
        alg = schemas.load_algebra(schemas.load_file(ns.dgalgebra))
        alg.validate(rep)
    if ns.dgmodule:
        if alg is None:
            raise SchemaError("--dgmodule needs --dgalgebra for the action")
        cfg["dgmodule"] = ns.dgmodule
        schemas.load_module(schemas.load_file(ns.dgmodule), alg).validate(rep)
    if ns.complex:
        cfg["complex"] = ns.complex
        schemas.load_complex(schemas.load_file(ns.complex))
        # the constructor already proved d.d = 0
        rep.record("complex.boundary.sq", os.path.basename(ns.complex), True)
    if ns.gradedmap:
        cfg["gradedmap"] = ns.gradedmap
        g = schemas.load_gradedmap(schemas.load_file(ns.gradedmap))
        sub = os.path.basename(ns.gradedmap)
        rep.record("gradedmap.shape", sub, True)
        rep.record("gradedmap.chain", sub, is_chain_map(g))
    if not cfg:
        raise SchemaError("validate: no input files given")
    return cfg, rep, []


def _run_awfs_check(ns):
    rep = CheckReport()
    cat = FinSetCategory()
    cfg = {"builtin": ns.builtin, "finset-max": str(ns.finset_max)}
    if ns.builtin == "splitepi":
        aw = split_epi_awfs(cat)
    else:
        cfg["comonad"] = ns.comonad
        aw = p_split_epi_awfs(cat, _comonad_spec(cat, ns.comonad))
    validate_awfs(aw, ns.finset_max, rep)
    return cfg, rep, []


def _run_weakmaps_compare(ns):
    rep = CheckReport()
    cat = FinSetCategory()
    cfg = {"comonad": ns.comonad, "A": str(ns.a_size), "B": str(ns.b_size),
           "bound": str(ns.bound), "zigzag": str(ns.zigzag)}
    aw = p_split_epi_awfs(cat, _comonad_spec(cat, ns.comonad))
    res = compare_hom(aw, ns.a_size, ns.b_size, ns.bound, report=rep)
    tables = [("counts", [
        ("co-Kleisli arrows", str(res.kleisli_count)),
        ("bounded spans", str(res.span_count)),
        ("span classes", str(res.span_class_count)),
    ])]
    tables.append(("classes", [(f"kappa={c.kappa}", f"count={c.count}")
                               for c in res.classes]))
    if ns.zigzag:
        wm = weak_maps_kleisli(aw)
        a = canonical_set(ns.a_size, "a")
        b = canonical_set(ns.b_size, "b")
        bad = tot = 0
        for s in enumerate_spans(aw, a, b, ns.bound):
            tot += 1
            e = span_equiv(wm, s, canonical_span(wm, s),
                           apex_bound=ns.bound, zigzag_bound=ns.zigzag)
            if not e.equivalent:
                bad += 1
        rep.record("canonical.reach", f"{tot} spans within apex<={ns.bound}",
                   bad == 0, f"{bad} unreachable", "0")
    return cfg, rep, tables


def _run_bar_resolve(ns):
    rep = CheckReport()
    alg, mod = _load_dg_pair(ns)
    cfg = _dg_config(ns)
    cfg["trunc"] = str(ns.trunc)
    alg.validate(rep)
    mod.validate(rep)
    if not rep.ok:
        return cfg, rep, []
    bar = BarComplexData(BarCalculus(mod, ns.trunc))
    validate_bar(bar, rep)
    t = codescent(bar)
    t.validate(rep)
    bar_lali(t, rep)
    table, _ = normalized_level_dims(t, rep)
    tables = [("levels", [(f"dim N(X_{n})", _fmt_dims(d))
                          for n, d in enumerate(table)])]
    tables.append(("total", [("dims", _fmt_dims(t.total.dims))]))
    hom = homology_ranks(t.total, range(ns.trunc))
    tables.append(("homology", [(f"H_{k}", str(hom[k]))
                                for k in range(ns.trunc)]))
    return cfg, rep, tables


def _run_dg_check(ns):
    rep = CheckReport()
    alg, mod = _load_dg_pair(ns)
    cfg = _dg_config(ns)
    cfg["trunc"] = str(ns.trunc)
    cfg["trials"] = str(ns.trials)
    alg.validate(rep)
    mod.validate(rep)
    if not rep.ok:
        return cfg, rep, []
    L = ns.trunc
    one = weak_identity(mod, L)
    for i in range(ns.trials):
        trial_seed = ns.seed * 1000003 + i
        rng = random.Random(trial_seed)
        sub = f"{alg.name}/{mod.name} seed={trial_seed}"
        f = random_weak(rng, mod, mod, rng.randrange(-1, 2), L)
        g = random_weak(rng, mod, mod, rng.randrange(-1, 2), L)
        h = random_weak(rng, mod, mod, rng.randrange(-1, 2), L)
        rep.record("dg.ddzero", sub,
                   weak_differential(weak_differential(f)).is_zero())
        lhs = weak_differential(weak_compose(g, f))
        rhs = weak_add(weak_compose(weak_differential(g), f),
                       weak_smul((-1) ** (g.deg % 2),
                                 weak_compose(g, weak_differential(f))))
        rep.eq("dg.leibniz", sub, lhs, rhs)
        rep.eq("dg.assoc", sub,
               weak_compose(h, weak_compose(g, f)),
               weak_compose(weak_compose(h, g), f))
        rep.record("dg.unit", sub,
                   weak_compose(one, f) == f and weak_compose(f, one) == f)
    return cfg, rep, []


def _demo_lali(ns, alg, mod):
    """The built-in acyclic fibration onto the module, twisted whenever
    the module carrier is the algebra itself (so higher coherence
    components are nonzero)."""
    twist = None
    if not ns.plain and mod.cx == alg.cx:
        twist = nonequivariant_twist(alg)
    return thickened_lali(mod, twist=twist), ("plain" if twist is None
                                              else "twisted")


def _load_lali(ns, alg, mod):
    cfg_extra = {}
    if ns.lali:
        cfg_extra["lali"] = ns.lali
        parts = schemas.load_lali(schemas.load_file(ns.lali), alg, mod)
    else:
        parts, shape = _demo_lali(ns, alg, mod)
        cfg_extra["demo"] = shape
    return parts, cfg_extra


def _run_lift_lali(ns):
    rep = CheckReport()
    alg, mod = _load_dg_pair(ns)
    cfg = _dg_config(ns)
    cfg["trunc"] = str(ns.trunc)
    (modB, g, f0, eps0), extra = _load_lali(ns, alg, mod)
    cfg.update(extra)
    f, eps, _ = lift_ulali(modB, mod, g, f0, eps0, ns.trunc, rep)
    tables = [("components", [
        ("f nonzero levels",
         str([n for n, c in enumerate(f.comps) if not c.is_zero()])),
        ("eps nonzero levels",
         str([n for n, c in enumerate(eps.comps) if not c.is_zero()])),
    ])]
    return cfg, rep, tables


def _run_factor_ulali(ns):
    rep = CheckReport()
    alg, mod = _load_dg_pair(ns)
    cfg = _dg_config(ns)
    cfg["trunc"] = str(ns.trunc)
    (modB, g, f0, eps0), extra = _load_lali(ns, alg, mod)
    cfg.update(extra)
    t = codescent(BarComplexData(BarCalculus(mod, ns.trunc)))
    h, _ = free_ulali_factor(t, modB, g, f0, eps0, rep)
    tables = [("comparison", [
        ("chain map", str(is_chain_map(h))),
        ("nonzero", str(not h.is_zero())),
    ])]
    return cfg, rep, tables


# ---------------------------------------------------------------------------
# Argument parsing and report emission


def _add_common(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for randomized property suites (default 0)")


def _add_dg_inputs(p, default_module):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--dgalgebra", metavar="FILE",
                   help="dg-algebra instance file")
    g.add_argument("--builtin",
                   choices=("rationals", "dual_numbers", "exterior"),
                   default="dual_numbers", help="built-in algebra")
    m = p.add_mutually_exclusive_group()
    m.add_argument("--dgmodule", metavar="FILE", help="dg-module instance file")
    m.add_argument("--module", choices=("ground", "free"),
                   default=default_module, help="built-in module")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="weakmaps",
        description="Verification workbench for algebraic weak factorisation"
                    " systems, weak-map categories, and truncated bar"
                    " resolutions, all in exact arithmetic.")
    sub = ap.add_subparsers(dest="group", required=True)

    v = sub.add_parser("validate", help="validate instance files")
    _add_common(v)
    v.add_argument("--category", metavar="FILE")
    v.add_argument("--comonad", metavar="FILE")
    v.add_argument("--monad", metavar="FILE")
    v.add_argument("--dgalgebra", metavar="FILE")
    v.add_argument("--dgmodule", metavar="FILE")
    v.add_argument("--complex", metavar="FILE")
    v.add_argument("--gradedmap", metavar="FILE")
    v.add_argument("--finset-max", type=_positive, default=2,
                   help="fragment size for builtin (co)monads (default 2)")
    v.set_defaults(handler=_run_validate, tool="validate")

    aw = sub.add_parser("awfs", help="factorisation system suites")
    aws = aw.add_subparsers(dest="action", required=True)
    c = aws.add_parser("check", help="exhaustive law suite on a fragment")
    _add_common(c)
    c.add_argument("--builtin", choices=("splitepi", "psplitepi"),
                   default="splitepi")
    c.add_argument("--comonad", default="coreader:S=2",
                   help="comonad spec for psplitepi (identity|coreader:S=N)")
    c.add_argument("--finset-max", type=_positive, default=3)
    c.set_defaults(handler=_run_awfs_check, tool="awfs check")

    wm = sub.add_parser("weakmaps", help="weak-map category suites")
    wms = wm.add_subparsers(dest="action", required=True)
    c = wms.add_parser("compare", help="census of both hom presentations")
    _add_common(c)
    c.add_argument("--comonad", default="coreader:S=2")
    c.add_argument("--A", dest="a_size", type=_size, default=1,
                   help="source size (default 1)")
    c.add_argument("--B", dest="b_size", type=_size, default=2,
                   help="target size (default 2)")
    c.add_argument("--bound", type=_positive, default=6,
                   help="apex bound for span enumeration (default 6)")
    c.add_argument("--zigzag", type=_size, default=4,
                   help="zigzag depth for canonical reachability; 0 skips")
    c.set_defaults(handler=_run_weakmaps_compare, tool="weakmaps compare")

    br = sub.add_parser("bar", help="bar resolution suites")
    brs = br.add_subparsers(dest="action", required=True)
    c = brs.add_parser("resolve", help="codescent dims and homology ranks")
    _add_common(c)
    _add_dg_inputs(c, "ground")
    c.add_argument("--trunc", type=_positive, default=5,
                   help="truncation level L (default 5)")
    c.set_defaults(handler=_run_bar_resolve, tool="bar resolve")

    dg = sub.add_parser("dg", help="coherent-map algebra suites")
    dgs = dg.add_subparsers(dest="action", required=True)
    c = dgs.add_parser("check", help="seeded random property suites")
    _add_common(c)
    _add_dg_inputs(c, "ground")
    c.add_argument("--trunc", type=_positive, default=4)
    c.add_argument("--trials", type=_positive, default=25,
                   help="random instances per law (default 25)")
    c.set_defaults(handler=_run_dg_check, tool="dg check")

    li = sub.add_parser("lift", help="coherent lifting")
    lis = li.add_subparsers(dest="action", required=True)
    c = lis.add_parser("lali", help="lift a strict contraction to a"
                                    " coherent one")
    _add_common(c)
    _add_dg_inputs(c, "free")
    c.add_argument("--trunc", type=_positive, default=4)
    c.add_argument("--lali", metavar="FILE",
                   help="lali instance file (default: built-in fibration)")
    c.add_argument("--plain", action="store_true",
                   help="keep the built-in fibration untwisted")
    c.set_defaults(handler=_run_lift_lali, tool="lift lali")

    fa = sub.add_parser("factor", help="factorisation through the resolution")
    fas = fa.add_subparsers(dest="action", required=True)
    c = fas.add_parser("ulali", help="strict comparison map out of the"
                                     " resolution")
    _add_common(c)
    _add_dg_inputs(c, "free")
    c.add_argument("--trunc", type=_positive, default=4)
    c.add_argument("--lali", metavar="FILE",
                   help="lali instance file (default: built-in fibration)")
    c.add_argument("--plain", action="store_true",
                   help="keep the built-in fibration untwisted")
    c.set_defaults(handler=_run_factor_ulali, tool="factor ulali")
    return ap


def _emit_text(out, tool, seed, cfg, rep, tables):
    out.write(f"# tool: weakmaps {tool}\n")
    pairs = " ".join(f"{k}={cfg[k]}" for k in sorted(cfg))
    out.write(f"# config: {pairs}\n")
    out.write(f"# seed: {seed}\n")
    for line in rep.lines():
        out.write(line + "\n")
    for title, rows in tables:
        out.write(f"TABLE {title}\n")
        for k, val in rows:
            out.write(f"  {k} = {val}\n")
    out.write(rep.summary_line() + "\n")


def _emit_json(out, tool, seed, cfg, rep, tables):
    doc = {
        "tool": f"weakmaps {tool}",
        "config": cfg,
        "seed": seed,
        "report": rep.to_json(),
        "tables": {title: {k: val for k, val in rows}
                   for title, rows in tables},
    }
    out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg, rep, tables = ns.handler(ns)
    except SchemaError as e:
        print(f"schema error: {e}", file=sys.stderr)
        return 2
    except (BarError, CategoryError, DgError) as e:
        # structurally unusable input that got past the schema layer
        print(f"input error: {e}", file=sys.stderr)
        return 2
    cfg["format"] = ns.format
    if ns.format == "json":
        _emit_json(sys.stdout, ns.tool, ns.seed, cfg, rep, tables)
    else:
        _emit_text(sys.stdout, ns.tool, ns.seed, cfg, rep, tables)
    return 0 if rep.counts()[FAIL] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
