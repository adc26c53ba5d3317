import itertools

import pytest

from weakmaps.fincat import (
    CategoryError,
    FinSetArrow,
    FinSetCategory,
    canonical_set,
    coreader_comonad,
    fsarrow,
)
from weakmaps.awfs import RAlgebraArrow, identity_algebra, p_split_epi_awfs, split_epi_awfs
from weakmaps.spans import (
    _api_span,
    canonical_span,
    enumerate_spans,
    compare_hom,
    identity_span,
    kleisli_to_span,
    normalize_span,
    span_compose,
    span_equiv,
    span_maps,
    span_to_kleisli,
    weak_maps_kleisli,
)

C = FinSetCategory()
SPLIT = split_epi_awfs(C)
PSPLIT = p_split_epi_awfs(C, coreader_comonad(C, "st"))

A2 = canonical_set(2, "a")
B2 = canonical_set(2, "b")


def all_spans(awfs, a_labels, b_labels, max_apex):
    yield from enumerate_spans(awfs, a_labels, b_labels, max_apex)


def test_phi_routes_agree_on_all_small_algebras():
    for aw in (SPLIT, PSPLIT):
        wm = weak_maps_kleisli(aw)
        for s in all_spans(aw, A2, B2, 3):
            assert wm.kleisli.eq(wm.phi(s.left), wm.phi_by_filler(s.left))


def test_phi_section_property():
    for aw in (SPLIT, PSPLIT):
        wm = weak_maps_kleisli(aw)
        for s in all_spans(aw, A2, B2, 2):
            ph = wm.phi(s.left)
            lhs = C.compose(s.left.arrow, ph.under)
            assert lhs == wm.q.counit(A2)


def test_phi_of_identity_algebra_is_counit():
    for aw in (SPLIT, PSPLIT):
        wm = weak_maps_kleisli(aw)
        ph = wm.phi(identity_algebra(aw, A2))
        assert ph.under == wm.q.counit(A2)
        assert wm.kleisli.eq(ph, wm.kleisli.identity(A2))


def test_phi_is_functorial_into_kleisli():
    # composite algebras map to co-Kleisli composites
    aw = SPLIT
    wm = weak_maps_kleisli(aw)
    b_labels = ("b0",)
    c_labels = ("c0",)
    for s in all_spans(aw, A2, b_labels, 2):
        af = s.left  # algebra on X -> A2; use arrow into A2
    # build algebras explicitly: f: A2 -> b, g: b -> c surjections with sections
    f = fsarrow(A2, b_labels, {"a0": "b0", "a1": "b0"})
    alg_f = RAlgebraArrow(aw, f, fsarrow(b_labels, A2, {"b0": "a1"}))
    g = fsarrow(b_labels, c_labels, {"b0": "c0"})
    alg_g = RAlgebraArrow(aw, g, fsarrow(c_labels, b_labels, {"c0": "b0"}))
    from weakmaps.awfs import r_algebra_compose
    comp = r_algebra_compose(alg_g, alg_f)
    lhs = wm.phi(comp)
    rhs = wm.kleisli.compose(wm.phi(alg_f), wm.phi(alg_g))
    assert wm.kleisli.eq(lhs, rhs)


def test_phi_functorial_exhaustive_coreader():
    aw = PSPLIT
    wm = weak_maps_kleisli(aw)
    from weakmaps.awfs import r_algebra_compose
    bb = ("b0",)
    cc = ("c0",)
    pb = aw.comonad.functor.obj(bb)
    pc = aw.comonad.functor.obj(cc)
    for fidx in itertools.product(range(1), repeat=2):
        f = FinSetArrow(A2, bb, fidx)
        for wfi in itertools.product(range(2), repeat=len(pb)):
            alg_f = RAlgebraArrow(aw, f, FinSetArrow(pb, A2, wfi))
            if not alg_f.validate().ok:
                continue
            for g, wg in [(FinSetArrow(bb, cc, (0,)), FinSetArrow(pc, bb, (0, 0)))]:
                alg_g = RAlgebraArrow(aw, g, wg)
                assert alg_g.validate().ok
                comp = r_algebra_compose(alg_g, alg_f)
                lhs = wm.phi(comp)
                rhs = wm.kleisli.compose(wm.phi(alg_f), wm.phi(alg_g))
                assert wm.kleisli.eq(lhs, rhs)


def test_kleisli_span_roundtrip_exact():
    for aw in (SPLIT, PSPLIT):
        wm = weak_maps_kleisli(aw)
        qa = wm.q.functor.obj(A2)
        for idx in itertools.product(range(2), repeat=len(qa)):
            u = wm.kleisli.hom(A2, B2)[0].__class__(A2, B2, FinSetArrow(qa, B2, idx))
            s = kleisli_to_span(wm, u)
            assert s.left.validate().ok
            back = span_to_kleisli(wm, s)
            assert wm.kleisli.eq(back, u)


def test_identity_span_maps_to_kleisli_identity():
    for aw in (SPLIT, PSPLIT):
        wm = weak_maps_kleisli(aw)
        s = identity_span(aw, A2)
        assert wm.kleisli.eq(span_to_kleisli(wm, s), wm.kleisli.identity(A2))


def test_span_compose_matches_kleisli_compose_split():
    aw = SPLIT
    wm = weak_maps_kleisli(aw)
    spans_ab = list(all_spans(aw, A2, B2, 2))
    spans_ba = list(all_spans(aw, B2, A2, 2))
    n = 0
    for s in spans_ab:
        ks = span_to_kleisli(wm, s)
        for t in spans_ba:
            kt = span_to_kleisli(wm, t)
            st = span_compose(s, t)
            assert st.left.validate().ok
            lhs = span_to_kleisli(wm, st)
            rhs = wm.kleisli.compose(kt, ks)
            assert wm.kleisli.eq(lhs, rhs)
            n += 1
    assert n == 64  # 8 spans each way at apex <= 2, paired exhaustively


def test_span_compose_matches_kleisli_compose_coreader():
    aw = PSPLIT
    wm = weak_maps_kleisli(aw)
    a1, b1 = ("a0",), ("b0", "b1")
    spans_ab = list(all_spans(aw, a1, b1, 2))
    spans_ba = list(all_spans(aw, b1, a1, 2))[:40]
    for s in spans_ab[:40]:
        ks = span_to_kleisli(wm, s)
        for t in spans_ba:
            st = span_compose(s, t)
            lhs = span_to_kleisli(wm, st)
            rhs = wm.kleisli.compose(span_to_kleisli(wm, t), ks)
            assert wm.kleisli.eq(lhs, rhs)


def test_identity_span_is_unit_for_composition_up_to_kappa():
    aw = SPLIT
    wm = weak_maps_kleisli(aw)
    for s in all_spans(aw, A2, B2, 2):
        left_unit = span_compose(identity_span(aw, A2), s)
        right_unit = span_compose(s, identity_span(aw, B2))
        target = span_to_kleisli(wm, s)
        assert wm.kleisli.eq(span_to_kleisli(wm, left_unit), target)
        assert wm.kleisli.eq(span_to_kleisli(wm, right_unit), target)
        # right unit does not even change the span up to iso
        assert normalize_span(right_unit) == normalize_span(s)


def test_normalize_is_idempotent_and_label_free():
    for s in all_spans(SPLIT, A2, B2, 3):
        n = normalize_span(s)
        assert normalize_span(n) == n
        # permuting apex labels does not change the normal form
        k = len(s.apex)
        for perm in itertools.permutations(range(k)):
            inv = [0] * k
            for i, p in enumerate(perm):
                inv[p] = i
            l2 = tuple(s.left.arrow.idx[inv[i]] for i in range(k))
            r2 = tuple(s.right.idx[inv[i]] for i in range(k))
            w2 = tuple(perm[j] for j in s.left.witness.idx)
            s2 = _api_span(SPLIT, A2, B2, k, l2, w2, r2)
            assert normalize_span(s2) == n


def test_span_maps_compose_and_preserve_kappa():
    aw = SPLIT
    wm = weak_maps_kleisli(aw)
    spans = list(all_spans(aw, A2, B2, 2))
    found = 0
    for s in spans:
        ks = span_to_kleisli(wm, s).under
        for t in spans:
            for r in span_maps(s, t):
                found += 1
                assert span_to_kleisli(wm, t).under == ks
    assert found > 0


def test_span_equiv_equal_and_one_step():
    aw = SPLIT
    wm = weak_maps_kleisli(aw)
    s = next(iter(all_spans(aw, A2, B2, 2)))
    res = span_equiv(wm, s, s)
    assert res.kind == "equal"
    # a span and its canonical replacement are one zigzag apart or less
    c = canonical_span(wm, s)
    res = span_equiv(wm, s, c)
    assert res.equivalent
    assert res.zigzag.verify()


def test_span_equiv_canonical_domination_two_step():
    aw = SPLIT
    wm = weak_maps_kleisli(aw)
    # two distinct one-point spans with equal kappa but no direct map
    # s picks apex point mapping to (a0, b0), t to (a0, b1)? ensure kappa equal:
    # need r[sigma] equal; use two-point apexes differing in an unused point
    s = _api_span(aw, A2, B2, 2, (0, 1), (0, 1), (0, 0))
    t = _api_span(aw, A2, B2, 2, (0, 1), (0, 1), (0, 1))
    # kappa(s) = (0,0), kappa(t) = (0,1): different, must NOT be equivalent
    res = span_equiv(wm, s, t)
    assert res.kind == "not-found-within-bounds"
    # same kappa, but the extra points have signatures the other span
    # lacks, so no direct map exists in either direction
    s2 = _api_span(aw, A2, B2, 3, (0, 1, 0), (0, 1), (0, 0, 1))
    t2 = _api_span(aw, A2, B2, 3, (0, 1, 1), (0, 1), (0, 0, 1))
    assert not span_maps(s2, t2) and not span_maps(t2, s2)
    res = span_equiv(wm, s2, t2)
    assert res.equivalent
    assert res.kind == "connected"
    assert res.zigzag.verify()
    assert res.zigzag.dirs == ("bwd", "fwd")  # s2 <- canonical -> t2


def test_span_equiv_respects_tight_bounds():
    aw = SPLIT
    wm = weak_maps_kleisli(aw)
    s2 = _api_span(aw, A2, B2, 3, (0, 1, 0), (0, 1), (0, 0, 1))
    t2 = _api_span(aw, A2, B2, 3, (0, 1, 1), (0, 1), (0, 0, 1))
    assert span_equiv(wm, s2, t2, zigzag_bound=1).kind == "not-found-within-bounds"
    assert span_equiv(wm, s2, t2, apex_bound=1).kind == "not-found-within-bounds"


def test_span_equiv_rejects_boundary_mismatch():
    aw = SPLIT
    wm = weak_maps_kleisli(aw)
    s = identity_span(aw, A2)
    t = identity_span(aw, B2)
    with pytest.raises(CategoryError):
        span_equiv(wm, s, t)


def test_compare_hom_split_counts():
    cmp = compare_hom(SPLIT, a_size=2, b_size=2, apex_bound=4)
    assert cmp.report.ok, cmp.report.failures()[:4]
    assert cmp.kleisli_count == 4
    assert cmp.span_class_count == 4
    assert cmp.span_count > 500
    assert all(c.count > 0 for c in cmp.classes)


def test_compare_hom_coreader_counts():
    cmp = compare_hom(PSPLIT, a_size=2, b_size=2, apex_bound=4, full_upto=2)
    assert cmp.report.ok, cmp.report.failures()[:4]
    assert cmp.kleisli_count == 16
    assert cmp.span_class_count == 16


def test_compare_hom_classes_are_balanced_split():
    # the class census is label-symmetric in B, so swapping b0/b1 permutes
    # classes without changing sizes
    cmp = compare_hom(SPLIT, a_size=2, b_size=2, apex_bound=4)
    sizes = {}
    for cl in cmp.classes:
        swapped = tuple(1 - x for x in cl.kappa)
        sizes[cl.kappa] = cl.count
    for cl in cmp.classes:
        swapped = tuple(1 - x for x in cl.kappa)
        assert sizes[swapped] == cl.count
