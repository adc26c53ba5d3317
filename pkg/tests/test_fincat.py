import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakmaps.fincat import (
    CategoryError,
    FinSetArrow,
    FinSetCategory,
    SchemaError,
    TableCategory,
    canonical_set,
    co_kleisli,
    compute_coproduct,
    coreader_comonad,
    empty_sum_strip,
    exception_monad,
    finset_fragment,
    fsarrow,
    identity_comonad,
    identity_monad,
    validate_category,
    validate_comonad,
    validate_monad,
)

C = FinSetCategory()


def test_compose_and_identity():
    f = fsarrow("ab", "xyz", {"a": "z", "b": "x"})
    g = fsarrow("xyz", "pq", {"x": "p", "y": "q", "z": "q"})
    gf = C.compose(g, f)
    assert gf("a") == "q" and gf("b") == "p"
    assert C.compose(f, C.identity("ab")) == f
    assert C.compose(C.identity("xyz"), f) == f


def test_compose_rejects_mismatched_endpoints():
    f = fsarrow("ab", "xy", {"a": "x", "b": "y"})
    with pytest.raises(CategoryError):
        C.compose(f, f)


def test_hom_is_lex_ordered_by_graph():
    homs = C.hom("ab", "xy")
    assert len(homs) == 4
    assert [h.idx for h in homs] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert C.hom("a", ()) == []
    assert C.hom((), ()) == [FinSetArrow((), (), ())]


def test_coproduct_is_tagged_union_with_jointly_epic_injections():
    cop = C.coproduct("ab", "bc")
    assert cop.obj == ("L:a", "L:b", "R:b", "R:c")
    covered = set(cop.inl.idx) | set(cop.inr.idx)
    assert covered == set(range(4))
    f = fsarrow("ab", "uv", {"a": "u", "b": "v"})
    g = fsarrow("bc", "uv", {"b": "v", "c": "v"})
    h = cop.copair(f, g)
    assert C.compose(h, cop.inl) == f
    assert C.compose(h, cop.inr) == g
    # copairing is unique: any other arrow out of the union disagrees on a leg
    others = [
        k for k in C.hom(cop.obj, "uv")
        if C.compose(k, cop.inl) == f and C.compose(k, cop.inr) == g
    ]
    assert others == [h]


def test_pullback_elements_and_mediator():
    f = fsarrow("xy", "s", {"x": "s", "y": "s"})
    g = fsarrow("uv", "s", {"u": "s", "v": "s"})
    pb = C.pullback(f, g)
    assert pb.obj == ("(x,u)", "(x,v)", "(y,u)", "(y,v)")
    u = fsarrow("w", "xy", {"w": "y"})
    v = fsarrow("w", "uv", {"w": "u"})
    k = pb.mediate(u, v)
    assert C.compose(pb.p1, k) == u and C.compose(pb.p2, k) == v
    assert k("w") == "(y,u)"


def test_pullback_mediator_rejects_noncommuting_cone():
    f = fsarrow("xy", "st", {"x": "s", "y": "t"})
    g = fsarrow("u", "st", {"u": "s"})
    pb = C.pullback(f, g)
    bad_u = fsarrow("w", "xy", {"w": "y"})
    v = fsarrow("w", "u", {"w": "u"})
    with pytest.raises(CategoryError, match="does not commute"):
        pb.mediate(bad_u, v)


def test_category_laws_on_small_fragment():
    rep = validate_category(C, finset_fragment(2))
    assert rep.ok, rep.failures()


def test_coreader_comonad_laws():
    p = coreader_comonad(C, "st")
    rep = validate_comonad(C, p, finset_fragment(2))
    assert rep.ok, rep.failures()
    # counit projects, comultiplication duplicates the tag
    eps = p.counit(("a", "b"))
    assert eps("(a,s)") == "a" and eps("(b,t)") == "b"
    dup = p.comult(("a",))
    assert dup("(a,t)") == "((a,t),t)"


def test_coreader_comonad_with_corrupted_comult_fails_coassoc():
    p = coreader_comonad(C, "st")
    good = p.comult

    def bad(x):
        d = good(x)
        if len(d.idx) >= 2:
            lst = list(d.idx)
            # send the second element to the diagonal of the *other* tag
            lst[1] = lst[0]
            return FinSetArrow(d.dom, d.cod, tuple(lst))
        return d

    p.comult = bad
    rep = validate_comonad(C, p, [("a", "b")])
    assert not rep.ok
    names = {c.name for c in rep.failures()}
    assert names & {"comonad.coassoc", "comonad.counit.left", "comonad.counit.right"}


def test_exception_monad_laws_and_collision():
    t = exception_monad(C, ("err",))
    rep = validate_monad(C, t, finset_fragment(2))
    assert rep.ok, rep.failures()
    with pytest.raises(CategoryError, match="collide"):
        t.functor.obj(("err", "x"))


def test_identity_comonad_and_monad_are_lawful():
    assert validate_comonad(C, identity_comonad(C), finset_fragment(2)).ok
    assert validate_monad(C, identity_monad(C), finset_fragment(2)).ok


def test_co_kleisli_hom_count_and_identity():
    # hom_kl(A,B) = functions AxS -> B: with |A|=1, |S|=2, |B|=2 that is 2^2 = 4
    p = coreader_comonad(C, "st")
    kl = co_kleisli(C, p)
    homs = kl.hom(("a",), ("x", "y"))
    assert len(homs) == 4
    i = kl.identity(("a",))
    for f in homs:
        assert kl.eq(kl.compose(f, kl.identity(f.dom)), f)
        assert kl.eq(kl.compose(kl.identity(f.cod), f), f)
    assert i.under == p.counit(("a",))


def test_co_kleisli_associativity_exhaustive_small():
    p = coreader_comonad(C, "s")
    kl = co_kleisli(C, p)
    a, b, c, d = ("a",), ("b", "b2"), ("c",), ("d", "d2")
    for f in kl.hom(a, b):
        for g in kl.hom(b, c):
            for h in kl.hom(c, d):
                assert kl.eq(
                    kl.compose(kl.compose(h, g), f),
                    kl.compose(h, kl.compose(g, f)),
                )


def test_co_kleisli_cofree_is_functorial():
    p = coreader_comonad(C, "st")
    kl = co_kleisli(C, p)
    f = fsarrow("ab", "xy", {"a": "x", "b": "y"})
    g = fsarrow("xy", "pq", {"x": "q", "y": "p"})
    assert kl.eq(kl.cofree(C.compose(g, f)), kl.compose(kl.cofree(g), kl.cofree(f)))
    assert kl.eq(kl.cofree(C.identity("ab")), kl.identity(("a", "b")))


def test_cofree_embedding_is_faithful_for_coreader():
    # the counit of the coreader comonad is split epi, so distinct base
    # arrows stay distinct after precomposition with it
    p = coreader_comonad(C, "st")
    kl = co_kleisli(C, p)
    seen = {}
    for h in C.hom(("a", "b"), ("x", "y")):
        img = kl.cofree(h)
        assert img.under not in seen
        seen[img.under] = h


def test_empty_sum_strip_is_iso():
    strip, into = empty_sum_strip(C, ("a", "b"))
    assert C.compose(strip, into) == C.identity(("a", "b"))
    assert C.compose(into, strip) == C.identity(strip.dom)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(min_value=0, max_value=4),
    m=st.integers(min_value=1, max_value=4),
    k=st.integers(min_value=1, max_value=4),
    data=st.data(),
)
def test_random_composites_are_pointwise_composition(n, m, k, data):
    a, b, c = canonical_set(n, "a"), canonical_set(m, "b"), canonical_set(k, "c")
    fi = data.draw(st.tuples(*[st.integers(0, m - 1)] * n))
    gi = data.draw(st.tuples(*[st.integers(0, k - 1)] * m))
    f, g = FinSetArrow(a, b, fi), FinSetArrow(b, c, gi)
    gf = C.compose(g, f)
    for x in a:
        assert gf(x) == g(f(x))


# --- table backend ---------------------------------------------------------

WALKING_ARROW = {
    "objects": ["0", "1"],
    "arrows": [
        {"id": "i0", "dom": "0", "cod": "0"},
        {"id": "i1", "dom": "1", "cod": "1"},
        {"id": "u", "dom": "0", "cod": "1"},
    ],
    "identities": {"0": "i0", "1": "i1"},
    "compose": [
        ["i0", "i0", "i0"],
        ["i1", "i1", "i1"],
        ["u", "i0", "u"],
        ["i1", "u", "u"],
    ],
}


def test_table_category_roundtrip_and_laws():
    cat = TableCategory.from_dict(WALKING_ARROW)
    rep = validate_category(cat, ["0", "1"])
    assert rep.ok, rep.failures()
    assert cat.hom("0", "1") == ["u"]
    assert cat.compose("i1", "u") == "u"


def test_table_category_corrupted_compose_is_reported():
    # composing u : 0 -> 1 with itself is ill-typed
    bad = {**WALKING_ARROW, "compose": WALKING_ARROW["compose"][:3] + [["u", "u", "u"]]}
    with pytest.raises(SchemaError, match=r"\$\.compose\[3\].*not composable"):
        TableCategory.from_dict(bad)
    # composable, but the claimed composite has the wrong endpoints
    wrong = {**WALKING_ARROW, "compose": WALKING_ARROW["compose"][:3] + [["i1", "u", "i1"]]}
    with pytest.raises(SchemaError, match=r"\$\.compose\[3\].*endpoints"):
        TableCategory.from_dict(wrong)


def test_table_category_unit_violation_detected_by_validator():
    # endpoint-consistent but unital-law-breaking table: compose through a
    # second endomorphism
    data = {
        "objects": ["0"],
        "arrows": [
            {"id": "i0", "dom": "0", "cod": "0"},
            {"id": "e", "dom": "0", "cod": "0"},
        ],
        "identities": {"0": "i0"},
        "compose": [
            ["i0", "i0", "i0"],
            ["e", "i0", "i0"],  # should be e
            ["i0", "e", "e"],
            ["e", "e", "e"],
        ],
    }
    cat = TableCategory.from_dict(data)
    rep = validate_category(cat, ["0"])
    assert not rep.ok
    assert any(c.name == "id.unit" and c.subject == "'e'" for c in rep.failures())


def test_table_schema_errors_have_positions():
    with pytest.raises(SchemaError, match=r"\$\.objects"):
        TableCategory.from_dict({"objects": "nope"})
    with pytest.raises(SchemaError, match=r"\$\.arrows\[0\]\.dom"):
        TableCategory.from_dict({"objects": ["0"], "arrows": [{"id": "f", "dom": "9", "cod": "0"}]})
    with pytest.raises(SchemaError, match=r"\$\.identities"):
        TableCategory.from_dict({"objects": ["0"], "arrows": [], "identities": {}})


def test_compute_coproduct_requires_declaration_on_tables():
    cat = TableCategory.from_dict(WALKING_ARROW)
    with pytest.raises(CategoryError, match="no declared coproduct"):
        compute_coproduct(cat, "0", "1")
