"""Cylinder word DSL: parsing, validation, compilation, dividing sets.

Compilation anchors are the exact block-model identities: T-S+ = id,
S-S+ = 0, S+S- = Phi, T+T- = Psi, and the reordering triad.
"""

import pytest

from hflc.complexes import (
    CurvedComplex,
    Generator,
    Morphism,
    phi_action,
    psi_action,
    specialize_complex,
)
from hflc.divides import (
    NULL_CLASS,
    CylinderWord,
    DividingSet,
    Token,
    WordError,
    bypass_triple,
    compile_word,
    divides_from_json,
    divides_to_json,
    normalize,
    parse_word,
    simplify_word,
    validate_word,
)
from hflc.grid import GridDiagram, build_complex
from hflc.poly import Coloring, Poly, Uvar, Vvar
from hflc.stab import StabSite, S_plus, T_minus


def one_gen_unknot(colored=True):
    C = CurvedComplex([Generator("u", "u", 0, 0)], {}, Poly.zero(),
                      components=(("w1", "z1"),),
                      ring_vars={Uvar("w1"), Vvar("z1")}, name="unknot1")
    if colored:
        return C.with_coloring(Coloring({"w1": "A", "z1": "B"}))
    return C


SIGMA = Coloring({f"w{i}": "A" for i in range(1, 9)} |
                 {f"z{i}": "B" for i in range(1, 9)})

UNKNOT2 = GridDiagram((1, 2), (2, 1))


# parsing --------------------------------------------------------------------

def test_parse_roundtrip():
    w = parse_word("S+(w2,z2); T-(w2,z2)")
    assert [t.kind for t in w.tokens] == ["S+", "T-"]
    assert str(w) == "S+(w2,z2); T-(w2,z2)"
    w = parse_word("S+(w2,z2 @ w1); tau(w2 -> w3 @ z1)")
    assert w.tokens[0].at == "w1"
    assert w.tokens[1] == Token("tau", "w2", "w3", "z1")
    assert parse_word("tau(w1 → w2)").tokens[0].b == "w2"
    assert len(parse_word("")) == 0


@pytest.mark.parametrize("bad", [
    "S+(w2)", "S*(w2,z2)", "S+(z2,w2)", "tau(w1->z2)",
    "S+(w2,z2) T-(w2,z2)", "S+(w2,z2);; T-(w2,z2)", "garbage",
])
def test_parse_rejects(bad):
    with pytest.raises(WordError):
        parse_word(bad)


# validation -----------------------------------------------------------------

def test_validate_tracks_stages():
    C = one_gen_unknot()
    stages = validate_word(parse_word("S+(w2,z2); T-(w2,z2)"), C, SIGMA)
    assert stages[0] == (("w1", "z1"),)
    # default slot: the final arc (z1, w1) of the first component
    assert stages[1] == (("w1", "z1", "w2", "z2"),)
    assert stages[2] == (("w1", "z1"),)
    stages = validate_word(parse_word("S+(w2,z2 @ w1)"), C, SIGMA)
    assert stages[1] == (("w1", "z2", "w2", "z1"),)


def test_validate_unknown_basepoint():
    with pytest.raises(WordError, match="unknown"):
        validate_word(parse_word("S-(w9,z9)"), one_gen_unknot(), SIGMA)


def test_validate_orphaned_component():
    # removing the only pair of a component is not allowed
    with pytest.raises(WordError, match="empty its component"):
        validate_word(parse_word("S-(w1,z1)"), one_gen_unknot(), SIGMA)


def test_validate_coloring_violation():
    C = one_gen_unknot()
    bad = Coloring({"w2": "A", "z2": "X"})
    with pytest.raises(WordError, match="coloring violation"):
        validate_word(parse_word("S+(w2,z2)"), C, bad)
    # T+ constrains the w side instead
    badw = Coloring({"w2": "X", "z2": "B"})
    with pytest.raises(WordError, match="coloring violation"):
        validate_word(parse_word("T+(w2,z2)"), C, badw)
    validate_word(parse_word("T+(w2,z2)"), C, Coloring({"w2": "A", "z2": "X"}))


def test_validate_uncolored_hosts():
    C = one_gen_unknot(colored=False)
    with pytest.raises(WordError, match="uncolored"):
        validate_word(parse_word("S+(w2,z2)"), C)
    # at V=1 the S tokens are unconditional, T tokens still are not
    Cv = specialize_complex(C, "V=1")
    validate_word(parse_word("S+(w2,z2)"), Cv)
    with pytest.raises(WordError):
        validate_word(parse_word("T+(w2,z2)"), Cv)


def test_validate_tau_stage():
    stages = validate_word(parse_word("tau(w1 -> w2)"), one_gen_unknot(),
                           SIGMA)
    assert stages[-1] in ((("z2", "w2"),), (("w2", "z2"),))


# compilation ----------------------------------------------------------------

def test_compile_identity_and_cancellation():
    C = one_gen_unknot()
    F = compile_word(parse_word(""), C)
    assert F.matrix == Morphism.identity(C).matrix
    F = compile_word(parse_word("S+(w2,z2); T-(w2,z2)"), C, SIGMA)
    assert F.matrix == Morphism.identity(C).matrix
    F = compile_word(parse_word("T+(w2,z2); S-(w2,z2)"), C, SIGMA)
    assert F.matrix == Morphism.identity(C).matrix


def test_compile_zero_composites():
    C = one_gen_unknot()
    assert compile_word(parse_word("S+(w2,z2); S-(w2,z2)"), C, SIGMA).is_zero()
    assert compile_word(parse_word("T+(w2,z2); T-(w2,z2)"), C, SIGMA).is_zero()


def test_compile_phi_psi_words():
    # remove-then-readd at the remembered slot gives the basepoint action
    C = one_gen_unknot()
    site = StabSite(C, "w2", "z2", ("w1", "z1"),
                    colors={"w2": "A", "z2": "B"})
    Cp = site.stabilized
    F = compile_word(parse_word("S-(w2,z2); S+(w2,z2)"), Cp, SIGMA,
                     sites=(site,))
    assert F.matrix == phi_action(Cp, "w2").matrix
    G = compile_word(parse_word("T-(w2,z2); T+(w2,z2)"), Cp, SIGMA,
                     sites=(site,))
    assert G.matrix == psi_action(Cp, "z2").matrix


def test_compile_on_grid_diagram():
    sigma = Coloring({"w1": "A", "w2": "A", "z1": "B", "z2": "B",
                      "w3": "A", "z3": "B"})
    F = compile_word(parse_word("S+(w3,z3 @ w1); T-(w3,z3)"), UNKNOT2, sigma)
    C = build_complex(UNKNOT2, coloring=sigma.restrict(
        ["w1", "w2", "z1", "z2"]))
    assert F.matrix == Morphism.identity(C).matrix


def test_compile_tau_moves_the_pair():
    C = one_gen_unknot()
    F = compile_word(parse_word("tau(w1 -> w2)"), C, SIGMA)
    assert F.is_chain_map()
    assert not F.is_zero()
    tgt = F.target
    names = {b for cyc in tgt.components for b in cyc}
    assert names == {"w2", "z2"}
    assert len(tgt.generators) == 1


def test_compile_deep_removal_uses_the_swap():
    # add two pairs, remove the lower one: bubbles through the tower
    C = one_gen_unknot()
    F = compile_word(
        parse_word("S+(w2,z2 @ w1); S+(w3,z3 @ w1); S-(w2,z2)"), C, SIGMA)
    assert F.is_chain_map()
    names = {b for cyc in F.target.components for b in cyc}
    assert names == {"w1", "z1", "w3", "z3"}
    # against the hand composite: swap then remove on top
    P = StabSite(C, "w2", "z2", ("w1", "z1"), colors={"w2": "A", "z2": "B"})
    Q = StabSite(P.stabilized, "w3", "z3", ("w1", "z2"),
                 colors={"w3": "A", "z3": "B"})
    from hflc.stab import S_minus, swap_stabilizations
    Qr, Pr, iso = swap_stabilizations(P, Q)
    hand = S_minus(Pr) @ iso @ S_plus(Q) @ S_plus(P)
    assert F.matrix == hand.matrix


def test_compile_recognition_on_grid():
    # the 2x2 complex is a genuine block at (w1,z1): the removal is
    # recognized and the word lands back on the same complex, equal to
    # the basepoint action on the nose
    sigma = Coloring({"w1": "A", "w2": "A", "z1": "B", "z2": "B"})
    C = build_complex(UNKNOT2, coloring=sigma)
    F = compile_word(parse_word("S-(w1,z1); S+(w1,z1)"), C, sigma)
    assert F.target is C
    assert F.matrix == phi_action(C, "w1").matrix


def test_compile_recognition_fallback_error():
    # a 3x3 pair is not a block of its grid complex; the message says so
    sigma = Coloring({f"w{i}": "A" for i in (1, 2, 3)} |
                     {f"z{i}": "B" for i in (1, 2, 3)})
    with pytest.raises(WordError, match="not recognizably stabilized"):
        compile_word(parse_word("S-(w1,z1); S+(w1,z1)"),
                     GridDiagram((1, 2, 3), (3, 1, 2)), sigma)


# rewriting ------------------------------------------------------------------

def test_simplify_rules():
    w, null = simplify_word(parse_word("S+(w2,z2); T-(w2,z2)"))
    assert len(w) == 0 and not null
    w, null = simplify_word(parse_word("T+(w2,z2); S-(w2,z2); S+(w4,z4)"))
    assert [t.kind for t in w.tokens] == ["S+"] and not null
    w, null = simplify_word(parse_word("S+(w2,z2); S-(w2,z2)"))
    assert null
    w, null = simplify_word(
        parse_word("S+(w2,z2); T+(w3,z3); T-(w3,z3); T-(w2,z2)"))
    assert null  # inner pair cancels to zero first? no: T+T- is null
    # different pairs never cancel
    w, null = simplify_word(parse_word("S+(w2,z2); T-(w3,z3)"))
    assert len(w) == 2 and not null


def test_simplify_soundness_compiled():
    # each rewrite preserves the compiled map, checked on the model host
    C = one_gen_unknot()
    for text in ("S+(w2,z2); T-(w2,z2)", "T+(w2,z2); S-(w2,z2)"):
        word = parse_word(text)
        small, null = simplify_word(word)
        assert not null
        assert compile_word(word, C, SIGMA).matrix == \
            compile_word(small, C, SIGMA).matrix
    for text in ("S+(w2,z2); S-(w2,z2)", "T+(w2,z2); T-(w2,z2)"):
        word = parse_word(text)
        _, null = simplify_word(word)
        assert null
        assert compile_word(word, C, SIGMA).is_zero()


# dividing sets --------------------------------------------------------------

def test_dividing_set_json_roundtrip():
    ds = DividingSet(0, ("w1", "z1"),
                     arcs=({"from": "w1", "to": "w1", "winding": 1},),
                     bigons=({"end": "top", "type": "w", "at": ("w2", "z2"),
                              "arc": ("w1", "z1"), "level": 0},))
    out = divides_from_json(divides_to_json(ds))
    assert out == [ds]
    with pytest.raises(WordError):
        divides_from_json('{"version": "bogus"}')


def test_dividing_set_validation():
    with pytest.raises(WordError):
        DividingSet(0, ("w1", "z1"),
                    arcs=({"from": "w9", "to": "w9", "winding": 0},))
    with pytest.raises(WordError):
        DividingSet(0, ("w1", "z1"),
                    bigons=({"end": "side", "type": "w", "at": ("w2", "z2")},))


def test_normalize_identity_and_single_bigon():
    ds = DividingSet(0, ("w1", "z1"),
                     arcs=({"from": "w1", "to": "w1", "winding": 0},
                           {"from": "z1", "to": "z1", "winding": 0}))
    assert len(normalize(ds)) == 0
    ds = DividingSet(0, ("w1", "z1"),
                     bigons=({"end": "top", "type": "w", "at": ("w2", "z2"),
                              "arc": ("w1", "z1")},))
    assert str(normalize(ds)) == "S+(w2,z2 @ w1)"


def test_normalize_full_twist_is_tau():
    ds = DividingSet(0, ("w1", "z1"),
                     arcs=({"from": "w1", "to": "w1", "winding": 1},))
    word = normalize(ds)
    assert [t.kind for t in word.tokens] == ["tau"]
    F = compile_word(word, one_gen_unknot(), SIGMA)
    assert F.is_chain_map() and not F.is_zero()
    # winding 2 chains two moves with fresh names
    ds2 = DividingSet(0, ("w1", "z1"),
                      arcs=({"from": "w1", "to": "w1", "winding": 2},))
    word2 = normalize(ds2)
    assert len(word2) == 2
    assert word2.tokens[0].b == word2.tokens[1].a


def test_normalize_refusals():
    neg = DividingSet(0, ("w1", "z1"),
                      arcs=({"from": "w1", "to": "w1", "winding": -1},))
    with pytest.raises(WordError, match="negative winding"):
        normalize(neg)
    wide = DividingSet(0, ("w1", "z1", "w2", "z2"),
                       arcs=({"from": "w1", "to": "w1", "winding": 1},))
    with pytest.raises(WordError, match="2-basepoint"):
        normalize(wide)


def test_normalize_closed_circle_is_null():
    ds = DividingSet(0, ("w1", "z1"), circles=1)
    assert normalize(ds) == NULL_CLASS
    assert normalize([ds, DividingSet(1, ("w2", "z2"))]) == NULL_CLASS


def test_normalize_scan_order():
    # two top bigons at different slots come out left to right
    ds = DividingSet(0, ("w1", "z1", "w2", "z2"),
                     bigons=({"end": "top", "type": "z", "at": ("w4", "z4"),
                              "arc": ("w2", "z2")},
                             {"end": "top", "type": "w", "at": ("w3", "z3"),
                              "arc": ("w1", "z1")},
                             {"end": "bottom", "type": "w", "at": ("w2", "z2")}))
    word = normalize(ds)
    assert [t.kind for t in word.tokens] == ["S-", "S+", "T+"]


# bypass triples -------------------------------------------------------------

def host_tower():
    C = one_gen_unknot()
    site = StabSite(C, "w2", "z2", ("w1", "z1"),
                    colors={"w2": "A", "z2": "B"})
    return site.stabilized, site


def test_bypass_trivial_triad_sums_to_zero():
    Cp, site = host_tower()
    ds = DividingSet(0, tuple(Cp.components[0]))
    d1, d2, d3 = bypass_triple(ds, {"kind": "trivial", "pair": ("w2", "z2")})
    maps = [compile_word(normalize(d), Cp, SIGMA, sites=(site,))
            for d in (d1, d2, d3)]
    assert not any(F.is_zero() for F in maps)
    assert (maps[0] + maps[1] + maps[2]).is_zero()


def test_bypass_stabilization_triad_sums_to_zero():
    Cp, site = host_tower()
    ds = DividingSet(0, tuple(Cp.components[0]))
    d1, d2, d3 = bypass_triple(
        ds, {"kind": "stabilization", "pair": ("w2", "z2"),
             "fresh": ("w3", "z3")})
    maps = [compile_word(normalize(d), Cp, SIGMA, sites=(site,))
            for d in (d1, d2, d3)]
    assert not any(F.is_zero() for F in maps)
    total = maps[0] + maps[1] + maps[2]
    assert total.is_zero()


def test_bypass_commutator_triad_needs_n1():
    ds = DividingSet(0, ("w1", "z1"))
    with pytest.raises(WordError, match="adjacent exactly once"):
        bypass_triple(ds, {"kind": "commutator", "pair": ("w1", "z1")})
    with pytest.raises(WordError):
        bypass_triple(ds, {"kind": "trivial", "pair": ("w1", "z9")})
    with pytest.raises(WordError):
        bypass_triple(ds, {"kind": "nonsense", "pair": ("w1", "z1")})


def test_bypass_commutator_triad_maps():
    # 4-basepoint circle: (w2,z1) is adjacent exactly once
    Cp, site = host_tower()
    ds = DividingSet(0, tuple(Cp.components[0]))
    d1, d2, d3 = bypass_triple(ds, {"kind": "commutator",
                                    "pair": ("w2", "z2")})
    w1 = normalize(d1)
    assert [t.kind for t in w1.tokens] == ["T-", "T+", "S-", "S+"]
    F1 = compile_word(w1, Cp, SIGMA, sites=(site,))
    F2 = compile_word(normalize(d2), Cp, SIGMA, sites=(site,))
    want = phi_action(Cp, "w2") @ psi_action(Cp, "z2")
    assert F1.matrix == want.matrix
    assert F2.matrix == (psi_action(Cp, "z2") @ phi_action(Cp, "w2")).matrix
