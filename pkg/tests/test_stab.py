"""Quasi-stabilization block model, S/T maps, birth/death, handles.

The 1-generator doubly-based unknot is the hand oracle: stabilizing it
once must reproduce the 2x2 grid complex entry for entry.
"""

import random

import pytest

from hflc import poly
from hflc.complexes import (
    CurvedComplex,
    Generator,
    Morphism,
    complex_from_json,
    complex_to_json,
    phi_action,
    psi_action,
    same_complex,
    specialize_complex,
    verify_curvature,
)
from hflc.grid import GridDiagram, build_complex
from hflc.poly import Coloring, Poly, Uvar, Vvar
from hflc.stab import (
    StabError,
    StabSite,
    S_minus,
    S_plus,
    T_minus,
    T_plus,
    birth,
    death,
    four_handle,
    free_stabilize,
    one_handle,
    quasi_stabilize,
    recognize_site,
    swap_stabilizations,
    three_handle,
    zero_handle,
)


def one_gen_unknot(colored=False):
    C = CurvedComplex([Generator("u", "u", 0, 0)], {}, Poly.zero(),
                      components=(("w1", "z1"),),
                      ring_vars={Uvar("w1"), Vvar("z1")}, name="unknot1")
    if colored:
        return C.with_coloring(Coloring({"w1": "A", "z1": "B"}))
    return C


def colored_site(C=None):
    host = C if C is not None else one_gen_unknot(colored=True)
    return StabSite(host, "w2", "z2", ("w1", "z1"),
                    colors={"w2": "A", "z2": "B"})


UNKNOT2 = GridDiagram((1, 2), (2, 1))
UNKNOT3 = GridDiagram((1, 2, 3), (3, 1, 2))


# site validation ----------------------------------------------------------

def test_site_validation():
    C = one_gen_unknot()
    with pytest.raises(StabError):
        StabSite(C, "a2", "z2", ("w1", "z1"))  # not a w name
    with pytest.raises(StabError):
        StabSite(C, "w1", "z2", ("w1", "z1"))  # taken
    with pytest.raises(StabError):
        StabSite(C, "w2", "z2", ("w1", "z9"))  # no such arc
    with pytest.raises(StabError):
        StabSite(C, "w2", "z2", None)
    with pytest.raises(StabError):
        StabSite(C, "w2", "z2", ("w1", "z1"), colors={"w2": "A"})  # uncolored
    Cc = one_gen_unknot(colored=True)
    with pytest.raises(StabError):
        StabSite(Cc, "w2", "z2", ("w1", "z1"), colors={"w9": "A"})


def test_order_tags():
    C = one_gen_unknot()
    wz = StabSite(C, "w2", "z2", ("w1", "z1"))
    assert (wz.order, wz.w_adj, wz.z_adj) == ("zw", "w1", "z1")
    zw = StabSite(C, "w2", "z2", ("z1", "w1"))
    assert (zw.order, zw.w_adj, zw.z_adj) == ("wz", "w1", "z1")
    assert quasi_stabilize(C, wz).components == (("w1", "z2", "w2", "z1"),)
    assert quasi_stabilize(C, zw).components == (("w1", "z1", "w2", "z2"),)


def test_wrong_host_refused():
    C = one_gen_unknot()
    site = StabSite(C, "w2", "z2", ("w1", "z1"))
    with pytest.raises(StabError):
        quasi_stabilize(one_gen_unknot(), site)


# the block model ----------------------------------------------------------

def test_stabilized_unknot_matches_2x2_grid():
    # hand oracle: one quasi-stabilization of the trivial complex is the
    # 2x2 grid complex under theta -> x21, xi -> x12
    host = one_gen_unknot()
    C = quasi_stabilize(host, StabSite(host, "w2", "z2", ("w1", "z1")))
    G22 = build_complex(UNKNOT2)
    ren = {"u|tw2": "x21", "u|xw2": "x12"}
    assert {(ren[t], ren[s]): p for (t, s), p in C.diff.items()} == G22.diff
    assert C.curvature == G22.curvature
    got = {ren[g.id]: (g.gr_w, g.gr_z) for g in C.generators}
    want = {g.id: (g.gr_w, g.gr_z) for g in G22.generators}
    assert got == want


def test_curvature_matches_component_sequence():
    C = one_gen_unknot()
    site = StabSite(C, "w2", "z2", ("w1", "z1"))
    Cp = quasi_stabilize(C, site)
    assert Cp.curvature == poly.curvature(Cp.components)
    assert verify_curvature(Cp)[0] == "ok"


def test_stabilize_grid_complexes():
    rng = random.Random(7)
    for G in (UNKNOT2, UNKNOT3):
        C = build_complex(G)
        cyc = C.components[0]
        for _ in range(3):
            i = rng.randrange(len(cyc))
            arc = (cyc[i], cyc[(i + 1) % len(cyc)])
            site = StabSite(C, "w9", "z9", arc)
            Cp = site.stabilized
            assert verify_curvature(Cp)[0] == "ok"
            assert Cp.curvature == poly.curvature(Cp.components)
            assert len(Cp.generators) == 2 * len(C.generators)


def test_double_stabilization_commutes():
    # disjoint sites on the 3x3 unknot, both orders, canonical renaming;
    # component cycle is (w1, z2, w2, z3, w3, z1)
    C = build_complex(UNKNOT3)
    arc1 = ("w1", "z2")
    arc2 = ("z3", "w3")
    assert_commutes(C, ("w4", "z4", arc1), ("w5", "z5", arc2))


def assert_commutes(C, site1, site2):
    w1, z1, arc1 = site1
    w2, z2, arc2 = site2
    s1 = StabSite(C, w1, z1, arc1)
    A = s1.stabilized
    s12 = StabSite(A, w2, z2, arc2)
    AB = s12.stabilized

    s2 = StabSite(C, w2, z2, arc2)
    B = s2.stabilized
    s21 = StabSite(B, w1, z1, arc1)
    BA = s21.stabilized

    # canonical identification swaps the two suffixes
    def flip(gid):
        stem, t1, t2 = gid.rsplit("|", 2)
        return f"{stem}|{t2}|{t1}"

    assert {(flip(t), flip(s)): p for (t, s), p in AB.diff.items()} == BA.diff
    got = {flip(g.id): (g.gr_w, g.gr_z) for g in AB.generators}
    assert got == {g.id: (g.gr_w, g.gr_z) for g in BA.generators}
    assert AB.curvature == BA.curvature

    # positive maps commute under the same identification
    up_then = S_plus(s12) @ S_plus(s1)
    other = S_plus(s21) @ S_plus(s2)
    assert {(flip(t), s): p for (t, s), p in up_then.matrix.items()} == \
        other.matrix


# S/T maps ----------------------------------------------------------------

def test_st_exact_identities():
    site = colored_site()
    sp, sm = S_plus(site), S_minus(site)
    tp, tm = T_plus(site), T_minus(site)
    host = site.host
    iden = Morphism.identity(host)

    assert not site.s_defect() and not site.t_defect()
    for f in (sp, sm, tp, tm):
        assert f.boundary().is_zero()
    assert (tm @ sp) == iden
    assert (sm @ tp) == iden
    assert (sm @ sp).is_zero()
    assert (tm @ tp).is_zero()

    Cp = site.stabilized
    assert (sp @ sm) == phi_action(Cp, "w2")
    assert (tp @ tm) == psi_action(Cp, "z2")
    # positive maps against the basepoint actions
    assert (psi_action(Cp, "z2") @ sp) == tp
    assert (phi_action(Cp, "w2") @ tp) == sp


def test_st_identities_on_grid_host():
    G = build_complex(UNKNOT2, Coloring(
        {"w1": "A", "w2": "A", "z1": "B", "z2": "B"}))
    site = StabSite(G, "w3", "z3", ("w2", "z1"),
                    colors={"w3": "A", "z3": "B"})
    sp, sm = S_plus(site), S_minus(site)
    tp, tm = T_plus(site), T_minus(site)
    assert not site.s_defect() and not site.t_defect()
    for f in (sp, sm, tp, tm):
        assert f.boundary().is_zero()
    assert (tm @ sp) == Morphism.identity(G)
    assert (sp @ sm) == phi_action(site.stabilized, "w3")
    assert (tp @ tm) == psi_action(site.stabilized, "z3")


def test_color_mismatch_breaks_chain_property():
    host = one_gen_unknot(colored=True)
    site = StabSite(host, "w2", "z2", ("w1", "z1"),
                    colors={"w2": "C", "z2": "D"})
    assert site.s_defect() and site.t_defect()
    assert not S_plus(site).boundary().is_zero()
    assert not T_plus(site).boundary().is_zero()


def test_free_stabilization():
    C = specialize_complex(build_complex(UNKNOT2), "V=1")
    site = free_stabilize(C, "w3", ("w1", "z2"))
    Cp = site.stabilized
    assert Vvar(site.z) not in Cp.ring_vars
    assert Uvar("w3") in Cp.ring_vars
    # V-entry dead: S maps are chain maps with no coloring at all
    assert not site.s_defect()
    sp, sm = S_plus(site), S_minus(site)
    assert sp.boundary().is_zero() and sm.boundary().is_zero()
    assert (sm @ sp).is_zero()
    # T maps are not chain maps at a free site
    assert site.t_defect()
    assert not T_plus(site).boundary().is_zero()
    with pytest.raises(StabError):
        free_stabilize(build_complex(UNKNOT2), "w3", ("w1", "z2"))


# recognition --------------------------------------------------------------

def test_recognize_2x2_grid():
    C = build_complex(UNKNOT2)
    site = recognize_site(C, "w1", "z1")
    assert site.host.ids() == ["x21"]
    assert site.host.curvature == Poly.zero()
    assert site.host.components == (("w2", "z2"),)
    assert site.host.gen("x21").gr_w == 0 and site.host.gen("x21").gr_z == 0
    assert (site.w_adj, site.z_adj) == ("w2", "z2")
    # maps out of the recognized site
    tm = T_minus(site)
    assert tm.matrix == {("x21", "x21"): Poly.one()}


def test_recognize_roundtrip():
    host = one_gen_unknot()
    site = StabSite(host, "w2", "z2", ("w1", "z1"))
    Cp = site.stabilized
    back = recognize_site(Cp, "w2", "z2")
    assert back.host.ids() == host.ids()
    assert back.host.diff == host.diff
    assert back.host.curvature == host.curvature
    assert back.host.components == host.components
    # stripped site regenerates the same stabilized complex
    redo = StabSite(back.host, "w2", "z2", back.arc)
    assert redo.stabilized.diff == Cp.diff


def test_recognize_after_json_roundtrip():
    site = StabSite(one_gen_unknot(), "w2", "z2", ("w1", "z1"))
    Cp = site.stabilized
    C2 = complex_from_json(complex_to_json(Cp))
    back = recognize_site(C2, "w2", "z2")
    assert back.host.ids() == ["u"]
    assert back.arc is None  # component record does not survive JSON
    assert S_minus(back).matrix == {("u", "u|xw2"): Poly.one()}


def test_recognize_v1_complex():
    C = specialize_complex(build_complex(UNKNOT2), "V=1")
    site = free_stabilize(C, "w3", ("w1", "z2"))
    back = recognize_site(site.stabilized, "w3", site.z)
    assert back.host.diff == C.diff
    assert back.w_adj == "w1"


def test_recognize_refusals():
    C = build_complex(UNKNOT3)
    with pytest.raises(StabError):
        recognize_site(C, "w1", "z1")  # 3x3 complex is not a clean block
    with pytest.raises(StabError):
        recognize_site(C, "w9", "z9")  # variables absent


# birth / death ------------------------------------------------------------

def test_birth_death_block():
    C = build_complex(UNKNOT2)
    Chat, B = birth(C, "w3", "z3", ("w1", "z1"))
    star = Chat.diff[("x21|pw3", "x21|mw3")]
    assert star == poly.parse_poly("U3*V3 + U1*V1")
    assert Chat.components == (("w1", "z2", "w2", "z1"), ("w3", "z3"))
    assert Chat.curvature == C.curvature  # 2-basepoint component adds 0
    assert verify_curvature(Chat)[0] == "ok"
    _, D = death(C, "w3", "z3", ("w1", "z1"), model=Chat)
    assert B.boundary().is_zero() and D.boundary().is_zero()
    assert (D @ B).is_zero()
    assert B.bidegree == (0, 0) and D.bidegree == (1, 1)


def test_birth_region_validation():
    C = build_complex(UNKNOT2)
    with pytest.raises(StabError):
        birth(C, "w3", "z3", ("w9", "z1"))
    with pytest.raises(StabError):
        birth(C, "w1", "z3", ("w1", "z1"))  # name taken
    Chat, _ = birth(C, "w3", "z3", ("w1", "z1"))
    with pytest.raises(StabError):
        death(C, "w3", "z3", ("w2", "z1"), model=Chat)  # wrong star


def test_birth_at_v1():
    C = specialize_complex(build_complex(UNKNOT2), "V=1")
    Chat, B = birth(C, "w3", "z3", ("w1", "z1"))
    star = Chat.diff[("x21|pw3", "x21|mw3")]
    assert star == poly.parse_poly("U3 + U1")
    assert B.boundary().is_zero()


# handles ------------------------------------------------------------------

def test_zero_four_handles():
    C = build_complex(UNKNOT2)
    C0, F0 = zero_handle(C, "w3", "z3")
    assert C0.components == (("w1", "z2", "w2", "z1"), ("w3", "z3"))
    assert C0.diff == C.diff
    assert Uvar("w3") in C0.ring_vars and Vvar("z3") in C0.ring_vars
    C4, F4 = four_handle(C0, "w3", "z3")
    assert (F4 @ F0) == Morphism.identity(C)
    assert C4.ring_vars == C.ring_vars
    with pytest.raises(StabError):
        four_handle(C, "w1", "z1")  # not a doubly-based component
    with pytest.raises(StabError):
        four_handle(C0, "w1", "z3")


def test_one_three_handles():
    C = build_complex(UNKNOT2)
    C1, F1 = one_handle(C)
    assert verify_curvature(C1)[0] == "ok"
    assert C1.curvature == C.curvature
    assert len(C1.generators) == 2 * len(C.generators)
    C3, F3 = three_handle(C1)
    assert (F3 @ F1).is_zero()
    assert F1.boundary().is_zero() and F3.boundary().is_zero()
    assert C3.diff == C.diff
    with pytest.raises(StabError):
        three_handle(C)


def test_one_handle_after_zero_matches_free_stabilization_formula():
    # at V=1, x -> x theta+ and x -> x theta^w are the same generator
    # formula; the complexes differ by the off-diagonal U-entry only
    C = specialize_complex(build_complex(UNKNOT2), "V=1")
    C0, F0 = zero_handle(C, "w3", "z3")
    C1, F1 = one_handle(C0)
    composite = F1 @ F0
    site = free_stabilize(C, "w3", ("w1", "z2"))
    S = S_plus(site)
    ren = {site.theta(g): f"{g}|h+" for g in C.ids()}
    assert {(ren[t], s): p for (t, s), p in S.matrix.items()} == \
        composite.matrix


def test_stabilized_json_roundtrip():
    site = colored_site()
    Cp = site.stabilized
    C2 = complex_from_json(complex_to_json(Cp))
    assert C2.diff == Cp.diff
    assert C2.curvature == Cp.curvature
    assert C2.coloring.mapping == Cp.coloring.mapping


# reordering a tower of two sites -------------------------------------------

def _identity_matrix(C):
    return {(g, g): Poly.one() for g in C.ids()}


def _swap_pair(p_arc, q_arc):
    C = one_gen_unknot()
    P = StabSite(C, "w2", "z2", p_arc)
    Q = StabSite(P.stabilized, "w3", "z3", q_arc)
    return P, Q, swap_stabilizations(P, Q)


# P at ("w1","z1") has order zw and splits the circle into
# (w1, z2, w2, z1); P at ("z1","w1") has order wz and gives
# (w1, z1, w2, z2).  The four adjacent arcs exercise both chiralities
# of P and both sides (pred / succ) on which Q can touch it.
ADJACENT = [
    (("w1", "z1"), ("w2", "z1")),   # pred = P.w
    (("w1", "z1"), ("w1", "z2")),   # succ = P.z
    (("z1", "w1"), ("z2", "w1")),   # pred = P.z
    (("z1", "w1"), ("z1", "w2")),   # succ = P.w
]


@pytest.mark.parametrize("p_arc,q_arc", ADJACENT)
def test_swap_adjacent(p_arc, q_arc):
    P, Q, (Qr, Pr, iso) = _swap_pair(p_arc, q_arc)
    # Q drops to the host at P's old slot; P re-attaches next to it
    assert Qr.host is P.host and Qr.arc == p_arc
    assert Pr.host is Qr.stabilized
    assert iso.is_chain_map()
    A, B = Q.stabilized, Pr.stabilized
    assert A.components == B.components
    assert A.curvature == B.curvature
    # swapping back restores the original tower and inverts the iso
    P2, Q2, iso2 = swap_stabilizations(Qr, Pr)
    assert Q2.w == Q.w and Q2.arc == Q.arc
    assert same_complex(Q2.stabilized, Q.stabilized)
    assert (iso2 @ iso).matrix == _identity_matrix(A)
    assert (iso @ iso2).matrix == _identity_matrix(B)


def test_swap_disjoint_and_refusal():
    # (z1, w1) is the arc of the circle P never touched
    P, Q, (Qr, Pr, iso) = _swap_pair(("w1", "z1"), ("z1", "w1"))
    assert Qr.arc == Q.arc and Pr.arc == P.arc
    assert iso.is_chain_map()
    assert Q.stabilized.components == Pr.stabilized.components
    # plain relabel, no correction term
    assert all(p == Poly.one() for p in iso.matrix.values())
    assert len(iso.matrix) == 4
    with pytest.raises(StabError):
        _swap_pair(("w1", "z1"), ("z2", "w2"))  # inside P's new arc


def test_swap_colored_tower():
    C = one_gen_unknot(colored=True)
    P = StabSite(C, "w2", "z2", ("w1", "z1"),
                 colors={"w2": "A", "z2": "B"})
    Q = StabSite(P.stabilized, "w3", "z3", ("w1", "z2"),
                 colors={"w3": "A", "z3": "B"})
    Qr, Pr, iso = swap_stabilizations(P, Q)
    assert iso.is_chain_map()
    assert Q.stabilized.curvature == Pr.stabilized.curvature
    assert Qr.colors == Q.colors and Pr.colors == P.colors


def test_swap_on_grid_host():
    C = build_complex(UNKNOT2)
    comp = C.components[0]
    P = StabSite(C, "w3", "z3", (comp[0], comp[1]))
    Q = StabSite(P.stabilized, "w4", "z4", ("w3", comp[1]))  # pred = P.w
    Qr, Pr, iso = swap_stabilizations(P, Q)
    assert iso.is_chain_map()
    assert Q.stabilized.components == Pr.stabilized.components
    P2, Q2, iso2 = swap_stabilizations(Qr, Pr)
    assert (iso2 @ iso).matrix == _identity_matrix(Q.stabilized)


def test_swap_commutation_triad():
    # the two composites that move a death past an unrelated birth
    # agree on the nose once the tower is reordered, and the mixed
    # third composite closes the triangle to zero:
    #   T-(P') iso S+(Q)  +  S+(Q'') T-(P)  +  T+(Q'') S-(P)  =  0
    C = one_gen_unknot(colored=True)
    site2 = StabSite(C, "w2", "z2", ("w1", "z1"),
                     colors={"w2": "A", "z2": "B"})
    CA = site2.stabilized
    site3A = StabSite(CA, "w3", "z3", ("w1", "z2"),
                      colors={"w3": "A", "z3": "B"})
    site3B, site2r, iso = swap_stabilizations(site2, site3A)
    F1 = T_minus(site2r) @ iso @ S_plus(site3A)
    F2 = S_plus(site3B) @ T_minus(site2)
    F3 = T_plus(site3B) @ S_minus(site2)
    assert not F1.is_zero() and not F2.is_zero() and not F3.is_zero()
    assert (F1 + F2 + F3).is_zero()
