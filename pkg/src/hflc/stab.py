"""Quasi-stabilization, free stabilization, birth/death and handle models.

A quasi-stabilization adds an adjacent basepoint pair (w,z) to one link
component.  At desk scale we take the block differential

    d+ = [[d, U_w + U_w'], [V_z + V_z', d]]

in the (theta^w, xi^w) basis as the definition; every identity below is
a consequence of this matrix.  w' is the old w adjacent to the new z in
the updated cyclic order, z' the old z adjacent to the new w; which is
which depends on whether the pair is inserted along a w->z or a z->w
arc of the host component.

The positive/negative maps come in two families sharing the same two
new generators (theta^z = xi^w and xi^z = theta^w):

    S+(x) = x theta^w     S-(x xi^w) = x,  S-(x theta^w) = 0
    T+(x) = x theta^z     T-(x xi^z) = x,  T-(x theta^z) = 0

S maps are chain maps iff V_z and V_z' agree after coloring (or V has
been set to 1), T maps iff U_w and U_w' agree.

Free stabilization is the V=1 shadow: the V-entry of the block dies, no
V variable is added, and only the S maps exist.

Birth/death tensor with a two-generator factor carrying the star entry
U_w V_z + U_wA V_zA; 0/4-handles adjoin/remove a split doubly-based
unknot factor, 1/3-handles tensor with <theta+, theta-> and the model
differential d (x) id (no off-diagonal correction; none of the tested
identities is sensitive to one).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import CurvedComplex, Generator, Morphism, verify_curvature
from .poly import Poly, Uvar, Vvar, color_poly, mono


class StabError(ValueError):
    pass


def _sgr(v, d):
    return None if v is None else v + d


def _basepoint_names(C):
    names = set()
    if C.components:
        for cyc in C.components:
            names.update(cyc)
    for v in C.ring_vars:
        names.add(v.name)
    return names


def _find_arc(components, arc):
    """Locate (pred, succ) as cyclically adjacent entries; return the
    component index and position of pred."""
    a, b = arc
    for ci, cyc in enumerate(components):
        m = len(cyc)
        for i, x in enumerate(cyc):
            if x == a and cyc[(i + 1) % m] == b:
                return ci, i
    raise StabError(f"{arc} is not an adjacent basepoint pair")


@dataclass
class StabSite:
    """A quasi-stabilization site on a host complex.

    arc is the ordered adjacent pair (pred, succ) of old basepoints the
    new pair is inserted between; a w->z arc receives (z then w), a
    z->w arc (w then z), which keeps the cyclic order alternating.
    colors optionally extends the host coloring to the new basepoints.
    """

    host: CurvedComplex
    w: str
    z: str
    arc: tuple | None
    colors: dict | None = None
    # derived
    w_adj: str = field(init=False, default="")
    z_adj: str = field(init=False, default="")
    order: str = field(init=False, default="")
    _stab: CurvedComplex | None = field(init=False, default=None, repr=False)
    _theta: dict = field(init=False, default_factory=dict, repr=False)
    _xi: dict = field(init=False, default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.w.startswith("w") or not self.z.startswith("z"):
            raise StabError("site labels must be a w name and a z name")
        taken = _basepoint_names(self.host)
        if self.w in taken or self.z in taken:
            raise StabError(f"basepoint pair ({self.w},{self.z}) already in use")
        if self.arc is None:
            raise StabError("a site needs the host arc it stabilizes")
        if self.host.components is None:
            raise StabError("host has no component record to insert into")
        a, b = self.arc
        _find_arc(self.host.components, self.arc)
        if a.startswith("w"):
            # w' -> z' arc: sequence becomes (w', z, w, z')
            self.order, self.w_adj, self.z_adj = "zw", a, b
        else:
            # z'' -> w'' arc: sequence becomes (z'', w, z, w'')
            self.order, self.w_adj, self.z_adj = "wz", b, a
        if self.host.coloring is None and self.colors:
            raise StabError("colors given but the host is uncolored")
        if self.host.coloring is not None:
            ext = dict(self.colors or {})
            ext.setdefault(self.w, self.w)
            ext.setdefault(self.z, self.z)
            if set(ext) != {self.w, self.z}:
                raise StabError("colors must cover exactly the new pair")
            self.colors = ext

    # block entries, uncolored; an entry on a dead variable kind is None
    def u_entry(self):
        if not self.host.gradings_alive()[0]:
            return None
        return Poly.var(Uvar(self.w)) + Poly.var(Uvar(self.w_adj))

    def v_entry(self):
        if not self.host.gradings_alive()[1]:
            return None
        return Poly.var(Vvar(self.z)) + Poly.var(Vvar(self.z_adj))

    def theta(self, gid):
        return self._theta[gid]

    def xi(self, gid):
        return self._xi[gid]

    def s_defect(self) -> Poly:
        """Colored V-entry; S+/S- are chain maps iff this vanishes."""
        return _site_colored(self, self.v_entry())

    def t_defect(self) -> Poly:
        """Colored U-entry; T+/T- are chain maps iff this vanishes."""
        return _site_colored(self, self.u_entry())

    @property
    def stabilized(self) -> CurvedComplex:
        if self._stab is None:
            self._stab = _build_stabilized(self)
        return self._stab


def _build_stabilized(site: StabSite) -> CurvedComplex:
    C = site.host
    th, xi = {}, {}
    gens = []
    for g in C.generators:
        tid, xid = f"{g.id}|t{site.w}", f"{g.id}|x{site.w}"
        th[g.id], xi[g.id] = tid, xid
        gens.append(Generator(tid, g.label, g.gr_w, _sgr(g.gr_z, -1)))
        gens.append(Generator(xid, g.label, _sgr(g.gr_w, -1), g.gr_z))
    diff = {}
    for (t, s), p in C.diff.items():
        diff[(th[t], th[s])] = p
        diff[(xi[t], xi[s])] = p
    ue, ve = site.u_entry(), site.v_entry()
    for g in C.ids():
        if ve is not None:
            diff[(xi[g], th[g])] = ve
        if ue is not None:
            diff[(th[g], xi[g])] = ue
    omega = C.curvature
    if ue is not None and ve is not None:
        omega = omega + ue * ve
    ring = set(C.ring_vars)
    if ue is not None:
        ring.add(Uvar(site.w))
    if ve is not None:
        ring.add(Vvar(site.z))
    components = None
    if C.components is not None and site.arc is not None:
        ci, i = _find_arc(C.components, site.arc)
        components = list(C.components)
        cyc = list(components[ci])
        ins = [site.z, site.w] if site.order == "zw" else [site.w, site.z]
        components[ci] = tuple(cyc[:i + 1] + ins + cyc[i + 1:])
    coloring = C.coloring.extend(site.colors) if C.coloring is not None else None
    out = CurvedComplex(
        gens, diff, omega, coloring=coloring, components=components,
        ring_vars=ring, name=f"{C.name}+S({site.w},{site.z})" if C.name
        else f"S({site.w},{site.z})", check=True)
    site._theta, site._xi = th, xi
    ok, detail = verify_curvature(out)
    if ok != "ok":
        raise StabError(f"stabilized complex fails d2=omega: {detail}")
    return out


def quasi_stabilize(C: CurvedComplex, site: StabSite) -> CurvedComplex:
    if site.host is not C:
        raise StabError("site was built for a different host complex")
    return site.stabilized


def free_stabilize(C: CurvedComplex, w: str, arc, z: str | None = None) -> StabSite:
    """V=1 stabilization: adds only U_w; S maps are unconditionally
    chain maps, T maps do not exist (their entry survives).

    The z label is bookkeeping only (no V variable is created); when
    omitted, the first free z index is used."""
    if C.gradings_alive()[1]:
        raise StabError("free stabilization expects a V=1 host")
    if z is None:
        taken = _basepoint_names(C)
        k = int(w[1:]) if w[1:].isdigit() else 1
        while f"z{k}" in taken:
            k += 1
        z = f"z{k}"
    return StabSite(C, w, z, arc)


def _site_colored(site, p):
    if p is None:
        return Poly.zero()
    return color_poly(p, site.stabilized.coloring)


def S_plus(site: StabSite) -> Morphism:
    """x -> x theta^w; chain map iff site.s_defect() vanishes."""
    Cp = site.stabilized
    gw, gz = site.host.gradings_alive()
    bid = (0 if gw else None, -1 if gz else None)
    return Morphism(site.host, Cp, bid,
                    {(site.theta(g), g): Poly.one() for g in site.host.ids()},
                    check=False)


def S_minus(site: StabSite) -> Morphism:
    """x xi^w -> x, x theta^w -> 0."""
    Cp = site.stabilized
    gw, gz = site.host.gradings_alive()
    bid = (1 if gw else None, 0 if gz else None)
    return Morphism(Cp, site.host, bid,
                    {(g, site.xi(g)): Poly.one() for g in site.host.ids()},
                    check=False)


def T_plus(site: StabSite) -> Morphism:
    """x -> x theta^z = x xi^w; chain map iff site.t_defect() vanishes."""
    Cp = site.stabilized
    gw, gz = site.host.gradings_alive()
    bid = (-1 if gw else None, 0 if gz else None)
    return Morphism(site.host, Cp, bid,
                    {(site.xi(g), g): Poly.one() for g in site.host.ids()},
                    check=False)


def T_minus(site: StabSite) -> Morphism:
    """x xi^z = x theta^w -> x, x theta^z -> 0."""
    Cp = site.stabilized
    gw, gz = site.host.gradings_alive()
    bid = (0 if gw else None, 1 if gz else None)
    return Morphism(Cp, site.host, bid,
                    {(g, site.theta(g)): Poly.one() for g in site.host.ids()},
                    check=False)


def swap_stabilizations(P: StabSite, Q: StabSite):
    """Reorder a two-step stabilization tower.

    P is a site on a host H, Q a site on P.stabilized.  Returns
    (Qr, Pr, iso) where Qr stabilizes H directly, Pr stabilizes
    Qr.stabilized, and iso: Q.stabilized -> Pr.stabilized is a
    grading-preserving isomorphism of curved complexes.

    When Q's insertion arc touches neither of P's new basepoints the
    swap is a pure relabel.  When it touches exactly one, the rebased
    arcs shift to the corresponding old-basepoint arc and the relabel
    needs a single off-diagonal correction (the two towers differ in
    which pair the shared block variable couples to).  When Q sits
    between P's two new points no reordering exists and StabError is
    raised; destabilize the top site first.
    """
    if Q.host is not P.stabilized:
        raise StabError("Q must be a site on P.stabilized")
    pred, succ = Q.arc
    new_pts = {P.w, P.z}
    inp, ins = pred in new_pts, succ in new_pts
    if inp and ins:
        raise StabError("Q lies between P's new basepoints; "
                        "the tower cannot be reordered")
    H = P.host
    correction = None
    if not inp and not ins:
        Qr = StabSite(H, Q.w, Q.z, Q.arc, colors=Q.colors)
        Pr = StabSite(Qr.stabilized, P.w, P.z, P.arc, colors=P.colors)
    else:
        Qr = StabSite(H, Q.w, Q.z, P.arc, colors=Q.colors)
        q_first = Q.z if Q.order == "zw" else Q.w
        q_last = Q.w if Q.order == "zw" else Q.z
        if inp:
            arc, shared = (P.arc[0], q_first), pred
        else:
            arc, shared = (q_last, P.arc[1]), succ
        Pr = StabSite(Qr.stabilized, P.w, P.z, arc, colors=P.colors)
        correction = "t" if shared == P.w else "x"

    one = Poly.one()
    mat = {}
    for g in H.ids():
        for ep in "tx":
            for eq in "tx":
                mat[(f"{g}|{eq}{Q.w}|{ep}{P.w}",
                     f"{g}|{ep}{P.w}|{eq}{Q.w}")] = one
    if correction is not None:
        pl = correction
        ql = "x" if pl == "t" else "t"
        for g in H.ids():
            k = (f"{g}|{pl}{Q.w}|{ql}{P.w}", f"{g}|{pl}{P.w}|{ql}{Q.w}")
            mat[k] = mat.get(k, Poly.zero()) + one

    gw, gz = H.gradings_alive()
    iso = Morphism(Q.stabilized, Pr.stabilized,
                   (0 if gw else None, 0 if gz else None), mat, check=True)
    return Qr, Pr, iso


def lift_through(F: Morphism, site_src: StabSite, site_tgt: StabSite,
                 check: bool = True) -> Morphism:
    """Lift F: site_src.host -> site_tgt.host to the stabilized
    complexes as F (x) id on the two-generator block.

    The sites must stabilize at the same pair with the same adjacent
    entries (same w, z and arc endpoint names); then the lift commutes
    with the block differential whenever F is a chain map, because the
    off-diagonal entries are central scalars.
    """
    if (site_src.w, site_src.z) != (site_tgt.w, site_tgt.z):
        raise StabError("cannot lift through sites at different pairs")
    if (site_src.w_adj, site_src.z_adj) != (site_tgt.w_adj, site_tgt.z_adj):
        raise StabError("site arcs disagree; the block entries differ")
    mat = {}
    for (t, s), p in F.matrix.items():
        mat[(site_tgt.theta(t), site_src.theta(s))] = p
        mat[(site_tgt.xi(t), site_src.xi(s))] = p
    return Morphism(site_src.stabilized, site_tgt.stabilized, F.bidegree,
                    mat, check=check)


def recognize_site(C: CurvedComplex, w: str, z: str) -> StabSite:
    """Recognize C as quasi-stabilized at the pair (w,z) by its block
    structure, and return a site whose host is the stripped complex.

    Generators are paired through the forced part of the differential
    divisible by the new variable (V_z when V is alive, else U_w); the
    full block shape is then verified entry by entry.  Raises StabError
    when C is not recognizably stabilized at (w,z).
    """
    Vz, Uw = Vvar(z), Uvar(w)
    gw_alive, gz_alive = C.gradings_alive()
    if Vz in C.ring_vars:
        key, role = Vz, "theta"       # V-entry points theta -> xi
    elif Uw in C.ring_vars:
        key, role = Uw, "xi"          # at V=1 only the U-entry survives
    else:
        raise StabError(f"neither {Vz} nor {Uw} acts on this complex")

    by_src = {}
    for (t, s), p in C.diff.items():
        part = Poly(m for m in p if dict(m).get(key))
        if part:
            by_src.setdefault(s, []).append((t, part))

    partner = {}
    for s, hits in by_src.items():
        if len(hits) != 1 or hits[0][1] != Poly.var(key):
            raise StabError(f"column {s} has no clean {key} block entry")
        partner[s] = hits[0][0]
    tops = set(partner)
    bots = set(partner.values())
    if tops & bots or len(bots) != len(tops) \
            or tops | bots != set(C.ids()):
        raise StabError(f"{key} entries do not pair the generators")
    if role == "theta":
        theta_of = dict(partner)                         # theta -> xi
    else:
        theta_of = {th: x for x, th in partner.items()}  # partner was xi -> theta

    # consistent block entries across all pairs
    u_entry = v_entry = None
    for th, x in theta_of.items():
        ve = C.diff.get((x, th), Poly.zero())
        ue = C.diff.get((th, x), Poly.zero())
        if v_entry is None:
            v_entry, u_entry = ve, ue
        elif ve != v_entry or ue != u_entry:
            raise StabError("block entries differ between generator pairs")
    w_adj = z_adj = None
    if gz_alive:
        rest = [m for m in v_entry if dict(m) != {Vvar(z): 1}]
        if len(rest) != 1 or len(rest[0]) != 1 or rest[0][0][0].kind != "V" \
                or v_entry != Poly.var(Vvar(z)) + Poly((rest[0],)):
            raise StabError(f"V-entry {v_entry} is not V_{z} + V_z'")
        z_adj = rest[0][0][0].name
    if gw_alive:
        rest = [m for m in u_entry if dict(m) != {Uvar(w): 1}]
        if len(rest) != 1 or len(rest[0]) != 1 or rest[0][0][0].kind != "U" \
                or u_entry != Poly.var(Uvar(w)) + Poly((rest[0],)):
            raise StabError(f"U-entry {u_entry} is not U_{w} + U_w'")
        w_adj = rest[0][0][0].name

    # inner differential: diagonal blocks equal, no cross terms
    inner = {}
    for (t, s), p in C.diff.items():
        if t == theta_of.get(s) or s == theta_of.get(t):
            continue  # block entries already checked
        if (s in theta_of) != (t in theta_of):
            raise StabError(f"cross entry ({t},{s}) breaks the block shape")
        if s in theta_of:
            inner[(t, s)] = p
    for th_t, x_t in theta_of.items():
        for th_s, x_s in theta_of.items():
            if C.diff.get((th_t, th_s), Poly.zero()) != \
                    C.diff.get((x_t, x_s), Poly.zero()):
                raise StabError("theta and xi layers carry different "
                                "differentials")

    # strip
    suffix_t, suffix_x = f"|t{w}", f"|x{w}"
    def stem(th):
        x = theta_of[th]
        if th.endswith(suffix_t) and x == th[:-len(suffix_t)] + suffix_x:
            return th[:-len(suffix_t)]
        return th
    stems = {th: stem(th) for th in theta_of}
    if len(set(stems.values())) != len(stems):
        raise StabError("generator names collide after stripping")
    host_gens = []
    for g in C.generators:
        if g.id in theta_of:
            host_gens.append(Generator(
                stems[g.id], g.label, g.gr_w, _sgr(g.gr_z, 1)))
    host_diff = {(stems[t], stems[s]): p for (t, s), p in inner.items()}
    omega = C.curvature
    if u_entry and v_entry:
        omega = omega + u_entry * v_entry
    ring = set(C.ring_vars) - {Uw, Vz}
    components, arc = None, None
    if C.components is not None:
        components = []
        for cyc in C.components:
            if w in cyc:
                m = len(cyc)
                i = cyc.index(w)
                j = cyc.index(z)
                if (j - i) % m not in (1, m - 1):
                    raise StabError("site pair is not adjacent in the "
                                    "component record")
                keep = [b for b in cyc if b not in (w, z)]
                if not keep:
                    raise StabError("pair spans a whole component; that is "
                                    "a disk factor, not a quasi-stabilization")
                # arc endpoints: the old neighbours, in traversal order
                k = min(i, j) if abs(i - j) == 1 else max(i, j)
                pred = cyc[(k - 1) % m]
                succ = cyc[(k + 2) % m]
                arc = (pred, succ)
                start = keep.index(pred)
                components.append(tuple(keep[start:] + keep[:start]))
            else:
                components.append(cyc)
    coloring = None
    if C.coloring is not None:
        coloring = C.coloring.restrict(
            [b for b in C.coloring.mapping if b not in (w, z)])
    host = CurvedComplex(host_gens, host_diff, omega, coloring=coloring,
                         components=components, ring_vars=ring,
                         name=f"{C.name}-S({w},{z})" if C.name else "",
                         check=False)
    site = StabSite.__new__(StabSite)
    site.host = host
    site.w, site.z = w, z
    site.arc = arc
    site.colors = None
    site.w_adj = w_adj if w_adj is not None else ""
    site.z_adj = z_adj if z_adj is not None else ""
    site.order = ""
    site._stab = C
    site._theta = {stems[th]: th for th in theta_of}
    site._xi = {stems[th]: theta_of[th] for th in theta_of}
    return site


# ------------------------------------------------------------ birth/death

def _disk_stabilize(C: CurvedComplex, w: str, z: str, region):
    wA, zA = region
    taken = _basepoint_names(C)
    if w in taken or z in taken:
        raise StabError(f"pair ({w},{z}) already in use")
    if C.components is not None:
        if not any(wA in cyc for cyc in C.components) or \
                not any(zA in cyc for cyc in C.components):
            raise StabError(f"region pair ({wA},{zA}) not on the link")
    gw_alive, gz_alive = C.gradings_alive()
    star = Poly.zero()
    if gw_alive and gz_alive:
        star = Poly((mono((Uvar(w), 1), (Vvar(z), 1)),)) + \
            Poly((mono((Uvar(wA), 1), (Vvar(zA), 1)),))
    elif gw_alive:
        star = Poly.var(Uvar(w)) + Poly.var(Uvar(wA))
    elif gz_alive:
        star = Poly.var(Vvar(z)) + Poly.var(Vvar(zA))
    gens, top, bot = [], {}, {}
    for g in C.generators:
        pid, mid = f"{g.id}|p{w}", f"{g.id}|m{w}"
        top[g.id], bot[g.id] = pid, mid
        gens.append(Generator(pid, g.label, g.gr_w, g.gr_z))
        gens.append(Generator(mid, g.label, _sgr(g.gr_w, -1), _sgr(g.gr_z, -1)))
    diff = {}
    for (t, s), p in C.diff.items():
        diff[(top[t], top[s])] = p
        diff[(bot[t], bot[s])] = p
    if star:
        for g in C.ids():
            diff[(top[g], bot[g])] = star
    ring = set(C.ring_vars)
    if gw_alive:
        ring.add(Uvar(w))
    if gz_alive:
        ring.add(Vvar(z))
    components = None
    if C.components is not None:
        components = list(C.components) + [(w, z)]
    coloring = C.coloring
    if coloring is not None:
        coloring = coloring.extend({w: w, z: z})
    out = CurvedComplex(gens, diff, C.curvature, coloring=coloring,
                        components=components, ring_vars=ring,
                        name=f"{C.name}+disk({w})" if C.name else f"disk({w})",
                        check=False)
    return out, top, bot


def birth(C: CurvedComplex, w: str, z: str, region) -> tuple:
    """Split-unknot birth.  Returns (Chat, B+) with B+(x) = x theta+.

    region = (w_A, z_A) picks the host region pair appearing in the
    star entry U_w V_z + U_wA V_zA.  The new component contributes
    nothing to the curvature: its two adjacent pairs coincide.
    """
    Chat, top, _ = _disk_stabilize(C, w, z, region)
    gw, gz = C.gradings_alive()
    F = Morphism(C, Chat, (0 if gw else None, 0 if gz else None),
                 {(top[g], g): Poly.one() for g in C.ids()}, check=False)
    return Chat, F


def death(C: CurvedComplex, w: str, z: str, region,
          model: CurvedComplex | None = None) -> tuple:
    """Split-unknot death.  Returns (Chat, D-) with D-(x theta-) = x,
    D-(x theta+) = 0.  Passing the complex birth returned as `model`
    reuses it (after an equality check) so that death . birth composes;
    the composite is 0 on the nose."""
    Chat, _, bot = _disk_stabilize(C, w, z, region)
    if model is not None:
        if model.diff != Chat.diff or model.ids() != Chat.ids() \
                or model.curvature != Chat.curvature:
            raise StabError("model complex does not match this disk "
                            "stabilization")
        Chat = model
    gw, gz = C.gradings_alive()
    F = Morphism(Chat, C, (1 if gw else None, 1 if gz else None),
                 {(g, bot[g]): Poly.one() for g in C.ids()}, check=False)
    return Chat, F


# ---------------------------------------------------------------- handles

def zero_handle(C: CurvedComplex, w: str, z: str) -> tuple:
    """Disjoint union with the doubly-based unknot; F(x) = x."""
    taken = _basepoint_names(C)
    if w in taken or z in taken:
        raise StabError(f"pair ({w},{z}) already in use")
    gw, gz = C.gradings_alive()
    ring = set(C.ring_vars)
    if gw:
        ring.add(Uvar(w))
    if gz:
        ring.add(Vvar(z))
    components = None
    if C.components is not None:
        components = list(C.components) + [(w, z)]
    coloring = C.coloring
    if coloring is not None:
        coloring = coloring.extend({w: w, z: z})
    out = CurvedComplex(C.generators, C.diff, C.curvature, coloring=coloring,
                        components=components, ring_vars=ring,
                        name=f"{C.name}+0h" if C.name else "0h", check=False)
    F = Morphism(C, out, (0 if gw else None, 0 if gz else None),
                 {(g, g): Poly.one() for g in C.ids()}, check=False)
    return out, F


def four_handle(C: CurvedComplex, w: str, z: str) -> tuple:
    """Remove a split doubly-based unknot component; F(x) = x.
    Refused unless (w,z) is a 2-basepoint component whose variables act
    trivially on the stored differential."""
    if C.components is None:
        raise StabError("no component record; cannot certify a split factor")
    match = [cyc for cyc in C.components if set(cyc) == {w, z}]
    if len(match) != 1:
        raise StabError(f"({w},{z}) is not a doubly-based component")
    dead = {Uvar(w), Vvar(z)}
    for p in C.diff.values():
        if p.variables() & dead:
            raise StabError(f"({w},{z}) factor is not split-trivial")
    if C.curvature.variables() & dead:
        raise StabError(f"({w},{z}) contributes curvature; not split")
    components = [cyc for cyc in C.components if set(cyc) != {w, z}]
    coloring = C.coloring
    if coloring is not None:
        coloring = coloring.restrict(
            [b for b in coloring.mapping if b not in (w, z)])
    out = CurvedComplex(C.generators, C.diff, C.curvature, coloring=coloring,
                        components=components,
                        ring_vars=C.ring_vars - dead,
                        name=f"{C.name}-4h" if C.name else "4h", check=False)
    gw, gz = C.gradings_alive()
    F = Morphism(C, out, (0 if gw else None, 0 if gz else None),
                 {(g, g): Poly.one() for g in C.ids()}, check=False)
    return out, F


def one_handle(C: CurvedComplex) -> tuple:
    """Tensor with <theta+, theta->, differential d (x) id;
    F(x) = x theta+."""
    gens, top, bot = [], {}, {}
    for g in C.generators:
        pid, mid = f"{g.id}|h+", f"{g.id}|h-"
        top[g.id], bot[g.id] = pid, mid
        gens.append(Generator(pid, g.label, g.gr_w, g.gr_z))
        gens.append(Generator(mid, g.label, _sgr(g.gr_w, -1), _sgr(g.gr_z, -1)))
    diff = {}
    for (t, s), p in C.diff.items():
        diff[(top[t], top[s])] = p
        diff[(bot[t], bot[s])] = p
    out = CurvedComplex(gens, diff, C.curvature, coloring=C.coloring,
                        components=C.components, ring_vars=C.ring_vars,
                        name=f"{C.name}+1h" if C.name else "1h", check=False)
    gw, gz = C.gradings_alive()
    F = Morphism(C, out, (0 if gw else None, 0 if gz else None),
                 {(top[g], g): Poly.one() for g in C.ids()}, check=False)
    return out, F


def three_handle(C: CurvedComplex) -> tuple:
    """Collapse a <theta+, theta-> tensor factor; F(x theta+) = 0,
    F(x theta-) = x.  Refused unless the stored structure is a 1-handle
    tensor (paired ids, equal layers, no cross terms)."""
    tops = {g.id for g in C.generators if g.id.endswith("|h+")}
    bots = {g.id for g in C.generators if g.id.endswith("|h-")}
    if not tops or {t[:-3] for t in tops} != {b[:-3] for b in bots} \
            or len(tops) + len(bots) != len(C.generators):
        raise StabError("no <theta+,theta-> factor in the stored structure")
    stems = sorted(t[:-3] for t in tops)
    for (t, s), p in C.diff.items():
        if t.endswith("|h+") != s.endswith("|h+"):
            raise StabError("cross entry breaks the 1-handle block shape")
    for a in stems:
        for b in stems:
            if C.diff.get((f"{a}|h+", f"{b}|h+"), Poly.zero()) != \
                    C.diff.get((f"{a}|h-", f"{b}|h-"), Poly.zero()):
                raise StabError("theta+ and theta- layers differ")
    gens = []
    for g in C.generators:
        if g.id.endswith("|h+"):
            gens.append(Generator(g.id[:-3], g.label, g.gr_w, g.gr_z))
    diff = {(t[:-3], s[:-3]): p for (t, s), p in C.diff.items()
            if t.endswith("|h+")}
    out = CurvedComplex(gens, diff, C.curvature, coloring=C.coloring,
                        components=C.components, ring_vars=C.ring_vars,
                        name=f"{C.name}-3h" if C.name else "3h", check=False)
    gw, gz = C.gradings_alive()
    F = Morphism(C, out, (1 if gw else None, 1 if gz else None),
                 {(g.id[:-3], g.id): Poly.one()
                  for g in C.generators if g.id.endswith("|h-")}, check=False)
    return out, F
