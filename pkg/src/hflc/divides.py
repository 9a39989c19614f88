"""Decorated-cylinder words and dividing sets.

A cobordism [0,1] x L whose surface is a union of annuli is described,
per link component, by a dividing set on the cylinder: through-strands
with winding, and bigons cut off at the top or bottom boundary.  Words
in the five token kinds

    S+(w,z [@ p])   add the pair, theta-flavored
    S-(w,z)         remove the pair, theta-flavored
    T+(w,z [@ p])   add the pair, xi-flavored
    T-(w,z)         remove the pair, xi-flavored
    tau(w -> w')    move the pair (w, succ(w)) to a fresh pair

read bottom to top and compile to compositions of the elementary
morphisms of hflc.stab.  "@ p" picks the host arc starting at the
basepoint p; without it an addition re-uses the slot of a prior
removal of the same pair, or falls back to the final arc of the first
component.  tau(w -> w') expands to the composite: add the fresh pair
at the old pair's slot, then remove the old pair (a one-step basepoint
move; its z partner name is synthesized from w').

Removing a pair that is not the top of the addition tower is handled
by reordering the tower with swap_stabilizations and transporting the
intervening additions across the reordering isomorphism; a pair that
was never added by the word itself is recognized from the block
structure of the current complex when possible.

Dividing sets normalize to canonical words (bottom bigons, windings,
top bigons, scanned in a fixed order); a closed dividing circle is
inadmissible and yields the distinguished null class instead of a
word.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .complexes import CurvedComplex, Morphism
from .grid import GridDiagram, build_complex
from .poly import Coloring
from .stab import (
    StabError,
    StabSite,
    S_minus,
    S_plus,
    T_minus,
    T_plus,
    lift_through,
    recognize_site,
    swap_stabilizations,
)


class WordError(ValueError):
    pass


class NullClass:
    """The zero homotopy class, as a distinguished marker.

    Returned by normalize for inadmissible dividing sets (those with a
    closed null-homotopic dividing circle): the compiled class is zero
    but no particular null-homotopic matrix is canonical.
    """

    def __repr__(self):
        return "NullClass"

    def __eq__(self, other):
        return isinstance(other, NullClass)

    def __hash__(self):
        return hash("NullClass")


NULL_CLASS = NullClass()


@dataclass(frozen=True)
class Token:
    kind: str               # "S+", "S-", "T+", "T-", "tau"
    a: str                  # w name; for tau the old w
    b: str                  # z name; for tau the new w
    at: str | None = None   # arc start for additions / tau insertions

    def __str__(self):
        loc = f" @ {self.at}" if self.at else ""
        if self.kind == "tau":
            return f"tau({self.a} -> {self.b}{loc})"
        return f"{self.kind}({self.a},{self.b}{loc})"


@dataclass(frozen=True)
class CylinderWord:
    tokens: tuple

    def __str__(self):
        return "; ".join(str(t) for t in self.tokens)

    def __len__(self):
        return len(self.tokens)


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<st>[ST][+-])\(\s*(?P<w>w\d+)\s*,\s*(?P<z>z\d+)\s*"
    r"(?:@\s*(?P<at1>[wz]\d+)\s*)?\)"
    r"|tau\(\s*(?P<a>w\d+)\s*(?:->|→)\s*(?P<b>w\d+)\s*"
    r"(?:@\s*(?P<at2>[wz]\d+)\s*)?\)"
    r")\s*")


def parse_word(text: str) -> CylinderWord:
    tokens = []
    pos = 0
    first = True
    while pos < len(text):
        if not first:
            if text[pos] != ";":
                raise WordError(f"expected ';' at position {pos}: {text[pos:pos+20]!r}")
            pos += 1
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordError(f"bad token at position {pos}: {text[pos:pos+20]!r}")
        if m.group("st"):
            tokens.append(Token(m.group("st"), m.group("w"), m.group("z"),
                                m.group("at1")))
        else:
            tokens.append(Token("tau", m.group("a"), m.group("b"),
                                m.group("at2")))
        pos = m.end()
        first = False
    if not tokens and text.strip():
        raise WordError(f"unparsable word {text!r}")
    return CylinderWord(tuple(tokens))


# stage tracking -------------------------------------------------------------

def _tau_partner(wname: str) -> str:
    return "z" + wname[1:]


def _find(comps, name):
    for ci, cyc in enumerate(comps):
        if name in cyc:
            return ci, cyc.index(name)
    raise WordError(f"unknown basepoint {name}")


def _insert_pair(comps, w, z, arc):
    names = {b for cyc in comps for b in cyc}
    if w in names or z in names:
        raise WordError(f"pair ({w},{z}) already present")
    pred, succ = arc
    ci, i = _find(comps, pred)
    cyc = comps[ci]
    if cyc[(i + 1) % len(cyc)] != succ:
        raise WordError(f"no arc ({pred},{succ}) at this stage")
    ins = [z, w] if pred.startswith("w") else [w, z]
    comps[ci] = tuple(cyc[:i + 1] + tuple(ins) + cyc[i + 1:])


def _remove_pair(comps, w, z):
    ci, i = _find(comps, w)
    cyc = comps[ci]
    m = len(cyc)
    if z not in cyc:
        raise WordError(f"basepoints {w} and {z} lie on different components")
    j = cyc.index(z)
    if (j - i) % m not in (1, m - 1):
        raise WordError(f"pair ({w},{z}) is not adjacent at this stage")
    if m <= 2:
        raise WordError(
            f"removing ({w},{z}) would empty its component; the complex "
            "is only defined with basepoints left on every component")
    # the freed slot, for re-insertions without an explicit location
    k = i if (j - i) % m == 1 else j
    pred, succ = cyc[(k - 1) % m], cyc[(k + 2) % m]
    comps[ci] = tuple(b for b in cyc if b not in (w, z))
    return (pred, succ)


def _default_arc(comps):
    cyc = comps[0]
    return (cyc[-1], cyc[0])


def _arc_from(comps, at):
    ci, i = _find(comps, at)
    cyc = comps[ci]
    return (at, cyc[(i + 1) % len(cyc)])


@dataclass
class _Stage:
    comps: list
    colors: dict | None
    freed: dict = field(default_factory=dict)   # pair -> vacated arc

    def arc_for(self, tok):
        if tok.at is not None:
            return _arc_from(self.comps, tok.at)
        if (tok.a, tok.b) in self.freed:
            return self.freed[(tok.a, tok.b)]
        return _default_arc(self.comps)


def _adjacent_color(stage, arc, kind):
    # color carried by the neighbour the new entry must cancel against:
    # S maps need the z side, T maps the w side
    pred, succ = arc
    want = "z" if kind.startswith("S") else "w"
    name = pred if pred.startswith(want) else succ
    return name, stage.colors[name]


def _check_addition_colors(stage, tok, arc):
    if stage.colors is None:
        raise WordError(
            f"{tok.kind}({tok.a},{tok.b}) is not a chain map over the "
            "uncolored ring; color the host or specialize first")
    for name in (tok.a, tok.b):
        if name not in stage.colors:
            raise WordError(f"no color assigned to fresh basepoint {name}")
    fresh = tok.a if tok.kind.startswith("T") else tok.b
    nb, cnb = _adjacent_color(stage, arc, tok.kind)
    if stage.colors[fresh] != cnb:
        raise WordError(
            f"coloring violation: {tok.kind} at ({tok.a},{tok.b}) needs "
            f"color({fresh}) = color({nb})")


def _check_removal_colors(stage, tok, w, z):
    if stage.colors is None:
        raise WordError(
            f"{tok.kind}({w},{z}) is not a chain map over the uncolored "
            "ring; color the host or specialize first")
    ci, i = _find(stage.comps, w)
    cyc = stage.comps[ci]
    m = len(cyc)
    j = cyc.index(z)
    k = i if (j - i) % m == 1 else j
    pred, succ = cyc[(k - 1) % m], cyc[(k + 2) % m]
    want = "z" if tok.kind.startswith("S") else "w"
    fresh = z if want == "z" else w
    nb = pred if pred.startswith(want) else succ
    if stage.colors[fresh] != stage.colors[nb]:
        raise WordError(
            f"coloring violation: {tok.kind} at ({w},{z}) needs "
            f"color({fresh}) = color({nb})")


def validate_word(word: CylinderWord, C: CurvedComplex,
                  sigma: Coloring | None = None):
    """Stage-track the word over C's components; raises WordError.

    sigma supplies colors for basepoints the word introduces (and must
    agree with C's coloring on the ones already present).  Returns the
    list of component records, one per stage, bottom first.

    Chain conditions are enforced per token: an S token needs its two
    z colors equal unless the V grading is dead, a T token its two w
    colors unless the U grading is dead; tau needs both (it expands to
    an S+ and a T-).
    """
    if C.components is None:
        raise WordError("host has no component record")
    colors = None
    gw, gz = C.gradings_alive()
    if C.coloring is not None:
        colors = dict(C.coloring.mapping)
        if sigma is not None:
            for k, v in sigma.mapping.items():
                if colors.get(k, v) != v:
                    raise WordError(f"sigma recolors existing basepoint {k}")
                colors[k] = v
    elif sigma is not None:
        raise WordError("sigma given but the host is uncolored")
    stage = _Stage([tuple(c) for c in C.components], colors)
    stages = [tuple(stage.comps)]
    for tok in word.tokens:
        if tok.kind in ("S+", "T+"):
            arc = stage.arc_for(tok)
            if (gz and tok.kind == "S+") or (gw and tok.kind == "T+"):
                _check_addition_colors(stage, tok, arc)
            _insert_pair(stage.comps, tok.a, tok.b, arc)
        elif tok.kind in ("S-", "T-"):
            _find(stage.comps, tok.a)
            if (gz and tok.kind == "S-") or (gw and tok.kind == "T-"):
                _check_removal_colors(stage, tok, tok.a, tok.b)
            stage.freed[(tok.a, tok.b)] = _remove_pair(
                stage.comps, tok.a, tok.b)
        else:  # tau
            zold = _tau_partner_of(stage.comps, tok.a)
            wnew, znew = tok.b, _tau_partner(tok.b)
            arc = _arc_from(stage.comps, tok.at or tok.a)
            if gz:
                _check_addition_colors(stage, Token("S+", wnew, znew),
                                        arc)
            _insert_pair(stage.comps, wnew, znew, arc)
            if gw:
                _check_removal_colors(stage, Token("T-", tok.a, zold),
                                      tok.a, zold)
            stage.freed[(tok.a, zold)] = _remove_pair(
                stage.comps, tok.a, zold)
        stages.append(tuple(stage.comps))
    return stages


def _tau_partner_of(comps, wname):
    ci, i = _find(comps, wname)
    cyc = comps[ci]
    zold = cyc[(i + 1) % len(cyc)]
    if not zold.startswith("z"):
        raise WordError(f"successor of {wname} is not a z basepoint")
    return zold


# compilation ----------------------------------------------------------------

class _Tower:
    """The addition tower of a partially compiled word.

    sites are kept bottom to top; removing a deep site bubbles it up
    with swap_stabilizations, transporting the sites above it across
    the reordering isomorphism (lift_through).  A removal of a pair
    the word never added falls back to block recognition, after which
    earlier tower bookkeeping is no longer meaningful and is dropped.
    """

    def __init__(self, C):
        self.top = C
        self.sites = []
        self.freed = {}   # removed pairs, for exact re-insertion

    def push(self, site):
        self.sites.append(site)
        self.top = site.stabilized

    def reusable(self, w, z, arc):
        site = self.freed.get((w, z))
        if site is not None and site.host is self.top and site.arc == arc:
            return self.freed.pop((w, z))
        return None

    def raise_site(self, w, z):
        """Bubble the site for (w,z) to the top; returns the transport
        morphism (identity if already on top)."""
        idx = next((i for i, s in enumerate(self.sites)
                    if (s.w, s.z) == (w, z)), None)
        if idx is None:
            return None
        F = Morphism.identity(self.top)
        while idx + 1 < len(self.sites):
            P, Q = self.sites[idx], self.sites[idx + 1]
            try:
                Qr, Pr, iso = swap_stabilizations(P, Q)
            except StabError as e:
                raise WordError(
                    f"cannot reorder the tower to remove ({w},{z}): {e}")
            self.sites[idx], self.sites[idx + 1] = Qr, Pr
            for j in range(idx + 2, len(self.sites)):
                old = self.sites[j]
                new = StabSite(iso.target if j == idx + 2 else
                               self.sites[j - 1].stabilized,
                               old.w, old.z, old.arc, colors=old.colors)
                iso = lift_through(iso, old, new, check=False)
                self.sites[j] = new
            F = iso @ F
            idx += 1
        self.top = self.sites[-1].stabilized
        return F

    def pop(self):
        site = self.sites.pop()
        self.top = site.host
        return site


def compile_word(word: CylinderWord, host, sigma: Coloring | None = None,
                 sites=(), check: bool = True) -> Morphism:
    """Compile to a Morphism from the bottom complex to the top one.

    host: a CurvedComplex or a GridDiagram (built with sigma restricted
    to its own basepoints).  Tokens apply bottom to top, so the result
    is the top token's map composed last.

    sites: quasi-stabilization sites the host complex is already built
    from, bottom to top; removals of their pairs then go through the
    exact tower reordering instead of block recognition.
    """
    if isinstance(host, GridDiagram):
        col = None
        if sigma is not None:
            col = sigma.restrict([b for b in host.basepoints()
                                  if b in sigma.mapping])
        C = build_complex(host, coloring=col)
    else:
        C = host
    if sites and sites[-1].stabilized is not C:
        raise WordError("sites do not end at the host complex")
    validate_word(word, C, sigma)

    colors = dict(C.coloring.mapping) if C.coloring is not None else None
    if colors is not None and sigma is not None:
        colors.update(sigma.mapping)
    stage = _Stage([tuple(c) for c in C.components],
                   dict(colors) if colors is not None else None)
    tower = _Tower(C)
    tower.sites = list(sites)
    F = Morphism.identity(C)

    def add(kind, w, z, arc):
        site = tower.reusable(w, z, arc)
        if site is None:
            cols = None
            if tower.top.coloring is not None:
                cols = {w: colors[w], z: colors[z]}
            site = StabSite(tower.top, w, z, arc, colors=cols)
        G = S_plus(site) if kind == "S+" else T_plus(site)
        tower.push(site)
        return G

    def remove(kind, w, z):
        nonlocal F
        lift = tower.raise_site(w, z)
        if lift is not None:
            F = lift @ F
            site = tower.pop()
        else:
            try:
                site = recognize_site(tower.top, w, z)
            except StabError as e:
                raise WordError(
                    f"pair ({w},{z}) was not added by this word and the "
                    f"complex is not recognizably stabilized there: {e}")
            tower.sites.clear()   # bookkeeping below a recognition is stale
            tower.top = site.host
        tower.freed[(w, z)] = site
        return S_minus(site) if kind == "S-" else T_minus(site)

    for tok in word.tokens:
        if tok.kind in ("S+", "T+"):
            arc = stage.arc_for(tok)
            _insert_pair(stage.comps, tok.a, tok.b, arc)
            G = add(tok.kind, tok.a, tok.b, arc)
        elif tok.kind in ("S-", "T-"):
            stage.freed[(tok.a, tok.b)] = _remove_pair(
                stage.comps, tok.a, tok.b)
            G = remove(tok.kind, tok.a, tok.b)
        else:
            zold = _tau_partner_of(stage.comps, tok.a)
            wnew, znew = tok.b, _tau_partner(tok.b)
            arc = _arc_from(stage.comps, tok.at or tok.a)
            _insert_pair(stage.comps, wnew, znew, arc)
            G = add("S+", wnew, znew, arc)
            F = G @ F
            stage.freed[(tok.a, zold)] = _remove_pair(
                stage.comps, tok.a, zold)
            G = remove("T-", tok.a, zold)
        F = G @ F
    if check and not F.is_chain_map():
        raise WordError("compiled morphism fails the chain map check")
    return F


# rewriting ------------------------------------------------------------------

# adjacent same-pair cancellations; bottom-to-top reading
_CANCEL = {("S+", "T-"): "id", ("T+", "S-"): "id",
           ("S+", "S-"): "null", ("T+", "T-"): "null"}


def simplify_word(word: CylinderWord):
    """Apply the sound token rewrites to a fixpoint.

    Returns (word', is_null): is_null means an adjacent add/remove of
    the same pair composed to the zero map, so the whole class is
    zero regardless of the rest of the word.
    """
    toks = list(word.tokens)
    changed = True
    while changed:
        changed = False
        for i in range(len(toks) - 1):
            x, y = toks[i], toks[i + 1]
            if x.kind == "tau" or y.kind == "tau":
                continue
            if (x.a, x.b) != (y.a, y.b):
                continue
            rule = _CANCEL.get((x.kind, y.kind))
            if rule == "null":
                return CylinderWord(()), True
            if rule == "id":
                del toks[i:i + 2]
                changed = True
                break
    return CylinderWord(tuple(toks)), False


# dividing sets --------------------------------------------------------------

@dataclass(frozen=True)
class DividingSet:
    """Dividing set on one component's cylinder.

    bottom: the basepoints of the incoming circle, in cyclic order.
    arcs: through-strands {"from": b, "to": b, "winding": n}.
    bigons: {"end": "top"|"bottom", "type": "w"|"z", "at": (w, z),
             "arc": (pred, succ) | None, "level": int} -- "at" names
    the bigon's basepoint pair, "arc" the attachment slot for top
    bigons, "level" the stacking height used when several bigons on
    one cylinder do not commute.
    circles: number of closed dividing circles (0 for admissible sets).
    """
    component: int
    bottom: tuple
    arcs: tuple = ()
    bigons: tuple = ()
    circles: int = 0

    def __post_init__(self):
        names = set(self.bottom)
        for a in self.arcs:
            if a["from"] not in names:
                raise WordError(f"through-arc from unknown {a['from']!r}")
        for b in self.bigons:
            if b["end"] not in ("top", "bottom") or b["type"] not in "wz":
                raise WordError(f"bad bigon {b!r}")
            if b["end"] == "bottom" and not set(b["at"]) <= names:
                raise WordError(f"bottom bigon at unknown pair {b['at']!r}")


def divides_to_json(sets) -> str:
    if isinstance(sets, DividingSet):
        sets = [sets]
    doc = {"version": "hflc-divides/1", "sets": []}
    for ds in sets:
        doc["sets"].append({
            "component": ds.component,
            "bottom": list(ds.bottom),
            "arcs": [dict(a) for a in ds.arcs],
            "bigons": [{**b, "at": list(b["at"]),
                        "arc": list(b["arc"]) if b.get("arc") else None}
                       for b in ds.bigons],
            "circles": ds.circles,
        })
    return json.dumps(doc, indent=1, sort_keys=True)


def divides_from_json(text: str):
    doc = json.loads(text)
    if doc.get("version") != "hflc-divides/1":
        raise WordError(f"unknown dividing-set version {doc.get('version')!r}")
    out = []
    for d in doc["sets"]:
        bigons = tuple(
            {**b, "at": tuple(b["at"]),
             "arc": tuple(b["arc"]) if b.get("arc") else None}
            for b in d["bigons"])
        out.append(DividingSet(d["component"], tuple(d["bottom"]),
                               tuple(d.get("arcs", ())), bigons,
                               d.get("circles", 0)))
    return out


def _scan_pos(ds, bigon):
    # leftmost boundary endpoint: attachment arc for top bigons, the
    # pair itself for bottom ones
    ref = bigon.get("arc") or bigon["at"]
    idx = [ds.bottom.index(b) for b in ref if b in ds.bottom]
    return min(idx) if idx else len(ds.bottom)


def _fresh_w(used, hint=1):
    k = hint
    while f"w{k}" in used or f"z{k}" in used:
        k += 1
    used.add(f"w{k}")
    used.add(f"z{k}")
    return f"w{k}"


def normalize(sets):
    """Canonical word of a family of dividing sets, one per component.

    Scan order: components ascending; within a cylinder, bigons by
    level, then bottom before top, then by leftmost boundary endpoint,
    then winding tokens of the through-strands.  Windings are only
    realized on 2-basepoint components (one tau per positive turn);
    negative winding is refused.  Closed circles yield NULL_CLASS.
    """
    if isinstance(sets, DividingSet):
        sets = [sets]
    if any(ds.circles for ds in sets):
        return NULL_CLASS
    used = {b for ds in sets for b in ds.bottom}
    for ds in sets:
        for b in ds.bigons:
            used.update(b["at"])
    tokens = []
    for ds in sorted(sets, key=lambda d: d.component):
        def key(b):
            return (b.get("level", 0 if b["end"] == "bottom" else 2),
                    0 if b["end"] == "bottom" else 1,
                    _scan_pos(ds, b), b["type"])
        for b in sorted(ds.bigons, key=key):
            w, z = b["at"]
            kind = ("S" if b["type"] == "w" else "T") + \
                   ("-" if b["end"] == "bottom" else "+")
            at = b["arc"][0] if b.get("arc") else None
            tokens.append(Token(kind, w, z, at))
        for a in sorted(ds.arcs, key=lambda a: ds.bottom.index(a["from"])):
            n = a.get("winding", 0)
            if n == 0:
                continue
            if n < 0:
                raise WordError("negative winding is not realized; "
                                "present the mirror cylinder instead")
            if len(ds.bottom) != 2:
                raise WordError("winding is only realized on 2-basepoint "
                                "components")
            cur = a["from"] if a["from"].startswith("w") else \
                _tau_pair_w(ds.bottom, a["from"])
            for _ in range(n):
                nxt = _fresh_w(used, int(cur[1:]) + 1)
                tokens.append(Token("tau", cur, nxt, None))
                cur = nxt
    return CylinderWord(tuple(tokens))


def _tau_pair_w(bottom, zname):
    i = bottom.index(zname)
    w = bottom[i - 1]
    if not w.startswith("w"):
        raise WordError(f"no w partner for {zname} on its component")
    return w


def bypass_triple(ds: DividingSet, disk: dict):
    """Three dividing sets agreeing outside the disk, in the bypass
    triad configuration.  disk["kind"]:

      "trivial"        S+T-, T+S-, id at disk["pair"] (an existing
                       adjacent pair of ds.bottom).
      "commutator"     Phi Psi, Psi Phi, id at disk["pair"]; valid
                       when the pair is adjacent exactly once.
      "stabilization"  the reordering triad at disk["pair"] (existing)
                       and disk["fresh"] (new pair): fresh added above
                       vs below the removal of pair, vs the flavor
                       swap.
    """
    kind = disk.get("kind")
    w, z = disk["pair"]
    if w not in ds.bottom or z not in ds.bottom:
        raise WordError(f"disk pair ({w},{z}) is not on this cylinder")
    i, j = ds.bottom.index(w), ds.bottom.index(z)
    m = len(ds.bottom)
    adj = (j - i) % m in (1, m - 1)
    if not adj:
        raise WordError(f"disk pair ({w},{z}) is not adjacent")

    def with_bigons(*bigons):
        return DividingSet(ds.component, ds.bottom, ds.arcs,
                           ds.bigons + tuple(bigons), ds.circles)

    if kind == "trivial":
        d1 = with_bigons({"end": "bottom", "type": "z", "at": (w, z),
                          "arc": None, "level": 0},
                         {"end": "top", "type": "w", "at": (w, z),
                          "arc": None, "level": 1})
        d2 = with_bigons({"end": "bottom", "type": "w", "at": (w, z),
                          "arc": None, "level": 0},
                         {"end": "top", "type": "z", "at": (w, z),
                          "arc": None, "level": 1})
        return d1, d2, with_bigons()

    if kind == "commutator":
        if m == 2:
            # doubly adjacent: N(w,z) = 2 and the triad needs N = 1
            raise WordError("commutator disk needs the pair adjacent "
                            "exactly once")
        psi = [{"end": "bottom", "type": "z", "at": (w, z), "arc": None},
               {"end": "top", "type": "z", "at": (w, z), "arc": None}]
        phi = [{"end": "bottom", "type": "w", "at": (w, z), "arc": None},
               {"end": "top", "type": "w", "at": (w, z), "arc": None}]
        d1 = with_bigons(*[{**b, "level": k} for k, b in enumerate(psi + phi)])
        d2 = with_bigons(*[{**b, "level": k} for k, b in enumerate(phi + psi)])
        return d1, d2, with_bigons()

    if kind == "stabilization":
        wf, zf = disk["fresh"]
        cyc = list(ds.bottom)
        k = i if (j - i) % m == 1 else j          # first point of the span
        pred, succ = cyc[(k - 1) % m], cyc[(k + 2) % m]
        slot = (pred, succ)                        # vacated by the removal
        touch = (pred, cyc[k])                     # grazes the pair's side
        d1 = with_bigons({"end": "top", "type": "w", "at": (wf, zf),
                          "arc": touch, "level": 0},
                         {"end": "bottom", "type": "z", "at": (w, z),
                          "arc": None, "level": 1})
        d2 = with_bigons({"end": "bottom", "type": "z", "at": (w, z),
                          "arc": None, "level": 0},
                         {"end": "top", "type": "w", "at": (wf, zf),
                          "arc": slot, "level": 1})
        d3 = with_bigons({"end": "bottom", "type": "w", "at": (w, z),
                          "arc": None, "level": 0},
                         {"end": "top", "type": "z", "at": (wf, zf),
                          "arc": slot, "level": 1})
        return d1, d2, d3

    raise WordError(f"unknown bypass disk kind {kind!r}")
