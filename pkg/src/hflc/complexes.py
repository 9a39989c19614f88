"""Curved chain complexes over colored basepoint rings, and their morphisms.

A CurvedComplex stores a free module spanned by generators with two
integer gradings (gr_w, gr_z), a sparse differential with entries in the
polynomial ring on its basepoint variables, and a curvature polynomial
omega with d o d = omega . id.  The differential is kept in uncolored
form; a Coloring, when present, is applied lazily.  Derivative-style
maps (Phi, Psi) therefore stay available after coloring, which matters
because the colored differential may lose divisibility information.

Morphisms carry colored entries.  The constructor enforces the grading
feasibility rule: an entry m from x to y of a bidegree (dw, dz) map
must satisfy

    gr_w(y) - 2 degU(m) = gr_w(x) + dw
    gr_z(y) - 2 degV(m) = gr_z(x) + dz

whenever the relevant grading is alive.  Specialization at V=1 kills
gr_z (and symmetrically), recorded as None.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .poly import (
    Coloring,
    Poly,
    VarId,
    color_poly,
    mono_degrees,
    parse_poly,
    set_all_to_zero,
    set_kind_to_one,
)


@dataclass(frozen=True)
class Generator:
    id: str
    label: str
    gr_w: int | None
    gr_z: int | None


class GradingError(ValueError):
    pass


def _entry_feasible(gt, gs, shift, deg):
    # one grading component; None grading means unconstrained
    if gt is None or gs is None or shift is None:
        return True
    return gt - 2 * deg == gs + shift


def _check_entry(tgt: Generator, src: Generator, bidegree, poly: Poly, what: str):
    dw, dz = bidegree
    for m in poly:
        du, dv = mono_degrees(m)
        if not _entry_feasible(tgt.gr_w, src.gr_w, dw, du):
            raise GradingError(
                f"{what}: entry {poly} from {src.id} to {tgt.id} breaks gr_w "
                f"(bidegree {bidegree})")
        if not _entry_feasible(tgt.gr_z, src.gr_z, dz, dv):
            raise GradingError(
                f"{what}: entry {poly} from {src.id} to {tgt.id} breaks gr_z "
                f"(bidegree {bidegree})")


class CurvedComplex:
    """Finitely generated free curved complex.

    diff maps (target_id, source_id) -> Poly, uncolored.  curvature is
    the uncolored omega.  components, when known, lists the cyclic
    basepoint sequences (alternating w/z labels) of the underlying
    link; stabilization and law configuration read adjacency off it.
    """

    __slots__ = ("generators", "diff", "curvature", "coloring", "components",
                 "ring_vars", "name", "_by_id", "_cdiff", "_comega")

    def __init__(self, generators, diff, curvature, coloring=None,
                 components=None, ring_vars=None, name="", check=True):
        self.generators = tuple(generators)
        self.diff = {k: v for k, v in diff.items() if v}
        self.curvature = curvature
        self.coloring = coloring
        self.components = tuple(tuple(c) for c in components) if components else None
        self.name = name
        self._by_id = {g.id: g for g in self.generators}
        if len(self._by_id) != len(self.generators):
            raise ValueError("duplicate generator ids")
        if ring_vars is None:
            ring_vars = set()
            for p in self.diff.values():
                ring_vars |= p.variables()
            ring_vars |= curvature.variables()
        self.ring_vars = frozenset(ring_vars)
        self._cdiff = None
        self._comega = None
        if check:
            for (t, s), p in self.diff.items():
                if t not in self._by_id or s not in self._by_id:
                    raise ValueError(f"differential entry ({t},{s}) off basis")
                _check_entry(self._by_id[t], self._by_id[s], (-1, -1), p, "d")

    def gen(self, gid: str) -> Generator:
        return self._by_id[gid]

    def ids(self):
        return [g.id for g in self.generators]

    def colored_diff(self) -> dict:
        if self._cdiff is None:
            if self.coloring is None or self.coloring.is_identity():
                self._cdiff = self.diff
            else:
                cd = {}
                for k, p in self.diff.items():
                    cp = self.coloring.apply(p)
                    if cp:
                        cd[k] = cp
                self._cdiff = cd
        return self._cdiff

    def colored_curvature(self) -> Poly:
        if self._comega is None:
            self._comega = color_poly(self.curvature, self.coloring)
        return self._comega

    def colored_vars(self) -> frozenset:
        if self.coloring is None:
            return self.ring_vars
        return frozenset(self.coloring.apply_var(v) for v in self.ring_vars)

    def with_coloring(self, coloring: Coloring | None) -> "CurvedComplex":
        return CurvedComplex(self.generators, self.diff, self.curvature,
                             coloring=coloring, components=self.components,
                             ring_vars=self.ring_vars, name=self.name,
                             check=False)

    def gradings_alive(self):
        gw = all(g.gr_w is not None for g in self.generators)
        gz = all(g.gr_z is not None for g in self.generators)
        return gw, gz

    def __repr__(self):
        return (f"CurvedComplex({self.name or 'unnamed'}: "
                f"{len(self.generators)} gens, {len(self.diff)} entries)")


def same_complex(a: CurvedComplex, b: CurvedComplex) -> bool:
    """Structural interchangeability test for morphism endpoints.

    Distinct builds of the same stabilization tower produce equal but
    not identical objects; sums and compositions accept those.  Name
    and components are deliberately ignored.
    """
    if a is b:
        return True
    if a.generators != b.generators:
        return False
    if a.curvature != b.curvature or a.diff != b.diff:
        return False
    ca = a.coloring.mapping if a.coloring is not None else {}
    cb = b.coloring.mapping if b.coloring is not None else {}
    return ca == cb


def _sparse_compose(a: dict, b: dict):
    # (a o b)[t,s] = sum_m a[t,m] b[m,s]
    by_src = {}
    for (t, m), p in a.items():
        by_src.setdefault(m, []).append((t, p))
    out = {}
    for (m, s), q in b.items():
        for t, p in by_src.get(m, ()):
            k = (t, s)
            r = p * q
            if k in out:
                r = out[k] + r
                if r:
                    out[k] = r
                else:
                    del out[k]
            elif r:
                out[k] = r
    return out


def verify_curvature(C: CurvedComplex):
    """Check d o d = omega . id entrywise on the colored complex.

    Returns ('ok', None) or ('counterexample', (generator_id, defect)).
    The defect polynomial is (d2 entry) - expected, nonzero.
    """
    d = C.colored_diff()
    sq = _sparse_compose(d, d)
    omega = C.colored_curvature()
    for g in C.generators:
        got = sq.pop((g.id, g.id), Poly.zero())
        if got != omega:
            return ("counterexample", (g.id, got + omega))
    for (t, s), p in sq.items():
        if p:
            return ("counterexample", (s, p))
    return ("ok", None)


class Morphism:
    """Graded module map between curved complexes, colored entries.

    bidegree components may be None when the corresponding grading is
    dead on source/target (after specialization).
    """

    __slots__ = ("source", "target", "bidegree", "matrix")

    def __init__(self, source, target, bidegree, matrix, check=True):
        self.source = source
        self.target = target
        self.bidegree = (bidegree[0], bidegree[1])
        self.matrix = {k: v for k, v in matrix.items() if v}
        if check:
            for (t, s), p in self.matrix.items():
                _check_entry(target.gen(t), source.gen(s), self.bidegree, p,
                             "morphism")

    @staticmethod
    def identity(C: CurvedComplex) -> "Morphism":
        gw, gz = C.gradings_alive()
        return Morphism(C, C, (0 if gw else None, 0 if gz else None),
                        {(g.id, g.id): Poly.one() for g in C.generators},
                        check=False)

    @staticmethod
    def zero(source, target, bidegree) -> "Morphism":
        return Morphism(source, target, bidegree, {}, check=False)

    def __add__(self, other: "Morphism") -> "Morphism":
        if self.bidegree != other.bidegree:
            raise ValueError(f"bidegree mismatch {self.bidegree} vs {other.bidegree}")
        if not (same_complex(self.source, other.source)
                and same_complex(self.target, other.target)):
            raise ValueError("sum of morphisms between different complexes")
        out = dict(self.matrix)
        for k, p in other.matrix.items():
            q = out.get(k, Poly.zero()) + p
            if q:
                out[k] = q
            else:
                out.pop(k, None)
        return Morphism(self.source, self.target, self.bidegree, out, check=False)

    def __matmul__(self, other: "Morphism") -> "Morphism":
        # self o other
        if not same_complex(other.target, self.source):
            raise ValueError("composition through mismatched complexes")
        dw = None if (self.bidegree[0] is None or other.bidegree[0] is None) \
            else self.bidegree[0] + other.bidegree[0]
        dz = None if (self.bidegree[1] is None or other.bidegree[1] is None) \
            else self.bidegree[1] + other.bidegree[1]
        return Morphism(other.source, self.target, (dw, dz),
                        _sparse_compose(self.matrix, other.matrix), check=False)

    def scale(self, p: Poly) -> "Morphism":
        degs = p.degrees()
        if degs is None:
            raise ValueError("scalar must be bihomogeneous")
        du, dv = degs
        dw = None if self.bidegree[0] is None else self.bidegree[0] - 2 * du
        dz = None if self.bidegree[1] is None else self.bidegree[1] - 2 * dv
        return Morphism(self.source, self.target, (dw, dz),
                        {k: p * q for k, q in self.matrix.items()}, check=False)

    def boundary(self) -> "Morphism":
        """d(f) = d_target o f + f o d_source in the morphism complex."""
        d2 = self.target.colored_diff()
        d1 = self.source.colored_diff()
        out = _sparse_compose(d2, self.matrix)
        for k, p in _sparse_compose(self.matrix, d1).items():
            q = out.get(k, Poly.zero()) + p
            if q:
                out[k] = q
            else:
                out.pop(k, None)
        dw = None if self.bidegree[0] is None else self.bidegree[0] - 1
        dz = None if self.bidegree[1] is None else self.bidegree[1] - 1
        return Morphism(self.source, self.target, (dw, dz), out, check=False)

    def is_chain_map(self) -> bool:
        return not self.boundary().matrix

    def is_zero(self) -> bool:
        return not self.matrix

    def __eq__(self, other):
        return (isinstance(other, Morphism) and self.matrix == other.matrix
                and self.bidegree == other.bidegree)

    def __hash__(self):
        return hash((self.bidegree, frozenset(self.matrix.items())))

    def entry(self, t: str, s: str) -> Poly:
        return self.matrix.get((t, s), Poly.zero())

    def __repr__(self):
        return f"Morphism(bidegree={self.bidegree}, {len(self.matrix)} entries)"


def phi_action(C: CurvedComplex, w: str) -> Morphism:
    """Basepoint action Phi_w: U_w-derivative of the stored (uncolored)
    differential, colored afterwards.  Bidegree (+1,-1) on live gradings."""
    return _derivative_action(C, VarId("U", w), (1, -1))


def psi_action(C: CurvedComplex, z: str) -> Morphism:
    """Basepoint action Psi_z: V_z-derivative, then coloring.
    Bidegree (-1,+1) on live gradings."""
    return _derivative_action(C, VarId("V", z), (-1, 1))


def _derivative_action(C, v, bidegree):
    from .poly import d1
    gw, gz = C.gradings_alive()
    dw = bidegree[0] if gw else None
    dz = bidegree[1] if gz else None
    mat = {}
    for k, p in C.diff.items():
        q = color_poly(d1(p, v), C.coloring)
        if q:
            mat[k] = q
    return Morphism(C, C, (dw, dz), mat, check=False)


def compose(g: Morphism, f: Morphism) -> Morphism:
    return g @ f


def msum(*fs: Morphism) -> Morphism:
    out = fs[0]
    for f in fs[1:]:
        out = out + f
    return out


_SPECIALIZATIONS = ("V=1", "U=1", "all=0")


def specialize_complex(C: CurvedComplex, which: str) -> CurvedComplex:
    """Whole-kind specialization: V=1, U=1, or all=0.

    V=1 sends every V-kind variable (all colors) to 1; gr_z dies.  The
    curvature always vanishes afterwards: each U_w appears in exactly
    two adjacent pairs of its component cycle, so the specialized sum
    doubles and cancels.  all=0 keeps both gradings and kills every
    monomial with a variable in it.
    """
    if which not in _SPECIALIZATIONS:
        raise ValueError(f"unknown specialization {which!r}")

    if which == "all=0":
        f = set_all_to_zero
        kill_w, kill_z = False, False
        keep = lambda v: False
    elif which == "V=1":
        f = lambda p: set_kind_to_one(p, "V")
        kill_w, kill_z = False, True
        keep = lambda v: v.kind == "U"
    else:
        f = lambda p: set_kind_to_one(p, "U")
        kill_w, kill_z = True, False
        keep = lambda v: v.kind == "V"

    gens = tuple(
        Generator(g.id, g.label,
                  None if kill_w else g.gr_w,
                  None if kill_z else g.gr_z)
        for g in C.generators)
    diff = {}
    for k, p in C.diff.items():
        q = f(p)
        if q:
            diff[k] = q
    return CurvedComplex(
        gens, diff, f(C.curvature), coloring=C.coloring,
        components=C.components,
        ring_vars=frozenset(v for v in C.ring_vars if keep(v)),
        name=f"{C.name}|{which}" if C.name else which,
        check=False)


def specialize_morphism(F: Morphism, which: str,
                        source: CurvedComplex, target: CurvedComplex) -> Morphism:
    """Induced map between already-specialized complexes."""
    if which == "all=0":
        f = set_all_to_zero
        dw, dz = F.bidegree
    elif which == "V=1":
        f = lambda p: set_kind_to_one(p, "V")
        dw, dz = F.bidegree[0], None
    elif which == "U=1":
        f = lambda p: set_kind_to_one(p, "U")
        dw, dz = None, F.bidegree[1]
    else:
        raise ValueError(f"unknown specialization {which!r}")
    matrix = {}
    for k, p in F.matrix.items():
        q = f(p)
        if q:
            matrix[k] = q
    return Morphism(source, target, (dw, dz), matrix, check=False)


# -- serialization: schema "hflc-complex/1" --------------------------------

def complex_to_json(C: CurvedComplex) -> str:
    doc = {
        "version": "hflc-complex/1",
        "generators": [
            {"id": g.id, "label": g.label, "gr_w": g.gr_w, "gr_z": g.gr_z}
            for g in C.generators],
        "coloring": dict(C.coloring.mapping) if C.coloring is not None else {},
        "differential": [
            [t, s, str(p)]
            for (t, s), p in sorted(C.diff.items())],
        "curvature": str(C.curvature),
    }
    return json.dumps(doc, indent=1, sort_keys=True)


def complex_from_json(text: str) -> CurvedComplex:
    doc = json.loads(text)
    if doc.get("version") != "hflc-complex/1":
        raise ValueError(f"unsupported version {doc.get('version')!r}")
    gens = [Generator(g["id"], g["label"], g["gr_w"], g["gr_z"])
            for g in doc["generators"]]
    diff = {}
    for t, s, p in doc["differential"]:
        diff[(t, s)] = parse_poly(p)
    coloring = Coloring(doc["coloring"]) if doc["coloring"] else None
    return CurvedComplex(gens, diff, parse_poly(doc["curvature"]),
                         coloring=coloring)
