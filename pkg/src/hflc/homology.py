"""Homology of curved complexes at curvature zero.

Three modes, matching the reporting needs of the corpus:

  hat          F2 dimensions per bigrading after setting every variable
               to zero.
  truncated(N) graded dimensions of the quotient H(C)/(v^N . H(C)) over
               all ring variables v.  Computed per graded piece as
               ker/(im + v^N ker); this is a statement about the honest
               homology module, not about the homology of a truncated
               complex (the latter differs by Tor terms).
  overU        F2[U]-module shape (free rank + torsion orders) read off
               successive truncated totals.

truncated/overU need a single alive grading (specialize at V=1 or U=1
first); each graded piece of the untruncated complex is then finite
dimensional because the monomial degree is pinned by the grading gap.

Large complexes are first reduced by cancelling differential entries
that are exactly 1 (Gaussian cancellation; a homotopy equivalence, so
all reported dimensions are unchanged).
"""

from __future__ import annotations

import numpy as np

from . import gf2
from .complexes import CurvedComplex, Generator, specialize_complex
from .poly import Poly, mono, mono_degrees, mono_mul, monomials_of_degree


def cancel_units(C: CurvedComplex, limit=None) -> CurvedComplex:
    """Cancel differential entries equal to the monomial 1.

    Returns a homotopy equivalent complex on fewer generators (colored
    differential, identity coloring).  Gradings and curvature carry
    over; component data does not (the reduced basis has no grid
    meaning).  Intended for rank computations only.
    """
    one = Poly.one()
    d = dict(C.colored_diff())
    alive = {g.id for g in C.generators}
    ins, outs = {}, {}  # gen -> set of partners
    for (t, s) in d:
        outs.setdefault(s, set()).add(t)
        ins.setdefault(t, set()).add(s)

    def drop(t, s):
        del d[(t, s)]
        outs[s].discard(t)
        ins[t].discard(s)

    queue = sorted((k for k, p in d.items() if p == one), reverse=True)
    done = 0
    while queue:
        if limit is not None and done >= limit:
            break
        t, s = queue.pop()
        if (t, s) not in d or d[(t, s)] != one or t == s:
            continue
        if t not in alive or s not in alive:
            continue
        done += 1
        alive.discard(t)
        alive.discard(s)
        feeders = [(a, d[(t, a)]) for a in list(ins.get(t, ())) if a != s and a in alive]
        spill = [(b, d[(b, s)]) for b in list(outs.get(s, ())) if b != t and b in alive]
        # clear every edge touching the cancelled pair
        for x in (t, s):
            for a in list(ins.get(x, ())):
                drop(x, a)
            for b in list(outs.get(x, ())):
                drop(b, x)
        for b, cb in spill:
            for a, ca in feeders:
                k = (b, a)
                q = d.get(k, Poly.zero()) + cb * ca
                if q:
                    if k not in d:
                        outs.setdefault(a, set()).add(b)
                        ins.setdefault(b, set()).add(a)
                    d[k] = q
                    if q == one and b != a:
                        queue.append(k)
                else:
                    if k in d:
                        drop(b, a)

    gens = tuple(g for g in C.generators if g.id in alive)
    diff = {k: v for k, v in d.items() if v}
    return CurvedComplex(gens, diff, C.colored_curvature(), coloring=None,
                         ring_vars=C.colored_vars(),
                         name=f"{C.name}/reduced" if C.name else "reduced",
                         check=False)


def _alive_axes(C: CurvedComplex):
    gw, gz = C.gradings_alive()
    axes = []
    if gw:
        axes.append("w")
    if gz:
        axes.append("z")
    return axes


def _gen_key(g: Generator, axes):
    return tuple(g.gr_w if a == "w" else g.gr_z for a in axes)


class _Pieces:
    """Graded pieces of a single-graded complex over one variable kind.

    Basis of the piece at grading d: pairs (generator, monomial) with
    deg(monomial) = (gr(gen) - d) / 2.  Boundary matrices, kernels and
    image ranks are memoized per grading.
    """

    def __init__(self, C: CurvedComplex):
        axes = _alive_axes(C)
        if len(axes) != 1:
            raise ValueError("need exactly one alive grading; specialize first")
        self.axis = axes[0]
        kind = "U" if self.axis == "w" else "V"
        self.vars = sorted(C.colored_vars(), key=lambda v: v.sort_key)
        if any(v.kind != kind for v in self.vars):
            raise ValueError(f"stray variables of the dead kind in {C!r}")
        self.C = C
        self.gr = {g.id: _gen_key(g, axes)[0] for g in C.generators}
        self.by_src = {}
        for (t, s), p in C.colored_diff().items():
            self.by_src.setdefault(s, []).append((t, p))
        self._basis, self._index, self._bnd, self._ker = {}, {}, {}, {}

    def basis(self, d):
        if d not in self._basis:
            els = []
            for g in self.C.generators:
                gap = self.gr[g.id] - d
                if gap < 0 or gap % 2:
                    continue
                for m in monomials_of_degree(self.vars, gap // 2):
                    els.append((g.id, m))
            self._basis[d] = els
            self._index[d] = {e: i for i, e in enumerate(els)}
        return self._basis[d]

    def boundary(self, d) -> gf2.GF2Matrix:
        """Matrix of the differential piece(d) -> piece(d-1)."""
        if d not in self._bnd:
            src = self.basis(d)
            self.basis(d - 1)
            tgt_index = self._index[d - 1]
            m = gf2.GF2Matrix(len(self._basis[d - 1]), len(src))
            for j, (x, mx) in enumerate(src):
                for (y, p) in self.by_src.get(x, ()):
                    for cm in p:
                        i = tgt_index[(y, mono_mul(cm, mx))]
                        m.data[i, j >> 6] ^= np.uint64(1 << (j & 63))
            self._bnd[d] = m
        return self._bnd[d]

    def kernel(self, d):
        if d not in self._ker:
            self._ker[d] = gf2.nullspace(self.boundary(d))
        return self._ker[d]

    def quotient_dim(self, d, N) -> int:
        """dim of ( ker / (im + sum_v v^N ker) ) at grading d."""
        ker = self.kernel(d)
        if not ker:
            return 0
        dim = len(self.basis(d))
        shifted = []
        idx = self._index[d]
        for v in self.vars:
            lift = mono((v, N))
            for k in self.kernel(d + 2 * N):
                vec = np.zeros(dim, dtype=np.int64)
                for i in np.nonzero(k)[0]:
                    g, m = self.basis(d + 2 * N)[i]
                    vec[idx[(g, mono_mul(m, lift))]] = 1
                shifted.append(vec)
        blocks = [self.boundary(d + 1).transpose()]
        if shifted:
            blocks.append(gf2.from_vectors(shifted, dim))
        sub = gf2.vstack(blocks).rank() if blocks else 0
        return len(ker) - sub

    def homology_dim(self, d) -> int:
        return len(self.kernel(d)) - self.boundary(d + 1).rank()


def _require_flat(C: CurvedComplex):
    if C.colored_curvature():
        raise ValueError("nonzero curvature; homology undefined")


def hat_dims(C: CurvedComplex):
    """F2 dimensions of the fully specialized complex, per grading key."""
    H = specialize_complex(C, "all=0")
    axes = _alive_axes(H)
    by_key = {}
    for g in H.generators:
        by_key.setdefault(_gen_key(g, axes), []).append(g.id)
    # boundary maps keyed by source grading, filled in one sweep
    mats = {key: gf2.GF2Matrix(len(by_key.get(tuple(k - 1 for k in key), [])),
                               len(gens))
            for key, gens in by_key.items()}
    index = {key: {g: i for i, g in enumerate(gens)} for key, gens in by_key.items()}
    for (t, s), p in H.colored_diff().items():
        skey = _gen_key(H.gen(s), axes)
        tkey = _gen_key(H.gen(t), axes)
        if tuple(k - 1 for k in skey) != tkey:
            raise ValueError("hat differential is not grading homogeneous")
        j = index[skey][s]
        i = index[tkey][t]
        mats[skey].data[i, j >> 6] ^= np.uint64(1 << (j & 63))
    dims = {}
    for key, gens in by_key.items():
        out_rank = mats[key].rank()
        up = tuple(k + 1 for k in key)
        in_rank = mats[up].rank() if up in by_key else 0
        dim = len(gens) - out_rank - in_rank
        if dim:
            dims[key] = dim
    return dims


def truncated_dims(C: CurvedComplex, N: int, pad: int = 2):
    """Graded dims of H(C)/(v^N H(C)), with a zero-tail certificate.

    Scans gradings from the top generator down to (bottom generator
    - 2N - 2 pad); tail_zero reports whether the lowest pad+1 scanned
    gradings all vanish, which certifies the listed support for any
    module generated in the scan window.
    """
    _require_flat(C)
    if not C.colored_vars():
        dims = hat_dims(C)
        return {"dims": dims, "total": sum(dims.values()), "tail_zero": True}
    P = _Pieces(C)
    grs = sorted(P.gr.values())
    top, bot = grs[-1], grs[0] - 2 * N - 2 * pad
    dims = {}
    for d in range(top, bot - 1, -1):
        q = P.quotient_dim(d, N)
        if q:
            dims[d] = q
    tail = all(dims.get(d, 0) == 0 for d in range(bot, bot + 2 * pad + 1))
    return {"dims": dims, "total": sum(dims.values()), "tail_zero": tail}


def over_u(C: CurvedComplex, cap: int = 6):
    """F2[U]-module shape of H(C) from successive truncation quotients.

    d_N := dim H/(v^N H) - dim H/(v^{N-1} H) equals free_rank plus the
    number of torsion summands of order >= N, so the sequence is non
    increasing and stabilizes at the free rank.  'stable' is False if
    it has not settled by the cap (torsion orders >= cap-1 would hide
    in the free rank); orders are then reported as far as visible.
    """
    _require_flat(C)
    totals = []
    for NN in range(1, cap + 1):
        totals.append(truncated_dims(C, NN)["total"])
    diffs = [totals[0]] + [b - a for a, b in zip(totals, totals[1:])]
    free = diffs[-1]
    stable = len(diffs) >= 2 and diffs[-1] == diffs[-2]
    torsion = []
    for j, dj in enumerate(diffs[:-1], start=1):
        torsion.extend([j] * (dj - (diffs[j] if j < len(diffs) else free)))
    return {"free_rank": free, "torsion": torsion, "stable": stable,
            "quotient_dims": totals}


def over_u_graded(C: CurvedComplex):
    """Exact F2[U]-module shape of H(C) for a homogeneous complex.

    Needs a single U-color, no V variables, gr_w alive, zero curvature
    and a grading-homogeneous differential.  Unlike over_u this is not
    capped: every torsion order is reported exactly.

    Valuation-ordered column reduction: homogeneity pins the entry in
    row r of the column born at grading g to the single monomial
    U^((gr_r - g + 1)/2), so with columns processed by descending
    grading every pivot clash is reducible (the established owner has
    the smaller exponent and divides).  Reduced columns pair a birth
    with a death; pivot exponent = torsion order, exponent 0 = an
    acyclic pair.
    """
    _require_flat(C)
    cvars = C.colored_vars()
    if any(v.kind != "U" for v in cvars) or len(cvars) > 1:
        raise ValueError("over_u_graded needs a single U-color and no V variables")
    if not all(g.gr_w is not None for g in C.generators):
        raise ValueError("over_u_graded needs gr_w alive")

    ids = [g.id for g in C.generators]
    order = sorted(range(len(ids)),
                   key=lambda i: (-C.generators[i].gr_w, ids[i]))
    pos = {ids[i]: r for r, i in enumerate(order)}
    cols = {r: {} for r in range(len(ids))}
    for (t, s), p in C.colored_diff().items():
        for m in p:
            cols[pos[s]][pos[t]] = sum(e for _, e in m)

    owner = {}
    for j in range(len(ids)):
        col = cols[j]
        while col:
            r = max(col)
            if r not in owner:
                owner[r] = j
                break
            j2 = owner[r]
            shift = col[r] - cols[j2][r]
            if shift < 0:
                raise ValueError("differential is not grading homogeneous")
            for rr, e in cols[j2].items():
                if col.get(rr) == e + shift:
                    del col[rr]
                else:
                    col[rr] = e + shift
    pivots = [cols[j][r] for r, j in owner.items()]
    return {"free_rank": len(ids) - 2 * len(pivots),
            "torsion": sorted(a for a in pivots if a > 0)}


def u_tower_report(C: CurvedComplex, N: int = 4):
    """Graded window scan of H(C) for a V=1 complex over its full
    multi-U ring (no coloring needed).

    Walks gradings from the top generator down to depth 2N+2 and
    reports, per grading g in the window, the F2 dimension of H_g and
    the rank of U_1 : H_g -> H_{g-2}.  A free rank-one F2[U]-tower
    shows dims identically 1 and u_ranks identically 1.  Module
    generators of H can only sit in generator gradings, so within the
    window the scan is a complete certificate.
    """
    if not all(g.gr_w is not None for g in C.generators):
        raise ValueError("u_tower_report needs gr_w alive")
    uvars = sorted(C.colored_vars(), key=lambda v: v.sort_key)
    if any(v.kind != "U" for v in uvars):
        raise ValueError("u_tower_report expects a V-specialized complex")
    by_src = {}
    for (t, s), p in C.colored_diff().items():
        by_src.setdefault(s, []).append((t, p))
    g_top = max(g.gr_w for g in C.generators)
    g_bot = g_top - 2 * N - 2

    def basis_at(g):
        out = []
        for gen in C.generators:
            gap = gen.gr_w - g
            if gap >= 0 and gap % 2 == 0:
                for m in monomials_of_degree(uvars, gap // 2):
                    out.append((gen.id, m))
        return out

    bases = {g: basis_at(g) for g in range(g_bot - 1, g_top + 2)}
    index = {g: {bm: i for i, bm in enumerate(bases[g])} for g in bases}

    def d_cols(g):
        rows = index[g - 1]
        out = []
        for s, m in bases[g]:
            hits = []
            for t, p in by_src.get(s, ()):
                for q in p:
                    hits.append(rows[(t, mono_mul(q, m))])
            out.append(hits)
        return out

    def matrix_of(colrows, nrows):
        entries = [(r, ci) for ci, hits in enumerate(colrows) for r in hits]
        return gf2.GF2Matrix.from_entries(nrows, len(colrows), entries)

    cols_cache = {g: d_cols(g) for g in range(g_bot, g_top + 2)}
    mats = {g: matrix_of(cols_cache[g], len(bases[g - 1]))
            for g in cols_cache}
    ranks = {g: m.rank() for g, m in mats.items()}

    dims = {g: len(bases[g]) - ranks.get(g, 0) - ranks.get(g + 1, 0)
            for g in range(g_bot + 1, g_top + 1)}

    u1 = mono((uvars[0], 1))
    uranks = {}
    for g in range(g_bot + 3, g_top + 1):
        # rank of U_1 on homology as rank(U ker + im) - rank(im)
        Z = gf2.nullspace(mats[g]) if bases[g] else []
        if not Z:
            uranks[g] = 0
            continue
        tgt = index[g - 2]
        width = len(bases[g - 2])
        uvecs = []
        for v in Z:
            w = np.zeros(width, dtype=np.int64)
            for i in np.nonzero(v)[0]:
                gid, m = bases[g][i]
                w[tgt[(gid, mono_mul(m, u1))]] ^= 1
            uvecs.append(w)
        bvecs = []
        for hits in cols_cache[g - 1]:
            if hits:
                w = np.zeros(width, dtype=np.int64)
                for r in hits:
                    w[r] ^= 1
                bvecs.append(w)
        nb = gf2.from_vectors(bvecs, width).rank() if bvecs else 0
        both = gf2.from_vectors(bvecs + uvecs, width).rank()
        uranks[g] = both - nb
    return {"g_top": g_top, "dims": dims, "u_ranks": uranks,
            "window": (g_bot + 1, g_top)}


def homology(C: CurvedComplex, mode, N: int = 4, cap: int = 6, reduce=True):
    """Rank tables per the mode: 'hat', 'truncated', or 'overU'."""
    if mode == "hat":
        dims = hat_dims(C)
        return {"mode": "hat", "dims": dims, "total": sum(dims.values())}
    if reduce and len(C.generators) > 8:
        C = cancel_units(C)
    if mode == "truncated":
        out = truncated_dims(C, N)
        return {"mode": "truncated", "N": N, **out}
    if mode == "overU":
        try:
            # exact torsion is always settled, hence stable
            return {"mode": "overU", "exact": True, "stable": True,
                    **over_u_graded(C)}
        except ValueError:
            pass
        return {"mode": "overU", "exact": False, **over_u(C, cap=cap)}
    raise ValueError(f"unknown homology mode {mode!r}")
