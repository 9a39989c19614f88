"""Filtered equivariant chain homotopy solver.

Finds H with dH + Hd = f + g over the colored ring, or reports that
none exists within the ansatz.  Unknowns are F2 bits, one per
(target generator, source generator, feasible monomial); the bidegree
pins the monomial's U- and V-degrees through the grading rule, so with
one variable per kind each pair carries at most one unknown and the
system is at most |gens|^2 bits.

With several same-kind variables the pinned total degree fans out into
all monomials of that degree.  Two honesty caps keep the system finite
and the reporting sound:

  cap     exponent cap: pairs whose pinned degree exceeds it (with >= 2
          variables of that kind) are excluded.
  budget  unknown budget: pairs enter the ansatz in tiers of increasing
          pinned degree while the cumulative system fits the budget.

"none" is only reported when the full feasible system was refuted with
neither cap biting; otherwise the verdict is "inconclusive-at-cap".
Any returned homotopy is re-verified exactly before it leaves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .complexes import Morphism
from .poly import Poly, mono_mul, monomials_of_degree


@dataclass
class SolveReport:
    status: str  # "homotopy" | "none" | "inconclusive-at-cap"
    homotopy: Morphism | None
    unknowns: int
    equations: int
    capped: bool
    tier: int | None = None

    def __bool__(self):
        return self.status == "homotopy"


def _kind_vars(source, target):
    uni = sorted(source.colored_vars() | target.colored_vars(),
                 key=lambda v: v.sort_key)
    return [v for v in uni if v.kind == "U"], [v for v in uni if v.kind == "V"]


def _pinned(shift, kindvars, grt, grs):
    # pinned total degree for one kind, or None if infeasible
    if grt is None or grs is None or shift is None:
        if kindvars:
            raise ValueError("variables of a kind whose grading is dead")
        return 0
    q = grt - grs - shift
    if q < 0 or q % 2:
        return None
    return q // 2


def _candidate_pairs(source, target, bidegree, cap):
    """Grading-feasible (t, s, du, dv); second value is the cap flag."""
    uvars, vvars = _kind_vars(source, target)
    dw, dz = bidegree
    pairs, capped = [], False
    for t in target.generators:
        for s in source.generators:
            du = _pinned(dw, uvars, t.gr_w, s.gr_w)
            if du is None:
                continue
            dv = _pinned(dz, vvars, t.gr_z, s.gr_z)
            if dv is None:
                continue
            if (du > cap and len(uvars) > 1) or (dv > cap and len(vvars) > 1):
                capped = True
                continue
            pairs.append((t.id, s.id, du, dv))
    return pairs, capped


class _System:
    """Assembler for d2 H + H d1 acting on (pair, monomial) unknowns."""

    def __init__(self, source, target):
        self.uvars, self.vvars = _kind_vars(source, target)
        self.d2_by_src = {}
        for (t2, t), p in target.colored_diff().items():
            self.d2_by_src.setdefault(t, []).append((t2, p))
        self.d1_by_tgt = {}
        for (s, s0), p in source.colored_diff().items():
            self.d1_by_tgt.setdefault(s, []).append((s0, p))

    def count(self, pairs):
        return sum(len(monomials_of_degree(self.uvars, du))
                   * len(monomials_of_degree(self.vvars, dv))
                   for (_, _, du, dv) in pairs)

    def assemble(self, pairs, rhs_matrix):
        unknowns = []
        for (t, s, du, dv) in pairs:
            for a in monomials_of_degree(self.uvars, du):
                for b in monomials_of_degree(self.vvars, dv):
                    unknowns.append((t, s, mono_mul(a, b)))
        rows, entries = {}, []

        def row(key):
            if key not in rows:
                rows[key] = len(rows)
            return rows[key]

        for col, (t, s, m) in enumerate(unknowns):
            for (t2, p) in self.d2_by_src.get(t, ()):
                for cm in p:
                    entries.append((row((t2, s, mono_mul(cm, m))), col))
            for (s0, p) in self.d1_by_tgt.get(s, ()):
                for cm in p:
                    entries.append((row((t, s0, mono_mul(m, cm))), col))
        b = set()
        for (t, s), p in rhs_matrix.items():
            for m in p:
                b.add(row((t, s, m)))
        A = gf2.GF2Matrix.from_entries(len(rows), len(unknowns), entries)
        bvec = np.zeros(len(rows), dtype=np.int64)
        for r in b:
            bvec[r] = 1
        return A, bvec, unknowns


def _as_morphism(x, unknowns, source, target, bidegree):
    matrix = {}
    for col in np.nonzero(np.asarray(x))[0]:
        t, s, m = unknowns[col]
        matrix[(t, s)] = matrix.get((t, s), Poly.zero()) + Poly((m,))
    return Morphism(source, target, bidegree, matrix)


def homotopy_solve(f: Morphism, g: Morphism | None = None, cap: int = 8,
                   budget: int = 15000) -> SolveReport:
    """H with dH + Hd = f + g, within the feasible-monomial ansatz."""
    if g is not None:
        if g.bidegree != f.bidegree:
            raise ValueError("f and g must share bidegree")
        D = f + g
    else:
        D = f
    source, target = f.source, f.target
    if source.colored_curvature() != target.colored_curvature():
        raise ValueError("curvature mismatch; no homotopies between these")
    dw, dz = f.bidegree
    hdeg = (None if dw is None else dw + 1, None if dz is None else dz + 1)
    if D.is_zero():
        return SolveReport("homotopy", Morphism.zero(source, target, hdeg),
                           0, 0, False)

    pairs, exp_capped = _candidate_pairs(source, target, hdeg, cap)
    system = _System(source, target)
    tiers = sorted({max(du, dv) for (_, _, du, dv) in pairs})
    budget_capped = False
    attempted, nun, neq = [], 0, 0
    for k in tiers:
        chosen = [p for p in pairs if max(p[2], p[3]) <= k]
        if system.count(chosen) > budget:
            budget_capped = True
            break
        attempted = chosen
        A, b, unknowns = system.assemble(chosen, D.matrix)
        nun, neq = len(unknowns), A.rows
        x = gf2.solve(A, b)
        if x is not None:
            H = _as_morphism(x, unknowns, source, target, hdeg)
            if not (H.boundary() + D).is_zero():
                raise AssertionError("solver returned an invalid homotopy")
            return SolveReport("homotopy", H, nun, neq, False, k)
    full = (not budget_capped) and (not exp_capped) \
        and len(attempted) == len(pairs)
    if full:
        return SolveReport("none", None, nun, neq, False)
    return SolveReport("inconclusive-at-cap", None, nun, neq, True)


def chain_map_space(source, target, bidegree, cap: int = 8,
                    budget: int = 15000):
    """Basis of the equivariant chain maps of one bidegree.

    Solves dF + Fd = 0 on the full feasible ansatz and returns
    (morphism basis, capped flag).  The zero map is not listed; an
    empty basis with capped=False certifies that 0 is the only map.
    """
    pairs, exp_capped = _candidate_pairs(source, target, bidegree, cap)
    system = _System(source, target)
    if system.count(pairs) > budget:
        return [], True
    A, _, unknowns = system.assemble(pairs, {})
    basis = [_as_morphism(v, unknowns, source, target, bidegree)
             for v in gf2.nullspace(A)]
    return basis, exp_capped
