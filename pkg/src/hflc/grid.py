"""Grid diagrams for links in S3 and their curved complexes.

Coordinates: columns and rows are 0-indexed internally and 1-indexed in
files and labels.  The O marker in column c is basepoint w{c+1}, the X
marker is z{c+1}.  Markers sit at cell centers (c+1/2, r+1/2) on the
torus [0,n)^2; a generator occupies the grid-line intersections
(c, p(c)) of a permutation p.

Orientation convention, used everywhere: within a row the link runs
from the O to the X marker (w -> z), within a column from X to O
(z -> w).  Traversing a component therefore alternates
w_c -> z_{c'} -> w_{c'} -> ... with c' the column of the X in w_c's row.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import random
import tempfile
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import poly
from .complexes import CurvedComplex, Generator, Morphism, phi_action, psi_action
from .poly import Coloring, Poly, Uvar, Vvar, color_poly, parse_poly

GRIDDIFF_VERSION = "hflc-griddiff/1"


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class GridDiagram:
    """O and X are 1-indexed column -> row permutations."""

    O: tuple
    X: tuple

    def __post_init__(self):
        object.__setattr__(self, "O", tuple(self.O))
        object.__setattr__(self, "X", tuple(self.X))
        n = len(self.O)
        if n < 2:
            raise GridError("grid size must be at least 2")
        for name, perm in (("O", self.O), ("X", self.X)):
            if sorted(perm) != list(range(1, n + 1)):
                raise GridError(f"{name} is not a permutation of 1..{n}")
        for c in range(n):
            if self.O[c] == self.X[c]:
                raise GridError(f"O and X share the cell in column {c + 1}")

    @property
    def n(self) -> int:
        return len(self.O)

    # 0-indexed views for the combinatorics
    @property
    def O0(self):
        return tuple(r - 1 for r in self.O)

    @property
    def X0(self):
        return tuple(r - 1 for r in self.X)

    def to_text(self, coloring: Coloring | None = None) -> str:
        lines = [f"grid {self.n}",
                 "O " + " ".join(str(r) for r in self.O),
                 "X " + " ".join(str(r) for r in self.X)]
        if coloring is not None and not coloring.is_identity():
            by_color = {}
            for label, name in coloring.mapping.items():
                by_color.setdefault(name, []).append(label)
            for name in sorted(by_color):
                labels = sorted(by_color[name],
                                key=lambda s: (s[0], len(s), s))
                lines.append("color " + " ".join(labels) + " -> " + name)
        return "\n".join(lines) + "\n"

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]

    def components(self):
        """Cyclic basepoint sequences in traversal order, one per link
        component, each starting at its lowest-numbered w."""
        xinv = [0] * self.n
        for c, r in enumerate(self.X0):
            xinv[r] = c
        seen = set()
        comps = []
        for c0 in range(self.n):
            if c0 in seen:
                continue
            cyc, c = [], c0
            while True:
                seen.add(c)
                nxt = xinv[self.O0[c]]  # z in w_c's row
                cyc.append(f"w{c + 1}")
                cyc.append(f"z{nxt + 1}")
                c = nxt
                if c == c0:
                    break
            comps.append(tuple(cyc))
        return tuple(comps)

    def basepoints(self):
        return [f"w{c}" for c in range(1, self.n + 1)] + \
               [f"z{c}" for c in range(1, self.n + 1)]


def parse_grid(text: str):
    """Parse .grid text; returns (GridDiagram, Coloring or None)."""
    O = X = n = None
    colors = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        try:
            if tok[0] == "grid":
                n = int(tok[1])
            elif tok[0] in ("O", "X"):
                if n is None:
                    raise GridError(f"line {lineno}: 'grid <n>' must come "
                                    "before marker lines")
                rows = tuple(int(t) for t in tok[1:])
                if len(rows) != n:
                    raise GridError(f"line {lineno}: expected {n} rows")
                if tok[0] == "O":
                    O = rows
                else:
                    X = rows
            elif tok[0] == "color":
                if "->" not in tok or tok.index("->") != len(tok) - 2:
                    raise GridError(f"line {lineno}: color syntax is "
                                    "'color <label>... -> <name>'")
                name = tok[-1]
                for label in tok[1:-2]:
                    if label in colors and colors[label] != name:
                        raise GridError(
                            f"line {lineno}: conflicting color for {label}")
                    colors[label] = name
            else:
                raise GridError(f"line {lineno}: unknown directive {tok[0]!r}")
        except (ValueError, IndexError) as exc:
            if isinstance(exc, GridError):
                raise
            raise GridError(f"line {lineno}: {exc}") from exc
    if n is None or O is None or X is None:
        raise GridError("file must contain grid, O and X lines")
    try:
        G = GridDiagram(O, X)
    except GridError as exc:
        raise GridError(str(exc)) from None
    for label in colors:
        idx = label[1:]
        if label[0] not in "wz" or not idx.isdigit() or not 1 <= int(idx) <= n:
            raise GridError(f"color line references unknown basepoint {label}")
    return G, (Coloring(colors) if colors else None)


def load_grid(path):
    with open(path, encoding="utf-8") as fh:
        return parse_grid(fh.read())


# rectangle combinatorics -----------------------------------------------

Rect = namedtuple("Rect", "c0 width r0 height")


def _in_span(v, start, length, n):
    return (v - start) % n < length


def rect_contains(rect: Rect, c, r, n) -> bool:
    return _in_span(c, rect.c0, rect.width, n) and \
        _in_span(r, rect.r0, rect.height, n)


def rectangles(n, x, y):
    """The rectangles from x to y (0-indexed permutations), ignoring
    emptiness.  Nonempty exactly when y = x composed with a transposition,
    in which case there are two (the census invariant)."""
    cols = [c for c in range(n) if x[c] != y[c]]
    if len(cols) != 2:
        return []
    i, j = cols
    if x[i] != y[j] or x[j] != y[i]:
        return []
    a, b = x[i], x[j]
    return [Rect(i, (j - i) % n, a, (b - a) % n),
            Rect(j, (i - j) % n, b, (a - b) % n)]


def _rect_is_empty(rect, x, n):
    # no generator point in the open interior; boundary points are fine
    for k in range(1, rect.width):
        c = (rect.c0 + k) % n
        if 0 < (x[c] - rect.r0) % n < rect.height:
            return False
    return True


def _rect_monomial(G: GridDiagram, rect: Rect) -> tuple:
    n = G.n
    pairs = []
    for c in range(n):
        if _in_span(c, rect.c0, rect.width, n):
            if _in_span(G.O0[c], rect.r0, rect.height, n):
                pairs.append((Uvar(f"w{c + 1}"), 1))
            if _in_span(G.X0[c], rect.r0, rect.height, n):
                pairs.append((Vvar(f"z{c + 1}"), 1))
    return poly.mono(*pairs)


def empty_rectangles(G: GridDiagram, x):
    """Empty rectangles leaving x: yields (y, rect) pairs."""
    n = G.n
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            y = list(x)
            y[i], y[j] = x[j], x[i]
            for rect in rectangles(n, x, tuple(y)):
                if _rect_is_empty(rect, x, n):
                    out.append((tuple(y), rect))
    return out


# gradings ---------------------------------------------------------------

def _maslov(n, perm, markers):
    """J-formula Maslov grading of perm against one marker family."""
    jxx = sum(1 for i in range(n) for j in range(i + 1, n)
              if perm[i] < perm[j])
    jmm = sum(1 for i in range(n) for j in range(i + 1, n)
              if markers[i] < markers[j])
    # point (i, p_i) vs center (c+1/2, m_c+1/2); strict dominance
    cross = 0
    for i in range(n):
        for c in range(n):
            if i <= c and perm[i] <= markers[c]:
                cross += 1
            if c < i and markers[c] < perm[i]:
                cross += 1
    return jxx - cross + jmm + 1


def gen_id(perm) -> str:
    sep = "" if len(perm) <= 9 else "."
    return "x" + sep.join(str(r + 1) for r in perm)


def gradings(G: GridDiagram):
    """(gr_w, gr_z) per generator id, from the J-formula."""
    data = _grid_data(G)
    return {gid: (gw, gz) for gid, gw, gz in data.gens}


def alexander(G: GridDiagram):
    """Alexander grading A = (gr_w - gr_z - n + #components)/2."""
    shift = G.n - len(G.components())
    out = {}
    for gid, gw, gz in _grid_data(G).gens:
        q = gw - gz - shift
        if q % 2:
            raise AssertionError("Alexander grading is not an integer")
        out[gid] = q // 2
    return out


# differential with disk cache -------------------------------------------

@dataclass
class _GridData:
    gens: list          # (id, gr_w, gr_z), in permutation order
    diff: dict          # (tgt_id, src_id) -> uncolored Poly


_DATA_MEMO: dict = {}
_COMPLEX_MEMO: dict = {}


def _source_row(G, x):
    row = {}
    xid = gen_id(x)
    for y, rect in empty_rectangles(G, x):
        key = (gen_id(y), xid)
        m = _rect_monomial(G, rect)
        cur = row.get(key)
        row[key] = (cur ^ {m}) if cur is not None else {m}
    return row


def _compute_data(G: GridDiagram, threads=None) -> _GridData:
    n = G.n
    gens = []
    for p in itertools.permutations(range(n)):
        gens.append((gen_id(p), _maslov(n, p, G.O0), _maslov(n, p, G.X0)))
    perms = list(itertools.permutations(range(n)))
    diff = {}
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for row in pool.map(lambda x: _source_row(G, x), perms,
                                chunksize=max(1, len(perms) // threads)):
                diff.update(row)
    else:
        for x in perms:
            diff.update(_source_row(G, x))
    diff = {k: Poly(ms) for k, ms in diff.items() if ms}
    return _GridData(gens, diff)


def _cache_file(G: GridDiagram):
    root = os.environ.get("HFLC_CACHE_DIR")
    if not root:
        return None
    return os.path.join(root, f"griddiff-{G.content_hash()}.json")


def _store_cache(G, data: _GridData):
    path = _cache_file(G)
    if path is None:
        return
    doc = {
        "version": GRIDDIFF_VERSION,
        "grid": G.to_text(),
        "generators": [[gid, gw, gz] for gid, gw, gz in data.gens],
        "differential": sorted([t, s, str(p)]
                               for (t, s), p in data.diff.items()),
    }
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".",
                               suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=0, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_cache(G: GridDiagram):
    """Cached differential, re-verified on a sample of source rows."""
    path = _cache_file(G)
    if path is None or not os.path.exists(path):
        return None
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        if doc.get("version") != GRIDDIFF_VERSION or \
                doc.get("grid") != G.to_text():
            return None
        gens = [(gid, int(gw), int(gz)) for gid, gw, gz in doc["generators"]]
        diff = {(t, s): parse_poly(ptxt)
                for t, s, ptxt in doc["differential"]}
    except (KeyError, ValueError, TypeError, json.JSONDecodeError):
        return None
    perms = list(itertools.permutations(range(G.n)))
    if len(gens) != len(perms) or \
            {gid for gid, _, _ in gens} != {gen_id(p) for p in perms}:
        return None
    for x in random.sample(perms, min(3, len(perms))):
        want = {k: Poly(ms) for k, ms in _source_row(G, x).items() if ms}
        got = {k: p for k, p in diff.items() if k[1] == gen_id(x)}
        if want != got:
            return None
        i = perms.index(x)
        if gens[i][1] != _maslov(G.n, x, G.O0) or \
                gens[i][2] != _maslov(G.n, x, G.X0):
            return None
    return _GridData(gens, diff)


def _grid_data(G: GridDiagram, threads=None, use_cache=True) -> _GridData:
    key = G.content_hash()
    if key in _DATA_MEMO:
        return _DATA_MEMO[key]
    data = _load_cache(G) if use_cache else None
    if data is None:
        data = _compute_data(G, threads)
        if use_cache:
            _store_cache(G, data)
    _DATA_MEMO[key] = data
    return data


def build_complex(G: GridDiagram, coloring: Coloring | None = None,
                  threads=None, use_cache=True) -> CurvedComplex:
    """The curved complex of the grid over its basepoint variables.

    Generators are the n! matchings; the differential counts empty
    rectangles with their full U/V marker weights (uncolored; the
    coloring is applied lazily by the complex).  Memoized per
    (grid, coloring) so that morphisms built separately share endpoints.
    """
    ckey = (G.content_hash(),
            frozenset(coloring.mapping.items()) if coloring else None)
    if ckey in _COMPLEX_MEMO:
        return _COMPLEX_MEMO[ckey]
    data = _grid_data(G, threads, use_cache)
    comps = G.components()
    gens = [Generator(gid, gid[1:], gw, gz) for gid, gw, gz in data.gens]
    ring = tuple(Uvar(f"w{c}") for c in range(1, G.n + 1)) + \
        tuple(Vvar(f"z{c}") for c in range(1, G.n + 1))
    C = CurvedComplex(gens, data.diff, poly.curvature(comps),
                      coloring=coloring, components=comps, ring_vars=ring,
                      name=f"grid{G.n}:{G.content_hash()[:8]}")
    _COMPLEX_MEMO[ckey] = C
    return C


def _check_basepoint(G, label, kind):
    idx = label[1:]
    if label[:1] != kind or not idx.isdigit() or not 1 <= int(idx) <= G.n:
        raise GridError(f"unknown basepoint {label!r}")
    return int(idx) - 1


def phi(G: GridDiagram, coloring: Coloring | None, w: str) -> Morphism:
    """Basepoint action Phi_w: the U_w-derivative of the differential,
    taken before coloring."""
    _check_basepoint(G, w, "w")
    return phi_action(build_complex(G, coloring), w)


def psi(G: GridDiagram, coloring: Coloring | None, z: str) -> Morphism:
    """Basepoint action Psi_z: the V_z-derivative of the differential."""
    _check_basepoint(G, z, "z")
    return psi_action(build_complex(G, coloring), z)


# paths and relative homology maps ---------------------------------------

@dataclass(frozen=True)
class GridPath:
    """An embedded path of cell centers on the torus.

    cells are 0-indexed (column, row) pairs; consecutive cells differ
    by one step in exactly one coordinate (mod n).  Each step crosses
    one grid circle: vertical steps cross a horizontal (alpha) circle,
    horizontal steps a vertical (beta) circle.
    """

    n: int
    cells: tuple

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(tuple(c) for c in self.cells))
        if len(self.cells) < 2:
            raise GridError("path needs at least two cells")
        if len(set(self.cells)) != len(self.cells):
            raise GridError("path is not embedded")
        for (c1, r1), (c2, r2) in zip(self.cells, self.cells[1:]):
            dc = (c2 - c1) % self.n, (c1 - c2) % self.n
            dr = (r2 - r1) % self.n, (r1 - r2) % self.n
            hstep = r1 == r2 and 1 in dc
            vstep = c1 == c2 and 1 in dr
            if not (hstep or vstep):
                raise GridError(f"cells {(c1, r1)} and {(c2, r2)} "
                                "are not adjacent")

    def steps(self):
        for a, b in zip(self.cells, self.cells[1:]):
            yield a, b, ("v" if a[0] == b[0] else "h")

    def crossing_weight(self, rect: Rect, side: str) -> int:
        """Multiplicity jump count of rect across alpha circles (side
        'A', vertical steps) or beta circles (side 'B'), mod 2."""
        axis = "v" if side == "A" else "h"
        total = 0
        for a, b, ax in self.steps():
            if ax != axis:
                continue
            total ^= rect_contains(rect, a[0], a[1], self.n) ^ \
                rect_contains(rect, b[0], b[1], self.n)
        return total


def _cell_run(n, start, end, fixed, axis):
    # inclusive run of cells from start to end stepping +1 mod n
    length = (end - start) % n
    if axis == "h":
        return [((start + k) % n, fixed) for k in range(length + 1)]
    return [(fixed, (start + k) % n) for k in range(length + 1)]


LinkArc = namedtuple("LinkArc", "path start end through")


def link_arc(G: GridDiagram, through: str) -> LinkArc:
    """The link arc through one basepoint, as a grid path between its
    two neighbours.  Through a z: from the w in its row to the w in its
    column.  Through a w: from the z in its column to the z in its row.
    The turning cell is the basepoint's own cell."""
    n = G.n
    if through[:1] == "z":
        c = _check_basepoint(G, through, "z")
        zrow = G.X0[c]
        c1 = G.O0.index(zrow)
        run1 = _cell_run(n, c1, c, zrow, "h")
        run2 = _cell_run(n, zrow, G.O0[c], c, "v")
        return LinkArc(GridPath(n, run1 + run2[1:]),
                       f"w{c1 + 1}", f"w{c + 1}", through)
    c = _check_basepoint(G, through, "w")
    wrow = G.O0[c]
    run1 = _cell_run(n, G.X0[c], wrow, c, "v")
    c2 = G.X0.index(wrow)
    run2 = _cell_run(n, c, c2, wrow, "h")
    return LinkArc(GridPath(n, run1 + run2[1:]),
                   f"z{c + 1}", f"z{c2 + 1}", through)


def basepoint_path(G: GridDiagram, a: str, b: str) -> GridPath:
    """An embedded L-shaped path between two same-kind basepoints."""
    if a[:1] != b[:1] or a[:1] not in "wz":
        raise GridError("path endpoints must be basepoints of one kind")
    perm = G.O0 if a[0] == "w" else G.X0
    ca, cb = _check_basepoint(G, a, a[0]), _check_basepoint(G, b, b[0])
    if ca == cb:
        raise GridError("endpoints coincide")
    run1 = _cell_run(G.n, ca, cb, perm[ca], "h")
    run2 = _cell_run(G.n, perm[ca], perm[cb], cb, "v")
    if perm[ca] == perm[cb]:
        return GridPath(G.n, run1)
    return GridPath(G.n, run1 + run2[1:])


def rel_homology(G: GridDiagram, coloring: Coloring | None,
                 lam: GridPath, side: str = "A") -> Morphism:
    """Relative homology action A_lambda (side 'A') or B_lambda ('B'):
    empty rectangles weighted by the parity of multiplicity jumps along
    lam across alpha (A) or beta (B) circles, with full marker weights."""
    if side not in ("A", "B"):
        raise ValueError("side must be 'A' or 'B'")
    if lam.n != G.n:
        raise GridError("path and grid sizes differ")
    C = build_complex(G, coloring)
    mat = {}
    for x in itertools.permutations(range(G.n)):
        xid = gen_id(x)
        for y, rect in empty_rectangles(G, x):
            if not lam.crossing_weight(rect, side):
                continue
            m = poly.color_poly(Poly((_rect_monomial(G, rect),)), coloring)
            key = (gen_id(y), xid)
            q = mat.get(key, Poly.zero()) + m
            if q:
                mat[key] = q
            else:
                mat.pop(key, None)
    return Morphism(C, C, (-1, -1), mat)
