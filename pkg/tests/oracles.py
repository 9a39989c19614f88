"""Independent brute-force oracles used by the test suite.

Everything here avoids the package's own linear algebra (hflc.gf2 is
numpy bitsets; this file is plain sets and ints) so that agreement is
meaningful.  The Euler-characteristic targets are classical Alexander
polynomials times (1-t)^(n-1); they pin down the link type for every
knot a 6x6 grid can carry.
"""

import itertools


# ---------------------------------------------------------------- GF(2) GE

def ge_rank(columns):
    """Rank over F2. columns: iterable of sets of row indices."""
    basis = {}
    rank = 0
    for col in columns:
        col = set(col)
        while col:
            piv = max(col)
            if piv in basis:
                col ^= basis[piv]
            else:
                basis[piv] = col
                rank += 1
                break
    return rank


def hat_total(C):
    """dim_F2 of homology with every variable set to zero."""
    gens = C.ids()
    gi = {g: i for i, g in enumerate(gens)}
    cols = {}
    for (t, s), p in C.diff.items():
        if any(len(m) == 0 for m in p):  # constant monomial survives
            cols.setdefault(gi[s], set()).add(gi[t])
    return len(gens) - 2 * ge_rank(cols.values())


# ------------------------------------------------- graded Euler character

def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def strip_zeros(v):
    v = list(v)
    while v and v[0] == 0:
        v.pop(0)
    while v and v[-1] == 0:
        v.pop()
    return v


def euler_vector(gr_w, alex):
    """chi(t) coefficients, low to high, from grading dicts."""
    lo = min(alex.values())
    hi = max(alex.values())
    vec = [0] * (hi - lo + 1)
    for g, a in alex.items():
        vec[a - lo] += (-1) ** (gr_w[g] % 2)
    return vec


def knot_target(delta, n):
    """delta(t) * (1-t)^(n-1), stripped."""
    v = list(delta)
    for _ in range(n - 1):
        v = poly_mul(v, [1, -1])
    return strip_zeros(v)


def chi_matches(vec, target):
    """Equality up to sign and t -> 1/t."""
    s = strip_zeros(vec)
    for cand in (target, target[::-1]):
        if s == cand or s == [-c for c in cand]:
            return True
    return False


# ---------------------------------------------------------- linking number

def signed_inter_crossings(O, X):
    """Sum of crossing signs between distinct components (= 2*lk).

    Planar drawing of the grid, vertical segments in front; rows run O
    to X, columns X to O.
    """
    n = len(O)
    O0 = [v - 1 for v in O]
    X0 = [v - 1 for v in X]
    xinv = [0] * n
    oinv = [0] * n
    for c in range(n):
        xinv[X0[c]] = c
        oinv[O0[c]] = c
    comp = {}
    k = 0
    for start in range(n):
        if start in comp:
            continue
        c = start
        while c not in comp:
            comp[c] = k
            c = xinv[O0[c]]
        k += 1
    total = 0
    for c in range(n):
        vy0, vy1 = X0[c], O0[c]
        vdir = 1 if vy1 > vy0 else -1
        for r in range(n):
            hx0, hx1 = oinv[r], xinv[r]
            if comp[c] == comp[hx0]:
                continue
            hdir = 1 if hx1 > hx0 else -1
            if min(hx0, hx1) < c < max(hx0, hx1) \
                    and min(vy0, vy1) < r < max(vy0, vy1):
                total += vdir * hdir
    return total


# ------------------------------------------------------- generator census

def all_perm_ids(n):
    from hflc.grid import gen_id
    return [gen_id(p) for p in itertools.permutations(range(n))]
