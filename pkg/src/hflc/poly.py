"""Sparse polynomial arithmetic over F2 in two kinds of variables.

Every w basepoint carries a U-type variable and every z basepoint a
V-type variable.  Since coefficients live in F2, a polynomial is just a
finite set of monomials and addition is symmetric difference; this makes
all arithmetic exact and canonical (no normalization step, no ordering
ambiguity).  A coloring remaps basepoint variables onto shared color
variables, preserving kind.  Passing coloring=None means the identity
(uncolored) behaviour.

Textual syntax, used by the JSON export and the CLI:

    U1^2*V3 + V1        basepoint variables (U3 means the w3 variable)
    Uc:A*Vc:A           color variables
    1                   the empty monomial
    0                   the zero polynomial

The derivative operators d1 and d2 are the workhorses behind the
basepoint actions: d1 is the formal partial derivative (exponent mod 2),
d2 the divided second derivative with coefficient C(e,2) mod 2.  The
divided version is what makes Phi_w^2 exactly null-homotopic in
characteristic 2, so both are part of the module contract.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True)
class VarId:
    """A single variable: kind "U" or "V", plus a label.

    Basepoint variables have is_color False and a label like "w3" or
    "z1" (U-kind variables always sit on w labels, V-kind on z labels).
    Color variables have is_color True and a free-form name.
    """

    kind: str
    name: str
    is_color: bool = False

    def __post_init__(self):
        if self.kind not in ("U", "V"):
            raise ValueError(f"bad variable kind {self.kind!r}")
        if not self.is_color:
            want = "w" if self.kind == "U" else "z"
            if not re.fullmatch(want + r"\d+", self.name):
                raise ValueError(
                    f"basepoint variable of kind {self.kind} needs a "
                    f"{want}<index> label, got {self.name!r}"
                )

    @property
    def sort_key(self):
        # length-before-lexicographic so that w2 sorts before w10
        return (self.kind, self.is_color, len(self.name), self.name)

    def __str__(self):
        if self.is_color:
            return f"{self.kind}c:{self.name}"
        return self.kind + self.name[1:]


def Uvar(label: str) -> VarId:
    return VarId("U", label)


def Vvar(label: str) -> VarId:
    return VarId("V", label)


def Ucolor(name: str) -> VarId:
    return VarId("U", name, is_color=True)


def Vcolor(name: str) -> VarId:
    return VarId("V", name, is_color=True)


# A monomial is a tuple of (VarId, exponent) pairs, sorted by sort_key,
# exponents >= 1.  The empty tuple is the monomial 1.
Monomial = tuple


def mono(*pairs) -> Monomial:
    """Build a monomial from (VarId, exp) pairs, merging repeats."""
    acc: dict[VarId, int] = {}
    for v, e in pairs:
        if e < 0:
            raise ValueError("negative exponent")
        if e:
            acc[v] = acc.get(v, 0) + e
    return tuple(sorted(acc.items(), key=lambda it: it[0].sort_key))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return mono(*a, *b)


def mono_degrees(m: Monomial) -> tuple[int, int]:
    """Total (U-degree, V-degree) of a monomial."""
    du = dv = 0
    for v, e in m:
        if v.kind == "U":
            du += e
        else:
            dv += e
    return du, dv


def mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for v, e in m:
        parts.append(str(v) if e == 1 else f"{v}^{e}")
    return "*".join(parts)


def monomials_of_degree(variables, d: int) -> list:
    """All monomials of total degree d in the given variables.

    Deterministic order (stars and bars over the sorted variable list).
    """
    vs = sorted(variables, key=lambda v: v.sort_key)
    out = []

    def rec(i, left, acc):
        if i == len(vs) - 1:
            out.append(mono(*acc, (vs[i], left)) if left else mono(*acc))
            return
        for e in range(left + 1):
            rec(i + 1, left - e, acc + [(vs[i], e)] if e else acc)

    if not vs:
        return [()] if d == 0 else []
    rec(0, d, [])
    return out


class Poly:
    """An element of F2[U-variables, V-variables], stored as a frozenset
    of monomials.  Immutable; all operators return new instances."""

    __slots__ = ("monomials",)

    def __init__(self, monomials: Iterable[Monomial] = ()):
        seen: set = set()
        for m in monomials:
            seen ^= {m}
        object.__setattr__(self, "monomials", frozenset(seen))

    # construction helpers -------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def one() -> "Poly":
        return Poly([()])

    @staticmethod
    def var(v: VarId, e: int = 1) -> "Poly":
        return Poly([mono((v, e))])

    # algebra ---------------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        out = Poly()
        object.__setattr__(out, "monomials",
                           self.monomials ^ other.monomials)
        return out

    # over F2 subtraction and addition agree
    __sub__ = __add__
    __xor__ = __add__

    def __mul__(self, other: "Poly") -> "Poly":
        acc: set = set()
        for a in self.monomials:
            for b in other.monomials:
                acc ^= {mono_mul(a, b)}
        out = Poly()
        object.__setattr__(out, "monomials", frozenset(acc))
        return out

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out, base = Poly.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.monomials)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.monomials == other.monomials

    def __hash__(self):
        return hash(self.monomials)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.monomials)

    def __len__(self):
        return len(self.monomials)

    def sorted_monomials(self):
        return sorted(
            self.monomials,
            key=lambda m: (sum(e for _, e in m),
                           tuple((v.sort_key, e) for v, e in m)),
        )

    def __str__(self):
        if not self.monomials:
            return "0"
        return " + ".join(mono_str(m) for m in self.sorted_monomials())

    def __repr__(self):
        return f"Poly({self})"

    # queries ---------------------------------------------------------------

    def variables(self) -> set:
        return {v for m in self.monomials for v, _ in m}

    def is_homogeneous(self) -> bool:
        """True when all monomials share the same (U-degree, V-degree)."""
        degs = {mono_degrees(m) for m in self.monomials}
        return len(degs) <= 1

    def degrees(self) -> tuple[int, int] | None:
        """The common (U-degree, V-degree), or None for 0 or mixed."""
        degs = {mono_degrees(m) for m in self.monomials}
        if len(degs) == 1:
            return degs.pop()
        return None


def d1(p: Poly, v: VarId) -> Poly:
    """Formal partial derivative d/dv, exponents taken mod 2."""
    out = set()
    for m in p:
        for i, (u, e) in enumerate(m):
            if u == v:
                if e % 2 == 1:
                    rest = m[:i] + (((u, e - 1),) if e > 1 else ()) + m[i + 1:]
                    out ^= {rest}
                break
    return Poly(out)


def d2(p: Poly, v: VarId) -> Poly:
    """Divided second derivative: v^e maps to C(e,2) v^(e-2) mod 2.

    C(e,2) is odd exactly when e = 2 or 3 mod 4.  Note d1(d1(p)) = 0
    identically over F2, so the divided operator carries the actual
    second-order information.
    """
    out = set()
    for m in p:
        for i, (u, e) in enumerate(m):
            if u == v:
                if e >= 2 and (e * (e - 1) // 2) % 2 == 1:
                    rest = m[:i] + (((u, e - 2),) if e > 2 else ()) + m[i + 1:]
                    out ^= {rest}
                break
    return Poly(out)


def specialize(p: Poly, v: VarId, value: int) -> Poly:
    """Set the variable v to 0 or 1."""
    if value not in (0, 1):
        raise ValueError("can only specialize a variable to 0 or 1")
    out = set()
    for m in p:
        keep = True
        reduced = []
        for u, e in m:
            if u == v:
                if value == 0:
                    keep = False
                    break
                continue  # value 1 drops the factor
            reduced.append((u, e))
        if keep:
            out ^= {tuple(reduced)}
    return Poly(out)


def set_kind_to_one(p: Poly, kind: str) -> Poly:
    """Set every variable of the given kind to 1 (the V=1 / U=1 functors)."""
    out = set()
    for m in p:
        out ^= {tuple((u, e) for u, e in m if u.kind != kind)}
    return Poly(out)


def set_all_to_zero(p: Poly) -> Poly:
    """Keep only the constant term (all variables to 0)."""
    return Poly([m for m in p if not m])


class Coloring:
    """A kind-preserving assignment of color names to basepoints.

    mapping sends basepoint labels ("w3", "z1") to color names; labels
    absent from the mapping keep their own uncolored variable.  Applying
    a coloring can merge distinct monomials, which cancel in pairs over
    F2; that is the correct colored-complex behaviour.
    """

    __slots__ = ("mapping",)

    def __init__(self, mapping: dict[str, str] | None = None):
        self.mapping = dict(mapping or {})
        for label in self.mapping:
            if not re.fullmatch(r"[wz]\d+", label):
                raise ValueError(f"bad basepoint label {label!r}")

    def __eq__(self, other):
        return isinstance(other, Coloring) and self.mapping == other.mapping

    def __hash__(self):
        return hash(frozenset(self.mapping.items()))

    def __repr__(self):
        return f"Coloring({self.mapping})"

    def is_identity(self) -> bool:
        return not self.mapping

    def color_name(self, label: str) -> str | None:
        return self.mapping.get(label)

    def apply_var(self, v: VarId) -> VarId:
        if v.is_color:
            return v
        name = self.mapping.get(v.name)
        if name is None:
            return v
        return VarId(v.kind, name, is_color=True)

    def apply_mono(self, m: Monomial) -> Monomial:
        return mono(*((self.apply_var(v), e) for v, e in m))

    def apply(self, p: Poly) -> Poly:
        out = set()
        for m in p:
            out ^= {self.apply_mono(m)}
        return Poly(out)

    def extend(self, more: dict[str, str]) -> "Coloring":
        overlap = set(self.mapping) & set(more)
        for k in overlap:
            if self.mapping[k] != more[k]:
                raise ValueError(f"conflicting color for {k}")
        merged = dict(self.mapping)
        merged.update(more)
        return Coloring(merged)

    def restrict(self, labels: Iterable[str]) -> "Coloring":
        keep = set(labels)
        return Coloring({k: v for k, v in self.mapping.items() if k in keep})


def color_poly(p: Poly, coloring: Coloring | None) -> Poly:
    if coloring is None or coloring.is_identity():
        return p
    return coloring.apply(p)


def curvature(components: Iterable[tuple], coloring: Coloring | None = None) -> Poly:
    """The curvature constant of a multi-based link.

    components is an iterable of cyclic basepoint label sequences, each
    alternating between w and z labels in traversal order.  Every
    adjacent cyclic pair (one w, one z) contributes U_w * V_z; the sum
    over all pairs of all components is the curvature, colored at the
    end if a coloring is given.  Single-coloring the w basepoints and
    the z basepoints of a component makes every product appear twice,
    so fully single-colored links have curvature zero.
    """
    total = Poly.zero()
    for comp in components:
        comp = tuple(comp)
        k = len(comp)
        if k % 2 != 0:
            raise ValueError("component basepoint sequence must alternate w,z")
        for i in range(k):
            a, b = comp[i], comp[(i + 1) % k]
            if a[0] == "w" and b[0] == "z":
                term = Poly.var(Uvar(a)) * Poly.var(Vvar(b))
            elif a[0] == "z" and b[0] == "w":
                term = Poly.var(Uvar(b)) * Poly.var(Vvar(a))
            else:
                raise ValueError(f"non-alternating basepoints {a}, {b}")
            total = total + term
    return color_poly(total, coloring)


# parsing ---------------------------------------------------------------

_FACTOR_RE = re.compile(
    r"(?P<kind>[UV])(?:c:(?P<color>[A-Za-z_][A-Za-z0-9_]*)|(?P<index>\d+))"
    r"(?:\^(?P<exp>\d+))?$"
)


def _parse_factor(text: str):
    m = _FACTOR_RE.match(text)
    if not m:
        raise ValueError(f"bad variable factor {text!r}")
    kind = m.group("kind")
    if m.group("color") is not None:
        v = VarId(kind, m.group("color"), is_color=True)
    else:
        prefix = "w" if kind == "U" else "z"
        v = VarId(kind, prefix + m.group("index"))
    e = int(m.group("exp") or 1)
    return v, e


def parse_poly(text: str) -> Poly:
    """Inverse of str(poly).  Accepts extra whitespace around + signs."""
    text = text.strip()
    if text == "0":
        return Poly.zero()
    monos = []
    for term in text.split("+"):
        term = term.strip()
        if not term:
            raise ValueError("empty term in polynomial")
        if term == "1":
            monos.append(())
            continue
        pairs = [_parse_factor(f.strip()) for f in term.split("*")]
        monos.append(mono(*pairs))
    return Poly(monos)
