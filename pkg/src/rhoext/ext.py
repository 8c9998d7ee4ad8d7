"""Truncated cobar complexes, Ext slices, cup products and Massey products.

A cochain of cohomological degree ``s`` is a frozenset of terms
``(m, h1, ..., hs)``: ``m`` a normal module monomial (coefficients live here)
and each ``hi`` a coefficient-free, non-unit basis monomial of the host.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from . import gf2
from .algebra import (
    AlgebraError,
    AlgebraPresentation,
    Monomial,
    TruncationWindow,
    basis_slice,
    generators_from_names,
    mono_mul,
)
from .comodules import ComoduleSpec, omega_comodule, trivial_comodule
from .grading import RODegree
from .steenrod import equivariant_exterior, graded_exterior

Term = Tuple[Monomial, ...]
Cochain = frozenset


class WindowOverflow(AlgebraError):
    """A computation left the truncation window (host generator beyond the v-cap)."""


class ProductNonzeroError(AlgebraError):
    pass


class NoBoundingCochain(AlgebraError):
    pass


class CobarComplex:
    """The normalized cobar complex of a comodule algebra, truncated by a window."""

    def __init__(self, comodule: ComoduleSpec, trunc: TruncationWindow):
        self.comodule = comodule
        self.module = comodule.module
        self.host = comodule.host
        self.trunc = trunc
        ht = self.host.table
        self._one_h = ht.one()
        self._allowed = [
            i
            for i, g in enumerate(ht.generators)
            if ht.names[i] not in self.host.coef_names and trunc.admits_generator(g)
        ]
        self._forbidden = [
            i
            for i in range(ht.size)
            if ht.names[i] not in self.host.coef_names and i not in self._allowed
        ]
        self._d_cache: Dict[Term, Cochain] = {}
        self._host_by_und: Optional[Dict[int, List[Monomial]]] = None
        self._host_und_cap = -1

    # --- degrees ---------------------------------------------------------

    def internal_degree(self, term: Term) -> RODegree:
        d = self.module.table.ro(term[0])
        for h in term[1:]:
            d = d + self.host.table.ro(h)
        return d

    def ext_degree(self, term: Term) -> RODegree:
        return self.internal_degree(term) - RODegree(len(term) - 1, 0)

    def weight(self, term: Term) -> int:
        return self.module.table.weight(term[0])

    # --- differential ----------------------------------------------------

    def _check(self, t: Term) -> None:
        for h in t[1:]:
            for i in self._forbidden:
                if h[i]:
                    raise WindowOverflow(
                        f"host generator {self.host.table.names[i]} beyond the window appeared"
                    )

    def _clean(self, raw: Iterable[Term]) -> Cochain:
        one = self._one_h
        out = set()
        for t in self.host.normalize_tensor(raw, self.module):
            if any(h == one for h in t[1:]):
                continue
            self._check(t)
            out ^= {t}
        return frozenset(out)

    def normalize(self, raw: Iterable[Term]) -> Cochain:
        return self._clean(raw)

    def d_term(self, t: Term) -> Cochain:
        hit = self._d_cache.get(t)
        if hit is not None:
            return hit
        raw: set = set()
        for m0, m1 in self.comodule.coact_mono(t[0]):
            raw ^= {(m0, m1) + t[1:]}
        for i in range(1, len(t)):
            for x, y in self.host.delta(t[i]):
                raw ^= {t[:i] + (x, y) + t[i + 1 :]}
        res = self._clean(raw)
        self._d_cache[t] = res
        return res

    def d(self, c: Iterable[Term]) -> Cochain:
        acc: set = set()
        for t in c:
            acc ^= self.d_term(t)
        return frozenset(acc)

    # --- bases -------------------------------------------------------------

    def _host_monomials(self, und_cap: int) -> Dict[int, List[Monomial]]:
        """Normal coefficient-free non-unit host monomials in the window, by underlying degree."""
        if self._host_by_und is not None and und_cap <= self._host_und_cap:
            return self._host_by_und
        ht = self.host.table
        rw = self.host.algebra.rewrite
        und = {i: ht._tr[i] + ht._sg[i] for i in self._allowed}
        for i, v in und.items():
            if v <= 0:
                raise AlgebraError(f"host generator {ht.names[i]} has nonpositive underlying degree")
        out: Dict[int, List[Monomial]] = {}
        cur = [0] * ht.size
        idx = list(self._allowed)

        def rec(k: int, left: int) -> None:
            if k == len(idx):
                m = tuple(cur)
                if any(m) and rw.is_normal(m):
                    out.setdefault(und_cap - left, []).append(m)
                return
            i = idx[k]
            e = 0
            while e * und[i] <= left:
                cur[i] = e
                if e and not rw.is_normal(tuple(cur)):
                    break
                rec(k + 1, left - e * und[i])
                e += 1
            cur[i] = 0

        rec(0, und_cap)
        for v in out.values():
            v.sort()
        self._host_by_und = out
        self._host_und_cap = und_cap
        return out

    def _host_tuples(self, s: int, und_cap: int) -> List[Tuple[Tuple[Monomial, ...], int]]:
        by_und = self._host_monomials(und_cap)
        flat = sorted((u, m) for u, ms in by_und.items() for m in ms)
        out: List[Tuple[Tuple[Monomial, ...], int]] = []

        def rec(prefix: Tuple[Monomial, ...], left: int) -> None:
            if len(prefix) == s:
                out.append((prefix, und_cap - left))
                return
            for u, m in flat:
                if u > left:
                    break
                rec(prefix + (m,), left - u)

        rec((), und_cap)
        return out

    def basis(self, ext_deg: RODegree, s: int, weight: Optional[int] = None) -> List[Term]:
        """Cochain basis of cohomological degree ``s`` whose Ext degree is ``ext_deg``."""
        internal = ext_deg + RODegree(s, 0)
        mt = self.module.table
        a_cap = self.trunc.a_cap if "a" in mt.index else 0
        und_cap = internal.underlying + a_cap
        if s == 0:
            mods = basis_slice(self.module.presentation, internal, self.trunc, weight=weight)
            return [(m,) for m in mods if self._module_ok(m)]
        if und_cap < s:
            return []
        out: List[Term] = []
        hdeg_cache: Dict[Tuple[Monomial, ...], RODegree] = {}
        mod_cache: Dict[RODegree, List[Monomial]] = {}
        for hs, _u in self._host_tuples(s, und_cap):
            hd = hdeg_cache.get(hs)
            if hd is None:
                hd = RODegree(0, 0)
                for h in hs:
                    hd = hd + self.host.table.ro(h)
                hdeg_cache[hs] = hd
            rest = internal - hd
            mods = mod_cache.get(rest)
            if mods is None:
                mods = [
                    m
                    for m in basis_slice(self.module.presentation, rest, self.trunc, weight=weight)
                    if self._module_ok(m)
                ]
                mod_cache[rest] = mods
            for m in mods:
                out.append((m,) + hs)
        out.sort()
        return out

    def _module_ok(self, m: Monomial) -> bool:
        mt = self.module.table
        a = mt.index.get("a")
        return a is None or self.module.a_cap is None or m[a] <= self.module.a_cap

    # --- linear algebra ---------------------------------------------------

    def matrix(self, src: List[Term], tgt: List[Term]) -> List[int]:
        index = {t: i for i, t in enumerate(tgt)}
        cols = []
        for t in src:
            v = 0
            for x in self.d_term(t):
                j = index.get(x)
                if j is None:
                    raise WindowOverflow(
                        f"differential of {self.fmt({t})} leaves the enumerated target basis"
                    )
                v ^= 1 << j
            cols.append(v)
        return cols

    def to_vector(self, c: Iterable[Term], basis: List[Term]) -> int:
        index = {t: i for i, t in enumerate(basis)}
        v = 0
        for t in c:
            j = index.get(t)
            if j is None:
                raise WindowOverflow(f"term {self.fmt({t})} is outside the enumerated basis")
            v ^= 1 << j
        return v

    @staticmethod
    def from_vector(v: int, basis: List[Term]) -> Cochain:
        return frozenset(basis[i] for i in gf2.bits(v))

    def fmt(self, c: Iterable[Term]) -> str:
        terms = sorted(c, reverse=True)
        if not terms:
            return "0"
        mt, ht = self.module.table, self.host.table
        out = []
        for t in terms:
            bars = "|".join(ht.format_monomial(h) for h in t[1:])
            out.append(f"{mt.format_monomial(t[0])}[{bars}]" if bars else mt.format_monomial(t[0]))
        return " + ".join(out)

    # --- products -----------------------------------------------------------

    def iterated_coaction(self, m: Monomial, p: int) -> frozenset:
        """Terms ``(m0, m1, ..., mp)`` of the p-fold iterated coaction (no reduction)."""
        cur: frozenset = frozenset(((m,),))
        for _ in range(p):
            nxt: set = set()
            for t in cur:
                for x0, x1 in self.comodule.coact_mono(t[0]):
                    nxt ^= {(x0, x1) + t[1:]}
            cur = self.host.normalize_tensor(nxt, self.module)
        return cur

    def product(self, x: Iterable[Term], y: Iterable[Term]) -> Cochain:
        """Cup product: ``m[g1|..|gp] * n[d..] = m n0 [g1 n1|..|gp np|d..]``."""
        raw: set = set()
        for tx in x:
            m, gs = tx[0], tx[1:]
            p = len(gs)
            for ty in y:
                n, ds = ty[0], ty[1:]
                for it in self.iterated_coaction(n, p):
                    for mn in self.module.nf_mono(mono_mul(m, it[0])):
                        parts = [frozenset((mn,))]
                        for g, ni in zip(gs, it[1:]):
                            parts.append(self.host.nf_mono(mono_mul(g, ni)))
                        combos = [()]
                        for part in parts:
                            combos = [c + (q,) for c in combos for q in part]
                        for c in combos:
                            raw ^= {c + ds}
        return self._clean(raw)

    # --- homology ------------------------------------------------------------

    def homology(self, ext_deg: RODegree, s: int, weight: Optional[int] = None) -> ExtSlice:
        cur = self.basis(ext_deg, s, weight)
        nxt = self.basis(ext_deg - RODegree(1, 0), s + 1, weight)
        prev = self.basis(ext_deg + RODegree(1, 0), s - 1, weight) if s > 0 else []
        cols = self.matrix(cur, nxt)
        ker = gf2.kernel(cols)
        bnd = gf2.image_basis(self.matrix(prev, cur))
        reps = []
        ech = gf2.Echelon()
        for r in bnd.rows.values():
            ech.add(r)
        for k in ker:
            red = ech.reduce(k)
            if red and ech.add(red):
                reps.append(self.from_vector(red, cur))
        return ExtSlice(ext_deg, s, weight, len(reps), reps)

    def boundary_solve(self, target: Iterable[Term], s: int, weight: Optional[int] = None) -> Optional[Cochain]:
        """A cochain of degree ``s - 1`` whose differential is ``target`` (None if none exists)."""
        target = frozenset(target)
        if not target:
            return frozenset()
        degs = {self.ext_degree(t) for t in target}
        if len(degs) != 1:
            raise AlgebraError("target cochain is not homogeneous")
        (deg,) = degs
        tgt_basis = self.basis(deg, s, weight)
        src = self.basis(deg + RODegree(1, 0), s - 1, weight)
        v = self.to_vector(target, tgt_basis)
        sol = gf2.solve(self.matrix(src, tgt_basis), v)
        if sol is None:
            return None
        return self.from_vector(sol, src)

    def is_coboundary(self, c: Iterable[Term], s: int, weight: Optional[int] = None) -> bool:
        return self.boundary_solve(c, s, weight) is not None


@dataclass
class ExtSlice:
    degree: RODegree
    s: int
    weight: Optional[int]
    dim: int
    representatives: List[Cochain] = field(default_factory=list)


def cochain_degree(cx: CobarComplex, c: Iterable[Term]) -> Tuple[RODegree, int, int]:
    c = list(c)
    if not c:
        raise AlgebraError("zero cochain has no degree")
    keys = {(cx.ext_degree(t), len(t) - 1, cx.weight(t)) for t in c}
    if len(keys) != 1:
        raise AlgebraError("cochain is not homogeneous")
    return keys.pop()


# --- standard contexts -------------------------------------------------------


def omega_weight_top(weight_cap: int) -> int:
    k = 0
    while (1 << (k + 1)) <= weight_cap:
        k += 1
    return k


def borel_omega_cobar(weight_cap: int, v_cap: int, a_cap: int, kind: str = "borel") -> CobarComplex:
    """Cobar complex of the loop-space comodule over the Borel exterior Hopf algebroid."""
    k = omega_weight_top(weight_cap)
    host = equivariant_exterior(max(v_cap, k), borel=(kind != "genuine"), a_cap=a_cap)
    spec = omega_comodule(k, host, kind, a_cap=a_cap)
    trunc = TruncationWindow(weight_cap=weight_cap, v_cap=v_cap, a_cap=a_cap)
    return CobarComplex(spec, trunc)


def graded_trivial_cobar(v_cap: int, a_cap: int) -> CobarComplex:
    host = graded_exterior(v_cap, a_cap=a_cap)
    spec = trivial_comodule(host, a_cap)
    return CobarComplex(spec, TruncationWindow(weight_cap=0, v_cap=v_cap, a_cap=a_cap))


def graded_omega_cobar(weight_cap: int, v_cap: int, a_cap: int) -> CobarComplex:
    k = omega_weight_top(weight_cap)
    host = graded_exterior(max(v_cap, k), a_cap=a_cap)
    spec = omega_comodule(k, host, "graded", a_cap=a_cap)
    return CobarComplex(spec, TruncationWindow(weight_cap=weight_cap, v_cap=v_cap, a_cap=a_cap))


# --- associated-graded fast path ----------------------------------------------


class GradedReduced:
    """The u-collapsed, a-free cobar complex over the associated graded exterior algebroid.

    Over the associated graded form the right unit is trivial, u is a primitive unit
    and a never appears in a differential, so the full complex is
    ``F2[u^+-1, a] (x) C`` with ``C`` spanned by coefficient-free cochains.  A slice
    of ``C`` is indexed by (internal underlying degree, s, weight).
    """

    def __init__(self, weight_cap: int, v_cap: int):
        self.cx = graded_omega_cobar(weight_cap, v_cap, a_cap=0)
        self.weight_cap = weight_cap
        mt = self.cx.module.table
        self._u = mt.index["u"]
        self._a = mt.index["a"]
        self._mods = self._module_monomials()
        self._dims: Dict[Tuple[int, int, int], int] = {}
        self._bases: Dict[Tuple[int, int, int], List[Term]] = {}

    def _module_monomials(self) -> Dict[Tuple[int, int], List[Monomial]]:
        mt = self.cx.module.table
        rw = self.cx.module.presentation.rewrite
        gens = [i for i, n in enumerate(mt.names) if n not in ("a", "u")]
        out: Dict[Tuple[int, int], List[Monomial]] = {}
        cur = [0] * mt.size

        def rec(k: int, left: int) -> None:
            if k == len(gens):
                m = tuple(cur)
                if rw.is_normal(m):
                    out.setdefault((mt.underlying(m), self.weight_cap - left), []).append(m)
                return
            i = gens[k]
            w = mt._wt[i]
            e = 0
            while e * w <= left:
                cur[i] = e
                rec(k + 1, left - e * w)
                e += 1
            cur[i] = 0

        rec(0, self.weight_cap)
        for v in out.values():
            v.sort()
        return out

    def _collapse(self, t: Term) -> Term:
        m = list(t[0])
        if m[self._a]:
            raise AlgebraError("a appeared in an associated-graded differential")
        m[self._u] = 0
        return (tuple(m),) + t[1:]

    def basis(self, n: int, s: int, w: int) -> List[Term]:
        key = (n, s, w)
        hit = self._bases.get(key)
        if hit is not None:
            return hit
        out: List[Term] = []
        if s == 0:
            out = [(m,) for m in self._mods.get((n, w), [])]
        elif n >= s:
            for hs, hu in self.cx._host_tuples(s, n):
                for m in self._mods.get((n - hu, w), []):
                    out.append((m,) + hs)
        out.sort()
        self._bases[key] = out
        return out

    def d_collapsed(self, t: Term) -> frozenset:
        acc: set = set()
        for x in self.cx.d_term(t):
            acc ^= {self._collapse(x)}
        return frozenset(acc)

    def _matrix(self, src: List[Term], tgt: List[Term]) -> List[int]:
        index = {t: i for i, t in enumerate(tgt)}
        cols = []
        for t in src:
            v = 0
            for x in self.d_collapsed(t):
                v ^= 1 << index[x]
            cols.append(v)
        return cols

    def dim(self, n: int, s: int, w: int) -> int:
        key = (n, s, w)
        hit = self._dims.get(key)
        if hit is not None:
            return hit
        cur = self.basis(n, s, w)
        if not cur:
            self._dims[key] = 0
            return 0
        nxt = self.basis(n, s + 1, w)
        z = len(gf2.kernel(self._matrix(cur, nxt)))
        b = gf2.rank(self._matrix(self.basis(n, s - 1, w), cur)) if s > 0 else 0
        self._dims[key] = z - b
        return z - b

    def ext_dim(self, stem: int, s: int, w: int, a_cap: int) -> int:
        """Dimension of the full Ext slice at (stem, any sigma, s, weight w), a-powers up to ``a_cap``."""
        return sum(self.dim(stem + s + k, s, w) for k in range(a_cap + 1))


def graded_ext_table(trunc: TruncationWindow, adams_cap: int) -> Dict[Tuple[int, int, int, int], int]:
    """Ext dims over the associated graded algebroid keyed by (stem, sigma, s, weight)."""
    g = GradedReduced(trunc.weight_cap, trunc.v_cap)
    out = {}
    for w in range(trunc.weight_cap + 1):
        for s in range(adams_cap + 1):
            for stem in range(trunc.stems[0], trunc.stems[1] + 1):
                dim = g.ext_dim(stem, s, w, trunc.a_cap)
                for sig in range(trunc.sigmas[0], trunc.sigmas[1] + 1):
                    out[(stem, sig, s, w)] = dim
    return out


# --- the E1 presentation --------------------------------------------------------


def e1_presentation(v_cap: int, weight_cap: int) -> AlgebraPresentation:
    """F2[u^+-1, a, v_0..v_N, t0, e_1..e_K] / (t0^2 + u e1, r_1, ..., r_K)."""
    k = omega_weight_top(weight_cap)
    names = (
        ["t0"]
        + [f"e{i}" for i in range(k, 0, -1)]
        + [f"v{i}" for i in range(v_cap, -1, -1)]
        + ["a", "u"]
    )
    table = generators_from_names(names, invertible=("u",))
    rels = [table.parse_element("t0^2 + u*e1")] if k >= 1 else []
    for j in range(1, k + 1):
        r = filtration_d1(j, table)
        if r:
            rels.append(r)
    return AlgebraPresentation(table, rels, name="E1")


def filtration_d1(j: int, table=None) -> frozenset:
    """r_j = sum_{i<j} e_{j-i}^{2^i} v_i (and r_0 = 0)."""
    if j < 0:
        raise ValueError("j must be nonnegative")
    if table is None:
        names = [f"e{i}" for i in range(max(j, 1), 0, -1)] + [f"v{i}" for i in range(max(j - 1, 0), -1, -1)]
        table = generators_from_names(names + ["a", "u"], invertible=("u",))
    terms = set()
    for i in range(j):
        if f"v{i}" in table.index:
            terms ^= {mono_mul(table.gen(f"e{j - i}", 1 << i), table.gen(f"v{i}"))}
    return frozenset(terms)


def presentation_table(trunc: TruncationWindow, adams_cap: int) -> Dict[Tuple[int, int, int, int], int]:
    """basis_slice counts of the E1 presentation keyed by (stem, sigma, s, weight)."""
    pres = e1_presentation(trunc.v_cap, trunc.weight_cap)
    out = {}
    for w in range(trunc.weight_cap + 1):
        for s in range(adams_cap + 1):
            for d in trunc.degrees():
                out[(d.underlying, d.sign, s, w)] = len(basis_slice(pres, d, trunc, adams=s, weight=w))
    return out


# --- Massey products and relations ---------------------------------------------


@dataclass
class MasseyResult:
    representative: Cochain
    indeterminacy: List[Cochain]
    bounding: Tuple[Cochain, Cochain]
    degree: RODegree
    s: int
    weight: int
    text: str = ""

    def contains(self, cx: CobarComplex, target: Iterable[Term]) -> bool:
        """Is ``target`` in representative + indeterminacy + coboundaries?"""
        diff = frozenset(target) ^ self.representative
        if not diff:
            return True
        basis = cx.basis(self.degree, self.s, self.weight)
        prev = cx.basis(self.degree + RODegree(1, 0), self.s - 1, self.weight) if self.s > 0 else []
        gens = cx.matrix(prev, basis) + [cx.to_vector(i, basis) for i in self.indeterminacy]
        return gf2.solve(gens, cx.to_vector(diff, basis)) is not None


def _homology_reps(cx: CobarComplex, deg: RODegree, s: int, w: int) -> List[Cochain]:
    if s < 0:
        return []
    return cx.homology(deg, s, w).representatives


def massey_triple(cx: CobarComplex, x: Iterable[Term], y: Iterable[Term], z: Iterable[Term]) -> MasseyResult:
    """<x, y, z> from bounding cochains A (dA = xy) and B (dB = yz): A z + x B."""
    x, y, z = frozenset(x), frozenset(y), frozenset(z)
    for c in (x, y, z):
        if c and cx.d(c):
            raise AlgebraError("Massey product inputs must be cocycles")
    xy = cx.product(x, y)
    yz = cx.product(y, z)
    dx = cochain_degree(cx, x) if x else None
    dy = cochain_degree(cx, y) if y else None
    dz = cochain_degree(cx, z) if z else None
    if not y:
        zero = frozenset()
        return MasseyResult(zero, [], (zero, zero), RODegree(), 0, 0, "0")
    if dx is None or dz is None:
        raise AlgebraError("zero outer entries are not supported")
    s_xy = dx[1] + dy[1]
    s_yz = dy[1] + dz[1]
    a_ = cx.boundary_solve(xy, s_xy, dx[2] + dy[2]) if xy else frozenset()
    if a_ is None:
        raise ProductNonzeroError("x*y is not a coboundary in the window")
    b_ = cx.boundary_solve(yz, s_yz, dy[2] + dz[2]) if yz else frozenset()
    if b_ is None:
        raise ProductNonzeroError("y*z is not a coboundary in the window")
    rep = cx.product(a_, z) ^ cx.product(x, b_)
    s_out = dx[1] + dy[1] + dz[1] - 1
    w_out = dx[2] + dy[2] + dz[2]
    deg = dx[0] + dy[0] + dz[0] + RODegree(1, 0)
    if rep and cx.d(rep):
        raise AlgebraError("Massey representative is not a cocycle")
    # indeterminacy x * H(deg B) + H(deg A) * z
    deg_b = dy[0] + dz[0] + RODegree(1, 0)
    deg_a = dx[0] + dy[0] + RODegree(1, 0)
    indet = []
    for h in _homology_reps(cx, deg_b, s_yz - 1, dy[2] + dz[2]):
        p = cx.product(x, h)
        if p:
            indet.append(p)
    for h in _homology_reps(cx, deg_a, s_xy - 1, dx[2] + dy[2]):
        p = cx.product(h, z)
        if p:
            indet.append(p)
    return MasseyResult(rep, indet, (a_, b_), deg, s_out, w_out, cx.fmt(rep))


@dataclass
class Certificate:
    target: Cochain
    bounding: Optional[Cochain]
    text: str
    window: str

    @property
    def ok(self) -> bool:
        return self.bounding is not None


def verify_vanishing_relation(n: int, a_cap: int = 8) -> Certificate:
    """Exhibit a cochain whose coboundary is e1^(2^(n+1)-1) [tau_n]."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    p = (1 << (n + 1)) - 1
    weight = 2 * p
    v_cap = max(n, 1)
    while (1 << (v_cap + 1)) - 1 <= a_cap:
        v_cap += 1
    cx = borel_omega_cobar(weight_cap=weight, v_cap=v_cap, a_cap=a_cap)
    mt, ht = cx.module.table, cx.host.table
    target = frozenset(((mt.gen("e1", p), ht.gen(f"tau{n}")),))
    b = cx.boundary_solve(target, 1, weight)
    window = f"weight={weight} v_cap={v_cap} a_cap={a_cap}"
    if b is not None and cx.d(b) != target:
        raise AlgebraError("bounding cochain check failed")
    text = f"d({cx.fmt(b)}) = {cx.fmt(target)}" if b is not None else f"no bounding cochain in window {window}"
    return Certificate(target, b, text, window)


def relation_holds(cx: CobarComplex, lhs: Iterable[Term], rhs: Iterable[Term]) -> Tuple[bool, Optional[Cochain]]:
    """Whether two cocycles are cohomologous; returns a witness cochain."""
    diff = frozenset(lhs) ^ frozenset(rhs)
    if not diff:
        return True, frozenset()
    _, s, w = cochain_degree(cx, diff)
    sol = cx.boundary_solve(diff, s, w)
    return sol is not None, sol


def cochain(cx: CobarComplex, text: str) -> Cochain:
    """Parse ``m[h1|h2] + ...`` (module monomial, bar-separated host monomials)."""
    out: set = set()
    text = text.strip()
    if text in ("", "0"):
        return frozenset()
    for part in text.split(" + "):
        part = part.strip()
        if "[" in part:
            head, bars = part.split("[", 1)
            bars = bars.rstrip("]")
            hs = tuple(cx.host.table.parse_monomial(b) for b in bars.split("|"))
        else:
            head, hs = part, ()
        out ^= {(cx.module.table.parse_monomial(head or "1"),) + hs}
    return cx.normalize(out)


def ext_dump_rows(trunc: TruncationWindow, adams_cap: int) -> List[Tuple[int, int, int, int, int]]:
    """Rows (stem, sigma, s, weight, dim) from the associated graded Ext table."""
    table = graded_ext_table(trunc, adams_cap)
    return [(k[0], k[1], k[2], k[3], v) for k, v in sorted(table.items())]


__all__ = [
    "CobarComplex",
    "ExtSlice",
    "GradedReduced",
    "MasseyResult",
    "NoBoundingCochain",
    "ProductNonzeroError",
    "WindowOverflow",
    "borel_omega_cobar",
    "cochain",
    "e1_presentation",
    "filtration_d1",
    "graded_ext_table",
    "graded_omega_cobar",
    "graded_trivial_cobar",
    "massey_triple",
    "presentation_table",
    "relation_holds",
    "verify_vanishing_relation",
]
