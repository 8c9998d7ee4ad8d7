"""The a-Bockstein spectral sequence for the loop-space comodule, computed in a finite window.

Every page is handled in two independent ways:

* closed form: a subalgebra of a quotient of the E1 presentation, described by
  generator templates ``x * u^(offset + step*k)`` and spanned in each slice by
  normal forms of template products;
* computed: homology of the previous page's differential, by linear algebra on
  each slice.

A slice key is ``(stem, sigma, s, weight, e)`` where ``e`` is the exponent of a;
the u-exponent is then determined.  Slices beyond the a-cap are computed on
demand whenever a differential needs them.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from . import gf2
from .algebra import (
    AlgebraError,
    AlgebraPresentation,
    Generator,
    GeneratorTable,
    Monomial,
    TruncationWindow,
    basis_slice,
    enumerate_free,
    mono_div,
    mono_mul,
)
from .ext import e1_presentation, filtration_d1, omega_weight_top
from .grading import MultiDegree, RODegree

Key = Tuple[int, int, int, int, int]


# --- templates ------------------------------------------------------------------


@dataclass(frozen=True)
class Template:
    """The family ``rest * u^(offset + step*k)``, k ranging over the integers (step 0: k = 0)."""

    rest: Monomial
    offset: int = 0
    step: int = 0


@dataclass(frozen=True)
class PageSpec:
    """Closed-form description of a page as a subalgebra of an ambient quotient ring.

    ``level`` selects the ambient ring (E1 modulo a^(2^(j+1)-1) v_j for j < level);
    ``unit`` is the period of the invertible u-power in the page (0 if none).
    """

    name: str
    level: int
    unit: int
    templates: Tuple[Template, ...]
    n: Optional[int] = None

    @property
    def r(self) -> Optional[int]:
        return None if self.n is None else (1 << (self.n + 1)) - 1


def _norm(off: int, g: int) -> Tuple[int, int]:
    return (off % g, g) if g else (off, 0)


def _combine(xs: frozenset, ys: frozenset) -> frozenset:
    out = set()
    for o1, g1 in xs:
        for o2, g2 in ys:
            out.add(_norm(o1 + o2, math.gcd(g1, g2)))
    return frozenset(out)


class TemplateMembership:
    """Decides whether ``rest * u^m`` is a product of templates of a page spec."""

    def __init__(self, spec: PageSpec, table: GeneratorTable):
        self.spec = spec
        self.table = table
        self._by_gen: Dict[int, List[Tuple[int, int, int]]] = {}
        for t in spec.templates:
            support = [(i, e) for i, e in enumerate(t.rest) if e]
            if len(support) != 1:
                raise AlgebraError("templates must be powers of a single generator")
            (i, p), = support
            self._by_gen.setdefault(i, []).append((p, t.offset, t.step))
        self._cache: Dict[Monomial, frozenset] = {}

    def achievable(self, rest: Monomial) -> frozenset:
        hit = self._cache.get(rest)
        if hit is not None:
            return hit
        acc = frozenset({_norm(0, self.spec.unit)})
        for i, e in enumerate(rest):
            if not e:
                continue
            opts = self._by_gen.get(i)
            if not opts:
                acc = frozenset()
                break
            acc = _combine(acc, self._gen_options(opts, e))
            if not acc:
                break
        self._cache[rest] = acc
        return acc

    @staticmethod
    def _gen_options(opts: List[Tuple[int, int, int]], e: int) -> frozenset:
        out = set()

        def rec(k: int, left: int, off: int, g: int) -> None:
            if k == len(opts):
                if left == 0:
                    out.add(_norm(off, g))
                return
            p, o, st = opts[k]
            c = 0
            while c * p <= left:
                g2 = math.gcd(g, st) if c else g
                rec(k + 1, left - c * p, off + c * o, g2)
                c += 1

        rec(0, e, 0, 0)
        return frozenset(out)

    def contains(self, rest: Monomial, m: int) -> bool:
        for o, g in self.achievable(rest):
            if (g and (m - o) % g == 0) or (not g and m == o):
                return True
        return False


# --- context --------------------------------------------------------------------


@dataclass
class SliceData:
    monomials: List[Monomial]
    vectors: List[int]
    basis: List[int]
    dependencies: List[int]

    @property
    def dim(self) -> int:
        return len(self.basis)


class BSSContext:
    """Window, E1 presentation, ambient quotients and slice caches."""

    def __init__(self, trunc: Optional[TruncationWindow] = None, adams_cap: int = 3):
        self.trunc = trunc or TruncationWindow()
        self.adams_cap = adams_cap
        self.N = self.trunc.v_cap
        self.K = omega_weight_top(self.trunc.weight_cap)
        self.e1 = e1_presentation(self.N, self.trunc.weight_cap)
        self.table = self.e1.table
        tb = self.table
        self.ia = tb.index["a"]
        self.iu = tb.index["u"]
        self._free = [i for i, n in enumerate(tb.names) if n not in ("a", "u")]
        self._ambient: Dict[int, AlgebraPresentation] = {}
        self._index: Dict[int, Dict[Monomial, int]] = {}
        self._nf: Dict[Tuple[int, Monomial], int] = {}
        self._rests: Dict[Tuple[int, int], Dict[int, List[Monomial]]] = {}
        self._rest_cap: Dict[Tuple[int, int], int] = {}
        self._members: Dict[PageSpec, TemplateMembership] = {}
        self._slices: Dict[Tuple[PageSpec, Key], SliceData] = {}

    # ambient rings
    def ambient(self, level: int) -> AlgebraPresentation:
        level = min(level, self.N + 1)
        pres = self._ambient.get(level)
        if pres is None:
            tb = self.table
            extra = []
            for j in range(level):
                extra.append(frozenset((mono_mul(tb.gen("a", (1 << (j + 1)) - 1), tb.gen(f"v{j}")),)))
            pres = self.e1.with_relations(extra, name=f"Q{level}") if extra else self.e1
            self._ambient[level] = pres
            self._index[level] = {}
        return pres

    def nf_vector(self, level: int, m: Monomial) -> int:
        level = min(level, self.N + 1)
        key = (level, m)
        hit = self._nf.get(key)
        if hit is not None:
            return hit
        pres = self.ambient(level)
        index = self._index[level]
        v = 0
        for x in pres.rewrite.reduce((m,)):
            j = index.get(x)
            if j is None:
                j = len(index)
                index[x] = j
            v ^= 1 << j
        self._nf[key] = v
        return v

    def vector_element(self, level: int, v: int) -> frozenset:
        level = min(level, self.N + 1)
        inv = {j: m for m, j in self._index[level].items()}
        return frozenset(inv[j] for j in gf2.bits(v))

    # enumeration
    def rests(self, und: int, s: int, w: int) -> List[Monomial]:
        """Monomials in t0, e_k, v_j of underlying degree ``und``, Adams ``s``, weight ``w``."""
        if und < 0 or s < 0 or w < 0:
            return []
        key = (s, w)
        cap = self._rest_cap.get(key, -1)
        if und > cap:
            new_cap = max(und, 2 * cap, 16)
            buckets: Dict[int, List[Monomial]] = {}
            tb = self.table
            for cur in enumerate_free(tb, self._free, new_cap, w, s):
                m = tuple(cur)
                if tb.adams(m) == s and tb.weight(m) == w:
                    buckets.setdefault(tb.underlying(m), []).append(m)
            for v in buckets.values():
                v.sort()
            self._rests[key] = buckets
            self._rest_cap[key] = new_cap
        return self._rests[key].get(und, [])

    def full_monomial(self, rest: Monomial, e: int, m: int) -> Monomial:
        x = list(rest)
        x[self.ia] = e
        x[self.iu] = m
        return tuple(x)

    def candidates(self, key: Key) -> Iterator[Tuple[Monomial, int, Monomial]]:
        """(rest including a^e, u-exponent, full monomial) for every E1 monomial in the slice."""
        stem, sigma, s, w, e = key
        if e < 0:
            return
        trivial = stem - sigma
        tb = self.table
        for rest in self.rests(stem + e, s, w):
            m = trivial - tb.ro(rest).trivial
            ra = list(rest)
            ra[self.ia] = e
            yield tuple(ra), m, self.full_monomial(rest, e, m)

    def membership(self, spec: PageSpec) -> TemplateMembership:
        mem = self._members.get(spec)
        if mem is None:
            mem = TemplateMembership(spec, self.table)
            self._members[spec] = mem
        return mem

    def slice(self, spec: PageSpec, key: Key) -> SliceData:
        ck = (spec, key)
        hit = self._slices.get(ck)
        if hit is not None:
            return hit
        mem = self.membership(spec)
        monos: List[Monomial] = []
        vecs: List[int] = []
        for rest, m, full in self.candidates(key):
            if mem.contains(rest, m):
                v = self.nf_vector(spec.level, full)
                monos.append(full)
                vecs.append(v)
        ech = gf2.Echelon()
        basis: List[int] = []
        deps: List[int] = []
        for i, v in enumerate(vecs):
            rest_v, tag = ech.reduce_tagged(v, 1 << i)
            if rest_v:
                p = rest_v.bit_length() - 1
                ech.rows[p] = rest_v
                ech.tags[p] = tag
                basis.append(i)
            else:
                deps.append(tag)
        sd = SliceData(monos, vecs, basis, deps)
        self._slices[ck] = sd
        return sd

    def window_keys(self, e_max: Optional[int] = None) -> Iterator[Key]:
        tr = self.trunc
        e_max = tr.a_cap if e_max is None else e_max
        for stem in range(tr.stems[0], tr.stems[1] + 1):
            for sigma in range(tr.sigmas[0], tr.sigmas[1] + 1):
                for s in range(self.adams_cap + 1):
                    for w in range(tr.weight_cap + 1):
                        for e in range(e_max + 1):
                            yield (stem, sigma, s, w, e)

    def key_of(self, m: Monomial) -> Key:
        tb = self.table
        ro = tb.ro(m)
        return (ro.underlying, ro.sign, tb.adams(m), tb.weight(m), m[self.ia])

    def monomial(self, text: str) -> Monomial:
        return self.table.parse_monomial(text)

    def fmt(self, x: Iterable[Monomial]) -> str:
        return self.table.format_element(x)


# --- page specs -------------------------------------------------------------------


def _t(ctx: BSSContext, name: str, power: int = 1, offset: int = 0, step: int = 0) -> Template:
    return Template(ctx.table.gen(name, power), offset, step)


def _base_templates(ctx: BSSContext) -> List[Template]:
    out = [_t(ctx, "a"), _t(ctx, "t0")]
    out += [_t(ctx, f"e{k}") for k in range(1, ctx.K + 1)]
    return out


def page_spec(ctx: BSSContext, n: int) -> PageSpec:
    """Closed-form description of E_(2^(n+1)-1)."""
    temps = _base_templates(ctx)
    for j in range(ctx.N + 1):
        temps.append(_t(ctx, f"v{j}", step=(1 << (j + 1)) if j < n else 0))
    return PageSpec(f"E{(1 << (n + 1)) - 1}", n, 1 << n, tuple(temps), n)


def einfty_spec(ctx: BSSContext) -> PageSpec:
    temps = _base_templates(ctx)
    for j in range(ctx.N + 1):
        temps.append(_t(ctx, f"v{j}", step=1 << (j + 1)))
    return PageSpec("Einf", ctx.N + 1, 0, tuple(temps), None)


def annihilator_spec(ctx: BSSContext, n: int) -> List[Template]:
    """Claimed generators of ann(a^(2^(n+1)-1) v_n) on E_(2^(n+1)-1)."""
    out = [_t(ctx, "e1", 1 << n)] if ctx.K >= 1 else []
    for j in range(min(n, ctx.N + 1)):
        out.append(_t(ctx, f"v{j}", step=1 << (j + 1)))
    return out


def kernel_lemma_templates(
    generators: Sequence[Template], unit: int, x1_offset: int, ann: Sequence[Template]
) -> Tuple[List[Template], int]:
    """Kernel-generator lemma on template families.

    The page is generated by ``generators`` together with the units u^(+-unit);
    the non-cycle is ``x1 = u^x1_offset`` and u^(-2*x1_offset) is the added square.
    Returns the new templates and the new unit period: (A minus x1) with x1^2 and,
    for each annihilator generator b, both b and b*x1.
    """
    if unit != x1_offset:
        raise AlgebraError("the non-cycle must be the generating unit")
    new_unit = 2 * x1_offset
    out = list(generators)
    for b in ann:
        out.append(b)
        out.append(Template(b.rest, b.offset + x1_offset, b.step))
    return out, new_unit


def lemma_spec(ctx: BSSContext, n: int) -> PageSpec:
    """The next page as predicted by the kernel-generator lemma applied to page n."""
    cur = page_spec(ctx, n)
    temps, unit = kernel_lemma_templates(cur.templates, cur.unit, 1 << n, annihilator_spec(ctx, n))
    return PageSpec(f"lemma{n + 1}", n + 1, unit, tuple(dict.fromkeys(temps)), n + 1)


# --- differentials ---------------------------------------------------------------


def page_differential(ctx: BSSContext, n: int, full: Monomial) -> Optional[Monomial]:
    """d_(2^(n+1)-1) on a template product ``rest * u^m`` of page n, as a monomial (or None).

    All generators but u^(2^n) are permanent, d(u^(2^n)) = a^(2^(n+1)-1) v_n, and
    any factor v_j (j < n) makes the result vanish because a^(2^(n+1)-1) v_j = 0.
    """
    tb = ctx.table
    p = 1 << n
    m = full[ctx.iu]
    for j in range(min(n, ctx.N + 1)):
        if full[tb.index[f"v{j}"]]:
            return None
    if m % p:
        raise AlgebraError("u-exponent is not a multiple of the page period")
    if (m // p) % 2 == 0:
        return None
    if n > ctx.N:
        raise AlgebraError(f"differential target v{n} lies beyond the window")
    x = list(full)
    x[ctx.iu] -= p
    x[ctx.ia] += 2 * p - 1
    x[tb.index[f"v{n}"]] += 1
    return tuple(x)


def d_key(key: Key, n: int) -> Key:
    stem, sigma, s, w, e = key
    return (stem - 1, sigma, s + 1, w, e + (1 << (n + 1)) - 1)


def d_source_key(key: Key, n: int) -> Key:
    stem, sigma, s, w, e = key
    return (stem + 1, sigma, s - 1, w, e - ((1 << (n + 1)) - 1))


# --- pages -------------------------------------------------------------------------


@dataclass
class SliceComparison:
    key: Key
    closed: int
    computed: int


@dataclass
class PageReport:
    n: int
    r: int
    compared: int = 0
    mismatches: List[SliceComparison] = field(default_factory=list)
    lemma_mismatches: List[Key] = field(default_factory=list)
    ill_defined: List[Key] = field(default_factory=list)
    not_closed: List[Key] = field(default_factory=list)
    intermediate_nonzero: List[Tuple[int, Key]] = field(default_factory=list)
    permanent_failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.mismatches
            or self.lemma_mismatches
            or self.ill_defined
            or self.not_closed
            or self.intermediate_nonzero
            or self.permanent_failures
        )


class Page:
    """One page: closed-form spec plus the window context that evaluates it."""

    def __init__(self, ctx: BSSContext, spec: PageSpec):
        self.ctx = ctx
        self.spec = spec

    @property
    def r(self) -> Optional[int]:
        return self.spec.r

    @property
    def n(self) -> Optional[int]:
        return self.spec.n

    def slice(self, key: Key) -> SliceData:
        return self.ctx.slice(self.spec, key)

    def dim(self, key: Key) -> int:
        return self.slice(key).dim

    def contains(self, m: Monomial) -> bool:
        """Is the monomial ``m`` (a template product) in the page."""
        rest = list(m)
        u = rest[self.ctx.iu]
        rest[self.ctx.iu] = 0
        return self.ctx.membership(self.spec).contains(tuple(rest), u)

    def element_in_page(self, x: Iterable[Monomial]) -> bool:
        """Is the element (normal form in the ambient ring) in the page's span."""
        x = frozenset(x)
        if not x:
            return True
        keys = {self.ctx.key_of(m) for m in x}
        if len(keys) != 1:
            raise AlgebraError("element is not homogeneous")
        (key,) = keys
        sd = self.slice(key)
        v = 0
        for m in x:
            v ^= self.ctx.nf_vector(self.spec.level, m)
        return gf2.solve([sd.vectors[i] for i in sd.basis], v) is not None

    def normal_form(self, m: Monomial) -> frozenset:
        return self.ctx.ambient(self.spec.level).rewrite.reduce((m,))

    def d(self, m: Monomial) -> frozenset:
        if self.spec.n is None:
            return frozenset()
        t = page_differential(self.ctx, self.spec.n, m)
        return frozenset() if t is None else self.normal_form(t)

    def d_vector(self, m: Monomial) -> int:
        if self.spec.n is None:
            return 0
        t = page_differential(self.ctx, self.spec.n, m)
        return 0 if t is None else self.ctx.nf_vector(self.spec.level, t)

    # homology
    def homology_dim(self, key: Key, report: Optional[PageReport] = None) -> int:
        if self.spec.n is None:
            return self.dim(key)
        n = self.spec.n
        sd = self.slice(key)
        outs = [self.d_vector(sd.monomials[i]) for i in sd.basis]
        rank_out = gf2.rank(outs)
        src = self.slice(d_source_key(key, n))
        ins = [self.d_vector(src.monomials[i]) for i in src.basis]
        rank_in = gf2.rank(ins)
        if report is not None:
            self._check_well_defined(key, sd, report)
            if ins:
                span = gf2.image_basis([sd.vectors[i] for i in sd.basis])
                if any(not span.contains(v) for v in ins):
                    report.not_closed.append(key)
        return sd.dim - rank_out - rank_in

    def _check_well_defined(self, key: Key, sd: SliceData, report: PageReport) -> None:
        for tag in sd.dependencies:
            acc = 0
            for i in gf2.bits(tag):
                acc ^= self.d_vector(sd.monomials[i])
            if acc:
                report.ill_defined.append(key)
                return

    def annihilator(self, x: Monomial, key: Key) -> Tuple[List[int], List[int]]:
        """Kernel of multiplication by ``x`` on the slice, and the target-space images (Q coordinates)."""
        sd = self.slice(key)
        imgs = [self.ctx.nf_vector(self.spec.level, mono_mul(sd.monomials[i], x)) for i in sd.basis]
        ker = gf2.kernel(imgs)
        out = []
        for k in ker:
            v = 0
            for j in gf2.bits(k):
                v ^= sd.vectors[sd.basis[j]]
            out.append(v)
        return out, imgs


def e1_page(ctx: BSSContext) -> Page:
    return Page(ctx, page_spec(ctx, 0))


def page(ctx: BSSContext, n: int) -> Page:
    return Page(ctx, page_spec(ctx, n))


def einfty_page(ctx: BSSContext) -> Page:
    return Page(ctx, einfty_spec(ctx))


def _subspaces_equal(a: List[int], b: List[int]) -> bool:
    ra, rb = gf2.rank(a), gf2.rank(b)
    return ra == rb and gf2.rank(a + b) == ra


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("RHOEXT_THREADS", "1")))
    except ValueError:
        return 1


def check_transition(ctx: BSSContext, n: int, keys: Optional[Iterable[Key]] = None) -> PageReport:
    """Compare H(page n, d) with the closed form of page n+1 and the lemma prediction."""
    cur = page(ctx, n)
    nxt = page(ctx, n + 1)
    lem = Page(ctx, lemma_spec(ctx, n))
    rep = PageReport(n, (1 << (n + 1)) - 1)
    for key in keys if keys is not None else ctx.window_keys():
        h = cur.homology_dim(key, rep)
        c = nxt.dim(key)
        rep.compared += 1
        if h != c:
            rep.mismatches.append(SliceComparison(key, c, h))
        a = nxt.slice(key)
        b = lem.slice(key)
        if not _subspaces_equal([a.vectors[i] for i in a.basis], [b.vectors[i] for i in b.basis]):
            rep.lemma_mismatches.append(key)
    rep.intermediate_nonzero = intermediate_check(ctx, n)
    rep.permanent_failures = permanent_cycle_check(ctx, n)
    return rep


def _transition_worker(args):
    trunc, adams_cap, n, keys = args
    ctx = BSSContext(trunc, adams_cap)
    return check_transition(ctx, n, keys)


def intermediate_check(ctx: BSSContext, n: int) -> List[Tuple[int, Key]]:
    """Between E_(2^(n+1)) and E_(2^(n+2)-1) the only candidate non-cycle is u^(2^(n+1)).

    For each intermediate r the possible targets of d_r(u^(2^(n+1))) form a slice of
    the next page with a-exponent r; all of them must be empty.
    """
    nxt = page(ctx, n + 1)
    p = 1 << (n + 1)
    bad = []
    for r in range((1 << (n + 1)), (1 << (n + 2)) - 1):
        key = (-1, -p, 1, 0, r)
        if nxt.dim(key):
            bad.append((r, key))
    return bad


def permanent_cycle_check(ctx: BSSContext, n: int, k_range: range = range(-2, 3)) -> List[str]:
    """d_r vanishes on a, t0, e_j and u^(2^(j+1)k) v_j on page n."""
    pg = page(ctx, n)
    tb = ctx.table
    cands = [tb.gen("a"), tb.gen("t0")] + [tb.gen(f"e{k}") for k in range(1, ctx.K + 1)]
    for j in range(ctx.N + 1):
        for k in k_range:
            m = list(tb.gen(f"v{j}"))
            m[ctx.iu] = (1 << (j + 1)) * k
            cands.append(tuple(m))
    bad = []
    for m in cands:
        if not pg.contains(m):
            continue
        if pg.d(m):
            bad.append(tb.format_monomial(m))
    return bad


@dataclass
class RunResult:
    page: Page
    reports: List[PageReport]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)


def run_to(n: int, ctx: Optional[BSSContext] = None, keys: Optional[Sequence[Key]] = None) -> RunResult:
    """Produce E_(2^(n+1)-1), checking every transition below it on the window."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    ctx = ctx or BSSContext()
    if n > ctx.N + 1:
        raise AlgebraError(f"pages past E_{(1 << (ctx.N + 2)) - 1} need v_{n - 1}, beyond the v-cap")
    reports = []
    threads = _threads()
    keys = list(keys) if keys is not None else list(ctx.window_keys())
    for k in range(n):
        if threads > 1:
            chunks = [keys[i::threads] for i in range(threads)]
            with ProcessPoolExecutor(threads) as pool:
                parts = list(pool.map(_transition_worker, [(ctx.trunc, ctx.adams_cap, k, c) for c in chunks]))
            rep = PageReport(k, (1 << (k + 1)) - 1)
            for p in parts:
                rep.compared += p.compared
                rep.mismatches += p.mismatches
                rep.lemma_mismatches += p.lemma_mismatches
                rep.ill_defined += p.ill_defined
                rep.not_closed += p.not_closed
            rep.intermediate_nonzero = parts[0].intermediate_nonzero
            rep.permanent_failures = parts[0].permanent_failures
        else:
            rep = check_transition(ctx, k, keys)
        reports.append(rep)
    return RunResult(page(ctx, n), reports)


# --- E-infinity checks --------------------------------------------------------------


@dataclass
class EinftyReport:
    compared: int = 0
    mismatches: List[SliceComparison] = field(default_factory=list)
    skipped: List[Key] = field(default_factory=list)
    torsion: Dict[int, Tuple[bool, bool]] = field(default_factory=dict)
    nonempty_forbidden: List[Key] = field(default_factory=list)
    stabilization: Dict[Tuple[int, int, int, int], int] = field(default_factory=dict)
    unstable: List[Tuple[int, int, int, int]] = field(default_factory=list)
    redundant: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            not self.mismatches
            and all(a and b for a, b in self.torsion.values())
            and not self.nonempty_forbidden
            and not self.unstable
        )


def beyond_cap_possible(ctx: BSSContext, key: Key) -> bool:
    """Could a class in this slice still support a differential hitting v_(N+1)?

    After E_(2^(N+1)-1) the only candidates are v-free template products with a
    nonzero u-power; a slice without them is stable within the window.
    """
    nxt = page_spec(ctx, ctx.N + 1)
    mem = ctx.membership(nxt)
    tb = ctx.table
    vs = [tb.index[f"v{j}"] for j in range(ctx.N + 1)]
    for rest, m, _ in ctx.candidates(key):
        if m and not any(rest[i] for i in vs) and mem.contains(rest, m):
            return True
    return False


def einfty_against_last_page(
    ctx: BSSContext, keys: Optional[Iterable[Key]] = None
) -> Tuple[List[SliceComparison], List[Key]]:
    """E-infinity closed form against the homology of the last page with a differential in the window.

    Returns the mismatches and the keys skipped because a later differential
    (beyond the v-cap) could still act there.
    """
    last = page(ctx, ctx.N)
    inf = einfty_page(ctx)
    bad, skipped = [], []
    for key in keys if keys is not None else ctx.window_keys():
        if beyond_cap_possible(ctx, key):
            skipped.append(key)
            continue
        h = last.homology_dim(key)
        c = inf.dim(key)
        if h != c:
            bad.append(SliceComparison(key, c, h))
    return bad, skipped


def torsion_check(ctx: BSSContext, j: int) -> Tuple[bool, bool]:
    """(a^(2^(j+1)-1) v_j = 0, a^(2^(j+1)-2) v_j != 0) in E-infinity."""
    inf = einfty_page(ctx)
    tb = ctx.table
    top = mono_mul(tb.gen("a", (1 << (j + 1)) - 1), tb.gen(f"v{j}"))
    below = mono_mul(tb.gen("a", (1 << (j + 1)) - 2), tb.gen(f"v{j}"))
    return (not inf.normal_form(top), bool(inf.normal_form(below)) and inf.contains(below))


def forbidden_degree_keys(ctx: BSSContext, e_max: Optional[int] = None) -> Iterator[Key]:
    """Keys in degrees j*rho - 1 and j*rho + sigma inside the window."""
    tr = ctx.trunc
    e_max = tr.a_cap if e_max is None else e_max
    for j in range(-20, 21):
        for stem, sigma in ((2 * j - 1, j), (2 * j + 1, j + 1)):
            if not (tr.stems[0] <= stem <= tr.stems[1] and tr.sigmas[0] <= sigma <= tr.sigmas[1]):
                continue
            for s in range(ctx.adams_cap + 1):
                for w in range(tr.weight_cap + 1):
                    for e in range(e_max + 1):
                        yield (stem, sigma, s, w, e)


def tower_bound(ctx: BSSContext, stem: int, sigma: int) -> int:
    """An a-exponent beyond which E-infinity vanishes in this degree.

    Without v's no u-power is allowed, which forces e <= stem - 2*sigma; with a v_j
    present the torsion a^(2^(j+1)-1) v_j = 0 forces e < 2^(N+1) - 1.
    """
    return max(stem - 2 * sigma, (1 << (ctx.N + 1)) - 2, 0)


def stabilization(ctx: BSSContext, stem: int, sigma: int, s: int, w: int) -> Tuple[int, bool]:
    """Least n with (a^n) constant from n on in this degree, and whether three later caps agree."""
    inf = einfty_page(ctx)
    bound = tower_bound(ctx, stem, sigma)
    dims = [inf.dim((stem, sigma, s, w, e)) for e in range(bound + 3)]
    ideal = [sum(dims[n:]) for n in range(len(dims) + 1)]
    last_nonzero = max((e for e, d in enumerate(dims) if d), default=-1)
    n0 = last_nonzero + 1
    steady = ideal[n0] == ideal[n0 + 1] == ideal[min(n0 + 2, len(ideal) - 1)] == 0
    return n0, steady


def einfty_report(ctx: BSSContext, compare_last: bool = True, keys: Optional[Sequence[Key]] = None) -> EinftyReport:
    rep = EinftyReport()
    inf = einfty_page(ctx)
    keys = list(keys) if keys is not None else list(ctx.window_keys())
    if compare_last:
        rep.mismatches, rep.skipped = einfty_against_last_page(ctx, keys)
        rep.compared = len(keys) - len(rep.skipped)
    for j in range(min(ctx.N, 2) + 1):
        rep.torsion[j] = torsion_check(ctx, j)
    for key in forbidden_degree_keys(ctx):
        if inf.dim(key):
            rep.nonempty_forbidden.append(key)
    tr = ctx.trunc
    for stem in range(tr.stems[0], tr.stems[1] + 1):
        for sigma in range(tr.sigmas[0], tr.sigmas[1] + 1):
            for s in range(ctx.adams_cap + 1):
                for w in range(tr.weight_cap + 1):
                    n0, steady = stabilization(ctx, stem, sigma, s, w)
                    rep.stabilization[(stem, sigma, s, w)] = n0
                    if not steady:
                        rep.unstable.append((stem, sigma, s, w))
    rep.redundant = redundancy_report(ctx)
    return rep


def redundancy_report(ctx: BSSContext, k_range: range = range(-1, 2)) -> List[str]:
    """E-infinity generators that are sums of products of the other generators in their slice."""
    inf = einfty_page(ctx)
    tb = ctx.table
    cands = [tb.gen("t0")] + [tb.gen(f"e{k}") for k in range(1, ctx.K + 1)]
    for j in range(ctx.N + 1):
        for k in k_range:
            m = list(tb.gen(f"v{j}"))
            m[ctx.iu] = (1 << (j + 1)) * k
            cands.append(tuple(m))
    out = []
    for g in cands:
        key = ctx.key_of(g)
        sd = inf.slice(key)
        target = ctx.nf_vector(inf.spec.level, g)
        others = []
        for mono, v in zip(sd.monomials, sd.vectors):
            if mono != g and _is_decomposable(ctx, inf, mono):
                others.append(v)
        if others and gf2.solve(others, target) is not None:
            out.append(tb.format_monomial(g))
    return out


def _is_decomposable(ctx: BSSContext, pg: Page, m: Monomial) -> bool:
    rest = list(m)
    rest[ctx.iu] = 0
    return sum(e for i, e in enumerate(rest) if i != ctx.iu) >= 2


# --- annihilators -------------------------------------------------------------------


@dataclass
class AnnihilatorReport:
    element: str
    page: str
    slices: int = 0
    claimed_not_annihilating: List[Key] = field(default_factory=list)
    annihilator_not_claimed: List[Key] = field(default_factory=list)
    generators: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.claimed_not_annihilating and not self.annihilator_not_claimed


def ideal_slice(ctx: BSSContext, pg: Page, gens: Sequence[Template], key: Key) -> List[int]:
    """Span (ambient coordinates) of g*s for generator families g and page elements s."""
    sd = pg.slice(key)
    mem = ctx.membership(pg.spec)
    out = []
    for mono, v in zip(sd.monomials, sd.vectors):
        rest = list(mono)
        m = rest[ctx.iu]
        rest[ctx.iu] = 0
        rest = tuple(rest)
        for g in gens:
            if any(x < y for x, y in zip(rest, g.rest)):
                continue
            q = mono_div(rest, g.rest)
            ok = False
            for o, gg in mem.achievable(q):
                lat = math.gcd(gg, g.step)
                diff = m - g.offset - o
                if (lat and diff % lat == 0) or (not lat and diff == 0):
                    ok = True
                    break
            if ok:
                out.append(v)
                break
    return out


def annihilator(ctx: BSSContext, x: Monomial, pg: Page, claimed: Sequence[Template], keys: Optional[Iterable[Key]] = None) -> AnnihilatorReport:
    """Compare ann(x) on the page with the ideal generated by ``claimed``, slice by slice."""
    tb = ctx.table
    rep = AnnihilatorReport(tb.format_monomial(x), pg.spec.name)
    rep.generators = [
        tb.format_monomial(mono_mul(t.rest, tuple(t.offset if i == ctx.iu else 0 for i in range(tb.size))))
        + (f"*u^({t.step}k)" if t.step else "")
        for t in claimed
    ]
    for key in keys if keys is not None else ctx.window_keys():
        sd = pg.slice(key)
        if not sd.basis:
            continue
        rep.slices += 1
        ker, _ = pg.annihilator(x, key)
        ideal = ideal_slice(ctx, pg, claimed, key)
        ideal_span = gf2.image_basis(ideal)
        if any(not ideal_span.contains(k) for k in ker):
            rep.annihilator_not_claimed.append(key)
        ker_span = gf2.image_basis(ker)
        if any(not ker_span.contains(v) for v in ideal):
            rep.claimed_not_annihilating.append(key)
    return rep


def vn_torsion_annihilator(ctx: BSSContext, n: int, keys: Optional[Iterable[Key]] = None) -> AnnihilatorReport:
    """ann(a^(2^(n+1)-1) v_n) on E_(2^(n+1)-1) against (e1^(2^n), u^(2^(j+1)k) v_j for j < n)."""
    tb = ctx.table
    x = mono_mul(tb.gen("a", (1 << (n + 1)) - 1), tb.gen(f"v{n}"))
    return annihilator(ctx, x, page(ctx, n), annihilator_spec(ctx, n), keys)


def a_power_annihilator(ctx: BSSContext, n: int, keys: Optional[Iterable[Key]] = None) -> AnnihilatorReport:
    """ann(a^(2^(n+1)-1)) on E_(2^(n+1)-1) against (u^(2^(j+1)k) v_j for j < n)."""
    tb = ctx.table
    x = tb.gen("a", (1 << (n + 1)) - 1)
    claimed = [_t(ctx, f"v{j}", step=1 << (j + 1)) for j in range(min(n, ctx.N + 1))]
    return annihilator(ctx, x, page(ctx, n), claimed, keys)


# --- structural shadows ---------------------------------------------------------------


def t0_bijection(ctx: BSSContext, keys: Optional[Iterable[Key]] = None) -> List[Key]:
    """Even-weight E-infinity slices on which multiplication by t0 is not a bijection."""
    inf = einfty_page(ctx)
    t0 = ctx.table.gen("t0")
    bad = []
    for key in keys if keys is not None else ctx.window_keys():
        stem, sigma, s, w, e = key
        if w % 2 or w + 1 > ctx.trunc.weight_cap:
            continue
        src = inf.slice(key)
        tgt = inf.slice((stem + 1, sigma, s, w + 1, e))
        imgs = [ctx.nf_vector(inf.spec.level, mono_mul(src.monomials[i], t0)) for i in src.basis]
        r = gf2.rank(imgs)
        if not (r == src.dim == tgt.dim):
            bad.append(key)
        elif imgs:
            span = gf2.image_basis([tgt.vectors[i] for i in tgt.basis])
            if any(not span.contains(v) for v in imgs):
                bad.append(key)
    return bad


def classical_presentation(ctx: BSSContext) -> AlgebraPresentation:
    """F2[v_0.., t0, e_1..]/(t0^2 + e1, r_k), graded by underlying degree (u = 1, a = 0)."""
    gens = []
    for name in ctx.table.names:
        if name in ("a", "u"):
            continue
        g = ctx.table.generators[ctx.table.index[name]]
        d = g.degree
        gens.append(Generator(name, MultiDegree(RODegree(d.ro.underlying, 0), d.adams, 0, d.weight)))
    table = GeneratorTable(gens)
    rels = []
    if ctx.K >= 1:
        rels.append(table.parse_element("t0^2 + e1"))
    for j in range(1, ctx.K + 1):
        r = filtration_d1(j, table)
        if r:
            rels.append(r)
    return AlgebraPresentation(table, rels, name="classical-E1")


def restriction_check(ctx: BSSContext, e_max: Optional[int] = None) -> List[Tuple[int, int, int, int, int]]:
    """Degrees n*rho where E-infinity dims differ from the classical associated graded.

    Returns (n, s, w, equivariant, classical) for each disagreement.
    """
    inf = einfty_page(ctx)
    cls = classical_presentation(ctx)
    tr = ctx.trunc
    trunc_cls = TruncationWindow(weight_cap=tr.weight_cap, v_cap=tr.v_cap, a_cap=0, adams_cap=ctx.adams_cap)
    bad = []
    for n in range(tr.stems[0], tr.stems[1] + 1):
        stem = 2 * n
        if not (tr.stems[0] <= stem <= tr.stems[1] and tr.sigmas[0] <= n <= tr.sigmas[1]):
            continue
        for s in range(ctx.adams_cap + 1):
            for w in range(tr.weight_cap + 1):
                eq = sum(inf.dim((stem, n, s, w, e)) for e in range(tower_bound(ctx, stem, n) + 1))
                cl = len(basis_slice(cls, RODegree(stem, 0), trunc_cls, adams=s, weight=w))
                if eq != cl:
                    bad.append((n, s, w, eq, cl))
    return bad


# --- hidden extensions ------------------------------------------------------------------


@dataclass(frozen=True)
class HiddenExtension:
    source: str
    multiplier: str
    target: str
    weight: int


def hidden_extensions() -> List[HiddenExtension]:
    """Multiplicative extensions certified by Massey products; annotations, not relations."""
    return [
        HiddenExtension("t0^2", "v0", "a^2*v1*e1", 2),
        HiddenExtension("e1*t0^4 + a^2*e2*t0^2", "v1", "a^4*v2*e1^3", 6),
    ]


# --- synthetic DGAs for the kernel-generator lemma ----------------------------------------


@dataclass
class SyntheticDGA:
    """A graded-commutative F2-algebra with a derivation given on generators."""

    name: str
    presentation: AlgebraPresentation
    differential: Dict[str, frozenset]
    generators: List[frozenset]
    non_cycle: frozenset
    annihilator: List[frozenset]
    degrees: List[Tuple[RODegree, Optional[int]]]
    trunc: TruncationWindow

    def d_mono(self, m: Monomial) -> frozenset:
        tb = self.presentation.table
        acc: set = set()
        for i, e in enumerate(m):
            if not e or e % 2 == 0:
                continue
            name = tb.names[i]
            dg = self.differential.get(name, frozenset())
            if not dg:
                continue
            rest = list(m)
            rest[i] -= 1
            for x in dg:
                acc ^= {mono_mul(tuple(rest), x)}
        return self.presentation.reduce(acc)

    def d(self, x: Iterable[Monomial]) -> frozenset:
        acc: set = set()
        for m in x:
            acc ^= self.d_mono(m)
        return frozenset(acc)


def kernel_lemma_generators(dga: SyntheticDGA) -> List[frozenset]:
    """(A minus x1) with x1^2 and b, b*x1 for b generating ann(d x1)."""
    pres = dga.presentation
    x1 = dga.non_cycle
    out = [g for g in dga.generators if g != x1]
    out.append(pres.multiply(x1, x1))
    for b in dga.annihilator:
        out.append(b)
        out.append(pres.multiply(b, x1))
    return [g for g in out if g]


@dataclass
class LemmaCheck:
    name: str
    degrees: int
    failures: List[RODegree]
    non_cycles: List[str]

    @property
    def ok(self) -> bool:
        return not self.failures and not self.non_cycles


def check_kernel_lemma(dga: SyntheticDGA) -> LemmaCheck:
    """Products of lemma generators plus boundaries span the cycles in every window degree."""
    pres = dga.presentation
    tb = pres.table
    gens = kernel_lemma_generators(dga)
    non_cycles = [tb.format_element(g) for g in gens if dga.d(g)]
    failures = []
    count = 0
    buckets = _product_buckets(dga, gens)
    for d, s in dga.degrees:
        count += 1
        basis = basis_slice(pres, d, dga.trunc, adams=s)
        if not basis:
            continue
        idx = {m: i for i, m in enumerate(basis)}
        tgt_basis = basis_slice(pres, d - RODegree(1, 0), dga.trunc, adams=None if s is None else s + 1)
        tidx = {m: i for i, m in enumerate(tgt_basis)}

        def vec(x, index):
            v = 0
            for m in x:
                if m not in index:
                    raise AlgebraError("element leaves the window basis")
                v ^= 1 << index[m]
            return v

        cols = [vec(dga.d_mono(m), tidx) for m in basis]
        cycles = gf2.kernel(cols)
        if s is None:
            src = basis_slice(pres, d + RODegree(1, 0), dga.trunc)
        elif s > 0:
            src = basis_slice(pres, d + RODegree(1, 0), dga.trunc, adams=s - 1)
        else:
            src = []
        bnd = [vec(dga.d_mono(m), idx) for m in src]
        prods = [vec(p, idx) for p in buckets.get((d, s), [])]
        span = gf2.image_basis(bnd + prods)
        if any(not span.contains(c) for c in cycles):
            failures.append(d)
    return LemmaCheck(dga.name, count, failures, non_cycles)


def _product_buckets(dga: SyntheticDGA, gens: List[frozenset]) -> Dict[Tuple[RODegree, Optional[int]], List[frozenset]]:
    """Products of lemma generators, bucketed by the window degrees they land in.

    A generator of positive underlying degree is raised at most as far as the top
    window degree allows, one of negative underlying degree (an a-power) at most to
    the a-cap, and a unit of underlying degree zero to at most a fixed small power.
    """
    pres = dga.presentation
    tb = pres.table
    wanted = set(dga.degrees)
    top = max(d.underlying for d, _ in dga.degrees)
    s_top = max((s for _, s in dga.degrees if s is not None), default=None)
    info = []
    for g in gens:
        (gd,) = {(tb.ro(m), tb.adams(m)) for m in g}
        ro, ad = gd
        if ro.underlying > 0:
            cap = top // ro.underlying
        elif ro.underlying < 0:
            cap = dga.trunc.a_cap
        else:
            cap = 6
        if ad and s_top is not None:
            cap = min(cap, s_top // ad)
        info.append((g, ro, ad, cap))
    out: Dict[Tuple[RODegree, Optional[int]], List[frozenset]] = {}

    def rec(k: int, cur: frozenset, deg: RODegree, ad: int) -> None:
        if k == len(info):
            for key in ((deg, ad), (deg, None)):
                if key in wanted:
                    out.setdefault(key, []).append(cur)
            return
        rec(k + 1, cur, deg, ad)
        g, gd, ga, cap = info[k]
        for _ in range(cap):
            cur = pres.multiply(cur, g)
            if not cur:
                return
            deg, ad = deg + gd, ad + ga
            rec(k + 1, cur, deg, ad)

    rec(0, pres.one(), RODegree(0, 0), 0)
    return out


def synthetic_dgas() -> List[SyntheticDGA]:
    """Three single-differential examples for the kernel-generator lemma."""
    out = []
    # F2[x, y], dx = y, |x| = 2, |y| = 1
    t1 = GeneratorTable([
        Generator("x", MultiDegree(RODegree(2, 0))),
        Generator("y", MultiDegree(RODegree(1, 0))),
    ])
    p1 = AlgebraPresentation(t1, [], name="poly")
    out.append(SyntheticDGA(
        "F2[x,y], dx=y", p1, {"x": frozenset((t1.gen("y"),))},
        [frozenset((t1.gen("x"),)), frozenset((t1.gen("y"),))],
        frozenset((t1.gen("x"),)), [],
        [(RODegree(k, 0), None) for k in range(0, 16)], TruncationWindow(weight_cap=0, a_cap=0),
    ))
    # F2[u^+-1, a, v], du = a v  (u invertible; u^-2 added as a cycle)
    t2 = GeneratorTable([
        Generator("v", MultiDegree(RODegree(0, 0), adams=1)),
        Generator("a", MultiDegree(RODegree(0, -1))),
        Generator("u", MultiDegree(RODegree(1, -1)), invertible=True),
    ])
    p2 = AlgebraPresentation(t2, [], name="laurent")
    u = frozenset((t2.gen("u"),))
    out.append(SyntheticDGA(
        "F2[u^+-1,a,v], du=av", p2, {"u": frozenset((mono_mul(t2.gen("a"), t2.gen("v")),))},
        [u, frozenset((t2.gen("u", -2),)), frozenset((t2.gen("a"),)), frozenset((t2.gen("v"),))],
        u, [],
        [(RODegree(t, sg), s) for t in range(-4, 5) for sg in range(-6, 3) for s in range(3)],
        TruncationWindow(weight_cap=0, a_cap=24, adams_cap=4),
    ))
    # F2[x, y, z]/(yz), dx = y, ann(y) = (z)
    t3 = GeneratorTable([
        Generator("x", MultiDegree(RODegree(2, 0))),
        Generator("y", MultiDegree(RODegree(1, 0))),
        Generator("z", MultiDegree(RODegree(3, 0))),
    ])
    p3 = AlgebraPresentation(t3, [frozenset((mono_mul(t3.gen("y"), t3.gen("z")),))], name="quotient")
    out.append(SyntheticDGA(
        "F2[x,y,z]/(yz), dx=y", p3, {"x": frozenset((t3.gen("y"),))},
        [frozenset((t3.gen(n),)) for n in ("x", "y", "z")],
        frozenset((t3.gen("x"),)), [frozenset((t3.gen("z"),))],
        [(RODegree(k, 0), None) for k in range(0, 16)], TruncationWindow(weight_cap=0, a_cap=0),
    ))
    return out


# --- appendix rings ------------------------------------------------------------------------


def appendix_table(k: int, degree_bound: int) -> GeneratorTable:
    """Generators of R_k below the degree bound, bigraded so that every slice is finite.

    w has RO degree (2^k, -2^k), e0 is (1, 0), e_i is (2^i - 1) rho and v_j is
    (2^(j+k) - 1) rho; the singly graded degree is the underlying one.
    """
    gens = []
    i = 1
    es = []
    while 2 * ((1 << i) - 1) <= degree_bound:
        es.append(i)
        i += 1
    for i in reversed(es):
        gens.append(Generator(f"e{i}", MultiDegree(RODegree((1 << i) - 1, (1 << i) - 1), weight=1 << i)))
    gens.append(Generator("e0", MultiDegree(RODegree(1, 0), weight=1)))
    j = 0
    vs = []
    while 2 * ((1 << (j + k)) - 1) <= degree_bound:
        vs.append(j)
        j += 1
    for j in reversed(vs):
        p = (1 << (j + k)) - 1
        gens.append(Generator(f"v{j}", MultiDegree(RODegree(p, p), adams=1)))
    gens.append(Generator("w", MultiDegree(RODegree(1 << k, -(1 << k))), invertible=True))
    return GeneratorTable(gens)


def appendix_relation(table: GeneratorTable, n: int, k: int) -> frozenset:
    """r_(1,k) = e0^(2^(k+1)) + w e1^(2^k); r_(n,k) = sum_i v_i e_(n-i)^(2^(i+k)) for n > 1."""
    if n == 1:
        if "e1" not in table.index:
            return frozenset()
        return frozenset({table.gen("e0", 1 << (k + 1)), mono_mul(table.gen("w"), table.gen("e1", 1 << k))})
    terms = set()
    for i in range(n):
        if f"v{i}" in table.index and f"e{n - i}" in table.index:
            terms ^= {mono_mul(table.gen(f"v{i}"), table.gen(f"e{n - i}", 1 << (i + k)))}
    return frozenset(terms)


def appendix_relation_degree(n: int, k: int) -> int:
    return (1 << (n + k + 1)) - 2 if n > 1 else 1 << (k + 1)


@dataclass
class DomainReport:
    k: int
    degree_bound: int
    v_cap: int
    pairs: int = 0
    zero_divisor_pairs: List[Tuple[str, str]] = field(default_factory=list)
    vector_checks: int = 0
    vector_zero_divisors: List[Tuple[str, str]] = field(default_factory=list)
    regular_slices: int = 0
    non_injective: List[Tuple[str, Tuple[int, int, int]]] = field(default_factory=list)
    identity_failures: int = 0

    @property
    def ok(self) -> bool:
        return not (self.zero_divisor_pairs or self.vector_zero_divisors or self.non_injective or self.identity_failures)


def _appendix_slices(pres: AlgebraPresentation, degree_bound: int, v_cap: int) -> Dict[Tuple[int, int, int], List[Monomial]]:
    """Normal monomials keyed by (underlying degree, coweight, v-count)."""
    trunc = TruncationWindow(weight_cap=10 ** 6, v_cap=10 ** 6, a_cap=0, adams_cap=v_cap)
    out = {}
    for D in range(0, degree_bound + 1):
        for c in range(-D - 64, D + 65):
            if (D + c) % 2:
                continue
            ro = RODegree((D + c) // 2, (D - c) // 2)
            for s in range(v_cap + 1):
                b = basis_slice(pres, ro, trunc, adams=s)
                if b:
                    out[(D, c, s)] = b
    return out


def appendix_presentation(k: int, degree_bound: int, table: Optional[GeneratorTable] = None,
                          drop: Sequence[str] = (), relations: Optional[Sequence[int]] = None) -> AlgebraPresentation:
    table = table or appendix_table(k, degree_bound)
    rels = []
    ns = relations if relations is not None else [
        n for n in range(1, 64) if appendix_relation_degree(n, k) <= degree_bound
    ]
    for n in ns:
        r = appendix_relation(table, n, k)
        r = frozenset(m for m in r if not any(m[table.index[d]] for d in drop if d in table.index))
        if r:
            rels.append(r)
    for d in drop:
        if d in table.index:
            rels.append(frozenset((table.gen(d),)))
    return AlgebraPresentation(table, rels, name=f"R{k}")


def appendix_domain_check(k: int, degree_bound: int, v_cap: int = 3, vector_dim_cap: int = 3) -> DomainReport:
    """Integral-domain and regular-sequence scan of R_k below ``degree_bound``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    rep = DomainReport(k, degree_bound, v_cap)
    pres = appendix_presentation(k, degree_bound)
    rw = pres.rewrite
    tb = pres.table
    slices = _appendix_slices(pres, degree_bound, v_cap)
    keys = sorted(slices)
    one = tb.one()
    for key in keys:
        for m in slices[key]:
            if rw.reduce((mono_mul(one, m),)) != frozenset((m,)):
                rep.identity_failures += 1
    # exhaustive monomial pairs
    for a_i, ka in enumerate(keys):
        for kb in keys[a_i:]:
            if ka[0] + kb[0] > degree_bound or ka[2] + kb[2] > v_cap:
                continue
            for x in slices[ka]:
                for y in slices[kb]:
                    rep.pairs += 1
                    if not rw.reduce((mono_mul(x, y),)):
                        rep.zero_divisor_pairs.append((tb.format_monomial(x), tb.format_monomial(y)))
    # all nonzero vectors in small slices
    small = [kk for kk in keys if len(slices[kk]) <= vector_dim_cap and len(slices[kk]) > 1]
    for a_i, ka in enumerate(small):
        for kb in small[a_i:]:
            if ka[0] + kb[0] > degree_bound or ka[2] + kb[2] > v_cap:
                continue
            xs = _nonzero_vectors(slices[ka])
            ys = _nonzero_vectors(slices[kb])
            for x in xs:
                for y in ys:
                    rep.vector_checks += 1
                    if not rw.multiply(x, y):
                        rep.vector_zero_divisors.append((tb.format_element(x), tb.format_element(y)))
    _regularity(rep, k, degree_bound, v_cap)
    return rep


def _nonzero_vectors(basis: List[Monomial]) -> List[frozenset]:
    out = []
    for mask in range(1, 1 << len(basis)):
        out.append(frozenset(basis[i] for i in gf2.bits(mask)))
    return out


def _regularity(rep: DomainReport, k: int, degree_bound: int, v_cap: int) -> None:
    """Injectivity of multiplication by r_(n-i+1,k) on A_i / J_(i-1) and on A / (r_n, ..., r_(n-i+2))."""
    table = appendix_table(k, degree_bound)
    ns = [n for n in range(1, 64) if appendix_relation_degree(n, k) <= degree_bound]
    if not ns:
        return
    n = max(ns)
    for i in range(1, n + 1):
        target = n - i + 1
        prior = list(range(n, target, -1))
        r_deg = appendix_relation_degree(target, k)
        variants = []
        if i <= n:
            drop = ["e0"] + [f"e{j}" for j in range(1, n - i + 1)]
            variants.append((f"A{i}/J{i - 1}", drop))
        variants.append((f"A/(r{n}..r{target + 1})", []))
        for label, drop in variants:
            pres = appendix_presentation(k, degree_bound, table, drop, prior)
            r = appendix_relation(table, target, k)
            r = pres.reduce(r)
            if not r:
                if target == 1 and "e0" in drop:
                    continue
                rep.non_injective.append((f"{label}: r{target} vanishes", (0, 0, 0)))
                continue
            slices = _appendix_slices(pres, degree_bound - r_deg, v_cap - (1 if target > 1 else 0))
            for key, basis in slices.items():
                imgs = []
                index: Dict[Monomial, int] = {}
                for m in basis:
                    v = 0
                    for x in pres.multiply(frozenset((m,)), r):
                        j = index.setdefault(x, len(index))
                        v ^= 1 << j
                    imgs.append(v)
                rep.regular_slices += 1
                if gf2.rank(imgs) != len(basis):
                    rep.non_injective.append((f"{label}: r{target}", key))


__all__ = [
    "BSSContext",
    "Page",
    "PageSpec",
    "Template",
    "annihilator",
    "appendix_domain_check",
    "check_kernel_lemma",
    "e1_page",
    "einfty_page",
    "einfty_report",
    "hidden_extensions",
    "a_power_annihilator",
    "vn_torsion_annihilator",
    "kernel_lemma_generators",
    "page",
    "restriction_check",
    "run_to",
    "synthetic_dgas",
    "t0_bijection",
]
