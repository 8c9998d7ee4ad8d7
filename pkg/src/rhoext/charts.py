"""Spectral-sequence charts: dots in (stem, Adams filtration), one symbol per u-periodic family."""

from __future__ import annotations

import html
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import gf2
from .algebra import Monomial, mono_mul
from .bockstein import BSSContext, Page, hidden_extensions

LINE_KINDS = ("v0", "a", "v1", "hidden")


@dataclass(frozen=True, order=True)
class Dot:
    stem: int
    filtration: int
    label: str
    period: int
    weight: int

    @property
    def key(self) -> Tuple[int, int, str]:
        return (self.stem, self.filtration, self.label)


@dataclass(frozen=True, order=True)
class Line:
    kind: str
    source: Tuple[int, int, str]
    target: Tuple[int, int, str]


@dataclass
class Chart:
    weight: int
    page: str
    dots: List[Dot] = field(default_factory=list)
    lines: List[Line] = field(default_factory=list)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chart):
            return NotImplemented
        return (
            self.weight == other.weight
            and self.page == other.page
            and sorted(self.dots) == sorted(other.dots)
            and sorted(self.lines) == sorted(other.lines)
        )

    def dot(self, key: Tuple[int, int, str]) -> Optional[Dot]:
        for d in self.dots:
            if d.key == key:
                return d
        return None

    def find(self, label: str) -> List[Dot]:
        return [d for d in self.dots if d.label == label]

    def validate(self) -> List[str]:
        keys = {d.key for d in self.dots}
        errs = []
        if len(keys) != len(self.dots):
            errs.append("duplicate dots")
        for ln in self.lines:
            if ln.kind not in LINE_KINDS:
                errs.append(f"unknown line kind {ln.kind}")
            if ln.source not in keys or ln.target not in keys:
                errs.append(f"dangling line {ln}")
        return errs


# --- building -----------------------------------------------------------------


def _period_of(ctx: BSSContext, pg: Page, full: Monomial) -> int:
    rest = list(full)
    m = rest[ctx.iu]
    rest[ctx.iu] = 0
    for o, g in sorted(ctx.membership(pg.spec).achievable(tuple(rest))):
        if (g and (m - o) % g == 0) or (not g and m == o):
            return g
    raise ValueError("monomial is not in the page")


def _canonical(ctx: BSSContext, full: Monomial, period: int) -> Monomial:
    if not period:
        return full
    x = list(full)
    x[ctx.iu] %= period
    return tuple(x)


def _high_v(ctx: BSSContext, m: Monomial, hide_v_from: Optional[int]) -> bool:
    """True when m involves some v_n with n >= hide_v_from."""
    if hide_v_from is None:
        return False
    tb = ctx.table
    return any(m[tb.index[f"v{j}"]] for j in range(hide_v_from, ctx.trunc.v_cap + 1))


class _Builder:
    def __init__(self, ctx: BSSContext, pg: Page, weight: int, e_max: Optional[int], hide_v_from: Optional[int] = None):
        self.ctx = ctx
        self.pg = pg
        self.weight = weight
        self.e_max = ctx.trunc.a_cap if e_max is None else e_max
        self.hide_v_from = hide_v_from
        self.dots: Dict[Tuple[int, int, str], Dot] = {}
        self.lines: set = set()
        self._basis: Dict[tuple, Tuple[List[Monomial], List[int]]] = {}

    def in_window(self, key) -> bool:
        stem, sigma, s, w, e = key
        tr = self.ctx.trunc
        return (
            tr.stems[0] <= stem <= tr.stems[1]
            and tr.sigmas[0] <= sigma <= tr.sigmas[1]
            and 0 <= s <= self.ctx.adams_cap
            and w == self.weight
            and 0 <= e <= self.e_max
        )

    def basis(self, key) -> Tuple[List[Monomial], List[int]]:
        hit = self._basis.get(key)
        if hit is None:
            sd = self.pg.slice(key)
            hit = ([sd.monomials[i] for i in sd.basis], [sd.vectors[i] for i in sd.basis])
            self._basis[key] = hit
        return hit

    def dot_for(self, full: Monomial) -> Dot:
        ctx = self.ctx
        period = _period_of(ctx, self.pg, full)
        canon = _canonical(ctx, full, period)
        key = ctx.key_of(full)
        d = Dot(key[0], key[2], ctx.table.format_monomial(canon), period, self.weight)
        self.dots.setdefault(d.key, d)
        return d

    def express(self, key, vec: int) -> List[Monomial]:
        monos, vecs = self.basis(key)
        sol = gf2.solve(vecs, vec)
        if sol is None:
            return []
        return [monos[i] for i in gf2.bits(sol)]

    def build(self) -> None:
        ctx = self.ctx
        tb = ctx.table
        mults = [("v0", tb.gen("v0"))] if "v0" in tb.index else []
        mults.append(("a", tb.gen("a")))
        if "v1" in tb.index:
            mults.append(("v1", tb.gen("v1")))
        keys = [k for k in ctx.window_keys(self.e_max) if k[3] == self.weight]
        for key in keys:
            monos, _ = self.basis(key)
            for m in monos:
                if _high_v(ctx, m, self.hide_v_from):
                    continue
                src = self.dot_for(m)
                for kind, g in mults:
                    prod = mono_mul(m, g)
                    tkey = ctx.key_of(prod)
                    if not self.in_window(tkey):
                        continue
                    v = ctx.nf_vector(self.pg.spec.level, prod)
                    if not v:
                        continue
                    for t in self.express(tkey, v):
                        if _high_v(ctx, t, self.hide_v_from):
                            continue
                        self.lines.add(Line(kind, src.key, self.dot_for(t).key))
        self._hidden()

    def _hidden(self) -> None:
        ctx = self.ctx
        tb = ctx.table
        for h in hidden_extensions():
            if h.weight != self.weight:
                continue
            try:
                src = tb.parse_element(h.source)
                mult = tb.parse_monomial(h.multiplier)
                tgt = tb.parse_element(h.target)
            except Exception:
                continue
            if len(src) != 1:
                continue
            (s_mono,) = src
            skey = ctx.key_of(s_mono)
            t_keys = {ctx.key_of(m) for m in tgt}
            if len(t_keys) != 1 or not self.in_window(skey):
                continue
            (tkey,) = t_keys
            # a hidden extension may jump a-filtration, never lower it
            naive = ctx.key_of(mono_mul(s_mono, mult))
            if not self.in_window(tkey) or tkey[:4] != naive[:4] or tkey[4] < naive[4]:
                continue
            svec = ctx.nf_vector(self.pg.spec.level, s_mono)
            tvec = 0
            for m in tgt:
                tvec ^= ctx.nf_vector(self.pg.spec.level, m)
            for s in self.express(skey, svec):
                for t in self.express(tkey, tvec):
                    self.lines.add(Line("hidden", self.dot_for(s).key, self.dot_for(t).key))


def chart_of_page(pg: Page, weight: int, e_max: Optional[int] = None, hide_v_from: Optional[int] = 5) -> Chart:
    """Chart of one Snaith weight of a page over the context window.

    Classes involving v_n for n >= ``hide_v_from`` are left out, together with
    their lines. Pass ``None`` to draw everything.
    """
    ctx = pg.ctx
    if not 0 <= weight <= ctx.trunc.weight_cap:
        raise ValueError(f"weight {weight} outside the window")
    b = _Builder(ctx, pg, weight, e_max, hide_v_from)
    b.build()
    return Chart(weight, pg.spec.name, sorted(b.dots.values()), sorted(b.lines))


def members_in_window(ctx: BSSContext, dot: Dot) -> int:
    """How many window slice basis elements a dot stands for."""
    m = ctx.table.parse_monomial(dot.label)
    sigma = ctx.key_of(m)[1]
    lo, hi = ctx.trunc.sigmas
    if not dot.period:
        return int(lo <= sigma <= hi)
    # u^P lowers sigma by P
    p = dot.period
    return sum(1 for sg in range(lo, hi + 1) if (sigma - sg) % p == 0)


def slice_totals(pg: Page, weight: int, e_max: Optional[int] = None, hide_v_from: Optional[int] = None) -> Dict[Tuple[int, int], int]:
    ctx = pg.ctx
    out: Dict[Tuple[int, int], int] = {}
    for key in ctx.window_keys(e_max):
        if key[3] != weight:
            continue
        if hide_v_from is None:
            d = pg.dim(key)
        else:
            sd = pg.slice(key)
            d = sum(1 for i in sd.basis if not _high_v(ctx, sd.monomials[i], hide_v_from))
        if d:
            out[(key[0], key[2])] = out.get((key[0], key[2]), 0) + d
    return out


def dot_totals(ctx: BSSContext, chart: Chart) -> Dict[Tuple[int, int], int]:
    out: Dict[Tuple[int, int], int] = {}
    for d in chart.dots:
        out[(d.stem, d.filtration)] = out.get((d.stem, d.filtration), 0) + members_in_window(ctx, d)
    return out


# --- TSV ------------------------------------------------------------------------

TSV_HEADER = "stem\tfiltration\tlabel\tperiod\tweight\tlines"


def _fmt_target(kind: str, t: Tuple[int, int, str]) -> str:
    return f"{kind}>{t[0]},{t[1]},{t[2]}"


def to_tsv(chart: Chart) -> str:
    out = [f"# page={chart.page} weight={chart.weight}", TSV_HEADER]
    by_src: Dict[Tuple[int, int, str], List[Line]] = {}
    for ln in chart.lines:
        by_src.setdefault(ln.source, []).append(ln)
    for d in sorted(chart.dots):
        cells = [str(d.stem), str(d.filtration), d.label, str(d.period), str(d.weight)]
        cells += [_fmt_target(ln.kind, ln.target) for ln in sorted(by_src.get(d.key, []))]
        out.append("\t".join(cells))
    return "\n".join(out) + "\n"


def from_tsv(text: str) -> Chart:
    lines = text.splitlines()
    meta = dict(kv.split("=", 1) for kv in lines[0].lstrip("# ").split())
    if lines[1] != TSV_HEADER:
        raise ValueError("unexpected TSV header")
    chart = Chart(int(meta["weight"]), meta["page"])
    for row in lines[2:]:
        if not row.strip():
            continue
        cells = row.split("\t")
        d = Dot(int(cells[0]), int(cells[1]), cells[2], int(cells[3]), int(cells[4]))
        chart.dots.append(d)
        for c in cells[5:]:
            kind, rest = c.split(">", 1)
            st, fi, lab = rest.split(",", 2)
            chart.lines.append(Line(kind, d.key, (int(st), int(fi), lab)))
    chart.dots.sort()
    chart.lines.sort()
    return chart


# --- SVG ------------------------------------------------------------------------

_CELL = 48
_MARGIN = 60
_LEGEND = 150
_STYLE = {
    "v0": 'stroke="black"',
    "a": 'stroke="#1f5fbf"',
    "v1": 'stroke="#2a8a2a"',
    "hidden": 'stroke="#c03030" stroke-dasharray="4,3"',
}


def display_label(label: str) -> str:
    """Rewrite a label with t0^2 factors pulled out as u*e1 (same class)."""
    exps: Dict[str, int] = {}
    order: List[str] = []
    for part in label.split("*"):
        if part == "1":
            continue
        name, _, e = part.partition("^")
        if name not in exps:
            order.append(name)
        exps[name] = exps.get(name, 0) + (int(e) if e else 1)
    k = exps.get("t0", 0) // 2
    if not k:
        return label
    exps["t0"] -= 2 * k
    for name in ("e1", "u"):
        if name not in exps:
            order.append(name)
        exps[name] = exps.get(name, 0) + k
    parts = [n if exps[n] == 1 else f"{n}^{exps[n]}" for n in order if exps[n]]
    return "*".join(parts) if parts else "1"


def to_svg(chart: Chart, relabel_t0_squared: bool = False) -> str:
    """Static SVG: x = stem, y = Adams filtration, dots spread within a cell."""
    stems = [d.stem for d in chart.dots] or [0]
    filts = [d.filtration for d in chart.dots] or [0]
    x0, x1 = min(stems), max(stems)
    y0, y1 = min(filts), max(filts)
    width = (x1 - x0 + 1) * _CELL + 2 * _MARGIN
    height = (y1 - y0 + 1) * _CELL + 2 * _MARGIN + _LEGEND
    cells: Dict[Tuple[int, int], List[Dot]] = {}
    for d in sorted(chart.dots):
        cells.setdefault((d.stem, d.filtration), []).append(d)
    pos: Dict[Tuple[int, int, str], Tuple[float, float]] = {}
    for (st, fi), ds in cells.items():
        cx = _MARGIN + (st - x0 + 0.5) * _CELL
        cy = _MARGIN + (y1 - fi + 0.5) * _CELL
        n = len(ds)
        cols = math.ceil(math.sqrt(n))
        step = _CELL / (cols + 1)
        for i, d in enumerate(ds):
            r, c = divmod(i, cols)
            pos[d.key] = (cx - _CELL / 2 + step * (c + 1), cy - _CELL / 2 + step * (r + 1))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0f}" height="{height:.0f}">',
        f'<title>{html.escape(chart.page)} weight {chart.weight}</title>',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for st in range(x0, x1 + 1):
        x = _MARGIN + (st - x0 + 0.5) * _CELL
        out.append(f'<text x="{x:.1f}" y="{_MARGIN + (y1 - y0 + 1) * _CELL + 16:.1f}" font-size="10" text-anchor="middle">{st}</text>')
    for fi in range(y0, y1 + 1):
        y = _MARGIN + (y1 - fi + 0.5) * _CELL
        out.append(f'<text x="{_MARGIN - 12:.1f}" y="{y + 3:.1f}" font-size="10" text-anchor="end">{fi}</text>')
    for ln in sorted(chart.lines):
        if ln.source not in pos or ln.target not in pos:
            continue
        (xa, ya), (xb, yb) = pos[ln.source], pos[ln.target]
        out.append(f'<line x1="{xa:.1f}" y1="{ya:.1f}" x2="{xb:.1f}" y2="{yb:.1f}" {_STYLE[ln.kind]} stroke-width="1"/>')
    for d in sorted(chart.dots):
        x, y = pos[d.key]
        label = display_label(d.label) if relabel_t0_squared else d.label
        title = html.escape(label + (f" (u^{d.period} periodic)" if d.period else ""))
        if d.period:
            out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3.5" fill="white" stroke="black"><title>{title}</title></circle>')
        else:
            out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="2.5" fill="black"><title>{title}</title></circle>')
    ly = _MARGIN + (y1 - y0 + 1) * _CELL + 40
    legend = [
        ("v0", "vertical: multiplication by v0"),
        ("a", "horizontal: multiplication by a"),
        ("v1", "slope 1/2: multiplication by v1"),
        ("hidden", "dashed: hidden extension"),
    ]
    for i, (kind, text) in enumerate(legend):
        y = ly + 18 * i
        out.append(f'<line x1="{_MARGIN}" y1="{y}" x2="{_MARGIN + 24}" y2="{y}" {_STYLE[kind]} stroke-width="1"/>')
        out.append(f'<text x="{_MARGIN + 32}" y="{y + 4}" font-size="11">{html.escape(text)}</text>')
    y = ly + 18 * len(legend)
    out.append(f'<circle cx="{_MARGIN + 12}" cy="{y}" r="3.5" fill="white" stroke="black"/>')
    out.append(f'<text x="{_MARGIN + 32}" y="{y + 4}" font-size="11">open dot: family periodic in u^(+-period)</text>')
    if relabel_t0_squared:
        y += 18
        out.append(f'<text x="{_MARGIN + 32}" y="{y + 4}" font-size="11">labels show t0^2 as u*e1</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit(chart: Chart, fmt: str, relabel_t0_squared: bool = False) -> str:
    if fmt == "tsv":
        return to_tsv(chart)
    if fmt == "svg":
        return to_svg(chart, relabel_t0_squared)
    raise ValueError(f"unknown chart format {fmt}")


def file_name(weight: int, page: str, fmt: str) -> str:
    return f"weight{weight}_page{page}.{fmt}"
