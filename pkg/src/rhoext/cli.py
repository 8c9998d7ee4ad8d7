"""Command-line entry point: ``rhoext <command> [options]``."""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import bockstein as bss
from . import charts
from .algebra import TruncationWindow, mono_mul
from .comodules import (
    compare_derived,
    omega_comodule,
    random_module_monomials,
    restriction_consistency,
    trivial_comodule,
)
from .ext import (
    borel_omega_cobar,
    cochain,
    ext_dump_rows,
    graded_omega_cobar,
    massey_triple,
    relation_holds,
    verify_vanishing_relation,
)
from .grading import RODegree
from .steenrod import equivariant_exterior, equivariant_steenrod, graded_exterior

DEFAULTS = {
    "window": "-4..12,-12..12",
    "weight_cap": 4,
    "v_cap": 4,
    "asigma_cap": 16,
    "adams_cap": 5,
    "seed": 0,
    "format": "text",
    "out": None,
}


class RunConfig:
    """Window and run options; config-file values are overridden by flags."""

    def __init__(self, values: Dict[str, object]):
        self.values = dict(values)
        stems, sigmas = parse_window(str(self.values["window"]))
        for key in ("weight_cap", "v_cap", "asigma_cap", "adams_cap"):
            if int(self.values[key]) < 0:
                raise ValueError(f"{key} must be nonnegative")
        self.trunc = TruncationWindow(
            weight_cap=int(self.values["weight_cap"]),
            v_cap=int(self.values["v_cap"]),
            a_cap=int(self.values["asigma_cap"]),
            stems=stems,
            sigmas=sigmas,
        )
        self.adams_cap = int(self.values["adams_cap"])
        self.seed = int(self.values["seed"])

    def digest(self) -> str:
        blob = json.dumps({k: self.values[k] for k in sorted(DEFAULTS) if k not in ("format", "out")}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def header(self) -> Dict[str, object]:
        return {
            "config_hash": self.digest(),
            "seed": self.seed,
            "window": {
                "stems": list(self.trunc.stems),
                "sigmas": list(self.trunc.sigmas),
                "weight_cap": self.trunc.weight_cap,
                "v_cap": self.trunc.v_cap,
                "asigma_cap": self.trunc.a_cap,
                "adams_cap": self.adams_cap,
            },
        }


def parse_window(text: str) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """``LO..HI,LO..HI`` for stems and sigma-weights; an empty range (LO > HI) is allowed."""
    try:
        a, b = text.split(",")
        s0, s1 = (int(x) for x in a.split(".."))
        g0, g1 = (int(x) for x in b.split(".."))
    except ValueError as exc:
        raise ValueError(f"bad window {text!r}; expected LO..HI,LO..HI") from exc
    return (s0, s1), (g0, g1)


def read_config_file(path: str) -> Dict[str, str]:
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {raw!r}")
        k, v = line.split("=", 1)
        k = k.strip().replace("-", "_")
        if k not in DEFAULTS:
            raise ValueError(f"unknown config key {k}")
        out[k] = v.strip()
    return out


# --- commands ---------------------------------------------------------------------


class Result:
    def __init__(self, command: str):
        self.command = command
        self.ok = True
        self.lines: List[str] = []
        self.data: Dict[str, object] = {}

    def say(self, text: str) -> None:
        self.lines.append(text)

    def fail(self, text: str) -> None:
        self.ok = False
        self.lines.append("FAIL: " + text)


def cmd_derive_coaction(cfg: RunConfig, args, res: Result) -> None:
    cmp = compare_derived(args.n)
    rows = {}
    for name, (derived, closed, eq) in sorted(cmp.items()):
        res.say(f"psi({name}) = {derived}")
        if not eq:
            res.fail(f"psi({name}) differs from the closed form {closed}")
        rows[name] = {"derived": derived, "closed_form": closed, "match": eq}
    res.data["coactions"] = rows


def _context(cfg: RunConfig) -> bss.BSSContext:
    return bss.BSSContext(cfg.trunc, cfg.adams_cap)


def cmd_bss(cfg: RunConfig, args, res: Result) -> None:
    ctx = _context(cfg)
    tb = ctx.table
    if args.einfty:
        rep = bss.einfty_report(ctx)
        res.say(
            f"E-infinity: {rep.compared} slices compared with H(E_{(1 << (ctx.N + 1)) - 1}), "
            f"{len(rep.skipped)} skipped (a differential beyond the v-cap could act)"
        )
        for m in rep.mismatches[:20]:
            res.fail(f"slice {m.key}: closed form {m.closed}, homology {m.computed}")
        for j, (zero, nonzero) in sorted(rep.torsion.items()):
            res.say(f"a^{(1 << (j + 1)) - 1}*v{j} = 0: {zero}; a^{(1 << (j + 1)) - 2}*v{j} != 0: {nonzero}")
            if not (zero and nonzero):
                res.fail(f"torsion relation for v{j}")
        for k in rep.nonempty_forbidden[:20]:
            res.fail(f"nonempty slice in a forbidden degree: {k}")
        for k in rep.unstable[:20]:
            res.fail(f"no a-tower stabilization within the cap at {k}")
        if rep.redundant:
            res.say("redundant generators (reported only): " + ", ".join(rep.redundant))
        for h in bss.hidden_extensions():
            res.say(f"hidden extension (annotation): {h.multiplier}*({h.source}) = {h.target}")
        res.data["einfty"] = {
            "compared": rep.compared,
            "skipped": len(rep.skipped),
            "mismatches": len(rep.mismatches),
            "torsion": {str(j): list(v) for j, v in rep.torsion.items()},
            "forbidden_nonempty": len(rep.nonempty_forbidden),
            "unstable": len(rep.unstable),
            "redundant": rep.redundant,
        }
        return
    n = args.to
    run = bss.run_to(n, ctx)
    for k in range(min(n, ctx.N) + 1):
        p = 1 << k
        src = tb.gen("u", p)
        tgt = bss.page(ctx, k).d(src)
        res.say(f"d_{2 * p - 1}(u^{p}) = {ctx.fmt(tgt)}")
    pages = []
    for rep in run.reports:
        res.say(
            f"E_{rep.r} -> E_{2 * rep.r + 1}: {rep.compared} slices, "
            f"{len(rep.mismatches)} homology mismatches, {len(rep.lemma_mismatches)} lemma mismatches"
        )
        for m in rep.mismatches[:20]:
            res.fail(f"E_{2 * rep.r + 1} slice {m.key}: closed form {m.closed}, homology {m.computed}")
        for k in rep.ill_defined[:5] + rep.not_closed[:5]:
            res.fail(f"differential not well defined at {k}")
        for r, k in rep.intermediate_nonzero:
            res.fail(f"possible d_{r} target at {k}")
        for g in rep.permanent_failures:
            res.fail(f"d_{rep.r} nonzero on {g}")
        pages.append({"r": rep.r, "compared": rep.compared, "mismatches": len(rep.mismatches)})
    final = run.page
    nonzero = [(k, final.dim(k)) for k in ctx.window_keys() if final.dim(k)]
    res.say(f"E_{final.r}: {len(nonzero)} nonzero slices in the window")
    res.data["transitions"] = pages
    res.data["nonzero_slices"] = len(nonzero)


def cmd_chart(cfg: RunConfig, args, res: Result) -> None:
    ctx = _context(cfg)
    pg = bss.einfty_page(ctx) if args.page == "einfty" else bss.page(ctx, int(args.page))
    hide = None if args.show_high_v else 5
    ch = charts.chart_of_page(pg, args.weight, hide_v_from=hide)
    errs = ch.validate()
    for e in errs:
        res.fail(e)
    if charts.dot_totals(ctx, ch) != charts.slice_totals(pg, args.weight, hide_v_from=hide):
        res.fail("dot counts differ from slice dimensions")
    fmts = ["svg", "tsv"] if args.chart_format == "both" else [args.chart_format]
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for f in fmts:
        path = out / charts.file_name(args.weight, args.page, f)
        path.write_text(charts.emit(ch, f, relabel_t0_squared=args.relabel_t0sq))
        written.append(str(path))
        res.say(f"wrote {path}")
    res.data["chart"] = {"dots": len(ch.dots), "lines": len(ch.lines), "files": written}


def _suite_coassoc(cfg: RunConfig, args, res: Result) -> None:
    a_cap = min(cfg.trunc.a_cap, 6)
    k = min(2, max(1, cfg.trunc.weight_cap.bit_length() - 1))
    specs = {
        "genuine": lambda: omega_comodule(k, equivariant_steenrod(k + 1, a_cap=a_cap), "genuine", a_cap),
        "borel": lambda: omega_comodule(k, equivariant_exterior(k + 1, a_cap=a_cap), "borel", a_cap),
        "graded": lambda: omega_comodule(k, graded_exterior(k + 1, a_cap=a_cap), "graded", a_cap),
        "trivial": lambda: trivial_comodule(graded_exterior(1, a_cap=a_cap), a_cap),
    }
    names = [args.comodule] if args.comodule else sorted(specs)
    for name in names:
        spec = specs[name]()
        monos = random_module_monomials(spec, args.samples, cfg.seed, cfg.trunc)
        gens = [frozenset((spec.module.table.gen(g),)) for g in spec.module.table.names]
        bad = 0
        for x in gens + [frozenset((m,)) for m in monos]:
            if spec.coassociativity_defect(x) or spec.counit_defect(x):
                bad += 1
        res.say(f"{name}: {len(gens) + len(monos)} elements, {bad} coassociativity/counit defects")
        if bad:
            res.fail(f"{name} comodule is not coassociative")


def _suite_cobar_d2(cfg: RunConfig, args, res: Result) -> None:
    a_cap = min(cfg.trunc.a_cap, 4)
    for label, cx in (
        ("borel", borel_omega_cobar(2, 2, a_cap)),
        ("graded", graded_omega_cobar(2, 2, a_cap)),
    ):
        count = bad = 0
        for stem in range(0, 5):
            for sigma in range(-2, 3):
                for s in range(0, 3):
                    for w in range(0, 3):
                        deg = RODegree(stem - sigma, sigma)
                        for t in cx.basis(deg, s, w):
                            count += 1
                            if cx.d(cx.d_term(t)):
                                bad += 1
        res.say(f"{label}: d^2 = 0 on {count} basis cochains, {bad} failures")
        if bad:
            res.fail(f"d^2 != 0 in the {label} cobar complex")


def _suite_leibniz(cfg: RunConfig, args, res: Result) -> None:
    ctx = _context(cfg)
    rng = random.Random(cfg.seed)
    keys = [k for k in ctx.window_keys(8) if k[3] <= 2 and k[2] <= 2]
    for n in range(min(3, ctx.N + 1)):
        pg = bss.page(ctx, n)
        pool = []
        for k in rng.sample(keys, min(len(keys), 400)):
            sd = pg.slice(k)
            pool += [sd.monomials[i] for i in sd.basis]
        bad = d2 = 0
        trials = min(args.samples, len(pool) ** 2) if pool else 0
        for _ in range(trials):
            x, y = rng.choice(pool), rng.choice(pool)
            xy = mono_mul(x, y)
            dxy = bss.page_differential(ctx, n, xy)
            lhs = ctx.nf_vector(n, dxy) if dxy else 0
            dx, dy = bss.page_differential(ctx, n, x), bss.page_differential(ctx, n, y)
            rhs = 0
            if dx:
                rhs ^= ctx.nf_vector(n, mono_mul(dx, y))
            if dy:
                rhs ^= ctx.nf_vector(n, mono_mul(x, dy))
            if lhs != rhs:
                bad += 1
        for x in pool[: args.samples]:
            t = bss.page_differential(ctx, n, x)
            if t is not None and bss.page_differential(ctx, n, t) is not None:
                d2 += 1
        res.say(f"E_{(1 << (n + 1)) - 1}: {trials} Leibniz checks, {bad} failures; d^2 failures {d2}")
        if bad or d2:
            res.fail(f"Leibniz or d^2 failed on E_{(1 << (n + 1)) - 1}")


def _suite_domain(cfg: RunConfig, args, res: Result) -> None:
    bound = args.bound if args.bound is not None else (20 if args.k == 0 else 16)
    rep = bss.appendix_domain_check(args.k, bound)
    res.say(
        f"R_{args.k} below degree {bound}: {rep.pairs} monomial pairs, {rep.vector_checks} vector pairs, "
        f"{rep.regular_slices} regularity slices"
    )
    for x, y in (rep.zero_divisor_pairs + rep.vector_zero_divisors)[:10]:
        res.fail(f"zero divisor: ({x}) * ({y}) = 0")
    for label, key in rep.non_injective[:10]:
        res.fail(f"not injective: {label} at {key}")
    if rep.identity_failures:
        res.fail("1*x != x")
    res.data["domain"] = {"pairs": rep.pairs, "vector_checks": rep.vector_checks, "regular_slices": rep.regular_slices}


def _suite_massey(cfg: RunConfig, args, res: Result) -> None:
    cx = borel_omega_cobar(2, 2, 8)
    m = massey_triple(cx, cochain(cx, "a"), cochain(cx, "1[tau0]"), cochain(cx, "e1"))
    inside = m.contains(cx, cochain(cx, "t0^2"))
    res.say(f"<a, v0, e1> = {m.text} (indeterminacy {len(m.indeterminacy)}); contains t0^2: {inside}")
    if not inside:
        res.fail("t0^2 not in <a, v0, e1>")
    lhs = cx.product(cochain(cx, "1[tau0]"), cochain(cx, "t0^2"))
    ok, wit = relation_holds(cx, lhs, cochain(cx, "a^2*e1[tau1]"))
    res.say(f"v0*t0^2 = {cx.fmt(lhs)} ~ a^2*e1[tau1]: {ok}" + (f" via d({cx.fmt(wit)})" if ok else ""))
    if not ok:
        res.fail("v0*t0^2 = a^2*v1*e1 not certified")
    for n in (0, 1):
        cert = verify_vanishing_relation(n)
        res.say(f"e1^{(1 << (n + 1)) - 1}*v{n} = 0: {cert.text}")
        if not cert.ok:
            res.fail(f"no bounding cochain for e1^{(1 << (n + 1)) - 1}*v{n}")


def _suite_restriction(cfg: RunConfig, args, res: Result) -> None:
    rr = restriction_consistency(2)
    res.say("restriction assignment: " + ", ".join(f"{k}->{v}" for k, v in rr.assignment.items()))
    if not rr.ok:
        res.fail("restriction to the classical comodule is inconsistent")
    ctx = _context(cfg)
    bad = bss.restriction_check(ctx)
    res.say(f"E-infinity in degrees n*rho vs classical associated graded: {len(bad)} differences")
    for n, s, w, eq, cl in bad[:10]:
        res.fail(f"n={n} s={s} w={w}: equivariant {eq}, classical {cl}")
    t0 = bss.t0_bijection(ctx)
    res.say(f"t0-multiplication bijection failures: {len(t0)}")
    for k in t0[:10]:
        res.fail(f"t0 not bijective at {k}")


SUITES = {
    "coassoc": _suite_coassoc,
    "cobar-d2": _suite_cobar_d2,
    "leibniz": _suite_leibniz,
    "domain-check": _suite_domain,
    "massey": _suite_massey,
    "restriction": _suite_restriction,
}


def cmd_verify(cfg: RunConfig, args, res: Result) -> None:
    SUITES[args.suite](cfg, args, res)


def cmd_ext_dump(cfg: RunConfig, args, res: Result) -> None:
    rows = ext_dump_rows(cfg.trunc, cfg.adams_cap)
    text = "stem\tsigma\ts\tweight\tdim\n" + "".join(f"{a}\t{b}\t{c}\t{d}\t{e}\n" for a, b, c, d, e in rows if e)
    _write_table(args, res, "ext_dump.tsv", text)
    res.data["rows"] = sum(1 for r in rows if r[4])


def cmd_bss_dump(cfg: RunConfig, args, res: Result) -> None:
    ctx = _context(cfg)
    pages = [(str((1 << (n + 1)) - 1), bss.page(ctx, n)) for n in range(args.to + 1)]
    pages.append(("inf", bss.einfty_page(ctx)))
    rows = []
    for label, pg in pages:
        dims: Dict[Tuple[int, int, int, int], int] = {}
        for k in ctx.window_keys():
            d = pg.dim(k)
            if d:
                dims[k[:4]] = dims.get(k[:4], 0) + d
        rows += [(label,) + k + (v,) for k, v in sorted(dims.items())]
    text = "stem\tsigma\ts\tweight\tdim\tpage\n" + "".join(f"{r[1]}\t{r[2]}\t{r[3]}\t{r[4]}\t{r[5]}\t{r[0]}\n" for r in rows)
    _write_table(args, res, "bss_dump.tsv", text)
    res.data["rows"] = len(rows)


def _write_table(args, res: Result, default_name: str, text: str) -> None:
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / default_name
        path.write_text(text)
        res.say(f"wrote {path}")
    else:
        res.lines.append(text.rstrip("\n"))


# --- argument parsing -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--window", help="stem and sigma ranges, LO..HI,LO..HI")
    common.add_argument("--weight-cap", type=int)
    common.add_argument("--v-cap", type=int)
    common.add_argument("--asigma-cap", type=int)
    common.add_argument("--adams-cap", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory")
    common.add_argument("--format", choices=["text", "json"], help="summary format")

    p = argparse.ArgumentParser(prog="rhoext", description="Equivariant Bockstein and cobar computations in finite windows.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("derive-coaction", parents=[common], help="derive coactions by co-Nishida recursion")
    s.add_argument("--n", type=int, default=4)
    s.set_defaults(func=cmd_derive_coaction)

    s = sub.add_parser("bss", parents=[common], help="run the a-Bockstein spectral sequence")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--to", type=int)
    g.add_argument("--einfty", action="store_true")
    s.set_defaults(func=cmd_bss)

    s = sub.add_parser("chart", parents=[common], help="emit SVG/TSV charts")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--page", default="einfty", help="'einfty' or a page index n (E_(2^(n+1)-1))")
    s.add_argument("--chart-format", choices=["svg", "tsv", "both"], default="both")
    s.add_argument("--show-high-v", action="store_true", help="also draw classes involving v_n, n >= 5")
    s.add_argument("--relabel-t0sq", action="store_true", help="show t0^2 as u*e1 in the SVG")
    s.set_defaults(func=cmd_chart)

    s = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    s.add_argument("--suite", choices=sorted(SUITES), required=True)
    s.add_argument("--k", type=int, default=0, help="appendix ring index for domain-check")
    s.add_argument("--bound", type=int, default=None, help="degree bound for domain-check")
    s.add_argument("--comodule", choices=["genuine", "borel", "graded", "trivial"], default=None)
    s.add_argument("--samples", type=int, default=200)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("ext-dump", parents=[common], help="associated graded Ext slice table")
    s.set_defaults(func=cmd_ext_dump)

    s = sub.add_parser("bss-dump", parents=[common], help="per-page slice tables")
    s.add_argument("--to", type=int, default=3)
    s.set_defaults(func=cmd_bss_dump)
    return p


def make_config(args) -> RunConfig:
    values: Dict[str, object] = dict(DEFAULTS)
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return RunConfig(values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
    except ValueError as exc:
        parser.error(str(exc))
    res = Result(args.command)
    try:
        args.func(cfg, args, res)
    except Exception as exc:  # reported, never swallowed silently
        res.fail(f"{type(exc).__name__}: {exc}")
    summary = {"command": args.command, "ok": res.ok, **cfg.header(), **res.data}
    if cfg.values.get("format") == "json":
        print(json.dumps(summary, indent=2, sort_keys=True))
    else:
        print(f"# rhoext {args.command} config={cfg.digest()} seed={cfg.seed}")
        for line in res.lines:
            print(line)
        print(json.dumps(summary, sort_keys=True))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{args.command}_summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return 0 if res.ok else 1


if __name__ == "__main__":
    sys.exit(main())
