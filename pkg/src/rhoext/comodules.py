"""Comodule algebras over the dual Steenrod Hopf algebroids and Dyer-Lashof operations.

Covers the homology of the rho-fold loop space of S^(rho+1) (genuine, Borel and
associated-graded forms), the classical homology of the double loop space of S^3,
Q0/Q1 with their Cartan formulas, and the co-Nishida recursion that rebuilds the
coaction from psi(t0) alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import (
    AlgebraError,
    AlgebraPresentation,
    Monomial,
    TruncationWindow,
    basis_slice,
    format_presentation,
    generators_from_names,
    mono_div,
    mono_mul,
    parse_document,
)
from .grading import RODegree
from .steenrod import (
    HopfAlgebroid,
    Tensor,
    _tensor_free_mul,
    classical_steenrod,
    equivariant_steenrod,
    parse_tensor,
    phi_underlying,
)


class ShapeError(AlgebraError):
    """Dyer-Lashof operation requested outside degrees 0 or 1 mod rho."""


class MissingCoactionError(AlgebraError):
    pass


class ModuleAlgebra:
    """A presented algebra over the coefficient ring, truncated modulo ``a^(a_cap+1)``."""

    def __init__(self, presentation: AlgebraPresentation, a_cap: Optional[int] = None):
        self.presentation = presentation
        self.table = presentation.table
        self.a_cap = a_cap
        self._a = self.table.index.get("a")
        self._cache: Dict[Monomial, frozenset] = {}

    def nf_mono(self, m: Monomial) -> frozenset:
        hit = self._cache.get(m)
        if hit is None:
            hit = self.presentation.rewrite.reduce((m,))
            if self.a_cap is not None and self._a is not None:
                hit = frozenset(x for x in hit if x[self._a] <= self.a_cap)
            self._cache[m] = hit
        return hit

    def nf(self, x: Iterable[Monomial]) -> frozenset:
        acc: set = set()
        for m in x:
            acc ^= self.nf_mono(m)
        return frozenset(acc)

    def multiply(self, x: Iterable[Monomial], y: Iterable[Monomial]) -> frozenset:
        acc: set = set()
        for s in x:
            for t in y:
                acc ^= self.nf_mono(mono_mul(s, t))
        return frozenset(acc)

    def coef_monomial(self, names: Sequence[str], c: Sequence[int]) -> Monomial:
        m = [0] * self.table.size
        for n, e in zip(names, c):
            if e:
                if n not in self.table.index:
                    raise AlgebraError(f"module has no coefficient {n}")
                m[self.table.index[n]] = e
        return tuple(m)

    def element(self, text: str) -> frozenset:
        return self.nf(self.table.parse_element(text))

    def gen(self, name: str) -> frozenset:
        return frozenset((self.table.gen(name),))

    def one(self) -> frozenset:
        return frozenset((self.table.one(),))


# --- Dyer-Lashof operations ---------------------------------------------------


def _combine_equivariant(jx: int, jy: int, qx, qy, mul, a_elem, u_elem):
    q0x, q1x = qx
    q0y, q1y = qy
    if jx == 0 and jy == 0:
        q0 = mul(q0x, q0y)
        q1 = mul(q1x, q0y) ^ mul(q0x, q1y) ^ mul(a_elem, mul(q1x, q1y))
    elif jx == 0 and jy == 1:
        q0 = mul(q0x, q0y) ^ mul(a_elem, mul(q1x, q0y))
        q1 = mul(q0x, q1y) ^ mul(u_elem, mul(q1x, q0y))
    elif jx == 1 and jy == 0:
        q0 = mul(q0x, q0y) ^ mul(a_elem, mul(q0x, q1y))
        q1 = mul(q1x, q0y) ^ mul(u_elem, mul(q0x, q1y))
    else:
        raise ShapeError("Cartan formula is not available when both factors are 1 mod rho")
    return q0, q1


def _combine_classical(qx, qy, mul):
    q0x, q1x = qx
    q0y, q1y = qy
    return mul(q0x, q0y), mul(q0x, q1y) ^ mul(q1x, q0y)


class DyerLashof:
    """Q0 and Q1 on a presented algebra from values on generators via the Cartan formula.

    ``setting`` is ``"equivariant"`` (degrees 0 or 1 mod rho, the case split with
    a and u) or ``"classical"`` (Q0 = squaring, Q1 a derivation-like operation).
    ``additive`` declares that the operations are additive on sums, which holds for
    E_rho-algebras underlying E_infinity-algebras and for triple loop spaces.
    """

    def __init__(self, ring, values: Dict[str, Tuple[frozenset, frozenset]], setting: str = "equivariant", additive: bool = True):
        if setting not in ("equivariant", "classical"):
            raise ValueError(setting)
        self.ring = ring
        self.table = ring.table
        self.values = values
        self.setting = setting
        self.additive = additive
        self._cache: Dict[Monomial, Tuple[frozenset, frozenset]] = {}
        tb = self.table
        self._a = frozenset((tb.gen("a"),)) if "a" in tb.index else frozenset()
        self._u = frozenset((tb.gen("u"),)) if "u" in tb.index else frozenset()

    def shape(self, m: Monomial) -> int:
        if self.setting == "classical":
            return 0
        s = self.table.ro(m).rho_shape()
        if s is None:
            raise ShapeError(f"degree of {self.table.format_monomial(m)} is not 0 or 1 mod rho")
        return s[1]

    def q_mono(self, m: Monomial) -> Tuple[frozenset, frozenset]:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        tb = self.table
        if not any(m):
            res = (frozenset((m,)), frozenset())
        else:
            self.shape(m)
            g = next(i for i, e in enumerate(m) if e)
            name = tb.names[g]
            if m[g] < 0:
                raise ShapeError(f"no Dyer-Lashof value on inverse of {name}")
            if name not in self.values:
                raise AlgebraError(f"no registered Dyer-Lashof values for {name}")
            gm = tb.gen(name)
            rest = mono_div(m, gm)
            qx = self.values[name]
            if not any(rest):
                res = qx
            else:
                qy = self.q_mono(rest)
                mul = self.ring.multiply
                if self.setting == "classical":
                    res = _combine_classical(qx, qy, mul)
                else:
                    res = _combine_equivariant(self.shape(gm), self.shape(rest), qx, qy, mul, self._a, self._u)
        self._cache[m] = res
        return res

    def q(self, i: int, x: Iterable[Monomial]) -> frozenset:
        x = frozenset(x)
        if len(x) > 1 and not self.additive:
            raise AlgebraError("operation is not additive on this algebra; refusing a sum")
        acc: set = set()
        for m in x:
            acc ^= self.q_mono(m)[i]
        return frozenset(acc)

    def q0(self, x: Iterable[Monomial]) -> frozenset:
        return self.q(0, x)

    def q1(self, x: Iterable[Monomial]) -> frozenset:
        return self.q(1, x)


class TensorDyerLashof:
    """Q0/Q1 on module (x) host, by the Cartan formula applied to each ``x (x) y``."""

    def __init__(self, module_ops: DyerLashof, host_ops: DyerLashof, host: HopfAlgebroid, module: ModuleAlgebra, additive: bool = True):
        self.m = module_ops
        self.h = host_ops
        self.host = host
        self.module = module
        self.additive = additive
        mt = module.table
        self._a = mt.gen("a") if "a" in mt.index else None
        self._u = mt.gen("u") if "u" in mt.index else None
        self.setting = module_ops.setting

    def _mul(self, s: Tensor, t: Tensor) -> Tensor:
        return self.host.normalize_tensor(_tensor_free_mul(s, t), self.module)

    def _coef(self, mono: Optional[Monomial]) -> Tensor:
        if mono is None:
            return frozenset()
        return frozenset(((mono, self.host.table.one()),))

    def q_pair(self, x: Monomial, y: Monomial) -> Tuple[Tensor, Tensor]:
        qx = self.m.q_mono(x)
        qy = self.h.q_mono(y)
        one_h = self.host.table.one()
        one_m = self.module.table.one()
        lx = tuple(frozenset((m, one_h) for m in e) for e in qx)
        ry = tuple(frozenset((one_m, m) for m in e) for e in qy)
        if self.setting == "classical":
            return _combine_classical(lx, ry, self._mul)
        jx = self.m.shape(x) if any(x) else 0
        jy = self.h.shape(y) if any(y) else 0
        return _combine_equivariant(jx, jy, lx, ry, self._mul, self._coef(self._a), self._coef(self._u))

    def q(self, i: int, t: Iterable[Tuple[Monomial, Monomial]]) -> Tensor:
        t = frozenset(t)
        if len(t) > 1 and not self.additive:
            raise AlgebraError("operation is not additive here; refusing a sum")
        acc: set = set()
        for x, y in t:
            acc ^= self.q_pair(x, y)[i]
        return self.host.normalize_tensor(acc, self.module)


# --- extended power coactions -------------------------------------------------


@dataclass(frozen=True)
class ExtendedPowerEntry:
    """Coaction on the two homology generators of a quadratic extended power.

    ``coaction[j]`` lists ``(i, host generator or None)`` pairs: the generator
    attached to operation ``j`` coacts as the sum of generator ``i`` tensored with
    the named host class (None meaning 1).  Co-Nishida then reads
    ``psi(Q_j x) = sum_i Q_i(psi x) * (1 (x) host class)``.
    """

    names: Tuple[str, str]
    coaction: Tuple[Tuple[Tuple[int, Optional[str]], ...], Tuple[Tuple[int, Optional[str]], ...]]


def extended_power_table() -> Dict[Tuple[str, int], ExtendedPowerEntry]:
    """Keys are ``(setting, shape)``; classical shape is the parity of the degree."""
    return {
        ("equivariant", 0): ExtendedPowerEntry(
            ("f_2krho", "f_2krho+sigma"), (((0, None),), ((1, None),))
        ),
        ("equivariant", 1): ExtendedPowerEntry(
            ("e_2krho-sigma-1", "e_2krho-sigma"), (((0, None),), ((1, None), (0, "tau0")))
        ),
        ("classical", 0): ExtendedPowerEntry(("e_2k", "e_2k+1"), (((0, None),), ((1, None),))),
        ("classical", 1): ExtendedPowerEntry(("e_2k", "e_2k+1"), (((0, None),), ((1, None), (0, "cxi1")))),
    }


def co_nishida(
    ops: TensorDyerLashof,
    psi_x: Tensor,
    shape: int,
    j: int,
    table: Optional[Dict[Tuple[str, int], ExtendedPowerEntry]] = None,
) -> Tensor:
    """``psi(Q_j x)`` from ``psi(x)`` using the extended-power coaction table."""
    table = table or extended_power_table()
    entry = table[(ops.setting, shape)]
    host, module = ops.host, ops.module
    one_m = module.table.one()
    acc: set = set()
    for i, hname in entry.coaction[j]:
        term = ops.q(i, psi_x)
        if hname is not None:
            term = host.normalize_tensor(_tensor_free_mul(term, {(one_m, host.table.gen(hname))}), module)
        acc ^= term
    return frozenset(acc)


# --- comodule specs -------------------------------------------------------------


class ComoduleSpec:
    """A comodule algebra: module, host, and the coaction on module generators."""

    def __init__(self, name: str, module: ModuleAlgebra, host: HopfAlgebroid, coaction: Dict[str, Tensor]):
        self.name = name
        self.module = module
        self.host = host
        self.coaction = dict(coaction)
        self._cache: Dict[Monomial, Tensor] = {}
        self._coef_names = tuple(n for n in host.coef_names if n in module.table.index)

    @property
    def table(self):
        return self.module.table

    def _coef_coaction(self, c: Tuple[int, ...]) -> Tensor:
        one = self.module.table.one()
        return self.host.normalize_tensor({(one, m) for m in self.host.eta_right_coef(c)}, self.module)

    def coact_mono(self, m: Monomial) -> Tensor:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        tb = self.module.table
        coef = tuple(tb.exponent(m, n) for n in self.host.coef_names)
        gens = [(i, e) for i, e in enumerate(m) if e and tb.names[i] not in self.host.coef_names]
        if not gens:
            res = self._coef_coaction(coef)
        else:
            i, e = gens[-1]
            name = tb.names[i]
            if name not in self.coaction:
                raise MissingCoactionError(name)
            rest = mono_div(m, tb.gen(name))
            res = self.host.normalize_tensor(
                _tensor_free_mul(self.coact_mono(rest), self.coaction[name]), self.module
            )
        self._cache[m] = res
        return res

    def coact(self, x: Iterable[Monomial]) -> Tensor:
        acc: set = set()
        for m in self.module.nf(x):
            acc ^= self.coact_mono(m)
        return frozenset(acc)

    def fmt(self, t: Tensor) -> str:
        terms = sorted(t, reverse=True)
        if not terms:
            return "0"
        return " + ".join(
            f"{self.module.table.format_monomial(x)}|{self.host.table.format_monomial(y)}" for x, y in terms
        )

    # --- checks -------------------------------------------------------

    def coassociativity_defect(self, x: Iterable[Monomial]) -> Tensor:
        psi = self.coact(x)
        lhs: set = set()
        for m, h in psi:
            for m2, h2 in self.coact_mono(m):
                lhs ^= {(m2, h2, h)}
        left = self.host.normalize_tensor(lhs, self.module)
        right = self.host.apply_delta(psi, 1, self.module)
        return left ^ right

    def counit_defect(self, x: Iterable[Monomial]) -> frozenset:
        one = self.host.table.one()
        acc: set = set()
        for m, h in self.coact(x):
            if h == one:
                acc ^= {m}
        return self.module.nf(acc) ^ self.module.nf(x)

    def to_text(self) -> str:
        stanzas = [
            ("coact", g, self.fmt(self.coaction[g]))
            for g in self.module.table.names
            if g in self.coaction
        ]
        return format_presentation(self.module.presentation, stanzas)

    @classmethod
    def from_text(cls, name: str, text: str, host: HopfAlgebroid, a_cap: Optional[int] = None) -> ComoduleSpec:
        doc = parse_document(text)
        module = ModuleAlgebra(doc.presentation, a_cap)
        coaction = {}
        for kind, gen, rhs in doc.stanzas:
            if kind != "coact":
                continue
            coaction[gen] = parse_tensor((module.table, host.table), rhs)
        return cls(name, module, host, coaction)


# --- the loop-space comodule -----------------------------------------------------


def top_index(weight_cap: int) -> int:
    k = 0
    while (1 << (k + 1)) <= weight_cap:
        k += 1
    return k


def omega_presentation(n: int, kind: str = "borel") -> AlgebraPresentation:
    """Generators t0..tn, e1..en, a, u with t_i^2 = a t_{i+1} + u e_{i+1} (i < n).

    ``kind``: ``"genuine"`` (u not inverted), ``"borel"`` (u inverted) or ``"graded"``
    (associated graded: t_i^2 = u e_{i+1}).
    """
    ts = [f"t{i}" for i in range(n + 1)]
    es = [f"e{k}" for k in range(n, 0, -1)]
    inv = () if kind == "genuine" else ("u",)
    table = generators_from_names(ts + es + ["a", "u"], invertible=inv)
    rels = []
    for i in range(n):
        if kind == "graded":
            rels.append(table.parse_element(f"t{i}^2 + u*e{i + 1}"))
        else:
            rels.append(table.parse_element(f"t{i}^2 + a*t{i + 1} + u*e{i + 1}"))
    return AlgebraPresentation(table, rels, name=f"omega-{kind}")


def omega_dyer_lashof_values(module: ModuleAlgebra) -> Dict[str, Tuple[frozenset, frozenset]]:
    """Q0 e_k = e_k^2, Q1 e_k = 0, Q0 t_n = e_{n+1}, Q1 t_n = t_{n+1} (where defined)."""
    tb = module.table
    vals: Dict[str, Tuple[frozenset, frozenset]] = {}
    for name in tb.names:
        if name.startswith("e"):
            vals[name] = (frozenset((tb.gen(name, 2),)), frozenset())
        elif name.startswith("t"):
            n = int(name[1:])
            if f"t{n + 1}" in tb.index and f"e{n + 1}" in tb.index:
                vals[name] = (frozenset((tb.gen(f"e{n + 1}"),)), frozenset((tb.gen(f"t{n + 1}"),)))
    return vals


def host_dyer_lashof_values(host: HopfAlgebroid) -> Dict[str, Tuple[frozenset, frozenset]]:
    """Q0 tau_k = xi_{k+1}, Q1 tau_k = tau_{k+1} + tau0 xi_{k+1}; Q0 xi_k = xi_k^2, Q1 xi_k = 0."""
    tb = host.table
    vals: Dict[str, Tuple[frozenset, frozenset]] = {}
    for name in tb.names:
        if name.startswith("tau"):
            k = int(name[3:])
            nxt, xi = f"tau{k + 1}", f"xi{k + 1}"
            if nxt in tb.index and xi in tb.index:
                q0 = frozenset((tb.gen(xi),))
                q1 = host.nf({tb.gen(nxt), mono_mul(tb.gen("tau0"), tb.gen(xi))})
                vals[name] = (q0, q1)
        elif name.startswith("xi"):
            vals[name] = (frozenset((tb.gen(name, 2),)), frozenset())
    return vals


def closed_form_coaction(module: ModuleAlgebra, host: HopfAlgebroid, n: int) -> Dict[str, Tensor]:
    """psi(e_k) = sum_j e_{k-j}^{2^j} (x) xi_j and psi(t_k) = t_k (x) 1 + sum_j e_{k-j}^{2^j} (x) tau_j.

    Terms whose host class is absent from ``host`` (xi's in exterior quotients) vanish.
    """
    mt, ht = module.table, host.table
    one_h = ht.one()
    out: Dict[str, Tensor] = {}
    for k in range(1, n + 1):
        terms: set = {(mt.gen(f"e{k}"), one_h)}
        for j in range(1, k):
            if f"xi{j}" in ht.index:
                terms ^= {(mt.gen(f"e{k - j}", 1 << j), ht.gen(f"xi{j}"))}
        out[f"e{k}"] = frozenset(terms)
    for k in range(n + 1):
        terms = {(mt.gen(f"t{k}"), one_h)}
        for j in range(k):
            terms ^= {(mt.gen(f"e{k - j}", 1 << j), ht.gen(f"tau{j}"))}
        out[f"t{k}"] = frozenset(terms)
    return out


def omega_comodule(n: int, host: HopfAlgebroid, kind: str = "borel", a_cap: Optional[int] = None) -> ComoduleSpec:
    """The loop-space comodule through t_n, e_n over ``host`` with the closed-form coaction."""
    module = ModuleAlgebra(omega_presentation(n, kind), a_cap)
    return ComoduleSpec(f"omega-{kind}", module, host, closed_form_coaction(module, host, n))


def trivial_comodule(host: HopfAlgebroid, a_cap: Optional[int] = None) -> ComoduleSpec:
    """The coefficient ring itself, coacting through the right unit."""
    names = [n for n in ("a", "u") if n in host.table.index]
    inv = tuple(n for n in names if host.table.invertible[host.table.index[n]])
    table = generators_from_names(names, invertible=inv)
    module = ModuleAlgebra(AlgebraPresentation(table, [], name="coefficients"), a_cap)
    return ComoduleSpec("coefficients", module, host, {})


# --- derivation by co-Nishida ----------------------------------------------------


def derive_coaction(n_max: int) -> ComoduleSpec:
    """Rebuild psi(t_k), psi(e_k) for k <= n_max from psi(t0) = t0 (x) 1 over the genuine host.

    psi(e_{k+1}) = Q0 psi(t_k) and psi(t_{k+1}) = Q1 psi(t_k) + Q0 psi(t_k) (1 (x) tau0),
    with Q evaluated by the Cartan formulas on module (x) host.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    host = equivariant_steenrod(max(n_max, 1))
    module = ModuleAlgebra(omega_presentation(n_max, "genuine"))
    mod_ops = DyerLashof(module, omega_dyer_lashof_values(module))
    host_ops = DyerLashof(host, host_dyer_lashof_values(host))
    ops = TensorDyerLashof(mod_ops, host_ops, host, module)
    mt = module.table
    one_h = host.table.one()
    coaction: Dict[str, Tensor] = {"t0": frozenset(((mt.gen("t0"), one_h),))}
    for k in range(n_max):
        psi = coaction[f"t{k}"]
        shape = mt.ro(mt.gen(f"t{k}")).rho_shape()
        if shape is None:
            raise AlgebraError("t_k must have degree 1 mod rho")
        for name, j in ((f"e{k + 1}", 0), (f"t{k + 1}", 1)):
            value = co_nishida(ops, psi, shape[1], j)
            target = mt.ro(mt.gen(name))
            for x, y in value:
                if mt.ro(x) + host.table.ro(y) != target:
                    raise AlgebraError(f"derived coaction on {name} is not homogeneous")
            coaction[name] = value
    return ComoduleSpec("omega-derived", module, host, coaction)


def closed_form_genuine(n_max: int) -> ComoduleSpec:
    host = equivariant_steenrod(max(n_max, 1))
    return omega_comodule(n_max, host, "genuine")


def compare_derived(n_max: int) -> Dict[str, Tuple[str, str, bool]]:
    """Generator-by-generator comparison of the derived and closed-form coactions."""
    derived = derive_coaction(n_max)
    closed = closed_form_genuine(n_max)
    out = {}
    for name in derived.coaction:
        d = derived.coaction[name]
        c = closed.coaction[name]
        out[name] = (derived.fmt(d), closed.fmt(c), d == c)
    return out


# --- classical comodule ----------------------------------------------------------


def classical_loop_module(n: int, unit: Optional[str] = None) -> ModuleAlgebra:
    names = [f"x{i}" for i in range(1, n + 1)] + ([unit] if unit else [])
    table = generators_from_names(names, invertible=(unit,) if unit else ())
    return ModuleAlgebra(AlgebraPresentation(table, [], name="classical-loop"))


def classical_closed_form(module: ModuleAlgebra, host: HopfAlgebroid, n: int) -> Dict[str, Tensor]:
    """psi(x_i) = sum_{k<i} x_{i-k}^{2^k} (x) xi_k."""
    mt, ht = module.table, host.table
    out: Dict[str, Tensor] = {}
    for i in range(1, n + 1):
        terms: set = {(mt.gen(f"x{i}"), ht.one())}
        for k in range(1, i):
            if f"cxi{k}" in ht.index:
                terms ^= {(mt.gen(f"x{i - k}", 1 << k), ht.gen(f"cxi{k}"))}
        out[f"x{i}"] = frozenset(terms)
    return out


def classical_comodule(n: int, unit: Optional[str] = None) -> ComoduleSpec:
    host = classical_steenrod(n, unit=unit)
    module = classical_loop_module(n, unit)
    return ComoduleSpec("classical-loop", module, host, classical_closed_form(module, host, n))


def classical_replay(i_max: int) -> Dict[str, Tuple[str, str, bool]]:
    """Replay the inductive computation of psi(x_{i+1}) = Q1 psi(x_i) + (1 (x) xi_1) Q0 psi(x_i).

    Uses Q1 x_i = x_{i+1}, Q0 = squaring, Q1 xi_k = xi_{k+1} + xi_1 xi_k^2 and the
    Cartan formula Q1(xy) = Q0(x) Q1(y) + Q1(x) Q0(y).
    """
    n = i_max + 1
    spec = classical_comodule(n)
    module, host = spec.module, spec.host
    mt, ht = module.table, host.table
    mod_vals = {}
    for i in range(1, n + 1):
        q1 = frozenset((mt.gen(f"x{i + 1}"),)) if i < n else None
        if q1 is not None:
            mod_vals[f"x{i}"] = (frozenset((mt.gen(f"x{i}", 2),)), q1)
    host_vals = {}
    for k in range(1, n + 1):
        if k + 1 <= n:
            q1 = frozenset({ht.gen(f"cxi{k + 1}"), mono_mul(ht.gen("cxi1"), ht.gen(f"cxi{k}", 2))})
            host_vals[f"cxi{k}"] = (frozenset((ht.gen(f"cxi{k}", 2),)), q1)
    ops = TensorDyerLashof(
        DyerLashof(module, mod_vals, "classical"), DyerLashof(host, host_vals, "classical"), host, module
    )
    psi = {"x1": frozenset(((mt.gen("x1"), ht.one()),))}
    out = {}
    for i in range(1, i_max + 1):
        deg = mt.ro(mt.gen(f"x{i}")).trivial
        value = co_nishida(ops, psi[f"x{i}"], deg % 2, 1)
        psi[f"x{i + 1}"] = value
        closed = spec.coaction[f"x{i + 1}"]
        out[f"x{i + 1}"] = (spec.fmt(value), spec.fmt(closed), value == closed)
    return out


# --- restriction to underlying ---------------------------------------------------


@dataclass
class RestrictionReport:
    assignment: Dict[str, str] = field(default_factory=dict)
    candidates: Dict[str, int] = field(default_factory=dict)
    commutes: Dict[str, bool] = field(default_factory=dict)
    ring_compatible: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (
            all(v == 1 for v in self.candidates.values())
            and all(self.commutes.values())
            and all(self.ring_compatible.values())
        )


def _classical_monomials(table, degree: int, names: Sequence[str]) -> List[Monomial]:
    idx = [table.index[n] for n in names]
    degs = [table.ro(table.gen(n)).trivial for n in names]
    out: List[Monomial] = []
    cur = [0] * table.size

    def rec(k: int, left: int) -> None:
        if k == len(idx):
            if left == 0:
                out.append(tuple(cur))
            return
        e = 0
        while e * degs[k] <= left:
            cur[idx[k]] = e
            rec(k + 1, left - e * degs[k])
            e += 1
        cur[idx[k]] = 0

    rec(0, degree)
    return out


def restriction_consistency(k_max: int) -> RestrictionReport:
    """Solve for the underlying map on t_k, e_k (k <= k_max) as u-scaled monomials in the x_i.

    For each module generator in turn, every monomial of the right degree is tried;
    the report records the number of candidates making restriction commute with the
    coactions (exactly one is expected) and the chosen assignment.
    """
    source_host = equivariant_steenrod(max(k_max, 1))
    source = omega_comodule(k_max, source_host, "genuine")
    phi = phi_underlying(source_host)
    target_host = phi.target
    n_cls = k_max + 2
    module_t = classical_loop_module(n_cls, unit="u")
    target = ComoduleSpec("classical-loop-u", module_t, target_host, classical_closed_form(module_t, target_host, n_cls))
    mt, tt = source.module.table, module_t.table
    xnames = [f"x{i}" for i in range(1, n_cls + 1)]
    images: Dict[str, frozenset] = {"a": frozenset(), "u": frozenset((tt.gen("u"),))}
    report = RestrictionReport()

    def image_of(m: Monomial) -> frozenset:
        result = module_t.one()
        for name, e in zip(mt.names, m):
            if not e:
                continue
            img = images[name]
            if e < 0:
                (im,) = tuple(img)
                img = frozenset((tuple(-x for x in im),))
            for _ in range(abs(e)):
                result = module_t.multiply(result, img)
        return result

    def pushed(t: Tensor) -> Tensor:
        raw: set = set()
        for x, y in t:
            for mx in image_of(x):
                for my in phi.mono(y):
                    raw ^= {(mx, my)}
        return target_host.normalize_tensor(raw, module_t)

    order = []
    for k in range(0, k_max + 1):
        if k >= 1:
            order.append(f"e{k}")
        order.append(f"t{k}")
    for name in order:
        g = mt.gen(name)
        ro = mt.ro(g)
        u_power = -ro.sign
        found = []
        for cand in _classical_monomials(tt, ro.underlying, xnames):
            c = list(cand)
            c[tt.index["u"]] = u_power
            images[name] = frozenset((tuple(c),))
            lhs = pushed(source.coaction[name])
            rhs = target.coact(images[name])
            if lhs == rhs:
                found.append(tuple(c))
        report.candidates[name] = len(found)
        if found:
            images[name] = frozenset((found[0],))
            report.assignment[name] = tt.format_monomial(found[0])
            report.commutes[name] = True
        else:
            images.pop(name, None)
            report.commutes[name] = False
            break
    for k in range(k_max):
        if f"t{k}" in images and f"t{k + 1}" in images and f"e{k + 1}" in images:
            sq = image_of(mt.gen(f"t{k}", 2))
            rel = source.module.nf({mt.gen(f"t{k}", 2)})
            report.ring_compatible[f"t{k}^2"] = sq == module_t.nf(
                frozenset().union(*[image_of(m) for m in rel]) if rel else frozenset()
            )
    return report


# --- random corpus checks ---------------------------------------------------------


def random_module_monomials(spec: ComoduleSpec, count: int, seed: int, trunc: TruncationWindow) -> List[Monomial]:
    """Random normal monomials of the module inside ``trunc`` (deterministic in ``seed``)."""
    rng = random.Random(seed)
    pool: List[Monomial] = []
    pres = spec.module.presentation
    for stem in range(0, 9):
        for sig in range(-3, 4):
            pool.extend(basis_slice(pres, RODegree(stem - sig, sig), trunc))
    pool = sorted(set(pool))
    if not pool:
        return []
    return [rng.choice(pool) for _ in range(count)]


__all__ = [
    "ComoduleSpec",
    "DyerLashof",
    "ModuleAlgebra",
    "ShapeError",
    "TensorDyerLashof",
    "classical_comodule",
    "classical_replay",
    "compare_derived",
    "derive_coaction",
    "extended_power_table",
    "omega_comodule",
    "omega_presentation",
    "restriction_consistency",
    "trivial_comodule",
]
