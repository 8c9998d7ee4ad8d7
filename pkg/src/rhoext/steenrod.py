"""Dual Steenrod Hopf algebroids: genuine, Borel, quotient, associated graded and classical.

A Hopf algebroid here is a presented algebra ``Gamma`` containing the coefficient
generators (``u`` and ``a`` equivariantly), together with coproducts on the
non-coefficient generators and the right unit on the coefficients.  Tensor
powers ``Gamma (x)_A ... (x)_A Gamma`` are stored as sets of monomial tuples whose
factors after the first are coefficient-free; coefficients are pushed leftward
through the right unit during normalization.
"""

from __future__ import annotations

from importlib import resources
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import (
    AlgebraError,
    AlgebraPresentation,
    Monomial,
    add,
    format_presentation,
    free_mul,
    generators_from_names,
    mono_mul,
    parse_document,
)

Tensor = frozenset  # frozenset of tuples of monomials

COEFFICIENTS = ("u", "a")


class UnknownGeneratorError(AlgebraError):
    pass


def load_eta_axiom() -> Dict[str, str]:
    """Right-unit values on coefficient generators, read from the shipped axiom file."""
    text = resources.files("rhoext").joinpath("data/eta_right.axiom").read_text()
    out = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        kind, rest = line.split(None, 1)
        if kind != "etaR":
            raise AlgebraError(f"unexpected line in axiom file: {line!r}")
        lhs, rhs = rest.split("=", 1)
        out[lhs.strip()] = rhs.strip()
    return out


def format_tensor(table, t: Iterable[Tuple[Monomial, ...]]) -> str:
    terms = sorted(t, reverse=True)
    if not terms:
        return "0"
    return " + ".join("|".join(table.format_monomial(m) for m in term) for term in terms)


def parse_tensor(tables: Sequence, text: str) -> Tensor:
    text = text.strip()
    if text == "0":
        return frozenset()
    out: set = set()
    for term in text.split("+"):
        parts = [p.strip() for p in term.split("|")]
        if len(parts) != len(tables):
            raise AlgebraError(f"tensor term {term!r} has wrong arity")
        out ^= {tuple(tb.parse_monomial(p) for tb, p in zip(tables, parts))}
    return frozenset(out)


class HopfAlgebroid:
    """A presented Hopf algebroid with coefficient generators among ``COEFFICIENTS``.

    ``a_cap`` truncates modulo ``a^(a_cap+1)``, a Hopf ideal since ``a`` is two-sided;
    this is how completion at ``a`` is modelled.
    """

    def __init__(
        self,
        name: str,
        algebra: AlgebraPresentation,
        coproducts: Dict[str, Tensor],
        eta: Dict[str, frozenset],
        a_cap: Optional[int] = None,
    ):
        self.name = name
        self.algebra = algebra
        self.table = algebra.table
        self.coproducts = dict(coproducts)
        self.eta = dict(eta)
        self.a_cap = a_cap
        tb = self.table
        self.coef_idx = tuple(tb.index[c] for c in COEFFICIENTS if c in tb.index)
        self.coef_names = tuple(c for c in COEFFICIENTS if c in tb.index)
        self._a = tb.index.get("a")
        for g in tb.names:
            if g not in self.coef_names and g not in self.coproducts:
                raise AlgebraError(f"generator {g} has no coproduct")
        self._eta_cache: Dict[Tuple[int, ...], frozenset] = {}
        self._delta_cache: Dict[Monomial, Tensor] = {}
        self._norm_cache: Dict[tuple, frozenset] = {}
        self._nf_cache: Dict[Monomial, frozenset] = {}

    # --- ring level ---------------------------------------------------

    def nf_mono(self, m: Monomial) -> frozenset:
        hit = self._nf_cache.get(m)
        if hit is None:
            hit = self.truncate(self.algebra.rewrite.reduce((m,)))
            self._nf_cache[m] = hit
        return hit

    def nf(self, x: Iterable[Monomial]) -> frozenset:
        acc: set = set()
        for m in x:
            acc ^= self.nf_mono(m)
        return frozenset(acc)

    def truncate(self, x: Iterable[Monomial]) -> frozenset:
        if self.a_cap is None or self._a is None:
            return frozenset(x)
        a, cap = self._a, self.a_cap
        return frozenset(m for m in x if m[a] <= cap)

    def multiply(self, x: Iterable[Monomial], y: Iterable[Monomial]) -> frozenset:
        return self.nf(free_mul(x, y))

    def element(self, text: str) -> frozenset:
        return self.nf(self.table.parse_element(text))

    def split(self, m: Monomial) -> Tuple[Tuple[int, ...], Monomial]:
        """Coefficient exponents (in ``coef_names`` order) and the coefficient-free rest."""
        c = tuple(m[i] for i in self.coef_idx)
        if not any(c):
            return c, m
        rest = list(m)
        for i in self.coef_idx:
            rest[i] = 0
        return c, tuple(rest)

    def coef_monomial(self, c: Tuple[int, ...]) -> Monomial:
        m = [0] * self.table.size
        for i, e in zip(self.coef_idx, c):
            m[i] = e
        return tuple(m)

    def is_coefficient(self, m: Monomial) -> bool:
        cset = set(self.coef_idx)
        return all(e == 0 or i in cset for i, e in enumerate(m))

    # --- right unit ----------------------------------------------------

    def eta_right_coef(self, c: Tuple[int, ...]) -> frozenset:
        hit = self._eta_cache.get(c)
        if hit is not None:
            return hit
        result = frozenset((self.table.one(),))
        for name, e in zip(self.coef_names, c):
            if e == 0:
                continue
            if e > 0:
                base = self.eta[name]
            else:
                base = self._eta_inverse(name)
            for _ in range(abs(e)):
                result = self.multiply(result, base)
        self._eta_cache[c] = result
        return result

    def _eta_inverse(self, name: str) -> frozenset:
        """Right unit of ``name^-1`` as a series truncated by the a-cap."""
        idx = self.table.index[name]
        if not self.table.invertible[idx]:
            raise AlgebraError(f"{name} is not invertible")
        image = self.eta[name]
        inv = self.table.gen(name, -1)
        # image = name * (1 + r); its inverse is name^-1 * sum r^k
        r = self.nf(frozenset(mono_mul(m, inv) for m in image) ^ {self.table.one()})
        if not r:
            return frozenset((inv,))
        if self.a_cap is None:
            raise AlgebraError("inverting a non-trivial right unit needs an a-cap")
        total: set = {self.table.one()}
        power = frozenset((self.table.one(),))
        for _ in range(4 * (self.a_cap + 2)):
            power = self.multiply(power, r)
            if not power:
                break
            total ^= set(power)
        else:
            raise AlgebraError("right-unit inverse series did not terminate within the a-cap")
        return self.nf(frozenset(mono_mul(m, inv) for m in total))

    def eta_right(self, x: Iterable[Monomial]) -> frozenset:
        acc: set = set()
        for m in x:
            if not self.is_coefficient(m):
                raise AlgebraError("eta_right takes coefficient elements")
            c, _ = self.split(m)
            acc ^= self.eta_right_coef(c)
        return frozenset(acc)

    def counit(self, x: Iterable[Monomial]) -> frozenset:
        out: set = set()
        for m in self.nf(x):
            c, rest = self.split(m)
            if not any(rest):
                out ^= {m}
        return frozenset(out)

    # --- coproduct ----------------------------------------------------

    def coproduct(self, name: str) -> Tensor:
        if name not in self.coproducts:
            raise UnknownGeneratorError(name)
        return self.coproducts[name]

    def delta(self, m: Monomial) -> Tensor:
        """Coproduct of a monomial (coefficients stay on the left)."""
        hit = self._delta_cache.get(m)
        if hit is not None:
            return hit
        c, rest = self.split(m)
        one = self.table.one()
        terms: frozenset = frozenset(((self.coef_monomial(c), one),))
        for i, e in enumerate(rest):
            if not e:
                continue
            g = self.coproducts[self.table.names[i]]
            for _ in range(e):
                terms = _tensor_free_mul(terms, g)
        res = self.normalize_tensor(terms)
        self._delta_cache[m] = res
        return res

    def apply_delta(self, t: Iterable[Tuple[Monomial, ...]], i: int, module=None) -> Tensor:
        raw: set = set()
        for term in t:
            for x, y in self.delta(term[i]):
                raw ^= {term[:i] + (x, y) + term[i + 1 :]}
        return self.normalize_tensor(raw, module)

    # --- tensor normalization ------------------------------------------

    def normalize_tensor(self, terms: Iterable[Tuple[Monomial, ...]], module=None) -> Tensor:
        """Normal form in ``L (x)_A Gamma (x)_A ... (x)_A Gamma``.

        ``L`` is ``Gamma`` itself when ``module`` is None, otherwise the module
        algebra, which absorbs coefficients by plain multiplication.
        """
        acc: set = set()
        for t in terms:
            acc ^= self._norm_term(tuple(t), module)
        return frozenset(acc)

    def _norm_term(self, t: Tuple[Monomial, ...], module) -> frozenset:
        key = (t, id(module))
        hit = self._norm_cache.get(key)
        if hit is not None:
            return hit
        if len(t) == 1:
            if module is None:
                res = frozenset((m,) for m in self.nf_mono(t[0]))
            else:
                res = frozenset((m,) for m in module.nf((t[0],)))
        else:
            prefix, last = t[:-1], t[-1]
            out: set = set()
            for y in self.nf_mono(last):
                c, b = self.split(y)
                if not any(c):
                    for r in self._norm_term(prefix, module):
                        out ^= {r + (b,)}
                    continue
                if len(prefix) == 1 and module is not None:
                    moves = (module.coef_monomial(self.coef_names, c),)
                else:
                    moves = self.eta_right_coef(c)
                for z in moves:
                    new = prefix[:-1] + (mono_mul(prefix[-1], z),)
                    for r in self._norm_term(new, module):
                        out ^= {r + (b,)}
            res = frozenset(out)
        self._norm_cache[key] = res
        return res

    def tensor_text(self, t: Tensor) -> str:
        return format_tensor(self.table, t)

    # --- checks --------------------------------------------------------

    def coassociativity_defect(self, name: str) -> Tensor:
        d = self.coproduct(name)
        left = self.apply_delta(d, 0)
        right = self.apply_delta(d, 1)
        return left ^ right

    def counit_defects(self, name: str) -> Tuple[frozenset, frozenset]:
        g = frozenset((self.table.gen(name),))
        left: set = set()
        right: set = set()
        one = self.table.one()
        for x, y in self.coproduct(name):
            cx, rx = self.split(x)
            if not any(rx):
                left ^= set(self.nf((mono_mul(self.coef_monomial(cx), y),)))
            if y == one:
                right ^= {x}
        return self.nf(left) ^ g, self.nf(right) ^ g

    def unit_compatibility_defect(self, c: Tuple[int, ...]) -> Tensor:
        """``Delta(eta_R(c)) + 1 (x) eta_R(c)`` after normalization."""
        lhs: set = set()
        for m in self.eta_right_coef(c):
            lhs ^= set(self.delta(m))
        one = self.table.one()
        rhs = self.normalize_tensor({(one, m) for m in self.eta_right_coef(c)})
        return frozenset(lhs) ^ rhs

    def to_text(self) -> str:
        stanzas = []
        for g in self.table.names:
            if g in self.coproducts:
                stanzas.append(("coproduct", g, self.tensor_text(self.coproducts[g])))
        for g in self.coef_names:
            stanzas.append(("etaR", g, self.table.format_element(self.eta[g])))
        return format_presentation(self.algebra, stanzas)

    @classmethod
    def from_text(cls, name: str, text: str, a_cap: Optional[int] = None) -> HopfAlgebroid:
        doc = parse_document(text)
        pres = doc.presentation
        tb = pres.table
        cop: Dict[str, Tensor] = {}
        eta: Dict[str, frozenset] = {}
        for kind, gen, rhs in doc.stanzas:
            if kind == "coproduct":
                cop[gen] = parse_tensor((tb, tb), rhs)
            elif kind == "etaR":
                eta[gen] = tb.parse_element(rhs)
            else:
                raise AlgebraError(f"stanza {kind} not allowed in a Hopf algebroid file")
        return cls(name, pres, cop, eta, a_cap)


def _tensor_free_mul(x: Iterable[tuple], y: Iterable[tuple]) -> frozenset:
    out: set = set()
    for s in x:
        for t in y:
            out ^= {tuple(mono_mul(a, b) for a, b in zip(s, t))}
    return frozenset(out)


# --- builders -------------------------------------------------------------------


def _milnor_coproducts(table, n_tau: int, n_xi: int, xi: Callable[[int], str], tau: Optional[Callable[[int], str]]):
    """Delta(xi_n) = sum xi_{n-i}^{2^i} (x) xi_i and Delta(tau_n) = tau_n (x) 1 + sum xi_{n-i}^{2^i} (x) tau_i."""
    one = table.one()

    def xi_pow(k: int, p: int) -> Optional[Monomial]:
        if k == 0:
            return one
        if xi(k) not in table.index:
            return None
        return table.gen(xi(k), p)

    cop: Dict[str, Tensor] = {}
    for n in range(1, n_xi + 1):
        terms: set = set()
        for i in range(n + 1):
            left = xi_pow(n - i, 1 << i)
            right = xi_pow(i, 1)
            if left is not None and right is not None:
                terms ^= {(left, right)}
        cop[xi(n)] = frozenset(terms)
    if tau is not None:
        for n in range(n_tau + 1):
            terms = {(table.gen(tau(n)), one)}
            for i in range(n + 1):
                left = xi_pow(n - i, 1 << i)
                if left is not None:
                    terms ^= {(left, table.gen(tau(i)))}
            cop[tau(n)] = frozenset(terms)
    return cop


def _tau(i: int) -> str:
    return f"tau{i}"


def _xi(i: int) -> str:
    return f"xi{i}"


def _cxi(i: int) -> str:
    return f"cxi{i}"


def _eta_from_axiom(table) -> Dict[str, frozenset]:
    return {k: table.parse_element(v) for k, v in load_eta_axiom().items()}


def equivariant_steenrod(n: int, borel: bool = False, a_cap: Optional[int] = None) -> HopfAlgebroid:
    """The genuine (or, with ``borel``, u-inverted) dual Steenrod algebra through tau_{n+1}, xi_{n+1}.

    The square of the top generator tau_{n+1} carries no relation; results are exact
    in degrees below its square.
    """
    taus = [_tau(i) for i in range(n + 2)]
    xis = [_xi(i) for i in range(1, n + 2)]
    table = generators_from_names(taus + xis + ["a", "u"], invertible=("u",) if borel else ())
    rels = []
    for i in range(n + 1):
        rels.append(
            table.parse_element(
                f"{_tau(i)}^2 + u*{_xi(i + 1)} + a*tau0*{_xi(i + 1)} + a*{_tau(i + 1)}"
            )
        )
    pres = AlgebraPresentation(table, rels, weights=[taus], name="A")
    cop = _milnor_coproducts(table, n + 1, n + 1, _xi, _tau)
    name = "borel-steenrod" if borel else "genuine-steenrod"
    return HopfAlgebroid(name, pres, cop, _eta_from_axiom(table), a_cap)


def equivariant_exterior(n: int, borel: bool = True, a_cap: Optional[int] = None) -> HopfAlgebroid:
    """Quotient by all xi: tau_i^2 = a tau_{i+1}, tau_i primitive, through tau_{n+1}."""
    taus = [_tau(i) for i in range(n + 2)]
    table = generators_from_names(taus + ["a", "u"], invertible=("u",) if borel else ())
    rels = [table.parse_element(f"{_tau(i)}^2 + a*{_tau(i + 1)}") for i in range(n + 1)]
    pres = AlgebraPresentation(table, rels, name="E")
    cop = _milnor_coproducts(table, n + 1, 0, _xi, _tau)
    name = "borel-exterior" if borel else "genuine-exterior"
    return HopfAlgebroid(name, pres, cop, _eta_from_axiom(table), a_cap)


def graded_exterior(n: int, a_cap: Optional[int] = None) -> HopfAlgebroid:
    """Associated graded of the Borel exterior quotient: exterior on primitive tau_0..tau_n."""
    taus = [_tau(i) for i in range(n + 1)]
    table = generators_from_names(taus + ["a", "u"], invertible=("u",))
    rels = [table.parse_element(f"{t}^2") for t in taus]
    pres = AlgebraPresentation(table, rels, name="grE")
    cop = _milnor_coproducts(table, n, 0, _xi, _tau)
    eta = {"u": frozenset((table.gen("u"),)), "a": frozenset((table.gen("a"),))}
    return HopfAlgebroid("graded-exterior", pres, cop, eta, a_cap)


def classical_steenrod(n: int, unit: Optional[str] = None) -> HopfAlgebroid:
    """Classical dual Steenrod algebra on xi_1..xi_n, optionally over F2[unit^+-1]."""
    xis = [_cxi(i) for i in range(1, n + 1)]
    names = xis + ([unit] if unit else [])
    table = generators_from_names(names, invertible=(unit,) if unit else ())
    pres = AlgebraPresentation(table, [], name="classicalA")
    cop = _milnor_coproducts(table, 0, n, _cxi, None)
    eta = {unit: frozenset((table.gen(unit),))} if unit else {}
    return HopfAlgebroid("classical-steenrod", pres, cop, eta)


def classical_exterior(n: int) -> HopfAlgebroid:
    xis = [_cxi(i) for i in range(1, n + 1)]
    table = generators_from_names(xis, invertible=())
    pres = AlgebraPresentation(table, [table.parse_element(f"{x}^2") for x in xis], name="classicalE")
    cop = _milnor_coproducts(table, 0, n, _cxi, None)
    return HopfAlgebroid("classical-exterior", pres, cop, {})


# --- ring maps ------------------------------------------------------------------


class RingMap:
    """Multiplicative map between presented algebras, given on generators.

    Invertible source generators must map to monomials or zero.
    """

    def __init__(self, source: HopfAlgebroid, target: HopfAlgebroid, images: Dict[str, frozenset]):
        self.source = source
        self.target = target
        self.images = images
        self._cache: Dict[Monomial, frozenset] = {}

    def mono(self, m: Monomial) -> frozenset:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        tgt = self.target
        result = frozenset((tgt.table.one(),))
        for name, e in zip(self.source.table.names, m):
            if not e:
                continue
            img = self.images[name]
            if e < 0:
                if not img:
                    raise AlgebraError(f"{name} maps to zero but appears inverted")
                if len(img) != 1:
                    raise AlgebraError(f"image of {name} is not invertible")
                (im,) = tuple(img)
                img = frozenset((tuple(-x for x in im),))
            for _ in range(abs(e)):
                result = tgt.multiply(result, img)
                if not result:
                    break
            if not result:
                break
        self._cache[m] = result
        return result

    def __call__(self, x: Iterable[Monomial]) -> frozenset:
        acc: set = set()
        for m in self.source.nf(x):
            acc ^= self.mono(m)
        return frozenset(acc)

    def on_tensor(self, t: Iterable[Tuple[Monomial, ...]]) -> Tensor:
        raw: set = set()
        for term in t:
            parts = [self.mono(m) for m in term]
            combos = [()]
            for p in parts:
                combos = [c + (x,) for c in combos for x in p]
            for c in combos:
                raw ^= {c}
        return self.target.normalize_tensor(raw)

    def coproduct_defect(self, name: str) -> Tensor:
        src, tgt = self.source, self.target
        lhs = self.on_tensor(src.coproduct(name))
        rhs: set = set()
        for m in self(frozenset((src.table.gen(name),))):
            rhs ^= set(tgt.delta(m))
        return lhs ^ frozenset(rhs)


def _monomial_over(table, name: str, power: int, unit: Optional[str], unit_power: int) -> frozenset:
    m = list(table.gen(name, power))
    if unit:
        m[table.index[unit]] = unit_power
    return frozenset((tuple(m),))


def phi_underlying(source: HopfAlgebroid) -> RingMap:
    """Underlying map: tau_n -> xi_{n+1} u^-(2^n-1), xi_n -> xi_n^2 u^-(2^n-1), a -> 0."""
    n_tau = max(int(g[3:]) for g in source.table.names if g.startswith("tau"))
    target = classical_steenrod(n_tau + 1, unit="u")
    tt = target.table
    images: Dict[str, frozenset] = {"a": frozenset(), "u": frozenset((tt.gen("u"),))}
    for g in source.table.names:
        if g.startswith("tau"):
            k = int(g[3:])
            images[g] = _monomial_over(tt, _cxi(k + 1), 1, "u", -((1 << k) - 1))
        elif g.startswith("xi"):
            k = int(g[2:])
            images[g] = _monomial_over(tt, _cxi(k), 2, "u", -((1 << k) - 1))
    return RingMap(source, target, images)


def phi_fixed(source: HopfAlgebroid) -> RingMap:
    """Modified geometric fixed points: tau_i -> 0, xi_i -> xi_i a^-(2^i-1), u -> 0."""
    n_xi = max([int(g[2:]) for g in source.table.names if g.startswith("xi")] or [0])
    target = classical_steenrod(n_xi, unit="a")
    tt = target.table
    images: Dict[str, frozenset] = {"u": frozenset(), "a": frozenset((tt.gen("a"),))}
    for g in source.table.names:
        if g.startswith("tau"):
            images[g] = frozenset()
        elif g.startswith("xi"):
            k = int(g[2:])
            images[g] = _monomial_over(tt, _cxi(k), 1, "a", -((1 << k) - 1))
    return RingMap(source, target, images)


def quotient_map(source: HopfAlgebroid, target: HopfAlgebroid) -> RingMap:
    """Send every generator to its namesake in ``target`` and the missing ones (xi) to zero."""
    images = {}
    for g in source.table.names:
        if g in target.table.index:
            images[g] = frozenset((target.table.gen(g),))
        else:
            images[g] = frozenset()
    return RingMap(source, target, images)


def coefficient_monomials(host: HopfAlgebroid, u_range: range, a_range: range) -> List[Tuple[int, ...]]:
    out = []
    for m in u_range:
        for n in a_range:
            c = []
            for name in host.coef_names:
                c.append(m if name == "u" else n)
            out.append(tuple(c))
    return out


__all__ = [
    "HopfAlgebroid",
    "RingMap",
    "add",
    "classical_exterior",
    "classical_steenrod",
    "equivariant_exterior",
    "equivariant_steenrod",
    "graded_exterior",
    "phi_fixed",
    "phi_underlying",
    "quotient_map",
]
