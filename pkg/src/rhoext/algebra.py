"""Graded commutative F2-algebras given by generators and rewrite relations.

Monomials are exponent tuples indexed by a :class:`GeneratorTable`; elements are
frozensets of monomials (coefficients are implicitly 1 over F2).  Relations are
oriented by a lexicographic order that ignores invertible generators, so a unit
factor such as ``u`` never leads a relation.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .grading import MultiDegree, RODegree

Monomial = Tuple[int, ...]
Element = frozenset

ZERO_ELEMENT: frozenset = frozenset()

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


class AlgebraError(ValueError):
    pass


class NonHomogeneousError(AlgebraError):
    pass


class NonTerminationError(AlgebraError):
    pass


class InfiniteSliceError(AlgebraError):
    pass


class TableMismatchError(AlgebraError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    degree: MultiDegree
    invertible: bool = False


class GeneratorTable:
    """Ordered generator list; the order orients rewriting (earlier = larger)."""

    def __init__(self, generators: Sequence[Generator]):
        names = [g.name for g in generators]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate generator names in {names}")
        self.generators: Tuple[Generator, ...] = tuple(generators)
        self.names: Tuple[str, ...] = tuple(names)
        self.index: Dict[str, int] = {n: i for i, n in enumerate(names)}
        self.size = len(names)
        self.invertible: Tuple[bool, ...] = tuple(g.invertible for g in generators)
        self._tr = tuple(g.degree.ro.trivial for g in generators)
        self._sg = tuple(g.degree.ro.sign for g in generators)
        self._ad = tuple(g.degree.adams for g in generators)
        self._bk = tuple(g.degree.bockstein for g in generators)
        self._wt = tuple(g.degree.weight for g in generators)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GeneratorTable) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def __repr__(self) -> str:
        return f"GeneratorTable({', '.join(self.names)})"

    def one(self) -> Monomial:
        return (0,) * self.size

    def gen(self, name: str, exp: int = 1) -> Monomial:
        m = [0] * self.size
        m[self.index[name]] = exp
        return tuple(m)

    def monomial(self, exps: Dict[str, int]) -> Monomial:
        m = [0] * self.size
        for k, v in exps.items():
            m[self.index[k]] += v
        return self.check(tuple(m))

    def check(self, m: Monomial) -> Monomial:
        for i, e in enumerate(m):
            if e < 0 and not self.invertible[i]:
                raise AlgebraError(f"negative exponent on {self.names[i]}")
        return m

    def ro(self, m: Monomial) -> RODegree:
        t = s = 0
        for i, e in enumerate(m):
            if e:
                t += e * self._tr[i]
                s += e * self._sg[i]
        return RODegree(t, s)

    def degree(self, m: Monomial) -> MultiDegree:
        t = s = ad = bk = wt = 0
        for i, e in enumerate(m):
            if e:
                t += e * self._tr[i]
                s += e * self._sg[i]
                ad += e * self._ad[i]
                bk += e * self._bk[i]
                wt += e * self._wt[i]
        return MultiDegree(RODegree(t, s), ad, bk, wt)

    def weight(self, m: Monomial) -> int:
        return sum(e * w for e, w in zip(m, self._wt))

    def adams(self, m: Monomial) -> int:
        return sum(e * w for e, w in zip(m, self._ad))

    def underlying(self, m: Monomial) -> int:
        return sum(e * (a + b) for e, a, b in zip(m, self._tr, self._sg))

    def exponent(self, m: Monomial, name: str) -> int:
        i = self.index.get(name)
        return 0 if i is None else m[i]

    # --- text form -------------------------------------------------------

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for n, e in zip(self.names, m):
            if e == 1:
                parts.append(n)
            elif e:
                parts.append(f"{n}^{e}")
        return "*".join(parts) if parts else "1"

    def format_element(self, x: Iterable[Monomial]) -> str:
        terms = sorted(x, key=self.sort_key, reverse=True)
        return " + ".join(self.format_monomial(m) for m in terms) if terms else "0"

    def sort_key(self, m: Monomial) -> Tuple[int, ...]:
        return tuple(m)

    def parse_monomial(self, text: str) -> Monomial:
        text = text.strip()
        m = [0] * self.size
        if text == "1":
            return tuple(m)
        for factor in text.split("*"):
            factor = factor.strip()
            if "^" in factor:
                name, exp = factor.split("^")
                e = int(exp)
            else:
                name, e = factor, 1
            name = name.strip()
            if name not in self.index:
                raise AlgebraError(f"unknown generator {name!r}")
            m[self.index[name]] += e
        return self.check(tuple(m))

    def parse_element(self, text: str) -> frozenset:
        text = text.strip()
        if text == "0":
            return ZERO_ELEMENT
        out: set = set()
        for term in text.split("+"):
            out ^= {self.parse_monomial(term)}
        return frozenset(out)

    def sub_table(self, keep: Callable[[Generator], bool]) -> GeneratorTable:
        return GeneratorTable([g for g in self.generators if keep(g)])


# --- element arithmetic (no relations) -------------------------------------


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def add(*xs: Iterable[Monomial]) -> frozenset:
    out: set = set()
    for x in xs:
        out ^= set(x)
    return frozenset(out)


def free_mul(a: Iterable[Monomial], b: Iterable[Monomial]) -> frozenset:
    out: set = set()
    for x in a:
        for y in b:
            out ^= {mono_mul(x, y)}
    return frozenset(out)


def scale(x: Iterable[Monomial], m: Monomial) -> frozenset:
    return frozenset(mono_mul(t, m) for t in x)


def is_homogeneous(table: GeneratorTable, x: Iterable[Monomial]) -> bool:
    degs = {table.ro(m) for m in x}
    return len(degs) <= 1


# --- rewriting --------------------------------------------------------------


@dataclass(frozen=True)
class Rule:
    lead: Monomial
    tail: frozenset
    support: Tuple[Tuple[int, int], ...] = field(compare=False, default=())


def _make_rule(lead: Monomial, tail: frozenset) -> Rule:
    return Rule(lead, tail, tuple((i, e) for i, e in enumerate(lead) if e > 0))


class MonomialOrder:
    """Weighted-then-lexicographic order on non-invertible exponents.

    ``weights`` are optional prefixes of generator names whose total exponent is
    compared first (e.g. the count of tau factors); ties fall back to lex order
    in the priority list.
    """

    def __init__(
        self,
        table: GeneratorTable,
        order: Optional[Sequence[str]] = None,
        weights: Sequence[Sequence[str]] = (),
    ):
        names = list(order) if order is not None else [n for n in table.names]
        for n in table.names:
            if n not in names:
                names.append(n)
        self.names = tuple(n for n in names if n in table.index and not table.invertible[table.index[n]])
        self.idx = tuple(table.index[n] for n in self.names)
        self.weight_idx = tuple(tuple(table.index[n] for n in w if n in table.index) for w in weights)

    def key(self, m: Monomial) -> Tuple[int, ...]:
        if self.weight_idx:
            return tuple(sum(m[i] for i in w) for w in self.weight_idx) + tuple(m[i] for i in self.idx)
        return tuple(m[i] for i in self.idx)

    def lead(self, x: Iterable[Monomial]) -> Monomial:
        return max(x, key=self.key)


class RewriteSystem:
    """Oriented relations ``lead -> tail`` with memoized normal forms."""

    STEP_GUARD = 10**6

    def __init__(self, table: GeneratorTable, rules: Sequence[Rule], order: MonomialOrder):
        self.table = table
        self.order = order
        inv = table.invertible
        checked = []
        for r in rules:
            if any(e and inv[i] for i, e in enumerate(r.lead)):
                raise AlgebraError("leading monomial may not involve invertible generators")
            deg = table.ro(r.lead)
            for t in r.tail:
                if table.ro(t) != deg:
                    raise NonHomogeneousError(
                        f"relation {table.format_monomial(r.lead)} = {table.format_element(r.tail)} is not homogeneous"
                    )
                if _divides(r, t):
                    raise AlgebraError("leading monomial divides a tail monomial of its own relation")
            checked.append(r if r.support else _make_rule(r.lead, r.tail))
        self.rules: Tuple[Rule, ...] = tuple(checked)
        self._cache: Dict[Monomial, frozenset] = {}
        self._steps = 0

    def find_rule(self, m: Monomial) -> Optional[Rule]:
        for r in self.rules:
            if _divides(r, m):
                return r
        return None

    def is_normal(self, m: Monomial) -> bool:
        return self.find_rule(m) is None

    def _nf(self, m: Monomial) -> frozenset:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        r = self.find_rule(m)
        if r is None:
            res = frozenset((m,))
        else:
            self._steps += 1
            if self._steps > self.STEP_GUARD:
                raise NonTerminationError("rewrite step guard exceeded")
            q = mono_div(m, r.lead)
            acc: set = set()
            for t in r.tail:
                acc ^= self._nf(mono_mul(q, t))
            res = frozenset(acc)
        self._cache[m] = res
        return res

    def normal_form_of_monomial(self, m: Monomial) -> frozenset:
        self._steps = 0
        return self._nf(m)

    def reduce(self, x: Iterable[Monomial]) -> frozenset:
        """Normal form without a homogeneity check."""
        self._steps = 0
        acc: set = set()
        for m in x:
            acc ^= self._nf(m)
        return frozenset(acc)

    def normalize(self, x: Iterable[Monomial]) -> frozenset:
        x = frozenset(x)
        if not is_homogeneous(self.table, x):
            raise NonHomogeneousError(f"non-homogeneous element {self.table.format_element(x)}")
        return self.reduce(x)

    def multiply(self, a: Iterable[Monomial], b: Iterable[Monomial]) -> frozenset:
        return self.reduce(free_mul(a, b))

    def power(self, a: Iterable[Monomial], n: int) -> frozenset:
        result = frozenset((self.table.one(),))
        base = self.reduce(a)
        while n:
            if n & 1:
                result = self.multiply(result, base)
            n >>= 1
            if n:
                base = self.multiply(base, base)
        return result


def _divides(rule: Rule, m: Monomial) -> bool:
    for i, e in rule.support:
        if m[i] < e:
            return False
    return True


def _orient(table: GeneratorTable, order: MonomialOrder, poly: frozenset) -> Optional[Rule]:
    if not poly:
        return None
    lead = order.lead(poly)
    shift = tuple(-e if table.invertible[i] else 0 for i, e in enumerate(lead))
    if any(shift):
        poly = scale(poly, shift)
        lead = mono_mul(lead, shift)
    return _make_rule(lead, frozenset(poly - {lead}))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def complete(
    table: GeneratorTable,
    relations: Sequence[frozenset],
    order: MonomialOrder,
    bound: Optional[Callable[[Monomial], bool]] = None,
    max_rules: int = 5000,
) -> List[Rule]:
    """Buchberger completion, skipping critical pairs whose lcm falls outside ``bound``.

    Every relation must be homogeneous for a grading that ``bound`` is monotone in,
    so the truncated result is confluent on all monomials inside the bound.
    """
    rules: List[Rule] = []

    def reduce_with(rs: List[Rule], poly: frozenset) -> frozenset:
        sysm = _LightSystem(rs)
        return sysm.reduce(poly)

    for rel in relations:
        red = reduce_with(rules, frozenset(rel))
        r = _orient(table, order, red)
        if r is not None:
            rules.append(r)

    pairs = [(i, j) for j in range(len(rules)) for i in range(j)]
    done = set()
    while pairs:
        pairs.sort(key=lambda p: (sum(_lcm(rules[p[0]].lead, rules[p[1]].lead)), p))
        i, j = pairs.pop(0)
        if (i, j) in done:
            continue
        done.add((i, j))
        f, g = rules[i], rules[j]
        lcm = _lcm(f.lead, g.lead)
        if all(min(x, y) == 0 for x, y in zip(f.lead, g.lead)):
            continue
        if bound is not None and not bound(lcm):
            continue
        qf = mono_div(lcm, f.lead)
        qg = mono_div(lcm, g.lead)
        s = add(scale(f.tail, qf), scale(g.tail, qg))
        red = reduce_with(rules, s)
        r = _orient(table, order, red)
        if r is None:
            continue
        rules.append(r)
        if len(rules) > max_rules:
            raise NonTerminationError("completion produced too many rules")
        k = len(rules) - 1
        pairs.extend((a, k) for a in range(k))
    return _interreduce(rules)


class _LightSystem:
    def __init__(self, rules: Sequence[Rule]):
        self.rules = tuple(rules)
        self.cache: Dict[Monomial, frozenset] = {}

    def nf(self, m: Monomial) -> frozenset:
        hit = self.cache.get(m)
        if hit is not None:
            return hit
        for r in self.rules:
            if _divides(r, m):
                q = mono_div(m, r.lead)
                acc: set = set()
                for t in r.tail:
                    acc ^= self.nf(mono_mul(q, t))
                res = frozenset(acc)
                break
        else:
            res = frozenset((m,))
        self.cache[m] = res
        return res

    def reduce(self, x: Iterable[Monomial]) -> frozenset:
        acc: set = set()
        for m in x:
            acc ^= self.nf(m)
        return frozenset(acc)


def _interreduce(rules: List[Rule]) -> List[Rule]:
    keep = []
    for i, r in enumerate(rules):
        redundant = False
        for j, s in enumerate(rules):
            if i != j and _divides(s, r.lead) and (s.lead != r.lead or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(r)
    out = []
    for i, r in enumerate(keep):
        others = _LightSystem([s for j, s in enumerate(keep) if j != i])
        out.append(_make_rule(r.lead, others.reduce(r.tail)))
    out.sort(key=lambda r: r.lead, reverse=True)
    return out


# --- presentations ----------------------------------------------------------


class AlgebraPresentation:
    """Generators, relations (each an element equal to zero) and a rewrite order."""

    def __init__(
        self,
        table: GeneratorTable,
        relations: Sequence[frozenset] = (),
        order: Optional[Sequence[str]] = None,
        bound: Optional[Callable[[Monomial], bool]] = None,
        name: str = "",
        weights: Sequence[Sequence[str]] = (),
    ):
        self.table = table
        self.relations = tuple(frozenset(r) for r in relations if r)
        for r in self.relations:
            if not is_homogeneous(table, r):
                raise NonHomogeneousError(f"relation {table.format_element(r)} is not homogeneous")
        self.order_names = tuple(order) if order is not None else None
        self.weights = tuple(tuple(w) for w in weights)
        self.order = MonomialOrder(table, order, self.weights)
        self.bound = bound
        self.name = name
        self._rw: Optional[RewriteSystem] = None

    @property
    def rewrite(self) -> RewriteSystem:
        if self._rw is None:
            rules = complete(self.table, self.relations, self.order, self.bound)
            self._rw = RewriteSystem(self.table, rules, self.order)
        return self._rw

    def normalize(self, x: Iterable[Monomial]) -> frozenset:
        return self.rewrite.normalize(x)

    def reduce(self, x: Iterable[Monomial]) -> frozenset:
        return self.rewrite.reduce(x)

    def multiply(self, a: Iterable[Monomial], b: Iterable[Monomial]) -> frozenset:
        if isinstance(a, AlgebraPresentation) or isinstance(b, AlgebraPresentation):
            raise TableMismatchError("multiply takes elements")
        return self.rewrite.multiply(a, b)

    def element(self, text: str) -> frozenset:
        return self.table.parse_element(text)

    def gen(self, name: str, exp: int = 1) -> frozenset:
        return frozenset((self.table.gen(name, exp),))

    def one(self) -> frozenset:
        return frozenset((self.table.one(),))

    def fmt(self, x: Iterable[Monomial]) -> str:
        return self.table.format_element(x)

    def with_relations(self, extra: Sequence[frozenset], name: str = "") -> AlgebraPresentation:
        return AlgebraPresentation(
            self.table,
            list(self.relations) + list(extra),
            self.order_names,
            self.bound,
            name or self.name,
            self.weights,
        )

    def reordered(self, names: Sequence[str]) -> AlgebraPresentation:
        """Same algebra with generators listed (and ordered) as ``names``."""
        gens = [self.table.generators[self.table.index[n]] for n in names]
        table = GeneratorTable(gens)
        perm = [self.table.index[n] for n in names]

        def move(m: Monomial) -> Monomial:
            return tuple(m[p] for p in perm)

        rels = [frozenset(move(m) for m in r) for r in self.relations]
        bound = None
        if self.bound is not None:
            inv = [names.index(n) for n in self.table.names]
            old_bound = self.bound
            bound = lambda m: old_bound(tuple(m[i] for i in inv))  # noqa: E731
        return AlgebraPresentation(table, rels, None, bound, self.name, self.weights)


# --- truncation windows and slices -----------------------------------------


_INDEXED = re.compile(r"^([a-z]+)(\d+)$")


@dataclass(frozen=True)
class TruncationWindow:
    """Finite window: Snaith weight cap, v-index cap, a-exponent cap, Adams cap and degree ranges."""

    weight_cap: int = 4
    v_cap: int = 4
    a_cap: int = 16
    adams_cap: Optional[int] = None
    stems: Tuple[int, int] = (-4, 12)
    sigmas: Tuple[int, int] = (-12, 12)

    def admits_generator(self, g: Generator) -> bool:
        if g.degree.weight > self.weight_cap:
            return False
        m = _INDEXED.match(g.name)
        if m and m.group(1) in ("v", "tau", "xi", "cxi"):
            return int(m.group(2)) <= self.v_cap
        return True

    def degrees(self) -> Iterator[RODegree]:
        for stem in range(self.stems[0], self.stems[1] + 1):
            for sig in range(self.sigmas[0], self.sigmas[1] + 1):
                yield RODegree(stem - sig, sig)


_SOLVED = ("u", "a", "w")


def enumerate_free(
    table: GeneratorTable,
    free: Sequence[int],
    und_cap: int,
    weight_cap: Optional[int],
    adams_cap: Optional[int],
    prune: Optional[Callable[[List[int]], bool]] = None,
) -> Iterator[List[int]]:
    """All exponent vectors on ``free`` generators within the given budgets."""
    und = [table._tr[i] + table._sg[i] for i in free]
    wt = [table._wt[i] for i in free]
    ad = [table._ad[i] for i in free]
    for k, i in enumerate(free):
        bounded = und[k] > 0 or (wt[k] > 0 and weight_cap is not None) or (ad[k] > 0 and adams_cap is not None)
        if not bounded:
            raise InfiniteSliceError(f"generator {table.names[i]} is not bounded by the window")
        if und[k] < 0:
            raise InfiniteSliceError(f"generator {table.names[i]} has negative underlying degree")
    cur = [0] * table.size
    n = len(free)

    def rec(k: int, u_left: int, w_left: Optional[int], a_left: Optional[int]) -> Iterator[List[int]]:
        if k == n:
            yield cur
            return
        i = free[k]
        e = 0
        while True:
            cur[i] = e
            if prune is None or e == 0 or not prune(cur):
                yield from rec(k + 1, u_left, w_left, a_left)
            else:
                break
            e += 1
            u_left -= und[k]
            if w_left is not None:
                w_left -= wt[k]
            if a_left is not None:
                a_left -= ad[k]
            if u_left < 0 or (w_left is not None and w_left < 0) or (a_left is not None and a_left < 0):
                break
        cur[i] = 0

    yield from rec(0, und_cap, weight_cap, adams_cap)


def solve_coefficients(
    table: GeneratorTable, rest: RODegree, target: RODegree, a_cap: Optional[int]
) -> Optional[Dict[int, int]]:
    """Exponents of the solved coefficient generators (u or w, and a) reaching ``target``."""
    solved = [table.index[n] for n in _SOLVED if n in table.index]
    dt = target.trivial - rest.trivial
    ds = target.sign - rest.sign
    if not solved:
        return {} if dt == 0 and ds == 0 else None
    if len(solved) == 1:
        i = solved[0]
        t, s = table._tr[i], table._sg[i]
        cands = []
        if t:
            if dt % t:
                return None
            cands.append(dt // t)
        if s:
            if ds % s:
                return None
            cands.append(ds // s)
        if not cands:
            return {} if dt == 0 and ds == 0 else None
        e = cands[0]
        if any(c != e for c in cands) or e * t != dt or e * s != ds:
            return None
        if e < 0 and not table.invertible[i]:
            return None
        if table.names[i] == "a" and a_cap is not None and e > a_cap:
            return None
        return {i: e}
    if len(solved) != 2:
        raise AlgebraError("at most two solved coefficient generators are supported")
    i, j = solved
    t1, s1, t2, s2 = table._tr[i], table._sg[i], table._tr[j], table._sg[j]
    det = t1 * s2 - t2 * s1
    if det == 0:
        raise AlgebraError("solved coefficient degrees are linearly dependent")
    x_num = dt * s2 - t2 * ds
    y_num = t1 * ds - dt * s1
    if x_num % det or y_num % det:
        return None
    x, y = x_num // det, y_num // det
    for g, e in ((i, x), (j, y)):
        if e < 0 and not table.invertible[g]:
            return None
        if table.names[g] == "a" and a_cap is not None and e > a_cap:
            return None
    return {i: x, j: y}


def free_monomials(
    table: GeneratorTable,
    d: RODegree,
    trunc: TruncationWindow,
    adams: Optional[int] = None,
    weight: Optional[int] = None,
    prune_rules: Sequence[Rule] = (),
) -> List[Monomial]:
    """Monomials of RO degree ``d`` in the window, ignoring relations except for pruning."""
    solved = {table.index[n] for n in _SOLVED if n in table.index}
    free = [
        i
        for i in range(table.size)
        if i not in solved and trunc.admits_generator(table.generators[i])
    ]
    a_idx = table.index.get("a")
    a_cap = trunc.a_cap if a_idx is not None else 0
    und_cap = d.underlying + (a_cap if a_idx is not None and table._tr[a_idx] + table._sg[a_idx] < 0 else 0)
    if und_cap < 0:
        return []
    free_set = set(free)
    prunable = [r for r in prune_rules if all(i in free_set for i, _ in r.support)]

    def prune(cur: List[int]) -> bool:
        for r in prunable:
            if all(cur[i] >= e for i, e in r.support):
                return True
        return False

    wcap = trunc.weight_cap if weight is None else min(weight, trunc.weight_cap)
    acap = trunc.adams_cap if adams is None else adams
    out = []
    for cur in enumerate_free(table, free, und_cap, wcap, acap, prune if prunable else None):
        m = tuple(cur)
        if weight is not None and table.weight(m) != weight:
            continue
        if adams is not None and table.adams(m) != adams:
            continue
        sol = solve_coefficients(table, table.ro(m), d, trunc.a_cap)
        if sol is None:
            continue
        full = list(m)
        for i, e in sol.items():
            full[i] = e
        out.append(tuple(full))
    out.sort()
    return out


def basis_slice(
    pres: AlgebraPresentation,
    d: RODegree,
    trunc: TruncationWindow,
    adams: Optional[int] = None,
    weight: Optional[int] = None,
) -> List[Monomial]:
    """Normal-form monomials of RO degree ``d`` inside ``trunc`` (optionally exact Adams/weight)."""
    rw = pres.rewrite
    mons = free_monomials(pres.table, d, trunc, adams, weight, rw.rules)
    return [m for m in mons if rw.is_normal(m)]


# --- text format ------------------------------------------------------------


def _format_degree_line(g: Generator) -> str:
    parts = [g.name, f"degree({g.degree.ro.trivial},{g.degree.ro.sign})"]
    if g.invertible:
        parts.append("invertible")
    if g.degree.adams:
        parts.append(f"adams={g.degree.adams}")
    if g.degree.bockstein:
        parts.append(f"bockstein={g.degree.bockstein}")
    if g.degree.weight:
        parts.append(f"weight={g.degree.weight}")
    return " ".join(parts)


_GEN_LINE = re.compile(r"^(\S+)\s+degree\((-?\d+),(-?\d+)\)((?:\s+\S+)*)$")


@dataclass
class Document:
    """Parsed presentation file: presentation plus named stanzas ``kind gen = rhs``."""

    presentation: AlgebraPresentation
    stanzas: List[Tuple[str, str, str]]


STANZA_KINDS = ("coproduct", "etaR", "coact", "Q0", "Q1")


def parse_document(text: str) -> Document:
    gens: List[Generator] = []
    rel_lines: List[Tuple[str, str]] = []
    stanzas: List[Tuple[str, str, str]] = []
    order: Optional[List[str]] = None
    weights: List[List[str]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _GEN_LINE.match(line)
        if m:
            name = m.group(1)
            t, s = int(m.group(2)), int(m.group(3))
            inv = False
            extra = {"adams": 0, "bockstein": 0, "weight": 0}
            for opt in m.group(4).split():
                if opt == "invertible":
                    inv = True
                elif "=" in opt:
                    k, v = opt.split("=", 1)
                    if k not in extra:
                        raise AlgebraError(f"unknown generator option {k!r}")
                    extra[k] = int(v)
                else:
                    raise AlgebraError(f"unknown generator option {opt!r}")
            gens.append(Generator(name, MultiDegree(RODegree(t, s), **extra), inv))
            continue
        head = line.split(None, 1)[0]
        if head == "order":
            order = [x.strip() for x in line[len("order"):].split(">")]
            continue
        if head == "grade":
            weights.append(line.split()[1:])
            continue
        if head in STANZA_KINDS:
            body = line[len(head):]
            lhs, rhs = body.split("=", 1)
            stanzas.append((head, lhs.strip(), rhs.strip()))
            continue
        if "=" not in line:
            raise AlgebraError(f"cannot parse line {raw!r}")
        lhs, rhs = line.split("=", 1)
        rel_lines.append((lhs.strip(), rhs.strip()))
    table = GeneratorTable(gens)
    rels = [add(table.parse_element(l), table.parse_element(r)) for l, r in rel_lines]
    return Document(AlgebraPresentation(table, rels, order, weights=weights), stanzas)


def parse_presentation(text: str) -> AlgebraPresentation:
    doc = parse_document(text)
    if doc.stanzas:
        raise AlgebraError("presentation text contains stanzas; use parse_document")
    return doc.presentation


def format_presentation(pres: AlgebraPresentation, stanzas: Sequence[Tuple[str, str, str]] = ()) -> str:
    lines = [_format_degree_line(g) for g in pres.table.generators]
    for w in pres.weights:
        lines.append("grade " + " ".join(w))
    if pres.order_names is not None:
        lines.append("order " + " > ".join(pres.order_names))
    for rel in pres.relations:
        lead = pres.order.lead(rel)
        lines.append(f"{pres.table.format_monomial(lead)} = {pres.table.format_element(rel - {lead})}")
    for kind, gen, rhs in stanzas:
        lines.append(f"{kind} {gen} = {rhs}")
    return "\n".join(lines) + "\n"


def generators_from_names(names: Iterable[str], invertible: Iterable[str] = ("u",), appendix_k: int = 0) -> GeneratorTable:
    from .grading import degree_of_generator

    inv = set(invertible)
    return GeneratorTable(
        [Generator(n, degree_of_generator(n, appendix_k), n in inv) for n in names]
    )
