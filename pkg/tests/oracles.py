"""Independent reference computations used to check the library.

Nothing here imports the package's linear algebra, rewriting or enumeration code.
Degrees are hard-coded from the generator formulas rather than read from
``rhoext.grading`` so that a grading bug cannot hide behind a matching oracle.
"""

from __future__ import annotations

import itertools
import random
from typing import Dict, Iterable, List, Sequence, Tuple

Mono = Tuple[int, ...]


# --- dense GF(2) elimination on lists of 0/1 rows -----------------------------------


def dense_rank(rows: Iterable[Sequence[int]]) -> int:
    mat = [list(r) for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                mat[i] = [x ^ y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def span_size(vectors: Iterable[int]) -> int:
    """Size of the GF(2) span by closure, for tiny inputs."""
    span = {0}
    for v in vectors:
        span |= {x ^ v for x in span}
    return len(span)


def to_dense(v: int, n: int) -> List[int]:
    return [(v >> i) & 1 for i in range(n)]


# --- random-order one-step rewriting ------------------------------------------------


def random_rewrite(poly: Dict[Mono, int], rules: List[Tuple[Mono, Dict[Mono, int]]], seed: int, limit: int = 10_000) -> frozenset:
    """Apply ``lead -> tail`` rules one divisor at a time, choosing terms and rules at random.

    ``poly`` and each tail map monomials to 1 (GF(2) coefficients). Exponent
    vectors may be negative for Laurent generators; divisibility is checked only
    on the coordinates where the lead is positive.
    """
    rng = random.Random(seed)
    cur = {m for m, c in poly.items() if c % 2}
    for _ in range(limit):
        options = []
        for m in cur:
            for lead, tail in rules:
                if all(l <= 0 or x >= l for x, l in zip(m, lead)):
                    options.append((m, lead, tail))
        if not options:
            return frozenset(cur)
        m, lead, tail = rng.choice(sorted(options))
        cur ^= {m}
        quot = tuple(x - l for x, l in zip(m, lead))
        for t in tail:
            cur ^= {tuple(a + b for a, b in zip(quot, t))}
    raise RuntimeError("rewriting did not terminate")


# --- E1 of the Bockstein spectral sequence, from scratch ---------------------------


class E1Model:
    """Monomials t0, e_1..e_K, v_0..v_N, a, u with relations t0^2 = u e1 and r_j = 0.

    Each generator carries (trivial, sign, adams, weight). Slices are keyed by
    (stem, sign, adams, weight, a-exponent) exactly as in the library.
    """

    def __init__(self, v_cap: int, e_cap: int):
        self.names: List[str] = ["t0"] + [f"e{k}" for k in range(1, e_cap + 1)] + [f"v{j}" for j in range(v_cap + 1)]
        self.deg: Dict[str, Tuple[int, int, int, int]] = {"t0": (1, 0, 0, 1)}
        for k in range(1, e_cap + 1):
            n = (1 << k) - 1
            self.deg[f"e{k}"] = (n, n, 0, 1 << k)
        for j in range(v_cap + 1):
            n = (1 << j) - 1
            self.deg[f"v{j}"] = (n, n, 1, 0)
        self.v_cap = v_cap
        self.e_cap = e_cap
        # full monomial = exponents over names + (a, u)
        self.size = len(self.names) + 2
        self.ia = len(self.names)
        self.iu = self.ia + 1

    def rests(self, und: int, s: int, w: int) -> List[Mono]:
        out = []
        boxes = []
        for name in self.names:
            t, g, ad, wt = self.deg[name]
            caps = [und // (t + g) if t + g else und]
            if ad:
                caps.append(s // ad)
            if wt:
                caps.append(w // wt)
            boxes.append(range(min(caps) + 1 if name != "v0" else s + 1))
        for exps in itertools.product(*boxes):
            tot = [0, 0, 0, 0]
            for e, name in zip(exps, self.names):
                for i, x in enumerate(self.deg[name]):
                    tot[i] += e * x
            if tot[0] + tot[1] == und and tot[2] == s and tot[3] == w:
                out.append(tuple(exps))
        return out

    def slice(self, key) -> List[Mono]:
        stem, sigma, s, w, e = key
        if e < 0 or s < 0 or w < 0:
            return []
        trivial = stem - sigma
        out = []
        for r in self.rests(stem + e, s, w):
            rt = sum(x * self.deg[n][0] for x, n in zip(r, self.names))
            out.append(r + (e, trivial - rt))
        return out

    def relations(self) -> List[Dict[Mono, int]]:
        """Relations as dicts, including the u-exponent as a free Laurent coordinate."""
        z = [0] * self.size
        rels = []
        t0sq = list(z)
        t0sq[0] = 2
        ue1 = list(z)
        ue1[self.names.index("e1")] = 1
        ue1[self.iu] = 1
        rels.append({tuple(t0sq): 1, tuple(ue1): 1})
        for j in range(1, self.e_cap + 1):
            r = {}
            for i in range(0, min(j, self.v_cap + 1)):
                m = list(z)
                m[self.names.index(f"e{j - i}")] = 1 << i
                m[self.names.index(f"v{i}")] += 1
                r[tuple(m)] = 1
            rels.append(r)
        return rels

    def relation_key(self, rel: Dict[Mono, int]):
        m = next(iter(rel))
        return self.key_of(m)

    def key_of(self, m: Mono):
        t = g = s = w = 0
        for x, n in zip(m, self.names):
            dt, dg, ds, dw = self.deg[n]
            t += x * dt
            g += x * dg
            s += x * ds
            w += x * dw
        e, u = m[self.ia], m[self.iu]
        t += u
        g -= u + e
        return (t + g, g, s, w, e)

    def ideal_vectors(self, key, index: Dict[Mono, int]) -> List[int]:
        stem, sigma, s, w, e = key
        out = []
        for rel in self.relations():
            rk = self.relation_key(rel)
            qkey = (stem - rk[0], sigma - rk[1], s - rk[2], w - rk[3], e - rk[4])
            for q in self.slice(qkey):
                v = 0
                for m in rel:
                    prod = tuple(a + b for a, b in zip(q, m))
                    v ^= 1 << index[prod]
                out.append(v)
        return out

    def d1(self, m: Mono) -> List[Mono]:
        if m[self.iu] % 2 == 0:
            return []
        x = list(m)
        x[self.iu] -= 1
        x[self.ia] += 1
        x[self.names.index("v0")] += 1
        return [tuple(x)]

    def quotient_dim(self, key) -> int:
        mons = self.slice(key)
        index = {m: i for i, m in enumerate(mons)}
        ideal = self.ideal_vectors(key, index)
        return len(mons) - dense_rank(to_dense(v, len(mons)) for v in ideal)

    def _induced_rank(self, src_key, tgt_key) -> int:
        src = self.slice(src_key)
        tgt = self.slice(tgt_key)
        if not src or not tgt:
            return 0
        index = {m: i for i, m in enumerate(tgt)}
        ideal = self.ideal_vectors(tgt_key, index)
        images = []
        for m in src:
            v = 0
            for t in self.d1(m):
                v ^= 1 << index[t]
            images.append(v)
        n = len(tgt)
        base = dense_rank(to_dense(v, n) for v in ideal)
        return dense_rank(to_dense(v, n) for v in ideal + images) - base

    def homology_d1(self, key) -> int:
        stem, sigma, s, w, e = key
        out_key = (stem - 1, sigma, s + 1, w, e + 1)
        in_key = (stem + 1, sigma, s - 1, w, e - 1)
        return self.quotient_dim(key) - self._induced_rank(key, out_key) - self._induced_rank(in_key, key)


# --- classical dual Steenrod coproduct ----------------------------------------------


def milnor_coproduct_terms(k: int) -> List[Tuple[int, int, int]]:
    """Terms (i, j, power) of xi_k -> sum xi_i^(2^j) (x) xi_j with i + j = k, xi_0 = 1."""
    return [(k - j, j, 1 << j) for j in range(k + 1)]
