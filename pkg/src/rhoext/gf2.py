"""Exact linear algebra over GF(2) on int bitsets.

A vector is a Python int whose bit ``i`` is the coordinate on basis index ``i``.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Sequence, Tuple


class Echelon:
    """Incrementally maintained reduced row-echelon form.

    Pivots are the highest set bit of each stored row.
    """

    __slots__ = ("rows", "tags")

    def __init__(self) -> None:
        self.rows: Dict[int, int] = {}
        self.tags: Dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v: int) -> int:
        return self.reduce_tagged(v, 0)[0]

    def reduce_tagged(self, v: int, tag: int) -> Tuple[int, int]:
        """Reduce ``v`` while tracking which inserted vectors were used."""
        rows, tags = self.rows, self.tags
        out = 0
        while v:
            p = v.bit_length() - 1
            r = rows.get(p)
            if r is None:
                out |= 1 << p
                v ^= 1 << p
            else:
                v ^= r
                tag ^= tags[p]
        return out, tag

    def add(self, v: int, tag: int = 0) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        v, tag = self.reduce_tagged(v, tag)
        if not v:
            return False
        p = v.bit_length() - 1
        self.rows[p] = v
        self.tags[p] = tag
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def express(self, v: int) -> int | None:
        """Tag combination producing ``v``, or None if ``v`` is outside the span."""
        rest, tag = self.reduce_tagged(v, 0)
        return None if rest else tag


def rank(rows: Iterable[int]) -> int:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return len(ech)


def kernel(images: Sequence[int]) -> List[int]:
    """Basis of the kernel of the map sending basis vector ``i`` to ``images[i]``.

    Kernel vectors are returned as bitsets over the source indices.
    """
    ech = Echelon()
    out: List[int] = []
    for i, img in enumerate(images):
        rest, tag = ech.reduce_tagged(img, 1 << i)
        if rest:
            p = rest.bit_length() - 1
            ech.rows[p] = rest
            ech.tags[p] = tag
        else:
            out.append(tag)
    return out


def image_basis(images: Sequence[int]) -> Echelon:
    ech = Echelon()
    for img in images:
        ech.add(img)
    return ech


def solve(images: Sequence[int], target: int) -> int | None:
    """Find a source vector ``x`` with ``A x = target``, where column ``i`` of A is ``images[i]``."""
    ech = Echelon()
    for i, img in enumerate(images):
        ech.add(img, 1 << i)
    return ech.express(target)


def bits(v: int) -> List[int]:
    out = []
    while v:
        low = v & -v
        out.append(low.bit_length() - 1)
        v ^= low
    return out


def popcount(v: int) -> int:
    return bin(v).count("1")
