"""RO(C2) degrees and the auxiliary filtrations carried alongside them."""

from __future__ import annotations

import re
from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class RODegree:
    """A degree ``trivial + sign * sigma`` in RO(C2)."""

    trivial: int = 0
    sign: int = 0

    def __add__(self, other: RODegree) -> RODegree:
        return RODegree(self.trivial + other.trivial, self.sign + other.sign)

    def __sub__(self, other: RODegree) -> RODegree:
        return RODegree(self.trivial - other.trivial, self.sign - other.sign)

    def __neg__(self) -> RODegree:
        return RODegree(-self.trivial, -self.sign)

    def scale(self, k: int) -> RODegree:
        return RODegree(k * self.trivial, k * self.sign)

    @property
    def underlying(self) -> int:
        return self.trivial + self.sign

    @property
    def fixed(self) -> int:
        return self.trivial

    @property
    def coweight(self) -> int:
        return self.trivial - self.sign

    def rho_shape(self) -> tuple[int, int] | None:
        """Return ``(k, j)`` when this degree is ``k*rho + j`` with ``j`` in {0, 1}."""
        j = self.trivial - self.sign
        if j in (0, 1):
            return self.sign, j
        return None

    def __str__(self) -> str:
        return f"({self.trivial},{self.sign})"


ZERO_RO = RODegree(0, 0)
RHO = RODegree(1, 1)
SIGMA = RODegree(0, 1)


def rho(k: int) -> RODegree:
    return RODegree(k, k)


@dataclass(frozen=True, order=True)
class MultiDegree:
    """RO degree plus Adams filtration, a-adic (Bockstein) filtration and Snaith weight."""

    ro: RODegree = ZERO_RO
    adams: int = 0
    bockstein: int = 0
    weight: int = 0

    def __add__(self, other: MultiDegree) -> MultiDegree:
        return MultiDegree(
            self.ro + other.ro,
            self.adams + other.adams,
            self.bockstein + other.bockstein,
            self.weight + other.weight,
        )

    def scale(self, k: int) -> MultiDegree:
        return MultiDegree(self.ro.scale(k), k * self.adams, k * self.bockstein, k * self.weight)


ZERO = MultiDegree()


class UnknownGenerator(KeyError):
    pass


_FAMILY = re.compile(r"^(tau|cxi|xi|v|t|e|x)(\d+)$")


def degree_of_generator(name: str, appendix_k: int = 0) -> MultiDegree:
    """Multidegree of a registered generator.

    Families: ``a``, ``u``, ``v<i>``, ``t<n>``, ``e<k>``, ``tau<i>``, ``xi<i>`` (equivariant),
    ``cxi<i>`` (classical dual Steenrod), ``x<i>`` (classical loop-space generators),
    ``w`` (appendix ring unit, depends on ``appendix_k``) and the unit ``1``.
    ``e0`` is the appendix ring generator standing in for ``t0``.
    """
    if name == "1":
        return ZERO
    if name == "a":
        return MultiDegree(RODegree(0, -1), bockstein=1)
    if name == "u":
        return MultiDegree(RODegree(1, -1))
    if name == "w":
        p = 1 << appendix_k
        return MultiDegree(RODegree(p, -p))
    m = _FAMILY.match(name)
    if not m:
        raise UnknownGenerator(name)
    fam, idx = m.group(1), int(m.group(2))
    p = 1 << idx
    if fam == "v":
        return MultiDegree(rho(p - 1), adams=1)
    if fam == "t":
        return MultiDegree(RODegree(p, p - 1), weight=p)
    if fam == "e":
        if idx == 0:
            return MultiDegree(RODegree(1, 0), weight=1)
        return MultiDegree(rho(p - 1), weight=p)
    if fam == "tau":
        return MultiDegree(RODegree(p, p - 1))
    if fam == "xi":
        if idx == 0:
            raise UnknownGenerator(name)
        return MultiDegree(rho(p - 1))
    if fam == "cxi":
        if idx == 0:
            raise UnknownGenerator(name)
        return MultiDegree(RODegree(p - 1, 0))
    if fam == "x":
        if idx == 0:
            raise UnknownGenerator(name)
        return MultiDegree(RODegree(p - 1, 0), weight=p >> 1)
    raise UnknownGenerator(name)  # pragma: no cover
