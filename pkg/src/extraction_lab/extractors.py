"""Two-source extractor evaluation: the deor family and the inner product.

Evaluators are pure functions on bit tuples, exposed both for exhaustive
combinatorial loops and (through cq_states.apply_classical_function and
the output-state builders) as classical channels on cq-states.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .gf2 import Bits, MatrixFamily, gf2_matvec


def ip_eval(x: Bits, y: Bits) -> int:
    """Inner product modulo 2."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    return sum(a & b for a, b in zip(x, y)) & 1


def deor_eval(family: MatrixFamily, x: Bits, y: Bits) -> Bits:
    """Output bits ((A_1 x) . y, ..., (A_m x) . y)."""
    if len(x) != family.n or len(y) != family.n:
        raise ValueError(f"inputs must be {family.n}-bit strings")
    return tuple(ip_eval(gf2_matvec(mat, x), y) for mat in family.matrices)


@dataclass(frozen=True)
class ExtractorSpec:
    """An evaluator with declared input/output lengths.

    kind "deor" requires a matrix family with n1 = n2 = family.n and
    m = family.m; kind "ip" is the single-bit inner product.
    """

    kind: str
    n1: int
    n2: int
    m: int
    family: MatrixFamily | None = None

    def __post_init__(self):
        if self.kind == "deor":
            if self.family is None:
                raise ValueError("deor extractor requires a matrix family")
            if self.n1 != self.family.n or self.n2 != self.family.n or self.m != self.family.m:
                raise ValueError("deor extractor lengths must match its family")
        elif self.kind == "ip":
            if self.n1 != self.n2 or self.m != 1:
                raise ValueError("ip extractor needs n1 = n2 and m = 1")
        else:
            raise ValueError(f"unknown extractor kind {self.kind!r}")

    def __call__(self, x: Bits, y: Bits) -> Bits:
        if self.kind == "deor":
            return deor_eval(self.family, x, y)
        return (ip_eval(x, y),)

    @property
    def r(self) -> int:
        return self.family.r if self.family is not None else 0


def deor_extractor(family: MatrixFamily) -> ExtractorSpec:
    return ExtractorSpec(kind="deor", n1=family.n, n2=family.n, m=family.m, family=family)


def ip_extractor(n: int) -> ExtractorSpec:
    return ExtractorSpec(kind="ip", n1=n, n2=n, m=1)


@dataclass(frozen=True)
class ComponentExtractor:
    """Single output bit s . deor(x, y), itself a two-source evaluator.

    Satisfies s . deor(x, y) = IP(x, A_s^T y) for every input pair.
    """

    family: MatrixFamily
    s: Bits

    def __post_init__(self):
        if len(self.s) != self.family.m:
            raise ValueError(f"selector must have length m={self.family.m}")
        if not any(self.s):
            raise ValueError("selector s = 0 does not define an extractor bit")

    @property
    def n1(self) -> int:
        return self.family.n

    @property
    def n2(self) -> int:
        return self.family.n

    @property
    def m(self) -> int:
        return 1

    def __call__(self, x: Bits, y: Bits) -> Bits:
        out = deor_eval(self.family, x, y)
        return (sum(si & oi for si, oi in zip(self.s, out)) & 1,)


def s_component(family: MatrixFamily, s: Bits) -> ComponentExtractor:
    return ComponentExtractor(family=family, s=tuple(s))


def two_universality_collision_prob(x: Bits, xp: Bits) -> Fraction:
    """Exact Pr over uniform y that y . x = y . x', as a rational.

    Equals 1/2 for every pair x != x'.
    """
    if len(x) != len(xp):
        raise ValueError("inputs must have equal length")
    if tuple(x) == tuple(xp):
        raise ValueError("collision probability requires x != x'")
    n = len(x)
    if n > 20:
        raise ValueError("exhaustive enumeration capped at n <= 20")
    hits = 0
    for idx in range(1 << n):
        y = tuple((idx >> (n - 1 - i)) & 1 for i in range(n))
        if ip_eval(y, x) == ip_eval(y, xp):
            hits += 1
    return Fraction(hits, 1 << n)
