"""
Habiro adjacency on the schematic points [n] and on roots of unity, the
basic opens U_m, and the witness that the opens have no finite subcover.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, List, NamedTuple, Optional, Set, Tuple

from sympy import isprime

from .errors import DomainError
from .exact_arith import factorize_any, prime_power_base, valuation
from .smirnov_cover import INFINITY, ZERO, P1Point

logger = logging.getLogger(__name__)

BASIC = "basic"
COFINITE = "cofinite"


@dataclass(frozen=True)
class RootOfUnity:
    """exp(2 pi i g/h) as the element g/h of Q/Z"""

    g: int
    h: int

    def __post_init__(self):
        if self.h < 1:
            raise DomainError(f"root of unity needs h >= 1, got {self.h}")
        if not 0 <= self.g < self.h or math.gcd(self.g, self.h) != 1:
            raise DomainError(f"{self.g}/{self.h} is not reduced in [0, 1)")

    @classmethod
    def of(cls, value) -> "RootOfUnity":
        q = Fraction(value) % 1
        return cls(q.numerator, q.denominator)

    @classmethod
    def parse(cls, text: str) -> "RootOfUnity":
        try:
            return cls.of(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"cannot read a root of unity from {text!r}") from e

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.g, self.h)

    @property
    def order(self) -> int:
        return self.h

    def __add__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity.of(self.fraction + other.fraction)

    def __neg__(self) -> "RootOfUnity":
        return RootOfUnity.of(-self.fraction)

    def __sub__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity.of(self.fraction - other.fraction)

    def scale(self, u: int) -> "RootOfUnity":
        """u * (g/h), the Galois conjugate when gcd(u, h) = 1"""
        return RootOfUnity.of(u * self.fraction)

    def to_complex(self) -> complex:
        angle = 2 * math.pi * self.g / self.h
        return complex(math.cos(angle), math.sin(angle))

    def __str__(self):
        return f"{self.g}/{self.h}"


def adjacent(m: int, n: int) -> bool:
    """m != n and max/min is a power p^a (a >= 1) of one prime"""
    if m < 1 or n < 1:
        raise DomainError(f"adjacent: indices must be positive, got ({m}, {n})")
    big, small = max(m, n), min(m, n)
    return big != small and big % small == 0 and prime_power_base(big // small) is not None


def adjacent_roots(x: RootOfUnity, y: RootOfUnity) -> bool:
    """x != y and x - y has prime power order in Q/Z"""
    return x != y and prime_power_base((x - y).order) is not None


def connecting_prime(x: RootOfUnity, y: RootOfUnity) -> Optional[int]:
    if x == y:
        return None
    return prime_power_base((x - y).order)


@dataclass(frozen=True)
class HabiroOpenDescriptor:
    """A basic open U_m or a cofinite set, plus optional [0] and [infinity]"""

    kind: str = BASIC
    m: int = 1
    excluded: FrozenSet[int] = field(default_factory=frozenset)
    include_zero: bool = False
    include_infinity: bool = False

    def __post_init__(self):
        if self.kind == BASIC:
            if self.m < 1:
                raise DomainError(f"U_m needs m >= 1, got {self.m}")
        elif self.kind == COFINITE:
            object.__setattr__(self, "excluded", frozenset(int(n) for n in self.excluded))
            if any(n < 1 for n in self.excluded):
                raise DomainError("excluded indices must be positive")
        else:
            raise DomainError(f"unknown open kind {self.kind!r}")
        # (p, k, p^(k+1)) for m = prod p^k
        conditions = tuple((p, k, p ** (k + 1)) for p, k in factorize_any(self.m)) if self.kind == BASIC else ()
        object.__setattr__(self, "_conditions", conditions)

    @classmethod
    def basic(cls, m: int, zero: bool = False, infinity: bool = False) -> "HabiroOpenDescriptor":
        return cls(BASIC, m, frozenset(), zero, infinity)

    @classmethod
    def cofinite(cls, excluded, zero: bool = False, infinity: bool = False) -> "HabiroOpenDescriptor":
        return cls(COFINITE, 1, frozenset(excluded), zero, infinity)

    def contains_index(self, n: int) -> bool:
        if self.kind == COFINITE:
            return n not in self.excluded
        for p, _, bound in self._conditions:
            if n % p == 0 and n % bound != 0:
                return False
        return True

    def contains(self, pt: P1Point) -> bool:
        if pt.tag == ZERO.tag:
            return self.include_zero
        if pt.tag == INFINITY.tag:
            return self.include_infinity
        return self.contains_index(pt.n)

    def to_json(self):
        data = {"kind": self.kind}
        if self.kind == BASIC:
            data["m"] = self.m
        else:
            data["excluded"] = sorted(self.excluded)
        data["zero"] = self.include_zero
        data["infinity"] = self.include_infinity
        return data

    @classmethod
    def from_json(cls, data) -> "HabiroOpenDescriptor":
        zero = bool(data.get("zero", False))
        infinity = bool(data.get("infinity", False))
        kind = data.get("kind", BASIC)
        if kind == BASIC:
            return cls.basic(int(data["m"]), zero, infinity)
        if kind == COFINITE:
            return cls.cofinite(data.get("excluded", []), zero, infinity)
        raise DomainError(f"unknown open kind {kind!r}")

    def __str__(self):
        base = f"U_{self.m}" if self.kind == BASIC else f"cofinite minus {sorted(self.excluded)}"
        extras = [s for s, on in (("[0]", self.include_zero), ("[∞]", self.include_infinity)) if on]
        return base + (" ∪ {" + ", ".join(extras) + "}" if extras else "")


def in_open(open_set: HabiroOpenDescriptor, pt: P1Point) -> bool:
    return open_set.contains(pt)


def intersect_basic(m: int, n: int) -> int:
    """U_m ∩ U_n = U_lcm(m, n)"""
    if m < 1 or n < 1:
        raise DomainError(f"intersect_basic: indices must be positive, got ({m}, {n})")
    return math.lcm(m, n)


def escaping_neighbors(m: int, n: int) -> Set[int]:
    """Indices adjacent to [n] in U_m that fall outside U_m.

    With m = prod p_i^k_i, only a change of the p_i-adic valuation of n to
    some v in 1..k_i can leave U_m, so the candidates are n * p_i^(v - v_p(n)).
    """
    if not HabiroOpenDescriptor.basic(m).contains_index(n):
        raise DomainError(f"[{n}] is not in U_{m}")
    escaping = set()
    for p, k in factorize_any(m):
        current = valuation(n, p)
        for v in range(1, k + 1):
            if v == current:
                continue
            escaping.add(n * p**v // p**current if v > current else n // p ** (current - v))
    return escaping


def complement_of_U_p(p: int, bound: int) -> Set[P1Point]:
    """Points of P^1 outside U_p: [n] with p exactly dividing n, plus [0] and [infinity]"""
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    points: Set[P1Point] = {ZERO, INFINITY}
    for n in range(p, bound + 1, p):
        if n % (p * p) != 0:
            points.add(P1Point.finite(n))
    return points


def noncompactness_witness(primes: List[int]) -> int:
    """[p_1...p_k] avoids every U_{p_i} ∪ {[0], [infinity]} in the list"""
    if not primes:
        raise DomainError("noncompactness_witness needs at least one prime")
    if len(set(primes)) != len(primes):
        raise DomainError(f"primes must be distinct: {primes}")
    for p in primes:
        if not isprime(p):
            raise DomainError(f"{p} is not prime")

    witness = math.prod(primes)
    point = P1Point.finite(witness)
    for p in primes:
        if HabiroOpenDescriptor.basic(p, zero=True, infinity=True).contains(point):
            raise AssertionError(f"[{witness}] unexpectedly lies in U_{p}")
    logger.debug(f"[{witness}] lies outside U_p for p in {primes}")
    return witness


class WheelEdge(NamedTuple):
    x: RootOfUnity
    y: RootOfUnity
    prime: int


def wheel_vertices(N: int) -> List[RootOfUnity]:
    if N < 2:
        raise DomainError(f"adjacency_wheel needs N >= 2, got {N}")
    return [RootOfUnity.of(Fraction(g, N)) for g in range(N)]


def adjacency_wheel(N: int) -> List[WheelEdge]:
    """Adjacent pairs among the N-th roots of unity, labeled by their prime"""
    vertices = wheel_vertices(N)
    edges = []
    for i, x in enumerate(vertices):
        for y in vertices[i + 1:]:
            p = connecting_prime(x, y)
            if p is not None:
                edges.append(WheelEdge(x, y, p))
    logger.info(f"Adjacency wheel on μ_{N}: {len(edges)} edges")
    return edges


def wheel_layout(N: int) -> List[Tuple[RootOfUnity, float, float]]:
    """Vertex positions on the unit circle"""
    return [(x, x.to_complex().real, x.to_complex().imag) for x in wheel_vertices(N)]
