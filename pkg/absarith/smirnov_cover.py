"""
Smirnov's covers q = a/b from the completed Spec(Z) to P^1 over F_1.

A prime p goes to [0] when p | a, to [infinity] when p | b, and otherwise to
[n] with n the multiplicative order of a/b mod p. The archimedean point goes
to [0] when |a| < |b| and to [infinity] otherwise.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, FrozenSet, List, Mapping, Optional, Tuple

from sympy import isprime, primerange

from .config import config
from .errors import DomainError, IncompleteFactorizationError
from .exact_arith import (
    euler_phi,
    factorize_any,
    homogeneous_cyclotomic,
    multiplicative_order,
    powerful_part,
    prime_factors,
    radical,
    valuation,
)

if TYPE_CHECKING:
    from .habiro_topology import HabiroOpenDescriptor

logger = logging.getLogger(__name__)

ZERO_TAG = "zero"
INFINITY_TAG = "infinity"
FINITE_TAG = "finite"
PRIME_TAG = "prime"


@dataclass(frozen=True)
class RationalMap:
    """The cover q = a/b, kept in lowest terms with b >= 1"""

    a: int
    b: int

    def __post_init__(self):
        if self.b < 1:
            raise DomainError(f"denominator must be positive, got {self.b}")
        if math.gcd(self.a, self.b) != 1:
            raise DomainError(f"{self.a}/{self.b} is not reduced")
        if self.b == 1 and self.a in (0, 1, -1):
            raise DomainError(f"q = {self.a} is an F_1-constant, not a cover")

    @classmethod
    def of(cls, value) -> "RationalMap":
        q = Fraction(value)
        return cls(q.numerator, q.denominator)

    @classmethod
    def parse(cls, text: str) -> "RationalMap":
        try:
            return cls.of(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"cannot read a rational map from {text!r}: {e}") from e

    @property
    def value(self) -> Fraction:
        return Fraction(self.a, self.b)

    def residue(self, p: int) -> int:
        """a * b^-1 mod p for p not dividing ab"""
        return self.a * pow(self.b, -1, p) % p

    def __str__(self):
        return f"{self.a}/{self.b}"


@dataclass(frozen=True)
class P1Point:
    """Schematic point of P^1 over F_1: [0], [infinity] or [n]"""

    tag: str
    n: Optional[int] = None

    def __post_init__(self):
        if self.tag == FINITE_TAG:
            if self.n is None or self.n < 1:
                raise DomainError(f"finite point needs n >= 1, got {self.n}")
        elif self.tag in (ZERO_TAG, INFINITY_TAG):
            if self.n is not None:
                raise DomainError(f"[{self.tag}] carries no index")
        else:
            raise DomainError(f"unknown point tag {self.tag!r}")

    @classmethod
    def finite(cls, n: int) -> "P1Point":
        return cls(FINITE_TAG, n)

    @classmethod
    def parse(cls, text: str) -> "P1Point":
        token = text.strip().strip("[]").lower()
        if token in ("0", "zero"):
            return ZERO
        if token in ("inf", "infinity", "oo", "∞"):
            return INFINITY
        try:
            return cls.finite(int(token))
        except ValueError as e:
            raise DomainError(f"cannot read a point from {text!r}") from e

    @property
    def is_finite(self) -> bool:
        return self.tag == FINITE_TAG

    def sort_key(self):
        return {ZERO_TAG: (0, 0), FINITE_TAG: (1, self.n or 0), INFINITY_TAG: (2, 0)}[self.tag]

    def to_json(self):
        if self.is_finite:
            return self.n
        return "0" if self.tag == ZERO_TAG else "inf"

    def __str__(self):
        if self.is_finite:
            return f"[{self.n}]"
        return "[0]" if self.tag == ZERO_TAG else "[∞]"


ZERO = P1Point(ZERO_TAG)
INFINITY = P1Point(INFINITY_TAG)


def point_degree(pt: P1Point) -> int:
    """phi(n) for [n]; [0] and [infinity] have degree one"""
    return euler_phi(pt.n) if pt.is_finite else 1


@dataclass(frozen=True)
class SpecZPoint:
    """A prime p or the archimedean point of the completed Spec(Z)"""

    tag: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.tag == PRIME_TAG:
            if self.p is None or not isprime(self.p):
                raise DomainError(f"{self.p} is not prime")
        elif self.tag != INFINITY_TAG:
            raise DomainError(f"unknown Spec(Z) tag {self.tag!r}")

    @classmethod
    def prime(cls, p: int) -> "SpecZPoint":
        return cls(PRIME_TAG, p)

    @property
    def is_prime(self) -> bool:
        return self.tag == PRIME_TAG

    def sort_key(self):
        return (1, 0) if not self.is_prime else (0, self.p)

    def __str__(self):
        return str(self.p) if self.is_prime else "∞"


ARCHIMEDEAN = SpecZPoint(INFINITY_TAG)


@dataclass(frozen=True)
class FormalDegree:
    """Integer combination of the symbols log p and the constant 1"""

    logs: Mapping[int, int] = field(default_factory=dict)
    const: int = 0

    def __post_init__(self):
        canonical = {int(p): int(c) for p, c in sorted(self.logs.items()) if c}
        object.__setattr__(self, "logs", canonical)

    def __hash__(self):
        return hash((tuple(self.logs.items()), self.const))

    def __add__(self, other: "FormalDegree") -> "FormalDegree":
        logs = dict(self.logs)
        for p, c in other.logs.items():
            logs[p] = logs.get(p, 0) + c
        return FormalDegree(logs, self.const + other.const)

    def __neg__(self) -> "FormalDegree":
        return FormalDegree({p: -c for p, c in self.logs.items()}, -self.const)

    def __sub__(self, other: "FormalDegree") -> "FormalDegree":
        return self + (-other)

    def scale(self, k: int) -> "FormalDegree":
        return FormalDegree({p: k * c for p, c in self.logs.items()}, k * self.const)

    def is_zero(self) -> bool:
        return not self.logs and self.const == 0

    def value(self) -> float:
        return sum(c * math.log(p) for p, c in self.logs.items()) + self.const

    def to_json(self):
        return {"logs": {str(p): c for p, c in self.logs.items()}, "const": self.const}

    @classmethod
    def from_json(cls, data) -> "FormalDegree":
        return cls({int(p): int(c) for p, c in data.get("logs", {}).items()}, int(data.get("const", 0)))

    @classmethod
    def log_of(cls, n: int) -> "FormalDegree":
        """log |n| expanded over prime logs"""
        return cls({p: e for p, e in factorize_any(abs(n))})

    def __str__(self):
        parts = [f"{c}·log{p}" for p, c in self.logs.items()]
        if self.const or not parts:
            parts.append(str(self.const))
        return " + ".join(parts)


@dataclass(frozen=True)
class FormalDivisor:
    """Sum of c_p [p] over primes plus a formal coefficient at infinity"""

    points: Mapping[int, int] = field(default_factory=dict)
    infinity: FormalDegree = field(default_factory=FormalDegree)

    def __post_init__(self):
        object.__setattr__(self, "points", {int(p): int(c) for p, c in sorted(self.points.items()) if c})

    def __hash__(self):
        return hash((tuple(self.points.items()), self.infinity))

    def __add__(self, other: "FormalDivisor") -> "FormalDivisor":
        points = dict(self.points)
        for p, c in other.points.items():
            points[p] = points.get(p, 0) + c
        return FormalDivisor(points, self.infinity + other.infinity)

    def to_json(self):
        return {
            "points": [{"p": p, "c": c} for p, c in self.points.items()],
            "infinity": self.infinity.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "FormalDivisor":
        points = {int(item["p"]): int(item["c"]) for item in data.get("points", [])}
        return cls(points, FormalDegree.from_json(data.get("infinity", {})))


@dataclass(frozen=True)
class DefectRatio:
    """An exact defect numerator / log-degree pair"""

    numerator: FormalDegree
    denominator: FormalDegree

    def value(self) -> float:
        return self.numerator.value() / self.denominator.value()


def evaluate(q: RationalMap, x: SpecZPoint) -> P1Point:
    """Image of a point of the completed Spec(Z) under q"""
    if not x.is_prime:
        return ZERO if abs(q.a) < abs(q.b) else INFINITY
    p = x.p
    if q.a % p == 0:
        return ZERO
    if q.b % p == 0:
        return INFINITY
    return P1Point.finite(multiplicative_order(q.residue(p), p))


def primitive_part(q: RationalMap, n: int) -> int:
    """Part of a^n - b^n made of primes where a/b has order exactly n.

    Every such prime divides Phi_n(a, b); the other primes dividing it divide n,
    so stripping those leaves the fiber over [n] with its ramification.
    """
    if n < 1:
        raise DomainError(f"primitive_part: n = {n} < 1")
    value = abs(homogeneous_cyclotomic(n, q.a, q.b))
    for p in prime_factors(n):
        while value % p == 0:
            value //= p
    return value


def fiber(q: RationalMap, target: P1Point, max_steps: Optional[int] = None) -> FrozenSet[SpecZPoint]:
    """All points of the completed Spec(Z) mapped to target"""
    if target.tag == ZERO_TAG:
        points = {SpecZPoint.prime(p) for p in prime_factors(abs(q.a))} if abs(q.a) > 1 else set()
        if abs(q.a) < abs(q.b):
            points.add(ARCHIMEDEAN)
        return frozenset(points)

    if target.tag == INFINITY_TAG:
        points = {SpecZPoint.prime(p) for p in prime_factors(q.b)} if q.b > 1 else set()
        if abs(q.a) > abs(q.b):
            points.add(ARCHIMEDEAN)
        return frozenset(points)

    part = primitive_part(q, target.n)
    if part == 1:
        return frozenset()
    try:
        factors = factorize_any(part, max_steps)
    except IncompleteFactorizationError as e:
        logger.warning(f"Fiber of {q} over {target} incomplete: {len(e.factors)} primes certified")
        raise
    return frozenset(SpecZPoint.prime(p) for p, _ in factors)


def sorted_points(points) -> List[SpecZPoint]:
    return sorted(points, key=lambda x: x.sort_key())


def zsigmondy_exception(a: int, b: int, n: int) -> bool:
    """Whether a^n - b^n lacks a primitive prime divisor (n >= 2)"""
    if not 1 <= b < a or math.gcd(a, b) != 1:
        raise DomainError(f"zsigmondy_exception needs 1 <= b < a coprime, got ({a}, {b})")
    if n < 2:
        raise DomainError(f"zsigmondy_exception needs n >= 2, got {n}")
    if (a, b, n) == (2, 1, 6):
        return True
    s = a + b
    return n == 2 and s & (s - 1) == 0


def divisor_of(q: RationalMap) -> FormalDivisor:
    """div(q) = sum e_i [p_i] - sum f_j [q_j] - log|q| [infinity]"""
    points: Dict[int, int] = {}
    if abs(q.a) > 1:
        for p, e in factorize_any(abs(q.a)):
            points[p] = e
    if q.b > 1:
        for p, f in factorize_any(q.b):
            points[p] = -f
    return FormalDivisor(points, -FormalDegree(dict(points)))


def degree_of(d: FormalDivisor) -> FormalDegree:
    """Sum of c_p log p plus the coefficient at infinity (degree one)"""
    return FormalDegree(d.points) + d.infinity


def ramification_index(q: RationalMap, p: int) -> int:
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    if q.a % p == 0:
        return valuation(q.a, p)
    if q.b % p == 0:
        return valuation(q.b, p)

    n = multiplicative_order(q.residue(p), p)
    # v_p(a^n - b^n) by modular powers, never the full integer
    e = 1
    modulus = p * p
    while (pow(q.a, n, modulus) - pow(q.b, n, modulus)) % modulus == 0:
        e += 1
        modulus *= p
    return e


def _map_degree(q: RationalMap) -> FormalDegree:
    if abs(q.a) == 1:
        raise DomainError(f"degree log|a| of {q} vanishes; defects are undefined")
    return FormalDegree.log_of(q.a)


def defect_exact(q: RationalMap, p: int) -> DefectRatio:
    """((e_q(p) - 1) log p) / log |a| as exact degrees"""
    e = ramification_index(q, p)
    return DefectRatio(FormalDegree({p: e - 1}), _map_degree(q))


def defect(q: RationalMap, p: int) -> float:
    return defect_exact(q, p).value()


def fiber_defect_exact(q: RationalMap, target: P1Point, max_steps: Optional[int] = None) -> DefectRatio:
    numerator = FormalDegree()
    for x in fiber(q, target, max_steps):
        if x.is_prime:
            numerator = numerator + FormalDegree({x.p: ramification_index(q, x.p) - 1})
    return DefectRatio(numerator, _map_degree(q))


def fiber_defect(q: RationalMap, target: P1Point, max_steps: Optional[int] = None) -> float:
    """Sum of the prime defects over the fiber of target"""
    return fiber_defect_exact(q, target, max_steps).value()


@dataclass(frozen=True)
class AbcReport:
    A: int
    B: int
    C: int
    radical: int
    ratio: Fraction
    q: RationalMap
    defect_zero: float
    defect_one: float
    defect_infinity: float
    infinity_term: str = "(log q) - 1"

    @property
    def defect_total(self) -> float:
        return self.defect_zero + self.defect_one + self.defect_infinity

    @property
    def radical_log_ratio(self) -> float:
        return math.log(self.radical) / math.log(self.C)

    @property
    def quality(self) -> float:
        return math.log(self.C) / math.log(self.radical)

    def to_json(self):
        digits = config['smirnov'].FLOAT_DIGITS

        def fmt(x: float) -> str:
            return format(x, f".{digits}g")

        return {
            "A": self.A,
            "B": self.B,
            "C": self.C,
            "rad": self.radical,
            "ratio": str(self.ratio),
            "q": str(self.q),
            "defects": {
                "zero": fmt(self.defect_zero),
                "one": fmt(self.defect_one),
                "infinity": fmt(self.defect_infinity),
                "total": fmt(self.defect_total),
            },
            "infinity_term": self.infinity_term,
            "log_rad_over_log_c": fmt(self.radical_log_ratio),
            "quality": fmt(self.quality),
        }


def abc_report(A: int, B: int, C: int) -> AbcReport:
    """Radical, C/rad and the three defects of q = C/min(A, B).

    The infinity defect is (log b_1 + (log q) - 1) / log a: the archimedean
    contribution is read as log(q) minus one.
    """
    if min(A, B, C) < 1:
        raise DomainError(f"abc_report needs positive integers, got ({A}, {B}, {C})")
    if A + B != C:
        raise DomainError(f"{A} + {B} != {C}")
    if math.gcd(A, B) != 1:
        raise DomainError(f"gcd({A}, {B}, {C}) != 1")

    rad = radical(A * B * C)
    a, b = C, min(A, B)
    q = RationalMap(a, b)
    log_a = math.log(a)

    zero = math.log(powerful_part(a)) / log_a
    one = math.log(powerful_part(a - b)) / log_a
    infinity = (math.log(powerful_part(b)) + math.log(a / b) - 1) / log_a

    report = AbcReport(A, B, C, rad, Fraction(C, rad), q, zero, one, infinity)
    logger.debug(f"abc ({A}, {B}, {C}): rad {rad}, total defect {report.defect_total:.6f}")
    return report


def exotic_preimage(q: RationalMap, open_set: "HabiroOpenDescriptor", prime_bound: int) -> List[int]:
    """Primes p <= prime_bound whose image lies in the open set"""
    return [int(p) for p in primerange(2, prime_bound + 1)
            if open_set.contains(evaluate(q, SpecZPoint.prime(int(p))))]


def graph_scan(q: RationalMap, prime_bound: int) -> List[Tuple[int, P1Point]]:
    """(p, q(p)) for every prime p <= prime_bound, ascending"""
    points = [(int(p), evaluate(q, SpecZPoint.prime(int(p)))) for p in primerange(2, prime_bound + 1)]
    logger.info(f"Scanned {len(points)} primes for q = {q}")
    return points
