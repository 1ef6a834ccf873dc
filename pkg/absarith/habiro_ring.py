"""
Truncated elements of the Habiro ring in the basis [n!]_x, their values at
roots of unity, and the radial check of Zagier's identity for the Kontsevich
series.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .config import config
from .errors import BudgetExceededError, DomainError, SizeError
from .exact_arith import (
    ZX,
    X,
    IntPolynomial,
    cyclotomic_poly,
    euler_phi,
    poly_coefficients,
    poly_from_coefficients,
)
from .habiro_topology import RootOfUnity

logger = logging.getLogger(__name__)


def _triangular(n: int) -> int:
    return n * (n + 1) // 2


@lru_cache(maxsize=256)
def q_factorial(n: int) -> IntPolynomial:
    """[n!]_x = (x^n - 1)(x^(n-1) - 1)...(x - 1)"""
    if n < 0:
        raise DomainError(f"q_factorial: n = {n} < 0")
    result = ZX.one
    for k in range(1, n + 1):
        result *= X**k - 1
    return result


class CyclotomicNumber:
    """An element of Z[zeta_N], stored as a polynomial reduced mod Phi_N"""

    __slots__ = ("N", "poly")

    def __init__(self, N: int, poly: IntPolynomial):
        if N < 1:
            raise DomainError(f"cyclotomic field needs N >= 1, got {N}")
        self.N = N
        self.poly = ZX(poly) % cyclotomic_poly(N)

    @classmethod
    def from_int(cls, N: int, value: int) -> "CyclotomicNumber":
        return cls(N, ZX(value))

    @classmethod
    def zeta(cls, N: int, power: int = 1) -> "CyclotomicNumber":
        return cls(N, X ** (power % N))

    @classmethod
    def from_coefficients(cls, N: int, coeffs: Sequence[int]) -> "CyclotomicNumber":
        return cls(N, poly_from_coefficients(coeffs))

    def _check(self, other: "CyclotomicNumber") -> None:
        if self.N != other.N:
            raise DomainError(f"cannot combine Z[zeta_{self.N}] with Z[zeta_{other.N}]")

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, int):
            return CyclotomicNumber.from_int(self.N, other)
        self._check(other)
        return other

    def __add__(self, other) -> "CyclotomicNumber":
        return CyclotomicNumber(self.N, self.poly + self._coerce(other).poly)

    __radd__ = __add__

    def __sub__(self, other) -> "CyclotomicNumber":
        return CyclotomicNumber(self.N, self.poly - self._coerce(other).poly)

    def __rsub__(self, other) -> "CyclotomicNumber":
        return self._coerce(other) - self

    def __mul__(self, other) -> "CyclotomicNumber":
        return CyclotomicNumber(self.N, self.poly * self._coerce(other).poly)

    __rmul__ = __mul__

    def __neg__(self) -> "CyclotomicNumber":
        return CyclotomicNumber(self.N, -self.poly)

    def __pow__(self, k: int) -> "CyclotomicNumber":
        if k < 0:
            raise DomainError("negative powers are not supported")
        result = CyclotomicNumber.from_int(self.N, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.is_integer() and self.integer_value() == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self.N == other.N and self.poly == other.poly

    def __hash__(self):
        return hash((self.N, tuple(self.coefficients())))

    def galois(self, u: int) -> "CyclotomicNumber":
        """Image under zeta -> zeta^u"""
        u %= self.N
        if math.gcd(u, self.N) != 1:
            raise DomainError(f"{u} is not a unit mod {self.N}")
        return CyclotomicNumber(self.N, self.poly.compose(X, X**u))

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1)

    def coefficients(self) -> List[int]:
        return poly_coefficients(self.poly)

    def is_integer(self) -> bool:
        return not self.poly or self.poly.degree() == 0

    def integer_value(self) -> int:
        if not self.is_integer():
            raise DomainError(f"{self} is not a rational integer")
        coeffs = self.coefficients()
        return coeffs[0] if coeffs else 0

    def to_complex(self) -> complex:
        zeta = cmath.exp(2j * math.pi / self.N)
        return sum((c * zeta**k for k, c in enumerate(self.coefficients())), 0j)

    def to_json(self):
        if self.is_integer():
            return self.integer_value()
        return {"N": self.N, "coeffs": self.coefficients()}

    def __repr__(self):
        return f"CyclotomicNumber({self.N}, {self.coefficients()})"

    def __str__(self):
        if self.is_integer():
            return str(self.integer_value())
        terms = []
        for k, c in enumerate(self.coefficients()):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}·ζ{self.N}^{k}")
        return " + ".join(terms)


@dataclass(frozen=True)
class HabiroElement:
    """sum_{n < N} a_n(x) [n!]_x with deg a_n <= n"""

    coefficients: Tuple[IntPolynomial, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise DomainError("a Habiro element needs level N >= 1")
        coeffs = tuple(ZX(a) for a in self.coefficients)
        for n, a in enumerate(coeffs):
            if a and a.degree() > n:
                raise DomainError(f"a_{n} has degree {a.degree()} > {n}")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def level(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, n: int) -> IntPolynomial:
        return self.coefficients[n]

    def to_json(self):
        return {"level": self.level, "coefficients": [poly_coefficients(a) for a in self.coefficients]}

    @classmethod
    def from_json(cls, data) -> "HabiroElement":
        return cls(tuple(poly_from_coefficients(c) for c in data["coefficients"]))

    def __str__(self):
        terms = [f"({a.as_expr()})·[{n}!]" for n, a in enumerate(self.coefficients) if a]
        return " + ".join(terms) if terms else "0"


def to_factorial_basis(f: IntPolynomial, N: int) -> HabiroElement:
    """Write f as sum a_n(x)[n!]_x by peeling leading terms.

    x^j [n!]_x is monic of degree n(n+1)/2 + j, and 0 <= j <= n fills the
    degrees between consecutive triangular numbers exactly once.
    """
    if N < 1:
        raise DomainError(f"to_factorial_basis: level {N} < 1")
    f = ZX(f)
    if f and f.degree() >= _triangular(N):
        raise SizeError(f"degree {f.degree()} does not fit level {N} (needs < {_triangular(N)})")

    parts = [dict() for _ in range(N)]
    remainder = f
    while remainder:
        d = remainder.degree()
        n = (math.isqrt(8 * d + 1) - 1) // 2
        j = d - _triangular(n)
        c = remainder.LC
        parts[n][(j,)] = int(c)
        remainder -= c * X**j * q_factorial(n)

    return HabiroElement(tuple(ZX.from_dict(p) if p else ZX.zero for p in parts))


def expand(e: HabiroElement) -> IntPolynomial:
    """The polynomial sum a_n(x)[n!]_x"""
    total = ZX.zero
    for n, a in enumerate(e.coefficients):
        if a:
            total += a * q_factorial(n)
    return total


def factorial_at_root(n: int, z: RootOfUnity) -> CyclotomicNumber:
    """[n!]_z in Z[zeta_M], M the order of z"""
    return CyclotomicNumber(z.order, q_factorial(n).compose(X, X**z.g))


def evaluate_at_root(e: HabiroElement, z: RootOfUnity) -> CyclotomicNumber:
    """sum a_n(z)[n!]_z; terms with n >= order(z) vanish"""
    M, g = z.order, z.g
    substitution = X**g
    total = ZX.zero
    for n in range(min(e.level, M)):
        a = e.coefficients[n]
        if a:
            total += (a * q_factorial(n)).compose(X, substitution)
    return CyclotomicNumber(M, total)


def kontsevich_element(N: int) -> HabiroElement:
    """Truncation of sum (-1)^n [n!]_x at level N"""
    if N < 1:
        raise DomainError(f"kontsevich_element: level {N} < 1")
    return HabiroElement(tuple(ZX((-1) ** n) for n in range(N)))


def chi12(n: int) -> int:
    """Quadratic character of conductor 12"""
    r = n % 12
    if r in (1, 11):
        return 1
    if r in (5, 7):
        return -1
    return 0


class ZagierSum(NamedTuple):
    value: complex
    terms: int
    tail_bound: float


def _tail_bound(r: float, n: int) -> float:
    """Majorant of 1/2 sum_{k >= n} k r^((k^2 - 1)/24)"""
    if r == 0:
        return 0.0
    rho = r ** (n / 12)
    if rho >= 1:
        return math.inf
    return r ** ((n * n - 1) / 24) * (n / (1 - rho) + rho / (1 - rho) ** 2) / 2


def zagier_sum(x: complex, terms: Optional[int] = None) -> ZagierSum:
    """-1/2 sum_n n chi(n) x^((n^2 - 1)/24) with its tail bound.

    With terms=None the sum stops once the terms past the peak of
    n r^((n^2 - 1)/24) drop below the relative tolerance.
    """
    r = abs(x)
    if r >= 1:
        raise DomainError(f"zagier_rhs needs |x| < 1, got |x| = {r}")
    habiro = config['habiro']
    tol = habiro.ZAGIER_RELATIVE_TOL

    # n r^(n^2/24) is largest near n = sqrt(12 / -log r)
    peak = math.sqrt(12 / -math.log(r)) if 0 < r else 1.0

    total = 0j
    n = 0
    while True:
        n += 1
        if terms is not None and n > terms:
            break
        if terms is None and n > habiro.ZAGIER_MAX_TERMS:
            raise BudgetExceededError(f"zagier_rhs did not converge within {habiro.ZAGIER_MAX_TERMS} terms")
        c = chi12(n)
        if not c:
            continue
        term = n * c * x ** ((n * n - 1) // 24)
        total += term
        if terms is None and n > peak and abs(term) < tol * max(abs(total), 1.0):
            break

    last = n if terms is None else terms
    return ZagierSum(-total / 2, last, _tail_bound(r, last + 1))


def zagier_rhs(x: complex, terms: Optional[int] = None) -> complex:
    return zagier_sum(x, terms).value


class RadialRow(NamedTuple):
    r: float
    rhs: complex
    lhs: complex
    error: float
    terms: int


def radial_table(z: RootOfUnity, radii: Optional[Iterable[float]] = None) -> List[RadialRow]:
    """|RHS(r z) - F(z)| along r -> 1 for the Kontsevich series F"""
    if radii is None:
        radii = config['habiro'].RADII
    lhs = evaluate_at_root(kontsevich_element(z.order), z).to_complex()
    zc = z.to_complex()
    rows = []
    for r in radii:
        result = zagier_sum(r * zc)
        rows.append(RadialRow(r, result.value, lhs, abs(result.value - lhs), result.terms))
        logger.debug(f"r = {r}: {result.terms} terms, error {rows[-1].error:.3e}")
    return rows
