"""
Shared exact number theory: factorization with an effort budget, Euler phi,
multiplicative orders, cyclotomic polynomials and resultants, and
factorial-base digits of profinite integers.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Tuple

from sympy import divisors, isprime, primerange
from sympy.ntheory import pollard_rho
from sympy.polys.domains import ZZ
from sympy.polys.rings import PolyElement, ring

from .config import config
from .errors import DomainError, IncompleteFactorizationError, SizeError

logger = logging.getLogger(__name__)

# Ambient ring Z[x] for every integer polynomial in the package
ZX, X = ring("x", ZZ)

IntPolynomial = PolyElement

# ((p, e), ...) sorted by p; () is the factorization of 1
Factorization = Tuple[Tuple[int, int], ...]


@lru_cache(maxsize=1)
def _trial_primes() -> Tuple[int, ...]:
    limit = config['arith'].TRIAL_DIVISION_LIMIT
    return tuple(int(p) for p in primerange(2, limit + 1))


def partial_factorize(n: int, max_steps: Optional[int] = None) -> Tuple[Factorization, int]:
    """Factor n as far as the budget allows.

    Returns the certified prime factorization found and the unfactored
    cofactor (1 when the factorization is complete).
    """
    if n < 1:
        raise SizeError(f"cannot factor {n}: input must be positive")

    arith = config['arith']
    if max_steps is None:
        max_steps = arith.RHO_MAX_STEPS

    factors: Dict[int, int] = {}
    remaining = int(n)

    for p in _trial_primes():
        if p * p > remaining:
            break
        if remaining % p == 0:
            e = 0
            while remaining % p == 0:
                remaining //= p
                e += 1
            factors[p] = e

    unfactored = 1
    stack = [remaining] if remaining > 1 else []
    while stack:
        m = stack.pop()
        if isprime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = pollard_rho(m, retries=arith.RHO_RETRIES, seed=arith.RHO_SEED, max_steps=max_steps)
        if d is None or d in (1, m):
            logger.debug(f"Pollard rho gave up on a {m.bit_length()}-bit cofactor")
            unfactored *= m
            continue
        stack.extend((int(d), m // int(d)))

    return tuple(sorted(factors.items())), unfactored


def factorize_any(n: int, max_steps: Optional[int] = None) -> Factorization:
    """Complete factorization of n of any size, or IncompleteFactorizationError"""
    factors, cofactor = partial_factorize(n, max_steps)
    if cofactor != 1:
        raise IncompleteFactorizationError(
            f"unfactored part of {n.bit_length()} bits remains after budget {max_steps}",
            factors=factors,
            cofactor=cofactor,
        )
    return factors


def factorize(n: int, max_steps: Optional[int] = None) -> Factorization:
    """Prime factorization of 1 <= n < MAX_FACTOR_INPUT"""
    if n < 1 or n >= config['arith'].MAX_FACTOR_INPUT:
        raise SizeError(f"factorize: {n} outside [1, {config['arith'].MAX_FACTOR_INPUT})")
    return factorize_any(n, max_steps)


@lru_cache(maxsize=65536)
def _small_factorization(n: int) -> Factorization:
    return factorize_any(n)


def prime_factors(n: int) -> List[int]:
    return [p for p, _ in _small_factorization(n)]


def euler_phi(n: int) -> int:
    """Number of 1 <= j <= n coprime to n"""
    if n < 1:
        raise DomainError(f"euler_phi: {n} is not positive")
    result = 1
    for p, e in _small_factorization(n):
        result *= (p - 1) * p ** (e - 1)
    return result


def mobius(n: int) -> int:
    if n < 1:
        raise DomainError(f"mobius: {n} is not positive")
    fac = _small_factorization(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def radical(n: int) -> int:
    """Product of the distinct primes dividing |n|"""
    n = abs(n)
    if n == 0:
        raise DomainError("radical of 0 is undefined")
    return math.prod(p for p, _ in _small_factorization(n))


def powerful_part(n: int) -> int:
    """|n| / rad(n), written n_1 in the defect formulas"""
    return abs(n) // radical(n)


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer"""
    if n == 0:
        raise DomainError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@lru_cache(maxsize=65536)
def prime_power_base(n: int) -> Optional[int]:
    """p when n = p^a with a >= 1, otherwise None"""
    if n < 2:
        return None
    fac = _small_factorization(n)
    return fac[0][0] if len(fac) == 1 else None


def _merge(into: Dict[int, int], fac: Factorization) -> None:
    for p, e in fac:
        into[p] = into.get(p, 0) + e


def multiplicative_order(a: int, m: int) -> int:
    """Smallest n >= 1 with a^n = 1 mod m"""
    if m < 2:
        raise DomainError(f"multiplicative_order: modulus {m} < 2")
    a %= m
    if math.gcd(a, m) != 1:
        raise DomainError(f"multiplicative_order: gcd({a}, {m}) != 1")

    # Factor phi(m) through the factorization of m
    phi_factors: Dict[int, int] = {}
    for p, e in factorize_any(m):
        if e > 1:
            phi_factors[p] = phi_factors.get(p, 0) + e - 1
        _merge(phi_factors, factorize_any(p - 1) if p > 2 else ())

    order = math.prod(p ** e for p, e in phi_factors.items())
    for p, e in phi_factors.items():
        for _ in range(e):
            if pow(a, order // p, m) == 1:
                order //= p
            else:
                break
    return order


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPolynomial:
    """Phi_n as the Mobius quotient of the factors x^d - 1"""
    if n < 1:
        raise DomainError(f"cyclotomic_poly: {n} is not positive")
    numerator = ZX.one
    denominator = ZX.one
    for d in divisors(n):
        mu = mobius(n // d)
        if mu == 1:
            numerator *= X**d - 1
        elif mu == -1:
            denominator *= X**d - 1
    return numerator.exquo(denominator)


def poly_coefficients(f: IntPolynomial) -> List[int]:
    """Coefficients of f by ascending degree"""
    if not f:
        return []
    coeffs = [0] * (f.degree() + 1)
    for (k,), c in f.terms():
        coeffs[k] = int(c)
    return coeffs


def poly_from_coefficients(coeffs) -> IntPolynomial:
    return ZX.from_dict({(k,): int(c) for k, c in enumerate(coeffs) if c})


def homogeneous_cyclotomic(n: int, a: int, b: int) -> int:
    """b^phi(n) * Phi_n(a/b), an integer for integral a, b"""
    phi = cyclotomic_poly(n)
    d = phi.degree()
    return sum(int(c) * a**k * b ** (d - k) for (k,), c in phi.terms())


class Comaximality(NamedTuple):
    comaximal: bool
    prime: Optional[int]


def cyclotomic_resultant(m: int, n: int) -> int:
    return int(cyclotomic_poly(m).resultant(cyclotomic_poly(n)))


def cyclotomic_comaximal(m: int, n: int, verify: bool = False) -> Comaximality:
    """Whether (Phi_m, Phi_n) is the unit ideal of Z[x].

    The ideals meet exactly over p when m/n = p^(+-k); otherwise they are
    comaximal.
    """
    if m < 1 or n < 1:
        raise DomainError("cyclotomic_comaximal: indices must be positive")
    if m == n:
        raise DomainError(f"cyclotomic_comaximal: indices coincide ({m})")

    big, small = max(m, n), min(m, n)
    p = prime_power_base(big // small) if big % small == 0 else None
    result = Comaximality(comaximal=p is None, prime=p)

    if verify:
        res = abs(cyclotomic_resultant(m, n))
        consistent = res == 1 if p is None else (res > 1 and prime_power_base(res) == p)
        if not consistent:
            raise DomainError(f"resultant {res} of Phi_{m}, Phi_{n} contradicts {result}")
        logger.debug(f"Resultant check Phi_{m}, Phi_{n}: {res}")

    return result


@dataclass(frozen=True)
class FactorialDigits:
    """Digits c_1..c_k of a profinite integer, 0 <= c_i <= i"""

    digits: Tuple[int, ...]

    def __post_init__(self):
        if not self.digits:
            raise DomainError("factorial digits need k >= 1")
        for i, c in enumerate(self.digits, start=1):
            if not 0 <= c <= i:
                raise DomainError(f"digit c_{i} = {c} outside [0, {i}]")

    @property
    def k(self) -> int:
        return len(self.digits)

    @property
    def modulus(self) -> int:
        return math.factorial(self.k + 1)

    def value(self) -> int:
        return from_factorial_digits(self)

    def __str__(self):
        sep = ":" if self.k >= 10 else ""
        return "(" + sep.join(str(c) for c in reversed(self.digits)) + ")_!"


def factorial_digits(n: int, k: int) -> FactorialDigits:
    """First k factorial-base digits of n, read from n mod (k+1)!"""
    if k < 1:
        raise DomainError(f"factorial_digits: k = {k} < 1")
    r = n % math.factorial(k + 1)
    digits = []
    for i in range(1, k + 1):
        digits.append(r % (i + 1))
        r //= i + 1
    return FactorialDigits(tuple(digits))


def from_factorial_digits(d: FactorialDigits) -> int:
    return sum(c * math.factorial(i) for i, c in enumerate(d.digits, start=1))


def _same_length(x: FactorialDigits, y: FactorialDigits) -> int:
    if x.k != y.k:
        raise DomainError(f"digit counts differ: {x.k} vs {y.k}")
    return x.k


def factorial_add(x: FactorialDigits, y: FactorialDigits) -> FactorialDigits:
    return factorial_digits(x.value() + y.value(), _same_length(x, y))


def factorial_mul(x: FactorialDigits, y: FactorialDigits) -> FactorialDigits:
    return factorial_digits(x.value() * y.value(), _same_length(x, y))


def factorial_neg(x: FactorialDigits) -> FactorialDigits:
    return factorial_digits(-x.value(), x.k)
