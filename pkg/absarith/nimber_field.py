"""
Finite nimbers: Conway's quadratic closure of F_2 on the natural numbers.

Addition is xor. Multiplication is defined by the mex rule and computed by
splitting operands into halves at the Fermat 2-powers H = 2^(2^k), where
H (x) H = H xor H/2. The nonzero nimbers below 2^(2^k) form a cyclic group of
order 2^(2^k) - 1; fixing compatible generators identifies them with roots of
unity, and Frobenius orbits with irreducible polynomials over F_2.
"""

import logging
import math
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from sympy import Poly, symbols

from .config import config
from .errors import BudgetExceededError, DomainError, SizeError
from .exact_arith import factorize_any
from .file_utils import load_json_cache, save_json_cache
from .habiro_topology import RootOfUnity
from .logger import OperationTimer

logger = logging.getLogger(__name__)

Nimber = int

MAX_NIMBER = 1 << 64
_TOWER_CACHE_VERSION = 1

_lock = threading.Lock()
_base_table: Optional[List[List[int]]] = None
_oracle_table: Optional[List[List[int]]] = None
_generators: Dict[int, int] = {1: 2}
_bsgs_tables: Dict[int, Dict[int, int]] = {}


def _check(a: int) -> None:
    if not 0 <= a < MAX_NIMBER:
        raise SizeError(f"nimber {a} outside [0, 2^64)")


def enclosing_field_level(a: Nimber) -> int:
    """Smallest k with a < 2^(2^k)"""
    _check(a)
    k = 0
    while a >= 1 << (1 << k):
        k += 1
    return k


def field_size(k: int) -> int:
    return 1 << (1 << k)


def nim_add(a: Nimber, b: Nimber) -> Nimber:
    return a ^ b


def _mul_split(a: int, b: int, k: int, base: Optional[List[List[int]]]) -> int:
    """Product of a, b < 2^(2^k) by the half split at H = 2^(2^(k-1))"""
    if a <= 1 or b <= 1:
        return a * b
    if base is not None and k <= 3:
        return base[a][b]
    half_bits = 1 << (k - 1)
    mask = (1 << half_bits) - 1
    a1, a0 = a >> half_bits, a & mask
    b1, b0 = b >> half_bits, b & mask
    low = _mul_split(a0, b0, k - 1, base)
    mixed = _mul_split(a1 ^ a0, b1 ^ b0, k - 1, base)
    top = _mul_split(a1, b1, k - 1, base)
    # (a1 b1) (x) H/2 for H/2 = 2^(half_bits - 1)
    shifted = _mul_split(top, 1 << (half_bits - 1), k - 1, base)
    return ((mixed ^ low) << half_bits) | (low ^ shifted)


def _table() -> List[List[int]]:
    global _base_table
    if _base_table is None:
        with _lock:
            if _base_table is None:
                size = 1 << config['nimber'].TABLE_BITS
                _base_table = [[_mul_split(a, b, 3, None) for b in range(size)] for a in range(size)]
                logger.debug(f"Built {size}x{size} nimber product table")
    return _base_table


def nim_mul(a: Nimber, b: Nimber) -> Nimber:
    _check(a)
    _check(b)
    k = max(enclosing_field_level(a), enclosing_field_level(b))
    return _mul_split(a, b, k, _table())


def _mex(values) -> int:
    seen = set(values)
    m = 0
    while m in seen:
        m += 1
    return m


def _build_oracle(bits: int) -> List[List[int]]:
    """Products below 2^bits: mex on pairs of 2-powers, xor-bilinear elsewhere"""
    size = 1 << bits
    table = [[0] * size for _ in range(size)]
    for i in range(bits):
        A = 1 << i
        for j in range(bits):
            B = 1 << j
            value = _mex(
                table[a][B] ^ table[A][b] ^ table[a][b]
                for a in range(A)
                for b in range(B)
            )
            table[A][B] = value
            for a0 in range(A):
                row = table[A ^ a0]
                for b0 in range(B):
                    if a0 or b0:
                        row[B ^ b0] = value ^ table[A][b0] ^ table[a0][B] ^ table[a0][b0]
    return table


def nim_mul_oracle(a: Nimber, b: Nimber) -> Nimber:
    """Product from the mex definition, for operands below 2^ORACLE_BITS"""
    global _oracle_table
    bits = config['nimber'].ORACLE_BITS
    if not (0 <= a < 1 << bits and 0 <= b < 1 << bits):
        raise SizeError(f"mex oracle runs below 2^{bits}, got ({a}, {b})")
    if _oracle_table is None:
        with _lock:
            if _oracle_table is None:
                _oracle_table = _build_oracle(bits)
    return _oracle_table[a][b]


@lru_cache(maxsize=None)
def _monomial_product(i: int, j: int) -> int:
    """y^i y^j in the tower F_2[y_0, y_1, ...] with y_t^2 = y_t + y_0...y_(t-1).

    Bit i of a nimber stands for the monomial prod_{t in i} y_t, y_t = 2^(2^t).
    """
    common = i & j
    if not common:
        return 1 << (i | j)
    t = common.bit_length() - 1
    bit = 1 << t
    i2, j2 = i ^ bit, j ^ bit
    result = _monomial_product(i2, j2 | bit)
    rest = _monomial_product(i2, j2)
    below = bit - 1
    k = 0
    while rest:
        if rest & 1:
            result ^= _monomial_product(k, below)
        rest >>= 1
        k += 1
    return result


def nim_mul_tower(a: Nimber, b: Nimber) -> Nimber:
    """Product in the multilinear tower model, independent of the half split"""
    _check(a)
    _check(b)
    result = 0
    i = 0
    while a >> i:
        if (a >> i) & 1:
            j = 0
            while b >> j:
                if (b >> j) & 1:
                    result ^= _monomial_product(i, j)
                j += 1
        i += 1
    return result


def nim_square(a: Nimber) -> Nimber:
    return nim_mul(a, a)


def nim_pow(a: Nimber, e: int) -> Nimber:
    if e < 0:
        return nim_pow(nim_inverse(a), -e)
    result = 1
    base = a
    while e:
        if e & 1:
            result = nim_mul(result, base)
        e >>= 1
        if e:
            base = nim_mul(base, base)
    return result


def nim_inverse(a: Nimber) -> Nimber:
    """a^(N - 1) with N = 2^(2^k) - 1 the order of the enclosing group"""
    if a == 0:
        raise DomainError("0 has no nim inverse")
    k = enclosing_field_level(a)
    return nim_pow(a, field_size(k) - 2)


@lru_cache(maxsize=None)
def _group_order_factors(k: int) -> Tuple[Tuple[int, int], ...]:
    return factorize_any(field_size(k) - 1)


def nim_order(a: Nimber) -> int:
    """Multiplicative order of a nonzero nimber"""
    if a == 0:
        raise DomainError("0 has no multiplicative order")
    k = enclosing_field_level(a)
    order = field_size(k) - 1
    for p, e in _group_order_factors(k):
        for _ in range(e):
            if nim_pow(a, order // p) == 1:
                order //= p
            else:
                break
    return order


def _load_generators() -> None:
    cached = load_json_cache(config['nimber'].CACHE_NAME, _TOWER_CACHE_VERSION)
    if cached:
        for level, g in cached.items():
            _generators.setdefault(int(level), int(g))


def _search_generator(k: int, previous: int) -> int:
    H = field_size(k - 1)
    for g in range(H, field_size(k)):
        if nim_pow(g, H + 1) == previous:
            return g
    raise AssertionError(f"no level-{k} generator over {previous}")


def tower_generator(k: int) -> Nimber:
    """Smallest g >= 2^(2^(k-1)) with g^(2^(2^(k-1)) + 1) = the level-(k-1) generator"""
    nimber_config = config['nimber']
    if k < 1:
        raise DomainError(f"tower levels start at 1, got {k}")
    if k > nimber_config.MAX_LEVEL:
        raise SizeError(f"nimbers stop at level {nimber_config.MAX_LEVEL}")

    with _lock:
        if k in _generators:
            return _generators[k]
        _load_generators()
        if k in _generators:
            return _generators[k]

    previous = tower_generator(k - 1)
    limit = nimber_config.MAX_SEARCH_LEVEL + (1 if nimber_config.LONG_SEARCH else 0)
    if k > limit:
        raise BudgetExceededError(
            f"level-{k} generator search is beyond the budget; set ABSARITH_LONG_SEARCH=1 "
            f"(documented value {nimber_config.KNOWN_GENERATORS.get(k)})"
        )

    with OperationTimer(f"tower generator search at level {k}", logger):
        g = _search_generator(k, previous)
    if nim_order(g) != field_size(k) - 1:
        logger.warning(f"Level-{k} generator {g} does not generate the multiplicative group")
    else:
        logger.info(f"Level-{k} generator {g} has full order {field_size(k) - 1}")

    with _lock:
        _generators[k] = g
        snapshot = {str(level): value for level, value in sorted(_generators.items())}
    save_json_cache(nimber_config.CACHE_NAME, _TOWER_CACHE_VERSION, snapshot)
    return g


def _baby_steps(k: int) -> Dict[int, int]:
    with _lock:
        table = _bsgs_tables.get(k)
    if table is not None:
        return table
    g = tower_generator(k)
    m = math.isqrt(field_size(k) - 1) + 1
    table = {}
    x = 1
    for j in range(m):
        table.setdefault(x, j)
        x = nim_mul(x, g)
    with _lock:
        _bsgs_tables[k] = table
    return table


def discrete_log(a: Nimber, k: int) -> int:
    """e with g_k^e = a, by baby-step giant-step"""
    if a == 0:
        raise DomainError("0 has no discrete logarithm")
    N = field_size(k) - 1
    table = _baby_steps(k)
    m = math.isqrt(N) + 1
    giant = nim_pow(nim_inverse(tower_generator(k)), m)
    y = a
    for i in range(m + 1):
        j = table.get(y)
        if j is not None:
            return (i * m + j) % N
        y = nim_mul(y, giant)
    raise AssertionError(f"{a} is not a power of the level-{k} generator")


def nimber_to_root(a: Nimber, level: Optional[int] = None) -> RootOfUnity:
    """a = g_k^e maps to e/(2^(2^k) - 1) in Q/Z"""
    if a == 0:
        raise DomainError("0 corresponds to no root of unity")
    k = max(1, enclosing_field_level(a))
    if level is not None:
        if level < k:
            raise DomainError(f"{a} does not lie in the level-{level} field")
        k = level
    return RootOfUnity.of(Fraction(discrete_log(a, k), field_size(k) - 1))


def frobenius_orbit(a: Nimber) -> Tuple[Nimber, ...]:
    """a, a^2, a^4, ... until the first repeat"""
    _check(a)
    orbit = [a]
    x = nim_square(a)
    while x != a:
        orbit.append(x)
        x = nim_square(x)
    return tuple(orbit)


_X = symbols("x")


@dataclass(frozen=True)
class F2Polynomial:
    """Polynomial over F_2; bit i of mask is the coefficient of x^i"""

    mask: int

    def __post_init__(self):
        if self.mask < 0:
            raise DomainError("polynomial mask must be nonnegative")

    @property
    def degree(self) -> int:
        return self.mask.bit_length() - 1

    def coefficients(self) -> List[int]:
        return [(self.mask >> i) & 1 for i in range(self.degree + 1)]

    def is_irreducible(self) -> bool:
        if self.degree < 1:
            return False
        return Poly(list(reversed(self.coefficients())), _X, modulus=2).is_irreducible

    @classmethod
    def parse(cls, text: str) -> "F2Polynomial":
        """'x^4+x+1', '0b10011' or '19'"""
        token = text.replace(" ", "").lower()
        try:
            return cls(int(token, 0))
        except ValueError:
            pass
        mask = 0
        for term in token.split("+"):
            match = re.fullmatch(r"(1|x|x\^(\d+)|x\*\*(\d+))", term)
            if not match:
                raise DomainError(f"cannot read an F_2 polynomial from {text!r}")
            if term == "1":
                power = 0
            elif term == "x":
                power = 1
            else:
                power = int(match.group(2) or match.group(3))
            mask ^= 1 << power
        return cls(mask)

    def __str__(self):
        if self.mask == 0:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            if (self.mask >> i) & 1:
                terms.append("1" if i == 0 else "x" if i == 1 else f"x^{i}")
        return " + ".join(terms)


def _poly_mul_linear(coeffs: List[int], alpha: int) -> List[int]:
    """(sum c_i X^i)(X + alpha) with nimber coefficients"""
    out = [0] * (len(coeffs) + 1)
    for i, c in enumerate(coeffs):
        out[i + 1] ^= c
        out[i] ^= nim_mul(c, alpha)
    return out


def orbit_to_polynomial(orbit: Sequence[Nimber]) -> F2Polynomial:
    """prod (X + alpha) over a Frobenius-closed set"""
    members = set(orbit)
    if not members:
        raise DomainError("empty orbit")
    if any(nim_square(a) not in members for a in members):
        raise DomainError(f"{sorted(members)} is not closed under squaring")
    coeffs = [1]
    for alpha in sorted(members):
        coeffs = _poly_mul_linear(coeffs, alpha)
    if any(c > 1 for c in coeffs):
        raise DomainError(f"{sorted(members)} does not define a polynomial over F_2")
    return F2Polynomial(sum(c << i for i, c in enumerate(coeffs)))


def _evaluate(f: F2Polynomial, a: Nimber) -> Nimber:
    value = 0
    for c in reversed(f.coefficients()):
        value = nim_mul(value, a) ^ c
    return value


@lru_cache(maxsize=4096)
def smallest_root(f: F2Polynomial) -> Nimber:
    """Least nimber root of an irreducible f != x"""
    if f.mask == 0b10:
        raise DomainError("x has root 0, which has no root of unity")
    if not f.is_irreducible():
        raise DomainError(f"{f} is reducible over F_2")
    d = f.degree
    if d & (d - 1):
        raise DomainError(f"degree {d} is not a power of 2; the roots are not finite nimbers")
    k = d.bit_length() - 1
    start = field_size(k - 1) if k >= 1 else 1
    for a in range(start, field_size(k)):
        if _evaluate(f, a) == 0:
            return a
    raise AssertionError(f"no root of {f} in the level-{k} field")


def polynomial_roots(f: F2Polynomial) -> Tuple[Nimber, ...]:
    return frobenius_orbit(smallest_root(f))


def polynomial_to_root(f: F2Polynomial) -> RootOfUnity:
    """Root of unity of the smallest nimber root of f"""
    return nimber_to_root(smallest_root(f))


@dataclass(frozen=True)
class F2Divisor:
    """Integer combination of irreducible polynomials other than x"""

    terms: Mapping[F2Polynomial, int] = field(default_factory=dict)

    def __post_init__(self):
        canonical = {}
        for f, c in sorted(self.terms.items(), key=lambda item: item[0].mask):
            if c:
                if f.mask == 0b10 or not f.is_irreducible():
                    raise DomainError(f"{f} is not an irreducible polynomial other than x")
                canonical[f] = int(c)
        object.__setattr__(self, "terms", canonical)

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    @classmethod
    def of(cls, f: F2Polynomial, c: int = 1) -> "F2Divisor":
        return cls({f: c})

    def __add__(self, other: "F2Divisor") -> "F2Divisor":
        terms = dict(self.terms)
        for f, c in other.terms.items():
            terms[f] = terms.get(f, 0) + c
        return F2Divisor(terms)

    def to_json(self):
        return [{"poly": str(f), "mask": f.mask, "c": c} for f, c in self.terms.items()]

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"[{f}]" if c == 1 else f"{c}·[{f}]" for f, c in self.terms.items())


def divisor_mul(d: F2Divisor, e: F2Divisor) -> F2Divisor:
    """Bilinear extension of [f][g] = sum of the orbits of {alpha beta}"""
    total: Dict[F2Polynomial, int] = {}
    for f, cf in d.terms.items():
        A = polynomial_roots(f)
        for g, cg in e.terms.items():
            B = polynomial_roots(g)
            counts: Dict[int, int] = {}
            for alpha in A:
                for beta in B:
                    x = nim_mul(alpha, beta)
                    counts[x] = counts.get(x, 0) + 1
            done = set()
            for x in sorted(counts):
                if x in done:
                    continue
                orbit = frobenius_orbit(x)
                done.update(orbit)
                # products are Frobenius stable, so every member has the same count
                poly = orbit_to_polynomial(orbit)
                total[poly] = total.get(poly, 0) + cf * cg * counts[min(orbit)]
    return F2Divisor(total)


class DictionaryRow(NamedTuple):
    nimber: Nimber
    orbit: Tuple[Nimber, ...]
    polynomial: F2Polynomial
    root: RootOfUnity


def field_dictionary(k: int) -> List[DictionaryRow]:
    """Orbits of the nonzero nimbers below 2^(2^k), keyed by their least member"""
    if k < 1:
        raise DomainError(f"field_dictionary needs k >= 1, got {k}")
    rows = []
    seen = set()
    for a in range(1, field_size(k)):
        if a in seen:
            continue
        orbit = frobenius_orbit(a)
        seen.update(orbit)
        rows.append(DictionaryRow(a, orbit, orbit_to_polynomial(orbit), nimber_to_root(a, level=k)))
    logger.info(f"Level-{k} dictionary: {len(rows)} orbits")
    return rows
