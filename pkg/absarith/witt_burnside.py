"""
Truncated big Witt vectors w(A) = 1 + tA[[t]], the Burnside ring of the
infinite cyclic group and the necklace algebra, with the maps between them.

Addition in w(A) is multiplication of series. Multiplication is fixed by
teich(a) ⊗ teich(b) = teich(ab); over torsion-free rings it is computed
through the ghost components, over F_p through universal polynomials.
"""

import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

from sympy import divisors, isprime
from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.ring_series import rs_mul, rs_pow, rs_series_inversion
from sympy.polys.rings import ring

from .config import config
from .errors import DomainError, NotIntegralError
from .exact_arith import mobius, multiplicative_order
from .file_utils import load_json_cache, save_json_cache
from .logger import OperationTimer
from .smirnov_cover import RationalMap

logger = logging.getLogger(__name__)

INTEGERS = "Z"
RATIONALS = "Q"


def prime_field(p: int) -> str:
    return f"F{p}"


@lru_cache(maxsize=None)
def characteristic(ring_tag: str) -> int:
    """0 for Z and Q, p for F_p"""
    if ring_tag in (INTEGERS, RATIONALS):
        return 0
    if ring_tag.startswith("F") and ring_tag[1:].isdigit():
        p = int(ring_tag[1:])
        if isprime(p):
            return p
    raise DomainError(f"unknown coefficient ring {ring_tag!r} (use Z, Q or F<p>)")


def _normalize(ring_tag: str, x):
    p = characteristic(ring_tag)
    q = Fraction(x)
    if ring_tag == RATIONALS:
        return q
    if p:
        return q.numerator * pow(q.denominator, -1, p) % p
    if q.denominator != 1:
        raise NotIntegralError(f"{q} is not an integer")
    return q.numerator


@lru_cache(maxsize=None)
def _series_ring(ring_tag: str):
    p = characteristic(ring_tag)
    domain = GF(p) if p else (QQ if ring_tag == RATIONALS else ZZ)
    return ring("t", domain)


def _to_domain(domain, x):
    if isinstance(x, Fraction):
        return domain(x.numerator, x.denominator) if domain == QQ else domain(x.numerator)
    return domain(x)


def _from_domain(ring_tag: str, c):
    if ring_tag == RATIONALS:
        return Fraction(int(QQ.numer(c)), int(QQ.denom(c)))
    p = characteristic(ring_tag)
    return int(c) % p if p else int(c)


@dataclass(frozen=True)
class WittVector:
    """1 + a_1 t + ... + a_N t^N over Z, Q or F_p"""

    ring: str
    coeffs: Tuple

    def __post_init__(self):
        if not self.coeffs:
            raise DomainError("Witt vectors need precision N >= 1")
        object.__setattr__(self, "coeffs", tuple(_normalize(self.ring, a) for a in self.coeffs))

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def series(self):
        R, t = _series_ring(self.ring)
        terms = {(0,): R.domain.one}
        for k, a in enumerate(self.coeffs, start=1):
            if a:
                terms[(k,)] = _to_domain(R.domain, a)
        return R.from_dict(terms)

    @classmethod
    def from_series(cls, ring_tag: str, s, N: int) -> "WittVector":
        coeffs = [0] * N
        for (k,), c in s.terms():
            if 1 <= k <= N:
                coeffs[k - 1] = _from_domain(ring_tag, c)
        return cls(ring_tag, tuple(coeffs))

    def truncate(self, N: int) -> "WittVector":
        if not 1 <= N <= self.N:
            raise DomainError(f"cannot truncate precision {self.N} to {N}")
        return WittVector(self.ring, self.coeffs[:N])

    def to_json(self):
        coeffs = [str(a) if isinstance(a, Fraction) and a.denominator != 1 else int(a) for a in self.coeffs]
        return {"ring": self.ring, "N": self.N, "coeffs": coeffs}

    @classmethod
    def from_json(cls, data) -> "WittVector":
        coeffs = tuple(Fraction(c) for c in data["coeffs"])
        if len(coeffs) != int(data.get("N", len(coeffs))):
            raise DomainError("Witt vector JSON: N does not match the coefficient count")
        return cls(data.get("ring", INTEGERS), coeffs)

    def __str__(self):
        return f"w_{self.N}({self.ring})[" + ", ".join(str(a) for a in self.coeffs) + "]"


@dataclass(frozen=True)
class GhostVector:
    ring: str
    components: Tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(_normalize(self.ring, g) for g in self.components))

    @property
    def N(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class AdamsSequence:
    """Psi^1(a), ..., Psi^N(a) supplied by the caller's lambda-structure"""

    ring: str
    values: Tuple

    def __post_init__(self):
        if self.ring not in (INTEGERS, RATIONALS):
            raise DomainError("Adams sequences live over Z or Q")
        object.__setattr__(self, "values", tuple(_normalize(self.ring, v) for v in self.values))

    @classmethod
    def trivial(cls, a, N: int) -> "AdamsSequence":
        """Psi^n = id"""
        return cls(RATIONALS if Fraction(a).denominator != 1 else INTEGERS, (a,) * N)

    @classmethod
    def toric(cls, c, N: int) -> "AdamsSequence":
        """Psi^n(x) = x^n evaluated at x = c"""
        c = Fraction(c)
        return cls(RATIONALS if c.denominator != 1 else INTEGERS, tuple(c**n for n in range(1, N + 1)))


def _check_pair(u: WittVector, v: WittVector) -> None:
    if u.ring != v.ring:
        raise DomainError(f"ring mismatch: {u.ring} vs {v.ring}")
    if u.N != v.N:
        raise DomainError(f"precision mismatch: {u.N} vs {v.N}")


def teichmuller(a, N: int, ring_tag: str = None) -> WittVector:
    """1/(1 - a t) truncated at t^N"""
    if ring_tag is None:
        ring_tag = INTEGERS if Fraction(a).denominator == 1 else RATIONALS
    a = _normalize(ring_tag, a)
    return WittVector(ring_tag, tuple(a**k for k in range(1, N + 1)))


def witt_zero(ring_tag: str, N: int) -> WittVector:
    """The constant series 1"""
    return WittVector(ring_tag, (0,) * N)


def witt_one(ring_tag: str, N: int) -> WittVector:
    """1/(1 - t)"""
    return teichmuller(1, N, ring_tag)


def witt_add(u: WittVector, v: WittVector) -> WittVector:
    _check_pair(u, v)
    _, t = _series_ring(u.ring)
    return WittVector.from_series(u.ring, rs_mul(u.series(), v.series(), t, u.N + 1), u.N)


def witt_neg(u: WittVector) -> WittVector:
    _, t = _series_ring(u.ring)
    return WittVector.from_series(u.ring, rs_series_inversion(u.series(), t, u.N + 1), u.N)


def witt_sub(u: WittVector, v: WittVector) -> WittVector:
    return witt_add(u, witt_neg(v))


def add_multiple(n: int, u: WittVector) -> WittVector:
    """[n]u = u(t)^n"""
    if n < 0:
        return witt_neg(add_multiple(-n, u))
    if n == 0:
        return witt_zero(u.ring, u.N)
    _, t = _series_ring(u.ring)
    return WittVector.from_series(u.ring, rs_pow(u.series(), n, t, u.N + 1), u.N)


def _ghost_components(a: Sequence, reduce: Callable = lambda x: x) -> List:
    """gamma_n = n a_n - sum_{k<n} gamma_k a_(n-k), from t u'/u = sum gamma_n t^n"""
    gamma = []
    for n in range(1, len(a) + 1):
        g = n * a[n - 1]
        for k in range(1, n):
            g -= gamma[k - 1] * a[n - k - 1]
        gamma.append(reduce(g))
    return gamma


def _ghost_inverse_components(gamma: Sequence, divide: Callable) -> List:
    a = []
    for n in range(1, len(gamma) + 1):
        s = gamma[n - 1]
        for k in range(1, n):
            s += gamma[k - 1] * a[n - k - 1]
        a.append(divide(s, n))
    return a


def ghost(u: WittVector) -> GhostVector:
    p = characteristic(u.ring)
    reduce = (lambda x: x % p) if p else (lambda x: x)
    return GhostVector(u.ring, tuple(_ghost_components(u.coeffs, reduce)))


def ghost_inverse(g: GhostVector, integral: bool = None) -> WittVector:
    """The unique u with ghost(u) = g.

    Over Z (or with integral=True) every coefficient must come out integral;
    the first failing index is reported.
    """
    if characteristic(g.ring):
        raise DomainError("ghost inversion needs division by n; undefined over F_p")
    if integral is None:
        integral = g.ring == INTEGERS

    def divide(s, n):
        value = Fraction(s) / n
        if integral and value.denominator != 1:
            raise NotIntegralError(f"ghost inversion is not integral at index {n}: {value}", index=n)
        return value

    coeffs = _ghost_inverse_components(g.components, divide)
    return WittVector(INTEGERS if integral else RATIONALS, tuple(coeffs))


# N -> universal product polynomials c_1..c_N, each a list of
# ([(index, exponent), ...], coefficient); index i > 0 is a_i, i < 0 is b_|i|
_UNIVERSAL: Dict[int, List] = {}
_UNIVERSAL_LOCK = threading.Lock()


def _build_universal(N: int) -> List:
    names = [f"a{i}" for i in range(1, N + 1)] + [f"b{i}" for i in range(1, N + 1)]
    R, *gens = ring(",".join(names), QQ)
    a, b = gens[:N], gens[N:]
    indices = list(range(1, N + 1)) + [-i for i in range(1, N + 1)]

    product = [x * y for x, y in zip(_ghost_components(a), _ghost_components(b))]
    polys = _ghost_inverse_components(product, lambda s, n: s * QQ(1, n))

    result = []
    for n, poly in enumerate(polys, start=1):
        terms = []
        for monom, coeff in poly.terms():
            if QQ.denom(coeff) != 1:
                raise NotIntegralError(f"universal product polynomial c_{n} is not integral", index=n)
            exps = [[indices[i], e] for i, e in enumerate(monom) if e]
            terms.append([exps, int(QQ.numer(coeff))])
        result.append(terms)
        logger.debug(f"c_{n}: {len(terms)} terms")
    return result


def universal_product_polynomials(N: int) -> List:
    """Integral polynomials c_n(a, b) with (1 + sum a t) ⊗ (1 + sum b t) = 1 + sum c t"""
    witt_config = config['witt']
    if N > witt_config.MAX_UNIVERSAL_PRECISION:
        raise DomainError(f"F_p multiplication supports N <= {witt_config.MAX_UNIVERSAL_PRECISION}, got {N}")

    with _UNIVERSAL_LOCK:
        for built, polys in _UNIVERSAL.items():
            if built >= N:
                return polys[:N]

        name = f"{witt_config.CACHE_PREFIX}_N{N}"
        polys = load_json_cache(name, witt_config.CACHE_VERSION)
        if polys is None or len(polys) != N:
            with OperationTimer(f"universal Witt product polynomials at N={N}", logger):
                polys = _build_universal(N)
            save_json_cache(name, witt_config.CACHE_VERSION, polys)
        _UNIVERSAL[N] = polys
        return polys


def _mul_universal(u: WittVector, v: WittVector) -> WittVector:
    p = characteristic(u.ring)
    polys = universal_product_polynomials(u.N)
    coeffs = []
    for terms in polys:
        total = 0
        for exps, c in terms:
            value = c
            for i, e in exps:
                x = u.coeffs[i - 1] if i > 0 else v.coeffs[-i - 1]
                value = value * pow(x, e, p) % p
                if not value:
                    break
            total += value
        coeffs.append(total % p)
    return WittVector(u.ring, tuple(coeffs))


def witt_mul(u: WittVector, v: WittVector) -> WittVector:
    _check_pair(u, v)
    if characteristic(u.ring):
        return _mul_universal(u, v)
    gu, gv = ghost(u), ghost(v)
    product = GhostVector(u.ring, tuple(x * y for x, y in zip(gu.components, gv.components)))
    return ghost_inverse(product)


def witt_power(u: WittVector, k: int) -> WittVector:
    """u^{⊗k}"""
    if k < 0:
        raise DomainError(f"witt_power: exponent {k} < 0")
    result = witt_one(u.ring, u.N)
    base = u
    while k:
        if k & 1:
            result = witt_mul(result, base)
        k >>= 1
        if k:
            base = witt_mul(base, base)
    return result


def truncate(u: WittVector, N: int) -> WittVector:
    return u.truncate(N)


def _lift(u: WittVector) -> WittVector:
    return WittVector(INTEGERS, u.coeffs)


def _reduce(u: WittVector, ring_tag: str) -> WittVector:
    return WittVector(ring_tag, u.coeffs)


def frobenius(n: int, u: WittVector, precision: int = None) -> WittVector:
    """Psi^n with ghost(Psi^n u)_m = ghost(u)_{nm}, at precision floor(N/n)"""
    if n < 1:
        raise DomainError(f"frobenius: n = {n} < 1")
    M = u.N // n if precision is None else precision
    if M < 1 or n * M > u.N:
        raise DomainError(f"Psi^{n} at precision {M} needs input precision {n * max(M, 1)}, got {u.N}")

    if characteristic(u.ring):
        return _reduce(frobenius(n, _lift(u), M), u.ring)

    g = ghost(u).components
    return ghost_inverse(GhostVector(u.ring, tuple(g[n * m - 1] for m in range(1, M + 1))))


def verschiebung(n: int, u: WittVector) -> WittVector:
    """V_n(u)(t) = u(t^n), truncated at the same precision"""
    if n < 1:
        raise DomainError(f"verschiebung: n = {n} < 1")
    coeffs = [0] * u.N
    for k, a in enumerate(u.coeffs, start=1):
        if n * k > u.N:
            break
        coeffs[n * k - 1] = a
    return WittVector(u.ring, tuple(coeffs))


def sigma_t(a: AdamsSequence) -> WittVector:
    """exp(sum Psi^n(a) t^n / n); the ghost components are the Adams values"""
    if not a.values:
        raise DomainError("sigma_t needs at least one Adams value")
    return ghost_inverse(GhostVector(a.ring, a.values))


def frobenius_defect(p: int, u: WittVector) -> WittVector:
    """The integral d with [p]d = Psi^p(u) ⊖ u^{⊗p}.

    Psi^p lifts the p-th power map, so the difference lies in p w(Z); d is
    its p-th series root, computed from ghost components divided by p.
    """
    if u.ring != INTEGERS:
        raise DomainError("frobenius_defect is defined over Z")
    M = u.N // p
    difference = witt_sub(frobenius(p, u), witt_power(u, p).truncate(M))
    g = ghost(difference).components
    return ghost_inverse(GhostVector(RATIONALS, tuple(Fraction(x, p) for x in g)), integral=True)


def classical_to_witt(q: Sequence[int], ring_tag: str = INTEGERS) -> WittVector:
    """prod_n 1/(1 - q_n t^n) truncated at t^len(q)"""
    N = len(q)
    R, t = _series_ring(ring_tag)
    result = R.one
    for n, qn in enumerate(q, start=1):
        qn = _normalize(ring_tag, qn)
        if qn:
            factor = rs_series_inversion(R.one - _to_domain(R.domain, qn) * t**n, t, N + 1)
            result = rs_mul(result, factor, t, N + 1)
    return WittVector.from_series(ring_tag, result, N)


def witt_to_classical(u: WittVector) -> Tuple:
    """Classical Witt coordinates q with u = prod 1/(1 - q_n t^n)"""
    R, t = _series_ring(u.ring)
    s = u.series()
    q = []
    for n in range(1, u.N + 1):
        qn = s.coeff(t**n)
        q.append(_from_domain(u.ring, qn))
        if qn:
            s = rs_mul(s, R.one - qn * t**n, t, u.N + 1)
    return tuple(q)


@dataclass(frozen=True)
class BurnsideVector:
    """Multiplicities b_1..b_N of the orbits C_n; negative entries are virtual"""

    entries: Tuple[int, ...]

    def __post_init__(self):
        if not self.entries:
            raise DomainError("Burnside vectors need precision N >= 1")
        object.__setattr__(self, "entries", tuple(int(b) for b in self.entries))

    @property
    def N(self) -> int:
        return len(self.entries)

    @classmethod
    def unit(cls, N: int) -> "BurnsideVector":
        return cls.orbit(1, N)

    @classmethod
    def orbit(cls, n: int, N: int) -> "BurnsideVector":
        """The single orbit C_n"""
        return cls(tuple(1 if k == n else 0 for k in range(1, N + 1)))

    def __getitem__(self, n: int) -> int:
        return self.entries[n - 1]

    def __add__(self, other: "BurnsideVector") -> "BurnsideVector":
        _check_burnside(self, other)
        return BurnsideVector(tuple(x + y for x, y in zip(self.entries, other.entries)))

    def scale(self, k: int) -> "BurnsideVector":
        return BurnsideVector(tuple(k * x for x in self.entries))

    def truncate(self, N: int) -> "BurnsideVector":
        if not 1 <= N <= self.N:
            raise DomainError(f"cannot truncate precision {self.N} to {N}")
        return BurnsideVector(self.entries[:N])

    def to_json(self):
        return {"N": self.N, "b": list(self.entries)}


def _check_burnside(b: BurnsideVector, c: BurnsideVector) -> None:
    if b.N != c.N:
        raise DomainError(f"precision mismatch: {b.N} vs {c.N}")


def necklace_mul(b: BurnsideVector, c: BurnsideVector) -> BurnsideVector:
    """(b.c)_n = sum over lcm(i, j) = n of gcd(i, j) b_i c_j"""
    _check_burnside(b, c)
    N = b.N
    out = [0] * N
    for i, bi in enumerate(b.entries, start=1):
        if not bi:
            continue
        for j, cj in enumerate(c.entries, start=1):
            if not cj:
                continue
            n = math.lcm(i, j)
            if n <= N:
                out[n - 1] += math.gcd(i, j) * bi * cj
    return BurnsideVector(tuple(out))


def burnside_ghost(b: BurnsideVector, n: int) -> int:
    """Fixed points of C^n: sum_{i | n} i b_i"""
    if not 1 <= n <= b.N:
        raise DomainError(f"burnside_ghost: index {n} outside 1..{b.N}")
    return sum(i * b[i] for i in divisors(n))


def burnside_to_witt(b: BurnsideVector) -> WittVector:
    """prod_n (1/(1 - t^n))^(b_n) truncated at t^N"""
    N = b.N
    R, t = _series_ring(INTEGERS)
    result = R.one
    for n, bn in enumerate(b.entries, start=1):
        if bn:
            result = rs_mul(result, rs_pow(R.one - t**n, -bn, t, N + 1), t, N + 1)
    return WittVector.from_series(INTEGERS, result, N)


def witt_to_burnside(u: WittVector) -> BurnsideVector:
    """Inverse of burnside_to_witt; the divisions by n must be exact"""
    if u.ring != INTEGERS:
        raise DomainError("witt_to_burnside needs integer Witt vectors")
    gamma = ghost(u).components
    b: List[int] = []
    for n in range(1, u.N + 1):
        rest = gamma[n - 1] - sum(d * b[d - 1] for d in divisors(n)[:-1])
        if rest % n:
            raise NotIntegralError(f"{u} is not in the image of the Burnside ring (index {n})", index=n)
        b.append(rest // n)
    return BurnsideVector(tuple(b))


def tau(q: Sequence[int]) -> BurnsideVector:
    """Burnside multiplicities matching prod 1/(1 - q_n t^n)"""
    return witt_to_burnside(classical_to_witt(q))


def necklace_numbers(m: int, N: int) -> BurnsideVector:
    """The congruence set m^(C): b_n = (1/n) sum_{d | n} mu(n/d) m^d"""
    entries = []
    for n in range(1, N + 1):
        total = sum(mobius(n // d) * m**d for d in divisors(n))
        entries.append(total // n)
    return BurnsideVector(tuple(entries))


def burnside_res(n: int, b: BurnsideVector) -> BurnsideVector:
    """res_n(C_m) = gcd(n, m) C_{lcm(n, m)/n}, at precision floor(N/n)"""
    if n < 1:
        raise DomainError(f"burnside_res: n = {n} < 1")
    K = b.N // n
    if K < 1:
        raise DomainError(f"res_{n} needs precision at least {n}, got {b.N}")
    out = [0] * K
    dropped = 0
    for m, bm in enumerate(b.entries, start=1):
        if not bm:
            continue
        g = math.gcd(n, m)
        k = m // g
        if k <= K:
            out[k - 1] += g * bm
        else:
            dropped += 1
    if dropped:
        logger.debug(f"res_{n}: {dropped} orbits beyond precision {K}")
    return BurnsideVector(tuple(out))


def burnside_ind(n: int, b: BurnsideVector) -> BurnsideVector:
    """ind_n(C_m) = C_{nm}, at precision nN"""
    if n < 1:
        raise DomainError(f"burnside_ind: n = {n} < 1")
    out = [0] * (n * b.N)
    for m, bm in enumerate(b.entries, start=1):
        out[n * m - 1] = bm
    return BurnsideVector(tuple(out))


def necklace_frobenius(n: int, b: BurnsideVector) -> BurnsideVector:
    """f_n(b)_k = sum over lcm(n, i) = nk of gcd(n, i) b_i"""
    return burnside_res(n, b)


def necklace_verschiebung(n: int, b: BurnsideVector) -> BurnsideVector:
    """v_n puts n - 1 zeros between consecutive entries"""
    return burnside_ind(n, b)


def smirnov_lambda_image(q: RationalMap, p: int, N: int) -> WittVector:
    """teich(a/b mod p) in w(F_p), the image of x under 1/(1 - (a/b) t)"""
    if q.a % p == 0 or q.b % p == 0:
        raise DomainError(f"{p} divides the numerator or denominator of {q}")
    return teichmuller(q.residue(p), N, prime_field(p))


def teichmuller_order(c: int, p: int, N: int = 3) -> int:
    """Smallest k >= 1 with teich(c)^{⊗k} equal to the unit of w(F_p)"""
    ring_tag = prime_field(p)
    c %= p
    if c == 0:
        raise DomainError("teich(0) has no multiplicative order")
    u = teichmuller(c, N, ring_tag)
    one = witt_one(ring_tag, N)
    power = u
    for k in range(1, p):
        if power == one:
            return k
        power = witt_mul(power, u)
    raise AssertionError(f"no order found for teich({c}) in w(F_{p})")


def smirnov_order(q: RationalMap, p: int, N: int = 3) -> int:
    """Order of the lambda-image of x, which recovers the Smirnov map at p"""
    order = teichmuller_order(q.residue(p), p, N)
    expected = multiplicative_order(q.residue(p), p)
    if order != expected:
        raise AssertionError(f"Teichmuller order {order} != multiplicative order {expected}")
    return order
