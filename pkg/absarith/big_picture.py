"""
Conway's big picture: projective classes of lattices L_{M,g/h} in Q^2, the
hyperdistance between them, p-trees, Hecke operators and the action of the
Bost-Connes generators on formal sums of lattices.
"""

import logging
import math
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, NamedTuple, Optional, Sequence, Set, Tuple

from sympy import divisors, isprime

try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex

from .config import config
from .errors import BudgetExceededError, DomainError
from .exact_arith import prime_factors, prime_power_base

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]


@dataclass(frozen=True, order=True)
class Lattice:
    """L_{M,g/h} = <M e1 + (g/h) e2, e2> up to scaling"""

    M: Fraction
    gh: Fraction = Fraction(0)

    def __post_init__(self):
        M, gh = Fraction(self.M), Fraction(self.gh)
        if M <= 0:
            raise DomainError(f"lattice needs M > 0, got {M}")
        if not 0 <= gh < 1:
            raise DomainError(f"g/h = {gh} outside [0, 1)")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "gh", gh)

    @property
    def g(self) -> int:
        return self.gh.numerator

    @property
    def h(self) -> int:
        return self.gh.denominator

    def matrix(self) -> Matrix:
        return ((self.M, self.gh), (Fraction(0), Fraction(1)))

    def to_json(self):
        return {"M": str(self.M), "gh": str(self.gh)}

    @classmethod
    def from_json(cls, data) -> "Lattice":
        return cls(Fraction(data["M"]), Fraction(data.get("gh", "0")))

    def __str__(self):
        if self.gh == 0:
            return f"L({self.M})"
        return f"L({self.M}, {self.gh})"


IDENTITY = Lattice(Fraction(1))


def parse_lattice(text: str) -> Lattice:
    """'M' or 'M,g/h' with rational M"""
    try:
        parts = [s.strip() for s in text.split(",")]
        if len(parts) == 1:
            return Lattice(Fraction(parts[0]))
        if len(parts) == 2:
            return Lattice(Fraction(parts[0]), Fraction(parts[1]))
    except (ValueError, ZeroDivisionError) as e:
        raise DomainError(f"cannot read a lattice from {text!r}: {e}") from e
    raise DomainError(f"cannot read a lattice from {text!r}: expected 'M' or 'M,g/h'")


def _det(A: Matrix) -> Fraction:
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(2)), Fraction(0)) for j in range(2))
        for i in range(2)
    )


def _inverse(A: Matrix) -> Matrix:
    d = _det(A)
    if d == 0:
        raise DomainError("matrix is singular")
    return ((A[1][1] / d, -A[0][1] / d), (-A[1][0] / d, A[0][0] / d))


def normalize(basis: Sequence[Sequence]) -> Lattice:
    """Canonical (M, g/h) of the lattice spanned by the two rows.

    Denominators are cleared, the rows are brought to Hermite form
    (a, b), (0, d), then everything is divided by d and b/d is reduced mod 1.
    """
    rows = [[Fraction(x) for x in row] for row in basis]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise DomainError("normalize expects a 2x2 matrix")
    if _det(tuple(tuple(r) for r in rows)) == 0:
        raise DomainError("basis matrix is singular")

    scale = math.lcm(*(x.denominator for r in rows for x in r))
    (x1, y1), (x2, y2) = [[int(x * scale) for x in r] for r in rows]

    s, t, a = igcdex(x1, x2)
    s, t, a = int(s), int(t), int(a)
    b = s * y1 + t * y2
    # second row of the unimodular transform kills the first column
    d = (x2 // a) * y1 - (x1 // a) * y2
    if a < 0:
        a, b = -a, -b
    d = abs(d)
    return Lattice(Fraction(a, d), Fraction(b, d) % 1)


def hyperdistance(L: Lattice, K: Lattice) -> int:
    """det(alpha D) for D = M_L M_K^-1 scaled to a primitive integral matrix"""
    D = _matmul(L.matrix(), _inverse(K.matrix()))
    entries = [x for row in D for x in row]
    denominator = math.lcm(*(x.denominator for x in entries))
    content = math.gcd(*(int(x * denominator) for x in entries))
    alpha = Fraction(denominator, content)
    value = alpha * alpha * _det(D)
    if value.denominator != 1 or value <= 0:
        raise AssertionError(f"hyperdistance of {L}, {K} is not a positive integer: {value}")
    return int(value)


def primitive_matrices(n: int) -> List[Tuple[int, int, int]]:
    """(alpha, beta, delta) with alpha delta = n, 0 <= beta < delta, gcd = 1"""
    result = []
    for alpha in divisors(n):
        delta = n // alpha
        for beta in range(delta):
            if math.gcd(alpha, beta, delta) == 1:
                result.append((int(alpha), beta, int(delta)))
    return result


def ball_size(n: int) -> int:
    """n prod_{p | n} (1 + 1/p)"""
    size = n
    for p in prime_factors(n):
        size = size // p * (p + 1)
    return size


def ball(L: Lattice, n: int, limit: Optional[int] = None) -> Set[Lattice]:
    """All lattices at hyperdistance exactly n from L"""
    if n < 1:
        raise DomainError(f"ball radius must be positive, got {n}")
    if limit is None:
        limit = config['bigpicture'].BALL_LIMIT
    size = ball_size(n)
    if size > limit:
        raise BudgetExceededError(f"ball of radius {n} has {size} lattices, limit is {limit}")

    B = L.matrix()
    result = set()
    for alpha, beta, delta in primitive_matrices(n):
        A = ((Fraction(alpha), Fraction(beta)), (Fraction(0), Fraction(delta)))
        result.add(normalize(_matmul(A, B)))
    logger.debug(f"ball({L}, {n}): {len(result)} lattices")
    return result


def neighbors(L: Lattice, p: int) -> Set[Lattice]:
    """The p + 1 lattices at hyperdistance p"""
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    return ball(L, p)


def reversed_form(L: Lattice) -> Lattice:
    """(M, g/h) <-> (1/(h^2 M), g'/h) with g g' = 1 mod h"""
    g, h = L.g, L.h
    g_inv = pow(g, -1, h) if h > 1 else 0
    return Lattice(1 / (h * h * L.M), Fraction(g_inv, h))


def lattices_related(L: Lattice, K: Lattice) -> Optional[int]:
    """p when the hyperdistance is p^k with k >= 1, otherwise None"""
    return prime_power_base(hyperdistance(L, K))


class TreeEdge(NamedTuple):
    parent: Lattice
    child: Lattice


def p_tree(L: Lattice, p: int, depth: int) -> List[TreeEdge]:
    """Breadth-first edges of the p-tree around L, up to depth steps"""
    if depth > config['bigpicture'].TREE_MAX_DEPTH:
        raise BudgetExceededError(f"tree depth {depth} exceeds {config['bigpicture'].TREE_MAX_DEPTH}")
    seen = {L}
    edges = []
    queue = deque([(L, 0)])
    while queue:
        vertex, level = queue.popleft()
        if level == depth:
            continue
        for K in sorted(neighbors(vertex, p)):
            if K in seen:
                continue
            seen.add(K)
            edges.append(TreeEdge(vertex, K))
            queue.append((K, level + 1))
    logger.info(f"{p}-tree around {L} to depth {depth}: {len(seen)} vertices")
    return edges


@dataclass(frozen=True)
class LatticeSum:
    """A finitely supported integer combination of lattices"""

    terms: Mapping[Lattice, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {L: int(c) for L, c in sorted(self.terms.items()) if c})

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    @classmethod
    def of(cls, *lattices: Lattice) -> "LatticeSum":
        terms: Dict[Lattice, int] = {}
        for L in lattices:
            terms[L] = terms.get(L, 0) + 1
        return cls(terms)

    def __add__(self, other: "LatticeSum") -> "LatticeSum":
        terms = dict(self.terms)
        for L, c in other.terms.items():
            terms[L] = terms.get(L, 0) + c
        return LatticeSum(terms)

    def __sub__(self, other: "LatticeSum") -> "LatticeSum":
        return self + other.scale(-1)

    def scale(self, k: int) -> "LatticeSum":
        return LatticeSum({L: k * c for L, c in self.terms.items()})

    def items(self):
        return self.terms.items()

    def __len__(self):
        return len(self.terms)

    def to_json(self):
        return [dict(L.to_json(), c=c) for L, c in self.terms.items()]

    @classmethod
    def from_json(cls, data) -> "LatticeSum":
        terms: Dict[Lattice, int] = {}
        for item in data:
            L = Lattice.from_json(item)
            terms[L] = terms.get(L, 0) + int(item.get("c", 1))
        return cls(terms)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(str(L) if c == 1 else f"{c}·{L}" for L, c in self.terms.items())


def hecke(n: int, s: LatticeSum) -> LatticeSum:
    """T_n: each lattice goes to the sum of the lattices at hyperdistance n"""
    total: Dict[Lattice, int] = {}
    for L, c in s.items():
        for K in ball(L, n):
            total[K] = total.get(K, 0) + c
    return LatticeSum(total)


def hecke_classical(n: int, s: LatticeSum) -> LatticeSum:
    """sum over d^2 | n of T_{n/d^2}: every index-n sublattice up to scaling"""
    total = LatticeSum()
    for d in divisors(n):
        if n % (d * d) == 0:
            total = total + hecke(n // (d * d), s)
    return total


class BostConnesGenerator(NamedTuple):
    """e_n, e*_n or e(a/b)"""

    kind: str
    n: int = 1
    shift: Fraction = Fraction(0)

    def __str__(self):
        if self.kind == "e":
            return f"e_{self.n}"
        if self.kind == "e*":
            return f"e*_{self.n}"
        return f"e({self.shift})"


_GENERATOR = re.compile(r"^\s*(e\*?)_?\s*(\d+)\s*$")
_CHARACTER = re.compile(r"^\s*e\(\s*(-?\d+\s*/\s*\d+|-?\d+)\s*\)\s*$")


def parse_generator(text: str) -> BostConnesGenerator:
    """'e_3', 'e*_2' or 'e(1/2)'"""
    match = _CHARACTER.match(text)
    if match:
        return BostConnesGenerator("char", 1, Fraction(match.group(1).replace(" ", "")) % 1)
    match = _GENERATOR.match(text)
    if match:
        n = int(match.group(2))
        if n < 1:
            raise DomainError(f"generator index must be positive in {text!r}")
        return BostConnesGenerator(match.group(1), n)
    raise DomainError(f"cannot read a Bost-Connes generator from {text!r}")


def _apply_to_lattice(gen: BostConnesGenerator, L: Lattice) -> LatticeSum:
    c, d = L.M.numerator, L.M.denominator
    if gen.kind == "e":
        # e_n L_{c/d, g/h} = L_{nc/d, rho_m(g/h)}, m = (n, d), rho_m summing the m preimages
        m = math.gcd(gen.n, d)
        M = Fraction(gen.n * c, d)
        return LatticeSum.of(*(Lattice(M, ((L.gh + k) / m) % 1) for k in range(m)))
    if gen.kind == "e*":
        # e*_n L_{c/d, g/h} = (n, c) L_{c/(nd), Psi^{n/m}(g/h)}, m = (n, c)
        m = math.gcd(gen.n, c)
        image = Lattice(Fraction(c, gen.n * d), (gen.n // m * L.gh) % 1)
        return LatticeSum({image: m})
    if gen.kind == "char":
        # e(a/b) L_{c/d, g/h} = L_{c/d, Psi^c(a/b) + g/h}
        return LatticeSum.of(Lattice(L.M, (c * gen.shift + L.gh) % 1))
    raise DomainError(f"unknown generator kind {gen.kind!r}")


def bost_connes_apply(gen: BostConnesGenerator, s: LatticeSum) -> LatticeSum:
    total = LatticeSum()
    for L, coeff in s.items():
        total = total + _apply_to_lattice(gen, L).scale(coeff)
    return total
