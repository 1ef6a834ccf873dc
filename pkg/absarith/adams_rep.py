"""
Adams operations on the representation ring R(G) of a finite group, worked
from character-table data: class sizes, power maps and character values.
"""

import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, FrozenSet, List, NamedTuple, Sequence, Tuple, Union

from sympy import isprime

from .config import config
from .errors import DomainError, TableError
from .exact_arith import X, prime_factors
from .habiro_ring import CyclotomicNumber

logger = logging.getLogger(__name__)


def _embed(value: CyclotomicNumber, N: int) -> CyclotomicNumber:
    """Z[zeta_n] -> Z[zeta_N] for n | N"""
    if N % value.N:
        raise TableError(f"value in Z[zeta_{value.N}] does not embed in Z[zeta_{N}]")
    return CyclotomicNumber(N, value.poly.compose(X, X ** (N // value.N)))


def _parse_value(raw) -> CyclotomicNumber:
    if isinstance(raw, int):
        return CyclotomicNumber.from_int(1, raw)
    if isinstance(raw, dict) and "N" in raw and "coeffs" in raw:
        return CyclotomicNumber.from_coefficients(int(raw["N"]), [int(c) for c in raw["coeffs"]])
    raise TableError(f"character value {raw!r} is neither an integer nor {{'N', 'coeffs'}}")


@dataclass(frozen=True)
class CharacterTable:
    name: str
    labels: Tuple[str, ...]
    sizes: Tuple[int, ...]
    # prime -> image class index of each class under x -> x^p
    power_maps: Dict[int, Tuple[int, ...]]
    # chars[i][x] = chi_(i+1)(class x), all in Z[zeta_N]
    chars: Tuple[Tuple[CyclotomicNumber, ...], ...]
    N: int = 1

    def __post_init__(self):
        h = len(self.labels)
        if len(self.sizes) != h or len(self.chars) != h:
            raise TableError(f"{self.name}: {h} classes but {len(self.chars)} characters")
        if any(len(row) != h for row in self.chars):
            raise TableError(f"{self.name}: ragged character rows")
        for p, image in self.power_maps.items():
            if not isprime(p) or len(image) != h or any(not 0 <= i < h for i in image):
                raise TableError(f"{self.name}: malformed power map for {p}")
        self._check_orthogonality()

    @property
    def order(self) -> int:
        return sum(self.sizes)

    @property
    def class_count(self) -> int:
        return len(self.labels)

    def _check_orthogonality(self) -> None:
        h = self.class_count
        for x in range(h):
            for y in range(x, h):
                total = CyclotomicNumber.from_int(self.N, 0)
                for row in self.chars:
                    total = total + row[x] * row[y].conjugate()
                expected = self.order // self.sizes[x] if x == y else 0
                if self.order % self.sizes[x] or total != expected:
                    raise TableError(f"{self.name}: column orthogonality fails at classes "
                                     f"{self.labels[x]}, {self.labels[y]}")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError as e:
            raise DomainError(f"{self.name} has no class {label!r}") from e

    def _galois_power_map(self, p: int) -> Tuple[int, ...]:
        """x^p is the class whose values are the zeta -> zeta^p conjugates of x's"""
        columns = [tuple(row[x] for row in self.chars) for x in range(self.class_count)]
        image = []
        for column in columns:
            target = tuple(v.galois(p) for v in column)
            try:
                image.append(columns.index(target))
            except ValueError as e:
                raise TableError(f"{self.name}: no class matches the {p}-th power conjugate") from e
        return tuple(image)

    def prime_power_map(self, p: int) -> Tuple[int, ...]:
        if p in self.power_maps:
            return self.power_maps[p]
        if self.order % p == 0:
            raise TableError(f"{self.name}: power map for {p} | |G| must be supplied")
        image = self._galois_power_map(p)
        self.power_maps[p] = image
        logger.debug(f"{self.name}: derived {p}-power map {image}")
        return image

    def power_map(self, n: int) -> Tuple[int, ...]:
        """Class of x^n for each class x"""
        if n < 1:
            raise DomainError(f"power map needs n >= 1, got {n}")
        image = tuple(range(self.class_count))
        m = n
        for p in prime_factors(n):
            step = self.prime_power_map(p)
            while m % p == 0:
                image = tuple(step[i] for i in image)
                m //= p
        return image


@dataclass(frozen=True)
class VirtualCharacter:
    """Coordinates in the basis chi_1, ..., chi_h of irreducible characters"""

    coords: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def irreducible(cls, i: int, h: int) -> "VirtualCharacter":
        """chi_i, counting from 1"""
        if not 1 <= i <= h:
            raise DomainError(f"character index {i} outside 1..{h}")
        return cls(tuple(1 if k == i else 0 for k in range(1, h + 1)))

    def __add__(self, other: "VirtualCharacter") -> "VirtualCharacter":
        return VirtualCharacter(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "VirtualCharacter") -> "VirtualCharacter":
        return VirtualCharacter(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def to_json(self):
        return list(self.coords)

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coords, start=1):
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            body = f"χ{i}" if abs(c) == 1 else f"{abs(c)}χ{i}"
            terms.append((sign, body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def class_function(chi: VirtualCharacter, T: CharacterTable) -> List[CyclotomicNumber]:
    """Values of chi on each class"""
    if len(chi.coords) != T.class_count:
        raise DomainError(f"character has {len(chi.coords)} coordinates, table has {T.class_count}")
    values = []
    for x in range(T.class_count):
        total = CyclotomicNumber.from_int(T.N, 0)
        for c, row in zip(chi.coords, T.chars):
            if c:
                total = total + row[x] * c
        values.append(total)
    return values


def decompose(values: Sequence[CyclotomicNumber], T: CharacterTable) -> VirtualCharacter:
    """Coordinates <f, chi_i> = sum |x| f(x) conj(chi_i(x)) / |G|, required integral"""
    coords = []
    for i, row in enumerate(T.chars, start=1):
        total = CyclotomicNumber.from_int(T.N, 0)
        for size, value, chi_value in zip(T.sizes, values, row):
            total = total + value * chi_value.conjugate() * size
        if not total.is_integer() or total.integer_value() % T.order:
            raise TableError(f"{T.name}: inner product with χ{i} is not an integer ({total} / {T.order})")
        coords.append(total.integer_value() // T.order)
    return VirtualCharacter(tuple(coords))


def adams(n: int, chi: VirtualCharacter, T: CharacterTable) -> VirtualCharacter:
    """Psi^n(chi)(g) = chi(g^n)"""
    values = class_function(chi, T)
    image = T.power_map(n)
    return decompose([values[image[x]] for x in range(T.class_count)], T)


def character_product(chi: VirtualCharacter, xi: VirtualCharacter, T: CharacterTable) -> VirtualCharacter:
    """Tensor product: pointwise product of class functions"""
    return decompose([a * b for a, b in zip(class_function(chi, T), class_function(xi, T))], T)


def discriminant(T: CharacterTable) -> Fraction:
    """|G|^h / prod of class sizes"""
    return Fraction(T.order ** T.class_count, math.prod(T.sizes))


def monoid_action(n: int, T: CharacterTable) -> Dict[str, str]:
    """n.[x] = [x] o Psi^n on algebra maps, i.e. the class of x^n"""
    image = T.power_map(n)
    return {T.labels[x]: T.labels[image[x]] for x in range(T.class_count)}


def stable_set(n: int, T: CharacterTable) -> FrozenSet[str]:
    """n.S, the image of the monoid action"""
    return frozenset(monoid_action(n, T).values())


class ConductorData(NamedTuple):
    r0: int
    exponents: Dict[int, int]
    stable_sets: Dict[int, FrozenSet[str]]


def conductor_data(T: CharacterTable) -> ConductorData:
    """r_0 = prod p^(a_p), a_p least with p^(a_p + 1).S = p^(a_p).S"""
    exponents = {}
    for p in prime_factors(T.order) if T.order > 1 else []:
        a = 0
        while stable_set(p ** (a + 1), T) != stable_set(p**a, T):
            a += 1
        if a:
            exponents[p] = a
    r0 = math.prod(p**a for p, a in exponents.items())
    sets = {d: stable_set(d, T) for d in range(1, r0 + 1) if r0 % d == 0}
    return ConductorData(r0, exponents, sets)


def table_from_json(data, name: str = "table") -> CharacterTable:
    try:
        classes = data["classes"]
        labels = tuple(str(c["label"]) for c in classes)
        sizes = tuple(int(c["size"]) for c in classes)
        power_maps: Dict[int, List[int]] = {}
        for x, c in enumerate(classes):
            for p, target in c.get("power", {}).items():
                power_maps.setdefault(int(p), [None] * len(classes))[x] = labels.index(str(target))
        raw_chars = [[_parse_value(v) for v in row] for row in data["chars"]]
    except (KeyError, TypeError, ValueError) as e:
        raise TableError(f"{name}: malformed character table JSON: {e}") from e

    if any(None in image for image in power_maps.values()):
        raise TableError(f"{name}: incomplete power map")

    N = math.lcm(1, *(v.N for row in raw_chars for v in row))
    chars = tuple(tuple(_embed(v, N) for v in row) for row in raw_chars)
    return CharacterTable(
        name=data.get("name", name),
        labels=labels,
        sizes=sizes,
        power_maps={p: tuple(image) for p, image in power_maps.items()},
        chars=chars,
        N=N,
    )


def load_character_table(name_or_path: Union[str, Path]) -> CharacterTable:
    """A JSON file path, or the name of a bundled table such as 'S3'"""
    path = Path(name_or_path)
    if not path.exists():
        path = config['files'].TABLES_DIR / f"{str(name_or_path).lower()}.json"
    if not path.exists():
        raise TableError(f"no character table {name_or_path!r}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Failed to read character table {path}: {e}")
        raise TableError(f"cannot read {path}: {e}") from e
    table = table_from_json(data, path.stem)
    logger.debug(f"Loaded {table.name}: order {table.order}, {table.class_count} classes")
    return table


def cyclic_table(n: int) -> CharacterTable:
    """C_n = <g>: classes g^j, characters chi_k(g^j) = zeta_n^(jk)"""
    if n < 1:
        raise DomainError(f"cyclic_table needs n >= 1, got {n}")
    labels = tuple(str(j) for j in range(n))
    chars = tuple(tuple(CyclotomicNumber.zeta(n, j * k) for j in range(n)) for k in range(n))
    power_maps = {p: tuple(p * j % n for j in range(n)) for p in (prime_factors(n) if n > 1 else [])}
    return CharacterTable(f"C{n}", labels, (1,) * n, power_maps, chars, n)
