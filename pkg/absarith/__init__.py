"""
absarith - exact arithmetic for geometry over the field with one element.

This package provides Smirnov cover maps with their fiber and defect
calculus, the Habiro topology and ring, big Witt / Burnside / necklace
rings, Conway's big picture with Hecke and Bost-Connes operators, nimber
fields matched against roots of unity, and Adams operations on
representation rings.
"""

__version__ = "0.1.0"
__author__ = "absarith developers"

from .config import config
from .errors import (
    AbsArithError,
    DomainError,
    SizeError,
    NotIntegralError,
    TableError,
    BudgetExceededError,
    IncompleteFactorizationError,
    UsageError,
)
from .logger import setup_logging, OperationTimer, log_file_info
from .exact_arith import (
    factorize,
    multiplicative_order,
    cyclotomic_poly,
    cyclotomic_comaximal,
    factorial_digits,
)
from .smirnov_cover import (
    RationalMap,
    P1Point,
    SpecZPoint,
    evaluate,
    fiber,
    divisor_of,
    degree_of,
    ramification_index,
    defect,
    fiber_defect,
    abc_report,
    exotic_preimage,
    graph_scan,
)
from .habiro_topology import (
    RootOfUnity,
    HabiroOpenDescriptor,
    adjacent,
    adjacent_roots,
    in_open,
    intersect_basic,
    complement_of_U_p,
    noncompactness_witness,
    adjacency_wheel,
)
from .habiro_ring import (
    CyclotomicNumber,
    HabiroElement,
    to_factorial_basis,
    evaluate_at_root,
    kontsevich_element,
    zagier_rhs,
)
from .witt_burnside import (
    WittVector,
    BurnsideVector,
    teichmuller,
    witt_add,
    witt_mul,
    ghost,
    ghost_inverse,
    frobenius,
    verschiebung,
    sigma_t,
    necklace_mul,
    burnside_ghost,
    burnside_to_witt,
    witt_to_burnside,
    tau,
    burnside_res,
    burnside_ind,
)
from .big_picture import (
    Lattice,
    LatticeSum,
    normalize,
    hyperdistance,
    ball,
    neighbors,
    hecke,
    bost_connes_apply,
)
from .nimber_field import (
    nim_add,
    nim_mul,
    nim_mul_oracle,
    nim_pow,
    tower_generator,
    discrete_log,
    nimber_to_root,
    frobenius_orbit,
    orbit_to_polynomial,
    polynomial_to_root,
    divisor_mul,
)
from .adams_rep import (
    CharacterTable,
    VirtualCharacter,
    adams,
    discriminant,
    monoid_action,
    conductor_data,
    load_character_table,
)

__all__ = [
    "config",
    "AbsArithError",
    "DomainError",
    "SizeError",
    "NotIntegralError",
    "TableError",
    "BudgetExceededError",
    "IncompleteFactorizationError",
    "UsageError",
    "setup_logging",
    "OperationTimer",
    "log_file_info",
    "factorize",
    "multiplicative_order",
    "cyclotomic_poly",
    "cyclotomic_comaximal",
    "factorial_digits",
    "RationalMap",
    "P1Point",
    "SpecZPoint",
    "evaluate",
    "fiber",
    "divisor_of",
    "degree_of",
    "ramification_index",
    "defect",
    "fiber_defect",
    "abc_report",
    "exotic_preimage",
    "graph_scan",
    "RootOfUnity",
    "HabiroOpenDescriptor",
    "adjacent",
    "adjacent_roots",
    "in_open",
    "intersect_basic",
    "complement_of_U_p",
    "noncompactness_witness",
    "adjacency_wheel",
    "CyclotomicNumber",
    "HabiroElement",
    "to_factorial_basis",
    "evaluate_at_root",
    "kontsevich_element",
    "zagier_rhs",
    "WittVector",
    "BurnsideVector",
    "teichmuller",
    "witt_add",
    "witt_mul",
    "ghost",
    "ghost_inverse",
    "frobenius",
    "verschiebung",
    "sigma_t",
    "necklace_mul",
    "burnside_ghost",
    "burnside_to_witt",
    "witt_to_burnside",
    "tau",
    "burnside_res",
    "burnside_ind",
    "Lattice",
    "LatticeSum",
    "normalize",
    "hyperdistance",
    "ball",
    "neighbors",
    "hecke",
    "bost_connes_apply",
    "nim_add",
    "nim_mul",
    "nim_mul_oracle",
    "nim_pow",
    "tower_generator",
    "discrete_log",
    "nimber_to_root",
    "frobenius_orbit",
    "orbit_to_polynomial",
    "polynomial_to_root",
    "divisor_mul",
    "CharacterTable",
    "VirtualCharacter",
    "adams",
    "discriminant",
    "monoid_action",
    "conductor_data",
    "load_character_table",
]
