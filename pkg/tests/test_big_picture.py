"""
Tests for big_picture: lattice normal forms, hyperdistance, p-trees, Hecke
operators and the Bost-Connes generators.
"""

import math
import random
import unittest
import sys
import os
from fractions import Fraction

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from absarith.big_picture import (
    IDENTITY,
    Lattice,
    LatticeSum,
    ball,
    ball_size,
    bost_connes_apply,
    hecke,
    hecke_classical,
    hyperdistance,
    lattices_related,
    neighbors,
    normalize,
    p_tree,
    parse_generator,
    parse_lattice,
    reversed_form,
)
from absarith.errors import BudgetExceededError, DomainError


def L(M, gh=0):
    return Lattice(Fraction(M), Fraction(gh))


def random_lattice(rng):
    M = Fraction(rng.randint(1, 30), rng.randint(1, 30))
    h = rng.randint(1, 12)
    g = rng.choice([g for g in range(h) if math.gcd(g, h) == 1])
    return Lattice(M, Fraction(g, h))


class TestLattice(unittest.TestCase):
    """Test cases for lattices and their normal form"""

    def test_validation(self):
        """Test rejection of M <= 0 and g/h outside [0, 1)"""
        with self.assertRaises(DomainError):
            L(0)
        with self.assertRaises(DomainError):
            L(1, Fraction(3, 2))

    def test_normalize_examples(self):
        """Test the identity, diag(2, 1) and <e1 + e2, 2 e2>"""
        self.assertEqual(normalize([[1, 0], [0, 1]]), IDENTITY)
        self.assertEqual(normalize([[2, 0], [0, 1]]), L(2))
        self.assertEqual(normalize([[1, 1], [0, 2]]), L(Fraction(1, 2), Fraction(1, 2)))
        self.assertEqual(normalize([[Fraction(1, 3), 0], [0, Fraction(1, 3)]]), IDENTITY)
        with self.assertRaises(DomainError):
            normalize([[1, 2], [2, 4]])

    def test_normalize_is_basis_independent(self):
        """Test that unimodular changes of basis and scaling do not matter"""
        rng = random.Random(1)
        for _ in range(100):
            lattice = random_lattice(rng)
            (a, b), (c, d) = lattice.matrix()
            u = rng.choice([((1, 1), (0, 1)), ((0, 1), (1, 0)), ((2, 1), (1, 1)), ((1, 0), (-3, 1))])
            k = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            rows = [
                [k * (u[0][0] * a + u[0][1] * c), k * (u[0][0] * b + u[0][1] * d)],
                [k * (u[1][0] * a + u[1][1] * c), k * (u[1][0] * b + u[1][1] * d)],
            ]
            self.assertEqual(normalize(rows), lattice)

    def test_parse_and_json(self):
        """Test the string and JSON forms"""
        self.assertEqual(parse_lattice("1/2,1/2"), L(Fraction(1, 2), Fraction(1, 2)))
        self.assertEqual(parse_lattice("4"), L(4))
        with self.assertRaises(DomainError):
            parse_lattice("1,2,3")
        lattice = L(Fraction(1, 2), Fraction(1, 2))
        self.assertEqual(lattice.to_json(), {"M": "1/2", "gh": "1/2"})
        self.assertEqual(Lattice.from_json(lattice.to_json()), lattice)


class TestHyperdistance(unittest.TestCase):
    """Test cases for the hyperdistance"""

    def test_examples(self):
        """Test delta(L, L), delta(L_1, L_2) and delta(L_1, L_6)"""
        self.assertEqual(hyperdistance(L(3, Fraction(1, 4)), L(3, Fraction(1, 4))), 1)
        self.assertEqual(hyperdistance(IDENTITY, L(2)), 2)
        self.assertEqual(hyperdistance(IDENTITY, L(6)), 6)
        self.assertEqual(lattices_related(IDENTITY, L(4)), 2)
        self.assertIsNone(lattices_related(IDENTITY, L(6)))
        self.assertIsNone(lattices_related(IDENTITY, IDENTITY))

    def test_roots_of_unity_placement(self):
        """Test delta(L_M, L_{M,g/h}) = h^2 for h <= 12"""
        for M in (Fraction(1), Fraction(3, 2), Fraction(5)):
            for h in range(1, 13):
                for g in range(h):
                    if math.gcd(g, h) == 1:
                        self.assertEqual(hyperdistance(L(M), L(M, Fraction(g, h))), h * h)

    def test_symmetry(self):
        """Test symmetry on random pairs"""
        rng = random.Random(2)
        for _ in range(500):
            a, b = random_lattice(rng), random_lattice(rng)
            self.assertEqual(hyperdistance(a, b), hyperdistance(b, a))

    def test_triangle_inequality(self):
        """Test log delta(a, c) <= log delta(a, b) + log delta(b, c)"""
        rng = random.Random(3)
        for _ in range(500):
            a, b, c = random_lattice(rng), random_lattice(rng), random_lattice(rng)
            self.assertLessEqual(hyperdistance(a, c), hyperdistance(a, b) * hyperdistance(b, c))


class TestNeighbors(unittest.TestCase):
    """Test cases for neighbors, balls and trees"""

    def test_neighbors_of_identity(self):
        """Test the three 2-neighbors of L_1"""
        expected = {L(2), L(Fraction(1, 2)), L(Fraction(1, 2), Fraction(1, 2))}
        self.assertEqual(neighbors(IDENTITY, 2), expected)
        self.assertTrue({IDENTITY, L(4)} <= neighbors(L(2), 2))
        with self.assertRaises(DomainError):
            neighbors(IDENTITY, 4)

    def test_neighbor_counts(self):
        """Test p + 1 neighbors at hyperdistance p"""
        rng = random.Random(4)
        for p in (2, 3, 5):
            for _ in range(10):
                lattice = random_lattice(rng)
                found = neighbors(lattice, p)
                self.assertEqual(len(found), p + 1)
                for K in found:
                    self.assertEqual(hyperdistance(lattice, K), p)

    def test_ball_counts(self):
        """Test |B(L, 1)| = 1 and |B(L, p^2)| = p^2 + p"""
        self.assertEqual(ball(IDENTITY, 1), {IDENTITY})
        for p in (2, 3, 5):
            found = ball(IDENTITY, p * p)
            self.assertEqual(len(found), p * p + p)
            self.assertTrue(all(hyperdistance(IDENTITY, K) == p * p for K in found))
        self.assertEqual(len(ball(IDENTITY, 12)), ball_size(12))
        self.assertEqual(ball_size(12), 24)

    def test_ball_budget(self):
        """Test the ball size limit"""
        with self.assertRaises(BudgetExceededError):
            ball(IDENTITY, 12, limit=10)
        with self.assertRaises(DomainError):
            ball(IDENTITY, 0)

    def test_two_tree(self):
        """Test that the 2-tree around L_1 is a tree with valence 3"""
        depth = 4
        edges = p_tree(IDENTITY, 2, depth)
        children = [e.child for e in edges]
        self.assertEqual(len(edges), 3 + 6 + 12 + 24)
        self.assertEqual(len(set(children)), len(children))
        self.assertNotIn(IDENTITY, children)
        for e in edges:
            self.assertEqual(hyperdistance(e.parent, e.child), 2)
        for v in {IDENTITY, *children}:
            self.assertEqual(len(neighbors(v, 2)), 3)
        with self.assertRaises(BudgetExceededError):
            p_tree(IDENTITY, 2, 100)


class TestReversedForm(unittest.TestCase):
    """Test cases for the reversed-form involution"""

    def test_examples(self):
        """Test h = 1, h = 2 and h = 5"""
        self.assertEqual(reversed_form(L(3)), L(Fraction(1, 3)))
        self.assertEqual(reversed_form(L(1, Fraction(1, 2))), L(Fraction(1, 4), Fraction(1, 2)))
        self.assertEqual(reversed_form(L(1, Fraction(2, 5))), L(Fraction(1, 25), Fraction(3, 5)))

    def test_involution(self):
        """Test that applying it twice gives back the lattice"""
        rng = random.Random(5)
        for _ in range(500):
            lattice = random_lattice(rng)
            self.assertEqual(reversed_form(reversed_form(lattice)), lattice)


class TestHecke(unittest.TestCase):
    """Test cases for Hecke operators"""

    def test_examples(self):
        """Test T_1 and T_2 on L_1"""
        s = LatticeSum.of(IDENTITY, L(3))
        self.assertEqual(hecke(1, s), s)
        expected = LatticeSum.of(L(2), L(Fraction(1, 2)), L(Fraction(1, 2), Fraction(1, 2)))
        self.assertEqual(hecke(2, LatticeSum.of(IDENTITY)), expected)

    def test_hecke_relation(self):
        """Test T_p T_{p^a} = p T_{p^(a-1)} + T_{p^(a+1)} for a = 2, 3"""
        base = LatticeSum.of(IDENTITY)
        for p in (2, 3):
            for a in (2, 3):
                left = hecke(p, hecke(p**a, base))
                right = hecke(p ** (a - 1), base).scale(p) + hecke(p ** (a + 1), base)
                self.assertEqual(left, right, msg=f"p={p}, a={a}")

    def test_first_step_returns_to_root(self):
        """Test T_p T_p = (p + 1) T_1 + T_{p^2} on primitive balls"""
        base = LatticeSum.of(IDENTITY)
        for p in (2, 3):
            self.assertEqual(hecke(p, hecke(p, base)), base.scale(p + 1) + hecke(p * p, base))

    def test_classical_relation(self):
        """Test the classical Hecke relation for every a >= 1"""
        base = LatticeSum.of(L(Fraction(2, 3), Fraction(1, 2)))
        for p in (2, 3):
            for a in (1, 2, 3):
                left = hecke_classical(p, hecke_classical(p**a, base))
                right = hecke_classical(p ** (a - 1), base).scale(p) + hecke_classical(p ** (a + 1), base)
                self.assertEqual(left, right, msg=f"p={p}, a={a}")

    def test_lattice_sum_algebra(self):
        """Test addition, cancellation and the JSON form"""
        s = LatticeSum.of(IDENTITY, L(2), L(2))
        self.assertEqual(s.terms[L(2)], 2)
        self.assertEqual(len(s - LatticeSum.of(L(2), L(2))), 1)
        self.assertEqual(len(s - s), 0)
        self.assertEqual(LatticeSum.from_json(s.to_json()), s)
        self.assertEqual(LatticeSum.of(IDENTITY).to_json(), [{"M": "1", "gh": "0", "c": 1}])


class TestBostConnes(unittest.TestCase):
    """Test cases for the Bost-Connes generators"""

    def test_parse(self):
        """Test the generator syntax"""
        self.assertEqual(str(parse_generator("e_3")), "e_3")
        self.assertEqual(str(parse_generator("e*_2")), "e*_2")
        self.assertEqual(parse_generator("e(-1/3)").shift, Fraction(2, 3))
        with self.assertRaises(DomainError):
            parse_generator("f_2")

    def test_identity(self):
        """Test that e_1 and e*_1 act trivially"""
        s = LatticeSum.of(L(Fraction(3, 4), Fraction(1, 5)), L(2))
        self.assertEqual(bost_connes_apply(parse_generator("e_1"), s), s)
        self.assertEqual(bost_connes_apply(parse_generator("e*_1"), s), s)

    def test_e_star_after_e(self):
        """Test e*_n e_n = n on L_{c/d} with gcd(n, cd) = 1"""
        for n, c, d in ((2, 3, 5), (3, 2, 7), (5, 1, 1)):
            s = LatticeSum.of(L(Fraction(c, d)))
            image = bost_connes_apply(parse_generator(f"e*_{n}"), bost_connes_apply(parse_generator(f"e_{n}"), s))
            self.assertEqual(image, s.scale(n))

    def test_character(self):
        """Test e(1/2) L_3 = L_{3, 1/2}"""
        image = bost_connes_apply(parse_generator("e(1/2)"), LatticeSum.of(L(3)))
        self.assertEqual(image, LatticeSum.of(L(3, Fraction(1, 2))))

    def test_e_n_spreads_over_preimages(self):
        """Test that e_2 on L_{1/2} sums over the two halves"""
        image = bost_connes_apply(parse_generator("e_2"), LatticeSum.of(L(Fraction(1, 2))))
        self.assertEqual(image, LatticeSum.of(L(1), L(1, Fraction(1, 2))))


if __name__ == "__main__":
    unittest.main(verbosity=2)
