"""
Tests for habiro_topology: adjacency, Habiro opens and the adjacency wheel.
"""

import itertools
import math
import random
import unittest
import sys
import os
from fractions import Fraction

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from absarith.errors import DomainError
from absarith.habiro_topology import (
    HabiroOpenDescriptor,
    RootOfUnity,
    adjacency_wheel,
    adjacent,
    adjacent_roots,
    complement_of_U_p,
    connecting_prime,
    escaping_neighbors,
    in_open,
    intersect_basic,
    noncompactness_witness,
    wheel_layout,
    wheel_vertices,
)
from absarith.smirnov_cover import INFINITY, ZERO, P1Point


def root(text):
    return RootOfUnity.parse(text)


class TestRootOfUnity(unittest.TestCase):
    """Test cases for roots of unity as elements of Q/Z"""

    def test_reduction_and_arithmetic(self):
        """Test normalization into [0, 1) and group operations"""
        self.assertEqual(root("5/4"), RootOfUnity(1, 4))
        self.assertEqual(root("-1/3"), RootOfUnity(2, 3))
        self.assertEqual(root("1/3") + root("2/3"), RootOfUnity(0, 1))
        self.assertEqual(root("1/3") - root("1/12"), RootOfUnity(1, 4))
        self.assertEqual(root("1/5").scale(2), RootOfUnity(2, 5))
        self.assertEqual(root("3/8").order, 8)
        with self.assertRaises(DomainError):
            RootOfUnity(2, 4)

    def test_complex_value(self):
        """Test the complex embedding"""
        z = root("1/4").to_complex()
        self.assertAlmostEqual(z.real, 0.0, places=12)
        self.assertAlmostEqual(z.imag, 1.0, places=12)


class TestAdjacency(unittest.TestCase):
    """Test cases for the adjacency relation"""

    def test_index_examples(self):
        """Test adjacency of indices"""
        self.assertTrue(adjacent(1, 8))
        self.assertFalse(adjacent(6, 1))
        self.assertTrue(adjacent(12, 4))
        self.assertFalse(adjacent(5, 5))
        self.assertFalse(adjacent(4, 6))

    def test_root_examples(self):
        """Test adjacency of roots of unity"""
        self.assertTrue(adjacent_roots(root("1/3"), root("1/12")))
        self.assertFalse(adjacent_roots(root("0"), root("1/6")))
        self.assertTrue(adjacent_roots(root("1/5"), root("2/5")))
        self.assertFalse(adjacent_roots(root("1/5"), root("1/5")))
        self.assertEqual(connecting_prime(root("1/3"), root("1/12")), 2)

    def test_symmetry(self):
        """Test symmetry of both relations up to 500"""
        rng = random.Random(1)
        for _ in range(3000):
            m, n = rng.randrange(1, 501), rng.randrange(1, 501)
            self.assertEqual(adjacent(m, n), adjacent(n, m))
            x = RootOfUnity.of(Fraction(rng.randrange(0, m), m))
            y = RootOfUnity.of(Fraction(rng.randrange(0, n), n))
            self.assertEqual(adjacent_roots(x, y), adjacent_roots(y, x))

    def test_galois_equivariance(self):
        """Test adjacency is preserved by multiplication with units mod N"""
        for N in (12, 30, 60):
            vertices = wheel_vertices(N)
            units = [u for u in range(1, N) if math.gcd(u, N) == 1]
            for x, y in itertools.combinations(vertices, 2):
                expected = adjacent_roots(x, y)
                for u in units:
                    self.assertEqual(adjacent_roots(x.scale(u), y.scale(u)), expected)


class TestOpens(unittest.TestCase):
    """Test cases for Habiro open descriptors"""

    def test_membership_examples(self):
        """Test U_2 on [6], [12] and [15]"""
        U2 = HabiroOpenDescriptor.basic(2)
        self.assertFalse(in_open(U2, P1Point.finite(6)))
        self.assertTrue(in_open(U2, P1Point.finite(12)))
        self.assertTrue(in_open(U2, P1Point.finite(15)))
        self.assertFalse(in_open(U2, ZERO))
        self.assertTrue(in_open(HabiroOpenDescriptor.basic(2, zero=True), ZERO))

    def test_u_m_with_prime_powers(self):
        """Test U_12: 2 | n forces 8 | n and 3 | n forces 9 | n"""
        U = HabiroOpenDescriptor.basic(12)
        self.assertTrue(U.contains_index(8))
        self.assertFalse(U.contains_index(4))
        self.assertTrue(U.contains_index(72))
        self.assertFalse(U.contains_index(24))
        self.assertTrue(U.contains_index(1))

    def test_cofinite(self):
        """Test the cofinite variant"""
        U = HabiroOpenDescriptor.cofinite([1, 6], infinity=True)
        self.assertFalse(in_open(U, P1Point.finite(6)))
        self.assertTrue(in_open(U, P1Point.finite(7)))
        self.assertTrue(in_open(U, INFINITY))
        self.assertFalse(in_open(U, ZERO))

    def test_json(self):
        """Test the JSON form and round trip"""
        U = HabiroOpenDescriptor.basic(12, zero=True)
        self.assertEqual(U.to_json(), {"kind": "basic", "m": 12, "zero": True, "infinity": False})
        self.assertEqual(HabiroOpenDescriptor.from_json(U.to_json()), U)
        V = HabiroOpenDescriptor.cofinite([3, 1])
        self.assertEqual(HabiroOpenDescriptor.from_json(V.to_json()), V)

    def test_intersect_examples(self):
        """Test lcm of indices"""
        self.assertEqual(intersect_basic(2, 3), 6)
        self.assertEqual(intersect_basic(4, 6), 12)
        self.assertEqual(intersect_basic(7, 7), 7)

    def test_intersection_membership(self):
        """Test U_m ∩ U_n = U_lcm on all m, n <= 40"""
        points = range(1, 400)
        for m in range(1, 41):
            Um = HabiroOpenDescriptor.basic(m)
            for n in range(m, 41):
                Un = HabiroOpenDescriptor.basic(n)
                Ul = HabiroOpenDescriptor.basic(intersect_basic(m, n))
                for t in points:
                    self.assertEqual(Ul.contains_index(t), Um.contains_index(t) and Un.contains_index(t))

    def test_intersection_membership_random(self):
        """Test the intersection rule on random indices up to 10^4"""
        rng = random.Random(8)
        for _ in range(300):
            m, n = rng.randrange(1, 10**4), rng.randrange(1, 10**4)
            Um, Un = HabiroOpenDescriptor.basic(m), HabiroOpenDescriptor.basic(n)
            Ul = HabiroOpenDescriptor.basic(intersect_basic(m, n))
            for _ in range(50):
                t = rng.randrange(1, 10**4)
                self.assertEqual(Ul.contains_index(t), Um.contains_index(t) and Un.contains_index(t))

    def test_openness(self):
        """Test that neighbours leaving U_m are among the predicted escapes"""
        bound = 600
        for m in (2, 3, 4, 12, 30):
            U = HabiroOpenDescriptor.basic(m)
            for n in range(1, bound + 1):
                if not U.contains_index(n):
                    continue
                predicted = escaping_neighbors(m, n)
                leaving = {t for t in range(1, bound + 1) if adjacent(n, t) and not U.contains_index(t)}
                self.assertTrue(leaving <= predicted, msg=f"m={m}, n={n}: {leaving - predicted}")
                self.assertTrue(all(not U.contains_index(t) for t in predicted))

    def test_complement(self):
        """Test the complements of U_2, U_3 and U_7"""
        finite = lambda *ns: {P1Point.finite(n) for n in ns}
        self.assertEqual(complement_of_U_p(2, 10), finite(2, 6, 10) | {ZERO, INFINITY})
        self.assertEqual(complement_of_U_p(3, 10), finite(3, 6) | {ZERO, INFINITY})
        self.assertEqual(complement_of_U_p(7, 6), {ZERO, INFINITY})
        with self.assertRaises(DomainError):
            complement_of_U_p(4, 10)


class TestNoncompactness(unittest.TestCase):
    """Test cases for the non-compactness witness"""

    def test_examples(self):
        """Test the documented witnesses"""
        self.assertEqual(noncompactness_witness([2, 3]), 6)
        self.assertEqual(noncompactness_witness([5]), 5)
        self.assertEqual(noncompactness_witness([2, 3, 5]), 30)
        with self.assertRaises(DomainError):
            noncompactness_witness([])
        with self.assertRaises(DomainError):
            noncompactness_witness([2, 2])

    def test_all_subsets(self):
        """Test every nonempty subset of the first six primes"""
        primes = [2, 3, 5, 7, 11, 13]
        for size in range(1, 7):
            for subset in itertools.combinations(primes, size):
                w = noncompactness_witness(list(subset))
                for p in subset:
                    self.assertFalse(in_open(HabiroOpenDescriptor.basic(p, True, True), P1Point.finite(w)))
                for q in primes:
                    if w % q:
                        self.assertTrue(in_open(HabiroOpenDescriptor.basic(q), P1Point.finite(w)))


class TestWheel(unittest.TestCase):
    """Test cases for the adjacency wheel"""

    def test_small_wheels(self):
        """Test N = 2, 4 and 6"""
        edges = adjacency_wheel(2)
        self.assertEqual([(str(e.x), str(e.y), e.prime) for e in edges], [("0/1", "1/2", 2)])
        self.assertEqual(len(adjacency_wheel(4)), 6)
        self.assertTrue(all(e.prime == 2 for e in adjacency_wheel(4)))
        pairs = {(str(e.x), str(e.y)) for e in adjacency_wheel(6)}
        self.assertIn(("0/1", "1/2"), pairs)
        self.assertNotIn(("0/1", "1/6"), pairs)
        with self.assertRaises(DomainError):
            adjacency_wheel(1)

    def test_wheel_60(self):
        """Test that every edge of the 60-wheel has a prime-power difference"""
        edges = adjacency_wheel(60)
        self.assertTrue(edges)
        self.assertEqual({e.prime for e in edges}, {2, 3, 5})
        for e in edges:
            self.assertTrue(adjacent_roots(e.x, e.y))

    def test_layout(self):
        """Test vertices lie on the unit circle"""
        for _, x, y in wheel_layout(12):
            self.assertAlmostEqual(x * x + y * y, 1.0, places=12)


if __name__ == "__main__":
    unittest.main(verbosity=2)
