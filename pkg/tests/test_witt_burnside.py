"""
Tests for witt_burnside: big Witt vectors, the Burnside ring of the
infinite cyclic group, the necklace algebra and the maps between them.
"""

import json
import math
import os
import random
import shutil
import sys
import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from sympy import divisors, mobius

from absarith import witt_burnside as wb
from absarith.config import config
from absarith.errors import DomainError, NotIntegralError
from absarith.exact_arith import multiplicative_order
from absarith.smirnov_cover import RationalMap, SpecZPoint, evaluate
from absarith.witt_burnside import (
    AdamsSequence,
    BurnsideVector,
    GhostVector,
    WittVector,
    add_multiple,
    burnside_ghost,
    burnside_ind,
    burnside_res,
    burnside_to_witt,
    classical_to_witt,
    frobenius,
    frobenius_defect,
    ghost,
    ghost_inverse,
    necklace_frobenius,
    necklace_mul,
    necklace_numbers,
    necklace_verschiebung,
    sigma_t,
    smirnov_lambda_image,
    smirnov_order,
    tau,
    teichmuller,
    teichmuller_order,
    universal_product_polynomials,
    verschiebung,
    witt_add,
    witt_mul,
    witt_neg,
    witt_one,
    witt_power,
    witt_sub,
    witt_to_burnside,
    witt_to_classical,
    witt_zero,
)


def random_witt(rng, N, ring="Z", low=-3, high=3):
    return WittVector(ring, tuple(rng.randint(low, high) for _ in range(N)))


def random_burnside(rng, N, low=-2, high=2):
    return BurnsideVector(tuple(rng.randint(low, high) for _ in range(N)))


def mobius_necklace(m, N):
    return tuple(sum(int(mobius(n // d)) * m**d for d in divisors(n)) // n for n in range(1, N + 1))


class CacheDirTestCase(unittest.TestCase):
    """Points the on-disk cache at a temporary directory"""

    def setUp(self):
        """Set up test environment"""
        self.temp_dir = Path(tempfile.mkdtemp())
        self.env_name = config['files'].CACHE_ENV
        self.previous = os.environ.get(self.env_name)
        os.environ[self.env_name] = str(self.temp_dir)

    def tearDown(self):
        """Clean up test environment"""
        if self.previous is None:
            os.environ.pop(self.env_name, None)
        else:
            os.environ[self.env_name] = self.previous
        shutil.rmtree(self.temp_dir, ignore_errors=True)


class TestWittBasics(unittest.TestCase):
    """Test cases for Witt vector construction and addition"""

    def test_teichmuller(self):
        """Test boxed 1, boxed 0 and teich(2)"""
        self.assertEqual(teichmuller(1, 4).coeffs, (1, 1, 1, 1))
        self.assertEqual(teichmuller(0, 4), witt_zero("Z", 4))
        self.assertEqual(teichmuller(2, 3).coeffs, (2, 4, 8))
        self.assertEqual(teichmuller(Fraction(1, 2), 2).ring, "Q")
        self.assertEqual(teichmuller(3, 2, "F5").coeffs, (3, 4))

    def test_addition(self):
        """Test the additive unit, inverses and teich(a) + teich(-a)"""
        rng = random.Random(1)
        u = random_witt(rng, 8)
        self.assertEqual(witt_add(u, witt_zero("Z", 8)), u)
        self.assertEqual(witt_add(u, witt_neg(u)), witt_zero("Z", 8))
        self.assertEqual(witt_sub(u, u), witt_zero("Z", 8))
        s = witt_add(teichmuller(3, 6), teichmuller(-3, 6))
        self.assertEqual(s.coeffs, (0, 9, 0, 81, 0, 729))

    def test_mismatch(self):
        """Test rejection of mixed rings and precisions"""
        with self.assertRaises(DomainError):
            witt_add(teichmuller(1, 3), teichmuller(1, 4))
        with self.assertRaises(DomainError):
            witt_add(teichmuller(1, 3), teichmuller(1, 3, "F3"))
        with self.assertRaises(DomainError):
            WittVector("F4", (1,))

    def test_add_multiple(self):
        """Test [1]u = u and [2]teich(a) = 1/(1 - at)^2"""
        rng = random.Random(2)
        u = random_witt(rng, 6)
        self.assertEqual(add_multiple(1, u), u)
        self.assertEqual(add_multiple(2, teichmuller(3, 5)).coeffs, tuple((k + 1) * 3**k for k in range(1, 6)))
        self.assertEqual(add_multiple(-1, u), witt_neg(u))

    def test_json(self):
        """Test the JSON form"""
        u = teichmuller(2, 3)
        self.assertEqual(u.to_json(), {"ring": "Z", "N": 3, "coeffs": [2, 4, 8]})
        self.assertEqual(WittVector.from_json(u.to_json()), u)
        q = teichmuller(Fraction(1, 2), 2)
        self.assertEqual(q.to_json()["coeffs"], ["1/2", "1/4"])
        self.assertEqual(WittVector.from_json(q.to_json()), q)


class TestGhost(unittest.TestCase):
    """Test cases for ghost components"""

    def test_examples(self):
        """Test ghost of teich(a), boxed 0 and 1/(1 - t^2)"""
        self.assertEqual(ghost(teichmuller(3, 5)).components, (3, 9, 27, 81, 243))
        self.assertEqual(ghost(witt_zero("Z", 4)).components, (0, 0, 0, 0))
        self.assertEqual(ghost(verschiebung(2, witt_one("Z", 6))).components, (0, 2, 0, 2, 0, 2))

    def test_inverse(self):
        """Test ghost_inverse on examples and random vectors"""
        self.assertEqual(ghost_inverse(GhostVector("Z", (2, 4, 8))), teichmuller(2, 3))
        self.assertEqual(ghost_inverse(GhostVector("Z", (0, 0))), witt_zero("Z", 2))
        rng = random.Random(3)
        for _ in range(50):
            u = random_witt(rng, 10)
            self.assertEqual(ghost_inverse(ghost(u)), u)

    def test_non_integral(self):
        """Test that the first failing index is reported"""
        with self.assertRaises(NotIntegralError) as ctx:
            ghost_inverse(GhostVector("Z", (1, 0, 0)))
        self.assertEqual(ctx.exception.index, 2)
        self.assertEqual(ghost_inverse(GhostVector("Q", (1, 0))).coeffs, (1, Fraction(1, 2)))
        with self.assertRaises(DomainError):
            ghost_inverse(GhostVector("F3", (1, 0)))

    def test_homomorphism(self):
        """Test ghost(u + v) = ghost(u) + ghost(v) and ghost(u * v) = ghost(u) ghost(v)"""
        rng = random.Random(4)
        for _ in range(100):
            u, v = random_witt(rng, 12), random_witt(rng, 12)
            gu, gv = ghost(u).components, ghost(v).components
            self.assertEqual(ghost(witt_add(u, v)).components, tuple(x + y for x, y in zip(gu, gv)))
            self.assertEqual(ghost(witt_mul(u, v)).components, tuple(x * y for x, y in zip(gu, gv)))


class TestWittRing(unittest.TestCase):
    """Test cases for the ring structure at precision 16"""

    N = 16

    def test_teichmuller_multiplicative(self):
        """Test teich(a) * teich(b) = teich(ab)"""
        for a, b in ((2, 3), (-1, 5), (0, 7), (4, -2)):
            self.assertEqual(witt_mul(teichmuller(a, self.N), teichmuller(b, self.N)), teichmuller(a * b, self.N))

    def test_ring_axioms(self):
        """Test associativity, commutativity, distributivity and units"""
        rng = random.Random(5)
        one, zero = witt_one("Z", self.N), witt_zero("Z", self.N)
        for _ in range(10):
            u, v, w = (random_witt(rng, self.N) for _ in range(3))
            self.assertEqual(witt_mul(u, v), witt_mul(v, u))
            self.assertEqual(witt_mul(witt_mul(u, v), w), witt_mul(u, witt_mul(v, w)))
            self.assertEqual(witt_add(witt_add(u, v), w), witt_add(u, witt_add(v, w)))
            self.assertEqual(witt_mul(u, witt_add(v, w)), witt_add(witt_mul(u, v), witt_mul(u, w)))
            self.assertEqual(witt_mul(u, one), u)
            self.assertEqual(witt_mul(u, zero), zero)

    def test_product_of_verschiebungs(self):
        """Test 1/(1 - t^2) * 1/(1 - t^3) through its ghost components"""
        one = witt_one("Z", 18)
        product = witt_mul(verschiebung(2, one), verschiebung(3, one))
        self.assertEqual(ghost(product).components, tuple(6 if n % 6 == 0 else 0 for n in range(1, 19)))
        self.assertEqual(product, verschiebung(6, one))

    def test_power(self):
        """Test tensor powers of a Teichmuller vector"""
        self.assertEqual(witt_power(teichmuller(2, 6), 3), teichmuller(8, 6))
        self.assertEqual(witt_power(teichmuller(2, 6), 0), witt_one("Z", 6))


class TestFrobeniusVerschiebung(unittest.TestCase):
    """Test cases for Psi^n, V_n and their relations"""

    N = 24

    def test_examples(self):
        """Test Psi^n teich(a), Psi^1 and Psi^2 on 1/(1 - t^2)"""
        self.assertEqual(frobenius(3, teichmuller(2, 12)), teichmuller(8, 4))
        rng = random.Random(6)
        u = random_witt(rng, 8)
        self.assertEqual(frobenius(1, u), u)
        image = frobenius(2, verschiebung(2, witt_one("Z", 8)))
        self.assertEqual(ghost(image).components, (2, 2, 2, 2))
        self.assertEqual(image, add_multiple(2, witt_one("Z", 4)))
        with self.assertRaises(DomainError):
            frobenius(2, u, precision=5)

    def test_verschiebung(self):
        """Test V_1, V_2 on boxed 1 and the ghost rule for V_n"""
        rng = random.Random(7)
        u = random_witt(rng, 12)
        self.assertEqual(verschiebung(1, u), u)
        self.assertEqual(verschiebung(2, witt_one("Z", 4)).coeffs, (0, 1, 0, 1))
        for n in (2, 3, 4):
            g, gv = ghost(u).components, ghost(verschiebung(n, u)).components
            for m in range(1, 13):
                self.assertEqual(gv[m - 1], n * g[m // n - 1] if m % n == 0 else 0)

    def test_psi_after_v(self):
        """Test Psi^n V_n = [n]"""
        rng = random.Random(8)
        for _ in range(5):
            u = random_witt(rng, self.N)
            for n in (1, 2, 3, 4):
                self.assertEqual(frobenius(n, verschiebung(n, u)), add_multiple(n, u).truncate(self.N // n))

    def test_commuting(self):
        """Test Psi^n Psi^m = Psi^nm and Psi^n V_m = V_m Psi^n for coprime m, n"""
        rng = random.Random(9)
        for _ in range(5):
            u = random_witt(rng, self.N)
            for n in (1, 2, 3, 4):
                for m in (1, 2, 3, 4):
                    self.assertEqual(frobenius(n, frobenius(m, u)), frobenius(n * m, u))
                    self.assertEqual(frobenius(n, frobenius(m, u)), frobenius(m, frobenius(n, u)))
                    if math.gcd(n, m) == 1:
                        self.assertEqual(frobenius(n, verschiebung(m, u)), verschiebung(m, frobenius(n, u)))

    def test_frobenius_defect(self):
        """Test [p]d = Psi^p(u) - u^{*p} with d integral for p <= 7"""
        rng = random.Random(10)
        for p in (2, 3, 5, 7):
            for _ in range(3):
                u = random_witt(rng, 16, low=-2, high=2)
                d = frobenius_defect(p, u)
                self.assertEqual(d.ring, "Z")
                M = 16 // p
                expected = witt_sub(frobenius(p, u), witt_power(u, p).truncate(M))
                self.assertEqual(add_multiple(p, d), expected)

    def test_frobenius_defect_of_teichmuller(self):
        """Test that Teichmuller vectors have zero defect"""
        self.assertEqual(frobenius_defect(3, teichmuller(5, 12)), witt_zero("Z", 4))


class TestSigma(unittest.TestCase):
    """Test cases for sigma_t"""

    def test_trivial_structure(self):
        """Test sigma_t(1) = 1/(1 - t) and sigma_t(2) = 1/(1 - t)^2"""
        self.assertEqual(sigma_t(AdamsSequence.trivial(1, 6)), witt_one("Z", 6))
        self.assertEqual(sigma_t(AdamsSequence.trivial(2, 5)).coeffs, (2, 3, 4, 5, 6))

    def test_toric_structure(self):
        """Test sigma_t of x^n at x = c is teich(c)"""
        self.assertEqual(sigma_t(AdamsSequence.toric(3, 6)), teichmuller(3, 6))
        self.assertEqual(sigma_t(AdamsSequence.toric(Fraction(2, 3), 4)), teichmuller(Fraction(2, 3), 4))

    def test_not_lambda_data(self):
        """Test that inconsistent Adams values are rejected"""
        with self.assertRaises(NotIntegralError):
            sigma_t(AdamsSequence("Z", (1, 2)))


class TestClassicalCoordinates(unittest.TestCase):
    """Test cases for prod 1/(1 - q_n t^n)"""

    def test_roundtrip(self):
        """Test witt_to_classical inverts classical_to_witt"""
        rng = random.Random(11)
        for _ in range(30):
            q = tuple(rng.randint(-4, 4) for _ in range(10))
            self.assertEqual(witt_to_classical(classical_to_witt(q)), q)

    def test_single_factor(self):
        """Test q = (m, 0, ...) gives teich(m)"""
        self.assertEqual(classical_to_witt((5, 0, 0, 0)), teichmuller(5, 4))


class TestBurnside(unittest.TestCase):
    """Test cases for the Burnside ring and necklace algebra"""

    def test_necklace_mul_examples(self):
        """Test the unit C_1, C_2 C_2 = 2 C_2 and C_2 C_3 = C_6"""
        rng = random.Random(12)
        b = random_burnside(rng, 8)
        self.assertEqual(necklace_mul(b, BurnsideVector.unit(8)), b)
        c2 = BurnsideVector.orbit(2, 8)
        self.assertEqual(necklace_mul(c2, c2), c2.scale(2))
        self.assertEqual(necklace_mul(c2, BurnsideVector.orbit(3, 8)), BurnsideVector.orbit(6, 8))

    def test_burnside_ghost(self):
        """Test fixed point counts of C_1, C_2 and the congruence set 2^(C)"""
        unit, c2 = BurnsideVector.unit(8), BurnsideVector.orbit(2, 8)
        necklaces = necklace_numbers(2, 8)
        for n in range(1, 9):
            self.assertEqual(burnside_ghost(unit, n), 1)
            self.assertEqual(burnside_ghost(c2, n), 2 if n % 2 == 0 else 0)
            self.assertEqual(burnside_ghost(necklaces, n), 2**n)
        with self.assertRaises(DomainError):
            burnside_ghost(unit, 9)

    def test_to_witt_examples(self):
        """Test s_t on C_1, C_2 and the necklace numbers of 2"""
        self.assertEqual(burnside_to_witt(BurnsideVector.unit(5)), witt_one("Z", 5))
        self.assertEqual(burnside_to_witt(BurnsideVector.orbit(2, 4)).coeffs, (0, 1, 0, 1))
        self.assertEqual(necklace_numbers(2, 6).entries, (2, 1, 2, 3, 6, 9))
        self.assertEqual(burnside_to_witt(necklace_numbers(2, 10)), teichmuller(2, 10))

    def test_to_burnside(self):
        """Test the inverse map and its integrality check"""
        self.assertEqual(witt_to_burnside(witt_one("Z", 6)), BurnsideVector.unit(6))
        self.assertEqual(witt_to_burnside(teichmuller(2, 6)).entries, (2, 1, 2, 3, 6, 9))
        rng = random.Random(13)
        for _ in range(100):
            b = random_burnside(rng, 12)
            self.assertEqual(witt_to_burnside(burnside_to_witt(b)), b)
        with self.assertRaises(DomainError):
            witt_to_burnside(teichmuller(Fraction(1, 2), 3))

    def test_tau(self):
        """Test tau on (m, 0, ...), zero and (0, 1, 0, ...)"""
        for m in (2, 3, 5):
            self.assertEqual(tau((m,) + (0,) * 23).entries, mobius_necklace(m, 24))
        self.assertEqual(tau((0,) * 6), BurnsideVector((0,) * 6))
        self.assertEqual(tau((0, 1, 0, 0)), BurnsideVector.orbit(2, 4))

    def test_res_ind_examples(self):
        """Test res_2 on C_2, C_3, C_4 and ind_2 on C_3"""
        self.assertEqual(burnside_res(2, BurnsideVector.orbit(2, 8)).entries, (2, 0, 0, 0))
        self.assertEqual(burnside_res(2, BurnsideVector.orbit(3, 8)), BurnsideVector.orbit(3, 4))
        self.assertEqual(burnside_res(2, BurnsideVector.orbit(4, 8)).entries, (0, 2, 0, 0))
        self.assertEqual(burnside_ind(2, BurnsideVector.orbit(3, 4)), BurnsideVector.orbit(6, 8))
        rng = random.Random(14)
        b = random_burnside(rng, 6)
        self.assertEqual(burnside_ind(1, b), b)
        for n in (2, 3):
            induced = burnside_ind(n, b)
            for m in range(1, 6 * n + 1):
                expected = n * burnside_ghost(b, m // n) if m % n == 0 else 0
                self.assertEqual(burnside_ghost(induced, m), expected)

    def test_necklace_operators(self):
        """Test v_2(1, 2, 3), f_2 on C_2 and f_n v_n = n"""
        self.assertEqual(necklace_verschiebung(2, BurnsideVector((1, 2, 3))).entries, (0, 1, 0, 2, 0, 3))
        self.assertEqual(necklace_frobenius(2, BurnsideVector.orbit(2, 6)).entries, (2, 0, 0))
        rng = random.Random(15)
        b = random_burnside(rng, 8)
        for n in (2, 3, 4):
            self.assertEqual(necklace_frobenius(n, necklace_verschiebung(n, b)), b.scale(n))


class TestDressSiebeneicher(unittest.TestCase):
    """Test cases for the Burnside to Witt dictionary at precision 24"""

    N = 24

    def test_ghost_compatibility(self):
        """Test burnside_ghost = ghost of s_t"""
        rng = random.Random(16)
        for _ in range(10):
            b = random_burnside(rng, self.N)
            g = ghost(burnside_to_witt(b)).components
            for n in range(1, self.N + 1):
                self.assertEqual(burnside_ghost(b, n), g[n - 1])

    def test_products(self):
        """Test s_t(b c) = s_t(b) * s_t(c)"""
        rng = random.Random(17)
        for _ in range(5):
            b, c = random_burnside(rng, self.N), random_burnside(rng, self.N)
            self.assertEqual(burnside_to_witt(necklace_mul(b, c)), witt_mul(burnside_to_witt(b), burnside_to_witt(c)))

    def test_res_and_ind(self):
        """Test s_t res_n = Psi^n s_t and s_t ind_n = V_n s_t"""
        rng = random.Random(18)
        for _ in range(5):
            b = random_burnside(rng, self.N)
            u = burnside_to_witt(b)
            for n in (1, 2, 3, 4, 6):
                self.assertEqual(burnside_to_witt(burnside_res(n, b)), frobenius(n, u))
                self.assertEqual(burnside_to_witt(burnside_ind(n, b)).truncate(self.N), verschiebung(n, u))


class TestPrimeFields(CacheDirTestCase):
    """Test cases for Witt vectors over F_p"""

    def test_multiplication_matches_integers(self):
        """Test that F_p products are reductions of integer products"""
        rng = random.Random(19)
        for p in (2, 3, 5):
            tag = wb.prime_field(p)
            for _ in range(10):
                u, v = random_witt(rng, 6), random_witt(rng, 6)
                expected = WittVector(tag, witt_mul(u, v).coeffs)
                self.assertEqual(witt_mul(WittVector(tag, u.coeffs), WittVector(tag, v.coeffs)), expected)

    def test_universal_cache(self):
        """Test that the universal polynomials are written and reloaded"""
        wb._UNIVERSAL.clear()
        polys = universal_product_polynomials(4)
        path = self.temp_dir / f"{config['witt'].CACHE_PREFIX}_N4.json"
        self.assertTrue(path.exists())
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        self.assertEqual(data["version"], config['witt'].CACHE_VERSION)
        wb._UNIVERSAL.clear()
        self.assertEqual(universal_product_polynomials(4), polys)
        # c_1 = a_1 b_1
        self.assertEqual(polys[0], [[[[1, 1], [-1, 1]], 1]])

    def test_precision_limit(self):
        """Test the precision ceiling for F_p multiplication"""
        limit = config['witt'].MAX_UNIVERSAL_PRECISION
        u = teichmuller(1, limit + 1, "F2")
        with self.assertRaises(DomainError):
            witt_mul(u, u)

    def test_frobenius_over_prime_field(self):
        """Test Psi^n over F_p through the integer lift"""
        self.assertEqual(frobenius(2, teichmuller(3, 6, "F7")), teichmuller(2, 3, "F7"))

    def test_teichmuller_order(self):
        """Test the tensor order of teich(a/b) against the Smirnov map"""
        rng = random.Random(20)
        primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
        checked = 0
        while checked < 50:
            p = rng.choice(primes)
            a, b = rng.randrange(-40, 41), rng.randrange(1, 41)
            if a % p == 0 or b % p == 0:
                continue
            try:
                q = RationalMap.of(Fraction(a, b))
            except DomainError:
                continue
            order = smirnov_order(q, p)
            self.assertEqual(order, multiplicative_order(q.residue(p), p))
            self.assertEqual(evaluate(q, SpecZPoint.prime(p)).n, order)
            self.assertEqual(smirnov_lambda_image(q, p, 3), teichmuller(q.residue(p), 3, wb.prime_field(p)))
            checked += 1
        self.assertEqual(teichmuller_order(2, 7), 3)
        with self.assertRaises(DomainError):
            teichmuller_order(0, 5)


if __name__ == "__main__":
    unittest.main(verbosity=2)
