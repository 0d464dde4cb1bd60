import os
import unittest

from src.buchsbaum_rim import (
    canonical_symmetric_power_check,
    characterization_checks,
    complete_intersection_instance,
    cotangent_instance,
    default_ring,
    exterior_power_ext_check,
    is_power_of_maximal_ideal,
    mk_instance,
    null_correlation_recipe,
    resample,
    validate_and_build,
    wedge_dual_presentation,
)
from src.config import NOT_APPLICABLE, PASS
from src.hilbert import HilbertSeries
from src.modules import GradedFreeModule, ModuleMap
from src.utils.error_utils import CodimFailure, ParameterError, ResampleExhausted

SLOW = os.environ.get("BRLOCI_SLOW") == "1"


class TestValidateAndBuild(unittest.TestCase):
    def setUp(self):
        self.R = default_ring(2)

    def test_shape_checks(self):
        """f > g >= 1 and r <= n."""
        one = GradedFreeModule((0,))
        with self.assertRaises(ParameterError):
            validate_and_build(self.R, ModuleMap.from_strings(self.R, one, one, [["1"]]))
        F = GradedFreeModule((-1,) * 4)
        with self.assertRaises(ParameterError):
            validate_and_build(self.R, ModuleMap.from_strings(self.R, F, one, [["x0", "x1", "x2", "x0"]]))

    def test_codim_failure(self):
        """Degenerate maximal minors raise CodimFailure with both values."""
        F = GradedFreeModule((-1,) * 3)
        phi = ModuleMap.from_strings(self.R, F, GradedFreeModule((0,)), [["x0", "x1", "0"]])
        with self.assertRaises(CodimFailure) as ctx:
            validate_and_build(self.R, phi)
        self.assertEqual((ctx.exception.actual, ctx.exception.expected), (2, 3))

    def test_resample_exhausted(self):
        """A build that never becomes generic exhausts its attempts."""
        calls = []

        def build(attempt):
            calls.append(attempt)
            raise CodimFailure(1, 2)

        with self.assertRaises(ResampleExhausted):
            resample(build, attempts=3)
        self.assertEqual(calls, [0, 1, 2])
        self.assertEqual(resample(lambda attempt: attempt, attempts=2), 0)


class TestCotangent(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.inst = cotangent_instance(2)

    def test_invariants(self):
        """phi = (x0, x1, x2): R(-1)^3 -> R has r = 2 and c1 = -3."""
        inst = self.inst
        self.assertEqual((inst.f, inst.g, inst.r, inst.n), (3, 1, 2, 2))
        self.assertEqual(inst.codim, 3)
        self.assertEqual(inst.c1, -3)
        self.assertEqual(inst.generators.twists, (-2, -2, -2))
        self.assertEqual(inst.metadata["family"], "cotangent")

    def test_modules(self):
        """M_phi is the residue field; B_phi has rank r."""
        self.assertEqual(self.inst.M.hilbert_series(), HilbertSeries([1], 0, 0))
        self.assertEqual(self.inst.B.hilbert_series().multiplicity(), 2)
        self.assertEqual(self.inst.B.hilbert_series(), HilbertSeries([3, -1], 2, 3))

    def test_twist(self):
        """Twisting moves F and G together."""
        twisted = cotangent_instance(2, twist=3)
        self.assertEqual(twisted.F.twists, (2, 2, 2))
        self.assertEqual(twisted.G.twists, (3,))
        self.assertEqual(twisted.generators.twists, (1, 1, 1))

    def test_wedge_dual_range(self):
        with self.assertRaises(ParameterError):
            wedge_dual_presentation(self.inst, 3)
        self.assertEqual(wedge_dual_presentation(self.inst, 1).hilbert_series(), HilbertSeries([3, -1], -1, 3))

    def test_module_checks(self):
        """Single Ext module, symmetric duality and exterior Ext vanishing."""
        self.assertEqual(characterization_checks(self.inst).status, PASS)
        self.assertEqual(canonical_symmetric_power_check(self.inst, 1).status, PASS)
        self.assertEqual(exterior_power_ext_check(self.inst, 1).status, PASS)
        self.assertEqual(canonical_symmetric_power_check(self.inst, 2).status, NOT_APPLICABLE)
        self.assertEqual(exterior_power_ext_check(self.inst, 0).status, NOT_APPLICABLE)


class TestFamilies(unittest.TestCase):
    def test_complete_intersection_parameters(self):
        with self.assertRaises(ParameterError):
            complete_intersection_instance(2, [1, 1])
        with self.assertRaises(ParameterError):
            complete_intersection_instance(2, [1, 0, 1])

    def test_rank_one(self):
        """r = 1: B_phi is free of rank one."""
        inst = complete_intersection_instance(1, [1, 2], seed=2)
        self.assertEqual(inst.r, 1)
        self.assertEqual(characterization_checks(inst).status, PASS)

    def test_mk_is_power_of_maximal_ideal(self):
        """Generic linear R(-1)^(n+k) -> R^k has I(phi) = m^k."""
        inst = mk_instance(2, 2, seed=0)
        self.assertEqual(inst.r, 2)
        self.assertTrue(is_power_of_maximal_ideal(inst, 2))
        self.assertFalse(is_power_of_maximal_ideal(inst, 1))
        with self.assertRaises(ParameterError):
            mk_instance(2, 0)

    def test_null_correlation(self):
        """The paired section is a syzygy with coordinates of full codimension."""
        inst, section = null_correlation_recipe(1, [1, 1], seed=0)
        self.assertEqual(section.source.twists, (-2,))
        self.assertTrue((inst.phi @ section).is_zero())
        self.assertEqual(inst.metadata["c"], 2)

    def test_null_correlation_parameters(self):
        with self.assertRaises(ParameterError):
            null_correlation_recipe(2, [1, 1, 1])
        with self.assertRaises(ParameterError):
            null_correlation_recipe(3, [1, 2, 2, 2])

    @unittest.skipUnless(SLOW, "set BRLOCI_SLOW=1 for module checks on P^3")
    def test_cotangent_p3_module_checks(self):
        """The module-level checks hold for r = 3."""
        inst = cotangent_instance(3)
        self.assertEqual(characterization_checks(inst).status, PASS)
        for i in (1, 2):
            self.assertEqual(canonical_symmetric_power_check(inst, i).status, PASS)
            self.assertEqual(exterior_power_ext_check(inst, i).status, PASS)


if __name__ == "__main__":
    unittest.main()
