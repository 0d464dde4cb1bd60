import unittest
from pathlib import Path

from src.buchsbaum_rim import battery_instance, cotangent_instance
from src.config import BATTERY_SETTINGS, INSTANCES, NOT_APPLICABLE, PASS
from src.groebner import ModulePresentation
from src.ideals import equal
from src.instance_io import build_instance, load_instance
from src.modules import GradedFreeModule, ModuleMap
from src.resolution import BettiTable
from src.ring import GradedRing
from src.sections import (
    analyze,
    build_section,
    k_buchsbaum_check,
    minimality_precondition,
    section_from_lift,
    section_ideal_second_route,
    top_dimensional_part,
    tor_splitting_check,
    verify_resolution,
)
from src.utils.error_utils import DegreeInfeasible, ParameterError


class TestBuildSection(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.br = cotangent_instance(2, twist=3)
        cls.section = build_section(cls.br, GradedFreeModule((0,)), seed=0)

    def test_rank_checks(self):
        """t must lie in 1..r-1."""
        with self.assertRaises(ParameterError):
            build_section(self.br, GradedFreeModule((0, 0)))

    def test_degree_infeasible(self):
        """A column of P above every generator admits no map into B_phi."""
        with self.assertRaises(DegreeInfeasible):
            build_section(self.br, GradedFreeModule((2,)))

    def test_general_section(self):
        """A general section of degree zero cuts out three points by three quadrics."""
        sec = self.section
        self.assertEqual((sec.t, sec.p, sec.codim), (1, 0, 2))
        self.assertTrue((self.br.phi @ sec.psi).is_zero())
        self.assertEqual(len(sec.ideal), 3)
        self.assertTrue(all(f.degree() == 2 for f in sec.ideal))
        self.assertEqual(sec.metadata["seed"], 0)

    def test_seeded_sections_are_reproducible(self):
        again = build_section(self.br, GradedFreeModule((0,)), seed=0)
        self.assertEqual(again.psi, self.section.psi)

    def test_ideal_routes(self):
        """The minors of the lift agree with the minors through B0."""
        self.assertEqual(section_ideal_second_route(self.section).status, PASS)

    def test_minimality(self):
        """Degree one coefficients keep psi inside m B_phi."""
        self.assertEqual(minimality_precondition(self.section).status, PASS)


class TestLiftedSection(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.br = cotangent_instance(2, twist=3)
        ring = cls.br.ring
        psi = ModuleMap.from_strings(ring, GradedFreeModule((1,)), cls.br.F, [["x1"], ["-x0"], ["0"]])
        cls.section = section_from_lift(cls.br, psi)

    def test_lift_validation(self):
        """Lifts outside ker phi are rejected."""
        ring = self.br.ring
        bad = ModuleMap.from_strings(ring, GradedFreeModule((1,)), self.br.F, [["x1"], ["x0"], ["0"]])
        with self.assertRaises(ParameterError):
            section_from_lift(self.br, bad)

    def test_minimal_generator(self):
        """The Koszul syzygy is a minimal generator of B_phi."""
        result = minimality_precondition(self.section)
        self.assertTrue(result.failed)
        self.assertIn("minimal generators", result.detail)

    def test_hull_of_complete_intersection(self):
        """I(psi) = (x0, x1) is its own top-dimensional part."""
        x0, x1, _ = self.br.ring.gens
        self.assertTrue(equal(self.br.ring, top_dimensional_part(self.section), [x0, x1]))

    def test_resolution_not_applicable(self):
        """A minimal-generator section does not have the predicted Betti table."""
        result = verify_resolution(self.section)
        self.assertEqual(result.status, NOT_APPLICABLE)
        self.assertIn("beta_", result.detail)
        self.assertEqual(self.section.hull_betti, BettiTable({(0, 0): 1, (1, 1): 2, (2, 2): 1}))

    def test_second_route_needs_coefficients(self):
        self.assertEqual(section_ideal_second_route(self.section).status, NOT_APPLICABLE)


class TestTorSplitting(unittest.TestCase):
    def test_complete_intersection(self):
        """A self-dual Koszul module satisfies every inequality."""
        R = GradedRing(["x", "y", "z"])
        x, y, _ = R.gens
        self.assertEqual(tor_splitting_check(ModulePresentation.cyclic(R, [x, y])).status, PASS)

    def test_residue_field(self):
        """R/m has a single nonzero Ext, so both sides agree."""
        R = GradedRing(["x", "y", "z"])
        self.assertEqual(tor_splitting_check(ModulePresentation.cyclic(R, R.gens)).status, PASS)

    def test_quotient_ring(self):
        """The check only runs over a polynomial ring."""
        Q = GradedRing(["x", "y", "z"], quotient=["x^2 + y^2 + z^2"])
        x, y, _ = Q.gens
        self.assertEqual(tor_splitting_check(ModulePresentation.cyclic(Q, [x, y])).status, NOT_APPLICABLE)


class TestAnalyze(unittest.TestCase):
    def test_three_points_in_the_plane(self):
        """r + t odd on P^2: ACM points of type 2, every claim holds."""
        br = cotangent_instance(2, twist=3)
        report = analyze(build_section(br, GradedFreeModule((0,)), seed=1), full=False)
        self.assertEqual(report.failed, [])
        self.assertEqual(report.hull_degree, 3)
        self.assertEqual(report.hull_dimension, 1)
        self.assertEqual(report.depth, 1)
        self.assertTrue(report.ideal_unmixed)
        self.assertTrue(report.saturated)
        self.assertTrue(report.acm)
        self.assertFalse(report.ag)
        self.assertEqual(report.cm_type, 2)
        self.assertEqual(report.betti_J, BettiTable({(0, 0): 1, (1, 2): 3, (2, 3): 2}))
        self.assertEqual(report.claim("resolution_shape").status, PASS)
        self.assertEqual(report.claim("k_buchsbaum").status, NOT_APPLICABLE)
        self.assertTrue(report.j_over_i.is_zero())

    def test_three_points_full(self):
        """The complex, Tor and instance-level checks also hold on P^2."""
        br = cotangent_instance(2, twist=3)
        report = analyze(build_section(br, GradedFreeModule((0,)), seed=1))
        self.assertEqual(report.failed, [])
        for claim in ("en_homology", "dual_en_cohomology", "tor_splitting", "section_ideal_routes"):
            self.assertEqual(report.claim(claim).status, PASS, claim)

    def test_five_points_in_space(self):
        """r + t even on P^3: I has an embedded point, its hull is 5 AG points."""
        br = cotangent_instance(3, twist=3)
        report = analyze(build_section(br, GradedFreeModule((0,)), seed=0))
        self.assertEqual(report.failed, [])
        self.assertEqual(report.hull_degree, 5)
        self.assertEqual(report.hull_dimension, 1)
        self.assertEqual(report.depth, 0)
        self.assertFalse(report.saturated)
        self.assertFalse(report.ideal_unmixed)
        self.assertTrue(report.ag)
        self.assertEqual(report.intermediate_positions, [0])
        self.assertEqual(report.j_over_i.value(2), 1)
        self.assertEqual(report.claim("k_buchsbaum").status, PASS)
        self.assertEqual(report.claim("gorenstein_symmetry").status, PASS)


class TestMkFamily(unittest.TestCase):
    def test_square_of_maximal_ideal(self):
        """I(phi) = m^2 on P^3: the intermediate Ext is killed by m^2 and not by m."""
        _, section = build_instance(load_instance(Path(INSTANCES, "m2-p3-t1.inst")), seed=1)
        self.assertEqual(k_buchsbaum_check(section, 2).status, PASS)


class TestBattery(unittest.TestCase):
    """General sections of r+1 linear forms on P^3 and P^4, three seeds per point."""

    GRID = [(n, r, t) for n in (3, 4) for r in range(2, n + 1) for t in range(1, r)]

    @classmethod
    def setUpClass(cls):
        cls.reports = []
        for n, r, t in cls.GRID:
            br = battery_instance(n, r, 0, BATTERY_SETTINGS["section_twist"])
            for seed in range(3):
                section = build_section(br, GradedFreeModule((0,) * t), seed=seed)
                cls.reports.append(((n, r, t, seed), analyze(section, full=False)))

    def test_battery_size(self):
        self.assertGreaterEqual(len(self.reports), 20)

    def test_depth_dichotomy(self):
        """depth R/I = n - r + 1 when r + t is odd, n - r otherwise."""
        for (n, r, t, seed), report in self.reports:
            with self.subTest(n=n, r=r, t=t, seed=seed):
                self.assertEqual(report.depth, n - r + 1 if (r + t) % 2 else n - r)
                self.assertEqual(report.claim("depth_dichotomy").status, PASS)

    def test_unmixedness_and_saturation(self):
        """I is unmixed iff r + t is odd and fails to be saturated iff r = n with r + t even."""
        for (n, r, t, seed), report in self.reports:
            odd = (r + t) % 2 == 1
            with self.subTest(n=n, r=r, t=t, seed=seed):
                self.assertEqual(report.ideal_unmixed, odd)
                self.assertEqual(report.saturated, odd or r < n)
                self.assertEqual(report.hull_equals_saturation, odd or r == n)

    def test_hull_quotient(self):
        """J/I has the predicted Hilbert function, and vanishes when r + t is odd."""
        for (n, r, t, seed), report in self.reports:
            with self.subTest(n=n, r=r, t=t, seed=seed):
                self.assertEqual(report.claim("j_over_i").status, PASS)
                self.assertEqual(report.j_over_i.is_zero(), (r + t) % 2 == 1)

    def test_ext_table(self):
        """Every Ext^e(R/I, R) above the codimension agrees with the closed form."""
        for (n, r, t, seed), report in self.reports:
            with self.subTest(n=n, r=r, t=t, seed=seed):
                self.assertEqual(report.claim("cohomology_table").status, PASS)
                for e in report.predictions.ext_range:
                    expected = report.predictions.ext_table.get(e)
                    if expected is None:
                        self.assertTrue(report.ext_table[e].is_zero(), e)
                    else:
                        self.assertEqual(report.ext_table[e], expected, e)

    def test_tor_splitting_in_space(self):
        """The Tor inequalities hold for R/I on P^3."""
        for (n, r, t, seed), report in self.reports:
            if n != 3 or seed:
                continue
            with self.subTest(r=r, t=t):
                ring = report.section.ring
                quotient = ModulePresentation.cyclic(ring, report.section.ideal)
                self.assertEqual(tor_splitting_check(quotient).status, PASS)


if __name__ == "__main__":
    unittest.main()
