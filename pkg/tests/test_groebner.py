import unittest

from src.groebner import (
    ModulePresentation,
    groebner_basis,
    ideal_hilbert_series,
    kernel,
    lift,
    minimal_generators,
    syzygies,
)
from src.hilbert import HilbertSeries
from src.modules import GradedFreeModule, ModuleMap, minors, vectors_from_polys
from src.ring import GradedRing
from src.utils.error_utils import DegreeCapExceeded, HomogeneityError, ParameterError


def twisted_cubic_matrix(ring):
    x0, x1, x2, x3 = ring.gens
    return ModuleMap(
        ring,
        GradedFreeModule((-1, -1, -1)),
        GradedFreeModule((0, 0)),
        [[x0, x1, x2], [x1, x2, x3]],
    )


class TestGroebnerBasis(unittest.TestCase):
    def setUp(self):
        self.S = GradedRing(["x0", "x1", "x2", "x3"])
        self.cubic = minors(twisted_cubic_matrix(self.S), 2)

    def test_twisted_cubic_series(self):
        """The twisted cubic has HS (1 + 2T)/(1 - T)^2."""
        hs = ideal_hilbert_series(self.S, self.cubic)
        self.assertEqual(hs, HilbertSeries([1, 2], 0, 2))
        self.assertEqual(hs.multiplicity(), 3)

    def test_membership(self):
        """Products of generators lie in the ideal; a variable does not."""
        module = GradedFreeModule((0,))
        gb = groebner_basis(self.S, module, vectors_from_polys(self.cubic))
        x0, x1, x2, x3 = self.S.gens
        inside = vectors_from_polys([self.cubic[0] * x3 + self.cubic[2] * x0])
        self.assertTrue(gb.contains_all(inside))
        self.assertFalse(gb.contains(vectors_from_polys([x0 * x3])[0]))
        self.assertFalse(gb.is_whole_module())

    def test_reduced_basis_is_canonical(self):
        """Generator order does not change the reduced basis."""
        module = GradedFreeModule((0,))
        a = groebner_basis(self.S, module, vectors_from_polys(self.cubic))
        b = groebner_basis(self.S, module, vectors_from_polys(list(reversed(self.cubic))))
        self.assertEqual(a.elements, b.elements)

    def test_degree_cap(self):
        """Pairs above the cap raise DegreeCapExceeded."""
        module = GradedFreeModule((0,))
        with self.assertRaises(DegreeCapExceeded):
            groebner_basis(self.S, module, vectors_from_polys(self.cubic), max_degree=2)

    def test_inhomogeneous_input(self):
        """Inhomogeneous vectors are rejected."""
        x0, x1, _, _ = self.S.gens
        with self.assertRaises(HomogeneityError):
            groebner_basis(self.S, GradedFreeModule((0,)), vectors_from_polys([x0 * x0 + x1]))

    def test_unit_ideal(self):
        """An ideal containing a constant is everything."""
        gb = groebner_basis(self.S, GradedFreeModule((0,)), vectors_from_polys([self.S.one()]))
        self.assertTrue(gb.is_whole_module())


class TestSyzygies(unittest.TestCase):
    def setUp(self):
        self.S = GradedRing(["x0", "x1", "x2", "x3"])

    def test_koszul_syzygy(self):
        """The only syzygy of (x0, x1) is the Koszul one."""
        x0, x1, _, _ = self.S.gens
        row = ModuleMap(self.S, GradedFreeModule((-1, -1)), GradedFreeModule((0,)), [[x0, x1]])
        syz = syzygies(row)
        self.assertEqual(syz.source.twists, (-2,))
        self.assertTrue((row @ syz).is_zero())

    def test_twisted_cubic_syzygies(self):
        """The minors of a 2 x 3 linear matrix have two linear syzygies."""
        m = twisted_cubic_matrix(self.S)
        row = ModuleMap(self.S, GradedFreeModule((-2, -2, -2)), GradedFreeModule((0,)), [minors(m, 2)])
        syz = syzygies(row)
        self.assertEqual(sorted(syz.source.twists), [-3, -3])
        self.assertTrue((row @ syz).is_zero())

    def test_kernel_over_quotient(self):
        """Over R = S/(x0^2) the map x0 has kernel generated by x0."""
        R = self.S.with_quotient(["x0^2"])
        x0 = R.var(0)
        m = ModuleMap(R, GradedFreeModule((-1,)), GradedFreeModule((0,)), [[x0]])
        k = kernel(m)
        self.assertEqual(k.source.twists, (-2,))
        self.assertEqual(R.reduce(k[0, 0] * x0), R.zero())
        ambient = kernel(m, ambient=True)
        self.assertEqual(ambient.source.rank, 0)


class TestLift(unittest.TestCase):
    def setUp(self):
        self.S = GradedRing(["x0", "x1", "x2", "x3"])

    def test_preimage(self):
        """x0 * x2 + x1^2 is reached through the row (x0, x1)."""
        x0, x1, x2, _ = self.S.gens
        row = ModuleMap(self.S, GradedFreeModule((-1, -1)), GradedFreeModule((0,)), [[x0, x1]])
        target = vectors_from_polys([x0 * x2 + x1 * x1])
        coefficients = lift(row, target)
        preimage = ModuleMap.from_columns(self.S, GradedFreeModule((-2,)), row.source, coefficients)
        self.assertEqual((row @ preimage).column(0), target[0])

    def test_not_in_image(self):
        x0, x1, x2, _ = self.S.gens
        row = ModuleMap(self.S, GradedFreeModule((-1, -1)), GradedFreeModule((0,)), [[x0, x1]])
        with self.assertRaises(ParameterError):
            lift(row, vectors_from_polys([x2 * x2]))

    def test_over_quotient(self):
        """Over S/(x0^2) the preimage of x0 * x1 under x0 is x1."""
        R = self.S.with_quotient(["x0^2"])
        x0, x1 = R.var(0), R.var(1)
        m = ModuleMap(R, GradedFreeModule((-1,)), GradedFreeModule((0,)), [[x0]])
        (a,) = lift(m, vectors_from_polys([x0 * x1]))
        self.assertEqual(a, {(0, (0, 1, 0, 0)): 1})


class TestMinimalGenerators(unittest.TestCase):
    def test_redundant_candidates(self):
        """Linear combinations and multiples are dropped."""
        S = GradedRing(["x", "y", "z"])
        x, y, z = S.gens
        candidates = vectors_from_polys([x, y, x + y, x * z])
        self.assertEqual(minimal_generators(S, GradedFreeModule((0,)), candidates), [0, 1])

    def test_modulo_submodule(self):
        """Counting modulo a submodule removes its elements."""
        S = GradedRing(["x", "y", "z"])
        x, y, _ = S.gens
        candidates = vectors_from_polys([x, y])
        kept = minimal_generators(S, GradedFreeModule((0,)), candidates, modulo=vectors_from_polys([x]))
        self.assertEqual(kept, [1])


class TestModulePresentation(unittest.TestCase):
    def setUp(self):
        self.S = GradedRing(["x", "y", "z"])

    def test_cyclic(self):
        """R/m is the residue field."""
        pres = ModulePresentation.cyclic(self.S, self.S.gens)
        self.assertEqual(pres.hilbert_series(), HilbertSeries([1], 0, 0))
        self.assertEqual(pres.dimension(), 0)
        self.assertFalse(pres.is_zero())
        self.assertTrue(ModulePresentation.cyclic(self.S, [self.S.one()]).is_zero())

    def test_twisted_cyclic(self):
        """R(2)/m lives in degree -2."""
        pres = ModulePresentation.cyclic(self.S, self.S.gens, twist=2)
        self.assertEqual(pres.hilbert_series().initial_degree(), -2)
        self.assertEqual(pres.twisted(-2).hilbert_series(), HilbertSeries([1], 0, 0))

    def test_pruned(self):
        """A unit relation removes a generator."""
        x, y, _ = self.S.gens
        relations = ModuleMap(
            self.S, GradedFreeModule((0, -1)), GradedFreeModule((0, 0)),
            [[self.S.one(), x], [self.S.zero(), y]],
        )
        pres = ModulePresentation(relations)
        self.assertEqual(pres.minimal_generator_count(), 1)
        pruned = pres.pruned()
        self.assertEqual(pruned.generators.rank, 1)
        self.assertEqual(pruned.hilbert_series(), pres.hilbert_series())

    def test_annihilated_by(self):
        """R/(x, y) is killed by x but not by z."""
        x, y, z = self.S.gens
        pres = ModulePresentation.cyclic(self.S, [x, y])
        self.assertTrue(pres.annihilated_by([x]))
        self.assertFalse(pres.annihilated_by([z]))

    def test_quotient_ring_free_module(self):
        """The free module R over a conic has the ring's series."""
        R = self.S.with_quotient(["x^2 + y^2 + z^2"])
        pres = ModulePresentation.free(R, GradedFreeModule((0,)))
        self.assertEqual(pres.hilbert_series(), R.hilbert_series)


if __name__ == "__main__":
    unittest.main()
