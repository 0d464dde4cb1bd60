import unittest

from src.groebner import ModulePresentation
from src.hilbert import HilbertSeries
from src.modules import FreeComplex, GradedFreeModule, ModuleMap, minors
from src.resolution import (
    BettiTable,
    depth,
    depth_via_ext,
    ext_module,
    ext_series,
    homology_series,
    is_acyclic,
    minimal_free_resolution,
    minimize_complex,
)
from src.ring import GradedRing


def twisted_cubic(ring):
    x0, x1, x2, x3 = ring.gens
    m = ModuleMap(ring, GradedFreeModule((-1, -1, -1)), GradedFreeModule((0, 0)), [[x0, x1, x2], [x1, x2, x3]])
    return minors(m, 2)


class TestBettiTable(unittest.TestCase):
    def setUp(self):
        self.table = BettiTable({(0, 0): 1, (1, 2): 3, (2, 3): 2})

    def test_totals(self):
        """Totals and length."""
        self.assertEqual(self.table.total(1), 3)
        self.assertEqual(self.table.length, 2)
        self.assertEqual(self.table[(1, 3)], 0)

    def test_dict_round_trip(self):
        """to_dict/from_dict keep the entries."""
        data = self.table.to_dict()
        self.assertEqual(data, {"0": {"0": 1}, "1": {"2": 3}, "2": {"3": 2}})
        self.assertEqual(BettiTable.from_dict(data), self.table)

    def test_frame_layout(self):
        """Rows are d - i, columns are positions."""
        frame = self.table.to_frame()
        self.assertEqual(list(frame.columns), [0, 1, 2])
        self.assertEqual(list(frame.index), [0, 1])
        self.assertEqual(frame.loc[1, 1], 3)
        self.assertEqual(frame.loc[1, 2], 2)
        self.assertTrue(BettiTable().to_frame().empty)

    def test_shift_and_sum(self):
        """Shifts move entries; sums add them."""
        shifted = self.table.shifted(degree_shift=1, index_shift=1)
        self.assertEqual(shifted[(2, 3)], 3)
        self.assertEqual((self.table + self.table)[(1, 2)], 6)


class TestMinimalFreeResolution(unittest.TestCase):
    def setUp(self):
        self.S = GradedRing(["x0", "x1", "x2", "x3"])

    def test_twisted_cubic(self):
        """Hilbert-Burch shape 1, 3, 2 and depth 2."""
        res = minimal_free_resolution(ModulePresentation.cyclic(self.S, twisted_cubic(self.S)))
        self.assertEqual(res.betti, BettiTable({(0, 0): 1, (1, 2): 3, (2, 3): 2}))
        self.assertEqual(depth(res), 2)
        self.assertEqual(depth_via_ext(res), 2)
        self.assertEqual(res.nonvanishing_ext(), [2])
        self.assertTrue(is_acyclic(res.complex))

    def test_residue_field(self):
        """The Koszul complex resolves K; Ext^4(K, S) = K(4)."""
        res = minimal_free_resolution(ModulePresentation.cyclic(self.S, self.S.gens))
        self.assertEqual([res.betti.total(i) for i in range(5)], [1, 4, 6, 4, 1])
        self.assertEqual(depth(res), 0)
        self.assertEqual(ext_series(res, 4, self.S), HilbertSeries([1], -4, 0))

    def test_ext_module_matches_series(self):
        """The presented Ext module has the Hilbert series of the Ext series."""
        res = minimal_free_resolution(ModulePresentation.cyclic(self.S, twisted_cubic(self.S)))
        canonical = ext_module(res, 2, self.S)
        self.assertEqual(canonical.hilbert_series(), ext_series(res, 2, self.S))
        self.assertTrue(ext_module(res, 1, self.S).is_zero())

    def test_non_cohen_macaulay(self):
        """(x0^2, x0 x1) has Ext in two degrees."""
        x0, x1, _, _ = self.S.gens
        res = minimal_free_resolution(ModulePresentation.cyclic(self.S, [x0 * x0, x0 * x1]))
        self.assertEqual(res.length, 2)
        self.assertEqual(res.nonvanishing_ext(), [1, 2])
        self.assertEqual(depth(res), 2)

    def test_free_module(self):
        """A free module has a length-zero resolution."""
        res = minimal_free_resolution(ModulePresentation.free(self.S, GradedFreeModule((0, 1))))
        self.assertEqual(res.length, 0)
        self.assertEqual(res.betti, BettiTable({(0, 0): 1, (0, -1): 1}))


class TestResolutionOverQuotient(unittest.TestCase):
    def setUp(self):
        self.R = GradedRing(["x", "y", "z"]).with_quotient(["x^2 + y^2 + z^2"])

    def test_ext_shift(self):
        """Hom_R(R, R) = R even though the S-resolution has length one."""
        res = minimal_free_resolution(ModulePresentation.free(self.R, GradedFreeModule((0,))))
        self.assertEqual(res.length, 1)
        self.assertEqual(ext_series(res, 0, self.R), self.R.hilbert_series)

    def test_resolution_over_ring(self):
        """R/(x) over R is resolved by multiplication by x."""
        x = self.R.var(0)
        res = minimal_free_resolution(
            ModulePresentation.cyclic(self.R, [x]), over_ring=True, max_length=3
        )
        self.assertEqual(res.betti, BettiTable({(0, 0): 1, (1, 1): 1}))


class TestComplexes(unittest.TestCase):
    def test_minimize_cancels_units(self):
        """A unit entry cancels a pair of basis vectors."""
        S = GradedRing(["x", "y"])
        x, _ = S.gens
        d1 = ModuleMap(S, GradedFreeModule((-1, 0)), GradedFreeModule((0,)), [[x, S.one()]])
        small = minimize_complex(FreeComplex.from_maps(S, [d1]))
        self.assertEqual(small.module(0).rank, 0)
        self.assertEqual(small.module(1).twists, (-1,))

    def test_homology_of_koszul(self):
        """H_0 of the Koszul complex on x, y is K and H_1 vanishes."""
        S = GradedRing(["x", "y"])
        x, y = S.gens
        d1 = ModuleMap(S, GradedFreeModule((-1, -1)), GradedFreeModule((0,)), [[x, y]])
        d2 = ModuleMap(S, GradedFreeModule((-2,)), GradedFreeModule((-1, -1)), [[-y], [x]])
        complex_ = FreeComplex.from_maps(S, [d1, d2])
        self.assertEqual(homology_series(complex_, 0), HilbertSeries([1], 0, 0))
        self.assertTrue(homology_series(complex_, 1).is_zero())
        self.assertTrue(is_acyclic(complex_))


if __name__ == "__main__":
    unittest.main()
