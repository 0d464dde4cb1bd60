import unittest

from src.groebner import ModulePresentation
from src.ideals import (
    annihilator,
    codim,
    colon,
    colon_ideal,
    contains,
    dimension,
    equal,
    equidimensional_hull,
    intersect,
    intersect_all,
    is_saturated,
    is_unit_ideal,
    is_unmixed,
    maximal_ideal_power,
    minimalize,
    product,
    saturate,
)
from src.ring import GradedRing


class TestIdeals(unittest.TestCase):
    def setUp(self):
        self.R = GradedRing(["x", "y", "z"])
        self.x, self.y, self.z = self.R.gens

    def test_containment_and_equality(self):
        """(x + y, x - y) = (x, y) in odd characteristic."""
        x, y, z = self.x, self.y, self.z
        self.assertTrue(equal(self.R, [x + y, x - y], [x, y]))
        self.assertTrue(contains(self.R, [x, y], [x * z, y * y]))
        self.assertFalse(contains(self.R, [x * y], [x]))

    def test_codim_and_dimension(self):
        """A point in the plane has codim 2; the unit ideal has dimension -1."""
        self.assertEqual(codim(self.R, [self.x, self.y]), 2)
        self.assertEqual(dimension(self.R, [self.x, self.y]), 1)
        self.assertEqual(codim(self.R, [self.R.one()]), 4)
        self.assertTrue(is_unit_ideal(self.R, [self.x, self.R.one()]))
        self.assertEqual(codim(self.R, []), 0)

    def test_minimalize(self):
        """Redundant generators are dropped."""
        x, y = self.x, self.y
        self.assertEqual(minimalize(self.R, [x, x * y, y, x + y]), [x, y])

    def test_intersect(self):
        """(x) cap (y) = (xy)."""
        meet = intersect(self.R, [self.x], [self.y])
        self.assertTrue(equal(self.R, meet, [self.x * self.y]))
        self.assertEqual(intersect(self.R, [], [self.y]), [])
        three = intersect_all(self.R, [[self.x], [self.y], [self.z]])
        self.assertTrue(equal(self.R, three, [self.x * self.y * self.z]))

    def test_colon(self):
        """(xy) : x = (y) and (x^2, xy) : (x, y) = (x)."""
        x, y = self.x, self.y
        self.assertTrue(equal(self.R, colon(self.R, [x * y], x), [y]))
        self.assertTrue(equal(self.R, colon_ideal(self.R, [x * x, x * y], [x, y]), [x]))
        self.assertTrue(is_unit_ideal(self.R, colon(self.R, [x], x)))

    def test_saturation(self):
        """(x^2, xy, xz) is (x) up to an m-primary component."""
        x, y, z = self.x, self.y, self.z
        ideal = [x * x, x * y, x * z]
        self.assertTrue(equal(self.R, saturate(self.R, ideal), [x]))
        self.assertFalse(is_saturated(self.R, ideal))
        self.assertTrue(is_saturated(self.R, [x * x, x * y]))

    def test_hull_removes_embedded_component(self):
        """(x^2, xy) = (x) cap (x^2, y) has hull (x)."""
        x, y = self.x, self.y
        ideal = [x * x, x * y]
        self.assertTrue(equal(self.R, equidimensional_hull(self.R, ideal), [x]))
        self.assertFalse(is_unmixed(self.R, ideal))
        self.assertTrue(is_unmixed(self.R, [x * y]))

    def test_hull_removes_lower_dimensional_component(self):
        """(xz, yz) = (z) cap (x, y) has hull (z)."""
        x, y, z = self.x, self.y, self.z
        self.assertTrue(equal(self.R, equidimensional_hull(self.R, [x * z, y * z]), [z]))

    def test_annihilator(self):
        """Ann R/(x, y) = (x, y); Ann of R^2/(x e1, y e2) = (xy)."""
        x, y = self.x, self.y
        self.assertTrue(equal(self.R, annihilator(ModulePresentation.cyclic(self.R, [x, y])), [x, y]))
        from src.modules import GradedFreeModule, ModuleMap

        zero = self.R.zero()
        relations = ModuleMap(
            self.R, GradedFreeModule((-1, -1)), GradedFreeModule((0, 0)), [[x, zero], [zero, y]]
        )
        self.assertTrue(equal(self.R, annihilator(ModulePresentation(relations)), [x * y]))

    def test_maximal_ideal_power(self):
        """m^2 has six monomial generators."""
        square = maximal_ideal_power(self.R, 2)
        self.assertEqual(len(square), 6)
        self.assertTrue(equal(self.R, square, product(self.R, self.R.gens, self.R.gens)))


class TestIdealsOverQuotient(unittest.TestCase):
    def test_codim_over_conic(self):
        """A point on a conic has codim 1 in the conic's ring."""
        R = GradedRing(["x", "y", "z"]).with_quotient(["x*z - y^2"])
        x, y, _ = R.gens
        self.assertEqual(codim(R, [x, y]), 1)
        self.assertEqual(R.krull_dim, 2)


if __name__ == "__main__":
    unittest.main()
