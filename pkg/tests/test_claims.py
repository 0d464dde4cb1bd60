import unittest

from src.claims import check, compare_series, merge, not_applicable, series_window
from src.config import CLAIMS, FAIL, NOT_APPLICABLE, PASS
from src.hilbert import HilbertSeries


class TestClaimResults(unittest.TestCase):
    def test_check_status(self):
        """A boolean becomes PASS or FAIL with the configured anchor."""
        passed = check("depth_dichotomy", True, "depth 1", 1, 1)
        self.assertEqual(passed.status, PASS)
        self.assertFalse(passed.failed)
        self.assertEqual(passed.anchor, CLAIMS["depth_dichotomy"]["anchor"])
        failed = check("depth_dichotomy", False, "depth 0")
        self.assertTrue(failed.failed)
        self.assertEqual(failed.status, FAIL)

    def test_unknown_claim(self):
        """Claim ids must be configured."""
        with self.assertRaises(KeyError):
            check("no_such_claim", True)
        with self.assertRaises(KeyError):
            not_applicable("no_such_claim", "reason")

    def test_to_dict(self):
        """Predicted and computed values are only emitted when present."""
        data = check("j_over_i", True, "agrees", {"a": 1}, {"a": 1}).to_dict()
        self.assertEqual(data["claim"], "j_over_i")
        self.assertEqual(data["predicted"], {"a": 1})
        self.assertEqual(data["quote"], CLAIMS["j_over_i"]["quote"])
        self.assertNotIn("predicted", not_applicable("j_over_i", "odd").to_dict())

    def test_every_claim_has_anchor_quote_and_title(self):
        for claim, entry in CLAIMS.items():
            self.assertTrue(entry["anchor"], claim)
            self.assertTrue(entry["quote"], claim)
            self.assertTrue(entry["title"], claim)


class TestMerge(unittest.TestCase):
    def test_any_failure_fails(self):
        """One failing part fails the merged verdict and keeps its detail."""
        merged = merge("classification", [
            check("classification", True, "acm"),
            check("classification", False, "ag mismatch"),
        ])
        self.assertEqual(merged.status, FAIL)
        self.assertEqual(merged.detail, "ag mismatch")
        self.assertEqual(len(merged.parts), 2)

    def test_not_applicable_parts_are_ignored(self):
        """Only decided parts count; all-undecided stays NOT-APPLICABLE."""
        merged = merge("cm_type_bound", [
            check("cm_type_bound", True, "mu <= 2"),
            not_applicable("cm_type_bound", "X is not ACM"),
        ], "bounds")
        self.assertEqual(merged.status, PASS)
        self.assertEqual(merged.detail, "bounds")
        empty = merge("cm_type_bound", [not_applicable("cm_type_bound", "X is not ACM")])
        self.assertEqual(empty.status, NOT_APPLICABLE)
        self.assertEqual(empty.detail, "no applicable case")


class TestSeriesComparison(unittest.TestCase):
    def test_equal_series(self):
        """Equal series compare to None regardless of representation."""
        a = HilbertSeries([1, 2], 0, 1)
        b = HilbertSeries([1, 1, -2], 0, 2)
        self.assertIsNone(compare_series(a, b))

    def test_first_difference(self):
        """The message names the first degree where the functions differ."""
        message = compare_series(HilbertSeries([1, 2], 0, 1), HilbertSeries([1, 1], 0, 1), "J/I")
        self.assertEqual(message, "J/I Hilbert functions differ from degree 1: predicted 3, computed 2")

    def test_window(self):
        """The window starts at the initial degree."""
        self.assertEqual(series_window(HilbertSeries([1], 2, 0), width=2), {"2": 1, "3": 0})
        self.assertEqual(series_window(HilbertSeries.zero(3)), {})


if __name__ == "__main__":
    unittest.main()
