import json
import tempfile
import unittest
from pathlib import Path

from src.buchsbaum_rim import cotangent_instance
from src.config import PASS, REPORT_VERSION
from src.report import betti_triples, claims_frame, dumps, failed, instance_report, validate_report, write_report
from src.resolution import BettiTable
from src.utils.error_utils import SchemaValidationError


class TestInstanceReport(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.br = cotangent_instance(2)
        cls.data = instance_report(cls.br, seed=3)

    def test_schema_valid(self):
        """Instance reports satisfy the shipped schema."""
        self.assertIs(validate_report(self.data), self.data)
        self.assertEqual(self.data["version"], REPORT_VERSION)
        self.assertIsNone(self.data["prediction"])

    def test_instance_block(self):
        """The instance echo carries ranks, twists and phi."""
        block = self.data["instance"]
        self.assertEqual((block["n"], block["f"], block["g"], block["r"]), (2, 3, 1, 2))
        self.assertEqual(block["F"], [-1, -1, -1])
        self.assertEqual(block["phi"], [["x0", "x1", "x2"]])
        self.assertIsNone(block["t"])
        self.assertEqual(block["seed"], 3)

    def test_module_claims_pass(self):
        """The cotangent module of P^2 satisfies the module-level checks."""
        self.assertFalse(failed(self.data))
        self.assertEqual(self.data["summary"][PASS], 3)
        self.assertEqual(self.data["computed"]["generators_of_B"], [-2, -2, -2])

    def test_claims_frame(self):
        """One row per claim with its anchor."""
        frame = claims_frame(self.data)
        self.assertEqual(list(frame.columns), ["claim", "status", "anchor", "detail"])
        self.assertEqual(
            list(frame["claim"]), ["characterization", "symmetric_duality", "exterior_power_ext"]
        )
        self.assertEqual(frame.loc[0, "anchor"], "module/single-ext")

    def test_write_report(self):
        """Reports are written as sorted, indented JSON."""
        with tempfile.TemporaryDirectory() as tmp:
            path = write_report(self.data, Path(tmp, "nested", "report.json"))
            text = path.read_text(encoding="utf-8")
        self.assertEqual(text, dumps(self.data))
        self.assertEqual(json.loads(text)["summary"], self.data["summary"])


class TestValidation(unittest.TestCase):
    def test_rejects_incomplete_report(self):
        """Missing top-level fields are schema violations."""
        with self.assertRaises(SchemaValidationError):
            validate_report({"version": REPORT_VERSION})

    def test_rejects_bad_status(self):
        """Claim statuses are restricted to the three verdicts."""
        data = instance_report(cotangent_instance(2))
        data["diff"][0]["status"] = "MAYBE"
        with self.assertRaises(SchemaValidationError):
            validate_report(data)

    def test_invalid_report_is_not_written(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp, "bad.json")
            with self.assertRaises(SchemaValidationError):
                write_report({}, path)
            self.assertFalse(path.exists())


class TestFormatting(unittest.TestCase):
    def test_betti_triples(self):
        """Triples are sorted by position, then degree."""
        table = BettiTable({(1, 2): 3, (0, 0): 1, (2, 3): 2})
        self.assertEqual(betti_triples(table), [[0, 0, 1], [1, 2, 3], [2, 3, 2]])

    def test_compact_dumps(self):
        """Compact output is a single line."""
        self.assertEqual(dumps({"b": 1, "a": [1, 2]}, compact=True), '{"a":[1,2],"b":1}\n')


if __name__ == "__main__":
    unittest.main()
