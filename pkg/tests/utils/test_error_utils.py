import unittest
from unittest.mock import patch

from src.utils.error_utils import (
    ExceptionContext,
    AppError,
    AlgebraError,
    CodimFailure,
    ConfigError,
    ConstructionError,
    DegreeCapExceeded,
    InstanceError,
    InstanceParseError,
    InstanceValidationError,
    ParameterError,
    ReportError,
    SchemaValidationError,
    handle_exception,
)


class TestErrorUtils(unittest.TestCase):
    def test_exception_context_manager(self):
        """Test that ExceptionContext properly wraps exceptions with context information."""
        with self.assertRaises(AppError) as cm:
            with ExceptionContext("Test operation"):
                raise ValueError("Original error")

        error_msg = str(cm.exception)
        self.assertIn("Test operation", error_msg)
        self.assertIn("Original error", error_msg)

    def test_exception_context_with_custom_error(self):
        """Test ExceptionContext with custom error class."""
        with self.assertRaises(ReportError) as cm:
            with ExceptionContext("Loading the report schema", error_cls=ReportError):
                raise ValueError("Original error")

        self.assertIn("Loading the report schema", str(cm.exception))

    def test_exception_context_with_app_error(self):
        """Test that ExceptionContext passes through AppError exceptions."""
        with self.assertRaises(ParameterError) as cm:
            with ExceptionContext("Test operation", error_cls=ConfigError):
                raise ParameterError("t out of range")

        self.assertEqual(str(cm.exception), "t out of range")

    def test_error_hierarchy(self):
        """Engine, construction, instance and report errors all derive from AppError."""
        self.assertTrue(issubclass(ParameterError, AlgebraError))
        self.assertTrue(issubclass(DegreeCapExceeded, AlgebraError))
        self.assertTrue(issubclass(CodimFailure, ConstructionError))
        self.assertTrue(issubclass(InstanceParseError, InstanceError))
        self.assertTrue(issubclass(SchemaValidationError, ReportError))
        for cls in (AlgebraError, ConstructionError, InstanceError, ReportError, ConfigError):
            self.assertTrue(issubclass(cls, AppError))

    def test_degree_cap_message(self):
        """DegreeCapExceeded keeps the degree and the cap."""
        error = DegreeCapExceeded(31, 30, "Buchberger")
        self.assertEqual((error.degree, error.cap), (31, 30))
        self.assertIn("Buchberger", str(error))
        self.assertIn("31", str(error))

    def test_codim_failure_message(self):
        """CodimFailure names the ideal and both codimensions."""
        error = CodimFailure(2, 3, "I(psi)")
        self.assertEqual((error.actual, error.expected), (2, 3))
        self.assertEqual(str(error), "codim I(psi) = 2, expected 3")

    def test_instance_parse_error_line(self):
        """InstanceParseError prefixes the line number when known."""
        self.assertEqual(str(InstanceParseError("bad row", 7)), "line 7: bad row")
        self.assertEqual(InstanceParseError("bad row", 7).line, 7)
        self.assertEqual(str(InstanceParseError("missing block [F]")), "missing block [F]")

    def test_instance_validation_error(self):
        """InstanceValidationError names the violated invariant."""
        error = InstanceValidationError("codim I(phi) = f - g + 1", "codim 1")
        self.assertEqual(error.invariant, "codim I(phi) = f - g + 1")
        self.assertIn("codim 1", str(error))

    @patch("src.utils.error_utils.logging")
    def test_handle_exception_decorator(self, mock_logging):
        """Test the handle_exception decorator."""

        @handle_exception
        def failing_function():
            raise ValueError("Original error")

        with self.assertRaises(AppError) as cm:
            failing_function()

        error_msg = str(cm.exception)
        self.assertIn("Unexpected error", error_msg)
        self.assertIn("Original error", error_msg)
        mock_logging.error.assert_called()

    @patch("src.utils.error_utils.logging")
    def test_handle_exception_with_mapping(self, mock_logging):
        """Test that handle_exception works with custom mapping."""

        @handle_exception(custom_mapping={ValueError: ParameterError})
        def failing_function():
            raise ValueError("Mapped error")

        with self.assertRaises(ParameterError) as cm:
            failing_function()

        self.assertEqual(str(cm.exception), "Mapped error")

    @patch("src.utils.error_utils.logging")
    def test_handle_exception_reraises_app_errors(self, mock_logging):
        """AppError subclasses pass through handle_exception unchanged."""

        @handle_exception(custom_mapping={Exception: ReportError})
        def failing_function():
            raise CodimFailure(1, 2)

        with self.assertRaises(CodimFailure):
            failing_function()

    def test_exception_context_no_exception(self):
        """Test that ExceptionContext works when no exception is raised."""
        try:
            with ExceptionContext("Test operation"):
                pass
            success = True
        except Exception:
            success = False

        self.assertTrue(success)


if __name__ == "__main__":
    unittest.main()
