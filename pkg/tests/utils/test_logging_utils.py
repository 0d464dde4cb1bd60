import unittest
import logging
import tempfile
import io
import threading
from pathlib import Path
from unittest.mock import patch

from src.utils.logging_utils import (
    setup_logging,
    setup_structured_logging,
    LogContext,
    with_log_context,
    ContextAwareFormatter,
    clear_log_context,
    current_log_context,
)


class TestLoggingUtils(unittest.TestCase):
    def setUp(self):
        # Reset root logger before each test
        root = logging.getLogger()
        for handler in root.handlers[:]:
            root.removeHandler(handler)
        clear_log_context()

    def tearDown(self):
        root = logging.getLogger()
        for handler in root.handlers[:]:
            handler.close()
            root.removeHandler(handler)
        clear_log_context()

    def test_setup_logging_basic(self):
        """Test basic logging setup without file handler."""
        run_id = setup_logging()

        root_logger = logging.getLogger()
        self.assertIsNone(run_id)
        self.assertEqual(root_logger.level, logging.INFO)
        console_handler = next(
            (h for h in root_logger.handlers if isinstance(h, logging.StreamHandler)),
            None,
        )
        self.assertIsNotNone(console_handler, "No StreamHandler found")
        self.assertIsInstance(console_handler.formatter, ContextAwareFormatter)
        self.assertIn("%(levelname)s", console_handler.formatter._fmt)
        self.assertIn("%(message)s", console_handler.formatter._fmt)

    def test_setup_logging_with_file(self):
        """Test logging setup with a file handler."""
        with tempfile.TemporaryDirectory() as temp_dir:
            setup_logging(log_file_name="test_log.log", logs_dir=temp_dir)

            file_handlers = [
                h for h in logging.getLogger().handlers if isinstance(h, logging.FileHandler)
            ]
            self.assertEqual(len(file_handlers), 1)

            log_file_path = Path(temp_dir) / "test_log.log"
            logging.info("Resolving cotangent instance")
            for handler in file_handlers:
                handler.flush()
            self.assertIn("Resolving cotangent instance", log_file_path.read_text())

            for handler in file_handlers:
                handler.close()

    def test_multiple_setup_calls(self):
        """Repeated setup replaces the handlers instead of stacking them."""
        setup_logging()
        setup_logging()
        self.assertEqual(len(logging.getLogger().handlers), 1)

    @patch("src.utils.logging_utils.setup_logging")
    def test_setup_structured_logging(self, mock_setup_logging):
        """Test that structured logging setup forwards the run id."""
        setup_structured_logging(
            log_file="brloci.log",
            logs_dir="/tmp",
            level=logging.DEBUG,
            run_id="run-1",
        )

        mock_setup_logging.assert_called_once_with(
            log_file_name="brloci.log",
            logs_dir="/tmp",
            level=logging.DEBUG,
            format_string="%(asctime)s - %(levelname)s - %(name)s - %(run_id)s - %(message)s [%(context)s]",
            add_run_id=True,
            run_id="run-1",
        )

    def test_structured_logging_keeps_run_id(self):
        """The generated run id stays in the context after setup."""
        run_id = setup_structured_logging()
        self.assertTrue(run_id)
        self.assertEqual(current_log_context().get("run_id"), run_id)

    def test_log_context_manager_basic(self):
        """Test that LogContext sets and restores context values."""
        self.assertEqual(current_log_context(), {})

        with LogContext(instance="cotangent-p3", stage="hull"):
            self.assertEqual(current_log_context().get("instance"), "cotangent-p3")
            self.assertEqual(current_log_context().get("stage"), "hull")

        self.assertEqual(current_log_context(), {})

    def test_nested_log_context(self):
        """Test that nested LogContexts properly merge."""
        with LogContext(instance="m2"):
            with LogContext(operation="analyze"):
                with LogContext(seed=3):
                    self.assertEqual(
                        current_log_context(),
                        {"instance": "m2", "operation": "analyze", "seed": 3},
                    )
                self.assertNotIn("seed", current_log_context())
            self.assertNotIn("operation", current_log_context())
        self.assertEqual(current_log_context(), {})

    def test_with_log_context_decorator(self):
        """Test that the with_log_context decorator sets context values."""

        @with_log_context(module="groebner", operation="groebner_basis")
        def compute():
            return dict(current_log_context())

        context = compute()
        self.assertEqual(context.get("module"), "groebner")
        self.assertEqual(context.get("operation"), "groebner_basis")
        self.assertEqual(current_log_context(), {})

    def test_context_is_per_thread(self):
        """A worker thread does not see the caller's context."""
        seen = {}

        def worker():
            seen["context"] = dict(current_log_context())

        with LogContext(instance="battery-0"):
            thread = threading.Thread(target=worker)
            thread.start()
            thread.join()
        self.assertEqual(seen["context"], {})

    def test_structured_log_output_format(self):
        """Test that log messages are formatted with the context."""
        test_logger = logging.getLogger("test.formatter")
        test_logger.setLevel(logging.INFO)
        test_logger.propagate = False
        string_io = io.StringIO()
        handler = logging.StreamHandler(string_io)
        handler.setFormatter(ContextAwareFormatter("%(levelname)s - %(message)s - %(instance)s - %(run_id)s"))
        test_logger.addHandler(handler)

        try:
            with LogContext(instance="r5t1"):
                test_logger.info("Computing hull")
        finally:
            test_logger.removeHandler(handler)

        output = string_io.getvalue()
        self.assertIn("Computing hull", output)
        self.assertIn("r5t1", output)
        # run_id defaults to '-'
        self.assertIn(" - -", output)

    def test_context_field(self):
        """%(context)s lists the context keys except the run id."""
        record = logging.LogRecord("brloci", logging.INFO, __file__, 1, "Resolving", None, None)
        formatter = ContextAwareFormatter("%(message)s [%(context)s]")
        with LogContext(run_id="abc", instance="cotangent-p3.inst", seed=0):
            output = formatter.format(record)
        self.assertEqual(output, "Resolving [instance=cotangent-p3.inst seed=0]")

    def test_log_context_with_non_string_values(self):
        """Test that LogContext handles non-string values."""
        twists = {"F": [2, 2, 2], "G": [3]}
        with LogContext(twists=twists, seed=42, quick=True):
            self.assertEqual(current_log_context().get("twists"), twists)
            self.assertEqual(current_log_context().get("seed"), 42)
            self.assertIs(current_log_context().get("quick"), True)


if __name__ == "__main__":
    unittest.main()
