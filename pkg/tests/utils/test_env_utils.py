import os
import unittest
from unittest.mock import patch, MagicMock

from src.config import ENGINE_SETTINGS
from src.utils.env_utils import apply_engine_settings, engine_settings, load_env_variables
from src.utils.error_utils import ConfigError, ConfigMissingError


class TestEnvUtils(unittest.TestCase):
    @patch("src.utils.env_utils.load_dotenv")
    @patch("src.utils.env_utils.Path")
    def test_load_env_variables_success(self, mock_path, mock_load_dotenv):
        """The .env at the project root is loaded."""
        mock_project_root = MagicMock()
        mock_dotenv_path = MagicMock()
        mock_path.return_value.resolve.return_value.parent.parent.parent = mock_project_root
        mock_project_root.__truediv__.return_value = mock_dotenv_path
        mock_load_dotenv.return_value = True

        path, success = load_env_variables()

        self.assertEqual(path, mock_dotenv_path)
        self.assertTrue(success)
        mock_load_dotenv.assert_called_once_with(dotenv_path=mock_dotenv_path)

    @patch("src.utils.env_utils.load_dotenv")
    def test_load_env_variables_missing_file(self, mock_load_dotenv):
        """A missing .env file is not an error."""
        mock_load_dotenv.return_value = False
        _, success = load_env_variables(required_vars=["BRLOCI_CHAR"])
        self.assertFalse(success)

    @patch("src.utils.env_utils.load_dotenv")
    def test_load_env_variables_with_required_vars_missing(self, mock_load_dotenv):
        """Missing required variables raise ConfigMissingError."""
        mock_load_dotenv.return_value = True
        with patch.dict(os.environ, {}, clear=True):
            with self.assertRaises(ConfigMissingError) as cm:
                load_env_variables(required_vars=["BRLOCI_CHAR", "BRLOCI_SEED"])
        self.assertIn("BRLOCI_CHAR", str(cm.exception))
        self.assertIn("BRLOCI_SEED", str(cm.exception))

    def test_engine_settings_defaults(self):
        """Without overrides the settings mirror the config."""
        with patch.dict(os.environ, {}, clear=True):
            settings = engine_settings(load_dotenv_file=False)
        self.assertEqual(settings["characteristic"], ENGINE_SETTINGS["characteristic"])
        self.assertIn("workers", settings)

    def test_engine_settings_overrides(self):
        """BRLOCI_* variables override the defaults."""
        env = {"BRLOCI_CHAR": "101", "BRLOCI_MAX_DEGREE": "12", "BRLOCI_SEED": "9", "BRLOCI_WORKERS": "2"}
        with patch.dict(os.environ, env, clear=True):
            settings = engine_settings(load_dotenv_file=False)
        self.assertEqual(settings["characteristic"], 101)
        self.assertEqual(settings["max_degree"], 12)
        self.assertEqual(settings["default_seed"], 9)
        self.assertEqual(settings["workers"], 2)

    def test_engine_settings_rejects_bad_values(self):
        """Non-integers, zero caps and non-prime characteristics raise ConfigError."""
        for env in ({"BRLOCI_MAX_DEGREE": "lots"}, {"BRLOCI_WORKERS": "0"}, {"BRLOCI_CHAR": "32001"}):
            with self.subTest(env=env):
                with patch.dict(os.environ, env, clear=True):
                    with self.assertRaises(ConfigError):
                        engine_settings(load_dotenv_file=False)

    def test_apply_engine_settings(self):
        """Only engine keys are installed into ENGINE_SETTINGS."""
        saved = dict(ENGINE_SETTINGS)
        try:
            apply_engine_settings({"max_degree": 17, "workers": 3})
            self.assertEqual(ENGINE_SETTINGS["max_degree"], 17)
            self.assertNotIn("workers", ENGINE_SETTINGS)
        finally:
            ENGINE_SETTINGS.clear()
            ENGINE_SETTINGS.update(saved)


if __name__ == "__main__":
    unittest.main()
