import os
import unittest
from pathlib import Path
from unittest.mock import patch

os.environ.setdefault("LOG_LEVEL", "ERROR")

from src.config import DEFAULT_SCREEN_PRIME, Settings  # noqa: E402


class SettingsTests(unittest.TestCase):
    def test_defaults(self):
        keys = ("CREMONA_SCENARIO_DIR", "CREMONA_SEED", "CREMONA_SCREEN_PRIME", "CREMONA_SCREEN_POINTS", "CREMONA_RESIDUE_TERMS", "LOG_LEVEL")
        env = {k: v for k, v in os.environ.items() if k not in keys}
        with patch.dict(os.environ, env, clear=True):
            settings = Settings.load()
        self.assertEqual(settings.seed, 0)
        self.assertEqual(settings.screen_prime, DEFAULT_SCREEN_PRIME)
        self.assertEqual(settings.screen_points, 20)
        self.assertEqual(settings.log_level, "WARNING")
        self.assertEqual(settings.scenario_dir.name, "scenarios")

    def test_environment_overrides(self):
        with patch.dict(
            os.environ,
            {"CREMONA_SEED": "7", "CREMONA_SCREEN_POINTS": "5", "CREMONA_SCENARIO_DIR": "/tmp/scen", "LOG_LEVEL": "debug"},
        ):
            settings = Settings.load()
        self.assertEqual(settings.seed, 7)
        self.assertEqual(settings.screen_points, 5)
        self.assertEqual(settings.scenario_dir, Path("/tmp/scen"))
        self.assertEqual(settings.log_level, "DEBUG")

    def test_malformed_integers_fall_back(self):
        with patch.dict(os.environ, {"CREMONA_SEED": "seven", "CREMONA_RESIDUE_TERMS": " "}):
            settings = Settings.load()
        self.assertEqual(settings.seed, 0)
        self.assertEqual(settings.residue_terms, 40)


if __name__ == "__main__":
    unittest.main()
