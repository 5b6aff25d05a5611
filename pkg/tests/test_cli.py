import importlib
import io
import json
import os
import random
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

os.environ.setdefault("LOG_LEVEL", "ERROR")

from loguru import logger  # noqa: E402

import src  # noqa: E402
from src.cli import EXIT_BAD_INPUT, EXIT_FAILED, EXIT_OK, configure_logging, main  # noqa: E402
from src.properties import _run  # noqa: E402


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(["--log-level", "ERROR", *argv])
    return code, out.getvalue(), err.getvalue()


class ResultantCommandTests(unittest.TestCase):
    def test_linear_resultant(self):
        code, out, _ = run(["resultant", "--var", "x1", "--poly", "x1 - x2", "--poly", "x1 - 3"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.strip(), "x2 - 3")

    def test_prime_field(self):
        code, out, _ = run(
            ["resultant", "--var", "x1", "--poly", "x1^2 + x2", "--poly", "x1 + 1", "--characteristic", "2"]
        )
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.strip(), "x2 + 1")

    def test_malformed_polynomial(self):
        code, _, err = run(["resultant", "--var", "x1", "--poly", "x1 +", "--poly", "x1"])
        self.assertEqual(code, EXIT_BAD_INPUT)
        self.assertIn("error:", err)

    def test_rational_input_is_rejected(self):
        code, _, _ = run(["resultant", "--var", "x1", "--poly", "1/x1", "--poly", "x1"])
        self.assertEqual(code, EXIT_BAD_INPUT)

    def test_constant_inputs_fail(self):
        code, _, _ = run(["resultant", "--var", "x1", "--poly", "x2", "--poly", "x2 + 1", "--variables", "x1,x2"])
        self.assertEqual(code, EXIT_FAILED)

    def test_non_prime_characteristic(self):
        code, _, _ = run(["resultant", "--var", "x1", "--poly", "x1", "--poly", "x1", "--characteristic", "4"])
        self.assertEqual(code, EXIT_BAD_INPUT)


class MapCommandTests(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def map_file(self, name, images, characteristic=0):
        path = self.tmp / name
        payload = {"field": {"characteristic": characteristic}, "variables": ["x1", "x2"], "images": images}
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)

    def test_apply(self):
        swap = self.map_file("swap.json", {"x1": "x2", "x2": "x1"})
        code, out, _ = run(["apply", "--map", swap, "--expr", "x1^2 + x2"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out.strip(), "x1 + x2^2")

    def test_compose(self):
        shift = self.map_file("shift.json", {"x1": "x1 + 1", "x2": "x2"})
        square = self.map_file("square.json", {"x1": "x1^2", "x2": "x2"})
        code, out, _ = run(["compose", "--map", shift, "--map", square])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)["images"]["x1"], "x1^2 + 2*x1 + 1")

    def test_involution_check(self):
        inversion = self.map_file("inv.json", {"x1": "1/x1", "x2": "x2/x1"})
        code, out, _ = run(["involution-check", "--map", inversion])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(json.loads(out)["involution"])
        shift = self.map_file("shift.json", {"x1": "x1 + 1", "x2": "x2"})
        code, out, _ = run(["involution-check", "--map", shift])
        self.assertEqual(code, EXIT_FAILED)
        self.assertEqual(json.loads(out)["square"]["images"]["x1"], "x1 + 2")

    def test_missing_file(self):
        code, _, _ = run(["apply", "--map", str(self.tmp / "absent.json"), "--expr", "x1"])
        self.assertEqual(code, EXIT_BAD_INPUT)

    def test_compose_needs_two_maps(self):
        swap = self.map_file("swap.json", {"x1": "x2", "x2": "x1"})
        with self.assertRaises(SystemExit):
            run(["compose", "--map", swap])


class VerifyCommandTests(unittest.TestCase):
    def test_single_section_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "report.json"
            code, out, _ = run(
                ["verify-paper", "--section", "sec3-char3", "--no-properties", "--format", "json", "--report", str(target)]
            )
            saved = json.loads(target.read_text(encoding="utf-8"))
        self.assertEqual(code, EXIT_OK)
        data = json.loads(out)
        self.assertTrue(data["passed"])
        self.assertEqual([s["id"] for s in data["scenarios"]], ["sec3-char3"])
        self.assertNotIn("errata", data)
        self.assertEqual(saved["scenarios"], data["scenarios"])

    def test_text_format(self):
        code, out, _ = run(["verify", "--section", "sec3-char3", "--no-properties"])
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("verification report (seed"))
        self.assertTrue(out.rstrip().endswith("overall: PASS"))


class LoggingTests(unittest.TestCase):
    def tearDown(self):
        configure_logging("ERROR")

    def capture(self):
        messages = []
        sink = logger.add(messages.append, level="DEBUG")
        try:
            _run("held", 1, random.Random(0), lambda rng: "")
        finally:
            logger.remove(sink)
        return messages

    def test_importing_the_package_silences_library_records(self):
        logger.enable("src")
        importlib.reload(src)
        self.assertEqual(self.capture(), [])

    def test_configured_logging_lets_library_records_through(self):
        logger.disable("src")
        configure_logging("ERROR")
        self.assertTrue(any("Property held" in m for m in self.capture()))


if __name__ == "__main__":
    unittest.main()
