import json
import os
import tempfile
import unittest
from pathlib import Path

os.environ.setdefault("LOG_LEVEL", "ERROR")

from src.algebra import GF  # noqa: E402
from src.cremona import verify_involution  # noqa: E402
from src.errors import ScenarioError  # noqa: E402
from src.parser import parse_expression  # noqa: E402
from src.scenarios import ScenarioSpec, Scenario, list_scenarios, load_map, load_scenario  # noqa: E402

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def document(**overrides):
    data = {
        "id": "demo",
        "title": "two-step tower",
        "variables": ["x1", "x2"],
        "systems": [
            {"name": "y", "old": "x", "new": ["y1", "y2"], "forward": ["x1 + x2", "x2"], "backward": ["y1 - y2", "y2"]},
            {"name": "z", "old": "y", "new": ["z1", "z2"], "forward": ["y1*y2", "y2"], "backward": ["z1/z2", "z2"]},
        ],
        "definitions": {
            "f": {"in": "y", "expr": "y1 - y2^2"},
            "q": {"in": "y", "expr": "y1/y2"},
        },
        "maps": {"swap": {"in": "x", "images": {"x1": "x2", "x2": "x1"}}},
        "steps": [{"id": "01-involution", "op": "involution", "args": {"map": "swap"}}],
    }
    data.update(overrides)
    return data


class ScenarioFilesMixin:
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def write(self, name, payload):
        path = self.tmp / name
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
        return path


class LoadScenarioTests(ScenarioFilesMixin, unittest.TestCase):
    def test_invalid_json(self):
        path = self.write("broken.json", "{\"id\": ")
        with self.assertRaises(ScenarioError) as ctx:
            load_scenario(path)
        self.assertEqual(ctx.exception.path, str(path))

    def test_unknown_operation_reports_its_path(self):
        data = document(steps=[{"id": "01", "op": "factor"}])
        with self.assertRaises(ScenarioError) as ctx:
            load_scenario(self.write("bad-op.json", data))
        self.assertEqual(ctx.exception.path, "steps[0].op")

    def test_unknown_keys_are_rejected(self):
        data = document()
        data["systems"][0]["inverse"] = ["y1"]
        with self.assertRaises(ScenarioError) as ctx:
            load_scenario(self.write("extra.json", data))
        self.assertEqual(ctx.exception.path, "systems[0].inverse")

    def test_characteristic_must_be_prime(self):
        with self.assertRaises(ScenarioError) as ctx:
            load_scenario(self.write("gf4.json", document(field={"characteristic": 4})))
        self.assertEqual(ctx.exception.path, "field.characteristic")

    def test_unknown_parent_system(self):
        data = document()
        data["systems"][1]["old"] = "w"
        with self.assertRaises(ScenarioError):
            load_scenario(self.write("orphan.json", data))

    def test_shipped_documents_validate(self):
        paths = list_scenarios(SCENARIOS)
        self.assertTrue(any(p.stem == "sec2" for p in paths))
        self.assertFalse(any(p.name in ("errata.json", "manifest.json") for p in paths))
        for path in paths:
            with self.subTest(scenario=path.stem):
                self.assertEqual(load_scenario(path).id, path.stem)


class ScenarioResolutionTests(unittest.TestCase):
    def setUp(self):
        self.scenario = Scenario(ScenarioSpec.model_validate(document()))

    def test_definition_reference(self):
        self.assertEqual(self.scenario.parse("$f", "y"), parse_expression("y1 - y2^2", ("y1", "y2")))

    def test_relation_must_be_polynomial(self):
        self.assertEqual(self.scenario.relation("f").name, "f")
        with self.assertRaises(ScenarioError):
            self.scenario.relation("q")

    def test_chain_to_the_base(self):
        c = self.scenario.chain_to("z")
        self.assertEqual(c.old, ("x1", "x2"))
        self.assertEqual(c.forward[0], parse_expression("x1*x2 + x2^2", ("x1", "x2")))
        self.assertEqual(self.scenario.lift(self.scenario.definition("f"), "y"), parse_expression("x1 + x2 - x2^2", ("x1", "x2")))

    def test_unparseable_text_names_its_location(self):
        data = document()
        data["maps"]["swap"]["images"]["x2"] = "x1 +"
        scenario = Scenario(ScenarioSpec.model_validate(data))
        with self.assertRaises(ScenarioError) as ctx:
            scenario.map("swap")
        self.assertEqual(ctx.exception.path, "maps.swap.images.x2")

    def test_missing_reference_map(self):
        with self.assertRaises(ScenarioError):
            self.scenario.reference_map()


class LoadMapTests(ScenarioFilesMixin, unittest.TestCase):
    def test_map_document(self):
        path = self.write(
            "sigma.json",
            {"field": {"characteristic": 3}, "variables": ["x1", "x2"], "images": {"x1": "x1*x2^6/(x1^2 + x1*x2^2 + x2^3)^2", "x2": "-x2^4/(x1^2 + x1*x2^2 + x2^3)"}},
        )
        m = load_map(path)
        self.assertEqual(m.field, GF(3))
        self.assertTrue(verify_involution(m))

    def test_missing_image(self):
        path = self.write("partial.json", {"variables": ["x1", "x2"], "images": {"x1": "x2"}})
        with self.assertRaises(ScenarioError) as ctx:
            load_map(path)
        self.assertEqual(ctx.exception.path, "images")


if __name__ == "__main__":
    unittest.main()
