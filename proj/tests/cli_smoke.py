# Copyright 2026 The diracbound Authors
# SPDX-License-Identifier: Apache-2.0

"""End-to-end checks of the diracbound executable: exit codes, CSV layout,
determinism and JSON schema conformance."""

import csv
import io
import json
import os
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path

import jsonschema
from referencing import Registry, Resource

BINARY = None
ROOT = None


def run(*args, env=None):
    return subprocess.run([BINARY, *args], capture_output=True, text=True, env=env, timeout=240)


def csv_body(text):
    lines = [l for l in text.splitlines(keepends=True) if not l.startswith("#")]
    return list(csv.reader(io.StringIO("".join(lines))))


class Cli(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        schemas = {}
        for p in (ROOT / "schema").glob("*.schema.json"):
            schemas[p.name] = json.loads(p.read_text())
        cls.registry = Registry().with_resources(
            (name, Resource.from_contents(s)) for name, s in schemas.items())
        cls.schemas = schemas

    def validate(self, doc, name):
        validator = jsonschema.Draft202012Validator(self.schemas[name], registry=self.registry)
        validator.validate(doc)

    def test_energy_is_deterministic(self):
        args = ["energy", "--family", "delta", "--m", "1", "--lambda", "0:0.5:0.25"]
        a, b = run(*args), run(*args)
        self.assertEqual(a.returncode, 0, a.stderr)
        strip = lambda s: [l for l in s.splitlines() if not l.startswith("# timestamp:")]
        self.assertEqual(strip(a.stdout), strip(b.stdout))
        header = a.stdout.splitlines()[:4]
        self.assertTrue(header[0].startswith("# diracbound "))
        self.assertTrue(header[1].startswith("# config: {"))
        self.assertTrue(header[2].startswith("# metadata: {"))
        self.assertTrue(header[3].startswith("# timestamp: "))
        rows = csv_body(a.stdout)
        self.assertEqual(rows[0], ["lambda", "q", "E", "c2", "c3", "c4_nr", "c4_rel"])
        self.assertEqual(rows[3][2], "0.625")

    def test_invalid_config_exit_code(self):
        for args in (["energy", "--lambda", "1:0:0.1"],
                     ["energy", "--family", "lorentz"],
                     ["pade", "--kind", "nr33"],
                     ["shoot", "--family", "delta"],
                     ["energy", "--no-such-flag"],
                     []):
            r = run(*args)
            self.assertEqual(r.returncode, 2, (args, r.stdout, r.stderr))
        r = run("energy", "--lambda", "1:0:0.1")
        self.assertIn("--lambda: empty range", r.stderr)

    def test_partial_failure_recorded_in_band(self):
        r = run("scan", "--gamma", "1", "--m", "0.1", "--lambda", "0:0.4:0.2", "--jobs", "2")
        self.assertEqual(r.returncode, 1, r.stderr)
        rows = csv_body(r.stdout)
        self.assertEqual(rows[0][-1], "status")
        self.assertEqual(len(rows), 4)
        for row in rows:
            self.assertEqual(len(row), len(rows[0]))
        self.assertIn("no bound state", rows[1][-1])
        self.assertEqual(rows[2][-1], "")
        self.assertEqual(rows[1][1], "NaN")

    def test_functionals_json_schema(self):
        r = run("functionals", "--family", "gaussian", "--alpha", "1", "--gamma", "0", "--m", "1",
                "--fk-q", "0,1")
        self.assertEqual(r.returncode, 0, r.stderr)
        doc = json.loads(r.stdout)
        self.validate(doc, "functionals.schema.json")
        self.assertAlmostEqual(doc["result"]["fk"][1]["value"], -(3.141592653589793 ** 0.5), places=10)

    def test_table_json_schema(self):
        for args in (["pade", "--kind", "nr21", "--lambda", "0:2:0.5"],
                     ["region", "--gamma-steps", "5", "--m-steps", "3"],
                     ["energy", "--method", "pt2-2d", "--q", "1", "--lambda", "0.1"]):
            r = run(*args, "--format", "json")
            self.assertEqual(r.returncode, 0, r.stderr)
            self.validate(json.loads(r.stdout), "table.schema.json")

    def test_shoot_json_and_wavefunction(self):
        with tempfile.TemporaryDirectory() as d:
            env = dict(os.environ, DIRACBOUND_OUTPUT_DIR=d)
            r = run("--config", str(ROOT / "configs" / "fig3_shoot.json"), "shoot", "-o", "shoot.json", env=env)
            self.assertEqual(r.returncode, 0, r.stderr)
            doc = json.loads(Path(d, "shoot.json").read_text())
            self.validate(doc, "shoot.schema.json")
            self.assertAlmostEqual(doc["result"]["gamma_fit"], 0.0931, delta=0.002)
            wf = csv_body(Path(d, "fig3_wavefunction.csv").read_text())
            self.assertEqual(wf[0], ["x", "psi1", "psi2", "rho"])
            self.assertGreater(len(wf), 1000)

    def test_flags_override_config_file(self):
        r = run("--config", str(ROOT / "configs" / "fig2_scan.json"), "--lambda", "0.5:1:0.5", "--jobs", "1")
        self.assertEqual(r.returncode, 0, r.stderr)
        rows = csv_body(r.stdout)
        self.assertEqual([row[0] for row in rows[1:]], ["0.5", "1"])
        self.assertEqual(rows[0], ["lambda", "m_minus_E_shoot", "m_minus_E_pade", "m_minus_E_pade_nr22",
                                   "m_minus_E_pade_nr21", "m_minus_E_nr", "status"])
        config = json.loads(r.stdout.splitlines()[1][len("# config: "):])
        self.assertEqual(config["model"]["lambda"], "0.5:1:0.5")
        self.assertEqual(config["potential"], {"family": "gaussian", "alpha": 1.0, "gamma": 1.0})

    def test_region_config(self):
        r = run("--config", str(ROOT / "configs" / "fig1_region.json"))
        self.assertEqual(r.returncode, 0, r.stderr)
        rows = csv_body(r.stdout)
        self.assertEqual(rows[0], ["alpha", "gamma", "m_boundary"])
        self.assertEqual(len(rows), 1 + 3 * 41)
        self.assertEqual(rows[1][2], "inf")

    def test_jobs_do_not_change_output(self):
        base = ["fit", "--gamma", "1", "--m", "0.1", "--lambda", "0.5:2:0.5"]
        a, b = run(*base, "--jobs", "1"), run(*base, "--jobs", "4")
        self.assertEqual(a.returncode, 0, a.stderr)
        self.assertEqual(csv_body(a.stdout)[1:], csv_body(b.stdout)[1:])


if __name__ == "__main__":
    BINARY = sys.argv[1]
    ROOT = Path(sys.argv[2])
    unittest.main(argv=sys.argv[:1], verbosity=2)
