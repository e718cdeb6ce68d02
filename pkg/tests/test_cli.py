import json
import tempfile
import unittest
from pathlib import Path

from fixtures import load_series, star_case, two_bus_case
from gridvsla.app import run
from gridvsla.config.settings import IEEE30_CASE_PATH
from gridvsla.io.native_json import emit_native_json
from gridvsla.io.snapshots import write_snapshot_csv

BAD_CASE = """mpc.baseMVA = 100;
mpc.bus = [
\t1\t3\t0\t0\t0\t0\t1\t1\t0\t230\t1\t1.1\t0.9;
\t1\t1\t50\t10\t0\t0\t1\t1\t0\t230\t1\t1.1\t0.9;
];
mpc.gen = [
\t1\t0\t0\t300\t-300\t1\t100\t1\t250\t10;
];
mpc.branch = [
\t1\t2\t0.1\t0.2\t0\t250\t250\t250\t0\t0\t1\t-360\t360;
];
"""


class CliTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.root = Path(self._tmp.name)

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def write(self, name: str, text: str) -> Path:
        path = self.root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return path


class ValidateCommandTests(CliTestCase):
    def test_ieee30_is_clean(self) -> None:
        out = self.root / "diag.json"
        self.assertEqual(run(["validate", "--case", str(IEEE30_CASE_PATH), "--out", str(out)]), 0)
        summary = json.loads(out.read_text(encoding="utf-8"))
        self.assertEqual((summary["buses"], summary["branches"], summary["slack"]), (30, 41, 1))
        self.assertEqual(summary["issues"], [])
        self.assertEqual(summary["config"]["PF_MAX_ITER"], 30)
        self.assertEqual(summary["config"]["Z_THRESHOLD"], -2.0)

    def test_duplicate_bus(self) -> None:
        case = self.write("dup.m", BAD_CASE)
        self.assertEqual(run(["validate", "--case", str(case)]), 2)

    def test_missing_slack(self) -> None:
        text = BAD_CASE.replace("\t1\t1\t50", "\t2\t1\t50").replace("\t1\t3\t0", "\t1\t1\t0")
        case = self.write("noslack.m", text)
        self.assertEqual(run(["validate", "--case", str(case)]), 2)

    def test_missing_file(self) -> None:
        self.assertEqual(run(["validate", "--case", str(self.root / "absent.m")]), 2)

    def test_usage_errors(self) -> None:
        self.assertEqual(run([]), 1)
        self.assertEqual(run(["explode"]), 1)
        self.assertEqual(run(["validate"]), 1)


class SweepCommandTests(CliTestCase):
    def test_two_bus_maximum(self) -> None:
        case = self.write("two.json", emit_native_json(two_bus_case(1.0)))
        out = self.root / "sweep.json"
        code = run(["sweep", "--case", str(case), "--out", str(out), "--jacobian"])
        self.assertEqual(code, 0)
        document = json.loads(out.read_text(encoding="utf-8"))
        self.assertAlmostEqual(document["lambda_max"], 1.5451, delta=1e-3)
        self.assertEqual(document["critical_bus"], 2)
        self.assertIn("sigma_min", document["points"][0])
        eigenvalues = document["jacobian_eigenvalues"]
        self.assertEqual(len(eigenvalues), 2)
        self.assertEqual(eigenvalues, sorted(eigenvalues))

    def test_csv_table(self) -> None:
        case = self.write("two.json", emit_native_json(two_bus_case(1.0)))
        out = self.root / "sweep.csv"
        code = run(["sweep", "--case", str(case), "--format", "csv", "--pv-trace", "--out", str(out)])
        self.assertEqual(code, 0)
        header = out.read_text(encoding="utf-8").splitlines()[0]
        self.assertEqual(header, "lambda,total_load_mw,lci_2,vhigh_2,vlow_2")

    def test_step_not_above_min_step(self) -> None:
        case = self.write("two.json", emit_native_json(two_bus_case(1.0)))
        code = run(["sweep", "--case", str(case), "--step", "0.001", "--min-step", "0.01"])
        self.assertEqual(code, 1)

    def test_case_without_load(self) -> None:
        case = self.write("idle.json", emit_native_json(two_bus_case(0.0)))
        self.assertEqual(run(["sweep", "--case", str(case), "--out", str(self.root / "x.json")]), 2)

    def test_multiplier_cap(self) -> None:
        case = self.write("light.json", emit_native_json(two_bus_case(0.1)))
        out = self.root / "sweep.json"
        args = ["sweep", "--case", str(case), "--step", "0.5", "--lambda-max", "3"]
        self.assertEqual(run([*args, "--out", str(out)]), 0)
        self.assertEqual(json.loads(out.read_text(encoding="utf-8"))["lambda_max"], 3.0)

    def test_infeasible_base(self) -> None:
        case = self.write("heavy.json", emit_native_json(two_bus_case(2.0)))
        self.assertEqual(run(["sweep", "--case", str(case), "--out", str(self.root / "x.json")]), 3)


class VslaCommandTests(CliTestCase):
    def setUp(self) -> None:
        super().setUp()
        self.case = self.write("star.json", emit_native_json(star_case()))
        for heavy in (9, 10, 11):
            stressed = star_case(heavy=heavy)
            full = load_series(stressed, (0.5, 1.0, 1.5))
            bare = load_series(stressed, (0.5, 1.0, 1.5), with_injections=False)
            self.write(f"full/heavy{heavy}.csv", write_snapshot_csv(full))
            self.write(f"bare/heavy{heavy}.csv", write_snapshot_csv(bare))

    def vsla(self, *extra: str, snapshots: str = "full", out: str = "report.json") -> dict:
        path = self.root / out
        args = ["vsla", "--case", str(self.case), "--snapshots", str(self.root / snapshots)]
        self.assertEqual(run([*args, "--out", str(path), *extra]), 0)
        return json.loads(path.read_text(encoding="utf-8"))

    def test_union_of_scenarios(self) -> None:
        report = self.vsla()
        self.assertEqual([s["scenario_id"] for s in report["scenarios"]], ["heavy10", "heavy11", "heavy9"])
        self.assertEqual(report["aggregate"]["critical_set"], [9, 10, 11])
        for scenario in report["scenarios"]:
            self.assertEqual(len(scenario["critical_set"]), 1)

    def test_reruns_are_identical(self) -> None:
        self.vsla(out="first.json")
        self.vsla("--jobs", "3", out="second.json")
        first = (self.root / "first.json").read_bytes()
        self.assertEqual(first, (self.root / "second.json").read_bytes())

    def test_voltage_only_input(self) -> None:
        self.vsla(out="full.json")
        self.vsla(snapshots="bare", out="bare.json")
        self.assertEqual(
            (self.root / "full.json").read_bytes(), (self.root / "bare.json").read_bytes()
        )

    def test_bus_filter_scope(self) -> None:
        report = self.vsla("--buses", "2,3,4")
        self.assertEqual(report["aggregate"]["system"]["scope"], "filtered")
        self.assertEqual([b["bus"] for b in report["aggregate"]["buses"]], [2, 3, 4])

    def test_histograms(self) -> None:
        hist = self.root / "hist.tsv"
        zhist = self.root / "z.tsv"
        self.vsla("--histogram", str(hist), "--z-histogram", str(zhist), "--bins", "4")
        lines = hist.read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[0], "edge\tcount")
        self.assertEqual(sum(int(line.split("\t")[1]) for line in lines[1:]), 10)
        self.assertTrue(zhist.exists())

    def test_csv_report(self) -> None:
        path = self.root / "report.csv"
        args = ["vsla", "--case", str(self.case), "--snapshots", str(self.root / "full")]
        self.assertEqual(run([*args, "--format", "csv", "--out", str(path)]), 0)
        self.assertTrue(path.read_text(encoding="utf-8").startswith("scenario_id,bus,"))

    def test_repeated_scenario_names(self) -> None:
        args = ["vsla", "--case", str(self.case)]
        args += ["--snapshots", str(self.root / "full"), "--snapshots", str(self.root / "bare")]
        self.assertEqual(run([*args, "--out", str(self.root / "r.json")]), 1)

    def test_unknown_filtered_bus(self) -> None:
        args = ["vsla", "--case", str(self.case), "--snapshots", str(self.root / "full")]
        self.assertEqual(run([*args, "--buses", "99", "--out", str(self.root / "r.json")]), 2)


if __name__ == "__main__":
    unittest.main()
