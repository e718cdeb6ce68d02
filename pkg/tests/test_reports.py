import json
import unittest
import warnings

from gridvsla.core.errors import DegenerateDistribution
from gridvsla.io.reports import (
    emit_histogram_tsv,
    emit_report_csv,
    emit_report_json,
    emit_sweep_csv,
    emit_sweep_json,
)
from gridvsla.services.lci import LciFlag, LciValue
from gridvsla.services.stress import SweepRow
from gridvsla.services.vsla import BusSeries, aggregate_scenarios, build_scenario_report


def _value(bus: int, lci: float, flag: LciFlag = LciFlag.OK) -> LciValue:
    v_high = None if flag is LciFlag.NO_INTERSECTION else complex(0.9, -0.1)
    v_low = None if flag is LciFlag.NO_INTERSECTION else complex(0.2, -0.1)
    return LciValue(
        bus=bus,
        raw_distance=lci,
        no_load_distance=1.0,
        lci=lci,
        flag=flag,
        v_high=v_high,
        v_low=v_low,
    )


def _reports():
    reports = []
    for name, weak in (("north", 3), ("south", 8)):
        series = [
            BusSeries(bus=b, values=((0, _value(b, 0.1 if b == weak else 0.9)),))
            for b in range(1, 11)
        ]
        reports.append(build_scenario_report(name, series))
    return reports, aggregate_scenarios(reports)


class ScenarioReportTests(unittest.TestCase):
    def test_json_layout(self) -> None:
        reports, aggregate = _reports()
        document = json.loads(emit_report_json(reports, aggregate))
        self.assertEqual([s["scenario_id"] for s in document["scenarios"]], ["north", "south"])
        self.assertEqual(document["aggregate"]["critical_set"], [3, 8])
        self.assertEqual(document["aggregate"]["system"], {"critical": 0.1, "location": 3, "scope": "all"})
        bus3 = document["scenarios"][0]["buses"][2]
        self.assertEqual(bus3["bus"], 3)
        self.assertTrue(bus3["selected"])
        self.assertEqual(bus3["at_index"], 0)
        self.assertEqual(set(document["aggregate"]["stats"]), {"3", "8"})

    def test_json_is_repeatable(self) -> None:
        reports, aggregate = _reports()
        first = emit_report_json(reports, aggregate)
        again = emit_report_json(list(reversed(reports)), aggregate)
        self.assertEqual(first, again)
        self.assertTrue(first.endswith("}\n"))

    def test_csv_rows(self) -> None:
        reports, aggregate = _reports()
        lines = emit_report_csv(reports, aggregate).splitlines()
        self.assertEqual(
            lines[0], "scenario_id,bus,critical_lci,at_index,z,selected,flags,min,q1,median,q3,max,skew"
        )
        self.assertEqual(len(lines), 1 + 3 * 10)
        self.assertTrue(lines[1].startswith("north,1,0.90000000000000002,0,"))
        aggregate_rows = [line for line in lines if line.startswith("aggregate,3,")]
        self.assertEqual(len(aggregate_rows), 1)
        self.assertTrue(aggregate_rows[0].endswith(",symmetric"))

    def test_degenerate_scenario_still_reports(self) -> None:
        series = [BusSeries(bus=b, values=((0, _value(b, 0.5)),)) for b in (1, 2)]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateDistribution)
            report = build_scenario_report("flat", series)
        document = json.loads(emit_report_json([report], aggregate_scenarios([report])))
        self.assertEqual(document["aggregate"]["critical_set"], [])


class HistogramTsvTests(unittest.TestCase):
    def test_layout(self) -> None:
        self.assertEqual(emit_histogram_tsv([(0.0, 1), (0.5, 2)]), "edge\tcount\n0\t1\n0.5\t2\n")

    def test_empty(self) -> None:
        self.assertEqual(emit_histogram_tsv([]), "edge\tcount\n")


class SweepReportTests(unittest.TestCase):
    def setUp(self) -> None:
        self.rows = [
            SweepRow(lam=1.0, total_load_mw=100.0, lci={2: _value(2, 0.8), 3: _value(3, 0.7)}, sigma_min=2.0),
            SweepRow(
                lam=1.5,
                total_load_mw=150.0,
                lci={2: _value(2, 0.3), 3: _value(3, 0.0, LciFlag.NO_INTERSECTION)},
                sigma_min=0.1,
            ),
        ]

    def test_json(self) -> None:
        document = json.loads(emit_sweep_json(self.rows, 1.5, pv_trace=True))
        self.assertEqual(document["lambda_max"], 1.5)
        self.assertEqual((document["critical_bus"], document["critical_lci"]), (3, 0.0))
        last = document["points"][1]
        self.assertEqual(last["flags"], {"2": "Ok", "3": "NoIntersection"})
        self.assertIsNone(last["v_high"]["3"])
        self.assertEqual(last["sigma_min"], 0.1)
        self.assertNotIn("jacobian_eigenvalues", document)

    def test_json_eigenvalues(self) -> None:
        document = json.loads(emit_sweep_json(self.rows, 1.5, eigenvalues=[-0.5, 2.0]))
        self.assertEqual(document["jacobian_eigenvalues"], [-0.5, 2.0])

    def test_json_floats_round_trip_exactly(self) -> None:
        rows = [SweepRow(lam=0.1 + 0.2, total_load_mw=30.000000000000004, lci={2: _value(2, 1 / 3)})]
        text = emit_sweep_json(rows, 0.1 + 0.2)
        self.assertIn('"lambda_max": 0.30000000000000004', text)
        self.assertEqual(json.loads(text)["points"][0]["lci"]["2"], 1 / 3)
        self.assertEqual(text, emit_sweep_json(rows, 0.1 + 0.2))

    def test_csv_columns(self) -> None:
        header = emit_sweep_csv(self.rows, pv_trace=True).splitlines()[0]
        self.assertEqual(
            header.split(","),
            ["lambda", "total_load_mw", "lci_2", "lci_3", "sigma_min", "vhigh_2", "vhigh_3", "vlow_2", "vlow_3"],
        )

    def test_csv_without_trace(self) -> None:
        text = emit_sweep_csv(self.rows)
        self.assertEqual(text.splitlines()[0], "lambda,total_load_mw,lci_2,lci_3,sigma_min")
        self.assertEqual(text.splitlines()[2], "1.5,150,0.29999999999999999,0,0.10000000000000001")


if __name__ == "__main__":
    unittest.main()
