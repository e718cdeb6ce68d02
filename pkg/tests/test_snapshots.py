import tempfile
import unittest
from pathlib import Path

from fixtures import load_series, two_bus_case
from gridvsla.core.errors import (
    EmptySeries,
    MissingBus,
    NonMonotoneTime,
    SnapshotFormatError,
    UnknownBus,
)
from gridvsla.io.snapshots import (
    SnapshotSeries,
    expand_snapshot_paths,
    read_snapshot_csv,
    read_snapshot_file,
    write_snapshot_csv,
)

FULL = """time,bus,vr,vi,p,q
0,1,1.0,0.0,0.1,0.0
0,2,0.99,-0.01,-0.1,0.0
1,1,1.0,0.0,0.2,0.01
1,2,0.98,-0.02,-0.2,0.0
2,1,1.0,0.0,0.3,0.02
2,2,0.97,-0.03,-0.3,0.0
"""


class SnapshotCsvTests(unittest.TestCase):
    def setUp(self) -> None:
        self.case = two_bus_case()

    def test_full_columns(self) -> None:
        series = read_snapshot_csv(FULL, self.case, scenario_id="s1")
        self.assertEqual(len(series), 3)
        self.assertTrue(series.has_injections)
        self.assertEqual([s.index for s in series.snapshots], [0, 1, 2])
        self.assertEqual(series.snapshots[1].time, 1.0)
        self.assertEqual(series.snapshots[2].voltages[2], complex(0.97, -0.03))
        self.assertEqual(series.snapshots[0].injections[2], complex(-0.1, 0.0))

    def test_voltage_columns_only(self) -> None:
        text = "time,bus,vr,vi\n0,1,1.0,0.0\n0,2,0.99,-0.01\n"
        series = read_snapshot_csv(text, self.case)
        self.assertIsNone(series.snapshots[0].injections)
        self.assertFalse(series.has_injections)

    def test_rows_may_come_in_any_bus_order(self) -> None:
        text = "time,bus,vr,vi\n0,2,0.99,-0.01\n0,1,1.0,0.0\n"
        series = read_snapshot_csv(text, self.case)
        self.assertEqual(list(series.snapshots[0].voltages), [1, 2])

    def test_missing_bus(self) -> None:
        text = "time,bus,vr,vi\n0,1,1.0,0.0\n0,2,0.99,-0.01\n1,1,1.0,0.0\n"
        with self.assertRaises(MissingBus) as ctx:
            read_snapshot_csv(text, self.case)
        self.assertEqual((ctx.exception.time, ctx.exception.bus), (1.0, 2))

    def test_time_going_backwards(self) -> None:
        text = "time,bus,vr,vi\n1,1,1.0,0.0\n1,2,0.99,-0.01\n0,1,1.0,0.0\n0,2,0.99,-0.01\n"
        with self.assertRaises(NonMonotoneTime):
            read_snapshot_csv(text, self.case)

    def test_unknown_bus(self) -> None:
        text = "time,bus,vr,vi\n0,1,1.0,0.0\n0,2,0.99,-0.01\n0,5,1.0,0.0\n"
        with self.assertRaises(UnknownBus):
            read_snapshot_csv(text, self.case)

    def test_duplicate_row(self) -> None:
        text = "time,bus,vr,vi\n0,1,1.0,0.0\n0,2,0.99,-0.01\n0,2,0.98,-0.01\n"
        with self.assertRaises(SnapshotFormatError):
            read_snapshot_csv(text, self.case)

    def test_bad_header(self) -> None:
        with self.assertRaises(SnapshotFormatError):
            read_snapshot_csv("t,bus,re,im\n0,1,1.0,0.0\n", self.case)

    def test_non_numeric_value(self) -> None:
        text = "time,bus,vr,vi\n0,1,1.0,0.0\n0,2,high,-0.01\n"
        with self.assertRaises(SnapshotFormatError) as ctx:
            read_snapshot_csv(text, self.case)
        self.assertIn("row 3", str(ctx.exception))

    def test_header_only(self) -> None:
        with self.assertRaises(EmptySeries):
            read_snapshot_csv("time,bus,vr,vi\n", self.case)

    def test_empty_text(self) -> None:
        with self.assertRaises(SnapshotFormatError):
            read_snapshot_csv("", self.case)

    def test_written_series_reads_back_exactly(self) -> None:
        series = load_series(two_bus_case(0.5), (0.5, 1.0, 1.5))
        again = read_snapshot_csv(write_snapshot_csv(series), two_bus_case())
        self.assertEqual(again.snapshots, series.snapshots)

    def test_writer_drops_pq_when_any_snapshot_lacks_it(self) -> None:
        series = load_series(two_bus_case(0.5), (1.0,), with_injections=False)
        text = write_snapshot_csv(series)
        self.assertTrue(text.startswith("time,bus,vr,vi\n"))
        self.assertNotIn("\r", text)

    def test_series_rejects_unordered_indices(self) -> None:
        series = load_series(two_bus_case(0.5), (1.0, 1.2))
        with self.assertRaises(NonMonotoneTime):
            SnapshotSeries(case_ref="", snapshots=series.snapshots[::-1], scenario_id="")


class SnapshotFileTests(unittest.TestCase):
    def test_file_stem_is_scenario_id(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "storm_07.csv"
            path.write_text(FULL, encoding="utf-8")
            series = read_snapshot_file(path, two_bus_case(), case_ref="two-bus")
        self.assertEqual(series.scenario_id, "storm_07")
        self.assertEqual(series.case_ref, "two-bus")

    def test_directories_expand_sorted(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            root = Path(tmp)
            for name in ("b.csv", "a.csv", "notes.txt"):
                (root / name).write_text("", encoding="utf-8")
            single = root / "a.csv"
            paths = expand_snapshot_paths([root, single])
        self.assertEqual([p.name for p in paths], ["a.csv", "b.csv", "a.csv"])


if __name__ == "__main__":
    unittest.main()
