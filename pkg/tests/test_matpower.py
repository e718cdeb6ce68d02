import math
import unittest

from gridvsla.config.settings import IEEE30_CASE_PATH
from gridvsla.core.errors import CaseSyntaxError, DanglingBranch, InputError, SemanticError
from gridvsla.grid.model import BusKind
from gridvsla.io import load_case
from gridvsla.io.matpower import parse_matpower

TINY = """function mpc = tiny
%% two buses, one line
mpc.version = '2';
mpc.baseMVA = 100;
mpc.bus = [
\t1\t3\t0\t0\t0\t0\t1\t1\t0\t230\t1\t1.1\t0.9;
\t2\t1\t50\t10\t0\t0\t1\t1\t-5\t230\t1\t1.1\t0.9;
];
mpc.gen = [
\t1\t0\t0\t300\t-300\t1.02\t100\t1\t250\t10;
];
mpc.branch = [
\t1\t2\t0.1\t0.2\t0\t250\t250\t250\t0\t0\t1\t-360\t360;
];
mpc.gencost = [
\t2\t0\t0\t3\t0.01\t40\t0;
];
"""


class MatpowerTests(unittest.TestCase):
    def test_tiny_case(self) -> None:
        case = parse_matpower(TINY)
        self.assertEqual(case.base_mva, 100.0)
        self.assertEqual(case.bus_ids, (1, 2))
        self.assertIs(case.bus(1).kind, BusKind.SLACK)
        self.assertAlmostEqual(case.bus(2).p_load, 0.5, places=15)
        self.assertAlmostEqual(case.bus(2).q_load, 0.1, places=15)
        self.assertAlmostEqual(case.bus(2).v_init_ang, math.radians(-5.0), places=15)
        self.assertAlmostEqual(case.generators[0].q_max, 3.0, places=15)
        self.assertAlmostEqual(case.generators[0].v_setpoint, 1.02, places=15)

    def test_zero_tap_means_nominal(self) -> None:
        branch = parse_matpower(TINY).branches[0]
        self.assertEqual(branch.tap, 1.0)
        self.assertFalse(branch.is_transformer)

    def test_duplicate_bus_id(self) -> None:
        text = TINY.replace("\t2\t1\t50", "\t1\t1\t50")
        with self.assertRaises(SemanticError):
            parse_matpower(text)

    def test_missing_slack(self) -> None:
        text = TINY.replace("\t1\t3\t0", "\t1\t1\t0")
        with self.assertRaises(SemanticError):
            parse_matpower(text)

    def test_dangling_branch(self) -> None:
        text = TINY.replace("\t1\t2\t0.1\t0.2", "\t1\t7\t0.1\t0.2")
        with self.assertRaises(DanglingBranch):
            parse_matpower(text)

    def test_bad_number_reports_line(self) -> None:
        text = TINY.replace("0.1\t0.2\t0\t250", "0.1\tabc\t0\t250")
        with self.assertRaises(CaseSyntaxError) as ctx:
            parse_matpower(text)
        self.assertEqual(ctx.exception.line, 13)

    def test_short_row(self) -> None:
        text = TINY.replace("\t1\t2\t0.1\t0.2\t0\t250\t250\t250\t0\t0\t1\t-360\t360;", "\t1\t2\t0.1;")
        with self.assertRaises(CaseSyntaxError):
            parse_matpower(text)

    def test_unterminated_matrix(self) -> None:
        text = TINY.split("mpc.gen")[0].rstrip().rstrip("];")
        with self.assertRaises(CaseSyntaxError):
            parse_matpower(text)

    def test_missing_base(self) -> None:
        with self.assertRaises(SemanticError):
            parse_matpower(TINY.replace("mpc.baseMVA = 100;", ""))

    def test_ieee30(self) -> None:
        case = load_case(IEEE30_CASE_PATH)
        self.assertEqual(len(case.buses), 30)
        self.assertEqual(len(case.branches), 41)
        self.assertEqual([g.bus for g in case.generators], [1, 2, 5, 8, 11, 13])
        self.assertEqual(case.slack_bus.id, 1)
        self.assertAlmostEqual(case.bus(10).b_shunt, 0.19, places=15)
        self.assertAlmostEqual(case.bus(24).b_shunt, 0.043, places=15)
        taps = {(br.from_bus, br.to_bus): br.tap for br in case.branches if br.is_transformer}
        self.assertEqual(taps, {(6, 9): 0.978, (6, 10): 0.969, (4, 12): 0.932, (28, 27): 0.968})
        total = sum(b.p_load for b in case.buses) * case.base_mva
        self.assertAlmostEqual(total, 283.4, places=9)

    def test_unknown_extension(self) -> None:
        with self.assertRaises(InputError):
            load_case(IEEE30_CASE_PATH.with_suffix(".raw"))


if __name__ == "__main__":
    unittest.main()
