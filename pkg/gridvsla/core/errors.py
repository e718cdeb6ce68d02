"""Exception hierarchy; each family carries the process exit code the CLI maps it to."""
from __future__ import annotations


class VslaError(Exception):
    exit_code = 4


class UsageError(VslaError):
    exit_code = 1


# Input / parse failures (exit 2).


class InputError(VslaError):
    exit_code = 2


class CaseSyntaxError(InputError):
    def __init__(self, message: str, *, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class SemanticError(InputError):
    pass


class DanglingBranch(SemanticError):
    pass


class ZeroImpedanceBranch(SemanticError):
    pass


class SchemaError(InputError):
    def __init__(self, message: str, *, path: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


class SnapshotFormatError(InputError):
    pass


class MissingBus(InputError):
    def __init__(self, *, time: float, bus: int) -> None:
        super().__init__(f"bus {bus} missing at time {time:g}")
        self.time = time
        self.bus = bus


class NonMonotoneTime(InputError):
    pass


class UnknownBus(InputError):
    def __init__(self, bus: int) -> None:
        super().__init__(f"unknown bus {bus}")
        self.bus = bus


class DimensionMismatch(InputError):
    pass


class MissingNeighborVoltage(InputError):
    def __init__(self, *, bus: int, neighbor: int) -> None:
        super().__init__(f"bus {bus}: no voltage for neighbor {neighbor}")
        self.bus = bus
        self.neighbor = neighbor


class EmptySeries(InputError):
    pass


class EmptyInput(InputError):
    pass


# Numerical failures (exit 3).


class NumericalError(VslaError):
    exit_code = 3


class Diverged(NumericalError):
    def __init__(self, *, iterations: int, final_mismatch: float) -> None:
        super().__init__(
            f"power flow diverged after {iterations} iterations (max mismatch {final_mismatch:.3e})"
        )
        self.iterations = iterations
        self.final_mismatch = final_mismatch


class SingularJacobian(NumericalError):
    pass


class BaseCaseDiverged(NumericalError):
    pass


class NotConverged(NumericalError):
    pass


class ZeroSusceptance(NumericalError):
    pass


class GeometryError(NumericalError):
    pass


class ImaginaryRadius(GeometryError):
    pass


class NoIntersection(GeometryError):
    pass


class ConcentricCircles(GeometryError):
    pass


class DegenerateLine(GeometryError):
    pass


class BothLinear(GeometryError):
    pass


class IsolatedBus(GeometryError):
    pass


class DegenerateDistribution(UserWarning):
    pass
