"""Planar circles and lines in the (vr, vi) voltage plane."""
from __future__ import annotations

import math
from dataclasses import dataclass

from gridvsla.config.settings import (
    CONCENTRIC_EPS,
    LINEARITY_EPS,
    MIRROR_FALLBACK_EPS,
    TANGENCY_EPS,
)
from gridvsla.core.errors import ConcentricCircles, DegenerateLine, NoIntersection

CIRCLE_CIRCLE = "circle-circle"
P_LINE = "p-line"
Q_LINE = "q-line"


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    radius: float

    def __post_init__(self) -> None:
        if not self.radius >= 0:
            raise ValueError(f"radius must be >= 0, got {self.radius}")

    @property
    def center(self) -> complex:
        return complex(self.cx, self.cy)

    def residual(self, point: complex) -> float:
        return (point.real - self.cx) ** 2 + (point.imag - self.cy) ** 2 - self.radius**2


@dataclass(frozen=True)
class Line:
    """Points with a*vr + b*vi = c."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if self.a * self.a + self.b * self.b <= 0.0:
            raise DegenerateLine(f"line needs a^2 + b^2 > 0, got a={self.a} b={self.b}")

    def residual(self, point: complex) -> float:
        return self.a * point.real + self.b * point.imag - self.c


Locus = Circle | Line


@dataclass(frozen=True)
class SolutionPair:
    v1: complex
    v2: complex
    tangent: bool
    path: str = CIRCLE_CIRCLE

    @property
    def distance(self) -> float:
        return abs(self.v1 - self.v2)


def _ordered(first: complex, second: complex, *, tangent: bool, path: str) -> SolutionPair:
    # High-voltage point first; the raw +/- order depends on center orientation.
    if abs(second) > abs(first):
        first, second = second, first
    return SolutionPair(v1=first, v2=second, tangent=tangent, path=path)


def intersect_circles(
    cp: Circle,
    cq: Circle,
    *,
    eps: float = TANGENCY_EPS,
    path: str = CIRCLE_CIRCLE,
) -> SolutionPair:
    dx = cq.cx - cp.cx
    dy = cq.cy - cp.cy
    alpha = math.hypot(dx, dy)
    if alpha < CONCENTRIC_EPS:
        raise ConcentricCircles(f"centers coincide ({cp.cx:.6g}, {cp.cy:.6g})")

    w1 = (cp.radius**2 - cq.radius**2 + alpha**2) / (2.0 * alpha)
    w2_sq = cp.radius**2 - w1**2
    if w2_sq < -eps:
        raise NoIntersection(f"circles do not meet (w2^2 = {w2_sq:.3e})")
    tangent = w2_sq <= 0.0
    w2 = 0.0 if tangent else math.sqrt(w2_sq)

    w3 = cp.cx + w1 * dx / alpha
    w4 = cp.cy + w1 * dy / alpha
    v1 = complex(w3 + w2 * dy / alpha, w4 - w2 * dx / alpha)
    v2 = complex(w3 - w2 * dy / alpha, w4 + w2 * dx / alpha)
    return _ordered(v1, v2, tangent=tangent, path=path)


def intersect_line_circle(
    line: Line,
    circle: Circle,
    *,
    eps: float = TANGENCY_EPS,
    path: str = P_LINE,
) -> SolutionPair:
    norm = math.hypot(line.a, line.b)
    ux, uy = line.a / norm, line.b / norm
    offset = (line.a * circle.cx + line.b * circle.cy - line.c) / norm
    foot_x = circle.cx - offset * ux
    foot_y = circle.cy - offset * uy
    h_sq = circle.radius**2 - offset**2
    if h_sq < -eps:
        raise NoIntersection(f"line misses circle (h^2 = {h_sq:.3e})")
    tangent = h_sq <= 0.0
    h = 0.0 if tangent else math.sqrt(h_sq)
    v1 = complex(foot_x - h * uy, foot_y + h * ux)
    v2 = complex(foot_x + h * uy, foot_y - h * ux)
    return _ordered(v1, v2, tangent=tangent, path=path)


def reflect_circle(circle: Circle, line: Line) -> Circle:
    """Mirror image of `circle` across `line`; the radius is unchanged."""
    norm_sq = line.a * line.a + line.b * line.b
    if norm_sq < LINEARITY_EPS * LINEARITY_EPS:
        raise DegenerateLine(f"cannot reflect across near-degenerate line a={line.a} b={line.b}")
    gamma = -2.0 * (line.a * circle.cx + line.b * circle.cy - line.c) / norm_sq
    return Circle(
        cx=gamma * line.a + circle.cx,
        cy=gamma * line.b + circle.cy,
        radius=circle.radius,
    )


def intersect_via_mirror(
    circle: Circle,
    line: Line,
    *,
    eps: float = TANGENCY_EPS,
    path: str = P_LINE,
) -> SolutionPair:
    """Line-circle intersection computed as circle vs. its own mirror image."""
    mirror = reflect_circle(circle, line)
    if abs(mirror.center - circle.center) < MIRROR_FALLBACK_EPS * max(1.0, circle.radius):
        # Center on (or next to) the line: the center offset no longer fixes a chord direction.
        return intersect_line_circle(line, circle, eps=eps, path=path)
    return intersect_circles(mirror, circle, eps=eps, path=path)
