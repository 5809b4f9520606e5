"""Piecewise-smooth paths in C \\ {0, 1}.

A path is a chain of parametrized arcs (line segments, circular arcs,
and geometric "log" segments that interpolate multiplicatively), each
mapped from [0, 1].  Endpoints may carry tangential anchors at the
punctures 0 or 1; everything in between must stay away from both
punctures.  Named loops "gamma0"/"gamma1" are the standard interior
representatives of the two generating loops, based on the positive real
axis at the junction radius.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

PUNCTURES = (0.0 + 0j, 1.0 + 0j)
JUNCTION_RADIUS = 0.125   # base point of interior loops, on the positive real axis
LOOP1_RADIUS = 0.25       # radius of the circle around 1 inside gamma1
_CHAIN_TOL = 1e-12


class DomainError(ValueError):
    """Invalid geometric or algebraic input (maps to CLI exit code 1)."""


@dataclass(frozen=True)
class LineSegment:
    z0: complex
    z1: complex

    def point(self, t: float) -> complex:
        return self.z0 + (self.z1 - self.z0) * t

    def deriv(self, t: float) -> complex:
        return self.z1 - self.z0

    def reversed(self) -> "LineSegment":
        return LineSegment(self.z1, self.z0)

    def min_distance(self, p: complex) -> float:
        d = self.z1 - self.z0
        if d == 0:
            return abs(self.z0 - p)
        t = ((p - self.z0) / d).real
        t = min(1.0, max(0.0, t))
        return abs(self.z0 + d * t - p)


@dataclass(frozen=True)
class CircularArc:
    center: complex
    radius: float
    theta0: float
    theta1: float  # traversed linearly; theta1 > theta0 is counterclockwise

    def point(self, t: float) -> complex:
        th = self.theta0 + (self.theta1 - self.theta0) * t
        return self.center + self.radius * cmath.exp(1j * th)

    def deriv(self, t: float) -> complex:
        th = self.theta0 + (self.theta1 - self.theta0) * t
        return 1j * (self.theta1 - self.theta0) * self.radius * cmath.exp(1j * th)

    def reversed(self) -> "CircularArc":
        return CircularArc(self.center, self.radius, self.theta1, self.theta0)

    def min_distance(self, p: complex) -> float:
        rho = abs(p - self.center)
        lo, hi = min(self.theta0, self.theta1), max(self.theta0, self.theta1)
        if hi - lo >= 2 * math.pi:
            return abs(rho - self.radius)
        phi = cmath.phase(p - self.center) if rho > 0 else 0.0
        for k in range(math.floor((lo - phi) / (2 * math.pi)), math.ceil((hi - phi) / (2 * math.pi)) + 1):
            if lo <= phi + 2 * math.pi * k <= hi:
                return abs(rho - self.radius)
        return min(abs(self.point(0.0) - p), abs(self.point(1.0) - p))


@dataclass(frozen=True)
class LogSegment:
    """Multiplicative interpolation z(t) = z0 * (z1/z0)**t.

    On a ray through the origin this is the radial segment with constant
    dz/z, which removes the boundary layer of the transport equation on
    approaches to the puncture 0.
    """

    z0: complex
    z1: complex

    def __post_init__(self):
        if self.z0 == 0 or self.z1 == 0:
            raise DomainError("log segment endpoint at 0")

    def _rate(self) -> complex:
        return cmath.log(self.z1 / self.z0)

    def point(self, t: float) -> complex:
        return self.z0 * cmath.exp(self._rate() * t)

    def deriv(self, t: float) -> complex:
        return self.point(t) * self._rate()

    def reversed(self) -> "LogSegment":
        return LogSegment(self.z1, self.z0)

    def min_distance(self, p: complex) -> float:
        return min(abs(self.point(k / 64) - p) for k in range(65))


@dataclass(frozen=True)
class ReparametrizedSegment:
    """Segment composed with an increasing smooth warp of [0, 1]."""

    base: object
    warp: Callable[[float], float]
    warp_deriv: Callable[[float], float]

    def point(self, t: float) -> complex:
        return self.base.point(self.warp(t))

    def deriv(self, t: float) -> complex:
        return self.base.deriv(self.warp(t)) * self.warp_deriv(t)

    def reversed(self):
        raise DomainError("reversal of reparametrized segments is not supported")

    def min_distance(self, p: complex) -> float:
        return self.base.min_distance(p)


@dataclass(frozen=True)
class TangentialAnchor:
    puncture: int          # 0 or 1
    vector: complex = 1.0  # nonzero tangent direction

    def __post_init__(self):
        if self.puncture not in (0, 1):
            raise DomainError("tangential anchor must sit at 0 or 1")
        if self.vector == 0:
            raise DomainError("tangent vector must be nonzero")


@dataclass(frozen=True)
class Path:
    segments: tuple = ()
    start_anchor: TangentialAnchor | None = None
    end_anchor: TangentialAnchor | None = None

    def __post_init__(self):
        if not self.segments:
            raise DomainError("path needs at least one segment")
        for a, b in zip(self.segments, self.segments[1:]):
            if abs(a.point(1.0) - b.point(0.0)) > _CHAIN_TOL:
                raise DomainError("path segments are disconnected")
        for seg in self.segments:
            for p in PUNCTURES:
                d = seg.min_distance(p)
                if d < _CHAIN_TOL and not self._endpoint_excused(seg, p):
                    raise DomainError(f"segment passes through the puncture {p.real:g}")

    def _endpoint_excused(self, seg, p) -> bool:
        # endpoints may touch a puncture only with a tangential anchor there
        if (seg is self.segments[0] and self.start_anchor is not None
                and p == complex(self.start_anchor.puncture)
                and abs(seg.point(0.0) - p) <= _CHAIN_TOL):
            return True
        if (seg is self.segments[-1] and self.end_anchor is not None
                and p == complex(self.end_anchor.puncture)
                and abs(seg.point(1.0) - p) <= _CHAIN_TOL):
            return True
        return False

    @property
    def start(self) -> complex:
        return self.segments[0].point(0.0)

    @property
    def end(self) -> complex:
        return self.segments[-1].point(1.0)

    @property
    def is_interior(self) -> bool:
        return self.start_anchor is None and self.end_anchor is None

    def concat(self, other: "Path") -> "Path":
        if self.end_anchor is not None or other.start_anchor is not None:
            raise DomainError("cannot concatenate across a tangential anchor")
        if abs(self.end - other.start) > _CHAIN_TOL:
            raise DomainError("paths do not chain")
        return Path(self.segments + other.segments, self.start_anchor, other.end_anchor)

    def reversed(self) -> "Path":
        return Path(tuple(s.reversed() for s in reversed(self.segments)),
                    self.end_anchor, self.start_anchor)

    def reparametrized(self, amount: float = 0.3) -> "Path":
        """Smooth orientation-preserving warp of every segment (for invariance tests)."""

        def warp(t: float) -> float:
            return t + amount * math.sin(math.pi * t) * t * (1 - t)

        def warp_deriv(t: float) -> float:
            return 1 + amount * (math.pi * math.cos(math.pi * t) * t * (1 - t)
                                 + math.sin(math.pi * t) * (1 - 2 * t))

        segs = tuple(ReparametrizedSegment(s, warp, warp_deriv) for s in self.segments)
        return Path(segs, self.start_anchor, self.end_anchor)


def _as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise DomainError(f"expected [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return parse_complex(value)
    return complex(value)


def parse_complex(text: str) -> complex:
    """Parse 're+imi' strings such as '0.5', '-1.2i', '0.5+0.3i', or '[re, im]'."""
    s = str(text).strip().replace(" ", "")
    if s.startswith("["):
        import json
        try:
            re_part, im_part = json.loads(s)
            return complex(float(re_part), float(im_part))
        except (ValueError, TypeError) as exc:
            raise DomainError(f"cannot parse complex number {text!r}") from exc
    try:
        return complex(s.replace("i", "j"))
    except ValueError as exc:
        raise DomainError(f"cannot parse complex number {text!r}") from exc


def loop_gamma0(turns: int = 1, radius: float = JUNCTION_RADIUS) -> Path:
    """Circle of winding ``turns`` about 0, based at (radius, 0); positive = counterclockwise."""
    if turns == 0:
        raise DomainError("gamma0 with zero turns is an empty loop")
    return Path((CircularArc(0.0, radius, 0.0, 2 * math.pi * turns),))


def loop_gamma1(turns: int = 1, base_radius: float = JUNCTION_RADIUS,
                loop_radius: float = LOOP1_RADIUS) -> Path:
    """Out along the real axis, ``turns`` times around 1, and back."""
    if turns == 0:
        raise DomainError("gamma1 with zero turns is an empty loop")
    out = LineSegment(base_radius, 1 - loop_radius)
    around = CircularArc(1.0, loop_radius, math.pi, math.pi + 2 * math.pi * turns)
    back = LineSegment(1 - loop_radius, base_radius)
    return Path((out, around, back))


def make_path(spec) -> Path:
    """Build a validated path from its JSON-style description.

    Accepted forms: {"waypoints": [...]}, {"loop": "gamma0"|"gamma1",
    "turns": k}, {"compose": [spec, ...]}, plus optional
    {"tangential_start"/"tangential_end": {"at": 0|1, "vector": [re, im]}}
    alongside waypoints.
    """
    if isinstance(spec, Path):
        return spec
    if not isinstance(spec, dict):
        raise DomainError("path spec must be a JSON object")

    if "compose" in spec:
        parts = [make_path(s) for s in spec["compose"]]
        path = parts[0]
        for p in parts[1:]:
            path = path.concat(p)
        return path

    if "loop" in spec:
        turns = int(spec.get("turns", 1))
        name = spec["loop"]
        if name == "gamma0":
            return loop_gamma0(turns)
        if name == "gamma1":
            return loop_gamma1(turns)
        raise DomainError(f"unknown named loop {name!r}")

    start_anchor = _parse_anchor(spec.get("tangential_start"))
    end_anchor = _parse_anchor(spec.get("tangential_end"))
    waypoints = [_as_complex(w) for w in spec.get("waypoints", [])]

    points: list[complex] = []
    if start_anchor is not None:
        points.append(complex(start_anchor.puncture))
    points.extend(waypoints)
    if end_anchor is not None:
        points.append(complex(end_anchor.puncture))
    if len(points) < 2:
        raise DomainError("need at least two waypoints")
    for w in waypoints:
        if min(abs(w - p) for p in PUNCTURES) < _CHAIN_TOL:
            raise DomainError(f"waypoint {w} is a puncture")
    segments = tuple(LineSegment(a, b) for a, b in zip(points, points[1:]))
    return Path(segments, start_anchor, end_anchor)


def _parse_anchor(data) -> TangentialAnchor | None:
    if data is None:
        return None
    return TangentialAnchor(int(data["at"]), _as_complex(data.get("vector", [1, 0])))


def canonical_reach(x: complex, junction: float = JUNCTION_RADIUS,
                    detour: float = LOOP1_RADIUS) -> Path:
    """Deterministic interior path from the junction point to x.

    Rotate along the junction circle to the principal argument of x,
    then move radially; a real target beyond 1 is reached by passing
    above 1 on a small semicircle.  The choice fixes one homotopy class
    per target, which loop prefixes then act on.
    """
    if x == 0 or x == 1:
        raise DomainError("target is a puncture")
    theta = cmath.phase(x)
    segs: list = []
    if abs(theta) > 1e-15:
        segs.append(CircularArc(0.0, junction, 0.0, theta))
    ray_start = junction * cmath.exp(1j * theta)
    if abs(theta) < 1e-15 and x.real > 1:
        rho = min(detour, (x.real - 1) / 2, (1 - junction) / 2)
        segs.append(LogSegment(ray_start, 1 - rho))
        segs.append(CircularArc(1.0, rho, math.pi, 0.0))  # pass above 1
        if abs(x - (1 + rho)) > _CHAIN_TOL:
            segs.append(LineSegment(1 + rho, x))
    elif abs(x - ray_start) > _CHAIN_TOL:
        if abs(theta) < 1e-15 and abs(x.real - 1) < 1e-9:
            raise DomainError("target too close to the puncture 1")
        segs.append(LogSegment(ray_start, x))
    if not segs:
        segs.append(LineSegment(ray_start, ray_start))  # constant path
    return Path(tuple(segs))


def loop_from_group_word(word, junction: float = JUNCTION_RADIUS) -> Path | None:
    """Interior loop based at the junction point realizing a group word.

    Letters map to the named loops; inverse letters to their reversals.
    Returns None for the empty word.
    """
    from .malcev import GroupWord
    if isinstance(word, str):
        word = GroupWord.from_string(word)
    path: Path | None = None
    for gen, sign in word.letters:
        loop = loop_gamma0(1, junction) if gen == "0" else loop_gamma1(1, junction)
        if sign < 0:
            loop = loop.reversed()
        path = loop if path is None else path.concat(loop)
    return path
