"""Finite models of the sequence and function spaces the toolkit works on.

Six space tags are supported, all finite truncations of the classical
objects they model:

``L1_SEQ``
    summable sequences; norm = sum of absolute coordinates.
``LINF_SEQ``
    bounded sequences; norm = max of absolute coordinates.
``RT``
    R^t with the max norm; the base spaces of truncation systems.
``C_AB``
    continuous piecewise-linear functions on [a, b]; sup norm.
``LINF_R``
    essentially bounded functions on R, modelled on a window [a, b] with
    constant extension outside; piecewise linear with finitely many jumps.
``NBV_AB``
    normalized bounded-variation functions on [a, b] (value 0 at a,
    right-continuous at interior breakpoints); norm = total variation.

Sequence points carry a coordinate vector.  Function points carry a domain
``[a, b]``, strictly increasing interior breakpoints and one
``(slope, intercept)`` pair per segment, read as the global line
``t -> slope*t + intercept`` on that segment.  The function is
right-continuous: an interior breakpoint belongs to the segment on its
right.  Jump sizes are derived data, not independent degrees of freedom.

Exactness note: all norm formulas below are closed-form piecewise-linear
algebra (sums, differences, products, max scans - no divisions), so on
inputs whose coordinates, breakpoints and slopes are coarse dyadic
rationals every evaluation is exact in binary floating point.  The test
fixtures exploit this to assert bitwise-exact difference quotients.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import EvalFailureError, MalformedPointError, SpaceMismatchError

__all__ = [
    "Space",
    "SEQUENCE_SPACES",
    "FUNCTION_SPACES",
    "SpacePoint",
    "NormValue",
    "sig",
    "seq_point",
    "pw_point",
    "pw_from_values",
    "constant_fn",
    "step_fn",
    "zeros_like",
    "scale",
    "subtract",
    "value_at",
    "eval_norm",
    "linear_combine",
    "point_to_dict",
    "point_from_dict",
    "point_to_json",
    "point_from_json",
]


class Space(str, Enum):
    L1_SEQ = "L1_SEQ"
    LINF_SEQ = "LINF_SEQ"
    RT = "RT"
    C_AB = "C_AB"
    LINF_R = "LINF_R"
    NBV_AB = "NBV_AB"


SEQUENCE_SPACES = frozenset({Space.L1_SEQ, Space.LINF_SEQ, Space.RT})
FUNCTION_SPACES = frozenset({Space.C_AB, Space.LINF_R, Space.NBV_AB})

# Continuity mismatches at or below this relative scale are treated as
# floating-point debris from linear combination and repaired; anything
# larger is a genuine malformed point.  Dyadic data never triggers repair.
_SNAP_RELATIVE = 64.0 * np.finfo(float).eps


def sig(u: float) -> float:
    """Sign with the convention sig(0) = 0."""
    if u > 0.0:
        return 1.0
    if u < 0.0:
        return -1.0
    return 0.0


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.asarray(arr, dtype=float)
    if out.ndim != 1:
        raise MalformedPointError("expected a one-dimensional float array")
    out = out.copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class SpacePoint:
    """One element of one of the supported space models.

    Use :func:`seq_point` / :func:`pw_point` instead of the raw
    constructor; they normalize array inputs and run validation.
    """

    space: Space
    coords: np.ndarray | None = None
    a: float | None = None
    b: float | None = None
    breakpoints: np.ndarray | None = field(default=None)
    slopes: np.ndarray | None = field(default=None)
    intercepts: np.ndarray | None = field(default=None)

    # -- structure ---------------------------------------------------------

    @property
    def dim(self) -> int:
        if self.coords is None:
            raise MalformedPointError("dim is only defined for sequence points")
        return int(self.coords.shape[0])

    def knots(self) -> np.ndarray:
        """Domain endpoints plus interior breakpoints, increasing."""
        return np.concatenate(([self.a], self.breakpoints, [self.b]))

    def segment_values(self) -> tuple[np.ndarray, np.ndarray]:
        """Values of each segment's line at its left and right knot.

        The closure values: for segment i on [k_i, k_{i+1}] this is
        (slope_i*k_i + intercept_i, slope_i*k_{i+1} + intercept_i); at an
        interior breakpoint the left entry of the right segment is the
        attained (right-continuous) value and the right entry of the left
        segment is the one-sided limit.
        """
        k = self.knots()
        left = self.slopes * k[:-1] + self.intercepts
        right = self.slopes * k[1:] + self.intercepts
        return left, right

    def jumps(self) -> np.ndarray:
        """Discontinuity sizes at the interior breakpoints (derived)."""
        left, right = self.segment_values()
        return left[1:] - right[:-1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpacePoint):
            return NotImplemented
        if self.space is not other.space:
            return False
        if self.coords is not None:
            return other.coords is not None and np.array_equal(self.coords, other.coords)
        return (
            self.a == other.a
            and self.b == other.b
            and np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.slopes, other.slopes)
            and np.array_equal(self.intercepts, other.intercepts)
        )

    def __repr__(self) -> str:  # keep reprs short in test failures
        if self.coords is not None:
            return f"SpacePoint({self.space.value}, {self.coords.tolist()})"
        return (
            f"SpacePoint({self.space.value}, [{self.a}, {self.b}], "
            f"bp={self.breakpoints.tolist()})"
        )


@dataclass(frozen=True)
class NormValue:
    """A norm evaluation together with where it is attained.

    ``witness`` is a 1-based coordinate index for the sequence sup norms, a
    domain point t0 for the function sup norms, and None for the additive
    norms (L1_SEQ, NBV_AB) which have no single attaining site.
    """

    value: float
    witness: int | float | None = None


# -- construction ----------------------------------------------------------


def seq_point(space: Space | str, coords) -> SpacePoint:
    """Build a sequence-space point (L1_SEQ, LINF_SEQ or RT)."""
    space = Space(space)
    if space not in SEQUENCE_SPACES:
        raise MalformedPointError(f"{space.value} points need a piecewise body")
    arr = _readonly(coords)
    if arr.shape[0] < 1:
        raise MalformedPointError("a sequence point needs at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise MalformedPointError("coordinates must be finite")
    return SpacePoint(space=space, coords=arr)


def pw_point(
    space: Space | str,
    a: float,
    b: float,
    breakpoints,
    slopes,
    intercepts,
    *,
    _repair: bool = False,
) -> SpacePoint:
    """Build a piecewise-linear function point (C_AB, LINF_R or NBV_AB).

    ``slopes``/``intercepts`` have one entry per segment and there is one
    more segment than there are breakpoints.  Validation enforces the
    per-space invariants: continuity for C_AB, value 0 at ``a`` for NBV_AB.
    """
    space = Space(space)
    if space not in FUNCTION_SPACES:
        raise MalformedPointError(f"{space.value} points carry coordinates, not segments")
    a = float(a)
    b = float(b)
    bp = _readonly(breakpoints)
    sl = np.asarray(slopes, dtype=float).copy()
    ic = np.asarray(intercepts, dtype=float).copy()
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise MalformedPointError("domain must satisfy a < b with finite endpoints")
    if sl.ndim != 1 or ic.ndim != 1 or sl.shape != ic.shape:
        raise MalformedPointError("slopes and intercepts must be equal-length vectors")
    if sl.shape[0] != bp.shape[0] + 1:
        raise MalformedPointError("need exactly one more segment than breakpoints")
    if bp.shape[0] and not (np.all(np.diff(bp) > 0) and bp[0] > a and bp[-1] < b):
        raise MalformedPointError("breakpoints must be strictly increasing inside (a, b)")
    if not (np.all(np.isfinite(sl)) and np.all(np.isfinite(ic)) and np.all(np.isfinite(bp))):
        raise MalformedPointError("segment data must be finite")

    if _repair:
        _snap_invariants(space, a, bp, sl, ic)

    sl.setflags(write=False)
    ic.setflags(write=False)
    point = SpacePoint(space=space, a=a, b=b, breakpoints=bp, slopes=sl, intercepts=ic)
    _validate_pw(point)
    return point


def _snap_invariants(space: Space, a: float, bp: np.ndarray, sl: np.ndarray, ic: np.ndarray) -> None:
    """Repair sub-ulp invariant violations introduced by float combination.

    Linear combination of two exactly-continuous functions can break the
    exact-equality continuity check by a rounding error in the last place.
    When a mismatch is at roundoff scale this re-anchors the right
    segment's intercept (nudging by ulps if needed) so adjacent segments
    again agree bitwise.  Exact inputs are never touched.
    """
    if space is Space.NBV_AB:
        # force value at a to exactly 0: x - x == 0.0 for every float x
        v0 = sl[0] * a + ic[0]
        if v0 != 0.0 and abs(v0) <= _SNAP_RELATIVE * max(1.0, abs(sl[0] * a)):
            ic[0] = -(sl[0] * a)
    if space is not Space.C_AB:
        return
    for j, t in enumerate(bp):
        left = sl[j] * t + ic[j]
        right = sl[j + 1] * t + ic[j + 1]
        if right == left:
            continue
        scale_ = max(1.0, abs(left), abs(right))
        if abs(right - left) > _SNAP_RELATIVE * scale_:
            continue  # a real discontinuity; validation will reject it
        anchor = sl[j + 1] * t
        ic[j + 1] = left - anchor
        # the re-anchored value can still be one ulp off; walk it in
        for _ in range(4):
            got = anchor + ic[j + 1]
            if got == left:
                break
            ic[j + 1] = math.nextafter(ic[j + 1], ic[j + 1] + (left - got))


def _validate_pw(p: SpacePoint) -> None:
    if p.space is Space.C_AB:
        j = p.jumps()
        if j.shape[0] and np.any(j != 0.0):
            raise MalformedPointError(
                "C_AB requires adjacent segments to match exactly at breakpoints",
                jumps=j.tolist(),
            )
    elif p.space is Space.NBV_AB:
        v0 = p.slopes[0] * p.a + p.intercepts[0]
        if v0 != 0.0:
            raise MalformedPointError(
                "NBV_AB requires value exactly 0 at the left endpoint", value_at_a=v0
            )


def pw_from_values(space: Space | str, knots, values) -> SpacePoint:
    """Continuous piecewise-linear interpolant through (knot, value) pairs.

    Intercepts are propagated left to right so the continuity invariant
    holds bitwise even when the slope divisions round.  Knots must be
    strictly increasing; the first and last knot become the domain.
    """
    k = np.asarray(knots, dtype=float)
    v = np.asarray(values, dtype=float)
    if k.ndim != 1 or k.shape != v.shape or k.shape[0] < 2:
        raise MalformedPointError("need equal-length knot/value vectors, at least 2 long")
    if not np.all(np.diff(k) > 0):
        raise MalformedPointError("knots must be strictly increasing")
    slopes = np.diff(v) / np.diff(k)
    intercepts = np.empty_like(slopes)
    intercepts[0] = v[0] - slopes[0] * k[0]
    prev_end = slopes[0] * k[1] + intercepts[0]
    for i in range(1, slopes.shape[0]):
        anchor = slopes[i] * k[i]
        c = prev_end - anchor
        for _ in range(4):
            got = anchor + c
            if got == prev_end:
                break
            c = math.nextafter(c, c + (prev_end - got))
        intercepts[i] = c
        prev_end = slopes[i] * k[i + 1] + intercepts[i]
    return pw_point(space, k[0], k[-1], k[1:-1], slopes, intercepts)


def constant_fn(space: Space | str, a: float, b: float, value: float) -> SpacePoint:
    """The constant function ``value`` on [a, b] (0 required for NBV_AB)."""
    return pw_point(space, a, b, [], [0.0], [value])


def step_fn(
    space: Space | str,
    a: float,
    b: float,
    at: float,
    left: float,
    right: float,
) -> SpacePoint:
    """Piecewise-constant step: ``left`` on [a, at), ``right`` on [at, b]."""
    return pw_point(space, a, b, [at], [0.0, 0.0], [left, right])


def zeros_like(x: SpacePoint) -> SpacePoint:
    if x.coords is not None:
        return seq_point(x.space, np.zeros(x.dim))
    return constant_fn(x.space, x.a, x.b, 0.0)


def scale(alpha: float, x: SpacePoint) -> SpacePoint:
    return linear_combine(alpha, x, 0.0, x)


def subtract(x: SpacePoint, y: SpacePoint) -> SpacePoint:
    return linear_combine(1.0, x, -1.0, y)


# -- evaluation ------------------------------------------------------------


def value_at(x: SpacePoint, t: float) -> float:
    """Pointwise value of a function-space element.

    Right-continuous at breakpoints.  LINF_R extends constantly outside the
    window; the compact-domain spaces reject points outside [a, b].
    """
    if x.coords is not None:
        raise EvalFailureError("value_at applies to function-space points")
    if t < x.a or t > x.b:
        if x.space is Space.LINF_R:
            t = x.a if t < x.a else x.b
        else:
            raise EvalFailureError(f"{t} lies outside the domain [{x.a}, {x.b}]")
    bp = x.breakpoints
    i = int(np.searchsorted(bp, t, side="right"))
    return float(x.slopes[i] * t + x.intercepts[i])


def eval_norm(x: SpacePoint) -> NormValue:
    """Norm of ``x`` in its own space, with an attaining witness when the
    norm is a sup.

    For the function sup norms the scan covers the closure values of every
    segment, which is where a piecewise-linear function attains extrema;
    for LINF_R this equals the essential sup because each one-sided limit
    is approached on a set of positive measure.
    """
    if x.coords is not None:
        abs_c = np.abs(x.coords)
        if x.space is Space.L1_SEQ:
            return NormValue(float(abs_c.sum()), None)
        p = int(abs_c.argmax())
        return NormValue(float(abs_c[p]), p + 1)

    if x.space is Space.NBV_AB:
        k = x.knots()
        seg_var = np.abs(x.slopes * (k[1:] - k[:-1]))
        jump_var = np.abs(x.jumps())
        return NormValue(float(seg_var.sum() + jump_var.sum()), None)

    left, right = x.segment_values()
    k = x.knots()
    n = left.shape[0]
    vals = np.empty(2 * n)
    pos = np.empty(2 * n)
    vals[0::2], vals[1::2] = left, right
    pos[0::2], pos[1::2] = k[:-1], k[1:]
    abs_vals = np.abs(vals)
    i = int(abs_vals.argmax())
    return NormValue(float(abs_vals[i]), float(pos[i]))


def linear_combine(alpha: float, x: SpacePoint, beta: float, y: SpacePoint) -> SpacePoint:
    """Exact representation of ``alpha*x + beta*y``.

    Requires matching space tags, and matching lengths/domains.  Function
    representations are merged on the union of their breakpoints; the
    class invariants (C_AB continuity, NBV value at a) survive because the
    combination acts segmentwise, with sub-ulp rounding drift repaired.
    """
    if x.space is not y.space:
        raise SpaceMismatchError(
            f"cannot combine {x.space.value} with {y.space.value}"
        )
    alpha = float(alpha)
    beta = float(beta)
    if x.coords is not None:
        if x.dim != y.dim:
            raise SpaceMismatchError(f"length mismatch: {x.dim} vs {y.dim}")
        return seq_point(x.space, alpha * x.coords + beta * y.coords)

    if x.a != y.a or x.b != y.b:
        raise SpaceMismatchError(
            f"domain mismatch: [{x.a}, {x.b}] vs [{y.a}, {y.b}]"
        )
    merged = np.union1d(x.breakpoints, y.breakpoints)
    ix = np.searchsorted(x.breakpoints, merged, side="right")
    iy = np.searchsorted(y.breakpoints, merged, side="right")
    ix = np.concatenate(([0], ix))
    iy = np.concatenate(([0], iy))
    slopes = alpha * x.slopes[ix] + beta * y.slopes[iy]
    intercepts = alpha * x.intercepts[ix] + beta * y.intercepts[iy]
    return pw_point(x.space, x.a, x.b, merged, slopes, intercepts, _repair=True)


# -- canonical JSON --------------------------------------------------------


def point_to_dict(x: SpacePoint) -> dict:
    if x.coords is not None:
        return {"space": x.space.value, "coords": x.coords.tolist()}
    return {
        "space": x.space.value,
        "a": x.a,
        "b": x.b,
        "breakpoints": x.breakpoints.tolist(),
        "segments": [
            {"slope": float(s), "intercept": float(c)}
            for s, c in zip(x.slopes, x.intercepts)
        ],
        "jumps": x.jumps().tolist(),
    }


def point_from_dict(doc: dict) -> SpacePoint:
    if not isinstance(doc, dict) or "space" not in doc:
        raise MalformedPointError("point document must be an object with a 'space' key")
    try:
        space = Space(doc["space"])
    except ValueError as exc:
        raise MalformedPointError(f"unknown space tag {doc['space']!r}") from exc
    if space in SEQUENCE_SPACES:
        if "coords" not in doc:
            raise MalformedPointError(f"{space.value} document needs 'coords'")
        return seq_point(space, doc["coords"])
    try:
        segments = doc["segments"]
        slopes = [s["slope"] for s in segments]
        intercepts = [s["intercept"] for s in segments]
        point = pw_point(space, doc["a"], doc["b"], doc.get("breakpoints", []), slopes, intercepts)
    except (KeyError, TypeError) as exc:
        raise MalformedPointError(f"bad piecewise document: {exc}") from exc
    if "jumps" in doc:
        given = np.asarray(doc["jumps"], dtype=float)
        derived = point.jumps()
        if given.shape != derived.shape or not np.allclose(
            given, derived, rtol=0.0, atol=_SNAP_RELATIVE * max(1.0, float(np.abs(derived).max(initial=0.0)))
        ):
            raise MalformedPointError(
                "stated jumps disagree with the segment representation",
                given=given.tolist(),
                derived=derived.tolist(),
            )
    return point


def point_to_json(x: SpacePoint) -> str:
    return json.dumps(point_to_dict(x), sort_keys=True, separators=(",", ":"))


def point_from_json(text: str) -> SpacePoint:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedPointError(f"invalid JSON: {exc}") from exc
    return point_from_dict(doc)
