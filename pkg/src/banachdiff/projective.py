"""Truncation systems, cylindrical functions, and chain-rule propagation.

A truncation system is a finite chain of dimensions with coordinate
projections between them; a cylindrical function factors through one of
those projections, so its differentiability at a point is exactly that
of its finite-dimensional base map at the projected point.  This module
lifts base-map verdicts through the projection, estimates how Lipschitz
data transfers, and propagates differentiability through composition
with scalar outer maps — including the negative direction, where a kink
in the outer map at exactly the inner value defeats the composition.

The weighted series sum_k |x_k|/k^2 is the worked example everything
else is tested against; its evaluation order (first coordinate to last)
is part of the contract so that independently coded paths agree bitwise.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from ._rng import philox_gen
from .diffengine import (
    DEFAULT_GRID,
    DEFAULT_TOL,
    DiffVerdict,
    Functional,
    QuotientTrace,
    TGrid,
    VerdictStatus,
    _series_limit,
    gateaux_verdict,
    one_sided_derivatives,
)
from .errors import (
    BadDimsError,
    DimTooSmallError,
    NonconstancyUnverifiedError,
    PreconditionFailedError,
)
from .oracles import LinearFunctionalRep, RepKind, apply_rep, coeff_rep, signed_index_rep, zero_rep
from .spaces import (
    SEQUENCE_SPACES,
    Space,
    SpacePoint,
    eval_norm,
    linear_combine,
    seq_point,
    sig,
    subtract,
)

__all__ = [
    "ProjectiveSystem",
    "CylindricalFunction",
    "ScalarMap",
    "make_truncation_system",
    "wseries_eval",
    "wseries_gateaux",
    "wseries_functional",
    "make_cylinder",
    "cyl_eval",
    "full_functional",
    "cyl_gateaux",
    "lipschitz_factor_check",
    "compose_propagate",
    "CYL_BASES",
    "OUTER_MAPS",
]


@dataclass(frozen=True)
class ProjectiveSystem:
    """A chain of truncation dimensions with coordinate projections.

    ``connect(s, t, v)`` truncates a length-t coordinate list to its
    first s entries (s <= t, both listed); ``project(t, x)`` truncates a
    sequence-space point to the finite model of dimension t.  The
    composition identity connect(s,t) ∘ connect(t,w) = connect(s,w) is
    checked on construction for every listed triple.
    """

    dims: tuple[int, ...]

    def __post_init__(self):
        if not self.dims:
            raise BadDimsError("need at least one dimension")
        if any(d < 1 for d in self.dims):
            raise BadDimsError("dimensions must be >= 1", dims=self.dims)
        if any(b <= a for a, b in zip(self.dims, self.dims[1:])):
            raise BadDimsError("dimensions must be strictly increasing", dims=self.dims)

    def _require(self, d: int) -> None:
        if d not in self.dims:
            raise BadDimsError(f"dimension {d} is not part of the system", dims=self.dims)

    def connect(self, s: int, t: int, coords) -> np.ndarray:
        self._require(s)
        self._require(t)
        if s > t:
            raise BadDimsError(f"connecting map needs s <= t, got {s} > {t}")
        v = np.asarray(coords, dtype=float)
        if v.shape != (t,):
            raise PreconditionFailedError(f"expected a length-{t} vector, got shape {v.shape}")
        return v[:s].copy()

    def project(self, t: int, x: SpacePoint) -> SpacePoint:
        self._require(t)
        if x.space not in SEQUENCE_SPACES:
            raise PreconditionFailedError("projections act on sequence-space points")
        if x.dim < t:
            raise DimTooSmallError(f"point has {x.dim} coordinates, projection needs {t}")
        return seq_point(Space.RT, x.coords[:t])


def make_truncation_system(dims) -> ProjectiveSystem:
    """Build the truncation chain and verify its composition identity."""
    sys_ = ProjectiveSystem(dims=tuple(int(d) for d in dims))
    ds = sys_.dims
    for i, s in enumerate(ds):
        for j in range(i, len(ds)):
            for k in range(j, len(ds)):
                t, w = ds[j], ds[k]
                v = np.arange(1.0, w + 1.0)
                via = sys_.connect(s, t, sys_.connect(t, w, v))
                direct = sys_.connect(s, w, v)
                if not np.array_equal(via, direct):
                    raise BadDimsError(
                        "composition identity failed", triple=(s, t, w)
                    )  # unreachable for plain truncations
    return sys_


@dataclass(frozen=True)
class CylindricalFunction:
    """A function of infinitely many coordinates that uses only t of them."""

    name: str
    base_dim: int
    base: Functional

    def __post_init__(self):
        if self.base_dim < 1:
            raise PreconditionFailedError("base_dim must be >= 1")


def wseries_eval(x: SpacePoint) -> float:
    """sum_{k <= dim} |x_k| / k^2, accumulated first coordinate to last.

    The left-to-right order is contractual: the cylindrical wrapper and
    this direct evaluation must agree bitwise, not merely approximately.
    """
    if x.space not in SEQUENCE_SPACES:
        raise PreconditionFailedError("the weighted series is defined on sequence points")
    acc = 0.0
    for k, c in enumerate(x.coords, start=1):
        acc += abs(c) / (k * k)
    return acc


def wseries_gateaux(x: SpacePoint, h: SpacePoint) -> float | None:
    """Directional derivative sum_k sig(x_k) h_k / k^2, or None.

    The closed form holds when every coordinate where h pushes is
    signed; a zero x_k under a nonzero h_k splits the one-sided limits
    (|x_k + t h_k| contributes |t h_k|), so no two-sided value exists.
    """
    if x.space not in SEQUENCE_SPACES or h.space is not x.space or h.dim != x.dim:
        raise PreconditionFailedError("need two sequence points of matching space and dimension")
    acc = 0.0
    for k, (c, d) in enumerate(zip(x.coords, h.coords), start=1):
        if c == 0.0 and d != 0.0:
            return None
        acc += sig(c) * d / (k * k)
    return acc


def wseries_functional() -> Functional:
    return Functional("weighted_series", wseries_eval)


CYL_BASES: dict[str, Callable[[], Functional]] = {
    "wseries_partial": lambda: Functional("wseries_partial", wseries_eval, Space.RT),
    "supnorm": lambda: Functional("supnorm", lambda p: eval_norm(p).value, Space.RT),
}


def make_cylinder(base_name: str, t: int) -> CylindricalFunction:
    if base_name not in CYL_BASES:
        raise PreconditionFailedError(
            f"unknown base {base_name!r}; available: {sorted(CYL_BASES)}"
        )
    return CylindricalFunction(f"{base_name}_{t}", t, CYL_BASES[base_name]())


def cyl_eval(cf: CylindricalFunction, sys_: ProjectiveSystem, x: SpacePoint) -> float:
    """Evaluate the cylindrical function: base map after projection."""
    if cf.base_dim not in sys_.dims:
        raise BadDimsError(f"base dimension {cf.base_dim} is not part of the system", dims=sys_.dims)
    return cf.base(sys_.project(cf.base_dim, x))


def full_functional(cf: CylindricalFunction, sys_: ProjectiveSystem) -> Functional:
    """The cylindrical function as a Functional on full sequence points."""
    return Functional(cf.name, lambda x: cyl_eval(cf, sys_, x))


def _lift_direction(w: SpacePoint, template: SpacePoint) -> SpacePoint:
    """Zero-pad a base-space direction to the template's space and length."""
    out = np.zeros(template.dim)
    out[: w.dim] = w.coords
    return seq_point(template.space, out)


def cyl_gateaux(
    cf: CylindricalFunction,
    sys_: ProjectiveSystem,
    x: SpacePoint,
    h: SpacePoint,
    grid: TGrid = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
) -> DiffVerdict:
    """Differentiability of the cylindrical function, decided downstairs.

    The projection is linear and norm-nonincreasing, so the function is
    differentiable at x exactly when its base map is at the projected
    point; the base verdict is lifted: derivative representations apply
    to full directions through truncation built into their evaluation,
    and failure witnesses are zero-padded back up.
    """
    if cf.base_dim not in sys_.dims:
        raise BadDimsError(f"base dimension {cf.base_dim} is not part of the system", dims=sys_.dims)
    xt = sys_.project(cf.base_dim, x)
    ht = sys_.project(cf.base_dim, h)
    below = gateaux_verdict(cf.base, xt, [ht], grid, tol)
    witness = None
    if below.failure_witness is not None:
        witness = _lift_direction(below.failure_witness, x)
    return DiffVerdict(
        status=below.status,
        derivative=below.derivative,
        failure_witness=witness,
        traces=below.traces,
        value=below.value,
        detail=below.detail,
    )


def lipschitz_factor_check(
    cf: CylindricalFunction,
    sys_: ProjectiveSystem,
    x: SpacePoint,
    radius: float,
    pair_count: int,
    seed: int,
) -> tuple[float, float, bool]:
    """Estimate Lipschitz constants upstairs and downstairs and compare.

    Samples antipodal pairs in the full-space ball around x, rates the
    full function on them, and rates the base map on the projected pairs.
    Projection can only shrink the denominator norm, so each projected
    ratio is at least its full-space counterpart and the estimates must
    come out ordered k_full <= k_base (up to a 1e-12 float allowance);
    the returned flag asserts exactly that, plus finiteness.

    Raises if every sampled value of the function agrees — a constant
    function has no Lipschitz geometry worth reporting.
    """
    if cf.base_dim not in sys_.dims:
        raise BadDimsError(f"base dimension {cf.base_dim} is not part of the system", dims=sys_.dims)
    if not radius > 0.0:
        raise PreconditionFailedError("radius must be positive")
    if pair_count < 1:
        raise PreconditionFailedError("pair_count must be >= 1")
    f_full = full_functional(cf, sys_)
    t = cf.base_dim
    rng = philox_gen(seed)
    c = radius / 2.0
    n = x.dim
    eye = np.eye(n)
    k_full = 0.0
    k_base = 0.0
    seen_lo = math.inf
    seen_hi = -math.inf
    for i in range(pair_count):
        mode = i % 3
        if mode == 0:
            d = rng.choice([-1.0, 1.0], size=n)
        elif mode == 1:
            d = eye[i % n].copy()
        else:
            d = rng.uniform(-1.0, 1.0, size=n)
            if not np.any(d):
                continue
        du = seq_point(x.space, d / np.max(np.abs(d)))
        y = linear_combine(1.0, x, c, du)
        z = linear_combine(1.0, x, -c, du)
        fy, fz = f_full(y), f_full(z)
        seen_lo, seen_hi = min(seen_lo, fy, fz), max(seen_hi, fy, fz)
        gap_full = eval_norm(subtract(y, z)).value
        if gap_full > 0.0:
            k_full = max(k_full, abs(fy - fz) / gap_full)
        yt, zt = sys_.project(t, y), sys_.project(t, z)
        gap_base = eval_norm(subtract(yt, zt)).value
        if gap_base > 0.0:
            k_base = max(k_base, abs(cf.base(yt) - cf.base(zt)) / gap_base)
    if seen_lo == seen_hi:
        raise NonconstancyUnverifiedError(
            "all sampled values agree; cannot certify the function nonconstant",
            value=seen_lo,
        )
    flag = math.isfinite(k_base) and k_full <= k_base + 1e-12
    return k_full, k_base, flag


@dataclass(frozen=True)
class ScalarMap:
    """A named real-to-real map used as the outer factor of a composition."""

    name: str
    fn: Callable[[float], float]

    def __call__(self, u: float) -> float:
        return float(self.fn(u))


OUTER_MAPS: dict[str, ScalarMap] = {
    m.name: m
    for m in (
        ScalarMap("identity", lambda u: u),
        ScalarMap("square", lambda u: u * u),
        ScalarMap("cube_plus_u", lambda u: u * u * u + u),
        ScalarMap("abs", abs),
        ScalarMap("relu", lambda u: u if u > 0.0 else 0.0),
        ScalarMap("sin", math.sin),
        ScalarMap("exp", math.exp),
    )
}


def _scalar_one_sided(
    g: ScalarMap, y0: float, grid: TGrid, tol: float
) -> tuple[float | None, float | None, QuotientTrace]:
    gy = g(y0)
    steps = grid.steps()
    fq = [(g(y0 + t) - gy) / t for t in steps]
    bq = [(g(y0 - t) - gy) / -t for t in steps]
    d_plus, conv_p = _series_limit(fq, tol)
    d_minus, conv_m = _series_limit(bq, tol)
    trace = QuotientTrace(
        steps=tuple(float(t) for t in steps),
        forward_q=tuple(fq),
        backward_q=tuple(bq),
        d_plus=d_plus,
        d_minus=d_minus,
        converged_plus=conv_p,
        converged_minus=conv_m,
    )
    return d_plus, d_minus, trace


def _scale_rep(rep: LinearFunctionalRep, factor: float, tol: float) -> LinearFunctionalRep:
    if rep.kind is RepKind.ZERO or factor == 0.0:
        return zero_rep()
    if rep.kind is RepKind.SIGNED_INDEX:
        if abs(abs(factor) - 1.0) <= tol:
            return signed_index_rep(rep.p, rep.sigma * (1.0 if factor > 0 else -1.0))
        coeffs = [0.0] * rep.p
        coeffs[rep.p - 1] = rep.sigma * factor
        return coeff_rep(coeffs)
    if rep.kind is RepKind.COEFF_SEQ:
        return coeff_rep([factor * c for c in rep.coeffs])
    raise PreconditionFailedError("cannot scale a point-evaluation representation to a sequence model")


def compose_propagate(
    outer: ScalarMap,
    inner: CylindricalFunction,
    sys_: ProjectiveSystem,
    x: SpacePoint,
    h: SpacePoint,
    grid: TGrid = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
) -> DiffVerdict:
    """Chain-rule verdict for outer ∘ inner at x along h.

    With the inner function differentiable at x (derivative value v along
    h) and the outer map differentiable at y0 = inner(x) with slope g',
    the composition is differentiable with value g'·v — which is then
    cross-checked against direct difference quotients of the composition
    before being returned.  A genuine outer kink at exactly y0 combined
    with a nonzero inner derivative defeats the composition; the verdict
    is NOT_GATEAUX with a verified witness.  An outer kink under a zero
    inner derivative, or any unverifiable configuration, is INCONCLUSIVE
    rather than guessed.
    """
    inner_verdict = cyl_gateaux(inner, sys_, x, h, grid, tol)
    y0 = cyl_eval(inner, sys_, x)
    gp, gm, gtrace = _scalar_one_sided(outer, y0, grid, tol)
    f_comp = Functional(
        f"{outer.name}_of_{inner.name}",
        lambda pt: outer(cyl_eval(inner, sys_, pt)),
    )
    traces = list(inner_verdict.traces) + [gtrace]

    if inner_verdict.status is VerdictStatus.INCONCLUSIVE:
        return DiffVerdict(
            status=VerdictStatus.INCONCLUSIVE,
            traces=tuple(traces),
            detail=f"inner factor inconclusive: {inner_verdict.detail}",
        )

    if inner_verdict.status is VerdictStatus.NOT_GATEAUX:
        # The chain rule decides nothing when the inner factor fails, but
        # the composition itself can still be interrogated directly along
        # the inherited witness; only a converged two-sided disagreement
        # of those quotients justifies NOT_GATEAUX.
        w = inner_verdict.failure_witness
        check = one_sided_derivatives(f_comp, x, w, grid, tol)
        traces.append(check)
        if check.converged_plus and check.converged_minus and abs(check.d_plus - check.d_minus) > tol:
            return DiffVerdict(
                status=VerdictStatus.NOT_GATEAUX,
                failure_witness=w,
                traces=tuple(traces),
                detail="inner failure propagates through the outer map",
            )
        return DiffVerdict(
            status=VerdictStatus.INCONCLUSIVE,
            traces=tuple(traces),
            detail="inner factor fails but its witness does not carry to the "
            "composition (the outer map may flatten or fold the failure)",
        )

    if gp is None or gm is None:
        return DiffVerdict(
            status=VerdictStatus.INCONCLUSIVE,
            traces=tuple(traces),
            detail="outer map quotients did not converge at the inner value",
        )
    outer_kinked = abs(gp - gm) > tol

    # inner GATEAUX
    rep_in = inner_verdict.derivative
    v = apply_rep(rep_in, sys_.project(inner.base_dim, h))
    if outer_kinked:
        if abs(v) <= tol and rep_in.kind is RepKind.ZERO:
            check = one_sided_derivatives(f_comp, x, h, grid, tol)
            traces.append(check)
            ok = (
                check.converged_plus
                and check.converged_minus
                and abs(check.d_plus) <= tol
                and abs(check.d_minus) <= tol
            )
            if ok:
                return DiffVerdict(
                    status=VerdictStatus.GATEAUX,
                    derivative=zero_rep(),
                    traces=tuple(traces),
                    value=0.0,
                )
            return DiffVerdict(
                status=VerdictStatus.INCONCLUSIVE,
                traces=tuple(traces),
                detail="outer kink under a zero inner derivative did not verify flat",
            )
        witness = h if abs(v) > tol else _pick_sloped_direction(rep_in, x, tol)
        if witness is None:
            return DiffVerdict(
                status=VerdictStatus.INCONCLUSIVE,
                traces=tuple(traces),
                detail="outer map kinks at the inner value but no sloped direction was found",
            )
        check = one_sided_derivatives(f_comp, x, witness, grid, tol)
        traces.append(check)
        if check.converged_plus and check.converged_minus and abs(check.d_plus - check.d_minus) > tol:
            return DiffVerdict(
                status=VerdictStatus.NOT_GATEAUX,
                failure_witness=witness,
                traces=tuple(traces),
                detail="outer map kinks exactly at the inner value",
            )
        return DiffVerdict(
            status=VerdictStatus.INCONCLUSIVE,
            traces=tuple(traces),
            detail="outer kink did not verify against the composition",
        )

    g_prime = gp
    value = g_prime * v
    check = one_sided_derivatives(f_comp, x, h, grid, tol)
    traces.append(check)
    ok = (
        check.converged_plus
        and check.converged_minus
        and abs(check.d_plus - value) <= tol * max(1.0, abs(value))
        and abs(check.d_minus - value) <= tol * max(1.0, abs(value))
    )
    if not ok:
        return DiffVerdict(
            status=VerdictStatus.INCONCLUSIVE,
            traces=tuple(traces),
            value=value,
            detail="chain-rule value disagrees with direct quotients of the composition",
        )
    return DiffVerdict(
        status=VerdictStatus.GATEAUX,
        derivative=_scale_rep(rep_in, g_prime, tol),
        traces=tuple(traces),
        value=value,
    )


def _pick_sloped_direction(
    rep: LinearFunctionalRep, x: SpacePoint, tol: float
) -> SpacePoint | None:
    """A direction along which the representation responds nonzero."""
    if rep.kind is RepKind.SIGNED_INDEX:
        k = rep.p - 1
    elif rep.kind is RepKind.COEFF_SEQ:
        coeffs = np.asarray(rep.coeffs)
        k = int(np.abs(coeffs).argmax())
        if abs(coeffs[k]) <= tol:
            return None
    else:
        return None
    if k >= x.dim:
        return None
    d = np.zeros(x.dim)
    d[k] = 1.0
    return seq_point(x.space, d)
