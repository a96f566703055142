"""One-sided trigonometric approximations with certified margins.

For a periodic target (the log-sine function, a periodic Bernoulli
function, or an interval indicator through composition) this module
builds a degree-N trigonometric polynomial lying entirely above or below
the target while extremizing its mean.  No closed-form construction is
assumed anywhere: the polynomial comes from a discretized linear program
whose constraint grid is a uniform mesh augmented with points
geometrically approaching any discontinuity or singularity, resolved a
few times by cutting planes (new constraints at certified violation
minima), then certified on a much finer grid with local minimization of
the one-sided gap, and finally repaired by a constant shift.  The known
optimal means act purely as external oracles for the achieved mean.

The grid LP is a relaxation, so its optimum brackets the true extremal
mean from one side and the repaired polynomial brackets it from the
other; both values are kept on the result so tests can assert the
sandwich.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .bernoulli import BernoulliTable, default_table
from .errors import CertificationError, SolverError
from .simplex import solve_inequality_lp

TWO_PI = 2.0 * math.pi

# log-sine minorant constraints are only meaningful where the target is not
# arbitrarily negative; below this floor the polynomial cannot cross it
LOG_SINE_FLOOR = -50.0

_CLUSTER_DEPTH = 40
_CERT_CLUSTER_DEPTH = 46
_MAX_ROUNDS = 25
_STOP_VIOLATION = 2e-12
_CERT_TOL = 1e-12


@dataclass(frozen=True)
class TrigPoly:
    """Real trigonometric polynomial a_0 + sum a_k cos + b_k sin."""

    cos: tuple[float, ...]  # a_0 .. a_N
    sin: tuple[float, ...]  # b_1 .. b_N

    def __post_init__(self):
        if len(self.sin) != max(len(self.cos) - 1, 0):
            raise ValueError("sin coefficients must be b_1..b_N")

    @property
    def degree(self) -> int:
        return len(self.cos) - 1

    @property
    def mean(self) -> float:
        return self.cos[0]

    def __call__(self, theta):
        th = np.asarray(theta, dtype=float)
        k = np.arange(1, self.degree + 1)
        ang = TWO_PI * np.multiply.outer(th, k)
        vals = (
            self.cos[0]
            + np.cos(ang) @ np.asarray(self.cos[1:])
            + (np.sin(ang) @ np.asarray(self.sin) if self.sin else 0.0)
        )
        return float(vals) if vals.ndim == 0 else vals

    def derivative_at(self, theta):
        th = np.asarray(theta, dtype=float)
        k = np.arange(1, self.degree + 1)
        ang = TWO_PI * np.multiply.outer(th, k)
        vals = TWO_PI * (
            -np.sin(ang) @ (k * np.asarray(self.cos[1:]))
            + (np.cos(ang) @ (k * np.asarray(self.sin)) if self.sin else 0.0)
        )
        return float(vals) if vals.ndim == 0 else vals

    def fourier(self, k: int) -> complex:
        """V-hat(k) with the conjugate symmetry V-hat(-k) = conj V-hat(k)."""
        if abs(k) > self.degree:
            return 0.0
        if k == 0:
            return complex(self.cos[0])
        a = self.cos[abs(k)]
        b = self.sin[abs(k) - 1] if self.sin else 0.0
        return complex(a, -b) / 2.0 if k > 0 else complex(a, b) / 2.0

    def abs_fourier(self) -> np.ndarray:
        """|V-hat(k)| for k = 1..N."""
        a = np.asarray(self.cos[1:])
        b = np.asarray(self.sin) if self.sin else np.zeros_like(a)
        return np.hypot(a, b) / 2.0

    def shifted(self, delta: float) -> "TrigPoly":
        return TrigPoly((self.cos[0] + delta,) + self.cos[1:], self.sin)

    def to_json_dict(self) -> dict:
        return {"N": self.degree, "cos": list(self.cos), "sin": list(self.sin)}


# ---------------------------------------------------------------------------
# Targets
# ---------------------------------------------------------------------------


class _Target:
    def __init__(self, name, even, singular, value, derivative, table):
        self.name = name
        self.even = even
        self.singular = singular  # jump or log-singularity at theta = 0
        self.value = value
        self.derivative = derivative
        self.table = table


def target_spec(name: str, table: BernoulliTable | None = None) -> _Target:
    """Parse a target tag: log2sin, sawtooth, or bernoulli:m."""
    table = table or default_table()
    if name == "log2sin":

        def value(x):
            x = np.asarray(x, dtype=float)
            frac = x - np.floor(x)
            with np.errstate(divide="ignore"):
                v = np.log(2.0 * np.abs(np.sin(math.pi * frac)))
            v = np.where(frac == 0.0, -np.inf, v)
            return float(v) if v.ndim == 0 else v

        def derivative(x):
            return math.pi / np.tan(math.pi * np.asarray(x, dtype=float))

        return _Target("log2sin", True, True, value, derivative, table)
    if name == "sawtooth":
        name = "bernoulli:1"
    if name.startswith("bernoulli:"):
        m = int(name.split(":", 1)[1])
        if m < 1:
            raise ValueError(f"Bernoulli index must be >= 1, got {m}")

        def value(x, m=m):
            return table.periodic(m, x)

        def derivative(x, m=m):
            if m == 1:
                return np.ones_like(np.asarray(x, dtype=float))
            return m * table.periodic(m - 1, x)

        return _Target(f"bernoulli:{m}", m % 2 == 0, m == 1, value, derivative, table)
    raise ValueError(f"unknown one-sided target {name!r}")


def oracle_mean(target: str, side: str, N: int, table: BernoulliTable | None = None):
    """The known extremal mean, or None where no finite one exists.

    log2sin majorant: log2/(N+1); Bernoulli index m: extrema of B_m over
    (N+1)^m; the log-sine target has no global minorant (it is unbounded
    below), so that side carries no oracle.
    """
    table = table or default_table()
    spec = target_spec(target, table)
    if spec.name == "log2sin":
        return math.log(2.0) / (N + 1) if side == "majorant" else None
    m = int(spec.name.split(":")[1])
    hi, lo = table.extrema(m)
    return (hi if side == "majorant" else lo) / float(N + 1) ** m


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OneSidedResult:
    poly: TrigPoly
    target: str
    side: str  # majorant | minorant
    achieved_mean: float
    oracle_mean: float | None
    lp_mean: float  # grid-relaxed optimum, before repair
    certified_margin: float
    repair_epsilon: float
    rounds: int
    constraints: int

    @property
    def sign(self) -> int:
        return 1 if self.side == "majorant" else -1

    def to_json_dict(self) -> dict:
        gap = None
        if self.oracle_mean not in (None, 0.0):
            gap = abs(self.achieved_mean - self.oracle_mean) / abs(self.oracle_mean)
        return {
            "target": self.target,
            "side": self.side,
            "N": self.poly.degree,
            "achieved_mean": self.achieved_mean,
            "oracle_mean": self.oracle_mean,
            "relative_gap": gap,
            "lp_mean": self.lp_mean,
            "certified_margin": self.certified_margin,
            "repair_epsilon": self.repair_epsilon,
            "rounds": self.rounds,
            "constraints": self.constraints,
            "poly": self.poly.to_json_dict(),
        }


def _design(thetas: np.ndarray, N: int, even: bool) -> np.ndarray:
    k = np.arange(1, N + 1)
    ang = TWO_PI * np.multiply.outer(thetas, k)
    cols = [np.ones(len(thetas))]
    cols.append(np.cos(ang))
    if not even:
        cols.append(np.sin(ang))
    return np.column_stack(cols)


def _coeffs_from_solution(x: np.ndarray, N: int, even: bool) -> TrigPoly:
    cos = tuple(float(v) for v in x[: N + 1])
    sin = tuple(float(v) for v in x[N + 1 :]) if not even else (0.0,) * N
    return TrigPoly(cos, sin[:N])


def _cluster_points(depth: int) -> np.ndarray:
    j = np.arange(1, depth + 1, dtype=float)
    return np.concatenate([2.0**-j, 1.0 - 2.0**-j])


def _constraint_values(spec: _Target, side: int, thetas: np.ndarray):
    """Keep only points where the one-sided constraint is meaningful."""
    vals = spec.value(thetas)
    keep = np.isfinite(vals)
    if spec.name == "log2sin" and side < 0:
        keep &= vals > LOG_SINE_FLOOR
    return thetas[keep], vals[keep]


def _golden_min(f, lo, hi, iters=60):
    """Golden-section minimum of f on [lo, hi]."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = f(d)
        if b - a < 1e-14:
            break
    xs = [(fc, c), (fd, d), (f(lo), lo), (f(hi), hi)]
    return min(xs)


def _certify(poly: TrigPoly, spec: _Target, side: int, base_grid: int):
    """Minimum of side*(poly - target) over the circle, with refinement.

    Scans a grid ten times finer than the construction grid plus deeper
    cluster points, then polishes every local minimum of the gap by
    golden-section between its grid neighbors.  Near the singular point
    the cluster points approach geometrically and the target is monotone
    past the deepest one, so the scan is conclusive there.
    """
    fine = np.arange(10 * base_grid) / float(10 * base_grid)
    pts = np.unique(np.concatenate([fine, _cluster_points(_CERT_CLUSTER_DEPTH)]))
    pts, tvals = _constraint_values(spec, side, pts)
    h = side * (poly(pts) - tvals)

    def gap(x):
        tv = spec.value(float(x))
        if not np.isfinite(tv) or (spec.name == "log2sin" and side < 0 and tv <= LOG_SINE_FLOOR):
            return math.inf
        return side * (poly(float(x)) - tv)

    order = np.argsort(h)
    margin = float(h[order[0]])
    worst = float(pts[order[0]])
    minima: list[tuple[float, float]] = []
    local = np.flatnonzero(
        (h <= np.roll(h, 1)) & (h <= np.roll(h, -1))
    )
    # polish the 24 lowest local minima (plenty: at most ~N+1 touch regions)
    ranked = local[np.argsort(h[local])][:24]
    for i in ranked:
        lo = pts[i - 1] if i > 0 else pts[i] - 1.0 / (10 * base_grid)
        hi = pts[i + 1] if i + 1 < len(pts) else pts[i] + 1.0 / (10 * base_grid)
        val, x = _golden_min(gap, lo, hi)
        minima.append((float(x), float(val)))
        if val < margin:
            margin, worst = float(val), float(x)
    return margin, worst, minima


def _solve_round(spec: _Target, side: int, N: int, thetas: np.ndarray):
    pts, tvals = _constraint_values(spec, side, thetas)
    A = _design(pts, N, spec.even)
    ncols = A.shape[1]
    c = np.zeros(ncols)
    c[0] = 1.0 if side > 0 else -1.0
    if side > 0:
        x, value = solve_inequality_lp(A, tvals, c)
    else:
        x, value = solve_inequality_lp(-A, -tvals, c)
    return _coeffs_from_solution(x, N, spec.even), len(pts)


def _repair(poly: TrigPoly, spec: _Target, sgn: int, grid_points: int):
    """Shift the constant term until certification clears, recording the
    total shift; re-certification may expose a marginally deeper minimum,
    so the shift iterates (it converges immediately in practice)."""
    margin, worst, _ = _certify(poly, spec, sgn, grid_points)
    repair = 0.0
    for _ in range(3):
        if margin >= 0.0:
            break
        step = -margin * (1.0 + 1e-9) + 1e-15
        poly = poly.shifted(sgn * step)
        repair += step
        margin, worst, _ = _certify(poly, spec, sgn, grid_points)
    return poly, margin, worst, repair


_CACHE_LOCK = threading.Lock()
_CACHE: dict[tuple, OneSidedResult] = {}


def construct_one_sided(
    target: str,
    side: str,
    N: int,
    grid_points: int | None = None,
    table: BernoulliTable | None = None,
) -> OneSidedResult:
    """Extremal-mean one-sided trigonometric polynomial of degree N.

    side is "majorant" (minimal mean above the target) or "minorant"
    (maximal mean below it).  Results are cached per (target, side, N,
    grid); construction is pure, so concurrent callers share the cache.
    """
    if side not in ("majorant", "minorant"):
        raise ValueError(f"side must be majorant or minorant, got {side!r}")
    if N < 0:
        raise ValueError(f"degree must be >= 0, got {N}")
    if target == "sawtooth":
        target = "bernoulli:1"
    base = 40 * (N + 1)
    if grid_points is None:
        grid_points = base
    if grid_points < base:
        raise ValueError(f"grid_points must be at least 40(N+1) = {base}")
    key = (target, side, N, grid_points)
    with _CACHE_LOCK:
        hit = _CACHE.get(key)
    if hit is not None:
        return hit

    tbl = table or default_table()
    spec = target_spec(target, tbl)
    sgn = 1 if side == "majorant" else -1

    # an odd target flips under reflection, so its extremal minorant is the
    # reflected majorant -P(-theta); certification below stays independent
    odd_bernoulli = spec.name.startswith("bernoulli:") and int(spec.name.split(":")[1]) % 2
    if side == "minorant" and odd_bernoulli:
        maj = construct_one_sided(target, "majorant", N, grid_points, table)
        flipped = TrigPoly(
            tuple(-a for a in maj.poly.cos), tuple(b for b in maj.poly.sin)
        )
        flipped, margin, worst, repair = _repair(flipped, spec, sgn, grid_points)
        if margin < -_CERT_TOL:
            raise CertificationError(
                f"{target} minorant N={N}: margin {margin:.3e} at theta={worst:.12f}"
            )
        result = OneSidedResult(
            poly=flipped,
            target=spec.name,
            side=side,
            achieved_mean=flipped.mean,
            oracle_mean=oracle_mean(target, side, N, tbl),
            lp_mean=-maj.lp_mean,
            certified_margin=margin,
            repair_epsilon=repair,
            rounds=maj.rounds,
            constraints=maj.constraints,
        )
        with _CACHE_LOCK:
            _CACHE.setdefault(key, result)
        return result

    grid = np.arange(grid_points) / float(grid_points)
    if spec.singular:
        grid = np.unique(np.concatenate([grid, _cluster_points(_CLUSTER_DEPTH)]))

    poly = None
    used = 0
    rounds = 0
    prev_violation = math.inf
    stall = 0
    bracket = 1.0 / (10.0 * grid_points)
    for rounds in range(1, _MAX_ROUNDS + 1):
        try:
            poly, used = _solve_round(spec, sgn, N, grid)
        except SolverError as exc:
            raise SolverError(f"{target} {side} N={N}: {exc}") from exc
        margin, worst, minima = _certify(poly, spec, sgn, grid_points)
        if margin >= -_STOP_VIOLATION:
            break
        violation = -margin
        stall = stall + 1 if violation > 0.9 * prev_violation else 0
        if stall >= 2:
            break  # no further progress: the solver's noise floor
        prev_violation = violation
        cuts = []
        for x, val in minima:
            if val < -_STOP_VIOLATION:
                cuts.extend([x, (x - bracket) % 1.0, (x + bracket) % 1.0])
        if not cuts:
            break
        grid = np.unique(np.concatenate([grid, np.asarray(cuts)]))
    lp_mean = poly.mean

    poly, margin, worst, repair = _repair(poly, spec, sgn, grid_points)
    if margin < -_CERT_TOL:
        raise CertificationError(
            f"{target} {side} N={N}: margin {margin:.3e} at theta={worst:.12f} "
            "after repair"
        )

    result = OneSidedResult(
        poly=poly,
        target=spec.name,
        side=side,
        achieved_mean=poly.mean,
        oracle_mean=oracle_mean(target, side, N, tbl),
        lp_mean=lp_mean,
        certified_margin=margin,
        repair_epsilon=repair,
        rounds=rounds,
        constraints=used,
    )
    with _CACHE_LOCK:
        _CACHE.setdefault(key, result)
    return result


# ---------------------------------------------------------------------------
# Interval indicators by composition
# ---------------------------------------------------------------------------


def _compose_interval(saw: TrigPoly, alpha: float, beta: float) -> TrigPoly:
    """(beta-alpha) + P(alpha-theta) + P(theta-beta) in coefficient form."""
    N = saw.degree
    cos = [beta - alpha + 2.0 * saw.mean]
    sin = []
    for k in range(1, N + 1):
        forward = saw.fourier(k)
        ck = np.conj(forward) * np.exp(-1j * TWO_PI * k * alpha) + forward * np.exp(
            -1j * TWO_PI * k * beta
        )
        cos.append(2.0 * ck.real)
        sin.append(-2.0 * ck.imag)
    return TrigPoly(tuple(cos), tuple(sin))


def _indicator(alpha: float, beta: float, thetas: np.ndarray) -> np.ndarray:
    """Normalized indicator of [alpha, beta] on R/Z (1/2 at the endpoints)."""
    th = np.asarray(thetas, dtype=float)
    rel = (th - alpha) - np.floor(th - alpha)
    length = beta - alpha
    tol = 1e-13
    at_edge = (rel <= tol) | (rel >= 1.0 - tol) | (np.abs(rel - length) <= tol)
    inside = (rel > tol) & (rel < length - tol)
    return np.where(at_edge, 0.5, np.where(inside, 1.0, 0.0))


def interval_polys(alpha: float, beta: float, N: int, grid_points: int | None = None):
    """Minorant and majorant of the interval indicator, certified.

    Built exactly by composing the sawtooth one-sided polynomials: the
    identity 1_I(theta) = (beta-alpha) + B1(alpha-theta) + B1(theta-beta)
    transfers their one-sidedness pointwise, so both integral gaps equal
    1/(N+1) up to the sawtooth construction gap.
    """
    if not (0.0 <= beta - alpha <= 1.0):
        raise ValueError(f"interval length must be in [0, 1], got {beta - alpha}")
    lo = construct_one_sided("sawtooth", "minorant", N, grid_points)
    hi = construct_one_sided("sawtooth", "majorant", N, grid_points)
    minor = _compose_interval(lo.poly, alpha, beta)
    major = _compose_interval(hi.poly, alpha, beta)
    pts = np.unique(
        np.concatenate(
            [
                np.arange(4096) / 4096.0,
                (alpha + _cluster_points(_CERT_CLUSTER_DEPTH)) % 1.0,
                (beta + _cluster_points(_CERT_CLUSTER_DEPTH)) % 1.0,
            ]
        )
    )
    ind = _indicator(alpha, beta, pts)
    worst_minor = float(np.min(ind - minor(pts)))
    worst_major = float(np.max(ind - major(pts)))
    if worst_minor < -1e-11 or worst_major > 1e-11:
        raise CertificationError(
            f"interval [{alpha}, {beta}] N={N}: composition violates one-sidedness "
            f"(minorant {worst_minor:.3e}, majorant {worst_major:.3e})"
        )
    return minor, major


# ---------------------------------------------------------------------------
# Coefficient diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientReport:
    target: str
    side: str
    N: int
    classical_bounds_ok: bool | None  # log-sine majorant: -1/(2k) <= U-hat(k) <= 0
    worst_excess: float
    fitted_constant: float | None  # Bernoulli targets: max |P-hat(k)| k^m

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "side": self.side,
            "N": self.N,
            "classical_bounds_ok": self.classical_bounds_ok,
            "worst_excess": self.worst_excess,
            "fitted_constant": self.fitted_constant,
        }


def verify_coefficient_bounds(result: OneSidedResult, tol: float = 1e-6) -> CoefficientReport:
    """Check the classical coefficient bounds on a constructed polynomial.

    For the log-sine majorant every nonzero frequency must satisfy
    -1/(2|k|) - tol <= U-hat(k) <= tol; a violation is a hard failure
    since it means the LP or the repair went wrong.  For Bernoulli
    targets the decay constant max_k |P-hat(k)| k^m is fitted and
    reported; no hard threshold exists for it.
    """
    poly = result.poly
    N = poly.degree
    if result.target == "log2sin" and result.side == "majorant":
        worst = 0.0
        ok = True
        for k in range(1, N + 1):
            uk = poly.fourier(k)
            excess = max(uk.real - 0.0, (-1.0 / (2.0 * k)) - uk.real, abs(uk.imag))
            worst = max(worst, excess)
            if excess > tol:
                ok = False
        if not ok:
            raise CertificationError(
                f"log2sin majorant N={N} violates the classical coefficient "
                f"bounds by {worst:.3e}"
            )
        return CoefficientReport("log2sin", result.side, N, True, worst, None)
    m = int(result.target.split(":")[1])
    fitted = 0.0
    for k in range(1, N + 1):
        fitted = max(fitted, abs(poly.fourier(k)) * k**m)
    return CoefficientReport(result.target, result.side, N, None, 0.0, fitted)
