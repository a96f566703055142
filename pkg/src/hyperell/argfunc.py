"""Argument sums on the critical circle and the zero counter.

Everything here is a sum over the zero angles of translated periodic
functions: log|L| is a sum of log 2|sin pi(.)| terms, and the n-th
normalized antiderivative of the argument function is

    S_n(theta) = -(1/(n+1)!) * sum_j PB_(n+1)(theta - theta_j),

with PB the periodic Bernoulli functions.  The n = 0 sawtooth convention
(zero at integers) realizes the half-limit value at jump points
automatically, and S_0 rises by the multiplicity when theta crosses a
zero, consistent with the counting identity

    N([a, b]) = 2g (b - a) + S(b) - S(a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bernoulli import BernoulliTable, default_table
from .errors import ConsistencyError
from .lfunc import ZeroAngles


def log_modulus(zeros: ZeroAngles, theta, singular_tol: float = 1e-12):
    """sum_j log 2|sin pi(theta - theta_j)|; -inf within tol of a zero angle.

    Equals log|L| on the critical circle (the direct-evaluation
    cross-check lives in the tests).
    """
    th = np.asarray(theta, dtype=float)
    diff = np.multiply.outer(th, np.ones(len(zeros.theta))) - np.asarray(zeros.theta)
    frac = diff - np.floor(diff)
    dist = np.minimum(frac, 1.0 - frac)
    hit = (dist <= singular_tol).any(axis=-1)
    with np.errstate(divide="ignore"):
        vals = np.log(2.0 * np.abs(np.sin(math.pi * frac))).sum(axis=-1)
    vals = np.where(hit, -np.inf, vals)
    return float(vals) if vals.ndim == 0 else vals


def argument_sum(zeros: ZeroAngles, n: int, theta, table: BernoulliTable | None = None):
    """S_n(theta): the n-th normalized antiderivative of the argument sum."""
    if n < 0:
        raise ValueError(f"order must be >= 0, got {n}")
    table = table or default_table()
    th = np.asarray(theta, dtype=float)
    diff = np.multiply.outer(th, np.ones(len(zeros.theta))) - np.asarray(zeros.theta)
    vals = -table.periodic(n + 1, diff).sum(axis=-1) / math.factorial(n + 1)
    return float(vals) if vals.ndim == 0 else vals


def antiderivative_constant(
    zeros: ZeroAngles, n: int, table: BernoulliTable | None = None
) -> float:
    """The integration constant c_n that gives S_n mean zero: equals
    S_n(0).  Conjugate symmetry forces c_n = 0 for even n (checked)."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    value = argument_sum(zeros, n, 0.0, table)
    if n % 2 == 0 and abs(value) > 1e-10:
        raise ConsistencyError(
            f"c_{n} should vanish by symmetry but came out {value:.3e}"
        )
    return value


def zero_multiplicities(zeros: ZeroAngles, tol: float = 1e-12) -> list[tuple[float, int]]:
    """Distinct angles with multiplicities (angles within tol are merged)."""
    out: list[tuple[float, int]] = []
    for t in zeros.theta:
        if out and abs(t - out[-1][0]) <= tol:
            out[-1] = (out[-1][0], out[-1][1] + 1)
        else:
            out.append((t, 1))
    return out


def jump_limits(zeros: ZeroAngles, table: BernoulliTable | None = None):
    """One-sided limits of S_0 at each distinct zero angle.

    Returns (angles, left, right): S_0 jumps up by the multiplicity when
    theta crosses a zero, and the value at the angle itself is the
    half-limit, so left = S_0 - m/2 and right = S_0 + m/2.
    """
    distinct = zero_multiplicities(zeros)
    angles = np.array([t for t, _ in distinct])
    mults = np.array([m for _, m in distinct], dtype=float)
    centers = argument_sum(zeros, 0, angles, table)
    centers = np.atleast_1d(centers)
    return angles, centers - mults / 2.0, centers + mults / 2.0


def count_zeros(zeros: ZeroAngles, alpha: float, beta: float, tol: float = 1e-12) -> float:
    """Normalized count of zero angles in the arc [alpha, beta] on R/Z.

    Angles at an endpoint weigh 1/2; a degenerate interval counts half
    the multiplicity sitting at the point; the full circle counts 2g.
    """
    length = beta - alpha
    if not (-tol <= length <= 1.0 + tol):
        raise ValueError(f"interval length must lie in [0, 1], got {length}")
    th = np.asarray(zeros.theta)
    rel = (th - alpha) - np.floor(th - alpha)
    at_alpha = (rel <= tol) | (rel >= 1.0 - tol)
    if length <= tol:
        return 0.5 * float(np.count_nonzero(at_alpha))
    dist_beta = np.abs(rel - length)
    at_beta = np.minimum(dist_beta, 1.0 - dist_beta) <= tol
    inside = (~at_alpha) & (~at_beta) & (rel > tol) & (rel < length - tol)
    return float(
        np.count_nonzero(inside) + 0.5 * np.count_nonzero(at_alpha) + 0.5 * np.count_nonzero(at_beta)
    )


def mean_value(
    zeros: ZeroAngles, n: int, table: BernoulliTable | None = None, tol: float = 1e-9
) -> float:
    """Quadrature mean of S_n over [0, 1): composite Simpson per segment
    between zero angles, panels doubling until the change drops below tol.

    Segments are split at the zero angles so the jumps of S_0 and the
    kinks of higher orders sit at panel boundaries; endpoints are nudged
    inward so one-sided values are integrated across jumps.
    """
    table = table or default_table()
    bounds = sorted({t for t, _ in zero_multiplicities(zeros)})
    if not bounds:
        bounds = [0.0]
    segs = []
    for i, lo in enumerate(bounds):
        hi = bounds[i + 1] if i + 1 < len(bounds) else bounds[0] + 1.0
        if hi - lo > 1e-12:
            segs.append((lo, hi))
    total = 0.0
    nudge = 1e-12
    for lo, hi in segs:
        a, b = lo + nudge, hi - nudge
        panels = 8
        prev = None
        while True:
            xs = np.linspace(a, b, panels + 1)
            ys = argument_sum(zeros, n, xs, table)
            est = (b - a) / (3.0 * panels) * (
                ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-2:2].sum()
            )
            if prev is not None and abs(est - prev) < tol / max(len(segs), 1):
                break
            if panels >= 2**14:
                break
            prev = est
            panels *= 2
        total += est
    return total


@dataclass(frozen=True)
class SnEvaluator:
    """A fixed-order argument sum bound to one set of zeros."""

    zeros: ZeroAngles
    n: int
    table: BernoulliTable | None = None

    def __call__(self, theta):
        return argument_sum(self.zeros, self.n, theta, self.table)

    def mean(self, tol: float = 1e-9) -> float:
        return mean_value(self.zeros, self.n, self.table, tol)
