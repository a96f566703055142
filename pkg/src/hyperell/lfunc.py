"""L-polynomials of quadratic characters and their critical-circle zeros.

The polynomial L(u) = sum_k c_k u^k attached to a character has exact
integer coefficients c_k = sum of chi over monic degree-k polynomials, its
degree is 2g, and the functional equation forces c_(2g-k) = q^(g-k) c_k.
All zeros lie on |u| = q^(-1/2), so with u = q^(-1/2) e(theta) the real
trigonometric polynomial

    Xi(theta) = c_g q^(-g/2) + 2 sum_{k<g} c_k q^(-k/2) cos(2 pi (g-k) theta)

has modulus |L| on the circle and its roots in [0,1) are exactly the zero
angles.  Working on Xi makes the root finder numerically robust (sign
changes of a real function) and makes the on-circle location of the zeros
structural rather than incidental; a generic complex companion-matrix
solver is kept in the tests as a cross-check oracle only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charsum import Character
from .errors import ConsistencyError, RootIsolationError
from .fqpoly import Poly

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class LPolynomial:
    """Exact integer coefficients c_0..c_2g with the symmetry verified."""

    D: Poly
    c: tuple[int, ...]

    def __post_init__(self):
        c, q, g = self.c, self.q, self.g
        if len(c) % 2 == 0:
            raise ConsistencyError("coefficient vector must have odd length 2g+1")
        if c[0] != 1:
            raise ConsistencyError(f"c_0 must be 1, got {c[0]}")
        for k in range(g + 1):
            if c[2 * g - k] != q ** (g - k) * c[k]:
                raise ConsistencyError(
                    f"functional-equation symmetry fails at k={k}: "
                    f"c_{2*g-k} = {c[2*g-k]} but q^(g-k) c_{k} = {q**(g-k)*c[k]} "
                    f"(D = {self.D})"
                )

    @property
    def q(self) -> int:
        return self.D.q

    @property
    def g(self) -> int:
        return (len(self.c) - 1) // 2

    @property
    def d(self) -> int:
        return self.D.degree

    def to_json_dict(self) -> dict:
        return {"q": self.q, "d": self.d, "D": str(self.D), "c": list(self.c)}

    def complex_value(self, theta):
        """L(q^(-1/2) e(theta)) as a complex number (direct evaluation)."""
        u = np.exp(2j * math.pi * np.asarray(theta, dtype=float)) / math.sqrt(self.q)
        acc = np.zeros_like(u)
        for ck in reversed(self.c):
            acc = acc * u + ck
        return acc


def compute_lpolynomial(char: Character) -> LPolynomial:
    """Assemble L(u) by direct character summation for every k <= 2g.

    The constructor then checks the functional-equation symmetry as exact
    integer identities, so the upper half both is recomputed directly and
    must match the symmetry fill; a mismatch means a character-sum bug.
    """
    c = tuple(char.coefficient_sum(k) for k in range(2 * char.g + 1))
    return LPolynomial(char.D, c)


class CosineSeries:
    """Real series sum_j a_j cos(2 pi j theta), vector-evaluated."""

    def __init__(self, a):
        self.a = np.asarray(a, dtype=float)
        self.scale = float(np.sum(np.abs(self.a))) or 1.0
        self._j = np.arange(len(self.a))

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        vals = np.cos(TWO_PI * np.multiply.outer(theta, self._j)) @ self.a
        return float(vals) if vals.ndim == 0 else vals

    def derivative_at(self, theta):
        theta = np.asarray(theta, dtype=float)
        vals = -TWO_PI * (
            np.sin(TWO_PI * np.multiply.outer(theta, self._j)) @ (self._j * self.a)
        )
        return float(vals) if vals.ndim == 0 else vals

    def second_derivative_at(self, theta):
        theta = np.asarray(theta, dtype=float)
        vals = -(TWO_PI**2) * (
            np.cos(TWO_PI * np.multiply.outer(theta, self._j)) @ (self._j**2 * self.a)
        )
        return float(vals) if vals.ndim == 0 else vals


def unitarize(L: LPolynomial) -> CosineSeries:
    """The real trigonometric polynomial with |Xi| = |L| on the circle.

    Obtained by pairing coefficients k and 2g-k through the functional
    equation; index j of the cosine term corresponds to k = g - j.
    """
    g, q = L.g, L.q
    a = np.zeros(g + 1)
    a[0] = L.c[g] * q ** (-g / 2.0)
    for j in range(1, g + 1):
        a[j] = 2.0 * L.c[g - j] * q ** (-(g - j) / 2.0)
    return CosineSeries(a)


@dataclass(frozen=True)
class ZeroAngles:
    """Sorted zero angles in [0,1), conjugate-symmetric, with multiplicity."""

    theta: tuple[float, ...]
    residual: float

    @property
    def count(self) -> int:
        return len(self.theta)

    def to_json_dict(self) -> dict:
        return {"theta": list(self.theta), "residual": self.residual}


def power_sum(zeros: ZeroAngles, k: int) -> float:
    """sum_j e(k theta_j); real by conjugate symmetry (imaginary part checked)."""
    if k == 0:
        raise ValueError("power sums are defined for nonzero k")
    ang = TWO_PI * k * np.asarray(zeros.theta)
    re = float(np.sum(np.cos(ang)))
    im = float(np.sum(np.sin(ang)))
    if abs(im) > 1e-9:
        raise ConsistencyError(f"power sum k={k} has imaginary part {im:.3e}")
    return re


def reconstruct_coefficients(zeros: ZeroAngles, q: int) -> np.ndarray:
    """Expand prod_j (1 - u sqrt(q) e(-theta_j)) into complex coefficients."""
    coeffs = np.array([1.0 + 0.0j])
    root_factors = -math.sqrt(q) * np.exp(-2j * math.pi * np.asarray(zeros.theta))
    for r in root_factors:
        new = np.zeros(len(coeffs) + 1, dtype=complex)
        new[: len(coeffs)] = coeffs
        new[1:] += coeffs * r
        coeffs = new
    return coeffs


def _rational_poly_gcd(a, b):
    from fractions import Fraction

    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    a = trim([Fraction(x) for x in a])
    b = trim([Fraction(x) for x in b])
    while b:
        r = a[:]
        for shift in range(len(r) - len(b), -1, -1):
            f = r[shift + len(b) - 1] / b[-1]
            if f:
                for i, bi in enumerate(b):
                    r[shift + i] -= f * bi
        a, b = b, trim(r[: len(b) - 1])
    return [x / a[-1] for x in a] if a else a


def squarefree_part(coeffs) -> list[float]:
    """Coefficients of the squarefree part, by exact rational gcd.

    Repeated factors are exact integer phenomena here (they do occur in
    the ensemble), and no floating root finder can place a double root
    better than the square root of machine epsilon, so radius checks
    deflate them exactly first.
    """
    from fractions import Fraction

    c = [Fraction(x) for x in coeffs]
    dc = [k * c[k] for k in range(1, len(c))]
    g = _rational_poly_gcd(c, dc)
    if len(g) <= 1:
        return [float(x) for x in c]
    quot = [Fraction(0)] * (len(c) - len(g) + 1)
    rem = c[:]
    for shift in range(len(c) - len(g), -1, -1):
        f = rem[shift + len(g) - 1] / g[-1]
        quot[shift] = f
        if f:
            for i, gi in enumerate(g):
                rem[shift + i] -= f * gi
    return [float(x) for x in quot]


def rh_radius_error(L: LPolynomial) -> float:
    """Worst deviation of |u| sqrt(q) from 1 over the roots of L, computed
    by a generic complex root finder on the exactly-deflated squarefree
    part (independent of the cosine-polynomial zero pipeline)."""
    if L.g == 0:
        return 0.0
    sf = squarefree_part(L.c)
    roots = np.roots(list(reversed(sf)))
    return float(np.max(np.abs(np.abs(roots) * math.sqrt(L.q) - 1.0)))


def _verify_reconstruction(zeros: ZeroAngles, L: LPolynomial, rtol=1e-6):
    recon = reconstruct_coefficients(zeros, L.q)
    for k, ck in enumerate(L.c):
        err = abs(recon[k] - ck) / max(1.0, abs(ck))
        if err > rtol:
            raise ConsistencyError(
                f"zero angles do not reconstruct c_{k} of {L.D}: "
                f"{recon[k]:.9g} vs {ck} (rel err {err:.2e})"
            )


def _refine_bracket(xi, lo, hi, flo, fhi):
    """Bisection to a tight bracket, then safeguarded Newton polish."""
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        fm = xi(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    t = 0.5 * (lo + hi)
    width = hi - lo
    for _ in range(40):
        df = xi.derivative_at(t)
        if df == 0.0:
            break
        step = xi(t) / df
        t2 = t - step
        if not (lo - width <= t2 <= hi + width):
            break
        t = t2
        if abs(step) < 1e-16:
            break
    return min(max(t, 0.0), 0.5)


def _newton_on_derivative(xi, t0, lo, hi):
    """Locate a critical point of Xi near t0 (for tangency detection)."""
    t = t0
    for _ in range(60):
        d2 = xi.second_derivative_at(t)
        if d2 == 0.0:
            break
        step = xi.derivative_at(t) / d2
        t2 = t - step
        if not (lo <= t2 <= hi):
            break
        t = t2
        if abs(step) < 1e-16:
            break
    return t


def _isolate_half(xi, g, points, scale):
    """Roots of Xi on [0, 1/2] as (theta, multiplicity), or None if short.

    Returns None when the assembled multiplicities do not account for all
    2g angles, in which case the caller escalates the grid.
    """
    xs = np.linspace(0.0, 0.5, points + 1)
    vs = xi(xs)
    tiny = 1e-12 * scale
    spacing = 0.5 / points
    found: list[tuple[float, int]] = []
    blocked = np.zeros(len(xs), dtype=bool)

    # near-zero grid values: endpoints carry even theta-multiplicity
    small = np.abs(vs) <= tiny
    for i in np.flatnonzero(small):
        if blocked[i]:
            continue
        j = i
        while j + 1 < len(xs) and small[j + 1]:
            j += 1
        blocked[i : j + 2] = True
        if i == 0:
            found.append((0.0, 2))
        elif j == len(xs) - 1:
            found.append((0.5, 2))
        else:
            left = vs[i - 1] if i > 0 else 0.0
            right = vs[j + 1] if j + 1 < len(xs) else 0.0
            center = float(xs[(i + j) // 2])
            if left * right < 0:
                found.append((_refine_bracket(xi, xs[i - 1], xs[j + 1], left, right), 1))
            else:
                found.append((center, 2))

    # clean sign changes
    for i in range(len(xs) - 1):
        if blocked[i] or blocked[i + 1]:
            continue
        if vs[i] * vs[i + 1] < 0.0:
            found.append((_refine_bracket(xi, xs[i], xs[i + 1], vs[i], vs[i + 1]), 1))

    def total(entries):
        return sum(m if t < 1e-15 or abs(t - 0.5) < 1e-15 else 2 * m for t, m in entries)

    if total(found) == 2 * g:
        return found
    if total(found) > 2 * g:
        return None

    # tangency sweep: local minima of |Xi| without sign change
    tangency_cap = 8.0 * scale * (math.pi * max(g, 1) * spacing) ** 2
    absv = np.abs(vs)
    for i in range(1, len(xs) - 1):
        if blocked[i - 1 : i + 2].any():
            continue
        if absv[i] <= absv[i - 1] and absv[i] <= absv[i + 1] and absv[i] <= tangency_cap:
            if vs[i - 1] * vs[i + 1] <= 0.0:
                continue  # sign change handled above
            t = _newton_on_derivative(xi, float(xs[i]), xs[i] - 2 * spacing, xs[i] + 2 * spacing)
            t = min(max(t, 0.0), 0.5)
            if abs(xi(t)) <= 1e-10 * scale:
                if all(abs(t - u) > spacing / 4 for u, _ in found):
                    found.append((t, 2))
    if total(found) == 2 * g:
        return found
    return None


def find_zero_angles(L: LPolynomial, grid_factor: int = 64) -> ZeroAngles:
    """All 2g zero angles of L, with multiplicity, by sign scanning Xi.

    Scans a uniform grid over [0, 1/2] (the half circle suffices by the
    theta <-> 1-theta symmetry), refines sign changes by bisection plus
    Newton, detects tangencies as near-zero critical points, and mirrors
    interior roots.  The grid escalates by doubling up to 1024 before a
    root-isolation failure is reported with the suspect data.
    """
    if grid_factor < 16:
        raise ValueError(f"grid_factor must be >= 16, got {grid_factor}")
    g = L.g
    if g == 0:
        return ZeroAngles((), 0.0)
    xi = unitarize(L)
    scale = xi.scale
    gf = grid_factor
    while True:
        found = _isolate_half(xi, g, gf * (2 * g + 2), scale)
        if found is not None:
            break
        if gf >= 1024:
            raise RootIsolationError(
                f"could not isolate {2*g} zero angles for D = {L.D} "
                f"(grid factor escalated to {gf})",
                intervals=[(0.0, 0.5)],
            )
        gf *= 2
    thetas: list[float] = []
    for t, mult in sorted(found):
        if t < 1e-15:
            thetas.extend([0.0] * mult)
        elif abs(t - 0.5) < 1e-15:
            thetas.extend([0.5] * mult)
        else:
            thetas.extend([t] * mult)
            thetas.extend([1.0 - t] * mult)
    thetas.sort()
    residual = float(np.max(np.abs(xi(np.array(thetas))))) if thetas else 0.0
    zeros = ZeroAngles(tuple(thetas), residual)
    _verify_reconstruction(zeros, L)
    return zeros
