"""Executable bounds: one-sided polynomial sums over zeros vs empirical extrema.

For a target written as F(theta) = sum_j G(theta - theta_j) over the zero
angles, a certified one-sided polynomial W of G of degree N gives

    F(theta) <= 2g W-hat(0) + sum_{k != 0} |W-hat(k)| w_k,

where w_k is either the a-priori power-sum estimate q^(|k|/2) ("weil"
mode, the proof as stated) or the computed |sum_j e(k theta_j)| ("exact"
mode, sharper and still valid).  Lower bounds flip the construction side.
The symmetric-interval route bounds the order-0 argument sum through the
zero counter of [-theta, theta] and interval indicator polynomials.

Ensemble scans run the full pipeline per squarefree modulus, compare every
empirical extremum against its rigorous bound in both modes, and report
ratios to the asymptotic envelopes without ever asserting them: the o(1)
corrections are unknowable at desk scale.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .argfunc import argument_sum, jump_limits, log_modulus
from .bernoulli import bernoulli_envelope_constants, default_table
from .charsum import Character
from .errors import SoundnessError
from .fqpoly import FieldSpec, Poly, enumerate_Hd
from .lfunc import ZeroAngles, compute_lpolynomial, find_zero_angles, power_sum
from .onesided import construct_one_sided, interval_polys

TWO_PI = 2.0 * math.pi

SOUNDNESS_SLACK = 1e-9
DEFAULT_GRID = 2**14
DEFAULT_N_CAP = 8
SCAN_TARGETS = ("logmod", "s:0", "s:1", "s:2")


def parse_target(tag: str) -> tuple[str, int | None]:
    if tag == "logmod":
        return "logmod", None
    if tag.startswith("s:"):
        n = int(tag.split(":", 1)[1])
        if n < 0:
            raise ValueError(f"argument-sum order must be >= 0, got {n}")
        return "s", n
    raise ValueError(f"unknown scan target {tag!r} (expected logmod or s:n)")


def degree_choice(q: int, d: int, n: int) -> int:
    """Polynomial degree from the asymptotic recipe, clamped at zero:
    N = floor(2 log_q d - (2n+6) log_q log_q d)."""
    if d <= 1:
        return 0
    logq_d = math.log(d) / math.log(q)
    if logq_d <= 0.0:
        return 0
    loglog = math.log(logq_d) / math.log(q)
    return max(0, math.floor(2.0 * logq_d - (2 * n + 6) * loglog))


def envelope(q: int, d: int, target: str, n: int | None, side: str) -> float:
    """Asymptotic envelope the ratios are reported against (never asserted)."""
    logq_d = math.log(d) / math.log(q)
    if target == "logmod":
        return (math.log(2.0) / 2.0) * d / logq_d
    a_minus, a_plus = bernoulli_envelope_constants(n)
    const = (a_plus if side == "upper" else a_minus) / TWO_PI**n
    return const * d / logq_d ** (n + 1)


@dataclass(frozen=True)
class BoundReport:
    """One rigorous bound evaluation, optionally paired with an empirical value."""

    target: str
    n: int | None
    side: str  # upper | lower
    mode: str  # weil | exact
    q: int
    d: int
    g: int
    N_used: int
    main_term: float
    tail_term: float
    bound: float
    empirical: float | None = None
    empirical_arg: float | None = None
    ratio_to_envelope: float | None = None


def _one_sided_fourier(target: str, n: int | None, side: str, N: int):
    """(W-hat(0), |W-hat(k)| for k=1..N) of a one-sided polynomial of G."""
    if target == "logmod":
        if side != "upper":
            raise ValueError(
                "the log-modulus has no finite lower envelope: it is -inf at zeros"
            )
        res = construct_one_sided("log2sin", "majorant", N)
        return res.poly.mean, res.poly.abs_fourier()
    # argument sums: G = -PB_(n+1)/(n+1)!, so sides swap against the target
    fact = math.factorial(n + 1)
    which = "minorant" if side == "upper" else "majorant"
    res = construct_one_sided(f"bernoulli:{n + 1}", which, N)
    return -res.poly.mean / fact, res.poly.abs_fourier() / fact


def _tail_weights(q: int, N: int, mode: str, zeros: ZeroAngles | None) -> np.ndarray:
    ks = np.arange(1, N + 1, dtype=float)
    if mode == "weil":
        return np.asarray(q) ** (ks / 2.0)
    if mode == "exact":
        if zeros is None:
            raise ValueError("exact mode needs the computed zero angles")
        return np.array([abs(power_sum(zeros, k)) for k in range(1, N + 1)])
    raise ValueError(f"unknown bound mode {mode!r} (expected weil or exact)")


def rigorous_bound(
    zeros: ZeroAngles,
    q: int,
    target: str,
    n: int | None,
    side: str,
    N: int,
    mode: str = "weil",
) -> BoundReport:
    """Evaluate the bound 2g W-hat(0) +/- sum |W-hat(k)| w_k at degree N."""
    g = zeros.count // 2
    w0, absw = _one_sided_fourier(target, n, side, N)
    weights = _tail_weights(q, N, mode, zeros if mode == "exact" else None)
    main = 2.0 * g * w0
    tail = 2.0 * float(absw @ weights) if N > 0 else 0.0
    bound = main + tail if side == "upper" else main - tail
    d = 0  # filled by callers that know the modulus degree
    return BoundReport(target, n, side, mode, q, d, g, N, main, tail, bound)


def choose_degree(
    policy: str,
    q: int,
    d: int,
    target: str,
    n: int | None,
    side: str,
    mode: str,
    zeros: ZeroAngles,
    n_cap: int = DEFAULT_N_CAP,
) -> int:
    """Resolve the degree policy: formula, fixed:N, or exhaustive.

    Exhaustive minimizes the rigorous bound magnitude over 0..cap (the cap
    always covers the formula degree, so exhaustive is never worse)."""
    if policy == "formula":
        return degree_choice(q, d, n or 0)
    if policy.startswith("fixed:"):
        return int(policy.split(":", 1)[1])
    if policy != "exhaustive":
        raise ValueError(f"unknown degree policy {policy!r}")
    cap = max(n_cap, degree_choice(q, d, n or 0))
    best_N, best_val = 0, math.inf
    for N in range(cap + 1):
        rep = rigorous_bound(zeros, q, target, n, side, N, mode)
        val = rep.bound if side == "upper" else -rep.bound
        if val < best_val - 1e-15:
            best_N, best_val = N, val
    return best_N


# ---------------------------------------------------------------------------
# Empirical extrema
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalExtrema:
    max_value: float
    argmax: float
    min_value: float | None
    argmin: float | None


def _vector_golden_max(f, centers: np.ndarray, half_width: float, iters: int = 30):
    """Golden-section maxima around several centers at once."""
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a = centers - half_width
    b = centers + half_width
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        take = fc >= fd
        b = np.where(take, d, b)
        a = np.where(take, a, c)
        c = b - phi * (b - a)
        d = a + phi * (b - a)
        fc, fd = f(c), f(d)
    mid = 0.5 * (a + b)
    return mid, f(mid)


def _top_cells(vals: np.ndarray, count: int = 8, spacing: int = 4) -> np.ndarray:
    order = np.argsort(vals)[::-1]
    picked: list[int] = []
    for idx in order:
        if all(abs(int(idx) - p) >= spacing for p in picked):
            picked.append(int(idx))
        if len(picked) >= count:
            break
    return np.asarray(picked, dtype=int)


def empirical_extrema(
    zeros: ZeroAngles, target: str, n: int | None, grid_size: int = DEFAULT_GRID
) -> EmpiricalExtrema:
    """Grid extrema refined by golden section around the best cells.

    The order-0 argument sum decreases between its upward jumps, so its
    supremum and infimum live at one-sided limits of the jumps; those are
    evaluated exactly and merged with the grid.
    """
    if grid_size < 2**10:
        raise ValueError(f"grid_size must be >= 1024, got {grid_size}")
    grid = np.arange(grid_size) / float(grid_size)
    step = 1.0 / grid_size
    if target == "logmod":
        vals = log_modulus(zeros, grid)
        finite = np.isfinite(vals)
        safe = np.where(finite, vals, -np.inf)
        cells = _top_cells(safe)

        def f(x):
            return np.asarray(log_modulus(zeros, x))

        xs, fx = _vector_golden_max(f, grid[cells], step)
        best = int(np.argmax(fx))
        if fx[best] >= safe.max():
            return EmpiricalExtrema(float(fx[best]), float(xs[best] % 1.0), None, None)
        top = int(np.argmax(safe))
        return EmpiricalExtrema(float(safe[top]), float(grid[top]), None, None)
    if target != "s":
        raise ValueError(f"unknown target {target!r}")
    vals = argument_sum(zeros, n, grid)
    if n == 0:
        angles, left, right = jump_limits(zeros)
        cand_vals = np.concatenate([vals, left, right])
        cand_args = np.concatenate([grid, angles, angles])
        hi = int(np.argmax(cand_vals))
        lo = int(np.argmin(cand_vals))
        return EmpiricalExtrema(
            float(cand_vals[hi]), float(cand_args[hi]), float(cand_vals[lo]), float(cand_args[lo])
        )

    def f(x):
        return np.asarray(argument_sum(zeros, n, x))

    cells_hi = _top_cells(vals)
    xs_hi, fx_hi = _vector_golden_max(f, grid[cells_hi], step)
    cells_lo = _top_cells(-vals)
    xs_lo, fx_lo = _vector_golden_max(lambda x: -f(x), grid[cells_lo], step)
    hi = int(np.argmax(fx_hi))
    lo = int(np.argmax(fx_lo))
    max_value = max(float(fx_hi[hi]), float(vals.max()))
    argmax = float(xs_hi[hi] % 1.0) if fx_hi[hi] >= vals.max() else float(grid[np.argmax(vals)])
    min_value = min(float(-fx_lo[lo]), float(vals.min()))
    argmin = float(xs_lo[lo] % 1.0) if -fx_lo[lo] <= vals.min() else float(grid[np.argmin(vals)])
    return EmpiricalExtrema(max_value, argmax, min_value, argmin)


def empirical_max(
    zeros: ZeroAngles, target: str, n: int | None, grid_size: int = DEFAULT_GRID
) -> tuple[float, float]:
    ext = empirical_extrema(zeros, target, n, grid_size)
    return ext.max_value, ext.argmax


# ---------------------------------------------------------------------------
# Symmetric-interval route for the order-0 argument sum
# ---------------------------------------------------------------------------


def s0_bound_interval_method(
    zeros: ZeroAngles, q: int, theta: float, N: int, mode: str = "weil"
) -> tuple[float, float]:
    """(upper, lower) bounds on S_0(theta) through the zero counter of the
    symmetric interval [-theta, theta]:

        2 S(theta) = -4g theta + N([-theta, theta])

    then the interval indicator is replaced by its one-sided polynomials,
    whose mean gap 1/(N+1) does not depend on theta.  Odd symmetry reduces
    any angle to [0, 1/2]."""
    g = zeros.count // 2
    t = theta - math.floor(theta)
    if t > 0.5:
        up, lo = s0_bound_interval_method(zeros, q, 1.0 - t, N, mode)
        return -lo, -up
    minor, major = interval_polys(-t, t, N)
    weights = _tail_weights(q, N, mode, zeros if mode == "exact" else None)
    tail_plus = 2.0 * float(major.abs_fourier() @ weights) if N > 0 else 0.0
    tail_minus = 2.0 * float(minor.abs_fourier() @ weights) if N > 0 else 0.0
    upper = 0.5 * (2.0 * g * (major.mean - 2.0 * t) + tail_plus)
    lower = 0.5 * (2.0 * g * (minor.mean - 2.0 * t) - tail_minus)
    return upper, lower


# ---------------------------------------------------------------------------
# Ensemble scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanConfig:
    q: int
    d: int
    targets: tuple[str, ...] = SCAN_TARGETS
    sample: str = "all"  # all | random:m
    seed: int = 0
    policy: str = "exhaustive"  # formula | exhaustive | fixed:N
    mode: str = "weil"  # mode written to rows; both modes always checked
    grid_size: int = DEFAULT_GRID
    n_cap: int = DEFAULT_N_CAP
    soundness_slack: float = SOUNDNESS_SLACK
    threads: int | None = None
    budget: int | None = None  # cap on moduli; exceeding it truncates and flags

    def __post_init__(self):
        FieldSpec(self.q)  # validates q odd prime
        if self.d % 2 == 0 or self.d < 3:
            raise ValueError(f"scans need odd degree d >= 3, got {self.d}")
        for tag in self.targets:
            parse_target(tag)
        if self.mode not in ("weil", "exact"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.grid_size < 2**10:
            raise ValueError("grid_size must be >= 1024")


@dataclass
class ScanResult:
    config: ScanConfig
    rows: list[dict]
    violations: list[str]
    aggregates: dict
    truncated: bool = False


def sample_moduli(config: ScanConfig) -> list[Poly]:
    """The scan's modulus list, ascending encoding order, deterministic."""
    field = FieldSpec(config.q)
    if config.sample == "all":
        return list(enumerate_Hd(field, config.d))
    if config.sample.startswith("random:"):
        import random as _random

        count = int(config.sample.split(":", 1)[1])
        total = config.q**config.d - config.q ** (config.d - 1)
        if count > total:
            raise ValueError(f"requested {count} moduli but the ensemble has {total}")
        rng = _random.Random(config.seed)
        from .fqpoly import _squarefree_tuple

        picked: set[int] = set()
        while len(picked) < count:
            enc = rng.randrange(config.q**config.d)
            if enc in picked:
                continue
            f = Poly.decode_monic(field, config.d, enc)
            if _squarefree_tuple(f.coeffs, config.q):
                picked.add(enc)
        return [Poly.decode_monic(field, config.d, e) for e in sorted(picked)]
    raise ValueError(f"unknown sample spec {config.sample!r}")


def _scan_one(D: Poly, config: ScanConfig):
    """Full pipeline and soundness checks for one modulus."""
    char = Character(D)
    L = compute_lpolynomial(char)
    zeros = find_zero_angles(L)
    g, q, d = L.g, L.q, L.d
    slack = config.soundness_slack
    rows = []
    violations = []
    for tag in config.targets:
        target, n = parse_target(tag)
        ext = empirical_extrema(zeros, target, n, config.grid_size)
        reported = None
        for mode in ("weil", "exact"):
            N_up = choose_degree(config.policy, q, d, target, n, "upper", mode, zeros, config.n_cap)
            rep_up = replace(rigorous_bound(zeros, q, target, n, "upper", N_up, mode), d=d)
            if ext.max_value > rep_up.bound + slack:
                violations.append(
                    f"D={D} target={tag} mode={mode}: empirical max {ext.max_value!r} "
                    f"exceeds bound {rep_up.bound!r} at N={N_up}"
                )
            if target == "s":
                N_lo = choose_degree(
                    config.policy, q, d, target, n, "lower", mode, zeros, config.n_cap
                )
                rep_lo = replace(rigorous_bound(zeros, q, target, n, "lower", N_lo, mode), d=d)
                if ext.min_value < rep_lo.bound - slack:
                    violations.append(
                        f"D={D} target={tag} mode={mode}: empirical min {ext.min_value!r} "
                        f"below bound {rep_lo.bound!r} at N={N_lo}"
                    )
                if n == 0:
                    for point, value in ((ext.argmax, ext.max_value), (ext.argmin, ext.min_value)):
                        up, lo = s0_bound_interval_method(zeros, q, point, N_up, mode)
                        if value > up + slack or value < lo - slack:
                            violations.append(
                                f"D={D} target={tag} mode={mode}: interval-method bound "
                                f"({lo!r}, {up!r}) misses S_0({point!r}) = {value!r}"
                            )
            if mode == config.mode:
                env = envelope(q, d, target, n, "upper")
                reported = replace(
                    rep_up,
                    empirical=ext.max_value,
                    empirical_arg=ext.argmax,
                    ratio_to_envelope=ext.max_value / env,
                )
        row = {
            "q": q,
            "d": d,
            "D": str(D),
            "c": list(L.c),
            "target": target,
            "n": n,
            "N_used": reported.N_used,
            "mode": reported.mode,
            "main_term": reported.main_term,
            "tail_term": reported.tail_term,
            "rigorous_bound": reported.bound,
            "empirical_max": reported.empirical,
            "argmax": reported.empirical_arg,
            "ratio": reported.ratio_to_envelope,
        }
        rows.append(row)
    return rows, violations


def _scan_chunk(args):
    q, d, encodings, config_kwargs = args
    config = ScanConfig(**config_kwargs)
    field = FieldSpec(q)
    rows, violations = [], []
    for enc in encodings:
        r, v = _scan_one(Poly.decode_monic(field, d, enc), config)
        rows.extend(r)
        violations.extend(v)
    return rows, violations


def _warm_construction_cache(config: ScanConfig):
    """Build every one-sided polynomial a scan can ask for (forked workers
    then inherit the cache instead of re-solving the LPs)."""
    cap = max(config.n_cap, degree_choice(config.q, config.d, 0))
    orders = sorted({parse_target(t)[1] for t in config.targets if t.startswith("s")})
    for N in range(cap + 1):
        if "logmod" in config.targets:
            construct_one_sided("log2sin", "majorant", N)
        for n in orders:
            construct_one_sided(f"bernoulli:{n + 1}", "minorant", N)
            construct_one_sided(f"bernoulli:{n + 1}", "majorant", N)
        if 0 in orders:
            construct_one_sided("sawtooth", "majorant", N)
            construct_one_sided("sawtooth", "minorant", N)


def resolve_threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("HYPERELL_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def ensemble_scan(config: ScanConfig) -> ScanResult:
    """Scan the ensemble: per-modulus rows, soundness checks, aggregates.

    Rows are ordered by modulus encoding then target order, independent of
    the worker count: the modulus list is chunked in order and chunk
    results are concatenated in order, so reruns are byte-identical."""
    moduli = sample_moduli(config)
    truncated = False
    if config.budget is not None and len(moduli) > config.budget:
        moduli = moduli[: config.budget]
        truncated = True
    encodings = [D.monic_index() for D in moduli]
    _warm_construction_cache(config)
    workers = resolve_threads(config.threads)
    kwargs = {
        k: getattr(config, k)
        for k in (
            "q",
            "d",
            "targets",
            "sample",
            "seed",
            "policy",
            "mode",
            "grid_size",
            "n_cap",
            "soundness_slack",
        )
    }
    rows: list[dict] = []
    violations: list[str] = []
    if workers <= 1 or len(encodings) < 4:
        rows, violations = _scan_chunk((config.q, config.d, encodings, kwargs))
    else:
        chunk_count = min(len(encodings), workers * 4)
        chunks = [
            (config.q, config.d, [int(e) for e in block], kwargs)
            for block in np.array_split(np.asarray(encodings), chunk_count)
            if len(block)
        ]
        import multiprocessing as mp

        try:
            ctx = mp.get_context("fork")
            with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
                for r, v in pool.map(_scan_chunk, chunks):
                    rows.extend(r)
                    violations.extend(v)
        except (ImportError, OSError, ValueError):
            rows, violations = _scan_chunk((config.q, config.d, encodings, kwargs))
    aggregates = _aggregate(rows, config)
    return ScanResult(config, rows, violations, aggregates, truncated)


def _aggregate(rows: list[dict], config: ScanConfig) -> dict:
    out: dict = {}
    for tag in config.targets:
        target, n = parse_target(tag)
        vals = np.array(
            [r["empirical_max"] for r in rows if r["target"] == target and r["n"] == n]
        )
        if not len(vals):
            continue
        counts, edges = np.histogram(vals, bins=20)
        ratios = [r["ratio"] for r in rows if r["target"] == target and r["n"] == n]
        out[tag] = {
            "count": int(len(vals)),
            "max": float(vals.max()),
            "mean": float(vals.mean()),
            "max_ratio_to_envelope": float(max(ratios)),
            "histogram": {
                "counts": [int(c) for c in counts],
                "edges": [float(e) for e in edges],
            },
        }
    return out
