"""Monte Carlo and exact experiments on scaled bivariate order statistics.

``run_convergence_experiment`` measures, per sample size, the sup distance
between the joint law of a scaled order-statistic pair and (a) the product
of its marginals and (b) the case's product limit law.  In Monte Carlo mode
the laws are empirical over seeded replicates; in exact mode they are
computed from the dynamic program, pulled back through the inverse scaling
map.  ``run_bound_experiment`` measures the same-sample independence gap
against its theoretical bound and reports the ratio, an empirical estimate
of the bound's universal constant.

Reproducibility: replicate i draws from a generator seeded with
``mix64(seed, i)``, so results are independent of batching and execution
order.  Empirical CDFs are accumulated as integer counts, which makes
repeated runs byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .copulas import Comonotone, parse_copula
from .errors import DomainError, ResourceLimitError
from .limits import LimitCase, RankRule, parse_case, parse_rank_rule, univariate_bound
from .orderstats import DEFAULT_DP_LIMIT, OrderStatSpec, joint_cdf_grid, marginal_cdf

__all__ = [
    "mix64",
    "ExperimentConfig",
    "GapRow",
    "GapReport",
    "BoundRow",
    "BoundReport",
    "EmpiricalGrid",
    "simulate_scaled_pairs",
    "empirical_cdf_grid",
    "run_convergence_experiment",
    "run_bound_experiment",
    "default_grid",
    "DEFAULT_BOUND_NS",
    "DEFAULT_BOUND_RANK_RULES",
]

_MASK64 = (1 << 64) - 1

#: confidence parameter of the recorded DKW standard-error estimate
DKW_DELTA = 0.05

GAP_CSV_HEADER = "n,k,j,sup_gap_product,sup_gap_limit,mc_se,k_over_n,j_over_sqrt_k"
BOUND_CSV_HEADER = "n,r,k,sup_gap,bound,ratio"

DEFAULT_BOUND_NS = (20, 50, 100, 200)
DEFAULT_BOUND_RANK_RULES = (("frac:0.25", "sqrt"), ("frac:0.5", "sqrt"), ("frac:0.75", "sqrt"))


def mix64(seed: int, i: int) -> int:
    """Derive the seed of replicate ``i`` from a base seed.

    splitmix64: add the i-th multiple of the golden-ratio increment, then
    avalanche with two xor-shift-multiply rounds.  Distinct (seed, i) pairs
    map to well-separated 64-bit states, so replicates are reproducible
    regardless of execution order or batching.
    """
    z = (int(seed) + i * 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def default_grid(axis_kind: str) -> np.ndarray:
    """Default evaluation grid for a scaled axis.

    41 equispaced points spanning [-4, 4] for normal components and
    [-12, 0.5] for G_j components; either range covers at least 99.9% of the
    limit law's mass.
    """
    if axis_kind == "normal":
        return np.linspace(-4.0, 4.0, 41)
    if axis_kind == "gj":
        return np.linspace(-12.0, 0.5, 41)
    raise DomainError(f"unknown axis kind {axis_kind!r}")


def _parse_grid(text: str) -> np.ndarray:
    parts = str(text).split(":")
    if len(parts) != 3:
        raise DomainError(f"grid spec {text!r} must be <lo>:<hi>:<count>")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"invalid grid spec {text!r}") from None
    if count < 1 or not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        raise DomainError(f"invalid grid spec {text!r}")
    return np.linspace(lo, hi, count)


@dataclass(frozen=True)
class ExperimentConfig:
    """Configuration of a convergence experiment.

    ``grid_u`` / ``grid_v`` override the per-case default grids; they must
    be finite and sorted.  ``mode`` is ``monte_carlo`` or ``exact`` (the
    latter only for n within the DP limit).
    """

    copula: str
    case: str
    n_list: tuple
    replicates: int = 1
    seed: int = 0
    mode: str = "monte_carlo"
    grid_u: Optional[np.ndarray] = None
    grid_v: Optional[np.ndarray] = None

    def __post_init__(self):
        parse_copula(self.copula)
        parse_case(self.case)
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise DomainError("n_list must contain positive sample sizes")
        if self.replicates < 1:
            raise DomainError("replicates must be >= 1")
        if self.mode not in ("monte_carlo", "exact"):
            raise DomainError(f"unknown mode {self.mode!r}")
        for name in ("grid_u", "grid_v"):
            g = getattr(self, name)
            if g is None:
                continue
            arr = np.asarray(g, dtype=float)
            if arr.ndim != 1 or arr.size == 0 or not np.all(np.isfinite(arr)):
                raise DomainError(f"{name} must be a finite 1-d grid")
            if np.any(np.diff(arr) <= 0):
                raise DomainError(f"{name} must be strictly increasing")
            object.__setattr__(self, name, arr)

    @classmethod
    def from_mapping(cls, mapping: dict) -> "ExperimentConfig":
        known = {"copula", "case", "n_list", "replicates", "seed", "mode", "grid_u", "grid_v"}
        unknown = set(mapping) - known
        if unknown:
            raise DomainError(f"unknown config keys {sorted(unknown)}")
        missing = {"copula", "case", "n_list"} - set(mapping)
        if missing:
            raise DomainError(f"missing config keys {sorted(missing)}")
        kwargs = {
            "copula": str(mapping["copula"]),
            "case": str(mapping["case"]),
            "n_list": tuple(int(tok) for tok in str(mapping["n_list"]).split(",") if tok.strip()),
        }
        if "replicates" in mapping:
            kwargs["replicates"] = int(mapping["replicates"])
        if "seed" in mapping:
            kwargs["seed"] = int(mapping["seed"])
        if "mode" in mapping:
            kwargs["mode"] = str(mapping["mode"]).strip()
        for name in ("grid_u", "grid_v"):
            if name in mapping:
                kwargs[name] = _parse_grid(mapping[name])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        """Read a plain-text config: one ``key = value`` per line, ``#`` comments."""
        mapping = {}
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                key, sep, value = text.partition("=")
                if not sep:
                    raise DomainError(f"{path}:{lineno}: expected key=value, got {text!r}")
                key = key.strip().lower()
                if key in mapping:
                    raise DomainError(f"{path}:{lineno}: duplicate key {key!r}")
                mapping[key] = value.strip()
        return cls.from_mapping(mapping)


@dataclass(frozen=True)
class EmpiricalGrid:
    """Empirical joint and marginal CDF values on a product grid."""

    h: np.ndarray  # joint, shape (len(grid_u), len(grid_v))
    f: np.ndarray  # u marginal
    g: np.ndarray  # v marginal


@dataclass(frozen=True)
class GapRow:
    n: int
    k: int
    j: int
    sup_gap_product: float
    sup_gap_limit: float
    mc_se: float
    k_over_n: float
    j_over_sqrt_k: float

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "j": self.j,
            "sup_gap_product": self.sup_gap_product,
            "sup_gap_limit": self.sup_gap_limit,
            "mc_se": self.mc_se,
            "k_over_n": self.k_over_n,
            "j_over_sqrt_k": self.j_over_sqrt_k,
        }


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


@dataclass(frozen=True)
class GapReport:
    """Per-n independence gaps for one experiment."""

    rows: tuple

    def to_csv(self) -> str:
        lines = [GAP_CSV_HEADER]
        for row in self.rows:
            d = row.as_dict()
            lines.append(",".join(_fmt(d[name]) for name in GAP_CSV_HEADER.split(",")))
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps([row.as_dict() for row in self.rows], indent=2, sort_keys=True)


@dataclass(frozen=True)
class BoundRow:
    n: int
    r: int
    k: int
    sup_gap: float
    bound: float
    ratio: float

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "k": self.k,
            "sup_gap": self.sup_gap,
            "bound": self.bound,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class BoundReport:
    """Exact same-sample independence gaps against the theoretical bound."""

    rows: tuple

    def to_csv(self) -> str:
        lines = [BOUND_CSV_HEADER]
        for row in self.rows:
            d = row.as_dict()
            lines.append(",".join(_fmt(d[name]) for name in BOUND_CSV_HEADER.split(",")))
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps([row.as_dict() for row in self.rows], indent=2, sort_keys=True)


def _mc_standard_error(replicates: int) -> float:
    return math.sqrt(math.log(2.0 / DKW_DELTA) / (2.0 * replicates))


def simulate_scaled_pairs(config: ExperimentConfig, n: int) -> np.ndarray:
    """Scaled order-statistic pairs for every replicate at sample size n.

    Replicate i draws n pairs from the copula with seed ``mix64(seed, i)``,
    extracts the case's componentwise order statistics by partial selection
    and applies the scaling map.  Returns an array of shape
    (replicates, 2); deterministic in (seed, n, replicate index).
    """
    if n not in config.n_list:
        raise DomainError(f"n={n} is not in the configured n_list")
    copula = parse_copula(config.copula)
    case = parse_case(config.case)
    rank_u, rank_v, _, _ = case.ranks(n)
    reps = config.replicates
    streams = copula._uniform_streams
    out = np.empty((reps, 2))
    batch = max(1, min(reps, 4_000_000 // max(n, 1)))
    draws = np.empty((streams, batch, n))
    for start in range(0, reps, batch):
        size = min(batch, reps - start)
        block = draws[:, :size]
        for b in range(size):
            rng = np.random.default_rng(mix64(config.seed, start + b))
            for s in range(streams):
                block[s, b] = rng.random(n)
        u, v = copula._pairs_from_draws(*block)
        os_u = np.partition(u, rank_u - 1, axis=1)[:, rank_u - 1]
        os_v = np.partition(v, rank_v - 1, axis=1)[:, rank_v - 1]
        su, sv = case.scale(n, os_u, os_v)
        out[start : start + size, 0] = su
        out[start : start + size, 1] = sv
    return out


def empirical_cdf_grid(pairs: np.ndarray, grid_u, grid_v) -> EmpiricalGrid:
    """Empirical joint and marginal CDFs of scaled pairs on a product grid.

    Counts are accumulated as integers, so the result is exactly
    reproducible and satisfies h <= min(f, g) pointwise.
    """
    pairs = np.asarray(pairs, dtype=float)
    if pairs.ndim != 2 or pairs.shape[1] != 2 or pairs.shape[0] == 0:
        raise DomainError("pairs must be a non-empty (count, 2) array")
    gu = np.asarray(grid_u, dtype=float)
    gv = np.asarray(grid_v, dtype=float)
    count = pairs.shape[0]
    iu = (pairs[:, 0:1] <= gu[None, :]).astype(np.int64)
    iv = (pairs[:, 1:2] <= gv[None, :]).astype(np.int64)
    joint = iu.T @ iv
    return EmpiricalGrid(h=joint / count, f=iu.sum(axis=0) / count, g=iv.sum(axis=0) / count)


def _limit_grid(case: LimitCase, grid_u: np.ndarray, grid_v: np.ndarray) -> tuple:
    lu = np.array([case.limit_u_cdf(float(x)) for x in grid_u])
    lv = np.array([case.limit_v_cdf(float(y)) for y in grid_v])
    return lu, lv


def run_convergence_experiment(
    config: ExperimentConfig, dp_limit: int = DEFAULT_DP_LIMIT
) -> GapReport:
    """Run the experiment and report per-n sup gaps.

    ``sup_gap_product`` is the sup over the grid of |H - F*G| and
    ``sup_gap_limit`` the sup of |H - limit|; in exact mode H, F, G are the
    exact finite-sample CDFs pulled back through the inverse scaling map.
    The recorded ``mc_se`` is the DKW envelope sqrt(ln(2/delta)/(2 rep))
    with delta = 0.05, kept for context in every mode.
    """
    copula = parse_copula(config.copula)
    case = parse_case(config.case)
    rows = []
    for n in config.n_list:
        rank_u, rank_v, k, j = case.ranks(n)
        grid_u = config.grid_u if config.grid_u is not None else default_grid(case.u_axis)
        grid_v = config.grid_v if config.grid_v is not None else default_grid(case.v_axis)
        lu, lv = _limit_grid(case, grid_u, grid_v)
        if config.mode == "exact":
            if n > dp_limit:
                raise ResourceLimitError(f"exact mode refuses n={n} above the DP limit {dp_limit}")
            raw_u, raw_v = case.inverse_scale(n, grid_u, grid_v)
            us = np.clip(raw_u, 0.0, 1.0)
            vs = np.clip(raw_v, 0.0, 1.0)
            spec = OrderStatSpec(n=n, m=rank_u, k=rank_v)
            h = joint_cdf_grid(copula, spec, us, vs, dp_limit=dp_limit)
            f = np.array([marginal_cdf(n, rank_u, float(x)) for x in us])
            g = np.array([marginal_cdf(n, rank_v, float(y)) for y in vs])
        else:
            pairs = simulate_scaled_pairs(config, n)
            emp = empirical_cdf_grid(pairs, grid_u, grid_v)
            h, f, g = emp.h, emp.f, emp.g
        sup_product = float(np.max(np.abs(h - np.outer(f, g))))
        sup_limit = float(np.max(np.abs(h - np.outer(lu, lv))))
        rows.append(
            GapRow(
                n=n,
                k=k,
                j=j,
                sup_gap_product=sup_product,
                sup_gap_limit=sup_limit,
                mc_se=_mc_standard_error(config.replicates),
                k_over_n=k / n,
                j_over_sqrt_k=j / math.sqrt(k),
            )
        )
    return GapReport(rows=tuple(rows))


def _as_rank_rule(rule) -> RankRule:
    if isinstance(rule, RankRule):
        return rule
    if isinstance(rule, (int, np.integer)):
        return RankRule("const", float(int(rule)))
    return parse_rank_rule(rule)


def run_bound_experiment(
    n_list: Sequence[int] = DEFAULT_BOUND_NS,
    rank_pairs: Sequence = DEFAULT_BOUND_RANK_RULES,
    grid: Optional[np.ndarray] = None,
    dp_limit: int = DEFAULT_DP_LIMIT,
) -> BoundReport:
    """Exact sup independence gap of (U_{r:n}, U_{n-k+1:n}) vs its bound.

    Uses the comonotone copula, under which the componentwise pair
    (U_{r:n}, V_{n-k+1:n}) coincides with the same-sample univariate pair.
    For each n and each (r, k) rank pair (given as rank rules or integers)
    the sup over the grid of |H - F_r * F_{n-k+1}| is compared to
    ``univariate_bound(n, r, k)``; the reported ratio estimates the bound's
    universal constant.
    """
    if grid is None:
        grid = np.linspace(0.05, 0.95, 21)
    grid = np.asarray(grid, dtype=float)
    copula = Comonotone()
    rows = []
    for n in n_list:
        n = int(n)
        if n > dp_limit:
            raise ResourceLimitError(f"n={n} exceeds the DP limit {dp_limit}")
        for rule_r, rule_k in rank_pairs:
            r = _as_rank_rule(rule_r)(n)
            k = _as_rank_rule(rule_k)(n)
            if not 1 <= r <= n - k + 1 <= n:
                raise DomainError(f"rank chain fails for (n={n}, r={r}, k={k})")
            spec = OrderStatSpec(n=n, m=r, k=n - k + 1)
            h = joint_cdf_grid(copula, spec, grid, grid, dp_limit=dp_limit)
            fr = np.array([marginal_cdf(n, r, float(x)) for x in grid])
            fk = np.array([marginal_cdf(n, n - k + 1, float(y)) for y in grid])
            sup_gap = float(np.max(np.abs(h - np.outer(fr, fk))))
            bound = univariate_bound(n, r, k)
            ratio = 0.0 if math.isinf(bound) else sup_gap / bound
            rows.append(BoundRow(n=n, r=r, k=k, sup_gap=sup_gap, bound=bound, ratio=ratio))
    return BoundReport(rows=tuple(rows))
