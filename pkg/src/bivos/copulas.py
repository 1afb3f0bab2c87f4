"""Bivariate copula families: CDFs, partial derivatives, conditional laws,
quadrant probabilities and conditional-inverse sampling.

Six families are provided: independence, the two Fréchet-Hoeffding bounds
(comonotone and countermonotone), Clayton, Gumbel-Hougaard and FGM.  All
evaluation methods accept scalars or numpy arrays and broadcast; scalar
inputs yield plain floats.

The partial derivative ``dC(u, v)/dv`` exists for almost every v and lies in
[0, 1]; at the isolated kinks of the Fréchet bounds (v == u for the
comonotone copula, u + v == 1 for the countermonotone one) the *left limit
in v* is returned, and ``partial_v_defined`` reports such points so callers
that must not substitute a one-sided derivative can refuse them.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "CellProbabilities",
    "Copula",
    "Independence",
    "Comonotone",
    "Countermonotone",
    "Clayton",
    "GumbelHougaard",
    "FGM",
    "parse_copula",
    "default_zoo",
]

# Bisection for the generic conditional inverse: 48 halvings shrink the
# bracket below 2^-48 < 1e-12, the documented tolerance in u.
_BISECTION_ITERATIONS = 48


def _check_unit(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.size and (not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")
    return arr


def _ret(value: np.ndarray, scalar: bool):
    return float(value) if scalar else value


@dataclass(frozen=True)
class CellProbabilities:
    """Masses of the four quadrants cut by a point (x, y) in the unit square.

    p1 = P(U <= x, V <= y), p2 = P(U <= x, V > y),
    p3 = P(U > x, V <= y),  p4 = P(U > x, V > y).
    """

    p1: float
    p2: float
    p3: float
    p4: float

    def __post_init__(self):
        for name in ("p1", "p2", "p3", "p4"):
            p = getattr(self, name)
            if not (-1e-14 <= p <= 1.0 + 1e-14):
                raise DomainError(f"{name}={p} is not a probability")
        if abs(self.p1 + self.p2 + self.p3 + self.p4 - 1.0) > 1e-14:
            raise DomainError("cell probabilities do not sum to 1")

    def as_tuple(self) -> tuple:
        return (self.p1, self.p2, self.p3, self.p4)


class Copula(ABC):
    """A bivariate copula with uniform marginals on (0, 1)."""

    #: number of uniform streams one sample draw consumes (1 for the
    #: degenerate Fréchet bounds, 2 for conditional-inverse families)
    _uniform_streams = 2

    @property
    @abstractmethod
    def spec(self) -> str:
        """Canonical specification string, e.g. ``clayton:2``."""

    # Family-specific kernels; inputs are validated float arrays in [0, 1].
    @abstractmethod
    def _cdf(self, u: np.ndarray, v: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _partial_v(self, u: np.ndarray, v: np.ndarray) -> np.ndarray: ...

    def cdf(self, u, v):
        """Evaluate C(u, v).

        Satisfies the copula axioms: uniform marginals on the boundary,
        the Fréchet-Hoeffding bounds and 2-increasingness.
        """
        scalar = np.isscalar(u) and np.isscalar(v)
        uu = _check_unit(u, "u")
        vv = _check_unit(v, "v")
        return _ret(np.clip(self._cdf(uu, vv), 0.0, 1.0), scalar)

    def partial_v(self, u, v):
        """Evaluate dC(u, v)/dv, clamped to [0, 1].

        At a non-differentiability point the left limit in v is returned;
        use :meth:`partial_v_defined` to detect such points.
        """
        scalar = np.isscalar(u) and np.isscalar(v)
        uu = _check_unit(u, "u")
        vv = _check_unit(v, "v")
        return _ret(np.clip(self._partial_v(uu, vv), 0.0, 1.0), scalar)

    def partial_v_defined(self, u, v):
        """True where dC(u, v)/dv exists (everywhere except family kinks)."""
        scalar = np.isscalar(u) and np.isscalar(v)
        uu = _check_unit(u, "u")
        vv = _check_unit(v, "v")
        out = np.broadcast_to(True, np.broadcast(uu, vv).shape)
        return bool(out) if scalar else np.array(out)

    def partial_v_breakpoints(self, u: float) -> tuple:
        """Interior v values where v -> dC(u, v)/dv is discontinuous.

        Empty for the smooth families; integrators split at these points.
        """
        return ()

    def cond_cdf_given_le(self, u, y):
        """P(U <= u | V <= y) = C(u, y) / y for y in (0, 1]."""
        scalar = np.isscalar(u) and np.isscalar(y)
        uu = _check_unit(u, "u")
        yy = _check_unit(y, "y")
        if np.any(yy == 0.0):
            raise DomainError("conditioning on V <= 0 has probability zero")
        return _ret(np.clip(self._cdf(uu, yy) / yy, 0.0, 1.0), scalar)

    def cond_cdf_given_gt(self, u, y):
        """P(U <= u | V > y) = (u - C(u, y)) / (1 - y) for y in [0, 1)."""
        scalar = np.isscalar(u) and np.isscalar(y)
        uu = _check_unit(u, "u")
        yy = _check_unit(y, "y")
        if np.any(yy == 1.0):
            raise DomainError("conditioning on V > 1 has probability zero")
        return _ret(np.clip((uu - self._cdf(uu, yy)) / (1.0 - yy), 0.0, 1.0), scalar)

    def cell_probs(self, x: float, y: float) -> CellProbabilities:
        """The four quadrant masses at (x, y); they sum to 1."""
        xx = float(_check_unit(x, "x"))
        yy = float(_check_unit(y, "y"))
        c = float(self._cdf(np.asarray(xx), np.asarray(yy)))

        def clip(p: float) -> float:
            return min(max(p, 0.0), 1.0)

        return CellProbabilities(
            p1=clip(c),
            p2=clip(xx - c),
            p3=clip(yy - c),
            p4=clip(1.0 - xx - yy + c),
        )

    # -- sampling -----------------------------------------------------------

    def _draw_uniforms(self, rng: np.random.Generator, count: int) -> tuple:
        """Raw uniform draws, in the documented order (v first, then w)."""
        v = rng.random(count)
        w = rng.random(count)
        return (v, w)

    def _pairs_from_draws(self, v: np.ndarray, w: np.ndarray) -> tuple:
        """Map uniform draws to (u, v) pairs; shape-preserving."""
        return self._inverse_partial_v(v, w), v

    def _inverse_partial_v(self, v: np.ndarray, w: np.ndarray) -> np.ndarray:
        """Solve dC(u, v)/dv = w for u.

        Generic bracketing bisection on u in [0, 1]; the derivative is
        nondecreasing in u with values 0 at u=0 and 1 at u=1.  Families with
        an analytic inverse override this.
        """
        lo = np.zeros_like(v)
        hi = np.ones_like(v)
        for _ in range(_BISECTION_ITERATIONS):
            mid = 0.5 * (lo + hi)
            below = self._partial_v(mid, v) < w
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return 0.5 * (lo + hi)

    def sample(self, seed: int, count: int) -> np.ndarray:
        """Draw ``count`` pairs from the copula, deterministically in ``seed``.

        A fresh PCG64 generator is seeded with ``seed``; one uniform array v
        and one uniform array w are drawn (in that order) and u is obtained
        from the conditional inverse dC(u, v)/dv = w.  The degenerate
        families consume a single uniform array.

        Returns
        -------
        ndarray of shape (count, 2) with columns (u, v).
        """
        if count < 1:
            raise DomainError("count must be >= 1")
        rng = np.random.default_rng(seed)
        u, v = self._pairs_from_draws(*self._draw_uniforms(rng, count))
        return np.column_stack((u, v))

    def reflected(self):
        """The copula of (1-U, 1-V), or None if it leaves the family."""
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.spec!r})"


@dataclass(frozen=True, repr=False)
class Independence(Copula):
    """C(u, v) = u v."""

    @property
    def spec(self) -> str:
        return "independence"

    def _cdf(self, u, v):
        return u * v

    def _partial_v(self, u, v):
        return np.broadcast_arrays(u, v)[0].copy()

    def _inverse_partial_v(self, v, w):
        return np.array(w, copy=True)

    def reflected(self):
        return Independence()


@dataclass(frozen=True, repr=False)
class Comonotone(Copula):
    """Upper Fréchet bound M(u, v) = min(u, v); the law of (U, U)."""

    _uniform_streams = 1

    @property
    def spec(self) -> str:
        return "comonotone"

    def _cdf(self, u, v):
        return np.minimum(u, v)

    def _partial_v(self, u, v):
        # left limit in v: the kink at v == u resolves to 1
        return np.where(v <= u, 1.0, 0.0)

    def partial_v_defined(self, u, v):
        scalar = np.isscalar(u) and np.isscalar(v)
        uu = _check_unit(u, "u")
        vv = _check_unit(v, "v")
        out = uu != vv
        return bool(out) if scalar else out

    def partial_v_breakpoints(self, u: float) -> tuple:
        return (float(u),) if 0.0 < u < 1.0 else ()

    def _draw_uniforms(self, rng, count):
        return (rng.random(count),)

    def _pairs_from_draws(self, u):
        return u, u

    def reflected(self):
        return Comonotone()


@dataclass(frozen=True, repr=False)
class Countermonotone(Copula):
    """Lower Fréchet bound W(u, v) = max(u + v - 1, 0); the law of (U, 1-U)."""

    _uniform_streams = 1

    @property
    def spec(self) -> str:
        return "countermonotone"

    def _cdf(self, u, v):
        return np.maximum(u + v - 1.0, 0.0)

    def _partial_v(self, u, v):
        # left limit in v: the kink at u + v == 1 resolves to 0
        return np.where(u + v > 1.0, 1.0, 0.0)

    def partial_v_defined(self, u, v):
        scalar = np.isscalar(u) and np.isscalar(v)
        uu = _check_unit(u, "u")
        vv = _check_unit(v, "v")
        out = uu + vv != 1.0
        return bool(out) if scalar else out

    def partial_v_breakpoints(self, u: float) -> tuple:
        return (1.0 - float(u),) if 0.0 < u < 1.0 else ()

    def _draw_uniforms(self, rng, count):
        return (rng.random(count),)

    def _pairs_from_draws(self, u):
        return u, 1.0 - u

    def reflected(self):
        return Countermonotone()


@dataclass(frozen=True, repr=False)
class Clayton(Copula):
    """Clayton copula C(u, v) = (u^-t + v^-t - 1)^(-1/t), t > 0.

    Lower-tail dependent; C -> uv as t -> 0.  Values on the axes are 0 by
    continuity, avoiding the 0^-t overflow.
    """

    theta: float

    def __post_init__(self):
        if not (np.isfinite(self.theta) and self.theta > 0.0):
            raise DomainError("clayton theta must be a finite real > 0")

    @property
    def spec(self) -> str:
        return f"clayton:{self.theta:g}"

    def _cdf(self, u, v):
        t = self.theta
        interior = (u > 0.0) & (v > 0.0)
        us = np.where(interior, u, 0.5)
        vs = np.where(interior, v, 0.5)
        val = (us ** (-t) + vs ** (-t) - 1.0) ** (-1.0 / t)
        return np.where(interior, val, 0.0)

    def _partial_v(self, u, v):
        t = self.theta
        interior = (u > 0.0) & (v > 0.0)
        us = np.where(interior, u, 0.5)
        vs = np.where(interior, v, 0.5)
        val = vs ** (-t - 1.0) * (us ** (-t) + vs ** (-t) - 1.0) ** (-1.0 / t - 1.0)
        # limits on the axes: 0 at u == 0; 1 at v == 0 for u > 0
        out = np.where(interior, val, 0.0)
        return np.where((v == 0.0) & (u > 0.0), 1.0, out)

    def _inverse_partial_v(self, v, w):
        # closed form: u = (1 + v^-t (w^(-t/(t+1)) - 1))^(-1/t)
        t = self.theta
        pos = (w > 0.0) & (v > 0.0)
        ws = np.where(pos, w, 0.5)
        vs = np.where(pos, v, 0.5)
        term = np.expm1(-(t / (t + 1.0)) * np.log(ws))
        u = (1.0 + vs ** (-t) * term) ** (-1.0 / t)
        return np.where(pos, u, 0.0)


@dataclass(frozen=True, repr=False)
class GumbelHougaard(Copula):
    """Gumbel-Hougaard copula C(u, v) = exp(-((-ln u)^t + (-ln v)^t)^(1/t)), t >= 1.

    Upper-tail dependent; t = 1 is independence.  The inner sum is factored
    by its largest term so large t cannot overflow.
    """

    theta: float

    def __post_init__(self):
        if not (np.isfinite(self.theta) and self.theta >= 1.0):
            raise DomainError("gumbel theta must be a finite real >= 1")

    @property
    def spec(self) -> str:
        return f"gumbel:{self.theta:g}"

    def _log_radius(self, us, vs):
        t = self.theta
        lu = -np.log(us)
        lv = -np.log(vs)
        m = np.maximum(lu, lv)
        ms = np.where(m > 0.0, m, 1.0)
        s = ms * ((lu / ms) ** t + (lv / ms) ** t) ** (1.0 / t)
        return lv, np.where(m > 0.0, s, 0.0)

    def _cdf(self, u, v):
        interior = (u > 0.0) & (v > 0.0)
        us = np.where(interior, u, 0.5)
        vs = np.where(interior, v, 0.5)
        _, s = self._log_radius(us, vs)
        return np.where(interior, np.exp(-s), 0.0)

    def _partial_v(self, u, v):
        t = self.theta
        interior = (u > 0.0) & (v > 0.0)
        us = np.where(interior, u, 0.5)
        vs = np.where(interior, v, 0.5)
        lv, s = self._log_radius(us, vs)
        ss = np.where(s > 0.0, s, 1.0)
        val = np.exp(-s) * (lv / ss) ** (t - 1.0) / vs
        val = np.where(s > 0.0, val, 1.0)  # u == v == 1 corner
        out = np.where(interior, val, 0.0)
        # v -> 0 limit: 1 under tail dependence (t > 1), u at independence (t = 1)
        axis_limit = 1.0 if t > 1.0 else np.broadcast_arrays(u, v)[0]
        return np.where((v == 0.0) & (u > 0.0), axis_limit, out)


@dataclass(frozen=True, repr=False)
class FGM(Copula):
    """Farlie-Gumbel-Morgenstern copula C(u, v) = uv(1 + a(1-u)(1-v)), |a| <= 1."""

    alpha: float

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and -1.0 <= self.alpha <= 1.0):
            raise DomainError("fgm alpha must lie in [-1, 1]")

    @property
    def spec(self) -> str:
        return f"fgm:{self.alpha:g}"

    def _cdf(self, u, v):
        return u * v * (1.0 + self.alpha * (1.0 - u) * (1.0 - v))

    def _partial_v(self, u, v):
        return u * (1.0 + self.alpha * (1.0 - u) * (1.0 - 2.0 * v))

    def _inverse_partial_v(self, v, w):
        # stable root of b u^2 - (1+b) u + w = 0 with b = alpha (1 - 2v)
        b = self.alpha * (1.0 - 2.0 * v)
        disc = (1.0 + b) ** 2 - 4.0 * b * w
        return 2.0 * w / ((1.0 + b) + np.sqrt(np.maximum(disc, 0.0)))

    def reflected(self):
        return FGM(self.alpha)


def parse_copula(spec: str) -> Copula:
    """Parse a copula specification string.

    Accepted forms: ``independence``, ``comonotone``, ``countermonotone``,
    ``clayton:<theta>``, ``gumbel:<theta>``, ``fgm:<alpha>``.
    """
    if not isinstance(spec, str):
        raise DomainError("copula spec must be a string")
    text = spec.strip().lower()
    name, _, param = text.partition(":")
    simple = {
        "independence": Independence,
        "comonotone": Comonotone,
        "countermonotone": Countermonotone,
    }
    if name in simple:
        if param:
            raise DomainError(f"copula {name!r} takes no parameter")
        return simple[name]()
    parametric = {"clayton": Clayton, "gumbel": GumbelHougaard, "fgm": FGM}
    if name in parametric:
        if not param:
            raise DomainError(f"copula {name!r} requires a parameter, e.g. {name}:1.5")
        try:
            value = float(param)
        except ValueError:
            raise DomainError(f"invalid parameter {param!r} for copula {name!r}") from None
        return parametric[name](value)
    raise DomainError(f"unknown copula spec {spec!r}")


def default_zoo() -> tuple:
    """The six canonical copulas used by the property and acceptance suites."""
    return (
        Independence(),
        Comonotone(),
        Countermonotone(),
        Clayton(2.0),
        GumbelHougaard(2.0),
        FGM(-0.5),
    )
