"""Asymptotic objects: limit CDFs, the five scaling regimes for pairs of
componentwise order statistics, their product limit laws and the
finite-sample independence bound for same-sample order statistics.

The five regimes pair an intermediate or central order statistic of U with
an extreme or intermediate one of V:

  I    U_{n-k+1:n} intermediate (k -> inf, k/n -> 0), V_{n-j+1:n} extreme (j fixed)
  II   U_{k:n} with k as in I, same V
  III  U_{k:n} central (k/n -> lambda), same V
  IV   U central, V_{n-j+1:n} intermediate (j -> inf, j/n -> 0)
  V    U intermediate, V intermediate, with j/sqrt(k) -> 0

In every case the limit is a product law: the coordinates become
asymptotically independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from .errors import DomainError, RankRuleError

__all__ = [
    "std_normal_cdf",
    "gj_cdf",
    "RankRule",
    "parse_rank_rule",
    "LimitCase",
    "parse_case",
    "ScaledPair",
    "scaling_map",
    "limit_joint_cdf",
    "univariate_bound",
    "CASE_IDS",
]

CASE_IDS = ("I", "II", "III", "IV", "V")


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-float(x) / math.sqrt(2.0))


def gj_cdf(j: int, x: float) -> float:
    """CDF of the limit law of the j-th largest uniform order statistic,
    scaled as n(V_{n-j+1:n} - 1):

        G_j(x) = exp(x) * sum_{i=0}^{j-1} (-x)^i / i!   for x <= 0,

    and 1 for x > 0.  Equals the regularized upper incomplete gamma
    Q(j, -x), which is used for very negative x to avoid overflow in the
    partial sum.
    """
    if not (isinstance(j, (int, np.integer)) and j >= 1):
        raise DomainError(f"j={j!r} must be a positive integer")
    x = float(x)
    if x >= 0.0:
        return 1.0
    z = -x
    if z > 700.0:
        return float(special.gammaincc(j, z))
    term = 1.0
    acc = 1.0
    for i in range(1, j):
        term *= z / i
        acc += term
    return math.exp(x) * acc


@dataclass(frozen=True)
class RankRule:
    """A rank as a function of n, given by an expression tag.

    Tags: ``sqrt`` -> floor(sqrt(n)); ``n23`` -> floor(n^(2/3));
    ``log`` -> ceil(ln n); ``frac:<lam>`` -> floor(lam*n);
    ``const:<j>`` -> j.
    """

    tag: str
    param: Optional[float] = None

    def __call__(self, n: int) -> int:
        if n < 1:
            raise RankRuleError("n must be >= 1")
        if self.tag == "sqrt":
            return math.isqrt(n)
        if self.tag == "n23":
            t = int(round(n ** (2.0 / 3.0)))
            while t > 0 and t * t * t > n * n:
                t -= 1
            while (t + 1) ** 3 <= n * n:
                t += 1
            return t
        if self.tag == "log":
            return math.ceil(math.log(n))
        if self.tag == "frac":
            return int(math.floor(self.param * n + 1e-9))
        if self.tag == "const":
            return int(self.param)
        raise DomainError(f"unknown rank rule tag {self.tag!r}")

    @property
    def spec(self) -> str:
        if self.tag == "frac":
            return f"frac:{self.param:g}"
        if self.tag == "const":
            return f"const:{int(self.param)}"
        return self.tag


def parse_rank_rule(text: str) -> RankRule:
    """Parse a rank-rule tag such as ``sqrt`` or ``frac:0.5``."""
    t = str(text).strip().lower()
    name, _, param = t.partition(":")
    if name in ("sqrt", "n23", "log"):
        if param:
            raise DomainError(f"rank rule {name!r} takes no parameter")
        return RankRule(name)
    if name == "frac":
        try:
            lam = float(param)
        except ValueError:
            raise DomainError(f"invalid frac rank rule {text!r}") from None
        if not 0.0 < lam < 1.0:
            raise DomainError("frac rank rule needs lambda in (0, 1)")
        return RankRule("frac", lam)
    if name == "const":
        try:
            j = int(param)
        except ValueError:
            raise DomainError(f"invalid const rank rule {text!r}") from None
        if j < 1:
            raise DomainError("const rank rule needs a positive integer")
        return RankRule("const", float(j))
    raise DomainError(f"unknown rank rule {text!r}")


@dataclass(frozen=True)
class ScaledPair:
    """A scaled order-statistic pair."""

    su: float
    sv: float


@dataclass(frozen=True)
class LimitCase:
    """One of the five scaling regimes with its rank rules.

    ``lam`` is the central-rank proportion and is required for cases III and
    IV, where it also fixes the default k rule ``frac:lam``.  Cases I-III
    need a fixed j (a ``const`` rule) because their limit law involves G_j.
    The asymptotic hypotheses on k(n) and j(n) are not enforced at finite n;
    the harness records the ratios k/n and j/sqrt(k) instead.
    """

    case_id: str
    k_rule: RankRule
    j_rule: RankRule
    lam: Optional[float] = None

    def __post_init__(self):
        if self.case_id not in CASE_IDS:
            raise DomainError(f"unknown case id {self.case_id!r}")
        if self.case_id in ("III", "IV"):
            if self.lam is None or not 0.0 < self.lam < 1.0:
                raise DomainError(f"case {self.case_id} requires lambda in (0, 1)")
        elif self.lam is not None:
            raise DomainError(f"case {self.case_id} does not use lambda")
        if self.case_id in ("I", "II", "III") and self.j_rule.tag != "const":
            raise DomainError(f"case {self.case_id} needs a fixed j (const rank rule)")

    @property
    def spec(self) -> str:
        parts = [f"case={self.case_id}", f"k={self.k_rule.spec}", f"j={self.j_rule.spec}"]
        if self.lam is not None:
            parts.append(f"lambda={self.lam:g}")
        return "; ".join(parts)

    def ranks(self, n: int) -> tuple:
        """(rank_u, rank_v, k, j) at sample size n; validates 1 <= k, j <= n."""
        k = self.k_rule(n)
        j = self.j_rule(n)
        if not 1 <= k <= n:
            raise RankRuleError(f"k rule {self.k_rule.spec!r} gives k={k} outside 1..{n}")
        if not 1 <= j <= n:
            raise RankRuleError(f"j rule {self.j_rule.spec!r} gives j={j} outside 1..{n}")
        rank_u = n - k + 1 if self.case_id in ("I", "V") else k
        rank_v = n - j + 1
        return rank_u, rank_v, k, j

    def _u_center_scale(self, n: int, k: int) -> tuple:
        if self.case_id == "I" or self.case_id == "V":
            return (n - k + 1) / (n + 1), n / math.sqrt(k)
        if self.case_id == "II":
            return k / (n + 1), n / math.sqrt(k)
        return k / (n + 1), math.sqrt(n)  # III, IV

    def _v_center_scale(self, n: int, j: int) -> tuple:
        if self.case_id in ("IV", "V"):
            return (n - j + 1) / (n + 1), n / math.sqrt(j)
        return 1.0, float(n)  # I, II, III

    def scale(self, n: int, u, v) -> tuple:
        """Apply the case's affine scaling map; array-aware."""
        _, _, k, j = self.ranks(n)
        cu, au = self._u_center_scale(n, k)
        cv, av = self._v_center_scale(n, j)
        return au * (np.asarray(u, float) - cu), av * (np.asarray(v, float) - cv)

    def inverse_scale(self, n: int, su, sv) -> tuple:
        """Pull scaled coordinates back to the unit square (unclipped)."""
        _, _, k, j = self.ranks(n)
        cu, au = self._u_center_scale(n, k)
        cv, av = self._v_center_scale(n, j)
        return np.asarray(su, float) / au + cu, np.asarray(sv, float) / av + cv

    @property
    def u_axis(self) -> str:
        """Kind of the scaled-u limit axis: always 'normal'."""
        return "normal"

    @property
    def v_axis(self) -> str:
        """Kind of the scaled-v limit axis: 'gj' for cases I-III else 'normal'."""
        return "gj" if self.case_id in ("I", "II", "III") else "normal"

    def limit_u_cdf(self, x: float) -> float:
        """Marginal limit CDF of the scaled u component."""
        if self.case_id in ("III", "IV"):
            return std_normal_cdf(x / math.sqrt(self.lam * (1.0 - self.lam)))
        return std_normal_cdf(x)

    def limit_v_cdf(self, y: float) -> float:
        """Marginal limit CDF of the scaled v component."""
        if self.case_id in ("IV", "V"):
            return std_normal_cdf(y)
        return gj_cdf(int(self.j_rule.param), y)

    def limit_cdf(self, x: float, y: float) -> float:
        """Joint limit CDF: the product of the marginal limits."""
        return self.limit_u_cdf(x) * self.limit_v_cdf(y)


def parse_case(spec: str) -> LimitCase:
    """Parse a case specification string.

    Format: ``case=<I..V>; k=<rule>; j=<rule>; lambda=<real>`` with the k, j
    and lambda entries optional (defaults: k=sqrt for I/II, frac:lambda for
    III/IV, n23 for V; j=const:1 for I-III, log for IV/V).
    """
    fields = {}
    for chunk in str(spec).split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, sep, value = chunk.partition("=")
        if not sep:
            raise DomainError(f"malformed case field {chunk!r}")
        key = key.strip().lower()
        if key in fields:
            raise DomainError(f"duplicate case field {key!r}")
        fields[key] = value.strip()
    unknown = set(fields) - {"case", "k", "j", "lambda"}
    if unknown:
        raise DomainError(f"unknown case fields {sorted(unknown)}")
    if "case" not in fields:
        raise DomainError("case spec must contain case=<I..V>")
    case_id = fields["case"].upper()
    if case_id not in CASE_IDS:
        raise DomainError(f"unknown case id {fields['case']!r}")

    lam = None
    if "lambda" in fields:
        try:
            lam = float(fields["lambda"])
        except ValueError:
            raise DomainError(f"invalid lambda {fields['lambda']!r}") from None

    if "k" in fields:
        k_rule = parse_rank_rule(fields["k"])
    elif case_id in ("III", "IV"):
        if lam is None:
            raise DomainError(f"case {case_id} requires lambda")
        k_rule = RankRule("frac", lam)
    elif case_id == "V":
        k_rule = RankRule("n23")
    else:
        k_rule = RankRule("sqrt")

    if "j" in fields:
        j_rule = parse_rank_rule(fields["j"])
    elif case_id in ("IV", "V"):
        j_rule = RankRule("log")
    else:
        j_rule = RankRule("const", 1.0)

    return LimitCase(case_id=case_id, k_rule=k_rule, j_rule=j_rule, lam=lam)


def scaling_map(case: LimitCase, n: int, u: float, v: float) -> ScaledPair:
    """Apply the case's scaling map to an order-statistic pair (u, v)."""
    su, sv = case.scale(n, u, v)
    return ScaledPair(su=float(su), sv=float(sv))


def limit_joint_cdf(case: LimitCase, x: float, y: float) -> float:
    """The case's product limit CDF at (x, y)."""
    return case.limit_cdf(x, y)


def univariate_bound(n: int, r: int, k: int) -> float:
    """The finite-sample independence bound for the same-sample pair
    (U_{r:n}, U_{n-k+1:n}):

        (r k / (n (n - r - k + 1)))^(1/2),

    valid for 1 <= r <= n-k+1 <= n.  Infinite at the boundary r+k = n+1.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise DomainError("n must be a positive integer")
    if not 1 <= r <= n - k + 1 <= n:
        raise DomainError(f"rank chain 1 <= r <= n-k+1 <= n fails for (n={n}, r={r}, k={k})")
    denom = n * (n - r - k + 1)
    if denom == 0:
        return math.inf
    return math.sqrt(r * k / denom)
