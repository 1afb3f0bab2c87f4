"""Adaptive Simpson quadrature with a hard subdivision budget.

Kept in-house (rather than scipy.integrate.quad) because callers rely on
the documented failure mode: a hard cap on subdivisions and an error that
reports the achieved error estimate.
"""

from __future__ import annotations

from typing import Callable

from .errors import QuadratureError

__all__ = ["adaptive_simpson"]


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-9,
    max_subdivisions: int = 20000,
) -> tuple:
    """Integrate f over [a, b] to absolute tolerance ``tol``.

    Recursive interval halving with the standard |S2 - S1|/15 error
    estimate and Richardson extrapolation on accepted panels.

    Returns
    -------
    (value, error_estimate)

    Raises
    ------
    QuadratureError
        If more than ``max_subdivisions`` interval splits are needed; the
        exception carries the error estimate achieved so far.
    """
    if a == b:
        return 0.0, 0.0
    if b < a:
        value, err = adaptive_simpson(f, b, a, tol=tol, max_subdivisions=max_subdivisions)
        return -value, err

    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = _simpson(fa, fm, fb, b - a)

    total = 0.0
    total_err = 0.0
    splits = 0
    # panel stack: (a, fa, b, fb, m, fm, S, tol)
    stack = [(a, fa, b, fb, m, fm, whole, tol)]
    while stack:
        pa, pfa, pb, pfb, pm, pfm, ps, ptol = stack.pop()
        lm = 0.5 * (pa + pm)
        rm = 0.5 * (pm + pb)
        flm = f(lm)
        frm = f(rm)
        left = _simpson(pfa, flm, pfm, pm - pa)
        right = _simpson(pfm, frm, pfb, pb - pm)
        err = (left + right - ps) / 15.0
        if abs(err) <= ptol:
            total += left + right + err
            total_err += abs(err)
            continue
        splits += 1
        if splits > max_subdivisions:
            raise QuadratureError(
                f"quadrature did not converge within {max_subdivisions} subdivisions; "
                f"achieved error estimate {total_err + abs(err):.3e}",
                estimate=total_err + abs(err),
            )
        half = 0.5 * ptol
        stack.append((pa, pfa, pm, pfm, lm, flm, left, half))
        stack.append((pm, pfm, pb, pfb, rm, frm, right, half))
    return total, total_err
