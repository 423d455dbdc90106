"""Vectorized adaptive Gauss-Legendre quadrature.

The integrand is called with a 1-D array of abscissae and must return an array whose
leading axis matches it; trailing axes (and complex dtype) are integrated component-wise.
All nodes of a refinement round go through a single call, which is what makes the
nested Sommerfeld-in-frequency integrals affordable.

Each panel carries an n-point Gauss value. Refinement evaluates both halves; the
difference between the whole-panel value and the sum of the halves is the error
estimate, and the halves become the new (already evaluated) panels.
"""

from dataclasses import dataclass

import numpy as np

from .errors import QuadratureError

_RULES = {}


def gauss_legendre(n):
    if n not in _RULES:
        _RULES[n] = np.polynomial.legendre.leggauss(n)
    return _RULES[n]


@dataclass
class QuadResult:
    value: np.ndarray
    error: np.ndarray
    n_panels: int
    n_evals: int


def _panel_values(f, a, b, n):
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    vals = np.asarray(f(nodes))
    vals = vals.reshape((a.size, n) + vals.shape[1:])
    wshape = (1, n) + (1,) * (vals.ndim - 2)
    hshape = (a.size,) + (1,) * (vals.ndim - 2)
    return (vals * w.reshape(wshape)).sum(axis=1) * half.reshape(hshape)


def split_breakpoints(breakpoints, max_width=None):
    """Sorted, de-duplicated breakpoints with every gap at most ``max_width``."""
    pts = np.unique(np.asarray(breakpoints, dtype=float))
    if max_width is None or pts.size < 2:
        return pts
    out = [pts[:1]]
    for lo, hi in zip(pts[:-1], pts[1:]):
        k = max(1, int(np.ceil((hi - lo) / max_width)))
        out.append(np.linspace(lo, hi, k + 1)[1:])
    return np.concatenate(out)


def integrate(f, breakpoints, rel_tol=1e-10, abs_tol=1e-14, max_panels=20000, order=10,
              raise_on_failure=True):
    """Integrate ``f`` over [breakpoints[0], breakpoints[-1]].

    Returns a :class:`QuadResult` with component-wise value and error estimate. A panel
    is accepted once every component's error is below its width-proportional share of
    ``max(abs_tol, rel_tol * |I|)``.
    """
    pts = np.asarray(breakpoints, dtype=float)
    if pts.size < 2:
        raise ValueError("need at least two breakpoints")
    total_width = pts[-1] - pts[0]
    if total_width == 0:
        probe = np.asarray(f(pts[:1]))
        zero = np.zeros(probe.shape[1:], dtype=probe.dtype)
        return QuadResult(zero, np.zeros(probe.shape[1:]), 0, 1)

    a, b = pts[:-1].copy(), pts[1:].copy()
    whole = _panel_values(f, a, b, order)
    n_evals = a.size * order
    acc_val = np.zeros(whole.shape[1:], dtype=whole.dtype)
    acc_err = np.zeros(whole.shape[1:])
    n_panels = a.size
    extra_axes = (1,) * (whole.ndim - 1)

    while a.size:
        mid = 0.5 * (a + b)
        left = _panel_values(f, a, mid, order)
        right = _panel_values(f, mid, b, order)
        n_evals += 2 * a.size * order
        halves = left + right
        err = np.abs(whole - halves)
        estimate = np.abs(acc_val + halves.sum(axis=0))
        budget = np.maximum(abs_tol, rel_tol * estimate)
        if np.all(acc_err + err.sum(axis=0) <= budget):
            acc_val = acc_val + halves.sum(axis=0)
            acc_err = acc_err + err.sum(axis=0)
            break
        share = ((b - a) / total_width).reshape((-1,) + extra_axes)
        floor = 100.0 * np.finfo(float).eps * np.abs(halves)
        ok = (err <= budget[None, ...] * share) | (err <= floor)
        ok = ok.reshape(a.size, -1).all(axis=1)
        # roundoff floor: panels too narrow to split further are accepted as-is
        tiny = (b - a) <= 1e-13 * max(1.0, abs(pts[-1]), abs(pts[0]))
        ok |= tiny
        acc_val = acc_val + halves[ok].sum(axis=0)
        acc_err = acc_err + err[ok].sum(axis=0)
        keep = ~ok
        if not keep.any():
            break
        n_panels += int(keep.sum())
        if n_panels > max_panels:
            acc_val = acc_val + halves[keep].sum(axis=0)
            acc_err = acc_err + err[keep].sum(axis=0)
            if raise_on_failure:
                raise QuadratureError(
                    f"panel budget {max_panels} exhausted; max error estimate "
                    f"{float(np.max(acc_err)):.3e}",
                    estimate=acc_val, error=acc_err,
                )
            return QuadResult(acc_val, acc_err, n_panels, n_evals)
        a = np.concatenate([a[keep], mid[keep]])
        b = np.concatenate([mid[keep], b[keep]])
        whole = np.concatenate([left[keep], right[keep]])

    return QuadResult(acc_val, acc_err, n_panels, n_evals)
