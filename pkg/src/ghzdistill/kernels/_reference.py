"""NumPy reference implementation of the hot kernels.

The objective maximized by the distillation solver is, for a decomposition
with weights mu1 >= mu2 and overlaps (sa, sb, sc), the function of x > 0

    value(x) = (f1*f2/2) * (1 - sqrt(1 - 4(1-sa^2)/f1^2))
                         * (1 - sqrt(1 - 4 mu1^2 mu2^2 (1-sb^2)(1-sc^2)/f2^2))

    f1(x) = (x^2 + 1)/x
    f2(x) = (mu2^2 x^2 + 2 mu1 mu2 sb sc x + mu1^2)/x

Both square-root arguments are analytically nonnegative, but the literal
form cancels catastrophically where they vanish (the saturating maxima at
x = 1 for sa = 0 and x = mu1/mu2 for sb = sc = 0), turning rounding residue
into sqrt(eps) errors.  The expressions below use the equivalent
cancellation-free forms

    f1^2 - 4(1-sa^2)  = (x - 1/x)^2 + 4 sa^2
    f2^2 - k2         = (mu2^2 x - mu1^2/x)^2 + 4 mu1 mu2 sb sc g
                        + 4 mu1^2 mu2^2 (sb^2 + sc^2),
    g = mu2^2 x + mu1^2/x,   k2 = 4 mu1^2 mu2^2 (1-sb^2)(1-sc^2),

which are sums of nonnegative terms (the clamp at zero is kept as a
defensive no-op).  The compiled twin in _fast.pyx must stay
expression-for-expression identical.
"""
from __future__ import annotations

import numpy as np


def objective_value(mu1: float, mu2: float, sa: float, sb: float, sc: float,
                    x: float) -> float:
    """Objective at a single x > 0 (domain is checked by the caller)."""
    f1 = (x * x + 1.0) / x
    g = (mu2 * mu2 * x * x + mu1 * mu1) / x
    cross = 2.0 * mu1 * mu2 * sb * sc
    f2 = g + cross
    h1 = (x * x - 1.0) / x
    h2 = (mu2 * mu2 * x * x - mu1 * mu1) / x
    num1 = h1 * h1 + 4.0 * sa * sa
    num2 = (h2 * h2 + 2.0 * cross * g
            + 4.0 * mu1 * mu1 * mu2 * mu2 * (sb * sb + sc * sc))
    t1 = 1.0 - np.sqrt(num1 if num1 > 0.0 else 0.0) / f1
    t2 = 1.0 - np.sqrt(num2 if num2 > 0.0 else 0.0) / f2
    return float(0.5 * f1 * f2 * t1 * t2)


def objective_batch(mu1: float, mu2: float, sa: float, sb: float, sc: float,
                    xs: np.ndarray) -> np.ndarray:
    """Vectorized objective over an array of x values."""
    x = np.asarray(xs, dtype=np.float64)
    f1 = (x * x + 1.0) / x
    g = (mu2 * mu2 * x * x + mu1 * mu1) / x
    cross = 2.0 * mu1 * mu2 * sb * sc
    f2 = g + cross
    h1 = (x * x - 1.0) / x
    h2 = (mu2 * mu2 * x * x - mu1 * mu1) / x
    num1 = h1 * h1 + 4.0 * sa * sa
    num2 = (h2 * h2 + 2.0 * cross * g
            + 4.0 * mu1 * mu1 * mu2 * mu2 * (sb * sb + sc * sc))
    t1 = 1.0 - np.sqrt(np.maximum(num1, 0.0)) / f1
    t2 = 1.0 - np.sqrt(np.maximum(num2, 0.0)) / f2
    return 0.5 * f1 * f2 * t1 * t2


def grid_max(mu1: float, mu2: float, sa: float, sb: float, sc: float,
             x_lo: float, x_hi: float, n: int) -> tuple[float, float]:
    """Best (value, x) over an n-point logarithmic grid on [x_lo, x_hi].

    Ties resolve to the lowest x (first index of the running maximum).
    """
    us = np.linspace(np.log(x_lo), np.log(x_hi), int(n))
    vals = objective_batch(mu1, mu2, sa, sb, sc, np.exp(us))
    i = int(np.argmax(vals))
    return float(vals[i]), float(np.exp(us[i]))
