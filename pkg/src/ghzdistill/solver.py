"""Optimal one-successful-branch protocol (OSBP) for GHZ distillation.

An OSBP lets each party perform a single two-outcome POVM such that exactly
one global branch produces the GHZ state while every failure branch is left
disentangled.  For a state with two-term product decomposition
(mu1, mu2, phi, overlaps sa, sb, sc) the success operators have the form

    A = alpha1 |0><a1~| + alpha2 e^{i phase_a} |1><a2~|      (B, C alike)

with {|a1~>, |a2~>} the basis biorthogonal to {|a1>, |a2>}.  Demanding a
rank-1 failure operator pins each coefficient pair to the curve

    (1 - alpha1^2)(1 - alpha2^2) = sa^2,

and producing the GHZ state exactly requires the balance condition
alpha1 beta1 gamma1 mu1 = alpha2 beta2 gamma2 mu2 together with phases
summing to -phi.  The branch probability is then p = 2 (alpha1 beta1
gamma1 mu1)^2 and its maximum over the constraint curves reduces to the 1-D
objective implemented in the kernels package.

Two independent solvers are kept deliberately: the 1-D objective maximizer
(primary route to the optimal probability) and the direct constrained
coefficient solver (route to the explicit POVMs).  They cross-validate each
other in the test-suite.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import kernels
from .decomposition import ProductDecomposition, dual_basis, reconstruct
from .errors import (
    InfeasibleBalanceError,
    InvariantViolationError,
    NonPositiveXError,
    PreconditionViolatedError,
)
from .tensor import apply_local, fidelity_with, ghz_state, normalize

X_LO = 1e-6
X_HI = 1e6
_SEED_GRID = 4096
_MULTISTARTS = 8
_ZERO_OVERLAP = 1e-12
_PLATEAU_RTOL = 1e-12   # objective values this close count as tied maxima


@dataclass(frozen=True)
class OsbpSolution:
    """Optimal branch probability with the coefficients that realize it."""

    p_opt: float
    x_star: float
    alpha1: float
    alpha2: float
    beta1: float
    beta2: float
    gamma1: float
    gamma2: float
    phase_a: float
    phase_b: float
    phase_c: float

    @property
    def coefficients(self) -> tuple[float, ...]:
        return (self.alpha1, self.alpha2, self.beta1, self.beta2,
                self.gamma1, self.gamma2)


@dataclass(frozen=True)
class PovmTriple:
    """Two-outcome local POVMs {M, M_bar} for each of the three parties."""

    success_a: np.ndarray
    failure_a: np.ndarray
    success_b: np.ndarray
    failure_b: np.ndarray
    success_c: np.ndarray
    failure_c: np.ndarray

    def __post_init__(self):
        for name in ("success_a", "failure_a", "success_b", "failure_b",
                     "success_c", "failure_c"):
            m = np.array(getattr(self, name), dtype=np.complex128).reshape(2, 2)
            m.flags.writeable = False
            object.__setattr__(self, name, m)
        for succ, fail, party in self.pairs():
            comp = succ.conj().T @ succ + fail.conj().T @ fail
            if np.max(np.abs(comp - np.eye(2))) > 1e-10:
                raise InvariantViolationError(f"POVM pair for {party} is not complete")
            sv = np.linalg.svd(fail, compute_uv=False)
            if sv[1] > 1e-8 * sv[0]:
                raise InvariantViolationError(
                    f"failure operator for {party} has rank 2 (singular values {sv})"
                )

    def pairs(self):
        return (
            (self.success_a, self.failure_a, "A"),
            (self.success_b, self.failure_b, "B"),
            (self.success_c, self.failure_c, "C"),
        )


def objective(d: ProductDecomposition, x: float) -> float:
    """Branch-probability objective of the 1-D reduction, at x > 0."""
    if not x > 0.0:
        raise NonPositiveXError(f"objective requires x > 0, got {x!r}")
    return kernels.objective_value(d.mu1, d.mu2, d.sa, d.sb, d.sc, float(x))


def grid_search_probability(d: ProductDecomposition, points: int = 100_000,
                            x_lo: float = X_LO, x_hi: float = X_HI) -> tuple[float, float]:
    """Exhaustive log-grid maximization; the oracle for the refined solvers."""
    return kernels.grid_max(d.mu1, d.mu2, d.sa, d.sb, d.sc, x_lo, x_hi, points)


def _max_objective(d: ProductDecomposition) -> tuple[float, float]:
    """Global maximum of the objective: multistart Brent over log-x plus a
    grid fallback, deterministic best-value-then-lowest-x reduction.

    The objective is smooth except when a square-root argument vanishes at
    the maximum, which happens only at x = 1 (for sa = 0) and x = mu1/mu2
    (for sb = sc = 0); those cusp points defeat bracketing solvers, so they
    are always evaluated as explicit candidates.
    """
    args = (d.mu1, d.mu2, d.sa, d.sb, d.sc)

    def neg(u: float) -> float:
        return -kernels.objective_value(*args, float(np.exp(u)))

    u_lo, u_hi = np.log(X_LO), np.log(X_HI)
    candidates: list[tuple[float, float]] = []
    for x in (1.0, min(max(d.mu1 / d.mu2, X_LO), X_HI)):
        candidates.append((kernels.objective_value(*args, x), x))

    gv, gx = kernels.grid_max(*args, X_LO, X_HI, _SEED_GRID)
    candidates.append((gv, gx))
    step = (u_hi - u_lo) / (_SEED_GRID - 1)
    brackets = [(max(u_lo, np.log(gx) - step), min(u_hi, np.log(gx) + step))]
    edges = np.linspace(u_lo, u_hi, _MULTISTARTS + 1)
    brackets += [(edges[i], edges[i + 1]) for i in range(_MULTISTARTS)]

    for lo, hi in brackets:
        res = minimize_scalar(neg, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        candidates.append((-res.fun, float(np.exp(res.x))))

    best = max(v for v, _ in candidates)
    tied = [x for v, x in candidates if v >= best - _PLATEAU_RTOL * max(1.0, best)]
    # rounding in the decomposition data can push the evaluated maximum a few
    # ulp above 1; the value is a probability, so cap it there
    return min(best, 1.0), min(tied)


def optimal_probability_value(d: ProductDecomposition) -> float:
    """Optimal OSBP probability only (no coefficient recovery)."""
    return _max_objective(d)[0]


def optimal_probability(d: ProductDecomposition) -> OsbpSolution:
    """Optimal OSBP probability plus the realizing POVM coefficients.

    The probability comes from the 1-D objective; the six magnitudes come
    from the direct constrained solver.  Their agreement (within 1e-8) is
    enforced here, so a silent divergence of the two routes cannot go
    unnoticed.
    """
    p_opt, x_star = _max_objective(d)
    coeffs = solve_coefficients(d)
    sol = OsbpSolution(
        p_opt=p_opt, x_star=x_star,
        alpha1=coeffs[0], alpha2=coeffs[1],
        beta1=coeffs[2], beta2=coeffs[3],
        gamma1=coeffs[4], gamma2=coeffs[5],
        phase_a=-d.phi, phase_b=0.0, phase_c=0.0,
    )
    _check_solution(d, sol)
    return sol


def _check_solution(d: ProductDecomposition, sol: OsbpSolution) -> None:
    a1, a2, b1, b2, g1, g2 = sol.coefficients
    if abs(sol.p_opt - 2.0 * (a1 * b1 * g1 * d.mu1) ** 2) > 1e-8:
        raise InvariantViolationError("coefficient product disagrees with p_opt")
    if abs(a1 * b1 * g1 * d.mu1 - a2 * b2 * g2 * d.mu2) > 1e-8:
        raise InvariantViolationError("branch weights are not balanced")
    for k1, k2, s, name in ((a1, a2, d.sa, "alpha"), (b1, b2, d.sb, "beta"),
                            (g1, g2, d.sc, "gamma")):
        if abs((1.0 - k1 ** 2) * (1.0 - k2 ** 2) - s * s) > 1e-8:
            raise InvariantViolationError(f"rank-1 completion constraint broken for {name}")
    phase_sum = (sol.phase_a + sol.phase_b + sol.phase_c + d.phi) % (2.0 * np.pi)
    if min(phase_sum, 2.0 * np.pi - phase_sum) > 1e-10:
        raise InvariantViolationError("operator phases do not cancel the decomposition phase")


def closed_form_one_site(d: ProductDecomposition) -> float:
    """Optimal probability when only one site (C) is non-orthogonal.

    Requires sa = sb = 0; the value equals twice the smallest eigenvalue of
    the single-party reduction of the acting site.
    """
    if d.sa > 1e-10 or d.sb > 1e-10:
        raise PreconditionViolatedError(
            f"one-site closed form needs sa = sb = 0, got sa={d.sa!r}, sb={d.sb!r}"
        )
    arg = 1.0 - 4.0 * d.mu1 ** 2 * d.mu2 ** 2 * (1.0 - d.sc ** 2)
    return 1.0 - np.sqrt(max(0.0, arg))


@dataclass(frozen=True)
class TwoSiteClosedForm:
    """Closed-form result for decompositions with sa = 0."""

    p: float
    ratio_beta: float              # beta1^2 / beta2^2 at the optimum
    ratio_gamma: float             # gamma1^2 / gamma2^2 at the optimum
    ratios_by_continuity: bool     # True when sb = sc = 0 forced the 0/0 limit


def closed_form_two_sites(d: ProductDecomposition) -> TwoSiteClosedForm:
    """Optimal probability and coefficient ratios when Alice's pair is
    orthogonal (sa = 0); only the other two parties need to act.

    The ratio formulas are stated with the term-1 coefficient in the
    numerator: ratio_beta = (mu2/mu1)(mu2*sb + mu1*sc)/(mu1*sb + mu2*sc)
    and ratio_beta * ratio_gamma = (mu2/mu1)^2, as required by the balance
    condition (term 1 carries the larger weight, so its coefficients are
    damped harder).  When sb = sc = 0 the ratio expression degenerates to
    0/0 and its diagonal limit mu2/mu1 is reported with a flag; the actual
    optimum then uses trivial pairs (1, 1) for both sites.
    """
    if d.sa > 1e-10:
        raise PreconditionViolatedError(f"two-site closed form needs sa = 0, got {d.sa!r}")
    mu1, mu2, sb, sc = d.mu1, d.mu2, d.sb, d.sc
    pref = 1.0 + 2.0 * mu1 * mu2 * sb * sc
    k2 = 4.0 * mu1 ** 2 * mu2 ** 2 * (1.0 - sb ** 2) * (1.0 - sc ** 2)
    p = pref * (1.0 - np.sqrt(max(0.0, 1.0 - k2 / pref ** 2)))
    if sb + sc <= _ZERO_OVERLAP:
        ratio = mu2 / mu1
        return TwoSiteClosedForm(p=float(p), ratio_beta=ratio, ratio_gamma=ratio,
                                 ratios_by_continuity=True)
    ratio_beta = (mu2 / mu1) * (mu2 * sb + mu1 * sc) / (mu1 * sb + mu2 * sc)
    ratio_gamma = (mu2 / mu1) ** 2 / ratio_beta
    return TwoSiteClosedForm(p=float(p), ratio_beta=float(ratio_beta),
                             ratio_gamma=float(ratio_gamma),
                             ratios_by_continuity=False)


def _completion(s: float, k1):
    """Second coefficient on the curve (1-k1^2)(1-k2^2) = s^2 (s > 0)."""
    return np.sqrt(1.0 - s * s / (1.0 - np.square(k1)))


def _smaller_balance_root(rho, s: float):
    """Smaller root y of rho^2 y^2 - (1+rho^2) y + (1-s^2) = 0.

    This is the unique feasible alpha2^2 given the coefficient ratio rho =
    alpha1/alpha2: the quadratic is negative at y = 1 and at y = 1/rho^2,
    so the smaller root keeps both coefficients in (0, 1].  Evaluated in
    the cancellation-free form.
    """
    r2 = np.square(rho)
    disc = np.square(1.0 - r2) + 4.0 * r2 * s * s
    return 2.0 * (1.0 - s * s) / ((1.0 + r2) + np.sqrt(disc))


def _alpha_pair(rho, sa: float):
    """Coefficients (alpha1, alpha2) balancing ratio rho on Alice's curve."""
    if sa <= _ZERO_OVERLAP:
        a1 = np.where(rho <= 1.0, rho, 1.0)
        a2 = np.where(rho <= 1.0, 1.0, 1.0 / rho)
        return a1, a2
    y = _smaller_balance_root(rho, sa)
    a2 = np.sqrt(y)
    return rho * a2, a2


def _maximize_1d(f, lo: float, hi: float, grid_n: int = 128) -> float:
    """Argmax of f on (lo, hi): vectorized grid seed plus a Brent polish."""
    xs = np.linspace(lo, hi, grid_n + 2)[1:-1]
    vals = f(xs)
    i = int(np.argmax(vals))
    blo = xs[i - 1] if i > 0 else lo
    bhi = xs[i + 1] if i < len(xs) - 1 else hi
    res = minimize_scalar(lambda t: -float(f(t)), bounds=(blo, bhi),
                          method="bounded", options={"xatol": 1e-11})
    return float(res.x) if -res.fun >= vals[i] else float(xs[i])


def solve_coefficients(d: ProductDecomposition) -> tuple[float, float, float, float, float, float]:
    """POVM magnitudes (alpha1, alpha2, beta1, beta2, gamma1, gamma2)
    maximizing the branch probability under the rank-1 completion and
    balance constraints.

    Direct constrained maximization over the free coefficients: sites with
    zero overlap are pinned to trivial pairs (their constraint curve
    degenerates to "one coefficient equals 1" and damping the heavier term
    there never beats absorbing the balance elsewhere), Alice's pair is
    eliminated through the balance condition, and whatever remains is a 0-,
    1- or 2-dimensional smooth maximization handled by nested scalar
    solvers.  With sa = 0 the balance is carried entirely by Bob and
    Claire (alpha1 = alpha2 = 1 at the optimum) and the feasible curve is
    walked in closed form.
    """
    mu1, mu2, sa, sb, sc = d.mu1, d.mu2, d.sa, d.sb, d.sc
    free_b = sb > _ZERO_OVERLAP
    free_c = sc > _ZERO_OVERLAP
    r = mu1 / mu2

    def finish(b1, b2, g1, g2):
        rho = (mu2 * b2 * g2) / (mu1 * b1 * g1)
        a1, a2 = _alpha_pair(rho, sa)
        if not (0.0 < a1 <= 1.0 + 1e-12 and 0.0 < a2 <= 1.0 + 1e-12):
            raise InfeasibleBalanceError(
                f"no Alice coefficients balance ratio {rho!r}"
            )
        return (float(min(a1, 1.0)), float(min(a2, 1.0)),
                float(b1), float(b2), float(g1), float(g2))

    if sa <= _ZERO_OVERLAP:
        if not free_b and not free_c:
            return finish(1.0, 1.0, 1.0, 1.0)
        if free_b != free_c:
            # single acting site: balance mu1 k1 = mu2 k2 on its curve, so
            # k2/k1 = r and k1^2 is the smaller root of the ratio quadratic
            s = sb if free_b else sc
            g = _smaller_balance_root(r, s)
            k1, k2 = np.sqrt(g), r * np.sqrt(g)
            return finish(k1, k2, 1.0, 1.0) if free_b else finish(1.0, 1.0, k1, k2)

        # both sites act; alpha1 = alpha2 = 1, so the balance condition picks
        # Claire's point on her curve as a function of Bob's
        def claire_point(b1):
            b2 = _completion(sb, b1)
            k = (mu2 * b2) / (mu1 * b1)       # = gamma1/gamma2 from balance
            h = _smaller_balance_root(k, sc)  # gamma2^2
            return b2, k * np.sqrt(h), np.sqrt(h)

        def value(b1):
            _, g1, _ = claire_point(b1)
            return 2.0 * np.square(mu1 * b1 * g1)

        b1 = _maximize_1d(value, 0.0, np.sqrt(1.0 - sb * sb))
        b2, g1, g2 = claire_point(b1)
        return finish(b1, b2, g1, g2)

    def probability(b1, g1, b2, g2):
        rho = (mu2 * b2 * g2) / (mu1 * b1 * g1)
        a1, _ = _alpha_pair(rho, sa)
        return 2.0 * np.square(a1 * b1 * g1 * mu1)

    if not free_b and not free_c:
        return finish(1.0, 1.0, 1.0, 1.0)

    if free_b != free_c:
        s = sb if free_b else sc

        def value(k1):
            return probability(k1, 1.0, _completion(s, k1), 1.0)

        k1 = _maximize_1d(value, 0.0, np.sqrt(1.0 - s * s))
        k2 = float(_completion(s, k1))
        return finish(k1, k2, 1.0, 1.0) if free_b else finish(1.0, 1.0, k1, k2)

    g1_hi = np.sqrt(1.0 - sc * sc)

    def best_claire(b1):
        b2 = float(_completion(sb, b1))
        g1 = _maximize_1d(lambda g: probability(b1, g, b2, _completion(sc, g)),
                          0.0, g1_hi)
        return g1, b2

    def outer(b1_arr):
        b1_arr = np.atleast_1d(b1_arr)
        out = np.empty_like(b1_arr)
        for i, b1 in enumerate(b1_arr):
            g1, b2 = best_claire(float(b1))
            out[i] = probability(b1, g1, b2, _completion(sc, g1))
        return out if out.size > 1 else float(out[0])

    b1 = _maximize_1d(outer, 0.0, np.sqrt(1.0 - sb * sb), grid_n=64)
    g1, b2 = best_claire(b1)
    return finish(b1, b2, g1, float(_completion(sc, g1)))


def _psd_sqrt(h: np.ndarray) -> np.ndarray:
    ev, vec = np.linalg.eigh(h)
    if ev[0] < -1e-10:
        raise InvariantViolationError(f"failure operator square has eigenvalue {ev[0]!r}")
    # the completion constraint makes one eigenvalue exactly zero; clamp the
    # rounding residue so the square root does not lift it to sqrt(eps)
    ev = np.where(ev > 1e-12 * max(float(ev[-1]), 0.0), ev, 0.0)
    return (vec * np.sqrt(ev)) @ vec.conj().T


def build_povms(d: ProductDecomposition, sol: OsbpSolution) -> PovmTriple:
    """Explicit two-outcome POVMs realizing the optimal branch.

    Success operators map the (generally non-orthogonal) local pairs onto
    |0>, |1> through the biorthogonal basis; failure operators are the PSD
    square roots of the completions, rank 1 by construction (identically
    zero in the fully orthogonal balanced case, where nobody needs to
    filter).  Applying the success triple to the decomposed state is
    verified here to give the GHZ state at probability p_opt.
    """
    ops = {}
    for site, (v1, v2, k1, k2, phase) in {
        "a": (d.a1, d.a2, sol.alpha1, sol.alpha2, sol.phase_a),
        "b": (d.b1, d.b2, sol.beta1, sol.beta2, sol.phase_b),
        "c": (d.c1, d.c2, sol.gamma1, sol.gamma2, sol.phase_c),
    }.items():
        t1, t2 = dual_basis(v1, v2)
        succ = np.zeros((2, 2), dtype=np.complex128)
        succ[0, :] = k1 * t1.conj()
        succ[1, :] = k2 * np.exp(1j * phase) * t2.conj()
        comp = np.eye(2) - succ.conj().T @ succ
        ops[site] = (succ, _psd_sqrt(comp))

    triple = PovmTriple(
        success_a=ops["a"][0], failure_a=ops["a"][1],
        success_b=ops["b"][0], failure_b=ops["b"][1],
        success_c=ops["c"][0], failure_c=ops["c"][1],
    )

    raw, p = apply_local(reconstruct(d), triple.success_a, triple.success_b,
                         triple.success_c)
    if fidelity_with(normalize(raw), ghz_state()) < 1.0 - 1e-10:
        raise InvariantViolationError("success branch does not produce the GHZ state")
    if abs(p - sol.p_opt) > 1e-8:
        raise InvariantViolationError(
            f"success branch probability {p!r} disagrees with p_opt {sol.p_opt!r}"
        )
    return triple
