"""Diamond-Halberstam-Richert sieve functions and the almost-prime bound.

The upper and lower sieve functions ``F`` and ``f`` of dimension ``kappa``
are the solutions of the delay-differential system

    sigma(u) = (exp(-gamma) u / 2)**kappa / kappa!        0 < u <= 2
    (u**-kappa sigma(u))' = -kappa u**(-kappa-1) sigma(u-2) u > 2

    F(u) = 1 / sigma(u)                 0 < u <= alpha_kappa
    f(u) = 0                            0 < u <= beta_kappa
    (u**kappa F(u))' = kappa u**(kappa-1) f(u-1)   u > alpha_kappa
    (u**kappa f(u))' = kappa u**(kappa-1) F(u-1)   u > beta_kappa

Every right-hand side only looks backwards by a whole unit, so each
unknown is a running integral of already-known values.  The grid is built
periodic modulo 1 with nodes at every ``alpha_kappa + k``,
``beta_kappa + k`` and integer, so delayed arguments land exactly on
stored nodes and no quadrature panel straddles a derivative jump.  Panels
are integrated with composite Simpson, which is fourth order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate, optimize

from .errors import (
    CapExceeded,
    ConstraintViolated,
    FOutOfRange,
    InconsistentParams,
    NoFeasiblePoint,
    StepTooCoarse,
)

EULER_GAMMA = 0.5772156649015329

# (alpha_kappa, beta_kappa) for kappa = 2..10, as tabulated to four decimals.
DHR_CONSTANTS: dict[int, tuple[float, float]] = {
    2: (5.3577, 4.2644),
    3: (8.3719, 6.6408),
    4: (11.5317, 9.0722),
    5: (14.7735, 11.5347),
    6: (18.0679, 14.0146),
    7: (21.3989, 16.5042),
    8: (24.7571, 18.9988),
    9: (28.1326, 21.4955),
    10: (31.5320, 23.9924),
}

# r_M for g = 2..10.
TABLE_R_M: dict[int, int] = {2: 5, 3: 8, 4: 12, 5: 16, 6: 20, 7: 25, 8: 29, 9: 34, 10: 39}

MAX_STEP = 1e-3
_F_SLACK = 1e-3  # tolerated excursion of f above 1 from 4-digit constants


@dataclass(frozen=True)
class SieveParams:
    kappa: int
    alpha_kappa: float
    beta_kappa: float
    alpha: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        if self.kappa < 1:
            raise InconsistentParams("kappa must be a positive integer")
        if not self.beta_kappa > 2:
            raise InconsistentParams("beta_kappa must exceed 2")
        if not self.alpha_kappa > self.beta_kappa:
            raise InconsistentParams("alpha_kappa must exceed beta_kappa")
        if not 0 < self.alpha <= 1:
            raise InconsistentParams("alpha must lie in (0, 1]")
        if self.mu == 0.0:
            object.__setattr__(self, "mu", float(self.kappa))
        if self.mu <= 0:
            raise InconsistentParams("mu must be positive")

    @classmethod
    def for_forms(cls, g: int) -> "SieveParams":
        """Parameters used for ``g`` forms: kappa = mu = g, alpha = 1."""
        if g not in DHR_CONSTANTS:
            raise InconsistentParams(f"no tabulated constants for kappa={g}")
        a, b = DHR_CONSTANTS[g]
        return cls(kappa=g, alpha_kappa=a, beta_kappa=b, alpha=1.0, mu=float(g))


# ---------------------------------------------------------------------------
# grid and quadrature helpers
# ---------------------------------------------------------------------------

def _unit_pattern(fracs, step):
    """Node offsets in [0, 1) with every fraction in ``fracs`` as a node.

    Returns (offsets, is_break) where each gap between consecutive
    breakpoints is split into an even number of equal panels.
    """
    pts = sorted(set([0.0] + [x % 1.0 for x in fracs]))
    cleaned = [pts[0]]
    for x in pts[1:]:
        if x - cleaned[-1] > 1e-12 and 1.0 - x > 1e-12:
            cleaned.append(x)
    cleaned.append(1.0)
    offsets, is_break = [], []
    for lo, hi in zip(cleaned[:-1], cleaned[1:]):
        m = 2 * max(1, math.ceil((hi - lo) / (2 * step)))
        seg = lo + (hi - lo) * np.arange(m) / m
        offsets.extend(seg.tolist())
        is_break.extend([True] + [False] * (m - 1))
    return np.array(offsets), np.array(is_break)


def _cumulative_simpson(y, h):
    """Running integral of uniformly sampled ``y`` (even panel count).

    Even nodes get composite Simpson; odd nodes add the three-point
    partial rule to the preceding even node.  Both are fourth order.
    """
    n = len(y) - 1
    out = np.zeros(len(y))
    if n == 0:
        return out
    pairs = h / 3.0 * (y[0:-2:2] + 4.0 * y[1:-1:2] + y[2::2])
    out[2::2] = np.cumsum(pairs)
    out[1::2] = out[0:-2:2] + h / 12.0 * (5.0 * y[0:-2:2] + 8.0 * y[1:-1:2] - y[2::2])
    return out


def sigma_initial(kappa: int, u):
    """Closed-form sigma on (0, 2]."""
    u = np.asarray(u, dtype=float)
    return (math.exp(-EULER_GAMMA) * u / 2.0) ** kappa / math.factorial(kappa)


class HermiteTable:
    """Piecewise cubic Hermite interpolant with one-sided node derivatives."""

    def __init__(self, x, y, dleft, dright):
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.dl = np.asarray(dleft, dtype=float)
        self.dr = np.asarray(dright, dtype=float)

    @property
    def domain(self):
        return float(self.x[0]), float(self.x[-1])

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        lo, hi = self.domain
        if np.any(q < lo - 1e-12) or np.any(q > hi + 1e-12):
            raise FOutOfRange(f"argument outside tabulated domain [{lo}, {hi}]")
        i = np.clip(np.searchsorted(self.x, q, side="right") - 1, 0, len(self.x) - 2)
        x0, x1 = self.x[i], self.x[i + 1]
        h = x1 - x0
        t = (q - x0) / h
        t2, t3 = t * t, t * t * t
        h00 = 2 * t3 - 3 * t2 + 1
        h10 = t3 - 2 * t2 + t
        h01 = -2 * t3 + 3 * t2
        h11 = t3 - t2
        return h00 * self.y[i] + h10 * h * self.dr[i] + h01 * self.y[i + 1] + h11 * h * self.dl[i + 1]


@dataclass
class SieveFunctionTable:
    params: SieveParams
    grid: np.ndarray
    sigma: np.ndarray
    F: np.ndarray
    f: np.ndarray
    step: float
    F_interp: HermiteTable
    f_interp: HermiteTable
    sigma_interp: HermiteTable

    def F_at(self, u):
        return self.F_interp(u)

    def f_at(self, u):
        return self.f_interp(u)

    def sigma_at(self, u):
        return self.sigma_interp(u)


def _build_grid(fracs, u_max, step):
    offsets, brk = _unit_pattern(fracs, step)
    units = math.ceil(u_max)
    n = len(offsets)
    grid = (np.arange(units)[:, None] + offsets[None, :]).ravel()
    grid = np.append(grid, float(units))
    brk = np.append(np.tile(brk, units), True)
    return grid, brk, n


def _segments(brk):
    idx = np.flatnonzero(brk)
    return list(zip(idx[:-1], idx[1:]))


def _check_step(step, max_step):
    if step <= 0:
        raise StepTooCoarse("step must be positive")
    if step > max_step:
        raise StepTooCoarse(f"step {step} exceeds {max_step}")


def _solve_sigma_on(kappa, grid, brk, n):
    sigma = np.zeros_like(grid)
    init = grid <= 2.0 + 1e-12
    sigma[init] = sigma_initial(kappa, grid[init])
    # the pattern holds an integer node, so u = 2 is a node
    two = int(np.flatnonzero(np.isclose(grid, 2.0))[0])
    h_val = sigma[two] * 2.0 ** -kappa  # running value of u**-kappa sigma(u)
    for a, b in _segments(brk):
        if a < two:
            continue
        u = grid[a : b + 1]
        y = -kappa * u ** (-kappa - 1.0) * sigma[a - 2 * n : b + 1 - 2 * n]
        run = h_val + _cumulative_simpson(y, (u[-1] - u[0]) / (b - a))
        sigma[a : b + 1] = run * u**kappa
        h_val = run[-1]
    return sigma


def _sigma_derivative(kappa, grid, sigma, n):
    d = np.zeros_like(grid)
    pos = grid > 0
    d[pos] = kappa * sigma[pos] / grid[pos]
    late = np.flatnonzero(grid > 2.0 + 1e-12)
    d[late] -= kappa * sigma[late - 2 * n] / grid[late]
    return d


def solve_sigma(kappa: int, u_max: float, step: float = MAX_STEP, *, max_step: float = MAX_STEP):
    """Tabulate sigma_kappa on a uniform-per-panel grid over [0, u_max].

    Returns ``(grid, sigma)``.  ``max_step`` may be raised only for
    deliberate convergence studies.
    """
    _check_step(step, max_step)
    grid, brk, n = _build_grid([0.0], max(u_max, 2.0), step)
    return grid, _solve_sigma_on(kappa, grid, brk, n)


def solve_Ff(params: SieveParams, u_max: float, step: float = MAX_STEP, *,
             max_step: float = MAX_STEP, check: bool = True) -> SieveFunctionTable:
    """Integrate sigma, F and f jointly up to ``u_max``."""
    _check_step(step, max_step)
    k = params.kappa
    A, B = params.alpha_kappa, params.beta_kappa
    if u_max < A + 2:
        raise StepTooCoarse(f"u_max must be at least alpha_kappa + 2 = {A + 2}")
    grid, brk, n = _build_grid([A, B], u_max, step)
    sigma = _solve_sigma_on(k, grid, brk, n)
    ia = int(np.argmin(np.abs(grid - A)))
    ib = int(np.argmin(np.abs(grid - B)))
    grid[ia], grid[ib] = A, B

    F = np.full_like(grid, np.inf)
    f = np.zeros_like(grid)
    F[1 : ia + 1] = 1.0 / sigma[1 : ia + 1]
    G = A**k * F[ia]  # running u**k F(u)
    H = 0.0  # running u**k f(u)
    for a, b in _segments(brk):
        u = grid[a : b + 1]
        h = (u[-1] - u[0]) / (b - a)
        if a >= ia:
            y = k * u ** (k - 1.0) * f[a - n : b + 1 - n]
            run = G + _cumulative_simpson(y, h)
            F[a : b + 1] = run / u**k
            G = run[-1]
        if a >= ib:
            y = k * u ** (k - 1.0) * F[a - n : b + 1 - n]
            run = H + _cumulative_simpson(y, h)
            f[a : b + 1] = run / u**k
            H = run[-1]

    ds = _sigma_derivative(k, grid, sigma, n)
    pos = np.flatnonzero(grid > 0)
    dF_left = np.zeros_like(grid)
    dF_right = np.zeros_like(grid)
    dF_left[pos] = -ds[pos] / sigma[pos] ** 2
    dF_right[pos] = dF_left[pos]
    late = np.arange(ia, len(grid))
    dde = k * (f[late - n] - F[late]) / grid[late]
    dF_right[late] = dde
    dF_left[late[1:]] = dde[1:]

    df_left = np.zeros_like(grid)
    df_right = np.zeros_like(grid)
    late = np.arange(ib, len(grid))
    dde = k * (F[late - n] - f[late]) / grid[late]
    df_right[late] = dde
    df_left[late[1:]] = dde[1:]

    # F and the sigma interpolant start just above 0, where F is singular
    F_interp = HermiteTable(grid[1:], F[1:], dF_left[1:], dF_right[1:])
    f_interp = HermiteTable(grid, f, df_left, df_right)
    sigma_interp = HermiteTable(grid, sigma, ds, ds)
    table = SieveFunctionTable(params, grid, sigma, F, f, step, F_interp, f_interp, sigma_interp)
    if check:
        tail = f[ib:]
        if np.any(tail < -1e-12) or np.any(tail > 1.0 + _F_SLACK):
            raise InconsistentParams("f left [0, 1]; alpha_kappa/beta_kappa pairing looks wrong")
        if np.any(F[1:] < 1.0 - _F_SLACK):
            raise InconsistentParams("F dropped below 1; alpha_kappa/beta_kappa pairing looks wrong")
    return table


# ---------------------------------------------------------------------------
# the almost-prime bound
# ---------------------------------------------------------------------------

def _check_uv(params, u, v):
    if not (1.0 / params.alpha < u < v):
        raise ConstraintViolated(f"need 1/alpha < u < v, got u={u}, v={v}")
    if not params.beta_kappa < params.alpha * v:
        raise ConstraintViolated(f"need beta_kappa < alpha*v, got alpha*v={params.alpha * v}")


def r_bound(params: SieveParams, u: float, v: float, table: SieveFunctionTable,
            epsrel: float = 1e-8) -> float:
    """Right-hand side of the lower bound on r at (u, v)."""
    _check_uv(params, u, v)
    av = params.alpha * v
    lo, hi = table.F_interp.domain
    if av > table.f_interp.domain[1] or av - 1.0 > hi or av - v / u < lo:
        raise FOutOfRange(f"alpha*v - s leaves tabulated range at v={v}")
    base = params.alpha * params.mu * u - 1.0
    top = v / u
    if top <= 1.0:
        return base

    def integrand(s):
        return float(table.F_interp(av - s)) * (1.0 - u * s / v) / s

    # kinks of F inside the range help quad place its subdivisions
    kinks = [av - x for x in (params.alpha_kappa,) if 1.0 < av - x < top]
    val, _ = integrate.quad(integrand, 1.0, top, epsrel=epsrel, epsabs=0.0,
                            points=kinks or None, limit=200)
    return base + params.kappa / float(table.f_interp(av)) * val


def _r_bound_grid(params, table, u, v, nodes=48):
    """Vectorised fixed-rule bound used only to seed the optimiser."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    top = v / u
    s = 1.0 + (top - 1.0)[:, None] * (x[None, :] + 1.0) / 2.0
    av = params.alpha * v
    vals = table.F_interp(av[:, None] - s) * (1.0 - (u / v)[:, None] * s) / s
    integral = (vals * w[None, :]).sum(axis=1) * (top - 1.0) / 2.0
    return params.alpha * params.mu * u - 1.0 + params.kappa / table.f_interp(av) * integral


@dataclass
class MinimizeResult:
    r_M: int
    u_star: float
    v_star: float
    bound: float
    near_integer: bool


def minimize_r(params: SieveParams, table: SieveFunctionTable | None = None, *,
               upper: float = 60.0, grid_step: float = 0.25, tol: float = 1e-6,
               step: float = MAX_STEP) -> MinimizeResult:
    """Infimum of the bound over the feasible (u, v) region, and r_M.

    A coarse grid locates the basin; Nelder-Mead with adaptive quadrature
    refines it.  ``r_M`` is the least integer strictly above the infimum.
    """
    if table is None:
        table = solve_Ff(params, upper / params.alpha + 1.0, step)
    a = params.alpha
    lo = 1.0 / a
    pts = lo + grid_step * np.arange(1, int(round((upper - lo) / grid_step)) + 1)
    uu, vv = np.meshgrid(pts, pts, indexing="ij")
    ok = (uu < vv) & (a * vv > params.beta_kappa) & (a * vv <= table.f_interp.domain[1])
    if not ok.any():
        raise NoFeasiblePoint("no feasible (u, v) on the search grid")
    u_c, v_c = uu[ok], vv[ok]
    coarse = _r_bound_grid(params, table, u_c, v_c)
    order = np.argsort(coarse)[:3]

    def objective(p):
        u, v = p
        try:
            return r_bound(params, u, v, table)
        except (ConstraintViolated, FOutOfRange):
            return np.inf

    best = None
    for j in order:
        res = optimize.minimize(objective, [u_c[j], v_c[j]], method="Nelder-Mead",
                                options={"xatol": tol, "fatol": tol, "maxiter": 4000,
                                         "initial_simplex": [[u_c[j], v_c[j]],
                                                             [u_c[j] + grid_step / 2, v_c[j]],
                                                             [u_c[j], v_c[j] + grid_step / 2]]})
        if best is None or res.fun < best.fun:
            best = res
    if not np.isfinite(best.fun):
        raise NoFeasiblePoint("optimiser found no finite bound")
    bound = float(best.fun)
    r_M = math.floor(bound) + 1
    near = abs(bound - round(bound)) < 1e-4
    if near:
        warnings.warn(f"bound {bound:.8f} within 1e-4 of an integer; r_M={r_M} is fragile")
    return MinimizeResult(r_M, float(best.x[0]), float(best.x[1]), bound, near)


def sieve_table(kappas=range(2, 11), step: float = MAX_STEP):
    """One MinimizeResult per kappa using the tabulated constants."""
    rows = []
    for k in kappas:
        params = SieveParams.for_forms(k)
        res = minimize_r(params, step=step)
        rows.append((params, res))
    return rows


# ---------------------------------------------------------------------------
# sifted density
# ---------------------------------------------------------------------------

_EXACT_DENOM_CAP = 10**400


def density_product(system, X: float, gamma: float) -> float:
    """prod over primes p < X**gamma of (1 - omega(p)/p).

    Accumulated as an exact Fraction until the denominator grows past a
    cap, then continued in floating point.
    """
    from .localdensity import omega_closed
    from .numutil import primes_below

    limit = X**gamma
    if limit > 1e7:
        raise CapExceeded(f"X**gamma = {limit:.3g} exceeds 1e7")
    exact = Fraction(1)
    approx = None
    for p in primes_below(math.ceil(limit)):
        if p >= limit:
            break
        factor = 1 - omega_closed(system, p) / p
        if approx is None:
            exact *= factor
            if exact.denominator > _EXACT_DENOM_CAP:
                approx = float(exact)
        else:
            approx *= float(factor)
    return float(exact) if approx is None else approx
