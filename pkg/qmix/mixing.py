# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.

Convergence of states to the stationary state: distances, time evolution,
the chi-squared and Log-Sobolev mixing bounds and the checks built on them.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.linalg
from scipy.optimize import minimize

from .dirichlet_gap import dirichlet_p, symmetrized_generator
from .errors import (NotLazyError, NotPositiveError, NotReversibleError,
                     RankDeficientError, TheoryViolationError)
from .generators import Generator, build_lindblad, semigroup
from .ls_estimator import (depolarizing_alpha1, depolarizing_alpha2,
                           hermitian_from_params)
from .lp_space import xlogx
from .models.mixing_curve import MixingCurve
from .models.relative_density import RelativeDensity
from .operator_core import (Superoperator, expm, hermitian, matrix_function,
                            random_pure_state, trace_norm, vec)


__all__ = ("distances", "evolve", "Propagator", "bound_curves",
           "mixing_time", "entropy_decay_check", "entropy_production",
           "pq_norm", "hat_channel", "two_to_two_decay",
           "discrete_vs_continuous", "chi2_gap_bound_check",
           "thermal_sigma_min_bound", "unital_entropy_hamiltonian_invariance",
           "crossing_time", "initial_states", "depolarizing_curve",
           "depolarizing_mixing_time")

logger = logging.getLogger(__name__)

STATE_TRACE_TOL = 1e-8
STATE_PSD_FLOOR = -1e-10
DISTANCE_TOL = 1e-9
DOMINATION_SLACK = 1e-7
DECAY_SLACK = 1e-7
DERIVATIVE_TOL = 1e-4
DERIVATIVE_STEP = 1e-4
IDENTITY_TOL = 1e-8
LAZY_TOL = 1e-10
DC_SLACK = 1e-9
HAAR_SAMPLES = 50
BISECTION_TOL = 1e-6


def _state(rho, name="rho"):
    rho = hermitian(rho, name, tol=1e-10)
    trace = float(np.trace(rho).real)
    if abs(trace - 1.0) > STATE_TRACE_TOL:
        raise ValueError(f"{name} must have unit trace, got {trace:.12g}")
    if scipy.linalg.eigvalsh(rho)[0] < STATE_PSD_FLOOR:
        raise NotPositiveError(f"{name} is not positive semidefinite")
    return rho


def _chi2(rho, space):
    y = space.gamma_power(-0.5, rho - space.sigma)
    return float(np.sum(np.abs(y) ** 2))


def distances(rho, space):
    """Trace distance, chi-squared divergence and relative entropy of rho
    to sigma.

    Pinsker's inequality and the chi-squared bound on the trace distance are
    checked on the way.

    Returns
    -------

    dict
        ``trace``, ``chi2`` and ``rel_ent``

    Raises
    ------

    TheoryViolationError
        When either inequality fails beyond ``1e-9``
    """

    rho = _state(rho)
    trace = trace_norm(rho - space.sigma)
    chi2 = _chi2(rho, space)
    rel_ent = space.relative_entropy(rho)
    if trace ** 2 > 2 * rel_ent + DISTANCE_TOL:
        raise TheoryViolationError("Pinsker inequality fails",
                                   lhs=trace ** 2, rhs=2 * rel_ent)
    if trace ** 2 > chi2 + DISTANCE_TOL:
        raise TheoryViolationError("chi-squared bound on the trace distance "
                                   "fails", lhs=trace ** 2, rhs=chi2)
    return {"trace": trace, "chi2": chi2, "rel_ent": rel_ent}


class Propagator():
    """Schroedinger picture propagators ``exp(t L*)`` of one generator.

    For reversible generators the symmetrization is diagonalized once and
    every time reuses that eigendecomposition; otherwise each time costs an
    ``expm``.
    """

    __slots__ = ("generator", "_eig", "_left", "_right")

    def __init__(self, generator):
        self.generator = generator
        self._eig = None
        if generator.reversible:
            space = generator.stationary
            self._eig = scipy.linalg.eigh(symmetrized_generator(generator))
            self._left = space.gamma_superoperator(0.5).matrix
            self._right = space.gamma_superoperator(-0.5).matrix

    def __call__(self, t):
        if t < 0:
            raise ValueError("t must be >= 0")
        if self._eig is None:
            return expm(self.generator.super_Lstar, t)
        w, v = self._eig
        core = (v * np.exp(t * np.minimum(w, 0.0))) @ v.conj().T
        return Superoperator(self._left @ core @ self._right,
                             self.generator.dim)

    def state(self, rho, t):
        out = self(t)(rho)
        out = (out + out.conj().T) / 2
        return out / np.trace(out).real


def evolve(generator, rho0, t):
    """``rho_t = exp(t L*)(rho0)``.

    Parameters
    ----------

    generator: :class:`qmix.generators.Generator`

    rho0: :class:`numpy.ndarray`
        Density matrix

    t: :class:`float`
        Time, >= 0
    """

    if t < 0:
        raise ValueError("t must be >= 0")
    rho0 = _state(rho0, "rho0")
    out = semigroup(generator, t, "schroedinger")(rho0)
    out = (out + out.conj().T) / 2
    trace = float(np.trace(out).real)
    if abs(trace - 1.0) > 1e-10:
        logger.warning("evolved state has trace %.12g", trace)
    return out


def initial_states(space, samples=HAAR_SAMPLES, seed=0):
    """Eigenprojectors of sigma followed by Haar random pure states."""
    w, v = space.sigma_eig
    states = [np.outer(v[:, k], v[:, k].conj()) for k in range(space.dim)]
    rng = np.random.default_rng(seed)
    states += [random_pure_state(space.dim, rng) for _ in range(samples)]
    return states


def _worst(space, propagator, states, t):
    superop = propagator(t)
    worst = {"trace": 0.0, "chi2": 0.0, "rel_ent": 0.0}
    for rho in states:
        rho_t = superop(rho)
        rho_t = (rho_t + rho_t.conj().T) / 2
        for key, value in distances(rho_t / np.trace(rho_t).real,
                                    space).items():
            worst[key] = max(worst[key], value)
    return worst


def bound_curves(generator, lambda_, alpha1, t_grid, **kwargs):
    """Worst empirical distances on ``t_grid`` with the mixing bounds.

    Parameters
    ----------

    generator: :class:`qmix.generators.Generator`
        Primitive generator

    lambda_: :class:`float`
        Spectral gap. None omits the chi-squared bound.

    alpha1: :class:`float`
        LS_1 constant of ``L^``. None omits the LS bound.

    t_grid: [:class:`float`]

    alpha2: :class:`float`
        LS_2 constant, used with ``regularity``

    regularity: :class:`str`
        ``weak`` or ``strong``

    samples: :class:`int`
        Haar random pure states added to the eigenprojectors of sigma

    seed: :class:`int`

    jobs: :class:`int`
        Worker threads over the grid

    Returns
    -------

    :class:`qmix.models.mixing_curve.MixingCurve`
    """

    alpha2 = kwargs.pop("alpha2", None)
    regularity = kwargs.pop("regularity", None)
    samples = kwargs.pop("samples", HAAR_SAMPLES)
    seed = kwargs.pop("seed", 0)
    jobs = kwargs.pop("jobs", 1)

    space = generator.require_primitive()
    times = np.asarray(t_grid, dtype=float)
    propagator = Propagator(generator)
    states = initial_states(space, samples, seed)

    def run(t):
        return _worst(space, propagator, states, t)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run, times))
    else:
        rows = [run(t) for t in times]

    inv_min = 1.0 / space.sigma_min
    chi2_bound = ls_a1 = ls_a2 = None
    if lambda_ is not None:
        chi2_bound = np.sqrt(inv_min) * np.exp(-lambda_ * times)
    log_prefactor = np.sqrt(2.0 * np.log(inv_min))
    if alpha1 is not None:
        ls_a1 = log_prefactor * np.exp(-alpha1 * times)
    if alpha2 is not None and regularity in ("weak", "strong"):
        rate = alpha2 / 2.0 if regularity == "weak" else alpha2
        ls_a2 = log_prefactor * np.exp(-rate * times)

    curve = MixingCurve(times=times,
                        trace_dist=[row["trace"] for row in rows],
                        chi2=[row["chi2"] for row in rows],
                        rel_ent=[row["rel_ent"] for row in rows],
                        chi2_bound=chi2_bound, ls_bound_a1=ls_a1,
                        ls_bound_a2=ls_a2, sigma_min=space.sigma_min,
                        samples=len(states))
    margin = curve.domination_margin()
    if margin is not None and margin < -DOMINATION_SLACK:
        logger.warning("empirical trace distance exceeds a bound curve by "
                       "%.3e", -margin)
    return curve


def mixing_time(generator, epsilon, **kwargs):
    """Smallest t with worst sampled trace distance <= epsilon, by bisection.

    The worst case runs over the eigenprojectors of sigma and ``samples``
    Haar random pure states only.

    Parameters
    ----------

    generator: :class:`qmix.generators.Generator`

    epsilon: :class:`float`
        Target, > 0. Values >= 2 give 0.

    samples: :class:`int`

    seed: :class:`int`

    tol: :class:`float`
        Relative width of the final bracket
    """

    samples = kwargs.pop("samples", HAAR_SAMPLES)
    seed = kwargs.pop("seed", 0)
    tol = kwargs.pop("tol", BISECTION_TOL)
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if epsilon >= 2:
        return 0.0

    space = generator.require_primitive()
    propagator = Propagator(generator)
    states = initial_states(space, samples, seed)

    def worst(t):
        superop = propagator(t)
        return max(trace_norm(superop(rho) - space.sigma) for rho in states)

    if worst(0.0) <= epsilon:
        return 0.0
    lo, hi = 0.0, 1.0
    for _ in range(64):
        if worst(hi) <= epsilon:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise FloatingPointError("no mixing within the search horizon")
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if worst(mid) <= epsilon:
            hi = mid
        else:
            lo = mid
    logger.info("mixing time %.6g at epsilon %.3g over %d sampled states",
                hi, epsilon, len(states))
    return hi


def entropy_decay_check(generator, alpha1, f0, t_grid, lambda_=None):
    """Checks ``Var(f_t) <= exp(-2 lambda t) Var(f0)`` and
    ``Ent_1(f_t) <= exp(-2 alpha_1 t) Ent_1(f0)`` along ``f_t = exp(t L^)
    f0``, and ``d/dt Ent_1(f_t) = -2 E^_1(f_t)`` by central differences.

    Parameters
    ----------

    f0: :class:`qmix.models.relative_density.RelativeDensity`

    lambda_: :class:`float`
        Spectral gap; the variance decay is skipped without it

    Returns
    -------

    dict
        Per grid point margins (bound minus value), the derivative
        residuals and ``ok``
    """

    space = generator.require_primitive()
    if not isinstance(f0, RelativeDensity):
        f0 = RelativeDensity(value=f0, space=space)
    propagator = Propagator(generator)
    rho0 = f0.state()

    def ent(rho):
        return space.relative_entropy(rho)

    var0 = space.variance(f0.value)
    ent0 = ent(rho0)
    var_margins, ent_margins, residuals = [], [], []
    for t in t_grid:
        rho_t = propagator.state(rho0, t)
        f_t = space.relative_density(rho_t)
        ent_margins.append(np.exp(-2 * alpha1 * t) * ent0 - ent(rho_t))
        if lambda_ is not None:
            var_margins.append(np.exp(-2 * lambda_ * t) * var0
                               - space.variance(f_t))
        if t <= DERIVATIVE_STEP:
            continue
        try:
            production = dirichlet_p(generator.hat, 1, f_t)
        except NotPositiveError:
            continue
        slope = (ent(propagator.state(rho0, t + DERIVATIVE_STEP))
                 - ent(propagator.state(rho0, t - DERIVATIVE_STEP))) \
            / (2 * DERIVATIVE_STEP)
        residuals.append(abs(slope + 2 * production)
                         / (1.0 + abs(production)))

    ok = all(m >= -DECAY_SLACK for m in ent_margins + var_margins) \
        and all(r <= DERIVATIVE_TOL for r in residuals)
    if not ok:
        logger.warning("entropy decay check failed")
    return {"ent_margins": [float(m) for m in ent_margins],
            "var_margins": [float(m) for m in var_margins],
            "derivative_residuals": [float(r) for r in residuals],
            "ok": bool(ok)}


def entropy_production(generator, rho):
    """Entropy production ``Pi = dS/dt + Phi`` at the state rho, with
    ``dS/dt = -tr[L*(rho) log rho]`` and ``Phi = tr[L*(rho) log sigma]``.

    ``Pi`` is checked against ``2 E^_1(Gamma^{-1}(rho))`` and against a
    central difference of ``-D(rho_t || sigma)`` along the flow.

    Returns
    -------

    dict
        ``Pi``, ``dS_dt``, ``Phi`` and the finite difference ``dD_dt``

    Raises
    ------

    RankDeficientError
        When rho is not full rank
    TheoryViolationError
        When ``Pi`` differs from ``2 E^_1`` beyond ``1e-8``, or from
        ``-dD/dt`` beyond ``1e-4``
    """

    space = generator.require_primitive()
    rho = _state(rho)
    w, v = scipy.linalg.eigh(rho)
    if w[0] <= 1e-12 * w[-1]:
        raise RankDeficientError("entropy production requires a full rank "
                                 "state")
    log_rho = matrix_function(rho, np.log, eig=(w, v))
    flow = generator.super_Lstar(rho)
    ds_dt = -float(np.trace(flow @ log_rho).real)
    phi = float(np.trace(flow @ space.log_sigma).real)
    pi = ds_dt + phi
    scale = 1.0 + abs(pi)

    via_dirichlet = 2.0 * dirichlet_p(generator.hat, 1,
                                      space.relative_density(rho))
    if abs(pi - via_dirichlet) > IDENTITY_TOL * scale:
        raise TheoryViolationError("Pi differs from 2 E^_1", lhs=pi,
                                   rhs=via_dirichlet)

    ahead, behind = (expm(generator.super_Lstar, s)(rho)
                     for s in (DERIVATIVE_STEP, -DERIVATIVE_STEP))
    dd_dt = (space.relative_entropy((ahead + ahead.conj().T) / 2)
             - space.relative_entropy((behind + behind.conj().T) / 2)) \
        / (2.0 * DERIVATIVE_STEP)
    if abs(pi + dd_dt) > DERIVATIVE_TOL * scale:
        raise TheoryViolationError("Pi differs from -dD/dt", lhs=pi,
                                   rhs=-dd_dt)
    return {"Pi": pi, "dS_dt": ds_dt, "Phi": phi, "dD_dt": dd_dt}


def hat_channel(channel, space):
    """``T^ = Gamma^{-1} T* Gamma`` of a Heisenberg picture map."""
    return space.gamma_superoperator(-1.0) @ channel.adjoint() \
        @ space.gamma_superoperator(1.0)


def _conjugate(p):
    return np.inf if p == 1 else (1.0 if np.isinf(p) else p / (p - 1.0))


def pq_norm(target, p, q, t=0.0, **kwargs):
    """Lower bound on ``||T||_{(p,sigma) -> (q,sigma)}`` by multi-start
    maximization over positive definite f.

    Parameters
    ----------

    target: :class:`qmix.generators.Generator` or
            :class:`qmix.operator_core.Superoperator`
        Generator, evolved to ``T_t``, or a Heisenberg map

    p, q: :class:`float`
        Orders, >= 1

    t: :class:`float`

    space: :class:`qmix.lp_space.WeightedSpace`
        Required for a bare superoperator

    use_hat: :class:`bool`
        Use ``T^`` instead of ``T``

    restarts: :class:`int`

    max_evals: :class:`int`

    seed: :class:`int`
    """

    space = kwargs.pop("space", None)
    use_hat = kwargs.pop("use_hat", False)
    restarts = kwargs.pop("restarts", 8)
    max_evals = kwargs.pop("max_evals", 600)
    seed = kwargs.pop("seed", 0)
    if not (p >= 1 and q >= 1):
        raise ValueError("p and q must be >= 1")

    if isinstance(target, Generator):
        space = target.require_primitive()
        channel = semigroup(target.hat if use_hat else target, t)
    else:
        if space is None:
            raise ValueError("a bare superoperator needs its space")
        channel = hat_channel(target, space) if use_hat else target
    d = space.dim

    def negative_ratio(x):
        h = hermitian_from_params(x, d)
        f = matrix_function(h, lambda w: np.exp(w - w.max()),
                            eig_floor=None)
        image = channel(f)
        return -space.lp_norm(q, (image + image.conj().T) / 2) \
            / space.lp_norm(p, f)

    rng = np.random.default_rng(seed)
    starts = [np.zeros(d * d)] + [rng.normal(size=d * d)
                                  for _ in range(restarts - 1)]
    best = max(-negative_ratio(x0) for x0 in starts)
    for x0 in starts:
        result = minimize(negative_ratio, x0, method="Nelder-Mead",
                          options={"maxfev": max_evals, "adaptive": True})
        best = max(best, -float(result.fun))
    return float(best)


def two_to_two_decay(generator, t):
    """``||T_t - T_inf||_{(2,sigma) -> (2,sigma)}`` computed exactly, with
    ``T_inf(f) = tr[sigma f] 1``, against ``exp(-lambda t)``."""

    space = generator.require_primitive()
    d = space.dim
    limit = np.outer(vec(np.eye(d)), vec(space.sigma.T))
    difference = semigroup(generator, t).matrix - limit
    isometric = space.gamma_superoperator(0.5).matrix @ difference \
        @ space.gamma_superoperator(-0.5).matrix
    norm = float(scipy.linalg.norm(isometric, 2))
    w = scipy.linalg.eigvalsh(symmetrized_generator(generator))
    bound = float(np.exp(w[-2] * t))
    return {"norm": norm, "bound": bound,
            "ok": bool(norm <= bound * (1 + 1e-9) + 1e-12)}


def _lazy_spectrum(generator):
    space = generator.stationary
    m = space.gamma_superoperator(0.5) @ generator.channel \
        @ space.gamma_superoperator(-0.5)
    return scipy.linalg.eigvalsh((m.matrix + m.matrix.conj().T) / 2)


def discrete_vs_continuous(generator, n, rho0):
    """Chi-squared divergences after ``n`` steps of a lazy reversible channel
    and after time ``n`` of its lift ``L = T - id``.

    Parameters
    ----------

    generator: :class:`qmix.generators.Generator`
        Lift of the channel, from :func:`qmix.generators.lift_channel`

    n: :class:`int`

    rho0: :class:`numpy.ndarray`

    Raises
    ------

    NotReversibleError, NotLazyError
        When the channel is not reversible or has a negative eigenvalue
    TheoryViolationError
        When the discrete divergence exceeds the continuous one
    """

    space = generator.require_primitive()
    if generator.channel is None:
        raise ValueError("generator is not the lift of a channel")
    if not generator.reversible:
        raise NotReversibleError("channel is not reversible")
    smallest = float(_lazy_spectrum(generator)[0])
    if smallest < -LAZY_TOL:
        raise NotLazyError(f"channel has eigenvalue {smallest:.3e} < 0")
    if int(n) != n or n < 0:
        raise ValueError("n must be a nonnegative integer")

    rho0 = _state(rho0, "rho0")
    schroedinger = generator.channel.adjoint()
    rho = rho0
    for _ in range(int(n)):
        rho = schroedinger(rho)
    discrete = _chi2((rho + rho.conj().T) / 2, space)
    continuous = _chi2(evolve(generator, rho0, float(n)), space)
    if discrete > continuous + DC_SLACK:
        raise TheoryViolationError("discrete chain mixes slower than its "
                                   "continuous lift", lhs=discrete,
                                   rhs=continuous)
    return {"chi2_discrete": discrete, "chi2_continuous": continuous}


def chi2_gap_bound_check(generator, alpha2, lambda_, c, rho):
    """Chi-squared divergence at
    ``t = log log(1 / sigma_min) / (2 alpha_2) + c / lambda`` against
    ``exp(2 (1 - c))``. The first term is clamped at 0."""

    space = generator.require_primitive()
    loglog = np.log(np.log(1.0 / space.sigma_min)) \
        if space.sigma_min < np.exp(-1.0) else -np.inf
    t = max(loglog, 0.0) / (2.0 * alpha2) + c / lambda_
    chi2 = _chi2(evolve(generator, rho, t), space)
    bound = float(np.exp(2.0 * (1.0 - c)))
    return {"t": float(t), "chi2": chi2, "bound": bound,
            "ok": bool(chi2 <= bound * (1 + 1e-9))}


def thermal_sigma_min_bound(hamiltonian, beta):
    """``d exp(beta ||H||)``, an upper bound on ``1 / sigma_min`` for the
    Gibbs state of H."""
    h = hermitian(hamiltonian, "hamiltonian")
    norm = float(np.max(np.abs(scipy.linalg.eigvalsh(h))))
    return h.shape[0] * float(np.exp(beta * norm))


def unital_entropy_hamiltonian_invariance(generator, h_extra, f):
    """``E_1(f)`` before and after adding ``h_extra`` to the Hamiltonian of a
    unital generator."""

    if not generator.unital:
        raise ValueError("the invariance holds for unital generators")
    if generator.hamiltonian is None:
        raise ValueError("generator has no Lindblad realization")
    shifted = build_lindblad(generator.hamiltonian
                             + hermitian(h_extra, "h_extra"),
                             generator.lindblad_ops)
    return {"before": dirichlet_p(generator, 1, f),
            "after": dirichlet_p(shifted, 1, f)}


def crossing_time(curve, column, epsilon):
    """First grid time at which ``column`` of the curve is below epsilon."""
    values = curve.column(column)
    if values is None:
        return None
    below = np.nonzero(np.asarray(values) < epsilon)[0]
    return float(curve.times[below[0]]) if below.size else None


def depolarizing_curve(d, gamma, t_grid, **kwargs):
    """Exact :class:`qmix.models.mixing_curve.MixingCurve` of the
    depolarizing semigroup, for any dimension.

    ``rho_t = e^{-gamma t} rho + (1 - e^{-gamma t}) 1/d``, so every pure
    input gives the same distances and pure inputs are the worst case. No
    superoperator is built.

    Parameters
    ----------

    d: :class:`int`

    gamma: :class:`float`

    t_grid: [:class:`float`]

    alpha1: :class:`float`
        Defaults to :func:`qmix.ls_estimator.depolarizing_alpha1`

    alpha2: :class:`float`
        Defaults to :func:`qmix.ls_estimator.depolarizing_alpha2`; the
        generator is strongly regular
    """

    alpha1 = kwargs.pop("alpha1", None)
    alpha2 = kwargs.pop("alpha2", None)
    if alpha1 is None:
        alpha1 = depolarizing_alpha1(d, gamma)
    if alpha2 is None:
        alpha2 = depolarizing_alpha2(d, gamma)

    times = np.asarray(t_grid, dtype=float)
    decay = np.exp(-gamma * times)
    rest = (1.0 - decay) / d
    top = decay + rest
    rel_ent = np.log(d) + xlogx(top) + (d - 1) * xlogx(rest)
    prefactor = np.sqrt(2.0 * np.log(d))
    return MixingCurve(times=times,
                       trace_dist=2.0 * (1.0 - 1.0 / d) * decay,
                       chi2=(d - 1.0) * decay ** 2,
                       rel_ent=np.maximum(rel_ent, 0.0),
                       chi2_bound=np.sqrt(d) * decay,
                       ls_bound_a1=prefactor * np.exp(-alpha1 * times),
                       ls_bound_a2=prefactor * np.exp(-alpha2 * times),
                       sigma_min=1.0 / d, samples=1)


def depolarizing_mixing_time(d, gamma, epsilon):
    """``log(2 (1 - 1/d) / epsilon) / gamma``, 0 once epsilon reaches the
    initial worst distance."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    start = 2.0 * (1.0 - 1.0 / d)
    if epsilon >= start:
        return 0.0
    return float(np.log(start / epsilon) / gamma)
