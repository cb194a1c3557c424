# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.

Log-Sobolev constants. ``estimate_alpha`` minimizes ``E_p(f) / Ent_p(f)``
over positive definite ``f = exp(h)``; the result is an upper bound on
alpha_p, certified only where a closed form exists.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.linalg
from scipy.optimize import minimize, minimize_scalar

from .dirichlet_gap import dirichlet_p, spectral_gap, symmetrized_generator
from .errors import QMixError
from .generators import semigroup
from .models.ls_report import LSReport, OrderVerdict
from .operator_core import (devectorize, haar_unitary, matrix_function,
                            random_hermitian)


__all__ = ("estimate_alpha", "depolarizing_alpha1", "depolarizing_alpha2",
           "unital_alpha2_lower", "expander_alpha2_upper",
           "partial_order_verdict",
           "hypercontractivity_check", "general_hypercontractivity_check",
           "hermitian_from_params", "params_from_hermitian")

logger = logging.getLogger(__name__)

DEFAULT_RESTARTS = 24
DEFAULT_MAX_EVALS = 2000
ENT_FLOOR = 1e-10
ORDER_SLACK = 1e-4
HYPERCONTRACTIVITY_SLACK = 1e-7
NEAR_IDENTITY_SCALES = (0.02, 0.1, 0.5)
SPIKE_SCALES = (-3.0, -1.5, -0.5, 0.5, 1.0, 1.5, 2.0, 3.0)
LOW_MODES = 3


def hermitian_from_params(x, dim):
    """Real parameter vector of length d^2 to a Hermitian matrix: the
    diagonal, then real and imaginary parts of the strict upper triangle."""
    h = np.diag(np.asarray(x[:dim], dtype=complex))
    iu = np.triu_indices(dim, 1)
    n = len(iu[0])
    upper = x[dim:dim + n] + 1j * x[dim + n:dim + 2 * n]
    h[iu] = upper
    h[(iu[1], iu[0])] = upper.conj()
    return h


def params_from_hermitian(h, dim):
    iu = np.triu_indices(dim, 1)
    return np.concatenate([np.diag(h).real, h[iu].real, h[iu].imag])


class _Ratio():
    """``E_p(f) / Ent_p(f)`` with ``f = exp(h)`` normalized to unit L_p
    norm; non admissible points evaluate to ``inf``."""

    __slots__ = ("target", "space", "p", "dim", "evaluations")

    def __init__(self, target, space, p):
        self.target = target
        self.space = space
        self.p = p
        self.dim = space.dim
        self.evaluations = 0

    def positive(self, h):
        f = matrix_function(h, lambda w: np.exp(w - w.max()),
                            eig_floor=None)
        return f / self.space.lp_norm(self.p, f)

    def of_matrix(self, h):
        self.evaluations += 1
        try:
            f = self.positive(h)
            ent = self.space.ent_p(self.p, f)
            if not ent > ENT_FLOOR:
                return float("inf")
            return dirichlet_p(self.target, self.p, f) / ent
        except (QMixError, FloatingPointError, ValueError,
                np.linalg.LinAlgError):
            return float("inf")

    def __call__(self, x):
        return self.of_matrix(hermitian_from_params(x, self.dim))


def _starts(generator, space, rng, restarts):
    """Candidate starting points h: low modes of the symmetrization scaled
    close to the identity, spiked projectors in the eigenbasis of sigma
    and in a random basis, and Gaussian draws."""

    d = space.dim
    candidates = []

    m = symmetrized_generator(generator)
    w, v = scipy.linalg.eigh(m)
    half_inv = space.gamma_superoperator(-0.5)
    for k in range(2, min(2 + LOW_MODES, d * d + 1)):
        mode = devectorize(half_inv.matrix @ v[:, -k], d)
        for part in ((mode + mode.conj().T) / 2,
                     (mode - mode.conj().T) / 2j):
            norm = space.lp_norm(2, part)
            if norm < 1e-8:
                continue
            for eps in NEAR_IDENTITY_SCALES:
                candidates.append(("mode", eps * part / norm))
                candidates.append(("mode", -eps * part / norm))

    bases = [space.sigma_eig[1], haar_unitary(d, rng)]
    for basis in bases:
        for k in range(d):
            projector = np.outer(basis[:, k], basis[:, k].conj())
            for scale in SPIKE_SCALES:
                candidates.append(("spike", scale * projector))

    for _ in range(restarts):
        candidates.append(("random", random_hermitian(d, rng)))
    return candidates


def _pick(scored, restarts):
    """Best ``restarts`` candidates by screened ratio, keeping at least a
    quarter of the slots for random draws."""
    finite = [item for item in scored if np.isfinite(item[0])]
    finite.sort(key=lambda item: item[0])
    reserved = max(1, restarts // 4)
    randoms = [item for item in finite if item[1] == "random"][:reserved]
    chosen = list(randoms)
    for item in finite:
        if len(chosen) >= restarts:
            break
        if not any(item is c for c in chosen):
            chosen.append(item)
    chosen.sort(key=lambda item: item[0])
    return chosen


def _refine(objective, x0, max_evals):
    first = minimize(objective, x0, method="Nelder-Mead",
                     options={"maxfev": max_evals, "xatol": 1e-10,
                              "fatol": 1e-13, "adaptive": True})
    second = minimize(objective, first.x, method="Powell",
                      options={"maxfev": max_evals, "xtol": 1e-8,
                               "ftol": 1e-13})
    best = second if second.fun <= first.fun else first
    settled = bool(second.success) or \
        abs(first.fun - second.fun) <= 1e-8 * max(1.0, abs(second.fun))
    return float(best.fun), best.x, settled


def _two_block_ratio(x, k, d):
    """``D(sigma||rho) / D(rho||sigma)`` for sigma = 1/d and rho with k
    eigenvalues ``x/k`` and ``d - k`` eigenvalues ``(1 - x)/(d - k)``."""
    a, b = x / k, (1.0 - x) / (d - k)
    forward = x * np.log(a * d) + (1.0 - x) * np.log(b * d)
    backward = -(k * np.log(a * d) + (d - k) * np.log(b * d)) / d
    return backward / forward


def depolarizing_alpha1(d, gamma):
    """Upper bound on alpha_1 of the depolarizing generator.

    For sigma = 1/d the entropy production is
    ``gamma (D(rho||sigma) + D(sigma||rho))``, so
    ``alpha_1 = gamma (1 + inf D(sigma||rho) / D(rho||sigma)) / 2``. The
    infimum is searched over spectra with two distinct eigenvalues, which
    involves no matrices and works for any d; above d = 128 only a
    geometric set of block sizes is tried.
    """

    if int(d) != d or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d}")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    d = int(d)
    best = 1.0
    sizes = range(1, d) if d <= 128 else \
        np.unique(np.geomspace(1, d - 1, 128).astype(int))
    for k in sizes:
        split = k / d
        for lo, hi in ((1e-9, split - 1e-4), (split + 1e-4, 1.0 - 1e-9)):
            if hi <= lo:
                continue
            result = minimize_scalar(_two_block_ratio, bounds=(lo, hi),
                                     args=(k, d), method="bounded",
                                     options={"xatol": 1e-10})
            if np.isfinite(result.fun):
                best = min(best, float(result.fun))
    return 0.5 * gamma * (1.0 + best)


def depolarizing_alpha2(d, gamma):
    """``2 gamma (1 - 2/d) / log(d - 1)``, with the limit value ``gamma`` at
    ``d = 2``."""
    if int(d) != d or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d}")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    if d == 2:
        return float(gamma)
    return 2.0 * gamma * (1.0 - 2.0 / d) / np.log(d - 1.0)


def unital_alpha2_lower(generator, lambda_):
    """Lower bound ``2 (1 - 2/d) lambda / log(d - 1)`` on alpha_2 of a
    primitive unital generator."""
    generator.require_primitive()
    if not generator.unital:
        raise ValueError("the lower bound requires a unital generator")
    return depolarizing_alpha2(generator.dim, lambda_)


def expander_alpha2_upper(D, d):
    """``log D (4 + log log d) / (2 log(3d/4))`` for D-regular reversible
    unital channels."""
    if d <= 1 or 3.0 * d / 4.0 <= 1.0:
        raise ValueError(f"d must be >= 2, got {d}")
    if D < 2:
        raise ValueError(f"D must be >= 2, got {D}")
    return np.log(D) * (4.0 + np.log(np.log(d))) / (2.0 * np.log(3.0 * d
                                                                  / 4.0))


def _analytic_bounds(generator, p, lambda_):
    bounds = {"closed_form": None, "unital_lower": None,
              "expander_upper": None, "gap_upper": lambda_}
    if p != 2:
        return bounds
    if generator.family_tag == "depolarizing":
        bounds["closed_form"] = depolarizing_alpha2(generator.dim, lambda_)
    if generator.unital:
        bounds["unital_lower"] = unital_alpha2_lower(generator, lambda_)
    if generator.kraus_rank is not None and generator.kraus_rank >= 2 \
            and generator.unital and generator.reversible:
        bounds["expander_upper"] = expander_alpha2_upper(generator.kraus_rank,
                                                         generator.dim)
    return bounds


def estimate_alpha(generator, p=2, use_hat=None, **kwargs):
    """Upper bound on the Log-Sobolev constant alpha_p, ``p`` in {1, 2}.

    Parameters
    ----------

    generator: :class:`qmix.generators.Generator`
        Primitive generator

    p: :class:`int`
        1 or 2

    use_hat: :class:`bool`
        Use ``E_p`` of ``L^``. Defaults to True for ``p = 1``; irrelevant
        for ``p = 2`` where both forms coincide.

    restarts: :class:`int`
        Number of refined starts, 24 by default

    max_evals: :class:`int`
        Evaluations per optimizer stage and start, 2000 by default

    seed: :class:`int`
        Seed of the random starts

    jobs: :class:`int`
        Worker threads for the refinement stage

    gap: :class:`qmix.models.gap_report.GapReport`
        Reused when already computed

    Returns
    -------

    :class:`qmix.models.ls_report.LSReport`
    """

    restarts = kwargs.pop("restarts", DEFAULT_RESTARTS)
    max_evals = kwargs.pop("max_evals", DEFAULT_MAX_EVALS)
    seed = kwargs.pop("seed", 0)
    jobs = kwargs.pop("jobs", 1)
    gap = kwargs.pop("gap", None)
    if p not in (1, 2):
        raise ValueError("only p = 1 and p = 2 are estimated")

    space = generator.require_primitive()
    use_hat = (p == 1) if use_hat is None else bool(use_hat)
    target = generator.hat if use_hat and p == 1 else generator
    if gap is None:
        gap = spectral_gap(generator, seed=seed)

    rng = np.random.default_rng(seed)
    screen = _Ratio(target, space, p)
    scored = [(screen.of_matrix(h), kind, h)
              for kind, h in _starts(generator, space, rng, restarts)]
    chosen = _pick(scored, restarts)

    d = space.dim

    def run(item):
        objective = _Ratio(target, space, p)
        value, x, settled = _refine(objective,
                                    params_from_hermitian(item[2], d),
                                    max_evals)
        logger.debug("restart from %s start: %.10g -> %.10g", item[1],
                     item[0], value)
        return value, x, settled, objective.evaluations

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, chosen))
    else:
        results = [run(item) for item in chosen]

    evaluations = screen.evaluations + sum(r[3] for r in results)
    finite = [r for r in results if np.isfinite(r[0])]
    if not finite:
        logger.warning("no admissible witness found for alpha_%d", p)
        return LSReport(p=p, alpha_estimate=None, restarts=len(chosen),
                        evaluations=evaluations, converged=False,
                        use_hat=use_hat,
                        analytic_bounds=_analytic_bounds(generator, p,
                                                         gap.lambda_))

    value, x, settled, _ = min(finite, key=lambda r: r[0])
    witness = screen.positive(hermitian_from_params(x, d))
    alpha = dirichlet_p(target, p, witness) / space.ent_p(p, witness)
    return LSReport(p=p, alpha_estimate=float(alpha), witness=witness,
                    witness_min_eig=float(scipy.linalg.eigvalsh(witness)[0]),
                    restarts=len(chosen), evaluations=evaluations,
                    converged=settled, use_hat=use_hat,
                    analytic_bounds=_analytic_bounds(generator, p,
                                                     gap.lambda_))


def partial_order_verdict(generator, alpha1=None, alpha2=None, lambda_=None,
                          strongly_regular=False, **kwargs):
    """Checks ``alpha_2 <= 2 alpha_1`` and, for reversible or unital
    generators, ``alpha_1 <= lambda``, with relative slack ``1e-4``.

    Missing constants are estimated with ``kwargs`` passed to
    :func:`estimate_alpha`. ``strongly_regular`` adds the relation
    ``alpha_2 <= alpha_1``.

    Returns
    -------

    :class:`qmix.models.ls_report.OrderVerdict`
    """

    slack = kwargs.pop("slack", ORDER_SLACK)
    generator.require_primitive()
    gap = None
    if lambda_ is None:
        gap = spectral_gap(generator, seed=kwargs.get("seed", 0))
        lambda_ = gap.lambda_
    if alpha1 is None:
        alpha1 = estimate_alpha(generator, 1, gap=gap, **kwargs).alpha_estimate
    if alpha2 is None:
        alpha2 = estimate_alpha(generator, 2, gap=gap, **kwargs).alpha_estimate

    known = alpha1 is not None and alpha2 is not None
    ok_weak = bool(alpha2 <= 2 * alpha1 * (1 + slack)) if known else None
    ok_gap = None
    if alpha1 is not None and (generator.reversible or generator.unital):
        ok_gap = bool(alpha1 <= lambda_ * (1 + slack))
    ok_strong = None
    if strongly_regular and known:
        ok_strong = bool(alpha2 <= alpha1 * (1 + slack))

    verdict = OrderVerdict(alpha1=alpha1, alpha2=alpha2, lambda_=lambda_,
                           ok_alpha2_le_2alpha1=ok_weak,
                           ok_alpha1_le_lambda=ok_gap,
                           ok_alpha2_le_alpha1=ok_strong)
    if verdict.violated:
        logger.warning("partial order violated: %s", verdict.to_dict())
    return verdict


def general_hypercontractivity_check(generator, alpha, p0, times=(0.1, 0.5,
                                                                  1.0),
                                     probes=100, seed=0):
    """Largest ratio ``||T_t f||_{p(t)} / ||f||_{p0}`` over random positive
    probes, with ``p(t) = 1 + (p0 - 1) exp(2 alpha t)``.

    Returns
    -------

    dict
        ``worst_ratio``, ``worst_time`` and ``ok`` (ratio within
        ``1 + 1e-7``)
    """

    space = generator.require_primitive()
    rng = np.random.default_rng(seed)
    fs = [matrix_function(random_hermitian(space.dim, rng), np.exp,
                          eig_floor=None)
          for _ in range(probes)]
    worst, worst_time = 0.0, None
    for t in times:
        evolve = semigroup(generator, t)
        p_t = 1.0 + (p0 - 1.0) * np.exp(2.0 * alpha * t)
        for f in fs:
            ratio = space.lp_norm(p_t, evolve(f)) / space.lp_norm(p0, f)
            if ratio > worst:
                worst, worst_time = ratio, t
    return {"worst_ratio": float(worst), "worst_time": worst_time,
            "ok": bool(worst <= 1.0 + HYPERCONTRACTIVITY_SLACK)}


def hypercontractivity_check(generator, alpha, times=(0.1, 0.5, 1.0),
                             probes=100, seed=0):
    """``||T_t f||_{p(t)} <= ||f||_2`` with ``p(t) = 1 + exp(2 alpha t)``."""
    return general_hypercontractivity_check(generator, alpha, 2.0, times,
                                            probes, seed)
