# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

import logging

import numpy as np
import scipy.linalg

from .errors import NotPositiveError
from .lp_space import P_ONE_TOL, POSITIVITY_TOL
from .models.gap_report import GapReport
from .operator_core import (as_matrix, devectorize, eig_hermitian,
                            matrix_function, random_hermitian)


__all__ = ("dirichlet_p", "dirichlet_hat_p", "spectral_gap",
           "symmetrized_generator", "gap_ratio", "spectrum")

logger = logging.getLogger(__name__)

NEGATIVITY_TOL = 1e-10
WITNESS_SLACK = 1e-6
DEFAULT_WITNESSES = 200


def _observable(f):
    f = as_matrix(f, "f")
    return (f + f.conj().T) / 2


def _dirichlet_one(space, f, lf):
    space.positivity_gate(f)
    y = space.gamma_power(1.0, f)
    w, v = eig_hermitian(y)
    if w[0] <= POSITIVITY_TOL * w[-1]:
        raise NotPositiveError("Gamma(f) is numerically rank deficient")
    log_y = matrix_function(y, np.log, eig=(w, v))
    flow = space.gamma_power(1.0, lf)
    return -0.5 * float(np.trace(flow @ (log_y - space.log_sigma)).real)


def dirichlet_p(generator, p, f):
    """L_p Dirichlet form of ``generator`` at the observable ``f``.

    ``p = 2`` evaluates ``-<f, L f>``, ``p`` within ``1e-6`` of 1 evaluates
    ``-tr[Gamma(L f)(log Gamma(f) - log sigma)] / 2`` and any other ``p``
    evaluates ``-p / (2(p - 1)) <I_{q,p}(f), L f>``.

    Parameters
    ----------

    generator: :class:`qmix.generators.Generator`
        Primitive generator

    p: :class:`float`
        Order, ``p >= 1``

    f: :class:`numpy.ndarray`
        Hermitian observable, positive definite for the ``p = 1`` branch
    """

    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    space = generator.require_primitive()
    f = _observable(f)
    lf = generator.super_L(f)
    lf = (lf + lf.conj().T) / 2

    if p == 2:
        value = -space.inner(f, lf)
    elif abs(p - 1.0) < P_ONE_TOL:
        value = _dirichlet_one(space, f, lf)
    else:
        q = p / (p - 1.0)
        value = -p / (2.0 * (p - 1.0)) \
            * space.inner(space.power_operator(q, p, f), lf)

    if value < -NEGATIVITY_TOL * (1.0 + abs(value)):
        logger.warning("E_%s evaluated to %.3e < 0", p, value)
    return float(value)


def dirichlet_hat_p(generator, p, f):
    """Dirichlet form of ``L^ = Gamma^{-1} L* Gamma``."""
    return dirichlet_p(generator.hat, p, f)


def gap_ratio(generator, g):
    """``E_2(g) / Var_sigma(g)``, infinite for constant g."""
    space = generator.require_primitive()
    var = space.variance(g)
    if var <= 1e-14 * max(1.0, space.lp_norm(2, g) ** 2):
        return float("inf")
    return dirichlet_p(generator, 2, g) / var


def symmetrized_generator(generator):
    """``(L + L^) / 2`` similarity transformed by ``Gamma^{1/2}``.

    The result is a Hermitian d^2 x d^2 matrix whose spectrum is that of the
    additive symmetrization.
    """

    space = generator.require_primitive()
    half = space.gamma_superoperator(0.5)
    half_inv = space.gamma_superoperator(-0.5)
    gamma = space.gamma_superoperator(1.0)
    gamma_inv = space.gamma_superoperator(-1.0)
    sym = 0.5 * (generator.super_L
                 + gamma_inv @ generator.super_Lstar @ gamma)
    m = (half @ sym @ half_inv).matrix
    return (m + m.conj().T) / 2


def _hermitian_part(x):
    h = (x + x.conj().T) / 2
    a = (x - x.conj().T) / 2j
    return h if np.linalg.norm(h) >= np.linalg.norm(a) else a


def spectral_gap(generator, witnesses=DEFAULT_WITNESSES, seed=0):
    """Spectral gap from the symmetrization, validated variationally.

    Parameters
    ----------

    generator: :class:`qmix.generators.Generator`
        Primitive generator

    witnesses: :class:`int`
        Number of random Hermitian witnesses checked against the spectral
        value

    seed: :class:`int`
        Seed of the witness draws

    Returns
    -------

    :class:`qmix.models.gap_report.GapReport`
    """

    space = generator.require_primitive()
    d = generator.dim
    m = symmetrized_generator(generator)
    w, v = scipy.linalg.eigh(m)
    mu = float(w[-2])
    top = v[:, -2]
    residual = float(np.linalg.norm(m @ top - mu * top))

    half_inv = space.gamma_superoperator(-0.5)
    witness = _hermitian_part(devectorize(half_inv.matrix @ top, d))
    witness = witness / space.lp_norm(2, witness)
    gap = -mu

    rng = np.random.default_rng(seed)
    method = "eigen_symmetrization"
    best = float("inf")
    for _ in range(witnesses):
        g = random_hermitian(d, rng)
        ratio = gap_ratio(generator, g)
        if ratio < best:
            best = ratio
            if ratio < gap * (1.0 - WITNESS_SLACK):
                logger.warning("random witness undercuts the spectral gap: "
                               "%.12g < %.12g", ratio, gap)
                gap, witness, method = ratio, g, "variational_refine"

    return GapReport(lambda_=gap, witness=witness, method=method,
                     residual=residual, witnesses=witnesses,
                     min_witness_ratio=best)


def spectrum(generator):
    """Eigenvalues of ``super_L``, used for the real spectrum property."""
    return scipy.linalg.eigvals(generator.super_L.matrix)
