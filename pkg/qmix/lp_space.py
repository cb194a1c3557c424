# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.

The sigma-weighted non-commutative L_p space. Everything here is evaluated
through the cached eigendecomposition of the reference state, so that
``Gamma_sigma^p(f) = sigma^{p/2} f sigma^{p/2}`` costs two matrix products.
"""

import logging

import numpy as np
import scipy.linalg

from .errors import NotPositiveError, RankDeficientError
from .operator_core import (check_dims, eig_hermitian, hermitian,
                            matrix_function, vectorize)


__all__ = ("WeightedSpace", "free_energy_relative_entropy", "xlogx")

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
TRACE_TOL = 1e-12
POSITIVITY_TOL = 1e-12
P_ONE_TOL = 1e-6
CLAMP_TOL = 1e-10


def xlogx(w):
    """``w log w`` with the ``0 log 0 = 0`` convention."""
    w = np.asarray(w, dtype=np.float64)
    out = np.zeros_like(w)
    mask = w > 0
    out[mask] = w[mask] * np.log(w[mask])
    return out


def _check_p(p, name="p"):
    if not p >= 1:
        raise ValueError(f"{name} must be >= 1, got {p}")


class WeightedSpace():
    """A full rank density matrix together with its eigendecomposition.

    Attributes
    ----------

    sigma: :class:`numpy.ndarray`
        The reference state, Hermitian with unit trace

    sigma_eig: (eigenvalues, eigenvectors)
        Cached ascending eigendecomposition of sigma

    sigma_min: :class:`float`
        Smallest eigenvalue of sigma

    dim: :class:`int`
        Hilbert space dimension
    """

    __slots__ = ("sigma", "sigma_eig", "sigma_min", "dim", "log_sigma")

    def __init__(self, sigma, rank_tol=RANK_TOL):
        sigma = hermitian(sigma, "sigma")
        trace = np.trace(sigma).real
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"sigma must have unit trace, got {trace}")
        w, v = eig_hermitian(sigma)
        if w[0] <= rank_tol:
            raise RankDeficientError(f"sigma is not full rank: smallest "
                                     f"eigenvalue {w[0]:.3e}")
        sigma.setflags(write=False)
        self.sigma = sigma
        self.sigma_eig = (w, v)
        self.sigma_min = float(w[0])
        self.dim = sigma.shape[0]
        self.log_sigma = matrix_function(sigma, np.log, eig=(w, v))

    @classmethod
    def maximally_mixed(cls, dim):
        return cls(np.eye(dim) / dim)

    @classmethod
    def gibbs(cls, hamiltonian, beta):
        """Thermal state ``exp(-beta H) / Z``."""
        w, v = eig_hermitian(hamiltonian)
        weights = np.exp(-beta * (w - w[0]))
        weights /= weights.sum()
        rho = (v * weights) @ v.conj().T
        return cls((rho + rho.conj().T) / 2)

    def __repr__(self):
        return f"<WeightedSpace dim={self.dim} sigma_min={self.sigma_min:.3e}>"

    def sigma_power(self, s):
        w, v = self.sigma_eig
        out = (v * w ** s) @ v.conj().T
        return (out + out.conj().T) / 2

    def _check(self, *mats):
        check_dims(self.sigma, *[np.asarray(m) for m in mats])

    def gamma_power(self, p, f):
        """``Gamma_sigma^p(f) = sigma^{p/2} f sigma^{p/2}``, exactly
        Hermitian."""
        self._check(f)
        if p == 0:
            return (f + f.conj().T) / 2
        s = self.sigma_power(p / 2)
        out = s @ f @ s
        return (out + out.conj().T) / 2

    def gamma_superoperator(self, p):
        """``Gamma_sigma^p`` as a superoperator."""
        s = self.sigma_power(p / 2)
        return vectorize([(s, s)])

    def lp_norm(self, p, f):
        """``||f||_{p,sigma} = (tr|Gamma^{1/p}(f)|^p)^{1/p}``.

        Parameters
        ----------

        p: :class:`float`
            Order, ``p >= 1``. ``numpy.inf`` gives the operator norm.

        f: :class:`numpy.ndarray`
            Hermitian observable
        """

        _check_p(p)
        if np.isinf(p):
            return float(np.max(np.abs(scipy.linalg.eigvalsh(
                (f + f.conj().T) / 2))))
        y = self.gamma_power(1.0 / p, f)
        w = np.abs(scipy.linalg.eigvalsh(y))
        return float(np.sum(w ** p) ** (1.0 / p))

    def norm_power(self, p, f):
        """``||f||_{p,sigma}^p`` without the final root."""
        _check_p(p)
        y = self.gamma_power(1.0 / p, f)
        return float(np.sum(np.abs(scipy.linalg.eigvalsh(y)) ** p))

    def inner(self, f, g):
        """``<f, g>_sigma = tr[sigma^{1/2} f sigma^{1/2} g]``."""
        self._check(f, g)
        s = self.sigma_power(0.5)
        return float(np.trace(s @ f @ s @ g).real)

    def variance(self, g):
        """``Var_sigma(g) = tr[Gamma(g) g] - tr[Gamma(g)]^2``, clamped at 0."""
        y = self.gamma_power(1.0, g)
        value = float(np.trace(y @ g).real - np.trace(y).real ** 2)
        return max(value, 0.0)

    def _abs_power(self, y, r):
        return matrix_function(y, lambda w: np.abs(w) ** r, eig_floor=None)

    def power_operator(self, p, q, f):
        """``I_{p,q}(f) = Gamma^{-1/p}[|Gamma^{1/q}(f)|^{q/p}]``."""
        _check_p(p)
        _check_p(q, "q")
        y = self.gamma_power(1.0 / q, f)
        return self.gamma_power(-1.0 / p, self._abs_power(y, q / p))

    def positivity_gate(self, f, name="f"):
        """Rejects observables outside the positive definite cone.

        Returns the eigendecomposition of ``f`` for reuse.
        """

        self._check(f)
        w, v = eig_hermitian(f)
        if w[-1] <= 0 or w[0] <= POSITIVITY_TOL * w[-1]:
            raise NotPositiveError(f"{name}: requires a positive definite "
                                   f"operator, smallest eigenvalue "
                                   f"{w[0]:.3e}")
        return w, v

    def op_relative_entropy(self, p, f):
        """Operator valued relative entropy

        ``S_p(f) = Gamma^{-1/p}[Y log Y] - {f, log sigma} / (2p)`` with
        ``Y = Gamma^{1/p}(f)``.
        """

        _check_p(p)
        self.positivity_gate(f)
        y = self.gamma_power(1.0 / p, f)
        first = self.gamma_power(-1.0 / p, matrix_function(y, xlogx))
        anti = f @ self.log_sigma + self.log_sigma @ f
        out = first - anti / (2.0 * p)
        return (out + out.conj().T) / 2

    def entropy_pairing(self, p, f):
        """``<I_{q,p}(f), S_p(f)>_sigma`` with ``1/q = 1 - 1/p``.

        At ``p = 1`` the power operator degenerates to the identity operator
        and the pairing stays finite.
        """

        _check_p(p)
        r = 1.0 - 1.0 / p
        y = self.gamma_power(1.0 / p, f)
        i_qp = self.gamma_power(-r, self._abs_power(y, p * r))
        return self.inner(i_qp, self.op_relative_entropy(p, f))

    def ent1(self, f):
        """``Ent_1(f) = tr[Y(log Y - log sigma)] - tr Y log tr Y`` with
        ``Y = Gamma(f)``."""
        self.positivity_gate(f)
        y = self.gamma_power(1.0, f)
        w, v = eig_hermitian(y)
        log_y = matrix_function(y, np.log, eig=(w, v),
                                eig_floor=POSITIVITY_TOL * w[-1])
        tr = float(np.sum(w))
        value = float(np.trace(y @ (log_y - self.log_sigma)).real)
        return self._clamp(value - tr * np.log(tr), "Ent_1")

    def ent2(self, f):
        """``Ent_2(f) = tr[Y^2 log Y] - tr[Y^2 log sigma]/2
        - ||f||^2 log ||f||^2 / 2`` with ``Y = Gamma^{1/2}(f)``."""
        self.positivity_gate(f)
        y = self.gamma_power(0.5, f)
        w, v = eig_hermitian(y)
        y2 = y @ y
        norm2 = float(np.sum(w ** 2))
        value = (float(np.sum(w ** 2 * np.log(w)))
                 - 0.5 * float(np.trace(y2 @ self.log_sigma).real)
                 - 0.5 * norm2 * np.log(norm2))
        return self._clamp(value, "Ent_2")

    def ent_p(self, p, f):
        """L_p relative entropy of a positive definite observable.

        ``p`` within ``1e-6`` of 1 and ``p == 2`` use the closed forms.
        """

        _check_p(p)
        if abs(p - 1.0) < P_ONE_TOL:
            return self.ent1(f)
        if p == 2:
            return self.ent2(f)
        norm = self.lp_norm(p, f)
        value = self.entropy_pairing(p, f) - norm ** p * np.log(norm)
        return self._clamp(value, f"Ent_{p}")

    @staticmethod
    def _clamp(value, label):
        if value < -CLAMP_TOL * (1.0 + abs(value)):
            logger.warning("%s evaluated to %.3e, clamping at zero",
                           label, value)
        return max(float(value), 0.0)

    def norm_derivative_check(self, f, p_path, t, step=1e-5, p_dot=None):
        """Compares a central difference of ``||f||_{p(t)}^{p(t)}`` with
        ``p'(t) <I_{q,p}(f), S_p(f)>_sigma``.

        Parameters
        ----------

        f: :class:`numpy.ndarray`
            Positive definite observable

        p_path: callable
            Differentiable path ``t -> p(t) >= 1``

        t: :class:`float`
            Evaluation time

        p_dot: :class:`float`
            Derivative of the path at ``t``, estimated by central
            differences when omitted

        Returns
        -------

        (lhs, rhs)
        """

        self.positivity_gate(f)
        lhs = (self.norm_power(p_path(t + step), f)
               - self.norm_power(p_path(t - step), f)) / (2 * step)
        if p_dot is None:
            p_dot = (p_path(t + step) - p_path(t - step)) / (2 * step)
        if p_dot == 0:
            return float(lhs), 0.0
        return float(lhs), float(p_dot * self.entropy_pairing(p_path(t), f))

    def relative_density(self, rho):
        """``Gamma^{-1}(rho)``."""
        return self.gamma_power(-1.0, rho)

    def relative_entropy(self, rho):
        """``D(rho || sigma)`` with the ``0 log 0 = 0`` convention."""
        self._check(rho)
        w, v = eig_hermitian(rho)
        w = np.clip(w, 0.0, None)
        cross = float(np.trace(rho @ self.log_sigma).real)
        return max(float(np.sum(xlogx(w))) - cross, 0.0)


def free_energy_relative_entropy(hamiltonian, beta, rho):
    """``D(rho || sigma_beta)`` through the free energy,
    ``beta (tr[rho H] - T S(rho) - F)`` with ``F = -T log Z``.

    Parameters
    ----------

    hamiltonian: :class:`numpy.ndarray`
        System Hamiltonian

    beta: :class:`float`
        Inverse temperature, strictly positive

    rho: :class:`numpy.ndarray`
        Density matrix
    """

    if not beta > 0:
        raise ValueError("beta must be positive")
    energies = scipy.linalg.eigvalsh(hamiltonian)
    shifted = -beta * (energies - energies[0])
    log_z = -beta * energies[0] + np.log(np.sum(np.exp(shifted)))
    temperature = 1.0 / beta
    free_energy = -temperature * log_z
    entropy = -float(np.sum(xlogx(np.clip(scipy.linalg.eigvalsh(rho), 0,
                                          None))))
    energy = float(np.trace(rho @ hamiltonian).real)
    return beta * (energy - temperature * entropy - free_energy)
