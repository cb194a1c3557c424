# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

from .abc.model_abc import Model


__all__ = ("LSReport", "OrderVerdict")


class LSReport(Model):
    """Numerical Log-Sobolev estimate.

    ``alpha_estimate`` is the smallest ratio ``E_p(f) / Ent_p(f)`` found, an
    UPPER bound on alpha_p. It is only certified where a closed form exists.

    Attributes
    ----------

    p: :class:`float`
        1 or 2

    alpha_estimate: :class:`float`
        Best ratio found

    witness: :class:`numpy.ndarray`
        Positive definite f attaining ``alpha_estimate``

    witness_min_eig: :class:`float`
        Smallest eigenvalue of the witness, normalized to unit L_p norm,
        kept to audit minimizers drifting towards the boundary of the cone

    restarts: :class:`int`
        Number of refined starts

    evaluations: :class:`int`
        Total objective evaluations

    converged: :class:`bool`
        False when the best run stopped on its budget while still moving, or
        when no finite ratio was found

    use_hat: :class:`bool`
        Whether ``E_p`` of ``L^`` was used instead of ``E_p`` of ``L``

    analytic_bounds: :class:`dict`
        ``closed_form``, ``unital_lower``, ``expander_upper`` (each possibly
        None) and ``gap_upper``
    """

    __slots__ = ("p", "alpha_estimate", "witness", "witness_min_eig",
                 "restarts", "evaluations", "converged", "use_hat",
                 "analytic_bounds")

    def __init__(self, **kwargs):
        self.p = kwargs.pop("p", 2)
        self.alpha_estimate = kwargs.pop("alpha_estimate", None)
        self.witness = kwargs.pop("witness", None)
        self.witness_min_eig = kwargs.pop("witness_min_eig", None)
        self.restarts = kwargs.pop("restarts", 0)
        self.evaluations = kwargs.pop("evaluations", 0)
        self.converged = kwargs.pop("converged", False)
        self.use_hat = kwargs.pop("use_hat", False)
        self.analytic_bounds = kwargs.pop("analytic_bounds", {})


class OrderVerdict(Model):
    """Partial order between alpha_1, alpha_2 and the spectral gap.

    Attributes
    ----------

    alpha1: :class:`float`

    alpha2: :class:`float`

    lambda_: :class:`float`
        Spectral gap, serialized as ``lambda``

    ok_alpha2_le_2alpha1: :class:`bool`
        ``alpha_2 <= 2 alpha_1`` up to the relative slack

    ok_alpha1_le_lambda: :class:`bool`
        ``alpha_1 <= lambda``. None when the generator is neither reversible
        nor unital, since nothing is asserted then.

    ok_alpha2_le_alpha1: :class:`bool`
        ``alpha_2 <= alpha_1``, asserted only for strongly regular generators

    violated: :class:`bool`
        Any asserted relation failed
    """

    __slots__ = ("alpha1", "alpha2", "lambda_", "ok_alpha2_le_2alpha1",
                 "ok_alpha1_le_lambda", "ok_alpha2_le_alpha1", "violated")

    keep_none = True

    def __init__(self, **kwargs):
        self.alpha1 = kwargs.pop("alpha1", None)
        self.alpha2 = kwargs.pop("alpha2", None)
        self.lambda_ = kwargs.pop("lambda_", None)
        self.ok_alpha2_le_2alpha1 = kwargs.pop("ok_alpha2_le_2alpha1", None)
        self.ok_alpha1_le_lambda = kwargs.pop("ok_alpha1_le_lambda", None)
        self.ok_alpha2_le_alpha1 = kwargs.pop("ok_alpha2_le_alpha1", None)
        self.violated = any(flag is False for flag in (
            self.ok_alpha2_le_2alpha1, self.ok_alpha1_le_lambda,
            self.ok_alpha2_le_alpha1))

    def to_dict(self):
        attributes = super().to_dict()
        attributes["lambda"] = attributes.pop("lambda_")
        return attributes
