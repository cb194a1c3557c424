# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

from .abc.model_abc import Model


__all__ = ("GapReport",)


class GapReport(Model):
    """Spectral gap of a primitive generator.

    Attributes
    ----------

    lambda_: :class:`float`
        The gap, serialized as ``lambda``

    witness: :class:`numpy.ndarray`
        Hermitian g attaining ``E_2(g) / Var(g) = lambda``

    method: :class:`str`
        ``eigen_symmetrization`` or ``variational_refine`` when a random
        witness undercut the spectral value

    residual: :class:`float`
        Eigenpair residual of the symmetrized, similarity transformed
        superoperator

    witnesses: :class:`int`
        Number of random variational witnesses checked

    min_witness_ratio: :class:`float`
        Smallest ratio among the random witnesses
    """

    __slots__ = ("lambda_", "witness", "method", "residual", "witnesses",
                 "min_witness_ratio")

    def __init__(self, **kwargs):
        self.lambda_ = kwargs.pop("lambda_", None)
        self.witness = kwargs.pop("witness", None)
        self.method = kwargs.pop("method", "eigen_symmetrization")
        self.residual = kwargs.pop("residual", None)
        self.witnesses = kwargs.pop("witnesses", 0)
        self.min_witness_ratio = kwargs.pop("min_witness_ratio", None)

    def to_dict(self):
        attributes = super().to_dict()
        if "lambda_" in attributes:
            attributes["lambda"] = attributes.pop("lambda_")
        return attributes
