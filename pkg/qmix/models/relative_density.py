# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

import numpy as np

from .abc.model_abc import Model, to_jsonable


__all__ = ("RelativeDensity",)

TRACE_TOL = 1e-10


class RelativeDensity(Model):
    """Relative density ``Gamma_sigma^{-1}(rho)`` of a state rho.

    Attributes
    ----------

    value: :class:`numpy.ndarray`
        Positive semidefinite observable

    space: :class:`qmix.lp_space.WeightedSpace`
        Reference space of sigma
    """

    __slots__ = ("value", "space")

    def __init__(self, **kwargs):
        self.value = np.asarray(kwargs.pop("value"), dtype=complex)
        self.space = kwargs.pop("space")
        trace = float(np.trace(self.space.gamma_power(1.0, self.value)).real)
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"tr[Gamma(f)] = {trace:.12g}, a relative "
                             f"density must encode a state")

    @classmethod
    def from_state(cls, rho, space):
        return cls(value=space.relative_density(rho), space=space)

    def state(self):
        return self.space.gamma_power(1.0, self.value)

    def to_dict(self):
        return {"value": to_jsonable(self.value),
                "sigma": to_jsonable(self.space.sigma)}
