# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

from .abc.model_abc import Model, to_jsonable


__all__ = ("AnalysisReport", "missing")


def missing(reason):
    """Placeholder for a field whose computation was skipped or failed."""
    return {"value": None, "reason": reason}


class AnalysisReport(Model):
    """Everything ``QMix.analyze`` computes for one generator.

    Fields whose computation was skipped or failed hold
    ``{"value": None, "reason": ...}``.

    Attributes
    ----------

    generator: :class:`dict`
        Family, dimension and flags

    sigma_min: :class:`float`
        Smallest eigenvalue of the stationary state

    gap: :class:`qmix.models.gap_report.GapReport`

    ls: :class:`dict`
        ``alpha1`` (from ``E^_1``) and ``alpha2``
        :class:`qmix.models.ls_report.LSReport` objects, plus ``alpha1_L``
        (from ``E_1`` of L) for non reversible generators

    regularity: :class:`dict`
        Profile summary, direct margins and the combined verdict

    verdicts: :class:`qmix.models.ls_report.OrderVerdict`

    provenance: :class:`dict`
        ``seed``, ``version`` and ``wall_time``
    """

    __slots__ = ("generator", "sigma_min", "gap", "ls", "regularity",
                 "verdicts", "provenance")

    keep_none = True

    def __init__(self, **kwargs):
        self.generator = kwargs.pop("generator", {})
        self.sigma_min = kwargs.pop("sigma_min", None)
        self.gap = kwargs.pop("gap", None)
        self.ls = kwargs.pop("ls", {})
        self.regularity = kwargs.pop("regularity", None)
        self.verdicts = kwargs.pop("verdicts", None)
        self.provenance = kwargs.pop("provenance", {})

    @property
    def violated(self):
        return bool(getattr(self.verdicts, "violated", False))

    def payload(self):
        """The report without provenance, identical across runs with the
        same spec and seed."""
        data = self.to_dict()
        data.pop("provenance")
        return data

    def to_dict(self):
        return {name: to_jsonable(getattr(self, name))
                for name in self.__slots__}
