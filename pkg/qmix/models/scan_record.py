# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

from .abc.model_abc import Model


__all__ = ("ScanRecord",)


class ScanRecord(Model):
    """One line of a regularity scan.

    Attributes
    ----------

    index: :class:`int`
        Position in the scan, used to resume

    seed: :class:`int`
        Seed the instance was drawn from

    family: :class:`str`
        ``generic``, ``reversible`` or ``nonreversible``

    construction: :class:`str`
        Builder used for the instance

    dim: :class:`int`

    flags: :class:`dict`

    min_weak_margin: :class:`float`

    min_strong_margin: :class:`float`

    weak_violation: :class:`bool`

    strong_violation: :class:`bool`

    generator: :class:`dict`
        Generator JSON rebuilding the instance, present on violations

    reason: :class:`str`
        Why the instance was not evaluated
    """

    __slots__ = ("index", "seed", "family", "construction", "dim", "flags",
                 "min_weak_margin", "min_strong_margin", "weak_violation",
                 "strong_violation", "generator", "reason")

    def __init__(self, **kwargs):
        self.index = kwargs.pop("index")
        self.seed = kwargs.pop("seed")
        self.family = kwargs.pop("family")
        self.construction = kwargs.pop("construction", None)
        self.dim = kwargs.pop("dim")
        self.flags = kwargs.pop("flags", None)
        self.min_weak_margin = kwargs.pop("min_weak_margin", None)
        self.min_strong_margin = kwargs.pop("min_strong_margin", None)
        self.weak_violation = kwargs.pop("weak_violation", False)
        self.strong_violation = kwargs.pop("strong_violation", False)
        self.generator = kwargs.pop("generator", None)
        self.reason = kwargs.pop("reason", None)

    @classmethod
    def from_dict(cls, data):
        return cls(**{name: data.get(name) for name in cls.__slots__
                      if name in data})
