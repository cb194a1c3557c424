# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

from .abc.model_abc import Model


__all__ = ("RegularityProfile", "DirectRegularity")


class RegularityProfile(Model):
    """Worst case of the h(s) trace functional over probes and times.

    The verdicts are sufficient evidence over the sampled probes, never a
    certificate.

    Attributes
    ----------

    s_grid: :class:`numpy.ndarray`
        Uniform grid on [0, 2]

    h_values: :class:`numpy.ndarray`
        h on ``s_grid`` for the worst probe and time

    t: :class:`float`
        Semigroup time of the worst case

    g: :class:`numpy.ndarray`
        Positive definite probe of the worst case

    verdicts: :class:`dict`
        ``convex``, ``symmetric`` (booleans over all probes) and
        ``completely_monotone_to_order``, the largest even order in
        (2, 4, 6) up to which every even order difference is nonnegative

    min_second_difference: :class:`float`
        Smallest second difference over all probes and times, divided by
        the scale ``max |h|`` of its curve

    max_asymmetry: :class:`float`
        Largest ``|h(s) - h(2 - s)| / scale``

    probes: :class:`int`

    times: [:class:`float`]

    failures: [:class:`dict`]
        Probes whose evaluation failed numerically, with the reason
    """

    __slots__ = ("s_grid", "h_values", "t", "g", "verdicts",
                 "min_second_difference", "max_asymmetry", "probes", "times",
                 "failures")

    def __init__(self, **kwargs):
        self.s_grid = kwargs.pop("s_grid", None)
        self.h_values = kwargs.pop("h_values", None)
        self.t = kwargs.pop("t", None)
        self.g = kwargs.pop("g", None)
        self.verdicts = kwargs.pop("verdicts", {})
        self.min_second_difference = kwargs.pop("min_second_difference", None)
        self.max_asymmetry = kwargs.pop("max_asymmetry", None)
        self.probes = kwargs.pop("probes", 0)
        self.times = kwargs.pop("times", [])
        self.failures = kwargs.pop("failures", [])

    @property
    def weak(self):
        return bool(self.verdicts.get("convex"))

    @property
    def strong(self):
        return bool(self.verdicts.get("convex")
                    and self.verdicts.get("symmetric")
                    and self.verdicts.get("completely_monotone_to_order",
                                          0) >= 6)

    def summary(self):
        """Verdicts and scalar diagnostics without the sampled curve."""
        return {"verdicts": dict(self.verdicts),
                "min_second_difference": self.min_second_difference,
                "max_asymmetry": self.max_asymmetry,
                "worst_t": self.t, "probes": self.probes,
                "times": list(self.times), "failures": len(self.failures)}


class DirectRegularity(Model):
    """Worst margins of the defining inequalities of L_p regularity.

    Attributes
    ----------

    p_grid: [:class:`float`]

    weak: :class:`dict`
        p to the smallest ``E_p(f) - c_p E_2(I_{2,p}(f))`` with ``c_p = 1``
        for ``p <= 2`` and ``1 / (p - 1)`` above

    strong: :class:`dict`
        p to the smallest ``E_p(f) - (2/p) E_2(I_{2,p}(f))``

    weak_literal: :class:`dict`
        p to the smallest margin with ``c_p = p - 1`` above ``p = 2``.
        Reported only; the weak verdict uses ``weak``

    factors: :class:`dict`
        p to the ``weak``, ``strong`` and ``weak_literal`` factors used

    weak_ok: :class:`bool`

    strong_ok: :class:`bool`

    weak_literal_ok: :class:`bool`

    probes: :class:`int`

    worst_probe: :class:`numpy.ndarray`
        Probe of the smallest weak margin
    """

    __slots__ = ("p_grid", "weak", "strong", "weak_literal", "factors",
                 "weak_ok", "strong_ok", "weak_literal_ok",
                 "probes", "worst_probe")

    def __init__(self, **kwargs):
        self.p_grid = kwargs.pop("p_grid", [])
        self.weak = kwargs.pop("weak", {})
        self.strong = kwargs.pop("strong", {})
        self.weak_literal = kwargs.pop("weak_literal", {})
        self.factors = kwargs.pop("factors", {})
        self.weak_ok = kwargs.pop("weak_ok", None)
        self.strong_ok = kwargs.pop("strong_ok", None)
        self.weak_literal_ok = kwargs.pop("weak_literal_ok", None)
        self.probes = kwargs.pop("probes", 0)
        self.worst_probe = kwargs.pop("worst_probe", None)

    @property
    def min_weak(self):
        return min(self.weak.values()) if self.weak else None

    @property
    def min_strong(self):
        return min(self.strong.values()) if self.strong else None

    def summary(self):
        """Margins, factors and flags without the worst probe."""
        return {"weak": dict(self.weak), "strong": dict(self.strong),
                "weak_literal": dict(self.weak_literal),
                "factors": dict(self.factors), "weak_ok": self.weak_ok,
                "strong_ok": self.strong_ok,
                "weak_literal_ok": self.weak_literal_ok}
