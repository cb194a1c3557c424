# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

import csv

import numpy as np

from .abc.model_abc import Model


__all__ = ("MixingCurve",)

CSV_COLUMNS = ("t", "trace_dist", "chi2", "rel_ent", "chi2_bound",
               "ls_bound_a1", "ls_bound_a2")


class MixingCurve(Model):
    """Empirical distances to the stationary state against the mixing bounds.

    Attributes
    ----------

    times: :class:`numpy.ndarray`

    trace_dist: :class:`numpy.ndarray`
        Worst trace distance over the sampled initial states

    chi2: :class:`numpy.ndarray`
        Worst chi-squared divergence over the same states

    rel_ent: :class:`numpy.ndarray`
        Worst relative entropy over the same states

    chi2_bound: :class:`numpy.ndarray`
        ``sqrt(1 / sigma_min) exp(-lambda t)``, None without a gap

    ls_bound_a1: :class:`numpy.ndarray`
        ``sqrt(2 log(1 / sigma_min)) exp(-alpha_1 t)``, None without alpha_1

    ls_bound_a2: :class:`numpy.ndarray`
        The alpha_2 variant, ``exp(-alpha_2 t / 2)`` under weak and
        ``exp(-alpha_2 t)`` under strong regularity. None unless both
        alpha_2 and a regularity verdict are known.

    sigma_min: :class:`float`

    samples: :class:`int`
        Number of initial states behind the empirical columns
    """

    __slots__ = ("times", "trace_dist", "chi2", "rel_ent", "chi2_bound",
                 "ls_bound_a1", "ls_bound_a2", "sigma_min", "samples")

    def __init__(self, **kwargs):
        self.times = np.asarray(kwargs.pop("times"), dtype=float)
        self.trace_dist = np.asarray(kwargs.pop("trace_dist"), dtype=float)
        self.chi2 = np.asarray(kwargs.pop("chi2"), dtype=float)
        self.rel_ent = np.asarray(kwargs.pop("rel_ent"), dtype=float)
        self.chi2_bound = kwargs.pop("chi2_bound", None)
        self.ls_bound_a1 = kwargs.pop("ls_bound_a1", None)
        self.ls_bound_a2 = kwargs.pop("ls_bound_a2", None)
        self.sigma_min = kwargs.pop("sigma_min", None)
        self.samples = kwargs.pop("samples", 0)

    def column(self, name):
        return getattr(self, "times" if name == "t" else name)

    def bound_columns(self):
        return [name for name in ("chi2_bound", "ls_bound_a1", "ls_bound_a2")
                if getattr(self, name) is not None]

    def domination_margin(self):
        """Smallest ``bound - trace_dist`` over the grid and all bound
        columns, None when no bound is present."""
        columns = self.bound_columns()
        if not columns:
            return None
        bound = np.min([getattr(self, name) for name in columns], axis=0)
        return float(np.min(bound - self.trace_dist))

    def to_csv(self, handle):
        """Writes the curve to an open text handle. Omitted columns are left
        empty."""
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for i in range(len(self.times)):
            row = []
            for name in CSV_COLUMNS:
                values = self.column(name)
                row.append("" if values is None else repr(float(values[i])))
            writer.writerow(row)

    @classmethod
    def from_csv(cls, handle):
        reader = csv.DictReader(handle)
        columns = {name: [] for name in CSV_COLUMNS}
        for row in reader:
            for name in CSV_COLUMNS:
                columns[name].append(float(row[name]) if row[name] else None)
        data = {}
        for name, values in columns.items():
            if values and values[0] is None:
                data[name] = None
            else:
                data[name] = np.array(values, dtype=float)
        data["times"] = data.pop("t")
        return cls(**data)
