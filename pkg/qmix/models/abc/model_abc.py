# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

from abc import ABC

import numpy as np

from ...operator_core import matrix_to_json


def to_jsonable(value):
    """Converts numpy payloads and nested models into JSON friendly data."""

    if isinstance(value, Model):
        return value.to_dict()
    if isinstance(value, np.ndarray):
        if value.ndim == 2 and value.shape[0] == value.shape[1] \
                and np.iscomplexobj(value):
            return matrix_to_json(value)
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if np.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(to_jsonable(v) for v in value)
    return value


class Model(ABC):
    """Abstract class for all report models.

    All :ref:`models` extend this abstract base class

    Methods
    =======

    to_dict()
        Returns all items in __slots__ formatted as a JSON friendly dict.
        Attributes left as None are skipped unless the model sets
        ``keep_none``.
    """

    __slots__ = ()

    keep_none = False

    def __init__(self):
        pass

    def to_dict(self):
        attributes = {}
        for attribute in self.__slots__:
            value = getattr(self, attribute, None)
            if value is None and not self.keep_none:
                continue

            attributes[attribute] = to_jsonable(value)

        return attributes

    def __repr__(self):
        fields = ", ".join(f"{name}={getattr(self, name, None)!r}"
                           for name in self.__slots__
                           if not isinstance(getattr(self, name, None),
                                             np.ndarray))
        return f"{type(self).__name__}({fields})"
