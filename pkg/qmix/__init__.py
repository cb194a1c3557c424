# -*- coding: utf-8 -*-

"""
Spectral gap, Log-Sobolev and mixing analysis of quantum Markov semigroups

:copyright: (c) 2026 The qmix authors
:license: MIT, see LICENSE for more details

"""

__title__ = 'qmix'
__author__ = 'The qmix authors'
__license__ = 'MIT'
__copyright__ = 'Copyright 2026 The qmix authors'
__version__ = '0.1.0'


from collections import namedtuple

from .qmix import QMix


VersionInfo = namedtuple('VersionInfo',
                         'major minor micro releaselevel serial')

version_info = VersionInfo(major=0, minor=1, micro=0, releaselevel="alpha",
                           serial=0)
