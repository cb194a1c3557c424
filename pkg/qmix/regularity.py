# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.

L_p regularity evidence. ``regularity_profile`` samples the trace
functional

    h(s) = tr[sigma^{s/4} g^{2-s} sigma^{s/4} T_t(sigma^{-s/4} g^s sigma^{-s/4})]

on [0, 2]; convexity of h is sufficient for weak regularity, symmetry about
s = 1 together with complete monotonicity for strong regularity.
``direct_regularity_check`` evaluates the defining inequalities instead.
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .dirichlet_gap import dirichlet_p
from .errors import NotPositiveError, QMixError
from .generators import (random_cyclic_chain, random_davies, random_lindblad,
                         random_unitary, semigroup, to_dict)
from .models.regularity_profile import DirectRegularity, RegularityProfile
from .models.scan_record import ScanRecord
from .operator_core import as_matrix, matrix_function, random_hermitian


__all__ = ("h_functional", "regularity_profile", "direct_regularity_check",
           "regularity_verdict", "conjecture_scan", "SCAN_FAMILIES")

logger = logging.getLogger(__name__)

CONVEXITY_TOL = 1e-8
SYMMETRY_TOL = 1e-8
MONOTONE_TOL = 1e-11
MONOTONE_ORDERS = (2, 4, 6)
MARGIN_TOL = 1e-8
DEFAULT_P_GRID = (1.1, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 6.0)
DEFAULT_TIMES = (0.1, 0.5, 1.0)
NEAR_SINGULAR_EPS = 1e-3
SCAN_FAMILIES = ("generic", "reversible", "nonreversible")


def _probe_eig(space, g):
    g = as_matrix(g, "g")
    g = (g + g.conj().T) / 2
    try:
        return space.positivity_gate(g, "g")
    except NotPositiveError:
        raise NotPositiveError("h(s) requires a positive definite probe g")


def _h_curve(space, evolve, g_eig, s_grid):
    w, v = g_eig
    out = np.empty(len(s_grid))
    for i, s in enumerate(s_grid):
        left = space.sigma_power(s / 4.0)
        right = space.sigma_power(-s / 4.0)
        outer = left @ ((v * w ** (2.0 - s)) @ v.conj().T) @ left
        inner = right @ ((v * w ** s) @ v.conj().T) @ right
        out[i] = np.trace(outer @ evolve(inner)).real
    return out


def h_functional(generator, g, t, s):
    """Evaluates h(s) for the probe ``g`` at semigroup time ``t``.

    Parameters
    ----------

    generator: :class:`qmix.generators.Generator`
        Primitive generator

    g: :class:`numpy.ndarray`
        Positive definite probe

    t: :class:`float`
        Semigroup time, > 0

    s: :class:`float`
        Point of [0, 2]
    """

    if not t > 0:
        raise ValueError("t must be positive")
    if not 0.0 <= s <= 2.0:
        raise ValueError(f"s must lie in [0, 2], got {s}")
    space = generator.require_primitive()
    g_eig = _probe_eig(space, g)
    return float(_h_curve(space, semigroup(generator, t), g_eig, [s])[0])


def _probes(dim, count, rng):
    """Gaussian exponentials plus a few near rank deficient ``eps 1 + P``
    probes stressing the endpoints of h."""
    spiked = min(dim, count // 5)
    out = []
    for _ in range(spiked):
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        psi /= np.linalg.norm(psi)
        out.append(NEAR_SINGULAR_EPS * np.eye(dim)
                   + np.outer(psi, psi.conj()))
    while len(out) < count:
        out.append(matrix_function(random_hermitian(dim, rng), np.exp,
                                   eig_floor=None))
    return out


def _monotone_order(h, scale):
    order = 0
    for k in MONOTONE_ORDERS:
        if np.min(np.diff(h, n=k)) < -MONOTONE_TOL * 2 ** k * scale:
            break
        order = k
    return order


def regularity_profile(generator, probes=100, times=DEFAULT_TIMES,
                       grid_n=101, seed=0, jobs=1):
    """Samples h(s) over random probes and times and reports the worst case.

    Parameters
    ----------

    generator: :class:`qmix.generators.Generator`
        Primitive generator

    probes: :class:`int`
        Number of positive definite probes g

    times: [:class:`float`]
        Semigroup times

    grid_n: :class:`int`
        Points of the uniform s grid, 101 giving the step 0.02

    seed: :class:`int`

    jobs: :class:`int`
        Worker threads over probes

    Returns
    -------

    :class:`qmix.models.regularity_profile.RegularityProfile`
    """

    space = generator.require_primitive()
    if grid_n < 7:
        raise ValueError("grid_n must be at least 7")
    s_grid = np.linspace(0.0, 2.0, int(grid_n))
    propagators = [(t, semigroup(generator, t)) for t in times]
    gs = _probes(space.dim, probes, np.random.default_rng(seed))

    def run(indexed):
        index, g = indexed
        rows = []
        try:
            g_eig = _probe_eig(space, g)
            for t, evolve in propagators:
                h = _h_curve(space, evolve, g_eig, s_grid)
                scale = max(float(np.max(np.abs(h))), 1e-300)
                rows.append({
                    "t": t, "g": g, "h": h,
                    "second": float(np.min(np.diff(h, n=2))) / scale,
                    "asymmetry": float(np.max(np.abs(h - h[::-1]))) / scale,
                    "order": _monotone_order(h, scale)})
        except (QMixError, FloatingPointError, np.linalg.LinAlgError) as exc:
            return index, rows, str(exc)
        return index, rows, None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, enumerate(gs)))
    else:
        results = [run(item) for item in enumerate(gs)]

    rows = [row for _, probe_rows, _ in results for row in probe_rows]
    failures = [{"probe": index, "reason": reason}
                for index, _, reason in results if reason is not None]
    for failure in failures:
        logger.warning("h(s) probe %d rejected: %s", failure["probe"],
                       failure["reason"])
    if not rows:
        return RegularityProfile(s_grid=s_grid, probes=probes,
                                 times=list(times), failures=failures,
                                 verdicts={"convex": None, "symmetric": None,
                                           "completely_monotone_to_order": 0})

    worst = min(rows, key=lambda row: row["second"])
    max_asymmetry = max(row["asymmetry"] for row in rows)
    verdicts = {
        "convex": bool(worst["second"] >= -CONVEXITY_TOL),
        "symmetric": bool(max_asymmetry <= SYMMETRY_TOL),
        "completely_monotone_to_order": min(row["order"] for row in rows),
    }
    return RegularityProfile(s_grid=s_grid, h_values=worst["h"],
                             t=worst["t"], g=worst["g"], verdicts=verdicts,
                             min_second_difference=worst["second"],
                             max_asymmetry=max_asymmetry, probes=probes,
                             times=list(times), failures=failures)


def _weak_factor(p):
    return 1.0 if p <= 2 else 1.0 / (p - 1.0)


def _literal_weak_factor(p):
    return 1.0 if p <= 2 else p - 1.0


def direct_regularity_check(generator, p_grid=DEFAULT_P_GRID, probes=20,
                            seed=0):
    """Worst margins of ``E_p(f) >= c_p E_2(I_{2,p}(f))`` over random probes.

    The weak condition uses ``c_p = 1`` for ``p <= 2`` and ``1 / (p - 1)``
    above, the strong one ``c_p = 2/p``, so that strong regularity implies
    weak. The margins with the factor ``p - 1`` above ``p = 2`` are reported
    alongside as ``weak_literal`` and take no part in the verdict. Probes are
    normalized to unit L_p norm, both sides being homogeneous of degree p.

    Returns
    -------

    :class:`qmix.models.regularity_profile.DirectRegularity`
    """

    space = generator.require_primitive()
    gs = _probes(space.dim, probes, np.random.default_rng(seed))
    weak, strong, literal, factors = {}, {}, {}, {}
    worst_margin, worst_probe = float("inf"), None
    for p in p_grid:
        p = float(p)
        factors[p] = {"weak": _weak_factor(p), "strong": 2.0 / p,
                      "weak_literal": _literal_weak_factor(p)}
        weak_p = strong_p = literal_p = float("inf")
        for g in gs:
            f = g / space.lp_norm(p, g)
            lhs = dirichlet_p(generator, p, f)
            base = dirichlet_p(generator, 2, space.power_operator(2, p, f))
            margin = lhs - factors[p]["weak"] * base
            weak_p = min(weak_p, margin)
            strong_p = min(strong_p, lhs - factors[p]["strong"] * base)
            literal_p = min(literal_p,
                            lhs - factors[p]["weak_literal"] * base)
            if margin < worst_margin:
                worst_margin, worst_probe = margin, f
        weak[p], strong[p], literal[p] = weak_p, strong_p, literal_p

    def holds(margins):
        return all(m >= -MARGIN_TOL for m in margins.values())

    return DirectRegularity(p_grid=[float(p) for p in p_grid], weak=weak,
                            strong=strong, weak_literal=literal,
                            factors=factors, weak_ok=holds(weak),
                            strong_ok=holds(strong),
                            weak_literal_ok=holds(literal), probes=probes,
                            worst_probe=worst_probe)


def regularity_verdict(profile, direct=None):
    """Combines h(s) evidence with the direct check.

    h convexity is sufficient but not necessary, so a generator failing it
    while passing the direct check is ``inconclusive-h / regular-direct``.
    """

    if profile.strong:
        return "strong"
    if profile.weak:
        return "weak"
    if direct is None:
        return "inconclusive"
    if direct.weak_ok:
        return "inconclusive-h / regular-direct"
    return "violated-direct"


def _instance(index, family, dim, seed):
    if family == "generic":
        return "random_lindblad", random_lindblad(dim, seed)
    if family == "reversible":
        if index % 2 == 0:
            return "random_davies", random_davies(dim, seed)
        return "random_unitary", random_unitary(dim, 2, seed)
    if family == "nonreversible":
        if dim >= 3:
            return "random_cyclic_chain", random_cyclic_chain(dim, seed)
        return "random_lindblad", random_lindblad(dim, seed)
    raise ValueError(f"unknown scan family {family}")


def scan_instance(index, dims, seed, families=SCAN_FAMILIES, probes=10,
                  p_grid=DEFAULT_P_GRID):
    """Builds and checks the ``index``-th scan instance.

    Instances cycle through ``dims`` first, then ``families``; the seed of
    each instance is derived from ``(seed, index)`` alone.
    """

    dims = list(dims)
    dim = dims[index % len(dims)]
    family = families[(index // len(dims)) % len(families)]
    instance_seed = int(np.random.SeedSequence([seed, index])
                        .generate_state(1)[0])
    try:
        construction, generator = _instance(index, family, dim,
                                            instance_seed)
    except QMixError as exc:
        return ScanRecord(index=index, seed=instance_seed, family=family,
                          dim=dim, reason=str(exc))
    if not generator.primitive:
        return ScanRecord(index=index, seed=instance_seed, family=family,
                          construction=construction, dim=dim,
                          flags=generator.flags, reason="not primitive")

    try:
        direct = direct_regularity_check(generator, p_grid, probes,
                                         instance_seed)
    except (QMixError, FloatingPointError) as exc:
        return ScanRecord(index=index, seed=instance_seed, family=family,
                          construction=construction, dim=dim,
                          flags=generator.flags, reason=str(exc))

    record = ScanRecord(index=index, seed=instance_seed, family=family,
                        construction=construction, dim=dim,
                        flags=generator.flags,
                        min_weak_margin=direct.min_weak,
                        min_strong_margin=direct.min_strong,
                        weak_violation=not direct.weak_ok,
                        strong_violation=not direct.strong_ok)
    if record.weak_violation or record.strong_violation:
        record.generator = to_dict(generator)
        level = logging.WARNING if record.weak_violation \
            or generator.reversible else logging.INFO
        logger.log(level, "scan instance %d (%s, d=%d) violates the %s "
                   "condition", index, construction, dim,
                   "weak" if record.weak_violation else "strong")
    return record


def conjecture_scan(n_instances, dims, seed, **kwargs):
    """Streams :class:`qmix.models.scan_record.ScanRecord` objects for
    instances ``start .. n_instances - 1``.

    Parameters
    ----------

    n_instances: :class:`int`

    dims: [:class:`int`]

    seed: :class:`int`

    families: (:class:`str`, ...)
        Subset of ``SCAN_FAMILIES``

    probes: :class:`int`
        Probes per instance for the direct check

    start: :class:`int`
        First index, for resumed scans

    jobs: :class:`int`
        Worker threads over instances. Records still come out in index
        order.
    """

    families = tuple(kwargs.pop("families", SCAN_FAMILIES))
    probes = kwargs.pop("probes", 10)
    p_grid = kwargs.pop("p_grid", DEFAULT_P_GRID)
    start = kwargs.pop("start", 0)
    jobs = kwargs.pop("jobs", 1)
    if not dims:
        raise ValueError("dims must not be empty")

    def run(index):
        return scan_instance(index, dims, seed, families, probes, p_grid)

    indices = range(start, n_instances)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            yield from pool.map(run, indices)
    else:
        for index in indices:
            yield run(index)
