# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

import asyncio
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from functools import partial

import numpy as np

from . import generators
from .dirichlet_gap import spectral_gap
from .errors import QMixError, SpecError, TheoryViolationError
from .ls_estimator import (depolarizing_alpha2, estimate_alpha,
                           expander_alpha2_upper, partial_order_verdict,
                           unital_alpha2_lower)
from .mixing import (bound_curves, crossing_time, depolarizing_curve,
                     depolarizing_mixing_time, entropy_production,
                     mixing_time, thermal_sigma_min_bound)
from .models.analysis_report import AnalysisReport, missing
from .models.davies_spec import DaviesSpec
from .operator_core import MAX_DIM, random_density
from .regularity import (conjecture_scan, direct_regularity_check,
                         regularity_profile, regularity_verdict)

__all__ = ("QMix", "REPRODUCE_TARGETS", "SKIPPABLE")

logger = logging.getLogger(__name__)

REPRODUCE_TARGETS = ("depolarizing_table", "tensor_qubit", "expander",
                     "davies_qubit")
SKIPPABLE = frozenset({"gap", "ls", "regularity", "verdicts"})
FAILURES = (QMixError, FloatingPointError, ValueError, np.linalg.LinAlgError)


def _new_seed():
    return int(np.random.SeedSequence().generate_state(1)[0])


def _drop_partial_line(path):
    """Truncates an interrupted trailing record and returns the number of
    complete lines left."""

    with open(path, "rb+") as handle:
        data = handle.read()
        keep = data.rfind(b"\n") + 1
        if keep < len(data):
            logger.warning("dropping %d bytes of an unterminated record from "
                           "%s", len(data) - keep, path)
            handle.truncate(keep)
    return data[:keep].count(b"\n")


def _version():
    from . import __version__
    return __version__


class QMix():
    """Runs analyses of quantum Markov semigroups. The numerical work is
    synchronous; every public coroutine hands it to a thread pool.

    Attributes
    -----------

    seed: :class:`int`
        Seed of every random draw. A fresh seed is drawn and logged when
        omitted.

    restarts: :class:`int`
        Refined starts of the Log-Sobolev estimator

    max_evals: :class:`int`
        Evaluation budget per optimizer stage

    probes: :class:`int`
        Probes of the regularity profile

    times: (:class:`float`, ...)
        Semigroup times of the regularity profile

    grid_n: :class:`int`
        s grid of the regularity profile

    jobs: :class:`int`
        Worker threads

    skip: :class:`set`
        Sub-analyses of ``analyze`` to omit, out of ``SKIPPABLE``
    """

    __slots__ = ("seed", "restarts", "max_evals", "probes", "times",
                 "grid_n", "jobs", "skip")

    def __init__(self, **kwargs):
        self.seed = kwargs.pop("seed", None)
        self.restarts = kwargs.pop("restarts", 24)
        self.max_evals = kwargs.pop("max_evals", 2000)
        self.probes = kwargs.pop("probes", 100)
        self.times = tuple(kwargs.pop("times", (0.1, 0.5, 1.0)))
        self.grid_n = kwargs.pop("grid_n", 101)
        self.jobs = max(1, int(kwargs.pop("jobs", 1)))
        self.skip = set(kwargs.pop("skip", ()))

        for name in ("restarts", "max_evals", "probes", "grid_n"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) \
                    or value < 1:
                raise ValueError(f"{name} must be a positive integer, got "
                                 f"{value!r}")
        if not self.times or any(t <= 0 for t in self.times):
            raise ValueError(f"times must be positive, got {self.times}")

        unknown = self.skip - SKIPPABLE
        if unknown:
            raise ValueError(f"cannot skip {sorted(unknown)}, expected a "
                             f"subset of {sorted(SKIPPABLE)}")
        if self.seed is None:
            self.seed = _new_seed()
            logger.info("no seed given, using %d", self.seed)

    async def _offload(self, func, *args, **kwargs):
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            return await loop.run_in_executor(pool,
                                              partial(func, *args, **kwargs))

    def _ls_options(self):
        return {"restarts": self.restarts, "max_evals": self.max_evals,
                "seed": self.seed, "jobs": self.jobs}

    async def analyze(self, spec):
        """Gap, Log-Sobolev estimates, regularity evidence and the partial
        order verdict of one generator.

        Parameters
        -----------

        spec: :class:`dict` or :class:`qmix.generators.Generator`
            Decoded generator JSON

        Returns
        -------

        :class:`qmix.models.analysis_report.AnalysisReport`

        Raises
        ------

        SpecError
            Malformed spec

        NotPrimitiveError
            The generator has no unique full rank stationary state
        """

        return await self._offload(self._analyze, spec)

    def _analyze(self, spec):
        started = time.perf_counter()
        generator = spec if isinstance(spec, generators.Generator) \
            else generators.from_dict(spec)
        space = generator.require_primitive()

        gap = missing("skipped")
        if "gap" not in self.skip:
            try:
                gap = spectral_gap(generator, seed=self.seed)
            except FAILURES as exc:
                gap = missing(str(exc))
        lambda_ = getattr(gap, "lambda_", None)

        ls = {"alpha1": missing("skipped"), "alpha2": missing("skipped")}
        if "ls" not in self.skip:
            runs = [("alpha1", 1, True), ("alpha2", 2, None)]
            if not generator.reversible:
                runs.append(("alpha1_L", 1, False))
            for key, p, use_hat in runs:
                try:
                    ls[key] = estimate_alpha(
                        generator, p, use_hat=use_hat,
                        gap=gap if lambda_ is not None else None,
                        **self._ls_options())
                except FAILURES as exc:
                    ls[key] = missing(str(exc))

        regularity = missing("skipped")
        strong = False
        if "regularity" not in self.skip:
            try:
                profile = regularity_profile(generator, self.probes,
                                             self.times, self.grid_n,
                                             self.seed, self.jobs)
                direct = direct_regularity_check(
                    generator, probes=min(self.probes, 20), seed=self.seed)
                verdict = regularity_verdict(profile, direct)
                strong = verdict == "strong"
                regularity = {"verdict": verdict,
                              "profile": profile.summary(),
                              "direct": direct.summary()}
            except FAILURES as exc:
                regularity = missing(str(exc))

        verdicts = missing("skipped")
        alpha1 = getattr(ls["alpha1"], "alpha_estimate", None)
        alpha2 = getattr(ls["alpha2"], "alpha_estimate", None)
        if "verdicts" not in self.skip:
            if lambda_ is None or alpha1 is None or alpha2 is None:
                verdicts = missing("requires gap and both LS estimates")
            else:
                verdicts = partial_order_verdict(generator, alpha1, alpha2,
                                                 lambda_,
                                                 strongly_regular=strong)

        return AnalysisReport(
            generator=generator.summary(), sigma_min=space.sigma_min,
            gap=gap, ls=ls, regularity=regularity, verdicts=verdicts,
            provenance={"seed": self.seed, "version": _version(),
                        "wall_time": time.perf_counter() - started})

    async def mixing(self, spec, epsilon=0.01, t_max=None, grid_n=201):
        """Mixing bound curves, the sampled mixing time and the bound
        crossing times.

        Depolarizing specs above the supported dimension use the exact
        scalar evolution instead of superoperators.

        Returns
        -------

        :class:`dict`
            ``curve`` (:class:`qmix.models.mixing_curve.MixingCurve`),
            ``mixing_time`` and ``crossing`` with the first grid times
            below epsilon of each bound column
        """

        return await self._offload(self._mixing, spec, epsilon, t_max,
                                   grid_n)

    def _mixing(self, spec, epsilon, t_max, grid_n):
        if isinstance(spec, dict) and spec.get("family") == "depolarizing" \
                and isinstance(spec.get("dim"), int) \
                and spec["dim"] > MAX_DIM:
            d, gamma = spec["dim"], spec.get("gamma", 1.0)
            if isinstance(gamma, bool) or not isinstance(gamma, (int, float)) \
                    or not gamma > 0:
                raise SpecError("gamma must be a positive number",
                                field="gamma")
            if t_max is None:
                t_max = 3.0 * np.log(np.sqrt(d) / min(epsilon, 1.0)) / gamma
            curve = depolarizing_curve(d, gamma,
                                       np.linspace(0.0, t_max, grid_n))
            tau = depolarizing_mixing_time(d, gamma, epsilon)
        else:
            generator = spec if isinstance(spec, generators.Generator) \
                else generators.from_dict(spec)
            space = generator.require_primitive()
            lambda_ = spectral_gap(generator, seed=self.seed).lambda_
            alpha1 = None
            if "ls" not in self.skip:
                alpha1 = estimate_alpha(generator, 1,
                                        **self._ls_options()).alpha_estimate
            if t_max is None:
                t_max = 3.0 * np.log(np.sqrt(1.0 / space.sigma_min)
                                     / min(epsilon, 1.0)) / lambda_
            curve = bound_curves(generator, lambda_, alpha1,
                                 np.linspace(0.0, t_max, grid_n),
                                 seed=self.seed, jobs=self.jobs)
            tau = mixing_time(generator, epsilon, seed=self.seed)

        crossing = {name: crossing_time(curve, name, epsilon)
                    for name in ("trace_dist", "chi2_bound", "ls_bound_a1",
                                 "ls_bound_a2")}
        return {"curve": curve, "mixing_time": tau, "crossing": crossing}

    async def reproduce(self, target, enlarged=False):
        """Runs one of the ``REPRODUCE_TARGETS`` experiments.

        Parameters
        -----------

        target: :class:`str`

        enlarged: :class:`bool`
            For ``tensor_qubit``, also run three qubits with a doubled
            budget

        Returns
        -------

        :class:`dict`
            ``target``, ``passed`` and one row per checked instance
        """

        if target not in REPRODUCE_TARGETS:
            raise ValueError(f"unknown target {target!r}, expected one of "
                             f"{REPRODUCE_TARGETS}")
        method = getattr(self, f"_reproduce_{target}")
        rows = await self._offload(method, enlarged) \
            if target == "tensor_qubit" else await self._offload(method)
        passed = all(row["passed"] for row in rows)
        logger.info("%s: %s", target, "passed" if passed else "FAILED")
        return {"target": target, "passed": passed, "rows": rows}

    def _reproduce_depolarizing_table(self):
        rows = []
        for d in range(2, 9):
            generator = generators.build_depolarizing(d, 1.0)
            gap = spectral_gap(generator, seed=self.seed)
            report = estimate_alpha(generator, 2, gap=gap,
                                    **self._ls_options())
            exact = depolarizing_alpha2(d, 1.0)
            error = abs(report.alpha_estimate - exact) / exact
            rows.append({"d": d, "alpha2": report.alpha_estimate,
                         "closed_form": exact, "relative_error": error,
                         "lambda": gap.lambda_,
                         "passed": bool(error <= 1e-3
                                        and abs(gap.lambda_ - 1.0) <= 1e-10)})
            logger.info("depolarizing d=%d: alpha2 %.8f, exact %.8f", d,
                        report.alpha_estimate, exact)
        return rows

    def _reproduce_tensor_qubit(self, enlarged=False):
        qubit = generators.build_depolarizing(2, 1.0)
        cases = [(2, 2e-2, 1)]
        if enlarged:
            cases.append((3, 5e-2, 2))
        rows = []
        for n, tolerance, factor in cases:
            generator = generators.tensor_sum([qubit] * n)
            options = self._ls_options()
            options["restarts"] *= factor
            options["max_evals"] *= factor
            report = estimate_alpha(generator, 2, **options)
            error = abs(report.alpha_estimate - 1.0)
            rows.append({"qubits": n, "alpha2": report.alpha_estimate,
                         "error": error, "converged": report.converged,
                         "passed": bool(error <= tolerance)})
            logger.info("tensor qubit N=%d: alpha2 %.6f", n,
                        report.alpha_estimate)
        return rows

    def _reproduce_expander(self):
        rows = []
        for d in (4, 8, 16):
            generator = generators.random_unitary(d, 2, self.seed)
            gap = spectral_gap(generator, seed=self.seed)
            report = estimate_alpha(generator, 2, gap=gap,
                                    **self._ls_options())
            upper = expander_alpha2_upper(generator.kraus_rank, d)
            lower = unital_alpha2_lower(generator, gap.lambda_)
            alpha = report.alpha_estimate
            rows.append({"d": d, "kraus_rank": generator.kraus_rank,
                         "alpha2": alpha, "upper": upper,
                         "upper_D2": expander_alpha2_upper(2, d),
                         "lower": lower, "lambda": gap.lambda_,
                         "passed": bool(alpha <= upper
                                        and alpha >= lower * (1 - 1e-3))})
            logger.info("expander d=%d: %.6f <= %.6f <= %.6f", d, lower,
                        alpha, upper)
        return rows

    def _reproduce_davies_qubit(self):
        h = np.diag([0.0, 1.0]).astype(complex)
        coupling = np.array([[0, 1], [1, 0]], dtype=complex)
        beta = 1.0
        generator = generators.build_davies(
            DaviesSpec(hamiltonian=h, coupling_ops=[coupling], beta=beta))
        space = generator.stationary
        gap = spectral_gap(generator, seed=self.seed)
        alpha1 = estimate_alpha(generator, 1, gap=gap, **self._ls_options())
        alpha2 = estimate_alpha(generator, 2, gap=gap, **self._ls_options())
        profile = regularity_profile(generator, self.probes, self.times,
                                     self.grid_n, self.seed, self.jobs)
        verdict = partial_order_verdict(generator, alpha1.alpha_estimate,
                                        alpha2.alpha_estimate, gap.lambda_,
                                        strongly_regular=profile.strong)

        rng = np.random.default_rng(self.seed)
        lowest, identity_ok = np.inf, True
        for _ in range(50):
            try:
                production = entropy_production(generator,
                                                random_density(2, rng))
            except TheoryViolationError as exc:
                logger.warning("entropy production: %s", exc)
                identity_ok = False
                continue
            lowest = min(lowest, production["Pi"])
        thermal = thermal_sigma_min_bound(h, beta)

        return [
            {"check": "reversible", "passed": generator.reversible},
            {"check": "strong_regularity", "verdicts": profile.verdicts,
             "passed": profile.strong},
            {"check": "partial_order", "verdict": verdict.to_dict(),
             "passed": not verdict.violated},
            {"check": "entropy_production", "min_Pi": float(lowest),
             "passed": bool(identity_ok and lowest >= -1e-10)},
            {"check": "thermal_sigma_min", "inverse_sigma_min":
             1.0 / space.sigma_min, "bound": thermal,
             "passed": bool(1.0 / space.sigma_min <= thermal)},
        ]

    async def scan(self, dims, n, out_path, probes=10):
        """Streams a regularity scan to a JSON lines file.

        An existing file is resumed after its last complete line.

        Returns
        -------

        :class:`dict`
            The seed, counts of written records and of violations. Weak
            violations, or strong violations of reversible instances,
            contradict the regularity conjecture. An unterminated last
            line of an existing file is dropped before resuming.
        """

        return await self._offload(self._scan, list(dims), n, out_path,
                                   probes)

    def _scan(self, dims, n, out_path, probes):
        start = 0
        if os.path.exists(out_path):
            start = _drop_partial_line(out_path)
            logger.info("resuming scan at instance %d", start)

        summary = {"seed": self.seed, "resumed_from": start, "written": 0,
                   "weak_violations": 0, "strong_violations": 0,
                   "reversible_strong_violations": 0}
        with open(out_path, "a") as handle:
            for record in conjecture_scan(n, dims, self.seed, start=start,
                                          probes=probes, jobs=self.jobs):
                handle.write(json.dumps(record.to_dict(), sort_keys=True)
                             + "\n")
                handle.flush()
                summary["written"] += 1
                summary["weak_violations"] += bool(record.weak_violation)
                summary["strong_violations"] += bool(record.strong_violation)
                if record.strong_violation and record.flags \
                        and record.flags.get("reversible"):
                    summary["reversible_strong_violations"] += 1
        summary["falsified"] = bool(summary["weak_violations"]
                                    or summary["reversible_strong_violations"])
        return summary
