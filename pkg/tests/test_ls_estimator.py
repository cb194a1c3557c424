# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

import unittest

import numpy as np
from numpy.testing import assert_allclose

from qmix import generators, ls_estimator
from qmix.dirichlet_gap import spectral_gap
from qmix.operator_core import random_hermitian


BUDGET = {"restarts": 8, "max_evals": 2000, "seed": 1}


class TestLogSobolev(unittest.TestCase):
    def test_parameter_map(self):
        """
        Verifies the d^2 real parameters describe a Hermitian matrix
        """

        rng = np.random.default_rng(0)
        h = random_hermitian(3, rng)
        x = ls_estimator.params_from_hermitian(h, 3)
        self.assertEqual(x.shape, (9,))
        assert_allclose(ls_estimator.hermitian_from_params(x, 3), h,
                        atol=1e-15)

    def test_depolarizing_alpha2_closed_form(self):
        """
        Verifies the closed form and its d = 2 limit
        """

        self.assertEqual(ls_estimator.depolarizing_alpha2(2, 1.0), 1.0)
        self.assertAlmostEqual(ls_estimator.depolarizing_alpha2(4, 1.0),
                               1.0 / np.log(3.0))
        self.assertAlmostEqual(ls_estimator.depolarizing_alpha2(3, 2.0),
                               4.0 / 3.0 / np.log(2.0))
        with self.assertRaises(ValueError):
            ls_estimator.depolarizing_alpha2(1, 1.0)

    def test_depolarizing_estimates(self):
        """
        Verifies the estimator reproduces the depolarizing alpha_2 within
        1e-3 and never undercuts it
        """

        for d in (2, 3):
            generator = generators.build_depolarizing(d, 1.0)
            report = ls_estimator.estimate_alpha(generator, 2, **BUDGET)
            exact = ls_estimator.depolarizing_alpha2(d, 1.0)
            self.assertGreaterEqual(report.alpha_estimate,
                                    exact * (1 - 1e-8))
            self.assertLess(abs(report.alpha_estimate - exact) / exact, 1e-3)
            self.assertAlmostEqual(report.analytic_bounds["closed_form"],
                                   exact, places=9)
            self.assertGreater(report.witness_min_eig, 0.0)

    def test_depolarizing_alpha1(self):
        """
        Verifies alpha_1 of the qubit depolarizing generator is gamma and
        the two block bound lies between alpha_2 / 2 and gamma
        """

        self.assertAlmostEqual(ls_estimator.depolarizing_alpha1(2, 1.0), 1.0)
        for d in (3, 4, 8, 16):
            alpha1 = ls_estimator.depolarizing_alpha1(d, 1.0)
            self.assertLess(alpha1, 1.0)
            self.assertGreaterEqual(
                2 * alpha1, ls_estimator.depolarizing_alpha2(d, 1.0))
        self.assertAlmostEqual(ls_estimator.depolarizing_alpha1(3, 2.0),
                               2.0 * ls_estimator.depolarizing_alpha1(3, 1.0))

    def test_alpha1_below_gap(self):
        """
        Verifies the alpha_1 estimate stays below the spectral gap for a
        reversible generator
        """

        generator = generators.build_depolarizing(3, 1.0)
        gap = spectral_gap(generator, witnesses=10)
        report = ls_estimator.estimate_alpha(generator, 1, gap=gap, **BUDGET)
        self.assertTrue(report.use_hat)
        self.assertLessEqual(report.alpha_estimate,
                             gap.lambda_ * (1 + 1e-3))
        self.assertGreater(report.alpha_estimate, 0.0)

    def test_parallel_restarts(self):
        """
        Verifies parallel refinement returns the serial result
        """

        generator = generators.random_davies(2, 3)
        serial = ls_estimator.estimate_alpha(generator, 2, restarts=4,
                                             max_evals=300, seed=2)
        threaded = ls_estimator.estimate_alpha(generator, 2, restarts=4,
                                               max_evals=300, seed=2, jobs=3)
        self.assertEqual(serial.alpha_estimate, threaded.alpha_estimate)

    def test_estimate_rejects_order(self):
        """
        Verifies only p = 1 and p = 2 are estimated
        """

        with self.assertRaises(ValueError):
            ls_estimator.estimate_alpha(generators.build_depolarizing(2, 1.0),
                                        3)

    def test_expander_bound(self):
        """
        Verifies the expander bound formula and its domain
        """

        expected = np.log(2) * (4 + np.log(np.log(8))) / (2 * np.log(6))
        self.assertAlmostEqual(ls_estimator.expander_alpha2_upper(2, 8),
                               expected)
        with self.assertRaises(ValueError):
            ls_estimator.expander_alpha2_upper(1, 8)

    def test_unital_lower_bound(self):
        """
        Verifies the unital lower bound is refused for non unital
        generators
        """

        generator = generators.random_davies(2, 1)
        with self.assertRaises(ValueError):
            ls_estimator.unital_alpha2_lower(generator, 1.0)

        unital = generators.random_unitary(4, 2, seed=0)
        self.assertAlmostEqual(ls_estimator.unital_alpha2_lower(unital, 0.5),
                               0.5 / np.log(3.0))

    def test_partial_order_verdict(self):
        """
        Verifies each relation of the partial order is asserted only where
        it applies
        """

        reversible = generators.build_depolarizing(3, 1.0)
        verdict = ls_estimator.partial_order_verdict(reversible, 0.8, 0.9,
                                                     1.0)
        self.assertTrue(verdict.ok_alpha2_le_2alpha1)
        self.assertTrue(verdict.ok_alpha1_le_lambda)
        self.assertIsNone(verdict.ok_alpha2_le_alpha1)
        self.assertFalse(verdict.violated)

        strong = ls_estimator.partial_order_verdict(
            reversible, 0.8, 0.9, 1.0, strongly_regular=True)
        self.assertFalse(strong.ok_alpha2_le_alpha1)
        self.assertTrue(strong.violated)

        broken = ls_estimator.partial_order_verdict(reversible, 0.1, 0.9,
                                                    1.0)
        self.assertFalse(broken.ok_alpha2_le_2alpha1)
        self.assertTrue(broken.violated)
        self.assertIn("lambda", broken.to_dict())

        generic = generators.random_lindblad(2, 0)
        if not generic.unital:
            verdict = ls_estimator.partial_order_verdict(generic, 5.0, 0.9,
                                                         1.0)
            self.assertIsNone(verdict.ok_alpha1_le_lambda)

    def test_hypercontractivity(self):
        """
        Verifies hypercontractivity at the exact constant and its failure
        at an inflated one
        """

        generator = generators.build_depolarizing(2, 1.0)
        alpha = ls_estimator.depolarizing_alpha2(2, 1.0)
        result = ls_estimator.hypercontractivity_check(generator, alpha,
                                                       probes=30, seed=4)
        self.assertTrue(result["ok"])
        self.assertLessEqual(result["worst_ratio"], 1 + 1e-7)

        inflated = ls_estimator.hypercontractivity_check(
            generator, 5.0 * alpha, times=(0.1,), probes=30, seed=4)
        self.assertFalse(inflated["ok"])
        self.assertEqual(inflated["worst_time"], 0.1)

    def test_general_hypercontractivity(self):
        """
        Verifies the p0 generalized form for the qubit depolarizing
        semigroup
        """

        generator = generators.build_depolarizing(2, 1.0)
        result = ls_estimator.general_hypercontractivity_check(
            generator, 1.0, 1.5, probes=30, seed=5)
        self.assertTrue(result["ok"])

    def test_ordering_suite(self):
        """
        Verifies alpha_2 <= 2 alpha_1 and alpha_1 <= lambda on random
        reversible generators
        """

        instances = [generators.random_davies(2, seed) for seed in range(3)]
        instances += [generators.random_unitary(3, 2, seed)
                      for seed in range(3)]
        for generator in instances:
            gap = spectral_gap(generator, witnesses=10)
            alpha1 = ls_estimator.estimate_alpha(generator, 1, gap=gap,
                                                 restarts=6, max_evals=1000,
                                                 seed=0).alpha_estimate
            alpha2 = ls_estimator.estimate_alpha(generator, 2, gap=gap,
                                                 restarts=6, max_evals=1000,
                                                 seed=0).alpha_estimate
            self.assertLessEqual(alpha2, 2 * alpha1 * (1 + 1e-3))
            self.assertLessEqual(alpha1, gap.lambda_ * (1 + 1e-3))
