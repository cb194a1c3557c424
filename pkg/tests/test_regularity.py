# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

import unittest

import numpy as np

from qmix import generators, regularity
from qmix.errors import NotPositiveError
from qmix.models.davies_spec import DaviesSpec
from qmix.operator_core import matrix_function, random_hermitian


def positive(dim, rng):
    return matrix_function(random_hermitian(dim, rng), np.exp,
                           eig_floor=None)


def davies_qubit():
    return generators.build_davies(DaviesSpec(
        hamiltonian=np.diag([0.0, 1.0]),
        coupling_ops=[np.array([[0, 1], [1, 0]], dtype=complex)], beta=1.0))


class TestRegularity(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(31)

    def test_h_endpoints(self):
        """
        Verifies h(0) = h(2) = tr[g^2]
        """

        generator = generators.random_lindblad(3, 1)
        g = positive(3, self.rng)
        expected = np.trace(g @ g).real
        for s in (0.0, 2.0):
            self.assertAlmostEqual(
                regularity.h_functional(generator, g, 0.4, s) / expected,
                1.0, places=9)

    def test_h_projection_closed_form(self):
        """
        Verifies h(s) of the projection semigroup against its closed form
        """

        sigma = np.diag([0.2, 0.3, 0.5]).astype(complex)
        gamma, t = 1.3, 0.7
        generator = generators.build_projection(sigma, gamma)
        g = positive(3, self.rng)
        space = generator.stationary
        w, v = np.linalg.eigh(g)
        decay = np.exp(-gamma * t)
        for s in (0.3, 1.0, 1.6):
            g_left = (v * w ** (2 - s)) @ v.conj().T
            g_right = (v * w ** s) @ v.conj().T
            expected = (1 - decay) \
                * np.trace(space.sigma_power(s / 2) @ g_left).real \
                * np.trace(space.sigma_power(1 - s / 2) @ g_right).real \
                + decay * np.trace(g @ g).real
            self.assertAlmostEqual(
                regularity.h_functional(generator, g, t, s) / expected, 1.0,
                places=8)

    def test_h_arguments(self):
        """
        Verifies h rejects non positive probes and out of range arguments
        """

        generator = generators.build_depolarizing(2, 1.0)
        with self.assertRaises(NotPositiveError):
            regularity.h_functional(generator, np.diag([1.0, -1.0]), 0.5, 1.0)
        with self.assertRaises(ValueError):
            regularity.h_functional(generator, np.eye(2), 0.0, 1.0)
        with self.assertRaises(ValueError):
            regularity.h_functional(generator, np.eye(2), 0.5, 2.5)

    def test_depolarizing_profile(self):
        """
        Verifies the depolarizing h curves are convex, symmetric and
        completely monotone
        """

        for d in (2, 3):
            profile = regularity.regularity_profile(
                generators.build_depolarizing(d, 1.0), probes=20)
            self.assertTrue(profile.weak)
            self.assertTrue(profile.strong, profile.summary())
            self.assertEqual(len(profile.h_values), 101)
            self.assertEqual(profile.failures, [])

    def test_projection_profile(self):
        """
        Verifies the projection semigroup is strongly regular
        """

        generator = generators.build_projection(
            np.diag([0.1, 0.3, 0.6]), 1.0)
        profile = regularity.regularity_profile(generator, probes=20, seed=3)
        self.assertTrue(profile.strong, profile.summary())

    def test_davies_profile(self):
        """
        Verifies the qubit Davies generator passes the strong verdicts
        """

        profile = regularity.regularity_profile(davies_qubit(), probes=30,
                                                seed=2)
        self.assertTrue(profile.verdicts["convex"])
        self.assertTrue(profile.verdicts["symmetric"])
        self.assertEqual(profile.verdicts["completely_monotone_to_order"], 6)
        self.assertEqual(regularity.regularity_verdict(profile), "strong")

    def test_profile_parallel(self):
        """
        Verifies threaded probe sweeps give the serial profile
        """

        generator = generators.random_davies(2, 4)
        serial = regularity.regularity_profile(generator, probes=10, seed=1,
                                               grid_n=21)
        threaded = regularity.regularity_profile(generator, probes=10,
                                                 seed=1, grid_n=21, jobs=4)
        self.assertEqual(serial.min_second_difference,
                         threaded.min_second_difference)
        self.assertEqual(serial.verdicts, threaded.verdicts)

    def test_profile_grid(self):
        """
        Verifies too coarse s grids are refused
        """

        with self.assertRaises(ValueError):
            regularity.regularity_profile(
                generators.build_depolarizing(2, 1.0), probes=2, grid_n=5)

    def test_direct_check_depolarizing(self):
        """
        Verifies the defining inequalities hold for the depolarizing
        semigroup
        """

        direct = regularity.direct_regularity_check(
            generators.build_depolarizing(3, 1.0),
            p_grid=(1.25, 1.5, 2.0, 3.0, 4.0), probes=10)
        self.assertTrue(direct.strong_ok, direct.strong)
        self.assertTrue(direct.weak_ok, direct.weak)
        self.assertAlmostEqual(direct.weak[2.0], 0.0, places=9)
        self.assertGreaterEqual(direct.min_strong, -1e-8)

    def test_direct_check_strong_implies_weak(self):
        """
        Verifies weak margins never fall below strong margins
        """

        direct = regularity.direct_regularity_check(
            generators.random_lindblad(2, 6), probes=6, seed=1)
        for p in direct.p_grid:
            self.assertGreaterEqual(direct.weak[p] + 1e-10, direct.strong[p])

    def test_direct_check_reports_both_weak_factors(self):
        """
        Verifies the p - 1 weak margins are reported next to the 1/(p - 1)
        ones and never exceed the strong margins above p = 2
        """

        direct = regularity.direct_regularity_check(
            generators.random_davies(3, 4), p_grid=(1.5, 2.0, 3.0, 6.0),
            probes=6, seed=2)
        self.assertEqual(direct.factors[6.0], {"weak": 0.2, "strong": 1 / 3,
                                               "weak_literal": 5.0})
        self.assertEqual(direct.factors[1.5]["weak_literal"], 1.0)
        self.assertAlmostEqual(direct.weak_literal[1.5], direct.weak[1.5])
        for p in (3.0, 6.0):
            self.assertLessEqual(direct.weak_literal[p],
                                 direct.strong[p] + 1e-10)
        self.assertIsInstance(direct.weak_literal_ok, bool)
        summary = direct.summary()
        self.assertNotIn("worst_probe", summary)
        self.assertEqual(summary["weak_literal"], direct.weak_literal)

    def test_regularity_verdict(self):
        """
        Verifies the combination of h evidence and the direct check
        """

        convex = regularity.RegularityProfile(
            verdicts={"convex": True, "symmetric": False,
                      "completely_monotone_to_order": 2})
        self.assertEqual(regularity.regularity_verdict(convex), "weak")

        failing = regularity.RegularityProfile(
            verdicts={"convex": False, "symmetric": False,
                      "completely_monotone_to_order": 0})
        self.assertEqual(regularity.regularity_verdict(failing),
                         "inconclusive")
        passing = regularity.DirectRegularity(weak_ok=True, strong_ok=False)
        self.assertEqual(regularity.regularity_verdict(failing, passing),
                         "inconclusive-h / regular-direct")
        violated = regularity.DirectRegularity(weak_ok=False,
                                               strong_ok=False)
        self.assertEqual(regularity.regularity_verdict(failing, violated),
                         "violated-direct")

    def test_scan(self):
        """
        Verifies the scan cycles dimensions and families, derives seeds
        from the index alone and resumes at any index
        """

        records = list(regularity.conjecture_scan(6, [2, 3], 7, probes=3,
                                                  p_grid=(1.5, 3.0)))
        self.assertEqual([r.index for r in records], list(range(6)))
        self.assertEqual([r.dim for r in records], [2, 3, 2, 3, 2, 3])
        self.assertEqual([r.family for r in records],
                         ["generic", "generic", "reversible", "reversible",
                          "nonreversible", "nonreversible"])

        resumed = list(regularity.conjecture_scan(6, [2, 3], 7, probes=3,
                                                  p_grid=(1.5, 3.0),
                                                  start=4))
        self.assertEqual([r.to_dict() for r in resumed],
                         [r.to_dict() for r in records[4:]])

        threaded = list(regularity.conjecture_scan(6, [2, 3], 7, probes=3,
                                                   p_grid=(1.5, 3.0),
                                                   jobs=3))
        self.assertEqual([r.seed for r in threaded],
                         [r.seed for r in records])

    def test_scan_reversible_regular(self):
        """
        Verifies no weak violation among reversible scan instances
        """

        records = regularity.conjecture_scan(
            6, [3], 11, families=("reversible",), probes=4,
            p_grid=(1.25, 1.5, 3.0))
        for record in records:
            if record.reason is not None:
                continue
            self.assertFalse(record.weak_violation, record.to_dict())

    def test_scan_rejects_empty_dims(self):
        """
        Verifies a scan needs at least one dimension
        """

        with self.assertRaises(ValueError):
            list(regularity.conjecture_scan(2, [], 0))
