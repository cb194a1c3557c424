# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

import io
import unittest
from unittest import mock

import numpy as np
from numpy.testing import assert_allclose

from qmix import generators, mixing
from qmix.dirichlet_gap import spectral_gap
from qmix.errors import (NotLazyError, NotReversibleError,
                         TheoryViolationError)
from qmix.lp_space import WeightedSpace
from qmix.ls_estimator import depolarizing_alpha1, depolarizing_alpha2
from qmix.models.mixing_curve import MixingCurve
from qmix.models.relative_density import RelativeDensity
from qmix.operator_core import (matrix_function, random_density,
                                random_hermitian, random_pure_state)


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.diag([1.0, -1.0]).astype(complex)


class TestMixing(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(41)

    def test_distances(self):
        """
        Verifies all distances vanish at sigma and pure states of the
        maximally mixed qubit sit at trace distance 1
        """

        space = WeightedSpace.maximally_mixed(2)
        at_sigma = mixing.distances(space.sigma, space)
        for value in at_sigma.values():
            self.assertAlmostEqual(value, 0.0, places=10)

        pure = mixing.distances(random_pure_state(2, self.rng), space)
        self.assertAlmostEqual(pure["trace"], 1.0, places=10)
        self.assertAlmostEqual(pure["chi2"], 1.0, places=10)
        self.assertAlmostEqual(pure["rel_ent"], np.log(2.0), places=8)

        with self.assertRaises(ValueError):
            mixing.distances(np.eye(2), space)

    def test_evolve_depolarizing(self):
        """
        Verifies rho_t = e^{-gamma t} rho + (1 - e^{-gamma t}) 1/d
        """

        generator = generators.build_depolarizing(3, 1.5)
        rho = random_density(3, self.rng)
        decay = np.exp(-1.5 * 0.4)
        expected = decay * rho + (1 - decay) * np.eye(3) / 3
        assert_allclose(mixing.evolve(generator, rho, 0.4), expected,
                        atol=1e-12)
        with self.assertRaises(ValueError):
            mixing.evolve(generator, rho, -1.0)

    def test_propagator_matches_evolve(self):
        """
        Verifies the eigendecomposed propagator of a reversible generator
        agrees with expm
        """

        generator = generators.random_davies(3, 2)
        propagator = mixing.Propagator(generator)
        rho = random_density(3, self.rng)
        for t in (0.0, 0.3, 2.0):
            assert_allclose(propagator.state(rho, t),
                            mixing.evolve(generator, rho, t), atol=1e-9)

    def test_chi2_bound_dominates(self):
        """
        Verifies the chi-squared bound dominates the sampled trace
        distance for random reversible generators
        """

        for seed in range(20):
            dim = 2 + seed % 3
            generator = generators.random_davies(dim, seed)
            gap = spectral_gap(generator, witnesses=10)
            curve = mixing.bound_curves(generator, gap.lambda_, None,
                                        np.linspace(0.0, 5.0, 26),
                                        samples=10, seed=seed)
            self.assertEqual(curve.bound_columns(), ["chi2_bound"])
            self.assertGreaterEqual(curve.domination_margin(), -1e-7)
            self.assertEqual(curve.samples, 10 + dim)
            self.assertTrue(np.all(np.diff(curve.chi2) <= 1e-10))

    def test_bound_curves_parallel(self):
        """
        Verifies threaded grids give the serial curve
        """

        generator = generators.random_lindblad(2, 3)
        grid = np.linspace(0.0, 2.0, 9)
        serial = mixing.bound_curves(generator, 0.5, None, grid, samples=5)
        threaded = mixing.bound_curves(generator, 0.5, None, grid, samples=5,
                                       jobs=3)
        assert_allclose(serial.trace_dist, threaded.trace_dist)

    def test_ls_bound_requires_regularity(self):
        """
        Verifies the alpha_2 bound is only drawn with a regularity verdict
        """

        generator = generators.build_depolarizing(2, 1.0)
        grid = [0.0, 1.0]
        plain = mixing.bound_curves(generator, 1.0, 1.0, grid, alpha2=1.0,
                                    samples=2)
        self.assertIsNone(plain.ls_bound_a2)
        weak = mixing.bound_curves(generator, 1.0, 1.0, grid, alpha2=1.0,
                                   regularity="weak", samples=2)
        strong = mixing.bound_curves(generator, 1.0, 1.0, grid, alpha2=1.0,
                                     regularity="strong", samples=2)
        self.assertGreater(weak.ls_bound_a2[1], strong.ls_bound_a2[1])

    def test_depolarizing_curve_large(self):
        """
        Verifies every bound dominates the exact curve at d = 64, that the
        LS prefactor is the smaller one and that its crossing still comes
        later than the chi-squared one at epsilon = 0.01
        """

        curve = mixing.depolarizing_curve(64, 1.0,
                                          np.linspace(0.0, 20.0, 2001))
        self.assertGreaterEqual(curve.domination_margin(), 0.0)
        self.assertAlmostEqual(curve.chi2_bound[0], 8.0)
        self.assertAlmostEqual(curve.ls_bound_a1[0],
                               np.sqrt(2 * np.log(64.0)))
        self.assertLess(curve.ls_bound_a1[0], curve.chi2_bound[0])

        chi2_cross = mixing.crossing_time(curve, "chi2_bound", 0.01)
        self.assertAlmostEqual(chi2_cross, np.log(800.0), delta=0.01)
        self.assertGreater(mixing.crossing_time(curve, "ls_bound_a1", 0.01),
                           chi2_cross)
        self.assertGreater(mixing.crossing_time(curve, "ls_bound_a2", 0.01),
                           chi2_cross)

    def test_depolarizing_curve_matches_sampling(self):
        """
        Verifies the exact curve agrees with sampled pure states at d = 3
        """

        grid = np.linspace(0.0, 3.0, 7)
        exact = mixing.depolarizing_curve(3, 1.0, grid)
        sampled = mixing.bound_curves(generators.build_depolarizing(3, 1.0),
                                      1.0, None, grid, samples=3)
        assert_allclose(sampled.trace_dist, exact.trace_dist, atol=1e-9)
        assert_allclose(sampled.chi2, exact.chi2, atol=1e-9)
        assert_allclose(sampled.rel_ent, exact.rel_ent, atol=1e-8)

    def test_mixing_time(self):
        """
        Verifies the bisected mixing time of the qubit depolarizing
        semigroup against its closed form
        """

        generator = generators.build_depolarizing(2, 1.0)
        for epsilon in (0.5, 0.01):
            self.assertAlmostEqual(
                mixing.mixing_time(generator, epsilon, samples=3),
                mixing.depolarizing_mixing_time(2, 1.0, epsilon),
                delta=1e-4)
        self.assertEqual(mixing.mixing_time(generator, 2.0), 0.0)
        with self.assertRaises(ValueError):
            mixing.mixing_time(generator, 0.0)

    def test_depolarizing_mixing_time(self):
        """
        Verifies the closed form mixing time and its edge cases
        """

        self.assertAlmostEqual(mixing.depolarizing_mixing_time(64, 1.0, 0.01),
                               np.log(2 * (1 - 1 / 64) / 0.01))
        self.assertEqual(mixing.depolarizing_mixing_time(4, 1.0, 1.5), 0.0)
        with self.assertRaises(ValueError):
            mixing.depolarizing_mixing_time(4, 1.0, -0.1)

    def test_entropy_decay(self):
        """
        Verifies variance and relative entropy decay along the depolarizing
        semigroup together with the entropy derivative identity
        """

        generator = generators.build_depolarizing(3, 1.0)
        space = generator.stationary
        f0 = RelativeDensity.from_state(random_density(3, self.rng), space)
        result = mixing.entropy_decay_check(
            generator, 0.5 * depolarizing_alpha1(3, 1.0), f0,
            [0.0, 0.2, 0.5, 1.0, 2.0], lambda_=1.0)
        self.assertTrue(result["ok"], result)
        self.assertEqual(len(result["derivative_residuals"]), 4)

    def test_entropy_production(self):
        """
        Verifies Pi >= 0 and that it is the decay rate of the relative
        entropy along the flow on random full rank states
        """

        generator = generators.random_davies(3, 5)
        for _ in range(20):
            result = mixing.entropy_production(generator,
                                               random_density(3, self.rng))
            self.assertGreaterEqual(result["Pi"], -1e-10)
            self.assertLessEqual(result["dD_dt"], 1e-10)
            self.assertAlmostEqual(result["Pi"], -result["dD_dt"],
                                   delta=1e-5 * (1 + result["Pi"]))

    def test_entropy_production_rejects_wrong_generator(self):
        """
        Verifies a Pi inconsistent with the flow is reported
        """

        generator = generators.random_davies(2, 5)
        rho = random_density(2, self.rng)
        with mock.patch.object(mixing, "dirichlet_p",
                               side_effect=lambda g, p, f: 0.0):
            with self.assertRaises(TheoryViolationError):
                mixing.entropy_production(generator, rho)

    def test_two_to_two_decay(self):
        """
        Verifies ||T_t - T_inf||_{2 -> 2} <= exp(-lambda t), with equality
        for reversible generators
        """

        generator = generators.random_davies(3, 7)
        for t in (0.1, 1.0, 3.0):
            result = mixing.two_to_two_decay(generator, t)
            self.assertTrue(result["ok"])
            self.assertAlmostEqual(result["norm"], result["bound"], places=8)

    def test_pq_norm(self):
        """
        Verifies contractivity on L_2 and the hypercontractive exponent of
        the qubit depolarizing semigroup
        """

        generator = generators.build_depolarizing(2, 1.0)
        options = {"restarts": 4, "max_evals": 400, "seed": 1}
        self.assertAlmostEqual(mixing.pq_norm(generator, 2, 2, 0.5,
                                              **options), 1.0, places=6)
        t = 0.3
        q = 1.0 + np.exp(2.0 * depolarizing_alpha2(2, 1.0) * t)
        self.assertLessEqual(mixing.pq_norm(generator, 2, q, t, **options),
                             1.0 + 1e-6)

        space = generator.stationary
        channel = generators.semigroup(generator, t)
        self.assertAlmostEqual(
            mixing.pq_norm(channel, 2, 2, space=space, **options),
            mixing.pq_norm(generator, 2, 2, t, **options), places=8)
        with self.assertRaises(ValueError):
            mixing.pq_norm(channel, 2, 2)
        with self.assertRaises(ValueError):
            mixing.pq_norm(generator, 0.5, 2)

    def test_discrete_vs_continuous(self):
        """
        Verifies a lazy reversible channel mixes at least as fast as its
        continuous lift
        """

        for seed in range(20):
            generator = generators.random_unitary(3, 2, seed=seed, lazy=True)
            rho0 = random_pure_state(3, self.rng)
            for n in range(11):
                result = mixing.discrete_vs_continuous(generator, n, rho0)
                self.assertLessEqual(result["chi2_discrete"],
                                     result["chi2_continuous"] + 1e-9)

    def test_discrete_vs_continuous_refusals(self):
        """
        Verifies negative spectra and non reversible channels are refused
        """

        flips = generators.lift_channel([PAULI_X / np.sqrt(2),
                                         PAULI_Z / np.sqrt(2)])
        with self.assertRaises(NotLazyError):
            mixing.discrete_vs_continuous(flips, 1, np.eye(2) / 2)

        chain = generators.random_cyclic_chain(3, 0)
        with self.assertRaises((NotReversibleError, ValueError)):
            mixing.discrete_vs_continuous(chain, 1, np.eye(3) / 3)

    def test_chi2_gap_bound(self):
        """
        Verifies the chi-squared divergence after the combined LS and gap
        time stays below exp(2 (1 - c))
        """

        generator = generators.build_depolarizing(4, 1.0)
        rho = random_pure_state(4, self.rng)
        for c in (0.5, 1.0, 2.0):
            result = mixing.chi2_gap_bound_check(
                generator, depolarizing_alpha2(4, 1.0), 1.0, c, rho)
            self.assertTrue(result["ok"], result)

    def test_thermal_sigma_min_bound(self):
        """
        Verifies 1 / sigma_min <= d exp(beta ||H||) for Gibbs states
        """

        for _ in range(10):
            h = random_hermitian(3, self.rng)
            beta = float(self.rng.uniform(0.1, 3.0))
            space = WeightedSpace.gibbs(h, beta)
            self.assertLessEqual(1.0 / space.sigma_min,
                                 mixing.thermal_sigma_min_bound(h, beta)
                                 * (1 + 1e-12))

    def test_unital_hamiltonian_invariance(self):
        """
        Verifies E_1 of a unital generator ignores the Hamiltonian
        """

        generator = generators.build_lindblad(random_hermitian(2, self.rng),
                                              [PAULI_X, PAULI_Z])
        f = matrix_function(random_hermitian(2, self.rng), np.exp,
                            eig_floor=None)
        result = mixing.unital_entropy_hamiltonian_invariance(
            generator, random_hermitian(2, self.rng), f)
        self.assertAlmostEqual(result["before"], result["after"], places=9)

        with self.assertRaises(ValueError):
            mixing.unital_entropy_hamiltonian_invariance(
                generators.random_davies(2, 0), np.eye(2), f)

    def test_crossing_time(self):
        """
        Verifies crossing times on a coarse grid and absent columns
        """

        curve = mixing.depolarizing_curve(2, 1.0, [0.0, 1.0, 2.0, 3.0])
        self.assertEqual(mixing.crossing_time(curve, "trace_dist", 0.2), 2.0)
        self.assertIsNone(mixing.crossing_time(curve, "trace_dist", 1e-6))
        curve.ls_bound_a2 = None
        self.assertIsNone(mixing.crossing_time(curve, "ls_bound_a2", 1.0))

    def test_curve_csv(self):
        """
        Verifies a curve survives the CSV format, empty columns included
        """

        curve = mixing.depolarizing_curve(3, 1.0, np.linspace(0, 1, 5))
        curve.ls_bound_a2 = None
        handle = io.StringIO()
        curve.to_csv(handle)
        handle.seek(0)
        header = handle.readline().strip().split(",")
        self.assertEqual(header, ["t", "trace_dist", "chi2", "rel_ent",
                                  "chi2_bound", "ls_bound_a1",
                                  "ls_bound_a2"])
        handle.seek(0)
        loaded = MixingCurve.from_csv(handle)
        assert_allclose(loaded.times, curve.times)
        assert_allclose(loaded.trace_dist, curve.trace_dist)
        assert_allclose(loaded.ls_bound_a1, curve.ls_bound_a1)
        self.assertIsNone(loaded.ls_bound_a2)
