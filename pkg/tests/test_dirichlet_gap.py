# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.
"""

import unittest

import numpy as np
from numpy.testing import assert_allclose

from qmix import dirichlet_gap, generators
from qmix.errors import NotPositiveError, NotPrimitiveError
from qmix.operator_core import (matrix_function, random_density,
                                random_hermitian)


def positive(dim, rng):
    return matrix_function(random_hermitian(dim, rng, 0.5), np.exp,
                           eig_floor=None)


class TestDirichletGap(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(23)

    def test_depolarizing_gap(self):
        """
        Verifies the depolarizing gap equals gamma for d = 2 .. 8
        """

        for d in range(2, 9):
            report = dirichlet_gap.spectral_gap(
                generators.build_depolarizing(d, 1.0), witnesses=20)
            self.assertAlmostEqual(report.lambda_, 1.0, delta=1e-10)
            self.assertEqual(report.method, "eigen_symmetrization")

    def test_projection_gap(self):
        """
        Verifies the projection generator has gap gamma for any sigma
        """

        generator = generators.build_projection(
            random_density(3, self.rng), 2.5)
        report = dirichlet_gap.spectral_gap(generator, witnesses=20)
        self.assertAlmostEqual(report.lambda_, 2.5, delta=1e-9)

    def test_gap_witness(self):
        """
        Verifies the witness attains the gap and random witnesses never
        undercut it
        """

        for seed in range(10):
            generator = generators.random_lindblad(3, seed)
            report = dirichlet_gap.spectral_gap(generator, witnesses=50,
                                                seed=seed)
            self.assertGreater(report.lambda_, 0.0)
            self.assertAlmostEqual(
                dirichlet_gap.gap_ratio(generator, report.witness),
                report.lambda_, delta=1e-8 * (1 + report.lambda_))
            self.assertGreaterEqual(report.min_witness_ratio,
                                    report.lambda_ * (1 - 1e-6))
            self.assertLess(report.residual, 1e-8)

    def test_gap_report_serialization(self):
        """
        Verifies the gap report serializes lambda under its public name
        """

        report = dirichlet_gap.spectral_gap(
            generators.build_depolarizing(2, 1.0), witnesses=5)
        data = report.to_dict()
        self.assertIn("lambda", data)
        self.assertNotIn("lambda_", data)

    def test_dirichlet_two(self):
        """
        Verifies E_2(f) = -<f, L f>_sigma is nonnegative and vanishes on
        constants
        """

        generator = generators.random_davies(3, 6)
        for _ in range(20):
            f = random_hermitian(3, self.rng)
            self.assertGreaterEqual(dirichlet_gap.dirichlet_p(generator, 2,
                                                              f), -1e-12)
        self.assertAlmostEqual(dirichlet_gap.dirichlet_p(generator, 2,
                                                         np.eye(3)), 0.0)

    def test_dirichlet_continuity_at_one(self):
        """
        Verifies E_p tends to the p = 1 closed form as p decreases to 1
        """

        generator = generators.random_lindblad(3, 2)
        for _ in range(10):
            f = positive(3, self.rng)
            one = dirichlet_gap.dirichlet_p(generator, 1, f)
            near = dirichlet_gap.dirichlet_p(generator, 1.0001, f)
            self.assertAlmostEqual(near, one, delta=1e-3 * (1 + abs(one)))

    def test_dirichlet_hat_reversible(self):
        """
        Verifies E^_p = E_p for reversible generators
        """

        generator = generators.random_davies(2, 9)
        for p in (1, 1.5, 2, 3):
            f = positive(2, self.rng)
            assert_allclose(dirichlet_gap.dirichlet_hat_p(generator, p, f),
                            dirichlet_gap.dirichlet_p(generator, p, f),
                            rtol=1e-7, atol=1e-10)

    def test_dirichlet_one_positivity(self):
        """
        Verifies the p = 1 form requires a positive definite observable
        """

        generator = generators.build_depolarizing(2, 1.0)
        with self.assertRaises(NotPositiveError):
            dirichlet_gap.dirichlet_p(generator, 1,
                                      np.diag([1.0, -1.0]).astype(complex))
        with self.assertRaises(ValueError):
            dirichlet_gap.dirichlet_p(generator, 0.5, np.eye(2))

    def test_not_primitive(self):
        """
        Verifies the gap of a non primitive generator is refused
        """

        generator = generators.build_lindblad(np.diag([1.0, -1.0]), [])
        with self.assertRaises(NotPrimitiveError):
            dirichlet_gap.spectral_gap(generator)

    def test_real_spectrum(self):
        """
        Verifies reversible generators have a real spectrum
        """

        for seed in range(5):
            generator = generators.random_davies(3, seed)
            eigenvalues = dirichlet_gap.spectrum(generator)
            self.assertLess(np.max(np.abs(eigenvalues.imag)), 1e-8)
            self.assertLess(np.max(eigenvalues.real), 1e-9)

    def test_symmetrized_hermitian(self):
        """
        Verifies the symmetrization is Hermitian with a simple zero
        eigenvalue
        """

        generator = generators.random_cyclic_chain(3, 0)
        m = dirichlet_gap.symmetrized_generator(generator)
        assert_allclose(m, m.conj().T, atol=1e-14)
        w = np.linalg.eigvalsh(m)
        self.assertAlmostEqual(w[-1], 0.0, delta=1e-10)
        self.assertLess(w[-2], 0.0)
