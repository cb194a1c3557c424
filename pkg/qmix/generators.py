# -*- coding: utf-8 -*-

"""
Copyright (c) 2026 The qmix authors under the MIT License.
To view the license and requirements when distributing this software, please
view the LICENSE file at the root of the repository.

Liouvillians in the Heisenberg picture. A :class:`Generator` classifies
itself on construction (trace preservation, unitality, primitivity,
detailed balance); the ``build_*`` functions assemble the supported
families and :func:`from_dict` reads the JSON generator schema.
"""

import logging
from functools import reduce

import numpy as np
import scipy.linalg

from .errors import (NotPrimitiveError, NotTracePreservingError, QMixError,
                     SpecError, TheoryViolationError)
from .lp_space import WeightedSpace
from .models.davies_spec import DaviesSpec
from .operator_core import (Superoperator, as_matrix, check_dims,
                            devectorize, eig_hermitian, expm, haar_unitary,
                            heisenberg_from_kraus, hermitian,
                            matrix_from_json, matrix_to_json,
                            random_hermitian, vec, vectorize)


__all__ = ("Generator", "FAMILIES", "RATE_MODELS", "build_lindblad",
           "build_depolarizing", "build_projection", "build_davies",
           "lift_channel", "random_unitary", "stationary_state",
           "hat_generator", "tensor_sum", "random_lindblad", "random_davies",
           "classical_embedding", "random_cyclic_chain", "semigroup",
           "from_dict", "to_dict")

logger = logging.getLogger(__name__)

FAMILIES = ("generic", "depolarizing", "projection", "davies",
            "channel_lift", "random_unitary")

TRACE_PRESERVING_TOL = 1e-10
UNITAL_TOL = 1e-10
REVERSIBLE_TOL = 1e-8
NULL_SPACE_RCOND = 1e-9
KRAUS_CLOSURE_TOL = 1e-10
KRAUS_RANK_TOL = 1e-8
STATIONARY_TOL = 1e-9
BOHR_TOL_REL = 1e-9


def flat_kms_rate(omega, beta):
    """1 for downward transfers, ``exp(beta * omega)`` for upward ones, so
    that ``eta(-w) = exp(-beta w) eta(w)``."""
    return 1.0 if omega >= 0 else float(np.exp(beta * omega))


RATE_MODELS = {"flat_kms": flat_kms_rate}


class Generator():
    """A Liouvillian ``L`` acting on observables, together with its
    Schroedinger dual ``L*`` and the flags derived from them.

    Attributes
    ----------

    dim: :class:`int`
        Hilbert space dimension d

    hamiltonian: :class:`numpy.ndarray`
        Hamiltonian of the Lindblad realization, if known

    lindblad_ops: (:class:`numpy.ndarray`, ...)
        Jump operators of the Lindblad realization, if known

    super_L: :class:`qmix.operator_core.Superoperator`
        Heisenberg picture generator

    super_Lstar: :class:`qmix.operator_core.Superoperator`
        Hilbert-Schmidt adjoint of ``super_L``

    unital: :class:`bool`
        ``L*(1) = 0``

    primitive: :class:`bool`
        Unique full rank stationary state

    reversible: :class:`bool`
        ``Gamma_sigma L = L* Gamma_sigma``

    stationary: :class:`qmix.lp_space.WeightedSpace`
        Stationary state, present iff primitive

    family_tag: :class:`str`
        One of ``FAMILIES``

    kraus_rank: :class:`int`
        Numerical count of linearly independent Kraus operators, for
        channel lifts

    channel: :class:`qmix.operator_core.Superoperator`
        Heisenberg channel ``T`` with ``L = T - id``, for channel lifts

    null_dim: :class:`int`
        Dimension of the kernel of ``L*``
    """

    __slots__ = ("dim", "hamiltonian", "lindblad_ops", "super_L",
                 "super_Lstar", "unital", "reversible", "primitive",
                 "stationary", "family_tag", "kraus_rank", "channel",
                 "null_dim", "_hat")

    def __init__(self, super_L, **kwargs):
        self.super_L = super_L
        self.super_Lstar = super_L.adjoint()
        self.dim = super_L.dim
        self.hamiltonian = kwargs.pop("hamiltonian", None)
        self.lindblad_ops = tuple(kwargs.pop("lindblad_ops", ()))
        self.family_tag = kwargs.pop("family_tag", "generic")
        self.kraus_rank = kwargs.pop("kraus_rank", None)
        self.channel = kwargs.pop("channel", None)
        self._hat = None
        if self.family_tag not in FAMILIES:
            raise ValueError(f"unknown family {self.family_tag}")

        scale = max(1.0, float(np.max(np.abs(super_L.matrix))))
        identity = np.eye(self.dim)
        leak = np.max(np.abs(super_L(identity)))
        if leak > TRACE_PRESERVING_TOL * scale:
            raise NotTracePreservingError(f"L(1) = 0 fails by {leak:.3e}")

        self.unital = bool(np.max(np.abs(self.super_Lstar(identity)))
                           <= UNITAL_TOL * scale)
        self.stationary, self.null_dim = _solve_stationary(self.super_Lstar)
        self.primitive = self.stationary is not None
        self.reversible = False
        if self.primitive:
            gamma = self.stationary.gamma_superoperator(1.0)
            defect = (gamma @ super_L).distance(self.super_Lstar @ gamma)
            self.reversible = bool(defect <= REVERSIBLE_TOL * scale)

        logger.debug("built %s generator d=%d: %s", self.family_tag,
                     self.dim, self.flags)

    @property
    def flags(self):
        return {"unital": self.unital, "reversible": self.reversible,
                "primitive": self.primitive}

    @property
    def hat(self):
        """``L^ = Gamma^{-1} L* Gamma``, built on first access."""
        if self._hat is None:
            self._hat = hat_generator(self)
        return self._hat

    def require_primitive(self):
        if not self.primitive:
            raise NotPrimitiveError(f"generator is not primitive "
                                    f"(kernel of L* has dimension "
                                    f"{self.null_dim})")
        return self.stationary

    def __call__(self, f):
        return self.super_L(f)

    def summary(self):
        out = {"family": self.family_tag, "dim": self.dim,
               "flags": self.flags}
        if self.kraus_rank is not None:
            out["kraus_rank"] = self.kraus_rank
        return out

    def __repr__(self):
        return (f"<Generator family={self.family_tag} dim={self.dim} "
                f"flags={self.flags}>")


def _solve_stationary(super_Lstar):
    basis = scipy.linalg.null_space(super_Lstar.matrix,
                                    rcond=NULL_SPACE_RCOND)
    null_dim = basis.shape[1]
    if null_dim != 1:
        return None, null_dim

    x = devectorize(basis[:, 0], super_Lstar.dim)
    trace = np.trace(x)
    if abs(trace) < 1e-12:
        return None, null_dim
    x = x / trace
    x = (x + x.conj().T) / 2
    x = x / np.trace(x).real
    try:
        space = WeightedSpace(x)
    except QMixError:
        return None, null_dim
    return space, null_dim


def stationary_state(generator):
    """The unique full rank stationary state of a primitive generator.

    Raises
    ------

    NotPrimitiveError
        When the kernel of ``L*`` is not one dimensional or its element is
        not full rank
    """

    return generator.require_primitive()


def hat_generator(generator):
    """Dual of ``L`` for the sigma-weighted inner product,
    ``L^ = Gamma^{-1} L* Gamma``."""

    space = generator.require_primitive()
    gamma = space.gamma_superoperator(1.0)
    gamma_inv = space.gamma_superoperator(-1.0)
    hat = Generator(gamma_inv @ generator.super_Lstar @ gamma,
                    family_tag=generator.family_tag)
    hat._hat = generator
    return hat


def semigroup(generator, t, picture="heisenberg"):
    """``exp(t L)`` or, with ``picture="schroedinger"``, ``exp(t L*)``."""
    if picture == "heisenberg":
        return expm(generator.super_L, t)
    if picture == "schroedinger":
        return expm(generator.super_Lstar, t)
    raise ValueError(f"unknown picture {picture}")


def build_lindblad(hamiltonian, ops, **kwargs):
    """Heisenberg Lindblad generator

    ``L(f) = i[H, f] + sum_i L_i^H f L_i - {L_i^H L_i, f} / 2``.

    Parameters
    ----------

    hamiltonian: :class:`numpy.ndarray`
        Hermitian Hamiltonian

    ops: [:class:`numpy.ndarray`]
        Jump operators

    family_tag: :class:`str`
        Recorded on the result, ``generic`` by default
    """

    h = hermitian(hamiltonian, "hamiltonian")
    ops = [as_matrix(op, "lindblad_op") for op in ops]
    dim = check_dims(h, *ops)

    terms = [(1j * h, None), (None, -1j * h)]
    for op in ops:
        dag = op.conj().T
        k = dag @ op
        terms += [(dag, op), (-0.5 * k, None), (None, -0.5 * k)]

    return Generator(vectorize(terms, dim), hamiltonian=h, lindblad_ops=ops,
                     **kwargs)


def _projection_generator(space, gamma, family_tag):
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    d = space.dim
    rank_one = np.outer(vec(np.eye(d)), vec(space.sigma.T))
    super_L = Superoperator(gamma * (rank_one - np.eye(d * d)), d)

    w, v = space.sigma_eig
    ops = [np.sqrt(gamma * w[i]) * np.outer(v[:, i], v[:, j].conj())
           for i in range(d) for j in range(d)]
    return Generator(super_L, hamiltonian=np.zeros((d, d), complex),
                     lindblad_ops=ops, family_tag=family_tag)


def build_depolarizing(dim, gamma):
    """``L(f) = gamma (tr[f] / d - f)``."""
    if int(dim) != dim or dim < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {dim}")
    return _projection_generator(WeightedSpace.maximally_mixed(int(dim)),
                                 gamma, "depolarizing")


def build_projection(space, gamma):
    """``L(f) = gamma (tr[f sigma] 1 - f)``.

    Parameters
    ----------

    space: :class:`qmix.lp_space.WeightedSpace` or array
        Full rank target state
    """

    if not isinstance(space, WeightedSpace):
        space = WeightedSpace(space)
    return _projection_generator(space, gamma, "projection")


def _bohr_clusters(energies, tol):
    omegas = energies[None, :] - energies[:, None]
    order = np.sort(omegas.ravel())
    labels = np.zeros_like(omegas, dtype=int)
    centers = []
    start = 0
    for i in range(1, len(order) + 1):
        if i == len(order) or order[i] - order[i - 1] > tol:
            centers.append(float(np.mean(order[start:i])))
            start = i
    centers = np.array(centers)
    for idx, omega in np.ndenumerate(omegas):
        labels[idx] = int(np.argmin(np.abs(centers - omega)))
    return centers, labels


def davies_components(spec):
    """Fourier components ``S_k(w)`` of the couplings.

    Returns
    -------

    [(k, omega, S)]
        ``S`` lowers the energy by ``omega``, so that
        ``sigma_beta S = exp(beta omega) S sigma_beta``.
    """

    energies, basis = eig_hermitian(spec.hamiltonian)
    norm_h = float(np.max(np.abs(energies)))
    tol = spec.bohr_tol if spec.bohr_tol is not None \
        else BOHR_TOL_REL * norm_h
    centers, labels = _bohr_clusters(energies, tol)

    components = []
    for k, coupling in enumerate(spec.coupling_ops):
        in_basis = basis.conj().T @ coupling @ basis
        cutoff = 1e-14 * max(1.0, float(np.max(np.abs(coupling))))
        for c, omega in enumerate(centers):
            block = np.where(labels == c, in_basis, 0)
            if np.max(np.abs(block)) <= cutoff:
                continue
            components.append((k, float(omega),
                               basis @ block @ basis.conj().T))
    return components


def build_davies(spec):
    """Thermal generator ``L_0 + sum_{k,w} L_{k,w}`` with jump operators
    ``sqrt(eta(w)) S_k(w)``.

    Parameters
    ----------

    spec: :class:`qmix.models.davies_spec.DaviesSpec`

    Raises
    ------

    NotPrimitiveError
        When the couplings do not connect the spectrum of H
    """

    try:
        rate = RATE_MODELS[spec.rate_model]
    except KeyError:
        raise ValueError(f"unknown rate model {spec.rate_model}")

    gibbs = WeightedSpace.gibbs(spec.hamiltonian, spec.beta)
    ops = []
    for _, omega, s in davies_components(spec):
        kms = gibbs.sigma @ s - np.exp(spec.beta * omega) * s @ gibbs.sigma
        if np.max(np.abs(kms)) > STATIONARY_TOL * max(1.0, np.max(np.abs(s))):
            raise TheoryViolationError("KMS relation of a Bohr component "
                                       "fails", lhs=float(np.max(np.abs(kms))),
                                       rhs=0.0)
        ops.append(np.sqrt(rate(omega, spec.beta)) * s)

    d = spec.hamiltonian.shape[0]
    h = np.zeros((d, d), complex) if spec.rotating_frame \
        else spec.hamiltonian
    generator = build_lindblad(h, ops, family_tag="davies")
    if not generator.primitive:
        raise NotPrimitiveError("Davies generator is not primitive; the "
                                "couplings do not connect the spectrum of H")

    drift = float(np.max(np.abs(generator.stationary.sigma - gibbs.sigma)))
    if drift > STATIONARY_TOL:
        raise TheoryViolationError("stationary state differs from the Gibbs "
                                   "state", lhs=drift, rhs=0.0)
    return generator


def kraus_rank(kraus):
    """Number of linearly independent Kraus operators at threshold
    ``1e-8 * s_max``."""
    stacked = np.array([vec(k) for k in kraus]).T
    s = scipy.linalg.svdvals(stacked)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > KRAUS_RANK_TOL * s[0]))


def lift_channel(kraus, lazy=False, family_tag="channel_lift"):
    """``L = T - id`` for the Heisenberg channel ``T(f) = sum K^H f K``.

    Parameters
    ----------

    kraus: [:class:`numpy.ndarray`]
        Kraus operators with ``sum K^H K = 1``

    lazy: :class:`bool`
        Replace ``T`` by ``(id + T) / 2`` first
    """

    kraus = [as_matrix(k, "kraus") for k in kraus]
    if not kraus:
        raise NotTracePreservingError("empty Kraus set")
    d = check_dims(*kraus)
    closure = sum(k.conj().T @ k for k in kraus)
    defect = float(np.max(np.abs(closure - np.eye(d))))
    if defect > KRAUS_CLOSURE_TOL:
        raise NotTracePreservingError(f"sum K^H K differs from 1 by "
                                      f"{defect:.3e}")
    if lazy:
        kraus = [np.eye(d, dtype=complex) / np.sqrt(2)] \
            + [k / np.sqrt(2) for k in kraus]

    channel = heisenberg_from_kraus(kraus)
    return Generator(channel - Superoperator.identity(d),
                     hamiltonian=np.zeros((d, d), complex),
                     lindblad_ops=kraus, family_tag=family_tag,
                     kraus_rank=kraus_rank(kraus), channel=channel)


def random_unitary(dim, D, seed, reversible=True, lazy=False):
    """Lift of a mixture of ``D`` Haar random unitaries with equal weights.

    With ``reversible`` the channel is averaged with its adjoint, which
    doubles the Kraus list to ``{U_i, U_i^H} / sqrt(2D)``.
    """

    if D < 1:
        raise ValueError("D must be >= 1")
    rng = np.random.default_rng(seed)
    unitaries = [haar_unitary(dim, rng) for _ in range(D)]
    if reversible:
        kraus = [u / np.sqrt(2 * D) for u in unitaries] \
            + [u.conj().T / np.sqrt(2 * D) for u in unitaries]
    else:
        kraus = [u / np.sqrt(D) for u in unitaries]
    return lift_channel(kraus, lazy=lazy, family_tag="random_unitary")


def _embed(op, position, dims):
    left = int(np.prod(dims[:position], dtype=int))
    right = int(np.prod(dims[position + 1:], dtype=int))
    return reduce(np.kron, [np.eye(left), op, np.eye(right)])


def tensor_sum(generators):
    """``L^(N) = sum_k id x ... x L_k x ... x id`` built from the Lindblad
    realizations of the factors."""

    dims = [g.dim for g in generators]
    h = np.zeros((int(np.prod(dims)),) * 2, complex)
    ops = []
    for k, g in enumerate(generators):
        if g.hamiltonian is None:
            raise ValueError("tensor_sum needs generators with a Lindblad "
                             "realization")
        h = h + _embed(g.hamiltonian, k, dims)
        ops += [_embed(op, k, dims) for op in g.lindblad_ops]
    return build_lindblad(h, ops)


def random_lindblad(dim, seed, n_ops=2, h_scale=1.0):
    """Generic generator with Gaussian Hamiltonian and Ginibre jumps."""
    rng = np.random.default_rng(seed)
    h = random_hermitian(dim, rng, h_scale)
    ops = [(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
           / np.sqrt(2 * dim) for _ in range(n_ops)]
    return build_lindblad(h, ops)


def random_davies(dim, seed, n_couplings=1, beta=None):
    """Davies generator with a random non degenerate spectrum, random
    eigenbasis and random Hermitian couplings."""
    rng = np.random.default_rng(seed)
    energies = np.sort(rng.uniform(0.0, 2.0, size=dim))
    basis = haar_unitary(dim, rng)
    h = (basis * energies) @ basis.conj().T
    couplings = [random_hermitian(dim, rng) for _ in range(n_couplings)]
    beta = float(rng.uniform(0.2, 2.0)) if beta is None else beta
    return build_davies(DaviesSpec(hamiltonian=(h + h.conj().T) / 2,
                                   coupling_ops=couplings, beta=beta))


def classical_embedding(rates):
    """Embeds a classical rate matrix, ``rates[i, j]`` being the rate of
    ``i -> j``, through jump operators ``sqrt(r_ij) |j><i|``."""
    rates = np.asarray(rates, dtype=float)
    d = rates.shape[0]
    if np.any(rates < 0):
        raise ValueError("rates must be nonnegative")
    ops = []
    for i in range(d):
        for j in range(d):
            if i != j and rates[i, j] > 0:
                op = np.zeros((d, d), complex)
                op[j, i] = np.sqrt(rates[i, j])
                ops.append(op)
    return build_lindblad(np.zeros((d, d), complex), ops)


def random_cyclic_chain(dim, seed):
    """Doubly stochastic cycle with unequal forward and backward rates:
    unital, and not reversible for ``dim >= 3``."""
    rng = np.random.default_rng(seed)
    forward = float(rng.uniform(1.0, 3.0))
    backward = float(rng.uniform(0.05, 0.5))
    rates = np.zeros((dim, dim))
    for i in range(dim):
        rates[i, (i + 1) % dim] += forward
        rates[(i + 1) % dim, i] += backward
    return classical_embedding(rates)


def _number(spec, name, minimum=None, integer=False, default=None):
    value = spec.get(name, default)
    if value is None:
        raise SpecError("missing field", field=name)
    if isinstance(value, bool) or not isinstance(value, (int, float)) \
            or (integer and int(value) != value):
        raise SpecError(f"{name} must be {'an integer' if integer else 'a number'}",
                        field=name)
    if minimum is not None and value < minimum:
        raise SpecError(f"{name} must be >= {minimum}", field=name)
    return int(value) if integer else float(value)


def _matrix_list(spec, name):
    items = spec.get(name, [])
    if not isinstance(items, list):
        raise SpecError("expected a list of matrices", field=name)
    return [matrix_from_json(m, f"{name}[{i}]") for i, m in enumerate(items)]


def _parse_generic(spec):
    if "hamiltonian" not in spec:
        raise SpecError("missing field", field="hamiltonian")
    return build_lindblad(matrix_from_json(spec["hamiltonian"], "hamiltonian"),
                          _matrix_list(spec, "lindblad_ops"))


def _parse_depolarizing(spec):
    return build_depolarizing(_number(spec, "dim", 2, integer=True),
                              _number(spec, "gamma", 0.0))


def _parse_projection(spec):
    if "sigma" not in spec:
        raise SpecError("missing field", field="sigma")
    return build_projection(matrix_from_json(spec["sigma"], "sigma"),
                            _number(spec, "gamma", 0.0))


def _parse_davies(spec):
    return build_davies(DaviesSpec.from_dict(spec))


def _parse_channel(spec):
    if "kraus" not in spec:
        raise SpecError("missing field", field="kraus")
    return lift_channel(_matrix_list(spec, "kraus"),
                        lazy=bool(spec.get("lazy", False)))


def _parse_random_unitary(spec):
    return random_unitary(_number(spec, "dim", 1, integer=True),
                          _number(spec, "D", 1, integer=True),
                          _number(spec, "seed", 0, integer=True),
                          reversible=bool(spec.get("reversible", True)),
                          lazy=bool(spec.get("lazy", False)))


PARSERS = {
    "generic": _parse_generic,
    "depolarizing": _parse_depolarizing,
    "projection": _parse_projection,
    "davies": _parse_davies,
    "channel": _parse_channel,
    "random_unitary": _parse_random_unitary,
}


def from_dict(spec):
    """
    Returns the Generator described by a decoded generator JSON object.

    spec: dict

    Raises
    ------

    SpecError
        When the object does not match the schema
    NotPrimitiveError
        Passed through from the Davies builder
    """

    if not isinstance(spec, dict):
        raise SpecError("generator spec must be a JSON object")
    family = spec.get("family")
    if family not in PARSERS:
        raise SpecError(f"unknown family {family!r}, expected one of "
                        f"{sorted(PARSERS)}", field="family")
    try:
        return PARSERS[family](spec)
    except (SpecError, NotPrimitiveError):
        raise
    except (QMixError, ValueError) as exc:
        raise SpecError(str(exc), field=family)


def to_dict(generator):
    """Generic-family JSON for a generator with a Lindblad realization, so
    that any scanned instance can be rebuilt with :func:`from_dict`."""

    if generator.hamiltonian is None:
        raise ValueError("generator has no Lindblad realization")
    return {"family": "generic",
            "hamiltonian": matrix_to_json(generator.hamiltonian),
            "lindblad_ops": [matrix_to_json(op)
                             for op in generator.lindblad_ops]}
