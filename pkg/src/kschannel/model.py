"""Hemisphere hidden-variable model for a single qubit (Kochen-Specker, 1969).

The classical state is a unit vector x.  Preparing the Bloch vector v puts
x on the open hemisphere around v with density

    rho(x | v) = (v . x) / pi   for v . x > 0,   0 otherwise,

a measurement along m answers "+" exactly when x . m >= 0, and averaging
over a uniform state prior leaves the constant marginal rho(x) = 1/(4 pi).
Integrating the response against the conditional density reproduces the
Born rule (1 + v.m)/2, which is what makes the model a faithful classical
account of prepare-and-measure statistics; the quadrature checks live in
:mod:`kschannel.quadrature`.
"""

from __future__ import annotations

from typing import Any, Protocol, runtime_checkable

import numpy as np

from .geometry import Measurement, dot3, random_unit_vec, require_unit, rotate_to_frame, sphere_from_zphi

#: conditional density on its support, divided by the dot product
DENSITY_SCALE = 1.0 / np.pi

#: the state-averaged (marginal) density: uniform on the sphere
MARGINAL_DENSITY = 1.0 / (4.0 * np.pi)


def ks_density(x, v) -> np.ndarray | float:
    """Conditional density rho(x|v) = (v.x)/pi on the hemisphere v.x > 0.

    Both arguments must be unit vectors (ValueError otherwise); broadcasts
    over leading axes.
    """
    x = require_unit(x, "ontic state x")
    v = require_unit(v, "state v")
    d = dot3(x, v)
    out = np.where(d > 0.0, d * DENSITY_SCALE, 0.0)
    return float(out) if out.ndim == 0 else out


def ks_sample(v, rng: np.random.Generator, n: int | None = None) -> np.ndarray:
    """Draw x ~ rho(.|v) by inverse CDF in the polar coordinate.

    The height z = v.x has marginal density 2z on (0, 1], so z = sqrt(u)
    with u ~ U(0, 1]; the azimuth about v is uniform.  ``n`` draws per call
    when given, a single (3,) sample otherwise; v may itself be a batch of
    states (one draw each).
    """
    v = np.asarray(v, dtype=float)
    size = v.shape[:-1] if n is None else (n,)
    u = 1.0 - rng.random(size)  # (0, 1]: keeps every sample strictly on the open hemisphere
    z = np.sqrt(u)
    phi = rng.uniform(0.0, 2.0 * np.pi, size=size)
    return rotate_to_frame(sphere_from_zphi(z, phi), v)


def ks_response(x, meas: Measurement) -> np.ndarray | int:
    """Deterministic outcome: +1 iff x.m >= 0, else -1 (ties go to +1)."""
    d = dot3(x, meas.direction)
    out = np.where(d >= 0.0, 1, -1)
    return int(out) if out.ndim == 0 else out


def ks_marginal(x) -> np.ndarray | float:
    """State-averaged density: the constant 1/(4 pi) for every unit x."""
    x = np.asarray(x, dtype=float)
    out = np.full(x.shape[:-1], MARGINAL_DENSITY)
    return float(out) if out.ndim == 0 else out


@runtime_checkable
class OntologicalModel(Protocol):
    """Contract for a hidden-variable model usable by the MI estimator.

    States and model points are opaque batches (leading axis = sample);
    densities are per-sample positive reals.  ``sample_state`` draws from
    the model's own state prior, so discrete toy models fit the same
    estimator as the sphere model.
    """

    def sample_state(self, n: int, rng: np.random.Generator) -> Any: ...

    def sample_ontic(self, states: Any, rng: np.random.Generator) -> Any: ...

    def conditional_density(self, x: Any, states: Any) -> np.ndarray: ...

    def marginal_density(self, x: Any) -> np.ndarray: ...

    def response(self, x: Any, meas: Measurement) -> np.ndarray: ...


class KsModel:
    """The hemisphere model packaged behind the :class:`OntologicalModel` contract.

    Stateless: both densities are closed-form, the prior is the uniform
    sphere measure, and all methods are pure given an explicit generator.
    """

    def sample_state(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return random_unit_vec(rng, n)

    def sample_ontic(self, states, rng: np.random.Generator) -> np.ndarray:
        return ks_sample(states, rng)

    def conditional_density(self, x, states) -> np.ndarray:
        return np.asarray(ks_density(x, states))

    def marginal_density(self, x) -> np.ndarray:
        return np.asarray(ks_marginal(x))

    def response(self, x, meas: Measurement) -> np.ndarray:
        return np.asarray(ks_response(x, meas))
