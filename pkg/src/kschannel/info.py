"""Mutual information between the prepared state and the model state.

All entropies are differential, all logarithms base 2, all results in bits.
For the hemisphere model every quantity has a closed form or a 1-D
quadrature thanks to rotational symmetry:

    h(X|Psi) = log2(pi) + 1/(2 ln 2)  ~ 2.3728 bits   (finite)
    h(X)     = log2(4 pi)             ~ 3.6515 bits   (finite)
    I(X:Psi) = 2 - 1/(2 ln 2)         ~ 1.2787 bits

Finiteness of both entropies is the property that lets the model be turned
into a finite-communication protocol at all.  Models in which distinct
states occupy disjoint supports carry the full state description in each
sample; their mutual information diverges and no finite entropy exists to
compute, so no such number is offered here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .geometry import require_unit
from .model import OntologicalModel

_LN2 = np.log(2.0)


def exact_ks_mi() -> float:
    """Closed-form I(X:Psi) of the hemisphere model: 2 - 1/(2 ln 2) bits."""
    return float(2.0 - 1.0 / (2.0 * _LN2))


def conditional_entropy_ks() -> float:
    """Differential entropy of rho(.|v) in bits, identical for every v.

    With z = v.x distributed as 2z dz on (0, 1], the entropy reduces to the
    1-D integral -2 int_0^1 z log2(z/pi) dz = log2(pi) + 1/(2 ln 2).
    """
    value, _ = quad(lambda z: -2.0 * z * np.log2(z / np.pi), 0.0, 1.0,
                    epsabs=1e-12, epsrel=1e-12)
    return value


def marginal_entropy_ks() -> float:
    """Entropy of the uniform marginal on the sphere: log2(4 pi) bits."""
    return float(np.log2(4.0 * np.pi))


def kl_divergence_ks(v) -> float:
    """D( rho(.|v) || rho(.) ) in bits; equal to I(X:Psi) for every unit v.

    The density ratio on the support is 4 (v.x), so the divergence is the
    1-D integral int_0^1 2z log2(4z) dz, independent of v by rotational
    symmetry.
    """
    require_unit(v, "state v")
    value, _ = quad(lambda z: 2.0 * z * np.log2(4.0 * z), 0.0, 1.0,
                    epsabs=1e-12, epsrel=1e-12)
    return value


@dataclass(frozen=True)
class MiEstimate:
    """Monte Carlo mutual-information estimate with its standard error."""

    value: float
    std_error: float
    n_samples: int

    def brackets(self, target: float, n_sigma: float = 3.0) -> bool:
        """True when ``target`` lies within n_sigma standard errors of the estimate."""
        return abs(self.value - target) <= n_sigma * self.std_error


def mc_mutual_information(model: OntologicalModel, n: int, rng: np.random.Generator,
                          chunk: int = 1 << 18) -> MiEstimate:
    """Monte Carlo estimate of I(X:Psi) for any model exposing its densities.

    Draws states from the model prior, a model point per state, and averages
    log2[ conditional / marginal ] over the pairs; the standard error is the
    sample deviation over sqrt(n).  Requires n >= 1000.  A vanishing marginal
    at a sampled point is a hard error (it cannot occur for the hemisphere
    model, whose marginal is constant).
    """
    if n < 1000:
        raise ValueError(f"need at least 1000 samples for a usable estimate, got {n}")
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < n:
        m = min(chunk, n - done)
        states = model.sample_state(m, rng)
        x = model.sample_ontic(states, rng)
        cond = np.asarray(model.conditional_density(x, states), dtype=float)
        marg = np.asarray(model.marginal_density(x), dtype=float)
        if np.any(marg <= 0.0):
            raise ValueError("marginal density vanished at a sampled point")
        w = np.log2(cond / marg)
        total += float(np.sum(w))
        total_sq += float(np.sum(w * w))
        done += m
    mean = total / n
    var = max(0.0, (total_sq - n * mean * mean) / (n - 1))
    return MiEstimate(value=mean, std_error=float(np.sqrt(var / n)), n_samples=n)
