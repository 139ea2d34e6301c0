"""Central force field analysis: energy balances, bound-state threshold,
and expectation bounds for model interatomic potentials.

Conventions: attractive power-law wells V(r) = -beta / r^alpha with beta > 0;
energies are reported in the state's unit system. Divergent potential
expectations are first-class outcomes with a signed direction, never clipped
to large numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, MomentValue, PhysicalConstants
from . import moments as mo
from .states import ContinuousState


@dataclass(frozen=True)
class PowerLawPotential:
    """V(r) = -beta / r^alpha."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= 0.0:
            raise DomainError("alpha must be positive")
        if self.beta <= 0.0:
            raise DomainError("beta must be positive")


@dataclass(frozen=True)
class LennardJonesPotential:
    """V(r) = 4 eps [ (sigma/r)^12 - (sigma/r)^6 ]."""

    epsilon: float
    sigma: float

    def __post_init__(self):
        if self.epsilon <= 0.0 or self.sigma <= 0.0:
            raise DomainError("epsilon and sigma must be positive")


@dataclass(frozen=True)
class BuckinghamPotential:
    """V(r) = gamma [ e^{-r/r0} - (sigma/r)^6 ]."""

    gamma: float
    r0: float
    sigma: float

    def __post_init__(self):
        if self.gamma <= 0.0 or self.r0 <= 0.0 or self.sigma <= 0.0:
            raise DomainError("gamma, r0, sigma must be positive")


@dataclass(frozen=True)
class VirialReport:
    """Kinetic/potential means, total energy, and the scale-free residual
    |<T> + (alpha/2)<V>| / max(|<T>|, |<V>|).

    The residual vanishes only for true eigenstates of the matching
    potential; it is reported, never asserted. e_formula is the closed-form
    total (alpha/2 - 1) beta <r^-alpha> implied by the balance.
    """

    mean_T: float
    mean_V: float
    total_E: float
    virial_residual: float
    e_formula: float
    alpha: float
    beta: float


def virial_report(
    s: ContinuousState,
    v: PowerLawPotential,
    constants: PhysicalConstants | None = None,
) -> VirialReport:
    """Energy balance of the state in the well; <r^-alpha> must converge."""
    del constants  # the state's own unit system governs both terms
    inv_alpha = mo.raw_moment(s, mo.radial(), -v.alpha).require()
    mean_v = -v.beta * inv_alpha
    mean_t = s.kinetic_energy()
    residual = abs(mean_t + 0.5 * v.alpha * mean_v) / max(abs(mean_t), abs(mean_v))
    return VirialReport(
        mean_T=mean_t,
        mean_V=mean_v,
        total_E=mean_t + mean_v,
        virial_residual=residual,
        e_formula=(0.5 * v.alpha - 1.0) * v.beta * inv_alpha,
        alpha=v.alpha,
        beta=v.beta,
    )


def ground_energy_estimate(
    delta_r2: float,
    mean_r_inv_alpha: MomentValue,
    v: PowerLawPotential,
    c: PhysicalConstants,
) -> float:
    """hbar^2/(8 m dr^2) - beta <r^-alpha>: the radial kinetic floor minus the
    attraction. This is an estimate only; no comparison direction is chosen
    (the bound's direction is ambiguous), callers see the raw value."""
    if delta_r2 <= 0.0:
        raise DomainError("radial variance must be positive")
    return c.hbar**2 / (8.0 * c.mass * delta_r2) - v.beta * mean_r_inv_alpha.require()


def bound_threshold_radius(mean_r2: float, b: float, minus_root: bool = False) -> float:
    """The positive root of b <r>^2 + <r> - b <r^2> = 0, i.e. the radius at
    which the kinetic floor hbar^2/(8m dr^2) equals the attraction beta/<r>
    (alpha = 1, b = 8 m beta / hbar^2). The negative root is exposed for
    debugging only."""
    if mean_r2 <= 0.0 or b <= 0.0:
        raise DomainError("mean_r2 and b must be positive")
    disc = math.sqrt(0.25 / (b * b) + mean_r2)
    if minus_root:
        return -0.5 / b - disc
    return -0.5 / b + disc


@dataclass(frozen=True)
class BuckinghamResult:
    bound: float
    actual: MomentValue
    consistent: bool


def buckingham_bound(s: ContinuousState, v: BuckinghamPotential) -> BuckinghamResult:
    """Upper bound gamma[<e^-r/r0> - sigma^6/<r^6>] against the true mean.

    actual = gamma[<e^-r/r0> - sigma^6 <r^-6>] when <r^-6> converges; a
    divergent <r^-6> means the true mean is -infinity and the bound holds
    vacuously."""
    exp_obs = mo.custom_radial(lambda r: np.exp(-r / v.r0), 0.0, "exp(-r/r0)")
    mean_exp = mo.raw_moment(s, exp_obs, 1.0).require()
    r6 = mo.raw_moment(s, mo.radial(), 6.0).require()
    bound = v.gamma * (mean_exp - v.sigma**6 / r6)
    rm6 = mo.raw_moment(s, mo.radial(), -6.0)
    if not rm6.is_convergent:
        actual = MomentValue.divergent(
            1.0, f"<V> diverges to -infinity: <r^-6> {rm6.detail}"
        )
        return BuckinghamResult(bound, actual, consistent=True)
    value = v.gamma * (mean_exp - v.sigma**6 * rm6.value)
    actual = MomentValue.convergent(value, rm6.err_estimate * v.gamma * v.sigma**6, 1.0)
    consistent = value <= bound + 1e-10 * max(1.0, abs(bound))
    return BuckinghamResult(bound, actual, consistent)


def lennard_jones_mean(s: ContinuousState, v: LennardJonesPotential) -> MomentValue:
    """<V_LJ> = 4 eps [sigma^12 <r^-12> - sigma^6 <r^-6>], convergent only
    when both inverse moments converge; otherwise divergent with the
    offending moment named."""
    rm12 = mo.raw_moment(s, mo.radial(), -12.0)
    if not rm12.is_convergent:
        return MomentValue.divergent(
            1.0, f"<V_LJ> diverges to +infinity: <r^-12> {rm12.detail}"
        )
    rm6 = mo.raw_moment(s, mo.radial(), -6.0)
    if not rm6.is_convergent:
        return MomentValue.divergent(
            1.0, f"<V_LJ> diverges: <r^-6> {rm6.detail}"
        )
    value = 4.0 * v.epsilon * (v.sigma**12 * rm12.value - v.sigma**6 * rm6.value)
    err = 4.0 * v.epsilon * (v.sigma**12 * rm12.err_estimate + v.sigma**6 * rm6.err_estimate)
    return MomentValue.convergent(value, err, 1.0)
