"""Simulators for the four model families used in the power studies.

Families: ARMA(1,1), MA(2), a 2-dependent product of three consecutive
innovations, and GARCH(1,1), all driven by i.i.d. Gaussian innovations.
A change point is introduced by switching the parameter set mid-series
while carrying the recursion state (lagged observations, innovations and
conditional variances) across the break, so the parameter change is the
only discontinuity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .autocov import TimeSeries

DEFAULT_BURN_IN = 500


class Family(str, Enum):
    ARMA11 = "arma11"
    MA2 = "ma2"
    PRODUCT2DEP = "product2dep"
    GARCH11 = "garch11"


_PARAM_NAMES: dict[Family, tuple[str, ...]] = {
    Family.ARMA11: ("phi", "theta"),
    Family.MA2: ("theta1", "theta2"),
    Family.PRODUCT2DEP: ("mu_z", "sigma_z"),
    Family.GARCH11: ("omega", "alpha", "beta"),
}


@dataclass(frozen=True)
class ModelSpec:
    """One parameterized model.

    ``params`` is family-specific: (phi, theta) for ARMA11, (theta1,
    theta2) for MA2, (mu_z, sigma_z) for PRODUCT2DEP, (omega, alpha, beta)
    for GARCH11.  ``noise_sigma`` is the innovation standard deviation for
    ARMA11/MA2/GARCH11; the PRODUCT2DEP innovation law is fully set by
    (mu_z, sigma_z), so there noise_sigma must stay at 1.
    """

    family: Family
    params: tuple[float, ...]
    noise_sigma: float = 1.0

    def __post_init__(self) -> None:
        family = Family(self.family)
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", params)
        names = _PARAM_NAMES[family]
        if len(params) != len(names):
            raise ValueError(
                f"{family.value} expects {len(names)} parameters "
                f"{names}, got {len(params)}"
            )
        if not all(math.isfinite(p) for p in params):
            raise ValueError("model parameters must be finite")
        if not self.noise_sigma > 0.0:
            raise ValueError(f"noise_sigma must be positive, got {self.noise_sigma}")
        if family is Family.ARMA11 and not abs(params[0]) < 1.0:
            raise ValueError(f"ARMA(1,1) needs |phi| < 1, got phi={params[0]}")
        if family is Family.PRODUCT2DEP:
            if not params[1] > 0.0:
                raise ValueError(f"sigma_z must be positive, got {params[1]}")
            if self.noise_sigma != 1.0:
                raise ValueError(
                    "product2dep sets the innovation scale through sigma_z; "
                    "leave noise_sigma at 1"
                )
        if family is Family.GARCH11:
            omega, alpha, beta = params
            if not omega > 0.0:
                raise ValueError(f"GARCH needs omega > 0, got {omega}")
            if alpha < 0.0 or beta < 0.0:
                raise ValueError("GARCH needs alpha >= 0 and beta >= 0")
            if not alpha + beta < 1.0:
                raise ValueError(
                    f"GARCH needs alpha + beta < 1 for stationarity, "
                    f"got {alpha + beta}"
                )

    @classmethod
    def arma11(cls, phi: float, theta: float, noise_sigma: float = 1.0) -> "ModelSpec":
        return cls(Family.ARMA11, (phi, theta), noise_sigma)

    @classmethod
    def ma2(cls, theta1: float, theta2: float, noise_sigma: float = 1.0) -> "ModelSpec":
        return cls(Family.MA2, (theta1, theta2), noise_sigma)

    @classmethod
    def product2dep(cls, mu_z: float = 0.0, sigma_z: float = 1.0) -> "ModelSpec":
        return cls(Family.PRODUCT2DEP, (mu_z, sigma_z))

    @classmethod
    def garch11(cls, omega: float, alpha: float, beta: float,
                noise_sigma: float = 1.0) -> "ModelSpec":
        return cls(Family.GARCH11, (omega, alpha, beta), noise_sigma)

    def describe(self) -> str:
        names = _PARAM_NAMES[self.family]
        parts = [f"{name}={value:g}" for name, value in zip(names, self.params)]
        return f"{self.family.value}({', '.join(parts)})"


@dataclass(frozen=True)
class ChangeSpec:
    """Parameter change after observation ``change_index``.

    Observations 1..change_index follow ``spec_before``; the rest follow
    ``spec_after``.  Both specs must share a family.
    """

    change_index: int
    spec_before: ModelSpec
    spec_after: ModelSpec

    def __post_init__(self) -> None:
        if self.change_index < 1:
            raise ValueError(f"change_index must be >= 1, got {self.change_index}")
        if self.spec_before.family is not self.spec_after.family:
            raise ValueError(
                f"change must stay within one family, got "
                f"{self.spec_before.family.value} -> {self.spec_after.family.value}"
            )


def _segment(before: float, after: float, split: int, total: int) -> np.ndarray:
    out = np.full(total, after, dtype=np.float64)
    out[:split] = before
    return out


def _sim_arma11(before: ModelSpec, after: ModelSpec, split: int, total: int,
                rng: np.random.Generator) -> np.ndarray:
    phi = _segment(before.params[0], after.params[0], split, total)
    theta = _segment(before.params[1], after.params[1], split, total)
    sigma = _segment(before.noise_sigma, after.noise_sigma, split, total)
    z = sigma * rng.standard_normal(total)
    z_lag = np.zeros(total)
    z_lag[1:] = z[:-1]
    drive = (z + theta * z_lag).tolist()
    phi_list = phi.tolist()
    out = [0.0] * total
    prev = 0.0
    for t in range(total):
        prev = phi_list[t] * prev + drive[t]
        out[t] = prev
    return np.asarray(out)


def _sim_ma2(before: ModelSpec, after: ModelSpec, split: int, total: int,
             rng: np.random.Generator) -> np.ndarray:
    theta1 = _segment(before.params[0], after.params[0], split, total)
    theta2 = _segment(before.params[1], after.params[1], split, total)
    sigma = _segment(before.noise_sigma, after.noise_sigma, split, total)
    z = sigma * rng.standard_normal(total)
    z1 = np.zeros(total)
    z1[1:] = z[:-1]
    z2 = np.zeros(total)
    z2[2:] = z[:-2]
    return z + theta1 * z1 + theta2 * z2


def _sim_product2dep(before: ModelSpec, after: ModelSpec, split: int, total: int,
                     rng: np.random.Generator) -> np.ndarray:
    # Two pre-sample innovations feed the first product; they precede the
    # break, so they always draw from the pre-break law.
    mu = _segment(before.params[0], after.params[0], split + 2, total + 2)
    sigma = _segment(before.params[1], after.params[1], split + 2, total + 2)
    z = mu + sigma * rng.standard_normal(total + 2)
    return z[2:] * z[1:-1] * z[:-2]


def _sim_garch11(before: ModelSpec, after: ModelSpec, split: int, total: int,
                 rng: np.random.Generator) -> np.ndarray:
    omega = _segment(before.params[0], after.params[0], split, total).tolist()
    alpha = _segment(before.params[1], after.params[1], split, total).tolist()
    beta = _segment(before.params[2], after.params[2], split, total).tolist()
    sigma = _segment(before.noise_sigma, after.noise_sigma, split, total)
    z = (sigma * rng.standard_normal(total)).tolist()
    # Start from the stationary variance of the pre-break parameters.
    var = before.params[0] / (1.0 - before.params[1] - before.params[2])
    out = [0.0] * total
    prev = 0.0
    for t in range(total):
        if t > 0:
            var = omega[t] + alpha[t] * prev * prev + beta[t] * var
        prev = math.sqrt(var) * z[t]
        out[t] = prev
    return np.asarray(out)


_SIMULATORS = {
    Family.ARMA11: _sim_arma11,
    Family.MA2: _sim_ma2,
    Family.PRODUCT2DEP: _sim_product2dep,
    Family.GARCH11: _sim_garch11,
}


def _simulate_pair(before: ModelSpec, after: ModelSpec, k_star: int, n: int,
                   seed: int, burn_in: int) -> TimeSeries:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if burn_in < 0:
        raise ValueError(f"burn_in must be >= 0, got {burn_in}")
    total = burn_in + n
    split = burn_in + k_star
    rng = np.random.default_rng(seed)
    path = _SIMULATORS[before.family](before, after, split, total, rng)
    return TimeSeries(path[burn_in:])


def simulate(spec: ModelSpec, n: int, seed: int,
             burn_in: int = DEFAULT_BURN_IN) -> TimeSeries:
    """Length-n path of ``spec``, deterministic given the seed.

    ``burn_in`` extra steps are generated first and discarded; recursions
    start from zero pre-sample values (GARCH from its stationary
    variance), which the burn-in washes out.
    """
    return _simulate_pair(spec, spec, n, n, seed, burn_in)


def simulate_with_change(cs: ChangeSpec, n: int, seed: int,
                         burn_in: int = DEFAULT_BURN_IN) -> TimeSeries:
    """Length-n path switching parameters after observation ``cs.change_index``.

    The recursion state crosses the break unchanged, so a no-change spec
    (before == after) reproduces :func:`simulate` bit for bit under the
    same seed.
    """
    if not cs.change_index < n:
        raise ValueError(
            f"change_index must be < n, got k*={cs.change_index} with n={n}"
        )
    return _simulate_pair(cs.spec_before, cs.spec_after, cs.change_index,
                          n, seed, burn_in)
