"""Fading channel models: Rayleigh, Rician and Nakagami-m.

Each model is described by a :class:`ChannelSpec` carrying its parameters.
The module provides the mean-square gain E[|h|^2], the moment generating
function of the instantaneous SNR evaluated on the negative axis (the
quantity entering every pairwise error bound), and random coefficient
samplers for link simulation.

Conventions:
  * instantaneous SNR  gamma = |h|^2 * Es/N0
  * average SNR        gamma_bar = E[|h|^2] * Es/N0
  * Es is the average per-user energy on one occupied resource element,
    normalized to 1 by the codebook construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

RAYLEIGH = "rayleigh"
RICIAN = "rician"
NAKAGAMI = "nakagami"

_KINDS = (RAYLEIGH, RICIAN, NAKAGAMI)


@dataclass(frozen=True)
class ChannelSpec:
    """Tagged fading model.

    kind    one of "rayleigh", "rician", "nakagami"
    sigma2  scatter component (Rayleigh / Rician); unused for Nakagami
    u       line-of-sight amplitude (Rician only)
    m       fading figure >= 0.5 (Nakagami only)
    omega   scale E[|h|^2] (Nakagami only)
    """

    kind: str
    sigma2: float = 0.0
    u: float = 0.0
    m: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError("channel kind", f"unknown channel kind {self.kind!r}")
        if self.kind in (RAYLEIGH, RICIAN) and not self.sigma2 > 0:
            raise ValidationError("scatter component", "sigma2 must be > 0")
        if self.kind == RICIAN and self.u < 0:
            raise ValidationError("LoS amplitude", "u must be >= 0")
        if self.kind == NAKAGAMI:
            if not self.m >= 0.5:
                raise ValidationError("fading figure", "m must be >= 0.5")
            if not self.omega > 0:
                raise ValidationError("scale", "omega must be > 0")

    @property
    def rician_factor(self) -> float:
        """Ratio of LoS to scatter power, u^2 / (2 sigma2)."""
        if self.kind != RICIAN:
            raise ValidationError("channel kind", "rician_factor defined for Rician only")
        return self.u**2 / (2.0 * self.sigma2)

    def describe(self) -> dict:
        """Plain-dict form used in file metadata."""
        if self.kind == RAYLEIGH:
            return {"kind": self.kind, "sigma2": self.sigma2}
        if self.kind == RICIAN:
            return {"kind": self.kind, "sigma2": self.sigma2, "u": self.u}
        return {"kind": self.kind, "m": self.m, "omega": self.omega}


def rayleigh(sigma2: float) -> ChannelSpec:
    return ChannelSpec(RAYLEIGH, sigma2=sigma2)


def rician(u: float, sigma2: float) -> ChannelSpec:
    return ChannelSpec(RICIAN, sigma2=sigma2, u=u)


def nakagami(m: float, omega: float) -> ChannelSpec:
    return ChannelSpec(NAKAGAMI, m=m, omega=omega)


def spec_from_dict(d: dict) -> ChannelSpec:
    """Inverse of :meth:`ChannelSpec.describe`."""
    kind = d.get("kind")
    if kind == RAYLEIGH:
        return rayleigh(d["sigma2"])
    if kind == RICIAN:
        return rician(d["u"], d["sigma2"])
    if kind == NAKAGAMI:
        return nakagami(d["m"], d["omega"])
    raise ValidationError("channel kind", f"unknown channel kind {kind!r}")


@dataclass(frozen=True)
class FadingRealization:
    """Per-RE complex channel gains for one transmission block."""

    coefficients: np.ndarray
    seed: object = None

    def __post_init__(self):
        coeff = np.asarray(self.coefficients, dtype=complex)
        object.__setattr__(self, "coefficients", coeff)
        if coeff.ndim != 1 or coeff.size == 0:
            raise ValidationError("coefficient length", "coefficients must be a non-empty vector")


def mean_square(spec: ChannelSpec) -> float:
    """E[|h|^2] of the fading amplitude."""
    if spec.kind == RAYLEIGH:
        return 2.0 * spec.sigma2
    if spec.kind == RICIAN:
        return 2.0 * spec.sigma2 * (1.0 + spec.rician_factor)
    return spec.omega


def gamma_bar(spec: ChannelSpec, es_over_n0: float) -> float:
    """Average SNR E[gamma] = E[|h|^2] * Es/N0 (es_over_n0 linear)."""
    if not es_over_n0 > 0:
        raise ValidationError("SNR", "es_over_n0 must be > 0")
    return mean_square(spec) * es_over_n0


def mgf_neg(spec: ChannelSpec, s, gamma_bar: float):
    """MGF of the instantaneous SNR at -s, i.e. E[exp(-s*gamma)].

    Accepts scalar or array ``s`` (elementwise). Values lie in (0, 1].

    Closed forms:
      Rayleigh   1 / (1 + s*gb)
      Rician     (1+k)/(1+k+s*gb) * exp(-k*s*gb / (1+k+s*gb)),  k = u^2/(2 sigma2)
      Nakagami   (1 + s*gb/m)^(-m)
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValidationError("MGF argument", "s must be >= 0")
    if not gamma_bar > 0:
        raise ValidationError("SNR", "gamma_bar must be > 0")
    sg = s * gamma_bar
    if spec.kind == RAYLEIGH:
        out = 1.0 / (1.0 + sg)
    elif spec.kind == RICIAN:
        k = spec.rician_factor
        denom = 1.0 + k + sg
        out = (1.0 + k) / denom * np.exp(-k * sg / denom)
    else:
        out = (1.0 + sg / spec.m) ** (-spec.m)
    return out if out.ndim else float(out)


def mgf_neg_ds(spec: ChannelSpec, s, gamma_bar: float):
    """Derivative of :func:`mgf_neg` with respect to s (elementwise)."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValidationError("MGF argument", "s must be >= 0")
    sg = s * gamma_bar
    if spec.kind == RAYLEIGH:
        out = -gamma_bar / (1.0 + sg) ** 2
    elif spec.kind == RICIAN:
        k = spec.rician_factor
        denom = 1.0 + k + sg
        val = (1.0 + k) / denom * np.exp(-k * sg / denom)
        # d/dt log M = -1/denom - k*(1+k)/denom^2, t = s*gamma_bar
        out = val * (-1.0 / denom - k * (1.0 + k) / denom**2) * gamma_bar
    else:
        base = 1.0 + sg / spec.m
        out = -(gamma_bar) * base ** (-spec.m - 1.0)
    return out if out.ndim else float(out)


def pair_factor(spec: ChannelSpec, sq_dist, es_over_n0: float):
    """Per-RE PEP factor M_gamma(-|delta|^2/4) for squared distance(s)."""
    return mgf_neg(spec, np.asarray(sq_dist, dtype=float) / 4.0, gamma_bar(spec, es_over_n0))


def sample_block(spec: ChannelSpec, shape, rng: np.random.Generator) -> np.ndarray:
    """Draw i.i.d. complex channel gains with the spec's amplitude law.

    Rayleigh:  h = sigma*(X + jY), X,Y ~ N(0,1)
    Rician:    h = u + sigma*(X + jY)   (LoS phase fixed at 0)
    Nakagami:  |h|^2 ~ Gamma(m, omega/m), phase ~ U[0, 2pi)
    """
    if spec.kind == RAYLEIGH:
        sig = np.sqrt(spec.sigma2)
        return sig * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    if spec.kind == RICIAN:
        sig = np.sqrt(spec.sigma2)
        return spec.u + sig * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    power = rng.gamma(spec.m, spec.omega / spec.m, size=shape)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=shape)
    return np.sqrt(power) * np.exp(1j * phase)


def sample(spec: ChannelSpec, K: int, rng: np.random.Generator) -> FadingRealization:
    """Draw one length-K fading realization."""
    if K < 1:
        raise ValidationError("RE count", "K must be >= 1")
    return FadingRealization(sample_block(spec, (K,), rng))
