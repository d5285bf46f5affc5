"""Band-limited periodic fields on the torus and their trajectories.

A field is stored as complex Fourier coefficients on the symmetric band
xi in {-N, ..., N} with the 1/sqrt(2*pi) transform convention:

    coeff(xi) = (2*pi)**-0.5 * integral_0^{2pi} u(x) exp(-i*x*xi) dx

so that Parseval gives  integral |u|^2 dx = sum |coeff|^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
ROOT_TWO_PI = math.sqrt(TWO_PI)


def bracket(x):
    """Japanese bracket <x> = sqrt(1 + x^2), vectorized."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(1.0 + x * x)


def xi_range(cutoff: int) -> np.ndarray:
    return np.arange(-cutoff, cutoff + 1)


@dataclass(frozen=True)
class SpectralField:
    """Immutable band-limited field: coeffs[k] is the amplitude at xi = k - cutoff."""

    coeffs: np.ndarray
    cutoff: int

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if self.cutoff < 0:
            raise ValueError("cutoff must be nonnegative")
        if c.shape != (2 * self.cutoff + 1,):
            raise ValueError(
                f"expected {2 * self.cutoff + 1} coefficients for cutoff {self.cutoff}, "
                f"got shape {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, cutoff: int) -> "SpectralField":
        return cls(np.zeros(2 * cutoff + 1, dtype=complex), cutoff)

    @classmethod
    def from_coeff_dict(cls, cutoff: int, values: dict[int, complex]) -> "SpectralField":
        c = np.zeros(2 * cutoff + 1, dtype=complex)
        for xi, v in values.items():
            if abs(xi) > cutoff:
                raise ValueError(f"frequency {xi} outside cutoff {cutoff}")
            c[xi + cutoff] = v
        return cls(c, cutoff)

    # -- accessors ----------------------------------------------------
    @property
    def xi(self) -> np.ndarray:
        return xi_range(self.cutoff)

    def coeff(self, xi: int) -> complex:
        if abs(xi) > self.cutoff:
            return 0.0 + 0.0j
        return complex(self.coeffs[xi + self.cutoff])

    # -- algebra (pure, returns new fields) ----------------------------
    def __add__(self, other: "SpectralField") -> "SpectralField":
        a, b = match_cutoffs(self, other)
        return SpectralField(a.coeffs + b.coeffs, a.cutoff)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        a, b = match_cutoffs(self, other)
        return SpectralField(a.coeffs - b.coeffs, a.cutoff)

    def __mul__(self, scalar: complex) -> "SpectralField":
        return SpectralField(self.coeffs * scalar, self.cutoff)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(-self.coeffs, self.cutoff)

    def conjugate(self) -> "SpectralField":
        """Field of conj(u): coefficients conj(coeff(-xi))."""
        return SpectralField(np.conj(self.coeffs[::-1]), self.cutoff)

    def pad_to(self, cutoff: int) -> "SpectralField":
        if cutoff < self.cutoff:
            raise ValueError("pad_to target smaller than current cutoff")
        extra = cutoff - self.cutoff
        return SpectralField(np.pad(self.coeffs, (extra, extra)), cutoff)

    def truncate(self, cutoff: int) -> "SpectralField":
        if cutoff >= self.cutoff:
            return self.pad_to(cutoff)
        drop = self.cutoff - cutoff
        return SpectralField(self.coeffs[drop:-drop].copy(), cutoff)

    def tail_l2(self, cutoff: int) -> float:
        """l2 mass carried by frequencies |xi| > cutoff."""
        if cutoff >= self.cutoff:
            return 0.0
        drop = self.cutoff - cutoff
        tail = np.concatenate([self.coeffs[:drop], self.coeffs[-drop:]])
        return float(np.linalg.norm(tail))

    # -- scalars -------------------------------------------------------
    def l2_norm(self) -> float:
        """L^2(0, 2pi) norm of the physical field (Parseval)."""
        return float(np.linalg.norm(self.coeffs))

    def mass_mean(self) -> float:
        """Mean value of |u|^2 over the torus, computed exactly from coefficients."""
        return float(np.sum(np.abs(self.coeffs) ** 2) / TWO_PI)


def match_cutoffs(a: SpectralField, b: SpectralField) -> tuple[SpectralField, SpectralField]:
    n = max(a.cutoff, b.cutoff)
    return a.pad_to(n), b.pad_to(n)


# ---------------------------------------------------------------------------
# physical <-> spectral conversion
# ---------------------------------------------------------------------------

def from_physical(samples: np.ndarray, cutoff: int) -> SpectralField:
    """Field from samples on the uniform grid x_j = 2*pi*j/G, G = len(samples).

    Exact for band-limited data when G >= 2*cutoff + 1.
    """
    samples = np.asarray(samples, dtype=complex)
    gridsize = samples.shape[0]
    if gridsize < 2 * cutoff + 1:
        raise ValueError(f"grid of size {gridsize} too small for cutoff {cutoff}")
    spectrum = np.fft.fft(samples) * (ROOT_TWO_PI / gridsize)
    coeffs = np.empty(2 * cutoff + 1, dtype=complex)
    for xi in range(-cutoff, cutoff + 1):
        coeffs[xi + cutoff] = spectrum[xi % gridsize]
    return SpectralField(coeffs, cutoff)


def to_physical(f: SpectralField, gridsize: int) -> np.ndarray:
    """Samples of the field on the uniform grid of the given size."""
    if gridsize < 2 * f.cutoff + 1:
        raise ValueError(f"grid of size {gridsize} too small for cutoff {f.cutoff}")
    spectrum = np.zeros(gridsize, dtype=complex)
    for xi in range(-f.cutoff, f.cutoff + 1):
        spectrum[xi % gridsize] = f.coeffs[xi + f.cutoff]
    return np.fft.ifft(spectrum) * (gridsize / ROOT_TWO_PI)


def x_grid(gridsize: int) -> np.ndarray:
    return TWO_PI * np.arange(gridsize) / gridsize


def derivative(f: SpectralField) -> SpectralField:
    """Exact spatial derivative: multiply coefficients by i*xi."""
    return SpectralField(1j * f.xi * f.coeffs, f.cutoff)


def mean_value(f: SpectralField) -> complex:
    """Mean of the field over the torus: (2*pi)**-0.5 * coeff(0)."""
    return f.coeff(0) / ROOT_TWO_PI


def plane_wave(cutoff: int, n: int, amplitude: complex = 1.0) -> SpectralField:
    """A * exp(i*n*x) as a spectral field."""
    return SpectralField.from_coeff_dict(cutoff, {n: amplitude * ROOT_TWO_PI})


def constant_field(cutoff: int, value: complex) -> SpectralField:
    return SpectralField.from_coeff_dict(cutoff, {0: value * ROOT_TWO_PI})


def physical_product(
    factors: Sequence[SpectralField],
    conjugate: Sequence[bool] | None = None,
    out_cutoff: int | None = None,
) -> SpectralField:
    """Pointwise product of fields, dealiased, truncated to out_cutoff.

    The working grid is large enough that the kept band is alias-free.
    """
    if conjugate is None:
        conjugate = [False] * len(factors)
    band = sum(f.cutoff for f in factors)
    if out_cutoff is None:
        out_cutoff = max(f.cutoff for f in factors)
    gridsize = band + min(out_cutoff, band) + 1
    gridsize += gridsize % 2  # even grid
    values = np.ones(gridsize, dtype=complex)
    for f, cj in zip(factors, conjugate):
        v = to_physical(f, gridsize)
        values *= np.conj(v) if cj else v
    return from_physical(values, min(out_cutoff, band)).pad_to(out_cutoff)


# ---------------------------------------------------------------------------
# time cutoff and trajectories
# ---------------------------------------------------------------------------

def bump(t):
    """Smooth cutoff: 1 on [-1, 1], exp(1 - 1/(1-(|t|-1)^2)) on 1<|t|<2, 0 beyond."""
    t = np.abs(np.asarray(t, dtype=float))
    out = np.zeros_like(t)
    out[t <= 1.0] = 1.0
    mid = (t > 1.0) & (t < 2.0)
    s = t[mid] - 1.0
    out[mid] = np.exp(1.0 - 1.0 / (1.0 - s * s))
    return out


@dataclass(frozen=True)
class CutoffProfile:
    """Time window applied before space-time transforms.

    kind "bump": multiply by bump(t/scale) at transform time.
    kind "applied": samples are already compactly supported; use them as-is.
    """

    kind: str = "bump"
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("bump", "applied"):
            raise ValueError(f"unknown cutoff kind {self.kind!r}")
        if self.kind == "bump" and self.scale <= 0:
            raise ValueError("cutoff scale must be positive")

    def weights(self, times: np.ndarray) -> np.ndarray:
        if self.kind == "applied":
            return np.ones_like(np.asarray(times, dtype=float))
        return bump(np.asarray(times, dtype=float) / self.scale)


@dataclass(frozen=True)
class Trajectory:
    """Time-sampled fields on the uniform grid t_k = -window + k*dt, k = 0..steps.

    All samples share one frequency cutoff; steps * dt == 2 * window.
    """

    samples: tuple[SpectralField, ...]
    window: float
    cutoff_profile: CutoffProfile | None = None

    def __post_init__(self):
        if len(self.samples) < 2:
            raise ValueError("trajectory needs at least two samples")
        if self.window <= 0:
            raise ValueError("window must be positive")
        cut = self.samples[0].cutoff
        if any(s.cutoff != cut for s in self.samples):
            raise ValueError("all samples must share one cutoff")
        object.__setattr__(self, "samples", tuple(self.samples))

    @property
    def cutoff(self) -> int:
        return self.samples[0].cutoff

    @property
    def steps(self) -> int:
        return len(self.samples) - 1

    @property
    def dt(self) -> float:
        return 2.0 * self.window / self.steps

    @property
    def times(self) -> np.ndarray:
        return -self.window + self.dt * np.arange(self.steps + 1)

    def coeff_matrix(self) -> np.ndarray:
        """(steps+1, 2*cutoff+1) array of coefficients."""
        return np.array([s.coeffs for s in self.samples])

    def map_samples(self, fn: Callable[[SpectralField], SpectralField]) -> "Trajectory":
        return Trajectory(tuple(fn(s) for s in self.samples), self.window, self.cutoff_profile)

    def windowed(self) -> "Trajectory":
        """Bake the cutoff profile into the samples."""
        if self.cutoff_profile is None:
            raise ValueError("trajectory has no cutoff profile to apply")
        w = self.cutoff_profile.weights(self.times)
        samples = tuple(s * w_k for s, w_k in zip(self.samples, w))
        return Trajectory(samples, self.window, CutoffProfile(kind="applied"))

    def sup_l2_distance(self, other: "Trajectory") -> float:
        if len(self.samples) != len(other.samples):
            raise ValueError("trajectories have different sample counts")
        return max((a - b).l2_norm() for a, b in zip(self.samples, other.samples))


def free_wave_trajectory(
    n: int,
    cutoff: int,
    window: float = 2.0,
    steps: int = 256,
    amplitude: complex = 1.0,
) -> Trajectory:
    """exp(i*(n*x - n^2*t)) sampled on the grid, with the default bump profile.

    The profile scale window/2 makes the windowed samples vanish at the edges.
    """
    if abs(n) > cutoff:
        raise ValueError("wave frequency outside cutoff")
    times = -window + (2.0 * window / steps) * np.arange(steps + 1)
    samples = tuple(
        plane_wave(cutoff, n, amplitude * np.exp(-1j * n * n * t)) for t in times
    )
    return Trajectory(samples, window, CutoffProfile(scale=window / 2.0))


# ---------------------------------------------------------------------------
# seeded random ensembles
# ---------------------------------------------------------------------------

def random_field(
    cutoff: int,
    rng: np.random.Generator,
    tilt: float = 1.0,
    active_cutoff: int | None = None,
    l2_norm: float | None = None,
) -> SpectralField:
    """i.i.d. complex Gaussian coefficients with a <xi>**-tilt spectral profile."""
    active = cutoff if active_cutoff is None else min(active_cutoff, cutoff)
    xi = xi_range(cutoff)
    z = rng.standard_normal(2 * cutoff + 1) + 1j * rng.standard_normal(2 * cutoff + 1)
    c = z * bracket(xi) ** (-tilt)
    c[np.abs(xi) > active] = 0.0
    f = SpectralField(c, cutoff)
    if l2_norm is not None:
        cur = f.l2_norm()
        if cur > 0:
            f = f * (l2_norm / cur)
    return f


def random_trajectory(
    cutoff: int,
    rng: np.random.Generator,
    window: float = 2.0,
    steps: int = 64,
    tilt: float = 1.0,
    active_cutoff: int | None = None,
    modes: int = 3,
    max_rate: float = 8.0,
) -> Trajectory:
    """Random space-time field, smooth in t, with the default bump profile.

    Each spatial coefficient carries a random low-frequency temporal profile
    (a short sum of oscillations with rates up to max_rate).
    """
    active = cutoff if active_cutoff is None else min(active_cutoff, cutoff)
    xi = xi_range(cutoff)
    base = (rng.standard_normal((2 * cutoff + 1, modes))
            + 1j * rng.standard_normal((2 * cutoff + 1, modes)))
    rates = rng.uniform(-max_rate, max_rate, size=(2 * cutoff + 1, modes))
    tiltw = bracket(xi) ** (-tilt)
    times = -window + (2.0 * window / steps) * np.arange(steps + 1)
    samples = []
    for t in times:
        c = np.sum(base * np.exp(1j * rates * t), axis=1) * tiltw / math.sqrt(modes)
        c[np.abs(xi) > active] = 0.0
        samples.append(SpectralField(c, cutoff))
    return Trajectory(tuple(samples), window, CutoffProfile(scale=window / 2.0))
