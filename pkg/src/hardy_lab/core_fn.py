"""Truncated analytic functions, boundary grids and the classical kernels.

Functions are stored as finite Taylor coefficient vectors. Boundary integrals
use the uniform trapezoid rule on the circle, which is exact for
trigonometric polynomials whose degree stays below the grid size.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import AliasingError, DomainError, LengthMismatchError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class AnalyticPoly:
    """Polynomial ``sum_n coeffs[n] z**n`` viewed as an element of H^p."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128, copy=True).reshape(-1)
        if c.size == 0:
            raise LengthMismatchError("AnalyticPoly needs at least one coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, length: int = 1) -> "AnalyticPoly":
        return cls(np.zeros(max(1, length), dtype=np.complex128))

    @classmethod
    def monomial(cls, k: int, scale: complex = 1.0) -> "AnalyticPoly":
        c = np.zeros(k + 1, dtype=np.complex128)
        c[k] = scale
        return cls(c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def effective_degree(self) -> int:
        """Degree after dropping trailing exact zeros (0 for the zero polynomial)."""
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    def __len__(self) -> int:
        return self.coeffs.size

    def __call__(self, z):
        return eval_poly(self, z)

    def __repr__(self) -> str:
        return f"AnalyticPoly({np.array2string(self.coeffs, precision=6)})"

    def padded(self, length: int) -> np.ndarray:
        """Coefficient vector zero-padded (or truncated) to ``length``."""
        out = np.zeros(length, dtype=np.complex128)
        n = min(length, self.coeffs.size)
        out[:n] = self.coeffs[:n]
        return out

    def __add__(self, other: "AnalyticPoly") -> "AnalyticPoly":
        n = max(len(self), len(other))
        return AnalyticPoly(self.padded(n) + other.padded(n))

    def __sub__(self, other: "AnalyticPoly") -> "AnalyticPoly":
        n = max(len(self), len(other))
        return AnalyticPoly(self.padded(n) - other.padded(n))

    def __neg__(self) -> "AnalyticPoly":
        return AnalyticPoly(-self.coeffs)

    def __mul__(self, scalar) -> "AnalyticPoly":
        if isinstance(scalar, AnalyticPoly):
            return AnalyticPoly(np.convolve(self.coeffs, scalar.coeffs))
        return AnalyticPoly(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "AnalyticPoly":
        return AnalyticPoly(self.coeffs / complex(scalar))

    def rotated(self, theta: float) -> "AnalyticPoly":
        """Coefficients of ``z -> f(exp(i theta) z)``."""
        n = np.arange(self.coeffs.size)
        return AnalyticPoly(self.coeffs * np.exp(1j * theta * n))

    def allclose(self, other: "AnalyticPoly", atol: float = 1e-12) -> bool:
        n = max(len(self), len(other))
        return bool(np.allclose(self.padded(n), other.padded(n), rtol=0.0, atol=atol))


@dataclass(frozen=True)
class BoundaryGrid:
    """``size`` equispaced nodes ``exp(2 pi i (j + offset) / size)`` with weight 1/size."""

    size: int
    offset: float = 0.0

    def __post_init__(self):
        if int(self.size) != self.size or self.size < 1:
            raise DomainError(f"grid size must be a positive integer, got {self.size}")
        if not 0.0 <= self.offset < 1.0:
            raise DomainError(f"grid offset must lie in [0, 1), got {self.offset}")
        object.__setattr__(self, "size", int(self.size))

    @property
    def weight(self) -> float:
        return 1.0 / self.size

    @cached_property
    def angles(self) -> np.ndarray:
        return TWO_PI * (np.arange(self.size) + self.offset) / self.size

    @cached_property
    def nodes(self) -> np.ndarray:
        z = np.exp(1j * self.angles)
        z.setflags(write=False)
        return z

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.size, self.weight)


@dataclass(frozen=True)
class DiskPoint:
    value: complex

    def __post_init__(self):
        v = complex(self.value)
        if not abs(v) < 1.0:
            raise DomainError(f"|z| must be < 1, got {abs(v)}")
        object.__setattr__(self, "value", v)

    def __complex__(self) -> complex:
        return self.value


def _disk(z) -> complex:
    return DiskPoint(complex(z)).value


def _as_poly(f) -> AnalyticPoly:
    return f if isinstance(f, AnalyticPoly) else AnalyticPoly(f)


def min_grid_size(degree: int) -> int:
    """Smallest grid size allowed by the anti-aliasing rule ``M >= 2(N+1)``."""
    return 2 * (int(degree) + 1)


def check_aliasing(grid_size: int, degree: int, what: str = "polynomial") -> None:
    need = min_grid_size(degree)
    if grid_size < need:
        raise AliasingError(
            f"grid of size {grid_size} too coarse for {what} of degree {degree}; need >= {need}"
        )


def eval_poly(f: AnalyticPoly, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    c = _as_poly(f).coeffs
    z = np.asarray(z, dtype=np.complex128)
    acc = np.full(z.shape, c[-1], dtype=np.complex128)
    for a in c[-2::-1]:
        acc = acc * z + a
    return acc[()] if acc.ndim == 0 else acc


def boundary_samples(f: AnalyticPoly, grid: BoundaryGrid, allow_aliasing: bool = False) -> np.ndarray:
    """Values of ``f`` at the grid nodes, computed with one inverse FFT.

    Raises AliasingError when ``grid.size < 2(N+1)`` unless ``allow_aliasing``.
    """
    f = _as_poly(f)
    if not allow_aliasing:
        check_aliasing(grid.size, f.degree)
    M = grid.size
    n = np.arange(f.coeffs.size)
    b = f.coeffs
    if grid.offset:
        b = b * np.exp(1j * TWO_PI * grid.offset * n / M)
    if b.size > M:
        folded = np.zeros(M, dtype=np.complex128)
        np.add.at(folded, n % M, b)
        b = folded
    return np.fft.ifft(b, n=M, norm="forward")


def poisson_kernel(z, zeta) -> float:
    """``(1 - |z|^2) / |zeta - z|^2``; vectorised over ``zeta``."""
    z = _disk(z)
    zeta = np.asarray(zeta, dtype=np.complex128)
    out = (1.0 - abs(z) ** 2) / np.abs(zeta - z) ** 2
    return out[()] if out.ndim == 0 else out


def poisson_extension(samples, grid: BoundaryGrid, z) -> float:
    samples = np.asarray(samples, dtype=np.float64)
    if samples.shape != (grid.size,):
        raise LengthMismatchError(f"expected {grid.size} samples, got {samples.shape}")
    return float(np.sum(samples * poisson_kernel(z, grid.nodes)) / grid.size)


def cauchy_transform(density, grid: BoundaryGrid, z) -> complex:
    """Trapezoid value of ``int phi(zeta) / (1 - conj(zeta) z) dm(zeta)``."""
    density = np.asarray(density, dtype=np.complex128)
    if density.shape != (grid.size,):
        raise LengthMismatchError(f"expected {grid.size} density values, got {density.shape}")
    z = _disk(z)
    return complex(np.sum(density / (1.0 - np.conj(grid.nodes) * z)) / grid.size)


@dataclass
class SmirnovReport:
    max_violation: float
    worst_point: complex
    passed: bool
    tol: float
    violations: np.ndarray = field(repr=False)


def smirnov_check(f: AnalyticPoly, q: float, grid: BoundaryGrid, test_points: Iterable, tol: float = 1e-8) -> SmirnovReport:
    """Check ``|f(z)|^q <= int |f|^q P_z dm`` at every test point.

    The violation at ``z`` is the left side minus the quadrature of the right
    side; it should never be positive beyond quadrature error.
    """
    f = _as_poly(f)
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    check_aliasing(grid.size, math.ceil(q * f.degree), f"|f|^{q}")
    pts = [_disk(z) for z in test_points]
    if not pts:
        raise LengthMismatchError("no test points supplied")
    boundary = np.abs(boundary_samples(f, grid)) ** q
    viol = np.array([abs(eval_poly(f, z)) ** q - poisson_extension(boundary, grid, z) for z in pts])
    k = int(np.argmax(viol))
    return SmirnovReport(float(viol[k]), pts[k], bool(viol[k] <= tol), tol, viol)


def random_poly(rng: np.random.Generator, degree: int, normalize: bool = True, oversample: int = 16) -> AnalyticPoly:
    """Coefficients i.i.d. uniform on the unit disk, optionally scaled to boundary grid max 1.

    The grid matches ``norms.hinf_norm`` so a normalized polynomial reports
    ``hinf_norm == 1`` up to rounding.
    """
    r = np.sqrt(rng.random(degree + 1))
    t = TWO_PI * rng.random(degree + 1)
    f = AnalyticPoly(r * np.exp(1j * t))
    if normalize:
        grid = BoundaryGrid(oversample * (degree + 1))
        f = f / np.max(np.abs(boundary_samples(f, grid, allow_aliasing=True)))
    return f


def disk_points(count: int, rmax: float, rng: np.random.Generator) -> list:
    """Seeded points uniform by area in the disk of radius ``rmax``."""
    r = rmax * np.sqrt(rng.random(count))
    t = TWO_PI * rng.random(count)
    return list(r * np.exp(1j * t))


def parse_complex_list(text: str | Sequence) -> AnalyticPoly:
    """Parse ``"1,2-0.5i,3i"`` into a polynomial; ``i`` and ``j`` are both accepted."""
    if not isinstance(text, str):
        return AnalyticPoly(list(text))
    vals = []
    for tok in text.split(","):
        tok = tok.strip().replace(" ", "").replace("i", "j")
        if not tok:
            raise DomainError(f"empty coefficient in {text!r}")
        if tok in ("j", "+j", "-j"):
            tok = tok.replace("j", "1j")
        try:
            vals.append(complex(tok))
        except ValueError as exc:
            raise DomainError(f"cannot parse coefficient {tok!r}") from exc
    return AnalyticPoly(vals)
