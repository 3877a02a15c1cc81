"""Quadrature estimates of H^p, H^inf, Lambda and the frak-N norm."""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._parallel import thread_count, map_ordered
from .core_fn import AnalyticPoly, BoundaryGrid, _as_poly, boundary_samples
from .errors import DegreeZeroWarning, DomainError, GridCoincidenceError

COINCIDENCE_TOL = 1e-14


class NormKind(str, enum.Enum):
    HP = "Hp"
    HINF = "Hinf"
    LAMBDA = "Lambda"
    FRAKN = "FrakN"


@dataclass(frozen=True)
class NormEstimate:
    """A quadrature estimate. Never rigorous: grids only approximate sup and integrals."""

    value: float
    grid_size: int
    kind: NormKind
    is_rigorous: bool = False
    parts: dict = field(default_factory=dict, compare=False)

    def __float__(self) -> float:
        return self.value


def default_grid_size(degree: int) -> int:
    return max(4096, 32 * (int(degree) + 1))


@dataclass(frozen=True)
class NormParams:
    """Grid choices for Lambda and the sup norm.

    ``grid_size=None`` picks ``default_grid_size`` of the polynomial's degree.
    The eta grid is staggered by half a node so no eta node meets a zeta node.
    """

    grid_size: int | None = None
    eta_grid_size: int | None = None
    zeta_offset: float = 0.0
    eta_offset: float = 0.5
    oversample: int = 16

    def grids(self, degree: int) -> tuple[BoundaryGrid, BoundaryGrid]:
        m = self.grid_size or default_grid_size(degree)
        me = self.eta_grid_size or m
        return BoundaryGrid(m, self.zeta_offset), BoundaryGrid(me, self.eta_offset)


def hp_norm(f: AnalyticPoly, p: float, grid: BoundaryGrid) -> NormEstimate:
    """``((1/M) sum_j |f(zeta_j)|^p)^(1/p)`` on the unit circle."""
    if not (p >= 1) or math.isinf(p):
        raise DomainError(f"p must be finite and >= 1, got {p}")
    vals = np.abs(boundary_samples(f, grid))
    if p == 1:
        value = float(np.sum(vals) / grid.size)
    else:
        value = float((np.sum(vals**p) / grid.size) ** (1.0 / p))
    return NormEstimate(value, grid.size, NormKind.HP, parts={"p": p})


def hinf_norm(f: AnalyticPoly, oversample: int = 16) -> NormEstimate:
    """Grid maximum of ``|f|`` on ``oversample*(N+1)`` nodes.

    This is a lower estimate of the true sup, tight as ``oversample`` grows.
    """
    f = _as_poly(f)
    if oversample < 2:
        raise DomainError(f"oversample must be >= 2, got {oversample}")
    grid = BoundaryGrid(oversample * (f.degree + 1))
    value = float(np.max(np.abs(boundary_samples(f, grid))))
    return NormEstimate(value, grid.size, NormKind.HINF)


def difference_quotient(f: AnalyticPoly, zeta: complex) -> AnalyticPoly:
    """``F(z) = (f(zeta) - f(z)) / (zeta - z)`` by synthetic division.

    Coefficient ``k`` is ``sum_{n>k} c_n zeta^(n-1-k)``. A constant ``f`` gives
    the zero polynomial together with a DegreeZeroWarning.
    """
    f = _as_poly(f)
    zeta = complex(zeta)
    if abs(abs(zeta) - 1.0) > 1e-12:
        raise DomainError(f"zeta must lie on the unit circle, |zeta| = {abs(zeta)}")
    c = f.coeffs
    if c.size == 1:
        warnings.warn("difference quotient of a constant is zero", DegreeZeroWarning, stacklevel=2)
        return AnalyticPoly.zero()
    b = np.empty(c.size - 1, dtype=np.complex128)
    b[-1] = c[-1]
    for k in range(c.size - 3, -1, -1):
        b[k] = c[k + 1] + zeta * b[k + 1]
    return AnalyticPoly(b)


def _min_node_distance(gz: BoundaryGrid, ge: BoundaryGrid) -> float:
    # nearest zeta node to every eta node, in turns
    pos = (np.arange(ge.size) + ge.offset) / ge.size * gz.size - gz.offset
    gap = np.abs(pos - np.round(pos)) / gz.size
    return float(np.min(2.0 * np.sin(math.pi * gap)))


def lambda_profile(f: AnalyticPoly, grid_zeta: BoundaryGrid, grid_eta: BoundaryGrid) -> np.ndarray:
    """Inner means ``(1/M) sum_zeta |f(zeta) - f(eta)| / |zeta - eta|``, one per eta node."""
    f = _as_poly(f)
    if _min_node_distance(grid_zeta, grid_eta) < COINCIDENCE_TOL:
        raise GridCoincidenceError(
            f"zeta grid (M={grid_zeta.size}, offset={grid_zeta.offset}) meets eta grid "
            f"(M={grid_eta.size}, offset={grid_eta.offset})"
        )
    fz = boundary_samples(f, grid_zeta)
    fe = boundary_samples(f, grid_eta)
    fzr, fzi = np.ascontiguousarray(fz.real), np.ascontiguousarray(fz.imag)
    fer, fei = np.ascontiguousarray(fe.real), np.ascontiguousarray(fe.imag)
    K = grid_eta.size
    threads = thread_count()
    step = max(1, -(-K // (4 * threads))) if threads > 1 else K
    blocks = [(k0, min(K, k0 + step)) for k0 in range(0, K, step)]

    if grid_zeta.size == grid_eta.size:
        M = grid_zeta.size
        shift = grid_zeta.offset - grid_eta.offset
        s = np.arange(M)
        inv = 1.0 / (2.0 * np.abs(np.sin(math.pi * (s + shift) / M)))
        inv2 = np.concatenate([inv, inv])

        def run(b):
            return _kernels.quotient_rows_circulant(fzr, fzi, fer, fei, inv2, b[0], b[1])
    else:
        z, e = grid_zeta.nodes, grid_eta.nodes
        zr, zi = np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag)
        er, ei = np.ascontiguousarray(e.real), np.ascontiguousarray(e.imag)

        def run(b):
            return _kernels.quotient_rows_general(fzr, fzi, fer, fei, zr, zi, er, ei, b[0], b[1])

    return np.concatenate(map_ordered(run, blocks, threads))


def lambda_functional(f: AnalyticPoly, grid_zeta: BoundaryGrid, grid_eta: BoundaryGrid) -> NormEstimate:
    """Max over eta nodes of the boundary L1 mean of the difference quotient."""
    prof = lambda_profile(f, grid_zeta, grid_eta)
    k = int(np.argmax(prof))
    return NormEstimate(
        float(prof[k]),
        grid_zeta.size,
        NormKind.LAMBDA,
        parts={"argmax_eta": complex(grid_eta.nodes[k]), "eta_grid_size": grid_eta.size},
    )


def frakn_norm(f: AnalyticPoly, params: NormParams | None = None) -> NormEstimate:
    """``hinf_norm(f) + lambda_functional(f)`` with the grids from ``params``."""
    f = _as_poly(f)
    params = params or NormParams()
    gz, ge = params.grids(f.degree)
    sup = hinf_norm(f, params.oversample)
    lam = lambda_functional(f, gz, ge)
    return NormEstimate(
        sup.value + lam.value,
        gz.size,
        NormKind.FRAKN,
        parts={"hinf": sup.value, "lambda": lam.value, "hinf_grid_size": sup.grid_size},
    )
