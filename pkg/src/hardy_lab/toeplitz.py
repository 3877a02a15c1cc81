"""Finite sections of the co-analytic Toeplitz operator and norm certificates.

``T_f h`` projects ``conj(f) h`` back to the analytic functions. On the
monomial basis ``T_f z^k = sum_{m<=k} conj(f_{k-m}) z^m``, so the finite
section is upper triangular Toeplitz with entries ``conj(f_{k-m})``.
Note the conjugation: the matrix of ``T_{a f}`` is ``conj(a)`` times that of
``T_f``, i.e. the map ``f -> T_f`` is conjugate-linear.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .core_fn import (
    AnalyticPoly,
    BoundaryGrid,
    TWO_PI,
    _as_poly,
    boundary_samples,
    cauchy_transform,
    check_aliasing,
    random_poly,
)
from .errors import CertificateViolation, DimensionMismatchError, DomainError, NoConvergenceError
from .multipliers import MultiplierSeq, alpha_norm, hadamard
from .norms import NormParams, default_grid_size, frakn_norm, hinf_norm

KERNEL_RADII = (0.5, 0.9, 0.99)
KERNEL_ANGLES = 16


class Space(str, enum.Enum):
    H1 = "H1"
    HINF = "Hinf"
    H2 = "H2"

    @classmethod
    def parse(cls, name) -> "Space":
        if isinstance(name, Space):
            return name
        key = str(name).lower().replace("^", "").replace("infinity", "inf")
        for s in cls:
            if s.value.lower() == key:
                return s
        raise DomainError(f"unknown space {name!r}")


class UpperMethod(str, enum.Enum):
    FRAKN = "FrakN"
    THEOREM2_CHAIN = "Theorem2Chain"


@dataclass(frozen=True, eq=False)
class ToeplitzTruncation:
    dim: int
    symbol: AnalyticPoly
    entries: np.ndarray = field(repr=False)


def default_dim(f: AnalyticPoly) -> int:
    return 4 * (_as_poly(f).degree + 1)


def build_truncation(f: AnalyticPoly, dim: int) -> ToeplitzTruncation:
    f = _as_poly(f)
    if dim < 1:
        raise DomainError("dim must be >= 1")
    d = np.arange(dim)[None, :] - np.arange(dim)[:, None]  # k - m
    c = np.conj(f.padded(dim))
    A = np.where(d >= 0, c[np.clip(d, 0, dim - 1)], 0.0)
    A.setflags(write=False)
    return ToeplitzTruncation(dim, f, A)


def apply(T: ToeplitzTruncation, h: AnalyticPoly) -> AnalyticPoly:
    """Matrix-vector product; the result has the same length as ``h``.

    Upper triangularity means ``T_f h`` never exceeds the degree of ``h``,
    so the finite section acts exactly on polynomials of degree < dim.
    """
    h = _as_poly(h)
    if h.degree >= T.dim:
        raise DimensionMismatchError(f"deg h = {h.degree} does not fit dim = {T.dim}")
    n = len(h)
    return AnalyticPoly(T.entries[:n, :n] @ h.coeffs)


def quadrature_apply(f: AnalyticPoly, h: AnalyticPoly, grid: BoundaryGrid, z) -> complex:
    """Trapezoid value of ``int conj(f(zeta)) h(zeta) / (1 - conj(zeta) z) dm(zeta)``."""
    f, h = _as_poly(f), _as_poly(h)
    check_aliasing(grid.size, f.degree + h.degree, "conj(f) h")
    density = np.conj(boundary_samples(f, grid)) * boundary_samples(h, grid)
    return cauchy_transform(density, grid, z)


def h2_spectral_norm(
    T: ToeplitzTruncation, tol: float = 1e-12, max_iters: int = 20000, squarings: int = 8
) -> float:
    """Largest singular value by power iteration on ``T* T`` from the normalized all-ones vector.

    Finite sections of low-degree symbols have tightly clustered top singular
    values, so each iteration applies ``(T* T)^(2^squarings)``, built once by
    repeated squaring; ``squarings=0`` is the plain iteration. The estimate is
    the Rayleigh quotient of ``T* T`` itself. Stops once successive estimates
    agree to ``tol`` (relative); raises NoConvergenceError carrying the last
    estimate otherwise.
    """
    if not tol > 0:
        raise DomainError("tol must be > 0")
    if squarings < 0:
        raise DomainError("squarings must be >= 0")
    A = T.entries
    G = A.conj().T @ A
    P = G
    for _ in range(squarings):
        P = P @ P
        scale = np.linalg.norm(P)
        if scale == 0.0:
            return 0.0
        P = P / scale
    v = np.ones(T.dim, dtype=np.complex128) / math.sqrt(T.dim)
    sigma = 0.0
    for it in range(1, max_iters + 1):
        w = P @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        new = math.sqrt(max(float(np.vdot(v, G @ v).real), 0.0))
        if abs(new - sigma) <= tol * max(new, 1e-300):
            return new
        sigma = new
    raise NoConvergenceError(
        f"power iteration did not converge in {max_iters} iterations", sigma, v, max_iters
    )


def kernel_poly(w: complex, dim: int) -> AnalyticPoly:
    """Truncated reproducing kernel ``sum_{m<dim} (conj(w) z)^m``."""
    return AnalyticPoly(np.conj(complex(w)) ** np.arange(dim))


@dataclass(frozen=True)
class LowerWitness:
    kind: str  # "kernel", "monomial" or "random"
    index: int
    ratio: float
    w: complex | None = None

    def describe(self) -> str:
        if self.kind == "kernel":
            return f"kernel k_w, w={self.w.real:+.4f}{self.w.imag:+.4f}i"
        if self.kind == "monomial":
            return f"monomial z^{self.index}"
        return f"random polynomial #{self.index}"


def _test_family(dim: int, trials: int, seed):
    rows, tags = [], []
    for r in KERNEL_RADII:
        for j in range(KERNEL_ANGLES):
            w = r * np.exp(1j * TWO_PI * j / KERNEL_ANGLES)
            rows.append(kernel_poly(w, dim).coeffs)
            tags.append(("kernel", len(tags), w))
    for k in range(dim):
        e = np.zeros(dim, dtype=np.complex128)
        e[k] = 1.0
        rows.append(e)
        tags.append(("monomial", k, None))
    rng = np.random.default_rng(seed)
    for t in range(trials):
        rows.append(random_poly(rng, dim - 1, normalize=False).coeffs)
        tags.append(("random", t, None))
    return np.array(rows), tags


def _row_norms(C: np.ndarray, space: Space, oversample: int) -> np.ndarray:
    # rowwise twin of hp_norm(p=1) / hinf_norm on polynomials of length C.shape[1]
    n = C.shape[1]
    if space is Space.H1:
        M = default_grid_size(n - 1)
        return np.sum(np.abs(np.fft.ifft(C, n=M, axis=1, norm="forward")), axis=1) / M
    M = oversample * n
    return np.max(np.abs(np.fft.ifft(C, n=M, axis=1, norm="forward")), axis=1)


def lower_bound_norm(
    f: AnalyticPoly,
    space,
    dim: int | None = None,
    trials: int = 16,
    seed=0,
    oversample: int = 16,
) -> tuple[float, LowerWitness]:
    """Empirical lower bound ``max ||T_f h|| / ||h||`` over a fixed test family.

    The family is the truncated kernels at radii 0.5, 0.9, 0.99 and 16 angles,
    every monomial ``z^k`` with ``k < dim``, and ``trials`` seeded random
    polynomials of degree ``dim - 1``. The lowest index wins ties.
    """
    f = _as_poly(f)
    space = Space.parse(space)
    if space is Space.H2:
        raise DomainError("use h2_spectral_norm for H2")
    dim = default_dim(f) if dim is None else int(dim)
    if dim < f.degree + 2:
        raise DimensionMismatchError(f"dim must be >= deg f + 2 = {f.degree + 2}")
    T = build_truncation(f, dim)
    H, tags = _test_family(dim, trials, seed)
    Y = H @ T.entries.T
    ratios = _row_norms(Y, space, oversample) / _row_norms(H, space, oversample)
    k = int(np.argmax(ratios))
    kind, idx, w = tags[k]
    return float(ratios[k]), LowerWitness(kind, idx, float(ratios[k]), w)


@dataclass(frozen=True)
class NormCertificate:
    """``lower <= ||T_f|| <= upper`` with an empirical lower side and a theorem upper side."""

    lower: float
    upper: float
    space: Space
    lower_witness: LowerWitness
    upper_method: UpperMethod
    frakn_upper: float
    chain_upper: float | None = None

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def certify(
    f: AnalyticPoly,
    space,
    params: NormParams | None = None,
    dim: int | None = None,
    trials: int = 16,
    seed=0,
    chain: tuple[AnalyticPoly, MultiplierSeq] | None = None,
    tol: float | None = None,
) -> NormCertificate:
    """Two-sided bracket for ``||T_f||`` on H1 or Hinf.

    ``chain=(g, alpha)`` declares ``f = g*alpha`` and adds the candidate
    upper bound ``12 hinf_norm(g) alpha_norm(alpha)``; the smaller one wins.
    """
    f = _as_poly(f)
    space = Space.parse(space)
    params = params or NormParams()
    lower, witness = lower_bound_norm(f, space, dim, trials, seed, params.oversample)
    frak = frakn_norm(f, params).value
    upper, method, chain_upper = frak, UpperMethod.FRAKN, None
    if chain is not None:
        g, alpha = _as_poly(chain[0]), chain[1]
        if not hadamard(g, alpha).allclose(f, atol=1e-12 * max(1.0, float(np.max(np.abs(f.coeffs))))):
            raise DomainError("declared chain does not reproduce f = g*alpha")
        chain_upper = 12.0 * hinf_norm(g, params.oversample).value * alpha_norm(alpha)
        if chain_upper < upper:
            upper, method = chain_upper, UpperMethod.THEOREM2_CHAIN
    if tol is None:
        tol = 1e-9 * max(1.0, upper)
    if lower > upper + tol:
        raise CertificateViolation(f"lower {lower} exceeds upper {upper} on {space.value}")
    return NormCertificate(lower, upper, space, witness, method, frak, chain_upper)
