"""Multiplier sequences, Hadamard products, Cesaro means and the bound chain for f*alpha."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .core_fn import AnalyticPoly, _as_poly
from .errors import (
    DomainError,
    DominationFailed,
    LengthMismatchError,
    PreconditionFailed,
    TooShortError,
)
from .norms import NormParams, frakn_norm, hinf_norm


class Family(str, enum.Enum):
    POWER = "Power"
    LOG = "Log"
    LOGLOG = "LogLog"
    CUSTOM = "Custom"

    @classmethod
    def parse(cls, name: str) -> "Family":
        if isinstance(name, Family):
            return name
        for fam in cls:
            if fam.value.lower() == str(name).lower().replace("-", "").replace("_", ""):
                return fam
        raise DomainError(f"unknown family {name!r}")


def family_values(family: Family, epsilon: float, n: np.ndarray) -> np.ndarray:
    n = np.asarray(n, dtype=np.float64)
    if family is Family.POWER:
        return (n + 1.0) ** (-epsilon)
    if family is Family.LOG:
        return np.log(n + 2.0) ** (-(1.0 + epsilon))
    if family is Family.LOGLOG:
        return 1.0 / (np.log(n + 2.0) * np.log(np.log(n + 3.0)) ** (1.0 + epsilon))
    raise DomainError("Custom sequences have no formula")


def family_tail_bound(family: Family, epsilon: float, K: int) -> float:
    """Integral-test bound on ``sum_{n>K} alpha_n / (n+1)``.

    The summand ``g(x) = alpha(x)/(x+1)`` is decreasing, so the tail is at most
    ``int_K^inf g``. Log and LogLog are first dominated by an exact derivative.
    """
    if family is Family.POWER:
        return (K + 1.0) ** (-epsilon) / epsilon
    if family is Family.LOG:
        # 1/(x+1) <= ((K+2)/(K+1)) / (x+2) on x >= K
        return (K + 2.0) / (K + 1.0) * math.log(K + 2.0) ** (-epsilon) / epsilon
    if family is Family.LOGLOG:
        # (x+3)log(x+3) / ((x+1)log(x+2)) is decreasing, take its value at K
        c = (K + 3.0) * math.log(K + 3.0) / ((K + 1.0) * math.log(K + 2.0))
        return c * math.log(math.log(K + 3.0)) ** (-epsilon) / epsilon
    raise DomainError("Custom sequences need a declared tail bound")


@dataclass(frozen=True, eq=False)
class MultiplierSeq:
    """Positive sequence ``alpha_0..alpha_K`` plus a bound on the unstored part of its norm.

    ``finite_support`` marks a Custom sequence that is zero beyond the stored
    values; its tail bound is then 0.
    """

    values: np.ndarray
    family: Family = Family.CUSTOM
    epsilon: float | None = None
    tail_bound: float = 0.0
    finite_support: bool = True

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if v.size == 0:
            raise TooShortError("empty multiplier sequence")
        if not np.all(v > 0):
            raise DomainError("multiplier values must be strictly positive")
        if self.tail_bound < 0:
            raise DomainError("tail bound must be nonnegative")
        if self.family is not Family.CUSTOM:
            expected = family_values(self.family, self.epsilon, np.arange(v.size))
            if not np.array_equal(v, expected):
                raise DomainError(f"values do not match the {self.family.value} formula")
            object.__setattr__(self, "finite_support", False)
        elif self.finite_support and self.tail_bound != 0:
            raise DomainError("finite-support sequences have tail bound 0")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def custom(cls, values, tail_bound: float | None = None) -> "MultiplierSeq":
        """Custom sequence; ``tail_bound=None`` declares finite support."""
        if tail_bound is None:
            return cls(values, Family.CUSTOM, None, 0.0, True)
        return cls(values, Family.CUSTOM, None, float(tail_bound), False)

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, n):
        return self.values[n]

    @property
    def K(self) -> int:
        return self.values.size - 1

    def extended(self, length: int) -> "MultiplierSeq":
        """Same sequence with at least ``length`` stored values."""
        if length <= self.values.size:
            return self
        if self.family is Family.CUSTOM:
            raise LengthMismatchError(
                f"Custom sequence of length {self.values.size} cannot be extended to {length}"
            )
        return build_family(self.family, self.epsilon, length)

    def padded(self, length: int) -> np.ndarray:
        """Values ``alpha_0..alpha_{length-1}``, zero beyond a finite support."""
        if length <= self.values.size:
            return np.array(self.values[:length])
        if self.family is Family.CUSTOM and self.finite_support:
            out = np.zeros(length)
            out[: self.values.size] = self.values
            return out
        return np.array(self.extended(length).values)


def build_family(family, epsilon: float, length: int) -> MultiplierSeq:
    family = Family.parse(family) if isinstance(family, str) else family
    if family is Family.CUSTOM:
        raise DomainError("use MultiplierSeq.custom for Custom sequences")
    if not epsilon > 0:
        raise DomainError(f"epsilon must be > 0, got {epsilon}")
    if length < 3:
        raise TooShortError(f"need at least 3 terms, got {length}")
    K = length - 1
    vals = family_values(family, epsilon, np.arange(length))
    return MultiplierSeq(vals, family, float(epsilon), family_tail_bound(family, epsilon, K), False)


def _values(alpha) -> np.ndarray:
    return alpha.values if isinstance(alpha, MultiplierSeq) else np.asarray(alpha, dtype=np.float64)


def second_differences(alpha) -> np.ndarray:
    a = _values(alpha)
    return a[:-2] - 2.0 * a[1:-1] + a[2:]


def is_decreasing(alpha) -> bool:
    a = _values(alpha)
    return bool(np.all(a[:-1] >= a[1:]))


def is_concave_paper(alpha) -> bool:
    """Nonnegative second differences ``a_n - 2 a_{n+1} + a_{n+2} >= 0``.

    This is what is usually called convex; the name keeps the source convention.
    """
    a = _values(alpha)
    if a.size < 3:
        raise TooShortError(f"need at least 3 terms, got {a.size}")
    return bool(np.all(second_differences(a) >= 0))


def alpha_norm(alpha: MultiplierSeq) -> float:
    """Upper bound on ``sum_n alpha_n / (n+1)``: stored partial sum plus tail bound."""
    a = alpha.values
    return float(math.fsum(a / np.arange(1, a.size + 1))) + alpha.tail_bound


def hadamard(f: AnalyticPoly, alpha: MultiplierSeq, skip_constant: bool = False) -> AnalyticPoly:
    """Coefficientwise product ``sum_n f_n alpha_n z^n``.

    ``skip_constant`` drops the n = 0 term, giving the ``n >= 1`` convention.
    """
    f = _as_poly(f)
    if len(alpha) < len(f):
        if alpha.family is Family.CUSTOM:
            raise LengthMismatchError(f"Custom alpha has {len(alpha)} terms, f needs {len(f)}")
        alpha = alpha.extended(len(f))
    a = np.array(alpha.values[: len(f)])
    if skip_constant:
        a[0] = 0.0
    return AnalyticPoly(f.coeffs * a)


def partial_sum(f: AnalyticPoly, n: int) -> AnalyticPoly:
    f = _as_poly(f)
    if n < 0:
        raise DomainError("n must be >= 0")
    return AnalyticPoly(f.coeffs[: n + 1])


def cesaro_mean(f: AnalyticPoly, n: int) -> AnalyticPoly:
    """Average of ``S_0(f), ..., S_n(f)``: coefficient k gets weight ``(n+1-k)/(n+1)``."""
    f = _as_poly(f)
    if n < 0:
        raise DomainError("n must be >= 0")
    m = min(n, f.degree)
    k = np.arange(m + 1)
    return AnalyticPoly(f.coeffs[: m + 1] * (n + 1 - k) / (n + 1))


def cesaro_matrix(f: AnalyticPoly, n_max: int) -> np.ndarray:
    """Row n holds the coefficients of ``sigma_n(f)`` padded to ``len(f)``, for n = 0..n_max."""
    f = _as_poly(f)
    n = np.arange(n_max + 1)[:, None]
    k = np.arange(len(f))[None, :]
    w = np.clip((n + 1 - k) / (n + 1), 0.0, None)
    return w * f.coeffs[None, :]


def abel_first_step(f: AnalyticPoly, alpha: MultiplierSeq, K: int) -> AnalyticPoly:
    """``sum_{n<K} (alpha_n - alpha_{n+1}) S_n(f) + alpha_K S_K(f)``.

    Equals the Hadamard product of ``S_K(f)`` with alpha.
    """
    f = _as_poly(f)
    a = alpha.padded(K + 1)
    L = min(len(f), K + 1)
    c = f.coeffs[:L]
    out = a[K] * c
    for n in range(K):
        m = min(n + 1, L)
        out[:m] += (a[n] - a[n + 1]) * c[:m]
    return AnalyticPoly(out)


@dataclass
class AbelDecomposition:
    """``f*alpha = sum_{n<=T} weights[n] sigma_n(f) + sum(boundary_terms)``.

    ``weights[n] = (alpha_n - 2 alpha_{n+1} + alpha_{n+2}) (n+1)``. With
    ``K = T + 1`` the boundary terms are ``(K+1)(alpha_K - alpha_{K+1}) sigma_K(f)``
    and ``alpha_{K+1} S_K(f)``.
    """

    weights: np.ndarray
    cesaro_terms: list
    boundary_terms: list
    reconstruction_residual: float
    target: AnalyticPoly = field(repr=False)

    def reconstruct(self) -> AnalyticPoly:
        L = len(self.target)
        acc = np.zeros(L, dtype=np.complex128)
        for w, s in zip(self.weights, self.cesaro_terms):
            acc += w * s.padded(L)
        for b in self.boundary_terms:
            acc += b.padded(L)
        return AnalyticPoly(acc)


def abel_decompose(f: AnalyticPoly, alpha: MultiplierSeq, terms: int) -> AbelDecomposition:
    f = _as_poly(f)
    if terms < f.degree:
        raise LengthMismatchError(f"terms={terms} must be >= deg f = {f.degree}")
    T = int(terms)
    K = T + 1
    a = alpha.padded(K + 2)  # alpha_0..alpha_{K+1} = alpha_{T+2}
    weights = (a[: T + 1] - 2.0 * a[1 : T + 2] + a[2 : T + 3]) * np.arange(1, T + 2)
    sig = cesaro_matrix(f, K)
    cesaro_terms = [AnalyticPoly(row) for row in sig[: T + 1]]
    boundary = [
        AnalyticPoly((K + 1) * (a[K] - a[K + 1]) * sig[K]),
        AnalyticPoly(a[K + 1] * f.coeffs),  # S_K(f) = f since K > deg f
    ]
    target = AnalyticPoly(f.coeffs * a[: len(f)])
    recon = weights @ sig[: T + 1] + boundary[0].coeffs + boundary[1].coeffs
    scale = float(np.max(np.abs(target.coeffs)))
    err = float(np.max(np.abs(recon - target.coeffs)))
    resid = err / scale if scale > 0 else err
    return AbelDecomposition(weights, cesaro_terms, boundary, resid, target)


@dataclass
class SumLogReport:
    n_max: int
    min_slack: float
    argmin: int
    min_half_slack: float
    argmin_half: int
    min_final_slack: float
    argmin_final: int
    passed: bool


def sum_log_check(n_max: int) -> SumLogReport:
    """Scan every n <= n_max for the three links of
    ``sum_{k<=n} log(k+2) >= sum_{k=[n/2]}^n log(k+2) >= (n/2+1) log([n/2]+2) >= (n+1) log(n+2) / 4``.

    ``min_slack`` is for the end-to-end inequality, ``min_half_slack`` for the
    middle link and ``min_final_slack`` for the last one.
    """
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    n = np.arange(n_max + 1)
    logs = np.log(n + 2.0)
    csum = np.cumsum(logs)
    bound = 0.25 * (n + 1) * logs
    slack = csum - bound
    h = n // 2
    before = np.where(h > 0, csum[np.maximum(h - 1, 0)], 0.0)
    tail = csum - before
    mid = (n / 2.0 + 1.0) * np.log(h + 2.0)
    half_slack = np.minimum(tail - mid, csum - tail)
    final_slack = mid - bound
    i, j, k = int(np.argmin(slack)), int(np.argmin(half_slack)), int(np.argmin(final_slack))
    ok = slack[i] >= 0 and half_slack[j] >= 0 and final_slack[k] >= 0
    return SumLogReport(n_max, float(slack[i]), i, float(half_slack[j]), j, float(final_slack[k]), k, bool(ok))


@dataclass
class Lemma1Report:
    degree: int
    lhs: float
    rhs: float
    hinf: float
    lam: float
    passed: bool

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else (0.0 if self.lhs == 0 else math.inf)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def lemma1_check(p: AnalyticPoly, params: NormParams | None = None, tol: float = 0.0) -> Lemma1Report:
    """``||p||_N <= 3 ||p||_inf log(n+2)`` with n the degree of p (trailing zeros dropped)."""
    p = _as_poly(p)
    n = p.effective_degree
    p = AnalyticPoly(p.coeffs[: n + 1])
    est = frakn_norm(p, params)
    sup = est.parts["hinf"]
    rhs = 3.0 * sup * math.log(n + 2)
    return Lemma1Report(n, est.value, rhs, sup, est.parts["lambda"], bool(est.value <= rhs + tol))


@dataclass
class Theorem2Report:
    lhs: float
    rhs: float
    hinf_f: float
    alpha_norm: float
    scale: float
    chain: dict
    passed: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def theorem2_chain(alpha: MultiplierSeq) -> dict:
    """Finite versions of the sums in the bound chain for ``||alpha||``.

    Every summand is nonnegative for decreasing concave alpha, so the stored
    partial sums are lower bounds for the infinite sums; each must stay below
    the next larger quantity.
    """
    a = alpha.values
    n = np.arange(a.size)
    d1 = a[:-1] - a[1:]
    harmonic = np.cumsum(1.0 / (n + 1.0))
    logcum = np.cumsum(np.log(n + 2.0))
    d2 = second_differences(a)
    m = np.arange(d2.size)
    rtol = 1e-12
    A = alpha_norm(alpha)
    B = float(math.fsum(d1 * harmonic[:-1]))
    B_log = float(math.fsum(d1 * np.log(n[:-1] + 2.0)))
    C = float(math.fsum(d2 * logcum[:-2]))
    D = float(math.fsum(d2 * (m + 1.0) * np.log(m + 2.0)))
    return {
        "alpha_norm": A,
        "harmonic_sum": B,
        "log_sum": B_log,
        "second_difference_log_sum": C,
        "weighted_log_sum": D,
        "four_alpha_norm": 4.0 * A,
        "ok": bool(
            B <= A * (1 + rtol)
            and B_log <= B * (1 + rtol)
            and C <= B_log * (1 + rtol)
            and D <= 4.0 * C * (1 + rtol)
            and D <= 4.0 * A
        ),
    }


def theorem2_check(
    f: AnalyticPoly,
    alpha: MultiplierSeq,
    params: NormParams | None = None,
    tol: float = 0.0,
    normalize: bool = True,
    sigma_terms: int = 0,
) -> Theorem2Report:
    """``||f*alpha||_N <= 12 ||f||_inf ||alpha||``.

    With ``normalize`` f is first divided by its grid maximum so the sup-norm
    underestimate cannot loosen the test. ``sigma_terms > 0`` also evaluates
    ``||sigma_n(f)||_N`` for n < sigma_terms and checks each against
    ``3 ||f||_inf log(n+2)``.
    """
    f = _as_poly(f)
    if not is_decreasing(alpha) or not is_concave_paper(alpha):
        raise PreconditionFailed("alpha must be decreasing with nonnegative second differences")
    params = params or NormParams()
    sup = hinf_norm(f, params.oversample).value
    scale = 1.0
    if normalize and sup > 0:
        scale = sup
        f = f / sup
        sup = hinf_norm(f, params.oversample).value
    alpha = alpha.extended(len(f))
    g = hadamard(f, alpha)
    lhs = frakn_norm(g, params).value
    A = alpha_norm(alpha)
    rhs = 12.0 * sup * A
    chain = theorem2_chain(alpha)
    if sigma_terms > 0:
        rows = []
        for n in range(sigma_terms):
            s = frakn_norm(cesaro_mean(f, n), params).value
            rows.append((n, s, 3.0 * sup * math.log(n + 2)))
        chain["sigma_norms"] = rows
        chain["sigma_ok"] = all(s <= b + tol for _, s, b in rows)
    passed = lhs <= rhs + tol and chain["ok"] and chain.get("sigma_ok", True)
    return Theorem2Report(lhs, rhs, sup, A, scale, chain, bool(passed))


@dataclass
class Theorem4Report:
    f: AnalyticPoly
    lhs: float
    rhs: float
    alpha_norm: float
    hinf_g: float
    a_l2: float
    coefficient_ok: bool
    passed: bool

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def theorem4_propagate(
    g: AnalyticPoly,
    a,
    alpha: MultiplierSeq,
    params: NormParams | None = None,
    tol: float = 0.0,
) -> Theorem4Report:
    """Given ``|g_n| >= |a_n|``, set ``f = g*alpha`` and check the coefficient and norm bounds."""
    g = _as_poly(g)
    a = np.abs(np.asarray(a, dtype=np.complex128).reshape(-1))
    if not is_decreasing(alpha) or not is_concave_paper(alpha):
        raise PreconditionFailed("alpha must be decreasing with nonnegative second differences")
    gc = np.abs(g.padded(max(len(g), a.size)))
    bad = np.flatnonzero(gc[: a.size] < a)
    if bad.size:
        n = int(bad[0])
        raise DominationFailed(f"|g_{n}| = {gc[n]} < |a_{n}| = {a[n]}")
    params = params or NormParams()
    alpha = alpha.extended(max(len(g), a.size))
    f = hadamard(g, alpha)
    fc = np.abs(f.padded(a.size))
    # products of equal magnitudes may round apart by an ulp
    coef_ok = bool(np.all(fc >= alpha.values[: a.size] * a * (1.0 - 1e-14)))
    lhs = frakn_norm(f, params).value
    A = alpha_norm(alpha)
    sup = hinf_norm(g, params.oversample).value
    rhs = 12.0 * A * sup
    return Theorem4Report(f, lhs, rhs, A, sup, float(np.linalg.norm(a)), coef_ok, bool(coef_ok and lhs <= rhs + tol))
