"""Uniformity norms of order d on Z_N, their duals, and multilinear averages.

The norm is computed through the power functional

    S_0(f) = E(f),    S_d(f) = E( S_{d-1}( conj(f) . T^h f ) | h in Z_N ),

with ||f||_{U^d} = S_d(f)^(1/2^d) for d >= 1.  The order-0 quantity E(f)
is complex and is reported separately (it is not a norm).  S_d is real and
non-negative up to rounding for d >= 1; both facts are asserted before the
root is taken.

Three independent evaluation routes are kept deliberately separate so they
can be cross-checked: the recursion above, an unrolled parallelepiped sum
(orders 1..3), and for order 2 the l^4 sum of Fourier coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL
from .cyclic import GroupFunction, _same_group
from .errors import (
    BoundednessError,
    InvalidConfigurationError,
    NumericalInconsistencyError,
    UnsupportedOrderError,
)


@dataclass(frozen=True)
class GowersNorm:
    order: int
    value: float | None  # real norm, present for order >= 1
    u0_value: complex | None  # complex mean, present for order 0


def _power(vals: np.ndarray, d: int) -> complex:
    # S_d via the defining recursion; each h-slice is computed exactly once
    if d == 0:
        return complex(np.mean(vals))
    conj = np.conj(vals)
    n = vals.shape[0]
    acc = 0.0 + 0.0j
    for h in range(n):
        acc += _power(conj * np.roll(vals, -h), d - 1)
    return acc / n


def _real_power(s: complex, d: int, scale: float, tol: float) -> float:
    atol = tol * max(1.0, scale)
    if abs(s.imag) > atol:
        raise NumericalInconsistencyError(
            f"S_{d} has imaginary part {s.imag:.3e} beyond tolerance"
        )
    if s.real < -atol:
        raise NumericalInconsistencyError(f"S_{d} = {s.real:.3e} is negative")
    return max(s.real, 0.0)


def gowers_norm(f: GroupFunction, d: int, tol: float = DEFAULT_TOL) -> GowersNorm:
    """||f||_{U^d} by the power-functional recursion; order 0 returns E(f)."""
    if d < 0:
        raise UnsupportedOrderError(f"order must be >= 0, got {d}")
    if d == 0:
        return GowersNorm(0, None, complex(np.mean(f.values)))
    s = _power(f.values, d)
    scale = float(np.max(np.abs(f.values)) ** (2 ** d))
    s_real = _real_power(s, d, scale, tol)
    return GowersNorm(d, float(s_real ** (1.0 / 2 ** d)), None)


def gowers_norm_direct(f: GroupFunction, d: int, tol: float = DEFAULT_TOL) -> float:
    """Unrolled parallelepiped average for 1 <= d <= 3.

    Sums conj^eps(f)(x + omega . h) over the full cube of side offsets,
    conjugating a vertex omega exactly when d + |omega| is odd.  Agrees
    with the recursive route; kept loop-free as an independent oracle.
    """
    if not 1 <= d <= 3:
        raise UnsupportedOrderError(f"direct cube sum implemented for d in 1..3, got {d}")
    n = f.n
    grids = np.indices((n,) * (d + 1))
    x = grids[0]
    total = np.ones((n,) * (d + 1), dtype=np.complex128)
    for bits in range(2 ** d):
        pos = x.copy()
        weight = 0
        for i in range(d):
            if bits >> i & 1:
                pos = pos + grids[i + 1]
                weight += 1
        factor = f.values[pos % n]
        if (d + weight) % 2 == 1:
            factor = np.conj(factor)
        total *= factor
    s = complex(total.mean())
    scale = float(np.max(np.abs(f.values)) ** (2 ** d))
    s_real = _real_power(s, d, scale, tol)
    return float(s_real ** (1.0 / 2 ** d))


def fourier_coefficients(f: GroupFunction) -> np.ndarray:
    """hat f(xi) = E_x f(x) e(-x xi / N), by direct O(N^2) transform."""
    n = f.n
    x = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(x, x) / n)
    return f.values @ kernel / n


def gowers_u2_fourier(f: GroupFunction) -> float:
    """||f||_{U^2} as the l^4 norm of the Fourier coefficients."""
    hat = fourier_coefficients(f)
    return float(np.sum(np.abs(hat) ** 4) ** 0.25)


def dual_function(f: GroupFunction, d: int) -> GroupFunction:
    """D_0(f) = 1;  D_d(f) = E( conj(D_{d-1}(conj(f) T^h f)) . T^h f | h ).

    For bounded f every D_d(f) is bounded, and <f, D_d(f)> equals
    ||f||_{U^d}^{2^d}.
    """
    if d < 0:
        raise UnsupportedOrderError(f"order must be >= 0, got {d}")
    return GroupFunction(f.n, _dual(f.values, d))


def _dual(vals: np.ndarray, d: int) -> np.ndarray:
    n = vals.shape[0]
    if d == 0:
        return np.ones(n, dtype=np.complex128)
    conj = np.conj(vals)
    acc = np.zeros(n, dtype=np.complex128)
    for h in range(n):
        th = np.roll(vals, -h)
        acc += np.conj(_dual(conj * th, d - 1)) * th
    return acc / n


def multilinear_average(fs, lams) -> complex:
    """E( prod_j (T^{lam_j r} f_j)(x) | x, r in Z_N ), exact double average."""
    fs = list(fs)
    if not fs:
        raise InvalidConfigurationError("need at least one function")
    n = fs[0].n
    for g in fs[1:]:
        _same_group(fs[0], g)
    lams = [int(l) % n for l in lams]
    if len(lams) != len(fs):
        raise InvalidConfigurationError("one dilation constant per function")
    acc = 0.0 + 0.0j
    for r in range(n):
        prod = np.ones(n, dtype=np.complex128)
        for g, lam in zip(fs, lams):
            prod *= np.roll(g.values, -(lam * r) % n)
        acc += prod.mean()
    return complex(acc / n)


@dataclass(frozen=True)
class VonNeumannReport:
    k: int
    lhs: float
    rhs: float
    norms: tuple
    holds: bool


def von_neumann_check(fs, lams, tol: float = DEFAULT_TOL) -> VonNeumannReport:
    """Check |E prod T^{lam_j r} f_j| <= min_j ||f_j||_{U^{k-1}} for bounded f_j.

    The constants lam_j must be pairwise distinct mod N; the bound fails
    without that hypothesis, so it is enforced rather than warned about.
    """
    fs = list(fs)
    k = len(fs)
    if k < 2:
        raise InvalidConfigurationError("need at least two functions")
    n = fs[0].n
    lams_mod = [int(l) % n for l in lams]
    if len(set(lams_mod)) != len(lams_mod):
        raise InvalidConfigurationError("dilation constants must be distinct mod N")
    for g in fs:
        if not g.is_bounded(tol):
            raise BoundednessError("von Neumann bound requires max|f| <= 1")
    lhs = abs(multilinear_average(fs, lams_mod))
    norms = tuple(gowers_norm(g, k - 1, tol).value for g in fs)
    rhs = float(min(norms))
    return VonNeumannReport(k, float(lhs), rhs, norms, bool(lhs <= rhs + tol))


# ---------------------------------------------------------------------------
# batched twin of the recursion, for bulk property sweeps

_BATCH_EXPAND_LIMIT = 4_000_000


def gowers_power_batch(stack: np.ndarray, d: int) -> np.ndarray:
    """S_d for every row of a (B, N) stack; same recursion, vectorized.

    Used by large randomized sweeps where calling the scalar route per
    function would dominate the runtime.  Agreement with gowers_norm is
    asserted in the test suite on sampled rows.
    """
    stack = np.asarray(stack, dtype=np.complex128)
    if d == 0:
        return stack.mean(axis=1)
    b, n = stack.shape
    conj = np.conj(stack)
    if b * n * n <= _BATCH_EXPAND_LIMIT:
        rolled = np.stack([np.roll(stack, -h, axis=1) for h in range(n)])
        expanded = (conj[None, :, :] * rolled).reshape(n * b, n)
        return gowers_power_batch(expanded, d - 1).reshape(n, b).mean(axis=0)
    acc = np.zeros(b, dtype=np.complex128)
    for h in range(n):
        acc += gowers_power_batch(conj * np.roll(stack, -h, axis=1), d - 1)
    return acc / n


def gowers_norm_batch(stack: np.ndarray, d: int, tol: float = DEFAULT_TOL) -> np.ndarray:
    """||row||_{U^d} for every row of a (B, N) stack, d >= 1."""
    if d < 1:
        raise UnsupportedOrderError("batched norm needs d >= 1")
    s = gowers_power_batch(stack, d)
    scale = np.maximum(1.0, np.max(np.abs(stack), axis=1) ** (2 ** d))
    if np.any(np.abs(s.imag) > tol * scale):
        raise NumericalInconsistencyError("batched S_d has non-real entries")
    if np.any(s.real < -tol * scale):
        raise NumericalInconsistencyError("batched S_d has negative entries")
    return np.maximum(s.real, 0.0) ** (1.0 / 2 ** d)
