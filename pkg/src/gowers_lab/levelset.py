"""Compact sigma-algebras from level sets of certified functions.

A certified function G with bound M is discretized at scale eps by the
cell map

    cell(x) = ( floor(Re G(x)/eps - alpha + 1/2),
                floor(Im G(x)/eps - alpha + 1/2) ),

and the algebra generated by several such functions is the common
refinement of their cell partitions.  The offset alpha is shared by both
coordinate axes and all generators, chosen among seeded candidates to
keep mass away from cell boundaries; the choice depends only on the
multiset of values, so shifting every generator shifts the partition.

Within an atom each coordinate of G varies by less than eps, so
||G - E(G|B)||_inf <= sqrt(2) eps, and the number of atoms contributed
by one generator is at most (2 ceil(M/eps) + 2)^2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, derive_rng
from .cyclic import GroupFunction, l2_norm, linf_norm
from .errors import (
    ApproximationBudgetError,
    InvalidConfigurationError,
    MeasurabilityError,
    ModeError,
    NumericalInconsistencyError,
)
from .gowers import fourier_coefficients
from .partitions import Partition, conditional_expectation, join
from .uap import (
    CertifiedFunction,
    cert_promote,
    cert_zero,
    certify_constant,
    certify_phase_sum,
)

GOLDEN_FRACTION = 0.6180339887498949
ALPHA_CANDIDATES = 32
BOUNDARY_SIGMA = 1.0 / 16


@dataclass(frozen=True)
class LevelSetGenerator:
    """One generator of a compact algebra: a certified function plus its
    discretization scale and the offset actually used."""

    certified: CertifiedFunction
    eps: float
    alpha: float


@dataclass(eq=False)
class CompactAlgebra:
    n: int
    generators: tuple[LevelSetGenerator, ...]
    partition: Partition

    @property
    def order(self) -> int:
        if not self.generators:
            return 0
        return max(g.certified.cert.order for g in self.generators)

    @property
    def complexity(self) -> float:
        if not self.generators:
            return 0.0
        return max(
            float(len(self.generators)),
            max(1.0 / g.eps - 1.0 for g in self.generators),
            max(g.certified.cert.bound for g in self.generators),
        )

    def atom_capacity(self) -> int:
        cap = 1
        for g in self.generators:
            side = 2 * int(np.ceil(g.certified.cert.bound / g.eps)) + 2
            cap *= side * side
        return cap


def trivial_algebra(n: int) -> CompactAlgebra:
    return CompactAlgebra(n, (), Partition.trivial(n))


def _cell_coordinates(values: np.ndarray, eps: float, alpha: float) -> np.ndarray:
    re = np.floor(values.real / eps - alpha + 0.5)
    im = np.floor(values.imag / eps - alpha + 0.5)
    return np.stack([re, im], axis=1).astype(np.int64)


def _boundary_mass(values_list, eps_list, alpha: float, sigma: float) -> int:
    total = 0
    for values, eps in zip(values_list, eps_list):
        for comp in (values.real, values.imag):
            frac = np.mod(comp / eps - alpha + 0.5, 1.0)
            dist = np.minimum(frac, 1.0 - frac)
            total += int(np.count_nonzero(dist < sigma))
    return total


def select_alpha(values_list, eps_list, seed: int = 0,
                 sigma: float = BOUNDARY_SIGMA) -> float:
    """Pick the candidate offset with the least boundary mass.

    The mass functional is shift-invariant, so the selected alpha is the
    same for any shift of the inputs.  When every candidate ties, a fixed
    irrational fallback keeps the choice away from the lattice.
    """
    rng = derive_rng(seed, "level-alpha")
    candidates = rng.uniform(0.0, 1.0, ALPHA_CANDIDATES)
    masses = np.array(
        [_boundary_mass(values_list, eps_list, a, sigma) for a in candidates]
    )
    if masses.min() == masses.max():
        return GOLDEN_FRACTION
    return float(candidates[int(np.argmin(masses))])


def level_set_algebra(
    generators,
    eps,
    seed: int = 0,
    alpha: float | None = None,
) -> CompactAlgebra:
    """The algebra generated by the cell partitions of certified functions.

    `eps` may be a scalar or one scale per generator.  A shared alpha is
    selected unless supplied.
    """
    gens = tuple(generators)
    if not gens:
        raise InvalidConfigurationError("need at least one generator")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise InvalidConfigurationError("generators on different groups")
    eps_list = list(np.broadcast_to(np.asarray(eps, dtype=float), len(gens)))
    if any(e <= 0 for e in eps_list):
        raise InvalidConfigurationError("eps must be positive")
    values_list = [g.func.values for g in gens]
    if alpha is None:
        alpha = select_alpha(values_list, eps_list, seed=seed)
    keys = np.hstack(
        [_cell_coordinates(v, e, alpha) for v, e in zip(values_list, eps_list)]
    )
    _, labels = np.unique(keys, axis=0, return_inverse=True)
    part = Partition(n, labels)
    algebra = CompactAlgebra(
        n,
        tuple(LevelSetGenerator(g, float(e), float(alpha)) for g, e in zip(gens, eps_list)),
        part,
    )
    if part.atom_count > algebra.atom_capacity():
        raise NumericalInconsistencyError(
            f"{part.atom_count} atoms exceeds capacity {algebra.atom_capacity()}"
        )
    return algebra


def join_compact(a: CompactAlgebra, b: CompactAlgebra) -> CompactAlgebra:
    if a.n != b.n:
        raise InvalidConfigurationError("algebras on different groups")
    return CompactAlgebra(a.n, a.generators + b.generators, join(a.partition, b.partition))


def oscillation(algebra: CompactAlgebra) -> float:
    """max_j ||G_j - E(G_j | B)||_inf; at most sqrt(2) max eps by construction."""
    worst = 0.0
    for g in algebra.generators:
        proj = conditional_expectation(g.certified.func, algebra.partition)
        worst = max(worst, linf_norm(g.certified.func - proj))
    return worst


# ---------------------------------------------------------------------------
# certified approximation of measurable functions


@dataclass(frozen=True)
class ApproximationResult:
    certified: CertifiedFunction
    error: float  # L2 distance from the input
    method: str


def _is_single_phase(g: LevelSetGenerator) -> bool:
    return g.certified.phase_terms is not None and len(g.certified.phase_terms) == 1


def _bernstein_single_phase(
    f: GroupFunction, algebra: CompactAlgebra, delta: float
):
    """Bernstein route for one single-phase generator; returns
    (terms, error) or (None, best error) when the degree budget runs out.

    The generator is gamma e(Q(x)/n), so every atom is a union of arcs in
    the phase variable t = Q(x)/n mod 1.  The target is smoothed along t,
    approximated by a tensor Bernstein polynomial in the circle
    coordinates (cos, sin), and the composite, a trigonometric polynomial
    of degree at most 2D in t, is recovered exactly by interpolation so
    the certificate reproduces the evaluated values.
    """
    gen = algebra.generators[0]
    gamma, poly = gen.certified.phase_terms[0]
    n = f.n
    from .cyclic import poly_values_mod

    t_idx = poly_values_mod(poly, n)  # Q(x) mod n
    t = t_idx / n
    arg = np.angle(gamma) / (2 * np.pi) if gamma != 0 else 0.0

    # piecewise-constant target on a fine phase grid, then a wrapped
    # Gaussian smoothing; grid values come from the attained points
    grid = 1 << 12
    target = np.zeros(grid, dtype=np.complex128)
    filled = np.zeros(grid, dtype=bool)
    pos = np.floor(t * grid).astype(int) % grid
    target[pos] = f.values
    filled[pos] = True
    if not filled.all():
        # nearest attained phase fills the gaps
        idx = np.where(filled)[0]
        all_idx = np.arange(grid)
        diff = np.abs(all_idx[:, None] - idx[None, :])
        diff = np.minimum(diff, grid - diff)
        target = target[idx[np.argmin(diff, axis=1)]]

    sigma = max(delta * delta / 64.0, 1.0 / grid)
    best_err = np.inf
    for _ in range(4):
        freqs = np.fft.fftfreq(grid, d=1.0 / grid)
        kernel = np.exp(-2 * (np.pi * sigma * freqs) ** 2)
        smooth = np.fft.ifft(np.fft.fft(target) * kernel)

        for degree in (4, 8, 16, 32, 64):
            # tensor Bernstein sample values h(a/D, b/D) from the smoothed
            # target at the angle matching each circle node
            d_deg = degree
            u_nodes = np.arange(d_deg + 1) / d_deg

            def h_val(u, v):
                ang = np.arctan2(2 * v - 1, 2 * u - 1) / (2 * np.pi)
                gpos = np.floor(((ang - arg) % 1.0) * grid).astype(int) % grid
                return smooth[gpos]

            uu, vv = np.meshgrid(u_nodes, u_nodes, indexing="ij")
            h_matrix = h_val(uu, vv)

            theta = 2 * np.pi * (t + arg)
            u = (np.cos(theta) + 1) / 2
            v = (np.sin(theta) + 1) / 2
            bu = _bernstein_basis(u, d_deg)  # (n, D+1)
            bv = _bernstein_basis(v, d_deg)
            approx = np.einsum("xa,ab,xb->x", bu, h_matrix, bv)
            err = float(np.sqrt(np.mean(np.abs(f.values - approx) ** 2)))
            best_err = min(best_err, err)
            if err <= delta:
                # exact trig interpolation of the composite in t
                two_d = 2 * d_deg
                samples = 4 * d_deg + 5
                ts = np.arange(samples) / samples
                th = 2 * np.pi * (ts + arg)
                su = _bernstein_basis((np.cos(th) + 1) / 2, d_deg)
                sv = _bernstein_basis((np.sin(th) + 1) / 2, d_deg)
                gvals = np.einsum("xa,ab,xb->x", su, h_matrix, sv)
                spec = np.fft.fft(gvals) / samples
                terms = []
                for m in range(-two_d, two_d + 1):
                    coeff = spec[m % samples]
                    if abs(coeff) <= 1e-13:
                        continue
                    scaled = tuple((m * c) % n for c in poly)
                    terms.append((complex(coeff), scaled))
                return terms, err
        sigma /= 2.0
    return None, best_err


def _bernstein_basis(x: np.ndarray, degree: int) -> np.ndarray:
    from math import comb

    k = np.arange(degree + 1)
    c = np.array([comb(degree, int(a)) for a in k], dtype=float)
    xx = x[:, None]
    return c[None, :] * xx ** k[None, :] * (1 - xx) ** (degree - k)[None, :]


def approximate_measurable(
    f: GroupFunction,
    algebra: CompactAlgebra,
    delta: float,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
) -> ApproximationResult:
    """Certify a function within L2 distance delta of a measurable f.

    f must be constant on the atoms of the algebra.  The certificate is
    promoted to the algebra's order.  Routes: 'bernstein' composites a
    Bernstein polynomial with the generator's phase and fails honestly
    with the achieved error when the degree budget (64, with three sigma
    halvings) is exhausted; 'spectral' expands f in characters, which is
    exact with bound the l1 mass of the spectrum; 'auto' tries the first
    when the algebra has a single single-phase generator and falls back
    to the second.
    """
    if method not in ("auto", "bernstein", "spectral"):
        raise ModeError(f"unknown method {method!r}")
    proj = conditional_expectation(f, algebra.partition)
    meas_gap = linf_norm(f - proj)
    if meas_gap > tol * max(1.0, linf_norm(f)):
        raise MeasurabilityError(
            f"function varies by {meas_gap:.3e} within an atom"
        )
    if delta <= 0:
        raise InvalidConfigurationError("delta must be positive")
    n = f.n
    target_order = algebra.order

    if l2_norm(f) <= delta:
        zero = cert_zero(n, target_order)
        return ApproximationResult(zero, l2_norm(f), "zero")
    mean = complex(np.mean(f.values))
    if linf_norm(f - GroupFunction.constant(n, mean)) <= tol:
        const = cert_promote(certify_constant(n, mean), target_order)
        err = l2_norm(f - const.func)
        return ApproximationResult(const, err, "constant")

    single = (
        len(algebra.generators) == 1 and _is_single_phase(algebra.generators[0])
    )
    if method == "bernstein" or (method == "auto" and single):
        if not single:
            raise ApproximationBudgetError(
                "Bernstein route needs exactly one single-phase generator",
                achieved=None,
            )
        terms, err = _bernstein_single_phase(f, algebra, delta)
        if terms is not None:
            cf = certify_phase_sum(n, terms)
            cf = cert_promote(cf, max(target_order, cf.cert.order))
            true_err = l2_norm(f - cf.func)
            return ApproximationResult(cf, true_err, "bernstein")
        if method == "bernstein":
            raise ApproximationBudgetError(
                f"degree budget exhausted at error {err:.3e} (target {delta:.3e})",
                achieved=err,
            )

    spectrum = fourier_coefficients(f)
    terms = [
        (complex(spectrum[k]), (0, k) if k else (0,))
        for k in range(n)
        if abs(spectrum[k]) > 1e-13
    ]
    cf = certify_phase_sum(n, terms)
    cf = cert_promote(cf, max(target_order, cf.cert.order))
    err = l2_norm(f - cf.func)
    if err > delta:
        raise ApproximationBudgetError(
            f"spectral reconstruction off by {err:.3e}", achieved=err
        )
    return ApproximationResult(cf, err, "spectral")
