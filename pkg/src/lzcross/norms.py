"""Anisotropic Lorentz-Zygmund norms on periodic grids, and mixed sequence norms.

The scalar norm of a nonnegative profile v sorted on (0,1] is

    ( integral_0^1  v*(t)^tau (1 + |log2 t|)^(alpha tau) t^(tau/p - 1) dt )^(1/tau)

where v* is the decreasing rearrangement.  The multivariate version sorts
the sample magnitudes one axis at a time (axis 0 first) and then applies
the weighted integral per axis, innermost axis first.  Integrals are taken
over the piecewise-constant profile exactly, via Gauss-Legendre quadrature
after the substitution u = -log2 t which makes the integrand smooth.

Everything here is a pure function of its arguments; quadrature weights are
memoized per (N, p, alpha, tau).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .indexsets import MultiIndex, RationalLike, as_fraction

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(16)
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class ScalarSpaceParams:
    """One axis of the target space: primary index p, log exponent alpha, fine index tau.

    p is kept as an exact rational because ratios of expressions in 1/p
    later decide set membership; alpha and tau only ever enter quadrature
    weights and stay floats.
    """

    p: Fraction
    alpha: float
    tau: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", as_fraction(self.p))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "tau", float(self.tau))
        if not 1 < self.p:
            raise ValueError("p must exceed 1")
        if not 1.0 < self.tau < math.inf:
            raise ValueError("tau must lie in (1, infinity)")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")


@dataclass(frozen=True)
class MixedSpaceParams:
    """Per-axis scalar space parameters for the anisotropic mixed norm."""

    axes: tuple[ScalarSpaceParams, ...]

    def __post_init__(self) -> None:
        if len(self.axes) == 0:
            raise ValueError("at least one axis required")

    @classmethod
    def of(
        cls,
        p: Sequence[RationalLike],
        alpha: Sequence[float],
        tau: Sequence[float],
    ) -> "MixedSpaceParams":
        if not (len(p) == len(alpha) == len(tau)):
            raise ValueError("parameter lists must share one length")
        return cls(
            tuple(
                ScalarSpaceParams(as_fraction(pj), aj, tj)
                for pj, aj, tj in zip(p, alpha, tau)
            )
        )

    @classmethod
    def lebesgue(cls, p: RationalLike, m: int) -> "MixedSpaceParams":
        """Plain L_p in every axis: alpha = 0 and tau = p."""
        pf = as_fraction(p)
        return cls.of([pf] * m, [0.0] * m, [float(pf)] * m)

    @property
    def m(self) -> int:
        return len(self.axes)

    def is_plain_l2(self) -> bool:
        return all(
            ax.p == 2 and ax.alpha == 0.0 and ax.tau == 2.0 for ax in self.axes
        )


def _validated_shape(shape: Sequence[int]) -> tuple[int, ...]:
    shape = tuple(int(n) for n in shape)
    for n in shape:
        if n < 2 or n & (n - 1):
            raise ValueError("axis sample counts must be powers of two, at least 2")
    return shape


@dataclass(frozen=True)
class GridFunction:
    """Samples of a periodic function on the uniform product grid.

    values[i1, ..., im] is the sample at x_j = i_j / N_j on the unit torus;
    every N_j is a power of two.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values)
        if arr.dtype.kind not in "fc":
            arr = arr.astype(np.complex128)
        _validated_shape(arr.shape)
        object.__setattr__(self, "values", arr)

    @property
    def m(self) -> int:
        return self.values.ndim

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def to_json_dict(self) -> dict:
        arr = np.asarray(self.values, dtype=np.complex128)
        return {
            "m": self.m,
            "shape": list(self.shape),
            "re": [float(x) for x in arr.real.ravel()],
            "im": [float(x) for x in arr.imag.ravel()],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "GridFunction":
        shape = _validated_shape(doc["shape"])
        if int(doc["m"]) != len(shape):
            raise ValueError("m does not match shape arity")
        re = np.asarray(doc["re"], dtype=np.float64).reshape(shape)
        im_raw = doc.get("im")
        im = (
            np.zeros(shape)
            if im_raw is None
            else np.asarray(im_raw, dtype=np.float64).reshape(shape)
        )
        return cls(re + 1j * im)


@dataclass(frozen=True)
class RearrangedProfile:
    """Nonnegative profile on the product of cells ((i)/N, (i+1)/N] per axis.

    Any cell count is representable; the weighted integrals downstream
    insist on powers of two, sorting itself does not care.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.size and float(arr.min()) < 0.0:
            raise ValueError("profile values must be nonnegative")
        object.__setattr__(self, "values", arr)


@dataclass(frozen=True)
class SequenceNormSpec:
    """Iterated sequence-norm exponents, axis 0 innermost; may include inf."""

    thetas: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
        if len(self.thetas) == 0:
            raise ValueError("at least one exponent required")
        if any(not t > 0.0 for t in self.thetas):
            raise ValueError("sequence exponents must be positive (inf allowed)")

    @property
    def m(self) -> int:
        return len(self.thetas)


def _magnitudes(data) -> np.ndarray:
    if isinstance(data, GridFunction):
        return np.abs(data.values)
    if isinstance(data, RearrangedProfile):
        return np.array(data.values, dtype=np.float64)
    return np.abs(np.asarray(data))


def rearrange_axis(data, axis: int) -> RearrangedProfile:
    """Sort magnitudes in decreasing order along one axis, other axes fixed."""
    arr = _magnitudes(data).astype(np.float64)
    if not 0 <= axis < arr.ndim:
        raise ValueError("axis out of range")
    return RearrangedProfile(np.flip(np.sort(arr, axis=axis), axis=axis))


def iterated_rearrangement(data) -> RearrangedProfile:
    """Apply rearrange_axis successively on axis 0, 1, ..., m-1."""
    arr = _magnitudes(data).astype(np.float64)
    for axis in range(arr.ndim):
        arr = np.flip(np.sort(arr, axis=axis), axis=axis)
    return RearrangedProfile(arr)


@functools.lru_cache(maxsize=128)
def _cell_weights(n_cells: int, p: float, alpha: float, tau: float) -> np.ndarray:
    """Integral of (1+|log2 t|)^(alpha tau) t^(tau/p-1) over each cell (i/N, (i+1)/N].

    In u = -log2 t the integrand is ln2 (1+u)^(alpha tau) 2^(-u tau/p) on a
    finite interval per cell, handled by 16-point Gauss-Legendre.  The first
    cell reaches u = infinity and is summed over unit windows until the
    remainder is negligible; the decay rate tau/p > 0 guarantees termination.
    """
    a, d = alpha * tau, tau / p

    def seg(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        u = mid[..., None] + half[..., None] * _GAUSS_NODES
        vals = (1.0 + u) ** a * np.exp2(-u * d)
        return _LN2 * half * (vals @ _GAUSS_WEIGHTS)

    i = np.arange(1, n_cells, dtype=np.float64)
    u_lo = np.log2(n_cells / (i + 1.0))
    u_hi = np.log2(n_cells / i)
    weights = np.empty(n_cells)
    weights[1:] = seg(u_lo, u_hi)

    # first cell: unit windows from u0 = log2 N until the tail is negligible
    u0 = math.log2(n_cells)
    total = 0.0
    for step in range(20000):
        lo = np.array([u0 + step])
        piece = float(seg(lo, lo + 1.0)[0])
        total += piece
        if piece <= 1e-18 * total and step >= 2:
            break
    weights[0] = total
    weights.setflags(write=False)
    return weights


def cell_weights(n_cells: int, params: ScalarSpaceParams) -> np.ndarray:
    if n_cells < 2 or n_cells & (n_cells - 1):
        raise ValueError("cell count must be a power of two, at least 2")
    return _cell_weights(n_cells, float(params.p), params.alpha, params.tau)


def lz_scalar_norm(profile, params: ScalarSpaceParams) -> float:
    """One-dimensional norm of a nonincreasing profile.

    Computes (sum_i v_i^tau W_i)^(1/tau) with W_i the exact cell weights,
    which is the integral of the piecewise-constant profile.
    """
    v = _magnitudes(profile)
    if v.ndim != 1:
        raise ValueError("scalar norm expects a one-dimensional profile")
    if np.any(v[1:] > v[:-1]):
        raise ValueError("profile must be nonincreasing; rearrange first")
    w = cell_weights(v.shape[0], params)
    return float(np.dot(v**params.tau, w)) ** (1.0 / params.tau)


def anisotropic_norm(f, params: MixedSpaceParams) -> float:
    """Mixed Lorentz-Zygmund norm of grid samples.

    Magnitudes are rearranged axis by axis, then the weighted tau_j integral
    is applied per axis, axis 0 innermost.
    """
    prof = iterated_rearrangement(f).values
    if prof.ndim != params.m:
        raise ValueError("parameter arity does not match grid dimension")
    g = prof
    for ax in params.axes:
        w = cell_weights(g.shape[0], ax)
        g = np.tensordot(g**ax.tau, w, axes=(0, 0)) ** (1.0 / ax.tau)
    return float(g)


def separable_norm(
    axis_magnitudes: Sequence[np.ndarray], params: MixedSpaceParams
) -> float:
    """Mixed norm of a product function from its per-axis sample magnitudes.

    For f(x) = prod_j g_j(x_j) on the product grid the iterated rearrangement
    is the outer product of the per-axis decreasing sorts, and the iterated
    integral factorizes; the result equals anisotropic_norm on the full grid
    exactly, at a one-dimensional cost per axis.
    """
    if len(axis_magnitudes) != params.m:
        raise ValueError("need one magnitude vector per axis")
    out = 1.0
    for mag, ax in zip(axis_magnitudes, params.axes):
        v = np.sort(np.abs(np.asarray(mag, dtype=np.float64)))[::-1]
        out *= lz_scalar_norm(v, ax)
    return out


def mixed_reduce(values: np.ndarray, spec: SequenceNormSpec) -> float:
    """Iterated sequence norm of a dense nonnegative array, axis 0 innermost.

    Finite exponents theta contribute (sum x^theta)^(1/theta); infinite ones
    contribute the maximum.  Exponents below 1 give the usual quasi-norm.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != spec.m:
        raise ValueError("exponent arity does not match array dimension")
    if arr.size == 0:
        return 0.0
    if float(arr.min()) < 0.0:
        raise ValueError("sequence entries must be nonnegative")
    for theta in spec.thetas:
        arr = arr.max(axis=0) if math.isinf(theta) else (arr**theta).sum(axis=0) ** (1.0 / theta)
    return float(arr)


def mixed_sequence_norm(
    values: Mapping[MultiIndex, float],
    spec: SequenceNormSpec,
    support: Sequence[MultiIndex],
) -> float:
    """Iterated sequence norm over an explicit finite support.

    Support entries missing from the map count as zero; map entries outside
    the support are ignored.
    """
    support = [tuple(int(c) for c in s) for s in support]
    if not support:
        return 0.0
    if any(len(s) != spec.m or min(s) < 0 for s in support):
        raise ValueError("support entries must be nonnegative of matching arity")
    dims = tuple(max(s[j] for s in support) + 1 for j in range(spec.m))
    arr = np.zeros(dims)
    for s in support:
        x = float(values.get(s, 0.0))
        if not math.isfinite(x) or x < 0.0:
            raise ValueError("sequence values must be finite and nonnegative")
        arr[s] = x
    return mixed_reduce(arr, spec)
