"""PSK decision geometry: constellations, region basis vectors, feasibility matrix.

For m-PSK the decision region of point c_i is the angular sector of all y
at least as close to c_i as to every other point. The region is the conic
hull of two unit vectors s_{i,1}, s_{i,2} obtained by rotating c_i by
-pi/m and +pi/m, so membership of y in region i is equivalent to the
coordinates S_i^{-1} g(y) being positive, where S_i = [s_{i,1} | s_{i,2}]
and g is the complex-to-real lift.

Stacking the per-user inverses block-diagonally against the lifted channel
gives the feasibility matrix Lambda: a real transmit vector x is decoded
correctly by every user in the noiseless downlink iff all entries of
Lambda @ x are strictly positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .reallift import lift_channel, lift_scalar, rotation

__all__ = [
    "Constellation",
    "DecisionBasis",
    "FeasibilityMatrix",
    "build_constellation",
    "build_basis",
    "basis_inverses",
    "build_feasibility_matrix",
    "coefficients",
    "in_region",
    "decode",
    "decode_all",
]

# Relative slack under which two point distances count as tied. Exact-boundary
# points (and y=0, equidistant from the whole circle) must resolve to ties even
# though hypot results can differ in the last ulp.
_TIE_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Constellation:
    """Unit-circle PSK constellation of the given order."""

    order: int
    points: np.ndarray  # complex, shape (order,)


@dataclass(frozen=True, eq=False)
class DecisionBasis:
    """Conic basis of the decision region of constellation point `index`."""

    index: int
    s1: np.ndarray     # region edge rotated -pi/m from the point, shape (2,)
    s2: np.ndarray     # region edge rotated +pi/m, shape (2,)
    matrix: np.ndarray  # S = [s1 | s2], shape (2, 2)
    inverse: np.ndarray  # closed-form S^{-1}, shape (2, 2)


@dataclass(frozen=True, eq=False)
class FeasibilityMatrix:
    """Block-diagonal region inverses applied to the lifted channel.

    matrix has shape (2K, 2Nt); row pair (2k, 2k+1) holds the region
    coordinates of user k's noiseless observation as a linear map of the
    interleaved real transmit vector.
    """

    matrix: np.ndarray
    nt: int
    k: int
    m: int
    messages: tuple[int, ...]


@lru_cache(maxsize=None)
def build_constellation(m: int) -> Constellation:
    """Return the m-PSK constellation c_i = exp(2j*pi*i/m), i = 0..m-1."""
    m = int(m)
    if m < 2:
        raise ValueError(f"constellation order must be >= 2, got {m}")
    i = np.arange(m)
    points = np.cos(2 * np.pi * i / m) + 1j * np.sin(2 * np.pi * i / m)
    return Constellation(order=m, points=points)


def build_basis(m: int, i: int) -> DecisionBasis:
    """Return the decision-region basis of point i for m-PSK.

    The edges are s1 = R(-pi/m) g(c_i) and s2 = R(+pi/m) g(c_i); the inverse
    is the closed form

        S_i^{-1} = 1/sin(2*pi/m) * [[ sin(pi(2i+1)/m), -cos(pi(2i+1)/m)],
                                    [-sin(pi(2i-1)/m),  cos(pi(2i-1)/m)]].

    Requires m >= 3; at m = 2 the two edges are antiparallel and S_i is
    singular (sin(2*pi/m) = 0).
    """
    m = int(m)
    i = int(i)
    if m < 3:
        raise ValueError(f"region basis needs order >= 3, got m={m}")
    if not 0 <= i < m:
        raise ValueError(f"point index {i} out of range for order {m}")
    g = lift_scalar(build_constellation(m).points[i])
    s1 = rotation(-np.pi / m) @ g
    s2 = rotation(np.pi / m) @ g
    lo = np.pi * (2 * i - 1) / m
    hi = np.pi * (2 * i + 1) / m
    inv = np.array([[np.sin(hi), -np.cos(hi)], [-np.sin(lo), np.cos(lo)]]) / np.sin(2 * np.pi / m)
    return DecisionBasis(index=i, s1=s1, s2=s2, matrix=np.column_stack([s1, s2]), inverse=inv)


@lru_cache(maxsize=None)
def basis_inverses(m: int) -> np.ndarray:
    """Return the stacked closed-form inverses for all m regions, shape (m, 2, 2)."""
    return np.stack([build_basis(m, i).inverse for i in range(int(m))])


def build_feasibility_matrix(H, messages, m: int) -> FeasibilityMatrix:
    """Assemble Lambda for channel H and the per-user message indices.

    Parameters
    ----------
    H : array_like, shape (K, Nt), complex
        Downlink channel, one row per user.
    messages : sequence of int, length K
        Constellation index intended for each user.
    m : int
        Constellation order.

    Returns
    -------
    FeasibilityMatrix
        All entries of `matrix @ x` strictly positive certifies that the
        noiseless observation of every user falls inside its decision region.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2:
        raise ValueError(f"expected a 2-d channel matrix, got ndim={H.ndim}")
    k, nt = H.shape
    msgs = tuple(int(mu) for mu in np.asarray(messages).reshape(-1))
    if len(msgs) != k:
        raise ValueError(f"expected {k} messages, got {len(msgs)}")
    if any(not 0 <= mu < m for mu in msgs):
        raise ValueError(f"message indices must lie in [0, {m})")
    lifted = lift_channel(H).reshape(k, 2, 2 * nt)
    inv = basis_inverses(m)[list(msgs)]
    lam = np.einsum("kij,kjn->kin", inv, lifted).reshape(2 * k, 2 * nt)
    return FeasibilityMatrix(matrix=lam, nt=nt, k=k, m=m, messages=msgs)


def coefficients(lam, x) -> np.ndarray:
    """Return the region coordinates Lambda @ x (two per user)."""
    mat = lam.matrix if isinstance(lam, FeasibilityMatrix) else np.asarray(lam, dtype=float)
    x = np.asarray(x, dtype=float).reshape(-1)
    if mat.shape[1] != x.size:
        raise ValueError(f"transmit vector length {x.size} does not match {mat.shape[1]} columns")
    return mat @ x


def _tied_mask(dist: np.ndarray) -> np.ndarray:
    """Boolean mask of distances tied with the minimum along the last axis."""
    dmin = dist.min(axis=-1, keepdims=True)
    return dist <= dmin + _TIE_RTOL * (1.0 + dmin)


def in_region(y: complex, i: int, constellation: Constellation) -> bool:
    """True iff constellation point i is a (possibly tied) nearest point to y."""
    i = int(i)
    if not 0 <= i < constellation.order:
        raise ValueError(f"point index {i} out of range for order {constellation.order}")
    dist = np.abs(constellation.points - complex(y))
    return bool(_tied_mask(dist)[i])


def decode(y: complex, constellation: Constellation) -> int:
    """Index of the nearest constellation point; ties go to the smallest index."""
    dist = np.abs(constellation.points - complex(y))
    return int(np.argmax(_tied_mask(dist)))


def decode_all(y, constellation: Constellation) -> np.ndarray:
    """Vectorized decode of a batch of observations, same tie rule as decode."""
    y = np.asarray(y, dtype=complex).reshape(-1)
    dist = np.abs(y[:, None] - constellation.points[None, :])
    return np.argmax(_tied_mask(dist), axis=1)
