"""Complex-to-real lifting for the real-valued downlink model.

A complex scalar x maps to the pair [Re(x), Im(x)]. Complex vectors are
lifted entrywise with the pairs interleaved, so a length-N vector becomes
[Re(x_1), Im(x_1), ..., Re(x_N), Im(x_N)]. A K x N complex matrix lifts to
a 2K x 2N real matrix built from the 2x2 blocks

    phi(h) = [[Re(h), -Im(h)],
              [Im(h),  Re(h)]],

which preserves complex multiplication: lift(H @ x) == lift_channel(H) @ lift(x).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "lift_scalar",
    "lift_vector",
    "unlift_vector",
    "phi_expand",
    "rotation",
    "lift_channel",
]


def lift_scalar(x: complex) -> np.ndarray:
    """Map a complex scalar to the real pair [Re(x), Im(x)]."""
    x = complex(x)
    return np.array([x.real, x.imag])


def lift_vector(v) -> np.ndarray:
    """Map a complex vector to its interleaved real form (length doubles)."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    out = np.empty(2 * v.size)
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def unlift_vector(v) -> np.ndarray:
    """Invert lift_vector: interleaved real pairs back to a complex vector."""
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size % 2 != 0:
        raise ValueError(f"interleaved real vector must have even length, got {v.size}")
    return v[0::2] + 1j * v[1::2]


def phi_expand(x: complex) -> np.ndarray:
    """Return the 2x2 real block representing multiplication by the complex scalar x."""
    x = complex(x)
    return np.array([[x.real, -x.imag], [x.imag, x.real]])


def rotation(theta: float) -> np.ndarray:
    """Return the 2x2 counterclockwise rotation matrix for angle theta (radians)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def lift_channel(H) -> np.ndarray:
    """Lift a K x N complex matrix to its 2K x 2N real form.

    Each complex entry h becomes the 2x2 block phi_expand(h), placed so that
    row pair (2k, 2k+1) corresponds to complex row k and column pair
    (2n, 2n+1) to complex column n.

    Parameters
    ----------
    H : array_like, shape (K, N), complex

    Returns
    -------
    np.ndarray, shape (2K, 2N), float
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={H.ndim}")
    k, n = H.shape
    out = np.empty((2 * k, 2 * n))
    out[0::2, 0::2] = H.real
    out[0::2, 1::2] = -H.imag
    out[1::2, 0::2] = H.imag
    out[1::2, 1::2] = H.real
    return out
