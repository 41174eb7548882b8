"""Pure-numpy fallbacks for the compiled hot kernels.

Chunked over the atom/disk axis so memory stays bounded; summation order is
ascending index with pairwise reduction (np.sum), matching the compiled loop
to float addition order differences of at most a few ulp.
"""

import numpy as np

CHUNK = 512


def atom_sum_eval(z, centers, coeffs, expo):
    """sum_k coeffs[k] * ((z - conj(centers[k])) / i)^(-expo), elementwise in z."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.zeros(z.shape, dtype=np.complex128)
    for k0 in range(0, centers.size, CHUNK):
        c = centers[k0:k0 + CHUNK]
        a = coeffs[k0:k0 + CHUNK]
        base = (z[..., None] - np.conj(c)) * (-1j)
        out += np.sum(a * base ** (-expo), axis=-1)
    return out


def min_separation(xs, ys, radii):
    """Minimum over pairs of (center distance - radius sum); > 0 iff disjoint."""
    n = xs.size
    best = np.inf
    for i0 in range(0, n, CHUNK):
        dx = xs[i0:i0 + CHUNK, None] - xs[None, :]
        dy = ys[i0:i0 + CHUNK, None] - ys[None, :]
        gap = np.hypot(dx, dy) - (radii[i0:i0 + CHUNK, None] + radii[None, :])
        block = gap + np.tril(np.full(gap.shape, np.inf), k=i0)
        best = min(best, float(block.min()))
    return best


def cover_counts(px, py, cx, cy, radii):
    """For each point, the number of disks containing it (strict inequality)."""
    out = np.zeros(px.size, dtype=np.int64)
    for k0 in range(0, cx.size, CHUNK):
        dx = px[:, None] - cx[None, k0:k0 + CHUNK]
        dy = py[:, None] - cy[None, k0:k0 + CHUNK]
        rr = radii[None, k0:k0 + CHUNK]
        out += np.sum(dx * dx + dy * dy < rr * rr, axis=1)
    return out
