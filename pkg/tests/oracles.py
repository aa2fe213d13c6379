"""Independent reference computations used to check the library's fast paths."""

import math

import numpy as np

from densegrasp.geometry import GraspRect


def rect_corners_by_trig(rect):
    """Forward trig construction of the four corners, independent of the library."""
    pts = []
    for su, sv in ((-1, -1), (1, -1), (1, 1), (-1, 1)):
        u = su * rect.w / 2.0
        v = sv * rect.h / 2.0
        x = rect.x + u * math.cos(rect.theta) - v * math.sin(rect.theta)
        y = rect.y + u * math.sin(rect.theta) + v * math.cos(rect.theta)
        pts.append((x, y))
    return np.array(pts)


def _inside(rect, gx, gy):
    c, s = math.cos(rect.theta), math.sin(rect.theta)
    dx, dy = gx - rect.x, gy - rect.y
    u = c * dx + s * dy
    v = -s * dx + c * dy
    return (np.abs(u) <= rect.w / 2.0) & (np.abs(v) <= rect.h / 2.0)


def jaccard_by_rasterization(a, b, n=700):
    """Supersampled-grid estimate of |a&b| / |a|b| over the joint bounding box."""
    corners = np.vstack([rect_corners_by_trig(a), rect_corners_by_trig(b)])
    lo = corners.min(axis=0) - 1.0
    hi = corners.max(axis=0) + 1.0
    xs = np.linspace(lo[0], hi[0], n)
    ys = np.linspace(lo[1], hi[1], n)
    gx, gy = np.meshgrid(xs, ys)
    in_a = _inside(a, gx, gy)
    in_b = _inside(b, gx, gy)
    union = np.count_nonzero(in_a | in_b)
    if union == 0:
        return 0.0
    return np.count_nonzero(in_a & in_b) / union


def random_rect(rng, span=100.0, min_side=4.0, max_side=40.0):
    return GraspRect(
        x=float(rng.uniform(0.2 * span, 0.8 * span)),
        y=float(rng.uniform(0.2 * span, 0.8 * span)),
        w=float(rng.uniform(min_side, max_side)),
        h=float(rng.uniform(min_side, max_side)),
        theta=float(rng.uniform(0.0, math.pi)),
    )


def central_difference_gradient(fn, x, step=1e-4):
    """Central finite differences of a scalar function of a flat numpy vector."""
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(x)
    for i in range(x.size):
        hi = x.copy()
        lo = x.copy()
        hi.flat[i] += step
        lo.flat[i] -= step
        grad.flat[i] = (fn(hi) - fn(lo)) / (2.0 * step)
    return grad


def relative_gradient_error(analytic, numeric):
    analytic = np.asarray(analytic, dtype=np.float64).ravel()
    numeric = np.asarray(numeric, dtype=np.float64).ravel()
    denom = max(np.linalg.norm(numeric), np.linalg.norm(analytic), 1e-12)
    return float(np.linalg.norm(analytic - numeric) / denom)
