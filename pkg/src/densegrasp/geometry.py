"""Oriented grasp rectangles: conversions, rasterization, angle bins and overlap metrics.

A grasp rectangle is a 2D oriented rectangle in image space: its local
width axis (length ``w``, the gripper opening direction) points at angle
``theta`` from the image x-axis, the perpendicular axis carries the plate
length ``h``.  Pixel (row i, col j) has its center at ``(x=j, y=i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

# number of orientation classes partitioning [0, pi)
N_ANGLE_BINS = 50
BIN_WIDTH = math.pi / N_ANGLE_BINS

# rectangle-metric thresholds: angle error < 30 deg, overlap > 0.25
ANGLE_THRESHOLD = math.radians(30.0)
JACCARD_THRESHOLD = 0.25


class DegenerateQuadError(ValueError):
    """Raised when a corner quad has (numerically) zero area."""


def normalize_angle(theta: float) -> float:
    """Wrap an angle into [0, pi); a grasp is identical under a pi rotation."""
    theta = math.fmod(theta, math.pi)
    if theta < 0.0:
        theta += math.pi
    if theta >= math.pi:  # fmod rounding can land exactly on pi
        theta -= math.pi
    return theta


@dataclass(frozen=True)
class GraspRect:
    """An oriented grasp rectangle with confidence.

    Attributes
    ----------
    x, y : float
        Center in pixel coordinates.
    w : float
        Gripper opening width (extent along the theta axis), > 0.
    h : float
        Plate height (extent perpendicular to the theta axis), > 0.
    theta : float
        Orientation in radians w.r.t. the image x-axis, stored in [0, pi).
    rho : float
        Confidence in [0, 1].
    """

    x: float
    y: float
    w: float
    h: float
    theta: float = 0.0
    rho: float = field(default=1.0)

    def __post_init__(self):
        if not (self.w > 0 and self.h > 0):
            raise ValueError(f"rectangle sides must be positive, got w={self.w}, h={self.h}")
        if not (0.0 <= self.rho <= 1.0):
            raise ValueError(f"confidence must lie in [0, 1], got {self.rho}")
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    def with_confidence(self, rho: float) -> "GraspRect":
        return replace(self, rho=rho)

    def area(self) -> float:
        return self.w * self.h


def rect_to_corners(rect: GraspRect) -> np.ndarray:
    """Four corners of ``rect`` as a (4, 2) array.

    Vertices 1->2 and 3->4 run along the opening (theta) axis, so the
    axis-aligned rect (x, y, w, h, 0) yields
    (x-w/2, y-h/2), (x+w/2, y-h/2), (x+w/2, y+h/2), (x-w/2, y+h/2).
    """
    c, s = math.cos(rect.theta), math.sin(rect.theta)
    hw, hh = rect.w / 2.0, rect.h / 2.0
    local = np.array([(-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh)])
    rot = np.array([(c, -s), (s, c)])
    return local @ rot.T + np.array([rect.x, rect.y])


def corners_to_rect(quad: np.ndarray, rho: float = 1.0) -> GraspRect:
    """Invert :func:`rect_to_corners`; accepts any (4, 2) parallelogram-ish quad.

    Raises
    ------
    DegenerateQuadError
        If the quad encloses (numerically) zero area.
    """
    quad = np.asarray(quad, dtype=float)
    if quad.shape != (4, 2):
        raise ValueError(f"expected a (4, 2) corner array, got shape {quad.shape}")
    edge_w = quad[1] - quad[0]
    edge_h = quad[2] - quad[1]
    w = float(np.hypot(*edge_w))
    h = float(np.hypot(*edge_h))
    cross = edge_w[0] * edge_h[1] - edge_w[1] * edge_h[0]
    if w * h < 1e-9 or abs(cross) < 1e-9:
        raise DegenerateQuadError(f"quad has zero area: {quad.tolist()}")
    cx, cy = quad.mean(axis=0)
    theta = math.atan2(edge_w[1], edge_w[0])
    return GraspRect(cx, cy, w, h, normalize_angle(theta), rho)


def angle_to_bin(theta: float) -> int:
    """Discretize an angle into one of the N_ANGLE_BINS classes over [0, pi)."""
    idx = int(normalize_angle(theta) / BIN_WIDTH)
    return min(idx, N_ANGLE_BINS - 1)


def bin_to_angle(index: int) -> float:
    """Center angle of bin ``index``."""
    if not 0 <= index < N_ANGLE_BINS:
        raise ValueError(f"bin index out of range: {index}")
    return (index + 0.5) * BIN_WIDTH


def angle_distance(a: float, b: float) -> float:
    """Angular distance between two orientations, computed mod pi."""
    d = abs(normalize_angle(a) - normalize_angle(b))
    return min(d, math.pi - d)


def _polygon_area(poly: np.ndarray) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _clip_polygon(subject: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Clip ``subject`` against the half-plane left of the directed edge a->b."""
    if len(subject) == 0:
        return subject
    edge = b - a
    # signed distance of each vertex to the edge (positive = inside)
    rel = subject - a
    dist = edge[0] * rel[:, 1] - edge[1] * rel[:, 0]
    out = []
    n = len(subject)
    for i in range(n):
        j = (i + 1) % n
        pi_in, pj_in = dist[i] >= 0, dist[j] >= 0
        if pi_in:
            out.append(subject[i])
        if pi_in != pj_in:
            t = dist[i] / (dist[i] - dist[j])
            out.append(subject[i] + t * (subject[j] - subject[i]))
    return np.array(out) if out else np.empty((0, 2))


def convex_intersection_area(poly_a: np.ndarray, poly_b: np.ndarray) -> float:
    """Area of the intersection of two convex polygons (vertices in order)."""
    clipped = np.asarray(poly_a, dtype=float)
    poly_b = np.asarray(poly_b, dtype=float)
    # clip vertices must run counter-clockwise for the left-of test
    if _signed_area(poly_b) < 0:
        poly_b = poly_b[::-1]
    for i in range(len(poly_b)):
        clipped = _clip_polygon(clipped, poly_b[i], poly_b[(i + 1) % len(poly_b)])
        if len(clipped) == 0:
            return 0.0
    return _polygon_area(clipped)


def _signed_area(poly: np.ndarray) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def jaccard(a: GraspRect, b: GraspRect) -> float:
    """Intersection-over-union of two oriented rectangles, exact.

    Uses convex polygon clipping; symmetric in its arguments.
    """
    inter = convex_intersection_area(rect_to_corners(a), rect_to_corners(b))
    union = a.area() + b.area() - inter
    if union <= 0.0:
        return 0.0
    return min(inter / union, 1.0)


def rectangle_match(pred: GraspRect, gts: list[GraspRect]) -> bool:
    """True iff ``pred`` is correct against some ground truth.

    Correct means the angular distance (mod pi) is below 30 degrees AND the
    Jaccard index exceeds 0.25, both against the same ground-truth rect.
    """
    if not gts:
        raise ValueError("rectangle_match needs at least one ground-truth rect")
    for gt in gts:
        if angle_distance(pred.theta, gt.theta) < ANGLE_THRESHOLD and jaccard(pred, gt) > JACCARD_THRESHOLD:
            return True
    return False


def rasterize_rect(rect: GraspRect, width: int, height: int) -> np.ndarray:
    """Binary mask of the pixels whose centers lie inside ``rect``.

    The inside test is inclusive on the two low edges and exclusive on the
    high edges, so abutting rects never claim the same pixel. A rect fully
    outside the canvas yields an all-zero mask.
    """
    if width <= 0 or height <= 0:
        raise ValueError(f"canvas dims must be positive, got {width}x{height}")
    xs = np.arange(width, dtype=float) - rect.x
    ys = np.arange(height, dtype=float) - rect.y
    gx, gy = np.meshgrid(xs, ys)
    c, s = math.cos(rect.theta), math.sin(rect.theta)
    u = c * gx + s * gy
    v = -s * gx + c * gy
    inside = (u >= -rect.w / 2) & (u < rect.w / 2) & (v >= -rect.h / 2) & (v < rect.h / 2)
    return inside.astype(np.uint8)


def make_grasp_image(image: np.ndarray, rect: GraspRect) -> np.ndarray:
    """Copy ``image`` with its third channel replaced by the rasterized rect.

    The mask is scaled to the channel's value range: 255 for uint8 images,
    1.0 for float images. Channels 1-2 are returned unchanged.
    """
    if image.ndim != 3 or image.shape[2] != 3:
        raise ValueError(f"expected an HxWx3 image, got shape {image.shape}")
    h, w = image.shape[:2]
    mask = rasterize_rect(rect, w, h)
    out = image.copy()
    if np.issubdtype(image.dtype, np.integer):
        out[:, :, 2] = mask * 255
    else:
        out[:, :, 2] = mask.astype(image.dtype)
    return out
