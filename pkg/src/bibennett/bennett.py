"""Single Bennett loops: parameters, DH chain, closure, limits, symmetries.

All kinematic quantities are rational functions of the half-tangent design
parameters (a1, a2), the scale k and the motion parameter tau, so every
operation here is exact when called with Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    Mat4,
    det3,
    mat_direction,
    mat_identity,
    mat_max_abs_diff,
    mat_mul,
    mat_point,
    nullspace_dimension,
    nullspace_vector,
    v_add,
    v_cross,
    v_dot,
    v_norm,
    v_norm_sq,
    v_scale,
    v_sub,
)

FLOAT_TOL = 1e-9

AXIS_LABELS = ((1, 4), (1, 2), (2, 3), (3, 4))


class ConventionError(ValueError):
    """Design parameters violate the positivity convention."""


class DegenerateDesignError(ValueError):
    """a1 == a2: the transmission relation degenerates."""


class PoleError(ValueError):
    """tau = 0 is a pole of the joint-angle substitution t_{1,2} = K/tau."""


# ---------------------------------------------------------------------------
# designs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BennettDesign:
    """Intrinsic Bennett loop parameters via half-tangents a_i = tan(alpha_i/2).

    The scale k fixes the common normal lengths d_i = k sin(alpha_i); k = 0 is
    the spherical (pyramidal) limit.
    """

    a1: object
    a2: object
    k: object

    @property
    def alpha1(self) -> float:
        return 2.0 * math.atan(float(self.a1))

    @property
    def alpha2(self) -> float:
        return 2.0 * math.atan(float(self.a2))

    @property
    def d1(self):
        return self.k * 2 * self.a1 / (1 + self.a1 * self.a1)

    @property
    def d2(self):
        return self.k * 2 * self.a2 / (1 + self.a2 * self.a2)


def validate(a1, a2, k) -> BennettDesign:
    """Build a design, rejecting convention and degeneracy violations."""
    if a1 <= 0 or a2 <= 0:
        raise ConventionError(
            "half-tangents must be positive (twist angles in (0, pi))")
    if a1 == a2:
        raise DegenerateDesignError(
            "a1 == a2 makes the transmission ratio infinite")
    if k < 0:
        raise ConventionError("scale k must be nonnegative")
    return BennettDesign(a1, a2, k)


def transmission_K(design: BennettDesign):
    """Constant product t_{1,2} t_{2,3} along the flex."""
    return (design.a1 + design.a2) / (design.a1 - design.a2)


def transmission_K_alt(design: BennettDesign):
    """Transmission ratio in the reversed-orientation convention
    (a2 replaced by -1/a2)."""
    return (1 - design.a1 * design.a2) / (1 + design.a1 * design.a2)


# ---------------------------------------------------------------------------
# DH matrices with half-angle substitution
# ---------------------------------------------------------------------------

def rot_about_x(t) -> Mat4:
    """Joint rotation through the angle with half-tangent t."""
    den = 1 + t * t
    c = (1 - t * t) / den
    s = 2 * t / den
    return (
        (1, 0, 0, 0),
        (0, 1, 0, 0),
        (0, 0, c, s),
        (0, 0, -s, c),
    )


def twist_step(a, k) -> Mat4:
    """Link transform for half-tangent twist a and offset d = k sin(alpha)."""
    den = 1 + a * a
    c = (1 - a * a) / den
    s = 2 * a / den
    return (
        (1, 0, 0, 0),
        (0, c, -s, 0),
        (0, s, c, 0),
        (k * s, 0, 0, 1),
    )


def _joint_half_tangents(design: BennettDesign, tau):
    if tau == 0:
        raise PoleError(
            "tau = 0 is a pole of the substitution t_{1,2} = K / tau")
    return transmission_K(design) / tau, tau


def dh_chain(design: BennettDesign, tau):
    """Axis transforms (M12, M23, M34) relative to the frame fixed on axis (1,4)."""
    t12, t23 = _joint_half_tangents(design, tau)
    m12 = twist_step(design.a1, design.k)
    m23 = mat_mul(mat_mul(m12, rot_about_x(t12)), twist_step(design.a2, design.k))
    m34 = mat_mul(mat_mul(m23, rot_about_x(t23)), twist_step(design.a1, design.k))
    return m12, m23, m34


def loop_closure_residual(design: BennettDesign, tau):
    """Max-abs deviation of the full 8-factor chain product from the identity."""
    t12, t23 = _joint_half_tangents(design, tau)
    _, _, m34 = dh_chain(design, tau)
    closed = mat_mul(
        mat_mul(mat_mul(m34, rot_about_x(-t12)), twist_step(design.a2, design.k)),
        rot_about_x(-t23),
    )
    return mat_max_abs_diff(closed, mat_identity())


# ---------------------------------------------------------------------------
# poses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Axis:
    label: tuple
    point: tuple
    direction: tuple


@dataclass(frozen=True)
class Pose:
    """A configured loop at motion parameter tau: all four axes as (F, r)."""

    tau: object
    axes: dict  # label -> Axis

    def axis(self, i, j) -> Axis:
        return self.axes[(i, j)]

    def points(self) -> dict:
        return {label: ax.point for label, ax in self.axes.items()}

    def directions(self) -> dict:
        return {label: ax.direction for label, ax in self.axes.items()}


def _pose_from_mats(tau, mats) -> Pose:
    axes = {}
    for label, m in zip(AXIS_LABELS, mats):
        axes[label] = Axis(label, mat_point(m), mat_direction(m))
    return Pose(tau, axes)


def frame(design: BennettDesign, tau) -> Pose:
    """Points F_ij and unit directions r_ij of all four axes at tau."""
    m12, m23, m34 = dh_chain(design, tau)
    return _pose_from_mats(tau, (mat_identity(), m12, m23, m34))


# ---------------------------------------------------------------------------
# planar limits
# ---------------------------------------------------------------------------

PLANAR_CASES = ("1a", "1b", "2a", "2b")

# pinned twist angles: True means alpha = pi, False means alpha = 0
_PLANAR_ALPHAS = {"1a": (True, True), "1b": (True, False),
                  "2a": (False, False), "2b": (False, True)}


@dataclass(frozen=True)
class PlanarDesign:
    """Planar 4R limit: free distances d1, d2 with twists pinned to 0 or pi."""

    d1: object
    d2: object
    case: str

    def __post_init__(self):
        if self.case not in PLANAR_CASES:
            raise ValueError(f"unknown planar case {self.case!r}")
        if self.d1 <= 0 or self.d2 <= 0:
            raise ConventionError("planar distances must be positive")

    @property
    def is_antiparallelogram(self) -> bool:
        return self.case in ("1a", "2a")


def planar_K(pd: PlanarDesign):
    """Limit of the transmission ratio for each pinned-twist case."""
    if pd.case in ("1a", "2a"):
        if pd.d1 == pd.d2:
            raise PoleError(
                "d1 == d2 (rhombus) is a pole of the planar transmission ratio")
        num = pd.d1 + pd.d2
        return num / (pd.d2 - pd.d1) if pd.case == "1a" else num / (pd.d1 - pd.d2)
    return 1 if pd.case == "1b" else -1


def _planar_twist(alpha_is_pi: bool, d) -> Mat4:
    s = -1 if alpha_is_pi else 1
    return (
        (1, 0, 0, 0),
        (0, s, 0, 0),
        (0, 0, s, 0),
        (d, 0, 0, 1),
    )


def planar_chain(pd: PlanarDesign, tau):
    if tau == 0:
        raise PoleError("tau = 0 is a pole of the substitution t_{1,2} = K / tau")
    a1_pi, a2_pi = _PLANAR_ALPHAS[pd.case]
    t12 = planar_K(pd) / tau
    t1 = _planar_twist(a1_pi, pd.d1)
    t2 = _planar_twist(a2_pi, pd.d2)
    m12 = t1
    m23 = mat_mul(mat_mul(m12, rot_about_x(t12)), t2)
    m34 = mat_mul(mat_mul(m23, rot_about_x(tau)), t1)
    return m12, m23, m34


def planar_frame(pd: PlanarDesign, tau) -> Pose:
    m12, m23, m34 = planar_chain(pd, tau)
    return _pose_from_mats(tau, (mat_identity(), m12, m23, m34))


def planar_loop_closure_residual(pd: PlanarDesign, tau):
    t12 = planar_K(pd) / tau
    a1_pi, a2_pi = _PLANAR_ALPHAS[pd.case]
    _, _, m34 = planar_chain(pd, tau)
    closed = mat_mul(
        mat_mul(mat_mul(m34, rot_about_x(-t12)), _planar_twist(a2_pi, pd.d2)),
        rot_about_x(-tau),
    )
    return mat_max_abs_diff(closed, mat_identity())


# ---------------------------------------------------------------------------
# spherical indicatrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndicatrixReport:
    arcs: tuple  # four side arcs of the spherical image, radians
    classification: str  # "V-hedral" | "anti-V-hedral" | "other"


def indicatrix(design: BennettDesign, tau=Fraction(1, 2),
               classify_ambiguous: bool = False) -> IndicatrixReport:
    """Spherical image of the axis directions (the k = 0 limit).

    Opposite arcs of a Bennett indicatrix are equal, giving the pattern
    (alpha1, alpha2, alpha1, alpha2).  When a1 a2 = 1 the adjacent arcs are
    additionally supplementary and the vertex class is ambiguous; it is
    reported as "other" unless ``classify_ambiguous`` is set.
    """
    spherical = frame(BennettDesign(design.a1, design.a2, 0), tau)
    dirs = [spherical.axis(*label).direction for label in AXIS_LABELS]
    arcs = []
    for idx in range(4):
        u = dirs[idx]
        v = dirs[(idx + 1) % 4]
        arcs.append(math.acos(max(-1.0, min(1.0, float(v_dot(u, v))))))
    tol = 1e-9
    opposite_equal = (abs(arcs[0] - arcs[2]) < tol and abs(arcs[1] - arcs[3]) < tol)
    opposite_supp = (abs(arcs[0] + arcs[2] - math.pi) < tol
                     and abs(arcs[1] + arcs[3] - math.pi) < tol)
    adjacent_supp = abs(arcs[0] + arcs[1] - math.pi) < tol
    if opposite_equal and adjacent_supp and not classify_ambiguous:
        label = "other"
    elif opposite_equal:
        label = "V-hedral"
    elif opposite_supp:
        label = "anti-V-hedral"
    else:
        label = "other"
    return IndicatrixReport(tuple(arcs), label)


# ---------------------------------------------------------------------------
# line geometry: intersections, regulus, symmetry line
# ---------------------------------------------------------------------------

def _pluecker_side(axis_a: Axis, axis_b: Axis):
    """Reciprocal product of the two axis lines; zero iff they intersect
    (or are parallel)."""
    ma = v_cross(axis_a.point, axis_a.direction)
    mb = v_cross(axis_b.point, axis_b.direction)
    return v_dot(axis_a.direction, mb) + v_dot(axis_b.direction, ma)


def opposite_axes_intersect(pose: Pose, tol: float = FLOAT_TOL) -> dict:
    """Whether each pair of opposite axes meets; true for all tau iff a1 a2 = 1."""
    out = {}
    for pair in (((1, 4), (2, 3)), ((1, 2), (3, 4))):
        side = _pluecker_side(pose.axes[pair[0]], pose.axes[pair[1]])
        out[pair] = side == 0 if isinstance(side, (Fraction, int)) else abs(side) < tol
    return out


class DegenerateQuadricError(ValueError):
    """The first three axes do not span a unique ruled quadric."""


def _quadric_row(point):
    w, x, y, z = 1, point[0], point[1], point[2]
    return [w * w, x * x, y * y, z * z,
            w * x, w * y, w * z, x * y, x * z, y * z]


def _quadric_value(q, point):
    return sum(c * v for c, v in zip(q, _quadric_row(point)))


def regulus_residual(pose: Pose, tol: float = FLOAT_TOL):
    """Deviation of axis (3,4) from the quadric spanned by the other three axes.

    Zero for every Bennett pose; raises DegenerateQuadricError when the first
    three axes are not pairwise skew (the a1 a2 = 1 subset, where the regulus
    splits into two pencils of lines).
    """
    spans = []
    for label in AXIS_LABELS[:3]:
        ax = pose.axes[label]
        p0 = ax.point
        p1 = v_add(p0, ax.direction)
        p2 = v_add(p0, v_scale(2, ax.direction))
        spans.extend([p0, p1, p2])
    rows = [_quadric_row(p) for p in spans]
    if nullspace_dimension(rows, 10) != 1:
        raise DegenerateQuadricError(
            "axes (1,4), (1,2), (2,3) do not span a unique quadric; "
            "the regulus is degenerate")
    q = nullspace_vector(rows, 10)
    ax4 = pose.axes[(3, 4)]
    vals = [_quadric_value(q, v_add(ax4.point, v_scale(s, ax4.direction)))
            for s in (0, 1, 2)]
    scale = max(abs(c) for c in q)
    return max(abs(v) for v in vals) / scale


def symmetry_line(pose: Pose):
    """Point and direction of the line through the two diagonal midpoints.

    Every Bennett pose admits a half-turn about this line swapping axes
    (1,4) <-> (2,3) and (1,2) <-> (3,4).
    """
    half = Fraction(1, 2)
    p = pose.points()
    m1 = v_scale(half, v_add(p[(1, 4)], p[(2, 3)]))
    m2 = v_scale(half, v_add(p[(1, 2)], p[(3, 4)]))
    return m1, v_sub(m2, m1)


def half_turn_point(point, line_point, line_dir):
    """Image of a point under the half-turn about the given line (exact when
    called with Fractions)."""
    rel = v_sub(point, line_point)
    coef = v_dot(rel, line_dir) / v_norm_sq(line_dir)
    return v_sub(v_add(v_scale(2, line_point), v_scale(2 * coef, line_dir)), point)


def half_turn_direction(direction, line_dir):
    coef = v_dot(direction, line_dir) / v_norm_sq(line_dir)
    return v_sub(v_scale(2 * coef, line_dir), direction)


def symmetry_residual(pose: Pose):
    """Max deviation of the half-turn about the symmetry line from the axis
    swap (1,4)<->(2,3), (1,2)<->(3,4); exactly zero for Bennett poses."""
    lp, ld = symmetry_line(pose)
    swap = {(1, 4): (2, 3), (2, 3): (1, 4), (1, 2): (3, 4), (3, 4): (1, 2)}
    worst = 0
    for label, target in swap.items():
        src = pose.axes[label]
        dst = pose.axes[target]
        img_p = half_turn_point(src.point, lp, ld)
        img_d = half_turn_direction(src.direction, ld)
        # the image must lie on the target line with the same or opposite
        # direction: compare via cross products to stay orientation-free
        worst = max(worst,
                    v_norm(v_cross(v_sub(img_p, dst.point), dst.direction)),
                    v_norm(v_cross(img_d, dst.direction)))
    return worst
