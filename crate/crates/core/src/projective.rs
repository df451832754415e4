//! Points, lines, flags and maps of the real projective plane.
//!
//! Everything here works on homogeneous triples. A point and a line are
//! both stored as a unit vector whose first nonzero coordinate is
//! positive, which makes equality testing and serialization stable while
//! leaving every exported quantity scale-invariant.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::DEFAULT_TOL;

/// Relaxed tolerance for preconditions on caller-supplied configurations
/// (collinearity, concurrency). Strict equality of projective objects
/// keeps using [`DEFAULT_TOL`].
const PRECHECK_TOL: f64 = 1e-8;

fn canonicalize(mut v: Vector3<f64>) -> Vector3<f64> {
    v /= v.norm();
    for k in 0..3 {
        if v[k] != 0.0 {
            if v[k] < 0.0 {
                v = -v;
            }
            break;
        }
    }
    v
}

fn det3(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    a.dot(&b.cross(c))
}

/// A point of the projective plane, stored as a canonicalized
/// homogeneous triple.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct ProjectivePoint {
    v: Vector3<f64>,
}

/// A line of the projective plane, stored as a canonicalized coefficient
/// triple; a point `p` lies on the line `l` iff `l.coeffs() . p.coords()`
/// vanishes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct ProjectiveLine {
    v: Vector3<f64>,
}

impl ProjectivePoint {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let v = Vector3::new(a, b, c);
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(GeomError::DegenerateInput(format!(
                "invalid homogeneous point ({a}, {b}, {c})"
            )));
        }
        Ok(Self { v: canonicalize(v) })
    }

    pub(crate) fn from_vector_unchecked(v: Vector3<f64>) -> Self {
        debug_assert!(v.norm() > 0.0 && v.norm().is_finite());
        Self { v: canonicalize(v) }
    }

    pub fn from_affine(x: f64, y: f64) -> Self {
        Self::from_vector_unchecked(Vector3::new(x, y, 1.0))
    }

    pub fn coords(&self) -> &Vector3<f64> {
        &self.v
    }

    /// Inhomogeneous coordinates; errors if the point is (numerically)
    /// on the line at infinity of the chart.
    pub fn to_affine(&self) -> Result<(f64, f64)> {
        if self.v[2].abs() <= DEFAULT_TOL {
            return Err(GeomError::Precondition(
                "point at infinity has no affine coordinates".into(),
            ));
        }
        Ok((self.v[0] / self.v[2], self.v[1] / self.v[2]))
    }

    /// Projective equality within `tol` (representatives are unit
    /// vectors, so the cross-product norm is the sine of their angle).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.v.cross(&other.v).norm() <= tol
    }

    pub fn is_on(&self, line: &ProjectiveLine, tol: f64) -> bool {
        line.v.dot(&self.v).abs() <= tol
    }
}

impl ProjectiveLine {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let v = Vector3::new(a, b, c);
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(GeomError::DegenerateInput(format!(
                "invalid line coefficients ({a}, {b}, {c})"
            )));
        }
        Ok(Self { v: canonicalize(v) })
    }

    pub(crate) fn from_vector_unchecked(v: Vector3<f64>) -> Self {
        debug_assert!(v.norm() > 0.0 && v.norm().is_finite());
        Self { v: canonicalize(v) }
    }

    /// The affine line y = slope * x + intercept.
    pub fn from_slope_intercept(slope: f64, intercept: f64) -> Self {
        Self::from_vector_unchecked(Vector3::new(slope, -1.0, intercept))
    }

    /// The vertical affine line x = x0.
    pub fn vertical(x0: f64) -> Self {
        Self::from_vector_unchecked(Vector3::new(1.0, 0.0, -x0))
    }

    pub fn coeffs(&self) -> &Vector3<f64> {
        &self.v
    }

    /// Signed pairing with a point; zero (within tolerance) means
    /// incidence. The sign is representative-dependent, its vanishing is
    /// not.
    pub fn eval(&self, p: &ProjectivePoint) -> f64 {
        self.v.dot(&p.v)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.v.cross(&other.v).norm() <= tol
    }
}

impl From<ProjectivePoint> for [f64; 3] {
    fn from(p: ProjectivePoint) -> Self {
        [p.v[0], p.v[1], p.v[2]]
    }
}

impl TryFrom<[f64; 3]> for ProjectivePoint {
    type Error = GeomError;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<ProjectiveLine> for [f64; 3] {
    fn from(l: ProjectiveLine) -> Self {
        [l.v[0], l.v[1], l.v[2]]
    }
}

impl TryFrom<[f64; 3]> for ProjectiveLine {
    type Error = GeomError;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        Self::new(a[0], a[1], a[2])
    }
}

impl std::fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.6} : {:.6} : {:.6}]", self.v[0], self.v[1], self.v[2])
    }
}

impl std::fmt::Display for ProjectiveLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "<{:.6} : {:.6} : {:.6}>", self.v[0], self.v[1], self.v[2])
    }
}

/// The line through two distinct points.
pub fn join(p: &ProjectivePoint, q: &ProjectivePoint) -> Result<ProjectiveLine> {
    let c = p.v.cross(&q.v);
    if c.norm() <= DEFAULT_TOL {
        return Err(GeomError::DegenerateInput(
            "join of coincident points".into(),
        ));
    }
    Ok(ProjectiveLine::from_vector_unchecked(c))
}

/// The intersection point of two distinct lines.
pub fn meet(l: &ProjectiveLine, m: &ProjectiveLine) -> Result<ProjectivePoint> {
    let c = l.v.cross(&m.v);
    if c.norm() <= DEFAULT_TOL {
        return Err(GeomError::DegenerateInput(
            "meet of coincident lines".into(),
        ));
    }
    Ok(ProjectivePoint::from_vector_unchecked(c))
}

/// A point lying on a line.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Flag {
    point: ProjectivePoint,
    line: ProjectiveLine,
}

impl Flag {
    pub fn new(point: ProjectivePoint, line: ProjectiveLine) -> Result<Self> {
        if !point.is_on(&line, DEFAULT_TOL) {
            return Err(GeomError::Precondition(format!(
                "flag point {point} does not lie on {line}"
            )));
        }
        Ok(Self { point, line })
    }

    pub(crate) fn new_unchecked(point: ProjectivePoint, line: ProjectiveLine) -> Self {
        debug_assert!(point.is_on(&line, 1e-7));
        Self { point, line }
    }

    pub fn point(&self) -> &ProjectivePoint {
        &self.point
    }

    pub fn line(&self) -> &ProjectiveLine {
        &self.line
    }
}

/// An element of the projective linear group. Acts on points by the
/// matrix and on lines by its inverse transpose, so incidence is
/// preserved.
#[derive(Debug, Clone, Copy)]
pub struct ProjectiveMap {
    m: Matrix3<f64>,
    m_inv: Matrix3<f64>,
}

impl ProjectiveMap {
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let det = m.determinant();
        let scale = m.norm();
        if !det.is_finite() || det.abs() <= DEFAULT_TOL * scale.powi(3) {
            return Err(GeomError::DegenerateInput(
                "projective map matrix is singular".into(),
            ));
        }
        let m_inv = m.try_inverse().ok_or_else(|| {
            GeomError::DegenerateInput("projective map matrix is singular".into())
        })?;
        Ok(Self { m, m_inv })
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix3::identity(),
            m_inv: Matrix3::identity(),
        }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn apply_point(&self, p: &ProjectivePoint) -> ProjectivePoint {
        ProjectivePoint::from_vector_unchecked(self.m * p.v)
    }

    pub fn apply_line(&self, l: &ProjectiveLine) -> ProjectiveLine {
        ProjectiveLine::from_vector_unchecked(self.m_inv.transpose() * l.v)
    }

    pub fn apply_flag(&self, f: &Flag) -> Flag {
        Flag::new_unchecked(self.apply_point(&f.point), self.apply_line(&f.line))
    }

    /// self after other: (self * other)(p) = self(other(p)).
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            m: self.m * other.m,
            m_inv: other.m_inv * self.m_inv,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            m: self.m_inv,
            m_inv: self.m,
        }
    }
}

/// Scales the columns of [p1 p2 p3] so the result maps the standard
/// frame (e1, e2, e3, e1+e2+e3) to (p1, p2, p3, p4).
fn frame_matrix(pts: &[ProjectivePoint; 4]) -> Result<Matrix3<f64>> {
    let basis = Matrix3::from_columns(&[pts[0].v, pts[1].v, pts[2].v]);
    let det = basis.determinant();
    if det.abs() <= DEFAULT_TOL {
        return Err(GeomError::Precondition(
            "first three points of a frame are collinear".into(),
        ));
    }
    let lambda = basis.lu().solve(&pts[3].v).ok_or_else(|| {
        GeomError::Precondition("frame points are not in general position".into())
    })?;
    for k in 0..3 {
        if lambda[k].abs() <= DEFAULT_TOL {
            return Err(GeomError::Precondition(
                "fourth frame point is collinear with two of the others".into(),
            ));
        }
    }
    Ok(Matrix3::from_columns(&[
        pts[0].v * lambda[0],
        pts[1].v * lambda[1],
        pts[2].v * lambda[2],
    ]))
}

/// The unique projective map sending `src[i]` to `dst[i]` for i = 0..4.
/// Both quadruples must be in general position (no three collinear).
pub fn map_four_points(
    src: &[ProjectivePoint; 4],
    dst: &[ProjectivePoint; 4],
) -> Result<ProjectiveMap> {
    let b_src = frame_matrix(src)?;
    let b_dst = frame_matrix(dst)?;
    let b_src_inv = b_src.try_inverse().ok_or_else(|| {
        GeomError::Precondition("source quadruple is degenerate".into())
    })?;
    ProjectiveMap::new(b_dst * b_src_inv)
}

/// Cross ratio of four collinear points, normalized so that in an affine
/// coordinate x on the line it equals
/// (x1-x2)(x3-x4) / ((x1-x4)(x2-x3)).
///
/// The last point may coincide with one of the others; those are the
/// defining degeneracies 0 (p4 = p3), -1 (p4 = p2) and infinity
/// (p4 = p1, sign not meaningful). Coincidences among the first three
/// points are rejected.
pub fn cross_ratio_collinear(
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
    p3: &ProjectivePoint,
    p4: &ProjectivePoint,
) -> Result<f64> {
    let firsts = [p1, p2, p3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            if firsts[i].approx_eq(firsts[j], DEFAULT_TOL) {
                return Err(GeomError::DegenerateInput(
                    "repeated point in cross ratio".into(),
                ));
            }
        }
    }
    let line = join(p1, p2)?;
    if !p3.is_on(&line, PRECHECK_TOL) || !p4.is_on(&line, PRECHECK_TOL) {
        return Err(GeomError::Precondition(
            "cross ratio of non-collinear points".into(),
        ));
    }
    if p4.approx_eq(p3, DEFAULT_TOL) {
        return Ok(0.0);
    }
    if p4.approx_eq(p1, DEFAULT_TOL) {
        return Ok(f64::INFINITY);
    }
    if p4.approx_eq(p2, DEFAULT_TOL) {
        return Ok(-1.0);
    }
    // Bracket form of the affine formula. Any auxiliary point off the
    // common line works; the line's own coefficient vector read as a
    // point can never lie on it.
    let e = line.v;
    let num = det3(&p1.v, &p2.v, &e) * det3(&p3.v, &p4.v, &e);
    let den = det3(&p1.v, &p4.v, &e) * det3(&p2.v, &p3.v, &e);
    if den.abs() <= f64::MIN_POSITIVE {
        return Err(GeomError::DegenerateInput(
            "cross ratio denominator vanished".into(),
        ));
    }
    Ok(num / den)
}

/// Cross ratio of four concurrent lines: the cross ratio of their
/// intersections with a reference line, which is independent of that
/// choice. The reference is taken orthogonal to the common point's
/// representative so it can never pass through the pencil's vertex.
pub fn cross_ratio_concurrent(
    l1: &ProjectiveLine,
    l2: &ProjectiveLine,
    l3: &ProjectiveLine,
    l4: &ProjectiveLine,
) -> Result<f64> {
    let firsts = [l1, l2, l3];
    for i in 0..3 {
        for j in (i + 1)..3 {
            if firsts[i].approx_eq(firsts[j], DEFAULT_TOL) {
                return Err(GeomError::DegenerateInput(
                    "repeated line in cross ratio".into(),
                ));
            }
        }
    }
    let vertex = meet(l1, l2)?;
    if l3.eval(&vertex).abs() > PRECHECK_TOL || l4.eval(&vertex).abs() > PRECHECK_TOL {
        return Err(GeomError::Precondition(
            "cross ratio of non-concurrent lines".into(),
        ));
    }
    if l4.approx_eq(l3, DEFAULT_TOL) {
        return Ok(0.0);
    }
    if l4.approx_eq(l1, DEFAULT_TOL) {
        return Ok(f64::INFINITY);
    }
    if l4.approx_eq(l2, DEFAULT_TOL) {
        return Ok(-1.0);
    }
    let reference = ProjectiveLine::from_vector_unchecked(vertex.v);
    let x1 = meet(l1, &reference)?;
    let x2 = meet(l2, &reference)?;
    let x3 = meet(l3, &reference)?;
    let x4 = meet(l4, &reference)?;
    cross_ratio_collinear(&x1, &x2, &x3, &x4)
}

/// The projective invariant of a cyclically ordered triple of flags
/// (p1, l1), (p2, l2), (p3, l3):
///
///   l1(p2) l2(p3) l3(p1) / ( l1(p3) l2(p1) l3(p2) ).
///
/// Reversing the cyclic order of the labels yields the reciprocal.
pub fn triple_ratio(f1: &Flag, f2: &Flag, f3: &Flag) -> Result<f64> {
    let num = f1.line.eval(f2.point()) * f2.line.eval(f3.point()) * f3.line.eval(f1.point());
    let den = f1.line.eval(f3.point()) * f2.line.eval(f1.point()) * f3.line.eval(f2.point());
    if den.abs() <= DEFAULT_TOL.powi(2) {
        return Err(GeomError::DegenerateInput(
            "triple ratio denominator vanished: a flag point lies on another flag's line".into(),
        ));
    }
    Ok(num / den)
}

/// The normalization targets: A, B, C and the intersection of the flag
/// lines at A and C.
pub fn standard_quadrilateral_targets() -> [ProjectivePoint; 4] {
    [
        ProjectivePoint::from_affine(0.0, 0.0),
        ProjectivePoint::from_affine(1.0, 1.0),
        ProjectivePoint::from_affine(0.0, 2.0),
        ProjectivePoint::from_affine(-1.0, 1.0),
    ]
}

/// The map carrying an inscribed-quadrilateral flag tuple
/// (A,a), (B,b), (C,c), (D,d) to the standard chart: A to (0,0), B to
/// (1,1), C to (0,2) and the corner point of the lines at A and C to
/// (-1,1). The images of the lines a and c are then y = -x and
/// y = x + 2 automatically, since each passes through two of the pinned
/// points.
pub fn normalize_quadrilateral(flags: &[Flag; 4]) -> Result<ProjectiveMap> {
    let corner = meet(flags[0].line(), flags[2].line())?;
    let src = [
        *flags[0].point(),
        *flags[1].point(),
        *flags[2].point(),
        corner,
    ];
    map_four_points(&src, &standard_quadrilateral_targets())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(x: f64, y: f64) -> ProjectivePoint {
        ProjectivePoint::from_affine(x, y)
    }

    #[test]
    fn join_axis_and_diagonal() {
        let l = join(&pt(0.0, 0.0), &pt(1.0, 0.0)).unwrap();
        assert!(l.approx_eq(&ProjectiveLine::new(0.0, 1.0, 0.0).unwrap(), 1e-12));
        let l = join(&pt(0.0, 0.0), &pt(1.0, 1.0)).unwrap();
        assert!(l.approx_eq(&ProjectiveLine::new(1.0, -1.0, 0.0).unwrap(), 1e-12));
        let l = join(&pt(0.0, 2.0), &pt(-1.0, 1.0)).unwrap();
        assert!(l.approx_eq(&ProjectiveLine::new(1.0, -1.0, 2.0).unwrap(), 1e-12));
    }

    #[test]
    fn join_rejects_coincident_points() {
        assert!(join(&pt(0.5, 0.5), &pt(0.5, 0.5)).is_err());
    }

    #[test]
    fn meet_examples() {
        // y = -x against y = x + 2.
        let a = ProjectiveLine::from_slope_intercept(-1.0, 0.0);
        let c = ProjectiveLine::from_slope_intercept(1.0, 2.0);
        let p = meet(&a, &c).unwrap();
        assert!(p.approx_eq(&pt(-1.0, 1.0), 1e-12));

        let x_axis = ProjectiveLine::new(0.0, 1.0, 0.0).unwrap();
        let y_axis = ProjectiveLine::new(1.0, 0.0, 0.0).unwrap();
        assert!(meet(&x_axis, &y_axis).unwrap().approx_eq(&pt(0.0, 0.0), 1e-12));

        // Edge lines through A and C at unit edge parameters.
        let ad = ProjectiveLine::from_slope_intercept(-3.0, 0.0);
        let cd = ProjectiveLine::from_slope_intercept(3.0, 2.0);
        let d = meet(&ad, &cd).unwrap();
        let (x, y) = d.to_affine().unwrap();
        assert_relative_eq!(x, -1.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(y, 1.0, max_relative = 1e-12);
    }

    fn collinear_params(params: [f64; 4]) -> [ProjectivePoint; 4] {
        // Points t * (1, 2) + (0.5, -1), an arbitrary affine line.
        params.map(|t| pt(0.5 + t, -1.0 + 2.0 * t))
    }

    #[test]
    fn cross_ratio_affine_cases() {
        let [p1, p2, p3, p4] = collinear_params([3.0, 1.0, 0.0, 0.0]);
        assert_eq!(cross_ratio_collinear(&p1, &p2, &p3, &p4).unwrap(), 0.0);
        let [p1, p2, p3, p4] = collinear_params([3.0, 1.0, 0.0, 1.0]);
        assert_eq!(cross_ratio_collinear(&p1, &p2, &p3, &p4).unwrap(), -1.0);
        let [p1, p2, p3, p4] = collinear_params([3.0, 1.0, 0.0, -1.0]);
        assert_relative_eq!(
            cross_ratio_collinear(&p1, &p2, &p3, &p4).unwrap(),
            0.5,
            max_relative = 1e-12
        );
        let [p1, p2, p3, p4] = collinear_params([3.0, 1.0, 0.0, 3.0]);
        assert!(cross_ratio_collinear(&p1, &p2, &p3, &p4).unwrap().is_infinite());
    }

    #[test]
    fn cross_ratio_rejects_bad_input() {
        let [p1, p2, _, p4] = collinear_params([3.0, 1.0, 0.0, -1.0]);
        assert!(cross_ratio_collinear(&p1, &p2, &p1, &p4).is_err());
        let off = pt(10.0, 0.0);
        assert!(cross_ratio_collinear(&p1, &p2, &off, &p4).is_err());
    }

    #[test]
    fn cross_ratio_projective_invariance() {
        let [p1, p2, p3, p4] = collinear_params([2.0, 0.7, -0.3, 5.0]);
        let base = cross_ratio_collinear(&p1, &p2, &p3, &p4).unwrap();
        let m = ProjectiveMap::new(Matrix3::new(
            1.1, 0.2, 0.3, //
            -0.1, 0.9, 0.5, //
            0.05, -0.02, 1.0,
        ))
        .unwrap();
        let mapped = cross_ratio_collinear(
            &m.apply_point(&p1),
            &m.apply_point(&p2),
            &m.apply_point(&p3),
            &m.apply_point(&p4),
        )
        .unwrap();
        assert_relative_eq!(base, mapped, max_relative = 1e-9);
    }

    fn line_through_origin(slope: f64) -> ProjectiveLine {
        ProjectiveLine::from_slope_intercept(slope, 0.0)
    }

    #[test]
    fn concurrent_cross_ratio_pencil() {
        // Lines through the origin meeting the vertical line x = 1 at
        // heights equal to their slopes; heights (-1, 1, 0, 1/w) give
        // cross ratio -2/(w+1).
        for (omega, expected) in [(-3.0, 1.0), (-2.0, 2.0)] {
            let l1 = line_through_origin(-1.0);
            let l2 = line_through_origin(1.0);
            let l3 = line_through_origin(0.0);
            let l4 = line_through_origin(1.0 / omega);
            let got = cross_ratio_concurrent(&l1, &l2, &l3, &l4).unwrap();
            assert_relative_eq!(got, expected, max_relative = 1e-12);
            assert_relative_eq!(got, -2.0 / (omega + 1.0), max_relative = 1e-12);
        }
    }

    #[test]
    fn concurrent_matches_any_reference_line() {
        let lines = [
            line_through_origin(-1.5),
            line_through_origin(0.25),
            line_through_origin(2.0),
            line_through_origin(-0.4),
        ];
        let pencil = cross_ratio_concurrent(&lines[0], &lines[1], &lines[2], &lines[3]).unwrap();
        for reference in [
            ProjectiveLine::from_slope_intercept(5.0, 3.0),
            ProjectiveLine::vertical(2.0),
        ] {
            let hits: Vec<_> = lines
                .iter()
                .map(|l| meet(l, &reference).unwrap())
                .collect();
            let via_points =
                cross_ratio_collinear(&hits[0], &hits[1], &hits[2], &hits[3]).unwrap();
            assert_relative_eq!(pencil, via_points, max_relative = 1e-10);
        }
    }

    #[test]
    fn concurrency_violation_rejected() {
        let l1 = line_through_origin(-1.0);
        let l2 = line_through_origin(1.0);
        let l3 = line_through_origin(0.5);
        let l4 = ProjectiveLine::from_slope_intercept(1.0, 5.0);
        assert!(cross_ratio_concurrent(&l1, &l2, &l3, &l4).is_err());
    }

    /// Flags of a triangle inscribed in the reference triangle
    /// (0,0), (2,0), (0,2), vertices at edge parameters t.
    fn inscribed_triangle_flags(ta: f64, tb: f64, tc: f64) -> [Flag; 3] {
        let a_pt = pt(2.0 * ta, 0.0);
        let b_pt = pt(2.0 - 2.0 * tb, 2.0 * tb);
        let c_pt = pt(0.0, 2.0 - 2.0 * tc);
        let a_line = ProjectiveLine::new(0.0, 1.0, 0.0).unwrap();
        let b_line = ProjectiveLine::new(1.0, 1.0, -2.0).unwrap();
        let c_line = ProjectiveLine::new(1.0, 0.0, 0.0).unwrap();
        [
            Flag::new(a_pt, a_line).unwrap(),
            Flag::new(b_pt, b_line).unwrap(),
            Flag::new(c_pt, c_line).unwrap(),
        ]
    }

    #[test]
    fn triple_ratio_symmetric_and_skewed() {
        let [fa, fb, fc] = inscribed_triangle_flags(0.5, 0.5, 0.5);
        assert_relative_eq!(triple_ratio(&fa, &fb, &fc).unwrap(), 1.0, max_relative = 1e-12);
        let [fa, fb, fc] = inscribed_triangle_flags(0.5, 0.5, 2.0 / 3.0);
        assert_relative_eq!(triple_ratio(&fa, &fb, &fc).unwrap(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn triple_ratio_reversal_gives_reciprocal() {
        let [fa, fb, fc] = inscribed_triangle_flags(0.3, 0.55, 0.7);
        let forward = triple_ratio(&fa, &fb, &fc).unwrap();
        let backward = triple_ratio(&fc, &fb, &fa).unwrap();
        assert_relative_eq!(forward * backward, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn triple_ratio_quadrilateral_chart_example() {
        // A = (0,0) on y = -x, C = (0,2) on y = x + 2, D = (-1/3, 1) on
        // the line of slope -5 through D.
        let fa = Flag::new(pt(0.0, 0.0), ProjectiveLine::from_slope_intercept(-1.0, 0.0)).unwrap();
        let fc = Flag::new(pt(0.0, 2.0), ProjectiveLine::from_slope_intercept(1.0, 2.0)).unwrap();
        let d = pt(-1.0 / 3.0, 1.0);
        let slope = -5.0;
        let d_line = ProjectiveLine::from_slope_intercept(slope, 1.0 - slope * (-1.0 / 3.0));
        let fd = Flag::new(d, d_line).unwrap();
        assert_relative_eq!(
            triple_ratio(&fa, &fc, &fd).unwrap(),
            0.25,
            max_relative = 1e-12
        );
    }

    #[test]
    fn map_four_points_identity_and_roundtrip() {
        let src = [pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0), pt(1.0, 1.0)];
        let id = map_four_points(&src, &src).unwrap();
        for p in &src {
            assert!(id.apply_point(p).approx_eq(p, 1e-10));
        }

        let dst = [pt(0.3, -0.2), pt(2.0, 0.1), pt(-0.4, 1.5), pt(0.9, 0.8)];
        let m = map_four_points(&src, &dst).unwrap();
        for (p, q) in src.iter().zip(dst.iter()) {
            assert!(m.apply_point(p).approx_eq(q, 1e-9));
        }
        let back = map_four_points(&dst, &src).unwrap();
        for (p, q) in src.iter().zip(dst.iter()) {
            assert!(back.apply_point(q).approx_eq(p, 1e-9));
        }
    }

    #[test]
    fn map_four_points_rejects_collinear() {
        let src = [pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 0.0), pt(1.0, 1.0)];
        let dst = [pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0), pt(1.0, 1.0)];
        assert!(map_four_points(&src, &dst).is_err());
    }

    #[test]
    fn incidence_preserved_by_maps() {
        let p = pt(0.4, 1.2);
        let q = pt(-0.7, 0.3);
        let l = join(&p, &q).unwrap();
        let m = ProjectiveMap::new(Matrix3::new(
            0.9, -0.3, 0.2, //
            0.4, 1.2, -0.1, //
            -0.02, 0.03, 1.0,
        ))
        .unwrap();
        let lp = m.apply_line(&l);
        assert!(m.apply_point(&p).is_on(&lp, 1e-10));
        assert!(m.apply_point(&q).is_on(&lp, 1e-10));
    }

    #[test]
    fn join_meet_duality() {
        let p = pt(0.2, 0.4);
        let q = pt(1.3, -0.5);
        let r = pt(-0.6, 0.9);
        let back = meet(&join(&p, &q).unwrap(), &join(&p, &r).unwrap()).unwrap();
        assert!(back.approx_eq(&p, 1e-10));
    }

    #[test]
    fn normalize_standard_configuration_is_identity() {
        let a = Flag::new(pt(0.0, 0.0), ProjectiveLine::from_slope_intercept(-1.0, 0.0)).unwrap();
        let b = Flag::new(pt(1.0, 1.0), ProjectiveLine::vertical(1.0)).unwrap();
        let c = Flag::new(pt(0.0, 2.0), ProjectiveLine::from_slope_intercept(1.0, 2.0)).unwrap();
        let d_line = ProjectiveLine::from_slope_intercept(-5.0, 1.0 - 5.0 / 3.0);
        let d = Flag::new(pt(-1.0 / 3.0, 1.0), d_line).unwrap();
        let g = normalize_quadrilateral(&[a, b, c, d]).unwrap();
        for target in standard_quadrilateral_targets() {
            assert!(g.apply_point(&target).approx_eq(&target, 1e-9));
        }
    }
}
