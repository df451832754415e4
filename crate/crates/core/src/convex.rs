//! Bounded strictly convex domains in an affine chart: convex polygons
//! and ellipses, with containment and chord queries.
//!
//! The chord query is the geometric primitive behind the Hilbert
//! metric: for an interior point and a direction it returns the two
//! boundary intersections of the spanned line.

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::projective::{ProjectiveMap, ProjectivePoint};
use crate::DEFAULT_TOL;

pub type Vec2 = Vector2<f64>;

/// Both boundary intersections of a line through an interior point;
/// `p` lies in the negative direction, `q` in the positive one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub p: Vec2,
    pub q: Vec2,
}

#[derive(Debug, Clone)]
struct Edge {
    /// Outward unit normal.
    normal: Vec2,
    /// One endpoint of the edge, used to evaluate margins without
    /// storing a separate offset.
    anchor: Vec2,
}

/// A strictly convex polygon, vertices stored in counterclockwise
/// order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "PolygonJson", into = "PolygonJson")]
pub struct ConvexPolygonDomain {
    vertices: Vec<Vec2>,
    edges: Vec<Edge>,
    diameter: f64,
}

#[derive(Serialize, Deserialize)]
struct PolygonJson {
    vertices: Vec<[f64; 2]>,
}

impl From<ConvexPolygonDomain> for PolygonJson {
    fn from(d: ConvexPolygonDomain) -> Self {
        PolygonJson {
            vertices: d.vertices.iter().map(|v| [v.x, v.y]).collect(),
        }
    }
}

impl TryFrom<PolygonJson> for ConvexPolygonDomain {
    type Error = GeomError;
    fn try_from(j: PolygonJson) -> Result<Self> {
        ConvexPolygonDomain::new(j.vertices.iter().map(|[x, y]| Vec2::new(*x, *y)).collect())
    }
}

pub(crate) fn cross2(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

impl ConvexPolygonDomain {
    /// Builds the polygon, reorienting to counterclockwise if needed.
    /// Rejects repeated vertices, non-strict corners and vertex lists
    /// that wind more than once.
    pub fn new(mut vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(GeomError::Precondition(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|v| !v.x.is_finite() || !v.y.is_finite()) {
            return Err(GeomError::DegenerateInput(
                "polygon vertex is not finite".into(),
            ));
        }
        let signed_area: f64 = polygon_signed_area(&vertices);
        if signed_area < 0.0 {
            vertices.reverse();
        }

        let n = vertices.len();
        let mut diameter = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                diameter = diameter.max((vertices[i] - vertices[j]).norm());
            }
        }
        if diameter == 0.0 {
            return Err(GeomError::DegenerateInput("polygon has zero extent".into()));
        }

        let mut turning = 0.0;
        for i in 0..n {
            let prev = vertices[(i + n - 1) % n];
            let cur = vertices[i];
            let next = vertices[(i + 1) % n];
            let e0 = cur - prev;
            let e1 = next - cur;
            let l0 = e0.norm();
            let l1 = e1.norm();
            if l1 <= 1e-15 * diameter {
                return Err(GeomError::Precondition(format!(
                    "repeated polygon vertex at index {i}"
                )));
            }
            let c = cross2(&e0, &e1);
            if c <= 1e-12 * l0 * l1 {
                return Err(GeomError::Precondition(format!(
                    "polygon is not strictly convex at vertex index {i}"
                )));
            }
            turning += c.atan2(e0.dot(&e1));
        }
        if (turning - std::f64::consts::TAU).abs() > 1e-6 {
            return Err(GeomError::Precondition(
                "polygon vertex list winds more than once".into(),
            ));
        }

        let edges = (0..n)
            .map(|i| {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                let t = (b - a).normalize();
                Edge {
                    normal: Vec2::new(t.y, -t.x),
                    anchor: a,
                }
            })
            .collect();
        Ok(Self {
            vertices,
            edges,
            diameter,
        })
    }

    pub fn from_xy<I: IntoIterator<Item = (f64, f64)>>(pts: I) -> Result<Self> {
        Self::new(pts.into_iter().map(|(x, y)| Vec2::new(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn area(&self) -> f64 {
        polygon_signed_area(&self.vertices)
    }

    /// Area centroid; strictly interior for a convex polygon.
    pub fn centroid(&self) -> Vec2 {
        let a = polygon_signed_area(&self.vertices);
        let n = self.vertices.len();
        let mut c = Vec2::zeros();
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            c += (p + q) * cross2(&p, &q);
        }
        c / (6.0 * a)
    }

    /// Signed distance-like margin: the smallest distance to an edge
    /// line, positive inside, negative outside.
    pub fn interior_margin(&self, p: &Vec2) -> f64 {
        self.edges
            .iter()
            .map(|e| e.normal.dot(&(e.anchor - p)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Chord arm lengths from `x` along the unit direction `u`: the
    /// positive parameters of the boundary hits in directions -u and
    /// +u. Intended for interior points; values are clamped to stay
    /// positive against rounding at the boundary.
    pub(crate) fn arm_lengths(&self, x: &Vec2, u: &Vec2) -> (f64, f64) {
        let mut t_plus = f64::INFINITY;
        let mut t_minus = f64::INFINITY;
        for e in &self.edges {
            let h = e.normal.dot(&(e.anchor - x)).max(f64::MIN_POSITIVE);
            let d = e.normal.dot(u);
            if d > 0.0 {
                t_plus = t_plus.min(h / d);
            } else if d < 0.0 {
                t_minus = t_minus.min(h / -d);
            }
        }
        (t_minus, t_plus)
    }
}

fn polygon_signed_area(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        s += cross2(&vertices[i], &vertices[(i + 1) % n]);
    }
    s / 2.0
}

/// The open region { p : (p - center)^T shape (p - center) < 1 } for a
/// symmetric positive-definite matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "EllipseJson", into = "EllipseJson")]
pub struct EllipseDomain {
    center: Vec2,
    shape: Matrix2<f64>,
}

#[derive(Serialize, Deserialize)]
struct EllipseJson {
    center: [f64; 2],
    shape: [[f64; 2]; 2],
}

impl From<EllipseDomain> for EllipseJson {
    fn from(d: EllipseDomain) -> Self {
        EllipseJson {
            center: [d.center.x, d.center.y],
            shape: [
                [d.shape[(0, 0)], d.shape[(0, 1)]],
                [d.shape[(1, 0)], d.shape[(1, 1)]],
            ],
        }
    }
}

impl TryFrom<EllipseJson> for EllipseDomain {
    type Error = GeomError;
    fn try_from(j: EllipseJson) -> Result<Self> {
        EllipseDomain::new(
            Vec2::new(j.center[0], j.center[1]),
            Matrix2::new(j.shape[0][0], j.shape[0][1], j.shape[1][0], j.shape[1][1]),
        )
    }
}

impl EllipseDomain {
    pub fn new(center: Vec2, shape: Matrix2<f64>) -> Result<Self> {
        if !shape.iter().all(|x| x.is_finite()) || !center.iter().all(|x| x.is_finite()) {
            return Err(GeomError::DegenerateInput("ellipse data not finite".into()));
        }
        let asym = (shape[(0, 1)] - shape[(1, 0)]).abs();
        if asym > 1e-10 * shape.norm() {
            return Err(GeomError::Precondition(
                "ellipse shape matrix is not symmetric".into(),
            ));
        }
        let sym = (shape + shape.transpose()) / 2.0;
        if sym[(0, 0)] <= 0.0 || sym.determinant() <= 0.0 {
            return Err(GeomError::Precondition(
                "ellipse shape matrix is not positive definite".into(),
            ));
        }
        Ok(Self { center, shape: sym })
    }

    /// The circle of radius r.
    pub fn disk(center: Vec2, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(GeomError::Precondition("disk needs positive radius".into()));
        }
        Self::new(center, Matrix2::identity() / (radius * radius))
    }

    pub fn center(&self) -> Vec2 {
        self.center
    }

    pub fn shape(&self) -> &Matrix2<f64> {
        &self.shape
    }

    pub fn quadratic_form(&self, p: &Vec2) -> f64 {
        let d = p - self.center;
        (self.shape * d).dot(&d)
    }

    fn semi_axis_extremes(&self) -> (f64, f64) {
        let tr = self.shape.trace();
        let det = self.shape.determinant();
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        let l_max = tr / 2.0 + disc;
        let l_min = (tr / 2.0 - disc).max(f64::MIN_POSITIVE);
        (1.0 / l_max.sqrt(), 1.0 / l_min.sqrt())
    }

    /// Approximate distance to the boundary, positive inside: the
    /// radial defect scaled by the geometric-mean semi-axis. Exact for
    /// circles; within the axis-ratio factor in general, which is all
    /// the tolerance classification needs.
    pub fn interior_margin(&self, p: &Vec2) -> f64 {
        let q = self.quadratic_form(p).max(0.0).sqrt();
        (1.0 - q) * self.shape.determinant().powf(-0.25)
    }

    pub(crate) fn arm_lengths(&self, x: &Vec2, u: &Vec2) -> (f64, f64) {
        let d = x - self.center;
        let a = (self.shape * u).dot(u);
        let b = (self.shape * u).dot(&d);
        let c0 = (self.shape * d).dot(&d) - 1.0;
        let disc = (b * b - a * c0).max(0.0);
        let sq = disc.sqrt();
        let (t_neg, t_pos) = if b >= 0.0 {
            let t1 = (-b - sq) / a;
            (t1, c0 / (a * t1))
        } else {
            let t2 = (-b + sq) / a;
            (c0 / (a * t2), t2)
        };
        ((-t_neg).max(f64::MIN_POSITIVE), t_pos.max(f64::MIN_POSITIVE))
    }
}

/// A bounded strictly convex domain: the carrier of the Hilbert metric.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "DomainJson", into = "DomainJson")]
pub enum ConvexDomain {
    Polygon(ConvexPolygonDomain),
    Ellipse(EllipseDomain),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum DomainJson {
    Polygon { vertices: Vec<[f64; 2]> },
    Ellipse { center: [f64; 2], shape: [[f64; 2]; 2] },
}

impl From<ConvexDomain> for DomainJson {
    fn from(d: ConvexDomain) -> Self {
        match d {
            ConvexDomain::Polygon(p) => DomainJson::Polygon {
                vertices: PolygonJson::from(p).vertices,
            },
            ConvexDomain::Ellipse(e) => {
                let j = EllipseJson::from(e);
                DomainJson::Ellipse {
                    center: j.center,
                    shape: j.shape,
                }
            }
        }
    }
}

impl TryFrom<DomainJson> for ConvexDomain {
    type Error = GeomError;
    fn try_from(j: DomainJson) -> Result<Self> {
        match j {
            DomainJson::Polygon { vertices } => Ok(ConvexDomain::Polygon(
                ConvexPolygonDomain::try_from(PolygonJson { vertices })?,
            )),
            DomainJson::Ellipse { center, shape } => Ok(ConvexDomain::Ellipse(
                EllipseDomain::try_from(EllipseJson { center, shape })?,
            )),
        }
    }
}

impl From<ConvexPolygonDomain> for ConvexDomain {
    fn from(p: ConvexPolygonDomain) -> Self {
        ConvexDomain::Polygon(p)
    }
}

impl From<EllipseDomain> for ConvexDomain {
    fn from(e: EllipseDomain) -> Self {
        ConvexDomain::Ellipse(e)
    }
}

impl ConvexDomain {
    /// Positive inside, negative outside; approximately the Euclidean
    /// distance to the boundary near it.
    pub fn interior_margin(&self, p: &Vec2) -> f64 {
        match self {
            ConvexDomain::Polygon(d) => d.interior_margin(p),
            ConvexDomain::Ellipse(e) => e.interior_margin(p),
        }
    }

    /// Length scale of the domain, used to make tolerances relative.
    pub fn scale(&self) -> f64 {
        match self {
            ConvexDomain::Polygon(d) => d.diameter(),
            ConvexDomain::Ellipse(e) => 2.0 * e.semi_axis_extremes().1,
        }
    }

    /// Strict containment with a tolerance margin.
    pub fn contains(&self, p: &Vec2) -> bool {
        self.interior_margin(p) > DEFAULT_TOL * self.scale()
    }

    pub(crate) fn arm_lengths(&self, x: &Vec2, u: &Vec2) -> (f64, f64) {
        match self {
            ConvexDomain::Polygon(d) => d.arm_lengths(x, u),
            ConvexDomain::Ellipse(e) => e.arm_lengths(x, u),
        }
    }

    /// The chord of the domain through `x` with direction `v`: `p` is
    /// the boundary hit in direction -v, `q` the hit in direction +v.
    pub fn chord(&self, x: &Vec2, v: &Vec2) -> Result<Chord> {
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(GeomError::Precondition("chord direction is zero".into()));
        }
        if !self.contains(x) {
            return Err(GeomError::Precondition(
                "chord base point is not interior".into(),
            ));
        }
        let u = v / n;
        let (t_minus, t_plus) = self.arm_lengths(x, &u);
        Ok(Chord {
            p: x - u * t_minus,
            q: x + u * t_plus,
        })
    }
}

/// Whether the inner polygon is inscribed in the outer domain: all
/// inner vertices in the closure of the domain and all inner edges
/// inside it. Edge interiority is tested at midpoints; edges shorter
/// than the touch resolution are only required to stay in the closure,
/// since their margin is below what floating point can certify.
pub fn inscribe_check(outer: &ConvexDomain, inner: &ConvexPolygonDomain) -> bool {
    let scale = outer.scale();
    let closure_tol = 1e-9 * scale;
    let touch_tol = 1e-12 * scale;
    let verts = inner.vertices();
    let n = verts.len();
    for i in 0..n {
        if outer.interior_margin(&verts[i]) < -closure_tol {
            return false;
        }
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let mid = (a + b) / 2.0;
        let needed = if (b - a).norm() >= 1e-9 * scale {
            touch_tol
        } else {
            -closure_tol
        };
        if outer.interior_margin(&mid) <= needed {
            return false;
        }
    }
    true
}

/// Applies an invertible affine map p -> linear * p + offset.
pub fn affine_image_polygon(
    domain: &ConvexPolygonDomain,
    linear: &Matrix2<f64>,
    offset: &Vec2,
) -> Result<ConvexPolygonDomain> {
    if linear.determinant().abs() <= 1e-14 * linear.norm().powi(2) {
        return Err(GeomError::Precondition("affine map is singular".into()));
    }
    ConvexPolygonDomain::new(
        domain
            .vertices()
            .iter()
            .map(|v| linear * v + offset)
            .collect(),
    )
}

pub fn affine_image_ellipse(
    domain: &EllipseDomain,
    linear: &Matrix2<f64>,
    offset: &Vec2,
) -> Result<EllipseDomain> {
    let inv = linear.try_inverse().ok_or_else(|| {
        GeomError::Precondition("affine map is singular".into())
    })?;
    EllipseDomain::new(
        linear * domain.center() + offset,
        inv.transpose() * domain.shape() * inv,
    )
}

pub fn affine_image(
    domain: &ConvexDomain,
    linear: &Matrix2<f64>,
    offset: &Vec2,
) -> Result<ConvexDomain> {
    Ok(match domain {
        ConvexDomain::Polygon(d) => affine_image_polygon(d, linear, offset)?.into(),
        ConvexDomain::Ellipse(e) => affine_image_ellipse(e, linear, offset)?.into(),
    })
}

/// Pushes a polygon through a projective map, staying in the chart
/// z = 1. Errors if a vertex lands at infinity or if the image fails
/// convex validation, which happens exactly when the map pulls the
/// line at infinity across the polygon.
pub fn projective_image_polygon(
    domain: &ConvexPolygonDomain,
    map: &ProjectiveMap,
) -> Result<ConvexPolygonDomain> {
    let mut images = Vec::with_capacity(domain.vertices().len());
    for v in domain.vertices() {
        let image = map.apply_point(&ProjectivePoint::from_affine(v.x, v.y));
        let (x, y) = image.to_affine().map_err(|_| {
            GeomError::Configuration(
                "projective image of polygon is unbounded in the chart".into(),
            )
        })?;
        images.push(Vec2::new(x, y));
    }
    ConvexPolygonDomain::new(images).map_err(|e| {
        GeomError::Configuration(format!(
            "projective image of polygon is not convex in the chart: {e}"
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_square() -> ConvexDomain {
        ConvexPolygonDomain::from_xy([(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)])
            .unwrap()
            .into()
    }

    #[test]
    fn polygon_validation() {
        assert!(ConvexPolygonDomain::from_xy([(0.0, 0.0), (1.0, 0.0)]).is_err());
        // Collinear triple.
        assert!(
            ConvexPolygonDomain::from_xy([(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (0.0, 1.0)])
                .is_err()
        );
        // Repeated vertex.
        assert!(
            ConvexPolygonDomain::from_xy([(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
                .is_err()
        );
        // Clockwise input is accepted and reoriented.
        let p = ConvexPolygonDomain::from_xy([(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)]).unwrap();
        assert!(p.area() > 0.0);
        // Non-convex kite.
        assert!(ConvexPolygonDomain::from_xy([
            (0.0, 0.0),
            (2.0, 0.0),
            (0.5, 0.5),
            (0.0, 2.0)
        ])
        .is_err());
    }

    #[test]
    fn containment() {
        let sq = unit_square();
        assert!(sq.contains(&Vec2::new(0.0, 0.0)));
        assert!(!sq.contains(&Vec2::new(2.0, 0.0)));
        let tri: ConvexDomain = ConvexPolygonDomain::from_xy([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
            .unwrap()
            .into();
        assert!(tri.contains(&Vec2::new(0.25, 0.25)));
    }

    #[test]
    fn square_chords() {
        let sq = unit_square();
        let c = sq
            .chord(&Vec2::new(0.0, 0.0), &Vec2::new(1.0, 1.0))
            .unwrap();
        assert_relative_eq!(c.p.x, -1.0, max_relative = 1e-12);
        assert_relative_eq!(c.p.y, -1.0, max_relative = 1e-12);
        assert_relative_eq!(c.q.x, 1.0, max_relative = 1e-12);
        assert_relative_eq!(c.q.y, 1.0, max_relative = 1e-12);

        let c = sq
            .chord(&Vec2::new(0.5, 0.0), &Vec2::new(1.0, 0.0))
            .unwrap();
        assert_relative_eq!(c.p.x, -1.0, max_relative = 1e-12);
        assert_relative_eq!(c.q.x, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn disk_chords() {
        let disk: ConvexDomain = EllipseDomain::disk(Vec2::zeros(), 1.0).unwrap().into();
        let c = disk
            .chord(&Vec2::new(0.0, 0.0), &Vec2::new(1.0, 0.0))
            .unwrap();
        assert_relative_eq!(c.p.x, -1.0, max_relative = 1e-12);
        assert_relative_eq!(c.q.x, 1.0, max_relative = 1e-12);

        let c = disk
            .chord(&Vec2::new(0.5, 0.0), &Vec2::new(1.0, 0.0))
            .unwrap();
        assert_relative_eq!(c.p.x, -1.0, max_relative = 1e-12);
        assert_relative_eq!(c.q.x, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn chord_antisymmetric_in_direction() {
        let sq = unit_square();
        let x = Vec2::new(0.3, -0.2);
        let v = Vec2::new(0.7, 0.4);
        let c1 = sq.chord(&x, &v).unwrap();
        let c2 = sq.chord(&x, &(-v)).unwrap();
        assert_relative_eq!((c1.p - c2.q).norm(), 0.0, epsilon = 1e-12);
        assert_relative_eq!((c1.q - c2.p).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn chord_endpoints_on_boundary() {
        let disk: ConvexDomain = EllipseDomain::disk(Vec2::zeros(), 2.0).unwrap().into();
        let c = disk
            .chord(&Vec2::new(0.4, -0.9), &Vec2::new(0.2, 1.4))
            .unwrap();
        if let ConvexDomain::Ellipse(e) = &disk {
            assert_relative_eq!(e.quadratic_form(&c.p), 1.0, max_relative = 1e-9);
            assert_relative_eq!(e.quadratic_form(&c.q), 1.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn inscribe_check_basic() {
        let sq = unit_square();
        let midpoints =
            ConvexPolygonDomain::from_xy([(0.0, -1.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0)])
                .unwrap();
        assert!(inscribe_check(&sq, &midpoints));

        let poking = ConvexPolygonDomain::from_xy([(0.0, -1.5), (1.0, 0.0), (-1.0, 0.0)]).unwrap();
        assert!(!inscribe_check(&sq, &poking));

        // A polygon sharing a whole edge with the boundary is not
        // inscribed.
        let flush = ConvexPolygonDomain::from_xy([(-1.0, -1.0), (1.0, -1.0), (0.0, 1.0)]).unwrap();
        assert!(!inscribe_check(&sq, &flush));
    }

    #[test]
    fn affine_invariance_of_chords() {
        let sq = unit_square();
        let linear = Matrix2::new(1.3, 0.4, -0.2, 0.8);
        let offset = Vec2::new(0.7, -0.3);
        let image = affine_image(&sq, &linear, &offset).unwrap();
        let x = Vec2::new(0.2, 0.1);
        let v = Vec2::new(0.5, -1.0);
        let c = sq.chord(&x, &v).unwrap();
        let cx = image
            .chord(&(linear * x + offset), &(linear * v))
            .unwrap();
        assert_relative_eq!((cx.p - (linear * c.p + offset)).norm(), 0.0, epsilon = 1e-9);
        assert_relative_eq!((cx.q - (linear * c.q + offset)).norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn domain_json_roundtrip() {
        let sq = unit_square();
        let text = serde_json::to_string(&sq).unwrap();
        assert!(text.contains("\"type\":\"polygon\""));
        let back: ConvexDomain = serde_json::from_str(&text).unwrap();
        match (sq, back) {
            (ConvexDomain::Polygon(a), ConvexDomain::Polygon(b)) => {
                assert_eq!(a.vertices().len(), b.vertices().len());
            }
            _ => panic!("wrong variant after roundtrip"),
        }

        let parsed: ConvexDomain = serde_json::from_str(
            r#"{"type":"ellipse","center":[0.5,0.0],"shape":[[1.0,0.1],[0.1,2.0]]}"#,
        )
        .unwrap();
        assert!(matches!(parsed, ConvexDomain::Ellipse(_)));

        let bad: std::result::Result<ConvexDomain, _> = serde_json::from_str(
            r#"{"type":"ellipse","center":[0.5,0.0],"shape":[[1.0,0.1],[0.1,-2.0]]}"#,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn projective_image_keeps_or_rejects() {
        let sq = match unit_square() {
            ConvexDomain::Polygon(p) => p,
            _ => unreachable!(),
        };
        let mild = ProjectiveMap::new(nalgebra::Matrix3::new(
            1.0, 0.1, 0.0, //
            -0.05, 0.95, 0.1, //
            0.02, 0.01, 1.0,
        ))
        .unwrap();
        let image = projective_image_polygon(&sq, &mild).unwrap();
        assert_eq!(image.vertices().len(), 4);

        // This map sends the line x = 1/2 to infinity, which crosses
        // the square.
        let wild = ProjectiveMap::new(nalgebra::Matrix3::new(
            1.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, //
            -2.0, 0.0, 1.0,
        ))
        .unwrap();
        assert!(projective_image_polygon(&sq, &wild).is_err());
    }
}
