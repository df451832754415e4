//! Flag invariants of polygons inscribed in polygons, and the
//! dictionary between those invariants and explicit coordinates for
//! the normalized quadrilateral configuration.
//!
//! The normalized configuration fixes the inner quadrilateral at
//! A = (0,0), B = (1,1), C = (0,2) with D = (mu, nu) free, pins the
//! boundary lines a: y = -x and c: y = x + 2, and leaves the lines
//! through B and D with free slopes. Its moduli are four positive
//! numbers (W, Z, T, Y): two triple ratios of flag triples and the
//! pair (W, Z) that locates D inside the open triangle with corners
//! A, (-1, 1) and C.

use serde::{Deserialize, Serialize};

use crate::convex::{inscribe_check, ConvexPolygonDomain};
use crate::error::{GeomError, Result, Stratum};
use crate::projective::{meet, triple_ratio, Flag, ProjectiveLine, ProjectivePoint};

/// The four positive parameters of a quadrilateral configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadParams {
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "Y")]
    pub y: f64,
}

impl QuadParams {
    pub fn new(w: f64, z: f64, t: f64, y: f64) -> Result<Self> {
        let p = Self { w, z, t, y };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("W", self.w), ("Z", self.z), ("T", self.t), ("Y", self.y)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GeomError::Precondition(format!(
                    "parameter {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// The most symmetric configuration: B on a vertical line, D at
    /// (-1/3, 1).
    pub fn standard() -> Self {
        Self {
            w: 1.0,
            z: 1.0,
            t: 1.0,
            y: 0.25,
        }
    }
}

// ---------------------------------------------------------------------------
// Triangle chart

/// Flags of a triangle inscribed in the corner triangle (0,0), (2,0),
/// (0,2), with each inner point placed by its edge fraction t in
/// (0, 1).
pub fn triangle_chart_flags(ta: f64, tb: f64, tc: f64) -> Result<[Flag; 3]> {
    for (name, t) in [("ta", ta), ("tb", tb), ("tc", tc)] {
        if !(t > 0.0 && t < 1.0) {
            return Err(GeomError::Precondition(format!(
                "edge fraction {name} must lie in (0, 1), got {t}"
            )));
        }
    }
    let la = ProjectiveLine::new(0.0, 1.0, 0.0)?;
    let lb = ProjectiveLine::new(1.0, 1.0, -2.0)?;
    let lc = ProjectiveLine::new(1.0, 0.0, 0.0)?;
    Ok([
        Flag::new(ProjectivePoint::from_affine(2.0 * ta, 0.0), la)?,
        Flag::new(ProjectivePoint::from_affine(2.0 - 2.0 * tb, 2.0 * tb), lb)?,
        Flag::new(ProjectivePoint::from_affine(0.0, 2.0 - 2.0 * tc), lc)?,
    ])
}

/// The triple ratio of the chart flags in product form.
pub fn triangle_invariant_product(ta: f64, tb: f64, tc: f64) -> f64 {
    (ta / (1.0 - ta)) * (tb / (1.0 - tb)) * (tc / (1.0 - tc))
}

/// A one-parameter realization of a triangle with invariant `t_value`
/// inscribed in the corner triangle: two edge fractions are pinned at
/// 1/2 and the third carries the invariant. Returns (outer, inner)
/// domains ready for area integration.
pub fn triangle_realization(t_value: f64) -> Result<(ConvexPolygonDomain, ConvexPolygonDomain)> {
    if !(t_value > 0.0 && t_value.is_finite()) {
        return Err(GeomError::Precondition(format!(
            "triangle invariant must be positive and finite, got {t_value}"
        )));
    }
    let tau = 2.0 / (1.0 + t_value);
    let outer = ConvexPolygonDomain::from_xy([(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)])?;
    let inner = ConvexPolygonDomain::from_xy([(1.0, 0.0), (1.0, 1.0), (0.0, tau)])?;
    Ok((outer, inner))
}

// ---------------------------------------------------------------------------
// The (W, Z) half of the dictionary

const INTERIOR_TOL: f64 = 1e-12;

/// Classifies a point of the closed moduli triangle that is not in its
/// open interior, for error reporting.
fn boundary_stratum(mu: f64, nu: f64) -> Option<Stratum> {
    let da = nu + mu; // 0 on the line through A with slope -1
    let dc = mu + 2.0 - nu; // 0 on the line through C with slope 1
    let dm = -mu; // 0 on the segment AC
    let t = INTERIOR_TOL;
    if dm.abs() <= t {
        if nu.abs() <= t {
            return Some(Stratum::VertexA);
        }
        if (nu - 2.0).abs() <= t {
            return Some(Stratum::VertexC);
        }
        if nu > 0.0 && nu < 2.0 {
            return Some(Stratum::SegmentAc);
        }
        return None;
    }
    if da.abs() <= t && dc.abs() <= t {
        return Some(Stratum::CornerAc);
    }
    if da.abs() <= t && mu > -1.0 && mu < 0.0 {
        return Some(Stratum::EdgeA);
    }
    if dc.abs() <= t && mu > -1.0 && mu < 0.0 {
        return Some(Stratum::EdgeC);
    }
    None
}

fn require_interior(mu: f64, nu: f64) -> Result<()> {
    if !(mu.is_finite() && nu.is_finite()) {
        return Err(GeomError::DegenerateInput(format!(
            "moduli point ({mu}, {nu}) is not finite"
        )));
    }
    let da = nu + mu;
    let dc = mu + 2.0 - nu;
    let dm = -mu;
    if da > INTERIOR_TOL && dc > INTERIOR_TOL && dm > INTERIOR_TOL {
        return Ok(());
    }
    if let Some(stratum) = boundary_stratum(mu, nu) {
        return Err(GeomError::Boundary {
            stratum,
            detail: format!("moduli point ({mu}, {nu}) lies on the boundary"),
        });
    }
    Err(GeomError::Precondition(format!(
        "moduli point ({mu}, {nu}) lies outside the closed moduli triangle"
    )))
}

/// Position of D from the pair (W, Z): both positive, and every such
/// pair lands strictly inside the moduli triangle.
pub fn d_from_wz(w: f64, z: f64) -> Result<(f64, f64)> {
    if !(w > 0.0 && w.is_finite() && z > 0.0 && z.is_finite()) {
        return Err(GeomError::Precondition(format!(
            "W and Z must be positive and finite, got ({w}, {z})"
        )));
    }
    let v = 1.0 / z;
    let f = 1.0 / (w + v + 1.0);
    Ok((-f, (1.0 + 2.0 * v) * f))
}

/// Inverse of `d_from_wz`. Points on the boundary of the moduli
/// triangle have no finite parameters and report which stratum was
/// hit.
pub fn wz_from_d(mu: f64, nu: f64) -> Result<(f64, f64)> {
    require_interior(mu, nu)?;
    let w = (2.0 - nu + mu) / (-2.0 * mu);
    let z = -2.0 * mu / (mu + nu);
    Ok((w, z))
}

// ---------------------------------------------------------------------------
// The (Y, m) half: slope of the line through D

/// The fourth invariant from the position of D and the slope m of its
/// line.
pub fn y_invariant(mu: f64, nu: f64, m: f64) -> Result<f64> {
    require_interior(mu, nu)?;
    if !m.is_finite() {
        return Err(GeomError::Precondition(format!(
            "slope through D must be finite, got {m}"
        )));
    }
    let num = (2.0 - nu + mu) * (nu - mu * m);
    let den = (nu + mu) * (-2.0 + nu - mu * m);
    if den.abs() <= f64::MIN_POSITIVE * num.abs().max(1.0) {
        return Err(GeomError::DegenerateInput(
            "line through D passes through C, invariant undefined".into(),
        ));
    }
    Ok(num / den)
}

/// Slope of the line through D realizing the invariant y.
pub fn m_from_y(mu: f64, nu: f64, y: f64) -> Result<f64> {
    require_interior(mu, nu)?;
    if !(y > 0.0 && y.is_finite()) {
        return Err(GeomError::Precondition(format!(
            "invariant Y must be positive and finite, got {y}"
        )));
    }
    let r = 2.0 - nu + mu;
    let p = (nu + mu) * y;
    let gap = r - p;
    if gap.abs() <= 1e-15 * (r.abs() + p.abs()) {
        return Err(GeomError::DegenerateInput(
            "requested invariant makes the line through D vertical".into(),
        ));
    }
    Ok((r * nu - p * (nu - 2.0)) / (mu * gap))
}

// ---------------------------------------------------------------------------
// Slope of the line through B from the triangle invariant

fn b_line_at_angle(psi: f64) -> Result<ProjectiveLine> {
    ProjectiveLine::new(-psi.sin(), psi.cos(), psi.sin() - psi.cos())
}

fn chart_invariant_at_angle(psi: f64) -> Result<f64> {
    let la = ProjectiveLine::new(1.0, 1.0, 0.0)?;
    let lc = ProjectiveLine::new(1.0, -1.0, 2.0)?;
    let fa = Flag::new(ProjectivePoint::from_affine(0.0, 0.0), la)?;
    let fb = Flag::new(ProjectivePoint::from_affine(1.0, 1.0), b_line_at_angle(psi)?)?;
    let fc = Flag::new(ProjectivePoint::from_affine(0.0, 2.0), lc)?;
    triple_ratio(&fa, &fb, &fc)
}

/// Slope of the line through B = (1,1) whose flag triple with the
/// pinned flags at A and C has triple ratio `t`, found by bisecting
/// the line angle against the invariant itself. The invariant
/// decreases strictly from +inf to 0 as the angle sweeps the open
/// range; t = 1 is the vertical line, reported as infinity.
pub fn slope_b_from_t(t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(GeomError::Precondition(format!(
            "invariant T must be positive and finite, got {t}"
        )));
    }
    if t == 1.0 {
        return Ok(f64::INFINITY);
    }
    let target = t.ln();
    let mut lo = std::f64::consts::FRAC_PI_4 + 1e-12;
    let mut hi = 3.0 * std::f64::consts::FRAC_PI_4 - 1e-12;
    if chart_invariant_at_angle(lo)?.ln() <= target {
        return Ok(lo.tan());
    }
    if chart_invariant_at_angle(hi)?.ln() >= target {
        return Ok(hi.tan());
    }
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if chart_invariant_at_angle(mid)?.ln() > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 {
            break;
        }
    }
    Ok(((lo + hi) / 2.0).tan())
}

// ---------------------------------------------------------------------------
// Full configuration

/// The normalized quadrilateral configuration built from its four
/// parameters: flags, both polygons, and the chart coordinates of D.
#[derive(Debug, Clone)]
pub struct QuadConfiguration {
    pub params: QuadParams,
    pub mu: f64,
    pub nu: f64,
    /// Slope of the line through D.
    pub slope_d: f64,
    /// Slope of the line through B; infinite means vertical.
    pub slope_b: f64,
    /// Flags in the order (A, a), (B, b), (C, c), (D, d).
    pub flags: [Flag; 4],
    pub outer: ConvexPolygonDomain,
    pub inner: ConvexPolygonDomain,
}

/// Realizes the parameters as a concrete inscribed configuration.
/// The outer quadrilateral is cut out by the four flag lines; its
/// vertices follow the line pairs (d,a), (a,b), (b,c), (c,d)
/// counterclockwise, one inner vertex on each outer edge.
pub fn build_configuration(params: &QuadParams) -> Result<QuadConfiguration> {
    params.validate()?;
    let (mu, nu) = d_from_wz(params.w, params.z)?;
    let slope_d = m_from_y(mu, nu, params.y)?;
    let slope_b = slope_b_from_t(params.t)?;

    let la = ProjectiveLine::new(1.0, 1.0, 0.0)?;
    let lb = if slope_b.is_infinite() {
        ProjectiveLine::vertical(1.0)
    } else {
        ProjectiveLine::from_slope_intercept(slope_b, 1.0 - slope_b)
    };
    let lc = ProjectiveLine::new(1.0, -1.0, 2.0)?;
    let ld = ProjectiveLine::from_slope_intercept(slope_d, nu - slope_d * mu);

    let pa = ProjectivePoint::from_affine(0.0, 0.0);
    let pb = ProjectivePoint::from_affine(1.0, 1.0);
    let pc = ProjectivePoint::from_affine(0.0, 2.0);
    let pd = ProjectivePoint::from_affine(mu, nu);
    let flags = [
        Flag::new(pa, la.clone())?,
        Flag::new(pb, lb.clone())?,
        Flag::new(pc, lc.clone())?,
        Flag::new(pd, ld.clone())?,
    ];

    let corner = |l1: &ProjectiveLine, l2: &ProjectiveLine| -> Result<(f64, f64)> {
        meet(l1, l2)?.to_affine().map_err(|_| {
            GeomError::Configuration(
                "two boundary lines are parallel, the outer quadrilateral is unbounded".into(),
            )
        })
    };
    let outer = ConvexPolygonDomain::from_xy([
        corner(&ld, &la)?,
        corner(&la, &lb)?,
        corner(&lb, &lc)?,
        corner(&lc, &ld)?,
    ])
    .map_err(|e| {
        GeomError::Configuration(format!(
            "boundary lines do not cut out a convex quadrilateral: {e}"
        ))
    })?;
    let inner = ConvexPolygonDomain::from_xy([(0.0, 0.0), (1.0, 1.0), (0.0, 2.0), (mu, nu)])
        .map_err(|e| GeomError::Configuration(format!("inner quadrilateral degenerate: {e}")))?;
    if !inscribe_check(&outer.clone().into(), &inner) {
        return Err(GeomError::Configuration(
            "inner quadrilateral is not inscribed in the outer one".into(),
        ));
    }
    Ok(QuadConfiguration {
        params: *params,
        mu,
        nu,
        slope_d,
        slope_b,
        flags,
        outer,
        inner,
    })
}

impl QuadConfiguration {
    /// Recomputes all four parameters from the realized geometry: the
    /// pair (W, Z) from the chart position of D and the two triple
    /// ratios from the flags.
    pub fn invariants(&self) -> Result<QuadParams> {
        let (w, z) = wz_from_d(self.mu, self.nu)?;
        let t = triple_ratio(&self.flags[0], &self.flags[1], &self.flags[2])?;
        let y = triple_ratio(&self.flags[0], &self.flags[2], &self.flags[3])?;
        QuadParams::new(w, z, t, y)
    }
}

// ---------------------------------------------------------------------------
// Scalar summaries along degenerations

/// The central chart summary Q = (1/Z) ln(1 + W + 1/Z).
pub fn central_q(w: f64, z: f64) -> Result<f64> {
    if !(w > 0.0 && w.is_finite() && z > 0.0 && z.is_finite()) {
        return Err(GeomError::Precondition(format!(
            "central summary needs positive finite (W, Z), got ({w}, {z})"
        )));
    }
    let v = 1.0 / z;
    Ok(v * (1.0 + w + v).ln())
}

/// The same summary from the chart position of D.
pub fn central_q_from_d(mu: f64, nu: f64) -> Result<f64> {
    require_interior(mu, nu)?;
    let v = (mu + nu) / (-2.0 * mu);
    Ok(v * (-1.0 / mu).ln())
}

/// Summary of a graph path x -> (-x, f(x)) through the corner at A:
/// ((f(x) - x) / x) ln(1/x). Requires 0 < x < 1 and f(x) >= x so the
/// path approaches the corner from inside the wedge.
pub fn q_graph<F: Fn(f64) -> f64>(f: F, x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(GeomError::Precondition(format!(
            "graph summary needs 0 < x < 1, got {x}"
        )));
    }
    let fx = f(x);
    if !(fx >= x) {
        return Err(GeomError::Precondition(format!(
            "graph value must stay at or above the diagonal: f({x}) = {fx}"
        )));
    }
    Ok(((fx - x) / x) * (1.0 / x).ln())
}

// ---------------------------------------------------------------------------
// Twist and bulge

/// The two-parameter flow on (W, Z) that leaves T and Y alone:
/// u translates both logarithms equally, v pushes them apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwistBulge {
    pub u: f64,
    pub v: f64,
}

impl TwistBulge {
    pub fn apply(&self, w: f64, z: f64) -> (f64, f64) {
        (
            (self.u + 3.0 * self.v).exp() * w,
            (self.u - 3.0 * self.v).exp() * z,
        )
    }

    pub fn apply_params(&self, p: &QuadParams) -> QuadParams {
        let (w, z) = self.apply(p.w, p.z);
        QuadParams { w, z, ..*p }
    }

    /// The unique (u, v) carrying `from` to `to`.
    pub fn between(from: (f64, f64), to: (f64, f64)) -> Result<Self> {
        for v in [from.0, from.1, to.0, to.1] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GeomError::Precondition(
                    "twist-bulge endpoints need positive finite (W, Z)".into(),
                ));
            }
        }
        let dw = (to.0 / from.0).ln();
        let dz = (to.1 / from.1).ln();
        Ok(Self {
            u: (dw + dz) / 2.0,
            v: (dw - dz) / 6.0,
        })
    }
}

/// The label swap reversing the roles of the two triangles of the
/// quadrilateral: an involution on parameters that mirrors the
/// configuration across the horizontal line through B.
pub fn reflect_params(p: &QuadParams) -> QuadParams {
    QuadParams {
        w: 1.0 / p.z,
        z: 1.0 / p.w,
        t: 1.0 / p.t,
        y: 1.0 / p.y,
    }
}

// ---------------------------------------------------------------------------
// Degeneration catalog

/// Qualitative limit of one parameter along a degeneration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LimitSymbol {
    Zero,
    Positive,
    Infinite,
}

/// Limit of the ratio Z/W.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RatioLimit {
    ToZero,
    ToInfinity,
}

/// A degeneration case: the qualitative limits of Z, W and of Z/W.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegenerationCase {
    pub z: LimitSymbol,
    pub w: LimitSymbol,
    pub ratio: RatioLimit,
}

/// Where the vertex D can accumulate on the moduli boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PredictedLimit {
    VertexA,
    VertexC,
    CornerAc,
    /// The two closed edges through A and C minus the vertices A and
    /// C themselves; includes their common corner.
    OpenEdgesAc,
    /// The open diagonal segment between A and C.
    OpenSegmentAc,
}

impl std::fmt::Display for PredictedLimit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PredictedLimit::VertexA => "vertex-A",
            PredictedLimit::VertexC => "vertex-C",
            PredictedLimit::CornerAc => "corner-ac",
            PredictedLimit::OpenEdgesAc => "open-edges-ac",
            PredictedLimit::OpenSegmentAc => "open-segment-ac",
        };
        f.write_str(s)
    }
}

/// Whether the Busemann area of the inner quadrilateral stays bounded
/// along the degeneration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AreaBehavior {
    Bounded,
    Unbounded,
    /// Both behaviors occur depending on the rates, not just the
    /// qualitative case.
    Depends,
}

impl std::fmt::Display for AreaBehavior {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AreaBehavior::Bounded => "bounded",
            AreaBehavior::Unbounded => "unbounded",
            AreaBehavior::Depends => "depends",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub limit: PredictedLimit,
    pub area: AreaBehavior,
}

/// The case table for degenerations of (Z, W). Combinations whose
/// limits cannot coexist with the stated ratio limit (and the
/// non-degenerate case where both stay positive finite) are rejected.
pub fn classify_degeneration(case: &DegenerationCase) -> Result<Classification> {
    use AreaBehavior::*;
    use LimitSymbol::*;
    use PredictedLimit::*;
    use RatioLimit::*;
    let out = match (case.ratio, case.z, case.w) {
        (ToInfinity, Zero, Zero) => (VertexC, Depends),
        (ToInfinity, Positive, Zero) => (OpenEdgesAc, Unbounded),
        (ToInfinity, Infinite, Zero) => (OpenEdgesAc, Unbounded),
        (ToInfinity, Infinite, Positive) => (OpenEdgesAc, Unbounded),
        (ToInfinity, Infinite, Infinite) => (VertexA, Bounded),
        (ToZero, Zero, Zero) => (VertexC, Depends),
        (ToZero, Zero, Positive) => (OpenSegmentAc, Unbounded),
        (ToZero, Zero, Infinite) => (OpenSegmentAc, Unbounded),
        (ToZero, Positive, Infinite) => (OpenSegmentAc, Unbounded),
        (ToZero, Infinite, Infinite) => (VertexA, Depends),
        _ => {
            return Err(GeomError::Precondition(format!(
                "limits (Z -> {:?}, W -> {:?}) are not a degeneration consistent with Z/W -> {:?}",
                case.z, case.w, case.ratio
            )))
        }
    };
    Ok(Classification {
        limit: out.0,
        area: out.1,
    })
}

// ---------------------------------------------------------------------------
// Stratum geometry in the moduli chart

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (px, py) = (p.0 - a.0, p.1 - a.1);
    let (ex, ey) = (b.0 - a.0, b.1 - a.1);
    let len_sq = ex * ex + ey * ey;
    if len_sq == 0.0 {
        return (px * px + py * py).sqrt();
    }
    let t = ((px * ex + py * ey) / len_sq).clamp(0.0, 1.0);
    let (dx, dy) = (px - t * ex, py - t * ey);
    (dx * dx + dy * dy).sqrt()
}

/// Euclidean distances from a moduli point to the six boundary
/// strata, in a fixed order: the three zero-dimensional strata first.
pub fn stratum_distances(mu: f64, nu: f64) -> [(Stratum, f64); 6] {
    let p = (mu, nu);
    let a = (0.0, 0.0);
    let c = (0.0, 2.0);
    let e = (-1.0, 1.0);
    [
        (Stratum::VertexA, point_segment_distance(p, a, a)),
        (Stratum::VertexC, point_segment_distance(p, c, c)),
        (Stratum::CornerAc, point_segment_distance(p, e, e)),
        (Stratum::EdgeA, point_segment_distance(p, a, e)),
        (Stratum::EdgeC, point_segment_distance(p, e, c)),
        (Stratum::SegmentAc, point_segment_distance(p, a, c)),
    ]
}

/// The stratum nearest to the point, preferring lower-dimensional
/// strata on ties.
pub fn closest_stratum(mu: f64, nu: f64) -> (Stratum, f64) {
    let mut best = (Stratum::VertexA, f64::INFINITY);
    for (s, d) in stratum_distances(mu, nu) {
        if d < best.1 {
            best = (s, d);
        }
    }
    best
}
