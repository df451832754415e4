//! The Hilbert metric on a bounded convex domain and the measure it
//! induces: point distances, the Finsler norm, the Busemann density
//! and adaptive area integration for inscribed polygonal regions.

mod oned;
mod special;

pub use special::{comparison_integral_triangle, dilog, sector_bound};

use std::cell::Cell;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::convex::{cross2, ConvexDomain, ConvexPolygonDomain, Vec2};
use crate::error::{GeomError, Result};

use oned::adaptive_simpson;

/// Knobs for the area integrator and the angular density rule.
///
/// `rel_tol` is the target relative error of an area. `max_depth`
/// bounds the dyadic descent toward the boundary inside each fan
/// line, `corner_depth` the dyadic shells toward region vertices that
/// sit on the boundary. `angular_points` only affects the density of
/// ellipse domains, where the unit ball is integrated angularly.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub angular_points: usize,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub corner_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            angular_points: 64,
            rel_tol: 1e-4,
            max_depth: 48,
            corner_depth: 36,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.angular_points < 16 {
            return Err(GeomError::Configuration(
                "angular_points must be at least 16".into(),
            ));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol <= 0.1) {
            return Err(GeomError::Configuration(
                "rel_tol must lie in (0, 0.1]".into(),
            ));
        }
        if !(4..=58).contains(&self.max_depth) {
            return Err(GeomError::Configuration(
                "max_depth must lie in 4..=58".into(),
            ));
        }
        if !(4..=58).contains(&self.corner_depth) {
            return Err(GeomError::Configuration(
                "corner_depth must lie in 4..=58".into(),
            ));
        }
        Ok(())
    }
}

/// Area integration outcome. `converged` means the error estimate met
/// the requested tolerance; `divergent` is set when the integrand
/// showed the signature of an infinite area (a region edge flush with
/// the boundary, or dyadic shells that refuse to decay), in which case
/// `value` holds the partial sum, or infinity for a flush edge.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AreaResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
    #[serde(skip)]
    pub divergent: bool,
}

/// Hilbert distance between two interior points: half the log of the
/// cross ratio of the pair with the two boundary hits of their chord.
pub fn hilbert_distance(domain: &ConvexDomain, x: &Vec2, y: &Vec2) -> Result<f64> {
    if !domain.contains(x) || !domain.contains(y) {
        return Err(GeomError::Precondition(
            "hilbert distance needs interior points".into(),
        ));
    }
    let s = (y - x).norm();
    if s == 0.0 {
        return Ok(0.0);
    }
    let u = (y - x) / s;
    let (t_minus, t_plus) = domain.arm_lengths(x, &u);
    let num = (t_minus + s) * t_plus;
    let den = t_minus * (t_plus - s).max(f64::MIN_POSITIVE);
    Ok(0.5 * (num / den).ln())
}

/// The infinitesimal Hilbert length of the tangent vector v at x:
/// half the sum of reciprocal chord arms, times |v|.
pub fn finsler_norm(domain: &ConvexDomain, x: &Vec2, v: &Vec2) -> Result<f64> {
    if !domain.contains(x) {
        return Err(GeomError::Precondition(
            "finsler norm needs an interior point".into(),
        ));
    }
    let n = v.norm();
    if n == 0.0 {
        return Ok(0.0);
    }
    let u = v / n;
    let (t_minus, t_plus) = domain.arm_lengths(x, &u);
    Ok(0.5 * (1.0 / t_minus + 1.0 / t_plus) * n)
}

/// Radius of the Finsler unit ball in direction u: the harmonic mean
/// of the two chord arms.
fn ball_radius(domain: &ConvexDomain, x: &Vec2, u: &Vec2) -> f64 {
    let (t_minus, t_plus) = domain.arm_lengths(x, u);
    2.0 * t_minus * t_plus / (t_minus + t_plus)
}

/// For a polygon the unit ball is itself a polygon: the reciprocal
/// radius is piecewise linear in the direction vector, with breaks
/// exactly at directions pointing to domain vertices and their
/// antipodes. The shoelace sum over those break directions is the
/// exact ball area.
fn polygon_ball_area(domain: &ConvexDomain, vertices: &[Vec2], x: &Vec2) -> f64 {
    let mut angles = Vec::with_capacity(2 * vertices.len());
    for v in vertices {
        let w = v - x;
        let a = w.y.atan2(w.x);
        angles.push(a);
        angles.push(if a > 0.0 { a - PI } else { a + PI });
    }
    angles.sort_unstable_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() <= 1e-13);

    let ball_point = |theta: f64| {
        let u = Vec2::new(theta.cos(), theta.sin());
        u * ball_radius(domain, x, &u)
    };
    let mut area = 0.0;
    let mut prev = ball_point(angles[angles.len() - 1]);
    for &theta in &angles {
        let cur = ball_point(theta);
        area += cross2(&prev, &cur);
        prev = cur;
    }
    area / 2.0
}

/// Busemann density at an interior point: pi over the Euclidean area
/// of the Finsler unit ball. Exact for polygon domains; for ellipses
/// the ball area is integrated angularly with a composite Simpson rule
/// over `angular_points` panels.
pub fn busemann_density(domain: &ConvexDomain, x: &Vec2, config: &QuadratureConfig) -> Result<f64> {
    config.validate()?;
    if !domain.contains(x) {
        return Err(GeomError::Precondition(
            "busemann density needs an interior point".into(),
        ));
    }
    match domain {
        ConvexDomain::Polygon(p) => Ok(PI / polygon_ball_area(domain, p.vertices(), x)),
        ConvexDomain::Ellipse(_) => {
            let n = config.angular_points + config.angular_points % 2;
            let h = TAU / n as f64;
            let r_sq = |theta: f64| {
                let u = Vec2::new(theta.cos(), theta.sin());
                let r = ball_radius(domain, x, &u);
                r * r
            };
            let mut sum = 2.0 * r_sq(0.0);
            for k in 1..n {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                sum += w * r_sq(k as f64 * h);
            }
            let ball = sum * h / 3.0 / 2.0;
            Ok(PI / ball)
        }
    }
}

/// Density via the closed-form ball area where one exists. Cheap inner
/// loop for the area integrator; agrees with `busemann_density` (the
/// ellipse case is the analytic limit of the angular rule).
fn density_at(domain: &ConvexDomain, p: &Vec2) -> f64 {
    match domain {
        ConvexDomain::Polygon(d) => PI / polygon_ball_area(domain, d.vertices(), p),
        ConvexDomain::Ellipse(e) => {
            let gap = (1.0 - e.quadratic_form(p)).max(1e-300);
            e.shape().determinant().sqrt() * gap.powf(-1.5)
        }
    }
}

struct BandOut {
    value: f64,
    error: f64,
    evals: u64,
    /// Contribution of the deepest dyadic band when the descent hit
    /// its depth limit while the bands were still material, in the
    /// units of the inner integral. Zero when the descent settled.
    cap_excess: f64,
}

/// Integral over w in (0, 1] of density(e + w (g - e)) (1 - w) dw,
/// where e may sit arbitrarily close to the boundary: the top half is
/// integrated directly and the rest in dyadic bands toward w = 0, each
/// band resolved adaptively, stopping once bands decay below the
/// tolerance share.
fn toward_boundary(
    domain: &ConvexDomain,
    e: &Vec2,
    g: &Vec2,
    tol: f64,
    max_bands: u32,
) -> BandOut {
    let seg = g - e;
    let mut f = |w: f64| density_at(domain, &(e + seg * w)) * (1.0 - w);
    let mut out = BandOut {
        value: 0.0,
        error: 0.0,
        evals: 0,
        cap_excess: 0.0,
    };
    let q = adaptive_simpson(&mut f, 0.5, 1.0, tol / 2.0, 20);
    out.value += q.value;
    out.error += q.error;
    out.evals += q.evals;

    let band_tol = tol / (2.0 * max_bands as f64);
    let mut prev: Option<f64> = None;
    for level in 1..=max_bands {
        let hi = 2f64.powi(-(level as i32));
        let q = adaptive_simpson(&mut f, hi / 2.0, hi, band_tol, 16);
        out.value += q.value;
        out.error += q.error;
        out.evals += q.evals;
        let c = q.value.abs();
        let decaying = prev.is_some_and(|p| c < 0.75 * p);
        if c <= band_tol && decaying {
            let rho = prev.map_or(0.5, |p| (c / p).clamp(0.0, 0.75));
            out.error += c * rho / (1.0 - rho);
            return out;
        }
        prev = Some(c);
    }
    // Depth exhausted. A base point with a certifiable margin bounds
    // the remainder: the integrand grows at most inversely with the
    // distance to the boundary, so the bands stay near the last one
    // only until the band scale reaches the margin and decay after
    // that. A base point too close to certify leaves the excess for
    // the divergence verdict instead.
    let c_last = prev.unwrap_or(0.0);
    let seg_len = seg.norm();
    let margin = domain.interior_margin(e);
    if margin > f64::EPSILON * seg_len {
        let deepest = 2f64.powi(-(max_bands as i32 + 1)) * seg_len;
        let levels_left = (1.0 + deepest / margin).log2();
        out.error += c_last * (levels_left + 2.0);
    } else {
        out.cap_excess = c_last;
    }
    out
}

struct EdgeOut {
    value: f64,
    error: f64,
    evals: u64,
    /// Equal-weight estimate of the integral of inner cap excesses
    /// over this edge, already carrying the fan Jacobian.
    cap_mass: f64,
    /// Projected remaining mass when the vertex shells plateaued
    /// instead of decaying; nonzero means likely divergence.
    plateau_mass: f64,
}

/// Integrates the density over the fan triangle (g, v1, v2) of the
/// region, as the double integral over the edge parameter t and the
/// inward parameter w. Endpoints whose vertex touches the boundary get
/// dyadic shells in t; shells that plateau are reported as projected
/// divergent mass rather than being silently truncated.
fn edge_area(
    domain: &ConvexDomain,
    v1: &Vec2,
    v2: &Vec2,
    g: &Vec2,
    edge_tol: f64,
    btol: f64,
    config: &QuadratureConfig,
) -> EdgeOut {
    let j0 = cross2(&(v2 - v1), &(v1 - g)).abs();
    let mut out = EdgeOut {
        value: 0.0,
        error: 0.0,
        evals: 0,
        cap_mass: 0.0,
        plateau_mass: 0.0,
    };
    if j0 <= f64::MIN_POSITIVE {
        return out;
    }

    // Per-call inner diagnostics, shared between the integrand closure
    // and the span bookkeeping below. The descent tolerance is set per
    // span: the inner mean error and band-cap mass enter the edge
    // integral with the span's t-measure, so a narrow shell tolerates
    // a proportionally rougher descent.
    let inner_err = Cell::new(0.0f64);
    let cap = Cell::new(0.0f64);
    let calls = Cell::new(0u64);
    let inner_evals = Cell::new(0u64);
    let call_tol = Cell::new(edge_tol / (2.0 * j0));
    let mut ft = |t: f64| {
        let e = v1 + (v2 - v1) * t;
        let band = toward_boundary(domain, &e, g, call_tol.get(), config.max_depth);
        inner_err.set(inner_err.get() + band.error);
        cap.set(cap.get() + band.cap_excess);
        calls.set(calls.get() + 1);
        inner_evals.set(inner_evals.get() + band.evals);
        j0 * band.value
    };

    let near1 = domain.interior_margin(v1) <= btol;
    let near2 = domain.interior_margin(v2) <= btol;
    let lo = if near1 { 0.25 } else { 0.0 };
    let hi = if near2 { 0.75 } else { 1.0 };
    let before = (inner_err.get(), cap.get(), calls.get());
    call_tol.set(edge_tol / (2.0 * j0 * (hi - lo)));
    let q = adaptive_simpson(&mut ft, lo, hi, edge_tol / 2.0, 26);
    out.value += q.value;
    out.error += q.error;
    let dcalls = (calls.get() - before.2).max(1) as f64;
    out.error += j0 * (hi - lo) * (inner_err.get() - before.0) / dcalls;
    out.cap_mass += j0 * (hi - lo) * (cap.get() - before.1) / dcalls;

    let shell_tol = edge_tol / (2.0 * config.corner_depth as f64);
    for side in 0..2 {
        if (side == 0 && !near1) || (side == 1 && !near2) {
            continue;
        }
        let mut prev: Option<f64> = None;
        let mut ratios = Vec::new();
        let mut settled = false;
        for level in 2..=(config.corner_depth + 1) {
            let shell_hi = 2f64.powi(-(level as i32));
            let shell_lo = shell_hi / 2.0;
            let (a, b) = if side == 0 {
                (shell_lo, shell_hi)
            } else {
                (1.0 - shell_hi, 1.0 - shell_lo)
            };
            let before = (inner_err.get(), cap.get(), calls.get());
            call_tol.set(shell_tol / (j0 * (b - a)));
            let q = adaptive_simpson(&mut ft, a, b, shell_tol, 18);
            out.value += q.value;
            out.error += q.error;
            let dcalls = (calls.get() - before.2).max(1) as f64;
            out.error += j0 * (b - a) * (inner_err.get() - before.0) / dcalls;
            out.cap_mass += j0 * (b - a) * (cap.get() - before.1) / dcalls;
            let c = q.value.abs();
            if let Some(p) = prev {
                if p > 0.0 {
                    ratios.push(c / p);
                }
            }
            let decaying = prev.is_some_and(|p| c < 0.75 * p);
            if c <= shell_tol && decaying {
                let rho = prev.map_or(0.5, |p| (c / p).clamp(0.0, 0.75));
                out.error += c * rho / (1.0 - rho);
                settled = true;
                break;
            }
            prev = Some(c);
        }
        if !settled {
            let c_last = prev.unwrap_or(0.0);
            let plateau = ratios.len() >= 3 && ratios.iter().rev().take(3).all(|r| *r >= 0.85);
            if plateau {
                out.plateau_mass += c_last * 64.0;
            } else {
                let rho = ratios.last().copied().unwrap_or(0.5).clamp(0.0, 0.95);
                out.error += c_last * rho / (1.0 - rho);
            }
        }
    }

    out.evals = inner_evals.get();
    out
}

/// Busemann area of a convex polygonal region inscribed in the domain.
///
/// Vertices may lie on the boundary (that is the generic inscribed
/// case and the integrand is still integrable there as long as the
/// contact is transversal); a vertex strictly outside is an error. An
/// edge flush with the boundary makes the area infinite, reported as a
/// divergent result rather than an error, and the same signal fires
/// when the shell sums toward a boundary vertex refuse to decay.
pub fn region_area(
    domain: &ConvexDomain,
    region: &ConvexPolygonDomain,
    config: &QuadratureConfig,
) -> Result<AreaResult> {
    config.validate()?;
    let scale = domain.scale();
    let closure_tol = 1e-9 * scale;
    let touch_tol = 1e-14 * scale;
    let verts = region.vertices();
    let n = verts.len();

    for v in verts {
        if domain.interior_margin(v) < -closure_tol {
            return Err(GeomError::Precondition(
                "region vertex lies outside the domain".into(),
            ));
        }
    }
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        // A macroscopic edge flush with the boundary: infinite area.
        // Edges below the length cutoff cannot have their margin
        // certified in floating point and are left to the integrator.
        if (b - a).norm() >= 1e-9 * scale
            && domain.interior_margin(&((a + b) / 2.0)) <= touch_tol
        {
            return Ok(AreaResult {
                value: f64::INFINITY,
                error_estimate: f64::INFINITY,
                evaluations: 0,
                converged: false,
                divergent: true,
            });
        }
    }

    let g = region.centroid();
    let mut evals = 0u64;

    // A cheap first pass to give the relative tolerance an absolute
    // scale; underestimates only cost extra refinement.
    let mut rough_total = 0.0;
    for i in 0..n {
        let a = verts[i];
        let b = verts[(i + 1) % n];
        let j0 = cross2(&(b - a), &(a - g)).abs();
        let probe = (g + (a + b) / 2.0) / 2.0;
        rough_total += 0.5 * j0 * density_at(domain, &probe);
        evals += 1;
    }
    let abs_tol = config.rel_tol * rough_total.max(1e-9);
    let edge_tol = abs_tol / n as f64;
    let btol = closure_tol;

    let mut value = 0.0;
    let mut error = 0.0;
    let mut cap_mass = 0.0;
    let mut plateau_mass = 0.0;
    for i in 0..n {
        let out = edge_area(
            domain,
            &verts[i],
            &verts[(i + 1) % n],
            &g,
            edge_tol,
            btol,
            config,
        );
        value += out.value;
        error += out.error;
        evals += out.evals;
        cap_mass += out.cap_mass;
        plateau_mass += out.plateau_mass;
    }

    // Depth-capped inner descents happen where the true clearance is
    // below what floating point can certify, so the capped bands are
    // projected pessimistically over 64 more octaves.  Only a projection
    // claiming a material fraction of the area itself reads as
    // divergence; a small one is unresolved mass and is charged to the
    // error estimate instead.
    let cap_projection = 64.0 * cap_mass;
    let divergent = plateau_mass > abs_tol || cap_projection > 0.05 * value.abs();
    if std::env::var_os("HILBERT_QUAD_TRACE").is_some() {
        eprintln!(
            "trace: value {value} error {error} abs_tol {abs_tol} cap_mass {cap_mass} plateau_mass {plateau_mass} evals {evals}"
        );
    }
    if divergent {
        return Ok(AreaResult {
            value,
            error_estimate: f64::INFINITY,
            evaluations: evals,
            converged: false,
            divergent: true,
        });
    }
    error += cap_projection;
    let converged = error <= 5.0 * config.rel_tol * value.abs().max(f64::MIN_POSITIVE);
    Ok(AreaResult {
        value,
        error_estimate: error,
        evaluations: evals,
        converged,
        divergent: false,
    })
}
