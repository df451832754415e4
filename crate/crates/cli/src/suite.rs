//! Randomized invariant suite behind the `invariants` subcommand.
//!
//! Each check draws its samples from one ChaCha stream seeded from
//! the run seed, so a failure report is reproducible from the seed
//! alone and `render` output is byte-identical across runs.

use inscribed::fock_goncharov::{
    central_q_from_d, q_graph, triangle_chart_flags, triangle_invariant_product,
};
use inscribed::projective::standard_quadrilateral_targets;
use inscribed::{
    build_configuration, central_q, cross_ratio_collinear, d_from_wz, map_four_points,
    reflect_params, triple_ratio, wz_from_d, y_invariant, ConvexDomain, ConvexPolygonDomain,
    EllipseDomain, ProjectivePoint, QuadParams, TwistBulge, Vec2,
};
use nalgebra::Matrix2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deliberate defect injected by tests to prove a check can fail.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Scales the closed-form Y value by 1 + 2e-7, well past the
    /// comparison tolerance of the oracle check.
    PerturbYInvariant,
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub samples: usize,
    pub passed: bool,
    /// Worst observed defect as a fraction of its allowance, plus a
    /// witness when the check failed.
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl InvariantReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!("invariant suite, seed {}\n", self.seed);
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {} ({} samples): {}\n",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.samples,
                c.detail
            ));
        }
        out.push_str(if self.all_passed() {
            "all checks passed\n"
        } else {
            "FAILURES PRESENT\n"
        });
        out
    }
}

/// Accumulates defect-over-allowance ratios and a witness for the
/// worst one.
struct Worst {
    ratio: f64,
    witness: String,
}

impl Worst {
    fn new() -> Self {
        Self {
            ratio: 0.0,
            witness: String::new(),
        }
    }

    fn observe(&mut self, defect: f64, allowance: f64, witness: impl FnOnce() -> String) {
        let ratio = if defect == 0.0 {
            0.0
        } else {
            defect / allowance
        };
        if ratio > self.ratio || !ratio.is_finite() {
            self.ratio = ratio;
            self.witness = witness();
        }
        if !ratio.is_finite() {
            self.ratio = f64::INFINITY;
        }
    }

    fn finish(self, name: &'static str, samples: usize) -> CheckResult {
        let passed = self.ratio <= 1.0;
        let detail = if passed {
            format!("worst defect at {:.3e} of allowance", self.ratio)
        } else {
            format!(
                "defect {:.3e} times allowance at {}",
                self.ratio, self.witness
            )
        };
        CheckResult {
            name,
            samples,
            passed,
            detail,
        }
    }
}

fn fail(name: &'static str, samples: usize, detail: String) -> CheckResult {
    CheckResult {
        name,
        samples,
        passed: false,
        detail,
    }
}

const EPS: f64 = f64::EPSILON;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi).exp()
}

/// (W, Z) -> (mu, nu) -> (W, Z) with a conditioning-aware allowance:
/// recovering W loses accuracy when F dominates it and recovering Z
/// when D sits near the secant through A.
fn check_roundtrip(rng: &mut ChaCha8Rng) -> CheckResult {
    const N: usize = 1000;
    let mut worst = Worst::new();
    for _ in 0..N {
        let w = log_uniform(rng, -13.8, 13.8);
        let z = log_uniform(rng, -13.8, 13.8);
        let Ok((mu, nu)) = d_from_wz(w, z) else {
            return fail("wz-chart roundtrip", N, format!("chart failed at ({w}, {z})"));
        };
        let Ok((w2, z2)) = wz_from_d(mu, nu) else {
            return fail(
                "wz-chart roundtrip",
                N,
                format!("inverse failed at ({mu}, {nu})"),
            );
        };
        let v = 1.0 / z;
        let cond_w = (w + v + 1.0) / w;
        let cond_z = (1.0 + 2.0 * v) / (2.0 * v);
        let tol_w = (50.0 * EPS * cond_w).max(1e-12);
        let tol_z = (50.0 * EPS * cond_z).max(1e-12);
        worst.observe((w2 - w).abs() / w, tol_w, || format!("W at ({w}, {z})"));
        worst.observe((z2 - z).abs() / z, tol_z, || format!("Z at ({w}, {z})"));
    }
    worst.finish("wz-chart roundtrip", N)
}

/// Draws parameters until the configuration builds; the closed-form Y
/// of the chart data must match the triple ratio of the realized
/// flags.
fn check_y_oracle(rng: &mut ChaCha8Rng, fault: Option<Fault>) -> CheckResult {
    const N: usize = 1000;
    const CAP: usize = 100_000;
    let mut worst = Worst::new();
    let mut attempts = 0usize;
    let mut kept = 0usize;
    while kept < N {
        attempts += 1;
        if attempts > CAP {
            return fail(
                "y-invariant oracle",
                N,
                format!("sampler starved after {CAP} attempts ({kept} kept)"),
            );
        }
        let params = QuadParams {
            w: log_uniform(rng, -2.5, 2.5),
            z: log_uniform(rng, -2.5, 2.5),
            t: log_uniform(rng, -1.5, 1.5),
            y: log_uniform(rng, -1.5, 1.5),
        };
        let Ok(cfg) = build_configuration(&params) else {
            continue;
        };
        kept += 1;
        let mut formula = match y_invariant(cfg.mu, cfg.nu, cfg.slope_d) {
            Ok(y) => y,
            Err(e) => return fail("y-invariant oracle", N, format!("formula failed: {e}")),
        };
        if fault == Some(Fault::PerturbYInvariant) {
            formula *= 1.0 + 2e-7;
        }
        let realized = match triple_ratio(&cfg.flags[0], &cfg.flags[2], &cfg.flags[3]) {
            Ok(y) => y,
            Err(e) => return fail("y-invariant oracle", N, format!("triple ratio failed: {e}")),
        };
        worst.observe(
            (formula - realized).abs() / realized.abs(),
            1e-10,
            || format!("(W, Z, T, Y) = ({}, {}, {}, {})", params.w, params.z, params.t, params.y),
        );
    }
    worst.finish("y-invariant oracle", N)
}

/// The label swap is an involution on parameters and acts on the
/// chart as (mu, nu) -> (mu, 2 - nu).
fn check_reflection(rng: &mut ChaCha8Rng) -> CheckResult {
    const N: usize = 1000;
    let mut worst = Worst::new();
    for _ in 0..N {
        let p = QuadParams {
            w: log_uniform(rng, -6.0, 6.0),
            z: log_uniform(rng, -6.0, 6.0),
            t: log_uniform(rng, -3.0, 3.0),
            y: log_uniform(rng, -3.0, 3.0),
        };
        let r = reflect_params(&p);
        let rr = reflect_params(&r);
        for (a, b) in [(rr.w, p.w), (rr.z, p.z), (rr.t, p.t), (rr.y, p.y)] {
            worst.observe((a - b).abs() / b, 1e-14, || {
                format!("involution at (W, Z) = ({}, {})", p.w, p.z)
            });
        }
        let (mu, nu) = match d_from_wz(p.w, p.z) {
            Ok(d) => d,
            Err(e) => return fail("reflection involution", N, format!("chart failed: {e}")),
        };
        let (mu_r, nu_r) = match d_from_wz(r.w, r.z) {
            Ok(d) => d,
            Err(e) => return fail("reflection involution", N, format!("chart failed: {e}")),
        };
        worst.observe((mu_r - mu).abs() / mu.abs(), 1e-11, || {
            format!("mu at (W, Z) = ({}, {})", p.w, p.z)
        });
        worst.observe((nu_r - (2.0 - nu)).abs() / nu_r.abs(), 1e-11, || {
            format!("nu at (W, Z) = ({}, {})", p.w, p.z)
        });
    }
    worst.finish("reflection involution", N)
}

/// The secants from A and C to D have slopes -1 - 2/Z and 1 + 2W.
fn check_secant_slopes(rng: &mut ChaCha8Rng) -> CheckResult {
    const N: usize = 1000;
    let mut worst = Worst::new();
    for _ in 0..N {
        let w = log_uniform(rng, -10.0, 10.0);
        let z = log_uniform(rng, -10.0, 10.0);
        let (mu, nu) = match d_from_wz(w, z) {
            Ok(d) => d,
            Err(e) => return fail("secant slopes", N, format!("chart failed: {e}")),
        };
        let from_a = nu / mu;
        let from_c = (nu - 2.0) / mu;
        let slope_a = -1.0 - 2.0 / z;
        let slope_c = 1.0 + 2.0 * w;
        worst.observe(
            (from_a - slope_a).abs(),
            1e-10 * slope_a.abs().max(1.0),
            || format!("secant from A at (W, Z) = ({w}, {z})"),
        );
        worst.observe(
            (from_c - slope_c).abs(),
            1e-10 * slope_c.abs().max(1.0),
            || format!("secant from C at (W, Z) = ({w}, {z})"),
        );
    }
    worst.finish("secant slopes", N)
}

/// The central summary agrees whether computed from (W, Z), from the
/// chart position of D, or as half the graph summary through D.
fn check_central_routes(rng: &mut ChaCha8Rng) -> CheckResult {
    const N: usize = 1000;
    let mut worst = Worst::new();
    for _ in 0..N {
        let w = log_uniform(rng, -6.0, 6.0);
        let z = log_uniform(rng, -6.0, 6.0);
        let direct = match central_q(w, z) {
            Ok(q) => q,
            Err(e) => return fail("central quantity routes", N, format!("direct failed: {e}")),
        };
        let (mu, nu) = match d_from_wz(w, z) {
            Ok(d) => d,
            Err(e) => return fail("central quantity routes", N, format!("chart failed: {e}")),
        };
        let via_chart = match central_q_from_d(mu, nu) {
            Ok(q) => q,
            Err(e) => return fail("central quantity routes", N, format!("chart route failed: {e}")),
        };
        let via_graph = match q_graph(|_| nu, -mu) {
            Ok(g) => g / 2.0,
            Err(e) => return fail("central quantity routes", N, format!("graph route failed: {e}")),
        };
        let scale = direct.abs().max(1e-300);
        worst.observe((via_chart - direct).abs() / scale, 1e-11, || {
            format!("chart route at (W, Z) = ({w}, {z})")
        });
        worst.observe((via_graph - direct).abs() / scale, 1e-11, || {
            format!("graph route at (W, Z) = ({w}, {z})")
        });
    }
    worst.finish("central quantity routes", N)
}

/// `between` inverts `apply`; a pure twist fixes W/Z and a pure bulge
/// fixes WZ.
fn check_twist_bulge(rng: &mut ChaCha8Rng) -> CheckResult {
    const N: usize = 1000;
    let mut worst = Worst::new();
    for _ in 0..N {
        let from = (log_uniform(rng, -6.0, 6.0), log_uniform(rng, -6.0, 6.0));
        let to = (log_uniform(rng, -6.0, 6.0), log_uniform(rng, -6.0, 6.0));
        let tb = match TwistBulge::between(from, to) {
            Ok(tb) => tb,
            Err(e) => return fail("twist-bulge flows", N, format!("between failed: {e}")),
        };
        let (w2, z2) = tb.apply(from.0, from.1);
        worst.observe((w2 - to.0).abs() / to.0, 1e-12, || {
            format!("roundtrip W from ({}, {})", from.0, from.1)
        });
        worst.observe((z2 - to.1).abs() / to.1, 1e-12, || {
            format!("roundtrip Z from ({}, {})", from.0, from.1)
        });

        let twist = TwistBulge { u: tb.u, v: 0.0 };
        let (tw, tz) = twist.apply(from.0, from.1);
        worst.observe(
            (tw / tz - from.0 / from.1).abs() / (from.0 / from.1),
            1e-14,
            || format!("twist ratio from ({}, {})", from.0, from.1),
        );
        let bulge = TwistBulge { u: 0.0, v: tb.v };
        let (bw, bz) = bulge.apply(from.0, from.1);
        worst.observe(
            (bw * bz - from.0 * from.1).abs() / (from.0 * from.1),
            1e-14,
            || format!("bulge product from ({}, {})", from.0, from.1),
        );
    }
    worst.finish("twist-bulge flows", N)
}

/// Along W = Z^(1+eps) the central summary is at most
/// ((1+eps) ln Z + ln 3)/Z, so it decays once Z is large.
fn check_central_decay(_rng: &mut ChaCha8Rng) -> CheckResult {
    let mut worst = Worst::new();
    let mut samples = 0usize;
    for eps in [0.0, 0.25, 0.5, 1.0] {
        for j in 1..=20 {
            samples += 1;
            let z = (j as f64).exp();
            let w = z.powf(1.0 + eps);
            let q = match central_q(w, z) {
                Ok(q) => q,
                Err(e) => {
                    return fail("central quantity decay", samples, format!("summary failed: {e}"))
                }
            };
            let bound = ((1.0 + eps) * z.ln() + 3f64.ln()) / z;
            worst.observe((q - bound).max(0.0), 1e-15 * bound, || {
                format!("eps = {eps}, ln Z = {j}")
            });
        }
    }
    worst.finish("central quantity decay", samples)
}

fn random_point(rng: &mut ChaCha8Rng, spread: f64) -> ProjectivePoint {
    ProjectivePoint::from_affine(
        rng.gen_range(-spread..spread),
        rng.gen_range(-spread..spread),
    )
}

/// Cross ratios of collinear quadruples and triple ratios of flag
/// triples survive random projective maps.
fn check_projective_invariance(rng: &mut ChaCha8Rng) -> CheckResult {
    const N: usize = 200;
    const CAP: usize = 100_000;
    let mut worst = Worst::new();
    let mut attempts = 0usize;
    let mut kept = 0usize;
    let base = standard_quadrilateral_targets();
    while kept < N {
        attempts += 1;
        if attempts > CAP {
            return fail(
                "projective invariance of ratios",
                N,
                format!("sampler starved after {CAP} attempts ({kept} kept)"),
            );
        }
        // A random map near the identity: push the standard frame by
        // bounded noise and interpolate.
        let dst: Vec<ProjectivePoint> = base
            .iter()
            .map(|p| {
                let (x, y) = p.to_affine().unwrap();
                ProjectivePoint::from_affine(
                    x + rng.gen_range(-0.2..0.2),
                    y + rng.gen_range(-0.2..0.2),
                )
            })
            .collect();
        let Ok(map) = map_four_points(&base, &[dst[0], dst[1], dst[2], dst[3]]) else {
            continue;
        };

        // Four distinct points on a random line through two anchors.
        let a = random_point(rng, 2.0);
        let b = random_point(rng, 2.0);
        let ts: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.5..1.5)).collect();
        if ts
            .iter()
            .enumerate()
            .any(|(i, t)| ts[..i].iter().any(|s| (s - t).abs() < 1e-3))
        {
            continue;
        }
        let line_pt = |t: f64| {
            let (ax, ay) = a.to_affine().unwrap();
            let (bx, by) = b.to_affine().unwrap();
            ProjectivePoint::from_affine(ax + t * (bx - ax), ay + t * (by - ay))
        };
        let pts: Vec<ProjectivePoint> = ts.iter().map(|&t| line_pt(t)).collect();
        let Ok(before) = cross_ratio_collinear(&pts[0], &pts[1], &pts[2], &pts[3]) else {
            continue;
        };
        if !before.is_finite() || before.abs() < 1e-3 || before.abs() > 1e3 {
            continue;
        }
        let mapped: Vec<ProjectivePoint> = pts.iter().map(|p| map.apply_point(p)).collect();
        let Ok(after) = cross_ratio_collinear(&mapped[0], &mapped[1], &mapped[2], &mapped[3])
        else {
            continue;
        };

        // A flag triple from the triangle chart, pushed by the same map.
        let (ta, tb, tc) = (
            rng.gen_range(0.05..0.95),
            rng.gen_range(0.05..0.95),
            rng.gen_range(0.05..0.95),
        );
        let flags = match triangle_chart_flags(ta, tb, tc) {
            Ok(f) => f,
            Err(e) => {
                return fail(
                    "projective invariance of ratios",
                    N,
                    format!("chart flags failed: {e}"),
                )
            }
        };
        let (Ok(t_before), Ok(t_after)) = (
            triple_ratio(&flags[0], &flags[1], &flags[2]),
            triple_ratio(
                &map.apply_flag(&flags[0]),
                &map.apply_flag(&flags[1]),
                &map.apply_flag(&flags[2]),
            ),
        ) else {
            continue;
        };

        kept += 1;
        worst.observe((after - before).abs() / before.abs(), 1e-6, || {
            format!("cross ratio {before}")
        });
        worst.observe((t_after - t_before).abs() / t_before.abs(), 1e-6, || {
            format!("triple ratio at ({ta}, {tb}, {tc})")
        });
    }
    worst.finish("projective invariance of ratios", N)
}

/// Chords land on the boundary, straddle the base point, and reverse
/// with the direction.
fn check_chords(rng: &mut ChaCha8Rng) -> CheckResult {
    const N: usize = 200;
    let pentagon: ConvexDomain = ConvexPolygonDomain::from_xy([
        (2.2, 0.0),
        (0.6, 1.9),
        (-1.9, 1.1),
        (-1.7, -1.3),
        (0.8, -2.0),
    ])
    .unwrap()
    .into();
    // Mildly anisotropic and rotated, so the two endpoint solves see
    // different curvatures.
    let ellipse: ConvexDomain = EllipseDomain::new(
        Vec2::new(0.3, -0.2),
        Matrix2::new(0.9, 0.25, 0.25, 0.5),
    )
    .unwrap()
    .into();
    let mut worst = Worst::new();
    for i in 0..N {
        let domain = if i % 2 == 0 { &pentagon } else { &ellipse };
        let scale = domain.scale();
        let x = loop {
            let p = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            if domain.interior_margin(&p) > 0.05 * scale {
                break p;
            }
        };
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let v = Vec2::new(angle.cos(), angle.sin());
        let chord = match domain.chord(&x, &v) {
            Ok(c) => c,
            Err(e) => return fail("chord endpoints", N, format!("chord failed: {e}")),
        };
        let tol = 1e-9 * scale;
        worst.observe(domain.interior_margin(&chord.p).abs(), tol, || {
            format!("negative endpoint off boundary at ({}, {})", x.x, x.y)
        });
        worst.observe(domain.interior_margin(&chord.q).abs(), tol, || {
            format!("positive endpoint off boundary at ({}, {})", x.x, x.y)
        });
        let along_p = (chord.p - x).dot(&v);
        let along_q = (chord.q - x).dot(&v);
        if !(along_p < 0.0 && along_q > 0.0) {
            return fail(
                "chord endpoints",
                N,
                format!("endpoints do not straddle the base point at ({}, {})", x.x, x.y),
            );
        }
        let reversed = match domain.chord(&x, &(-v)) {
            Ok(c) => c,
            Err(e) => return fail("chord endpoints", N, format!("reversed chord failed: {e}")),
        };
        worst.observe((reversed.p - chord.q).norm(), tol, || {
            format!("reversal mismatch at ({}, {})", x.x, x.y)
        });
        worst.observe((reversed.q - chord.p).norm(), tol, || {
            format!("reversal mismatch at ({}, {})", x.x, x.y)
        });
    }
    worst.finish("chord endpoints", N)
}

/// The closed-form product formula matches the triple ratio of the
/// realized chart flags.
fn check_triangle_product(rng: &mut ChaCha8Rng) -> CheckResult {
    const N: usize = 500;
    let mut worst = Worst::new();
    for _ in 0..N {
        let (ta, tb, tc) = (
            rng.gen_range(0.02..0.98),
            rng.gen_range(0.02..0.98),
            rng.gen_range(0.02..0.98),
        );
        let flags = match triangle_chart_flags(ta, tb, tc) {
            Ok(f) => f,
            Err(e) => return fail("triangle chart product", N, format!("flags failed: {e}")),
        };
        let realized = match triple_ratio(&flags[0], &flags[1], &flags[2]) {
            Ok(t) => t,
            Err(e) => {
                return fail("triangle chart product", N, format!("triple ratio failed: {e}"))
            }
        };
        let formula = triangle_invariant_product(ta, tb, tc);
        worst.observe((realized - formula).abs() / formula, 1e-9, || {
            format!("fractions ({ta}, {tb}, {tc})")
        });
    }
    worst.finish("triangle chart product", N)
}

pub fn run_invariant_suite(seed: u64) -> InvariantReport {
    run_invariant_suite_with_fault(seed, None)
}

#[doc(hidden)]
pub fn run_invariant_suite_with_fault(seed: u64, fault: Option<Fault>) -> InvariantReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = vec![
        check_roundtrip(&mut rng),
        check_y_oracle(&mut rng, fault),
        check_reflection(&mut rng),
        check_secant_slopes(&mut rng),
        check_central_routes(&mut rng),
        check_twist_bulge(&mut rng),
        check_central_decay(&mut rng),
        check_projective_invariance(&mut rng),
        check_chords(&mut rng),
        check_triangle_product(&mut rng),
    ];
    InvariantReport { seed, checks }
}
