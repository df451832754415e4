//! One dimensional adaptive Simpson quadrature, the workhorse under
//! the area integrator.

/// Outcome of a 1-d integration. `capped` means some subinterval hit
/// the depth limit before meeting its tolerance; the reported error
/// then undercounts whatever the integrand was still doing there.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Quad1 {
    pub value: f64,
    pub error: f64,
    pub evals: u64,
    pub capped: bool,
}

fn simpson(a: f64, fa: f64, fm: f64, b: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn descend<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    out: &mut Quad1,
) {
    let lm = (a + m) / 2.0;
    let rm = (m + b) / 2.0;
    let flm = f(lm);
    let frm = f(rm);
    out.evals += 2;
    let left = simpson(a, fa, flm, m, fm);
    let right = simpson(m, fm, frm, b, fb);
    let diff = left + right - whole;
    if diff.abs() <= 15.0 * tol || depth == 0 {
        out.value += left + right + diff / 15.0;
        out.error += diff.abs() / 15.0;
        if depth == 0 && diff.abs() > 15.0 * tol {
            out.capped = true;
        }
        return;
    }
    descend(f, a, fa, lm, flm, m, fm, left, tol / 2.0, depth - 1, out);
    descend(f, m, fm, rm, frm, b, fb, right, tol / 2.0, depth - 1, out);
}

/// Integrates f over [a, b] to absolute tolerance `tol`, refining at
/// most `max_depth` times. The integrand must return finite values on
/// the open interval; non-finite samples are treated as zero so a
/// stray boundary evaluation cannot poison the whole sum.
pub(crate) fn adaptive_simpson<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Quad1 {
    let mut g = move |x: f64| {
        let y = f(x);
        if y.is_finite() {
            y
        } else {
            0.0
        }
    };
    let mut out = Quad1 {
        value: 0.0,
        error: 0.0,
        evals: 3,
        capped: false,
    };
    if a == b {
        out.evals = 0;
        return out;
    }
    let m = (a + b) / 2.0;
    let fa = g(a);
    let fm = g(m);
    let fb = g(b);
    let whole = simpson(a, fa, fm, b, fb);
    descend(&mut g, a, fa, m, fm, b, fb, whole, tol, max_depth, &mut out);
    out
}
