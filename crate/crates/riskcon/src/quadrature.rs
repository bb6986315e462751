//! Adaptive composite quadrature used by the ground-truth risk oracles.

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tol`. Recursion depth is capped; the cap is generous enough that the
/// integrands used here (smooth quantile/CDF compositions) converge first.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 50)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        left + right + err / 15.0
    } else {
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomial_exactly() {
        let v = adaptive_simpson(&|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-10);
        assert!((v - 0.0).abs() < 1e-10);
    }

    #[test]
    fn integrates_exponential() {
        let v = adaptive_simpson(&f64::exp, 0.0, 1.0, 1e-10);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-9);
    }
}
