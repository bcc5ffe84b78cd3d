//! The bias scale `R(x) = √x/log x + ∫₂ˣ du / (√u log²u)`.

use super::CounterError;

/// Relative tolerance requested from the quadrature.
pub const R_TOLERANCE: f64 = 1e-12;

/// `R(x)` together with an estimate of the quadrature error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RValue {
    pub value: f64,
    pub error_estimate: f64,
}

pub fn r_norm(x: f64) -> Result<f64, CounterError> {
    r_norm_with_error(x).map(|r| r.value)
}

pub fn r_norm_with_error(x: f64) -> Result<RValue, CounterError> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(CounterError::RDomain(x));
    }
    let head = x.sqrt() / x.ln();
    // u = e^v turns the integrand into e^{v/2} / v²
    let g = |v: f64| (0.5 * v).exp() / (v * v);
    let (a, b) = (2f64.ln(), x.ln());
    if b <= a {
        return Ok(RValue { value: head, error_estimate: 0.0 });
    }
    let (integral, err) = adaptive_simpson(&g, a, b, R_TOLERANCE);
    Ok(RValue {
        value: head + integral,
        error_estimate: err,
    })
}

/// Adaptive Simpson with a relative stopping rule; returns (integral, error bound estimate).
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> (f64, f64) {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let tol = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    let mut err = 0.0;
    let v = simpson_step(f, a, b, fa, fm, fb, whole, tol, 50, &mut err);
    (v, err)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    err: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        *err += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_two_is_head_term() {
        let r = r_norm(2.0).unwrap();
        assert_eq!(r, 2f64.sqrt() / 2f64.ln());
    }

    #[test]
    fn domain() {
        assert!(r_norm(1.99).is_err());
        assert!(r_norm(f64::NAN).is_err());
    }

    #[test]
    fn simpson_on_polynomial_is_exact() {
        let (v, _) = adaptive_simpson(&|x: f64| x * x * x, 0.0, 2.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn increasing_on_grid() {
        let mut prev = 0.0;
        let mut x = 2.0;
        while x < 1e10 {
            let r = r_norm(x).unwrap();
            assert!(r > prev, "not increasing at {x}");
            prev = r;
            x *= 1.3;
        }
    }
}
