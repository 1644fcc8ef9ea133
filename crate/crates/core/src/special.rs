//! Bessel functions of the first kind.

use crate::Real;

/// Below this argument the ascending series is used instead of Miller's
/// downward recurrence.
const SERIES_CUTOFF: f64 = 0.5;

/// Rescaling threshold for the downward recurrence.
const RESCALE_ABOVE: f64 = 1.0e10;

/// Returns `[J_0(x), J_1(x), ..., J_{n_max}(x)]` for `x >= 0`.
///
/// Uses Miller's downward recurrence normalized with
/// `J_0 + 2 (J_2 + J_4 + ...) = 1`; for `x < 0.5` the power series is summed
/// directly. Negative `x` is mapped through `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_j<T: Real>(n_max: usize, x: T) -> Vec<T> {
    if x < T::zero() {
        let mut out = bessel_j(n_max, -x);
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
        return out;
    }
    if x == T::zero() {
        let mut out = vec![T::zero(); n_max + 1];
        out[0] = T::one();
        return out;
    }
    if x < T::lit(SERIES_CUTOFF) {
        return (0..=n_max).map(|n| series(n, x)).collect();
    }
    miller(n_max, x)
}

/// Single order convenience wrapper.
pub fn bessel_jn<T: Real>(n: usize, x: T) -> T {
    bessel_j(n, x)[n]
}

fn series<T: Real>(n: usize, x: T) -> T {
    let half = x / T::lit(2.0);
    // (x/2)^n / n!
    let mut term = T::one();
    for k in 1..=n {
        term *= half / T::from_usize_lossy(k);
    }
    if term == T::zero() {
        return term;
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..200 {
        term *= q / (T::from_usize_lossy(k) * T::from_usize_lossy(n + k));
        sum += term;
        if term.abs() <= T::default_epsilon() * sum.abs() {
            break;
        }
    }
    sum
}

fn miller<T: Real>(n_max: usize, x: T) -> Vec<T> {
    let xf = x.to_f64_lossy();
    let top = (n_max as f64).max(xf);
    let mut start = (top + 20.0 + (60.0 * top).sqrt()).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }

    let two_over_x = T::lit(2.0) / x;
    let mut out = vec![T::zero(); n_max + 1];
    let mut above = T::zero();
    let mut current = T::lit(1.0e-30);
    // J_0 + 2 * sum of even orders
    let mut norm = T::zero();
    let big = T::lit(RESCALE_ABOVE);
    let shrink = T::lit(1.0 / RESCALE_ABOVE);

    for k in (1..=start).rev() {
        if k <= n_max {
            out[k] = current;
        }
        if k % 2 == 0 {
            norm += T::lit(2.0) * current;
        }
        let below = T::from_usize_lossy(k) * two_over_x * current - above;
        above = current;
        current = below;
        if current.abs() > big {
            current *= shrink;
            above *= shrink;
            norm *= shrink;
            for v in out.iter_mut().skip(k.min(n_max + 1)) {
                *v *= shrink;
            }
        }
    }
    out[0] = current;
    norm += current;

    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// J_n(x) = (1/2pi) \int_0^{2pi} cos(n s - x sin s) ds; the trapezoid rule
    /// converges geometrically for this periodic analytic integrand.
    fn quadrature(n: usize, x: f64) -> f64 {
        let m = 4 * (n + x.ceil() as usize + 64);
        let h = 2.0 * PI / m as f64;
        (0..m)
            .map(|i| {
                let s = i as f64 * h;
                (n as f64 * s - x * s.sin()).cos()
            })
            .sum::<f64>()
            / m as f64
    }

    #[test]
    fn zero_argument() {
        let v = bessel_j(5, 0.0_f64);
        assert_eq!(v[0], 1.0);
        assert!(v[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn j1_at_two() {
        // power series summed by hand to machine precision
        let mut term = 1.0_f64;
        let mut sum = 1.0;
        for k in 1..40 {
            term *= -1.0 / (k as f64 * (k + 1) as f64);
            sum += term;
        }
        assert!((sum - 0.576_724_807_756_873_4).abs() < 1e-15);
        let j1 = bessel_jn(1, 2.0_f64);
        assert!((j1 - sum).abs() < 1e-13, "{j1} vs {sum}");
        assert!((j1 - 0.5767248078).abs() < 1e-10);
    }

    #[test]
    fn even_order_normalization() {
        let v = bessel_j(60, 7.3_f64);
        let s = v[0] + 2.0 * v.iter().skip(2).step_by(2).sum::<f64>();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_quadrature_oracle() {
        for &x in &[0.1, 0.49, 0.5, 1.0, 2.0, 7.3, 10.0, 25.0, 40.0, 90.0] {
            let n_max = 80;
            let v = bessel_j(n_max, x);
            for (n, &got) in v.iter().enumerate() {
                let want = quadrature(n, x);
                let err = (got - want).abs();
                let scale = want.abs().max(1e-300);
                assert!(
                    err < 1e-14 || err / scale < 1e-12,
                    "J_{n}({x}): {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn negative_argument_parity() {
        let p = bessel_j(4, 3.0_f64);
        let m = bessel_j(4, -3.0_f64);
        for n in 0..=4 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((m[n] - sign * p[n]).abs() < 1e-15);
        }
    }

    #[test]
    fn single_precision_agrees() {
        let d = bessel_j(10, 5.0_f64);
        let s = bessel_j(10, 5.0_f32);
        for n in 0..=10 {
            assert!((d[n] - s[n] as f64).abs() < 1e-5);
        }
    }
}
