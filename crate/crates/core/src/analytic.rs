//! Infinite-chain limit for the homogeneous isotropic side (`J_0 = J = 1`,
//! uniform field `h_0 = h`), where the flux coefficients become Bessel
//! functions:
//!
//! ```text
//! pi_n + i delta_n = i^n (n + 1) J_{n+1}(2t) / t   (times a uniform field phase)
//! ```
//!
//! Times are in units of `1/J`. [`ThermodynamicSubsystem`] restores `J` by
//! rescaling `t -> J t`, `h -> h / J`.

use nalgebra::{Matrix2, Matrix3, Vector3};

use crate::chain::{self, GroundStateCorrelators};
use crate::channel::{channel_superop, BlochAffineMap, ChannelSource, ChannelTensor};
use crate::special::bessel_j;
use crate::spectral::SubsystemSpec;
use crate::{Error, Real, Result};

/// Bessel orders below this magnitude are treated as negligible.
pub const BESSEL_TAIL: f64 = 1e-14;

/// `gamma` at the sudden-death point of the zero-field closed form:
/// the root of `g^2 + g - 1/4`.
pub fn esd_gamma() -> f64 {
    (2f64.sqrt() - 1.0) / 2.0
}

/// `J_1(2t) / (2t)`, with its small-`t` expansion near the origin.
fn j1_ratio<T: Real>(t: T) -> T {
    if t.abs() < T::lit(1e-4) {
        let t2 = t * t;
        return T::lit(0.5) - t2 / T::lit(4.0) + t2 * t2 / T::lit(24.0);
    }
    let two_t = T::lit(2.0) * t;
    bessel_j(1, two_t)[1] / two_t
}

/// Transverse factor in the spin-1/2 convention, `J_1(2t) / (2t)`.
pub fn transverse_factor<T: Real>(t: T) -> T {
    j1_ratio(t)
}

/// Transverse factor on Bloch vectors (Pauli convention), `J_1(2t) / t`.
pub fn transverse_factor_pauli<T: Real>(t: T) -> T {
    T::lit(2.0) * j1_ratio(t)
}

/// `gamma(t) = J_1^2(2t) / (2 t^2)`, with `gamma(0) = 1/2`.
pub fn gamma<T: Real>(t: T) -> T {
    let r = j1_ratio(t);
    T::lit(2.0) * r * r
}

/// Smallest `n` such that `|J_k(x)| < BESSEL_TAIL` for every `k >= n + 1`.
pub fn required_truncation<T: Real>(x: T) -> usize {
    let x = x.abs();
    let mut n_max = (x.to_f64_lossy() * 1.5) as usize + 40;
    loop {
        let j = bessel_j(n_max, x);
        let beyond_turning = |k: usize| T::from_usize_lossy(k) > x;
        if let Some(k) = (1..=n_max).find(|&k| beyond_turning(k) && j[k].abs() < T::lit(BESSEL_TAIL)) {
            return k - 1;
        }
        n_max *= 2;
    }
}

/// `Z(t) = (1 / 2t^2) sum_{n=1}^{n_trunc} (n+1)^2 J_{n+1}^2(2t)`.
pub fn zeta_truncated<T: Real>(t: T, n_trunc: usize) -> T {
    if t == T::zero() {
        return T::zero();
    }
    let j = bessel_j(n_trunc + 1, T::lit(2.0) * t);
    let sum = (1..=n_trunc).fold(T::zero(), |acc, n| {
        let k = T::from_usize_lossy(n + 1);
        acc + k * k * j[n + 1] * j[n + 1]
    });
    sum / (T::lit(2.0) * t * t)
}

/// `Z(t)` with the truncation chosen so the first omitted Bessel order is
/// below [`BESSEL_TAIL`].
pub fn zeta<T: Real>(t: T) -> T {
    zeta_truncated(t, required_truncation(T::lit(2.0) * t))
}

/// All infinite-chain factors at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoFactors<T> {
    pub t: T,
    /// `J_1(2t) / (2t)`.
    pub f_xy: T,
    /// Rotation angle `2 h t`.
    pub phase: T,
    pub gamma: T,
    pub zeta: T,
}

impl<T: Real> ThermoFactors<T> {
    pub fn new(t: T, h: T) -> Self {
        Self { t, f_xy: transverse_factor(t), phase: T::lit(2.0) * h * t, gamma: gamma(t), zeta: zeta(t) }
    }
}

/// Transverse `2x2` block of the Bloch map, acting on `(<sigma^x>, <sigma^y>)`:
/// the precession by `2ht` scaled by `J_1(2t)/t`. The Bloch vector turns from
/// `x` towards `-y` for `h > 0`.
pub fn thermo_bloch_xy<T: Real>(t: T, h: T) -> Matrix2<T> {
    let f = transverse_factor_pauli(t);
    let (s, c) = (T::lit(2.0) * h * t).sin_cos();
    Matrix2::new(f * c, f * s, -f * s, f * c)
}

/// Longitudinal part `(A_zz, m_z)` of the infinite-chain Bloch map.
///
/// `m_z = sum_n c_n^2 sz_n - sum_{n != m, n - m even} (-1)^{(n-m)/2} c_n c_m g_nm`
/// with `c_n = (n+1) J_{n+1}(2t) / t`, over chain sites `1..=n_trunc`.
pub fn thermo_sz<T: Real>(t: T, corr: &GroundStateCorrelators<T>, n_trunc: usize) -> Result<(T, T)> {
    let a_zz = T::lit(2.0) * gamma(t);
    if t == T::zero() {
        return Ok((a_zz, T::zero()));
    }
    if n_trunc > corr.chain_len() {
        return Err(Error::InvalidArgument(format!(
            "truncation {n_trunc} exceeds the {} correlator sites",
            corr.chain_len()
        )));
    }
    let x = T::lit(2.0) * t;
    let j = bessel_j(n_trunc + 1, x);
    if j[n_trunc + 1].abs() >= T::lit(BESSEL_TAIL) || T::from_usize_lossy(n_trunc + 1) <= x {
        return Err(Error::Numerical(format!(
            "truncation {n_trunc} too small at t = {t}; need {}",
            required_truncation(x)
        )));
    }
    let c: Vec<T> = (0..=n_trunc).map(|n| T::from_usize_lossy(n + 1) * j[n + 1] / t).collect();
    let mut m_z = T::zero();
    for n in 1..=n_trunc {
        m_z += c[n] * c[n] * corr.sz[n - 1];
        let mut m = n % 2;
        if m == 0 {
            m = 2;
        }
        while m <= n_trunc {
            if m != n {
                let sign = if (n.abs_diff(m) / 2) % 2 == 0 { T::one() } else { -T::one() };
                m_z -= sign * c[n] * c[m] * corr.g[(n - 1, m - 1)];
            }
            m += 2;
        }
    }
    Ok((a_zz, m_z))
}

/// Constant in the zero-field closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosedFormConstant {
    /// `-1/4`: gives `C(0) = 1` and the sudden death at `t ~ 0.9037`.
    #[default]
    Corrected,
    /// `-1/2`, as printed; gives `C(0) = 1/2`.
    Printed,
}

/// `C(t) = 2 max(0, gamma^2 + gamma - c)` for a Bell input with
/// `J_0 = J`, `h = h_0 = 0`.
pub fn concurrence_zero_field_closed<T: Real>(t: T, constant: ClosedFormConstant) -> T {
    let g = gamma(t);
    let c = match constant {
        ClosedFormConstant::Corrected => T::lit(0.25),
        ClosedFormConstant::Printed => T::lit(0.5),
    };
    T::lit(2.0) * (g * g + g - c).max(T::zero())
}

/// `(C_a, C_p)` for saturated chains (`h > J`), independent of `h`.
///
/// Exact when the qubit field equals the chain field, so that the qubit is
/// resonant with the chain; `n_trunc = None` picks the truncation of `Z`
/// adaptively.
pub fn concurrence_saturated_closed<T: Real>(t: T, n_trunc: Option<usize>) -> (T, T) {
    let g = gamma(t);
    let z = match n_trunc {
        Some(n) => zeta_truncated(t, n),
        None => zeta(t),
    };
    let (g2, z2) = (g * g, z * z);
    let two = T::lit(2.0);
    let arg = T::lit(1.0 / 16.0) - (g2 + z2) / two + (g2 - z2) * (g2 - z2);
    let c_a = two * (g - arg.max(T::zero()).sqrt()).max(T::zero());
    let c_p = two * (g + g2 + z2 - T::lit(0.25)).max(T::zero());
    (c_a, c_p)
}

/// Sudden-death time of the zero-field closed form: bisection of
/// `gamma(t) = (sqrt 2 - 1)/2` on `[0.5, 1.5]`.
pub fn esd_root<T: Real>() -> T {
    let target = T::lit(esd_gamma());
    let (mut lo, mut hi) = (T::lit(0.5), T::lit(1.5));
    let tol = T::lit(1e-12).max(T::lit(4.0) * T::default_epsilon());
    while hi - lo > tol {
        let mid = (lo + hi) * T::lit(0.5);
        if gamma(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * T::lit(0.5)
}

/// Least-squares line `y = slope x + intercept` with its coefficient of
/// determination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> Result<LinearFit<T>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument("linear fit needs two or more paired points".into()));
    }
    let n = T::from_usize_lossy(xs.len());
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let (mut sxx, mut sxy, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == T::zero() {
        return Err(Error::InvalidArgument("degenerate abscissae".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == T::zero() { T::one() } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit { slope, intercept: my - slope * mx, r_squared })
}

/// Local maxima of `|y|`, as `(t, |y|)` pairs.
pub fn envelope_peaks<T: Real>(ts: &[T], ys: &[T]) -> Vec<(T, T)> {
    (1..ys.len().saturating_sub(1))
        .filter(|&i| ys[i].abs() >= ys[i - 1].abs() && ys[i].abs() > ys[i + 1].abs())
        .map(|i| (ts[i], ys[i].abs()))
        .collect()
}

/// Log-log slope of the envelope of `f` on `[t1, t2]`.
pub fn envelope_slope<T: Real>(f: impl Fn(T) -> T, t1: T, t2: T, step: T) -> Result<LinearFit<T>> {
    let n = ((t2 - t1) / step).floor().to_f64_lossy() as usize;
    let ts: Vec<T> = (0..=n).map(|k| t1 + T::from_usize_lossy(k) * step).collect();
    let ys: Vec<T> = ts.iter().map(|&t| f(t)).collect();
    let peaks = envelope_peaks(&ts, &ys);
    let lx: Vec<T> = peaks.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<T> = peaks.iter().map(|p| p.1.ln()).collect();
    linear_fit(&lx, &ly)
}

/// Infinite-chain side: Bessel transverse block and the longitudinal sums
/// evaluated on the end correlators of a long open chain.
#[derive(Debug, Clone)]
pub struct ThermodynamicSubsystem<T: Real> {
    coupling: T,
    field: T,
    correlators: GroundStateCorrelators<T>,
}

impl<T: Real> ThermodynamicSubsystem<T> {
    /// Needs a homogeneous isotropic side (`J_0 = J`, `h_0 = h`); the chain
    /// length of `spec` is ignored and replaced by one long enough for
    /// times up to `t_max`.
    pub fn new(spec: &SubsystemSpec<T>, t_max: T) -> Result<Self> {
        let (j, h) = spec
            .uniform_xx_chain()
            .ok_or_else(|| Error::UnsupportedChain("thermodynamic limit needs a uniform XX chain".into()))?;
        let tol = T::lit(1e-12) * T::one().max(j.abs());
        if (spec.j0x() - j).abs() > tol || (spec.j0y() - j).abs() > tol || (spec.h0() - h).abs() > tol {
            return Err(Error::InvalidSpec("thermodynamic limit needs J0 = J and h0 = h".into()));
        }
        let sites = 2 * required_truncation(T::lit(2.0) * j * t_max.abs()) + 40;
        let correlators = chain::ground_state(sites, T::one(), h / j)?;
        Ok(Self { coupling: j, field: h / j, correlators })
    }

    pub fn bloch_map(&self, t: T) -> Result<BlochAffineMap<T>> {
        let s = self.coupling * t;
        let n_trunc = required_truncation(T::lit(2.0) * s);
        if n_trunc > self.correlators.chain_len() {
            return Err(Error::InvalidArgument(format!("time {t} beyond the prepared thermodynamic horizon")));
        }
        let xy = thermo_bloch_xy(s, self.field);
        let (a_zz, m_z) = thermo_sz(s, &self.correlators, n_trunc)?;
        let mut a = Matrix3::zeros();
        a.fixed_view_mut::<2, 2>(0, 0).copy_from(&xy);
        a[(2, 2)] = a_zz;
        Ok(BlochAffineMap { t, a, m: Vector3::new(T::zero(), T::zero(), m_z) })
    }
}

impl<T: Real> ChannelSource<T> for ThermodynamicSubsystem<T> {
    fn channel_at(&self, t: T) -> Result<ChannelTensor<T>> {
        channel_superop(&self.bloch_map(t)?)
    }
}
