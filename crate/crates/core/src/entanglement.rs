//! Two-qubit state from two local channels, concurrence and its parallel and
//! antiparallel components, and the detectors run on concurrence traces.
//!
//! Two-qubit basis: `|00>, |01>, |10>, |11>` with qubit A as the left factor,
//! i.e. capital index `I = 2 i_A + i_B`.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use num_complex::Complex;
use rayon::prelude::*;

use crate::channel::{ChannelSource, ChannelTensor, SubsystemModel};
use crate::spectral::SubsystemSpec;
use crate::{cabs, Error, Real, Result};

/// Off-X-block magnitude below which a state counts as an X-state.
pub const X_STATE_TOLERANCE: f64 = 1e-10;

/// Dominant concurrence component must exceed this to count as a revival.
pub const REVIVAL_FLOOR: f64 = 1e-6;

/// Populations at or below this many machine epsilons count as zero in the
/// X-state formulas: `sqrt(rho_ii rho_jj)` turns rounding noise of order
/// `eps` in a vanishing population into an error of order `sqrt(eps)`.
pub const POPULATION_FLOOR_EPS: f64 = 16.0;

/// Default averaging window, in units of `1/J`.
pub const DEFAULT_WINDOW: (f64, f64) = (10.0, 45.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];

    /// `phi+-` are parallel, `psi+-` antiparallel.
    pub fn is_parallel(self) -> bool {
        matches!(self, Self::PhiPlus | Self::PhiMinus)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::PhiPlus => "phi+",
            Self::PhiMinus => "phi-",
            Self::PsiPlus => "psi+",
            Self::PsiMinus => "psi-",
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "phi+" | "phi_plus" | "phiplus" => Ok(Self::PhiPlus),
            "phi-" | "phi_minus" | "phiminus" => Ok(Self::PhiMinus),
            "psi+" | "psi_plus" | "psiplus" => Ok(Self::PsiPlus),
            "psi-" | "psi_minus" | "psiminus" => Ok(Self::PsiMinus),
            other => Err(Error::InvalidArgument(format!("unknown Bell state '{other}'"))),
        }
    }
}

pub(crate) fn bell_amplitudes<T: Real>(kind: BellKind) -> [Complex<T>; 4] {
    let s = T::lit(0.5).sqrt();
    let z = Complex::new(T::zero(), T::zero());
    let p = Complex::new(s, T::zero());
    match kind {
        BellKind::PhiPlus => [p, z, z, p],
        BellKind::PhiMinus => [p, z, z, -p],
        BellKind::PsiPlus => [z, p, p, z],
        BellKind::PsiMinus => [z, p, -p, z],
    }
}

/// Two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState<T: Real> {
    rho: Matrix4<Complex<T>>,
}

impl<T: Real> TwoQubitState<T> {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(rho: Matrix4<Complex<T>>) -> Result<Self> {
        let state = Self { rho };
        state.validate()?;
        Ok(state)
    }

    pub fn new_unchecked(rho: Matrix4<Complex<T>>) -> Self {
        Self { rho }
    }

    pub fn maximally_mixed() -> Self {
        Self { rho: Matrix4::identity() * Complex::new(T::lit(0.25), T::zero()) }
    }

    pub fn from_pure(amps: [Complex<T>; 4]) -> Self {
        Self { rho: Matrix4::from_fn(|i, j| amps[i] * amps[j].conj()) }
    }

    pub fn rho(&self) -> &Matrix4<Complex<T>> {
        &self.rho
    }

    /// Element with the 1-based indices used for `rho_14`, `rho_23`, ...
    pub fn element(&self, i: usize, j: usize) -> Complex<T> {
        self.rho[(i - 1, j - 1)]
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::lit(1e-10).max(T::lit(1e3) * T::default_epsilon());
        let herm = (self.rho - self.rho.adjoint()).iter().fold(T::zero(), |m, z| m.max(cabs(*z)));
        if herm > tol {
            return Err(Error::InvalidState(format!("two-qubit state not Hermitian ({herm})")));
        }
        let tr = self.rho.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("two-qubit trace {tr}")));
        }
        let min = self.rho.symmetric_eigenvalues().min();
        if min < -tol {
            return Err(Error::InvalidState(format!("two-qubit eigenvalue {min}")));
        }
        Ok(())
    }

    /// Largest modulus among the entries outside the X pattern.
    pub fn off_x_magnitude(&self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                if i != j && i + j != 3 {
                    worst = worst.max(cabs(self.rho[(i, j)]));
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.rho - other.rho).iter().fold(T::zero(), |m, z| m.max(cabs(*z)))
    }
}

pub fn bell_state<T: Real>(kind: BellKind) -> TwoQubitState<T> {
    TwoQubitState::from_pure(bell_amplitudes(kind))
}

/// `rho_IJ(t) = sum A^{p_A r_A}_{i_A j_A} B^{p_B r_B}_{i_B j_B} rho_PR(0)`.
pub fn evolve_pair<T: Real>(
    ka: &ChannelTensor<T>,
    kb: &ChannelTensor<T>,
    rho0: &TwoQubitState<T>,
) -> Result<TwoQubitState<T>> {
    let scale = T::one().max(ka.t.abs());
    if (ka.t - kb.t).abs() > T::lit(1e3) * T::default_epsilon() * scale {
        return Err(Error::InvalidArgument(format!(
            "channels evaluated at different times {} and {}",
            ka.t, kb.t
        )));
    }
    let r = &rho0.rho;
    let rho = Matrix4::from_fn(|row, col| {
        let (ia, ib) = (row / 2, row % 2);
        let (ja, jb) = (col / 2, col % 2);
        let mut acc = Complex::new(T::zero(), T::zero());
        for pa in 0..2 {
            for ra in 0..2 {
                let a = ka.get(ia, ja, pa, ra);
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for pb in 0..2 {
                    for rb in 0..2 {
                        acc += a * kb.get(ib, jb, pb, rb) * r[(2 * pa + pb, 2 * ra + rb)];
                    }
                }
            }
        }
        acc
    });
    Ok(TwoQubitState { rho })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceComponents<T> {
    /// `|rho_14| - sqrt(rho_22 rho_33)`.
    pub upup: T,
    /// `|rho_23| - sqrt(rho_11 rho_44)`.
    pub updown: T,
    pub concurrence: T,
    /// Whether the state is an X-state, i.e. whether the components determine
    /// the concurrence.
    pub x_state: bool,
}

impl<T: Real> ConcurrenceComponents<T> {
    /// `2 max(C_upup, C_updown)`, negative when both components are.
    pub fn signed(&self) -> T {
        if self.x_state {
            T::lit(2.0) * self.upup.max(self.updown)
        } else {
            self.concurrence
        }
    }

    pub fn parallel(&self) -> T {
        T::lit(2.0) * self.upup.max(T::zero())
    }

    pub fn antiparallel(&self) -> T {
        T::lit(2.0) * self.updown.max(T::zero())
    }
}

/// X-state concurrence components; falls back to the Wootters formula for
/// states outside the X pattern.
pub fn concurrence_components<T: Real>(state: &TwoQubitState<T>) -> ConcurrenceComponents<T> {
    let r = &state.rho;
    let floor = T::lit(POPULATION_FLOOR_EPS) * T::default_epsilon();
    let pop = |i: usize| {
        let p = r[(i, i)].re;
        if p <= floor {
            T::zero()
        } else {
            p
        }
    };
    let updown = cabs(r[(1, 2)]) - (pop(0) * pop(3)).sqrt();
    let upup = cabs(r[(0, 3)]) - (pop(1) * pop(2)).sqrt();
    let x_state = state.off_x_magnitude() <= T::lit(X_STATE_TOLERANCE);
    let concurrence = if x_state {
        T::lit(2.0) * T::zero().max(upup).max(updown)
    } else {
        log::debug!("non-X two-qubit state; using the spin-flip concurrence");
        wootters_concurrence(state)
    };
    ConcurrenceComponents { upup, updown, concurrence, x_state }
}

/// `max(0, l1 - l2 - l3 - l4)` with `l_i` the square roots of the eigenvalues
/// of `sqrt(rho) rho~ sqrt(rho)`, `rho~ = (sy sy) rho* (sy sy)`.
pub fn wootters_concurrence<T: Real>(state: &TwoQubitState<T>) -> T {
    let rho = state.rho;
    // sy (x) sy is real: anti-diagonal (-1, 1, 1, -1)
    let flip = Matrix4::from_fn(|i, j| {
        let v = if i + j == 3 {
            if i == 0 || i == 3 {
                -T::one()
            } else {
                T::one()
            }
        } else {
            T::zero()
        };
        Complex::new(v, T::zero())
    });
    let tilde = flip * rho.conjugate() * flip;

    let eig = rho.symmetric_eigen();
    let sqrt_diag = eig.eigenvalues.map(|e| Complex::new(e.max(T::zero()).sqrt(), T::zero()));
    let sqrt_rho = &eig.eigenvectors * Matrix4::from_diagonal(&sqrt_diag) * eig.eigenvectors.adjoint();
    let m = sqrt_rho * tilde * sqrt_rho;
    let m = (m + m.adjoint()) * Complex::new(T::lit(0.5), T::zero());
    let mut l: Vec<T> = m.symmetric_eigenvalues().iter().map(|e| e.max(T::zero()).sqrt()).collect();
    l.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    (l[0] - l[1] - l[2] - l[3]).max(T::zero()).min(T::one())
}

/// Sampled concurrence time series.
#[derive(Debug, Clone)]
pub struct ConcurrenceTrace<T: Real> {
    pub times: Vec<T>,
    pub c: Vec<T>,
    /// `2 max(0, C_upup)`.
    pub c_par: Vec<T>,
    /// `2 max(0, C_updown)`.
    pub c_anti: Vec<T>,
    /// Raw components, unclipped.
    pub components: Vec<ConcurrenceComponents<T>>,
    pub states: Vec<TwoQubitState<T>>,
    pub t_esd: Option<T>,
    pub t_rev: Option<T>,
    pub avg_par: Option<T>,
    pub avg_anti: Option<T>,
}

impl<T: Real> ConcurrenceTrace<T> {
    pub fn from_states(times: Vec<T>, states: Vec<TwoQubitState<T>>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::DimensionMismatch("times and states".into()));
        }
        check_grid(&times)?;
        let components: Vec<_> = states.iter().map(concurrence_components).collect();
        Ok(Self {
            c: components.iter().map(|c| c.concurrence).collect(),
            c_par: components.iter().map(|c| c.parallel()).collect(),
            c_anti: components.iter().map(|c| c.antiparallel()).collect(),
            components,
            states,
            times,
            t_esd: None,
            t_rev: None,
            avg_par: None,
            avg_anti: None,
        })
    }

    /// Trace from bare concurrence values; components are set so that
    /// `C_par = C` and `C_anti = 0`.
    pub fn from_values(times: Vec<T>, c: Vec<T>) -> Result<Self> {
        if times.len() != c.len() {
            return Err(Error::DimensionMismatch("times and values".into()));
        }
        check_grid(&times)?;
        let half = T::lit(0.5);
        let components: Vec<_> = c
            .iter()
            .map(|&v| ConcurrenceComponents { upup: v * half, updown: -v.abs() * half, concurrence: v.max(T::zero()), x_state: true })
            .collect();
        Ok(Self {
            c: components.iter().map(|c| c.concurrence).collect(),
            c_par: components.iter().map(|c| c.parallel()).collect(),
            c_anti: components.iter().map(|c| c.antiparallel()).collect(),
            states: vec![TwoQubitState::maximally_mixed(); times.len()],
            components,
            times,
            t_esd: None,
            t_rev: None,
            avg_par: None,
            avg_anti: None,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn signed(&self) -> Vec<T> {
        self.components.iter().map(|c| c.signed()).collect()
    }
}

fn check_grid<T: Real>(times: &[T]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("non-finite time".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Uniform grid `0, step, 2 step, ..., <= t_max`.
pub fn time_grid<T: Real>(t_max: T, step: T) -> Result<Vec<T>> {
    if !(step > T::zero()) || !(t_max >= T::zero()) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!("bad time grid max={t_max} step={step}")));
    }
    let n = (t_max / step + T::lit(1e-9)).floor().to_f64_lossy() as usize;
    Ok((0..=n).map(|k| T::from_usize_lossy(k) * step).collect())
}

/// The two sides of the experiment, each able to produce its channel.
pub struct PairModel<T: Real, S: ChannelSource<T>> {
    pub a: S,
    pub b: S,
    _scalar: std::marker::PhantomData<T>,
}

impl<T: Real, S: ChannelSource<T>> PairModel<T, S> {
    pub fn new(a: S, b: S) -> Self {
        Self { a, b, _scalar: std::marker::PhantomData }
    }

    pub fn state_at(&self, rho0: &TwoQubitState<T>, t: T) -> Result<TwoQubitState<T>> {
        evolve_pair(&self.a.channel_at(t)?, &self.b.channel_at(t)?, rho0)
    }

    pub fn components_at(&self, rho0: &TwoQubitState<T>, t: T) -> Result<ConcurrenceComponents<T>> {
        Ok(concurrence_components(&self.state_at(rho0, t)?))
    }

    /// Evaluates the full pipeline on every grid point (in parallel) and
    /// fills in the refined sudden-death and revival times.
    pub fn trace(&self, rho0: &TwoQubitState<T>, grid: &[T]) -> Result<ConcurrenceTrace<T>> {
        check_grid(grid)?;
        let states = grid
            .par_iter()
            .map(|&t| self.state_at(rho0, t))
            .collect::<Result<Vec<_>>>()?;
        let mut trace = ConcurrenceTrace::from_states(grid.to_vec(), states)?;
        if let Some(rough) = esd_bracket(&trace) {
            trace.t_esd = Some(match rough {
                (lo, hi) if lo < hi => self.refine_esd(rho0, lo, hi)?,
                (lo, _) => lo,
            });
        }
        trace.t_rev = detect_revival(&trace);
        Ok(trace)
    }

    /// Bisection for the sign change of the dominant component on `[lo, hi]`.
    pub fn refine_esd(&self, rho0: &TwoQubitState<T>, mut lo: T, mut hi: T) -> Result<T> {
        let tol = T::lit(1e-7).max(T::lit(10.0) * T::default_epsilon());
        while hi - lo > tol {
            let mid = (lo + hi) * T::lit(0.5);
            if self.components_at(rho0, mid)?.signed() > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo + hi) * T::lit(0.5))
    }

    /// Upper bound from applying each channel alone:
    /// `C[(A (x) 1) rho0] * C[(1 (x) B) rho0]`.
    pub fn factorized_bound(&self, rho0: &TwoQubitState<T>, t: T) -> Result<T> {
        let id = ChannelTensor::identity(t);
        let only_a = evolve_pair(&self.a.channel_at(t)?, &id, rho0)?;
        let only_b = evolve_pair(&id, &self.b.channel_at(t)?, rho0)?;
        Ok(concurrence_components(&only_a).concurrence * concurrence_components(&only_b).concurrence)
    }
}

/// Index of the first sample starting a run of at least three samples (two
/// grid steps) with vanishing concurrence.
fn sustained_zero_start<T: Real>(trace: &ConcurrenceTrace<T>) -> Option<usize> {
    let signed = trace.signed();
    (0..signed.len().saturating_sub(2)).find(|&i| signed[i..i + 3].iter().all(|&s| s <= T::zero()))
}

/// Grid bracket `(last entangled time, first zero time)` of the sudden death.
fn esd_bracket<T: Real>(trace: &ConcurrenceTrace<T>) -> Option<(T, T)> {
    let i = sustained_zero_start(trace)?;
    if i == 0 {
        return Some((trace.times[0], trace.times[0]));
    }
    Some((trace.times[i - 1], trace.times[i]))
}

/// First time the concurrence vanishes and stays zero for at least two grid
/// steps, located by linear interpolation of the dominant component inside
/// the grid bracket. [`PairModel::trace`] refines the same bracket by
/// bisection on the underlying evaluator.
pub fn detect_esd<T: Real>(trace: &ConcurrenceTrace<T>) -> Option<T> {
    let i = sustained_zero_start(trace)?;
    if i == 0 {
        return Some(trace.times[0]);
    }
    let signed = trace.signed();
    let (s0, s1) = (signed[i - 1], signed[i]);
    let (t0, t1) = (trace.times[i - 1], trace.times[i]);
    if s0 <= s1 {
        return Some(t1);
    }
    Some(t0 + (t1 - t0) * s0 / (s0 - s1))
}

/// Time of the first local maximum of `C` after sudden death.
pub fn detect_revival<T: Real>(trace: &ConcurrenceTrace<T>) -> Option<T> {
    let start = sustained_zero_start(trace)?;
    let c = &trace.c;
    let floor = T::lit(REVIVAL_FLOOR);
    for i in (start + 1)..c.len().saturating_sub(1) {
        if c[i] > floor && c[i] >= c[i - 1] && c[i] > c[i + 1] {
            // parabola through the three samples
            let (t0, t1, t2) = (trace.times[i - 1], trace.times[i], trace.times[i + 1]);
            let (y0, y1, y2) = (c[i - 1], c[i], c[i + 1]);
            let d1 = (y1 - y0) / (t1 - t0);
            let d2 = (y2 - y1) / (t2 - t1);
            let curv = (d2 - d1) / (t2 - t0);
            if curv < T::zero() && y0 > T::zero() {
                let vertex = (t0 + t1) * T::lit(0.5) - d1 / (T::lit(2.0) * curv);
                if vertex > t0 && vertex < t2 {
                    return Some(vertex);
                }
            }
            return Some(t1);
        }
    }
    None
}

/// Trapezoidal averages of `(C_par, C_anti)` over `[t1, t2]`.
pub fn time_averaged<T: Real>(trace: &ConcurrenceTrace<T>, window: (T, T)) -> Result<(T, T)> {
    let (t1, t2) = window;
    let (first, last) = match (trace.times.first(), trace.times.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::InvalidArgument("empty trace".into())),
    };
    if !(t1 < t2) || t1 < first || t2 > last {
        return Err(Error::InvalidArgument(format!(
            "window [{t1}, {t2}] outside trace range [{first}, {last}]"
        )));
    }
    Ok((
        window_mean(&trace.times, &trace.c_par, t1, t2),
        window_mean(&trace.times, &trace.c_anti, t1, t2),
    ))
}

fn window_mean<T: Real>(ts: &[T], ys: &[T], t1: T, t2: T) -> T {
    let interp = |t: T| -> T {
        let k = ts.partition_point(|&s| s <= t).clamp(1, ts.len() - 1);
        let (a, b) = (ts[k - 1], ts[k]);
        ys[k - 1] + (ys[k] - ys[k - 1]) * (t - a) / (b - a)
    };
    let mut pts: Vec<(T, T)> = vec![(t1, interp(t1))];
    pts.extend(ts.iter().zip(ys).filter(|(&t, _)| t > t1 && t < t2).map(|(&t, &y)| (t, y)));
    pts.push((t2, interp(t2)));
    let half = T::lit(0.5);
    let area = pts
        .windows(2)
        .fold(T::zero(), |acc, w| acc + (w[1].0 - w[0].0) * (w[0].1 + w[1].1) * half);
    area / (t2 - t1)
}

fn warn_horizon<T: Real>(spec: &SubsystemSpec<T>, grid: &[T]) {
    if let Some(&t_max) = grid.last() {
        if t_max > T::from_usize_lossy(spec.chain_len()) {
            log::warn!(
                "t_max = {t_max} exceeds the finite-size horizon N = {}; boundary reflections reach the qubit",
                spec.chain_len()
            );
        }
    }
}

/// Full pipeline trace for a Bell input.
pub fn concurrence_trace<T: Real>(
    spec_a: &SubsystemSpec<T>,
    spec_b: &SubsystemSpec<T>,
    initial: BellKind,
    grid: &[T],
) -> Result<ConcurrenceTrace<T>> {
    warn_horizon(spec_a, grid);
    warn_horizon(spec_b, grid);
    let pair = PairModel::new(SubsystemModel::new(spec_a.clone())?, SubsystemModel::new(spec_b.clone())?);
    pair.trace(&bell_state(initial), grid)
}

/// Pipeline trace next to the closed form `x(t) = p_A(t) p_B(t)` for
/// `J^y_0 = 0`, `h_0 = 0`, where `p` is the non-conserved transverse Bloch
/// factor. The component aligned with the input (parallel for `phi`,
/// antiparallel for `psi`) equals `x / 2`, the other `-x / 2`.
#[derive(Debug, Clone)]
pub struct SwitchingTrace<T: Real> {
    pub trace: ConcurrenceTrace<T>,
    pub closed_form: Vec<T>,
    pub max_deviation: T,
}

impl<T: Real> SwitchingTrace<T> {
    /// Sample indices where the dominant component changes type.
    pub fn switch_points(&self) -> Vec<usize> {
        let sign = |i: usize| self.trace.components[i].upup > self.trace.components[i].updown;
        (1..self.trace.len()).filter(|&i| sign(i) != sign(i - 1)).collect()
    }
}

/// Switching tolerance between pipeline and closed form.
pub const SWITCHING_TOLERANCE: f64 = 1e-8;

pub fn switching_trace<T: Real>(
    spec_a: &SubsystemSpec<T>,
    spec_b: &SubsystemSpec<T>,
    initial: BellKind,
    grid: &[T],
) -> Result<SwitchingTrace<T>> {
    for spec in [spec_a, spec_b] {
        if spec.j0y() != T::zero() || spec.h0() != T::zero() {
            return Err(Error::InvalidArgument(
                "switching closed form needs J0y = 0 and h0 = 0 on both sides".into(),
            ));
        }
    }
    let a = SubsystemModel::new(spec_a.clone())?;
    let b = SubsystemModel::new(spec_b.clone())?;
    let closed_form: Vec<T> = grid
        .iter()
        .map(|&t| switching_factor(&a, t) * switching_factor(&b, t))
        .collect();
    let pair = PairModel::new(a, b);
    let trace = pair.trace(&bell_state(initial), grid)?;

    let two = T::lit(2.0);
    let mut max_deviation = T::zero();
    for (comp, &x) in trace.components.iter().zip(&closed_form) {
        let (aligned, other) = if initial.is_parallel() {
            (comp.upup, comp.updown)
        } else {
            (comp.updown, comp.upup)
        };
        max_deviation = max_deviation.max((two * aligned - x).abs()).max((two * other + x).abs());
    }
    if max_deviation > T::lit(SWITCHING_TOLERANCE) {
        return Err(Error::Numerical(format!(
            "switching closed form deviates from the pipeline by {max_deviation}"
        )));
    }
    Ok(SwitchingTrace { trace, closed_form, max_deviation })
}

/// The non-conserved transverse factor for `J^y_0 = 0`: `pi_x[0]`.
pub fn switching_factor<T: Real>(model: &SubsystemModel<T>, t: T) -> T {
    model.coefficients(t).pi_x[0]
}
