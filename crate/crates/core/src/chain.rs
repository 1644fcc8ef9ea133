//! Free-fermion ground state of the uniform open XX chain and the correlators
//! the qubit dynamics needs.
//!
//! With `c_n^dag = P_n sigma^-_n` (a fermion is a down spin) the chain
//! Hamiltonian becomes `sum_k eps_k c_k^dag c_k + const` with
//! `eps_k = 2 (h - J cos theta_k)`, `theta_k = k pi / (N + 1)`, and mode
//! amplitudes `phi_{j,k} = sqrt(2/(N+1)) sin(j theta_k)`. The saturated chain
//! (no fermions) is the all-up state.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Real, Result};

/// Ties `|h - J cos theta_k|` below this leave the mode empty and are flagged.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ModeBasis<T: Real> {
    /// `phi[(j-1, k-1)] = phi_{j,k}`.
    pub phi: DMatrix<T>,
    pub energies: DVector<T>,
    pub coupling: T,
    pub field: T,
}

impl<T: Real> ModeBasis<T> {
    pub fn chain_len(&self) -> usize {
        self.energies.len()
    }

    /// `theta_k = k pi / (N+1)` for `k = 1..=N`.
    pub fn angle(&self, k: usize) -> T {
        T::pi() * T::from_usize_lossy(k) / T::from_usize_lossy(self.chain_len() + 1)
    }

    /// `phi_{j,k}` for any integers, zero outside the chain.
    pub fn amplitude(&self, j: usize, k: usize) -> T {
        let n1 = T::from_usize_lossy(self.chain_len() + 1);
        (T::lit(2.0) / n1).sqrt() * (T::from_usize_lossy(j) * self.angle(k)).sin()
    }

    /// Number of negative-energy modes, counting exact ties as empty.
    pub fn fermi_count(&self) -> usize {
        self.occupied().len()
    }

    /// Whether some mode sits within [`TIE_TOLERANCE`] of zero energy.
    pub fn has_near_tie(&self) -> bool {
        let tol = T::lit(2.0 * TIE_TOLERANCE);
        self.energies.iter().any(|e| e.abs() < tol)
    }

    fn occupied(&self) -> Vec<usize> {
        let tol = T::lit(2.0 * TIE_TOLERANCE);
        (0..self.chain_len()).filter(|&k| self.energies[k] < -tol).collect()
    }
}

/// Standing-wave modes of an `n`-site uniform chain with coupling `j` and
/// field `h`.
pub fn chain_modes<T: Real>(n: usize, j: T, h: T) -> ModeBasis<T> {
    let n1 = T::from_usize_lossy(n + 1);
    let norm = (T::lit(2.0) / n1).sqrt();
    let phi = DMatrix::from_fn(n, n, |r, c| {
        let theta = T::pi() * T::from_usize_lossy(c + 1) / n1;
        norm * (T::from_usize_lossy(r + 1) * theta).sin()
    });
    let energies = DVector::from_fn(n, |k, _| {
        let theta = T::pi() * T::from_usize_lossy(k + 1) / n1;
        T::lit(2.0) * (h - j * theta.cos())
    });
    ModeBasis { phi, energies, coupling: j, field: h }
}

/// `k_F = #{k : h < J cos theta_k}` for a positive coupling.
pub fn fermi_count<T: Real>(modes: &ModeBasis<T>) -> usize {
    modes.fermi_count()
}

/// Ground-state correlators of the chain, indexed by site `1..=N` stored at
/// `0..N`.
#[derive(Debug, Clone)]
pub struct GroundStateCorrelators<T: Real> {
    pub k_f: usize,
    /// `<sigma^z_n>`.
    pub sz: DVector<T>,
    /// String correlator `<sigma^x_n sigma^z_{n+1} ... sigma^z_{m-1} sigma^x_m>`,
    /// symmetric, with unit diagonal. Equal to the `yy` string correlator.
    pub g: DMatrix<T>,
    /// One-particle correlations `G_ij = <c_i^dag c_j>`.
    pub one_particle: DMatrix<T>,
    pub near_tie: bool,
}

impl<T: Real> GroundStateCorrelators<T> {
    pub fn chain_len(&self) -> usize {
        self.sz.len()
    }

    /// Correlators of the fully polarized (all-up) chain.
    pub fn saturated(n: usize) -> Self {
        Self {
            k_f: 0,
            sz: DVector::from_element(n, T::one()),
            g: DMatrix::identity(n, n),
            one_particle: DMatrix::zeros(n, n),
            near_tie: false,
        }
    }

    /// Majorana correlation block `W_nm = -i <a_n b_m>` with
    /// `a_n = P_n sigma^x_n`, `b_n = P_n sigma^y_n`: `W = I - 2G`.
    pub fn majorana_block(&self) -> DMatrix<T> {
        let n = self.chain_len();
        DMatrix::identity(n, n) - &self.one_particle * T::lit(2.0)
    }
}

/// Fills the `k_f` lowest modes and evaluates `G`, `<sigma^z_n>` and the
/// string correlators.
///
/// A string correlator with the interior Jordan-Wigner string is a single
/// Majorana pair `-i b_n a_m`, so its Wick expansion collapses to one entry of
/// the block `2G - I`: `g_nm = 2 G_nm` for `n != m`.
pub fn correlators<T: Real>(modes: &ModeBasis<T>, k_f: usize) -> Result<GroundStateCorrelators<T>> {
    let n = modes.chain_len();
    if k_f > n {
        return Err(Error::InvalidArgument(format!("k_F = {k_f} exceeds chain length {n}")));
    }
    let mut by_energy: Vec<usize> = (0..n).collect();
    by_energy.sort_by(|&a, &b| {
        modes.energies[a]
            .partial_cmp(&modes.energies[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let occupied = &by_energy[..k_f];

    let mut g1 = DMatrix::zeros(n, n);
    for &k in occupied {
        let col = modes.phi.column(k);
        g1 += &col * col.transpose();
    }
    let sz = DVector::from_fn(n, |i, _| T::one() - T::lit(2.0) * g1[(i, i)]);
    let two = T::lit(2.0);
    let g = DMatrix::from_fn(n, n, |i, j| if i == j { T::one() } else { two * g1[(i, j)] });

    Ok(GroundStateCorrelators {
        k_f,
        sz,
        g,
        one_particle: g1,
        near_tie: modes.has_near_tie(),
    })
}

/// Ground-state correlators of a uniform chain.
pub fn ground_state<T: Real>(n: usize, j: T, h: T) -> Result<GroundStateCorrelators<T>> {
    if !(j > T::zero()) {
        return Err(Error::UnsupportedChain(format!(
            "chain coupling must be positive, got {j}"
        )));
    }
    let modes = chain_modes(n, j, h);
    let k_f = modes.fermi_count();
    if modes.has_near_tie() {
        log::warn!("zero-energy chain mode at J = {j}, h = {h}; left unoccupied");
    }
    correlators(&modes, k_f)
}

/// Closed-form magnetization profile of the `k_f`-filled chain,
/// `1 - 2/(N+1) (k_F - cos((k_F+1) theta_n) sin(k_F theta_n) / sin theta_n)`.
pub fn sz_closed_form<T: Real>(modes: &ModeBasis<T>, k_f: usize, site: usize) -> T {
    let n1 = T::from_usize_lossy(modes.chain_len() + 1);
    let theta = modes.angle(site);
    let kf = T::from_usize_lossy(k_f);
    let ratio = ((kf + T::one()) * theta).cos() * (kf * theta).sin() / theta.sin();
    T::one() - T::lit(2.0) / n1 * (kf - ratio)
}

/// Christoffel-Darboux form of `G_nm`,
/// `(phi_{n,kF+1} phi_{m,kF} - phi_{n,kF} phi_{m,kF+1}) / (2 (cos theta_n - cos theta_m))`.
///
/// `None` where the denominator vanishes (`n == m`).
pub fn one_particle_closed_form<T: Real>(modes: &ModeBasis<T>, k_f: usize, n: usize, m: usize) -> Option<T> {
    let denom = T::lit(2.0) * (modes.angle(n).cos() - modes.angle(m).cos());
    if denom.abs() < T::lit(1e-12) {
        return None;
    }
    let num = modes.amplitude(n, k_f + 1) * modes.amplitude(m, k_f)
        - modes.amplitude(n, k_f) * modes.amplitude(m, k_f + 1);
    Some(num / denom)
}
