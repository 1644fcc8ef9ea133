//! Brute-force exact diagonalization of small qubit + chain systems.
//!
//! Basis states are bit strings with site 0 as the most significant bit; a
//! zero bit is spin up. The Hamiltonian
//! `-1/2 sum (J^x sx sx + J^y sy sy) - sum h sz` is real symmetric in this
//! basis, so one dense symmetric eigendecomposition gives `exp(-iHt)` for
//! every `t`. Nothing here shares code with the free-fermion pipeline.

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex;

use crate::channel::{ChannelSource, ChannelTensor, QubitMatrix};
use crate::entanglement::{self, BellKind, ConcurrenceTrace, PairModel, TwoQubitState};
use crate::spectral::SubsystemSpec;
use crate::{cabs, Error, Real, Result};

/// Maximum number of spins (qubit included) in one dense Hamiltonian.
pub const MAX_SITES: usize = 13;

/// Gap below which the chain ground state counts as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct DenseHamiltonian<T: Real> {
    pub n_sites: usize,
    pub matrix: DMatrix<T>,
}

/// Open XY chain Hamiltonian on `fields.len()` sites; bond `n` joins sites
/// `n` and `n + 1`.
pub fn xy_chain_hamiltonian<T: Real>(fields: &[T], bonds_x: &[T], bonds_y: &[T]) -> Result<DenseHamiltonian<T>> {
    let n_sites = fields.len();
    if n_sites > MAX_SITES {
        return Err(Error::SizeCap { sites: n_sites, limit: MAX_SITES });
    }
    if bonds_x.len() + 1 != n_sites.max(1) || bonds_y.len() != bonds_x.len() {
        return Err(Error::DimensionMismatch("bond count".into()));
    }
    let dim = 1usize << n_sites;
    let bit = |s: usize| 1usize << (n_sites - 1 - s);
    let half = T::lit(0.5);
    let mut h = DMatrix::zeros(dim, dim);
    for state in 0..dim {
        let mut diag = T::zero();
        for (s, &f) in fields.iter().enumerate() {
            let up = state & bit(s) == 0;
            diag -= if up { f } else { -f };
        }
        h[(state, state)] = diag;
        for b in 0..bonds_x.len() {
            let (m1, m2) = (bit(b), bit(b + 1));
            let flipped = state ^ m1 ^ m2;
            let aligned = (state & m1 == 0) == (state & m2 == 0);
            // <flipped| sy sy |state> = -1 for aligned pairs, +1 otherwise
            let yy = if aligned { -T::one() } else { T::one() };
            h[(flipped, state)] += -half * (bonds_x[b] + bonds_y[b] * yy);
        }
    }
    Ok(DenseHamiltonian { n_sites, matrix: h })
}

/// Full qubit + chain Hamiltonian of one side.
pub fn build_hamiltonian<T: Real>(spec: &SubsystemSpec<T>) -> Result<DenseHamiltonian<T>> {
    let n = spec.chain_len() + 1;
    if n > MAX_SITES {
        return Err(Error::SizeCap { sites: n, limit: MAX_SITES });
    }
    let fields: Vec<T> = (0..n).map(|s| spec.site_field(s)).collect();
    let bx: Vec<T> = (0..n - 1).map(|b| spec.bond_x(b)).collect();
    let by: Vec<T> = (0..n - 1).map(|b| spec.bond_y(b)).collect();
    xy_chain_hamiltonian(&fields, &bx, &by)
}

/// Chain-only Hamiltonian of one side.
pub fn build_chain_hamiltonian<T: Real>(spec: &SubsystemSpec<T>) -> Result<DenseHamiltonian<T>> {
    if spec.chain_len() > MAX_SITES - 1 {
        return Err(Error::SizeCap { sites: spec.chain_len(), limit: MAX_SITES - 1 });
    }
    xy_chain_hamiltonian(spec.chain_fields(), spec.jx(), spec.jy())
}

#[derive(Debug, Clone)]
pub struct ChainGroundState<T: Real> {
    pub vector: DVector<T>,
    pub energy: T,
    pub gap: T,
}

/// Lowest eigenvector of the chain Hamiltonian; refuses near-degenerate
/// ground states.
pub fn chain_ground_state_ed<T: Real>(spec: &SubsystemSpec<T>) -> Result<ChainGroundState<T>> {
    let h = build_chain_hamiltonian(spec)?;
    let eig = h.matrix.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let e0 = eig.eigenvalues[order[0]];
    let gap = if order.len() > 1 { eig.eigenvalues[order[1]] - e0 } else { T::finite_max() };
    if gap < T::lit(DEGENERACY_GAP) {
        return Err(Error::DegenerateGroundState { gap: gap.to_f64_lossy() });
    }
    Ok(ChainGroundState { vector: eig.eigenvectors.column(order[0]).into_owned(), energy: e0, gap })
}

fn complexify<T: Real>(m: &DMatrix<T>) -> DMatrix<Complex<T>> {
    m.map(|x| Complex::new(x, T::zero()))
}

/// Dense propagator `exp(-iHt)` via a one-time eigendecomposition.
#[derive(Debug, Clone)]
pub struct DenseEvolution<T: Real> {
    energies: DVector<T>,
    vectors: DMatrix<Complex<T>>,
}

impl<T: Real> DenseEvolution<T> {
    pub fn new(h: &DenseHamiltonian<T>) -> Self {
        let eig = h.matrix.clone().symmetric_eigen();
        Self { energies: eig.eigenvalues, vectors: complexify(&eig.eigenvectors) }
    }

    pub fn evolve(&self, psi0: &DVector<Complex<T>>, t: T) -> DVector<Complex<T>> {
        let mut c = self.vectors.adjoint() * psi0;
        for (ci, &e) in c.iter_mut().zip(self.energies.iter()) {
            let phase = -e * t;
            *ci *= Complex::new(phase.cos(), phase.sin());
        }
        &self.vectors * c
    }
}

/// Reduced density matrix of site 0.
fn trace_to_site0<T: Real>(psi: &DVector<Complex<T>>) -> QubitMatrix<T> {
    let half = psi.len() / 2;
    let mut rho = QubitMatrix::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = Complex::new(T::zero(), T::zero());
            for c in 0..half {
                acc += psi[i * half + c] * psi[j * half + c].conj();
            }
            rho[(i, j)] = acc;
        }
    }
    rho
}

/// One side prepared for exact evolution: full Hamiltonian eigensystem and
/// the chain ground state.
#[derive(Debug, Clone)]
pub struct EdSubsystem<T: Real> {
    spec: SubsystemSpec<T>,
    evolution: DenseEvolution<T>,
    hamiltonian: DenseHamiltonian<T>,
    chain: ChainGroundState<T>,
}

impl<T: Real> EdSubsystem<T> {
    pub fn new(spec: SubsystemSpec<T>) -> Result<Self> {
        let hamiltonian = build_hamiltonian(&spec)?;
        let chain = chain_ground_state_ed(&spec)?;
        let evolution = DenseEvolution::new(&hamiltonian);
        Ok(Self { spec, evolution, hamiltonian, chain })
    }

    pub fn spec(&self) -> &SubsystemSpec<T> {
        &self.spec
    }

    pub fn chain_ground_state(&self) -> &ChainGroundState<T> {
        &self.chain
    }

    pub fn hamiltonian(&self) -> &DenseHamiltonian<T> {
        &self.hamiltonian
    }

    /// `|q> (x) |Psi_chain>`.
    pub fn product_state(&self, qubit: [Complex<T>; 2]) -> DVector<Complex<T>> {
        let half = self.chain.vector.len();
        DVector::from_fn(2 * half, |idx, _| {
            qubit[idx / half] * Complex::new(self.chain.vector[idx % half], T::zero())
        })
    }

    pub fn evolve_total(&self, qubit: [Complex<T>; 2], t: T) -> DVector<Complex<T>> {
        self.evolution.evolve(&self.product_state(qubit), t)
    }

    /// Evolves a pure qubit state together with the chain and traces the chain.
    pub fn evolve_pure(&self, qubit: [Complex<T>; 2], t: T) -> QubitMatrix<T> {
        trace_to_site0(&self.evolve_total(qubit, t))
    }

    /// `Tr_chain[exp(-iHt) (rho (x) |Psi><Psi|) exp(iHt)]`, mixing pure
    /// evolutions over the eigen-ensemble of `rho`.
    pub fn evolve_reduced(&self, rho: &QubitMatrix<T>, t: T) -> Result<QubitMatrix<T>> {
        crate::channel::validate_qubit(rho)?;
        let eig = rho.symmetric_eigen();
        let mut out = QubitMatrix::zeros();
        for k in 0..2 {
            let w = eig.eigenvalues[k];
            if w.abs() <= T::default_epsilon() {
                continue;
            }
            let v = eig.eigenvectors.column(k);
            out += self.evolve_pure([v[0], v[1]], t) * Complex::new(w, T::zero());
        }
        Ok(out)
    }

    /// Channel tomography from the evolution of `|0>, |1>, |+>, |+i>`.
    pub fn extract_channel_tomography(&self, t: T) -> Result<ChannelTensor<T>> {
        let z = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        let s = Complex::new(T::lit(0.5).sqrt(), T::zero());
        let si = Complex::new(T::zero(), T::lit(0.5).sqrt());
        let r0 = self.evolve_pure([one, z], t);
        let r1 = self.evolve_pure([z, one], t);
        let rp = self.evolve_pure([s, s], t);
        let ri = self.evolve_pure([s, si], t);

        let i = Complex::new(T::zero(), T::one());
        let half = Complex::new(T::lit(0.5), T::zero());
        let pop = r0 + r1;
        // |0><1| = rho_+ + i rho_+i - (1+i)/2 (rho_0 + rho_1), and its adjoint
        let e01 = rp + ri * i - pop * (half + half * i);
        let e10 = rp - ri * i - pop * (half - half * i);
        let k = ChannelTensor::from_unit_images(t, [[r0, e01], [e10, r1]]);

        // fifth state: linearity residual
        let probe = [Complex::new(T::lit(0.6), T::zero()), Complex::new(T::lit(0.48), T::lit(-0.64))];
        let direct = self.evolve_pure(probe, t);
        let rho_probe = QubitMatrix::from_fn(|a, b| probe[a] * probe[b].conj());
        let residual = (k.apply(&rho_probe) - direct).iter().fold(T::zero(), |m, z| m.max(cabs(*z)));
        if residual > T::lit(1e-10).max(T::lit(1e3) * T::default_epsilon()) {
            return Err(Error::Numerical(format!("tomography linearity residual {residual}")));
        }
        Ok(k)
    }

    /// `<Psi_chain| O |Psi_chain>` for a product of Pauli operators on chain
    /// sites `1..=N`.
    pub fn chain_expectation(&self, ops: &[(usize, Pauli)]) -> Complex<T> {
        let n = self.spec.chain_len();
        let psi = self.chain.vector.map(|x| Complex::new(x, T::zero()));
        let mut phi = psi.clone();
        for &(site, op) in ops.iter().rev() {
            phi = apply_pauli(&phi, n, site - 1, op);
        }
        psi.dotc(&phi)
    }

    /// `<sigma^z_n>` in the chain ground state.
    pub fn sz(&self, site: usize) -> T {
        self.chain_expectation(&[(site, Pauli::Z)]).re
    }

    /// `<sigma^a_n sigma^z_{n+1} ... sigma^z_{m-1} sigma^a_m>` for `n < m`.
    pub fn string_correlator(&self, n: usize, m: usize, a: Pauli) -> T {
        let mut ops = vec![(n, a)];
        ops.extend((n + 1..m).map(|s| (s, Pauli::Z)));
        ops.push((m, a));
        self.chain_expectation(&ops).re
    }

    /// Total-state expectation of the Hamiltonian.
    pub fn energy(&self, psi: &DVector<Complex<T>>) -> T {
        psi.dotc(&(complexify(&self.hamiltonian.matrix) * psi)).re
    }
}

impl<T: Real> ChannelSource<T> for EdSubsystem<T> {
    fn channel_at(&self, t: T) -> Result<ChannelTensor<T>> {
        self.extract_channel_tomography(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Applies a Pauli on `site` (0-based, most significant bit first) of an
/// `n_sites` register.
pub fn apply_pauli<T: Real>(psi: &DVector<Complex<T>>, n_sites: usize, site: usize, op: Pauli) -> DVector<Complex<T>> {
    let mask = 1usize << (n_sites - 1 - site);
    let i = Complex::new(T::zero(), T::one());
    let mut out = DVector::zeros(psi.len());
    for (idx, &amp) in psi.iter().enumerate() {
        let up = idx & mask == 0;
        match op {
            Pauli::X => out[idx ^ mask] += amp,
            // sy |up> = i |down>, sy |down> = -i |up>
            Pauli::Y => out[idx ^ mask] += if up { amp * i } else { -amp * i },
            Pauli::Z => out[idx] += if up { amp } else { -amp },
        }
    }
    out
}

/// Oracle concurrence trace from two tomographic channels.
pub fn oracle_concurrence_trace<T: Real>(
    spec_a: &SubsystemSpec<T>,
    spec_b: &SubsystemSpec<T>,
    initial: BellKind,
    grid: &[T],
) -> Result<ConcurrenceTrace<T>> {
    let pair = PairModel::new(EdSubsystem::new(spec_a.clone())?, EdSubsystem::new(spec_b.clone())?);
    pair.trace(&entanglement::bell_state(initial), grid)
}

/// Two-qubit state from one dense evolution of both sides together, without
/// assuming the channel factorization.
pub fn full_pair_state<T: Real>(
    spec_a: &SubsystemSpec<T>,
    spec_b: &SubsystemSpec<T>,
    initial: BellKind,
    t: T,
) -> Result<TwoQubitState<T>> {
    let (na, nb) = (spec_a.chain_len() + 1, spec_b.chain_len() + 1);
    if na + nb > MAX_SITES {
        return Err(Error::SizeCap { sites: na + nb, limit: MAX_SITES });
    }
    let mut fields = Vec::with_capacity(na + nb);
    let mut bx = Vec::new();
    let mut by = Vec::new();
    for spec in [spec_a, spec_b] {
        let n = spec.chain_len() + 1;
        if !bx.is_empty() || !fields.is_empty() {
            // no coupling between the two sides
            bx.push(T::zero());
            by.push(T::zero());
        }
        fields.extend((0..n).map(|s| spec.site_field(s)));
        bx.extend((0..n - 1).map(|b| spec.bond_x(b)));
        by.extend((0..n - 1).map(|b| spec.bond_y(b)));
    }
    let h = xy_chain_hamiltonian(&fields, &bx, &by)?;
    let ga = chain_ground_state_ed(spec_a)?.vector;
    let gb = chain_ground_state_ed(spec_b)?.vector;

    let amps = entanglement::bell_amplitudes::<T>(initial);
    let (ca, cb) = (ga.len(), gb.len());
    let dim = 1usize << (na + nb);
    // index = ((qa * ca + chain_a) * 2 + qb) * cb + chain_b
    let psi0 = DVector::from_fn(dim, |idx, _| {
        let chain_b = idx % cb;
        let rest = idx / cb;
        let qb = rest % 2;
        let rest = rest / 2;
        let chain_a = rest % ca;
        let qa = rest / ca;
        amps[2 * qa + qb] * Complex::new(ga[chain_a] * gb[chain_b], T::zero())
    });
    let psi = DenseEvolution::new(&h).evolve(&psi0, t);

    let mut rho = Matrix4::zeros();
    for qa in 0..2 {
        for qb in 0..2 {
            for ra in 0..2 {
                for rb in 0..2 {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for a in 0..ca {
                        for b in 0..cb {
                            let i1 = ((qa * ca + a) * 2 + qb) * cb + b;
                            let i2 = ((ra * ca + a) * 2 + rb) * cb + b;
                            acc += psi[i1] * psi[i2].conj();
                        }
                    }
                    rho[(2 * qa + qb, 2 * ra + rb)] = acc;
                }
            }
        }
    }
    Ok(TwoQubitState::new_unchecked(rho))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_site_flip_flop_matrix() {
        let spec = SubsystemSpec::homogeneous(1, 1.0_f64, 0.0, 1.0, 0.0).unwrap();
        let h = build_hamiltonian(&spec).unwrap().matrix;
        let mut want = DMatrix::zeros(4, 4);
        want[(1, 2)] = -1.0;
        want[(2, 1)] = -1.0;
        assert_eq!(h, want);
    }

    #[test]
    fn field_only_single_site() {
        let h = xy_chain_hamiltonian(&[0.7_f64], &[], &[]).unwrap().matrix;
        assert_eq!(h, DMatrix::from_row_slice(2, 2, &[-0.7, 0.0, 0.0, 0.7]));
    }

    #[test]
    fn hermitian_for_random_couplings() {
        let spec = SubsystemSpec::new(
            vec![0.3, -1.2, 0.8, 0.5, 1.1, 0.9, 0.2],
            vec![0.7, 0.4, -0.6, 1.3, 0.1, 0.5, 0.8],
            vec![0.2, -0.3, 0.1, 0.5, -0.7, 0.0, 0.4, 0.9],
            0.6,
            -0.2,
            0.3,
        )
        .unwrap();
        let h = build_hamiltonian(&spec).unwrap().matrix;
        assert!((&h - h.transpose()).amax() < 1e-12);
    }

    #[test]
    fn size_cap() {
        let spec = SubsystemSpec::homogeneous(13, 1.0_f64, 0.0, 1.0, 0.0).unwrap();
        assert!(matches!(build_hamiltonian(&spec), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn saturated_chain_is_all_up() {
        let spec = SubsystemSpec::homogeneous(5, 1.0_f64, 1.5, 1.0, 0.0).unwrap();
        let gs = chain_ground_state_ed(&spec).unwrap();
        assert!((gs.vector[0].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_chain_is_refused() {
        // odd chain at zero field has a zero mode
        let spec = SubsystemSpec::homogeneous(3, 1.0_f64, 0.0, 1.0, 0.0).unwrap();
        assert!(matches!(chain_ground_state_ed(&spec), Err(Error::DegenerateGroundState { .. })));
    }

    #[test]
    fn rabi_flop_single_chain_spin() {
        // qubit down, chain spin up: excitation hops with amplitude cos(J0 t)
        let j0 = 0.8;
        let spec = SubsystemSpec::homogeneous(1, 1.0_f64, 0.1, j0, 0.1).unwrap();
        let ed = EdSubsystem::new(spec).unwrap();
        let z = Complex::new(0.0, 0.0);
        let one = Complex::new(1.0, 0.0);
        for &t in &[0.0, 0.4, 1.3, 2.9] {
            let rho = ed.evolve_pure([z, one], t);
            let sz = (rho[(0, 0)] - rho[(1, 1)]).re;
            let c2 = (j0 * t).cos().powi(2);
            assert!((sz - (1.0 - 2.0 * c2)).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn unitarity_and_energy_conservation() {
        let spec = SubsystemSpec::homogeneous(6, 1.0_f64, 0.3, 0.7, 0.2).unwrap();
        let ed = EdSubsystem::new(spec).unwrap();
        let q = [Complex::new(0.8, 0.0), Complex::new(0.0, 0.6)];
        let e0 = ed.energy(&ed.product_state(q));
        for &t in &[0.5, 2.0, 7.0] {
            let psi = ed.evolve_total(q, t);
            assert!((psi.norm_squared() - 1.0).abs() < 1e-12);
            assert!((ed.energy(&psi) - e0).abs() < 1e-10);
        }
    }

    #[test]
    fn tomography_at_zero_is_identity() {
        let spec = SubsystemSpec::homogeneous(4, 1.0_f64, 0.0, 1.0, 0.0).unwrap();
        let ed = EdSubsystem::new(spec).unwrap();
        let k = ed.extract_channel_tomography(0.0).unwrap();
        assert!(k.max_abs_diff(&ChannelTensor::identity(0.0)) < 1e-12);
    }
}
