//! Exact single-qubit reduced dynamics.
//!
//! In Majorana form (`a_n = P_n sigma^x_n`, `b_n = P_n sigma^y_n`, string
//! `P_n` over sites `0..n`) the Heisenberg equations read
//! `da/dt = -tau^T b`, `db/dt = tau a`, hence
//!
//! ```text
//! sigma^x_0(t) = sum_n  pi^y_n a_n - delta^y_n b_n
//! sigma^y_0(t) = sum_n  delta^x_n a_n + pi^x_n b_n
//! ```
//!
//! with the flux vectors of [`crate::spectral`]. For a product initial state
//! with the chain in a parity eigenstate only the `n = 0` terms survive in the
//! transverse components, and `<sigma^z_0(t)> = -i <sigma^x_0(t) sigma^y_0(t)>`
//! contracts the chain part against `W = -i <a b>`.

use nalgebra::{DMatrix, Matrix2, Matrix3, Matrix4, Vector3};
use num_complex::Complex;

use crate::chain::{self, GroundStateCorrelators};
use crate::spectral::{self, HoppingMatrix, PropagatorCoefficients, SpectralDecomposition, SubsystemSpec};
use crate::{cabs, Error, Real, Result};

/// Single-qubit density matrix in the basis `|0> = up`, `|1> = down`.
pub type QubitMatrix<T> = Matrix2<Complex<T>>;

/// `r(t) = A r(0) + m` on Bloch vectors `(<sigma^x>, <sigma^y>, <sigma^z>)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochAffineMap<T: Real> {
    pub t: T,
    pub a: Matrix3<T>,
    pub m: Vector3<T>,
}

impl<T: Real> BlochAffineMap<T> {
    pub fn identity(t: T) -> Self {
        Self { t, a: Matrix3::identity(), m: Vector3::zeros() }
    }

    pub fn apply(&self, r: &Vector3<T>) -> Vector3<T> {
        self.a * r + self.m
    }

    /// Reads the affine map back off a channel tensor.
    pub fn from_channel(k: &ChannelTensor<T>) -> Self {
        let paulis = pauli::<T>();
        let image_of = |rho: &QubitMatrix<T>| -> Vector3<T> {
            let out = k.apply(rho);
            Vector3::from_fn(|i, _| (paulis[i] * out).trace().re)
        };
        let half = T::lit(0.5);
        let id = QubitMatrix::<T>::identity() * Complex::new(half, T::zero());
        let m = image_of(&id);
        let mut a = Matrix3::zeros();
        for j in 0..3 {
            let rho = id + paulis[j] * Complex::new(half, T::zero());
            let col = image_of(&rho) - m;
            a.set_column(j, &col);
        }
        Self { t: k.t, a, m }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.a - other.a).amax().max((self.m - other.m).amax())
    }
}

/// Builds the affine Bloch map from the flux vectors and chain correlators.
pub fn bloch_map<T: Real>(
    coeffs: &PropagatorCoefficients<T>,
    corr: &GroundStateCorrelators<T>,
) -> Result<BlochAffineMap<T>> {
    let n = corr.chain_len();
    if coeffs.len() != n + 1 {
        return Err(Error::DimensionMismatch(format!(
            "{} flux components for a chain of {} spins",
            coeffs.len(),
            n
        )));
    }
    let (px, py, dx, dy) = (&coeffs.pi_x, &coeffs.pi_y, &coeffs.delta_x, &coeffs.delta_y);

    let mut a = Matrix3::zeros();
    a[(0, 0)] = py[0];
    a[(0, 1)] = -dy[0];
    a[(1, 0)] = dx[0];
    a[(1, 1)] = px[0];
    a[(2, 2)] = px[0] * py[0] + dx[0] * dy[0];

    // chain block of W: sz on the diagonal, minus the string correlators off it
    let w = DMatrix::from_fn(n, n, |i, j| if i == j { corr.sz[i] } else { -corr.g[(i, j)] });
    let chain = |v: &nalgebra::DVector<T>| v.rows(1, n).into_owned();
    let mz = chain(py).dot(&(&w * chain(px))) + chain(dx).dot(&(&w * chain(dy)));

    Ok(BlochAffineMap { t: coeffs.t, a, m: Vector3::new(T::zero(), T::zero(), mz) })
}

/// Superoperator `rho_ij(t) = sum_pr K[i][j][p][r] rho_pr(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTensor<T: Real> {
    pub t: T,
    k: [[[[Complex<T>; 2]; 2]; 2]; 2],
}

impl<T: Real> ChannelTensor<T> {
    pub fn identity(t: T) -> Self {
        let mut k = [[[[Complex::new(T::zero(), T::zero()); 2]; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                k[i][j][i][j] = Complex::new(T::one(), T::zero());
            }
        }
        Self { t, k }
    }

    /// Assembles the tensor from the images `E(|p><r|)` of the matrix units.
    pub fn from_unit_images(t: T, images: [[QubitMatrix<T>; 2]; 2]) -> Self {
        let mut k = [[[[Complex::new(T::zero(), T::zero()); 2]; 2]; 2]; 2];
        for p in 0..2 {
            for r in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        k[i][j][p][r] = images[p][r][(i, j)];
                    }
                }
            }
        }
        Self { t, k }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, p: usize, r: usize) -> Complex<T> {
        self.k[i][j][p][r]
    }

    pub fn apply(&self, rho: &QubitMatrix<T>) -> QubitMatrix<T> {
        QubitMatrix::from_fn(|i, j| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for p in 0..2 {
                for r in 0..2 {
                    acc += self.k[i][j][p][r] * rho[(p, r)];
                }
            }
            acc
        })
    }

    /// `sum_{pr} |p><r| (x) E(|p><r|)`, rows indexed `2p + i`.
    pub fn choi(&self) -> Matrix4<Complex<T>> {
        Matrix4::from_fn(|row, col| {
            let (p, i) = (row / 2, row % 2);
            let (r, j) = (col / 2, col % 2);
            self.k[i][j][p][r]
        })
    }

    pub fn min_choi_eigenvalue(&self) -> T {
        self.choi().symmetric_eigenvalues().min()
    }

    /// `max_{p,r} |sum_i K[i][i][p][r] - delta_pr|`.
    pub fn trace_defect(&self) -> T {
        let mut worst = T::zero();
        for p in 0..2 {
            for r in 0..2 {
                let mut s = self.k[0][0][p][r] + self.k[1][1][p][r];
                if p == r {
                    s -= Complex::new(T::one(), T::zero());
                }
                worst = worst.max(cabs(s));
            }
        }
        worst
    }

    /// `max |K[i][j][p][r] - conj(K[j][i][r][p])|`.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for r in 0..2 {
                        worst = worst.max(cabs(self.k[i][j][p][r] - self.k[j][i][r][p].conj()));
                    }
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for r in 0..2 {
                        worst = worst.max(cabs(self.k[i][j][p][r] - other.k[i][j][p][r]));
                    }
                }
            }
        }
        worst
    }
}

/// Tolerance on the most negative Choi eigenvalue.
pub fn cp_tolerance<T: Real>() -> T {
    T::lit(1e-8).max(T::lit(100.0) * T::default_epsilon())
}

pub(crate) fn pauli<T: Real>() -> [QubitMatrix<T>; 3] {
    let z = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    [
        QubitMatrix::new(z, one, one, z),
        QubitMatrix::new(z, -i, i, z),
        QubitMatrix::new(one, z, z, -one),
    ]
}

/// Superoperator of an affine Bloch map; errors if the result is not
/// completely positive within [`cp_tolerance`].
pub fn channel_superop<T: Real>(map: &BlochAffineMap<T>) -> Result<ChannelTensor<T>> {
    let k = superop_unchecked(map);
    let min_eig = k.min_choi_eigenvalue();
    if min_eig < -cp_tolerance::<T>() {
        return Err(Error::Numerical(format!(
            "channel at t = {} is not completely positive (Choi eigenvalue {min_eig})",
            map.t
        )));
    }
    Ok(k)
}

pub(crate) fn superop_unchecked<T: Real>(map: &BlochAffineMap<T>) -> ChannelTensor<T> {
    let paulis = pauli::<T>();
    let half = Complex::new(T::lit(0.5), T::zero());
    let real = |x: T| Complex::new(x, T::zero());
    // E(I) and E(sigma_i)
    let mut id_image = QubitMatrix::identity();
    for j in 0..3 {
        id_image += paulis[j] * real(map.m[j]);
    }
    let sigma_images: Vec<QubitMatrix<T>> = (0..3)
        .map(|i| {
            let mut acc = QubitMatrix::zeros();
            for j in 0..3 {
                acc += paulis[j] * real(map.a[(j, i)]);
            }
            acc
        })
        .collect();

    // |p><r| = 1/2 (delta_pr I + sum_i (sigma_i)_{rp} sigma_i)
    let mut images = [[QubitMatrix::zeros(); 2]; 2];
    for p in 0..2 {
        for r in 0..2 {
            let mut img = if p == r { id_image } else { QubitMatrix::zeros() };
            for i in 0..3 {
                img += sigma_images[i] * paulis[i][(r, p)];
            }
            images[p][r] = img * half;
        }
    }
    ChannelTensor::from_unit_images(map.t, images)
}

/// Validates a single-qubit density matrix.
pub fn validate_qubit<T: Real>(rho: &QubitMatrix<T>) -> Result<()> {
    let tol = T::lit(1e-10).max(T::lit(100.0) * T::default_epsilon());
    let herm = (rho - rho.adjoint()).iter().fold(T::zero(), |a, z| a.max(cabs(*z)));
    if herm > tol {
        return Err(Error::InvalidState(format!("not Hermitian (defect {herm})")));
    }
    let tr = rho.trace();
    if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
        return Err(Error::InvalidState(format!("trace {tr} != 1")));
    }
    let min = rho.symmetric_eigenvalues().min();
    if min < -tol {
        return Err(Error::InvalidState(format!("negative eigenvalue {min}")));
    }
    Ok(())
}

pub fn evolve_single_qubit<T: Real>(k: &ChannelTensor<T>, rho0: &QubitMatrix<T>) -> Result<QubitMatrix<T>> {
    validate_qubit(rho0)?;
    Ok(k.apply(rho0))
}

/// Density matrix `(I + r . sigma) / 2`.
pub fn qubit_from_bloch<T: Real>(r: &Vector3<T>) -> QubitMatrix<T> {
    let paulis = pauli::<T>();
    let mut rho = QubitMatrix::identity();
    for i in 0..3 {
        rho += paulis[i] * Complex::new(r[i], T::zero());
    }
    rho * Complex::new(T::lit(0.5), T::zero())
}

pub fn bloch_vector<T: Real>(rho: &QubitMatrix<T>) -> Vector3<T> {
    let paulis = pauli::<T>();
    Vector3::from_fn(|i, _| (paulis[i] * rho).trace().re)
}

/// Anything that can produce the single-qubit channel of one side at time `t`.
pub trait ChannelSource<T: Real>: Sync {
    fn channel_at(&self, t: T) -> Result<ChannelTensor<T>>;
}

/// One prepared qubit + chain side: hopping matrix, its decomposition and the
/// chain ground-state correlators.
#[derive(Debug, Clone)]
pub struct SubsystemModel<T: Real> {
    spec: SubsystemSpec<T>,
    tau: HoppingMatrix<T>,
    decomposition: SpectralDecomposition<T>,
    correlators: GroundStateCorrelators<T>,
}

impl<T: Real> SubsystemModel<T> {
    pub fn new(spec: SubsystemSpec<T>) -> Result<Self> {
        let (j, h) = spec.uniform_xx_chain().ok_or_else(|| {
            Error::UnsupportedChain("ground-state correlators need a uniform XX chain".into())
        })?;
        let correlators = chain::ground_state(spec.chain_len(), j, h)?;
        let tau = spectral::build_tau(&spec);
        let decomposition = spectral::svd_tau(&tau)?;
        Ok(Self { spec, tau, decomposition, correlators })
    }

    /// Uses caller-supplied chain correlators instead of the ground state.
    pub fn with_correlators(spec: SubsystemSpec<T>, correlators: GroundStateCorrelators<T>) -> Result<Self> {
        if correlators.chain_len() != spec.chain_len() {
            return Err(Error::DimensionMismatch("correlator table size".into()));
        }
        let tau = spectral::build_tau(&spec);
        let decomposition = spectral::svd_tau(&tau)?;
        Ok(Self { spec, tau, decomposition, correlators })
    }

    pub fn spec(&self) -> &SubsystemSpec<T> {
        &self.spec
    }

    pub fn tau(&self) -> &HoppingMatrix<T> {
        &self.tau
    }

    pub fn decomposition(&self) -> &SpectralDecomposition<T> {
        &self.decomposition
    }

    pub fn correlators(&self) -> &GroundStateCorrelators<T> {
        &self.correlators
    }

    pub fn coefficients(&self, t: T) -> PropagatorCoefficients<T> {
        spectral::propagator_coeffs(&self.decomposition, t)
    }

    pub fn bloch_map(&self, t: T) -> Result<BlochAffineMap<T>> {
        bloch_map(&self.coefficients(t), &self.correlators)
    }
}

impl<T: Real> ChannelSource<T> for SubsystemModel<T> {
    fn channel_at(&self, t: T) -> Result<ChannelTensor<T>> {
        channel_superop(&self.bloch_map(t)?)
    }
}
