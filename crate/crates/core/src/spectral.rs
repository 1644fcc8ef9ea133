//! Hopping matrix of a qubit + chain subsystem and the resummed Heisenberg
//! propagator coefficients.
//!
//! Site 0 is the qubit, sites `1..=N` the chain. Bond `n` joins sites `n` and
//! `n + 1`; bond 0 is the qubit-chain coupling.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Real, Result};

/// Hamiltonian parameters of one qubit and its chain.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsystemSpec<T> {
    jx: Vec<T>,
    jy: Vec<T>,
    h: Vec<T>,
    j0x: T,
    j0y: T,
    h0: T,
}

impl<T: Real> SubsystemSpec<T> {
    /// `jx`, `jy` hold the intra-chain bonds `1..N-1` (length `N - 1`), `h`
    /// the chain fields (length `N`).
    pub fn new(jx: Vec<T>, jy: Vec<T>, h: Vec<T>, j0x: T, j0y: T, h0: T) -> Result<Self> {
        let n = h.len();
        if n == 0 {
            return Err(Error::InvalidSpec("chain needs at least one spin".into()));
        }
        if jx.len() != n - 1 || jy.len() != n - 1 {
            return Err(Error::InvalidSpec(format!(
                "expected {} intra-chain bonds, got jx={} jy={}",
                n - 1,
                jx.len(),
                jy.len()
            )));
        }
        let all_finite = jx
            .iter()
            .chain(&jy)
            .chain(&h)
            .chain([&j0x, &j0y, &h0])
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidSpec("couplings and fields must be finite".into()));
        }
        Ok(Self { jx, jy, h, j0x, j0y, h0 })
    }

    /// Uniform chain of `n` spins with `J^x = J^y = j`, field `h`, isotropic
    /// qubit coupling `j0` and qubit field `h0`.
    pub fn homogeneous(n: usize, j: T, h: T, j0: T, h0: T) -> Result<Self> {
        Self::new(
            vec![j; n.saturating_sub(1)],
            vec![j; n.saturating_sub(1)],
            vec![h; n],
            j0,
            j0,
            h0,
        )
    }

    pub fn with_qubit_coupling(mut self, j0x: T, j0y: T) -> Result<Self> {
        self.j0x = j0x;
        self.j0y = j0y;
        Self::new(self.jx, self.jy, self.h, self.j0x, self.j0y, self.h0)
    }

    pub fn with_qubit_field(mut self, h0: T) -> Result<Self> {
        self.h0 = h0;
        Self::new(self.jx, self.jy, self.h, self.j0x, self.j0y, self.h0)
    }

    pub fn chain_len(&self) -> usize {
        self.h.len()
    }

    pub fn jx(&self) -> &[T] {
        &self.jx
    }

    pub fn jy(&self) -> &[T] {
        &self.jy
    }

    pub fn chain_fields(&self) -> &[T] {
        &self.h
    }

    pub fn j0x(&self) -> T {
        self.j0x
    }

    pub fn j0y(&self) -> T {
        self.j0y
    }

    pub fn h0(&self) -> T {
        self.h0
    }

    /// `J^x` of bond `n`, with bond 0 the qubit coupling.
    pub fn bond_x(&self, n: usize) -> T {
        if n == 0 {
            self.j0x
        } else {
            self.jx[n - 1]
        }
    }

    pub fn bond_y(&self, n: usize) -> T {
        if n == 0 {
            self.j0y
        } else {
            self.jy[n - 1]
        }
    }

    /// Field on site `n`, site 0 being the qubit.
    pub fn site_field(&self, n: usize) -> T {
        if n == 0 {
            self.h0
        } else {
            self.h[n - 1]
        }
    }

    pub fn is_isotropic(&self) -> bool {
        self.j0x == self.j0y && self.jx == self.jy
    }

    /// `(J, h)` when the chain is a uniform XX chain.
    pub fn uniform_xx_chain(&self) -> Option<(T, T)> {
        let h = self.h[0];
        if self.h.iter().any(|&v| v != h) || self.jx != self.jy {
            return None;
        }
        match self.jx.first() {
            None => Some((T::one(), h)),
            Some(&j) if self.jx.iter().all(|&v| v == j) => Some((j, h)),
            Some(_) => None,
        }
    }
}

/// The `(N+1) x (N+1)` tridiagonal matrix driving the Majorana evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct HoppingMatrix<T: Real> {
    matrix: DMatrix<T>,
}

impl<T: Real> HoppingMatrix<T> {
    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// `v_i = delta_{i0}`.
    pub fn selector(&self) -> DVector<T> {
        let mut v = DVector::zeros(self.size());
        v[0] = T::one();
        v
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }

    pub fn transpose(&self) -> Self {
        Self { matrix: self.matrix.transpose() }
    }
}

/// `tau[i][i-1] = J^y_{i-1}`, `tau[i][i+1] = J^x_i`, `tau[i][i] = -2 h_i`.
pub fn build_tau<T: Real>(spec: &SubsystemSpec<T>) -> HoppingMatrix<T> {
    let size = spec.chain_len() + 1;
    let mut matrix = DMatrix::zeros(size, size);
    let two = T::lit(2.0);
    for i in 0..size {
        matrix[(i, i)] = -two * spec.site_field(i);
        if i + 1 < size {
            matrix[(i, i + 1)] = spec.bond_x(i);
            matrix[(i + 1, i)] = spec.bond_y(i);
        }
    }
    HoppingMatrix { matrix }
}

/// `tau = U diag(lambda) V^T` with orthogonal `U`, `V` and non-negative
/// singular values sorted in descending order.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T: Real> {
    pub u: DMatrix<T>,
    pub v: DMatrix<T>,
    pub singular_values: DVector<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn size(&self) -> usize {
        self.singular_values.len()
    }

    pub fn reconstruct(&self) -> DMatrix<T> {
        &self.u * DMatrix::from_diagonal(&self.singular_values) * self.v.transpose()
    }
}

/// Singular value decomposition of `tau`.
///
/// A symmetric `tau` (isotropic couplings) goes through the symmetric
/// eigensolver, `U = Q`, `V = Q sign(L)`, so that the `x` and `y` flux
/// vectors coincide exactly instead of up to rounding amplified by nearly
/// degenerate singular values.
pub fn svd_tau<T: Real>(tau: &HoppingMatrix<T>) -> Result<SpectralDecomposition<T>> {
    let n = tau.size();
    let (u, v, values) = if tau.is_symmetric() {
        let eig = nalgebra::SymmetricEigen::try_new(tau.matrix.clone(), T::default_epsilon(), 0)
            .ok_or_else(|| Error::Numerical("eigendecomposition of hopping matrix did not converge".into()))?;
        let mut v = eig.eigenvectors.clone();
        for (k, &l) in eig.eigenvalues.iter().enumerate() {
            if l < T::zero() {
                v.column_mut(k).neg_mut();
            }
        }
        (eig.eigenvectors, v, eig.eigenvalues.map(|l| l.abs()))
    } else {
        let svd = nalgebra::SVD::try_new(tau.matrix.clone(), true, true, T::default_epsilon(), 0)
            .ok_or_else(|| Error::Numerical("SVD of hopping matrix did not converge".into()))?;
        match (svd.u, svd.v_t) {
            (Some(u), Some(v_t)) => (u, v_t.transpose(), svd.singular_values),
            _ => return Err(Error::Numerical("SVD returned no singular vectors".into())),
        }
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(std::cmp::Ordering::Equal));
    let mut su = DMatrix::zeros(n, n);
    let mut sv = DMatrix::zeros(n, n);
    let mut sl = DVector::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        su.set_column(dst, &u.column(src));
        sv.set_column(dst, &v.column(src));
        sl[dst] = values[src];
    }

    let dec = SpectralDecomposition { u: su, v: sv, singular_values: sl };
    let scale = tau.matrix.norm().max(T::one());
    let residual = (dec.reconstruct() - &tau.matrix).norm() / scale;
    if !(residual <= T::default_epsilon().sqrt()) {
        return Err(Error::Numerical(format!(
            "SVD reconstruction residual {residual} too large"
        )));
    }
    Ok(dec)
}

/// The four flux vectors at time `t`.
///
/// `pi_x = U cos(Lt) U^T v`, `delta_x = V sin(Lt) U^T v`,
/// `pi_y = V cos(Lt) V^T v`, `delta_y = U sin(Lt) V^T v`.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorCoefficients<T: Real> {
    pub t: T,
    pub pi_x: DVector<T>,
    pub delta_x: DVector<T>,
    pub pi_y: DVector<T>,
    pub delta_y: DVector<T>,
}

impl<T: Real> PropagatorCoefficients<T> {
    pub fn len(&self) -> usize {
        self.pi_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi_x.is_empty()
    }

    /// `(sum pi_x^2 + delta_x^2, sum pi_y^2 + delta_y^2)`, both 1 exactly.
    pub fn flux(&self) -> (T, T) {
        (
            self.pi_x.norm_squared() + self.delta_x.norm_squared(),
            self.pi_y.norm_squared() + self.delta_y.norm_squared(),
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        [
            (&self.pi_x, &other.pi_x),
            (&self.delta_x, &other.delta_x),
            (&self.pi_y, &other.pi_y),
            (&self.delta_y, &other.delta_y),
        ]
        .iter()
        .map(|(a, b)| (*a - *b).amax())
        .fold(T::zero(), |acc, v| acc.max(v))
    }
}

pub fn propagator_coeffs<T: Real>(dec: &SpectralDecomposition<T>, t: T) -> PropagatorCoefficients<T> {
    let cos = dec.singular_values.map(|l| (l * t).cos());
    let sin = dec.singular_values.map(|l| (l * t).sin());
    // U^T v and V^T v are the first rows of U and V
    let ut_v = dec.u.row(0).transpose();
    let vt_v = dec.v.row(0).transpose();

    PropagatorCoefficients {
        t,
        pi_x: &dec.u * cos.component_mul(&ut_v),
        delta_x: &dec.v * sin.component_mul(&ut_v),
        pi_y: &dec.v * cos.component_mul(&vt_v),
        delta_y: &dec.u * sin.component_mul(&vt_v),
    }
}

/// Truncated Taylor series of the propagator; a reference for small `t`.
pub fn propagator_coeffs_series<T: Real>(
    tau: &HoppingMatrix<T>,
    t: T,
    p_max: usize,
) -> Result<PropagatorCoefficients<T>> {
    let v = tau.selector();
    let (pi_x, delta_x) = series_pair(&tau.matrix, &v, t, p_max)?;
    let (pi_y, delta_y) = series_pair(&tau.matrix.transpose(), &v, t, p_max)?;
    Ok(PropagatorCoefficients { t, pi_x, delta_x, pi_y, delta_y })
}

fn series_pair<T: Real>(
    tau: &DMatrix<T>,
    v: &DVector<T>,
    t: T,
    p_max: usize,
) -> Result<(DVector<T>, DVector<T>)> {
    let gram = tau * tau.transpose();
    let tau_t = tau.transpose();
    let t2 = t * t;

    // cos term: (-1)^p t^{2p}/(2p)! (tau tau^T)^p v
    let mut cos_term = v.clone();
    // sin term: (-1)^p t^{2p+1}/(2p+1)! tau^T (tau tau^T)^p v = tau^T cos_term t/(2p+1)
    let mut sin_term = &tau_t * v * t;
    let mut pi = cos_term.clone();
    let mut delta = sin_term.clone();
    for p in 1..=p_max {
        let k = T::from_usize_lossy(2 * p);
        cos_term = &gram * &cos_term * (-t2 / ((k - T::one()) * k));
        sin_term = &tau_t * &cos_term * (t / (k + T::one()));
        pi += &cos_term;
        delta += &sin_term;
        if !(pi.iter().chain(delta.iter()).all(|x| x.is_finite())) {
            return Err(Error::Numerical(format!(
                "series overflow at order {p} for t = {t}"
            )));
        }
    }
    Ok((pi, delta))
}
