//! Dense density matrices and quantum channels.
//!
//! Vectorization stacks columns: a qubit state maps to
//! `(rho00, rho10, rho01, rho11)`. Under that convention the natural
//! representation of a Kraus channel is `sum_k conj(K) (x) K`, which is the
//! ordering that satisfies `Phi vec(rho) = vec(sum_k K rho K^dagger)`.

use nalgebra::linalg::{SymmetricEigen, SVD};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result, TOL};

pub type CMat = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// `|i><j|` in dimension `dim`.
pub fn ket_bra(dim: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(dim, dim);
    m[(i, j)] = ONE;
    m
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn is_unitary(u: &CMat, tol: f64) -> bool {
    let n = u.nrows();
    u.ncols() == n && max_abs_diff(&(u * u.adjoint()), &CMat::identity(n, n)) <= tol
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order; each eigenvector's first
/// component with modulus above 1e-12 is made real and positive.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(src).into_owned();
        if let Some(lead) = col.iter().find(|z| z.norm() > 1e-12).copied() {
            let phase = lead.conj() / lead.norm();
            col *= phase;
        }
        vectors.set_column(dst, &col);
    }
    (values, vectors)
}

/// A Bloch vector `(x, y, z)` with `rho = (I + x X + y Y + z Z) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = BlochVector { x, y, z };
        if v.norm_sqr() > 1.0 + 1e-12 {
            return Err(Error::InvalidState(format!(
                "Bloch vector ({x}, {y}, {z}) lies outside the unit ball"
            )));
        }
        Ok(v)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Distance from the z axis.
    pub fn radius_xy(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        let m = (CMat::identity(2, 2) + pauli_x().scale(self.x) + pauli_y().scale(self.y) + pauli_z().scale(self.z))
            .scale(0.5);
        DensityMatrix::new(m, vec![2])
    }
}

/// Square complex matrix representing a quantum state on a tensor product of
/// subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMat,
    subsystem_dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: CMat, subsystem_dims: Vec<usize>) -> Result<Self> {
        let rho = Self::unchecked(entries, subsystem_dims)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Checks shape consistency only.
    pub fn unchecked(entries: CMat, subsystem_dims: Vec<usize>) -> Result<Self> {
        let dim: usize = subsystem_dims.iter().product();
        if !entries.is_square() {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, not square",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if subsystem_dims.is_empty() || subsystem_dims.contains(&0) || dim != entries.nrows() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                got: dim,
            });
        }
        Ok(DensityMatrix {
            entries,
            subsystem_dims,
        })
    }

    /// Hermitizes and renormalizes, then validates. Used on numerically
    /// propagated states.
    pub fn from_propagated(entries: CMat, subsystem_dims: Vec<usize>) -> Result<Self> {
        let herm = (&entries + entries.adjoint()).scale(0.5);
        let tr = herm.trace().re;
        if tr.abs() < 1e-300 {
            return Err(Error::InvalidState("zero trace".into()));
        }
        Self::new(herm.unscale(tr), subsystem_dims)
    }

    /// A `q`-qubit state.
    pub fn qubits(entries: CMat) -> Result<Self> {
        let n = entries.nrows();
        if !n.is_power_of_two() || n == 0 {
            return Err(Error::InvalidState(format!("dimension {n} is not 2^q")));
        }
        let q = n.trailing_zeros() as usize;
        Self::new(entries, vec![2; q.max(1)])
    }

    pub fn maximally_mixed(subsystem_dims: Vec<usize>) -> Self {
        let d: usize = subsystem_dims.iter().product();
        DensityMatrix {
            entries: CMat::identity(d, d).unscale(d as f64),
            subsystem_dims,
        }
    }

    /// Projector onto a normalized pure state.
    pub fn pure(psi: &DVector<Complex64>, subsystem_dims: Vec<usize>) -> Result<Self> {
        let norm = psi.norm();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = psi.unscale(norm);
        Self::new(&v * v.adjoint(), subsystem_dims)
    }

    /// Computational basis projector `|index><index|`.
    pub fn basis(index: usize, subsystem_dims: Vec<usize>) -> Result<Self> {
        let d: usize = subsystem_dims.iter().product();
        if index >= d {
            return Err(Error::InvalidState(format!("basis index {index} >= {d}")));
        }
        Self::new(ket_bra(d, index, index), subsystem_dims)
    }

    pub fn validate(&self) -> Result<()> {
        let herm_err = max_abs_diff(&self.entries, &self.entries.adjoint());
        if herm_err > TOL.hermitian {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm_err:e})")));
        }
        let tr = self.entries.trace();
        if (tr - ONE).norm() > TOL.trace {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = self.min_eigenvalue();
        if min < -TOL.psd {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn into_entries(self) -> CMat {
        self.entries
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.subsystem_dims
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.entries).0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// `Re tr(rho op)`.
    pub fn expectation(&self, op: &CMat) -> f64 {
        (&self.entries * op).trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// `<sigma_z>` of a single qubit.
    pub fn polarization(&self) -> f64 {
        (self.entries[(0, 0)] - self.entries[(1, 1)]).re
    }

    /// Bloch coordinates of a single-qubit state.
    pub fn bloch(&self) -> Option<BlochVector> {
        if self.dim() != 2 {
            return None;
        }
        let off = self.entries[(1, 0)];
        Some(BlochVector {
            x: 2.0 * off.re,
            y: 2.0 * off.im,
            z: self.polarization(),
        })
    }

    /// `(1/2) || rho - sigma ||_1`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.entries - &other.entries;
        0.5 * hermitian_eigen(&diff).0.iter().map(|v| v.abs()).sum::<f64>()
    }

    /// `U rho U^dagger`.
    pub fn conjugate_by(&self, u: &CMat) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.nrows(),
            });
        }
        Self::from_propagated(u * &self.entries * u.adjoint(), self.subsystem_dims.clone())
    }
}

/// `a (x) b` with concatenated subsystem structure.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    let mut dims = a.subsystem_dims.clone();
    dims.extend_from_slice(&b.subsystem_dims);
    DensityMatrix {
        entries: a.entries.kronecker(&b.entries),
        subsystem_dims: dims,
    }
}

/// Reduced state on the subsystems in `keep` (0-based, order-insensitive).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = &rho.subsystem_dims;
    let count = dims.len();
    if let Some(&index) = keep.iter().find(|&&k| k >= count) {
        return Err(Error::InvalidSubsystem { index, count });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() {
        return Err(Error::InvalidSubsystem { index: 0, count: 0 });
    }
    let is_kept: Vec<bool> = (0..count).map(|s| kept.contains(&s)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&s| dims[s]).collect();
    let kept_total: usize = kept_dims.iter().product();
    let traced_total: usize = rho.dim() / kept_total;

    // strides for big-endian multi-index
    let mut strides = vec![1usize; count];
    for s in (0..count.saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    let split = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut full = 0;
        let mut k_rem = kept_idx;
        let mut t_rem = traced_idx;
        // decode from the last subsystem so that both sub-indices stay big-endian
        for s in (0..count).rev() {
            let d = dims[s];
            let digit = if is_kept[s] {
                let v = k_rem % d;
                k_rem /= d;
                v
            } else {
                let v = t_rem % d;
                t_rem /= d;
                v
            };
            full += digit * strides[s];
        }
        full
    };

    let mut out = CMat::zeros(kept_total, kept_total);
    for t in 0..traced_total {
        let rows: Vec<usize> = (0..kept_total).map(|k| split(k, t)).collect();
        for (i, &ri) in rows.iter().enumerate() {
            for (j, &rj) in rows.iter().enumerate() {
                out[(i, j)] += rho.entries[(ri, rj)];
            }
        }
    }
    Ok(DensityMatrix {
        entries: out,
        subsystem_dims: kept_dims,
    })
}

/// Column-stacking vectorization.
pub fn vectorize(rho: &DensityMatrix) -> DVector<Complex64> {
    vec_matrix(&rho.entries)
}

pub fn vec_matrix(m: &CMat) -> DVector<Complex64> {
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec_matrix`].
pub fn unvec(v: &DVector<Complex64>) -> Result<CMat> {
    let d = (v.len() as f64).sqrt().round() as usize;
    if d * d != v.len() {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            got: v.len(),
        });
    }
    Ok(CMat::from_column_slice(d, d, v.as_slice()))
}

/// Natural representation of the channel with Kraus operators `kraus`.
pub fn natural_rep(kraus: Vec<CMat>) -> Result<ChannelRep> {
    ChannelRep::from_kraus(kraus)
}

/// A quantum channel on `dim x dim` matrices held as Kraus operators and/or
/// its natural representation.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRep {
    kraus: Option<Vec<CMat>>,
    natural: CMat,
    input_dim: usize,
    output_dim: usize,
}

impl ChannelRep {
    /// Builds the natural representation; rejects non trace-preserving sets.
    pub fn from_kraus(kraus: Vec<CMat>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let d = first.ncols();
        let dout = first.nrows();
        if kraus.iter().any(|k| k.shape() != (dout, d)) {
            return Err(Error::InvalidChannel("Kraus operators differ in shape".into()));
        }
        if d != dout {
            return Err(Error::InvalidChannel(
                "only square (endomorphic) channels are supported".into(),
            ));
        }
        let tp = kraus.iter().fold(CMat::zeros(d, d), |acc, k| acc + k.adjoint() * k);
        let err = max_abs_diff(&tp, &CMat::identity(d, d));
        if err > TOL.channel {
            return Err(Error::InvalidChannel(format!(
                "sum K^dagger K deviates from identity by {err:e}"
            )));
        }
        let natural = kraus
            .iter()
            .fold(CMat::zeros(d * d, d * d), |acc, k| acc + k.conjugate().kronecker(k));
        Ok(ChannelRep {
            kraus: Some(kraus),
            natural,
            input_dim: d,
            output_dim: d,
        })
    }

    pub fn from_natural(natural: CMat) -> Result<Self> {
        let n = natural.nrows();
        let d = (n as f64).sqrt().round() as usize;
        if !natural.is_square() || d * d != n {
            return Err(Error::InvalidChannel(format!(
                "natural representation of shape {:?} is not d^2 x d^2",
                natural.shape()
            )));
        }
        Ok(ChannelRep {
            kraus: None,
            natural,
            input_dim: d,
            output_dim: d,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_kraus(vec![CMat::identity(dim, dim)]).expect("identity is a channel")
    }

    /// Unitary conjugation `rho -> U rho U^dagger`.
    pub fn unitary(u: CMat) -> Result<Self> {
        if !is_unitary(&u, TOL.channel) {
            return Err(Error::InvalidChannel("operator is not unitary".into()));
        }
        Self::from_kraus(vec![u])
    }

    /// The replacement channel `rho -> sigma`.
    pub fn replacement(sigma: &DensityMatrix) -> Result<Self> {
        let d = sigma.dim();
        let (values, vectors) = hermitian_eigen(sigma.entries());
        let mut kraus = Vec::new();
        for (m, &lam) in values.iter().enumerate() {
            if lam <= 0.0 {
                continue;
            }
            let psi = vectors.column(m).scale(lam.sqrt());
            for j in 0..d {
                let mut k = CMat::zeros(d, d);
                k.set_column(j, &psi);
                kraus.push(k);
            }
        }
        Self::from_kraus(kraus)
    }

    pub fn kraus(&self) -> Option<&[CMat]> {
        self.kraus.as_deref()
    }

    pub fn natural(&self) -> &CMat {
        &self.natural
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    /// Applies the channel through its natural representation.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_matrix(rho.entries())?;
        DensityMatrix::from_propagated(out, rho.subsystem_dims().to_vec())
    }

    /// Action on an arbitrary operator.
    pub fn apply_matrix(&self, m: &CMat) -> Result<CMat> {
        if m.nrows() != self.input_dim || !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                got: m.nrows(),
            });
        }
        unvec(&(&self.natural * vec_matrix(m)))
    }

    /// Direct Kraus-sum action.
    pub fn apply_kraus(&self, m: &CMat) -> Option<CMat> {
        let kraus = self.kraus.as_ref()?;
        Some(
            kraus
                .iter()
                .fold(CMat::zeros(self.output_dim, self.output_dim), |acc, k| {
                    acc + k * m * k.adjoint()
                }),
        )
    }

    /// `self` applied after `first`.
    pub fn compose_after(&self, first: &ChannelRep) -> ChannelRep {
        let kraus = match (&self.kraus, &first.kraus) {
            (Some(a), Some(b)) => Some(a.iter().flat_map(|ka| b.iter().map(move |kb| ka * kb)).collect()),
            _ => None,
        };
        ChannelRep {
            kraus,
            natural: &self.natural * &first.natural,
            input_dim: first.input_dim,
            output_dim: self.output_dim,
        }
    }

    /// Natural representation of `n` repeated applications.
    pub fn natural_power(&self, n: usize) -> CMat {
        let d2 = self.natural.nrows();
        let mut result = CMat::identity(d2, d2);
        let mut base = self.natural.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        result
    }

    /// Choi matrix `sum_ij |i><j| (x) Phi(|i><j|)`.
    pub fn choi(&self) -> CMat {
        let d = self.input_dim;
        let mut choi = CMat::zeros(d * self.output_dim, d * self.output_dim);
        for i in 0..d {
            for j in 0..d {
                let image = self
                    .apply_matrix(&ket_bra(d, i, j))
                    .expect("basis operator has the input dimension");
                choi += ket_bra(d, i, j).kronecker(&image);
            }
        }
        choi
    }

    /// Deviation of `sum K^dagger K` from the identity, or of `tr Phi(|i><j|)`
    /// from `delta_ij` when no Kraus form is held.
    pub fn trace_preservation_error(&self) -> f64 {
        let d = self.input_dim;
        if let Some(kraus) = &self.kraus {
            let tp = kraus.iter().fold(CMat::zeros(d, d), |acc, k| acc + k.adjoint() * k);
            return max_abs_diff(&tp, &CMat::identity(d, d));
        }
        let mut err: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let tr = self
                    .apply_matrix(&ket_bra(d, i, j))
                    .expect("basis operator has the input dimension")
                    .trace();
                let expect = if i == j { ONE } else { ZERO };
                err = err.max((tr - expect).norm());
            }
        }
        err
    }

    pub fn min_choi_eigenvalue(&self) -> f64 {
        hermitian_eigen(&self.choi()).0.last().copied().unwrap_or(0.0)
    }

    /// Largest deviation between natural-representation and Kraus action over
    /// the given states; `None` without a Kraus form.
    pub fn compatibility_error(&self, states: &[DensityMatrix]) -> Option<f64> {
        self.kraus.as_ref()?;
        states
            .iter()
            .map(|rho| {
                let via_natural = self.apply_matrix(rho.entries()).ok()?;
                let via_kraus = self.apply_kraus(rho.entries())?;
                Some(max_abs_diff(&via_natural, &via_kraus))
            })
            .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)))
    }
}

/// The unique stationary state of `channel`.
///
/// Singular values of `Phi - I` below `TOL.eigenvalue_one` count the
/// stationary directions (eigenvalue 1 is semisimple for CPTP maps, so this
/// matches the eigenvalue multiplicity); the single null vector then gives
/// the state. Power iteration from the maximally mixed state is the fallback
/// when the direct solve misses the residual tolerance.
pub fn fixed_point(channel: &ChannelRep) -> Result<DensityMatrix> {
    let d = channel.input_dim();
    let phi = channel.natural();
    let n = phi.nrows();

    let shifted = phi - CMat::identity(n, n);
    let svd = SVD::new(shifted, false, true);
    let multiplicity = svd.singular_values.iter().filter(|&&s| s < TOL.eigenvalue_one).count();
    if multiplicity > 1 {
        return Err(Error::NonUniqueFixedPoint(multiplicity));
    }

    let dims = vec![d];
    if multiplicity == 1 {
        let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
        let idx = svd.singular_values.imin();
        let v = v_t.row(idx).adjoint();
        let m = unvec(&v)?;
        let tr = m.trace();
        if tr.norm() > 1e-14 {
            if let Ok(rho) = DensityMatrix::from_propagated(m.map(|z| z / tr), dims.clone()) {
                if fixed_point_residual(channel, &rho) <= TOL.fixed_point_residual {
                    return Ok(rho);
                }
            }
        }
    }
    power_iteration(channel, &DensityMatrix::maximally_mixed(dims))
}

/// `|| Phi vec(rho) - vec(rho) ||_2`.
pub fn fixed_point_residual(channel: &ChannelRep, rho: &DensityMatrix) -> f64 {
    let v = vectorize(rho);
    (channel.natural() * &v - v).norm()
}

/// Repeated application until successive states agree to `TOL.power_iteration`.
pub fn power_iteration(channel: &ChannelRep, start: &DensityMatrix) -> Result<DensityMatrix> {
    let phi = channel.natural();
    let mut v = vectorize(start);
    for _ in 0..TOL.power_iteration_max_iter {
        let next = phi * &v;
        let delta = (&next - &v).norm();
        v = next;
        if delta < TOL.power_iteration {
            return DensityMatrix::from_propagated(unvec(&v)?, vec![channel.input_dim()]);
        }
    }
    Err(Error::NoConvergence(TOL.power_iteration_max_iter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn thermal(eps: f64) -> DensityMatrix {
        DensityMatrix::new(
            CMat::from_diagonal(&DVector::from_vec(vec![
                c((1.0 + eps) / 2.0, 0.0),
                c((1.0 - eps) / 2.0, 0.0),
            ])),
            vec![2],
        )
        .unwrap()
    }

    #[test]
    fn tensor_of_maximally_mixed_is_maximally_mixed() {
        let half = DensityMatrix::maximally_mixed(vec![2]);
        let t = tensor(&half, &half);
        assert_eq!(t.subsystem_dims(), &[2, 2]);
        assert!(max_abs_diff(t.entries(), &CMat::identity(4, 4).unscale(4.0)) < 1e-15);
    }

    #[test]
    fn tensor_of_pure_products() {
        let zero = DensityMatrix::basis(0, vec![2]).unwrap();
        let one = DensityMatrix::basis(1, vec![2]).unwrap();
        let t = tensor(&zero, &one);
        assert_eq!(t.entries(), &ket_bra(4, 1, 1));
    }

    #[test]
    fn tensor_of_thermal_states_multiplies_populations() {
        let t = tensor(&thermal(0.5), &thermal(0.5));
        let diag: Vec<f64> = (0..4).map(|i| t.get(i, i).re).collect();
        for (got, want) in diag.iter().zip([0.5625, 0.1875, 0.1875, 0.0625]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-15);
        }
        t.validate().unwrap();
    }

    #[test]
    fn partial_trace_of_product_basis_state() {
        let psi = DensityMatrix::basis(1, vec![2, 2]).unwrap(); // |01>
        let first = partial_trace(&psi, &[0]).unwrap();
        assert_eq!(first.entries(), &ket_bra(2, 0, 0));
        let second = partial_trace(&psi, &[1]).unwrap();
        assert_eq!(second.entries(), &ket_bra(2, 1, 1));
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = DVector::from_vec(vec![c(s, 0.0), ZERO, ZERO, c(s, 0.0)]);
        let bell = DensityMatrix::pure(&psi, vec![2, 2]).unwrap();
        let red = partial_trace(&bell, &[0]).unwrap();
        assert!(max_abs_diff(red.entries(), &CMat::identity(2, 2).unscale(2.0)) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_index() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]);
        assert_eq!(
            partial_trace(&rho, &[2]),
            Err(Error::InvalidSubsystem { index: 2, count: 2 })
        );
    }

    #[test]
    fn partial_trace_middle_of_three() {
        let a = thermal(0.1);
        let b = thermal(0.7);
        let cc = thermal(-0.3);
        let abc = tensor(&tensor(&a, &b), &cc);
        let mid = partial_trace(&abc, &[1]).unwrap();
        assert!(max_abs_diff(mid.entries(), b.entries()) < 1e-15);
        let outer = partial_trace(&abc, &[2, 0]).unwrap();
        assert!(max_abs_diff(outer.entries(), tensor(&a, &cc).entries()) < 1e-15);
    }

    #[test]
    fn vectorization_stacks_columns() {
        // (1/2)[[1+e, x+iy], [x-iy, 1-e]] -> (1/2)(1+e, x-iy, x+iy, 1-e)
        let (e, x, y) = (0.3, 0.2, -0.4);
        let m = CMat::from_row_slice(2, 2, &[c(1.0 + e, 0.0), c(x, y), c(x, -y), c(1.0 - e, 0.0)]).scale(0.5);
        let rho = DensityMatrix::new(m, vec![2]).unwrap();
        let v = vectorize(&rho);
        let want = [c(1.0 + e, 0.0), c(x, -y), c(x, y), c(1.0 - e, 0.0)];
        for (got, w) in v.iter().zip(want) {
            assert!((got - w.scale(0.5)).norm() < 1e-16);
        }
        let mixed = vectorize(&DensityMatrix::maximally_mixed(vec![2]));
        assert_eq!(mixed.as_slice(), &[c(0.5, 0.0), ZERO, ZERO, c(0.5, 0.0)]);
        let ground = vectorize(&DensityMatrix::basis(0, vec![2]).unwrap());
        assert_eq!(ground.as_slice(), &[ONE, ZERO, ZERO, ZERO]);
    }

    #[test]
    fn natural_rep_factor_order_is_pinned() {
        // The SM writes K (x) K*; under column stacking the compatible order is K* (x) K.
        let k = CMat::from_row_slice(2, 2, &[c(0.6, 0.1), c(0.0, 0.3), c(-0.2, 0.0), c(0.5, -0.4)]);
        let rho = BlochVector::new(0.3, -0.5, 0.2).unwrap().to_state().unwrap();
        let direct = vec_matrix(&(&k * rho.entries() * k.adjoint()));
        let conj_first = k.conjugate().kronecker(&k) * vectorize(&rho);
        let conj_second = k.kronecker(&k.conjugate()) * vectorize(&rho);
        assert!((&conj_first - &direct).norm() < 1e-15);
        assert!((&conj_second - &direct).norm() > 1e-3);
    }

    #[test]
    fn identity_channel_has_identity_natural_rep() {
        let ch = natural_rep(vec![CMat::identity(2, 2)]).unwrap();
        assert_eq!(ch.natural(), &CMat::identity(4, 4));
    }

    #[test]
    fn bit_flip_via_natural_rep() {
        let ch = ChannelRep::unitary(pauli_x()).unwrap();
        let out = ch.apply(&DensityMatrix::basis(0, vec![2]).unwrap()).unwrap();
        assert!((vectorize(&out) - vectorize(&DensityMatrix::basis(1, vec![2]).unwrap())).norm() < 1e-15);
    }

    #[test]
    fn non_trace_preserving_kraus_is_rejected() {
        let k = CMat::identity(2, 2).scale(0.9);
        assert!(matches!(natural_rep(vec![k]), Err(Error::InvalidChannel(_))));
    }

    #[test]
    fn fixed_point_of_replacement_channel() {
        let sigma = BlochVector::new(0.1, 0.4, -0.6).unwrap().to_state().unwrap();
        let ch = ChannelRep::replacement(&sigma).unwrap();
        let fp = fixed_point(&ch).unwrap();
        assert!(max_abs_diff(fp.entries(), sigma.entries()) < 1e-12);
    }

    #[test]
    fn fixed_point_of_identity_is_not_unique() {
        assert_eq!(
            fixed_point(&ChannelRep::identity(2)),
            Err(Error::NonUniqueFixedPoint(4))
        );
    }

    #[test]
    fn power_iteration_agrees_with_direct_solve() {
        let sigma = thermal(0.35);
        let damp = ChannelRep::replacement(&sigma).unwrap();
        // half replacement, half identity: still a unique fixed point
        let mix = CMat::identity(4, 4).scale(0.5) + damp.natural().scale(0.5);
        let ch = ChannelRep::from_natural(mix).unwrap();
        let direct = fixed_point(&ch).unwrap();
        for start in [
            DensityMatrix::maximally_mixed(vec![2]),
            DensityMatrix::basis(1, vec![2]).unwrap(),
            BlochVector::new(0.7, 0.0, 0.7).unwrap().to_state().unwrap(),
        ] {
            let iter = power_iteration(&ch, &start).unwrap();
            assert!(iter.trace_distance(&direct) < 1e-8);
        }
    }

    #[test]
    fn hermitian_eigen_is_descending_with_positive_lead() {
        let m = CMat::from_row_slice(2, 2, &[c(0.2, 0.0), c(0.1, 0.3), c(0.1, -0.3), c(0.8, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!(vals[0] >= vals[1]);
        for j in 0..2 {
            let lead = vecs.column(j).iter().find(|z| z.norm() > 1e-12).copied().unwrap();
            assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
        }
    }

    #[test]
    fn invalid_states_are_rejected() {
        let not_psd = CMat::from_diagonal(&DVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(DensityMatrix::new(not_psd, vec![2]).is_err());
        let bad_trace = CMat::identity(2, 2);
        assert!(DensityMatrix::new(bad_trace, vec![2]).is_err());
        assert!(BlochVector::new(1.0, 0.5, 0.0).is_err());
    }
}
