//! Dense complex linear algebra sized for operators up to a few hundred
//! rows: Hermitian eigendecomposition (cyclic Jacobi), Kronecker products,
//! partial trace, commutators, Uhlmann fidelity, and von Neumann entropy.
//!
//! Everything here is a pure function over immutable values; matrices are
//! stored dense and row-major. Entropies are in base 2 (ebits).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{abs, hypot, log2, sqrt};

/// Relative tolerance for the Hermiticity contract `A = A†`.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues of density operators down to this floor are clamped to zero;
/// anything more negative is a positivity-contract violation.
pub const PSD_TOL: f64 = 1e-10;
/// Tolerance on `Tr ρ = 1` for density operators.
pub const TRACE_TOL: f64 = 1e-10;

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0 / dim as f64, 0.0));
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from row-major real/imaginary pairs.
    pub fn from_pairs(dim: usize, entries: &[[f64; 2]]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::contract(format!(
                "matrix needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(ComplexMatrix {
            dim,
            data: entries.iter().map(|e| Complex64::new(e[0], e[1])).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn add_scaled_assign(&mut self, other: &Self, s: f64) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|z| hypot(z.re, z.im))
            .fold(0.0, f64::max)
    }

    /// Worst deviation from `A = A†`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let r = (self.get(i, j) - self.get(j, i).conj()).norm();
                if r > worst {
                    worst = r;
                }
            }
        }
        worst
    }
}

/// Kronecker product: `(a ⊗ b)[i·db+k][j·db+l] = a[i][j] · b[k][l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let n = da * db;
    let mut out = ComplexMatrix::zeros(n);
    for i in 0..da {
        for j in 0..da {
            let aij = a.get(i, j);
            if aij.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    out.set(i * db + k, j * db + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Dense Hermitian operator; the constructor enforces `A = A†` up to
/// round-off relative to `max(1, max|A|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    m: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let tol = HERMITICITY_TOL * m.max_abs().max(1.0);
        let res = m.hermiticity_residual();
        if res > tol {
            return Err(Error::contract(format!(
                "matrix is not Hermitian: residual {res:.3e} exceeds {tol:.3e}"
            )));
        }
        Ok(HermitianOperator { m })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn trace_real(&self) -> f64 {
        self.m.trace().re
    }
}

/// Pure state over a tensor-product Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    local_dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(local_dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if local_dims.is_empty() || local_dims.iter().any(|&d| d == 0) {
            return Err(Error::contract("local dimensions must be positive"));
        }
        let dim: usize = local_dims.iter().product();
        if amplitudes.len() != dim {
            return Err(Error::contract(format!(
                "state needs {dim} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if abs(norm_sq - 1.0) > 1e-12 {
            return Err(Error::contract(format!(
                "state is not normalized: |ψ|² = {norm_sq:.15}"
            )));
        }
        Ok(PureState {
            local_dims,
            amplitudes,
        })
    }

    /// Normalizes the amplitude vector before constructing the state.
    pub fn normalized(local_dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::contract("cannot normalize the zero vector"));
        }
        let inv = 1.0 / sqrt(norm_sq);
        Self::new(local_dims, amplitudes.into_iter().map(|a| a * inv).collect())
    }

    pub fn local_dims(&self) -> &[usize] {
        &self.local_dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// The projector `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> HermitianOperator {
        let n = self.dim();
        let m = ComplexMatrix::from_fn(n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        HermitianOperator { m }
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::contract("overlap of states with different dims"));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Result of a Hermitian eigendecomposition, eigenvalues ascending and
/// eigenvectors in the matching columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Complex plane rotations annihilate one off-diagonal element at a time;
/// sweeps repeat until the off-diagonal Frobenius mass is at round-off
/// level. Accurate and foolproof at the dimensions used here (≤ few hundred).
pub fn eig_hermitian(a: &HermitianOperator) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m = a.matrix().clone();
    let mut v = ComplexMatrix::identity(n);
    if n > 1 {
        let fro = m.frobenius_norm();
        let stop = 1e-14 * fro.max(f64::MIN_POSITIVE);
        let mut converged = false;
        for sweep in 0..JACOBI_MAX_SWEEPS {
            if off_diagonal_norm(&m) <= stop {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    jacobi_rotate(&mut m, &mut v, p, q, sweep);
                }
            }
        }
        if !converged && off_diagonal_norm(&m) > stop {
            return Err(Error::Convergence(format!(
                "Jacobi eigensolver did not converge within {JACOBI_MAX_SWEEPS} sweeps (dim {n})"
            )));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |r, c| v.get(r, order[c]));
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m.get(i, j).norm_sqr();
            }
        }
    }
    sqrt(s)
}

fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, sweep: usize) {
    let apq = m.get(p, q);
    let mag = hypot(apq.re, apq.im);
    if mag == 0.0 {
        return;
    }
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    // After a few sweeps, elements that no longer perturb the diagonal at
    // f64 precision are flushed to zero instead of rotated.
    let g = 100.0 * mag;
    if sweep > 3 && abs(app) + g == abs(app) && abs(aqq) + g == abs(aqq) {
        m.set(p, q, Complex64::new(0.0, 0.0));
        m.set(q, p, Complex64::new(0.0, 0.0));
        return;
    }

    let u = apq / mag; // phase of the off-diagonal element
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau == 0.0 {
        1.0
    } else {
        let sign = if tau > 0.0 { 1.0 } else { -1.0 };
        -sign / (abs(tau) + sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / sqrt(1.0 + t * t);
    let s = t * c;

    let n = m.dim();
    let su = u * s;
    // Right-multiply by J (columns p, q), then left-multiply by J† (rows).
    for k in 0..n {
        let mkp = m.get(k, p);
        let mkq = m.get(k, q);
        m.set(k, p, mkp * c + mkq * su.conj());
        m.set(k, q, mkq * c - mkp * su);
    }
    for k in 0..n {
        let mpk = m.get(p, k);
        let mqk = m.get(q, k);
        m.set(p, k, mpk * c + mqk * su);
        m.set(q, k, mqk * c - mpk * su.conj());
    }
    // Pin the annihilated pair and the diagonal to exact values.
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));
    let dp = m.get(p, p).re;
    let dq = m.get(q, q).re;
    m.set(p, p, Complex64::new(dp, 0.0));
    m.set(q, q, Complex64::new(dq, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c + vkq * su.conj());
        v.set(k, q, vkq * c - vkp * su);
    }
}

/// Traces out the subsystems not listed in `keep`; `keep` must be strictly
/// increasing. The output keeps the original ordering of the kept parties.
pub fn partial_trace(
    rho: &HermitianOperator,
    local_dims: &[usize],
    keep: &[usize],
) -> Result<HermitianOperator> {
    let total: usize = local_dims.iter().product();
    if total != rho.dim() {
        return Err(Error::contract(format!(
            "subsystem dims multiply to {total}, operator dim is {}",
            rho.dim()
        )));
    }
    if keep.is_empty() {
        return Err(Error::contract("keep set must be non-empty"));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= local_dims.len()) {
        return Err(Error::contract(
            "keep indices must be strictly increasing and in range",
        ));
    }

    let traced: Vec<usize> = (0..local_dims.len()).filter(|i| !keep.contains(i)).collect();
    let keep_dim: usize = keep.iter().map(|&i| local_dims[i]).product();
    let tr_dim: usize = traced.iter().map(|&i| local_dims[i]).product();

    // Strides of each subsystem in the flattened index.
    let mut strides = vec![1usize; local_dims.len()];
    for i in (0..local_dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * local_dims[i + 1];
    }
    let offset_for = |subsys: &[usize], mut flat: usize| -> usize {
        let mut off = 0;
        for &s in subsys.iter().rev() {
            off += (flat % local_dims[s]) * strides[s];
            flat /= local_dims[s];
        }
        off
    };
    let keep_offsets: Vec<usize> = (0..keep_dim).map(|k| offset_for(keep, k)).collect();
    let tr_offsets: Vec<usize> = (0..tr_dim).map(|t| offset_for(&traced, t)).collect();

    let mut out = ComplexMatrix::zeros(keep_dim);
    for (ki, &ri) in keep_offsets.iter().enumerate() {
        for (kj, &rj) in keep_offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &t in &tr_offsets {
                acc += rho.matrix().get(ri + t, rj + t);
            }
            out.set(ki, kj, acc);
        }
    }
    HermitianOperator::new(out)
}

/// Frobenius norm of the commutator `AB - BA`.
pub fn commutator_norm(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::contract("commutator of operators with different dims"));
    }
    let ab = a.matrix().mul(b.matrix());
    let ba = b.matrix().mul(a.matrix());
    Ok(ab.sub(&ba).frobenius_norm())
}

/// Eigendecomposition of a density operator with the unit-trace and
/// positivity contracts enforced; negative round-off eigenvalues are
/// clamped to zero.
fn eig_density(rho: &HermitianOperator, who: &str) -> Result<EigenDecomposition> {
    let tr = rho.trace_real();
    if abs(tr - 1.0) > TRACE_TOL {
        return Err(Error::contract(format!("{who} has trace {tr:.12}, expected 1")));
    }
    let mut eig = eig_hermitian(rho)?;
    for lam in eig.eigenvalues.iter_mut() {
        if *lam < -PSD_TOL {
            return Err(Error::contract(format!(
                "{who} has negative eigenvalue {lam:.3e}"
            )));
        }
        if *lam < 0.0 {
            *lam = 0.0;
        }
    }
    Ok(eig)
}

/// Uhlmann root fidelity `F(ρ, σ) = Tr √(√ρ σ √ρ)`, clamped into [0, 1].
///
/// With this convention `1 - F(ρ_p, ρ_{p+dp}) ≈ F_Q dp²/8` for small `dp`,
/// which is what the finite-difference QFI engine relies on.
pub fn fidelity(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::contract("fidelity of states with different dims"));
    }
    let er = eig_density(rho, "rho")?;
    eig_density(sigma, "sigma")?;

    let n = rho.dim();
    let mut sqrt_rho = ComplexMatrix::zeros(n);
    for k in 0..n {
        let s = sqrt(er.eigenvalues[k]);
        if s == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = er.eigenvectors.get(i, k) * s;
            for j in 0..n {
                let add = vik * er.eigenvectors.get(j, k).conj();
                let cur = sqrt_rho.get(i, j);
                sqrt_rho.set(i, j, cur + add);
            }
        }
    }
    let mut b = sqrt_rho.mul(sigma.matrix()).mul(&sqrt_rho);
    // Symmetrize away the round-off before decomposing.
    for i in 0..n {
        for j in i..n {
            let avg = (b.get(i, j) + b.get(j, i).conj()) * 0.5;
            b.set(i, j, avg);
            b.set(j, i, avg.conj());
        }
    }
    let eb = eig_hermitian(&HermitianOperator { m: b })?;
    let f: f64 = eb
        .eigenvalues
        .iter()
        .map(|&lam| if lam > 0.0 { sqrt(lam) } else { 0.0 })
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Von Neumann entropy `-Σ λ log₂ λ` in ebits, with `0·log 0 := 0`.
pub fn von_neumann_entropy(rho: &HermitianOperator) -> Result<f64> {
    let eig = eig_density(rho, "rho")?;
    let mut s = 0.0;
    for &lam in &eig.eigenvalues {
        if lam > 0.0 {
            s -= lam * log2(lam);
        }
    }
    Ok(s.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn sigma_x() -> ComplexMatrix {
        ComplexMatrix::from_pairs(2, &[[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [0.0, 0.0]]).unwrap()
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::from_pairs(2, &[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [-1.0, 0.0]]).unwrap()
    }

    #[test]
    fn eig_identity() {
        let eye = HermitianOperator::new(ComplexMatrix::identity(2)).unwrap();
        let eig = eig_hermitian(&eye).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn eig_sigma_x_spectrum_and_vectors() {
        let op = HermitianOperator::new(sigma_x()).unwrap();
        let eig = eig_hermitian(&op).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
        // Column 0 must be |−⟩ and column 1 |+⟩, up to phase.
        let minus = [c(1.0 / 2f64.sqrt(), 0.0), c(-1.0 / 2f64.sqrt(), 0.0)];
        let plus = [c(1.0 / 2f64.sqrt(), 0.0), c(1.0 / 2f64.sqrt(), 0.0)];
        let ov0: Complex64 = (0..2).map(|i| minus[i].conj() * eig.eigenvectors.get(i, 0)).sum();
        let ov1: Complex64 = (0..2).map(|i| plus[i].conj() * eig.eigenvectors.get(i, 1)).sum();
        assert!((ov0.norm() - 1.0).abs() < 1e-12);
        assert!((ov1.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_pairs(2, &[[0.0, 0.0], [1.0, 0.0], [0.5, 0.0], [0.0, 0.0]])
            .unwrap();
        assert!(matches!(HermitianOperator::new(m), Err(Error::Contract(_))));
    }

    #[test]
    fn kron_identities() {
        let eye2 = ComplexMatrix::identity(2);
        let k = kron(&eye2, &eye2);
        assert_eq!(k, ComplexMatrix::identity(4));

        let xx = kron(&sigma_x(), &sigma_x());
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i + j == 3 { 1.0 } else { 0.0 };
                assert!((xx.get(i, j) - c(expect, 0.0)).norm() < 1e-15);
            }
        }

        // (|0⟩⟨0|) ⊗ (I/2) = diag(1/2, 1/2, 0, 0)
        let mut p0 = ComplexMatrix::zeros(2);
        p0.set(0, 0, c(1.0, 0.0));
        let mixed = ComplexMatrix::maximally_mixed(2);
        let k = kron(&p0, &mixed);
        let diag: Vec<f64> = (0..4).map(|i| k.get(i, i).re).collect();
        assert_eq!(diag, vec![0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn partial_trace_product_and_bell() {
        // |00⟩⟨00| keeping party 0 → |0⟩⟨0|
        let st = probes::basis_state(&[2, 2], 0).unwrap();
        let red = partial_trace(&st.density(), &[2, 2], &[0]).unwrap();
        assert!((red.matrix().get(0, 0).re - 1.0).abs() < 1e-15);
        assert!(red.matrix().get(1, 1).norm() < 1e-15);

        // Bell state reduces to I/2.
        let bell = probes::schmidt_probe(2, 2).unwrap();
        let red = partial_trace(&bell.density(), &[2, 2], &[0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 0.5 } else { 0.0 };
                assert!((red.matrix().get(i, j) - c(expect, 0.0)).norm() < 1e-14);
            }
        }

        // Schmidt rank 3 in d = 4, keeping party 1 → diag(1/3,1/3,1/3,0).
        let psi = probes::schmidt_probe(3, 4).unwrap();
        let red = partial_trace(&psi.density(), &[4, 4], &[1]).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| red.matrix().get(i, i).re).collect();
        for i in 0..3 {
            assert!((diag[i] - 1.0 / 3.0).abs() < 1e-14);
        }
        assert!(diag[3].abs() < 1e-15);
    }

    #[test]
    fn partial_trace_dim_mismatch() {
        let st = probes::basis_state(&[2, 2], 0).unwrap();
        assert!(partial_trace(&st.density(), &[2, 3], &[0]).is_err());
        assert!(partial_trace(&st.density(), &[2, 2], &[]).is_err());
        assert!(partial_trace(&st.density(), &[2, 2], &[1, 0]).is_err());
    }

    #[test]
    fn commutator_norms() {
        let z = HermitianOperator::new(sigma_z()).unwrap();
        let x = HermitianOperator::new(sigma_x()).unwrap();
        assert_eq!(commutator_norm(&z, &z).unwrap(), 0.0);
        // [σx, σz] = -2iσy, Frobenius norm 2√2.
        let n = commutator_norm(&x, &z).unwrap();
        assert!((n - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn fidelity_examples() {
        let mixed4 = HermitianOperator::new(ComplexMatrix::maximally_mixed(4)).unwrap();
        assert!((fidelity(&mixed4, &mixed4).unwrap() - 1.0).abs() < 1e-12);

        let p0 = probes::basis_state(&[2], 0).unwrap().density();
        let p1 = probes::basis_state(&[2], 1).unwrap().density();
        assert!(fidelity(&p0, &p1).unwrap() < 1e-12);

        let mixed2 = HermitianOperator::new(ComplexMatrix::maximally_mixed(2)).unwrap();
        let f = fidelity(&p0, &mixed2).unwrap();
        assert!((f - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric_here() {
        let a = probes::schmidt_probe(2, 2).unwrap().density();
        let b = HermitianOperator::new(ComplexMatrix::maximally_mixed(4)).unwrap();
        let fab = fidelity(&a, &b).unwrap();
        let fba = fidelity(&b, &a).unwrap();
        assert!((fab - fba).abs() < 1e-10);
    }

    #[test]
    fn entropy_examples() {
        let mixed2 = HermitianOperator::new(ComplexMatrix::maximally_mixed(2)).unwrap();
        assert!((von_neumann_entropy(&mixed2).unwrap() - 1.0).abs() < 1e-12);

        let pure = probes::basis_state(&[2, 2], 2).unwrap().density();
        assert!(von_neumann_entropy(&pure).unwrap() < 1e-12);

        // diag(1/4, 1/4, 1/4, 1/4, 0, ...) has entropy 2 ebits.
        let mut m = ComplexMatrix::zeros(6);
        for i in 0..4 {
            m.set(i, i, c(0.25, 0.0));
        }
        let rho = HermitianOperator::new(m).unwrap();
        assert!((von_neumann_entropy(&rho).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_bad_density() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, c(0.7, 0.0));
        m.set(1, 1, c(0.7, 0.0));
        let rho = HermitianOperator::new(m).unwrap();
        assert!(matches!(von_neumann_entropy(&rho), Err(Error::Contract(_))));

        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, c(1.5, 0.0));
        m.set(1, 1, c(-0.5, 0.0));
        let rho = HermitianOperator::new(m).unwrap();
        assert!(matches!(von_neumann_entropy(&rho), Err(Error::Contract(_))));
    }

    #[test]
    fn pure_state_contracts() {
        assert!(PureState::new(vec![2], vec![c(1.0, 0.0), c(0.1, 0.0)]).is_err());
        assert!(PureState::new(vec![2, 2], vec![c(1.0, 0.0)]).is_err());
        let st = PureState::normalized(vec![2], vec![c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!((st.amplitudes()[0].re - 0.6).abs() < 1e-15);
    }
}
