//! Quantum Fisher information engines and the continuous-commutativity
//! probe filter.
//!
//! Three independent routes to the SLD quantum Fisher information are
//! provided and cross-checked in the test suite:
//!
//! 1. [`qfi_spectral`]: solves the SLD Lyapunov equation
//!    `∂ρ/∂p = (Lρ + ρL)/2` in the eigenbasis of `ρ_p`, giving
//!    `F_Q = Σ 2|⟨i|∂ρ|j⟩|²/(λ_i+λ_j)` over pairs above a support cutoff;
//! 2. [`qfi_commuting`]: for families whose eigenprojectors are
//!    `p`-independent, the classical formula `Σ (dλ_i/dp)²/λ_i` on the
//!    eigenvalue curves;
//! 3. [`qfi_fidelity_fd`]: the fidelity finite difference
//!    `F_Q ≈ 8(1 - F(ρ_{p-dp/2}, ρ_{p+dp/2}))/dp²`.
//!
//! [`check_continuous_commutativity`] tests the necessary optimality
//! criterion for probes of weighted-Kraus channels: `[ρ_p, ∂ρ_p/∂p] = 0`
//! along the parameter range, together with the equal-weight-group
//! commutator condition on the Kraus expansion when one is available.

use alloc::format;
use alloc::vec::Vec;

use crate::channels::LocalChannelAssembly;
use crate::error::{Error, Result};
use crate::linalg::{
    commutator_norm, eig_hermitian, fidelity, ComplexMatrix, HermitianOperator, PSD_TOL,
};
use crate::math::abs;

/// Default support cutoff on `λ_i + λ_j` in the spectral formula.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Kraus expansions larger than this skip the equal-weight-group check.
pub const Q_EXPANSION_CAP: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QfiMethod {
    Spectral,
    Commuting,
    FidelityFd,
}

impl QfiMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            QfiMethod::Spectral => "spectral",
            QfiMethod::Commuting => "commuting",
            QfiMethod::FidelityFd => "fidelity_fd",
        }
    }
}

/// A QFI value plus diagnostics about how it was obtained.
#[derive(Clone, Debug)]
pub struct QfiReport {
    /// QFI in units of 1/p².
    pub value: f64,
    pub method: QfiMethod,
    /// `‖[ρ_p, ∂ρ_p/∂p]‖_F` where available, 0 otherwise.
    pub commutator_residual: f64,
    /// Eigenvalue pairs dropped by the support cutoff.
    pub floor_hits: usize,
    /// Set when the numerical rank changed across a finite-difference stencil.
    pub rank_warning: bool,
}

/// Spectral-formula QFI from an encoded state and its parameter derivative.
pub fn qfi_spectral(
    rho_p: &HermitianOperator,
    drho_dp: &HermitianOperator,
    support_cutoff: f64,
) -> Result<QfiReport> {
    if rho_p.dim() != drho_dp.dim() {
        return Err(Error::contract("state and derivative dims differ"));
    }
    if abs(rho_p.trace_real() - 1.0) > 1e-8 {
        return Err(Error::contract(format!(
            "encoded state has trace {:.12}, expected 1",
            rho_p.trace_real()
        )));
    }
    let dtr = drho_dp.trace_real();
    if abs(dtr) > 1e-8 {
        return Err(Error::contract(format!(
            "state derivative has trace {dtr:.3e}, expected 0"
        )));
    }

    let eig = eig_hermitian(rho_p)?;
    let n = rho_p.dim();
    let mut lambda = eig.eigenvalues.clone();
    for l in lambda.iter_mut() {
        if *l < -PSD_TOL {
            return Err(Error::contract(format!(
                "encoded state has negative eigenvalue {l:.3e}"
            )));
        }
        if *l < 0.0 {
            *l = 0.0;
        }
    }

    // D = V† (∂ρ) V
    let w = drho_dp.matrix().mul(&eig.eigenvectors);
    let d = eig.eigenvectors.adjoint().mul(&w);

    let div_tol = 1e-8 * drho_dp.matrix().frobenius_norm().max(1.0);
    let mut value = 0.0;
    let mut floor_hits = 0usize;
    for i in 0..n {
        for j in i..n {
            let s = lambda[i] + lambda[j];
            let mag = d.get(i, j).norm();
            if s > support_cutoff {
                let contribution = 2.0 * mag * mag / s;
                value += if i == j { contribution } else { 2.0 * contribution };
            } else {
                floor_hits += 1;
                if mag > div_tol {
                    return Err(Error::Divergent(format!(
                        "derivative weight {mag:.3e} on the null space of ρ_p; \
                         the parameter is perfectly distinguishable here"
                    )));
                }
            }
        }
    }

    let commutator_residual = commutator_norm(rho_p, drho_dp)?;
    Ok(QfiReport {
        value,
        method: QfiMethod::Spectral,
        commutator_residual,
        floor_hits,
        rank_warning: false,
    })
}

/// Applies the assembly at `p`, takes the analytic derivative, and runs the
/// spectral engine. Endpoints of the parameter range are rejected: at zero
/// noise the QFI diverges, and at full noise the encoding degenerates.
pub fn qfi_for_probe(
    assembly: &LocalChannelAssembly,
    rho0: &HermitianOperator,
    p: f64,
    support_cutoff: f64,
) -> Result<QfiReport> {
    let (lo, hi) = assembly.param_range();
    if p <= lo || p >= hi {
        return Err(Error::Divergent(format!(
            "p = {p} is at an endpoint of [{lo}, {hi}]; QFI is reported only on the interior"
        )));
    }
    let rho_p = assembly.apply(rho0, p)?;
    let drho = assembly.apply_derivative(rho0, p)?;
    qfi_spectral(&rho_p, &drho, support_cutoff)
}

/// Commuting-family QFI `Σ (dλ_i/dp)²/λ_i` with derivatives from a central
/// finite difference of the eigenvalue curves. Curves are re-matched by
/// value continuity across the stencil, so a crossing inside the stencil is
/// tolerated as long as the branches stay identifiable.
pub fn qfi_commuting(
    eigenvalues_fn: &dyn Fn(f64) -> Vec<f64>,
    p: f64,
    step: f64,
) -> Result<QfiReport> {
    let center = eigenvalues_fn(p);
    let total: f64 = center.iter().sum();
    if abs(total - 1.0) > 1e-8 {
        return Err(Error::contract(format!(
            "eigenvalue curves sum to {total:.12} at p = {p}, expected 1"
        )));
    }
    let minus = match_by_continuity(&center, &eigenvalues_fn(p - step), step)?;
    let plus = match_by_continuity(&center, &eigenvalues_fn(p + step), step)?;
    let derivs: Vec<f64> = plus
        .iter()
        .zip(&minus)
        .map(|(a, b)| (a - b) / (2.0 * step))
        .collect();
    qfi_commuting_with_derivative(&center, &derivs)
}

/// Commuting-family QFI from eigenvalue curves with analytic derivatives.
pub fn qfi_commuting_with_derivative(values: &[f64], derivatives: &[f64]) -> Result<QfiReport> {
    if values.len() != derivatives.len() {
        return Err(Error::contract("curve and derivative counts differ"));
    }
    let mut value = 0.0;
    let mut floor_hits = 0usize;
    for (&lam, &dl) in values.iter().zip(derivatives) {
        if lam > SUPPORT_CUTOFF {
            value += dl * dl / lam;
        } else {
            floor_hits += 1;
            if abs(dl) > 1e-8 {
                return Err(Error::Divergent(format!(
                    "eigenvalue curve vanishes with slope {dl:.3e}"
                )));
            }
        }
    }
    Ok(QfiReport {
        value,
        method: QfiMethod::Commuting,
        commutator_residual: 0.0,
        floor_hits,
        rank_warning: false,
    })
}

/// Greedy nearest-value matching of `other` onto the ordering of `center`.
fn match_by_continuity(center: &[f64], other: &[f64], step: f64) -> Result<Vec<f64>> {
    if other.len() != center.len() {
        return Err(Error::contract("eigenvalue curve count changed across stencil"));
    }
    let n = center.len();
    let mut used = alloc::vec![false; n];
    let mut matched = alloc::vec![0.0f64; n];
    // Allow slopes up to 10³ before declaring the ordering unstable.
    let cap = 1e3 * step + 1e-12;
    for i in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for (j, &v) in other.iter().enumerate() {
            if used[j] {
                continue;
            }
            let dist = abs(v - center[i]);
            if best.map_or(true, |(_, b)| dist < b) {
                best = Some((j, dist));
            }
        }
        let (j, dist) = best.expect("non-empty");
        if dist > cap {
            return Err(Error::Convergence(format!(
                "eigenvalue ordering unstable: branch moved {dist:.3e} over step {step:.1e}"
            )));
        }
        used[j] = true;
        matched[i] = other[j];
    }
    Ok(matched)
}

/// Fidelity finite-difference QFI `8(1 - F(ρ_{p-dp/2}, ρ_{p+dp/2}))/dp²`.
pub fn qfi_fidelity_fd(
    assembly: &LocalChannelAssembly,
    rho0: &HermitianOperator,
    p: f64,
    dp: f64,
) -> Result<QfiReport> {
    let (lo, hi) = assembly.param_range();
    if p - dp / 2.0 < lo || p + dp / 2.0 > hi {
        return Err(Error::domain(format!(
            "stencil p ± {:.1e} leaves the parameter range [{lo}, {hi}]",
            dp / 2.0
        )));
    }
    let rho_minus = assembly.apply(rho0, p - dp / 2.0)?;
    let rho_plus = assembly.apply(rho0, p + dp / 2.0)?;
    let f = fidelity(&rho_minus, &rho_plus)?;
    let value = (8.0 * (1.0 - f) / (dp * dp)).max(0.0);

    let rank_warning = numerical_rank(&rho_minus)? != numerical_rank(&rho_plus)?;
    let commutator_residual = if p > lo && p < hi {
        let rho_p = assembly.apply(rho0, p)?;
        let drho = assembly.apply_derivative(rho0, p)?;
        commutator_norm(&rho_p, &drho)?
    } else {
        0.0
    };
    Ok(QfiReport {
        value,
        method: QfiMethod::FidelityFd,
        commutator_residual,
        floor_hits: 0,
        rank_warning,
    })
}

fn numerical_rank(rho: &HermitianOperator) -> Result<usize> {
    let eig = eig_hermitian(rho)?;
    Ok(eig.eigenvalues.iter().filter(|&&l| l > 1e-10).count())
}

/// Outcome of the continuous-commutativity criterion.
#[derive(Clone, Debug)]
pub struct CommutativityReport {
    /// Max over samples of `‖[ρ_p, ∂ρ_p/∂p]‖_F`.
    pub rho_comm_max: f64,
    /// Max over term pairs of `‖[M_i ρ₀ M_i†, M_j ρ₀ M_j†]‖_F`
    /// (diagnostic; individual terms need not commute for optimality).
    pub pairwise_max: f64,
    /// Max over pairs of the equal-weight-group operators `Q_i`;
    /// `None` when no Kraus expansion is available.
    pub q_pair_max: Option<f64>,
    pub passes: bool,
}

/// Evaluates the necessary criterion for `rho0` to be an optimal probe:
/// the encoded family must commute with its own parameter derivative at
/// every sample, and — when the channel exposes a Kraus list — the
/// equal-weight-group operators `Q_i = Σ_{j≠i, f_j≡f_i} (T_i + T_j)` with
/// `T_i = M_i ρ₀ M_i†` must commute pairwise.
pub fn check_continuous_commutativity(
    assembly: &LocalChannelAssembly,
    rho0: &HermitianOperator,
    p_samples: &[f64],
    tol: f64,
) -> Result<CommutativityReport> {
    if p_samples.is_empty() {
        return Err(Error::contract("need at least one parameter sample"));
    }
    let mut rho_comm_max = 0.0f64;
    for &p in p_samples {
        let rho_p = assembly.apply(rho0, p)?;
        let drho = assembly.apply_derivative(rho0, p)?;
        rho_comm_max = rho_comm_max.max(commutator_norm(&rho_p, &drho)?);
    }

    let mut pairwise_max = 0.0f64;
    let mut q_pair_max = None;
    if let Some(terms) = assembly.kraus_expansion(Q_EXPANSION_CAP) {
        let sandwiches: Vec<ComplexMatrix> = terms
            .iter()
            .map(|t| t.operator.mul(rho0.matrix()).mul(&t.operator.adjoint()))
            .collect();
        for i in 0..sandwiches.len() {
            for j in i + 1..sandwiches.len() {
                pairwise_max = pairwise_max.max(comm_fro(&sandwiches[i], &sandwiches[j]));
            }
        }

        // Group sums per weight class, then Q_i = (G-2)·T_i + S_g for terms
        // whose class has G ≥ 2 partners; classes of size one give Q_i = 0.
        let mut classes: Vec<&[usize]> = Vec::new();
        let class_ix: Vec<usize> = terms
            .iter()
            .map(|t| {
                if let Some(i) = classes.iter().position(|c| *c == t.weight_class.as_slice()) {
                    i
                } else {
                    classes.push(&t.weight_class);
                    classes.len() - 1
                }
            })
            .collect();
        let dim = rho0.dim();
        let mut group_sums = alloc::vec![ComplexMatrix::zeros(dim); classes.len()];
        let mut group_sizes = alloc::vec![0usize; classes.len()];
        for (t, &c) in sandwiches.iter().zip(&class_ix) {
            group_sums[c].add_scaled_assign(t, 1.0);
            group_sizes[c] += 1;
        }
        let q_ops: Vec<ComplexMatrix> = sandwiches
            .iter()
            .zip(&class_ix)
            .filter(|(_, &c)| group_sizes[c] >= 2)
            .map(|(t, &c)| {
                let mut q = group_sums[c].clone();
                q.add_scaled_assign(t, group_sizes[c] as f64 - 2.0);
                q
            })
            .collect();
        let mut qmax = 0.0f64;
        for i in 0..q_ops.len() {
            for j in i + 1..q_ops.len() {
                qmax = qmax.max(comm_fro(&q_ops[i], &q_ops[j]));
            }
        }
        q_pair_max = Some(qmax);
    }

    let passes = rho_comm_max <= tol && q_pair_max.map_or(true, |q| q <= tol);
    Ok(CommutativityReport {
        rho_comm_max,
        pairwise_max,
        q_pair_max,
        passes,
    })
}

fn comm_fro(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.mul(b).sub(&b.mul(a)).frobenius_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::VectorEncoding;
    use crate::probes;
    use num_complex::Complex64;

    fn diag2(a: f64, b: f64) -> HermitianOperator {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, Complex64::new(a, 0.0));
        m.set(1, 1, Complex64::new(b, 0.0));
        HermitianOperator::new(m).unwrap()
    }

    #[test]
    fn spectral_matches_classical_binomial() {
        // ρ = diag(1-p, p), ∂ρ = diag(-1, 1) at p = 0.25 → 1/(p(1-p)) = 16/3.
        let rho = diag2(0.75, 0.25);
        let drho = diag2(-1.0, 1.0);
        let rep = qfi_spectral(&rho, &drho, SUPPORT_CUTOFF).unwrap();
        assert!((rep.value - 16.0 / 3.0).abs() < 1e-12);
        assert!(rep.commutator_residual < 1e-15);
        assert_eq!(rep.floor_hits, 0);
    }

    #[test]
    fn spectral_flags_divergence_on_null_support() {
        // Pure ρ with derivative weight on the null space: p → 0 limit.
        let rho = diag2(1.0, 0.0);
        let drho = diag2(-1.0, 1.0);
        assert!(matches!(
            qfi_spectral(&rho, &drho, SUPPORT_CUTOFF),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn spectral_rejects_bad_inputs() {
        let rho = diag2(0.9, 0.2);
        let drho = diag2(-1.0, 1.0);
        assert!(qfi_spectral(&rho, &drho, SUPPORT_CUTOFF).is_err());
        let rho = diag2(0.75, 0.25);
        let not_traceless = diag2(1.0, 1.0);
        assert!(qfi_spectral(&rho, &not_traceless, SUPPORT_CUTOFF).is_err());
    }

    #[test]
    fn commuting_matches_classical_binomial() {
        let curves = |p: f64| alloc::vec![1.0 - p, p];
        let rep = qfi_commuting(&curves, 0.25, 1e-5).unwrap();
        assert!((rep.value - 16.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn commuting_handles_crossing_at_sample() {
        // Curves cross exactly at p = 0.5; branch pairing is ambiguous but
        // the QFI is not.
        let curves = |p: f64| alloc::vec![p, 1.0 - p];
        let rep = qfi_commuting(&curves, 0.5, 1e-5).unwrap();
        assert!((rep.value - 4.0).abs() < 1e-9);
    }

    #[test]
    fn fidelity_fd_matches_spectral_on_bit_flip() {
        let asm = LocalChannelAssembly::new(VectorEncoding::bit_flip(), 1).unwrap();
        let rho0 = probes::basis_state(&[2], 0).unwrap().density();
        let fd = qfi_fidelity_fd(&asm, &rho0, 0.5, 1e-4).unwrap();
        assert!((fd.value - 4.0).abs() < 1e-3, "value {}", fd.value);
        let sp = qfi_for_probe(&asm, &rho0, 0.5, SUPPORT_CUTOFF).unwrap();
        assert!((sp.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_fd_zero_for_invariant_state() {
        // |++⟩ is a fixed point of the two-qubit bit-flip channel.
        let asm = LocalChannelAssembly::new(VectorEncoding::bit_flip(), 2).unwrap();
        let half = Complex64::new(0.5, 0.0);
        let rho0 = crate::linalg::PureState::new(alloc::vec![2, 2], alloc::vec![half; 4])
            .unwrap()
            .density();
        let rep = qfi_fidelity_fd(&asm, &rho0, 0.5, 1e-4).unwrap();
        assert!(rep.value < 1e-6, "value {}", rep.value);
    }

    #[test]
    fn endpoint_p_is_divergent_for_probe_qfi() {
        let asm =
            LocalChannelAssembly::new(VectorEncoding::depolarizing(2).unwrap(), 1).unwrap();
        let rho0 = probes::basis_state(&[2], 0).unwrap().density();
        assert!(matches!(
            qfi_for_probe(&asm, &rho0, 0.75, SUPPORT_CUTOFF),
            Err(Error::Divergent(_))
        ));
        assert!(matches!(
            qfi_for_probe(&asm, &rho0, 0.0, SUPPORT_CUTOFF),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn uniform_schmidt_probes_pass_commutativity() {
        let asm =
            LocalChannelAssembly::new(VectorEncoding::depolarizing(2).unwrap(), 2).unwrap();
        let samples = [0.1, 0.3, 0.5, 0.7];
        for m in 1..=2 {
            let rho0 = probes::schmidt_probe(m, 2).unwrap().density();
            let rep = check_continuous_commutativity(&asm, &rho0, &samples, 1e-8).unwrap();
            assert!(rep.passes, "m = {m}: {rep:?}");
            assert!(rep.q_pair_max.is_some());
        }
    }

    #[test]
    fn non_uniform_schmidt_probe_fails_commutativity() {
        let asm =
            LocalChannelAssembly::new(VectorEncoding::depolarizing(2).unwrap(), 2).unwrap();
        let rho0 = probes::schmidt_weighted(&[0.9, 0.1]).unwrap().density();
        let rep = check_continuous_commutativity(&asm, &rho0, &[0.3], 1e-8).unwrap();
        assert!(!rep.passes);
        assert!(rep.rho_comm_max > 1e-6, "residual {}", rep.rho_comm_max);
    }
}
