//! Two-qubit local bit-flip noise: the six commuting-geometry QFI
//! formulas, the optimal probe family, and witness states that realize
//! each geometry on the spectral engine.
//!
//! Writing a probe in the σˣ eigenbasis as
//! `|ψ₀⟩ = a|++⟩ + b|+-⟩ + c|-+⟩ + d|--⟩`, the encoded state is
//! `β_p⊗β_p(ρ₀) = (1-p)² ρ₀ + 2p(1-p) ρ₁₂ + p² ρ₃` with
//! `ρ₁₂ = (ρ₁+ρ₂)/2` and `ρ_k` the single- and double-flip images of
//! `ρ₀`. The necessary optimality criterion forces `ρ₀, ρ₁₂, ρ₃` to
//! commute, which leaves six diagonal geometries; their QFI formulas are
//! enumerated by [`BitflipCase`]. The ceiling `2/(p(1-p))` is attained
//! exactly when `ρ₀…ρ₃` are mutually orthogonal, i.e. on the family
//! [`optimal_probe_state`] — which at `θ = 0` is a product state.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channels::{LocalChannelAssembly, VectorEncoding};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator, PureState};
pub use crate::math::binary_entropy;
use crate::math::{cos, sin, sqrt};
use crate::qfi::{qfi_spectral, SUPPORT_CUTOFF};

/// The six commuting geometries of `(ρ₀, ρ₁₂, ρ₃)` and their QFI formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BitflipCase {
    /// All four flip images identical (`|++⟩`): the output is `p`-independent.
    IA,
    /// `ρ₀ = ρ₃` orthogonal to `ρ₁ = ρ₂`.
    IB,
    /// `ρ₁₂` supported on the `ρ₀` and `ρ₃` directions.
    IIA,
    /// `ρ₁₂` half on `ρ₀`, half on a fresh direction.
    IIB,
    /// `ρ₀…ρ₃` mutually orthogonal — the optimum.
    IIC,
    /// `ρ₁₂` half on `ρ₃`, half on a fresh direction.
    IID,
}

impl BitflipCase {
    pub const ALL: [BitflipCase; 6] = [
        BitflipCase::IA,
        BitflipCase::IB,
        BitflipCase::IIA,
        BitflipCase::IIB,
        BitflipCase::IIC,
        BitflipCase::IID,
    ];

    pub fn label(self) -> &'static str {
        match self {
            BitflipCase::IA => "I-a",
            BitflipCase::IB => "I-b",
            BitflipCase::IIA => "II-a",
            BitflipCase::IIB => "II-b",
            BitflipCase::IIC => "II-c",
            BitflipCase::IID => "II-d",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|c| c.label() == label)
    }
}

/// Closed-form QFI of the given case geometry.
///
/// All cases except I-a diverge at the endpoints `p ∈ {0, 1}`; I-a is
/// identically zero.
pub fn case_qfi(case: BitflipCase, p: f64) -> Result<f64> {
    if case == BitflipCase::IA {
        return Ok(0.0);
    }
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::Divergent(format!(
            "case {} QFI diverges at p = {p}; interior 0 < p < 1 required",
            case.label()
        )));
    }
    let q = p * (1.0 - p);
    Ok(match case {
        BitflipCase::IA => 0.0,
        BitflipCase::IB => {
            let s = 1.0 - 2.0 * p;
            4.0 * s * s / (p * p + (1.0 - p) * (1.0 - p)) + 2.0 * s * s / q
        }
        BitflipCase::IIA => 1.0 / q,
        BitflipCase::IIB => (1.0 + p) / q,
        BitflipCase::IIC => 2.0 / q,
        BitflipCase::IID => (2.0 - p) / q,
    })
}

/// Maximum over the six case formulas; always case II-c with value
/// `2/(p(1-p))`, confirmed by direct comparison.
pub fn max_case_qfi(p: f64) -> Result<(BitflipCase, f64)> {
    let mut best = BitflipCase::IA;
    let mut best_q = case_qfi(BitflipCase::IA, p)?;
    for case in BitflipCase::ALL {
        let q = case_qfi(case, p)?;
        if q > best_q {
            best = case;
            best_q = q;
        }
    }
    Ok((best, best_q))
}

/// The two-qubit bit-flip pair `β_p ⊗ β_p`.
pub fn pair_assembly() -> LocalChannelAssembly {
    LocalChannelAssembly::new(VectorEncoding::bit_flip(), 2).expect("two parties")
}

fn wrap_tau(theta: f64) -> f64 {
    let t = theta % core::f64::consts::TAU;
    if t < 0.0 {
        t + core::f64::consts::TAU
    } else {
        t
    }
}

/// Transforms coefficients in the `|±±⟩` basis to the computational basis
/// (one Hadamard per qubit).
fn from_pm_basis(pm: [Complex64; 4]) -> PureState {
    let r = 1.0 / sqrt(2.0);
    let h = [[r, r], [r, -r]];
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    for (i, amp) in amps.iter_mut().enumerate() {
        for (j, &c) in pm.iter().enumerate() {
            *amp += c * (h[i >> 1][j >> 1] * h[i & 1][j & 1]);
        }
    }
    PureState::new(vec![2, 2], amps).expect("unit norm by construction")
}

/// The optimal probe family
/// `|ψ(θ)⟩ = (|++⟩ + |+-⟩ + |-+⟩ + e^{iθ}|--⟩)/2`, θ taken mod 2π.
///
/// Every member reaches the QFI ceiling `2/(p(1-p))`; the entanglement
/// sweeps `[0, 1]` ebits with θ, and θ = 0 is the product state `|00⟩`.
pub fn optimal_probe_state(theta: f64) -> PureState {
    let theta = wrap_tau(theta);
    let phase = Complex64::new(cos(theta), sin(theta));
    let half = Complex64::new(0.5, 0.0);
    from_pm_basis([half, half, half, half * phase])
}

/// Entanglement of [`optimal_probe_state`] in ebits: the reduced state has
/// eigenvalues `{cos²(θ/4), sin²(θ/4)}`, so `E = H(cos²(θ/4))`.
pub fn probe_entanglement(theta: f64) -> f64 {
    let theta = wrap_tau(theta);
    let c = cos(theta / 4.0);
    binary_entropy(c * c)
}

/// A state (or diagonal operator triple) realizing one case geometry.
///
/// Four geometries are reachable from actual two-qubit probes. The
/// `ρ₁₂`-patterns of cases II-b and II-d are not the flip image of any
/// pure two-qubit state (if `ρ₁ ∝ ρ₃` then necessarily `ρ₂ ∝ ρ₀`, by the
/// sign structure of the flip maps), so those two are realized as the
/// diagonal operator triples themselves and fed to the spectral engine
/// directly.
#[derive(Clone, Debug)]
pub enum CaseWitness {
    Probe(PureState),
    Diagonal {
        rho0: [f64; 4],
        rho12: [f64; 4],
        rho3: [f64; 4],
    },
}

/// Witness realizing the geometry (and hence the QFI formula) of `case`.
pub fn case_witness(case: BitflipCase) -> CaseWitness {
    let o = Complex64::new(0.0, 0.0);
    let r = Complex64::new(1.0 / sqrt(2.0), 0.0);
    let one = Complex64::new(1.0, 0.0);
    match case {
        BitflipCase::IA => CaseWitness::Probe(from_pm_basis([one, o, o, o])),
        // (|++⟩ + |--⟩)/√2: ρ₀ = ρ₃ orthogonal to ρ₁ = ρ₂.
        BitflipCase::IB => CaseWitness::Probe(from_pm_basis([r, o, o, r])),
        // (|++⟩ + |+-⟩)/√2 = |+⟩⊗|0⟩: flips land on ρ₀ and ρ₃ only.
        BitflipCase::IIA => CaseWitness::Probe(from_pm_basis([r, r, o, o])),
        BitflipCase::IIB => CaseWitness::Diagonal {
            rho0: [1.0, 0.0, 0.0, 0.0],
            rho12: [0.5, 0.0, 0.5, 0.0],
            rho3: [0.0, 1.0, 0.0, 0.0],
        },
        BitflipCase::IIC => {
            CaseWitness::Probe(optimal_probe_state(core::f64::consts::FRAC_PI_2))
        }
        BitflipCase::IID => CaseWitness::Diagonal {
            rho0: [1.0, 0.0, 0.0, 0.0],
            rho12: [0.0, 0.5, 0.5, 0.0],
            rho3: [0.0, 1.0, 0.0, 0.0],
        },
    }
}

impl CaseWitness {
    /// The encoded state at noise `p`.
    pub fn encoded(&self, p: f64) -> Result<HermitianOperator> {
        match self {
            CaseWitness::Probe(state) => pair_assembly().apply(&state.density(), p),
            CaseWitness::Diagonal { rho0, rho12, rho3 } => {
                let w0 = (1.0 - p) * (1.0 - p);
                let w12 = 2.0 * p * (1.0 - p);
                let w3 = p * p;
                diag4(core::array::from_fn(|i| {
                    w0 * rho0[i] + w12 * rho12[i] + w3 * rho3[i]
                }))
            }
        }
    }

    /// Analytic `∂/∂p` of [`CaseWitness::encoded`].
    pub fn encoded_derivative(&self, p: f64) -> Result<HermitianOperator> {
        match self {
            CaseWitness::Probe(state) => {
                pair_assembly().apply_derivative(&state.density(), p)
            }
            CaseWitness::Diagonal { rho0, rho12, rho3 } => {
                let w0 = -2.0 * (1.0 - p);
                let w12 = 2.0 * (1.0 - 2.0 * p);
                let w3 = 2.0 * p;
                diag4(core::array::from_fn(|i| {
                    w0 * rho0[i] + w12 * rho12[i] + w3 * rho3[i]
                }))
            }
        }
    }

    /// Spectral-engine QFI of the witness at interior `p`.
    pub fn spectral_qfi(&self, p: f64) -> Result<f64> {
        if p <= 0.0 || p >= 1.0 {
            return Err(Error::Divergent(format!(
                "witness QFI is evaluated on the interior 0 < p < 1, got {p}"
            )));
        }
        let rho = self.encoded(p)?;
        let drho = self.encoded_derivative(p)?;
        Ok(qfi_spectral(&rho, &drho, SUPPORT_CUTOFF)?.value)
    }
}

fn diag4(values: [f64; 4]) -> Result<HermitianOperator> {
    let mut m = ComplexMatrix::zeros(4);
    for (i, v) in values.into_iter().enumerate() {
        m.set(i, i, Complex64::new(v, 0.0));
    }
    HermitianOperator::new(m)
}

/// One row of the θ sweep at fixed noise.
#[derive(Clone, Copy, Debug)]
pub struct ThetaPoint {
    pub theta: f64,
    pub entanglement: f64,
    pub qfi: f64,
}

/// Sweeps the optimal-probe family over `n_theta` evenly spaced angles,
/// reporting entanglement and the spectral-engine QFI at `p`.
pub fn theta_sweep(p: f64, n_theta: usize) -> Result<Vec<ThetaPoint>> {
    if n_theta == 0 {
        return Err(Error::contract("need at least one θ sample"));
    }
    let asm = pair_assembly();
    (0..n_theta)
        .map(|k| {
            let theta = core::f64::consts::TAU * k as f64 / n_theta as f64;
            let rho0 = optimal_probe_state(theta).density();
            let qfi = crate::qfi::qfi_for_probe(&asm, &rho0, p, SUPPORT_CUTOFF)?.value;
            Ok(ThetaPoint {
                theta,
                entanglement: probe_entanglement(theta),
                qfi,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, partial_trace, von_neumann_entropy};
    use crate::qfi::check_continuous_commutativity;

    #[test]
    fn case_formula_values() {
        assert!((case_qfi(BitflipCase::IIC, 0.5).unwrap() - 8.0).abs() < 1e-14);
        assert_eq!(case_qfi(BitflipCase::IA, 0.3).unwrap(), 0.0);
        assert_eq!(case_qfi(BitflipCase::IA, 0.0).unwrap(), 0.0);
        // Both I-b terms carry (1-2p)², so the formula vanishes at p = 1/2.
        assert!(case_qfi(BitflipCase::IB, 0.5).unwrap().abs() < 1e-15);
    }

    #[test]
    fn case_formulas_reject_endpoints() {
        for case in BitflipCase::ALL {
            if case == BitflipCase::IA {
                continue;
            }
            assert!(matches!(case_qfi(case, 0.0), Err(Error::Divergent(_))));
            assert!(matches!(case_qfi(case, 1.0), Err(Error::Divergent(_))));
        }
    }

    #[test]
    fn max_is_always_case_iic() {
        for k in 1..100 {
            let p = k as f64 / 100.0;
            let (case, value) = max_case_qfi(p).unwrap();
            assert_eq!(case, BitflipCase::IIC, "p = {p}");
            assert!((value - 2.0 / (p * (1.0 - p))).abs() < 1e-12);
        }
        let (_, v) = max_case_qfi(0.1).unwrap();
        assert!((v - 2.0 / 0.09).abs() < 1e-12);
        let (_, v9) = max_case_qfi(0.9).unwrap();
        assert!((v - v9).abs() < 1e-12, "p ↔ 1-p symmetry");
    }

    #[test]
    fn theta_zero_probe_is_product() {
        let st = optimal_probe_state(0.0);
        // (|++⟩+|+-⟩+|-+⟩+|--⟩)/2 = |00⟩ exactly.
        assert!((st.amplitudes()[0].re - 1.0).abs() < 1e-14);
        for a in &st.amplitudes()[1..] {
            assert!(a.norm() < 1e-14);
        }
        assert!(probe_entanglement(0.0).abs() < 1e-14);
    }

    #[test]
    fn probe_entanglement_matches_reduced_entropy() {
        for &theta in &[
            0.0,
            core::f64::consts::FRAC_PI_2,
            core::f64::consts::PI,
            1.5 * core::f64::consts::PI,
            2.3,
        ] {
            let st = optimal_probe_state(theta);
            let red = partial_trace(&st.density(), &[2, 2], &[0]).unwrap();
            let s = von_neumann_entropy(&red).unwrap();
            let formula = probe_entanglement(theta);
            assert!((s - formula).abs() < 1e-10, "θ = {theta}: {s} vs {formula}");
        }
        assert!((probe_entanglement(core::f64::consts::PI) - 1.0).abs() < 1e-14);
        // H(cos²(3π/8)) equals the θ = π/2 value ≈ 0.6009 by symmetry.
        let e_half = probe_entanglement(core::f64::consts::FRAC_PI_2);
        let e_sym = probe_entanglement(1.5 * core::f64::consts::PI);
        assert!((e_half - e_sym).abs() < 1e-12);
        let c = (core::f64::consts::PI / 8.0).cos();
        assert!((e_half - binary_entropy(c * c)).abs() < 1e-12);
    }

    #[test]
    fn optimal_family_hits_the_ceiling() {
        let asm = pair_assembly();
        for &theta in &[0.0, 1.0, core::f64::consts::PI, 4.5] {
            let rho0 = optimal_probe_state(theta).density();
            for &p in &[0.1, 0.3, 0.5, 0.7, 0.9] {
                let q = crate::qfi::qfi_for_probe(&asm, &rho0, p, SUPPORT_CUTOFF)
                    .unwrap()
                    .value;
                let ceiling = 2.0 / (p * (1.0 - p));
                assert!(
                    ((q - ceiling) / ceiling).abs() < 1e-9,
                    "θ={theta}, p={p}: {q} vs {ceiling}"
                );
            }
        }
    }

    #[test]
    fn flip_images_of_optimal_probe_are_mutually_orthogonal() {
        let st = optimal_probe_state(2.0);
        let sx = {
            let mut m = ComplexMatrix::zeros(2);
            m.set(0, 1, Complex64::new(1.0, 0.0));
            m.set(1, 0, Complex64::new(1.0, 0.0));
            m
        };
        let eye = ComplexMatrix::identity(2);
        let flips = [
            kron(&eye, &eye),
            kron(&sx, &eye),
            kron(&eye, &sx),
            kron(&sx, &sx),
        ];
        let images: Vec<Vec<Complex64>> = flips
            .iter()
            .map(|f| {
                (0..4)
                    .map(|i| {
                        (0..4)
                            .map(|j| f.get(i, j) * st.amplitudes()[j])
                            .sum::<Complex64>()
                    })
                    .collect()
            })
            .collect();
        for i in 0..4 {
            for j in i + 1..4 {
                let ov: Complex64 = images[i]
                    .iter()
                    .zip(&images[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                assert!(ov.norm() < 1e-12, "({i},{j}): {}", ov.norm());
            }
        }
    }

    #[test]
    fn witnesses_reproduce_their_formulas() {
        for case in BitflipCase::ALL {
            let witness = case_witness(case);
            for k in 1..=9 {
                let p = k as f64 / 10.0;
                let formula = case_qfi(case, p).unwrap();
                let spectral = witness.spectral_qfi(p).unwrap();
                if formula < 1e-12 {
                    assert!(spectral < 1e-9, "{} p={p}: {spectral}", case.label());
                } else {
                    let rel = ((spectral - formula) / formula).abs();
                    assert!(rel < 1e-9, "{} p={p}: rel {rel:.3e}", case.label());
                }
            }
        }
    }

    #[test]
    fn optimal_probe_passes_commutativity_filter() {
        let asm = pair_assembly();
        let rho0 = optimal_probe_state(core::f64::consts::PI).density();
        let rep =
            check_continuous_commutativity(&asm, &rho0, &[0.1, 0.3, 0.5, 0.7, 0.9], 1e-8)
                .unwrap();
        assert!(rep.passes, "{rep:?}");
    }

    #[test]
    fn theta_sweep_is_flat_in_qfi() {
        let rows = theta_sweep(0.5, 16).unwrap();
        for row in &rows {
            assert!(((row.qfi - 8.0) / 8.0).abs() < 1e-9, "{row:?}");
        }
        // Entanglement spans [0, 1].
        let max_e = rows.iter().map(|r| r.entanglement).fold(0.0, f64::max);
        let min_e = rows.iter().map(|r| r.entanglement).fold(1.0, f64::min);
        assert!(max_e > 0.99 && min_e < 1e-12);
    }
}
