//! Probe-state catalog: computational basis states, Schmidt-rank families,
//! GHZ / W / bi-product candidates, and Haar-style random states and local
//! unitaries for randomized checks.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, PureState};
use crate::math::sqrt;
use crate::rng::normal_complex;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Computational basis state `|index⟩` over the given tensor factors.
pub fn basis_state(local_dims: &[usize], index: usize) -> Result<PureState> {
    let dim: usize = local_dims.iter().product();
    if index >= dim {
        return Err(Error::domain(format!(
            "basis index {index} out of range for dimension {dim}"
        )));
    }
    let mut amps = vec![re(0.0); dim];
    amps[index] = re(1.0);
    PureState::new(local_dims.to_vec(), amps)
}

/// Two-qudit probe with `m` equal Schmidt coefficients:
/// `(1/√m) Σ_{i<m} |ii⟩` in dimension `d × d`.
pub fn schmidt_probe(m: usize, d: usize) -> Result<PureState> {
    if m == 0 || m > d {
        return Err(Error::domain(format!(
            "Schmidt rank must satisfy 1 ≤ m ≤ d, got m={m}, d={d}"
        )));
    }
    let mut amps = vec![re(0.0); d * d];
    let a = 1.0 / sqrt(m as f64);
    for i in 0..m {
        amps[i * d + i] = re(a);
    }
    PureState::new(vec![d, d], amps)
}

/// Two-qudit probe `Σ √c_i |ii⟩` with the given Schmidt weights.
/// Weights must be non-negative; they are normalized to sum to one.
pub fn schmidt_weighted(weights: &[f64]) -> Result<PureState> {
    let d = weights.len();
    if d < 2 {
        return Err(Error::domain("need at least two Schmidt coefficients"));
    }
    if weights.iter().any(|&w| w < 0.0) {
        return Err(Error::domain("Schmidt weights must be non-negative"));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::domain("Schmidt weights must not all vanish"));
    }
    let mut amps = vec![re(0.0); d * d];
    for (i, &w) in weights.iter().enumerate() {
        amps[i * d + i] = re(sqrt(w / total));
    }
    PureState::new(vec![d, d], amps)
}

/// `n`-party GHZ-type state `(1/√d) Σ_i |i…i⟩` in local dimension `d`.
pub fn ghz(n: usize, d: usize) -> Result<PureState> {
    if n < 2 || d < 2 {
        return Err(Error::domain("GHZ needs n ≥ 2 parties of dimension ≥ 2"));
    }
    let dim = d.pow(n as u32);
    let mut amps = vec![re(0.0); dim];
    // |i…i⟩ sits at index i · (d^{n-1} + … + d + 1).
    let stride: usize = (0..n).map(|k| d.pow(k as u32)).sum();
    let a = 1.0 / sqrt(d as f64);
    for i in 0..d {
        amps[i * stride] = re(a);
    }
    PureState::new(vec![d; n], amps)
}

/// `n`-qubit W state: equal superposition of the single-excitation states.
pub fn w_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::domain("W state needs n ≥ 2 qubits"));
    }
    let dim = 1usize << n;
    let mut amps = vec![re(0.0); dim];
    let a = 1.0 / sqrt(n as f64);
    for k in 0..n {
        amps[1 << (n - 1 - k)] = re(a);
    }
    PureState::new(vec![2; n], amps)
}

/// Bi-product qubit state: a maximally entangled pair on parties
/// `(pair, pair+1)` and `|0⟩` on every other party.
pub fn biproduct(n: usize, pair: usize) -> Result<PureState> {
    if n < 3 || pair + 1 >= n {
        return Err(Error::domain(format!(
            "bi-product needs n ≥ 3 qubits and a valid pair, got n={n}, pair={pair}"
        )));
    }
    let bell = schmidt_probe(2, 2)?;
    let mut amps = vec![re(1.0)];
    let mut dims: Vec<usize> = Vec::new();
    let mut party = 0;
    while party < n {
        let (factor_amps, factor_dims): (Vec<Complex64>, Vec<usize>) = if party == pair {
            party += 2;
            (bell.amplitudes().to_vec(), vec![2, 2])
        } else {
            party += 1;
            (vec![re(1.0), re(0.0)], vec![2])
        };
        let mut next = Vec::with_capacity(amps.len() * factor_amps.len());
        for a in &amps {
            for f in &factor_amps {
                next.push(a * f);
            }
        }
        amps = next;
        dims.extend(factor_dims);
    }
    PureState::new(dims, amps)
}

/// Product of maximally entangled pairs on `(0,1), (2,3), …`; `n` even.
pub fn bell_pairs(n: usize) -> Result<PureState> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::domain("bell_pairs needs an even number of qubits"));
    }
    let bell = schmidt_probe(2, 2)?;
    let mut amps = bell.amplitudes().to_vec();
    for _ in 1..n / 2 {
        let mut next = Vec::with_capacity(amps.len() * 4);
        for a in &amps {
            for f in bell.amplitudes() {
                next.push(a * f);
            }
        }
        amps = next;
    }
    PureState::new(vec![2; n], amps)
}

/// Haar-style random pure state: independent complex Gaussian amplitudes,
/// normalized.
pub fn random_pure_state(local_dims: &[usize], rng: &mut impl Rng) -> PureState {
    let dim: usize = local_dims.iter().product();
    let amps: Vec<Complex64> = (0..dim).map(|_| normal_complex(rng)).collect();
    PureState::normalized(local_dims.to_vec(), amps).expect("gaussian vector normalizes")
}

/// Haar-style random unitary from QR of a complex Ginibre matrix
/// (modified Gram–Schmidt with the phase fixed so R has positive diagonal).
pub fn random_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..d)
        .map(|_| (0..d).map(|_| normal_complex(rng)).collect())
        .collect();
    for k in 0..d {
        for j in 0..k {
            let proj: Complex64 = (0..d).map(|i| cols[j][i].conj() * cols[k][i]).sum();
            for i in 0..d {
                let sub = proj * cols[j][i];
                cols[k][i] -= sub;
            }
        }
        let norm = sqrt(cols[k].iter().map(|z| z.norm_sqr()).sum());
        for i in 0..d {
            cols[k][i] /= norm;
        }
    }
    ComplexMatrix::from_fn(d, |i, j| cols[j][i])
}

/// Tensor product of independent Haar-style local unitaries, one per party.
pub fn random_local_unitary(local_dims: &[usize], rng: &mut impl Rng) -> ComplexMatrix {
    let mut u = random_unitary(local_dims[0], rng);
    for &d in &local_dims[1..] {
        u = kron(&u, &random_unitary(d, rng));
    }
    u
}
