//! Noise channels whose Kraus decomposition factorizes into scalar weights
//! `f_i(p)` and fixed operators `M_i`, i.e. `ρ ↦ Σ_i f_i(p) M_i ρ M_i†`
//! with `Σ_i f_i(p) M_i† M_i = I`. All parameter dependence lives in the
//! weights, so `∂ρ_p/∂p` is available analytically.
//!
//! Built-ins: the qudit depolarizing channel on `p ∈ [0, 3/4]`, acting as
//! `ρ ↦ (1 - 4p/3) ρ + (4p/3) Tr(ρ) I/d`, and the qubit bit-flip channel
//! `ρ ↦ (1-p) ρ + p σˣ ρ σˣ` on `p ∈ [0, 1]`. The depolarizing channel is
//! applied through its affine form party by party (`O(n·D²)` instead of
//! `(d²)ⁿ` Kraus terms); an explicit generator-based Kraus list is still
//! materialized for `d ≤ 3` so the completeness contract and the
//! equal-weight grouping checks can run on it.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::WeightExpr;
use crate::linalg::{kron, ComplexMatrix, HermitianOperator};
use crate::math::abs;

/// One weighted Kraus term: operator `M_i` with scalar weight `f_i(p)`.
#[derive(Clone, Debug)]
pub struct KrausTerm {
    pub weight: WeightExpr,
    pub operator: ComplexMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Depolarizing,
    BitFlip,
    Custom,
}

/// A single-party channel description with analytic parameter derivatives.
#[derive(Clone, Debug)]
pub struct VectorEncoding {
    kind: ChannelKind,
    local_dim: usize,
    param_range: (f64, f64),
    kraus: Option<Vec<KrausTerm>>,
}

/// Highest local dimension for which the depolarizing Kraus list is built.
pub const DEPOLARIZING_KRAUS_MAX_DIM: usize = 3;

/// Completeness tolerance on `Σ f_i M_i† M_i = I` at sampled `p`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

impl VectorEncoding {
    /// Qudit depolarizing channel, `p ∈ [0, 3/4]`.
    ///
    /// For `d ≤ 3` the returned encoding carries the explicit Kraus list
    /// `{1 - c·p: I, 4p/(3d²): √(d/2)·λ⁽ⁱ⁾}` over the generalized Gell-Mann
    /// generators λ⁽ⁱ⁾ (normalized `Tr λ⁽ⁱ⁾λ⁽ʲ⁾ = 2δᵢⱼ`), with
    /// `c = 4(d²-1)/(3d²)`; the √(d/2) rescaling is what makes the list
    /// trace preserving and its action equal to the affine form exactly.
    /// At `d = 2` this reduces to the familiar `{1-p: I, p/3: σˣ,σʸ,σᶻ}`.
    pub fn depolarizing(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::contract(format!(
                "depolarizing channel needs local dimension ≥ 2, got {d}"
            )));
        }
        let kraus = if d <= DEPOLARIZING_KRAUS_MAX_DIM {
            Some(depolarizing_kraus(d))
        } else {
            None
        };
        Ok(VectorEncoding {
            kind: ChannelKind::Depolarizing,
            local_dim: d,
            param_range: (0.0, 0.75),
            kraus,
        })
    }

    /// Qubit bit-flip channel `(1-p) ρ + p σˣ ρ σˣ`, `p ∈ [0, 1]`.
    pub fn bit_flip() -> Self {
        let eye = ComplexMatrix::identity(2);
        let mut sx = ComplexMatrix::zeros(2);
        sx.set(0, 1, Complex64::new(1.0, 0.0));
        sx.set(1, 0, Complex64::new(1.0, 0.0));
        VectorEncoding {
            kind: ChannelKind::BitFlip,
            local_dim: 2,
            param_range: (0.0, 1.0),
            kraus: Some(vec![
                KrausTerm {
                    weight: WeightExpr::one_minus_p(),
                    operator: eye,
                },
                KrausTerm {
                    weight: WeightExpr::param(),
                    operator: sx,
                },
            ]),
        }
    }

    /// Channel from an explicit weighted Kraus list; the completeness,
    /// non-negativity, and derivative contracts are checked on a sample of
    /// the parameter range.
    pub fn custom(
        local_dim: usize,
        terms: Vec<KrausTerm>,
        param_range: (f64, f64),
    ) -> Result<Self> {
        if local_dim == 0 {
            return Err(Error::contract("local dimension must be positive"));
        }
        if param_range.0 >= param_range.1 {
            return Err(Error::contract("parameter range must be non-degenerate"));
        }
        if terms.is_empty() {
            return Err(Error::contract("channel needs at least one Kraus term"));
        }
        if terms.iter().any(|t| t.operator.dim() != local_dim) {
            return Err(Error::contract("Kraus operator dimension mismatch"));
        }
        let enc = VectorEncoding {
            kind: ChannelKind::Custom,
            local_dim,
            param_range,
            kraus: Some(terms),
        };
        enc.validate()?;
        Ok(enc)
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn param_range(&self) -> (f64, f64) {
        self.param_range
    }

    /// Explicit Kraus list, when one is materialized.
    pub fn kraus_terms(&self) -> Option<&[KrausTerm]> {
        self.kraus.as_deref()
    }

    /// Verifies the channel contracts on a 7-point sample of the parameter
    /// range: `Σ f_i M_i† M_i = I` within 1e-10, weights non-negative, and
    /// symbolic weight derivatives matching a central finite difference.
    pub fn validate(&self) -> Result<()> {
        let Some(terms) = self.kraus.as_deref() else {
            return Ok(());
        };
        let (lo, hi) = self.param_range;
        let h = 1e-5 * (hi - lo);
        for k in 0..7 {
            let p = lo + (hi - lo) * k as f64 / 6.0;
            let mut sum = ComplexMatrix::zeros(self.local_dim);
            for t in terms {
                let w = t.weight.eval(p);
                if w < -1e-12 {
                    return Err(Error::contract(format!(
                        "weight {} is negative ({w:.3e}) at p = {p}",
                        t.weight
                    )));
                }
                let mtm = t.operator.adjoint().mul(&t.operator);
                sum.add_scaled_assign(&mtm, w);
            }
            let res = sum.sub(&ComplexMatrix::identity(self.local_dim)).max_abs();
            if res > COMPLETENESS_TOL {
                return Err(Error::contract(format!(
                    "completeness violated at p = {p}: residual {res:.3e}"
                )));
            }
            // Derivative check at interior points only.
            if p - h >= lo && p + h <= hi {
                for t in terms {
                    let fd = (t.weight.eval(p + h) - t.weight.eval(p - h)) / (2.0 * h);
                    let an = t.weight.derivative().eval(p);
                    if abs(an - fd) > 1e-6 {
                        return Err(Error::contract(format!(
                            "weight derivative of {} deviates from finite difference by {:.3e} at p = {p}",
                            t.weight,
                            abs(an - fd)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Single-party action `Σ f_i(p) M_i ρ M_i†` (affine fast path for the
    /// depolarizing kind).
    pub fn apply_one(&self, rho: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
        self.check_p(p)?;
        if rho.dim() != self.local_dim {
            return Err(Error::contract("state dimension mismatch"));
        }
        Ok(match self.kind {
            ChannelKind::Depolarizing => {
                let eps = 1.0 - 4.0 * p / 3.0;
                let mixing = 4.0 * p / (3.0 * self.local_dim as f64) * rho.trace().re;
                let mut out = rho.scale(eps);
                for i in 0..self.local_dim {
                    let cur = out.get(i, i);
                    out.set(i, i, cur + Complex64::new(mixing, 0.0));
                }
                out
            }
            _ => {
                let terms = self.kraus.as_deref().expect("non-depolarizing kinds carry kraus");
                let mut out = ComplexMatrix::zeros(self.local_dim);
                for t in terms {
                    let w = t.weight.eval(p);
                    let sandwich = t.operator.mul(rho).mul(&t.operator.adjoint());
                    out.add_scaled_assign(&sandwich, w);
                }
                out
            }
        })
    }

    fn check_p(&self, p: f64) -> Result<()> {
        let (lo, hi) = self.param_range;
        if !(lo..=hi).contains(&p) {
            return Err(Error::domain(format!(
                "noise strength p = {p} outside [{lo}, {hi}]"
            )));
        }
        Ok(())
    }
}

fn depolarizing_kraus(d: usize) -> Vec<KrausTerm> {
    let df = d as f64;
    let c = 4.0 * (df * df - 1.0) / (3.0 * df * df);
    let identity_weight = if c == 1.0 {
        WeightExpr::one_minus_p()
    } else {
        WeightExpr::constant(1.0).sub(WeightExpr::constant(c).mul(WeightExpr::param()))
    };
    let generator_weight = WeightExpr::p_over(0.75 * df * df);
    let scale = crate::math::sqrt(df / 2.0);
    let mut terms = vec![KrausTerm {
        weight: identity_weight,
        operator: ComplexMatrix::identity(d),
    }];
    for g in gell_mann(d) {
        terms.push(KrausTerm {
            weight: generator_weight.clone(),
            operator: g.scale(scale),
        });
    }
    terms
}

/// Generalized Gell-Mann generators of SU(d), normalized `Tr λᵃλᵇ = 2δᵃᵇ`.
pub fn gell_mann(d: usize) -> Vec<ComplexMatrix> {
    let mut gens = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut sym = ComplexMatrix::zeros(d);
            sym.set(j, k, Complex64::new(1.0, 0.0));
            sym.set(k, j, Complex64::new(1.0, 0.0));
            gens.push(sym);
            let mut asym = ComplexMatrix::zeros(d);
            asym.set(j, k, Complex64::new(0.0, -1.0));
            asym.set(k, j, Complex64::new(0.0, 1.0));
            gens.push(asym);
        }
    }
    for l in 1..d {
        let norm = crate::math::sqrt(2.0 / (l as f64 * (l as f64 + 1.0)));
        let mut diag = ComplexMatrix::zeros(d);
        for j in 0..l {
            diag.set(j, j, Complex64::new(norm, 0.0));
        }
        diag.set(l, l, Complex64::new(-(l as f64) * norm, 0.0));
        gens.push(diag);
    }
    gens
}

/// The same single-party channel applied to every subsystem of an
/// `n`-party probe, sharing one noise parameter.
#[derive(Clone, Debug)]
pub struct LocalChannelAssembly {
    base: VectorEncoding,
    n_parties: usize,
}

impl LocalChannelAssembly {
    pub fn new(base: VectorEncoding, n_parties: usize) -> Result<Self> {
        if n_parties == 0 {
            return Err(Error::contract("assembly needs at least one party"));
        }
        Ok(LocalChannelAssembly { base, n_parties })
    }

    pub fn base(&self) -> &VectorEncoding {
        &self.base
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn total_dim(&self) -> usize {
        self.base.local_dim.pow(self.n_parties as u32)
    }

    pub fn local_dims(&self) -> Vec<usize> {
        vec![self.base.local_dim; self.n_parties]
    }

    pub fn param_range(&self) -> (f64, f64) {
        self.base.param_range
    }

    /// Encoded state `ρ_p` from applying the channel locally to each party.
    pub fn apply(&self, rho0: &HermitianOperator, p: f64) -> Result<HermitianOperator> {
        self.base.check_p(p)?;
        self.check_dim(rho0)?;
        let dims = self.local_dims();
        let mut m = rho0.matrix().clone();
        for k in 0..self.n_parties {
            m = self.party_channel(&m, &dims, k, p);
        }
        HermitianOperator::new(symmetrized(m))
    }

    /// Analytic `∂ρ_p/∂p` by the product rule over parties.
    pub fn apply_derivative(&self, rho0: &HermitianOperator, p: f64) -> Result<HermitianOperator> {
        self.base.check_p(p)?;
        self.check_dim(rho0)?;
        let dims = self.local_dims();
        let mut acc = ComplexMatrix::zeros(self.total_dim());
        for deriv_party in 0..self.n_parties {
            let mut m = rho0.matrix().clone();
            for k in 0..self.n_parties {
                m = if k == deriv_party {
                    self.party_derivative(&m, &dims, k, p)
                } else {
                    self.party_channel(&m, &dims, k, p)
                };
            }
            acc.add_scaled_assign(&m, 1.0);
        }
        HermitianOperator::new(symmetrized(acc))
    }

    fn check_dim(&self, rho0: &HermitianOperator) -> Result<()> {
        if rho0.dim() != self.total_dim() {
            return Err(Error::contract(format!(
                "probe dimension {} does not match {} parties of dimension {}",
                rho0.dim(),
                self.n_parties,
                self.base.local_dim
            )));
        }
        Ok(())
    }

    fn party_channel(&self, m: &ComplexMatrix, dims: &[usize], k: usize, p: f64) -> ComplexMatrix {
        match self.base.kind {
            ChannelKind::Depolarizing => {
                let eps = 1.0 - 4.0 * p / 3.0;
                let mix = 4.0 * p / (3.0 * dims[k] as f64);
                let mut out = m.scale(eps);
                add_embedded_trace(&mut out, m, dims, k, mix);
                out
            }
            _ => {
                let terms = self.base.kraus.as_deref().expect("kraus present");
                let mut out = ComplexMatrix::zeros(m.dim());
                for t in terms {
                    let w = t.weight.eval(p);
                    if w == 0.0 {
                        continue;
                    }
                    out.add_scaled_assign(&local_sandwich(m, dims, k, &t.operator), w);
                }
                out
            }
        }
    }

    fn party_derivative(&self, m: &ComplexMatrix, dims: &[usize], k: usize, p: f64) -> ComplexMatrix {
        match self.base.kind {
            ChannelKind::Depolarizing => {
                // d/dp [(1-4p/3) ρ + (4p/3)(Tr_k ρ ⊗ I/d)] = (4/3)(Tr_k ρ ⊗ I/d - ρ)
                let mut out = m.scale(-4.0 / 3.0);
                add_embedded_trace(&mut out, m, dims, k, 4.0 / (3.0 * dims[k] as f64));
                out
            }
            _ => {
                let terms = self.base.kraus.as_deref().expect("kraus present");
                let mut out = ComplexMatrix::zeros(m.dim());
                for t in terms {
                    let w = t.weight.derivative().eval(p);
                    if w == 0.0 {
                        continue;
                    }
                    out.add_scaled_assign(&local_sandwich(m, dims, k, &t.operator), w);
                }
                out
            }
        }
    }

    /// Expands the `n`-party channel into its multi-index Kraus terms
    /// `M_{i₁} ⊗ … ⊗ M_{i_n}`, each tagged with the multiset of
    /// single-party weight classes (weights compared structurally). Returns
    /// `None` when the base channel has no explicit Kraus list or the
    /// expansion would exceed `max_terms`.
    pub fn kraus_expansion(&self, max_terms: usize) -> Option<Vec<MultiKrausTerm>> {
        let terms = self.base.kraus.as_deref()?;
        let t = terms.len();
        let total = t.checked_pow(self.n_parties as u32)?;
        if total > max_terms {
            return None;
        }
        // Weight classes by structural equality of the weight expressions.
        let mut classes: Vec<&WeightExpr> = Vec::new();
        let class_of: Vec<usize> = terms
            .iter()
            .map(|term| {
                if let Some(i) = classes.iter().position(|w| **w == term.weight) {
                    i
                } else {
                    classes.push(&term.weight);
                    classes.len() - 1
                }
            })
            .collect();

        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; self.n_parties];
        loop {
            let mut op = terms[digits[0]].operator.clone();
            for &ix in &digits[1..] {
                op = kron(&op, &terms[ix].operator);
            }
            let mut weight_class: Vec<usize> = digits.iter().map(|&ix| class_of[ix]).collect();
            weight_class.sort_unstable();
            let mut weight = terms[digits[0]].weight.clone();
            for &ix in &digits[1..] {
                weight = weight.mul(terms[ix].weight.clone());
            }
            out.push(MultiKrausTerm {
                operator: op,
                weight,
                weight_class,
            });
            // Increment the mixed-radix counter.
            let mut pos = self.n_parties;
            loop {
                if pos == 0 {
                    return Some(out);
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < t {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
}

/// One term of the `n`-party Kraus expansion.
#[derive(Clone, Debug)]
pub struct MultiKrausTerm {
    pub operator: ComplexMatrix,
    pub weight: WeightExpr,
    /// Sorted multiset of single-party weight classes; two terms with equal
    /// multisets carry identical weight functions.
    pub weight_class: Vec<usize>,
}

fn symmetrized(mut m: ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    for i in 0..n {
        for j in i..n {
            let avg = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
            m.set(i, j, avg);
            m.set(j, i, avg.conj());
        }
    }
    m
}

/// `out += scale · (Tr_k m) ⊗ I` embedded at party `k`.
fn add_embedded_trace(out: &mut ComplexMatrix, m: &ComplexMatrix, dims: &[usize], k: usize, scale: f64) {
    let lo: usize = dims[k + 1..].iter().product();
    let d = dims[k];
    let hi: usize = dims[..k].iter().product();
    let block = d * lo;
    for h in 0..hi {
        for hp in 0..hi {
            for l in 0..lo {
                for lp in 0..lo {
                    let mut tr = Complex64::new(0.0, 0.0);
                    for mm in 0..d {
                        tr += m.get(h * block + mm * lo + l, hp * block + mm * lo + lp);
                    }
                    tr *= scale;
                    for mm in 0..d {
                        let i = h * block + mm * lo + l;
                        let j = hp * block + mm * lo + lp;
                        let cur = out.get(i, j);
                        out.set(i, j, cur + tr);
                    }
                }
            }
        }
    }
}

/// `M_k ρ M_k†` with `M` acting on party `k` only.
fn local_sandwich(rho: &ComplexMatrix, dims: &[usize], k: usize, op: &ComplexMatrix) -> ComplexMatrix {
    let n = rho.dim();
    let lo: usize = dims[k + 1..].iter().product();
    let d = dims[k];
    let hi: usize = dims[..k].iter().product();
    let block = d * lo;

    // a = M_k ρ
    let mut a = ComplexMatrix::zeros(n);
    for h in 0..hi {
        for m in 0..d {
            for l in 0..lo {
                let row = h * block + m * lo + l;
                for mp in 0..d {
                    let w = op.get(m, mp);
                    if w.norm_sqr() == 0.0 {
                        continue;
                    }
                    let src = h * block + mp * lo + l;
                    for j in 0..n {
                        let cur = a.get(row, j);
                        a.set(row, j, cur + w * rho.get(src, j));
                    }
                }
            }
        }
    }
    // b = a M_k†
    let mut b = ComplexMatrix::zeros(n);
    for h in 0..hi {
        for m in 0..d {
            for l in 0..lo {
                let col = h * block + m * lo + l;
                for mp in 0..d {
                    let w = op.get(m, mp).conj();
                    if w.norm_sqr() == 0.0 {
                        continue;
                    }
                    let src = h * block + mp * lo + l;
                    for i in 0..n {
                        let cur = b.get(i, col);
                        b.set(i, col, cur + a.get(i, src) * w);
                    }
                }
            }
        }
    }
    b
}
