//! Measurement-induced lower bounds on concurrence.
//!
//! For an informationally complete `(N,M)`-POVM with purity `x` on `C^d`,
//! the probability matrix `P(rho)` has entries
//! `tr(rho (E(a,k) (x) E(b,l)))` and
//!
//! ```text
//! C(rho) >= M(M-1)/(xM^2 - d) * sqrt(2/(d(d-1))) * (||P(rho)||_tr - T)
//! T = (d-1)(xM^2 + d^2) / (dM(M-1))
//! ```
//!
//! Every separable state satisfies `||P(rho)||_tr <= T`. The GSIC and SIC
//! variants rescale the effects so that the threshold becomes 1.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{realign, trace_norm, CMatrix};
use crate::povm::{depolarized_sic, gsic_from_x, sic_povm, SymmetricPovm};
use crate::states::{DensityMatrix, PureState};

/// Largest imaginary part tolerated in `tr(rho (E (x) E'))`.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

/// `x` closer than this to `d/M^2` makes the bound coefficient blow up.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Reference values quoted alongside the Tiles example for two bounds this
/// crate does not implement.
pub mod reference {
    /// Concurrence lower bound for the Tiles state from the generalized
    /// realignment bound with `alpha = beta = 5`.
    pub const TILES_GENERALIZED_REALIGNMENT_BOUND: f64 = 0.05399;
    /// Noise threshold for the Tiles mixture from the `mu`/`nu` weighted
    /// correlation-matrix bound.
    pub const TILES_WEIGHTED_CORRELATION_P_THRESHOLD: f64 = 0.88221;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMethod {
    Nm,
    Gsic,
    Sic,
    Realignment,
}

impl BoundMethod {
    pub fn tag(self) -> &'static str {
        match self {
            BoundMethod::Nm => "nm",
            BoundMethod::Gsic => "gsic",
            BoundMethod::Sic => "sic",
            BoundMethod::Realignment => "realignment",
        }
    }
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BoundMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nm" => Ok(BoundMethod::Nm),
            "gsic" => Ok(BoundMethod::Gsic),
            "sic" => Ok(BoundMethod::Sic),
            "realignment" => Ok(BoundMethod::Realignment),
            other => Err(Error::param(
                "method",
                format!("unknown method `{other}` (expected nm, gsic, sic or realignment)"),
            )),
        }
    }
}

/// Outcome of one bound evaluation. For the realignment method
/// `trace_norm_p` holds `||R(rho)||_tr`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub method: BoundMethod,
    pub trace_norm_p: f64,
    /// Separable ceiling on `trace_norm_p`.
    pub threshold: f64,
    /// Right-hand side of the bound; negative means "not detected".
    pub bound_raw: f64,
    /// `max(0, bound_raw)`.
    pub bound: f64,
    pub d: usize,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

impl BoundReport {
    fn new(
        method: BoundMethod,
        d: usize,
        trace_norm_p: f64,
        threshold: f64,
        bound_raw: f64,
    ) -> Self {
        BoundReport {
            method,
            trace_norm_p,
            threshold,
            bound_raw,
            bound: bound_raw.max(0.0),
            d,
            n: None,
            m: None,
            x: None,
            t: None,
        }
    }

    fn with_povm(mut self, p: &SymmetricPovm) -> Self {
        self.n = Some(p.n());
        self.m = Some(p.m());
        self.x = Some(p.x());
        self.t = p.t();
        self
    }

    pub fn detects_entanglement(&self) -> bool {
        self.bound_raw > 0.0
    }
}

/// `P(rho)`, rows `(a,k)` and columns `(b,l)` both alpha-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix {
    n: usize,
    m: usize,
    scale: f64,
    entries: DMatrix<f64>,
}

impl ProbabilityMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Multiplier applied to every effect on both sides (1 for plain POVMs).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn trace_norm(&self) -> f64 {
        trace_norm(&self.entries).expect("probability matrix is square")
    }

    /// Sum of the `M x M` block for measurement pair `(alpha, beta)`.
    pub fn block_sum(&self, alpha: usize, beta: usize) -> f64 {
        self.entries
            .view((alpha * self.m, beta * self.m), (self.m, self.m))
            .sum()
    }

    /// `max |block_sum - scale^2|` over all blocks.
    pub fn max_block_deviation(&self) -> f64 {
        let target = self.scale * self.scale;
        let mut worst = 0.0f64;
        for a in 0..self.n {
            for b in 0..self.n {
                worst = worst.max((self.block_sum(a, b) - target).abs());
            }
        }
        worst
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.min()
    }
}

/// `P(rho)` with unscaled effects.
pub fn probability_matrix(
    rho: &DensityMatrix,
    povm_a: &SymmetricPovm,
    povm_b: &SymmetricPovm,
) -> Result<ProbabilityMatrix> {
    probability_matrix_scaled(rho, povm_a, povm_b, 1.0)
}

/// `P(rho)` with every effect multiplied by `scale` on both sides.
pub fn probability_matrix_scaled(
    rho: &DensityMatrix,
    povm_a: &SymmetricPovm,
    povm_b: &SymmetricPovm,
    scale: f64,
) -> Result<ProbabilityMatrix> {
    if rho.da() != povm_a.dim() || rho.db() != povm_b.dim() {
        return Err(Error::Dimension(format!(
            "state is {}x{} but POVMs act on d={} and d={}",
            rho.da(),
            rho.db(),
            povm_a.dim(),
            povm_b.dim()
        )));
    }
    if (povm_a.n(), povm_a.m()) != (povm_b.n(), povm_b.m()) {
        return Err(Error::Dimension(format!(
            "POVM shapes differ: ({},{}) vs ({},{})",
            povm_a.n(),
            povm_a.m(),
            povm_b.n(),
            povm_b.m()
        )));
    }
    let (da, db) = (rho.da(), rho.db());
    let r = rho.matrix();
    let nm = povm_a.effects().len();

    // Y_a[k,l] = sum_ij rho[(i,k),(j,l)] A_ji, so entry(a,b) = tr(Y_a B).
    let partial: Vec<CMatrix> = povm_a
        .effects()
        .iter()
        .map(|a| {
            CMatrix::from_fn(db, db, |k, l| {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..da {
                    for j in 0..da {
                        acc += r[(i * db + k, j * db + l)] * a[(j, i)];
                    }
                }
                acc
            })
        })
        .collect();

    let mut entries = DMatrix::<f64>::zeros(nm, nm);
    let s2 = scale * scale;
    for (row, y) in partial.iter().enumerate() {
        for (col, b) in povm_b.effects().iter().enumerate() {
            let v: Complex64 = y.iter().zip(b.transpose().iter()).map(|(p, q)| p * q).sum();
            if v.im.abs() > IMAG_RESIDUE_TOL {
                return Err(Error::DataIntegrity(format!(
                    "tr(rho (E{row} x E{col})) has imaginary part {:e}",
                    v.im
                )));
            }
            entries[(row, col)] = s2 * v.re;
        }
    }
    Ok(ProbabilityMatrix {
        n: povm_a.n(),
        m: povm_a.m(),
        scale,
        entries,
    })
}

/// `(d-1)(xM^2 + d^2) / (dM(M-1))`.
pub fn separability_threshold(d: usize, m: usize, x: f64) -> f64 {
    let (df, mf) = (d as f64, m as f64);
    (df - 1.0) * (x * mf * mf + df * df) / (df * mf * (mf - 1.0))
}

/// True when `x` is within [`DEGENERACY_TOL`] of `d/M^2`.
pub fn is_degenerate(d: usize, m: usize, x: f64) -> bool {
    let (df, mf) = (d as f64, m as f64);
    x - df / (mf * mf) <= DEGENERACY_TOL
}

fn concurrence_prefactor(d: usize) -> f64 {
    let df = d as f64;
    (2.0 / (df * (df - 1.0))).sqrt()
}

fn nm_coefficient(d: usize, m: usize, x: f64) -> f64 {
    let (df, mf) = (d as f64, m as f64);
    mf * (mf - 1.0) / (x * mf * mf - df)
}

fn check_pair(rho: &DensityMatrix, povm: &SymmetricPovm) -> Result<usize> {
    let d = rho.local_dim()?;
    if d != povm.dim() {
        return Err(Error::Dimension(format!(
            "state is {d}x{d} but the POVM acts on d={}",
            povm.dim()
        )));
    }
    if d < 2 {
        return Err(Error::param("d", "concurrence bounds need d >= 2"));
    }
    if is_degenerate(d, povm.m(), povm.x()) {
        return Err(Error::Infeasible(format!(
            "x = {} is within {DEGENERACY_TOL:e} of d/M^2 = {}; the bound coefficient diverges",
            povm.x(),
            d as f64 / (povm.m() * povm.m()) as f64
        )));
    }
    Ok(d)
}

/// The general `(N,M)`-POVM bound, same POVM on both sides.
pub fn nm_bound(rho: &DensityMatrix, povm: &SymmetricPovm) -> Result<BoundReport> {
    let d = check_pair(rho, povm)?;
    let (m, x) = (povm.m(), povm.x());
    let tn = probability_matrix(rho, povm, povm)?.trace_norm();
    let threshold = separability_threshold(d, m, x);
    let raw = nm_coefficient(d, m, x) * concurrence_prefactor(d) * (tn - threshold);
    Ok(BoundReport::new(BoundMethod::Nm, d, tn, threshold, raw).with_povm(povm))
}

/// GSIC POVM with purity `x`: the Gell-Mann construction when it reaches
/// `x`, otherwise (for `d` in {2,3}) a SIC mixed with white noise.
///
/// Both give the same trace norm of the probability matrix: any two GSICs of
/// equal purity differ by an orthogonal map on the traceless operator space.
pub fn gsic_povm(d: usize, x: f64) -> Result<SymmetricPovm> {
    match gsic_from_x(d, x) {
        Err(e @ Error::Infeasible(_)) if matches!(d, 2 | 3) => depolarized_sic(d, x).map_err(|_| e),
        other => other,
    }
}

/// GSIC bound with rescaled effects `E_k = sqrt(d(d+1)/(xd^2+1)) P_k`.
pub fn gsic_bound(rho: &DensityMatrix, d: usize, x: f64) -> Result<BoundReport> {
    let povm = gsic_povm(d, x)?;
    check_pair(rho, &povm)?;
    let df = d as f64;
    let scale = (df * (df + 1.0) / (x * df * df + 1.0)).sqrt();
    let tn = probability_matrix_scaled(rho, &povm, &povm, scale)?.trace_norm();
    let coef = (df - 1.0) * (x * df * df + 1.0) / (x * df.powi(3) - 1.0);
    let threshold =
        (x * df.powi(3) - 1.0 + df * (1.0 - x * df)) / ((df - 1.0) * (x * df * df + 1.0));
    let raw = coef * concurrence_prefactor(d) * (tn - threshold);
    Ok(BoundReport::new(BoundMethod::Gsic, d, tn, threshold, raw).with_povm(&povm))
}

/// SIC bound with `E_k = sqrt((d+1)/(2d)) Pi_k`.
pub fn sic_bound(rho: &DensityMatrix, d: usize) -> Result<BoundReport> {
    let sic = sic_povm(d)?;
    let povm = sic.povm();
    check_pair(rho, povm)?;
    let df = d as f64;
    // povm effects are Pi_k/d.
    let scale = df * ((df + 1.0) / (2.0 * df)).sqrt();
    let tn = probability_matrix_scaled(rho, povm, povm, scale)?.trace_norm();
    let raw = 2.0 * concurrence_prefactor(d) * (tn - 1.0);
    Ok(BoundReport::new(BoundMethod::Sic, d, tn, 1.0, raw).with_povm(povm))
}

/// `sqrt(2/(d(d-1))) (||R(rho)||_tr - 1)`.
pub fn realignment_bound(rho: &DensityMatrix) -> Result<BoundReport> {
    let d = rho.local_dim()?;
    if d < 2 {
        return Err(Error::param("d", "concurrence bounds need d >= 2"));
    }
    let tn = trace_norm(&realign(rho.matrix(), d, d)?)?;
    let raw = concurrence_prefactor(d) * (tn - 1.0);
    Ok(BoundReport::new(BoundMethod::Realignment, d, tn, 1.0, raw))
}

/// `sqrt(2(1 - tr rho_1^2))`.
pub fn exact_concurrence_pure(psi: &PureState) -> f64 {
    let r1 = psi.reduced_first();
    let purity = (&r1 * &r1).trace().re;
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// `max(0, sqrt(2/(d(d-1))) (d f - 1))`.
pub fn exact_concurrence_isotropic(d: usize, f: f64) -> f64 {
    (concurrence_prefactor(d) * (d as f64 * f - 1.0)).max(0.0)
}

/// `M(M-1)/(xM^2-d) (||P||_tr - T) - (||R||_tr - 1)`; non-negative values
/// are consistent with the measurement bound dominating realignment.
pub fn conjecture_gap(rho: &DensityMatrix, povm: &SymmetricPovm) -> Result<f64> {
    let nm = nm_bound(rho, povm)?;
    let re = realignment_bound(rho)?;
    let lhs = nm_coefficient(nm.d, povm.m(), povm.x()) * (nm.trace_norm_p - nm.threshold);
    Ok(lhs - (re.trace_norm_p - 1.0))
}
