//! Informationally complete `(N,M)`-POVMs.
//!
//! A POVM here is a grid of `N x M` effects `E(alpha,k)`, each with trace
//! `d/M` and purity `x`, built from an orthonormal Hermitian basis as
//!
//! ```text
//! E(alpha,k) = I/M + t H(alpha,k)
//! H(alpha,k) = G_alpha - sqrt(M)(sqrt(M)+1) G(alpha,k)   k < M
//! H(alpha,M) = (sqrt(M)+1) G_alpha
//! G_alpha    = sum_k G(alpha,k)
//! ```
//!
//! Effects are stored flattened alpha-major, k-minor; that order is also the
//! row/column order of the probability matrix in [`crate::bounds`].

mod basis;
mod grouping;
mod serial;
mod sic;
mod validate;

pub use basis::{gell_mann_basis, HermitianBasis};
pub use grouping::{check_informationally_complete, Grouping, GroupingPreset};
pub use serial::{EffectDump, GroupingSpec, PovmConfig, PovmDump};
pub use sic::{depolarized_sic, sic_povm, weyl_heisenberg_orbit, SicPovm};
pub use validate::{validate_povm, ValidationReport};

use crate::error::{Error, Result};
use crate::matcore::{eig_range_hermitian, identity, min_eigenvalue, CMatrix};

/// Minimum effect eigenvalue accepted as positive.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// How far past an endpoint of [`t_range`] a requested `t` may sit before it is
/// rejected outright.
const T_RANGE_SLACK: f64 = 1e-12;

/// How the effects of a [`SymmetricPovm`] were produced.
#[derive(Debug, Clone, PartialEq)]
pub enum Construction {
    /// Hermitian-basis construction with parameter `t`.
    Basis { t: f64, grouping: Grouping },
    /// Rank-one SIC, `Pi_k / d`.
    Sic,
    /// `mixing * Pi_k/d + (1 - mixing) I/d^2` for SIC projectors `Pi_k`.
    DepolarizedSic { mixing: f64 },
}

#[derive(Debug, Clone)]
pub struct SymmetricPovm {
    dim: usize,
    n: usize,
    m: usize,
    x: f64,
    effects: Vec<CMatrix>,
    construction: Construction,
}

impl SymmetricPovm {
    pub(crate) fn from_parts(
        dim: usize,
        n: usize,
        m: usize,
        x: f64,
        effects: Vec<CMatrix>,
        construction: Construction,
    ) -> Self {
        debug_assert_eq!(effects.len(), n * m);
        SymmetricPovm {
            dim,
            n,
            m,
            x,
            effects,
            construction,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Purity parameter `tr(E^2)`.
    pub fn x(&self) -> f64 {
        self.x
    }

    /// Construction parameter, when built from a Hermitian basis.
    pub fn t(&self) -> Option<f64> {
        match self.construction {
            Construction::Basis { t, .. } => Some(t),
            _ => None,
        }
    }

    pub fn grouping(&self) -> Option<&Grouping> {
        match &self.construction {
            Construction::Basis { grouping, .. } => Some(grouping),
            _ => None,
        }
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    /// All effects, alpha-major.
    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    /// `E(alpha,k)` with 0-based indices.
    pub fn effect(&self, alpha: usize, k: usize) -> &CMatrix {
        &self.effects[alpha * self.m + k]
    }

    /// Same POVM with the flattened effect order permuted:
    /// new position `i` holds old effect `perm[i]`.
    ///
    /// The result no longer respects alpha-major grouping and is only meant
    /// for probing order-independence of trace-norm quantities.
    pub fn with_effect_order(&self, perm: &[usize]) -> Result<SymmetricPovm> {
        let nm = self.effects.len();
        let mut seen = vec![false; nm];
        if perm.len() != nm
            || perm
                .iter()
                .any(|&p| p >= nm || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::param(
                "perm",
                format!("not a permutation of 0..{nm}"),
            ));
        }
        let mut out = self.clone();
        out.effects = perm.iter().map(|&p| self.effects[p].clone()).collect();
        Ok(out)
    }
}

/// `x = d/M^2 + t^2 (M-1)(sqrt(M)+1)^2`.
pub fn x_of_t(d: usize, m: usize, t: f64) -> f64 {
    let (d, m) = (d as f64, m as f64);
    d / (m * m) + t * t * (m - 1.0) * (m.sqrt() + 1.0).powi(2)
}

/// Non-negative `t` with `x_of_t(d, m, t) = x`.
pub fn t_of_x(d: usize, m: usize, x: f64) -> Result<f64> {
    let (df, mf) = (d as f64, m as f64);
    let excess = x - df / (mf * mf);
    if excess < 0.0 {
        return Err(Error::Infeasible(format!(
            "x = {x} is below d/M^2 = {}",
            df / (mf * mf)
        )));
    }
    Ok((excess / ((mf - 1.0) * (mf.sqrt() + 1.0).powi(2))).sqrt())
}

/// The operators `H(alpha,k)`, alpha-major.
pub fn h_operators(basis: &HermitianBasis, grouping: &Grouping) -> Result<Vec<CMatrix>> {
    if basis.dim() != grouping.dim() {
        return Err(Error::Dimension(format!(
            "basis has d={} but grouping has d={}",
            basis.dim(),
            grouping.dim()
        )));
    }
    let d = basis.dim();
    let sm = (grouping.m() as f64).sqrt();
    let mut out = Vec::with_capacity(grouping.n() * grouping.m());
    for group in grouping.groups() {
        let g_alpha = group
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, &i| acc + basis.op(i));
        for &i in group {
            out.push(&g_alpha - basis.op(i).scale(sm * (sm + 1.0)));
        }
        out.push(g_alpha.scale(sm + 1.0));
    }
    Ok(out)
}

/// Closed interval of `t` keeping every effect positive:
/// `[-1/(M lambda_max), 1/(M |lambda_min|)]` over all `H(alpha,k)`.
pub fn t_range(basis: &HermitianBasis, grouping: &Grouping) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for h in h_operators(basis, grouping)? {
        let (a, b) = eig_range_hermitian(&h)?;
        lo = lo.min(a);
        hi = hi.max(b);
    }
    let m = grouping.m() as f64;
    Ok((-1.0 / (m * hi), 1.0 / (m * lo.abs())))
}

/// Builds `E(alpha,k) = I/M + t H(alpha,k)`.
pub fn build_nm_povm(basis: &HermitianBasis, grouping: &Grouping, t: f64) -> Result<SymmetricPovm> {
    if !t.is_finite() {
        return Err(Error::param("t", "must be finite"));
    }
    let (t_lo, t_hi) = t_range(basis, grouping)?;
    let (d, n, m) = (basis.dim(), grouping.n(), grouping.m());
    let base = identity(d).scale(1.0 / m as f64);
    let effects: Vec<CMatrix> = h_operators(basis, grouping)?
        .iter()
        .map(|h| &base + h.scale(t))
        .collect();

    let outside = t < t_lo - T_RANGE_SLACK || t > t_hi + T_RANGE_SLACK;
    let mut worst = (0, 0, f64::INFINITY);
    for (idx, e) in effects.iter().enumerate() {
        let ev = min_eigenvalue(e)?;
        if ev < worst.2 {
            worst = (idx / m, idx % m, ev);
        }
    }
    if outside || worst.2 < -POSITIVITY_TOL {
        return Err(Error::Positivity {
            alpha: worst.0 + 1,
            k: worst.1 + 1,
            min_eigenvalue: worst.2,
            t,
            t_lo,
            t_hi,
        });
    }
    Ok(SymmetricPovm::from_parts(
        d,
        n,
        m,
        x_of_t(d, m, t),
        effects,
        Construction::Basis {
            t,
            grouping: grouping.clone(),
        },
    ))
}

/// Convenience: Gell-Mann basis plus a grouping preset.
pub fn build_preset(
    d: usize,
    n: usize,
    m: usize,
    preset: GroupingPreset,
    t: f64,
) -> Result<SymmetricPovm> {
    let basis = gell_mann_basis(d)?;
    let grouping = Grouping::preset(preset, d, n, m)?;
    build_nm_povm(&basis, &grouping, t)
}

/// Feasible purity interval `(d/M^2, min(d^2/M^2, d/M)]` for a GSIC
/// (`N = 1`, `M = d^2`): `(1/d^3, 1/d^2]`.
pub fn gsic_x_interval(d: usize) -> (f64, f64) {
    let df = d as f64;
    (1.0 / df.powi(3), 1.0 / (df * df))
}

/// GSIC POVM with purity `x`, built from the canonical Gell-Mann basis
/// with `t >= 0`.
pub fn gsic_from_x(d: usize, x: f64) -> Result<SymmetricPovm> {
    if d < 2 {
        return Err(Error::param("d", format!("need d >= 2, got {d}")));
    }
    let (lo, hi) = gsic_x_interval(d);
    if !(x > lo && x <= hi * (1.0 + 1e-12)) {
        return Err(Error::Infeasible(format!(
            "GSIC purity x = {x} outside ({lo}, {hi}] for d = {d}"
        )));
    }
    let m = d * d;
    let t = t_of_x(d, m, x)?;
    let basis = gell_mann_basis(d)?;
    let grouping = Grouping::canonical(d, 1, m)?;
    let (_, t_hi) = t_range(&basis, &grouping)?;
    if t > t_hi + T_RANGE_SLACK {
        return Err(Error::Infeasible(format!(
            "GSIC purity x = {x} needs t = {t}, beyond the Gell-Mann limit t <= {t_hi} \
             (largest reachable x = {})",
            x_of_t(d, m, t_hi)
        )));
    }
    build_nm_povm(&basis, &grouping, t.min(t_hi))
}
