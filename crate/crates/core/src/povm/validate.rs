use serde::Serialize;

use super::SymmetricPovm;
use crate::matcore::{identity, kron, min_eigenvalue, swap_operator, CMatrix};

/// Largest absolute deviation of each defining condition of an
/// `(N,M)`-POVM, plus the residual of the conical 2-design identity
///
/// ```text
/// sum E(a,k) (x) E(a,k) = (xM^2 - d)/(M(M-1)) F + (d^3 - xM^2)/(dM(M-1)) I
/// ```
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub x: f64,
    /// `max |tr E - d/M|`
    pub trace: f64,
    /// `max |tr E^2 - x|`
    pub purity: f64,
    /// `max |tr E(a,k)E(a,l) - (d - Mx)/(M(M-1))|`, `l != k`
    pub same_group_overlap: f64,
    /// `max |tr E(a,k)E(b,l) - d/M^2|`, `b != a`
    pub cross_group_overlap: f64,
    /// `max_a max_ij |(sum_k E(a,k) - I)_ij|`
    pub completeness: f64,
    /// Smallest eigenvalue over all effects.
    pub min_eigenvalue: f64,
    /// Frobenius norm of the 2-design identity residual.
    pub design_residual: f64,
    /// Whether `d/M^2 < x <= min(d^2/M^2, d/M)`.
    pub x_in_range: bool,
}

impl ValidationReport {
    /// Largest deviation across the equality conditions.
    pub fn max_deviation(&self) -> f64 {
        [
            self.trace,
            self.purity,
            self.same_group_overlap,
            self.cross_group_overlap,
            self.completeness,
            self.design_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Every equality holds within `tol` and every effect has eigenvalues
    /// `>= -tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() <= tol && self.min_eigenvalue >= -tol
    }

    /// `(label, value)` rows in a fixed order, for printing.
    pub fn rows(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("trace", self.trace),
            ("purity", self.purity),
            ("same-group overlap", self.same_group_overlap),
            ("cross-group overlap", self.cross_group_overlap),
            ("completeness", self.completeness),
            ("min eigenvalue", self.min_eigenvalue),
            ("2-design residual", self.design_residual),
        ]
    }
}

fn hs_real(a: &CMatrix, b: &CMatrix) -> f64 {
    // tr(AB) = sum_ij A_ij B_ji
    a.iter()
        .zip(b.transpose().iter())
        .map(|(p, q)| p * q)
        .sum::<num_complex::Complex64>()
        .re
}

/// Never fails: every condition is measured and reported.
pub fn validate_povm(p: &SymmetricPovm) -> ValidationReport {
    let (d, n, m, x) = (p.dim(), p.n(), p.m(), p.x());
    let (df, mf) = (d as f64, m as f64);

    let mut trace = 0.0f64;
    let mut min_ev = f64::INFINITY;
    for e in p.effects() {
        trace = trace.max((e.trace().re - df / mf).abs());
        min_ev = min_ev.min(min_eigenvalue(e).unwrap_or(f64::NEG_INFINITY));
    }

    let same_target = (df - mf * x) / (mf * (mf - 1.0));
    let cross_target = df / (mf * mf);
    let (mut purity, mut same, mut cross) = (0.0f64, 0.0f64, 0.0f64);
    let nm = n * m;
    for i in 0..nm {
        for j in i..nm {
            let v = hs_real(&p.effects()[i], &p.effects()[j]);
            if i == j {
                purity = purity.max((v - x).abs());
            } else if i / m == j / m {
                same = same.max((v - same_target).abs());
            } else {
                cross = cross.max((v - cross_target).abs());
            }
        }
    }

    let id = identity(d);
    let mut completeness = 0.0f64;
    for alpha in 0..n {
        let sum = (0..m).fold(CMatrix::zeros(d, d), |acc, k| acc + p.effect(alpha, k));
        let dev = (sum - &id).iter().map(|z| z.norm()).fold(0.0, f64::max);
        completeness = completeness.max(dev);
    }

    let mm = mf * mf;
    let f_coef = (x * mm - df) / (mf * (mf - 1.0));
    let i_coef = (df.powi(3) - x * mm) / (df * mf * (mf - 1.0));
    let second_moment = p
        .effects()
        .iter()
        .fold(CMatrix::zeros(d * d, d * d), |acc, e| acc + kron(e, e));
    let target = swap_operator(d).scale(f_coef) + identity(d * d).scale(i_coef);
    let design_residual = (second_moment - target).norm();

    let x_hi = (df * df / mm).min(df / mf);
    ValidationReport {
        d,
        n,
        m,
        x,
        trace,
        purity,
        same_group_overlap: same,
        cross_group_overlap: cross,
        completeness,
        min_eigenvalue: min_ev,
        design_residual,
        x_in_range: x > df / mm && x <= x_hi * (1.0 + 1e-12),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::{build_preset, GroupingPreset};

    #[test]
    fn example_one_povm_is_exact() {
        let p = build_preset(3, 8, 2, GroupingPreset::PaperEx1, 0.01).unwrap();
        let r = validate_povm(&p);
        assert!(r.max_deviation() <= 1e-12, "{r:?}");
        assert!(r.min_eigenvalue > 0.0);
        assert!(r.x_in_range);
    }

    #[test]
    fn degenerate_t_zero() {
        let p = build_preset(3, 4, 3, GroupingPreset::Canonical, 0.0).unwrap();
        let r = validate_povm(&p);
        assert!((p.x() - 3.0 / 9.0).abs() < 1e-15);
        assert!(r.max_deviation() <= 1e-12, "{r:?}");
        // x = d/M^2 sits on the excluded boundary.
        assert!(!r.x_in_range);
    }

    #[test]
    fn detects_a_broken_effect() {
        let p = build_preset(2, 3, 2, GroupingPreset::Canonical, 0.1).unwrap();
        let mut effects = p.effects().to_vec();
        effects[0][(0, 1)] += num_complex::Complex64::new(0.01, 0.0);
        effects[0][(1, 0)] += num_complex::Complex64::new(0.01, 0.0);
        let broken = SymmetricPovm::from_parts(2, 3, 2, p.x(), effects, p.construction().clone());
        let r = validate_povm(&broken);
        assert!(r.completeness > 1e-3);
        assert!(r.design_residual > 1e-3);
        assert!(!r.passes(1e-10));
    }
}
