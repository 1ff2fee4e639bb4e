//! Rank-one SIC POVMs from Weyl-Heisenberg orbits of hardcoded fiducials.

use nalgebra::DVector;
use num_complex::Complex64;

use super::{gsic_x_interval, Construction, SymmetricPovm};
use crate::error::{Error, Result};
use crate::matcore::{c, identity, CMatrix};

#[derive(Debug, Clone)]
pub struct SicPovm {
    povm: SymmetricPovm,
    projectors: Vec<CMatrix>,
}

impl SicPovm {
    /// The POVM `{Pi_k / d}`.
    pub fn povm(&self) -> &SymmetricPovm {
        &self.povm
    }

    /// The rank-one projectors `Pi_k`.
    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn into_povm(self) -> SymmetricPovm {
        self.povm
    }
}

fn fiducial(d: usize) -> Result<DVector<Complex64>> {
    match d {
        2 => {
            // Bloch vector (1,1,1)/sqrt3.
            let theta = (1.0 / 3f64.sqrt()).acos();
            let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
            Ok(DVector::from_vec(vec![
                c((theta / 2.0).cos(), 0.0),
                phase * (theta / 2.0).sin(),
            ]))
        }
        3 => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            Ok(DVector::from_vec(vec![c(0.0, 0.0), c(r, 0.0), c(-r, 0.0)]))
        }
        _ => Err(Error::UnsupportedDimension {
            d,
            reason: "SIC fiducials are available for d = 2 and d = 3 only",
        }),
    }
}

/// Projectors `D(a,b)|psi><psi|D(a,b)^dagger` with `D(a,b) = X^a Z^b`,
/// ordered a-major. `X|j> = |j+1>`, `Z|j> = w^j |j>`.
pub fn weyl_heisenberg_orbit(fiducial: &DVector<Complex64>) -> Vec<CMatrix> {
    let d = fiducial.len();
    let psi = fiducial.normalize();
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let v = DVector::from_fn(d, |j, _| {
                // (X^a Z^b psi)_j = w^{b (j-a)} psi_{j-a}
                let src = (j + d - a) % d;
                let w = Complex64::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * (b * src) as f64 / d as f64,
                );
                w * psi[src]
            });
            out.push(&v * v.adjoint());
        }
    }
    out
}

/// Rank-one SIC POVM for `d` in {2, 3}.
pub fn sic_povm(d: usize) -> Result<SicPovm> {
    let projectors = weyl_heisenberg_orbit(&fiducial(d)?);
    let effects = projectors.iter().map(|p| p.scale(1.0 / d as f64)).collect();
    let povm = SymmetricPovm::from_parts(
        d,
        1,
        d * d,
        1.0 / (d * d) as f64,
        effects,
        Construction::Sic,
    );
    Ok(SicPovm { povm, projectors })
}

/// GSIC with purity `x` obtained by mixing a SIC with white noise:
/// `E_k = mu Pi_k/d + (1 - mu) I/d^2`, `tr E_k^2 = 1/d^3 + mu^2 (1/d^2 - 1/d^3)`.
///
/// Reaches every feasible `x`, including the rank-one endpoint `1/d^2`.
pub fn depolarized_sic(d: usize, x: f64) -> Result<SymmetricPovm> {
    let (lo, hi) = gsic_x_interval(d);
    if !(x > lo && x <= hi * (1.0 + 1e-12)) {
        return Err(Error::Infeasible(format!(
            "GSIC purity x = {x} outside ({lo}, {hi}] for d = {d}"
        )));
    }
    let sic = sic_povm(d)?;
    let mu = ((x - lo) / (hi - lo)).sqrt().min(1.0);
    let noise = identity(d).scale((1.0 - mu) / (d * d) as f64);
    let effects = sic
        .projectors
        .iter()
        .map(|p| p.scale(mu / d as f64) + &noise)
        .collect();
    Ok(SymmetricPovm::from_parts(
        d,
        1,
        d * d,
        x,
        effects,
        Construction::DepolarizedSic { mixing: mu },
    ))
}
