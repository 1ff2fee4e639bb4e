use crate::error::{Error, Result};
use crate::matcore::{c, identity, CMatrix};

/// Orthonormal Hermitian operator basis `{I/sqrt(d), G_1, ..., G_{d^2-1}}`
/// with every `G_i` traceless.
#[derive(Debug, Clone)]
pub struct HermitianBasis {
    dim: usize,
    identity_component: CMatrix,
    traceless: Vec<CMatrix>,
}

impl HermitianBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `I/sqrt(d)`.
    pub fn identity_component(&self) -> &CMatrix {
        &self.identity_component
    }

    pub fn traceless_ops(&self) -> &[CMatrix] {
        &self.traceless
    }

    pub fn op(&self, index: usize) -> &CMatrix {
        &self.traceless[index]
    }

    pub fn len(&self) -> usize {
        self.traceless.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traceless.is_empty()
    }

    /// Human-readable label of a traceless operator in canonical order,
    /// e.g. `sym(0,2)`, `asym(1,3)`, `diag(2)`.
    pub fn label(&self, index: usize) -> String {
        let d = self.dim;
        let pairs = d * (d - 1) / 2;
        if index < 2 * pairs {
            let mut p = index / 2;
            for i in 0..d {
                let row = d - 1 - i;
                if p < row {
                    let j = i + 1 + p;
                    let kind = if index.is_multiple_of(2) {
                        "sym"
                    } else {
                        "asym"
                    };
                    return format!("{kind}({i},{j})");
                }
                p -= row;
            }
            unreachable!()
        } else {
            format!("diag({})", index - 2 * pairs + 1)
        }
    }
}

/// Generalized Gell-Mann basis in canonical order.
///
/// For each pair `i < j` the symmetric operator `(|i><j| + |j><i|)/sqrt2`
/// followed by the antisymmetric `(-i|i><j| + i|j><i|)/sqrt2`; then the
/// `d - 1` diagonal operators `diag(1,..,1,-k,0,..)/sqrt(k(k+1))`.
pub fn gell_mann_basis(d: usize) -> Result<HermitianBasis> {
    if d < 2 {
        return Err(Error::param("d", format!("need d >= 2, got {d}")));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut traceless = Vec::with_capacity(d * d - 1);
    for i in 0..d {
        for j in (i + 1)..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(i, j)] = c(r, 0.0);
            sym[(j, i)] = c(r, 0.0);
            traceless.push(sym);

            let mut asym = CMatrix::zeros(d, d);
            asym[(i, j)] = c(0.0, -r);
            asym[(j, i)] = c(0.0, r);
            traceless.push(asym);
        }
    }
    for k in 1..d {
        let norm = ((k * (k + 1)) as f64).sqrt();
        let mut diag = CMatrix::zeros(d, d);
        for a in 0..k {
            diag[(a, a)] = c(1.0 / norm, 0.0);
        }
        diag[(k, k)] = c(-(k as f64) / norm, 0.0);
        traceless.push(diag);
    }
    Ok(HermitianBasis {
        dim: d,
        identity_component: identity(d).scale(1.0 / (d as f64).sqrt()),
        traceless,
    })
}
