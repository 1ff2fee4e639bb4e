//! Bipartite test states.
//!
//! Two of the builtin families differ from their commonly printed form:
//!
//! * [`tiles_state`]: the fifth product vector of the Tiles unextendible
//!   product basis is `(|0>+|1>+|2>)(|0>+|1>+|2>)/3`. A `|3>` does not exist
//!   in a qutrit.
//! * [`horodecki_state`]: entry (8,8) of the 3x3 Horodecki family is `tau`
//!   (before the `1/(1+8 tau)` normalization). A zero there leaves the
//!   matrix with trace `(1+7 tau)/(1+8 tau)`.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{join_parts, split_parts, Rows};
use crate::matcore::{
    c, hermitian_deviation, identity, kron, min_eigenvalue, partial_trace, partial_transpose,
    CMatrix, Subsystem,
};

/// Tolerance for trace, Hermiticity and positivity of density matrices.
pub const STATE_TOL: f64 = 1e-10;

/// Unit-norm tolerance for pure states.
pub const NORM_TOL: f64 = 1e-12;

/// Validated bipartite density matrix on `C^dA (x) C^dB`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityJson", into = "DensityJson")]
pub struct DensityMatrix {
    da: usize,
    db: usize,
    mat: CMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityJson {
    #[serde(rename = "dA")]
    da: usize,
    #[serde(rename = "dB")]
    db: usize,
    re: Rows,
    im: Rows,
}

impl TryFrom<DensityJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: DensityJson) -> Result<Self> {
        let mat = join_parts(&j.re, &j.im, "re/im")?;
        DensityMatrix::new(j.da, j.db, mat)
    }
}

impl From<DensityMatrix> for DensityJson {
    fn from(rho: DensityMatrix) -> Self {
        let (re, im) = split_parts(&rho.mat);
        DensityJson {
            da: rho.da,
            db: rho.db,
            re,
            im,
        }
    }
}

impl DensityMatrix {
    /// Checks shape, Hermiticity, unit trace and positivity (all within
    /// [`STATE_TOL`]) and stores the symmetrized matrix.
    pub fn new(da: usize, db: usize, mat: CMatrix) -> Result<Self> {
        let n = da * db;
        if da == 0 || db == 0 || mat.nrows() != n || mat.ncols() != n {
            return Err(Error::Dimension(format!(
                "density matrix is {}x{}, subsystem dimensions {da}x{db} need {n}x{n}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let dev = hermitian_deviation(&mat);
        if dev > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let mat = (&mat + mat.adjoint()).scale(0.5);
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let ev = min_eigenvalue(&mat)?;
        if ev < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {ev:e}")));
        }
        Ok(DensityMatrix { da, db, mat })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(format!("state file: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("density matrix serializes")
    }

    pub fn da(&self) -> usize {
        self.da
    }

    pub fn db(&self) -> usize {
        self.db
    }

    /// `dA * dB`.
    pub fn dim(&self) -> usize {
        self.da * self.db
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Subsystem dimension `d` when `dA = dB = d`.
    pub fn local_dim(&self) -> Result<usize> {
        if self.da != self.db {
            return Err(Error::Dimension(format!(
                "expected a d x d bipartition, got {}x{}",
                self.da, self.db
            )));
        }
        Ok(self.da)
    }

    pub fn reduced(&self, keep: Subsystem) -> CMatrix {
        partial_trace(&self.mat, keep, self.da, self.db).expect("shape checked at construction")
    }

    pub fn min_partial_transpose_eigenvalue(&self) -> f64 {
        let pt =
            partial_transpose(&self.mat, self.da, self.db).expect("shape checked at construction");
        min_eigenvalue(&pt).expect("partial transpose of a Hermitian matrix is Hermitian")
    }

    /// `<psi| rho |psi>`.
    pub fn expectation(&self, psi: &PureState) -> f64 {
        (psi.amps.adjoint() * &self.mat * &psi.amps)[(0, 0)].re
    }
}

/// Unit vector in `C^dA (x) C^dB`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    da: usize,
    db: usize,
    amps: DVector<Complex64>,
}

impl PureState {
    pub fn new(da: usize, db: usize, amps: DVector<Complex64>) -> Result<Self> {
        if da == 0 || db == 0 || amps.len() != da * db {
            return Err(Error::Dimension(format!(
                "{} amplitudes for a {da}x{db} system",
                amps.len()
            )));
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("norm is {norm}, expected 1")));
        }
        Ok(PureState { da, db, amps })
    }

    /// Normalizes `amps` first.
    pub fn normalized(da: usize, db: usize, amps: DVector<Complex64>) -> Result<Self> {
        let norm = amps.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        PureState::new(da, db, amps.unscale(norm))
    }

    pub fn product(a: &DVector<Complex64>, b: &DVector<Complex64>) -> Result<Self> {
        PureState::normalized(a.len(), b.len(), a.kronecker(b))
    }

    /// `sum_i s_i |ii>` for Schmidt coefficients `s` (normalized).
    pub fn from_schmidt(coefficients: &[f64]) -> Result<Self> {
        let d = coefficients.len();
        let mut v = DVector::zeros(d * d);
        for (i, &s) in coefficients.iter().enumerate() {
            v[i * d + i] = c(s, 0.0);
        }
        PureState::normalized(d, d, v)
    }

    /// `|Psi+> = sum_i |ii> / sqrt(d)`.
    pub fn maximally_entangled(d: usize) -> Self {
        PureState::from_schmidt(&vec![1.0; d]).expect("non-zero vector")
    }

    pub fn da(&self) -> usize {
        self.da
    }

    pub fn db(&self) -> usize {
        self.db
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn projector(&self) -> CMatrix {
        &self.amps * self.amps.adjoint()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            da: self.da,
            db: self.db,
            mat: self.projector(),
        }
    }

    /// `tr_B |psi><psi|`.
    pub fn reduced_first(&self) -> CMatrix {
        partial_trace(&self.projector(), Subsystem::First, self.da, self.db)
            .expect("shape checked at construction")
    }
}

fn check_unit_interval(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::param(name, format!("must lie in [0, 1], got {v}")));
    }
    Ok(())
}

pub fn maximally_mixed(da: usize, db: usize) -> Result<DensityMatrix> {
    let n = da * db;
    DensityMatrix::new(da, db, identity(n).scale(1.0 / n as f64))
}

/// `(1 - p) I/(dA dB) + p rho`.
pub fn mix_white_noise(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    check_unit_interval("p", p)?;
    let n = rho.dim();
    let mat = identity(n).scale((1.0 - p) / n as f64) + rho.matrix().scale(p);
    DensityMatrix::new(rho.da, rho.db, mat)
}

/// Isotropic state `v |Psi+><Psi+| + (1 - v) I/d^2` with fidelity `f` and
/// `v = (d^2 f - 1)/(d^2 - 1)`.
pub fn isotropic(d: usize, f: f64) -> Result<DensityMatrix> {
    if d < 2 {
        return Err(Error::param("d", format!("need d >= 2, got {d}")));
    }
    check_unit_interval("f", f)?;
    let dd = (d * d) as f64;
    let v = (dd * f - 1.0) / (dd - 1.0);
    let psi = PureState::maximally_entangled(d).projector();
    DensityMatrix::new(d, d, psi.scale(v) + identity(d * d).scale((1.0 - v) / dd))
}

fn ket3(a: f64, b: f64, cc: f64) -> DVector<Complex64> {
    DVector::from_vec(vec![c(a, 0.0), c(b, 0.0), c(cc, 0.0)])
}

/// The five product vectors of the Tiles unextendible product basis.
pub fn tiles_upb_vectors() -> [PureState; 5] {
    let e0 = ket3(1.0, 0.0, 0.0);
    let e2 = ket3(0.0, 0.0, 1.0);
    let m01 = ket3(1.0, -1.0, 0.0);
    let m12 = ket3(0.0, 1.0, -1.0);
    let all = ket3(1.0, 1.0, 1.0);
    let prod = |a: &DVector<Complex64>, b: &DVector<Complex64>| {
        PureState::product(a, b).expect("non-zero")
    };
    [
        prod(&e0, &m01),
        prod(&m01, &e2),
        prod(&e2, &m12),
        prod(&m12, &e0),
        prod(&all, &all),
    ]
}

/// `(I - sum_i |psi_i><psi_i|)/4` over the Tiles UPB: a rank-4 PPT
/// entangled qutrit pair.
pub fn tiles_state() -> DensityMatrix {
    let proj = tiles_upb_vectors()
        .iter()
        .fold(CMatrix::zeros(9, 9), |acc, v| acc + v.projector());
    DensityMatrix::new(3, 3, (identity(9) - proj).scale(0.25)).expect("tiles state is valid")
}

/// Horodecki 3x3 bound entangled family, `0 < tau < 1`.
pub fn horodecki_state(tau: f64) -> Result<DensityMatrix> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::param(
            "tau",
            format!("must lie in (0, 1), got {tau}"),
        ));
    }
    let mut m = CMatrix::zeros(9, 9);
    for i in 0..9 {
        m[(i, i)] = c(tau, 0.0);
    }
    for &i in &[0, 4, 8] {
        for &j in &[0, 4, 8] {
            m[(i, j)] = c(tau, 0.0);
        }
    }
    let diag = (1.0 + tau) / 2.0;
    let off = (1.0 - tau * tau).sqrt() / 2.0;
    m[(6, 6)] = c(diag, 0.0);
    m[(8, 8)] = c(diag, 0.0);
    m[(6, 8)] = c(off, 0.0);
    m[(8, 6)] = c(off, 0.0);
    DensityMatrix::new(3, 3, m.scale(1.0 / (1.0 + 8.0 * tau)))
}

/// Two-ququart state
/// `diag(q1,q4,q3,q2, q2,q1,q4,q3, q3,q2,q1,q4, q4,q3,q2,q1)/4`
/// plus `q1/4` on every off-diagonal pair of rows/columns {1, 6, 11, 16}.
pub fn corners_state(q: [f64; 4]) -> Result<DensityMatrix> {
    if q.iter().any(|&v| v.is_nan() || v < -1e-12) {
        return Err(Error::param(
            "q",
            format!("entries must be non-negative, got {q:?}"),
        ));
    }
    let sum: f64 = q.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::param(
            "q",
            format!("entries must sum to 1, got {sum}"),
        ));
    }
    let q = q.map(|v| v.max(0.0));
    let [q1, q2, q3, q4] = q;
    let diag = [
        q1, q4, q3, q2, q2, q1, q4, q3, q3, q2, q1, q4, q4, q3, q2, q1,
    ];
    let mut m = CMatrix::zeros(16, 16);
    for (i, &v) in diag.iter().enumerate() {
        m[(i, i)] = c(v / 4.0, 0.0);
    }
    let corners = [0, 5, 10, 15];
    for &i in &corners {
        for &j in &corners {
            if i != j {
                m[(i, j)] = c(q1 / 4.0, 0.0);
            }
        }
    }
    DensityMatrix::new(4, 4, m)
}

/// [`corners_state`] on the line `q4 = 1/2 - q1/3`, `q2 = q3 = (1 - q1 - q4)/2`,
/// valid for `0 <= q1 <= 3/4`.
pub fn corners_line(q1: f64) -> Result<DensityMatrix> {
    if !(-1e-12..=0.75 + 1e-12).contains(&q1) {
        return Err(Error::param(
            "q1",
            format!("must lie in [0, 3/4], got {q1}"),
        ));
    }
    let q4 = 0.5 - q1 / 3.0;
    let q23 = (1.0 - q1 - q4) / 2.0;
    corners_state([q1, q23, q23, q4])
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<Complex64> {
    DVector::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im)
    })
}

/// Normalized complex Gaussian vector; deterministic per seed.
pub fn random_pure(da: usize, db: usize, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    PureState::normalized(da, db, gaussian_vector(&mut rng, da * db))
        .expect("Gaussian vector is almost surely non-zero")
}

/// `|a><a| (x) |b><b|` for independent random local pure states.
pub fn random_product(da: usize, db: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = gaussian_vector(&mut rng, da).normalize();
    let b = gaussian_vector(&mut rng, db).normalize();
    let mat = kron(&(&a * a.adjoint()), &(&b * b.adjoint()));
    DensityMatrix::new(da, db, mat).expect("product of pure states is a state")
}

/// Full-rank mixed state `G G^dagger / tr(G G^dagger)` from a complex
/// Gaussian (Ginibre) matrix.
pub fn random_mixed(da: usize, db: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = da * db;
    let g = CMatrix::from_iterator(n, n, gaussian_vector(&mut rng, n * n).iter().copied());
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new(da, db, w.unscale(tr)).expect("Ginibre state is valid")
}
