//! One-parameter sweeps of concurrence bounds over builtin state families,
//! with CSV output and bisection of detection thresholds.
//!
//! Grid points are evaluated in parallel; results are always assembled in
//! grid order, so the CSV is byte-identical for any thread count.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::bounds::{gsic_bound, nm_bound, realignment_bound, sic_bound, BoundMethod, BoundReport};
use crate::error::{Error, Result};
use crate::povm::{build_nm_povm, gell_mann_basis, GroupingPreset, GroupingSpec, SymmetricPovm};
use crate::states::{
    corners_line, horodecki_state, isotropic, maximally_mixed, mix_white_noise, tiles_state,
    DensityMatrix,
};

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOL: f64 = 1e-6;

/// Grid size used by the figure presets.
pub const PRESET_STEPS: usize = 201;

/// A builtin state family with its current parameter values.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFamily {
    /// Tiles state mixed with white noise: `(1-p) I/9 + p rho`.
    Tiles {
        p: f64,
    },
    /// Horodecki 3x3 family mixed with white noise: `q rho_tau + (1-q) I/9`.
    Horodecki {
        tau: f64,
        q: f64,
    },
    Isotropic {
        d: usize,
        f: f64,
    },
    /// Two-ququart corners state on the line `q4 = 1/2 - q1/3`, `q2 = q3`.
    CornersLine {
        q1: f64,
    },
    MaximallyMixed {
        d: usize,
    },
}

impl StateFamily {
    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::Tiles { .. } => "tiles",
            StateFamily::Horodecki { .. } => "horodecki",
            StateFamily::Isotropic { .. } => "isotropic",
            StateFamily::CornersLine { .. } => "corners",
            StateFamily::MaximallyMixed { .. } => "maximally-mixed",
        }
    }

    /// Names of the real parameters that can be swept.
    pub fn parameters(&self) -> &'static [&'static str] {
        match self {
            StateFamily::Tiles { .. } => &["p"],
            StateFamily::Horodecki { .. } => &["tau", "q"],
            StateFamily::Isotropic { .. } => &["f"],
            StateFamily::CornersLine { .. } => &["q1"],
            StateFamily::MaximallyMixed { .. } => &[],
        }
    }

    pub fn local_dim(&self) -> usize {
        match self {
            StateFamily::Tiles { .. } | StateFamily::Horodecki { .. } => 3,
            StateFamily::CornersLine { .. } => 4,
            StateFamily::Isotropic { d, .. } | StateFamily::MaximallyMixed { d } => *d,
        }
    }

    pub fn with_param(&self, name: &str, value: f64) -> Result<StateFamily> {
        let mut out = self.clone();
        let slot = match (&mut out, name) {
            (StateFamily::Tiles { p }, "p") => p,
            (StateFamily::Horodecki { tau, .. }, "tau") => tau,
            (StateFamily::Horodecki { q, .. }, "q") => q,
            (StateFamily::Isotropic { f, .. }, "f") => f,
            (StateFamily::CornersLine { q1 }, "q1") => q1,
            _ => {
                return Err(Error::param(
                    "param",
                    format!(
                        "family `{}` has no parameter `{name}` (available: {:?})",
                        self.name(),
                        self.parameters()
                    ),
                ))
            }
        };
        *slot = value;
        Ok(out)
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        match *self {
            StateFamily::Tiles { p } => mix_white_noise(&tiles_state(), p),
            StateFamily::Horodecki { tau, q } => mix_white_noise(&horodecki_state(tau)?, q),
            StateFamily::Isotropic { d, f } => isotropic(d, f),
            StateFamily::CornersLine { q1 } => corners_line(q1),
            StateFamily::MaximallyMixed { d } => maximally_mixed(d, d),
        }
    }
}

/// A bound method together with the parameters it needs.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodSpec {
    Nm {
        n: usize,
        m: usize,
        t: f64,
        grouping: GroupingSpec,
    },
    Gsic {
        x: f64,
    },
    Sic,
    Realignment,
}

impl MethodSpec {
    pub fn method(&self) -> BoundMethod {
        match self {
            MethodSpec::Nm { .. } => BoundMethod::Nm,
            MethodSpec::Gsic { .. } => BoundMethod::Gsic,
            MethodSpec::Sic => BoundMethod::Sic,
            MethodSpec::Realignment => BoundMethod::Realignment,
        }
    }

    fn prepare(&self, d: usize) -> Result<Prepared> {
        Ok(match self {
            MethodSpec::Nm { n, m, t, grouping } => {
                let basis = gell_mann_basis(d)?;
                let g = grouping.resolve(d, *n, *m)?;
                Prepared::Nm(build_nm_povm(&basis, &g, *t)?)
            }
            MethodSpec::Gsic { x } => Prepared::Gsic(*x),
            MethodSpec::Sic => Prepared::Sic,
            MethodSpec::Realignment => Prepared::Realignment,
        })
    }
}

enum Prepared {
    Nm(SymmetricPovm),
    Gsic(f64),
    Sic,
    Realignment,
}

impl Prepared {
    fn evaluate(&self, rho: &DensityMatrix) -> Result<BoundReport> {
        match self {
            Prepared::Nm(p) => nm_bound(rho, p),
            Prepared::Gsic(x) => gsic_bound(rho, rho.local_dim()?, *x),
            Prepared::Sic => sic_bound(rho, rho.local_dim()?),
            Prepared::Realignment => realignment_bound(rho),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub family: StateFamily,
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub methods: Vec<MethodSpec>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::param(
                "steps",
                format!("need at least 2 grid points, got {}", self.steps),
            ));
        }
        if self.from.is_nan() || self.to.is_nan() || self.from >= self.to {
            return Err(Error::param(
                "from/to",
                format!("need from < to, got [{}, {}]", self.from, self.to),
            ));
        }
        if self.methods.is_empty() {
            return Err(Error::param(
                "methods",
                "at least one bound method is required",
            ));
        }
        let mut seen = HashSet::new();
        for m in &self.methods {
            if !seen.insert(m.method()) {
                return Err(Error::param(
                    "methods",
                    format!("method `{}` listed more than once", m.method()),
                ));
            }
        }
        self.family.with_param(&self.parameter, self.from)?;
        Ok(())
    }

    /// `steps` uniform points from `from` to `to`, both included.
    pub fn grid(&self) -> Vec<f64> {
        let h = (self.to - self.from) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.to
                } else {
                    self.from + h * i as f64
                }
            })
            .collect()
    }
}

fn qutrit_methods() -> Vec<MethodSpec> {
    vec![
        MethodSpec::Nm {
            n: 8,
            m: 2,
            t: 0.01,
            grouping: GroupingSpec::Preset(GroupingPreset::PaperEx1),
        },
        MethodSpec::Gsic { x: 0.04984 },
        MethodSpec::Sic,
        MethodSpec::Realignment,
    ]
}

pub const PRESET_NAMES: [&str; 3] = ["fig1", "fig2", "fig3"];

/// Builtin figure sweeps.
///
/// * `fig1`: Tiles state with white noise, `p` in [0.8, 1].
/// * `fig2`: Horodecki family at `q = 0.995`, `tau` in [0.005, 0.995].
/// * `fig3`: corners line, `q1` in [0, 0.75], `(5,4)`-POVM only.
pub fn preset(name: &str) -> Result<SweepSpec> {
    let spec = match name {
        "fig1" => SweepSpec {
            family: StateFamily::Tiles { p: 1.0 },
            parameter: "p".into(),
            from: 0.8,
            to: 1.0,
            steps: PRESET_STEPS,
            methods: qutrit_methods(),
        },
        "fig2" => SweepSpec {
            family: StateFamily::Horodecki { tau: 0.5, q: 0.995 },
            parameter: "tau".into(),
            from: 0.005,
            to: 0.995,
            steps: PRESET_STEPS,
            methods: qutrit_methods(),
        },
        "fig3" => SweepSpec {
            family: StateFamily::CornersLine { q1: 0.0 },
            parameter: "q1".into(),
            from: 0.0,
            to: 0.75,
            steps: PRESET_STEPS,
            methods: vec![MethodSpec::Nm {
                n: 5,
                m: 4,
                t: 0.01,
                grouping: GroupingSpec::Preset(GroupingPreset::PaperEx4),
            }],
        },
        other => {
            return Err(Error::param(
                "preset",
                format!("unknown sweep preset `{other}` (expected one of {PRESET_NAMES:?})"),
            ))
        }
    };
    Ok(spec)
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub parameter: String,
    pub grid: Vec<f64>,
    pub methods: Vec<BoundMethod>,
    /// `rows[i][j]` is method `j` at grid point `i`.
    pub rows: Vec<Vec<BoundReport>>,
}

impl SweepResult {
    /// Clamped bound values of one method, in grid order.
    pub fn column(&self, method: BoundMethod) -> Option<Vec<f64>> {
        let j = self.methods.iter().position(|&m| m == method)?;
        Some(self.rows.iter().map(|r| r[j].bound).collect())
    }

    pub fn raw_column(&self, method: BoundMethod) -> Option<Vec<f64>> {
        let j = self.methods.iter().position(|&m| m == method)?;
        Some(self.rows.iter().map(|r| r[j].bound_raw).collect())
    }

    /// Header `param,<method>,...`; clamped bounds at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param");
        for m in &self.methods {
            out.push(',');
            out.push_str(m.tag());
        }
        out.push('\n');
        for (x, row) in self.grid.iter().zip(&self.rows) {
            write!(out, "{x:.16e}").unwrap();
            for r in row {
                write!(out, ",{:.16e}", r.bound).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

struct Evaluator<'a> {
    spec: &'a SweepSpec,
    prepared: Vec<Prepared>,
}

impl<'a> Evaluator<'a> {
    fn new(spec: &'a SweepSpec) -> Result<Self> {
        spec.validate()?;
        let d = spec.family.local_dim();
        let prepared = spec
            .methods
            .iter()
            .map(|m| m.prepare(d))
            .collect::<Result<Vec<_>>>()?;
        Ok(Evaluator { spec, prepared })
    }

    fn state_at(&self, value: f64) -> Result<DensityMatrix> {
        self.spec
            .family
            .with_param(&self.spec.parameter, value)?
            .build()
    }

    fn row(&self, value: f64) -> Result<Vec<BoundReport>> {
        let rho = self.state_at(value)?;
        self.prepared.iter().map(|p| p.evaluate(&rho)).collect()
    }

    fn raw(&self, method_index: usize, value: f64) -> Result<f64> {
        let rho = self.state_at(value)?;
        Ok(self.prepared[method_index].evaluate(&rho)?.bound_raw)
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    let eval = Evaluator::new(spec)?;
    let grid = spec.grid();
    let rows = grid
        .par_iter()
        .map(|&v| eval.row(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        parameter: spec.parameter.clone(),
        grid,
        methods: spec.methods.iter().map(MethodSpec::method).collect(),
        rows,
    })
}

/// A sign change of `bound_raw` between two grid points, refined by
/// bisection.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub method: BoundMethod,
    /// Refined parameter value (midpoint of the final bracket).
    pub value: f64,
    /// Whether the bound is positive on the upper side of the crossing.
    pub detected_above: bool,
}

/// Bisects a sign change of `f` on `[lo, hi]` (`f(lo)` and `f(hi)` must have
/// opposite signs with "positive" meaning `> 0`) down to `tol`.
pub fn bisect_sign_change<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let lo_positive = f(lo)? > 0.0;
    if (f(hi)? > 0.0) == lo_positive {
        return Err(Error::param(
            "bracket",
            format!("no sign change on [{lo}, {hi}]"),
        ));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if (f(mid)? > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Every sign change of every method's `bound_raw` along the grid, refined
/// to [`BISECTION_TOL`].
pub fn find_crossings(spec: &SweepSpec, result: &SweepResult) -> Result<Vec<Crossing>> {
    let eval = Evaluator::new(spec)?;
    let mut out = Vec::new();
    for (j, &method) in result.methods.iter().enumerate() {
        for i in 1..result.grid.len() {
            let a = result.rows[i - 1][j].bound_raw > 0.0;
            let b = result.rows[i][j].bound_raw > 0.0;
            if a != b {
                let value = bisect_sign_change(
                    |v| eval.raw(j, v),
                    result.grid[i - 1],
                    result.grid[i],
                    BISECTION_TOL,
                )?;
                out.push(Crossing {
                    method,
                    value,
                    detected_above: b,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_hits_both_ends() {
        let spec = preset("fig1").unwrap();
        let g = spec.grid();
        assert_eq!(g.len(), 201);
        assert_eq!(g[0], 0.8);
        assert_eq!(g[200], 1.0);
        assert!((g[100] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn presets_match_figure_parameters() {
        for name in PRESET_NAMES {
            preset(name).unwrap().validate().unwrap();
        }
        let f1 = preset("fig1").unwrap();
        assert!(f1.methods.contains(&MethodSpec::Gsic { x: 0.04984 }));
        let f2 = preset("fig2").unwrap();
        assert_eq!(f2.family, StateFamily::Horodecki { tau: 0.5, q: 0.995 });
        assert!(preset("fig4").is_err());
    }

    #[test]
    fn spec_validation() {
        let mut s = preset("fig1").unwrap();
        s.steps = 1;
        assert!(s.validate().is_err());
        let mut s = preset("fig1").unwrap();
        s.from = 1.0;
        s.to = 0.8;
        assert!(s.validate().is_err());
        let mut s = preset("fig1").unwrap();
        s.methods.push(MethodSpec::Sic);
        assert!(s.validate().is_err());
        let mut s = preset("fig1").unwrap();
        s.parameter = "tau".into();
        assert!(s.validate().is_err());
    }

    #[test]
    fn family_parameters() {
        let h = StateFamily::Horodecki { tau: 0.5, q: 0.995 };
        assert_eq!(
            h.with_param("q", 0.5).unwrap(),
            StateFamily::Horodecki { tau: 0.5, q: 0.5 }
        );
        assert!(h.with_param("p", 0.5).is_err());
        assert!(StateFamily::MaximallyMixed { d: 3 }
            .with_param("p", 0.1)
            .is_err());
        assert_eq!(StateFamily::CornersLine { q1: 0.1 }.local_dim(), 4);
    }

    #[test]
    fn bisection_finds_root() {
        let r = bisect_sign_change(|x| Ok(x - 0.3), 0.0, 1.0, 1e-9).unwrap();
        assert!((r - 0.3).abs() < 1e-9);
        assert!(bisect_sign_change(|x| Ok(x + 1.0), 0.0, 1.0, 1e-9).is_err());
    }

    #[test]
    fn small_sweep_csv_shape() {
        let spec = SweepSpec {
            family: StateFamily::Isotropic { d: 2, f: 0.5 },
            parameter: "f".into(),
            from: 0.3,
            to: 1.0,
            steps: 8,
            methods: vec![MethodSpec::Sic, MethodSpec::Realignment],
        };
        let res = run_sweep(&spec).unwrap();
        let csv = res.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "param,sic,realignment");
        assert_eq!(lines.len(), 9);
        assert!(lines[8].starts_with("1.0000000000000000e0,"));
        let crossings = find_crossings(&spec, &res).unwrap();
        // Isotropic qubits are entangled exactly for f > 1/2.
        assert_eq!(crossings.len(), 2);
        for c in crossings {
            assert!((c.value - 0.5).abs() < 1e-6, "{c:?}");
            assert!(c.detected_above);
        }
    }
}
