use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use symconc::bounds::gsic_povm;
use symconc::povm::{GroupingPreset, GroupingSpec, PovmConfig};
use symconc::states::corners_state;
use symconc::sweep::StateFamily;
use symconc::{gell_mann_basis, DensityMatrix, SymmetricPovm};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Tiles,
    MaximallyMixed,
    Isotropic,
    Horodecki,
    Corners,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodKind {
    Nm,
    Gsic,
    Sic,
    Realignment,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Builtin state family, or `file` to read --state-file.
    #[arg(long, value_enum)]
    pub state: StateKind,
    /// Local dimension (isotropic, maximally-mixed).
    #[arg(long)]
    pub d: Option<usize>,
    /// Isotropic fidelity with the maximally entangled state.
    #[arg(long)]
    pub f: Option<f64>,
    /// Horodecki parameter in [0, 1].
    #[arg(long)]
    pub tau: Option<f64>,
    /// Horodecki white-noise visibility (default 1).
    #[arg(long)]
    pub q: Option<f64>,
    /// Tiles white-noise visibility (default 1).
    #[arg(long)]
    pub p: Option<f64>,
    /// Corners state on the line q4 = 1/2 - q1/3, q2 = q3.
    #[arg(long)]
    pub q1: Option<f64>,
    /// Corners state with explicit weights q1,q2,q3,q4.
    #[arg(long, value_delimiter = ',', num_args = 4, conflicts_with = "q1")]
    pub weights: Option<Vec<f64>>,
    /// JSON density matrix {dA, dB, re, im}.
    #[arg(long)]
    pub state_file: Option<PathBuf>,
}

fn required<T: Copy>(v: Option<T>, flag: &str, state: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--state {state} requires --{flag}")))
}

impl StateArgs {
    fn unused(&self, allowed: &[&str]) -> Result<(), CliError> {
        let given = [
            ("d", self.d.is_some()),
            ("f", self.f.is_some()),
            ("tau", self.tau.is_some()),
            ("q", self.q.is_some()),
            ("p", self.p.is_some()),
            ("q1", self.q1.is_some()),
            ("weights", self.weights.is_some()),
            ("state-file", self.state_file.is_some()),
        ];
        for (flag, present) in given {
            if present && !allowed.contains(&flag) {
                return Err(CliError::Usage(format!(
                    "--{flag} does not apply to --state {}",
                    self.state_name()
                )));
            }
        }
        Ok(())
    }

    fn state_name(&self) -> &'static str {
        match self.state {
            StateKind::Tiles => "tiles",
            StateKind::MaximallyMixed => "maximally-mixed",
            StateKind::Isotropic => "isotropic",
            StateKind::Horodecki => "horodecki",
            StateKind::Corners => "corners",
            StateKind::File => "file",
        }
    }

    /// The builtin family described by the flags; `None` for file input and
    /// explicit corners weights.
    pub fn family(&self) -> Result<Option<StateFamily>, CliError> {
        let name = self.state_name();
        let fam = match self.state {
            StateKind::Tiles => {
                self.unused(&["p"])?;
                StateFamily::Tiles {
                    p: self.p.unwrap_or(1.0),
                }
            }
            StateKind::MaximallyMixed => {
                self.unused(&["d"])?;
                StateFamily::MaximallyMixed {
                    d: required(self.d, "d", name)?,
                }
            }
            StateKind::Isotropic => {
                self.unused(&["d", "f"])?;
                StateFamily::Isotropic {
                    d: required(self.d, "d", name)?,
                    f: required(self.f, "f", name)?,
                }
            }
            StateKind::Horodecki => {
                self.unused(&["tau", "q"])?;
                StateFamily::Horodecki {
                    tau: required(self.tau, "tau", name)?,
                    q: self.q.unwrap_or(1.0),
                }
            }
            StateKind::Corners => {
                self.unused(&["q1", "weights"])?;
                if self.weights.is_some() {
                    return Ok(None);
                }
                StateFamily::CornersLine {
                    q1: required(self.q1, "q1", name)?,
                }
            }
            StateKind::File => {
                self.unused(&["state-file"])?;
                return Ok(None);
            }
        };
        Ok(Some(fam))
    }

    pub fn load(&self) -> Result<DensityMatrix, CliError> {
        if let Some(fam) = self.family()? {
            return Ok(fam.build()?);
        }
        match self.state {
            StateKind::Corners => {
                let w = self.weights.as_ref().expect("weights checked by family()");
                Ok(corners_state([w[0], w[1], w[2], w[3]])?)
            }
            _ => {
                let path = self
                    .state_file
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("--state file requires --state-file".into()))?;
                let text = fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                Ok(DensityMatrix::from_json_str(&text)?)
            }
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PovmArgs {
    /// Grouping preset for the (N,M) construction.
    #[arg(long)]
    pub preset: Option<GroupingPreset>,
    /// Number of groups N.
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Outcomes per group M.
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Construction parameter t.
    #[arg(long)]
    pub t: Option<f64>,
    /// GSIC purity x.
    #[arg(long)]
    pub x: Option<f64>,
    /// JSON recipe {d, N, M, t, grouping}.
    #[arg(long, conflicts_with_all = ["preset", "n", "m", "t"])]
    pub povm_config: Option<PathBuf>,
}

impl PovmArgs {
    /// `(N,M)`-POVM recipe for local dimension `d`.
    pub fn nm_config(&self, d: usize) -> Result<PovmConfig, CliError> {
        if let Some(path) = &self.povm_config {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let cfg = PovmConfig::from_json_str(&text)?;
            if cfg.d != d {
                return Err(CliError::Usage(format!(
                    "POVM config has d = {} but the state has local dimension {d}",
                    cfg.d
                )));
            }
            return Ok(cfg);
        }
        let preset = self.preset.unwrap_or(GroupingPreset::Canonical);
        let default_shape = match preset {
            GroupingPreset::PaperEx1 => Some((8, 2)),
            GroupingPreset::PaperEx4 => Some((5, 4)),
            GroupingPreset::Canonical => None,
        };
        let (n, m) = match (self.n, self.m, default_shape) {
            (Some(n), Some(m), _) => (n, m),
            (None, None, Some(shape)) => shape,
            _ => {
                return Err(CliError::Usage(
                    "the nm POVM needs --N and --M (or the paper-ex1 or paper-ex4 grouping)".into(),
                ))
            }
        };
        let t = self
            .t
            .ok_or_else(|| CliError::Usage("the nm POVM needs --t".into()))?;
        Ok(PovmConfig {
            d,
            n,
            m,
            t,
            grouping: GroupingSpec::Preset(preset),
        })
    }

    pub fn x(&self) -> Result<f64, CliError> {
        self.x
            .ok_or_else(|| CliError::Usage("the gsic POVM needs --x".into()))
    }

    /// Effects of the requested POVM in dimension `d`.
    pub fn build(&self, method: MethodKind, d: usize) -> Result<SymmetricPovm, CliError> {
        match method {
            MethodKind::Nm => {
                let cfg = self.nm_config(d)?;
                let basis = gell_mann_basis(d)?;
                Ok(symconc::build_nm_povm(&basis, &cfg.grouping()?, cfg.t)?)
            }
            MethodKind::Gsic => {
                let x = self.x()?;
                Ok(gsic_povm(d, x)?)
            }
            MethodKind::Sic => Ok(symconc::sic_povm(d)?.into_povm()),
            MethodKind::Realignment => Err(CliError::Usage(
                "realignment is not a measurement; choose nm, gsic or sic".into(),
            )),
        }
    }
}
