//! JSON forms: a compact build recipe ([`PovmConfig`]) and a full audit dump
//! of every effect ([`PovmDump`]).

use serde::{Deserialize, Serialize};

use super::{
    build_nm_povm, gell_mann_basis, validate_povm, Construction, Grouping, GroupingPreset,
    SymmetricPovm,
};
use crate::error::{Error, Result};
use crate::json::{join_parts, split_parts, Rows};

/// Grouping given either by preset name or as an explicit 1-based partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupingSpec {
    Preset(GroupingPreset),
    Explicit(Vec<Vec<usize>>),
}

impl Default for GroupingSpec {
    fn default() -> Self {
        GroupingSpec::Preset(GroupingPreset::Canonical)
    }
}

impl GroupingSpec {
    pub fn resolve(&self, d: usize, n: usize, m: usize) -> Result<Grouping> {
        match self {
            GroupingSpec::Preset(p) => Grouping::preset(*p, d, n, m),
            GroupingSpec::Explicit(groups) => {
                let g = Grouping::from_one_based(d, groups)?;
                if (g.n(), g.m()) != (n, m) {
                    return Err(Error::param(
                        "grouping",
                        format!(
                            "explicit partition has shape ({},{}) but N={n}, M={m}",
                            g.n(),
                            g.m()
                        ),
                    ));
                }
                Ok(g)
            }
        }
    }
}

/// `{d, N, M, t, grouping}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmConfig {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub t: f64,
    #[serde(default)]
    pub grouping: GroupingSpec,
}

impl PovmConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(format!("POVM config: {e}")))
    }

    pub fn grouping(&self) -> Result<Grouping> {
        self.grouping.resolve(self.d, self.n, self.m)
    }

    pub fn build(&self) -> Result<SymmetricPovm> {
        let basis = gell_mann_basis(self.d)?;
        build_nm_povm(&basis, &self.grouping()?, self.t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectDump {
    /// 1-based.
    pub alpha: usize,
    /// 1-based.
    pub k: usize,
    pub re: Rows,
    pub im: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmDump {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub x: f64,
    /// `basis`, `sic` or `depolarized-sic`.
    pub construction: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mixing: Option<f64>,
    /// 1-based partition of the Gell-Mann indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grouping: Option<Vec<Vec<usize>>>,
    pub effects: Vec<EffectDump>,
}

impl From<&SymmetricPovm> for PovmDump {
    fn from(p: &SymmetricPovm) -> Self {
        let (construction, mixing) = match p.construction() {
            Construction::Basis { .. } => ("basis", None),
            Construction::Sic => ("sic", None),
            Construction::DepolarizedSic { mixing } => ("depolarized-sic", Some(*mixing)),
        };
        let effects = p
            .effects()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let (re, im) = split_parts(e);
                EffectDump {
                    alpha: i / p.m() + 1,
                    k: i % p.m() + 1,
                    re,
                    im,
                }
            })
            .collect();
        PovmDump {
            d: p.dim(),
            n: p.n(),
            m: p.m(),
            x: p.x(),
            construction: construction.to_string(),
            t: p.t(),
            mixing,
            grouping: p.grouping().map(Grouping::to_one_based),
            effects,
        }
    }
}

impl TryFrom<PovmDump> for SymmetricPovm {
    type Error = Error;

    /// Rebuilds a POVM from a dump and re-runs the full validation suite
    /// at tolerance 1e-10.
    fn try_from(dump: PovmDump) -> Result<Self> {
        let (d, n, m) = (dump.d, dump.n, dump.m);
        if dump.effects.len() != n * m {
            return Err(Error::Malformed(format!(
                "`effects` has {} entries, expected N*M = {}",
                dump.effects.len(),
                n * m
            )));
        }
        let mut effects = Vec::with_capacity(n * m);
        for (i, e) in dump.effects.iter().enumerate() {
            if (e.alpha, e.k) != (i / m + 1, i % m + 1) {
                return Err(Error::Malformed(format!(
                    "effect #{i} is labelled ({},{}) but must be ({},{}) in alpha-major order",
                    e.alpha,
                    e.k,
                    i / m + 1,
                    i % m + 1
                )));
            }
            let mat = join_parts(&e.re, &e.im, "effects")?;
            if mat.nrows() != d || mat.ncols() != d {
                return Err(Error::Malformed(format!(
                    "effect ({},{}) is not {d}x{d}",
                    e.alpha, e.k
                )));
            }
            effects.push(mat);
        }
        let construction = match dump.construction.as_str() {
            "basis" => {
                let t = dump.t.ok_or_else(|| {
                    Error::Malformed("`t` is required for construction `basis`".into())
                })?;
                let groups = dump.grouping.as_ref().ok_or_else(|| {
                    Error::Malformed("`grouping` is required for construction `basis`".into())
                })?;
                Construction::Basis {
                    t,
                    grouping: Grouping::from_one_based(d, groups)?,
                }
            }
            "sic" => Construction::Sic,
            "depolarized-sic" => Construction::DepolarizedSic {
                mixing: dump.mixing.ok_or_else(|| {
                    Error::Malformed(
                        "`mixing` is required for construction `depolarized-sic`".into(),
                    )
                })?,
            },
            other => return Err(Error::Malformed(format!("unknown construction `{other}`"))),
        };
        let povm = SymmetricPovm::from_parts(d, n, m, dump.x, effects, construction);
        let report = validate_povm(&povm);
        if !report.passes(1e-10) {
            return Err(Error::DataIntegrity(format!(
                "dumped effects do not form an (N,M)-POVM (max deviation {:e}, min eigenvalue {:e})",
                report.max_deviation(),
                report.min_eigenvalue
            )));
        }
        Ok(povm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::povm::sic_povm;

    #[test]
    fn config_accepts_preset_and_explicit() {
        let c = PovmConfig::from_json_str(r#"{"d":3,"N":8,"M":2,"t":0.01,"grouping":"paper-ex1"}"#)
            .unwrap();
        assert_eq!(c.grouping, GroupingSpec::Preset(GroupingPreset::PaperEx1));
        assert!(c.build().is_ok());

        let c =
            PovmConfig::from_json_str(r#"{"d":2,"N":3,"M":2,"t":0.1,"grouping":[[3],[1],[2]]}"#)
                .unwrap();
        assert_eq!(c.grouping().unwrap().groups(), &[vec![2], vec![0], vec![1]]);

        let c = PovmConfig::from_json_str(r#"{"d":2,"N":1,"M":4,"t":0.05}"#).unwrap();
        assert_eq!(c.grouping, GroupingSpec::default());
    }

    #[test]
    fn config_errors_name_the_field() {
        let err = PovmConfig::from_json_str(r#"{"d":3,"N":8,"t":0.01}"#).unwrap_err();
        assert!(err.to_string().contains("`M`"), "{err}");
        let err = PovmConfig::from_json_str(r#"{"d":3,"N":8,"M":2,"t":0.01,"grouping":"nope"}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Malformed(_)));
        let c = PovmConfig::from_json_str(r#"{"d":2,"N":3,"M":2,"t":0.1,"grouping":[[1,2],[3]]}"#)
            .unwrap();
        assert!(c.build().is_err());
    }

    #[test]
    fn dump_round_trip_revalidates() {
        for p in [
            PovmConfig::from_json_str(r#"{"d":4,"N":5,"M":4,"t":0.01,"grouping":"paper-ex4"}"#)
                .unwrap()
                .build()
                .unwrap(),
            sic_povm(3).unwrap().into_povm(),
        ] {
            let text = serde_json::to_string(&PovmDump::from(&p)).unwrap();
            let back: PovmDump = serde_json::from_str(&text).unwrap();
            let q = SymmetricPovm::try_from(back).unwrap();
            assert_eq!(q.effects(), p.effects());
            assert_eq!(q.construction(), p.construction());
        }
    }

    #[test]
    fn tampered_dump_rejected() {
        let p = sic_povm(2).unwrap().into_povm();
        let mut dump = PovmDump::from(&p);
        dump.effects[0].re[0][0] += 0.1;
        assert!(matches!(
            SymmetricPovm::try_from(dump),
            Err(Error::DataIntegrity(_))
        ));
    }
}
