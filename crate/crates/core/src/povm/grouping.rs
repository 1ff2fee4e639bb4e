use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Named assignments of basis operators to measurement groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupingPreset {
    /// Fill groups sequentially from the canonical Gell-Mann order.
    Canonical,
    /// `d = 3`, `(8,2)`: one operator per group in the order
    /// sym(0,1), asym(0,1), sym(0,2), asym(0,2), sym(1,2), asym(1,2), diag(1), diag(2).
    PaperEx1,
    /// `d = 4`, `(5,4)`: five groups of three mixing symmetric,
    /// antisymmetric and diagonal operators.
    PaperEx4,
}

impl GroupingPreset {
    pub fn name(self) -> &'static str {
        match self {
            GroupingPreset::Canonical => "canonical",
            GroupingPreset::PaperEx1 => "paper-ex1",
            GroupingPreset::PaperEx4 => "paper-ex4",
        }
    }
}

impl fmt::Display for GroupingPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupingPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(GroupingPreset::Canonical),
            "paper-ex1" => Ok(GroupingPreset::PaperEx1),
            "paper-ex4" => Ok(GroupingPreset::PaperEx4),
            other => Err(Error::param(
                "grouping",
                format!("unknown preset `{other}` (expected canonical, paper-ex1 or paper-ex4)"),
            )),
        }
    }
}

/// Partition of the `d^2 - 1` traceless basis indices into `N` ordered groups
/// of `M - 1`. Indices are 0-based here; the JSON form is 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    dim: usize,
    n: usize,
    m: usize,
    groups: Vec<Vec<usize>>,
}

/// Checks the informational-completeness condition `N(M-1) = d^2 - 1`.
pub fn check_informationally_complete(d: usize, n: usize, m: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::param("d", format!("need d >= 2, got {d}")));
    }
    if n == 0 || m < 2 {
        return Err(Error::param(
            "N/M",
            format!("need N >= 1 and M >= 2, got N={n}, M={m}"),
        ));
    }
    if n * (m - 1) != d * d - 1 {
        return Err(Error::param(
            "N/M",
            format!(
                "N(M-1) = {} but an informationally complete POVM needs d^2-1 = {}",
                n * (m - 1),
                d * d - 1
            ),
        ));
    }
    Ok(())
}

impl Grouping {
    /// Validates a 0-based partition.
    pub fn new(dim: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let n = groups.len();
        let m = groups.first().map_or(0, |g| g.len() + 1);
        check_informationally_complete(dim, n, m)?;
        if groups.iter().any(|g| g.len() + 1 != m) {
            return Err(Error::param(
                "grouping",
                "all groups must have the same size M-1",
            ));
        }
        let total = dim * dim - 1;
        let mut seen = vec![false; total];
        for &idx in groups.iter().flatten() {
            if idx >= total {
                return Err(Error::param(
                    "grouping",
                    format!("basis index {} out of range 1..={total}", idx + 1),
                ));
            }
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::param(
                    "grouping",
                    format!("basis index {} appears more than once", idx + 1),
                ));
            }
        }
        Ok(Grouping { dim, n, m, groups })
    }

    /// Validates a 1-based partition (the JSON convention).
    pub fn from_one_based(dim: usize, groups: &[Vec<usize>]) -> Result<Self> {
        let mut zero = Vec::with_capacity(groups.len());
        for g in groups {
            let mut row = Vec::with_capacity(g.len());
            for &i in g {
                if i == 0 {
                    return Err(Error::param("grouping", "explicit partitions are 1-based"));
                }
                row.push(i - 1);
            }
            zero.push(row);
        }
        Grouping::new(dim, zero)
    }

    pub fn canonical(dim: usize, n: usize, m: usize) -> Result<Self> {
        check_informationally_complete(dim, n, m)?;
        let groups = (0..n)
            .map(|a| ((a * (m - 1))..((a + 1) * (m - 1))).collect())
            .collect();
        Grouping::new(dim, groups)
    }

    pub fn preset(preset: GroupingPreset, dim: usize, n: usize, m: usize) -> Result<Self> {
        match preset {
            GroupingPreset::Canonical => Grouping::canonical(dim, n, m),
            GroupingPreset::PaperEx1 => {
                if (dim, n, m) != (3, 8, 2) {
                    return Err(Error::param(
                        "grouping",
                        format!(
                            "preset paper-ex1 is defined for d=3, (8,2); got d={dim}, ({n},{m})"
                        ),
                    ));
                }
                Grouping::new(3, (0..8).map(|i| vec![i]).collect())
            }
            GroupingPreset::PaperEx4 => {
                if (dim, n, m) != (4, 5, 4) {
                    return Err(Error::param(
                        "grouping",
                        format!(
                            "preset paper-ex4 is defined for d=4, (5,4); got d={dim}, ({n},{m})"
                        ),
                    ));
                }
                Grouping::new(
                    4,
                    vec![
                        vec![1, 3, 5],
                        vec![0, 7, 9],
                        vec![2, 6, 11],
                        vec![4, 8, 10],
                        vec![12, 13, 14],
                    ],
                )
            }
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

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.groups
            .iter()
            .map(|g| g.iter().map(|i| i + 1).collect())
            .collect()
    }
}
