//! Finite permutation groups by full enumeration: conjugacy classes, coset
//! and double-coset actions, normal cores, abelianization and the
//! degree-one transfer.

mod abelian;
pub mod catalog;
mod group;
mod perm;

use thiserror::Error;

pub use abelian::{
    abelianization, derived_subgroup, inclusion_induced, inclusion_map, transfer, transfer_map, AbHom,
    Abelianization, FinAbGroup,
};
pub use group::{ConjugacyClass, CosetSpace, PermGroup, Subgroup, DEFAULT_ORDER_CAP};
pub use perm::Permutation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermGroupError {
    #[error("group order exceeds the cap of {0} elements")]
    OrderCapExceeded(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A group file parsed but not yet closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GroupSpec {
    pub fn generate(&self) -> Result<PermGroup, PermGroupError> {
        PermGroup::generate(self.degree, self.generators.clone())
    }
}

/// Parses the group file format: `degree: N` followed by `gen: <cycles>`
/// lines. Blank lines and `#` comments are ignored.
pub fn parse_group_file(text: &str) -> Result<GroupSpec, PermGroupError> {
    let mut degree = None;
    let mut generators = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("degree:") {
            if degree.is_some() {
                return Err(PermGroupError::Parse {
                    line: line_no,
                    message: "duplicate degree line".into(),
                });
            }
            let n: usize = rest.trim().parse().map_err(|_| PermGroupError::Parse {
                line: line_no,
                message: format!("bad degree {:?}", rest.trim()),
            })?;
            if n == 0 {
                return Err(PermGroupError::Parse {
                    line: line_no,
                    message: "degree must be positive".into(),
                });
            }
            degree = Some(n);
        } else if let Some(rest) = line.strip_prefix("gen:") {
            let n = degree.ok_or(PermGroupError::Parse {
                line: line_no,
                message: "gen line before degree line".into(),
            })?;
            let p = Permutation::parse_cycles(n, rest).map_err(|e| PermGroupError::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            generators.push(p);
        } else {
            return Err(PermGroupError::Parse {
                line: line_no,
                message: format!("unrecognized line {:?}", line),
            });
        }
    }
    let degree = degree.ok_or(PermGroupError::Parse {
        line: 1,
        message: "missing `degree:` line".into(),
    })?;
    Ok(GroupSpec { degree, generators })
}

pub fn format_group_file(degree: usize, generators: &[Permutation]) -> String {
    let mut out = format!("degree: {}\n", degree);
    for g in generators {
        out.push_str(&format!("gen: {}\n", g));
    }
    out
}
