//! Exact integer matrices and full-rank sublattices of `ℤʳ`.
//!
//! The central computation is [`maximal_normal_sublattice`]: the largest
//! sublattice spanned by integer multiples of the standard basis vectors
//! that sits inside the column span of a nonsingular integer matrix.

mod intmat;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use intmat::{IntMat, SmithForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    InvalidDimensions { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// `m_i = |det M| / gcd(det M, adj(M)[·][i])`, the least positive integer with
/// `m_i M⁻¹ e_i ∈ ℤʳ`.
pub fn maximal_normal_sublattice(m: &IntMat) -> Result<Vec<BigInt>, LatticeError> {
    let det = m.det()?;
    if det.is_zero() {
        return Err(LatticeError::SingularMatrix);
    }
    let adj = m.adjugate()?;
    Ok((0..m.cols())
        .map(|i| {
            let g = (0..m.rows()).fold(det.clone(), |g, r| g.gcd(&adj[(r, i)]));
            det.abs() / g
        })
        .collect())
}

/// A full-rank sublattice of `ℤʳ`, spanned by the columns of its basis matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalNormLattice {
    basis: IntMat,
    det: BigInt,
    adj: IntMat,
}

impl LocalNormLattice {
    pub fn new(basis: IntMat) -> Result<Self, LatticeError> {
        let det = basis.det()?;
        if det.is_zero() {
            return Err(LatticeError::SingularMatrix);
        }
        let adj = basis.adjugate()?;
        Ok(LocalNormLattice { basis, det, adj })
    }

    /// The standard lattice `ℤⁿ`.
    pub fn standard(n: usize) -> Self {
        Self::new(IntMat::identity(n)).expect("identity is nonsingular")
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    /// `[ℤʳ : L] = |det|`.
    pub fn index(&self) -> BigInt {
        self.det.abs()
    }

    /// Whether `v` is an integer combination of the basis columns.
    pub fn contains(&self, v: &[BigInt]) -> Result<bool, LatticeError> {
        let x = self.adj.mul_vec(v)?;
        Ok(x.iter().all(|xi| xi.is_multiple_of(&self.det)))
    }

    pub fn maximal_normal_sublattice(&self) -> Vec<BigInt> {
        maximal_normal_sublattice(&self.basis).expect("basis is nonsingular")
    }
}

pub fn contains(lattice: &LocalNormLattice, v: &[BigInt]) -> Result<bool, LatticeError> {
    lattice.contains(v)
}

pub fn lattice_index(lattice: &LocalNormLattice) -> BigInt {
    lattice.index()
}

/// Reads the matrix file format: a `size: N` line, then `N` rows of `N`
/// whitespace-separated integers. Blank lines and `#` comments are skipped.
pub fn parse_matrix_file(text: &str) -> Result<IntMat, LatticeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(LatticeError::Parse {
        line: 1,
        message: "empty matrix file".into(),
    })?;
    let n: usize = header
        .strip_prefix("size:")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| LatticeError::Parse {
            line: hline,
            message: format!("expected `size: N`, found {:?}", header),
        })?;
    if n == 0 {
        return Err(LatticeError::Parse {
            line: hline,
            message: "size must be positive".into(),
        });
    }
    let mut data = Vec::with_capacity(n * n);
    let mut count = 0;
    for (ln, line) in lines {
        if count == n {
            return Err(LatticeError::Parse {
                line: ln,
                message: format!("more than {} rows", n),
            });
        }
        let row: Vec<BigInt> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<BigInt>().map_err(|_| LatticeError::Parse {
                    line: ln,
                    message: format!("bad integer {:?}", tok),
                })
            })
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(LatticeError::Parse {
                line: ln,
                message: format!("expected {} entries, found {}", n, row.len()),
            });
        }
        data.extend(row);
        count += 1;
    }
    if count != n {
        return Err(LatticeError::Parse {
            line: text.lines().count(),
            message: format!("expected {} rows, found {}", n, count),
        });
    }
    IntMat::new(n, n, data)
}

pub fn format_matrix_file(m: &IntMat) -> String {
    let mut out = format!("size: {}\n", m.rows());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMat {
        IntMat::from_rows(rows).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn normal_sublattice_examples() {
        assert_eq!(maximal_normal_sublattice(&IntMat::identity(3)).unwrap(), big(&[1, 1, 1]));
        assert_eq!(
            maximal_normal_sublattice(&IntMat::diag(&[2i64, 3, 7])).unwrap(),
            big(&[2, 3, 7])
        );
        assert_eq!(
            maximal_normal_sublattice(&m(&[vec![1, 1], vec![0, 2]])).unwrap(),
            big(&[1, 2])
        );
    }

    #[test]
    fn singular_is_rejected() {
        let s = m(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(maximal_normal_sublattice(&s), Err(LatticeError::SingularMatrix));
        assert_eq!(LocalNormLattice::new(s).unwrap_err(), LatticeError::SingularMatrix);
    }

    #[test]
    fn membership_and_index() {
        let z2 = LocalNormLattice::standard(2);
        assert!(z2.contains(&big(&[7, -3])).unwrap());
        let two = LocalNormLattice::new(IntMat::diag(&[2i64, 2])).unwrap();
        assert!(!two.contains(&big(&[1, 0])).unwrap());
        assert!(two.contains(&big(&[2, -4])).unwrap());
        let l = LocalNormLattice::new(m(&[vec![1, 1], vec![0, 2]])).unwrap();
        assert_eq!(lattice_index(&l), BigInt::from(2));
        assert!(contains(&l, &big(&[1, 0])).unwrap());
        assert!(!contains(&l, &big(&[0, 1])).unwrap());
        assert!(l.contains(&big(&[1])).is_err());
    }

    #[test]
    fn matrix_file_round_trip_and_errors() {
        let a = m(&[vec![2, 1, -2], vec![-1, 0, 2], vec![0, 0, 1]]);
        let text = format_matrix_file(&a);
        assert_eq!(parse_matrix_file(&text).unwrap(), a);
        let err = parse_matrix_file("size: 2\n1 2\n3\n").unwrap_err();
        assert_eq!(
            err,
            LatticeError::Parse {
                line: 3,
                message: "expected 2 entries, found 1".into()
            }
        );
        assert!(matches!(parse_matrix_file("dim 2\n"), Err(LatticeError::Parse { line: 1, .. })));
        assert!(matches!(parse_matrix_file("size: 1\nx\n"), Err(LatticeError::Parse { line: 2, .. })));
    }
}
