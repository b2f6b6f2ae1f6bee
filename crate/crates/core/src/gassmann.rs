//! Gassmann equivalence, the intertwiner space between two permutation
//! modules, and a bounded search for unimodular intertwiners.
//!
//! Matrices act on column vectors indexed by cosets: `A[j][i]` is the
//! coefficient of coset `j` of `H2` in the image of coset `i` of `H1`, and
//! `P(g) e_i = e_{g·i}`. Equivariance `A P₁(g) = P₂(g) A` is then
//! `A[g·j][g·i] = A[j][i]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{IntMat, LatticeError};
use crate::permgroup::{CosetSpace, PermGroup, PermGroupError, Permutation, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GassmannError {
    #[error("subgroup indices differ: {0} vs {1}")]
    IndexMismatch(usize, usize),
    #[error("subgroups are not Gassmann equivalent")]
    NotGassmann,
    #[error("no unimodular intertwiner found within the search budget ({trials} candidates tried)")]
    NotFoundWithinBudget { trials: u64 },
    #[error("row-sum eigenvalue and column-sum eigenvalue differ")]
    MixedSigns,
    #[error("matrix is not a unimodular equivariant intertwiner: {0}")]
    NotIntertwiner(String),
    #[error(transparent)]
    Group(#[from] PermGroupError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Fixed points of each class representative on `G/H1` and `G/H2`,
/// in the class order of [`PermGroup::conjugacy_classes`].
pub fn fixed_point_table(
    g: &PermGroup,
    h1: &Subgroup,
    h2: &Subgroup,
) -> Result<Vec<(Permutation, usize, usize)>, GassmannError> {
    let c1 = g.coset_action(h1)?;
    let c2 = g.coset_action(h2)?;
    if c1.len() != c2.len() {
        return Err(GassmannError::IndexMismatch(c1.len(), c2.len()));
    }
    Ok(g.conjugacy_classes()
        .into_iter()
        .map(|cl| {
            let f1 = c1.action(g, &cl.representative).fixed_points();
            let f2 = c2.action(g, &cl.representative).fixed_points();
            (cl.representative, f1, f2)
        })
        .collect())
}

/// Equality of the permutation characters of `G/H1` and `G/H2`.
pub fn is_gassmann(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> Result<bool, GassmannError> {
    Ok(fixed_point_table(g, h1, h2)?.iter().all(|(_, a, b)| a == b))
}

/// A Gassmann triple `(G, H1, H2)`, checked on construction.
#[derive(Clone, Debug)]
pub struct GassmannTriple<'g> {
    group: &'g PermGroup,
    h1: Subgroup,
    h2: Subgroup,
    cosets1: CosetSpace,
    cosets2: CosetSpace,
    index: usize,
}

impl<'g> GassmannTriple<'g> {
    pub fn new(group: &'g PermGroup, h1: Subgroup, h2: Subgroup) -> Result<Self, GassmannError> {
        if !is_gassmann(group, &h1, &h2)? {
            return Err(GassmannError::NotGassmann);
        }
        let cosets1 = group.coset_action(&h1)?;
        let cosets2 = group.coset_action(&h2)?;
        let index = cosets1.len();
        Ok(GassmannTriple {
            group,
            h1,
            h2,
            cosets1,
            cosets2,
            index,
        })
    }

    pub fn group(&self) -> &'g PermGroup {
        self.group
    }

    pub fn h1(&self) -> &Subgroup {
        &self.h1
    }

    pub fn h2(&self) -> &Subgroup {
        &self.h2
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn cosets1(&self) -> &CosetSpace {
        &self.cosets1
    }

    pub fn cosets2(&self) -> &CosetSpace {
        &self.cosets2
    }

    pub fn are_conjugate(&self) -> bool {
        self.group.are_conjugate(&self.h1, &self.h2).expect("subgroups of the triple's group")
    }

    /// The triple with `H1` and `H2` swapped.
    pub fn reversed(&self) -> GassmannTriple<'g> {
        GassmannTriple {
            group: self.group,
            h1: self.h2.clone(),
            h2: self.h1.clone(),
            cosets1: self.cosets2.clone(),
            cosets2: self.cosets1.clone(),
            index: self.index,
        }
    }
}

/// `G`-orbit labels on pairs: `labels[j][i]` is the orbit of `(coset i of H1,
/// coset j of H2)`, numbered in double-coset order.
pub fn intertwiner_orbits(
    g: &PermGroup,
    cosets1: &CosetSpace,
    cosets2: &CosetSpace,
    h1: &Subgroup,
) -> Vec<Vec<usize>> {
    let n1 = cosets1.len();
    let n2 = cosets2.len();
    let mut labels = vec![vec![usize::MAX; n1]; n2];
    for (label, orbit) in cosets2.orbits_under(g, h1.generators()).into_iter().enumerate() {
        for i in 0..n1 {
            let r = cosets1.rep_indices[i];
            for &j in &orbit {
                labels[cosets2.act_idx(g, r, j)][i] = label;
            }
        }
    }
    labels
}

/// One 0/1 matrix per double coset `H1 \ G / H2`; together a ℤ-basis of all
/// integer matrices `B` with `B P₁(g) = P₂(g) B`.
pub fn intertwiner_basis(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> Result<Vec<IntMat>, GassmannError> {
    let c1 = g.coset_action(h1)?;
    let c2 = g.coset_action(h2)?;
    if c1.len() != c2.len() {
        return Err(GassmannError::IndexMismatch(c1.len(), c2.len()));
    }
    let labels = intertwiner_orbits(g, &c1, &c2, h1);
    Ok(basis_from_labels(&labels))
}

fn basis_from_labels(labels: &[Vec<usize>]) -> Vec<IntMat> {
    let k = labels.iter().flatten().max().map_or(0, |m| m + 1);
    let rows = labels.len();
    let cols = labels[0].len();
    (0..k)
        .map(|d| {
            IntMat::from_fn(rows, cols, |j, i| {
                if labels[j][i] == d {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A unimodular `G`-equivariant matrix `ℤ[G/H1] → ℤ[G/H2]`.
#[derive(Clone, Debug)]
pub struct CorrespondenceMatrix<'t> {
    triple: &'t GassmannTriple<'t>,
    matrix: IntMat,
    sign: Sign,
}

impl<'t> CorrespondenceMatrix<'t> {
    /// Validates every invariant through [`verify_integral_triple`].
    pub fn new(triple: &'t GassmannTriple<'t>, matrix: IntMat) -> Result<Self, GassmannError> {
        let report = verify_integral_triple(triple, &matrix);
        if !report.passed {
            return Err(GassmannError::NotIntertwiner(report.failure_summary()));
        }
        let sign = if report.sign == Some(1) { Sign::Plus } else { Sign::Minus };
        Ok(CorrespondenceMatrix { triple, matrix, sign })
    }

    pub fn triple(&self) -> &'t GassmannTriple<'t> {
        self.triple
    }

    pub fn matrix(&self) -> &IntMat {
        &self.matrix
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn into_matrix(self) -> IntMat {
        self.matrix
    }
}

/// Invariant-by-invariant verdicts on a candidate intertwiner.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub size: usize,
    pub size_matches: bool,
    pub determinant: String,
    pub unimodular: bool,
    pub equivariant: bool,
    /// Generators (cycle notation) on which `A P₁(g) ≠ P₂(g) A`.
    pub failing_generators: Vec<String>,
    pub row_sum_eigenvalue: Option<i64>,
    pub column_sum_eigenvalue: Option<i64>,
    pub sign: Option<i64>,
    pub sign_consistent: bool,
    pub conjugate_subgroups: bool,
    /// Only checked for non-conjugate subgroups.
    pub rows_have_multiple_nonzeros: Option<bool>,
    pub inverse_rows_have_multiple_nonzeros: Option<bool>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn failure_summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.size_matches {
            parts.push("size".to_string());
        }
        if !self.unimodular {
            parts.push(format!("determinant {}", self.determinant));
        }
        if !self.equivariant {
            parts.push(format!("equivariance fails on {}", self.failing_generators.join(", ")));
        }
        if !self.sign_consistent {
            parts.push("row/column sums".to_string());
        }
        if self.rows_have_multiple_nonzeros == Some(false) {
            parts.push("a row has a single nonzero".to_string());
        }
        if self.inverse_rows_have_multiple_nonzeros == Some(false) {
            parts.push("a row of the inverse has a single nonzero".to_string());
        }
        parts.join("; ")
    }
}

fn constant_sums(m: &IntMat, rows: bool) -> Option<i64> {
    let n = if rows { m.rows() } else { m.cols() };
    let sums: Vec<BigInt> = (0..n)
        .map(|k| {
            if rows {
                m.row(k).iter().sum()
            } else {
                m.col(k).iter().sum()
            }
        })
        .collect();
    let first = sums.first()?;
    if sums.iter().all(|s| s == first) {
        first.to_i64()
    } else {
        None
    }
}

fn rows_multiple_nonzeros(m: &IntMat) -> bool {
    (0..m.rows()).all(|r| m.row(r).iter().filter(|x| !x.is_zero()).count() >= 2)
}

fn equivariant_on(cosets1: &CosetSpace, cosets2: &CosetSpace, g: &PermGroup, a: &IntMat, s: &Permutation) -> bool {
    let p1 = cosets1.action(g, s);
    let p2 = cosets2.action(g, s);
    (0..a.rows()).all(|j| (0..a.cols()).all(|i| a[(p2.apply(j), p1.apply(i))] == a[(j, i)]))
}

pub fn verify_integral_triple(triple: &GassmannTriple<'_>, a: &IntMat) -> VerificationReport {
    let n = triple.index();
    let size_matches = a.rows() == n && a.cols() == n;
    let conjugate_subgroups = triple.are_conjugate();
    if !size_matches {
        return VerificationReport {
            schema: 1,
            size: a.rows(),
            size_matches,
            determinant: "n/a".into(),
            unimodular: false,
            equivariant: false,
            failing_generators: Vec::new(),
            row_sum_eigenvalue: None,
            column_sum_eigenvalue: None,
            sign: None,
            sign_consistent: false,
            conjugate_subgroups,
            rows_have_multiple_nonzeros: None,
            inverse_rows_have_multiple_nonzeros: None,
            passed: false,
        };
    }
    let det = a.det().expect("square");
    let unimodular = det.abs().is_one();
    let g = triple.group();
    let failing_generators: Vec<String> = g
        .generators()
        .iter()
        .filter(|s| !equivariant_on(triple.cosets1(), triple.cosets2(), g, a, s))
        .map(|s| s.to_string())
        .collect();
    let equivariant = failing_generators.is_empty();
    let row = constant_sums(a, true);
    let col = constant_sums(a, false);
    let sign = match (row, col) {
        (Some(r), Some(c)) if r == c && r.abs() == 1 => Some(r),
        _ => None,
    };
    let (rows_multi, inv_multi) = if conjugate_subgroups {
        (None, None)
    } else {
        let inv_ok = if unimodular {
            // A⁻¹ = adj(A) / det with det = ±1.
            Some(rows_multiple_nonzeros(&a.adjugate().expect("square")))
        } else {
            Some(false)
        };
        (Some(rows_multiple_nonzeros(a)), inv_ok)
    };
    let passed = unimodular
        && equivariant
        && sign.is_some()
        && rows_multi.unwrap_or(true)
        && inv_multi.unwrap_or(true);
    VerificationReport {
        schema: 1,
        size: n,
        size_matches,
        determinant: det.to_string(),
        unimodular,
        equivariant,
        failing_generators,
        row_sum_eigenvalue: row,
        column_sum_eigenvalue: col,
        sign,
        sign_consistent: sign.is_some(),
        conjugate_subgroups,
        rows_have_multiple_nonzeros: rows_multi,
        inverse_rows_have_multiple_nonzeros: inv_multi,
        passed,
    }
}

/// Returns `A` or `−A`, whichever has row and column sums `+1`.
pub fn sign_normalize<'t>(
    triple: &'t GassmannTriple<'t>,
    a: &IntMat,
) -> Result<CorrespondenceMatrix<'t>, GassmannError> {
    let row = constant_sums(a, true);
    let col = constant_sums(a, false);
    match (row, col) {
        (Some(r), Some(c)) if r == c && r.abs() == 1 => {
            let m = if r == 1 { a.clone() } else { a.neg() };
            CorrespondenceMatrix::new(triple, m)
        }
        _ => Err(GassmannError::MixedSigns),
    }
}

/// What [`integral_search`] did.
#[derive(Clone, Debug, Serialize)]
pub struct SearchStats {
    pub basis_size: usize,
    pub exhaustive: bool,
    pub trials: u64,
}

/// Search `Σ c_d B_d` with `|c_d| ≤ coeff_bound` for `|det| = 1`.
///
/// For basis size ≤ 6 and bound ≤ 3 the whole box is enumerated, sparsest
/// and smallest candidates first; otherwise `budget` seeded random samples
/// are drawn. Failure is a report, not a proof that no intertwiner exists.
pub fn integral_search<'t>(
    triple: &'t GassmannTriple<'t>,
    coeff_bound: i64,
    budget: u64,
    seed: u64,
) -> Result<(CorrespondenceMatrix<'t>, SearchStats), GassmannError> {
    let g = triple.group();
    let labels = intertwiner_orbits(g, triple.cosets1(), triple.cosets2(), triple.h1());
    let k = labels.iter().flatten().max().map_or(0, |m| m + 1);
    let exhaustive = k <= 6 && coeff_bound <= 3;
    let bound = coeff_bound.max(0);
    let mut trials = 0u64;
    let mut try_coeffs = |coeffs: &[i64]| -> Option<IntMat> {
        trials += 1;
        let rows: Vec<Vec<i64>> = labels.iter().map(|row| row.iter().map(|&l| coeffs[l]).collect()).collect();
        let det = det_small(&rows);
        if det.abs().is_one() {
            Some(IntMat::from_rows(&rows).expect("square"))
        } else {
            None
        }
    };
    let found = if exhaustive {
        let mut candidates = box_points(k, bound);
        candidates.sort_by_key(|c| {
            (
                c.iter().filter(|&&x| x != 0).count(),
                c.iter().map(|x| x.abs()).sum::<i64>(),
                c.iter().filter(|&&x| x < 0).count(),
            )
        });
        candidates.into_iter().find_map(|c| try_coeffs(&c))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..budget).find_map(|_| {
            let c: Vec<i64> = (0..k).map(|_| rng.gen_range(-bound..=bound)).collect();
            try_coeffs(&c)
        })
    };
    let stats = SearchStats {
        basis_size: k,
        exhaustive,
        trials,
    };
    match found {
        Some(m) => Ok((CorrespondenceMatrix::new(triple, m)?, stats)),
        None => Err(GassmannError::NotFoundWithinBudget { trials }),
    }
}

/// Nonzero points of `[-b, b]^k` in odometer order.
fn box_points(k: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-b; k];
    if k == 0 {
        return out;
    }
    loop {
        if cur.iter().any(|&x| x != 0) {
            out.push(cur.clone());
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return out;
            }
            if cur[pos] < b {
                cur[pos] += 1;
                break;
            }
            cur[pos] = -b;
            pos += 1;
        }
    }
}

/// Exact determinant: Bareiss in `i128`, falling back to big integers on overflow.
pub(crate) fn det_small(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| a[i][k].checked_mul(a[k][j]).and_then(|y| x.checked_sub(y)));
                match v {
                    Some(v) => a[i][j] = v / prev,
                    None => return IntMat::from_rows(rows).expect("square").det().expect("square"),
                }
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    BigInt::from(sign * a[n - 1][n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::catalog;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn conjugates_are_gassmann() {
        let s4 = catalog::symmetric(4);
        let h1 = s4.subgroup(&[p(4, "(0 1)")]).unwrap();
        let h2 = s4.subgroup(&[p(4, "(2 3)")]).unwrap();
        assert!(is_gassmann(&s4, &h1, &h2).unwrap());
        let h3 = s4.subgroup(&[p(4, "(0 1)(2 3)")]).unwrap();
        assert!(!is_gassmann(&s4, &h1, &h3).unwrap());
    }

    #[test]
    fn index_mismatch() {
        let s3 = catalog::symmetric(3);
        let h1 = s3.subgroup(&[p(3, "(0 1)")]).unwrap();
        let h2 = s3.subgroup(&[p(3, "(0 1 2)")]).unwrap();
        assert_eq!(is_gassmann(&s3, &h1, &h2), Err(GassmannError::IndexMismatch(3, 2)));
        assert!(matches!(GassmannTriple::new(&s3, h1, h2), Err(GassmannError::IndexMismatch(3, 2))));
    }

    #[test]
    fn trivial_basis() {
        let s3 = catalog::symmetric(3);
        let g = s3.whole();
        let basis = intertwiner_basis(&s3, &g, &g).unwrap();
        assert_eq!(basis, vec![IntMat::identity(1)]);
    }

    #[test]
    fn s3_basis_two_matrices() {
        let s3 = catalog::symmetric(3);
        let h = s3.subgroup(&[p(3, "(0 1)")]).unwrap();
        let basis = intertwiner_basis(&s3, &h, &h).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], IntMat::identity(3));
        let off = IntMat::from_rows(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        assert_eq!(basis[1], off);
    }

    #[test]
    fn search_finds_identity_on_s3() {
        let s3 = catalog::symmetric(3);
        let h = s3.subgroup(&[p(3, "(0 1)")]).unwrap();
        let t = GassmannTriple::new(&s3, h.clone(), h).unwrap();
        let (a, stats) = integral_search(&t, 1, 100, 0).unwrap();
        assert!(stats.exhaustive);
        assert_eq!(a.matrix(), &IntMat::identity(3));
        assert_eq!(a.sign(), Sign::Plus);
    }

    #[test]
    fn negated_permutation_has_minus_sign() {
        let s3 = catalog::symmetric(3);
        let h = s3.subgroup(&[p(3, "(0 1)")]).unwrap();
        let t = GassmannTriple::new(&s3, h.clone(), h).unwrap();
        let neg = IntMat::identity(3).neg();
        let r = verify_integral_triple(&t, &neg);
        assert!(r.passed);
        assert_eq!(r.sign, Some(-1));
        let normalized = sign_normalize(&t, &neg).unwrap();
        assert_eq!(normalized.matrix(), &IntMat::identity(3));
        assert_eq!(normalized.sign(), Sign::Plus);
        // idempotent
        let again = sign_normalize(&t, normalized.matrix()).unwrap();
        assert_eq!(again.matrix(), normalized.matrix());
    }

    #[test]
    fn mixed_signs_rejected() {
        let s3 = catalog::symmetric(3);
        let h = s3.subgroup(&[p(3, "(0 1)")]).unwrap();
        let t = GassmannTriple::new(&s3, h.clone(), h).unwrap();
        // Rows sum to 1, columns do not agree: not equivariant.
        let bad = IntMat::from_rows(&[vec![1, 0, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(sign_normalize(&t, &bad).unwrap_err(), GassmannError::MixedSigns);
        let bad = IntMat::from_rows(&[vec![-1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(sign_normalize(&t, &bad).unwrap_err(), GassmannError::MixedSigns);
    }

    #[test]
    fn perturbed_entry_flags_one_generator() {
        let s3 = PermGroup::generate(3, vec![p(3, "(0 1)"), p(3, "(0 1 2)")]).unwrap();
        let h = s3.subgroup(&[p(3, "(0 1)")]).unwrap();
        let t = GassmannTriple::new(&s3, h.clone(), h).unwrap();
        let cs = t.cosets1();
        let transposition = cs.action(&s3, &s3.generators()[0]);
        let fixed: Vec<usize> = (0..3).filter(|&i| transposition.apply(i) == i).collect();
        assert_eq!(fixed.len(), 1);
        // Perturb the diagonal entry at the coset fixed by the transposition:
        // still commutes with P(transposition), no longer with P(3-cycle).
        let mut a = IntMat::identity(3);
        a[(fixed[0], fixed[0])] = BigInt::from(2);
        let r = verify_integral_triple(&t, &a);
        assert!(!r.equivariant);
        assert_eq!(r.failing_generators, vec![s3.generators()[1].to_string()]);
    }

    #[test]
    fn small_det_matches_big_det() {
        let rows = vec![vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]];
        assert_eq!(det_small(&rows), IntMat::from_rows(&rows).unwrap().det().unwrap());
        let huge = vec![vec![i64::MAX, 1], vec![1, i64::MAX]];
        assert_eq!(det_small(&huge), IntMat::from_rows(&huge).unwrap().det().unwrap());
    }
}
