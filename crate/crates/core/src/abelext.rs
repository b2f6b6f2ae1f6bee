//! Local lattice model of corresponding abelian extensions over a prime that
//! splits completely in both base fields.
//!
//! With `n` primes above `p`, the local norm lattice of the first extension
//! is a full-rank `L₁′ ⊆ ℤⁿ`; the corresponding lattice for the second is
//! `Aᵀ·L₁′`. Residue degrees are read off the maximal normal sublattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::gassmann::{is_gassmann, CorrespondenceMatrix, GassmannError};
use crate::lattice::{IntMat, LatticeError, LocalNormLattice};
use crate::permgroup::{PermGroup, Subgroup};
use crate::splitting::SplittingType;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelextError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(BigInt),
    #[error("{q} divides the nonzero cofactor {cofactor}")]
    CoprimalityViolated { q: u64, cofactor: BigInt },
    #[error("q = {0} is not a prime")]
    NotPrime(u64),
    #[error("decomposition subgroups of order {0} are not supported")]
    OrderNotSupported(usize),
    #[error("residue degree {0} does not fit in 64 bits")]
    TooLarge(BigInt),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Gassmann(#[from] GassmannError),
}

/// Where the transport matrix came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// A raw unimodular matrix with no equivariance claim.
    Synthetic,
    /// The matrix of a verified integral Gassmann triple.
    VerifiedTriple,
}

fn check_unimodular(a: &IntMat) -> Result<(), AbelextError> {
    if !a.is_square() {
        return Err(AbelextError::DimensionMismatch(format!("{}x{} matrix", a.rows(), a.cols())));
    }
    let d = a.det()?;
    if d.abs().is_one() {
        Ok(())
    } else {
        Err(AbelextError::NotUnimodular(d))
    }
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

/// `Aᵀ · L₁′`.
pub fn transport_lattice(a: &IntMat, l1: &LocalNormLattice) -> Result<LocalNormLattice, AbelextError> {
    if !a.is_square() || a.rows() != l1.rank() {
        return Err(AbelextError::DimensionMismatch(format!(
            "{}x{} matrix against a rank-{} lattice",
            a.rows(),
            a.cols(),
            l1.rank()
        )));
    }
    let basis = a.transpose().mul(l1.basis())?;
    Ok(LocalNormLattice::new(basis)?)
}

/// Residue degrees `(m₁, …, mₙ)` of the maximal normal sublattice.
pub fn local_splitting_type(l: &LocalNormLattice) -> Result<SplittingType, AbelextError> {
    let parts = l
        .maximal_normal_sublattice()
        .into_iter()
        .map(|m| m.to_u64().ok_or(AbelextError::TooLarge(m)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SplittingType::new(parts))
}

/// The diagonal lattice `diag(1, q, …, q)`.
pub fn standard_model_lattice(n: usize, q: u64) -> LocalNormLattice {
    let entries: Vec<BigInt> = (0..n).map(|i| if i == 0 { BigInt::one() } else { BigInt::from(q) }).collect();
    LocalNormLattice::new(IntMat::diag(&entries)).expect("nonsingular diagonal")
}

/// Least prime dividing no nonzero cofactor of `A`.
pub fn choose_q(a: &IntMat) -> Result<u64, AbelextError> {
    check_unimodular(a)?;
    let cof = a.cofactor_matrix()?;
    let nonzero: Vec<&BigInt> = (0..a.rows())
        .flat_map(|i| cof.row(i).iter())
        .filter(|c| !c.is_zero())
        .collect();
    let q = (2u64..)
        .filter(|&q| is_prime(q))
        .find(|&q| {
            let bq = BigInt::from(q);
            nonzero.iter().all(|c| !c.is_multiple_of(&bq))
        })
        .expect("finitely many cofactors");
    Ok(q)
}

fn check_q(a: &IntMat, q: u64) -> Result<(), AbelextError> {
    if !is_prime(q) {
        return Err(AbelextError::NotPrime(q));
    }
    let cof = a.cofactor_matrix()?;
    let bq = BigInt::from(q);
    for i in 0..cof.rows() {
        for c in cof.row(i) {
            if !c.is_zero() && c.is_multiple_of(&bq) {
                return Err(AbelextError::CoprimalityViolated {
                    q,
                    cofactor: c.clone(),
                });
            }
        }
    }
    Ok(())
}

/// `n`, `L₁′ = diag(1, q, …, q)`, `A` and `q`, validated.
#[derive(Clone, Debug)]
pub struct LocalModel {
    a: IntMat,
    q: u64,
    l1: LocalNormLattice,
    provenance: Provenance,
}

impl LocalModel {
    pub fn synthetic(a: IntMat, q: u64) -> Result<Self, AbelextError> {
        Self::build(a, q, Provenance::Synthetic)
    }

    pub fn from_correspondence(a: &CorrespondenceMatrix<'_>, q: u64) -> Result<Self, AbelextError> {
        Self::build(a.matrix().clone(), q, Provenance::VerifiedTriple)
    }

    fn build(a: IntMat, q: u64, provenance: Provenance) -> Result<Self, AbelextError> {
        check_unimodular(&a)?;
        check_q(&a, q)?;
        let l1 = standard_model_lattice(a.rows(), q);
        Ok(LocalModel { a, q, l1, provenance })
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn matrix(&self) -> &IntMat {
        &self.a
    }

    pub fn l1(&self) -> &LocalNormLattice {
        &self.l1
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn l2(&self) -> LocalNormLattice {
        transport_lattice(&self.a, &self.l1).expect("validated dimensions")
    }

    pub fn run(&self) -> Result<NotWkEqReport, AbelextError> {
        let s1 = local_splitting_type(&self.l1)?;
        let s2 = local_splitting_type(&self.l2())?;
        let inv = self.a.adjugate()?;
        let lemma_rows = (0..inv.rows()).all(|i| inv.row(i)[1..].iter().any(|x| !x.is_zero()));
        Ok(NotWkEqReport {
            schema: 1,
            n: self.n(),
            q: self.q,
            provenance: self.provenance,
            gcd1: s1.gcd(),
            gcd2: s2.gcd(),
            weakly_kronecker: s1.gcd() == s2.gcd(),
            inverse_rows_leave_first_column: lemma_rows,
            s1,
            s2,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NotWkEqReport {
    pub schema: u32,
    pub n: usize,
    pub q: u64,
    pub provenance: Provenance,
    pub s1: SplittingType,
    pub s2: SplittingType,
    pub gcd1: u64,
    pub gcd2: u64,
    /// Whether the two splitting types have the same gcd at this prime.
    pub weakly_kronecker: bool,
    /// Every row of `A⁻¹` has a nonzero entry past the first column.
    pub inverse_rows_leave_first_column: bool,
}

/// `(S1, S2, gcd1, gcd2)` for a raw unimodular `A` and prime `q`.
pub fn notwkeq_construct(a: &IntMat, q: u64) -> Result<(SplittingType, SplittingType, u64, u64), AbelextError> {
    let r = LocalModel::synthetic(a.clone(), q)?.run()?;
    Ok((r.s1, r.s2, r.gcd1, r.gcd2))
}

/// `|{g ∈ G : gDg⁻¹ ⊆ H1}|` and the same for `H2`.
pub fn decomposition_counts(
    g: &PermGroup,
    h1: &Subgroup,
    h2: &Subgroup,
    d: &Subgroup,
) -> Result<(usize, usize), AbelextError> {
    if d.order() > 2 {
        return Err(AbelextError::OrderNotSupported(d.order()));
    }
    if !is_gassmann(g, h1, h2)? {
        return Err(GassmannError::NotGassmann.into());
    }
    g.check_subgroup(d).map_err(GassmannError::from)?;
    let gens: Vec<usize> = d.members().iter().copied().filter(|&i| i != 0).collect();
    let count = |h: &Subgroup| {
        g.elements()
            .iter()
            .filter(|x| {
                gens.iter().all(|&di| {
                    let c = x.conjugate(g.element(di));
                    h.contains_index(g.index_of(&c).expect("closed under conjugation"))
                })
            })
            .count()
    };
    Ok((count(h1), count(h2)))
}

pub fn decomposition_count_check(
    g: &PermGroup,
    h1: &Subgroup,
    h2: &Subgroup,
    d: &Subgroup,
) -> Result<bool, AbelextError> {
    let (c1, c2) = decomposition_counts(g, h1, h2, d)?;
    Ok(c1 == c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{catalog, Permutation};

    fn example() -> IntMat {
        IntMat::from_rows(&[vec![2, 1, -2], vec![-1, 0, 2], vec![0, 0, 1]]).unwrap()
    }

    fn st(v: &[u64]) -> SplittingType {
        SplittingType::new(v.to_vec())
    }

    #[test]
    fn transport_identity_and_permutation() {
        let l = standard_model_lattice(3, 5);
        let same = transport_lattice(&IntMat::identity(3), &l).unwrap();
        assert_eq!(same.basis(), l.basis());
        let perm = IntMat::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap();
        let moved = transport_lattice(&perm, &l).unwrap();
        assert_eq!(moved.index(), l.index());
        assert_eq!(local_splitting_type(&moved).unwrap(), st(&[1, 5, 5]));
        assert!(matches!(
            transport_lattice(&IntMat::identity(2), &l),
            Err(AbelextError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn splitting_of_standard_lattices() {
        assert_eq!(local_splitting_type(&LocalNormLattice::standard(4)).unwrap(), st(&[1, 1, 1, 1]));
        assert_eq!(local_splitting_type(&standard_model_lattice(3, 7)).unwrap(), st(&[1, 7, 7]));
    }

    #[test]
    fn choose_q_examples() {
        assert_eq!(choose_q(&IntMat::identity(2)).unwrap(), 2);
        assert_eq!(choose_q(&example()).unwrap(), 3);
        // Cofactor 6 appears in [[1,6],[0,1]]'s cofactor matrix.
        let six = IntMat::from_rows(&[vec![1, 6], vec![0, 1]]).unwrap();
        assert_eq!(choose_q(&six).unwrap(), 5);
        assert!(matches!(
            choose_q(&IntMat::diag(&[2, 1])),
            Err(AbelextError::NotUnimodular(_))
        ));
    }

    #[test]
    fn construction_on_example() {
        let (s1, s2, g1, g2) = notwkeq_construct(&example(), 5).unwrap();
        assert_eq!(s1, st(&[1, 5, 5]));
        assert_eq!(s2, st(&[5, 5, 5]));
        assert_eq!((g1, g2), (1, 5));
        let (_, s2, _, g2) = notwkeq_construct(&example(), 3).unwrap();
        assert_eq!(s2, st(&[3, 3, 3]));
        assert_eq!(g2, 3);
        assert!(matches!(
            notwkeq_construct(&example(), 2),
            Err(AbelextError::CoprimalityViolated { q: 2, .. })
        ));
        assert_eq!(notwkeq_construct(&example(), 4), Err(AbelextError::NotPrime(4)));
    }

    #[test]
    fn identity_gives_no_separation() {
        let (s1, s2, g1, g2) = notwkeq_construct(&IntMat::identity(4), 3).unwrap();
        assert_eq!(s1, s2);
        assert_eq!(g1, g2);
        let r = LocalModel::synthetic(IntMat::identity(4), 3).unwrap().run().unwrap();
        assert!(r.weakly_kronecker);
        assert!(!r.inverse_rows_leave_first_column);
        assert_eq!(r.provenance, Provenance::Synthetic);
    }

    #[test]
    fn decomposition_counts_on_gl3() {
        let g = catalog::gl3_f2();
        let h1 = catalog::gl3_point_stabilizer(&g);
        let h2 = catalog::gl3_hyperplane_stabilizer(&g);
        let triv = g.trivial_subgroup();
        assert_eq!(decomposition_counts(&g, &h1, &h2, &triv).unwrap(), (168, 168));
        let inv = g.elements().iter().find(|p| p.order() == 2).unwrap().clone();
        let d = g.subgroup(&[inv.clone()]).unwrap();
        // Brute force: count g with g·inv·g⁻¹ fixing point 0 resp. the plane.
        let brute1 = g.elements().iter().filter(|x| x.conjugate(&inv).apply(0) == 0).count();
        let (c1, c2) = decomposition_counts(&g, &h1, &h2, &d).unwrap();
        assert_eq!(c1, brute1);
        assert_eq!(c1, c2);
        let c3 = g.subgroup(&[g.elements().iter().find(|p| p.order() == 3).unwrap().clone()]).unwrap();
        assert_eq!(decomposition_count_check(&g, &h1, &h2, &c3), Err(AbelextError::OrderNotSupported(3)));
    }

    #[test]
    fn decomposition_counts_for_conjugates() {
        let s4 = catalog::symmetric(4);
        let h1 = s4.subgroup(&[Permutation::parse_cycles(4, "(0 1)").unwrap()]).unwrap();
        let x = Permutation::parse_cycles(4, "(1 2 3)").unwrap();
        let h2 = s4.conjugate_subgroup(&h1, &x).unwrap();
        let d = s4.subgroup(&[Permutation::parse_cycles(4, "(2 3)").unwrap()]).unwrap();
        assert!(decomposition_count_check(&s4, &h1, &h2, &d).unwrap());
    }
}
