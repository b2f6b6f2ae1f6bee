//! Splitting of unramified primes in the Galois-group model.
//!
//! A prime with Frobenius class `c` splits in the field cut out by `H` with
//! residue degrees equal to the cycle lengths of `c` on `G/H`. Since every
//! class is a Frobenius class for infinitely many primes, "for all but
//! finitely many primes" becomes "for every conjugacy class".

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::permgroup::{ConjugacyClass, CosetSpace, PermGroup, PermGroupError, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplittingError {
    #[error("subgroup indices differ: {0} vs {1}")]
    IndexMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Group(#[from] PermGroupError),
}

/// Multiset of residue degrees, kept sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SplittingType(Vec<u64>);

impl SplittingType {
    pub fn new(mut parts: Vec<u64>) -> Self {
        assert!(parts.iter().all(|&f| f > 0), "residue degrees are positive");
        parts.sort_unstable();
        SplittingType(parts)
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn contains_one(&self) -> bool {
        self.0.first() == Some(&1)
    }

    pub fn gcd(&self) -> u64 {
        self.0.iter().fold(0, |g, &f| g.gcd(&f))
    }

    pub fn lcm(&self) -> u64 {
        self.0.iter().fold(1, |l, &f| l.lcm(&f))
    }
}

impl std::fmt::Display for SplittingType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{{{}}}}}", parts.join(","))
    }
}

fn splitting_in(g: &PermGroup, cosets: &CosetSpace, class: &ConjugacyClass) -> SplittingType {
    SplittingType::new(cosets.action(g, &class.representative).cycle_type())
}

/// Cycle type of the class on `G/H`.
pub fn splitting_type(g: &PermGroup, h: &Subgroup, class: &ConjugacyClass) -> Result<SplittingType, SplittingError> {
    let cosets = g.coset_action(h)?;
    Ok(splitting_in(g, &cosets, class))
}

/// Per-class splitting data for a pair of subgroups.
#[derive(Clone, Debug, Serialize)]
pub struct ClassRow {
    pub representative: String,
    pub class_size: usize,
    pub element_order: u64,
    pub s1: SplittingType,
    pub s2: SplittingType,
    pub gcd1: u64,
    pub gcd2: u64,
    pub lcm1: u64,
    pub lcm2: u64,
    pub arithmetic: bool,
    pub kronecker: bool,
    pub weak_kronecker: bool,
    pub ultra_coarse: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplittingReport {
    pub schema: u32,
    pub index: usize,
    pub rows: Vec<ClassRow>,
    pub arithmetically_equivalent: bool,
    pub kronecker_equivalent: bool,
    pub weakly_kronecker_equivalent: bool,
    pub ultra_coarse_equivalent: bool,
}

pub fn splitting_report(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> Result<SplittingReport, SplittingError> {
    let c1 = g.coset_action(h1)?;
    let c2 = g.coset_action(h2)?;
    if c1.len() != c2.len() {
        return Err(SplittingError::IndexMismatch(c1.len(), c2.len()));
    }
    let rows: Vec<ClassRow> = g
        .conjugacy_classes()
        .iter()
        .map(|cl| {
            let s1 = splitting_in(g, &c1, cl);
            let s2 = splitting_in(g, &c2, cl);
            ClassRow {
                representative: cl.representative.to_string(),
                class_size: cl.size(),
                element_order: cl.representative.order(),
                gcd1: s1.gcd(),
                gcd2: s2.gcd(),
                lcm1: s1.lcm(),
                lcm2: s2.lcm(),
                arithmetic: s1 == s2,
                kronecker: s1.contains_one() == s2.contains_one(),
                weak_kronecker: s1.gcd() == s2.gcd(),
                ultra_coarse: s1.lcm() == s2.lcm(),
                s1,
                s2,
            }
        })
        .collect();
    Ok(SplittingReport {
        schema: 1,
        index: c1.len(),
        arithmetically_equivalent: rows.iter().all(|r| r.arithmetic),
        kronecker_equivalent: rows.iter().all(|r| r.kronecker),
        weakly_kronecker_equivalent: rows.iter().all(|r| r.weak_kronecker),
        ultra_coarse_equivalent: rows.iter().all(|r| r.ultra_coarse),
        rows,
    })
}

pub fn arithmetically_equivalent(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> Result<bool, SplittingError> {
    Ok(splitting_report(g, h1, h2)?.arithmetically_equivalent)
}

pub fn kronecker_equivalent(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> Result<bool, SplittingError> {
    Ok(splitting_report(g, h1, h2)?.kronecker_equivalent)
}

pub fn weakly_kronecker_equivalent(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> Result<bool, SplittingError> {
    Ok(splitting_report(g, h1, h2)?.weakly_kronecker_equivalent)
}

pub fn ultra_coarse_equivalent(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> Result<bool, SplittingError> {
    Ok(splitting_report(g, h1, h2)?.ultra_coarse_equivalent)
}

/// The numerical semigroup generated by a splitting type, truncated at `cap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericalSet {
    pub base: SplittingType,
    pub cap: u64,
    pub members: Vec<u64>,
}

impl NumericalSet {
    pub fn contains(&self, x: u64) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

pub fn numerical_set(s: &SplittingType, cap: u64) -> NumericalSet {
    let mut reach = vec![false; cap as usize + 1];
    reach[0] = true;
    let mut gens: Vec<u64> = s.parts().to_vec();
    gens.dedup();
    for x in 1..=cap as usize {
        reach[x] = gens.iter().any(|&f| f as usize <= x && reach[x - f as usize]);
    }
    NumericalSet {
        base: s.clone(),
        cap,
        members: (0..=cap).filter(|&x| reach[x as usize]).collect(),
    }
}

/// Number of `(n₁, …, n_g) ∈ ℕᵍ` with `Σ nⱼ fⱼ = k`, the parts taken with
/// multiplicity: the `p^{-ks}` coefficient of the unramified Euler factor.
pub fn norm_count(s: &SplittingType, k: u64) -> BigUint {
    let k = k as usize;
    let mut ways = vec![BigUint::zero(); k + 1];
    ways[0] = BigUint::one();
    for &f in s.parts() {
        let f = f as usize;
        for x in f..=k {
            let prev = ways[x - f].clone();
            ways[x] += prev;
        }
    }
    ways.swap_remove(k)
}

/// Given `c ∈ 𝒩(S1)` and `lcm(S1) = lcm(S2) = λ`, the element `d ∈ 𝒩(S2)`
/// nearest to `c` (smaller on ties); it satisfies `|c − d| < λ` because
/// `λℕ ⊆ 𝒩(S2)`.
pub fn ultra_coarse_bound_check(
    s1: &SplittingType,
    s2: &SplittingType,
    c: u64,
    cap: u64,
) -> Result<u64, SplittingError> {
    let lambda = s1.lcm();
    if lambda != s2.lcm() {
        return Err(SplittingError::PreconditionViolated(format!(
            "lcm {} != lcm {}",
            lambda,
            s2.lcm()
        )));
    }
    if c > cap || !numerical_set(s1, cap).contains(c) {
        return Err(SplittingError::PreconditionViolated(format!(
            "{} is not in the numerical set of {} up to {}",
            c, s1, cap
        )));
    }
    let target = numerical_set(s2, cap + lambda);
    let best = target
        .members
        .iter()
        .copied()
        .min_by_key(|&d| (d.abs_diff(c), d))
        .expect("0 is always a member");
    if best.abs_diff(c) < lambda {
        Ok(best)
    } else {
        Err(SplittingError::PreconditionViolated(format!(
            "no witness within {} of {}",
            lambda, c
        )))
    }
}

/// Default truncation `2·[G:H]²` for numerical-set comparisons.
pub fn default_cap(index: usize) -> u64 {
    2 * (index as u64) * (index as u64)
}

/// Whether the numerical sets agree on every class at `cap`.
pub fn numerical_sets_agree(
    g: &PermGroup,
    h1: &Subgroup,
    h2: &Subgroup,
    cap: u64,
) -> Result<bool, SplittingError> {
    let report = splitting_report(g, h1, h2)?;
    let mut cache: BTreeMap<SplittingType, NumericalSet> = BTreeMap::new();
    let mut get = |s: &SplittingType| -> NumericalSet {
        cache.entry(s.clone()).or_insert_with(|| numerical_set(s, cap)).clone()
    };
    Ok(report.rows.iter().all(|r| get(&r.s1).members == get(&r.s2).members))
}
