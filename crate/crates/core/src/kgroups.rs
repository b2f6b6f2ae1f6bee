//! Odd-index K-groups of number fields from signature and cyclotomic data.
//!
//! Field models are `ℚ` and abelian fields `ℚ(ζ_m)^H`, for which the Galois
//! group of every cyclotomic layer is a computable subgroup of `(ℤ/p^ν)×`.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::permgroup::FinAbGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KGroupError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("K-group index {0} is not odd and at least 3")]
    EvenIndex(u64),
    #[error("signature (r1, r2) = ({r1}, {r2}) is not supported for n = {n}")]
    UnsupportedSignature { r1: u64, r2: u64, n: u64 },
    #[error("invalid field model: {0}")]
    InvalidField(String),
    #[error("arithmetic overflow while computing {0}")]
    Overflow(String),
}

/// `ℚ`, or the fixed field of `H ≤ (ℤ/m)×` inside `ℚ(ζ_m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldModel {
    Rationals,
    Abelian { conductor: u64, subgroup: Vec<u64> },
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mult_order(x: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut k = 1;
    let mut y = x % m;
    while y != 1 {
        y = mul_mod(y, x, m);
        k += 1;
    }
    k
}

fn units(m: u64) -> impl Iterator<Item = u64> {
    (0..m.max(1)).filter(move |&x| x.gcd(&m) == 1 || m == 1)
}

impl FieldModel {
    /// The fixed field of the subgroup generated by `gens` in `(ℤ/m)×`.
    pub fn abelian(conductor: u64, gens: &[u64]) -> Result<Self, KGroupError> {
        if conductor == 0 {
            return Err(KGroupError::InvalidField("conductor must be positive".into()));
        }
        let m = conductor;
        let mut h: BTreeSet<u64> = BTreeSet::new();
        h.insert(1 % m);
        for &g in gens {
            if g.gcd(&m) != 1 && m > 1 {
                return Err(KGroupError::InvalidField(format!("{} is not a unit mod {}", g, m)));
            }
        }
        let mut frontier: Vec<u64> = h.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = mul_mod(x, g % m, m);
                if h.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(FieldModel::Abelian {
            conductor: m,
            subgroup: h.into_iter().collect(),
        })
    }

    /// Parses `Q` or `abelian:m=<m>;H=<h1>,<h2>,...`.
    pub fn parse(text: &str) -> Result<Self, KGroupError> {
        let t = text.trim();
        if t == "Q" {
            return Ok(FieldModel::Rationals);
        }
        let bad = || KGroupError::InvalidField(format!("cannot parse {:?}", text));
        let rest = t.strip_prefix("abelian:").ok_or_else(bad)?;
        let mut m = None;
        let mut gens = Vec::new();
        for part in rest.split(';') {
            let (key, val) = part.split_once('=').ok_or_else(bad)?;
            match key.trim() {
                "m" => m = Some(val.trim().parse::<u64>().map_err(|_| bad())?),
                "H" => {
                    for g in val.split(',').filter(|s| !s.trim().is_empty()) {
                        gens.push(g.trim().parse::<u64>().map_err(|_| bad())?);
                    }
                }
                _ => return Err(bad()),
            }
        }
        Self::abelian(m.ok_or_else(bad)?, &gens)
    }

    pub fn conductor(&self) -> u64 {
        match self {
            FieldModel::Rationals => 1,
            FieldModel::Abelian { conductor, .. } => *conductor,
        }
    }

    fn in_subgroup(&self, x: u64) -> bool {
        match self {
            FieldModel::Rationals => true,
            FieldModel::Abelian { conductor, subgroup } => subgroup.binary_search(&(x % conductor)).is_ok(),
        }
    }

    fn subgroup_order(&self) -> u64 {
        match self {
            FieldModel::Rationals => 1,
            FieldModel::Abelian { subgroup, .. } => subgroup.len() as u64,
        }
    }

    pub fn degree(&self) -> u64 {
        units(self.conductor()).count() as u64 / self.subgroup_order()
    }

    /// `(r₁, r₂)`.
    pub fn signature(&self) -> (u64, u64) {
        let m = self.conductor();
        let d = self.degree();
        if self.in_subgroup(m - 1) {
            (d, 0)
        } else {
            (0, d / 2)
        }
    }

    /// The same field presented with conductor `k·m` and the preimage of `H`.
    pub fn with_conductor_multiple(&self, k: u64) -> Result<Self, KGroupError> {
        let m = self.conductor();
        let big = m.checked_mul(k).ok_or_else(|| KGroupError::Overflow("conductor".into()))?;
        let subgroup: Vec<u64> = units(big).filter(|&x| self.in_subgroup(x)).collect();
        Ok(FieldModel::Abelian {
            conductor: big,
            subgroup,
        })
    }
}

impl fmt::Display for FieldModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldModel::Rationals => write!(f, "Q"),
            FieldModel::Abelian { conductor, subgroup } => {
                let h: Vec<String> = subgroup.iter().map(u64::to_string).collect();
                write!(f, "abelian:m={};H={}", conductor, h.join(","))
            }
        }
    }
}

/// Exponent of `Gal(F(ζ_{p^ν})/F)`.
pub fn cyclo_exponent(field: &FieldModel, p: u64, nu: u32) -> Result<u64, KGroupError> {
    if !is_prime(p) {
        return Err(KGroupError::NotPrime(p));
    }
    if nu == 0 {
        return Ok(1);
    }
    let pn = p.checked_pow(nu).ok_or_else(|| KGroupError::Overflow(format!("{}^{}", p, nu)))?;
    let modulus = field
        .conductor()
        .checked_mul(pn / field.conductor().gcd(&pn))
        .ok_or_else(|| KGroupError::Overflow("lcm of conductor and prime power".into()))?;
    let image: BTreeSet<u64> = units(modulus)
        .filter(|&x| field.in_subgroup(x))
        .map(|x| x % pn)
        .collect();
    Ok(image.iter().fold(1, |e, &y| e.lcm(&mult_order(y, pn))))
}

/// `w_i(F)` with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WInvariant {
    pub i: u64,
    pub factors: Vec<(u64, u32)>,
    pub value: u64,
}

pub fn w_invariant(field: &FieldModel, i: u64) -> Result<WInvariant, KGroupError> {
    assert!(i >= 1, "w_i needs i >= 1");
    let bound = i
        .checked_mul(field.degree())
        .ok_or_else(|| KGroupError::Overflow("prime bound".into()))?;
    let mut factors = Vec::new();
    let mut value: u64 = 1;
    for p in (2..=bound + 1).filter(|&p| is_prime(p)) {
        let mut nu = 0u32;
        let mut last = 1;
        loop {
            let e = cyclo_exponent(field, p, nu + 1)?;
            debug_assert!(e % last == 0, "exponent must grow along the tower");
            if i % e != 0 {
                break;
            }
            last = e;
            nu += 1;
        }
        if nu > 0 {
            value = p
                .checked_pow(nu)
                .and_then(|q| value.checked_mul(q))
                .ok_or_else(|| KGroupError::Overflow(format!("w_{}", i)))?;
            factors.push((p, nu));
        }
    }
    Ok(WInvariant { i, factors, value })
}

/// `K_n(F)` for odd `n ≥ 3`.
pub fn k_group(field: &FieldModel, n: u64) -> Result<FinAbGroup, KGroupError> {
    if n < 3 || n % 2 == 0 {
        return Err(KGroupError::EvenIndex(n));
    }
    let (r1, r2) = field.signature();
    let w = w_invariant(field, (n + 1) / 2)?.value;
    let rank = |r: u64| r as usize;
    Ok(match n % 8 {
        1 => FinAbGroup::from_cyclic_factors(rank(r1 + r2), &[w]),
        3 => {
            if r1 == 0 {
                return Err(KGroupError::UnsupportedSignature { r1, r2, n });
            }
            let mut orders = vec![2u64; (r1 - 1) as usize];
            orders.push(2 * w);
            FinAbGroup::from_cyclic_factors(rank(r2), &orders)
        }
        5 => FinAbGroup::from_cyclic_factors(rank(r1 + r2), &[w / 2]),
        _ => FinAbGroup::from_cyclic_factors(rank(r2), &[w]),
    })
}

pub fn compare_k_groups(f1: &FieldModel, f2: &FieldModel, ns: &[u64]) -> Result<bool, KGroupError> {
    for &n in ns {
        if k_group(f1, n)? != k_group(f2, n)? {
            return Ok(false);
        }
    }
    Ok(true)
}
