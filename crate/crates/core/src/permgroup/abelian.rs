use std::collections::BTreeMap;
use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{CosetSpace, PermGroup, PermGroupError, Permutation, Subgroup};
use crate::lattice::IntMat;

/// A finitely generated abelian group `ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` with
/// `2 ≤ d₁ | d₂ | … | d_k`.
///
/// Coordinates are the torsion coordinates in invariant-factor order,
/// followed by `free_rank` free coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub free_rank: usize,
    pub invariant_factors: Vec<u64>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup {
            free_rank: 0,
            invariant_factors: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_factors(0, &[n])
    }

    /// Normalizes an arbitrary direct sum of cyclic groups; orders of 0
    /// count as free summands and orders of 1 vanish.
    pub fn from_cyclic_factors(free_rank: usize, orders: &[u64]) -> Self {
        let mut free = free_rank;
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &d in orders {
            if d == 0 {
                free += 1;
                continue;
            }
            for (p, e) in factorize(d) {
                by_prime.entry(p).or_default().push(p.pow(e));
            }
        }
        let k = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; k];
        for powers in by_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, &q) in powers.iter().enumerate() {
                // largest powers go to the last factor
                factors[k - 1 - slot] *= q;
            }
        }
        factors.retain(|&d| d > 1);
        FinAbGroup {
            free_rank: free,
            invariant_factors: factors,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    pub fn num_coords(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    /// Modulus per coordinate; 0 marks a free coordinate.
    pub fn moduli(&self) -> Vec<u64> {
        let mut m = self.invariant_factors.clone();
        m.extend(std::iter::repeat(0).take(self.free_rank));
        m
    }

    pub fn reduce(&self, v: &mut [i64]) {
        for (x, &d) in v.iter_mut().zip(self.moduli().iter()) {
            if d > 0 {
                *x = x.rem_euclid(d as i64);
            }
        }
    }

    /// All elements as reduced coordinate vectors (finite groups only).
    pub fn elements(&self) -> Vec<Vec<i64>> {
        assert!(self.is_finite(), "cannot enumerate an infinite group");
        let mut out = vec![Vec::new()];
        for &d in &self.invariant_factors {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d as i64).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// `self ⊗ ℤ/k`.
    pub fn tensor_cyclic(&self, k: u64) -> FinAbGroup {
        let mut orders: Vec<u64> = self.invariant_factors.iter().map(|&d| d.gcd(&k)).collect();
        orders.extend(std::iter::repeat(k).take(self.free_rank));
        FinAbGroup::from_cyclic_factors(0, &orders)
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{}", d)));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A homomorphism between finitely generated abelian groups in coordinates:
/// column `j` is the image of the `j`-th source generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbHom {
    pub source: FinAbGroup,
    pub target: FinAbGroup,
    /// `target.num_coords()` rows by `source.num_coords()` columns, reduced.
    pub matrix: Vec<Vec<i64>>,
}

impl AbHom {
    pub fn from_columns(source: FinAbGroup, target: FinAbGroup, columns: Vec<Vec<i64>>) -> Self {
        let rows = target.num_coords();
        let cols = source.num_coords();
        let mut matrix = vec![vec![0i64; cols]; rows];
        for (j, col) in columns.into_iter().enumerate() {
            for (i, x) in col.into_iter().enumerate() {
                matrix[i][j] = x;
            }
        }
        let mut h = AbHom {
            source,
            target,
            matrix,
        };
        h.normalize();
        h
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        Self::scalar(g, 1)
    }

    pub fn scalar(g: &FinAbGroup, k: i64) -> Self {
        let n = g.num_coords();
        let cols = (0..n)
            .map(|j| (0..n).map(|i| if i == j { k } else { 0 }).collect())
            .collect();
        Self::from_columns(g.clone(), g.clone(), cols)
    }

    pub fn zero(source: &FinAbGroup, target: &FinAbGroup) -> Self {
        let cols = vec![vec![0; target.num_coords()]; source.num_coords()];
        Self::from_columns(source.clone(), target.clone(), cols)
    }

    fn normalize(&mut self) {
        let moduli = self.target.moduli();
        for (row, &d) in self.matrix.iter_mut().zip(&moduli) {
            if d > 0 {
                for x in row.iter_mut() {
                    *x = x.rem_euclid(d as i64);
                }
            }
        }
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.matrix.iter().map(|row| row[j]).collect()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect();
        self.target.reduce(&mut out);
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AbHom) -> AbHom {
        assert_eq!(self.source, other.target, "composition of incompatible maps");
        let cols = (0..other.source.num_coords())
            .map(|j| self.apply(&other.column(j)))
            .collect();
        AbHom::from_columns(other.source.clone(), self.target.clone(), cols)
    }

    pub fn scale(&self, k: i64) -> AbHom {
        let cols = (0..self.source.num_coords())
            .map(|j| self.column(j).into_iter().map(|x| x * k).collect())
            .collect();
        AbHom::from_columns(self.source.clone(), self.target.clone(), cols)
    }

    /// Every relation `d_j e_j = 0` of the source maps to zero.
    pub fn is_well_defined(&self) -> bool {
        self.source.moduli().iter().enumerate().all(|(j, &d)| {
            d == 0 || {
                let col: Vec<i64> = self.column(j).into_iter().map(|x| x * d as i64).collect();
                let mut c = col;
                self.target.reduce(&mut c);
                c.iter().all(|&x| x == 0)
            }
        })
    }

    /// Bijectivity between finite groups, by kernel enumeration.
    pub fn is_isomorphism(&self) -> bool {
        if !self.source.is_finite() || self.source != self.target || !self.is_well_defined() {
            return false;
        }
        self.source
            .elements()
            .iter()
            .filter(|v| self.apply(v).iter().all(|&x| x == 0))
            .count()
            == 1
    }

    pub fn inverse(&self) -> Option<AbHom> {
        if !self.is_isomorphism() {
            return None;
        }
        let elems = self.source.elements();
        let n = self.source.num_coords();
        let cols = (0..n)
            .map(|j| {
                let mut e = vec![0i64; n];
                e[j] = 1;
                elems
                    .iter()
                    .find(|v| self.apply(v) == e)
                    .cloned()
                    .expect("bijection")
            })
            .collect();
        Some(AbHom::from_columns(self.target.clone(), self.source.clone(), cols))
    }

    /// The induced map on `− ⊗ ℤ/k`.
    pub fn tensor_cyclic(&self, k: u64) -> AbHom {
        let src = self.source.tensor_cyclic(k);
        let tgt = self.target.tensor_cyclic(k);
        let keep = |g: &FinAbGroup, t: &FinAbGroup| -> Vec<usize> {
            // Coordinates whose modulus survives; leading ones vanish.
            let m = g.moduli();
            let drop = m.len() - t.num_coords();
            (drop..m.len()).collect()
        };
        let src_keep = keep(&self.source, &src);
        let tgt_keep = keep(&self.target, &tgt);
        let cols = src_keep
            .iter()
            .map(|&j| tgt_keep.iter().map(|&i| self.matrix[i][j]).collect())
            .collect();
        AbHom::from_columns(src, tgt, cols)
    }
}

/// `G / [G, G]` with an explicit projection from elements to coordinates.
#[derive(Clone, Debug)]
pub struct Abelianization {
    group: PermGroup,
    abelian: FinAbGroup,
    derived: Subgroup,
    cosets: CosetSpace,
    coset_coords: Vec<Vec<i64>>,
    basis_lifts: Vec<Permutation>,
}

impl Abelianization {
    pub fn new(group: PermGroup) -> Self {
        let derived = derived_subgroup(&group);
        let cosets = group.coset_action(&derived).expect("derived subgroup lies in the group");
        let k = group.generators().len();
        let gen_idx: Vec<usize> = group
            .generators()
            .iter()
            .map(|g| group.index_of(g).unwrap())
            .collect();

        // Spanning tree of the Cayley graph of the quotient gives each coset a
        // word; non-tree edges give a generating set of relations.
        let nq = cosets.len();
        let mut words: Vec<Option<Vec<i64>>> = vec![None; nq];
        words[0] = Some(vec![0; k]);
        let mut relations: Vec<Vec<i64>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            let wc = words[c].clone().unwrap();
            for (s, &si) in gen_idx.iter().enumerate() {
                let d = cosets.act_idx(&group, si, c);
                let mut w = wc.clone();
                w[s] += 1;
                match &words[d] {
                    None => {
                        words[d] = Some(w);
                        queue.push_back(d);
                    }
                    Some(wd) => {
                        let rel: Vec<i64> = w.iter().zip(wd).map(|(a, b)| a - b).collect();
                        if rel.iter().any(|&x| x != 0) {
                            relations.push(rel);
                        }
                    }
                }
            }
        }

        let (abelian, coset_coords) = if k == 0 || nq == 1 {
            (FinAbGroup::trivial(), vec![Vec::new(); nq])
        } else {
            let rel = IntMat::from_fn(k, relations.len().max(1), |i, j| {
                relations.get(j).map_or(BigInt::from(0), |r| BigInt::from(r[i]))
            });
            let h = rel.hnf();
            let square = IntMat::from_fn(k, k, |i, j| h[(i, j)].clone());
            let smith = square.smith();
            let diag: Vec<u64> = (0..k)
                .map(|i| smith.diagonal[(i, i)].to_u64().expect("finite quotient"))
                .collect();
            let kept: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
            let abelian = FinAbGroup {
                free_rank: 0,
                invariant_factors: kept.iter().map(|&i| diag[i]).collect(),
            };
            let u: Vec<Vec<i64>> = (0..k)
                .map(|i| (0..k).map(|j| smith.left[(i, j)].to_i64().expect("small transform")).collect())
                .collect();
            let coords = words
                .iter()
                .map(|w| {
                    let w = w.as_ref().unwrap();
                    kept.iter()
                        .map(|&i| {
                            let d = diag[i] as i128;
                            let s: i128 = (0..k).map(|j| u[i][j] as i128 * w[j] as i128).sum();
                            s.rem_euclid(d) as i64
                        })
                        .collect()
                })
                .collect();
            (abelian, coords)
        };

        let basis_lifts = (0..abelian.num_coords())
            .map(|j| {
                let c = coset_coords
                    .iter()
                    .position(|v| v.iter().enumerate().all(|(i, &x)| x == (i == j) as i64))
                    .expect("coordinate map is onto");
                cosets.reps[c].clone()
            })
            .collect();

        Abelianization {
            group,
            abelian,
            derived,
            cosets,
            coset_coords,
            basis_lifts,
        }
    }

    pub fn of_subgroup(h: &Subgroup) -> Self {
        Self::new(h.to_group())
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn abelian(&self) -> &FinAbGroup {
        &self.abelian
    }

    pub fn derived(&self) -> &Subgroup {
        &self.derived
    }

    /// Elements mapping to the standard generators of the abelian group.
    pub fn basis_lifts(&self) -> &[Permutation] {
        &self.basis_lifts
    }

    pub fn project(&self, p: &Permutation) -> Option<Vec<i64>> {
        self.group
            .index_of(p)
            .map(|i| self.coset_coords[self.cosets.coset_of[i]].clone())
    }

    pub fn project_idx(&self, i: usize) -> &[i64] {
        &self.coset_coords[self.cosets.coset_of[i]]
    }
}

/// Normal closure of the commutators of the generators.
pub fn derived_subgroup(g: &PermGroup) -> Subgroup {
    let gens = g.generators();
    let mut comms: Vec<Permutation> = Vec::new();
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i + 1..] {
            let c = a.compose(b).compose(&a.inverse()).compose(&b.inverse());
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    let mut d = g.subgroup(&comms).expect("commutators lie in the group");
    loop {
        let mut extra = Vec::new();
        for s in gens {
            for x in d.generators() {
                let y = s.conjugate(x);
                if !d.contains(g, &y) && !extra.contains(&y) {
                    extra.push(y);
                }
            }
        }
        if extra.is_empty() {
            return d;
        }
        let mut all = d.generators().to_vec();
        all.extend(extra);
        d = g.subgroup(&all).expect("conjugates lie in the group");
    }
}

pub fn abelianization(g: &PermGroup) -> Abelianization {
    Abelianization::new(g.clone())
}

/// Transfer `H₁(G) → H₁(H)` from precomputed pieces: `g r_i = r_j h_i`
/// over the transversal of `cosets`, image `Σ_i [h_i]`.
pub fn transfer_map(g: &PermGroup, ab_g: &Abelianization, cosets: &CosetSpace, ab_h: &Abelianization) -> AbHom {
    let cols = ab_g
        .basis_lifts()
        .iter()
        .map(|x| {
            let mut acc = vec![0i64; ab_h.abelian().num_coords()];
            for r in &cosets.reps {
                let y = x.compose(r);
                let j = cosets.coset_of[g.index_of(&y).expect("element of G")];
                let h = cosets.reps[j].inverse().compose(&y);
                let v = ab_h.project(&h).expect("transversal factor lies in H");
                for (a, b) in acc.iter_mut().zip(v) {
                    *a += b;
                }
            }
            acc
        })
        .collect();
    AbHom::from_columns(ab_g.abelian().clone(), ab_h.abelian().clone(), cols)
}

/// Map `H₁(H) → H₁(G)` induced by inclusion.
pub fn inclusion_map(ab_h: &Abelianization, ab_g: &Abelianization) -> AbHom {
    let cols = ab_h
        .basis_lifts()
        .iter()
        .map(|x| ab_g.project(x).expect("subgroup element lies in G"))
        .collect();
    AbHom::from_columns(ab_h.abelian().clone(), ab_g.abelian().clone(), cols)
}

pub fn transfer(g: &PermGroup, h: &Subgroup) -> Result<AbHom, PermGroupError> {
    let cosets = g.coset_action(h)?;
    Ok(transfer_map(g, &abelianization(g), &cosets, &Abelianization::of_subgroup(h)))
}

pub fn inclusion_induced(h: &Subgroup, g: &PermGroup) -> Result<AbHom, PermGroupError> {
    g.check_subgroup(h)?;
    Ok(inclusion_map(&Abelianization::of_subgroup(h), &abelianization(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::catalog;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn normalization_of_cyclic_sums() {
        assert_eq!(FinAbGroup::from_cyclic_factors(0, &[2, 3]).invariant_factors, vec![6]);
        assert_eq!(FinAbGroup::from_cyclic_factors(0, &[4, 6]).invariant_factors, vec![2, 12]);
        assert_eq!(FinAbGroup::from_cyclic_factors(1, &[1, 0]).free_rank, 2);
        assert!(FinAbGroup::from_cyclic_factors(0, &[1, 1]).is_trivial());
        assert_eq!(FinAbGroup::from_cyclic_factors(1, &[2]).to_string(), "Z x Z/2");
        assert_eq!(FinAbGroup::trivial().to_string(), "0");
        assert_eq!(FinAbGroup::from_cyclic_factors(2, &[]).to_string(), "Z^2");
    }

    #[test]
    fn tensor_with_cyclic() {
        let g = FinAbGroup::from_cyclic_factors(0, &[2, 12]);
        assert_eq!(g.tensor_cyclic(3), FinAbGroup::cyclic(3));
        assert_eq!(g.tensor_cyclic(5), FinAbGroup::trivial());
        assert_eq!(g.tensor_cyclic(4), FinAbGroup::from_cyclic_factors(0, &[2, 4]));
    }

    #[test]
    fn abelianization_examples() {
        for n in [1u32, 2, 5, 12] {
            let ab = abelianization(&catalog::cyclic(n as usize));
            assert_eq!(ab.abelian(), &FinAbGroup::cyclic(n as u64));
        }
        assert_eq!(abelianization(&catalog::symmetric(3)).abelian(), &FinAbGroup::cyclic(2));
        let a5 = catalog::alternating(5);
        let ab = abelianization(&a5);
        assert!(ab.abelian().is_trivial());
        assert_eq!(ab.derived().order(), 60);
        let v4 = catalog::klein_four();
        assert_eq!(abelianization(&v4).abelian(), &FinAbGroup::from_cyclic_factors(0, &[2, 2]));
        let q8 = catalog::quaternion();
        assert_eq!(abelianization(&q8).abelian(), &FinAbGroup::from_cyclic_factors(0, &[2, 2]));
    }

    #[test]
    fn projection_is_homomorphism() {
        let g = catalog::dihedral(6);
        let ab = abelianization(&g);
        for a in g.elements() {
            for b in g.elements() {
                let mut sum: Vec<i64> = ab
                    .project(a)
                    .unwrap()
                    .iter()
                    .zip(ab.project(b).unwrap())
                    .map(|(x, y)| x + y)
                    .collect();
                ab.abelian().reduce(&mut sum);
                assert_eq!(ab.project(&(a * b)).unwrap(), sum);
            }
        }
    }

    #[test]
    fn transfer_examples() {
        let c4 = catalog::cyclic(4);
        let whole = c4.whole();
        assert_eq!(transfer(&c4, &whole).unwrap(), AbHom::identity(&FinAbGroup::cyclic(4)));
        let h = c4.subgroup(&[p(4, "(0 2)(1 3)")]).unwrap();
        let t = transfer(&c4, &h).unwrap();
        assert_eq!(t.source, FinAbGroup::cyclic(4));
        assert_eq!(t.target, FinAbGroup::cyclic(2));
        // The generator of Z/4 maps to its square, the generator of the order-2 subgroup.
        assert_eq!(t.matrix, vec![vec![1]]);
    }

    #[test]
    fn inclusion_examples() {
        let s3 = catalog::symmetric(3);
        let whole = s3.whole();
        assert_eq!(inclusion_induced(&whole, &s3).unwrap(), AbHom::identity(&FinAbGroup::cyclic(2)));
        let triv = s3.trivial_subgroup();
        let z = inclusion_induced(&triv, &s3).unwrap();
        assert_eq!(z, AbHom::zero(&FinAbGroup::trivial(), &FinAbGroup::cyclic(2)));
        let a3 = s3.subgroup(&[p(3, "(0 1 2)")]).unwrap();
        let i = inclusion_induced(&a3, &s3).unwrap();
        assert_eq!(i, AbHom::zero(&FinAbGroup::cyclic(3), &FinAbGroup::cyclic(2)));
    }

    #[test]
    fn hom_inverse_and_tensor() {
        let g = FinAbGroup::cyclic(5);
        let two = AbHom::scalar(&g, 2);
        assert!(two.is_isomorphism());
        assert_eq!(two.compose(&two.inverse().unwrap()), AbHom::identity(&g));
        assert!(!AbHom::scalar(&FinAbGroup::cyclic(4), 2).is_isomorphism());
        let g = FinAbGroup::from_cyclic_factors(0, &[2, 6]);
        let t = AbHom::scalar(&g, 5).tensor_cyclic(3);
        assert_eq!(t, AbHom::scalar(&FinAbGroup::cyclic(3), 2));
    }
}
