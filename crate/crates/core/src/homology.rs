//! Degree-one homology of subgroups: transfer/inclusion compatibility of a
//! correspondence `φ: H₁(H1) → H₁(H2)`, the finite-coefficient squares over
//! a normal subgroup, and normal cores of corresponding subgroups.
//!
//! Transfer plays the role of restriction and inclusion that of
//! corestriction.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::permgroup::{
    catalog, inclusion_map, transfer_map, AbHom, Abelianization, FinAbGroup, PermGroup, PermGroupError, Permutation,
    Subgroup,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("subgroup indices differ: {0} vs {1}")]
    IndexMismatch(usize, usize),
    #[error("invalid correspondence: {0}")]
    InvalidCorrespondence(String),
    #[error("subgroup is not normal in the group")]
    NotNormal,
    #[error("normal subgroup is not contained in both subgroups")]
    NotContained,
    #[error("coefficient order {k} is not coprime to the index {m}")]
    NotCoprime { k: u64, m: usize },
    #[error("subgroup index {t} in H1 is not coprime to the index {m}")]
    CoprimalityViolated { t: u64, m: usize },
    #[error(transparent)]
    Group(#[from] PermGroupError),
}

/// `G` together with its abelianization.
#[derive(Clone, Debug)]
pub struct GroupHomology<'g> {
    group: &'g PermGroup,
    ab: Abelianization,
}

impl<'g> GroupHomology<'g> {
    pub fn new(group: &'g PermGroup) -> Self {
        GroupHomology {
            group,
            ab: Abelianization::new(group.clone()),
        }
    }

    pub fn group(&self) -> &'g PermGroup {
        self.group
    }

    pub fn abelianization(&self) -> &Abelianization {
        &self.ab
    }
}

/// `H ≤ G` with `H₁(H)` and the transfer and inclusion maps against `H₁(G)`.
#[derive(Clone, Debug)]
pub struct SubgroupHomology {
    subgroup: Subgroup,
    index: usize,
    ab: Abelianization,
    transfer: AbHom,
    inclusion: AbHom,
}

impl SubgroupHomology {
    pub fn new(gh: &GroupHomology<'_>, h: &Subgroup) -> Result<Self, HomologyError> {
        let g = gh.group;
        let cosets = g.coset_action(h)?;
        let ab = Abelianization::of_subgroup(h);
        let transfer = transfer_map(g, &gh.ab, &cosets, &ab);
        let inclusion = inclusion_map(&ab, &gh.ab);
        Ok(SubgroupHomology {
            subgroup: h.clone(),
            index: cosets.len(),
            ab,
            transfer,
            inclusion,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn h1(&self) -> &FinAbGroup {
        self.ab.abelian()
    }

    pub fn abelianization(&self) -> &Abelianization {
        &self.ab
    }

    pub fn transfer(&self) -> &AbHom {
        &self.transfer
    }

    pub fn inclusion(&self) -> &AbHom {
        &self.inclusion
    }

    /// `inclusion ∘ transfer = [G:H]` on `H₁(G)`.
    pub fn index_identity_holds(&self) -> bool {
        self.inclusion.compose(&self.transfer) == AbHom::scalar(&self.transfer.source, self.index as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ConjugationBy(String),
    Identity,
    UserSupplied,
}

/// An isomorphism `φ: H₁(H1) → H₁(H2)` for subgroups of equal index.
#[derive(Clone, Debug)]
pub struct Correspondence<'a> {
    gh: &'a GroupHomology<'a>,
    h1: &'a SubgroupHomology,
    h2: &'a SubgroupHomology,
    phi: AbHom,
    provenance: Provenance,
}

impl<'a> Correspondence<'a> {
    fn check_index(h1: &SubgroupHomology, h2: &SubgroupHomology) -> Result<(), HomologyError> {
        if h1.index != h2.index {
            Err(HomologyError::IndexMismatch(h1.index, h2.index))
        } else {
            Ok(())
        }
    }

    pub fn identity(gh: &'a GroupHomology<'a>, h: &'a SubgroupHomology) -> Self {
        Correspondence {
            gh,
            h1: h,
            h2: h,
            phi: AbHom::identity(h.h1()),
            provenance: Provenance::Identity,
        }
    }

    /// The map induced by `h ↦ x h x⁻¹`; requires `H2 = x H1 x⁻¹`.
    pub fn conjugation(
        gh: &'a GroupHomology<'a>,
        h1: &'a SubgroupHomology,
        h2: &'a SubgroupHomology,
        x: &Permutation,
    ) -> Result<Self, HomologyError> {
        Self::check_index(h1, h2)?;
        let conj = gh.group.conjugate_subgroup(&h1.subgroup, x)?;
        if conj.members() != h2.subgroup.members() {
            return Err(HomologyError::InvalidCorrespondence(format!(
                "conjugation by {} does not carry H1 onto H2",
                x
            )));
        }
        let cols = h1
            .ab
            .basis_lifts()
            .iter()
            .map(|l| h2.ab.project(&x.conjugate(l)).expect("conjugate lies in H2"))
            .collect();
        Ok(Correspondence {
            gh,
            h1,
            h2,
            phi: AbHom::from_columns(h1.h1().clone(), h2.h1().clone(), cols),
            provenance: Provenance::ConjugationBy(x.to_string()),
        })
    }

    pub fn user_supplied(
        gh: &'a GroupHomology<'a>,
        h1: &'a SubgroupHomology,
        h2: &'a SubgroupHomology,
        phi: AbHom,
    ) -> Result<Self, HomologyError> {
        Self::check_index(h1, h2)?;
        if &phi.source != h1.h1() || &phi.target != h2.h1() {
            return Err(HomologyError::InvalidCorrespondence(
                "map does not go from H1(H1) to H1(H2)".into(),
            ));
        }
        if !phi.is_isomorphism() {
            return Err(HomologyError::InvalidCorrespondence("map is not an isomorphism".into()));
        }
        Ok(Correspondence {
            gh,
            h1,
            h2,
            phi,
            provenance: Provenance::UserSupplied,
        })
    }

    pub fn phi(&self) -> &AbHom {
        &self.phi
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn index(&self) -> usize {
        self.h1.index
    }

    pub fn h1(&self) -> &SubgroupHomology {
        self.h1
    }

    pub fn h2(&self) -> &SubgroupHomology {
        self.h2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    /// `φ ∘ transfer(G, H1) = transfer(G, H2)`.
    pub transfer_leg: bool,
    /// `inclusion(H2, G) ∘ φ = inclusion(H1, G)`.
    pub inclusion_leg: bool,
}

impl DiagramReport {
    pub fn commutes(&self) -> bool {
        self.transfer_leg && self.inclusion_leg
    }
}

pub fn diagram_check(corr: &Correspondence<'_>) -> DiagramReport {
    DiagramReport {
        transfer_leg: corr.phi.compose(&corr.h1.transfer) == corr.h2.transfer,
        inclusion_leg: corr.h2.inclusion.compose(&corr.phi) == corr.h1.inclusion,
    }
}

/// The two squares over `N` after tensoring with `ℤ/k`, with and without
/// multiplication by `m = [G:Hᵢ]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModqReport {
    pub k: u64,
    pub m: usize,
    pub coprime: bool,
    /// `φ ∘ Cor^{H1}_N = Cor^{H2}_N`.
    pub cor_square: bool,
    /// `Res^{H1}_N = Res^{H2}_N ∘ φ`.
    pub res_square: bool,
    pub cor_square_times_m: bool,
    pub res_square_times_m: bool,
}

impl ModqReport {
    pub fn commutes(&self) -> bool {
        self.cor_square && self.res_square
    }
}

struct NormalPiece {
    cor: AbHom,
    res: AbHom,
}

fn normal_piece(sh: &SubgroupHomology, gens: &[Permutation]) -> NormalPiece {
    let hg = sh.ab.group();
    let n = hg.subgroup(gens).expect("N lies in H");
    let ab_n = Abelianization::of_subgroup(&n);
    let cosets = hg.coset_action(&n).expect("N is a subgroup of H");
    NormalPiece {
        cor: inclusion_map(&ab_n, &sh.ab),
        res: transfer_map(hg, &sh.ab, &cosets, &ab_n),
    }
}

/// Evaluates both squares without checking the hypotheses on `N` and `k`
/// beyond containment.
pub fn modq_evaluate(corr: &Correspondence<'_>, n: &Subgroup, k: u64) -> Result<ModqReport, HomologyError> {
    let g = corr.gh.group;
    g.check_subgroup(n)?;
    if !n.is_subset_of(&corr.h1.subgroup) || !n.is_subset_of(&corr.h2.subgroup) {
        return Err(HomologyError::NotContained);
    }
    let gens = n.generators().to_vec();
    let p1 = normal_piece(corr.h1, &gens);
    let p2 = normal_piece(corr.h2, &gens);
    let phi = corr.phi.tensor_cyclic(k);
    let (cor1, cor2) = (p1.cor.tensor_cyclic(k), p2.cor.tensor_cyclic(k));
    let (res1, res2) = (p1.res.tensor_cyclic(k), p2.res.tensor_cyclic(k));
    let m = corr.index();
    let lhs_cor = phi.compose(&cor1);
    let rhs_res = res2.compose(&phi);
    Ok(ModqReport {
        k,
        m,
        coprime: (m as u64).gcd(&k) == 1,
        cor_square: lhs_cor == cor2,
        res_square: res1 == rhs_res,
        cor_square_times_m: lhs_cor.scale(m as i64) == cor2.scale(m as i64),
        res_square_times_m: res1.scale(m as i64) == rhs_res.scale(m as i64),
    })
}

/// [`modq_evaluate`] after checking that `N ⊴ G` and `gcd(k, m) = 1`.
pub fn modq_check(corr: &Correspondence<'_>, n: &Subgroup, k: u64) -> Result<ModqReport, HomologyError> {
    let g = corr.gh.group;
    if !g.is_normal(n)? {
        return Err(HomologyError::NotNormal);
    }
    let m = corr.index();
    if k == 0 || (m as u64).gcd(&k) != 1 {
        return Err(HomologyError::NotCoprime { k, m });
    }
    modq_evaluate(corr, n, k)
}

/// Subgroups `Uᵢ ≤ H₁(Hᵢ)` of index `t` with `φ(U1) = U2`, and their
/// preimages `Γᵢ′ ≤ Hᵢ`.
#[derive(Clone, Debug)]
pub struct CorrespondingSubgroups {
    pub t: u64,
    pub u1: Vec<Vec<i64>>,
    pub u2: Vec<Vec<i64>>,
    pub gamma1: Subgroup,
    pub gamma2: Subgroup,
}

/// Every subgroup of a finite abelian group, as sorted element lists.
pub fn abelian_subgroups(a: &FinAbGroup) -> Vec<Vec<Vec<i64>>> {
    let elems = a.elements();
    let add = |x: &[i64], y: &[i64]| -> Vec<i64> {
        let mut s: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
        a.reduce(&mut s);
        s
    };
    let cyclic: Vec<BTreeSet<Vec<i64>>> = elems
        .iter()
        .map(|e| {
            let mut set = BTreeSet::new();
            let mut cur = vec![0i64; e.len()];
            while set.insert(cur.clone()) {
                cur = add(&cur, e);
            }
            set
        })
        .collect();
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::new();
    let mut all: Vec<BTreeSet<Vec<i64>>> = Vec::new();
    for c in &cyclic {
        if seen.insert(c.iter().cloned().collect()) {
            all.push(c.clone());
        }
    }
    let mut i = 0;
    while i < all.len() {
        for c in &cyclic {
            if c.is_subset(&all[i]) {
                continue;
            }
            let sum: BTreeSet<Vec<i64>> = all[i].iter().flat_map(|x| c.iter().map(move |y| add(x, y))).collect();
            let key: Vec<Vec<i64>> = sum.iter().cloned().collect();
            if seen.insert(key) {
                all.push(sum);
            }
        }
        i += 1;
    }
    let mut out: Vec<Vec<Vec<i64>>> = all.into_iter().map(|s| s.into_iter().collect()).collect();
    out.sort_by(|x, y| (x.len(), x).cmp(&(y.len(), y)));
    out
}

fn preimage(g: &PermGroup, sh: &SubgroupHomology, u: &HashSet<Vec<i64>>) -> Subgroup {
    let members = sh
        .subgroup
        .members()
        .iter()
        .copied()
        .filter(|&i| u.contains(&sh.ab.project(g.element(i)).expect("member of H")))
        .collect();
    g.subgroup_from_closed(members)
}

pub fn corresponding_subgroups(corr: &Correspondence<'_>, t: u64) -> Vec<CorrespondingSubgroups> {
    let a1 = corr.h1.h1();
    let order = match a1.order() {
        Some(o) => o,
        None => return Vec::new(),
    };
    if t == 0 || order % t != 0 {
        return Vec::new();
    }
    let g = corr.gh.group;
    let size = (order / t) as usize;
    abelian_subgroups(a1)
        .into_iter()
        .filter(|u| u.len() == size)
        .filter_map(|u1| {
            let image: BTreeSet<Vec<i64>> = u1.iter().map(|x| corr.phi.apply(x)).collect();
            if image.len() != size {
                return None;
            }
            let u2: Vec<Vec<i64>> = image.into_iter().collect();
            let s1: HashSet<Vec<i64>> = u1.iter().cloned().collect();
            let s2: HashSet<Vec<i64>> = u2.iter().cloned().collect();
            Some(CorrespondingSubgroups {
                t,
                gamma1: preimage(g, corr.h1, &s1),
                gamma2: preimage(g, corr.h2, &s2),
                u1,
                u2,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GthmReport {
    pub t: u64,
    pub core_order: usize,
    pub cores_equal: bool,
    /// `φ(π₁(n)) = π₂(n)` in `H₁(H2)` for every `n` in both cores.
    pub projections_agree: bool,
}

impl GthmReport {
    pub fn verdict(&self) -> bool {
        self.cores_equal
    }
}

pub fn gthm_check(corr: &Correspondence<'_>, cs: &CorrespondingSubgroups) -> Result<GthmReport, HomologyError> {
    let m = corr.index();
    if (m as u64).gcd(&cs.t) != 1 {
        return Err(HomologyError::CoprimalityViolated { t: cs.t, m });
    }
    let g = corr.gh.group;
    let c1 = g.normal_core(&cs.gamma1)?;
    let c2 = g.normal_core(&cs.gamma2)?;
    let projections_agree = c1.members().iter().filter(|&&i| c2.contains_index(i)).all(|&i| {
        let x = g.element(i);
        let v1 = corr.h1.ab.project(x).expect("core lies in H1");
        let v2 = corr.h2.ab.project(x).expect("core lies in H2");
        corr.phi.apply(&v1) == v2
    });
    Ok(GthmReport {
        t: cs.t,
        core_order: c1.order(),
        cores_equal: c1.members() == c2.members(),
        projections_agree,
    })
}

pub fn h1_isomorphic(g: &PermGroup, h1: &Subgroup, h2: &Subgroup) -> Result<bool, HomologyError> {
    g.check_subgroup(h1)?;
    g.check_subgroup(h2)?;
    Ok(Abelianization::of_subgroup(h1).abelian() == Abelianization::of_subgroup(h2).abelian())
}

/// Groups of order at most `max_order` used by [`homology_sweep`].
pub fn sweep_corpus(max_order: usize) -> Vec<(String, PermGroup)> {
    let mut out: Vec<(String, PermGroup)> = Vec::new();
    for n in [2usize, 3, 4, 5, 6, 7, 8, 9, 10, 12] {
        out.push((format!("C{}", n), catalog::cyclic(n)));
    }
    for orders in [&[2usize, 2][..], &[2, 4], &[2, 2, 2], &[3, 3], &[2, 6]] {
        let name = orders.iter().map(|o| format!("C{}", o)).collect::<Vec<_>>().join("xC");
        let name = name.replace("xCC", "xC");
        out.push((name, catalog::abelian(orders)));
    }
    out.push(("S3".into(), catalog::symmetric(3)));
    for n in [4usize, 5, 6, 7, 8, 10, 12] {
        out.push((format!("D{}", n), catalog::dihedral(n)));
    }
    out.push(("Q8".into(), catalog::quaternion()));
    out.push(("A4".into(), catalog::alternating(4)));
    out.push(("S4".into(), catalog::symmetric(4)));
    out.push(("A5".into(), catalog::alternating(5)));
    out.push(("S5".into(), catalog::symmetric(5)));
    out.retain(|(_, g)| g.order() <= max_order);
    out
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct GroupSweep {
    pub name: String,
    pub order: usize,
    pub subgroups: usize,
    pub index_identity_checked: usize,
    pub index_identity_failures: usize,
    pub correspondences: usize,
    pub diagram_failures: usize,
    pub gthm_checks: usize,
    pub gthm_failures: usize,
    /// Observations only: cases where `φ(π₁(n)) ≠ π₂(n)` on the common core.
    pub projection_disagreements: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema: u32,
    pub max_order: usize,
    pub index_identity_max_order: usize,
    pub groups: Vec<GroupSweep>,
    pub correspondences: usize,
    pub gthm_checks: usize,
    pub failures: usize,
    pub passed: bool,
}

const MAX_LISTED_FAILURES: usize = 20;

fn divisors_coprime_to(order: u64, m: usize) -> Vec<u64> {
    (1..=order).filter(|t| order % t == 0 && t.gcd(&(m as u64)) == 1).collect()
}

/// Sweeps one group: the index identity on every subgroup (when
/// `|G| ≤ identity_max_order`), and every conjugation correspondence
/// through `diagram_check` and `gthm_check` at every admissible `t`.
///
/// `φ_x` depends only on the coset `x·H1`, since inner automorphisms of
/// `H1` act trivially on `H₁(H1)`; one `x` per coset covers them all.
pub fn sweep_group(name: &str, g: &PermGroup, identity_max_order: usize) -> GroupSweep {
    let gh = GroupHomology::new(g);
    let subs = g.all_subgroups();
    let homs: Vec<SubgroupHomology> = subs
        .par_iter()
        .map(|h| SubgroupHomology::new(&gh, h).expect("subgroup of G"))
        .collect();
    let position: HashMap<Vec<usize>, usize> =
        subs.iter().enumerate().map(|(i, h)| (h.members().to_vec(), i)).collect();
    let check_identity = g.order() <= identity_max_order;

    let per_subgroup: Vec<GroupSweep> = (0..subs.len())
        .into_par_iter()
        .map(|i| {
            let mut s = GroupSweep::default();
            let h1 = &homs[i];
            if check_identity {
                s.index_identity_checked += 1;
                if !h1.index_identity_holds() {
                    s.index_identity_failures += 1;
                    s.failures.push(format!("index identity fails for subgroup {}", i));
                }
            }
            let cosets = g.coset_action(h1.subgroup()).expect("subgroup of G");
            let ts = divisors_coprime_to(h1.h1().order().expect("finite"), h1.index());
            for x in &cosets.reps {
                let conj = g.conjugate_subgroup(h1.subgroup(), x).expect("element of G");
                let h2 = &homs[position[conj.members()]];
                let corr = Correspondence::conjugation(&gh, h1, h2, x).expect("conjugate pair");
                s.correspondences += 1;
                if !diagram_check(&corr).commutes() {
                    s.diagram_failures += 1;
                    s.failures.push(format!("diagram fails for subgroup {} and x = {}", i, x));
                }
                for &t in &ts {
                    for cs in corresponding_subgroups(&corr, t) {
                        let r = gthm_check(&corr, &cs).expect("t coprime to m");
                        s.gthm_checks += 1;
                        if !r.verdict() {
                            s.gthm_failures += 1;
                            s.failures.push(format!("cores differ for subgroup {}, x = {}, t = {}", i, x, t));
                        }
                        if !r.projections_agree {
                            s.projection_disagreements += 1;
                        }
                    }
                }
            }
            s
        })
        .collect();

    let mut total = GroupSweep {
        name: name.to_string(),
        order: g.order(),
        subgroups: subs.len(),
        ..GroupSweep::default()
    };
    for s in per_subgroup {
        total.index_identity_checked += s.index_identity_checked;
        total.index_identity_failures += s.index_identity_failures;
        total.correspondences += s.correspondences;
        total.diagram_failures += s.diagram_failures;
        total.gthm_checks += s.gthm_checks;
        total.gthm_failures += s.gthm_failures;
        total.projection_disagreements += s.projection_disagreements;
        total.failures.extend(s.failures);
    }
    total.failures.truncate(MAX_LISTED_FAILURES);
    total
}

pub fn homology_sweep(max_order: usize, identity_max_order: usize) -> SweepReport {
    let groups: Vec<GroupSweep> = sweep_corpus(max_order)
        .iter()
        .map(|(name, g)| sweep_group(name, g, identity_max_order))
        .collect();
    let failures = groups
        .iter()
        .map(|s| s.index_identity_failures + s.diagram_failures + s.gthm_failures)
        .sum();
    SweepReport {
        schema: 1,
        max_order,
        index_identity_max_order: identity_max_order,
        correspondences: groups.iter().map(|s| s.correspondences).sum(),
        gthm_checks: groups.iter().map(|s| s.gthm_checks).sum(),
        failures,
        passed: failures == 0,
        groups,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn identity_correspondence_commutes() {
        let s4 = catalog::symmetric(4);
        let gh = GroupHomology::new(&s4);
        let h = s4.subgroup(&[p(4, "(0 1 2)")]).unwrap();
        let sh = SubgroupHomology::new(&gh, &h).unwrap();
        let corr = Correspondence::identity(&gh, &sh);
        assert!(diagram_check(&corr).commutes());
        assert!(sh.index_identity_holds());
    }

    #[test]
    fn conjugation_correspondence_commutes() {
        let s4 = catalog::symmetric(4);
        let gh = GroupHomology::new(&s4);
        let h1 = s4.subgroup(&[p(4, "(0 1 2 3)")]).unwrap();
        let x = p(4, "(1 2)");
        let h2 = s4.conjugate_subgroup(&h1, &x).unwrap();
        let (s1, s2) = (SubgroupHomology::new(&gh, &h1).unwrap(), SubgroupHomology::new(&gh, &h2).unwrap());
        let corr = Correspondence::conjugation(&gh, &s1, &s2, &x).unwrap();
        assert!(diagram_check(&corr).commutes());
        assert!(Correspondence::conjugation(&gh, &s1, &s1, &x).is_err());
    }

    #[test]
    fn non_equivariant_phi_is_flagged() {
        // Klein four subgroup of D4 generated by the diagonal reflections:
        // of the six automorphisms of its H1, some break a leg.
        let d4 = catalog::dihedral(4);
        let gh = GroupHomology::new(&d4);
        let v = d4.subgroup(&[p(4, "(0 2)"), p(4, "(1 3)")]).unwrap();
        let sv = SubgroupHomology::new(&gh, &v).unwrap();
        let a = sv.h1().clone();
        assert_eq!(a.invariant_factors, vec![2, 2]);
        let autos = [[[1, 0], [0, 1]], [[0, 1], [1, 0]], [[1, 1], [0, 1]], [[1, 0], [1, 1]], [[0, 1], [1, 1]], [[1, 1], [1, 0]]];
        let verdicts: Vec<bool> = autos
            .iter()
            .map(|c| {
                let phi = AbHom::from_columns(a.clone(), a.clone(), c.iter().map(|col| col.to_vec()).collect());
                let corr = Correspondence::user_supplied(&gh, &sv, &sv, phi).unwrap();
                diagram_check(&corr).commutes()
            })
            .collect();
        assert!(verdicts[0]);
        assert!(verdicts.iter().any(|&ok| !ok));
        let bad = AbHom::zero(&a, &a);
        assert!(Correspondence::user_supplied(&gh, &sv, &sv, bad).is_err());
    }

    #[test]
    fn index_mismatch() {
        let s3 = catalog::symmetric(3);
        let gh = GroupHomology::new(&s3);
        let a = SubgroupHomology::new(&gh, &s3.subgroup(&[p(3, "(0 1)")]).unwrap()).unwrap();
        let b = SubgroupHomology::new(&gh, &s3.subgroup(&[p(3, "(0 1 2)")]).unwrap()).unwrap();
        let phi = AbHom::zero(a.h1(), b.h1());
        assert!(matches!(
            Correspondence::user_supplied(&gh, &a, &b, phi),
            Err(HomologyError::IndexMismatch(3, 2))
        ));
    }

    #[test]
    fn modq_identity_case() {
        let s4 = catalog::symmetric(4);
        let gh = GroupHomology::new(&s4);
        let a4 = s4.subgroup(&[p(4, "(0 1 2)"), p(4, "(1 2 3)")]).unwrap();
        let v4 = s4.subgroup(&[p(4, "(0 1)(2 3)"), p(4, "(0 2)(1 3)")]).unwrap();
        let sh = SubgroupHomology::new(&gh, &a4).unwrap();
        let corr = Correspondence::identity(&gh, &sh);
        let r = modq_check(&corr, &v4, 3).unwrap();
        assert!(r.commutes() && r.coprime);
        assert_eq!(modq_check(&corr, &v4, 4), Err(HomologyError::NotCoprime { k: 4, m: 2 }));
        let not_normal = s4.subgroup(&[p(4, "(0 1)(2 3)")]).unwrap();
        assert_eq!(modq_check(&corr, &not_normal, 3), Err(HomologyError::NotNormal));
    }

    #[test]
    fn modq_conjugation_with_trivial_normal_subgroup() {
        let s4 = catalog::symmetric(4);
        let gh = GroupHomology::new(&s4);
        let h1 = s4.subgroup(&[p(4, "(0 1 2)")]).unwrap();
        let x = p(4, "(2 3)");
        let h2 = s4.conjugate_subgroup(&h1, &x).unwrap();
        let (s1, s2) = (SubgroupHomology::new(&gh, &h1).unwrap(), SubgroupHomology::new(&gh, &h2).unwrap());
        let corr = Correspondence::conjugation(&gh, &s1, &s2, &x).unwrap();
        let core = s4.normal_core(&h1).unwrap();
        assert_eq!(core.order(), 1);
        assert!(modq_check(&corr, &core, 5).unwrap().commutes());
    }

    #[test]
    fn modq_conjugation_on_normal_subgroup_is_observed() {
        // S3 ⊇ A3 = N, φ = conjugation by a transposition, i.e. inversion on
        // Z/3. Both squares fail even though k = 3 is coprime to m = 2.
        let s3 = catalog::symmetric(3);
        let gh = GroupHomology::new(&s3);
        let a3 = s3.subgroup(&[p(3, "(0 1 2)")]).unwrap();
        let sh = SubgroupHomology::new(&gh, &a3).unwrap();
        let corr = Correspondence::conjugation(&gh, &sh, &sh, &p(3, "(0 1)")).unwrap();
        let r = modq_check(&corr, &a3, 3).unwrap();
        assert!(!r.cor_square && !r.res_square);
        assert!(!r.cor_square_times_m);
    }

    #[test]
    fn modq_non_coprime_undivided_identities() {
        // D4 ⊇ C4 = N, φ inversion on Z/4, k = 4 shares the factor 2 with m.
        let d4 = catalog::dihedral(4);
        let gh = GroupHomology::new(&d4);
        let c4 = d4.subgroup(&[p(4, "(0 1 2 3)")]).unwrap();
        let sh = SubgroupHomology::new(&gh, &c4).unwrap();
        let corr = Correspondence::conjugation(&gh, &sh, &sh, &p(4, "(1 3)")).unwrap();
        let r = modq_evaluate(&corr, &c4, 4).unwrap();
        assert!(!r.coprime);
        assert!(r.cor_square_times_m && r.res_square_times_m);
        assert!(!r.cor_square && !r.res_square);
    }

    #[test]
    fn abelian_subgroup_lattices() {
        assert_eq!(abelian_subgroups(&FinAbGroup::cyclic(6)).len(), 4);
        assert_eq!(abelian_subgroups(&FinAbGroup::from_cyclic_factors(0, &[2, 2])).len(), 5);
        assert_eq!(abelian_subgroups(&FinAbGroup::from_cyclic_factors(0, &[2, 2, 2])).len(), 16);
        assert_eq!(abelian_subgroups(&FinAbGroup::trivial()).len(), 1);
    }

    #[test]
    fn corresponding_subgroups_examples() {
        let c6 = catalog::cyclic(6);
        let gh = GroupHomology::new(&c6);
        let whole = SubgroupHomology::new(&gh, &c6.whole()).unwrap();
        let corr = Correspondence::identity(&gh, &whole);
        let one = corresponding_subgroups(&corr, 1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].gamma1.order(), 6);
        let three = corresponding_subgroups(&corr, 3);
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].gamma1.order(), 2);
        assert!(corresponding_subgroups(&corr, 4).is_empty());
    }

    #[test]
    fn gthm_on_conjugates() {
        let s4 = catalog::symmetric(4);
        let gh = GroupHomology::new(&s4);
        let h1 = s4.subgroup(&[p(4, "(0 1 2 3)"), p(4, "(0 2)")]).unwrap();
        let x = p(4, "(0 1)");
        let h2 = s4.conjugate_subgroup(&h1, &x).unwrap();
        let (s1, s2) = (SubgroupHomology::new(&gh, &h1).unwrap(), SubgroupHomology::new(&gh, &h2).unwrap());
        let corr = Correspondence::conjugation(&gh, &s1, &s2, &x).unwrap();
        let cs = corresponding_subgroups(&corr, 1);
        assert!(gthm_check(&corr, &cs[0]).unwrap().verdict());
        let halves = corresponding_subgroups(&corr, 2);
        assert_eq!(halves.len(), 3);
        assert!(halves.iter().all(|cs| gthm_check(&corr, cs).unwrap().verdict()));

        let c4 = s4.subgroup(&[p(4, "(0 1 2 3)")]).unwrap();
        let sc = SubgroupHomology::new(&gh, &c4).unwrap();
        let corr = Correspondence::identity(&gh, &sc);
        let halves = corresponding_subgroups(&corr, 2);
        assert_eq!(
            gthm_check(&corr, &halves[0]),
            Err(HomologyError::CoprimalityViolated { t: 2, m: 6 })
        );
    }

    #[test]
    fn h1_comparisons() {
        let s3 = catalog::symmetric(3);
        let a = s3.subgroup(&[p(3, "(0 1)")]).unwrap();
        let b = s3.subgroup(&[p(3, "(0 2)")]).unwrap();
        let c = s3.subgroup(&[p(3, "(0 1 2)")]).unwrap();
        assert!(h1_isomorphic(&s3, &a, &b).unwrap());
        assert!(!h1_isomorphic(&s3, &a, &c).unwrap());
    }

    #[test]
    fn small_sweep_passes() {
        let report = homology_sweep(24, 24);
        assert!(report.passed, "{:?}", report.groups.iter().flat_map(|g| &g.failures).collect::<Vec<_>>());
        assert!(report.correspondences > 0);
    }
}
