//! Scott's triple: two non-conjugate `A₅` subgroups of `PSL(2, F₂₉)`.
//!
//! Subgroups are found by sampling an involution `a` and an element `b` of
//! order 3 with `ab` of order 5; `⟨a, b⟩` is then a quotient of the
//! `(2,3,5)` triangle group, hence `A₅` when its order is 60.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::gassmann::{is_gassmann, GassmannError};
use crate::permgroup::{catalog, PermGroup, PermGroupError, Subgroup};

pub const SCOTT_PRIME: u32 = 29;

#[derive(Clone, Debug)]
pub struct ScottPair {
    pub group: PermGroup,
    pub h1: Subgroup,
    pub h2: Subgroup,
    /// Number of `(a, b)` samples drawn.
    pub samples: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScottReport {
    pub schema: u32,
    pub seed: u64,
    pub order: usize,
    pub conjugacy_classes: usize,
    pub subgroup_orders: [usize; 2],
    pub index: usize,
    pub generators: [Vec<String>; 2],
    pub conjugate: bool,
    pub gassmann: bool,
    pub samples: u64,
}

/// Samples `(2,3,5)` generating pairs until two non-conjugate `A₅`
/// subgroups of `g` appear. Returns `None` after `max_samples` draws.
pub fn find_nonconjugate_a5(g: &PermGroup, seed: u64, max_samples: u64) -> Option<(Subgroup, Subgroup, u64)> {
    let involutions: Vec<usize> = (0..g.order()).filter(|&i| g.element(i).order() == 2).collect();
    let order3: Vec<usize> = (0..g.order()).filter(|&i| g.element(i).order() == 3).collect();
    if involutions.is_empty() || order3.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first: Option<Subgroup> = None;
    for samples in 1..=max_samples {
        let a = g.element(*involutions.choose(&mut rng).expect("nonempty"));
        let b = g.element(*order3.choose(&mut rng).expect("nonempty"));
        if a.compose(b).order() != 5 {
            continue;
        }
        match PermGroup::generate_with_cap(g.degree(), vec![a.clone(), b.clone()], 60) {
            Ok(h) if h.order() == 60 => {}
            _ => continue,
        }
        let sub = g.subgroup(&[a.clone(), b.clone()]).expect("elements of g");
        match &first {
            None => first = Some(sub),
            Some(h1) => {
                if !g.are_conjugate(h1, &sub).expect("subgroups of g") {
                    return Some((h1.clone(), sub, samples));
                }
            }
        }
    }
    None
}

pub fn scott_pair(seed: u64) -> Result<ScottPair, PermGroupError> {
    let group = catalog::psl2(SCOTT_PRIME);
    let (h1, h2, samples) = find_nonconjugate_a5(&group, seed, 1_000_000)
        .ok_or_else(|| PermGroupError::NotASubgroup("no pair of non-conjugate A5 subgroups found".into()))?;
    Ok(ScottPair {
        group,
        h1,
        h2,
        samples,
    })
}

pub fn scott_report(seed: u64) -> Result<(ScottPair, ScottReport), GassmannError> {
    let pair = scott_pair(seed)?;
    let g = &pair.group;
    let gassmann = is_gassmann(g, &pair.h1, &pair.h2)?;
    let conjugate = g.are_conjugate(&pair.h1, &pair.h2)?;
    let gens = |h: &Subgroup| h.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>();
    let report = ScottReport {
        schema: 1,
        seed,
        order: g.order(),
        conjugacy_classes: g.conjugacy_classes().len(),
        subgroup_orders: [pair.h1.order(), pair.h2.order()],
        index: g.order() / pair.h1.order(),
        generators: [gens(&pair.h1), gens(&pair.h2)],
        conjugate,
        gassmann,
        samples: pair.samples,
    };
    Ok((pair, report))
}
