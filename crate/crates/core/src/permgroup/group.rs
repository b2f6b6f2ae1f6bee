use std::collections::{HashMap, HashSet, VecDeque};

use super::{Permutation, PermGroupError};

/// Groups larger than this are refused by [`PermGroup::generate`].
pub const DEFAULT_ORDER_CAP: usize = 50_000;

/// A finite permutation group with every element enumerated.
///
/// Element 0 is always the identity; the rest follow breadth-first order
/// from the generators, so the ordering is a deterministic function of
/// the generator list.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl PermGroup {
    pub fn generate(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermGroupError> {
        Self::generate_with_cap(degree, generators, DEFAULT_ORDER_CAP)
    }

    pub fn generate_with_cap(
        degree: usize,
        generators: Vec<Permutation>,
        cap: usize,
    ) -> Result<Self, PermGroupError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermGroupError::InvalidPermutation(format!(
                    "generator {} has degree {}, expected {}",
                    g,
                    g.degree(),
                    degree
                )));
            }
        }
        let (elements, index) = close(degree, &generators, cap)?;
        Ok(PermGroup {
            degree,
            generators,
            elements,
            index,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &Permutation {
        &self.elements[idx]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn identity(&self) -> &Permutation {
        &self.elements[0]
    }

    /// Index of `elements[a] * elements[b]`.
    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        self.index[&(&self.elements[a] * &self.elements[b])]
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a * b == b * a))
    }

    /// The subgroup generated by `generators`, which must lie in `self`.
    pub fn subgroup(&self, generators: &[Permutation]) -> Result<Subgroup, PermGroupError> {
        let mut gen_idx = Vec::with_capacity(generators.len());
        for g in generators {
            match self.index_of(g) {
                Some(i) => gen_idx.push(i),
                None => {
                    return Err(PermGroupError::NotASubgroup(format!(
                        "generator {} is not an element of the group",
                        g
                    )))
                }
            }
        }
        let members = self.closure_indices(&gen_idx);
        Ok(self.make_subgroup(generators.to_vec(), members))
    }

    pub fn whole(&self) -> Subgroup {
        self.make_subgroup(self.generators.clone(), (0..self.order()).collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        self.make_subgroup(Vec::new(), vec![0])
    }

    /// Subgroup from an explicit element-index set, checked for closure.
    pub fn subgroup_from_indices(&self, indices: &[usize]) -> Result<Subgroup, PermGroupError> {
        let mut mask = vec![false; self.order()];
        for &i in indices {
            if i >= self.order() {
                return Err(PermGroupError::NotASubgroup(format!("element index {} out of range", i)));
            }
            mask[i] = true;
        }
        if !mask[0] {
            return Err(PermGroupError::NotASubgroup("set does not contain the identity".into()));
        }
        let members: Vec<usize> = (0..self.order()).filter(|&i| mask[i]).collect();
        for &a in &members {
            for &b in &members {
                if !mask[self.mul_idx(a, b)] {
                    return Err(PermGroupError::NotASubgroup("element set is not closed".into()));
                }
            }
        }
        let generators = self.small_generating_set(&members);
        Ok(self.make_subgroup(generators, members))
    }

    /// All elements satisfying `pred`, which must form a subgroup.
    pub fn subgroup_where<F: Fn(&Permutation) -> bool>(&self, pred: F) -> Result<Subgroup, PermGroupError> {
        let indices: Vec<usize> = (0..self.order()).filter(|&i| pred(&self.elements[i])).collect();
        self.subgroup_from_indices(&indices)
    }

    fn small_generating_set(&self, members: &[usize]) -> Vec<Permutation> {
        let mut gens: Vec<usize> = Vec::new();
        let mut span: HashSet<usize> = [0usize].into_iter().collect();
        for &m in members {
            if !span.contains(&m) {
                gens.push(m);
                span = self.closure_indices(&gens).into_iter().collect();
                if span.len() == members.len() {
                    break;
                }
            }
        }
        gens.into_iter().map(|i| self.elements[i].clone()).collect()
    }

    fn closure_indices(&self, gens: &[usize]) -> Vec<usize> {
        let mut mask = vec![false; self.order()];
        mask[0] = true;
        let mut found = vec![0usize];
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul_idx(s, x);
                if !mask[y] {
                    mask[y] = true;
                    found.push(y);
                    queue.push_back(y);
                }
            }
        }
        found.sort_unstable();
        found
    }

    /// Subgroup from a member set known to be closed; sorted internally.
    pub(crate) fn subgroup_from_closed(&self, mut members: Vec<usize>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        let gens = self.small_generating_set(&members);
        self.make_subgroup(gens, members)
    }

    pub(crate) fn make_subgroup(&self, generators: Vec<Permutation>, members: Vec<usize>) -> Subgroup {
        let mut mask = vec![false; self.order()];
        for &m in &members {
            mask[m] = true;
        }
        Subgroup {
            degree: self.degree,
            parent_order: self.order(),
            generators,
            members,
            mask,
        }
    }

    /// Errors unless `h` was built against this group.
    pub fn check_subgroup(&self, h: &Subgroup) -> Result<(), PermGroupError> {
        let ok = h.degree == self.degree
            && h.parent_order == self.order()
            && h.members.iter().all(|&i| i < self.order())
            && h.generators.iter().all(|g| self.index_of(g).map_or(false, |i| h.mask[i]));
        if ok {
            Ok(())
        } else {
            Err(PermGroupError::NotASubgroup(
                "subgroup was not constructed inside this group".into(),
            ))
        }
    }

    /// Conjugacy classes, ordered by the index of their least element; the
    /// representative is that least element, so the identity class comes first.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        let gens: Vec<(Permutation, Permutation)> = self
            .generators
            .iter()
            .map(|g| (g.clone(), g.inverse()))
            .collect();
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let id = classes.len();
            class_of[start] = id;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let px = &self.elements[x];
                for (g, gi) in &gens {
                    let y = self.index[&g.compose(px).compose(gi)];
                    if class_of[y] == usize::MAX {
                        class_of[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(ConjugacyClass {
                representative: self.elements[start].clone(),
                rep_index: start,
                members,
            });
        }
        classes
    }

    /// Left cosets `gH` with the left-multiplication action of `self`.
    pub fn coset_action(&self, h: &Subgroup) -> Result<CosetSpace, PermGroupError> {
        self.check_subgroup(h)?;
        Ok(CosetSpace::build(self, h))
    }

    /// Representatives of the double cosets `H1 \ G / H2`, one per
    /// `H1`-orbit on `G/H2`, ordered by the least coset in each orbit.
    pub fn double_cosets(&self, h1: &Subgroup, h2: &Subgroup) -> Result<Vec<Permutation>, PermGroupError> {
        self.check_subgroup(h1)?;
        let cosets = self.coset_action(h2)?;
        Ok(cosets
            .orbits_under(self, h1.generators())
            .into_iter()
            .map(|orbit| cosets.reps[orbit[0]].clone())
            .collect())
    }

    /// `∩_{g ∈ G} g H g⁻¹`, computed as the kernel of the action on `G/H`.
    pub fn normal_core(&self, h: &Subgroup) -> Result<Subgroup, PermGroupError> {
        let cosets = self.coset_action(h)?;
        let kernel: Vec<usize> = h
            .members
            .iter()
            .copied()
            .filter(|&x| (0..cosets.len()).all(|c| cosets.act_idx(self, x, c) == c))
            .collect();
        Ok(self.make_subgroup(self.small_generating_set(&kernel), kernel))
    }

    pub fn is_normal(&self, h: &Subgroup) -> Result<bool, PermGroupError> {
        self.check_subgroup(h)?;
        Ok(self.generators.iter().all(|g| {
            let gi = g.inverse();
            h.generators.iter().all(|x| h.mask[self.index[&g.compose(x).compose(&gi)]])
        }))
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: &Permutation) -> Result<Subgroup, PermGroupError> {
        self.check_subgroup(h)?;
        if !self.contains(g) {
            return Err(PermGroupError::NotASubgroup(format!("{} is not in the group", g)));
        }
        let gi = g.inverse();
        let mut members: Vec<usize> = h
            .members
            .iter()
            .map(|&x| self.index[&g.compose(&self.elements[x]).compose(&gi)])
            .collect();
        members.sort_unstable();
        let gens = h.generators.iter().map(|x| g.conjugate(x)).collect();
        Ok(self.make_subgroup(gens, members))
    }

    /// Some `g` with `g H1 g⁻¹ = H2`, scanning elements in order.
    pub fn conjugator(&self, h1: &Subgroup, h2: &Subgroup) -> Result<Option<Permutation>, PermGroupError> {
        self.check_subgroup(h1)?;
        self.check_subgroup(h2)?;
        if h1.order() != h2.order() {
            return Ok(None);
        }
        for g in &self.elements {
            let gi = g.inverse();
            if h1
                .generators
                .iter()
                .all(|x| h2.mask[self.index[&g.compose(x).compose(&gi)]])
            {
                return Ok(Some(g.clone()));
            }
        }
        Ok(None)
    }

    pub fn are_conjugate(&self, h1: &Subgroup, h2: &Subgroup) -> Result<bool, PermGroupError> {
        Ok(self.conjugator(h1, h2)?.is_some())
    }

    /// Join of two subgroups.
    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut gens = a.generators.clone();
        gens.extend(b.generators.iter().cloned());
        let idx: Vec<usize> = gens.iter().map(|g| self.index[g]).collect();
        let members = self.closure_indices(&idx);
        self.make_subgroup(gens, members)
    }

    /// Every subgroup, built by joining cyclic subgroups until closed.
    /// Ordered by (order, member list).
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut cyclic: Vec<Subgroup> = Vec::new();
        for i in 0..self.order() {
            let c = self.make_subgroup(vec![self.elements[i].clone()], self.closure_indices(&[i]));
            if seen.insert(c.members.clone()) {
                cyclic.push(c);
            }
        }
        let mut all = cyclic.clone();
        let mut frontier = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                for c in &cyclic {
                    if c.members.iter().all(|&x| s.mask[x]) {
                        continue;
                    }
                    let j = self.join(s, c);
                    if seen.insert(j.members.clone()) {
                        next.push(j.clone());
                        all.push(j);
                    }
                }
            }
            frontier = next;
        }
        for s in &mut all {
            s.generators = self.small_generating_set(&s.members);
        }
        all.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        all
    }
}

fn close(
    degree: usize,
    generators: &[Permutation],
    cap: usize,
) -> Result<(Vec<Permutation>, HashMap<Permutation, usize>), PermGroupError> {
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id, 0usize);
    let mut head = 0;
    while head < elements.len() {
        let x = elements[head].clone();
        head += 1;
        for g in generators {
            let y = g.compose(&x);
            if !index.contains_key(&y) {
                if elements.len() >= cap {
                    return Err(PermGroupError::OrderCapExceeded(cap));
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
    }
    Ok((elements, index))
}

/// A subgroup recorded as a sorted set of element indices of its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    degree: usize,
    parent_order: usize,
    generators: Vec<Permutation>,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Sorted element indices in the parent group.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.mask.get(idx).copied().unwrap_or(false)
    }

    pub fn contains(&self, parent: &PermGroup, p: &Permutation) -> bool {
        parent.index_of(p).map_or(false, |i| self.mask[i])
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&i| other.contains_index(i))
    }

    pub fn intersection(&self, parent: &PermGroup, other: &Subgroup) -> Subgroup {
        let members: Vec<usize> = self.members.iter().copied().filter(|&i| other.mask[i]).collect();
        parent.make_subgroup(parent.small_generating_set(&members), members)
    }

    pub fn elements<'a>(&'a self, parent: &'a PermGroup) -> impl Iterator<Item = &'a Permutation> + 'a {
        self.members.iter().map(move |&i| parent.element(i))
    }

    /// The subgroup as a standalone group on the same points.
    pub fn to_group(&self) -> PermGroup {
        PermGroup::generate_with_cap(self.degree, self.generators.clone(), usize::MAX)
            .expect("subgroup generators have the parent degree")
    }
}

#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub representative: Permutation,
    pub rep_index: usize,
    /// Sorted element indices.
    pub members: Vec<usize>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// The left cosets of a subgroup with a fixed transversal.
///
/// Coset `i` is `reps[i] H`; coset 0 is `H` itself with the identity as
/// representative. Representatives are the least-index element of each coset.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    pub reps: Vec<Permutation>,
    pub rep_indices: Vec<usize>,
    /// Coset id for every element index of the parent group.
    pub coset_of: Vec<usize>,
    pub subgroup_order: usize,
}

impl CosetSpace {
    fn build(g: &PermGroup, h: &Subgroup) -> CosetSpace {
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        let mut rep_indices = Vec::new();
        for x in 0..g.order() {
            if coset_of[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            for &hm in &h.members {
                coset_of[g.mul_idx(x, hm)] = id;
            }
            reps.push(g.elements[x].clone());
            rep_indices.push(x);
        }
        CosetSpace {
            reps,
            rep_indices,
            coset_of,
            subgroup_order: h.order(),
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Coset of `elements[x] * reps[c]`.
    pub fn act_idx(&self, g: &PermGroup, x: usize, c: usize) -> usize {
        self.coset_of[g.mul_idx(x, self.rep_indices[c])]
    }

    /// The permutation of coset indices induced by `p`.
    pub fn action(&self, g: &PermGroup, p: &Permutation) -> Permutation {
        let images = self
            .reps
            .iter()
            .map(|r| self.coset_of[g.index[&p.compose(r)]] as u32)
            .collect();
        Permutation::from_images(images).expect("coset action is a bijection")
    }

    /// Orbits on cosets of the group generated by `gens`, each sorted,
    /// ordered by least member.
    pub fn orbits_under(&self, g: &PermGroup, gens: &[Permutation]) -> Vec<Vec<usize>> {
        let actions: Vec<Permutation> = gens.iter().map(|s| self.action(g, s)).collect();
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(c) = queue.pop_front() {
                for a in &actions {
                    let d = a.apply(c);
                    if !seen[d] {
                        seen[d] = true;
                        orbit.push(d);
                        queue.push_back(d);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }
}
