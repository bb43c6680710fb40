use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use super::perm::Perm;
use crate::error::{Error, Result};
use crate::limits;

/// A finite permutation group stored as its sorted element list.
///
/// Cloning is cheap; the element list is shared.
#[derive(Clone)]
pub struct PermGroup {
    inner: Arc<GroupData>,
}

struct GroupData {
    degree: usize,
    elements: Vec<Perm>,
    generators: Vec<Perm>,
    small_generators: OnceLock<Vec<Perm>>,
}

impl PermGroup {
    fn from_sorted(degree: usize, elements: Vec<Perm>, generators: Vec<Perm>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        PermGroup {
            inner: Arc::new(GroupData { degree, elements, generators, small_generators: OnceLock::new() }),
        }
    }

    /// Closure of `gens` under composition, capped at [`limits::max_elements`].
    pub fn generate(degree: usize, gens: &[Perm]) -> Result<Self> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        let elements = closure(degree, gens, limits::max_elements())?;
        Ok(Self::from_sorted(degree, elements, gens.to_vec()))
    }

    /// The full symmetric group, listed directly in lexicographic order.
    pub fn symmetric(degree: usize) -> Result<Self> {
        let order = crate::arith::factorial(degree as u64);
        limits::check("symmetric group order", usize::try_from(order).unwrap_or(usize::MAX), limits::max_elements())?;
        let mut elements = Vec::with_capacity(order as usize);
        let mut current: Vec<usize> = (0..degree).collect();
        loop {
            elements.push(Perm::from_images(&current)?);
            if !next_permutation(&mut current) {
                break;
            }
        }
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::from_cycles(degree, &[vec![0, 1]])?);
        }
        if degree >= 3 {
            gens.push(Perm::from_cycles(degree, &[(0..degree).collect()])?);
        }
        Ok(Self::from_sorted(degree, elements, gens))
    }

    /// `Σ_{block}^{×count}` acting on consecutive blocks of `block` points.
    pub fn block_product(block: usize, count: usize) -> Result<Self> {
        let degree = block * count;
        let mut gens = Vec::new();
        for b in 0..count {
            let base = b * block;
            if block >= 2 {
                gens.push(Perm::from_cycles(degree, &[vec![base, base + 1]])?);
            }
            if block >= 3 {
                gens.push(Perm::from_cycles(degree, &[(base..base + block).collect()])?);
            }
        }
        Self::generate(degree, &gens)
    }

    /// Subgroup of `self` given by a predicate; the caller guarantees closure.
    pub(crate) fn filter(&self, keep: impl Fn(&Perm) -> bool) -> PermGroup {
        let elements: Vec<Perm> = self.elements().iter().filter(|g| keep(g)).cloned().collect();
        Self::from_sorted(self.degree(), elements, Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn order(&self) -> usize {
        self.inner.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.inner.elements
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree() && self.inner.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree() == other.degree()
            && self.order() <= other.order()
            && other.order().is_multiple_of(self.order())
            && self.elements().iter().all(|g| other.contains(g))
    }

    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.elements() == other.elements()
    }

    /// The generators this group was built from, or a small generating set
    /// found greedily when it was built by filtering.
    pub fn generators(&self) -> &[Perm] {
        if !self.inner.generators.is_empty() || self.order() == 1 {
            return &self.inner.generators;
        }
        self.small_generators()
    }

    /// Greedy generating set: scan elements in order, keep any not yet generated.
    pub fn small_generators(&self) -> &[Perm] {
        self.inner.small_generators.get_or_init(|| {
            let mut gens: Vec<Perm> = Vec::new();
            let mut span: HashSet<Perm> = HashSet::from([self.identity()]);
            for g in self.elements() {
                if span.len() == self.order() {
                    break;
                }
                if span.contains(g) {
                    continue;
                }
                gens.push(g.clone());
                let elems = closure(self.degree(), &gens, usize::MAX).expect("uncapped closure");
                span = elems.into_iter().collect();
            }
            gens
        })
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|a| gens.iter().all(|b| a.commutes_with(b)))
    }

    pub fn exponent(&self) -> u64 {
        self.elements().iter().fold(1, |acc, g| num_integer::lcm(acc, g.order()))
    }

    pub fn count_of_order(&self, order: u64) -> usize {
        self.elements().iter().filter(|g| g.order() == order).count()
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree())
            .field("order", &self.order())
            .finish()
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree() == other.degree() && self.same_elements(other)
    }
}

impl Eq for PermGroup {}

fn closure(degree: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.compose(&x);
            if seen.insert(y.clone()) {
                limits::check("group closure", seen.len(), cap)?;
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<Perm> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(elements)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn require_members(group: &PermGroup, perms: &[Perm]) -> Result<()> {
    for s in perms {
        if !group.contains(s) {
            return Err(Error::NotInGroup(s.to_string()));
        }
    }
    Ok(())
}

/// `{g ∈ ambient : g s = s g for all s ∈ S}` by exhaustive filter.
pub fn centralizer(ambient: &PermGroup, set: &[Perm]) -> Result<PermGroup> {
    require_members(ambient, set)?;
    Ok(ambient.filter(|g| set.iter().all(|s| g.commutes_with(s))))
}

/// Some `g ∈ G` with `g a_i g⁻¹ = b_i` for every `i`, by exhaustive search.
pub fn conjugating_element(group: &PermGroup, a: &[Perm], b: &[Perm]) -> Result<Option<Perm>> {
    if a.len() != b.len() {
        return Err(Error::BadParameters(format!("tuples of lengths {} and {}", a.len(), b.len())));
    }
    require_members(group, a)?;
    require_members(group, b)?;
    // g a g⁻¹ = b  ⇔  g(a(x)) = b(g(x)) for all x
    let found = group.elements().iter().find(|g| {
        a.iter().zip(b).all(|(ai, bi)| (0..g.degree()).all(|x| g.image(ai.image(x)) == bi.image(g.image(x))))
    });
    Ok(found.cloned())
}
