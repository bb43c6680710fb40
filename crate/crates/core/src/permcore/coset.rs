use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

use super::group::PermGroup;
use super::perm::Perm;
use crate::error::{Error, Result};
use crate::limits;

/// A left coset `gH`, identified by its lexicographically least element.
#[derive(Clone, Debug)]
pub struct Coset {
    representative: Perm,
    subgroup: PermGroup,
}

impl Coset {
    /// The coset `g H` with its canonical representative.
    pub fn of(g: &Perm, subgroup: &PermGroup) -> Coset {
        let representative = subgroup
            .elements()
            .iter()
            .map(|h| g.compose(h))
            .min()
            .expect("subgroup contains the identity");
        Coset { representative, subgroup: subgroup.clone() }
    }

    pub fn representative(&self) -> &Perm {
        &self.representative
    }

    pub fn subgroup(&self) -> &PermGroup {
        &self.subgroup
    }

    pub fn contains(&self, x: &Perm) -> bool {
        self.subgroup.contains(&self.representative.inverse().compose(x))
    }

    /// `s · gH`.
    pub fn act(&self, s: &Perm) -> Coset {
        Coset::of(&s.compose(&self.representative), &self.subgroup)
    }

    /// True when every `s` fixes this coset, i.e. `g⁻¹ s g ∈ H`.
    pub fn is_fixed_by(&self, set: &[Perm]) -> bool {
        set.iter().all(|s| self.subgroup.contains(&s.conjugate_by(&self.representative)))
    }
}

// Cosets are compared by canonical representative; callers keep one subgroup per list.
impl PartialEq for Coset {
    fn eq(&self, other: &Self) -> bool {
        self.representative == other.representative
    }
}

impl Eq for Coset {}

impl Hash for Coset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.representative.hash(state);
    }
}

impl PartialOrd for Coset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Coset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.representative.cmp(&other.representative)
    }
}

/// An orbit of an acting group on a coset list.
#[derive(Clone, Debug)]
pub struct CosetOrbit {
    pub representative: Coset,
    pub size: usize,
    pub stabilizer: PermGroup,
}

fn require_subgroup(g: &PermGroup, h: &PermGroup) -> Result<()> {
    if h.is_subgroup_of(g) {
        Ok(())
    } else {
        Err(Error::NotSubgroup(format!("group of order {} in group of order {}", h.order(), g.order())))
    }
}

/// All left cosets of `H` in `G`, sorted by representative.
pub fn left_cosets(g: &PermGroup, h: &PermGroup) -> Result<Vec<Coset>> {
    require_subgroup(g, h)?;
    limits::check("coset count", g.order() / h.order(), limits::MAX_COSETS)?;
    let mut covered: HashSet<Perm> = HashSet::with_capacity(g.order());
    let mut out = Vec::with_capacity(g.order() / h.order());
    // Elements are scanned in increasing order, so the first uncovered
    // element of a coset is its least element.
    for x in g.elements() {
        if covered.contains(x) {
            continue;
        }
        for y in h.elements() {
            covered.insert(x.compose(y));
        }
        out.push(Coset { representative: x.clone(), subgroup: h.clone() });
    }
    Ok(out)
}

/// Cosets `gH` with `s gH = gH` for every `s` in `set`.
pub fn fixed_cosets(g: &PermGroup, h: &PermGroup, set: &[Perm]) -> Result<Vec<Coset>> {
    for s in set {
        if !g.contains(s) {
            return Err(Error::NotInGroup(s.to_string()));
        }
    }
    Ok(left_cosets(g, h)?.into_iter().filter(|c| c.is_fixed_by(set)).collect())
}

/// Orbits of `acting` on `cosets` by left multiplication, with exact stabilizers.
pub fn coset_orbits(acting: &PermGroup, cosets: &[Coset]) -> Result<Vec<CosetOrbit>> {
    if cosets.is_empty() {
        return Ok(Vec::new());
    }
    let index: HashMap<&Perm, usize> = cosets.iter().enumerate().map(|(i, c)| (&c.representative, i)).collect();
    let gens = acting.generators();
    let mut orbit_of = vec![usize::MAX; cosets.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..cosets.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit_of[start] = id;
        let mut members = vec![start];
        let mut cursor = 0;
        while cursor < members.len() {
            let current = &cosets[members[cursor]];
            cursor += 1;
            for s in gens {
                let moved = current.act(s);
                let j = *index.get(&moved.representative).ok_or(Error::ActionNotClosed)?;
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = id;
                    members.push(j);
                }
            }
        }
        orbits.push(members);
    }
    let mut out: Vec<CosetOrbit> = orbits
        .into_iter()
        .map(|members| {
            let rep = members.iter().map(|&i| &cosets[i]).min().expect("non-empty orbit").clone();
            let h = rep.subgroup.clone();
            let g = rep.representative.clone();
            let stabilizer = acting.filter(|c| h.contains(&c.conjugate_by(&g)));
            CosetOrbit { representative: rep, size: members.len(), stabilizer }
        })
        .collect();
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::group::centralizer;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(n, s).unwrap()
    }

    fn klein_blocks() -> PermGroup {
        PermGroup::block_product(2, 2).unwrap()
    }

    #[test]
    fn left_coset_counts() {
        let s4 = PermGroup::symmetric(4).unwrap();
        let cosets = left_cosets(&s4, &klein_blocks()).unwrap();
        assert_eq!(cosets.len(), 6);
        // exhaustive check: the cosets partition S4
        let mut all: Vec<Perm> = cosets
            .iter()
            .flat_map(|c| klein_blocks().elements().iter().map(|h| c.representative().compose(h)).collect::<Vec<_>>())
            .collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 24);
        assert_eq!(left_cosets(&s4, &s4).unwrap().len(), 1);
        let s3 = PermGroup::symmetric(3).unwrap();
        let a3 = PermGroup::generate(3, &[p(3, "(0 1 2)")]).unwrap();
        assert_eq!(left_cosets(&s3, &a3).unwrap().len(), 2);
    }

    #[test]
    fn left_cosets_requires_subgroup() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let other = PermGroup::generate(3, &[p(3, "(0 1)")]).unwrap();
        let a3 = PermGroup::generate(3, &[p(3, "(0 1 2)")]).unwrap();
        assert!(matches!(left_cosets(&a3, &other), Err(Error::NotSubgroup(_))));
        assert!(left_cosets(&s3, &other).is_ok());
    }

    #[test]
    fn canonical_representatives_are_minimal() {
        let s4 = PermGroup::symmetric(4).unwrap();
        let h = klein_blocks();
        for c in left_cosets(&s4, &h).unwrap() {
            for x in h.elements() {
                let y = c.representative().compose(x);
                assert!(c.representative() <= &y);
                assert_eq!(Coset::of(&y, &h), c);
            }
        }
    }

    #[test]
    fn fixed_coset_examples() {
        for prime in [2usize, 3, 5] {
            let sp = PermGroup::symmetric(prime).unwrap();
            let e = PermGroup::generate(prime, &[]).unwrap();
            let cycle = Perm::from_cycles(prime, &[(0..prime).collect()]).unwrap();
            assert!(fixed_cosets(&sp, &e, &[cycle]).unwrap().is_empty());
        }
        let s4 = PermGroup::symmetric(4).unwrap();
        let h = klein_blocks();
        assert_eq!(fixed_cosets(&s4, &h, &[p(4, "(0 1)(2 3)")]).unwrap().len(), 2);
        assert_eq!(fixed_cosets(&s4, &h, &[s4.identity()]).unwrap().len(), 6);
    }

    #[test]
    fn orbit_examples() {
        let s4 = PermGroup::symmetric(4).unwrap();
        let h = klein_blocks();
        let alpha = p(4, "(0 1)(2 3)");
        let d8 = centralizer(&s4, std::slice::from_ref(&alpha)).unwrap();
        let fixed = fixed_cosets(&s4, &h, &[alpha]).unwrap();
        let orbits = coset_orbits(&d8, &fixed).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].stabilizer.order(), 4);

        let all = left_cosets(&s4, &h).unwrap();
        let orbits = coset_orbits(&s4, &all).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].stabilizer, h);

        let trivial = PermGroup::generate(4, &[]).unwrap();
        let orbits = coset_orbits(&trivial, &all).unwrap();
        assert_eq!(orbits.len(), 6);
        assert!(orbits.iter().all(|o| o.size == 1 && o.stabilizer.order() == 1));
    }

    #[test]
    fn orbit_action_must_close() {
        let s4 = PermGroup::symmetric(4).unwrap();
        let h = klein_blocks();
        let fixed = fixed_cosets(&s4, &h, &[p(4, "(0 1)(2 3)")]).unwrap();
        assert_eq!(coset_orbits(&s4, &fixed).unwrap_err(), Error::ActionNotClosed);
    }

    #[test]
    fn orbit_stabilizer_and_fixed_point_agreement() {
        let s4 = PermGroup::symmetric(4).unwrap();
        let h = klein_blocks();
        let all = left_cosets(&s4, &h).unwrap();
        for gens in [vec!["(0 1)(2 3)"], vec!["(0 1 2 3)"], vec!["(0 1)"], vec!["(0 2)(1 3)", "(0 1)(2 3)"]] {
            let set: Vec<Perm> = gens.iter().map(|s| p(4, s)).collect();
            let acting = PermGroup::generate(4, &set).unwrap();
            let orbits = coset_orbits(&acting, &all).unwrap();
            assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), all.len());
            for o in &orbits {
                assert_eq!(o.size * o.stabilizer.order(), acting.order());
            }
            // fixed cosets are exactly those whose stabilizer is the whole acting group
            let fixed = fixed_cosets(&s4, &h, &set).unwrap();
            let full: Vec<Coset> = orbits
                .iter()
                .filter(|o| o.stabilizer.order() == acting.order())
                .map(|o| o.representative.clone())
                .collect();
            assert_eq!(fixed, full);
        }
    }
}
