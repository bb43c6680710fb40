use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits;
use crate::permcore::{format_tuple, Perm, PermGroup};
use crate::zpsets::{centralizer_order, classify, enumerate_classes, realize, HomClass, Lambda};

/// One class of `hom(Λ, G)/∼`.
#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub id: String,
    pub representative: Vec<Perm>,
    pub centralizer_order: u128,
}

#[derive(Debug)]
enum Lookup {
    /// `G` is the full symmetric group: classes are `Λ`-set invariants.
    Symmetric(HashMap<HomClass, usize>),
    /// Any other group: every hom tuple is listed with its class.
    Generic(HashMap<Vec<Perm>, usize>),
}

/// The classes of homomorphisms `Λ → G` up to `G`-conjugacy.
#[derive(Debug)]
pub struct ClassSpace {
    group: PermGroup,
    lambda: Lambda,
    classes: Vec<ClassInfo>,
    lookup: Lookup,
}

impl ClassSpace {
    /// Picks the `Λ`-set classification when `group` is a full symmetric
    /// group and exhaustive orbit enumeration otherwise.
    pub fn new(group: &PermGroup, lambda: Lambda) -> Result<Arc<Self>> {
        let n = group.degree();
        if group.order() as u128 == crate::arith::factorial(n as u64) {
            Self::symmetric(group, lambda)
        } else {
            Self::generic(group, lambda)
        }
    }

    fn symmetric(group: &PermGroup, lambda: Lambda) -> Result<Arc<Self>> {
        let classes = enumerate_classes(lambda, group.degree())?;
        let lookup = classes.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let classes = classes
            .iter()
            .map(|hc| ClassInfo {
                id: hc.id(),
                representative: realize(hc).into_perms(),
                centralizer_order: centralizer_order(hc),
            })
            .collect();
        Ok(Arc::new(ClassSpace { group: group.clone(), lambda, classes, lookup: Lookup::Symmetric(lookup) }))
    }

    /// Orbits of `G` acting by simultaneous conjugation on commuting tuples
    /// of elements whose order divides `p^k`.
    pub fn generic(group: &PermGroup, lambda: Lambda) -> Result<Arc<Self>> {
        let h = lambda.rank() as usize;
        let exponent = lambda.modulus() as u64;
        let torsion: Vec<&Perm> = group.elements().iter().filter(|g| g.pow(exponent).is_identity()).collect();
        let mut tuples: Vec<Vec<Perm>> = vec![Vec::new()];
        for _ in 0..h {
            let mut next = Vec::new();
            for t in &tuples {
                for &x in &torsion {
                    if t.iter().all(|y| y.commutes_with(x)) {
                        let mut u = t.clone();
                        u.push(x.clone());
                        next.push(u);
                        limits::check("hom tuples", next.len(), limits::max_elements())?;
                    }
                }
            }
            tuples = next;
        }
        let gens = group.generators();
        let mut orbit_of: HashMap<Vec<Perm>, usize> = HashMap::with_capacity(tuples.len());
        let mut orbits: Vec<Vec<Vec<Perm>>> = Vec::new();
        for t in &tuples {
            if orbit_of.contains_key(t) {
                continue;
            }
            let id = orbits.len();
            orbit_of.insert(t.clone(), id);
            let mut members = vec![t.clone()];
            let mut cursor = 0;
            while cursor < members.len() {
                let current = members[cursor].clone();
                cursor += 1;
                for g in gens {
                    let moved: Vec<Perm> = current.iter().map(|x| x.conjugate_by(g)).collect();
                    if !orbit_of.contains_key(&moved) {
                        orbit_of.insert(moved.clone(), id);
                        members.push(moved);
                    }
                }
            }
            orbits.push(members);
        }
        // canonical order: by least tuple of each orbit
        let mut keyed: Vec<(Vec<Perm>, usize, usize)> = orbits
            .iter()
            .enumerate()
            .map(|(i, m)| (m.iter().min().expect("non-empty orbit").clone(), i, m.len()))
            .collect();
        keyed.sort();
        let mut renumber = vec![0; orbits.len()];
        for (new, (_, old, _)) in keyed.iter().enumerate() {
            renumber[*old] = new;
        }
        let classes = keyed
            .into_iter()
            .map(|(rep, _, size)| ClassInfo {
                id: format_tuple(&rep),
                representative: rep,
                centralizer_order: (group.order() / size) as u128,
            })
            .collect();
        let lookup = orbit_of.into_iter().map(|(t, i)| (t, renumber[i])).collect();
        Ok(Arc::new(ClassSpace { group: group.clone(), lambda, classes, lookup: Lookup::Generic(lookup) }))
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &ClassInfo {
        &self.classes[i]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.id == id)
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self.lookup, Lookup::Symmetric(_))
    }

    /// Index of the class of the homomorphism given by `tuple`.
    pub fn class_of(&self, tuple: &[Perm]) -> Result<usize> {
        match &self.lookup {
            Lookup::Symmetric(map) => {
                for x in tuple {
                    if x.degree() != self.group.degree() {
                        return Err(Error::DegreeMismatch { expected: self.group.degree(), found: x.degree() });
                    }
                }
                let hc = classify(tuple, self.lambda)?;
                map.get(&hc).copied().ok_or_else(|| Error::UnknownClass(hc.id()))
            }
            Lookup::Generic(map) => map
                .get(tuple)
                .copied()
                .ok_or_else(|| Error::UnknownClass(format_tuple(tuple))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zpsets::lambda;

    #[test]
    fn symmetric_and_generic_agree() {
        for (p, h, k) in [(2u32, 1u32, 2u32), (2, 2, 2), (3, 1, 1), (3, 2, 1)] {
            let n = p.pow(k) as usize;
            let lam = lambda(p, h, k).unwrap();
            let sn = PermGroup::symmetric(n).unwrap();
            let sym = ClassSpace::new(&sn, lam).unwrap();
            let gen = ClassSpace::generic(&sn, lam).unwrap();
            assert!(sym.is_symmetric());
            assert!(!gen.is_symmetric());
            assert_eq!(sym.len(), gen.len());
            let mut sym_orders: Vec<u128> = sym.classes().iter().map(|c| c.centralizer_order).collect();
            let mut gen_orders: Vec<u128> = gen.classes().iter().map(|c| c.centralizer_order).collect();
            sym_orders.sort();
            gen_orders.sort();
            assert_eq!(sym_orders, gen_orders);
            // the two lookups induce the same partition
            for a in gen.classes() {
                for b in gen.classes() {
                    let same_sym = sym.class_of(&a.representative).unwrap() == sym.class_of(&b.representative).unwrap();
                    assert_eq!(same_sym, a.id == b.id);
                }
            }
        }
    }

    #[test]
    fn cyclic_group_classes_are_elements() {
        let z4 = PermGroup::generate(4, &[Perm::parse(4, "(0 1 2 3)").unwrap()]).unwrap();
        let space = ClassSpace::new(&z4, lambda(2, 1, 2).unwrap()).unwrap();
        assert_eq!(space.len(), 4);
        assert!(space.position("[(0 1 2 3)]").is_some());
        assert!(space.position("[(0 3 2 1)]").is_some());
        assert!(space.classes().iter().all(|c| c.centralizer_order == 4));
    }

    #[test]
    fn unknown_tuples_are_rejected() {
        let z4 = PermGroup::generate(4, &[Perm::parse(4, "(0 1 2 3)").unwrap()]).unwrap();
        let space = ClassSpace::new(&z4, lambda(2, 1, 2).unwrap()).unwrap();
        let err = space.class_of(&[Perm::parse(4, "(0 1)").unwrap()]).unwrap_err();
        assert!(matches!(err, Error::UnknownClass(_)));
    }
}
