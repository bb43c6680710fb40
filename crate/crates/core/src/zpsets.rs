//! Conjugacy classes of homomorphisms `Λ = (Z/p^k)^h → Σ_N`, described as
//! isomorphism classes of finite `Λ`-sets: a multiset of transitive orbit
//! types, each determined by its kernel.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::abelianp::{enumerate_subgroups, AbSubgroup, Homocyclic};
use crate::arith::{checked_pow, factorial, log_p, require_prime};
use crate::error::{Error, Result};
use crate::limits;
use crate::permcore::Perm;

/// `Λ = (Z/p^k)^h`, the finite quotient every continuous `Z_p^h → Σ_{p^k}` factors through.
pub type Lambda = Homocyclic;

pub fn lambda(p: u32, h: u32, k: u32) -> Result<Lambda> {
    Homocyclic::new(p, k, h)
}

/// One transitive orbit type `Λ/U` together with how many copies occur.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitType {
    pub kernel: AbSubgroup,
    pub multiplicity: usize,
}

impl OrbitType {
    /// Number of points in one orbit, `[Λ : U]`.
    pub fn size(&self) -> usize {
        self.kernel.index()
    }

    fn key(&self) -> (usize, &[u32]) {
        (self.size(), self.kernel.elements())
    }
}

/// Conjugacy-class invariant of a homomorphism `Λ → Σ_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomClass {
    lambda: Lambda,
    degree: usize,
    orbit_types: Vec<OrbitType>,
}

impl HomClass {
    /// Validating constructor; the orbit types may be given in any order.
    pub fn new(lambda: Lambda, mut orbit_types: Vec<OrbitType>) -> Result<Self> {
        orbit_types.retain(|t| t.multiplicity > 0);
        orbit_types.sort_by(|a, b| a.key().cmp(&b.key()));
        for t in &orbit_types {
            if t.kernel.ambient() != lambda {
                return Err(Error::BadParameters("orbit kernel lives in a different Λ".into()));
            }
        }
        if orbit_types.windows(2).any(|w| w[0].kernel == w[1].kernel) {
            return Err(Error::BadParameters("repeated orbit kernel".into()));
        }
        let degree = orbit_types.iter().map(|t| t.multiplicity * t.size()).sum();
        Ok(HomClass { lambda, degree, orbit_types })
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn orbit_types(&self) -> &[OrbitType] {
        &self.orbit_types
    }

    /// Orbit kernels listed once per orbit, in canonical order.
    fn expanded(&self) -> impl Iterator<Item = (usize, &[u32])> + '_ {
        self.orbit_types
            .iter()
            .flat_map(|t| std::iter::repeat_n(t.key(), t.multiplicity))
    }

    /// Stable textual identifier such as `p2.k2.h1:[(ann{0,2}:idx2,m2)]`.
    ///
    /// Each kernel `U` is written through its annihilator, which has order
    /// `[Λ:U]` and so stays short.
    pub fn id(&self) -> String {
        let l = self.lambda;
        let mut s = format!("p{}.k{}.h{}", l.p(), l.exponent(), l.rank());
        if self.degree as u64 != l.modulus() as u64 {
            s.push_str(&format!(".n{}", self.degree));
        }
        let types: Vec<String> = self
            .orbit_types
            .iter()
            .map(|t| format!("(ann{}:idx{},m{})", t.kernel.annihilator(), t.size(), t.multiplicity))
            .collect();
        format!("{s}:[{}]", types.join(","))
    }

    /// Disjoint union of `Λ`-sets.
    pub fn disjoint_union(lambda: Lambda, parts: &[HomClass]) -> Result<HomClass> {
        let mut merged: HashMap<AbSubgroup, usize> = HashMap::new();
        for part in parts {
            for t in &part.orbit_types {
                *merged.entry(t.kernel.clone()).or_default() += t.multiplicity;
            }
        }
        let types = merged.into_iter().map(|(kernel, multiplicity)| OrbitType { kernel, multiplicity }).collect();
        HomClass::new(lambda, types)
    }
}

impl PartialOrd for HomClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Classes compare by their orbit lists (one entry per orbit, ordered by
/// orbit size then kernel), so for `Σ_4` the order is `e, (01), (01)(23), (0123)`.
impl Ord for HomClass {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.lambda, self.degree)
            .cmp(&(other.lambda, other.degree))
            .then_with(|| self.expanded().cmp(other.expanded()))
    }
}

impl fmt::Display for HomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Pairwise commuting permutations, the images of the standard generators of `Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommutingTuple {
    perms: Vec<Perm>,
}

impl CommutingTuple {
    pub fn new(lambda: Lambda, perms: Vec<Perm>) -> Result<Self> {
        validate_tuple(lambda, &perms)?;
        Ok(CommutingTuple { perms })
    }

    pub fn perms(&self) -> &[Perm] {
        &self.perms
    }

    pub fn into_perms(self) -> Vec<Perm> {
        self.perms
    }
}

fn validate_tuple(lambda: Lambda, perms: &[Perm]) -> Result<usize> {
    if perms.len() != lambda.rank() as usize {
        return Err(Error::BadParameters(format!("expected {} permutations, got {}", lambda.rank(), perms.len())));
    }
    let degree = perms.first().map_or(0, Perm::degree);
    for s in perms {
        if s.degree() != degree {
            return Err(Error::DegreeMismatch { expected: degree, found: s.degree() });
        }
    }
    for (i, a) in perms.iter().enumerate() {
        for b in &perms[i + 1..] {
            if !a.commutes_with(b) {
                return Err(Error::NotCommuting);
            }
        }
        if !a.pow(lambda.modulus() as u64).is_identity() {
            return Err(Error::OrderNotPPower(a.to_string()));
        }
    }
    Ok(degree)
}

/// Transitive `Λ`-sets of size at most `max_size`, as kernels in canonical order.
///
/// Index-`p^j` subgroups are the annihilators of order-`p^j` subgroups.
pub fn transitive_types(lambda: Lambda, max_size: usize) -> Result<Vec<AbSubgroup>> {
    lambda.require_small()?;
    let p = lambda.p() as usize;
    let mut kernels = Vec::new();
    let mut size = 1usize;
    while size <= max_size && size <= lambda.order() {
        for dual in enumerate_subgroups(lambda, size)? {
            kernels.push(dual.annihilator());
        }
        size *= p;
    }
    kernels.sort_by(|a, b| (a.index(), a.elements()).cmp(&(b.index(), b.elements())));
    Ok(kernels)
}

/// All classes of homomorphisms `Λ → Σ_degree`, sorted.
pub fn enumerate_classes(lambda: Lambda, degree: usize) -> Result<Vec<HomClass>> {
    let kernels = transitive_types(lambda, degree)?;
    let mut out = Vec::new();
    let mut chosen: Vec<OrbitType> = Vec::new();
    fill(lambda, &kernels, 0, degree, &mut chosen, &mut out)?;
    out.sort();
    Ok(out)
}

fn fill(
    lambda: Lambda,
    kernels: &[AbSubgroup],
    from: usize,
    remaining: usize,
    chosen: &mut Vec<OrbitType>,
    out: &mut Vec<HomClass>,
) -> Result<()> {
    if remaining == 0 {
        out.push(HomClass::new(lambda, chosen.clone())?);
        return limits::check("hom-class enumeration", out.len(), limits::max_elements());
    }
    for i in from..kernels.len() {
        let size = kernels[i].index();
        for mult in 1..=remaining / size {
            chosen.push(OrbitType { kernel: kernels[i].clone(), multiplicity: mult });
            fill(lambda, kernels, i + 1, remaining - mult * size, chosen, out)?;
            chosen.pop();
        }
    }
    Ok(())
}

/// Classes of `Z_p^h → Σ_{p^k}` up to conjugacy.
pub fn enumerate_hom_classes(p: u32, h: u32, k: u32) -> Result<Vec<HomClass>> {
    require_prime(p as u64)?;
    let points = checked_pow(p as u64, k)?;
    limits::check("p^k", points as usize, 16)?;
    let lam = lambda(p, h, k)?;
    enumerate_classes(lam, points as usize)
}

/// Point layout of a realized class: one entry per orbit.
#[derive(Clone, Debug)]
pub(crate) struct OrbitSlot {
    pub type_index: usize,
    pub start: usize,
    pub size: usize,
}

/// Cosets of `U` in `Λ`, numbered in order of their least element.
fn coset_numbering(u: &AbSubgroup) -> Vec<usize> {
    let lam = u.ambient();
    let mut label = vec![usize::MAX; lam.order()];
    let mut next = 0;
    for x in lam.all() {
        if label[x as usize] == usize::MAX {
            for &y in u.elements() {
                label[lam.add(x, y) as usize] = next;
            }
            next += 1;
        }
    }
    label
}

fn unit_vector(lam: Lambda, j: usize) -> u32 {
    let mut coords = vec![0; lam.rank() as usize];
    coords[j] = 1;
    lam.encode(&coords)
}

pub(crate) fn realize_with_layout(hc: &HomClass) -> (Vec<Perm>, Vec<OrbitSlot>) {
    let lam = hc.lambda;
    let h = lam.rank() as usize;
    let mut images: Vec<Vec<usize>> = vec![(0..hc.degree).collect(); h];
    let mut layout = Vec::new();
    let mut start = 0;
    for (ti, t) in hc.orbit_types.iter().enumerate() {
        let label = coset_numbering(&t.kernel);
        // representative λ for each coset number
        let mut rep = vec![0u32; t.size()];
        for x in lam.all().rev() {
            rep[label[x as usize]] = x;
        }
        for _ in 0..t.multiplicity {
            for (j, img) in images.iter_mut().enumerate() {
                let e = unit_vector(lam, j);
                for (c, &r) in rep.iter().enumerate() {
                    img[start + c] = start + label[lam.add(r, e) as usize];
                }
            }
            layout.push(OrbitSlot { type_index: ti, start, size: t.size() });
            start += t.size();
        }
    }
    let perms = images.iter().map(|v| Perm::from_images(v).expect("coset action is a bijection")).collect();
    (perms, layout)
}

/// A concrete commuting tuple in the class, points grouped orbit by orbit
/// and labelled by cosets `Λ/U` in order of least element.
pub fn realize(hc: &HomClass) -> CommutingTuple {
    CommutingTuple { perms: realize_with_layout(hc).0 }
}

/// Orbit decomposition of the `Λ`-action defined by a commuting tuple.
pub fn classify(perms: &[Perm], lam: Lambda) -> Result<HomClass> {
    let degree = validate_tuple(lam, perms)?;
    lam.require_small()?;
    let m = lam.modulus();
    let h = lam.rank() as usize;
    // For each λ ≠ 0: its last non-zero coordinate and λ minus that unit vector.
    let steps: Vec<(usize, u32)> = lam
        .all()
        .map(|x| {
            if x == 0 {
                return (0, 0);
            }
            let (mut t, mut j, mut place) = (x, h - 1, 1u32);
            while t % m == 0 {
                t /= m;
                j -= 1;
                place *= m;
            }
            (j, x - place)
        })
        .collect();
    let mut seen = vec![false; degree];
    let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
    for x0 in 0..degree {
        if seen[x0] {
            continue;
        }
        let mut pos = vec![x0; lam.order()];
        let mut kernel = vec![0u32];
        seen[x0] = true;
        for x in 1..lam.order() {
            let (j, prev) = steps[x];
            let y = perms[j].image(pos[prev as usize]);
            pos[x] = y;
            seen[y] = true;
            if y == x0 {
                kernel.push(x as u32);
            }
        }
        *counts.entry(kernel).or_default() += 1;
    }
    let types = counts
        .into_iter()
        .map(|(kernel, multiplicity)| OrbitType { kernel: AbSubgroup::from_sorted_unchecked(lam, kernel), multiplicity })
        .collect();
    HomClass::new(lam, types)
}

/// `|C_{Σ_N}(im α)| = ∏ [Λ:U_i]^{m_i} · m_i!`, the order of `∏ (Λ/U_i) ≀ Σ_{m_i}`.
pub fn centralizer_order(hc: &HomClass) -> u128 {
    hc.orbit_types
        .iter()
        .map(|t| (t.size() as u128).pow(t.multiplicity as u32) * factorial(t.multiplicity as u64))
        .product()
}

/// Least `m` such that the class lifts to `Σ_{p^m}^{×p^{k-m}}`.
///
/// This is the largest orbit-size exponent: orbits have `p`-power sizes at
/// most `p^m`, and sorting them by decreasing size and filling blocks of
/// size `p^m` in turn never splits an orbit, because each running total is
/// then a multiple of every later orbit size.
pub fn minimal_level(hc: &HomClass) -> u32 {
    hc.orbit_types
        .iter()
        .map(|t| log_p(hc.lambda.p() as u64, t.size() as u64).expect("orbit sizes are p-powers"))
        .max()
        .unwrap_or(0)
}

/// True when all orbits share one kernel, i.e. the class factors through
/// the diagonal `Σ_{p^m} → Σ_{p^m}^{×p^{k-m}}`.
pub fn is_isotypic(hc: &HomClass) -> bool {
    hc.orbit_types.len() <= 1
}

/// `ker α = ∩ U_i`.
pub fn kernel(hc: &HomClass) -> AbSubgroup {
    hc.orbit_types
        .iter()
        .fold(AbSubgroup::full(hc.lambda), |acc, t| acc.intersection(&t.kernel))
}

/// Image of the Pontryagin dual of `im α`: the annihilator of `ker α`.
pub fn dual_image(hc: &HomClass) -> AbSubgroup {
    kernel(hc).annihilator()
}

/// The block subgroup `Σ_{p^level}^{×count}` of `Σ_{p^level · count}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    pub level: u32,
    pub count: usize,
}

impl BlockSpec {
    pub fn block_size(&self, p: u32) -> usize {
        (p as usize).pow(self.level)
    }
}

/// One `C(im α)`-orbit of `α`-fixed cosets of a block subgroup `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberOrbit {
    /// Least coset representative `g` in the orbit.
    pub representative: Perm,
    /// `[g⁻¹ α g]` as an ordered tuple of classes, one per block of `H`.
    pub block_classes: Vec<HomClass>,
    /// Orbit size, equal to `[C(im α) : Stab(gH)]`.
    pub orbit_size: usize,
    pub stabilizer_order: u128,
}

/// `(G/H)^{im α} / C(im α)` for `G = Σ_N` and a block subgroup `H`.
///
/// Fixed cosets are ordered block partitions whose blocks are unions of
/// `α`-orbits; the centralizer acts through its wreath-product generators.
pub fn coset_fiber(hc: &HomClass, blocks: BlockSpec) -> Result<Vec<FiberOrbit>> {
    let p = hc.lambda.p();
    let bs = blocks.block_size(p);
    if bs * blocks.count != hc.degree {
        return Err(Error::BadParameters(format!(
            "blocks {}×{} do not cover {} points",
            blocks.count, bs, hc.degree
        )));
    }
    if blocks.count > u8::MAX as usize {
        return Err(Error::ResourceLimit("too many blocks".into()));
    }
    let (perms, layout) = realize_with_layout(hc);
    let labellings = block_labellings(&layout, bs, blocks.count, hc.degree)?;
    if labellings.is_empty() {
        return Ok(Vec::new());
    }
    let index: HashMap<&Vec<u8>, usize> = labellings.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let gens = centralizer_generators(hc, &perms, &layout);
    let c_order = centralizer_order(hc);

    let mut orbit_of = vec![usize::MAX; labellings.len()];
    let mut out = Vec::new();
    for start in 0..labellings.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        orbit_of[start] = start;
        let mut members = vec![start];
        let mut cursor = 0;
        while cursor < members.len() {
            let labels = &labellings[members[cursor]];
            cursor += 1;
            for c in &gens {
                let mut moved = vec![0u8; labels.len()];
                for (x, &l) in labels.iter().enumerate() {
                    moved[c.image(x)] = l;
                }
                let j = *index
                    .get(&moved)
                    .ok_or_else(|| Error::InternalMismatch("centralizer moved a fixed coset off the list".into()))?;
                if orbit_of[j] == usize::MAX {
                    orbit_of[j] = start;
                    members.push(j);
                }
            }
        }
        let (rep_index, representative) = members
            .iter()
            .map(|&i| (i, labels_to_perm(&labellings[i], bs, blocks.count)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("non-empty orbit");
        let block_classes = block_classes_of(hc, &layout, &labellings[rep_index], blocks.count)?;
        let orbit_size = members.len();
        out.push(FiberOrbit {
            representative,
            block_classes,
            orbit_size,
            stabilizer_order: c_order / orbit_size as u128,
        });
    }
    out.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(out)
}

/// Assignments of orbits to blocks filling each block exactly, as per-point block labels.
fn block_labellings(layout: &[OrbitSlot], bs: usize, count: usize, degree: usize) -> Result<Vec<Vec<u8>>> {
    fn go(
        layout: &[&OrbitSlot],
        i: usize,
        room: &mut [usize],
        labels: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
    ) -> Result<()> {
        if i == layout.len() {
            out.push(labels.clone());
            return limits::check("fixed coset count", out.len(), limits::MAX_COSETS);
        }
        let slot = &layout[i];
        for b in 0..room.len() {
            if room[b] >= slot.size {
                room[b] -= slot.size;
                labels[slot.start..slot.start + slot.size].fill(b as u8);
                go(layout, i + 1, room, labels, out)?;
                room[b] += slot.size;
            }
        }
        Ok(())
    }
    if layout.iter().any(|s| s.size > bs) {
        return Ok(Vec::new());
    }
    // largest orbits first, so dead ends are found early
    let mut order: Vec<&OrbitSlot> = layout.iter().collect();
    order.sort_by_key(|s| std::cmp::Reverse(s.size));
    let mut room = vec![bs; count];
    let mut labels = vec![0u8; degree];
    let mut out = Vec::new();
    go(&order, 0, &mut room, &mut labels, &mut out)?;
    out.sort();
    Ok(out)
}

/// Least `g` with `g(block i) = {x : label(x) = i}` for every block.
fn labels_to_perm(labels: &[u8], bs: usize, count: usize) -> Perm {
    let mut images = vec![0usize; labels.len()];
    let mut filled = vec![0usize; count];
    for (x, &l) in labels.iter().enumerate() {
        let b = l as usize;
        images[b * bs + filled[b]] = x;
        filled[b] += 1;
    }
    Perm::from_images(&images).expect("labels fill every block")
}

fn block_classes_of(hc: &HomClass, layout: &[OrbitSlot], labels: &[u8], count: usize) -> Result<Vec<HomClass>> {
    let mut per_block: Vec<HashMap<usize, usize>> = vec![HashMap::new(); count];
    for slot in layout {
        *per_block[labels[slot.start] as usize].entry(slot.type_index).or_default() += 1;
    }
    per_block
        .into_iter()
        .map(|counts| {
            let types = counts
                .into_iter()
                .map(|(ti, multiplicity)| OrbitType { kernel: hc.orbit_types[ti].kernel.clone(), multiplicity })
                .collect();
            HomClass::new(hc.lambda, types)
        })
        .collect()
}

/// Generators of `∏ (Λ/U_i) ≀ Σ_{m_i}` on the realized points.
fn centralizer_generators(hc: &HomClass, perms: &[Perm], layout: &[OrbitSlot]) -> Vec<Perm> {
    let n = hc.degree;
    let mut gens = Vec::new();
    for ti in 0..hc.orbit_types.len() {
        let copies: Vec<&OrbitSlot> = layout.iter().filter(|s| s.type_index == ti).collect();
        let first = copies[0];
        for sigma in perms {
            let mut img: Vec<usize> = (0..n).collect();
            for x in first.start..first.start + first.size {
                img[x] = sigma.image(x);
            }
            gens.push(Perm::from_images(&img).expect("restriction to an orbit"));
        }
        if copies.len() >= 2 {
            let mut swap: Vec<usize> = (0..n).collect();
            let second = copies[1];
            for i in 0..first.size {
                swap[first.start + i] = second.start + i;
                swap[second.start + i] = first.start + i;
            }
            gens.push(Perm::from_images(&swap).expect("copy swap"));
            let mut cycle: Vec<usize> = (0..n).collect();
            for (c, slot) in copies.iter().enumerate() {
                let next = copies[(c + 1) % copies.len()];
                for i in 0..slot.size {
                    cycle[slot.start + i] = next.start + i;
                }
            }
            gens.push(Perm::from_images(&cycle).expect("copy cycle"));
        }
    }
    gens.retain(|g| !g.is_identity());
    gens
}

/// `|i_*⁻¹([α])|`: ordered tuples of block classes whose union is `[α]`.
/// Independent of [`coset_fiber`]; used to check the orbit bijection.
pub fn block_preimage_count(hc: &HomClass, blocks: BlockSpec) -> Result<usize> {
    let bs = blocks.block_size(hc.lambda.p());
    let block_classes = enumerate_classes(hc.lambda, bs)?;
    let total = (block_classes.len() as u128).pow(blocks.count as u32);
    limits::check("block class tuples", usize::try_from(total).unwrap_or(usize::MAX), limits::max_elements())?;
    let mut count = 0;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut choice = vec![0usize; blocks.count];
    loop {
        let parts: Vec<HomClass> = choice.iter().map(|&i| block_classes[i].clone()).collect();
        if HomClass::disjoint_union(hc.lambda, &parts)? == *hc && seen.insert(choice.clone()) {
            count += 1;
        }
        // odometer
        let mut pos = 0;
        while pos < choice.len() {
            choice[pos] += 1;
            if choice[pos] < block_classes.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == choice.len() {
            break;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::{centralizer, conjugating_element, PermGroup};

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse(n, s).unwrap()
    }

    fn class_of(lam: Lambda, perms: &[&str]) -> HomClass {
        let n = lam.modulus() as usize;
        let tuple: Vec<Perm> = perms.iter().map(|s| p(n, s)).collect();
        classify(&tuple, lam).unwrap()
    }

    /// Brute-force oracle: commuting h-tuples of elements with σ^{p^k} = e in Σ_N.
    fn commuting_tuples(n: usize, h: usize, modulus: u64) -> Vec<Vec<Perm>> {
        let sn = PermGroup::symmetric(n).unwrap();
        let elems: Vec<Perm> = sn.elements().iter().filter(|g| g.pow(modulus).is_identity()).cloned().collect();
        let mut tuples: Vec<Vec<Perm>> = vec![vec![]];
        for _ in 0..h {
            let mut next = Vec::new();
            for t in &tuples {
                for e in &elems {
                    if t.iter().all(|x| x.commutes_with(e)) {
                        let mut u = t.clone();
                        u.push(e.clone());
                        next.push(u);
                    }
                }
            }
            tuples = next;
        }
        tuples
    }

    /// Brute-force oracle: conjugacy classes of tuples by exhaustive search.
    fn conjugacy_class_count(n: usize, h: usize, modulus: u64) -> usize {
        let sn = PermGroup::symmetric(n).unwrap();
        let mut seen: HashSet<Vec<Perm>> = HashSet::new();
        let mut classes = 0;
        for t in commuting_tuples(n, h, modulus) {
            if seen.contains(&t) {
                continue;
            }
            classes += 1;
            for g in sn.elements() {
                seen.insert(t.iter().map(|x| x.conjugate_by(g)).collect());
            }
        }
        classes
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_hom_classes(2, 1, 2).unwrap().len(), 4);
        for prime in [2, 3, 5] {
            assert_eq!(enumerate_hom_classes(prime, 1, 1).unwrap().len(), 2);
        }
        assert_eq!(enumerate_hom_classes(2, 2, 1).unwrap().len(), 4);
        assert_eq!(conjugacy_class_count(2, 2, 2), 4);
    }

    #[test]
    fn enumerate_matches_brute_force() {
        for (prime, h, k) in [(2u32, 1u32, 2u32), (2, 2, 2), (3, 1, 1), (3, 2, 1), (2, 3, 1), (5, 1, 1)] {
            let n = prime.pow(k) as usize;
            let classes = enumerate_hom_classes(prime, h, k).unwrap();
            assert_eq!(classes.len(), conjugacy_class_count(n, h as usize, n as u64), "p={prime} h={h} k={k}");
        }
    }

    #[test]
    fn enumerate_guards() {
        assert_eq!(enumerate_hom_classes(4, 1, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(enumerate_hom_classes(2, 1, 5), Err(Error::ResourceLimit(_))));
        assert!(matches!(enumerate_hom_classes(2, 4, 4), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn sigma4_order_and_ids() {
        let classes = enumerate_hom_classes(2, 1, 2).unwrap();
        let lam = lambda(2, 1, 2).unwrap();
        let expected = [
            class_of(lam, &["()"]),
            class_of(lam, &["(0 1)"]),
            class_of(lam, &["(0 1)(2 3)"]),
            class_of(lam, &["(0 1 2 3)"]),
        ];
        assert_eq!(classes, expected);
        assert_eq!(classes[2].id(), "p2.k2.h1:[(ann{0,2}:idx2,m2)]");
        let orders: Vec<u128> = classes.iter().map(centralizer_order).collect();
        assert_eq!(orders, vec![24, 4, 8, 4]);
    }

    #[test]
    fn realize_examples() {
        let lam = lambda(2, 1, 1).unwrap();
        let classes = enumerate_hom_classes(2, 1, 1).unwrap();
        assert_eq!(realize(&classes[0]).perms(), &[Perm::identity(2)]);
        assert_eq!(realize(&classes[1]).perms(), &[p(2, "(0 1)")]);
        assert_eq!(classify(realize(&classes[1]).perms(), lam).unwrap(), classes[1]);
        let lam4 = lambda(2, 1, 2).unwrap();
        let c = class_of(lam4, &["(0 2)(1 3)"]);
        assert_eq!(realize(&c).perms(), &[p(4, "(0 1)(2 3)")]);
        let lam22 = lambda(2, 2, 1).unwrap();
        let fixed = &enumerate_hom_classes(2, 2, 1).unwrap()[0];
        assert_eq!(realize(fixed).perms(), &[Perm::identity(2), Perm::identity(2)]);
        assert_eq!(classify(realize(fixed).perms(), lam22).unwrap(), *fixed);
    }

    #[test]
    fn classify_examples() {
        let lam = lambda(2, 1, 2).unwrap();
        let c = class_of(lam, &["(0 1)(2 3)"]);
        assert_eq!(c.orbit_types().len(), 1);
        assert_eq!(c.orbit_types()[0].size(), 2);
        assert_eq!(c.orbit_types()[0].multiplicity, 2);
        let c = class_of(lam, &["(0 1 2 3)"]);
        assert_eq!(c.orbit_types()[0].kernel, AbSubgroup::trivial(lam));
        assert_eq!(c.orbit_types()[0].multiplicity, 1);
        let c = class_of(lam, &["()"]);
        assert_eq!(c.orbit_types()[0].kernel, AbSubgroup::full(lam));
    }

    #[test]
    fn classify_errors() {
        let lam = lambda(2, 2, 1).unwrap();
        let err = classify(&[p(3, "(0 1)"), p(3, "(1 2)")], lam).unwrap_err();
        assert_eq!(err, Error::NotCommuting);
        let lam = lambda(2, 1, 1).unwrap();
        assert!(matches!(classify(&[p(3, "(0 1 2)")], lam), Err(Error::OrderNotPPower(_))));
    }

    #[test]
    fn round_trip_every_class() {
        for (prime, h, k) in [(2u32, 1u32, 3u32), (2, 2, 2), (3, 2, 1), (3, 1, 2), (2, 3, 1)] {
            let lam = lambda(prime, h, k).unwrap();
            for hc in enumerate_hom_classes(prime, h, k).unwrap() {
                assert_eq!(classify(realize(&hc).perms(), lam).unwrap(), hc);
            }
        }
    }

    #[test]
    fn conjugacy_oracle() {
        for (prime, h, k) in [(2u32, 1u32, 2u32), (2, 2, 1), (3, 1, 1), (2, 2, 2)] {
            let n = prime.pow(k) as usize;
            let sn = PermGroup::symmetric(n).unwrap();
            let lam = lambda(prime, h, k).unwrap();
            let tuples = commuting_tuples(n, h as usize, n as u64);
            // sample pairs deterministically
            for (i, a) in tuples.iter().enumerate().step_by(7) {
                for b in tuples.iter().skip(i % 5).step_by(11) {
                    let same = classify(a, lam).unwrap() == classify(b, lam).unwrap();
                    let g = conjugating_element(&sn, a, b).unwrap();
                    assert_eq!(same, g.is_some());
                    if let Some(g) = g {
                        let gi = g.inverse();
                        assert!(a.iter().zip(b).all(|(x, y)| &x.conjugate_by(&gi) == y));
                    }
                }
            }
        }
    }

    #[test]
    fn counting_identity() {
        for (prime, h, k) in [(2u32, 1u32, 1u32), (2, 1, 2), (2, 2, 2), (3, 1, 1), (3, 2, 1), (5, 1, 1), (2, 3, 1)] {
            let n = prime.pow(k) as usize;
            if n > 6 {
                continue;
            }
            let group_order = factorial(n as u64);
            let total: u128 = enumerate_hom_classes(prime, h, k)
                .unwrap()
                .iter()
                .map(|hc| group_order / centralizer_order(hc))
                .sum();
            assert_eq!(total, commuting_tuples(n, h as usize, n as u64).len() as u128);
        }
    }

    #[test]
    fn centralizer_order_matches_group() {
        for (prime, h, k) in [(2u32, 1u32, 2u32), (2, 2, 2), (3, 1, 1), (2, 1, 3), (2, 2, 1)] {
            let n = prime.pow(k) as usize;
            let sn = PermGroup::symmetric(n).unwrap();
            for hc in enumerate_hom_classes(prime, h, k).unwrap() {
                let c = centralizer(&sn, realize(&hc).perms()).unwrap();
                assert_eq!(c.order() as u128, centralizer_order(&hc), "{hc}");
            }
        }
    }

    #[test]
    fn level_isotypy_and_duals() {
        let lam = lambda(2, 1, 2).unwrap();
        let fixed = class_of(lam, &["()"]);
        let cyc = class_of(lam, &["(0 1 2 3)"]);
        let transp = class_of(lam, &["(0 1)"]);
        let dbl = class_of(lam, &["(0 1)(2 3)"]);
        assert_eq!(minimal_level(&fixed), 0);
        assert_eq!(minimal_level(&cyc), 2);
        assert_eq!(minimal_level(&transp), 1);
        assert!(is_isotypic(&dbl));
        assert!(!is_isotypic(&transp));
        assert!(is_isotypic(&fixed));
        assert_eq!(dual_image(&fixed), AbSubgroup::trivial(lam));
        assert_eq!(dual_image(&cyc), AbSubgroup::full(lam));
        assert_eq!(dual_image(&dbl).elements(), &[0, 2]);
        assert_eq!(dual_image(&transp).elements(), &[0, 2]);
    }

    #[test]
    fn minimal_level_is_least_lifting_level() {
        for (prime, h, k) in [(2u32, 1u32, 3u32), (2, 2, 2), (3, 1, 2), (3, 2, 1)] {
            for hc in enumerate_hom_classes(prime, h, k).unwrap() {
                let lifts = |level: u32| {
                    let blocks = BlockSpec { level, count: prime.pow(k - level) as usize };
                    !coset_fiber(&hc, blocks).unwrap().is_empty()
                };
                let m = minimal_level(&hc);
                if m == 0 {
                    // only the trivial action lifts to the trivial subgroup
                    assert_eq!(hc.orbit_types().len(), 1);
                    assert_eq!(hc.orbit_types()[0].size(), 1);
                    continue;
                }
                assert!(lifts(m));
                assert!(!lifts(m - 1), "{hc} lifts below level {m}");
            }
        }
    }

    #[test]
    fn fiber_examples() {
        let lam = lambda(2, 1, 2).unwrap();
        let blocks = BlockSpec { level: 1, count: 2 };
        let transp = class_of(lam, &["(0 1)"]);
        let orbits = coset_fiber(&transp, blocks).unwrap();
        assert_eq!(orbits.len(), 2);
        let lam_block: Vec<Vec<String>> = orbits
            .iter()
            .map(|o| o.block_classes.iter().map(|c| c.orbit_types()[0].size().to_string()).collect())
            .collect();
        assert!(lam_block.contains(&vec!["2".to_string(), "1".to_string()]));
        assert!(lam_block.contains(&vec!["1".to_string(), "2".to_string()]));
        assert!(coset_fiber(&class_of(lam, &["(0 1 2 3)"]), blocks).unwrap().is_empty());
        let e = coset_fiber(&class_of(lam, &["()"]), blocks).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].orbit_size, 6);
        let dbl = coset_fiber(&class_of(lam, &["(0 1)(2 3)"]), blocks).unwrap();
        assert_eq!(dbl.len(), 1);
        assert_eq!(dbl[0].orbit_size, 2);
        assert_eq!(dbl[0].stabilizer_order, 4);
    }

    #[test]
    fn fiber_bijection_with_block_preimages() {
        for (prime, h, k) in [(2u32, 1u32, 2u32), (2, 2, 2), (2, 1, 3), (2, 2, 3), (3, 1, 2), (3, 2, 2)] {
            let blocks = BlockSpec { level: k - 1, count: prime as usize };
            for hc in enumerate_hom_classes(prime, h, k).unwrap() {
                let orbits = coset_fiber(&hc, blocks).unwrap();
                let distinct: HashSet<Vec<HomClass>> = orbits.iter().map(|o| o.block_classes.clone()).collect();
                assert_eq!(distinct.len(), orbits.len());
                assert_eq!(orbits.len(), block_preimage_count(&hc, blocks).unwrap(), "{hc}");
            }
        }
    }

    #[test]
    fn fiber_matches_generic_cosets() {
        use crate::permcore::{coset_orbits, fixed_cosets};
        let s4 = PermGroup::symmetric(4).unwrap();
        let h = PermGroup::block_product(2, 2).unwrap();
        for hc in enumerate_hom_classes(2, 2, 2).unwrap() {
            let alpha = realize(&hc).into_perms();
            let fixed = fixed_cosets(&s4, &h, &alpha).unwrap();
            let c = centralizer(&s4, &alpha).unwrap();
            let generic = coset_orbits(&c, &fixed).unwrap();
            let blocks = coset_fiber(&hc, BlockSpec { level: 1, count: 2 }).unwrap();
            let mut a: Vec<(Perm, usize)> = generic.iter().map(|o| (o.representative.representative().clone(), o.size)).collect();
            let mut b: Vec<(Perm, usize)> = blocks.iter().map(|o| (o.representative.clone(), o.orbit_size)).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b, "{hc}");
        }
    }
}
