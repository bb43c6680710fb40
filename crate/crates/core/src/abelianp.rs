//! Subgroups of homocyclic p-groups `(Z/p^K)^h`: brute-force enumeration,
//! annihilators under the standard pairing, and the closed-form count of
//! order-`p^m` subgroups of `(Q_p/Z_p)^h`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{checked_pow, require_prime};
use crate::error::{Error, Result};
use crate::limits;

/// The group `(Z/p^K)^h`. Elements are encoded as integers in mixed radix
/// `p^K` with the first coordinate most significant, so integer order is
/// lexicographic order on coordinate vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Homocyclic {
    p: u32,
    exponent: u32,
    rank: u32,
    modulus: u32,
    order: u32,
}

impl Homocyclic {
    pub fn new(p: u32, exponent: u32, rank: u32) -> Result<Self> {
        require_prime(p as u64)?;
        let modulus = checked_pow(p as u64, exponent)?;
        let order = checked_pow(modulus, rank)?;
        if order > u32::MAX as u64 / 2 {
            return Err(Error::ResourceLimit(format!("(Z/{modulus})^{rank} is too large")));
        }
        Ok(Homocyclic { p, exponent, rank, modulus: modulus as u32, order: order as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn require_small(&self) -> Result<()> {
        limits::check("ambient group order", self.order(), limits::MAX_AMBIENT_ORDER)
    }

    pub fn encode(&self, coords: &[u32]) -> u32 {
        debug_assert_eq!(coords.len(), self.rank as usize);
        coords.iter().fold(0, |acc, &c| acc * self.modulus + c % self.modulus)
    }

    pub fn decode(&self, mut x: u32) -> Vec<u32> {
        let mut out = vec![0; self.rank as usize];
        for slot in out.iter_mut().rev() {
            *slot = x % self.modulus;
            x /= self.modulus;
        }
        out
    }

    #[inline]
    fn digitwise(&self, mut a: u32, mut b: u32, f: impl Fn(u64, u64) -> u64) -> u32 {
        let m = self.modulus as u64;
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.rank {
            out += f((a % self.modulus) as u64, (b % self.modulus) as u64) % m * place;
            a /= self.modulus;
            b /= self.modulus;
            place *= m;
        }
        out as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.digitwise(a, b, |x, y| x + y)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let m = self.modulus as u64;
        self.digitwise(a, 0, |x, _| m - x)
    }

    pub fn scale(&self, a: u32, s: u32) -> u32 {
        self.digitwise(a, 0, |x, _| x * s as u64)
    }

    /// `⟨x, y⟩ = Σ x_j y_j mod p^K`.
    pub fn pairing(&self, mut a: u32, mut b: u32) -> u32 {
        let m = self.modulus as u64;
        let mut s = 0u64;
        for _ in 0..self.rank {
            s = (s + (a % self.modulus) as u64 * (b % self.modulus) as u64) % m;
            a /= self.modulus;
            b /= self.modulus;
        }
        s as u32
    }

    pub fn element_order(&self, a: u32) -> u32 {
        let mut order = 1;
        let mut x = a;
        while x != 0 {
            x = self.add(x, a);
            order += 1;
        }
        order
    }

    pub fn all(&self) -> std::ops::Range<u32> {
        0..self.order
    }
}

impl fmt::Display for Homocyclic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(Z/{})^{}", self.modulus, self.rank)
    }
}

/// A subgroup of a [`Homocyclic`] group, stored as its sorted element codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbSubgroup {
    ambient: Homocyclic,
    elements: Vec<u32>,
}

impl AbSubgroup {
    pub fn trivial(ambient: Homocyclic) -> Self {
        AbSubgroup { ambient, elements: vec![0] }
    }

    pub fn full(ambient: Homocyclic) -> Self {
        AbSubgroup { ambient, elements: ambient.all().collect() }
    }

    /// Subgroup generated by the given element codes.
    pub fn generated_by(ambient: Homocyclic, gens: &[u32]) -> Self {
        let mut sub = AbSubgroup::trivial(ambient);
        for &g in gens {
            if !sub.contains(g) {
                sub = sub.extend_by(g);
            }
        }
        sub
    }

    pub(crate) fn from_sorted_unchecked(ambient: Homocyclic, elements: Vec<u32>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        AbSubgroup { ambient, elements }
    }

    /// Checked constructor from an arbitrary element list.
    pub fn from_elements(ambient: Homocyclic, mut elements: Vec<u32>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        let set: HashSet<u32> = elements.iter().copied().collect();
        let closed = set.contains(&0)
            && elements.iter().all(|&a| set.contains(&ambient.neg(a)))
            && elements.iter().all(|&a| elements.iter().all(|&b| set.contains(&ambient.add(a, b))));
        if !closed || elements.iter().any(|&a| a >= ambient.order) {
            return Err(Error::BadParameters("element list is not a subgroup".into()));
        }
        Ok(AbSubgroup { ambient, elements })
    }

    pub fn ambient(&self) -> Homocyclic {
        self.ambient
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.ambient.order() / self.order()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn coordinates(&self) -> Vec<Vec<u32>> {
        self.elements.iter().map(|&x| self.ambient.decode(x)).collect()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &AbSubgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// Least `j ≥ 1` with `j·x ∈ self`; always a power of `p`.
    fn relative_order(&self, x: u32) -> u32 {
        let mut j = 1;
        while !self.contains(self.ambient.scale(x, j)) {
            j *= self.ambient.p;
        }
        j
    }

    fn extend_by(&self, x: u32) -> AbSubgroup {
        let j = self.relative_order(x);
        let mut elements = Vec::with_capacity(self.order() * j as usize);
        let mut shift = 0;
        for _ in 0..j {
            elements.extend(self.elements.iter().map(|&s| self.ambient.add(s, shift)));
            shift = self.ambient.add(shift, x);
        }
        elements.sort_unstable();
        AbSubgroup { ambient: self.ambient, elements }
    }

    /// Canonical generating set: scan elements in increasing order and keep
    /// each one not already in the span of the earlier picks.
    pub fn generators(&self) -> Vec<u32> {
        let mut span = AbSubgroup::trivial(self.ambient);
        let mut gens = Vec::new();
        for &x in &self.elements {
            if span.order() == self.order() {
                break;
            }
            if !span.contains(x) {
                gens.push(x);
                span = span.extend_by(x);
            }
        }
        gens
    }

    pub fn intersection(&self, other: &AbSubgroup) -> AbSubgroup {
        let elements = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        AbSubgroup { ambient: self.ambient, elements }
    }

    /// `{y : ⟨x, y⟩ = 0 for all x ∈ self}`.
    pub fn annihilator(&self) -> AbSubgroup {
        annihilator(self)
    }

    pub fn is_cyclic(&self) -> bool {
        self.generators().len() <= 1
    }

    /// Image under projection onto the last `rank` coordinates.
    pub fn project_tail(&self, target: Homocyclic) -> AbSubgroup {
        let drop = (self.ambient.rank - target.rank) as usize;
        let mut elements: Vec<u32> = self
            .elements
            .iter()
            .map(|&x| target.encode(&self.ambient.decode(x)[drop..]))
            .collect();
        elements.sort_unstable();
        elements.dedup();
        AbSubgroup { ambient: target, elements }
    }
}

impl fmt::Display for AbSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .elements
            .iter()
            .map(|&x| {
                let c = self.ambient.decode(x);
                if c.len() == 1 {
                    c[0].to_string()
                } else {
                    format!("({})", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
                }
            })
            .collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// All subgroups of `ambient` of the given order, sorted, without duplicates.
///
/// Brute force: subgroups of order at most `order` are grown one generator at
/// a time from the trivial group; every subgroup is reached this way.
pub fn enumerate_subgroups(ambient: Homocyclic, order: usize) -> Result<Vec<AbSubgroup>> {
    ambient.require_small()?;
    if order == 0 || !ambient.order().is_multiple_of(order) || crate::arith::log_p(ambient.p as u64, order as u64).is_none() {
        return Ok(Vec::new());
    }
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut frontier = vec![AbSubgroup::trivial(ambient)];
    let mut found = Vec::new();
    seen.insert(vec![0]);
    while let Some(s) = frontier.pop() {
        if s.order() == order {
            found.push(s);
            continue;
        }
        // covered[y] = order of an extension of s already built that contains y;
        // if ⟨s, y⟩ has that order it is that extension
        let mut covered = vec![0usize; ambient.order()];
        for x in ambient.all() {
            if s.contains(x) {
                continue;
            }
            let j = s.relative_order(x) as usize;
            let bigger = s.order() * j;
            if bigger > order || !order.is_multiple_of(bigger) || covered[x as usize] == bigger {
                continue;
            }
            let t = s.extend_by(x);
            for &y in &t.elements {
                covered[y as usize] = bigger;
            }
            if seen.insert(t.elements.clone()) {
                limits::check("subgroup enumeration", seen.len(), limits::max_elements())?;
                frontier.push(t);
            }
        }
    }
    found.sort();
    Ok(found)
}

/// `{y : ⟨x, y⟩ = 0 mod p^K for all x ∈ U}`.
pub fn annihilator(u: &AbSubgroup) -> AbSubgroup {
    let g = u.ambient;
    let gens = u.generators();
    let elements = g.all().filter(|&y| gens.iter().all(|&x| g.pairing(x, y) == 0)).collect();
    AbSubgroup { ambient: g, elements }
}

/// Number of order-`p^m` subgroups of `(Q_p/Z_p)^h`, equivalently of
/// index-`p^m` sublattices of `Z^h`: the sum over compositions
/// `a_1 + … + a_h = m` of `p^{Σ (i-1) a_i}`.
///
/// Panics if the count overflows `u128`.
pub fn count_sublattices(h: u32, p: u64, m: u32) -> u128 {
    checked_count_sublattices(h, p, m).expect("count_sublattices overflow")
}

/// [`count_sublattices`], or `None` on `u128` overflow.
pub fn checked_count_sublattices(h: u32, p: u64, m: u32) -> Option<u128> {
    if h == 0 {
        return Some(u128::from(m == 0));
    }
    // counts[j] = number for rank r and exponent j, built up over r
    let mut counts: Vec<u128> = vec![1; m as usize + 1];
    for r in 1..h {
        let weight = (p as u128).checked_pow(r);
        let mut next = vec![0u128; m as usize + 1];
        for (j, slot) in next.iter_mut().enumerate() {
            let mut w = Some(1u128);
            for a in 0..=j {
                *slot = slot.checked_add(counts[j - a].checked_mul(w?)?)?;
                if a < j {
                    w = w?.checked_mul(weight?);
                }
            }
        }
        counts = next;
    }
    Some(counts[m as usize])
}

/// `|Sub_{≤k}((Q_p/Z_p)^h)|`.
pub fn sub_leq_count(h: u32, p: u64, k: u32) -> u128 {
    (0..=k).map(|m| count_sublattices(h, p, m)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(p: u32, k: u32, h: u32) -> Homocyclic {
        Homocyclic::new(p, k, h).unwrap()
    }

    /// Independent oracle: every subset closure of every pair of elements.
    /// Order-≤p^2 subgroups of rank ≤ 2 groups are generated by two elements.
    fn two_generated(g: Homocyclic, order: usize) -> usize {
        let mut set: HashSet<Vec<u32>> = HashSet::new();
        for a in g.all() {
            for b in g.all() {
                let s = AbSubgroup::generated_by(g, &[a, b]);
                if s.order() == order {
                    set.insert(s.elements.clone());
                }
            }
        }
        set.len()
    }

    #[test]
    fn encode_is_lexicographic() {
        let g = group(2, 2, 2);
        let mut prev = None;
        for x in g.all() {
            let c = g.decode(x);
            assert_eq!(g.encode(&c), x);
            if let Some(p) = prev {
                assert!(p < c);
            }
            prev = Some(c);
        }
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_subgroups(group(2, 2, 2), 4).unwrap().len(), 7);
        assert_eq!(enumerate_subgroups(group(3, 1, 1), 3).unwrap().len(), 1);
        assert_eq!(enumerate_subgroups(group(2, 1, 2), 2).unwrap().len(), 3);
        assert_eq!(two_generated(group(2, 2, 2), 4), 7);
        assert_eq!(two_generated(group(3, 2, 2), 9), 13);
        assert_eq!(enumerate_subgroups(group(3, 2, 2), 9).unwrap().len(), 13);
    }

    #[test]
    fn enumerate_odd_orders_are_empty() {
        assert!(enumerate_subgroups(group(2, 2, 2), 3).unwrap().is_empty());
        assert!(enumerate_subgroups(group(2, 2, 2), 32).unwrap().is_empty());
    }

    #[test]
    fn enumerate_guards_size() {
        assert!(matches!(enumerate_subgroups(group(2, 1, 14), 2), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn annihilator_examples() {
        let g = group(2, 2, 2);
        assert_eq!(AbSubgroup::full(g).annihilator(), AbSubgroup::trivial(g));
        assert_eq!(AbSubgroup::trivial(g).annihilator(), AbSubgroup::full(g));
        let u = AbSubgroup::generated_by(g, &[g.encode(&[2, 0])]);
        let ann = u.annihilator();
        assert_eq!(ann.order(), 8);
        let expected: Vec<u32> = g.all().filter(|&y| g.decode(y)[0].is_multiple_of(2)).collect();
        assert_eq!(ann.elements(), expected.as_slice());
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_sublattices(2, 2, 2), 7);
        for n in 1..=3u32 {
            for p in [2u64, 3, 5] {
                let lines: u128 = (0..n).map(|i| (p as u128).pow(i)).sum();
                assert_eq!(count_sublattices(n, p, 1), lines);
            }
        }
        assert_eq!(count_sublattices(1, 7, 5), 1);
        assert_eq!(count_sublattices(3, 2, 0), 1);
        assert_eq!(sub_leq_count(1, 2, 2), 3);
        assert_eq!(sub_leq_count(1, 3, 1), 2);
        assert_eq!(sub_leq_count(2, 2, 1), 4);
    }

    #[test]
    fn from_elements_validates() {
        let g = group(2, 2, 1);
        assert!(AbSubgroup::from_elements(g, vec![0, 2]).is_ok());
        assert!(AbSubgroup::from_elements(g, vec![0, 1]).is_err());
    }

    #[test]
    fn generators_span_and_projection() {
        let g = group(2, 2, 2);
        for s in enumerate_subgroups(g, 4).unwrap() {
            assert_eq!(AbSubgroup::generated_by(g, &s.generators()), s);
            let tail = s.project_tail(group(2, 2, 1));
            assert!(tail.order() <= 4);
        }
    }
}
