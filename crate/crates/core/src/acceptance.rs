//! The acceptance suite: eleven checks of exact small-instance facts, each
//! reported as pass or fail with a short detail line.

use std::collections::HashMap;
use std::fmt;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::abelianp::{annihilator, count_sublattices, enumerate_subgroups, sub_leq_count, AbSubgroup, Homocyclic};
use crate::arith::is_prime;
use crate::charfun::{ClassSpace, GenClassFunction, Induction, TransferDatum};
use crate::decomp::{decompose, verify_triangle, DecompositionReport};
use crate::fgl::{default_truncation, weierstrass_degree, weierstrass_prep, FglContext, DEFAULT_PRECISION, DEFAULT_U_TRUNCATION};
use crate::permcore::{centralizer, Perm, PermGroup};
use crate::zpsets::{centralizer_order, enumerate_hom_classes, is_isotypic, lambda, realize, BlockSpec};

pub const CRITERIA: u32 = 11;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {:>2}. {}: {}", self.id, self.title, self.detail)
    }
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: crate::Error) -> String {
    e.to_string()
}

pub fn title(id: u32) -> &'static str {
    match id {
        1 => "hom-class counts",
        2 => "centralizers in Σ_4",
        3 => "coset sum equals orbit sum",
        4 => "orbits of fixed cosets biject with preimages",
        5 => "component count",
        6 => "degree accounting",
        7 => "commutative triangle",
        8 => "zero transfer along full cycles",
        9 => "annihilator duality",
        10 => "Weierstrass degree",
        11 => "sublattice counts",
        _ => "unknown",
    }
}

fn outcome(id: u32, check: Check) -> Outcome {
    let (passed, detail) = match check {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome { id, title: title(id), passed, detail }
}

/// Data shared between criteria so each heavy object is built once.
#[derive(Default)]
struct Shared {
    instances: Option<std::result::Result<Vec<InductionInstance>, String>>,
    reports: Option<std::result::Result<Vec<DecompositionReport>, String>>,
}

impl Shared {
    fn instances(&mut self) -> std::result::Result<&[InductionInstance], String> {
        self.instances.get_or_insert_with(induction_instances).as_deref().map_err(Clone::clone)
    }

    fn reports(&mut self) -> std::result::Result<&[DecompositionReport], String> {
        self.reports.get_or_insert_with(degree_reports).as_deref().map_err(Clone::clone)
    }
}

pub fn run(id: u32, seed: u64) -> Outcome {
    run_with(id, seed, &mut Shared::default())
}

fn run_with(id: u32, seed: u64, shared: &mut Shared) -> Outcome {
    let check = match id {
        1 => hom_class_counts(),
        2 => sigma4_centralizers(),
        3 => shared.instances().and_then(|i| coset_sum_equals_orbit_sum(i, seed)),
        4 => shared.instances().and_then(orbit_preimage_bijection),
        5 => component_count(),
        6 => shared.reports().and_then(degree_accounting),
        7 => shared.reports().and_then(triangle),
        8 => zero_transfer(),
        9 => duality(),
        10 => weierstrass_degrees(),
        11 => sublattice_counts(),
        _ => Err(format!("no criterion {id}")),
    };
    outcome(id, check)
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    let mut shared = Shared::default();
    (1..=CRITERIA).map(|id| run_with(id, seed, &mut shared)).collect()
}

fn hom_class_counts() -> Check {
    let n = enumerate_hom_classes(2, 1, 2).map_err(err)?.len();
    ensure(n == 4, || format!("Z/4 → Σ_4: {n} classes"))?;
    for p in [2, 3, 5] {
        let n = enumerate_hom_classes(p, 1, 1).map_err(err)?.len();
        ensure(n == 2, || format!("Z/{p} → Σ_{p}: {n} classes"))?;
    }
    Ok("4 classes Z/4 → Σ_4; 2 classes Z/p → Σ_p for p = 2, 3, 5".into())
}

fn sigma4_centralizers() -> Check {
    let s4 = PermGroup::symmetric(4).map_err(err)?;
    let classes = enumerate_hom_classes(2, 1, 2).map_err(err)?;
    let mut orders = Vec::new();
    for hc in &classes {
        let alpha = realize(hc).into_perms();
        let c = centralizer(&s4, &alpha).map_err(err)?;
        let predicted = centralizer_order(hc);
        ensure(c.order() as u128 == predicted, || format!("{hc}: |C| = {} but formula gives {predicted}", c.order()))?;
        orders.push(predicted);
        let kind: Vec<usize> = alpha[0].cycle_type();
        let ok = match kind.as_slice() {
            [1, 1, 1, 1] => c.order() == 24,
            [1, 1, 2] => c.order() == 4 && c.is_abelian() && c.exponent() == 2,
            [2, 2] => c.order() == 8 && !c.is_abelian() && c.count_of_order(2) == 5,
            [4] => c.order() == 4 && c.exponent() == 4,
            _ => false,
        };
        ensure(ok, || format!("centralizer of {} has the wrong isomorphism type", alpha[0]))?;
    }
    ensure(orders == [24, 4, 8, 4], || format!("centralizer orders {orders:?}"))?;
    Ok("orders 24, 4, 8, 4; Σ_4, Klein four, dihedral of order 8, cyclic of order 4".into())
}

struct InductionInstance {
    name: String,
    plan: Induction,
}

const PAIRS: [(&str, u32, u32); 5] = [
    ("Σ_2×Σ_2 ⊂ Σ_4", 2, 2),
    ("Z/4 ⊂ Σ_4", 2, 2),
    ("A_3 ⊂ Σ_3", 3, 1),
    ("Σ_4×Σ_4 ⊂ Σ_8", 2, 3),
    ("Σ_3^3 ⊂ Σ_9", 3, 2),
];

fn subgroup(name: &str) -> crate::Result<PermGroup> {
    let cycle = |n: usize| Perm::from_cycles(n, &[(0..n).collect()]);
    match name {
        "Σ_2×Σ_2 ⊂ Σ_4" => PermGroup::block_product(2, 2),
        "Z/4 ⊂ Σ_4" => PermGroup::generate(4, &[cycle(4)?]),
        "A_3 ⊂ Σ_3" => PermGroup::generate(3, &[cycle(3)?]),
        "Σ_4×Σ_4 ⊂ Σ_8" => PermGroup::block_product(4, 2),
        _ => PermGroup::block_product(3, 3),
    }
}

fn induction_instances() -> std::result::Result<Vec<InductionInstance>, String> {
    let mut out = Vec::new();
    for (name, p, k) in PAIRS {
        let h = subgroup(name).map_err(err)?;
        let g = PermGroup::symmetric(h.degree()).map_err(err)?;
        for rank in [1, 2] {
            let lam = lambda(p, rank, k).map_err(err)?;
            let g_space = ClassSpace::new(&g, lam).map_err(err)?;
            let h_space = ClassSpace::new(&h, lam).map_err(err)?;
            let plan = Induction::new(&h_space, &g_space).map_err(err)?;
            out.push(InductionInstance { name: format!("{name}, h = {rank}"), plan });
        }
    }
    Ok(out)
}

fn coset_sum_equals_orbit_sum(instances: &[InductionInstance], seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut checked = 0;
    for inst in instances {
        for _ in 0..20 {
            let chi = GenClassFunction::random(inst.plan.sub(), &mut rng);
            let a = inst.plan.induce(&chi).map_err(err)?;
            let b = inst.plan.induce_grouped(&chi).map_err(err)?;
            ensure(a == b, || format!("{}: the two induction formulas differ", inst.name))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} random class functions over {} instances", instances.len()))
}

fn orbit_preimage_bijection(instances: &[InductionInstance]) -> Check {
    let mut classes = 0;
    for inst in instances {
        let sub = inst.plan.sub();
        let ambient = inst.plan.ambient();
        let mut preimages: HashMap<usize, Vec<usize>> = HashMap::new();
        for (j, c) in sub.classes().iter().enumerate() {
            let i = ambient.class_of(&c.representative).map_err(err)?;
            preimages.entry(i).or_default().push(j);
        }
        for (i, datum) in inst.plan.data().map_err(err)?.iter().enumerate() {
            let mut hit: Vec<usize> = datum.records.iter().filter_map(|r| r.h_class_index).collect();
            hit.sort_unstable();
            let expected = preimages.remove(&i).unwrap_or_default();
            ensure(hit == expected, || {
                format!("{}, class {}: orbits reach H-classes {hit:?}, preimages are {expected:?}", inst.name, datum.g_class)
            })?;
            classes += 1;
        }
    }
    Ok(format!("{classes} classes over {} instances", instances.len()))
}

const COMPONENT_TUPLES: [(u32, u32, u32); 8] =
    [(2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 2, 1), (2, 2, 2), (3, 1, 1), (3, 1, 2), (3, 2, 1)];

fn component_count() -> Check {
    let mut lines = Vec::new();
    for (p, h, k) in COMPONENT_TUPLES {
        let blocks = BlockSpec { level: k - 1, count: p as usize };
        let mut nontrivial = 0u128;
        for hc in enumerate_hom_classes(p, h, k).map_err(err)? {
            let datum = TransferDatum::from_blocks(&hc, blocks).map_err(err)?;
            let trivial = datum.ideal_trivial(p, false);
            ensure(trivial != is_isotypic(&hc), || {
                format!("(p,h,k) = ({p},{h},{k}), class {hc}: transfer data and isotypy disagree")
            })?;
            nontrivial += u128::from(!trivial);
        }
        let expected = sub_leq_count(h, p as u64, k);
        ensure(nontrivial == expected, || format!("({p},{h},{k}): {nontrivial} components, expected {expected}"))?;
        lines.push(format!("({p},{h},{k})→{nontrivial}"));
    }
    Ok(lines.join(" "))
}

const DEGREE_TUPLES: [(u32, u32, u32, u32); 6] =
    [(2, 2, 1, 1), (2, 2, 1, 2), (3, 2, 1, 1), (2, 3, 1, 1), (2, 3, 2, 1), (3, 3, 1, 1)];

fn degree_reports() -> std::result::Result<Vec<DecompositionReport>, String> {
    DEGREE_TUPLES.iter().map(|&(p, n, t, k)| decompose(p, n, t, k).map_err(err)).collect()
}

fn degree_accounting(reports: &[DecompositionReport]) -> Check {
    let mut lines = Vec::new();
    for r in reports {
        let total = Homocyclic::new(r.p, r.k, r.n).map_err(err)?;
        let brute = enumerate_subgroups(total, (r.p as usize).pow(r.k)).map_err(err)?.len() as u128;
        let formula = count_sublattices(r.n, r.p as u64, r.k);
        ensure(r.rank_sum == formula && formula == brute, || {
            format!("({},{},{},{}): ranks sum to {}, formula {formula}, brute force {brute}", r.p, r.n, r.t, r.k, r.rank_sum)
        })?;
        lines.push(format!("({},{},{},{})→{}", r.p, r.n, r.t, r.k, r.rank_sum));
    }
    for ((p, n, t, k), value) in [((2, 2, 1, 1), 3), ((2, 2, 1, 2), 7), ((3, 3, 1, 1), 13), ((2, 3, 1, 1), 7)] {
        let r = reports
            .iter()
            .find(|r| (r.p, r.n, r.t, r.k) == (p, n, t, k))
            .ok_or_else(|| format!("no report for ({p},{n},{t},{k})"))?;
        ensure(r.rank_sum == value, || format!("({p},{n},{t},{k}): degree {} instead of {value}", r.rank_sum))?;
    }
    Ok(lines.join(" "))
}

fn triangle(reports: &[DecompositionReport]) -> Check {
    for r in reports {
        let verdict = verify_triangle(r);
        ensure(verdict.holds, || format!("({},{},{},{}): {}", r.p, r.n, r.t, r.k, verdict.diagnostics.join("; ")))?;
        let top = (r.p as usize).pow(r.k);
        for c in r.nontrivial() {
            let l = c.dual.as_ref().ok_or("component without L")?;
            let rank = c.fiber_rank.ok_or("component without rank")?;
            if l.order() == 1 {
                let expected = count_sublattices(r.t, r.p as u64, r.k);
                ensure(rank == expected, || format!("fiber over 0 has rank {rank}, expected {expected}"))?;
            }
            if l.order() == top && l.is_cyclic() {
                let expected = (r.p as u128).pow(r.k * r.t);
                ensure(rank == expected, || format!("fiber over {l} has rank {rank}, expected {expected}"))?;
            }
        }
    }
    Ok(format!("{} reports; extreme fibers match", reports.len()))
}

fn zero_transfer() -> Check {
    let mut done = Vec::new();
    for (p, k) in [(2u32, 1u32), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2)] {
        let n = (p as usize).pow(k);
        let g = PermGroup::symmetric(n).map_err(err)?;
        let h = PermGroup::block_product(n / p as usize, p as usize).map_err(err)?;
        let lam = lambda(p, 1, k).map_err(err)?;
        let g_space = ClassSpace::new(&g, lam).map_err(err)?;
        let h_space = ClassSpace::new(&h, lam).map_err(err)?;
        let plan = Induction::new(&h_space, &g_space).map_err(err)?;
        let cycle = [Perm::from_cycles(n, &[(0..n).collect()]).map_err(err)?];
        let datum = plan.datum_for(&cycle).map_err(err)?;
        ensure(datum.is_empty(), || format!("Σ_{n}: {} orbits of fixed cosets for the {n}-cycle", datum.records.len()))?;
        let mut rng = StdRng::seed_from_u64(p as u64 * 100 + k as u64);
        for chi in [GenClassFunction::constant(&h_space, num_traits::One::one()), GenClassFunction::random(&h_space, &mut rng)] {
            let v = plan.induce(&chi).map_err(err)?;
            ensure(num_traits::Zero::is_zero(v.value_at(&cycle).map_err(err)?), || format!("Σ_{n}: non-zero induced value"))?;
        }
        done.push(format!("Σ_{n}"));
    }
    Ok(format!("empty transfer data in {}", done.join(", ")))
}

fn duality() -> Check {
    let mut total = 0;
    for (p, k, h) in [(2u32, 2u32, 2u32), (2, 1, 3), (3, 2, 1)] {
        let g = Homocyclic::new(p, k, h).map_err(err)?;
        let mut all: Vec<AbSubgroup> = Vec::new();
        let mut order = 1;
        while order <= g.order() {
            all.extend(enumerate_subgroups(g, order).map_err(err)?);
            order *= p as usize;
        }
        for u in &all {
            let perp = annihilator(u);
            // membership checked against every element, not only generators
            let direct = g.all().filter(|&y| u.elements().iter().all(|&x| g.pairing(x, y) == 0)).count();
            ensure(perp.order() == direct, || format!("{g}: annihilator of {u} has the wrong size"))?;
            ensure(annihilator(&perp) == *u, || format!("{g}: double annihilator of {u} differs"))?;
            ensure(u.order() * perp.order() == g.order(), || format!("{g}: |U|·|U^⊥| ≠ |G| for {u}"))?;
            for v in &all {
                if u.is_subgroup_of(v) {
                    ensure(annihilator(v).is_subgroup_of(&perp), || format!("{g}: not order-reversing"))?;
                }
            }
        }
        total += all.len();
    }
    Ok(format!("{total} subgroups of (Z/4)^2, (Z/2)^3, Z/9"))
}

fn weierstrass_degrees() -> Check {
    let mut lines = Vec::new();
    let mut cases: Vec<(String, FglContext, u32)> = Vec::new();
    for k in [1, 2] {
        let d = default_truncation(2, 1, k).map_err(err)?;
        cases.push((format!("multiplicative p=2 k={k}"), FglContext::multiplicative(2, DEFAULT_PRECISION, d).map_err(err)?, k));
    }
    for p in [2, 3] {
        let d = default_truncation(p, 2, 1).map_err(err)?;
        let ctx = FglContext::build_ptypical(p, 2, DEFAULT_PRECISION, DEFAULT_U_TRUNCATION, d).map_err(err)?;
        cases.push((format!("height 2 p={p} k=1"), ctx, 1));
    }
    for (name, ctx, k) in cases {
        let expected = (ctx.p() as usize).pow(k * ctx.height());
        let g = ctx.n_series((ctx.p() as u64).pow(k));
        ensure(weierstrass_degree(&g) == Some(expected), || format!("{name}: first unit coefficient is not at x^{expected}"))?;
        let rank = ctx.torsion_rank(k).map_err(err)?;
        ensure(rank == expected, || format!("{name}: torsion rank {rank}, expected {expected}"))?;
        let w = weierstrass_prep(&g, expected).map_err(err)?;
        ensure(w.polynomial_series().mul(&w.unit) == g, || format!("{name}: f·u ≠ [p^k](x) below D"))?;
        lines.push(format!("{name}→{rank} (D={})", ctx.truncation()));
    }
    Ok(lines.join("; "))
}

fn sublattice_counts() -> Check {
    const LIMIT: u64 = 10_000;
    let mut cases = 0;
    for p in (2..=LIMIT).filter(|&p| is_prime(p)) {
        let mut h = 1;
        while p.pow(h) <= LIMIT {
            let mut m = 0;
            while p.pow(m * h) <= LIMIT {
                let g = Homocyclic::new(p as u32, m, h).map_err(err)?;
                let brute = enumerate_subgroups(g, p.pow(m) as usize).map_err(err)?.len() as u128;
                let formula = count_sublattices(h, p, m);
                ensure(brute == formula, || format!("(h,p,m) = ({h},{p},{m}): formula {formula}, brute force {brute}"))?;
                cases += 1;
                m += 1;
            }
            h += 1;
        }
    }
    Ok(format!("{cases} parameter triples with p^(mh) ≤ {LIMIT}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        for id in [1, 2, 5, 9] {
            let o = run(id, 0);
            assert!(o.passed, "{o}");
        }
    }

    #[test]
    fn unknown_criterion_fails() {
        assert!(!run(12, 0).passed);
        assert!(run(1, 0).to_string().starts_with("[PASS]  1."));
    }
}
