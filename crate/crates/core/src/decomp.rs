//! Decomposition of `C_t ⊗ Sub_k(G_E)` into components indexed by classes
//! of `(Z/p^k)^{n−t} → Σ_{p^k}`, with dual subgroups and fiber ranks.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelianp::{count_sublattices, enumerate_subgroups, sub_leq_count, AbSubgroup, Homocyclic};
use crate::arith::{checked_pow, require_prime};
use crate::charfun::TransferDatum;
use crate::error::{Error, Result};
use crate::zpsets::{
    centralizer_order, dual_image, enumerate_hom_classes, is_isotypic, minimal_level, BlockSpec, HomClass,
};

pub const CONVENTION: &str = "geometric-point-count";

const MAX_BLOCK_DEGREE: u64 = 9;
const MAX_HEIGHT_DIFFERENCE: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentRecord {
    pub class: HomClass,
    pub isotypic: bool,
    pub m: u32,
    /// Image of the Pontryagin dual of `im α`; present on non-trivial components.
    pub dual: Option<AbSubgroup>,
    pub ideal_trivial: bool,
    pub fiber_rank: Option<u128>,
    pub centralizer_order: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub p: u32,
    pub n: u32,
    pub t: u32,
    pub k: u32,
    pub records: Vec<ComponentRecord>,
    pub strickland_degree: u128,
    pub rank_sum: u128,
}

impl DecompositionReport {
    pub fn height(&self) -> u32 {
        self.n - self.t
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &ComponentRecord> {
        self.records.iter().filter(|r| !r.ideal_trivial)
    }
}

fn check_parameters(p: u32, n: u32, t: u32, k: u32) -> Result<()> {
    if t >= n {
        return Err(Error::BadParameters(format!("need t < n, got t = {t}, n = {n}")));
    }
    if k == 0 {
        return Err(Error::BadParameters("need k ≥ 1".into()));
    }
    require_prime(p as u64)?;
    let block = checked_pow(p as u64, k)?;
    if block > MAX_BLOCK_DEGREE {
        return Err(Error::ResourceLimit(format!("p^k = {block} exceeds {MAX_BLOCK_DEGREE}")));
    }
    if n - t > MAX_HEIGHT_DIFFERENCE {
        return Err(Error::ResourceLimit(format!("n - t = {} exceeds {MAX_HEIGHT_DIFFERENCE}", n - t)));
    }
    Ok(())
}

/// Order-`p^k` subgroups of `(Z/p^k)^t ⊕ (Z/p^k)^{n−t}`, bucketed by their
/// projection to the second summand.
fn fibers(p: u32, n: u32, t: u32, k: u32) -> Result<HashMap<AbSubgroup, u128>> {
    let total = Homocyclic::new(p, k, n)?;
    let tail = Homocyclic::new(p, k, n - t)?;
    let order = checked_pow(p as u64, k)? as usize;
    let mut buckets = HashMap::new();
    for a in enumerate_subgroups(total, order)? {
        *buckets.entry(a.project_tail(tail)).or_insert(0) += 1;
    }
    Ok(buckets)
}

/// `#{A ≤ (Z/p^k)^t ⊕ (Z/p^k)^{n−t} : |A| = p^k, pr₂(A) = L}`.
pub fn fiber_rank(l: &AbSubgroup, p: u32, n: u32, t: u32, k: u32) -> Result<u128> {
    if t >= n {
        return Err(Error::BadParameters(format!("need t < n, got t = {t}, n = {n}")));
    }
    let tail = Homocyclic::new(p, k, n - t)?;
    if l.ambient() != tail {
        return Err(Error::BadParameters(format!("L lives in {}, expected {tail}", l.ambient())));
    }
    Ok(fibers(p, n, t, k)?.get(l).copied().unwrap_or(0))
}

pub fn decompose(p: u32, n: u32, t: u32, k: u32) -> Result<DecompositionReport> {
    check_parameters(p, n, t, k)?;
    let h = n - t;
    let classes = enumerate_hom_classes(p, h, k)?;
    let blocks = BlockSpec { level: k - 1, count: p as usize };
    let buckets = fibers(p, n, t, k)?;
    let records = classes
        .into_par_iter()
        .map(|class| {
            let datum = TransferDatum::from_blocks(&class, blocks)?;
            let ideal_trivial = datum.ideal_trivial(p, t == 0);
            let isotypic = is_isotypic(&class);
            let transitive = class.orbit_types().len() == 1 && class.orbit_types()[0].multiplicity == 1;
            let expected_trivial = if t == 0 { !transitive } else { !isotypic };
            if ideal_trivial != expected_trivial {
                return Err(Error::InternalMismatch(format!(
                    "class {}: transfer data say trivial = {ideal_trivial}, orbit structure says {expected_trivial}",
                    class.id()
                )));
            }
            let m = minimal_level(&class);
            let (dual, fiber_rank) = if ideal_trivial {
                (None, None)
            } else {
                let l = dual_image(&class);
                if l.order() != (p as usize).pow(m) {
                    return Err(Error::InternalMismatch(format!(
                        "class {}: |L| = {} but minimal level is {m}",
                        class.id(),
                        l.order()
                    )));
                }
                let rank = buckets.get(&l).copied().unwrap_or(0);
                (Some(l), Some(rank))
            };
            Ok(ComponentRecord {
                centralizer_order: centralizer_order(&class),
                class,
                isotypic,
                m,
                dual,
                ideal_trivial,
                fiber_rank,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rank_sum = records.iter().filter_map(|r| r.fiber_rank).sum();
    let report = DecompositionReport {
        p,
        n,
        t,
        k,
        records,
        strickland_degree: count_sublattices(n, p as u64, k),
        rank_sum,
    };
    let expected = if t == 0 { count_sublattices(h, p as u64, k) } else { sub_leq_count(h, p as u64, k) };
    let found = report.nontrivial().count() as u128;
    if found != expected {
        return Err(Error::InternalMismatch(format!("{found} non-trivial components, expected {expected}")));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleVerdict {
    pub holds: bool,
    pub diagnostics: Vec<String>,
}

/// Checks that non-trivial components biject onto the subgroups of order at
/// most `p^k` (exactly `p^k` when `t = 0`), that fiber ranks add up to the
/// degree, and the number of components over each order `p^m`.
pub fn verify_triangle(report: &DecompositionReport) -> TriangleVerdict {
    let mut diagnostics = Vec::new();
    let (p, h, k) = (report.p, report.height(), report.k);
    let levels: Vec<u32> = if report.t == 0 { vec![k] } else { (0..=k).collect() };
    match Homocyclic::new(p, k, h) {
        Ok(tail) => {
            let mut targets = Vec::new();
            for &m in &levels {
                match enumerate_subgroups(tail, (p as usize).pow(m)) {
                    Ok(subs) => targets.extend(subs),
                    Err(e) => diagnostics.push(format!("(a) cannot enumerate subgroups: {e}")),
                }
            }
            let mut images: Vec<AbSubgroup> = report.nontrivial().filter_map(|r| r.dual.clone()).collect();
            if images.len() != report.nontrivial().count() {
                diagnostics.push("(a) a non-trivial component has no dual subgroup".into());
            }
            images.sort();
            let distinct = {
                let mut d = images.clone();
                d.dedup();
                d.len()
            };
            targets.sort();
            if distinct != images.len() {
                diagnostics.push("(a) two components share a dual subgroup".into());
            }
            if images != targets {
                diagnostics.push(format!("(a) {} dual subgroups, {} target subgroups", images.len(), targets.len()));
            }
        }
        Err(e) => diagnostics.push(format!("(a) {e}")),
    }
    let sum: u128 = report.nontrivial().map(|r| r.fiber_rank.unwrap_or(0)).sum();
    if sum != report.rank_sum || sum != report.strickland_degree {
        diagnostics.push(format!(
            "(b) fiber ranks sum to {sum}, recorded {}, degree {}",
            report.rank_sum, report.strickland_degree
        ));
    }
    let mut by_order: BTreeMap<usize, u128> = BTreeMap::new();
    for r in report.nontrivial() {
        if let Some(l) = &r.dual {
            *by_order.entry(l.order()).or_insert(0) += 1;
        }
    }
    for &m in &levels {
        let order = (p as usize).pow(m);
        let found = by_order.get(&order).copied().unwrap_or(0);
        let expected = count_sublattices(h, p as u64, m);
        if found != expected {
            diagnostics.push(format!("(c) {found} components with |L| = {order}, expected {expected}"));
        }
    }
    TriangleVerdict { holds: diagnostics.is_empty(), diagnostics }
}

#[derive(Serialize)]
struct SubgroupJson {
    order: usize,
    generators: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct ComponentJson {
    class_id: String,
    isotypic: bool,
    m: u32,
    #[serde(rename = "L")]
    dual: Option<SubgroupJson>,
    ideal_trivial: bool,
    fiber_rank: Option<u128>,
    centralizer_order: u128,
}

#[derive(Serialize)]
struct ReportJson {
    p: u32,
    n: u32,
    t: u32,
    k: u32,
    degree: u128,
    rank_sum: u128,
    convention: &'static str,
    components: Vec<ComponentJson>,
}

pub fn report_json(report: &DecompositionReport) -> serde_json::Value {
    let components = report
        .records
        .iter()
        .map(|r| ComponentJson {
            class_id: r.class.id(),
            isotypic: r.isotypic,
            m: r.m,
            dual: r.dual.as_ref().map(|l| SubgroupJson {
                order: l.order(),
                generators: l.generators().iter().map(|&g| l.ambient().decode(g)).collect(),
            }),
            ideal_trivial: r.ideal_trivial,
            fiber_rank: r.fiber_rank,
            centralizer_order: r.centralizer_order,
        })
        .collect();
    let json = ReportJson {
        p: report.p,
        n: report.n,
        t: report.t,
        k: report.k,
        degree: report.strickland_degree,
        rank_sum: report.rank_sum,
        convention: CONVENTION,
        components,
    };
    serde_json::to_value(json).expect("report serializes")
}

pub fn report_table(report: &DecompositionReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p={} n={} t={} k={}  degree={}  rank_sum={}",
        report.p, report.n, report.t, report.k, report.strickland_degree, report.rank_sum
    );
    let rows: Vec<[String; 6]> = report
        .records
        .iter()
        .map(|r| {
            [
                r.class.id(),
                if r.isotypic { "yes" } else { "no" }.to_string(),
                r.m.to_string(),
                r.dual.as_ref().map_or("-".into(), |l| l.to_string()),
                r.fiber_rank.map_or("-".into(), |x| x.to_string()),
                r.centralizer_order.to_string(),
            ]
        })
        .collect();
    let header = ["class", "isotypic", "m", "L", "rank", "|C|"];
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let _ = writeln!(out, "{}", line(&header.map(String::from)));
    for row in &rows {
        let _ = writeln!(out, "{}", line(row));
    }
    out
}
