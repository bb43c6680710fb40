use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::classes::ClassSpace;
use super::function::GenClassFunction;
use crate::error::{Error, Result};
use crate::permcore::{centralizer, coset_orbits, left_cosets, Coset, Perm};
use crate::zpsets::{coset_fiber, BlockSpec, HomClass};

/// One `C_G(im α)`-orbit of fixed cosets `gH`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub coset_representative: String,
    /// Class of `g⁻¹ α g` in `H`.
    pub h_class: String,
    #[serde(skip)]
    pub h_class_index: Option<usize>,
    pub stabilizer_order: u128,
    /// `[C_G(im α) : g C_H(g⁻¹ im α g) g⁻¹]`, the orbit size.
    pub index: u128,
}

/// Indexing data of the orbit-grouped transfer formula for one class `[α]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferDatum {
    pub g_class: String,
    pub centralizer_order: u128,
    pub records: Vec<OrbitRecord>,
}

impl TransferDatum {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `|(G/H)^{im α}|`, recovered as the sum of orbit sizes.
    pub fn fixed_coset_count(&self) -> u128 {
        self.records.iter().map(|r| r.index).sum()
    }

    /// Whether the transfer ideal at `[α]` is the whole ring.
    ///
    /// With `p` invertible (`t = 0`) any fixed coset makes the transfer
    /// surjective. Otherwise transfer followed by restriction multiplies by
    /// the orbit index, so the ideal is everything exactly when some index
    /// is prime to `p`; all other contributions lie in `(p) + I_aug`.
    pub fn ideal_trivial(&self, p: u32, t_is_zero: bool) -> bool {
        if t_is_zero {
            !self.records.is_empty()
        } else {
            self.records.iter().any(|r| r.index % p as u128 != 0)
        }
    }

    /// Datum for `G = Σ_N` and a block subgroup, from the block-partition model.
    pub fn from_blocks(hc: &HomClass, blocks: BlockSpec) -> Result<TransferDatum> {
        let orbits = coset_fiber(hc, blocks)?;
        let records = orbits
            .into_iter()
            .map(|o| OrbitRecord {
                coset_representative: o.representative.to_string(),
                h_class: o.block_classes.iter().map(HomClass::id).collect::<Vec<_>>().join(" x "),
                h_class_index: None,
                stabilizer_order: o.stabilizer_order,
                index: o.orbit_size as u128,
            })
            .collect();
        Ok(TransferDatum { g_class: hc.id(), centralizer_order: crate::zpsets::centralizer_order(hc), records })
    }
}

/// Induction from a subgroup `H` to `G` with the coset table built once.
///
/// The coset-sum route and the orbit-grouped route are computed separately
/// and cached per class of `G`.
pub struct Induction {
    sub: Arc<ClassSpace>,
    ambient: Arc<ClassSpace>,
    cosets: Vec<Coset>,
    coset_terms: OnceLock<Vec<Vec<usize>>>,
    data: OnceLock<Vec<TransferDatum>>,
}

impl Induction {
    pub fn new(sub: &Arc<ClassSpace>, ambient: &Arc<ClassSpace>) -> Result<Self> {
        if sub.lambda() != ambient.lambda() {
            return Err(Error::BadParameters("class spaces over different Λ".into()));
        }
        let cosets = left_cosets(ambient.group(), sub.group())?;
        Ok(Induction {
            sub: sub.clone(),
            ambient: ambient.clone(),
            cosets,
            coset_terms: OnceLock::new(),
            data: OnceLock::new(),
        })
    }

    pub fn sub(&self) -> &Arc<ClassSpace> {
        &self.sub
    }

    pub fn ambient(&self) -> &Arc<ClassSpace> {
        &self.ambient
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    fn fixed(&self, alpha: &[Perm]) -> Vec<Coset> {
        self.cosets.iter().filter(|c| c.is_fixed_by(alpha)).cloned().collect()
    }

    fn conjugate(alpha: &[Perm], g: &Perm) -> Vec<Perm> {
        alpha.iter().map(|a| a.conjugate_by(g)).collect()
    }

    /// For each class of `G`, the `H`-class of `g⁻¹αg` for every fixed coset `gH`.
    pub fn coset_terms(&self) -> Result<&[Vec<usize>]> {
        if let Some(t) = self.coset_terms.get() {
            return Ok(t);
        }
        let terms = self
            .ambient
            .classes()
            .par_iter()
            .map(|c| {
                self.cosets
                    .iter()
                    .filter_map(|coset| {
                        let b = Self::conjugate(&c.representative, coset.representative());
                        b.iter().all(|x| self.sub.group().contains(x)).then(|| self.sub.class_of(&b))
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let _ = self.coset_terms.set(terms);
        Ok(self.coset_terms.get().expect("just set"))
    }

    /// Orbit data for an arbitrary homomorphism `alpha` into `G`, with every
    /// stabilizer checked against `g C_H(g⁻¹ α g) g⁻¹` element by element.
    pub fn datum_for(&self, alpha: &[Perm]) -> Result<TransferDatum> {
        let g_class = self.ambient.class_of(alpha)?;
        let c = centralizer(self.ambient.group(), alpha)?;
        let fixed = self.fixed(alpha);
        let orbits = coset_orbits(&c, &fixed)?;
        let mut records = Vec::with_capacity(orbits.len());
        for o in orbits {
            let g = o.representative.representative();
            let b = Self::conjugate(alpha, g);
            let c_h = centralizer(self.sub.group(), &b)?;
            let ginv = g.inverse();
            let mut expected: Vec<Perm> = c_h.elements().iter().map(|x| x.conjugate_by(&ginv)).collect();
            expected.sort_unstable();
            if expected.as_slice() != o.stabilizer.elements() {
                return Err(Error::InternalMismatch(format!(
                    "stabilizer of {g} differs from g C_H(g^-1 a g) g^-1"
                )));
            }
            let h_index = self.sub.class_of(&b)?;
            records.push(OrbitRecord {
                coset_representative: g.to_string(),
                h_class: self.sub.class(h_index).id.clone(),
                h_class_index: Some(h_index),
                stabilizer_order: o.stabilizer.order() as u128,
                index: o.size as u128,
            });
        }
        Ok(TransferDatum {
            g_class: self.ambient.class(g_class).id.clone(),
            centralizer_order: c.order() as u128,
            records,
        })
    }

    /// Transfer data for every class of `G`, in class order.
    pub fn data(&self) -> Result<&[TransferDatum]> {
        if let Some(d) = self.data.get() {
            return Ok(d);
        }
        let data = self
            .ambient
            .classes()
            .par_iter()
            .map(|c| self.datum_for(&c.representative))
            .collect::<Result<Vec<_>>>()?;
        let _ = self.data.set(data);
        Ok(self.data.get().expect("just set"))
    }

    fn check_source(&self, chi: &GenClassFunction) -> Result<()> {
        if Arc::ptr_eq(chi.space(), &self.sub) {
            Ok(())
        } else {
            Err(Error::BadParameters("class function is not on the subgroup's class space".into()))
        }
    }

    /// `(Ind χ)([α]) = Σ_{gH ∈ (G/H)^{im α}} χ([g⁻¹αg])`.
    pub fn induce(&self, chi: &GenClassFunction) -> Result<GenClassFunction> {
        self.check_source(chi)?;
        let terms = self.coset_terms()?;
        Ok(GenClassFunction::from_fn(&self.ambient, |i| {
            terms[i].iter().fold(BigRational::zero(), |acc, &j| acc + chi.value(j))
        }))
    }

    /// `Σ_{[gH] ∈ (G/H)^{im α}/C(im α)} [C_G(im α) : g C_H(g⁻¹αg) g⁻¹] · χ([g⁻¹αg])`.
    pub fn induce_grouped(&self, chi: &GenClassFunction) -> Result<GenClassFunction> {
        self.check_source(chi)?;
        let data = self.data()?;
        Ok(GenClassFunction::from_fn(&self.ambient, |i| {
            data[i].records.iter().fold(BigRational::zero(), |acc, r| {
                let j = r.h_class_index.expect("generic records carry class indices");
                acc + BigRational::from_integer(BigInt::from(r.index)) * chi.value(j)
            })
        }))
    }
}
