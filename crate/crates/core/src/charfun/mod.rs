//! Generalized class functions: one exact rational per class of
//! `hom(Λ, G)/∼`, with restriction, the coset-sum induction formula and its
//! orbit-grouped form, and the transfer data that decide when a transfer
//! ideal is the whole ring.

mod classes;
mod function;
mod induction;

use std::sync::Arc;

pub use classes::{ClassInfo, ClassSpace};
pub use function::{format_rational, parse_rational, rational, GenClassFunction};
pub use induction::{Induction, OrbitRecord, TransferDatum};

use crate::error::{Error, Result};
use crate::permcore::Perm;

fn require_subgroup(sub: &ClassSpace, ambient: &ClassSpace) -> Result<()> {
    if !sub.group().is_subgroup_of(ambient.group()) {
        return Err(Error::NotSubgroup(format!(
            "group of order {} in group of order {}",
            sub.group().order(),
            ambient.group().order()
        )));
    }
    if sub.lambda() != ambient.lambda() {
        return Err(Error::BadParameters("class spaces over different Λ".into()));
    }
    Ok(())
}

/// `(Res χ)([β]) = χ([i ∘ β])` for `i: H ⊆ G`.
pub fn restrict(chi: &GenClassFunction, sub: &Arc<ClassSpace>) -> Result<GenClassFunction> {
    require_subgroup(sub, chi.space())?;
    let values = sub
        .classes()
        .iter()
        .map(|c| chi.value_at(&c.representative).cloned())
        .collect::<Result<Vec<_>>>()?;
    GenClassFunction::from_values(sub, values)
}

/// Induction by the coset sum over `(G/H)^{im α}`.
pub fn induce(chi: &GenClassFunction, ambient: &Arc<ClassSpace>) -> Result<GenClassFunction> {
    require_subgroup(chi.space(), ambient)?;
    Induction::new(chi.space(), ambient)?.induce(chi)
}

/// Induction by the sum over `C_G(im α)`-orbits of fixed cosets, weighted by index.
pub fn induce_grouped(chi: &GenClassFunction, ambient: &Arc<ClassSpace>) -> Result<GenClassFunction> {
    require_subgroup(chi.space(), ambient)?;
    Induction::new(chi.space(), ambient)?.induce_grouped(chi)
}

pub fn transfer_datum(ambient: &Arc<ClassSpace>, sub: &Arc<ClassSpace>, alpha: &[Perm]) -> Result<TransferDatum> {
    require_subgroup(sub, ambient)?;
    Induction::new(sub, ambient)?.datum_for(alpha)
}

pub fn ideal_trivial(ambient: &Arc<ClassSpace>, sub: &Arc<ClassSpace>, alpha: &[Perm], t_is_zero: bool) -> Result<bool> {
    let datum = transfer_datum(ambient, sub, alpha)?;
    Ok(datum.ideal_trivial(ambient.lambda().p(), t_is_zero))
}

/// The coset-sum and orbit-grouped sides agree on every class.
pub fn verify_mainthm_instance(chi: &GenClassFunction, ambient: &Arc<ClassSpace>) -> Result<bool> {
    require_subgroup(chi.space(), ambient)?;
    let plan = Induction::new(chi.space(), ambient)?;
    Ok(plan.induce(chi)? == plan.induce_grouped(chi)?)
}
