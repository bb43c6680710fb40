use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::classes::ClassSpace;
use crate::error::{Error, Result};

/// An exact rational value on every class of `hom(Λ, G)/∼`.
#[derive(Clone, Debug)]
pub struct GenClassFunction {
    space: Arc<ClassSpace>,
    values: Vec<BigRational>,
}

impl PartialEq for GenClassFunction {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) && self.values == other.values
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders as `a/b` in lowest terms, denominator always present.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = |e: String| Error::Parse(format!("rational {s:?}: {e}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|e: num_bigint::ParseBigIntError| bad(e.to_string()))?;
    let d: BigInt = d.parse().map_err(|e: num_bigint::ParseBigIntError| bad(e.to_string()))?;
    if d.is_zero() {
        return Err(bad("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

impl GenClassFunction {
    pub fn from_values(space: &Arc<ClassSpace>, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::BadParameters(format!("{} values for {} classes", values.len(), space.len())));
        }
        Ok(GenClassFunction { space: space.clone(), values })
    }

    pub fn from_fn(space: &Arc<ClassSpace>, f: impl Fn(usize) -> BigRational) -> Self {
        GenClassFunction { space: space.clone(), values: (0..space.len()).map(f).collect() }
    }

    pub fn constant(space: &Arc<ClassSpace>, c: BigRational) -> Self {
        Self::from_fn(space, |_| c.clone())
    }

    pub fn zero(space: &Arc<ClassSpace>) -> Self {
        Self::constant(space, BigRational::zero())
    }

    pub fn indicator(space: &Arc<ClassSpace>, class: usize) -> Self {
        Self::from_fn(space, |i| if i == class { BigRational::one() } else { BigRational::zero() })
    }

    /// Values `a/b` with `|a| ≤ 20`, `1 ≤ b ≤ 12`.
    pub fn random(space: &Arc<ClassSpace>, rng: &mut impl Rng) -> Self {
        let values = (0..space.len()).map(|_| rational(rng.gen_range(-20..=20), rng.gen_range(1..=12))).collect();
        GenClassFunction { space: space.clone(), values }
    }

    pub fn space(&self) -> &Arc<ClassSpace> {
        &self.space
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &BigRational {
        &self.values[class]
    }

    pub fn value_at(&self, tuple: &[crate::permcore::Perm]) -> Result<&BigRational> {
        Ok(&self.values[self.space.class_of(tuple)?])
    }

    /// `⟨φ, ψ⟩ = Σ_{[α]} φ(α) ψ(α) / |C(im α)|`.
    pub fn inner_product(&self, other: &GenClassFunction) -> Result<BigRational> {
        if !Arc::ptr_eq(&self.space, &other.space) {
            return Err(Error::BadParameters("class functions on different class spaces".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.space.classes())
            .map(|((a, b), c)| a * b / BigRational::from_integer(BigInt::from(c.centralizer_order)))
            .fold(BigRational::zero(), |acc, x| acc + x))
    }

    /// `{class_id: "a/b"}` with keys sorted.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, serde_json::Value> = self
            .space
            .classes()
            .iter()
            .zip(&self.values)
            .map(|(c, v)| (c.id.clone(), serde_json::Value::String(format_rational(v))))
            .collect();
        serde_json::to_value(map).expect("string map serializes")
    }

    /// Reads `{class_id: "a/b"}`; classes absent from the object take value 0.
    pub fn from_json(space: &Arc<ClassSpace>, json: &serde_json::Value) -> Result<Self> {
        let obj = json
            .as_object()
            .ok_or_else(|| Error::Parse("class function must be a JSON object".into()))?;
        let mut values = vec![BigRational::zero(); space.len()];
        for (key, v) in obj {
            let i = space.position(key).ok_or_else(|| Error::UnknownClass(key.clone()))?;
            let text = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                other => return Err(Error::Parse(format!("value for {key}: {other}"))),
            };
            values[i] = parse_rational(&text)?;
        }
        Ok(GenClassFunction { space: space.clone(), values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::PermGroup;
    use crate::zpsets::lambda;
    use proptest::prelude::*;

    #[test]
    fn rationals_normalize() {
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&parse_rational("-3").unwrap()), "-3/1");
        assert_eq!(format_rational(&parse_rational(" 2 / -4 ").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn json_rejects_unknown_classes() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let space = ClassSpace::new(&s3, lambda(3, 1, 1).unwrap()).unwrap();
        let bad = serde_json::json!({"nope": "1/1"});
        assert!(matches!(GenClassFunction::from_json(&space, &bad), Err(Error::UnknownClass(_))));
        let partial = serde_json::json!({});
        assert_eq!(GenClassFunction::from_json(&space, &partial).unwrap(), GenClassFunction::zero(&space));
    }

    proptest! {
        #[test]
        fn json_round_trip(seed in any::<u64>()) {
            use rand::SeedableRng;
            let s4 = PermGroup::symmetric(4).unwrap();
            let space = ClassSpace::new(&s4, lambda(2, 1, 2).unwrap()).unwrap();
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let f = GenClassFunction::random(&space, &mut rng);
            let text = serde_json::to_string(&f.to_json()).unwrap();
            let back = GenClassFunction::from_json(&space, &serde_json::from_str(&text).unwrap()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
