//! Truncated formal group laws: the p-typical law of height `n` built from
//! its logarithm, the multiplicative law, `m`-series, and Weierstrass
//! preparation of `[p^k](x)`.
//!
//! Every identity here holds below x-degree `D`, modulo `p^a`, and modulo
//! monomials in `u_1, …, u_{n−1}` of total degree `≥ b`.

mod ring;
mod series;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

pub use ring::{CoeffRing, Monomials, RationalPolys, Rationals, Ring};
pub use series::{Series, TruncSeries};

use crate::arith::{checked_pow, require_prime};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 3;
pub const DEFAULT_U_TRUNCATION: usize = 3;
pub const MAX_TRUNCATION: usize = 48;

/// `max(p^{kn}, min(p^{2n}, 16)) + 1`.
pub fn default_truncation(p: u32, n: u32, k: u32) -> Result<usize> {
    let torsion = checked_pow(p as u64, k * n)?;
    let square = checked_pow(p as u64, 2 * n).unwrap_or(u64::MAX).min(16);
    Ok(torsion.max(square) as usize + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawKind {
    PTypical,
    Multiplicative,
}

/// A formal group law `F(x, y)` over a [`CoeffRing`] together with its
/// logarithm over the rational lift.
#[derive(Clone, Debug)]
pub struct FglContext {
    kind: LawKind,
    p: u32,
    height: u32,
    ring: CoeffRing,
    x1: Arc<Monomials>,
    log: Series<RationalPolys>,
    law: Series<CoeffRing>,
}

fn check_truncation(p: u32, n: u32, d: usize) -> Result<()> {
    let least = checked_pow(p as u64, n)? as usize + 1;
    if d < least {
        return Err(Error::TruncationTooSmall(format!("D = {d}, need at least p^n + 1 = {least}")));
    }
    if d > MAX_TRUNCATION {
        return Err(Error::ResourceLimit(format!("D = {d} exceeds {MAX_TRUNCATION}")));
    }
    Ok(())
}

/// `exp` with `log(exp(z)) = z`, by the iteration `e ↦ z − (log − z)(e)`.
fn inverse_series(log: &Series<RationalPolys>) -> Result<Series<RationalPolys>> {
    let ring = log.ring();
    let monos = log.monomials();
    let z = Series::variable(ring, monos, 0);
    let tail = log.sub(&z);
    let mut e = z.clone();
    for _ in 0..monos.bound() {
        let next = z.sub(&tail.compose(std::slice::from_ref(&e)));
        if next == e {
            return Ok(e);
        }
        e = next;
    }
    Err(Error::InternalMismatch("logarithm inverse did not converge".into()))
}

impl FglContext {
    /// The p-typical law of height `n` with logarithm `Σ λ_i x^{p^i}`, where
    /// `p·λ_i = Σ_{0<j≤i} λ_{i−j} v_j^{p^{i−j}}`, `v_j = u_j` for `j < n`,
    /// `v_n = 1` and `v_j = 0` for `j > n`.
    pub fn build_ptypical(p: u32, n: u32, a: u32, b: usize, d: usize) -> Result<Self> {
        require_prime(p as u64)?;
        if n == 0 {
            return Err(Error::BadParameters("height must be at least 1".into()));
        }
        check_truncation(p, n, d)?;
        let ring = CoeffRing::new(p as u64, a, n as usize - 1, b)?;
        let rationals = RationalPolys::new(n as usize - 1, b)?;
        let v = |j: u32| {
            if j < n {
                rationals.variable(j as usize)
            } else if j == n {
                rationals.one()
            } else {
                rationals.zero()
            }
        };
        let inv_p = rationals.scalar(BigRational::new(BigInt::from(1), BigInt::from(p)));
        let mut lambdas = vec![rationals.one()];
        let mut i = 1u32;
        while (p as usize).pow(i) < d {
            let mut sum = rationals.zero();
            for j in 1..=i {
                let vj = rationals.pow(&v(j), (p as u64).pow(i - j));
                rationals.add_product(&mut sum, &lambdas[(i - j) as usize], &vj);
            }
            lambdas.push(rationals.mul(&sum, &inv_p));
            i += 1;
        }
        let x1 = Monomials::new(1, d)?;
        let mut log = Series::zero(&rationals, &x1);
        for (i, l) in lambdas.into_iter().enumerate() {
            log.set_coeff(&[(p as usize).pow(i as u32) as u8], l);
        }
        Self::from_logarithm(LawKind::PTypical, p, n, ring, x1, log)
    }

    /// `F(x, y) = x + y + xy`, logarithm `log(1 + x)`.
    pub fn multiplicative(p: u32, a: u32, d: usize) -> Result<Self> {
        require_prime(p as u64)?;
        check_truncation(p, 1, d)?;
        let ring = CoeffRing::new(p as u64, a, 0, 1)?;
        let rationals = RationalPolys::new(0, 1)?;
        let x1 = Monomials::new(1, d)?;
        let coeffs = (0..d as i64)
            .map(|j| match j {
                0 => rationals.zero(),
                _ => rationals.scalar(BigRational::new(BigInt::from(if j % 2 == 1 { 1 } else { -1 }), BigInt::from(j))),
            })
            .collect();
        let log = Series::from_coeffs(&rationals, &x1, coeffs);
        let x2 = Monomials::new(2, d)?;
        let x = Series::variable(&ring, &x2, 0);
        let y = Series::variable(&ring, &x2, 1);
        let law = x.add(&y).add(&x.mul(&y));
        Ok(FglContext { kind: LawKind::Multiplicative, p, height: 1, ring, x1, log, law })
    }

    fn from_logarithm(
        kind: LawKind,
        p: u32,
        height: u32,
        ring: CoeffRing,
        x1: Arc<Monomials>,
        log: Series<RationalPolys>,
    ) -> Result<Self> {
        let exp = inverse_series(&log)?;
        let x2 = Monomials::new(2, x1.bound())?;
        let rationals = log.ring().clone();
        let x = Series::variable(&rationals, &x2, 0);
        let y = Series::variable(&rationals, &x2, 1);
        let sum = log.compose(&[x]).add(&log.compose(&[y]));
        let rational_law = exp.compose(&[sum]);
        let law = rational_law.map(&ring, |c| ring.reduce(c))?;
        Ok(FglContext { kind, p, height, ring, x1, log, law })
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn truncation(&self) -> usize {
        self.x1.bound()
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn law(&self) -> &Series<CoeffRing> {
        &self.law
    }

    pub fn logarithm(&self) -> &Series<RationalPolys> {
        &self.log
    }

    pub fn x(&self) -> Series<CoeffRing> {
        Series::variable(&self.ring, &self.x1, 0)
    }

    /// `F(a, b)` for univariate `a`, `b` without constant term.
    pub fn add_points(&self, a: &Series<CoeffRing>, b: &Series<CoeffRing>) -> Series<CoeffRing> {
        self.law.compose(&[a.clone(), b.clone()])
    }

    /// `[m](x)` with `[0](x) = 0` and `[m](x) = F(x, [m−1](x))`.
    pub fn n_series(&self, m: u64) -> Series<CoeffRing> {
        let x = self.x();
        let mut acc = Series::zero(&self.ring, &self.x1);
        for _ in 0..m {
            acc = self.add_points(&x, &acc);
        }
        acc
    }

    /// Unit, commutativity and associativity below degree `D`.
    pub fn verify_axioms(&self) -> Result<()> {
        let x = self.x();
        let zero = Series::zero(&self.ring, &self.x1);
        if self.add_points(&x, &zero) != x || self.add_points(&zero, &x) != x {
            return Err(Error::InternalMismatch("F(x, 0) ≠ x".into()));
        }
        for (e, c) in self.law.terms() {
            if self.law.coeff(&[e[1], e[0]]) != c {
                return Err(Error::InternalMismatch(format!("F is not symmetric at x^{}y^{}", e[0], e[1])));
            }
        }
        let x3 = Monomials::new(3, self.truncation())?;
        let v: Vec<Series<CoeffRing>> = (0..3).map(|i| Series::variable(&self.ring, &x3, i)).collect();
        let xy = self.law.compose(&[v[0].clone(), v[1].clone()]);
        let yz = self.law.compose(&[v[1].clone(), v[2].clone()]);
        if self.law.compose(&[xy, v[2].clone()]) != self.law.compose(&[v[0].clone(), yz]) {
            return Err(Error::InternalMismatch("F is not associative".into()));
        }
        Ok(())
    }

    /// Whether `[p](x) ≡ x^{p^n}` modulo `(p, u_1, …, u_{n−1})`.
    pub fn honda_reduction_holds(&self) -> bool {
        let target = (self.p as usize).pow(self.height);
        self.n_series(self.p as u64)
            .coeffs()
            .iter()
            .enumerate()
            .all(|(i, c)| self.ring.residue(c) == u64::from(i == target))
    }

    /// Degree of `f` in the Weierstrass factorization of `[p^k](x)`, prepared
    /// with expected degree `p^{kn}`.
    pub fn torsion_rank(&self, k: u32) -> Result<usize> {
        let d = checked_pow(self.p as u64, k * self.height)? as usize;
        let g = self.n_series(checked_pow(self.p as u64, k)?);
        Ok(weierstrass_prep(&g, d)?.degree())
    }
}

/// Index of the first coefficient that is a unit.
pub fn weierstrass_degree(g: &Series<CoeffRing>) -> Option<usize> {
    g.coeffs().iter().position(|c| g.ring().is_unit(c))
}

/// `g = f·u` with `f` monic of degree `d` and `u` a unit.
#[derive(Clone, Debug)]
pub struct Weierstrass {
    /// Coefficients of `x^0, …, x^d`; the last is 1.
    pub polynomial: Vec<Vec<u64>>,
    pub unit: Series<CoeffRing>,
}

impl Weierstrass {
    pub fn degree(&self) -> usize {
        self.polynomial.len() - 1
    }

    pub fn polynomial_series(&self) -> Series<CoeffRing> {
        Series::from_coeffs(self.unit.ring(), self.unit.monomials(), self.polynomial.clone())
    }
}

/// Weierstrass preparation of a series `g` known below degree `D`, with terms
/// of degree `≥ D` taken to be zero.
///
/// Writing `g = g_low + x^d g_high`, the quotient `q = u⁻¹` is the fixed
/// point of `q ↦ g_high⁻¹ (1 − ⌊q g_low⌋_d)`, where `⌊·⌋_d` keeps terms of
/// degree `≥ d` and divides by `x^d`. Each step gains a factor of the maximal
/// ideal, so it stabilizes once that ideal's nilpotency is exhausted. The
/// result is re-multiplied and compared with `g`.
pub fn weierstrass_prep(g: &Series<CoeffRing>, d: usize) -> Result<Weierstrass> {
    let ring = g.ring();
    let truncation = g.truncation();
    if g.nvars() != 1 {
        return Err(Error::BadParameters("Weierstrass preparation needs a univariate series".into()));
    }
    if truncation <= d {
        return Err(Error::PrecisionExhausted(format!("D = {truncation} does not exceed d = {d}")));
    }
    let coeffs = g.coeffs();
    if let Some(i) = (0..d).find(|&i| !ring.in_maximal_ideal(&coeffs[i])) {
        return Err(Error::NotWeierstrass(format!("coefficient of x^{i} is a unit below degree {d}")));
    }
    if !ring.is_unit(&coeffs[d]) {
        return Err(Error::NotWeierstrass(format!("coefficient of x^{d} is not a unit")));
    }
    let rounds = ring.nilpotency_index() + 1;
    let work = Monomials::new(1, truncation + rounds * d)?;
    let low = Series::from_coeffs(ring, &work, coeffs[..d].to_vec());
    let high = Series::from_coeffs(ring, &work, coeffs[d..].to_vec());
    let high_inv = high.inverse()?;
    let one = Series::constant(ring, &work, ring.one());
    let shift_down = |s: &Series<CoeffRing>| Series::from_coeffs(ring, &work, s.coeffs()[d..].to_vec());
    let mut q = high_inv.clone();
    let mut stable = false;
    for _ in 0..=rounds {
        let next = high_inv.mul(&one.sub(&shift_down(&q.mul(&low))));
        if next == q {
            stable = true;
            break;
        }
        q = next;
    }
    if !stable {
        return Err(Error::PrecisionExhausted(format!("no fixed point after {rounds} rounds")));
    }
    let g_work = g.retruncate(&work);
    let product = q.mul(&g_work);
    let mut polynomial: Vec<Vec<u64>> = product.coeffs()[..d].to_vec();
    polynomial.push(ring.one());
    let unit = q.inverse()?.retruncate(g.monomials());
    let prepared = Weierstrass { polynomial, unit };
    if prepared.polynomial[..d].iter().any(|c| !ring.in_maximal_ideal(c)) {
        return Err(Error::NotWeierstrass("prepared polynomial is not distinguished".into()));
    }
    if prepared.polynomial_series().retruncate(g.monomials()).mul(&prepared.unit) != *g {
        return Err(Error::InternalMismatch("f·u differs from g below the truncation".into()));
    }
    Ok(prepared)
}

/// Non-zero terms as `{"exponent", "coefficient"}` objects.
pub fn series_json<R: Ring>(s: &Series<R>) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .into_iter()
        .map(|(e, c)| {
            let exponent = if e.len() == 1 { json!(e[0]) } else { json!(e) };
            json!({"exponent": exponent, "coefficient": s.ring().render(&c)})
        })
        .collect();
    Value::Array(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn coeff_values(s: &Series<CoeffRing>) -> Vec<u64> {
        s.coeffs().iter().map(|c| c[0]).collect()
    }

    #[test]
    fn multiplicative_series() {
        let ctx = FglContext::multiplicative(2, 4, 6).unwrap();
        ctx.verify_axioms().unwrap();
        assert_eq!(coeff_values(&ctx.n_series(2)), vec![0, 2, 1, 0, 0, 0]);
        assert_eq!(coeff_values(&ctx.n_series(4)), vec![0, 4, 6, 4, 1, 0]);
        assert_eq!(ctx.n_series(1), ctx.x());
        assert!(ctx.n_series(0).is_zero());
        assert!(ctx.honda_reduction_holds());
    }

    #[test]
    fn multiplicative_log_recovers_the_law() {
        let ctx = FglContext::multiplicative(3, 2, 8).unwrap();
        let exp = inverse_series(ctx.logarithm()).unwrap();
        let x2 = Monomials::new(2, 8).unwrap();
        let rat = ctx.logarithm().ring().clone();
        let x = Series::variable(&rat, &x2, 0);
        let y = Series::variable(&rat, &x2, 1);
        let f = exp.compose(&[ctx.logarithm().compose(std::slice::from_ref(&x)).add(&ctx.logarithm().compose(std::slice::from_ref(&y)))]);
        assert_eq!(f, x.add(&y).add(&x.mul(&y)));
    }

    #[test]
    fn height_one_ptypical() {
        for p in [2u32, 3, 5] {
            let ctx = FglContext::build_ptypical(p, 1, 3, 1, 2 * p as usize + 2).unwrap();
            ctx.verify_axioms().unwrap();
            assert!(ctx.honda_reduction_holds());
            if p == 2 {
                let xy = ctx.law().coeff(&[1, 1]);
                assert!(ctx.ring().is_unit(&xy));
            }
        }
    }

    #[test]
    fn height_two_at_two() {
        let ctx = FglContext::build_ptypical(2, 2, 3, 3, 17).unwrap();
        ctx.verify_axioms().unwrap();
        assert!(ctx.honda_reduction_holds());
        let two = ctx.n_series(2);
        let four = ctx.add_points(&two, &two);
        assert_eq!(four, ctx.n_series(4));
        for (m, m2) in [(1u64, 2u64), (2, 3), (3, 3)] {
            assert_eq!(ctx.add_points(&ctx.n_series(m), &ctx.n_series(m2)), ctx.n_series(m + m2));
        }
        assert_eq!(ctx.torsion_rank(1).unwrap(), 4);
        assert_eq!(weierstrass_degree(&ctx.n_series(2)), Some(4));
        assert_eq!(ctx.torsion_rank(0).unwrap(), 1);
    }

    #[test]
    fn log_coefficients_at_height_two() {
        // λ_1 = u_1/2, λ_2 = (1 + λ_1 u_1²)/2 = 1/2 + u_1³/4, truncated at u-degree 3
        let ctx = FglContext::build_ptypical(2, 2, 2, 3, 5).unwrap();
        let rat = ctx.logarithm().ring();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(ctx.logarithm().coeff(&[2]), rat.mul(&rat.scalar(half.clone()), &rat.variable(1)));
        assert_eq!(ctx.logarithm().coeff(&[4]), rat.scalar(half));
        assert!(ctx.logarithm().coeff(&[3]).iter().all(Zero::is_zero));
    }

    #[test]
    fn weierstrass_examples() {
        let ctx = FglContext::multiplicative(2, 4, 6).unwrap();
        let w = weierstrass_prep(&ctx.n_series(2), 2).unwrap();
        assert_eq!(w.polynomial.iter().map(|c| c[0]).collect::<Vec<_>>(), vec![0, 2, 1]);
        assert_eq!(w.unit, Series::constant(ctx.ring(), ctx.n_series(2).monomials(), ctx.ring().one()));
        let g = ctx.n_series(4);
        let w = weierstrass_prep(&g, 4).unwrap();
        assert_eq!(w.degree(), 4);
        assert_eq!(w.polynomial_series().mul(&w.unit), g);
        assert_eq!(ctx.torsion_rank(2).unwrap(), 4);
    }

    #[test]
    fn weierstrass_errors() {
        let ctx = FglContext::multiplicative(2, 4, 6).unwrap();
        let g = ctx.n_series(4);
        assert!(matches!(weierstrass_prep(&g, 2), Err(Error::NotWeierstrass(_))));
        assert!(matches!(weierstrass_prep(&g, 6), Err(Error::PrecisionExhausted(_))));
        let x = ctx.x();
        assert_eq!(weierstrass_prep(&x, 1).unwrap().degree(), 1);
    }

    #[test]
    fn nontrivial_unit() {
        // g = (x^2 + 2x)(1 + x + 3x^2) over Z/8: the preparation must undo the product
        let ring = CoeffRing::new(2, 3, 0, 1).unwrap();
        let m = Monomials::new(1, 7).unwrap();
        let f = Series::from_coeffs(&ring, &m, vec![ring.zero(), ring.from_int(2), ring.one()]);
        let u = Series::from_coeffs(&ring, &m, vec![ring.one(), ring.one(), ring.from_int(3)]);
        let g = f.mul(&u);
        let w = weierstrass_prep(&g, 2).unwrap();
        assert_eq!(w.polynomial_series(), f);
        assert_eq!(w.unit, u);
    }

    #[test]
    fn truncation_checks() {
        assert!(matches!(FglContext::build_ptypical(2, 2, 2, 2, 4), Err(Error::TruncationTooSmall(_))));
        assert!(matches!(FglContext::build_ptypical(4, 1, 2, 2, 9), Err(Error::NotPrime(4))));
        assert!(matches!(FglContext::build_ptypical(2, 1, 2, 2, 500), Err(Error::ResourceLimit(_))));
        assert_eq!(default_truncation(2, 2, 1).unwrap(), 17);
        assert_eq!(default_truncation(3, 2, 1).unwrap(), 17);
        assert_eq!(default_truncation(2, 1, 2).unwrap(), 5);
    }

    #[test]
    fn json_terms() {
        let ctx = FglContext::multiplicative(2, 4, 4).unwrap();
        let j = series_json(&ctx.n_series(2));
        assert_eq!(j, json!([{"exponent": 1, "coefficient": "2"}, {"exponent": 2, "coefficient": "1"}]));
        assert_eq!(ctx.n_series(2).render(), "2·x + x^2");
    }
}
