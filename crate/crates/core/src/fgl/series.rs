use std::sync::Arc;

use super::ring::{Monomials, Ring};
use crate::error::{Error, Result};

/// Power series in `nvars` variables with coefficients in `R`, truncated at
/// total degree `D`: only monomials of degree `< D` are kept.
#[derive(Clone, Debug)]
pub struct Series<R: Ring> {
    ring: R,
    monos: Arc<Monomials>,
    coeffs: Vec<R::El>,
}

impl<R: Ring> PartialEq for Series<R> {
    fn eq(&self, other: &Self) -> bool {
        self.monos.nvars() == other.monos.nvars()
            && self.monos.bound() == other.monos.bound()
            && self.coeffs == other.coeffs
    }
}

/// Univariate truncated series.
pub type TruncSeries<R> = Series<R>;

impl<R: Ring> Series<R> {
    pub fn zero(ring: &R, monos: &Arc<Monomials>) -> Self {
        Series { ring: ring.clone(), monos: monos.clone(), coeffs: vec![ring.zero(); monos.len()] }
    }

    /// The `i`-th variable (0-based).
    pub fn variable(ring: &R, monos: &Arc<Monomials>, i: usize) -> Self {
        let mut s = Self::zero(ring, monos);
        let mut e = vec![0u8; monos.nvars()];
        e[i] = 1;
        if let Some(j) = monos.index(&e) {
            s.coeffs[j] = ring.one();
        }
        s
    }

    pub fn constant(ring: &R, monos: &Arc<Monomials>, c: R::El) -> Self {
        let mut s = Self::zero(ring, monos);
        if !monos.is_empty() {
            s.coeffs[0] = c;
        }
        s
    }

    /// Univariate series from coefficients of `x^0, x^1, …`; terms beyond
    /// the truncation are dropped and missing ones are zero.
    pub fn from_coeffs(ring: &R, monos: &Arc<Monomials>, coeffs: Vec<R::El>) -> Self {
        assert_eq!(monos.nvars(), 1, "from_coeffs builds univariate series");
        let mut s = Self::zero(ring, monos);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn monomials(&self) -> &Arc<Monomials> {
        &self.monos
    }

    pub fn truncation(&self) -> usize {
        self.monos.bound()
    }

    pub fn nvars(&self) -> usize {
        self.monos.nvars()
    }

    pub fn coeffs(&self) -> &[R::El] {
        &self.coeffs
    }

    pub fn coeff(&self, exps: &[u8]) -> R::El {
        self.monos.index(exps).map_or_else(|| self.ring.zero(), |i| self.coeffs[i].clone())
    }

    pub fn set_coeff(&mut self, exps: &[u8], c: R::El) {
        if let Some(i) = self.monos.index(exps) {
            self.coeffs[i] = c;
        }
    }

    fn same_space(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.monos, &other.monos)
                || (self.monos.nvars() == other.monos.nvars() && self.monos.bound() == other.monos.bound()),
            "series in different spaces"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_space(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.ring.add(a, b)).collect();
        Series { ring: self.ring.clone(), monos: self.monos.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.neg(a)).collect();
        Series { ring: self.ring.clone(), monos: self.monos.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::El) -> Self {
        let coeffs = self.coeffs.iter().map(|a| self.ring.mul(c, a)).collect();
        Series { ring: self.ring.clone(), monos: self.monos.clone(), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_space(other);
        let mut coeffs = vec![self.ring.zero(); self.monos.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(a) {
                continue;
            }
            for &(j, k) in self.monos.products(i) {
                let b = &other.coeffs[j as usize];
                if !self.ring.is_zero(b) {
                    self.ring.add_product(&mut coeffs[k as usize], a, b);
                }
            }
        }
        Series { ring: self.ring.clone(), monos: self.monos.clone(), coeffs }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant(&self.ring, &self.monos, self.ring.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    pub fn constant_term(&self) -> R::El {
        self.coeffs.first().cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c = self
            .ring
            .inverse(&self.constant_term())
            .ok_or_else(|| Error::BadParameters("series has no invertible constant term".into()))?;
        // x⁻¹ = c⁻¹ Σ (1 − c⁻¹x)^i, and 1 − c⁻¹x has no constant term
        let one = Self::constant(&self.ring, &self.monos, self.ring.one());
        let r = one.sub(&self.scale(&c));
        let mut acc = one.clone();
        let mut power = one;
        for _ in 1..self.truncation() {
            power = power.mul(&r);
            acc = acc.add(&power);
        }
        Ok(acc.scale(&c))
    }

    /// Substitute `args[i]` for the `i`-th variable; the arguments must have
    /// no constant term and share one space.
    pub fn compose(&self, args: &[Series<R>]) -> Self {
        assert_eq!(args.len(), self.nvars(), "one argument per variable");
        let target = &args[0].monos;
        let bound = self.truncation().min(target.bound());
        let mut powers: Vec<Vec<Series<R>>> = Vec::with_capacity(args.len());
        for a in args {
            let mut list = vec![Series::constant(&self.ring, target, self.ring.one())];
            for e in 1..bound {
                list.push(list[e - 1].mul(a));
            }
            powers.push(list);
        }
        let mut out = Series::zero(&self.ring, target);
        // group monomials by all exponents but the last
        let last = self.nvars() - 1;
        let mut groups: std::collections::BTreeMap<Vec<u8>, Vec<(usize, &R::El)>> = Default::default();
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            let e = self.monos.exponents(i);
            groups.entry(e[..last].to_vec()).or_default().push((e[last] as usize, c));
        }
        for (head, terms) in groups {
            let mut inner = Series::zero(&self.ring, target);
            for (e, c) in terms {
                if e < bound {
                    inner = inner.add(&powers[last][e].scale(c));
                }
            }
            let mut term = inner;
            for (v, &e) in head.iter().enumerate() {
                if e as usize >= bound {
                    term = Series::zero(&self.ring, target);
                    break;
                }
                if e > 0 {
                    term = term.mul(&powers[v][e as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Apply a ring map coefficientwise.
    pub fn map<S: Ring>(&self, ring: &S, f: impl Fn(&R::El) -> Result<S::El>) -> Result<Series<S>> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Series { ring: ring.clone(), monos: self.monos.clone(), coeffs })
    }

    /// Same series viewed in another truncation of the same number of variables.
    pub fn retruncate(&self, monos: &Arc<Monomials>) -> Self {
        assert_eq!(monos.nvars(), self.nvars());
        let mut out = Series::zero(&self.ring, monos);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.set_coeff(self.monos.exponents(i), c.clone());
        }
        out
    }

    /// Non-zero terms as `(exponents, coefficient)`.
    pub fn terms(&self) -> Vec<(Vec<u8>, R::El)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(|(i, c)| (self.monos.exponents(i).to_vec(), c.clone()))
            .collect()
    }

    /// `c·x^e` terms joined by ` + `; variables are `x`, `y`, `z` in order.
    pub fn render(&self) -> String {
        const NAMES: [&str; 3] = ["x", "y", "z"];
        let terms: Vec<String> = self
            .terms()
            .into_iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(v, &x)| {
                        let name = NAMES.get(v).copied().unwrap_or("w");
                        if x == 1 {
                            name.to_string()
                        } else {
                            format!("{name}^{x}")
                        }
                    })
                    .collect();
                let c = self.ring.render(&c);
                let c = if c.parse::<i64>().is_ok() { c } else { format!("({c})") };
                match (mono.is_empty(), c.as_str()) {
                    (true, _) => c,
                    (false, "1") => mono.join("*"),
                    _ => format!("{c}·{}", mono.join("*")),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::ring::Rationals;
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn univariate_arithmetic() {
        let m = Monomials::new(1, 6).unwrap();
        let x = Series::variable(&Rationals, &m, 0);
        let one = Series::constant(&Rationals, &m, q(1, 1));
        let geometric = one.sub(&x).inverse().unwrap();
        assert!(geometric.coeffs().iter().all(|c| c == &q(1, 1)));
        let sq = one.add(&x).pow(2);
        assert_eq!(sq.coeffs()[..3], [q(1, 1), q(2, 1), q(1, 1)]);
        assert_eq!(sq.render(), "1 + 2·x + x^2");
    }

    #[test]
    fn composition_matches_expansion() {
        let m2 = Monomials::new(2, 7).unwrap();
        let m1 = Monomials::new(1, 7).unwrap();
        let x = Series::variable(&Rationals, &m2, 0);
        let y = Series::variable(&Rationals, &m2, 1);
        let f = x.add(&y).add(&x.mul(&y));
        let t = Series::variable(&Rationals, &m1, 0);
        let t2 = t.mul(&t);
        // f(t, t²) = t + t² + t³
        let g = f.compose(&[t.clone(), t2]);
        assert_eq!(g.coeffs()[..5], [q(0, 1), q(1, 1), q(1, 1), q(1, 1), q(0, 1)]);
        // substituting the variables themselves is the identity
        assert_eq!(f.compose(&[x, y]), f);
    }
}
