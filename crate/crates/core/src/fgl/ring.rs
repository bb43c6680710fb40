use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::mod_inverse;
use crate::error::{Error, Result};

/// Monomials in `nvars` variables of total degree `< bound`, ordered by
/// degree and then lexicographically, with a table of all products that
/// survive truncation.
#[derive(Debug)]
pub struct Monomials {
    nvars: usize,
    bound: usize,
    exps: Vec<Vec<u8>>,
    degrees: Vec<usize>,
    lookup: Vec<u32>,
    /// `pairs[pair_start[i]..pair_start[i + 1]]` lists `(j, i·j)`.
    pairs: Vec<(u32, u32)>,
    pair_start: Vec<usize>,
}

const ABSENT: u32 = u32::MAX;

impl Monomials {
    pub fn new(nvars: usize, bound: usize) -> Result<Arc<Self>> {
        let radix = bound.max(1);
        let table = radix
            .checked_pow(nvars as u32)
            .filter(|&n| n <= 1 << 22)
            .ok_or_else(|| Error::ResourceLimit(format!("{nvars} variables below degree {bound}")))?;
        let mut exps = Vec::new();
        for d in 0..bound {
            let mut of_degree = Vec::new();
            compositions(nvars, d, &mut Vec::new(), &mut of_degree);
            of_degree.sort_unstable_by(|a: &Vec<u8>, b| b.cmp(a));
            exps.extend(of_degree);
        }
        let codes: Vec<usize> = exps
            .iter()
            .map(|e| e.iter().rev().fold(0, |acc, &x| acc * radix + x as usize))
            .collect();
        let mut lookup = vec![ABSENT; table];
        for (i, &c) in codes.iter().enumerate() {
            lookup[c] = i as u32;
        }
        let degrees: Vec<usize> = exps.iter().map(|e| e.iter().map(|&x| x as usize).sum()).collect();
        let mut pairs = Vec::new();
        let mut pair_start = Vec::with_capacity(exps.len() + 1);
        for i in 0..exps.len() {
            pair_start.push(pairs.len());
            for j in 0..exps.len() {
                if degrees[i] + degrees[j] >= bound {
                    break;
                }
                pairs.push((j as u32, lookup[codes[i] + codes[j]]));
            }
        }
        pair_start.push(pairs.len());
        Ok(Arc::new(Monomials { nvars, bound, exps, degrees, lookup, pairs, pair_start }))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self, i: usize) -> &[u8] {
        &self.exps[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn index(&self, exps: &[u8]) -> Option<usize> {
        if exps.len() != self.nvars || exps.iter().map(|&x| x as usize).sum::<usize>() >= self.bound {
            return None;
        }
        let code = exps.iter().rev().fold(0, |acc, &x| acc * self.bound.max(1) + x as usize);
        Some(self.lookup[code] as usize)
    }

    pub(crate) fn products(&self, i: usize) -> &[(u32, u32)] {
        &self.pairs[self.pair_start[i]..self.pair_start[i + 1]]
    }
}

fn compositions(nvars: usize, total: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
    if prefix.len() + 1 == nvars {
        prefix.push(total as u8);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    if nvars == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for x in 0..=total {
        prefix.push(x as u8);
        compositions(nvars, total - x, prefix, out);
        prefix.pop();
    }
}

/// Commutative ring with unit, as used for series coefficients.
pub trait Ring: Clone + Send + Sync {
    type El: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn from_int(&self, n: i64) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn inverse(&self, a: &Self::El) -> Option<Self::El>;
    fn render(&self, a: &Self::El) -> String;

    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.add(a, &self.neg(b))
    }

    fn add_product(&self, acc: &mut Self::El, a: &Self::El, b: &Self::El) {
        *acc = self.add(acc, &self.mul(a, b));
    }

    fn pow(&self, a: &Self::El, mut e: u64) -> Self::El {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

fn variable_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("u{i}")).collect()
}

fn render_terms<T>(monos: &Monomials, coeffs: &[T], is_zero: impl Fn(&T) -> bool, show: impl Fn(&T) -> String) -> String {
    let names = variable_names(monos.nvars());
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !is_zero(c))
        .map(|(i, c)| {
            let mono: Vec<String> = monos
                .exponents(i)
                .iter()
                .zip(&names)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, n)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            let c = show(c);
            match (mono.is_empty(), c.as_str()) {
                (true, _) => c,
                (false, "1") => mono.join("*"),
                _ => format!("{c}*{}", mono.join("*")),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// `Q[u_1, …, u_{n−1}]` modulo monomials of total degree `≥ b`.
#[derive(Clone, Debug)]
pub struct RationalPolys {
    monos: Arc<Monomials>,
}

impl RationalPolys {
    pub fn new(vars: usize, b: usize) -> Result<Self> {
        Ok(RationalPolys { monos: Monomials::new(vars, b)? })
    }

    pub fn monomials(&self) -> &Arc<Monomials> {
        &self.monos
    }

    /// The variable `u_i` (1-based), zero if truncated away.
    pub fn variable(&self, i: usize) -> Vec<BigRational> {
        let mut e = vec![0u8; self.monos.nvars()];
        e[i - 1] = 1;
        let mut out = self.zero();
        if let Some(j) = self.monos.index(&e) {
            out[j] = BigRational::one();
        }
        out
    }

    pub fn scalar(&self, q: BigRational) -> Vec<BigRational> {
        let mut out = self.zero();
        out[0] = q;
        out
    }
}

impl Ring for RationalPolys {
    type El = Vec<BigRational>;

    fn zero(&self) -> Self::El {
        vec![BigRational::zero(); self.monos.len()]
    }

    fn one(&self) -> Self::El {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> Self::El {
        self.scalar(BigRational::from_integer(BigInt::from(n)))
    }

    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn neg(&self, a: &Self::El) -> Self::El {
        a.iter().map(|x| -x).collect()
    }

    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El {
        let mut out = self.zero();
        self.add_product(&mut out, a, b);
        out
    }

    fn add_product(&self, acc: &mut Self::El, a: &Self::El, b: &Self::El) {
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for &(j, k) in self.monos.products(i) {
                let y = &b[j as usize];
                if !y.is_zero() {
                    acc[k as usize] += x * y;
                }
            }
        }
    }

    fn is_zero(&self, a: &Self::El) -> bool {
        a.iter().all(Zero::is_zero)
    }

    fn inverse(&self, a: &Self::El) -> Option<Self::El> {
        if a.is_empty() || a[0].is_zero() {
            return None;
        }
        let c = a[0].recip();
        let mut r = self.mul(&self.scalar(c.clone()), a);
        r[0] = BigRational::zero();
        let r = self.neg(&r);
        // (1 + r')⁻¹ with r' nilpotent
        let mut acc = self.one();
        let mut power = self.one();
        for _ in 1..self.monos.bound() {
            power = self.mul(&power, &r);
            acc = self.add(&acc, &power);
        }
        Some(self.mul(&acc, &self.scalar(c)))
    }

    fn render(&self, a: &Self::El) -> String {
        render_terms(&self.monos, a, Zero::is_zero, |q| {
            if q.is_integer() {
                q.numer().to_string()
            } else {
                q.to_string()
            }
        })
    }
}

/// `Z/p^a[u_1, …, u_{n−1}]` modulo monomials of total degree `≥ b`: a
/// truncation of the local ring `Z_p⟦u_1, …, u_{n−1}⟧`.
#[derive(Clone, Debug)]
pub struct CoeffRing {
    p: u64,
    a: u32,
    modulus: u64,
    monos: Arc<Monomials>,
}

impl CoeffRing {
    pub fn new(p: u64, a: u32, vars: usize, b: usize) -> Result<Self> {
        crate::arith::require_prime(p)?;
        if a == 0 || b == 0 {
            return Err(Error::BadParameters("precision a and u-truncation b must be at least 1".into()));
        }
        let modulus = crate::arith::checked_pow(p, a)?;
        if modulus > u32::MAX as u64 {
            return Err(Error::ResourceLimit(format!("p^a = {modulus} does not fit the coefficient word")));
        }
        Ok(CoeffRing { p, a, modulus, monos: Monomials::new(vars, b)? })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn monomials(&self) -> &Arc<Monomials> {
        &self.monos
    }

    /// Smallest `N` with `𝔪^N = 0` for `𝔪 = (p, u_1, …)`.
    pub fn nilpotency_index(&self) -> usize {
        let u_part = if self.monos.nvars() == 0 { 0 } else { self.monos.bound() - 1 };
        self.a as usize + u_part
    }

    pub fn in_maximal_ideal(&self, x: &[u64]) -> bool {
        x[0].is_multiple_of(self.p)
    }

    pub fn is_unit(&self, x: &[u64]) -> bool {
        !self.in_maximal_ideal(x)
    }

    /// Image in the residue field `F_p`.
    pub fn residue(&self, x: &[u64]) -> u64 {
        x[0] % self.p
    }

    /// Image of a `p`-integral rational polynomial.
    pub fn reduce(&self, q: &[BigRational]) -> Result<Vec<u64>> {
        let m = BigInt::from(self.modulus);
        let p = BigInt::from(self.p);
        q.iter()
            .map(|c| {
                let denom = c.denom();
                if (denom % &p).is_zero() {
                    return Err(Error::IntegralityFailure(format!("coefficient {c} is not p-integral for p = {p}")));
                }
                let d = denom.mod_floor(&m).to_u64().expect("reduced below modulus");
                let inv = mod_inverse(d, self.modulus).expect("unit mod p^a");
                let n = c.numer().mod_floor(&m).to_u64().expect("reduced below modulus");
                Ok(((n as u128 * inv as u128) % self.modulus as u128) as u64)
            })
            .collect()
    }

    fn norm(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }
}

impl Ring for CoeffRing {
    type El = Vec<u64>;

    fn zero(&self) -> Self::El {
        vec![0; self.monos.len()]
    }

    fn one(&self) -> Self::El {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> Self::El {
        let mut out = self.zero();
        out[0] = self.norm(n);
        out
    }

    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.modulus).collect()
    }

    fn neg(&self, a: &Self::El) -> Self::El {
        a.iter().map(|&x| (self.modulus - x) % self.modulus).collect()
    }

    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El {
        let mut out = self.zero();
        self.add_product(&mut out, a, b);
        out
    }

    fn add_product(&self, acc: &mut Self::El, a: &Self::El, b: &Self::El) {
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for &(j, k) in self.monos.products(i) {
                let y = b[j as usize];
                if y != 0 {
                    let slot = &mut acc[k as usize];
                    *slot = (*slot + x * y) % self.modulus;
                }
            }
        }
    }

    fn is_zero(&self, a: &Self::El) -> bool {
        a.iter().all(|&x| x == 0)
    }

    fn inverse(&self, a: &Self::El) -> Option<Self::El> {
        let c = mod_inverse(a[0], self.modulus)?;
        let scalar = self.from_int(c as i64);
        let mut r = self.mul(&scalar, a);
        r[0] = 0;
        let r = self.neg(&r);
        let mut acc = self.one();
        let mut power = self.one();
        for _ in 1..self.monos.bound() {
            power = self.mul(&power, &r);
            acc = self.add(&acc, &power);
        }
        Some(self.mul(&acc, &scalar))
    }

    fn render(&self, a: &Self::El) -> String {
        render_terms(&self.monos, a, |&x| x == 0, |x| x.to_string())
    }
}

/// Exact rationals, for closed-form checks.
#[derive(Clone, Debug, Default)]
pub struct Rationals;

impl Ring for Rationals {
    type El = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn inverse(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }

    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else if a.is_negative() {
            format!("-{}", -a)
        } else {
            a.to_string()
        }
    }
}
