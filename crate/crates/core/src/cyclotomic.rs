//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored by its coordinates in the power basis
//! `1, ζ_N, …, ζ_N^{φ(N)-1}`, fully reduced modulo the cyclotomic polynomial
//! `Φ_N`. Because `Z[ζ_N]` is the whole ring of integers of `Q(ζ_N)`, p-local
//! integrality is read off coordinate-wise: `x ∈ p^v·Z_(p)[ζ_N]` exactly when
//! every coordinate has p-adic valuation at least `v`.
//!
//! Elements of different orders are combined by first embedding both into
//! `Q(ζ_L)` with `L = lcm` of the two orders. Rationals are elements of order 1.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{divisors, lcm, mod_pow, totient};
use crate::rational::{format_rational, parse_rational, rational_valuation, Rational, Valuation};
use crate::{Error, Result};

type Poly = Vec<i64>;

fn phi_cache() -> &'static RwLock<HashMap<u64, Arc<Poly>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<Poly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Φ_N` as integer coefficients, lowest degree first. Monic of degree `φ(N)`.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Poly> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return Arc::clone(p);
    }
    // x^N - 1 = ∏_{d | N} Φ_d, so divide out every proper divisor.
    let mut num: Poly = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d < n {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    let poly = Arc::new(num);
    phi_cache()
        .write()
        .unwrap()
        .entry(n)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Poly {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for t in (dd..num.len()).rev() {
        let c = rem[t];
        if c == 0 {
            continue;
        }
        quot[t - dd] = c;
        for (i, &di) in den.iter().enumerate() {
            rem[t - dd + i] -= c * di;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

pub fn euler_phi(n: u64) -> usize {
    totient(n) as usize
}

/// An element of `Q(ζ_N)` in canonical reduced form.
#[derive(Clone, Debug)]
pub struct CyclotomicElement {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicElement {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1);
        Self {
            order,
            coeffs: vec![Rational::zero(); euler_phi(order)],
        }
    }

    pub fn one(order: u64) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u64, r: Rational) -> Self {
        let mut x = Self::zero(order);
        x.coeffs[0] = r;
        x
    }

    pub fn from_integer(order: u64, n: i64) -> Self {
        Self::from_rational(order, Rational::from_integer(BigInt::from(n)))
    }

    /// `ζ_N^j` for any integer `j`.
    pub fn zeta(order: u64, j: i64) -> Self {
        let e = j.rem_euclid(order as i64) as usize;
        let mut c = vec![Rational::zero(); order as usize];
        c[e] = Rational::one();
        Self::from_power_coeffs(order, c)
    }

    /// `Σ c_i ζ_N^i` for an arbitrary-length coefficient list.
    pub fn from_power_coeffs(order: u64, coeffs: Vec<Rational>) -> Self {
        assert!(order >= 1);
        Self {
            order,
            coeffs: reduce(order, coeffs),
        }
    }

    /// `Σ_e c_e ζ_N^e` with integer weights, the shape every character sum takes.
    pub fn from_root_sums(order: u64, sums: &[BigInt]) -> Self {
        Self::from_scaled_integers(order, sums.to_vec(), &BigInt::one())
    }

    /// `(Σ c_i ζ_N^i) / denom` for integer `c_i`; the reduction runs in integers.
    pub fn from_scaled_integers(order: u64, coeffs: Vec<BigInt>, denom: &BigInt) -> Self {
        assert!(order >= 1 && !denom.is_zero());
        let coeffs = reduce_integers(order, coeffs)
            .into_iter()
            .map(|c| Rational::new(c, denom.clone()))
            .collect();
        Self { order, coeffs }
    }

    /// Rebuilds an element from stored coordinates, checking the length.
    pub fn from_canonical(order: u64, coeffs: Vec<Rational>) -> Result<Self> {
        if order == 0 || coeffs.len() != euler_phi(order) {
            return Err(Error::domain(format!(
                "Q(ζ_{order}) needs {} coordinates, got {}",
                if order == 0 { 0 } else { euler_phi(order) },
                coeffs.len()
            )));
        }
        Ok(Self { order, coeffs })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    /// Image under `Q(ζ_N) ⊂ Q(ζ_M)`, `ζ_N ↦ ζ_M^{M/N}`. Requires `N | M`.
    pub fn embed(&self, order: u64) -> Self {
        assert!(
            order.is_multiple_of(self.order),
            "cannot embed Q(ζ_{}) into Q(ζ_{order})",
            self.order
        );
        if order == self.order {
            return self.clone();
        }
        let step = (order / self.order) as usize;
        let mut c = vec![Rational::zero(); order as usize];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i * step] = x.clone();
        }
        Self::from_power_coeffs(order, c)
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        let order = lcm(self.order, other.order);
        (self.embed(order), other.embed(order))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.order, r.recip()));
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|&c| Rational::from_integer(c.into()))
            .collect();
        let inv = poly_inverse_mod(&self.coeffs, &phi).ok_or(Error::DivisionByZero)?;
        Ok(Self::from_power_coeffs(self.order, inv))
    }

    pub fn checked_div(&self, d: &Self) -> Result<Self> {
        Ok(self * &d.inverse()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Minimum p-adic valuation over the power-basis coordinates.
    pub fn p_content_valuation(&self, p: u64) -> Valuation {
        self.coeffs
            .iter()
            .map(|c| rational_valuation(c, p))
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Coordinates as `"num/den"` strings.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

fn reduce_integers(order: u64, mut coeffs: Vec<BigInt>) -> Vec<BigInt> {
    let n = order as usize;
    if coeffs.len() > n {
        let tail = coeffs.split_off(n);
        for (i, c) in tail.into_iter().enumerate() {
            coeffs[i % n] += c;
        }
    }
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    if coeffs.len() < deg {
        coeffs.resize(deg, BigInt::zero());
    }
    for t in (deg..coeffs.len()).rev() {
        if coeffs[t].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut coeffs[t]);
        for (i, &f) in phi[..deg].iter().enumerate() {
            if f != 0 {
                coeffs[t - deg + i] -= &c * f;
            }
        }
    }
    coeffs.truncate(deg);
    coeffs
}

fn reduce(order: u64, mut coeffs: Vec<Rational>) -> Vec<Rational> {
    let n = order as usize;
    if coeffs.len() > n {
        let tail = coeffs.split_off(n);
        for (i, c) in tail.into_iter().enumerate() {
            if !c.is_zero() {
                coeffs[i % n] += c;
            }
        }
    }
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    if coeffs.len() < deg {
        coeffs.resize(deg, Rational::zero());
    }
    for t in (deg..coeffs.len()).rev() {
        if coeffs[t].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut coeffs[t]);
        for (i, &f) in phi[..deg].iter().enumerate() {
            if f != 0 {
                coeffs[t - deg + i] -= &c * Rational::from_integer(f.into());
            }
        }
    }
    coeffs.truncate(deg);
    coeffs
}

fn trim(p: &mut Vec<Rational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_sub_mul(a: &[Rational], q: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = a.to_vec();
    let len = (q.len() + b.len()).saturating_sub(1).max(a.len());
    out.resize(len, Rational::zero());
    for (i, qi) in q.iter().enumerate() {
        if qi.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] -= qi * bj;
        }
    }
    trim(&mut out);
    out
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut rem = a.to_vec();
    let mut quot = vec![Rational::zero(); a.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] / &lead;
        for (i, bi) in b[..=db].iter().enumerate() {
            rem[dr - db + i] -= &c * bi;
        }
        quot[dr - db] = c;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

/// Extended Euclid in `Q[x]`: the inverse of `a` modulo `m`, if coprime.
fn poly_inverse_mod(a: &[Rational], m: &[Rational]) -> Option<Vec<Rational>> {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0 = vec![Rational::zero()];
    let mut s1 = vec![Rational::one()];
    loop {
        let d1 = degree(&r1)?;
        if d1 == 0 {
            let c = r1[0].recip();
            return Some(s1.into_iter().map(|x| x * &c).collect());
        }
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub_mul(&s0, &q, &s1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
}

impl PartialEq for CyclotomicElement {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.unify(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicElement {}

impl Add for &CyclotomicElement {
    type Output = CyclotomicElement;

    fn add(self, rhs: Self) -> CyclotomicElement {
        if self.order != rhs.order {
            let (a, b) = self.unify(rhs);
            return &a + &b;
        }
        CyclotomicElement {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CyclotomicElement {
    type Output = CyclotomicElement;

    fn sub(self, rhs: Self) -> CyclotomicElement {
        if self.order != rhs.order {
            let (a, b) = self.unify(rhs);
            return &a - &b;
        }
        CyclotomicElement {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Mul for &CyclotomicElement {
    type Output = CyclotomicElement;

    fn mul(self, rhs: Self) -> CyclotomicElement {
        if self.order != rhs.order {
            let (a, b) = self.unify(rhs);
            return &a * &b;
        }
        if let Some(r) = self.as_rational() {
            return rhs.scale(r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(r);
        }
        let n = self.coeffs.len();
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CyclotomicElement::from_power_coeffs(self.order, prod)
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;

    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr for CyclotomicElement {
            type Output = CyclotomicElement;
            fn $f(self, rhs: Self) -> CyclotomicElement {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&CyclotomicElement> for CyclotomicElement {
            type Output = CyclotomicElement;
            fn $f(self, rhs: &CyclotomicElement) -> CyclotomicElement {
                (&self).$f(rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for CyclotomicElement {
    type Output = CyclotomicElement;

    fn neg(self) -> CyclotomicElement {
        -&self
    }
}

impl From<Rational> for CyclotomicElement {
    fn from(r: Rational) -> Self {
        Self::from_rational(1, r)
    }
}

impl From<i64> for CyclotomicElement {
    fn from(n: i64) -> Self {
        Self::from_integer(1, n)
    }
}

impl fmt::Display for CyclotomicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "z{}", self.order)?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    order: u64,
    coeffs: Vec<String>,
}

impl Serialize for CyclotomicElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            order: self.order,
            coeffs: self.coeff_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ElementRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CyclotomicElement::from_canonical(repr.order, coeffs).map_err(D::Error::custom)
    }
}

/// `ζ_N^{j mod N}`.
pub fn zeta(order: u64, j: i64) -> CyclotomicElement {
    CyclotomicElement::zeta(order, j)
}

pub fn p_content_valuation(x: &CyclotomicElement, p: u64) -> Valuation {
    x.p_content_valuation(p)
}

/// Whether `x ≡ y (mod p^n)`, with the observed margin `ν_p(x - y)`.
pub fn congruent_mod(x: &CyclotomicElement, y: &CyclotomicElement, p: u64, n: i64) -> (bool, Valuation) {
    let margin = (x - y).p_content_valuation(p);
    (margin.at_least(n), margin)
}

/// Whether `x / d` lies in `Z_(p)[ζ]`.
pub fn divides_p_locally(d: &CyclotomicElement, x: &CyclotomicElement, p: u64) -> Result<bool> {
    Ok(x.checked_div(d)?.p_content_valuation(p).at_least(0))
}

/// Whether the p-integral element `x` is prime to `p`, i.e. a unit of `Z_(p)[ζ]`.
///
/// Coordinate valuation 0 is not enough: `1 - ζ_p` has unit coordinates yet
/// lies in the prime above `p`. Since `Z[ζ_N]/p ≅ F_p[t]/(Φ_N)`, `x` is a unit
/// exactly when its reduction is coprime to `Φ_N` over `F_p`.
pub fn is_p_unit(x: &CyclotomicElement, p: u64) -> bool {
    if x.is_zero() || !x.p_content_valuation(p).at_least(0) {
        return false;
    }
    let reduce = |c: &Rational| -> u64 {
        let pb = BigInt::from(p);
        let num = c.numer().mod_floor(&pb);
        let den = c.denom().mod_floor(&pb);
        let num = u64::try_from(num).unwrap();
        let den = u64::try_from(den).unwrap();
        mul_mod(num, mod_pow(den, p - 2, p), p)
    };
    let xbar: Vec<u64> = x.coeffs().iter().map(reduce).collect();
    let phi: Vec<u64> = cyclotomic_polynomial(x.order())
        .iter()
        .map(|&c| c.rem_euclid(p as i64) as u64)
        .collect();
    gcd_degree_mod_p(phi, xbar, p) == Some(0)
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn trim_mod_p(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

/// Degree of `gcd(f, g)` over `F_p`, or `None` when both vanish.
fn gcd_degree_mod_p(mut f: Vec<u64>, mut g: Vec<u64>, p: u64) -> Option<usize> {
    trim_mod_p(&mut f);
    trim_mod_p(&mut g);
    while !g.is_empty() {
        // f <- f mod g
        let lead_inv = mod_pow(*g.last().unwrap(), p - 2, p);
        while f.len() >= g.len() {
            let c = mul_mod(*f.last().unwrap(), lead_inv, p);
            let shift = f.len() - g.len();
            for (i, &gi) in g.iter().enumerate() {
                f[shift + i] = (f[shift + i] + p - mul_mod(c, gi, p)) % p;
            }
            trim_mod_p(&mut f);
        }
        std::mem::swap(&mut f, &mut g);
    }
    f.len().checked_sub(1)
}

/// Smallest `t ≥ 1` with `x^t = 1`.
pub fn root_of_unity_order(x: &CyclotomicElement) -> Result<u64> {
    // Roots of unity in Q(ζ_N) have order dividing lcm(2, N).
    let bound = lcm(2, x.order());
    for t in divisors(bound) {
        if x.pow(t).is_one() {
            return Ok(t);
        }
    }
    Err(Error::NotRootOfUnity)
}
