//! Twisted power sums `S_k(n, χ) = Σ_{j ≤ n} χ(j) j^k` and floor-weighted variants.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bernoulli::generalized_bernoulli;
use crate::characters::DirichletCharacter;
use crate::cyclotomic::CyclotomicElement;
use crate::rational::{binomial_row, Rational};
use crate::{Error, Result};

/// Accumulates `Σ w_j ζ_N^{e_j}` with integer weights, one bucket per exponent.
struct RootSum {
    buckets: Vec<BigInt>,
}

impl RootSum {
    fn new(order: u64) -> Self {
        Self {
            buckets: vec![BigInt::zero(); order as usize],
        }
    }

    fn add(&mut self, exponent: u64, w: BigInt) {
        self.buckets[exponent as usize] += w;
    }

    fn finish(self) -> CyclotomicElement {
        CyclotomicElement::from_root_sums(self.buckets.len() as u64, &self.buckets)
    }
}

/// `Σ_{j=1}^{n} χ(j) j^k` by direct summation in ascending `j`.
pub fn power_sum(k: u64, n: u64, chi: &DirichletCharacter) -> CyclotomicElement {
    let mut acc = RootSum::new(chi.value_order());
    for j in 1..=n {
        if let Some(e) = chi.value_exponent(j as i64) {
            acc.add(e, BigInt::from(j).pow(k as u32));
        }
    }
    acc.finish()
}

/// `S_k(N, χ) = (B_{k+1,χ}(N) - B_{k+1,χ}) / (k+1)`, valid when the modulus of `χ` divides `N`.
pub fn power_sum_via_bernoulli(k: u64, n: u64, chi: &DirichletCharacter) -> Result<CyclotomicElement> {
    if n == 0 || !n.is_multiple_of(chi.modulus()) {
        return Err(Error::domain(format!(
            "upper limit {n} is not a positive multiple of the modulus {}",
            chi.modulus()
        )));
    }
    let row = binomial_row(k + 1);
    let big_n = BigInt::from(n);
    let mut acc = CyclotomicElement::zero(chi.value_order());
    for j in 0..=k {
        let w = Rational::new(&row[j as usize] * big_n.pow((k + 1 - j) as u32), BigInt::from(k + 1));
        acc = &acc + &generalized_bernoulli(j, chi).scale(&w);
    }
    Ok(acc)
}

/// `Σ_{j=1}^{p^n-1} χ(j) j^k ⌊ja/p^n⌋`, without any prefactor.
pub fn floor_weighted_sum(k: u64, a: i64, p: u64, n: u32, chi: &DirichletCharacter) -> Result<CyclotomicElement> {
    if a.rem_euclid(p as i64) == 0 {
        return Err(Error::domain(format!("{p} divides a = {a}")));
    }
    let q = p
        .checked_pow(n)
        .filter(|&q| q <= i64::MAX as u64 / a.unsigned_abs().max(1))
        .ok_or_else(|| Error::domain(format!("{p}^{n} is too large")))? as i64;
    let mut acc = RootSum::new(chi.value_order());
    for j in 1..q {
        if let Some(e) = chi.value_exponent(j) {
            let fl = (j * a).div_euclid(q);
            if fl != 0 {
                acc.add(e, BigInt::from(j).pow(k as u32) * fl);
            }
        }
    }
    Ok(acc.finish())
}

/// `Σ_{j=1}^{q-1} j^k ⌊ja/q⌋` over plain integers.
pub fn plain_floor_weighted_sum(k: u64, a: i64, q: u64) -> BigInt {
    let q = q as i64;
    (1..q)
        .map(|j| BigInt::from(j).pow(k as u32) * (j * a).div_euclid(q))
        .sum()
}

/// Arguments of one twisted power sum.
#[derive(Clone, Debug)]
pub struct PowerSumRequest {
    pub k: u64,
    pub n: u64,
    pub chi: DirichletCharacter,
}

impl PowerSumRequest {
    pub fn direct(&self) -> CyclotomicElement {
        power_sum(self.k, self.n, &self.chi)
    }

    pub fn via_bernoulli(&self) -> Result<CyclotomicElement> {
        power_sum_via_bernoulli(self.k, self.n, &self.chi)
    }
}

/// `1 - χ(a) a^k` as a field element.
pub(crate) fn one_minus_twisted(chi: &DirichletCharacter, a: i64, k: u64) -> CyclotomicElement {
    let one = CyclotomicElement::one(chi.value_order());
    let scale = Rational::from_integer(BigInt::from(a).pow(k as u32));
    &one - &chi.evaluate(a).scale(&scale)
}
