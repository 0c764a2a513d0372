//! Bernoulli numbers and polynomials, generalized Bernoulli numbers `B_{k,χ}`,
//! Euler (secant) numbers, `L(-k, χ)` and the normalized values `𝓛_{k,χ}`.
//!
//! `B_{k,χ}` is computed from the closed form
//! `f^{k-1} Σ_{a=1}^{f} χ(a) B_k(a/f)` with `f` the modulus of `χ`.
//! Expanding `B_k(x)` turns this into integer power sums grouped by the value
//! of `χ(a)`, which keeps the whole computation in exact integers until the
//! final Bernoulli weights are applied.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::characters::{CharacterKey, DirichletCharacter};
use crate::cyclotomic::CyclotomicElement;
use crate::rational::{binomial_row, Rational};
use crate::{Error, Result};

/// Memo table for `B_k`, `E_k` and `B_{k,χ}`.
///
/// Entries are exact and never change once written; concurrent writers of the
/// same key always produce the same value, so last-writer-wins is harmless.
#[derive(Debug, Default)]
pub struct BernoulliCache {
    numbers: RwLock<Vec<Rational>>,
    euler: RwLock<Vec<BigInt>>,
    generalized: RwLock<HashMap<(CharacterKey, u64), CyclotomicElement>>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide cache used by the free functions of this module.
    pub fn global() -> &'static BernoulliCache {
        static GLOBAL: OnceLock<BernoulliCache> = OnceLock::new();
        GLOBAL.get_or_init(BernoulliCache::new)
    }

    pub fn bernoulli(&self, k: u64) -> Rational {
        let k = k as usize;
        if let Some(b) = self.numbers.read().unwrap().get(k) {
            return b.clone();
        }
        let mut table = self.numbers.write().unwrap();
        if table.is_empty() {
            table.push(Rational::one());
        }
        // Σ_{j=0}^{n} C(n+1, j) B_j = 0
        while table.len() <= k {
            let n = table.len();
            let row = binomial_row(n as u64 + 1);
            let s: Rational = table
                .iter()
                .zip(&row)
                .filter(|(b, _)| !b.is_zero())
                .map(|(b, c)| b * Rational::from_integer(c.clone()))
                .sum();
            table.push(-s / Rational::from_integer(row[n].clone()));
        }
        table[k].clone()
    }

    pub fn euler(&self, k: u64) -> BigInt {
        let k = k as usize;
        if let Some(e) = self.euler.read().unwrap().get(k) {
            return e.clone();
        }
        let mut table = self.euler.write().unwrap();
        while table.len() <= k {
            let n = table.len();
            let e = if n == 0 {
                BigInt::one()
            } else if n % 2 == 1 {
                BigInt::zero()
            } else {
                // Σ_{j even ≤ n} C(n, j) E_j = 0
                let row = binomial_row(n as u64);
                -(0..n).step_by(2).map(|j| &row[j] * &table[j]).sum::<BigInt>()
            };
            table.push(e);
        }
        table[k].clone()
    }

    pub fn generalized(&self, k: u64, chi: &DirichletCharacter) -> CyclotomicElement {
        let key = (chi.key(), k);
        if let Some(v) = self.generalized.read().unwrap().get(&key) {
            return v.clone();
        }
        let v = self.compute_generalized(k, chi);
        self.generalized.write().unwrap().insert(key, v.clone());
        v
    }

    fn compute_generalized(&self, k: u64, chi: &DirichletCharacter) -> CyclotomicElement {
        let f = chi.modulus();
        let n = chi.value_order() as usize;
        // buckets[e] lists the residues a with χ(a) = ζ_N^e
        let mut buckets: Vec<Vec<BigInt>> = vec![Vec::new(); n];
        for a in 1..=f {
            if let Some(e) = chi.value_exponent(a as i64) {
                buckets[e as usize].push(BigInt::from(a));
            }
        }
        // power_sums[e][i] = Σ_{a ∈ bucket e} a^i, for 0 ≤ i ≤ k
        let power_sums: Vec<Vec<BigInt>> = buckets
            .iter()
            .map(|bucket| {
                let mut powers: Vec<BigInt> = vec![BigInt::one(); bucket.len()];
                let mut sums = Vec::with_capacity(k as usize + 1);
                for i in 0..=k {
                    if i > 0 {
                        for (pw, a) in powers.iter_mut().zip(bucket) {
                            *pw *= a;
                        }
                    }
                    sums.push(powers.iter().sum());
                }
                sums
            })
            .collect();
        // B_{k,χ} = Σ_j C(k, j) B_j f^{j-1} Σ_a χ(a) a^{k-j}, accumulated over a common denominator
        let row = binomial_row(k);
        let f_big = BigInt::from(f);
        let mut weights = Vec::with_capacity(k as usize + 1);
        let mut f_pow = Rational::new(BigInt::one(), f_big.clone());
        for j in 0..=k {
            let b = self.bernoulli(j);
            if !b.is_zero() {
                weights.push((j, &b * &f_pow * Rational::from_integer(row[j as usize].clone())));
            }
            f_pow *= Rational::from_integer(f_big.clone());
        }
        let denom = weights.iter().fold(BigInt::one(), |d, (_, w)| d.lcm(w.denom()));
        let scaled: Vec<(u64, BigInt)> = weights
            .into_iter()
            .map(|(j, w)| (j, (w * Rational::from_integer(denom.clone())).to_integer()))
            .collect();
        let nums: Vec<BigInt> = power_sums
            .iter()
            .map(|sums| scaled.iter().map(|(j, w)| w * &sums[(k - j) as usize]).sum())
            .collect();
        CyclotomicElement::from_scaled_integers(n as u64, nums, &denom)
    }

    /// Seeds a value read from a persistent cache. The caller vouches for it.
    pub fn insert_generalized(&self, key: CharacterKey, k: u64, value: CyclotomicElement) {
        self.generalized.write().unwrap().insert((key, k), value);
    }

    /// All memoized `B_{k,χ}`, sorted by key.
    pub fn generalized_entries(&self) -> Vec<(CharacterKey, u64, CyclotomicElement)> {
        let mut v: Vec<_> = self
            .generalized
            .read()
            .unwrap()
            .iter()
            .map(|((key, k), val)| (key.clone(), *k, val.clone()))
            .collect();
        v.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
        v
    }

    pub fn generalized_len(&self) -> usize {
        self.generalized.read().unwrap().len()
    }

    pub fn clear_generalized(&self) {
        self.generalized.write().unwrap().clear();
    }
}

pub fn bernoulli_number(k: u64) -> Rational {
    BernoulliCache::global().bernoulli(k)
}

/// `B_k(x) = Σ_j C(k, j) B_j x^{k-j}`.
pub fn bernoulli_polynomial(k: u64, x: &Rational) -> Rational {
    let row = binomial_row(k);
    // Horner in x over the coefficients C(k, j) B_j, j = 0..k
    (0..=k).fold(Rational::zero(), |acc, j| {
        acc * x + bernoulli_number(j) * Rational::from_integer(row[j as usize].clone())
    })
}

pub fn generalized_bernoulli(k: u64, chi: &DirichletCharacter) -> CyclotomicElement {
    BernoulliCache::global().generalized(k, chi)
}

pub fn euler_number(k: u64) -> BigInt {
    BernoulliCache::global().euler(k)
}

/// `L(-k, χ) = -B_{k+1,χ}/(k+1)`, defined here only when `χ(-1) = (-1)^{k+1}`.
pub fn l_value(k: u64, chi: &DirichletCharacter) -> Result<CyclotomicElement> {
    l_value_with(BernoulliCache::global(), k, chi)
}

pub fn l_value_with(cache: &BernoulliCache, k: u64, chi: &DirichletCharacter) -> Result<CyclotomicElement> {
    if !chi.opposite_parity(k) {
        return Err(Error::Parity { k });
    }
    let b = cache.generalized(k + 1, chi);
    Ok(b.scale(&Rational::new(BigInt::from(-1), BigInt::from(k + 1))))
}

/// The unit-group element `u` with `𝓛_{k,χ} = (1 - χ(u)) L(-k, χ)`: 5 for
/// `p = 2, m ≥ 3`, `p + 1` for odd `p, m ≥ 2`.
pub fn script_l_multiplier(chi: &DirichletCharacter) -> Result<i64> {
    let (p, m) = (chi.p(), chi.m());
    let conductor = chi.conductor();
    let undefined = Error::UndefinedScriptL { p, m, conductor };
    if conductor != chi.modulus() {
        return Err(undefined);
    }
    match (p, m) {
        (2, m) if m >= 3 => Ok(5),
        (p, m) if p > 2 && m >= 2 => Ok(p as i64 + 1),
        _ => Err(undefined),
    }
}

pub fn script_l(k: u64, chi: &DirichletCharacter) -> Result<CyclotomicElement> {
    script_l_with(BernoulliCache::global(), k, chi)
}

pub fn script_l_with(cache: &BernoulliCache, k: u64, chi: &DirichletCharacter) -> Result<CyclotomicElement> {
    let u = script_l_multiplier(chi)?;
    let l = l_value_with(cache, k, chi)?;
    let factor = &CyclotomicElement::one(chi.value_order()) - &chi.evaluate(u);
    Ok(&factor * &l)
}
