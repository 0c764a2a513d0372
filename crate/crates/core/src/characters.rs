//! Dirichlet characters modulo prime powers.
//!
//! Generators of `(Z/p^m)^*` follow a fixed convention so that a character is
//! identified by `(p, m, exponents)` across runs:
//!
//! * odd `p`, or `p^m ∈ {2, 4}`: the smallest primitive root, of order `φ(p^m)`;
//! * `p = 2`, `m ≥ 3`: `-1` (order 2) and `5` (order `2^{m-2}`).
//!
//! All character values live in `Q(ζ_N)` with `N = φ(p^m)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, is_prime, mod_pow, totient};
use crate::cyclotomic::CyclotomicElement;
use crate::{Error, Result};

/// Largest modulus for which a full discrete-log table is built.
pub const DEFAULT_TABLE_BOUND: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub residue: u64,
    pub order: u64,
}

/// `(Z/p^m)^*` with its generators and a complete discrete-log table.
#[derive(Debug)]
pub struct UnitGroup {
    p: u64,
    m: u32,
    modulus: u64,
    generators: Vec<Generator>,
    dlog: Vec<Option<Vec<u64>>>,
}

impl UnitGroup {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// `φ(p^m)`, the order of the group and of the value field.
    pub fn order(&self) -> u64 {
        totient(self.modulus)
    }

    /// Exponent vector of `a` over the generators, `None` when `p | a`.
    pub fn dlog(&self, a: i64) -> Option<&[u64]> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        self.dlog[r].as_deref()
    }
}

pub fn build_unit_group(p: u64, m: u32) -> Result<Arc<UnitGroup>> {
    build_unit_group_with_bound(p, m, DEFAULT_TABLE_BOUND)
}

pub fn build_unit_group_with_bound(p: u64, m: u32, bound: u64) -> Result<Arc<UnitGroup>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::InvalidModulus { p, m, reason: "exponent must be at least 1" });
    }
    let modulus = p
        .checked_pow(m)
        .ok_or(Error::TableTooLarge { modulus: u64::MAX, bound })?;
    if modulus > bound {
        return Err(Error::TableTooLarge { modulus, bound });
    }
    let mut dlog = vec![None; modulus as usize];
    let generators = if p == 2 && m >= 3 {
        let five_order = modulus / 4;
        let minus_one = modulus - 1;
        for i in 0..2u64 {
            let sign = if i == 0 { 1 } else { minus_one };
            let mut x = sign;
            for j in 0..five_order {
                dlog[x as usize] = Some(vec![i, j]);
                x = x * 5 % modulus;
            }
        }
        vec![
            Generator { residue: minus_one, order: 2 },
            Generator { residue: 5, order: five_order },
        ]
    } else {
        let order = totient(modulus);
        let g = primitive_root(modulus, order);
        let mut x = 1 % modulus;
        for i in 0..order {
            dlog[x as usize] = Some(vec![i]);
            x = x * g % modulus;
        }
        vec![Generator { residue: g, order }]
    };
    if modulus == 2 {
        dlog[1] = Some(vec![0]);
    }
    Ok(Arc::new(UnitGroup { p, m, modulus, generators, dlog }))
}

fn primitive_root(modulus: u64, order: u64) -> u64 {
    if order == 1 {
        return 1;
    }
    let prime_factors: Vec<u64> = divisors(order)
        .into_iter()
        .filter(|&d| d > 1 && is_prime(d))
        .collect();
    (2..modulus)
        .find(|&g| {
            crate::arith::gcd(g as i64, modulus as i64) == 1
                && prime_factors.iter().all(|&q| mod_pow(g, order / q, modulus) != 1)
        })
        .expect("cyclic unit group has a primitive root")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// The parity of `k` opposite to which `L(-k, χ)` is non-trivial.
    pub fn of_integer(k: u64) -> Parity {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl FromStr for Parity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(format!("unknown parity {other:?}")),
        }
    }
}

/// Stable identity of a character: modulus `p^m` plus generator exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharacterKey {
    pub p: u64,
    pub m: u32,
    pub exponents: Vec<u64>,
}

impl fmt::Display for CharacterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.exponents.iter().map(u64::to_string).collect();
        write!(f, "{}^{}:{}", self.p, self.m, e.join(","))
    }
}

impl FromStr for CharacterKey {
    type Err = String;

    /// Parses `p^m:e1,e2`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("bad character key {s:?}, expected p^m:e1,e2");
        let (modulus, exps) = s.split_once(':').ok_or_else(bad)?;
        let (p, m) = modulus.split_once('^').ok_or_else(bad)?;
        let exponents = exps
            .split(',')
            .map(|e| e.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(CharacterKey {
            p: p.trim().parse().map_err(|_| bad())?,
            m: m.trim().parse().map_err(|_| bad())?,
            exponents,
        })
    }
}

/// A character of `(Z/p^m)^*`, `χ(g_i) = ζ_{ord g_i}^{e_i}`.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    group: Arc<UnitGroup>,
    images: Vec<u64>,
    // χ(a) = ζ_N^{table[a]} for each residue a.
    table: Arc<[Option<u64>]>,
}

pub fn make_character(group: &Arc<UnitGroup>, images: &[u64]) -> Result<DirichletCharacter> {
    DirichletCharacter::new(Arc::clone(group), images)
}

impl DirichletCharacter {
    pub fn new(group: Arc<UnitGroup>, images: &[u64]) -> Result<Self> {
        if images.len() != group.generators.len() {
            return Err(Error::ExponentCount {
                expected: group.generators.len(),
                got: images.len(),
            });
        }
        let n = group.order();
        let images: Vec<u64> = images
            .iter()
            .zip(&group.generators)
            .map(|(e, g)| e % g.order)
            .collect();
        let table = group
            .dlog
            .iter()
            .map(|entry| {
                entry.as_ref().map(|v| {
                    v.iter()
                        .zip(&images)
                        .zip(&group.generators)
                        .map(|((d, e), g)| d * e % g.order * (n / g.order))
                        .sum::<u64>()
                        % n
                })
            })
            .collect();
        Ok(Self { group, images, table })
    }

    pub fn from_key(key: &CharacterKey) -> Result<Self> {
        Self::new(build_unit_group(key.p, key.m)?, &key.exponents)
    }

    pub fn trivial(group: &Arc<UnitGroup>) -> Self {
        Self::new(Arc::clone(group), &vec![0; group.generators.len()]).expect("exponent count matches")
    }

    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }

    pub fn p(&self) -> u64 {
        self.group.p
    }

    pub fn m(&self) -> u32 {
        self.group.m
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn images(&self) -> &[u64] {
        &self.images
    }

    /// The order `N` of the cyclotomic field holding the values.
    pub fn value_order(&self) -> u64 {
        self.group.order()
    }

    pub fn key(&self) -> CharacterKey {
        CharacterKey {
            p: self.group.p,
            m: self.group.m,
            exponents: self.images.clone(),
        }
    }

    /// `e` with `χ(a) = ζ_N^e`, or `None` when `p | a`.
    pub fn value_exponent(&self, a: i64) -> Option<u64> {
        self.table[a.rem_euclid(self.group.modulus as i64) as usize]
    }

    pub fn evaluate(&self, a: i64) -> CyclotomicElement {
        let n = self.value_order();
        match self.value_exponent(a) {
            Some(e) => CyclotomicElement::zeta(n, e as i64),
            None => CyclotomicElement::zero(n),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&e| e == 0)
    }

    /// `χ̄`, by negating the exponent vector.
    pub fn conjugate(&self) -> Self {
        let neg: Vec<u64> = self
            .images
            .iter()
            .zip(&self.group.generators)
            .map(|(&e, g)| (g.order - e) % g.order)
            .collect();
        Self::new(Arc::clone(&self.group), &neg).expect("exponent count matches")
    }

    pub fn conductor(&self) -> u64 {
        let modulus = self.group.modulus;
        let mut d = 1;
        loop {
            let trivial_on_kernel = (1..modulus)
                .step_by(d as usize)
                .all(|a| self.table[a as usize].is_none_or(|e| e == 0));
            if trivial_on_kernel || d == modulus {
                return d;
            }
            d *= self.group.p;
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.group.modulus
    }

    pub fn parity(&self) -> Parity {
        match self.value_exponent(-1) {
            Some(0) => Parity::Even,
            _ => Parity::Odd,
        }
    }

    /// `χ(-1) = (-1)^{k+1}`: the case where `L(-k, χ) = -B_{k+1,χ}/(k+1)` applies.
    pub fn opposite_parity(&self, k: u64) -> bool {
        self.parity() != Parity::of_integer(k)
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for DirichletCharacter {}

/// Every character modulo `p^m`, exponent vectors in lexicographic order.
pub fn enumerate_characters(p: u64, m: u32) -> Result<Vec<DirichletCharacter>> {
    let group = build_unit_group(p, m)?;
    let orders: Vec<u64> = group.generators.iter().map(|g| g.order).collect();
    let mut out = Vec::new();
    let mut exps = vec![0u64; orders.len()];
    loop {
        out.push(DirichletCharacter::new(Arc::clone(&group), &exps)?);
        let mut i = exps.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

/// Characters of conductor exactly `p^m`.
pub fn enumerate_primitive(p: u64, m: u32) -> Result<Vec<DirichletCharacter>> {
    Ok(enumerate_characters(p, m)?
        .into_iter()
        .filter(DirichletCharacter::is_primitive)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::root_of_unity_order;
    use crate::rational::rat;

    fn chi(p: u64, m: u32, e: &[u64]) -> DirichletCharacter {
        make_character(&build_unit_group(p, m).unwrap(), e).unwrap()
    }

    #[test]
    fn unit_group_mod_8() {
        let g = build_unit_group(2, 3).unwrap();
        assert_eq!(
            g.generators(),
            &[Generator { residue: 7, order: 2 }, Generator { residue: 5, order: 2 }]
        );
        assert_eq!(g.dlog(3), Some(&[1u64, 1][..]));
        assert_eq!(g.dlog(4), None);
    }

    #[test]
    fn cyclic_generators_are_smallest_primitive_roots() {
        let g9 = build_unit_group(3, 2).unwrap();
        assert_eq!(g9.generators(), &[Generator { residue: 2, order: 6 }]);
        let g5 = build_unit_group(5, 1).unwrap();
        assert_eq!(g5.generators(), &[Generator { residue: 2, order: 4 }]);
        let g4 = build_unit_group(2, 2).unwrap();
        assert_eq!(g4.generators(), &[Generator { residue: 3, order: 2 }]);
        let g49 = build_unit_group(7, 2).unwrap();
        assert_eq!(g49.generators()[0].residue, 3);
        let g2 = build_unit_group(2, 1).unwrap();
        assert_eq!(g2.generators(), &[Generator { residue: 1, order: 1 }]);
    }

    #[test]
    fn dlog_reconstructs_every_unit() {
        for (p, m) in [(2, 3), (2, 5), (3, 3), (5, 2), (7, 2), (2, 2), (2, 1)] {
            let g = build_unit_group(p, m).unwrap();
            let md = g.modulus();
            for a in 0..md {
                match g.dlog(a as i64) {
                    None => assert_eq!(a % p, 0),
                    Some(v) => {
                        let prod = v
                            .iter()
                            .zip(g.generators())
                            .fold(1 % md, |acc, (&e, gen)| acc * mod_pow(gen.residue, e, md) % md);
                        assert_eq!(prod, a % md, "p^m = {md}, a = {a}");
                    }
                }
            }
        }
    }

    #[test]
    fn bad_moduli() {
        assert_eq!(build_unit_group(6, 1).unwrap_err(), Error::NotPrime(6));
        assert!(matches!(build_unit_group(2, 0), Err(Error::InvalidModulus { .. })));
        assert!(matches!(
            build_unit_group_with_bound(3, 12, 1000),
            Err(Error::TableTooLarge { modulus: 531441, bound: 1000 })
        ));
    }

    #[test]
    fn make_character_examples() {
        let chi4 = chi(2, 2, &[1]);
        assert_eq!(chi4.evaluate(3), (-1).into());
        let chi8 = chi(2, 3, &[0, 1]);
        assert_eq!(chi8.evaluate(5), (-1).into());
        assert_eq!(chi8.evaluate(3), (-1).into());
        assert_eq!(chi8.evaluate(7), 1.into());
        assert_eq!(chi8.evaluate(15), 1.into());
        assert_eq!(chi8.evaluate(6), 0.into());
        let chi9 = chi(3, 2, &[1]);
        assert_eq!(chi9.evaluate(2), CyclotomicElement::zeta(6, 1));
        assert!(matches!(
            make_character(&build_unit_group(2, 3).unwrap(), &[1]),
            Err(Error::ExponentCount { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn conductors() {
        assert_eq!(chi(2, 2, &[1]).conductor(), 4);
        assert_eq!(chi(3, 2, &[0]).conductor(), 1);
        assert_eq!(chi(3, 2, &[2]).conductor(), 9);
        assert_eq!(chi(3, 2, &[3]).conductor(), 3);
        assert_eq!(chi(2, 3, &[1, 0]).conductor(), 4);
        assert_eq!(chi(2, 3, &[0, 1]).conductor(), 8);
    }

    #[test]
    fn parities() {
        assert_eq!(chi(2, 2, &[1]).parity(), Parity::Odd);
        assert_eq!(chi(5, 2, &[0]).parity(), Parity::Even);
        assert_eq!(chi(2, 3, &[1, 1]).parity(), Parity::Odd);
        assert!(chi(2, 2, &[1]).opposite_parity(0));
        assert!(!chi(2, 2, &[1]).opposite_parity(1));
    }

    #[test]
    fn primitive_counts() {
        let c8 = enumerate_primitive(2, 3).unwrap();
        assert_eq!(c8.len(), 2);
        assert_eq!(
            c8.iter().map(|c| c.parity()).collect::<Vec<_>>(),
            vec![Parity::Even, Parity::Odd]
        );
        assert_eq!(enumerate_primitive(3, 1).unwrap().len(), 1);
        assert_eq!(enumerate_primitive(3, 2).unwrap().len(), 4);
        for (p, m) in [(2u64, 2u32), (2, 4), (2, 5), (3, 3), (5, 1), (5, 2), (7, 2), (3, 4)] {
            let expected = totient(p.pow(m)) - totient(p.pow(m - 1));
            assert_eq!(enumerate_primitive(p, m).unwrap().len() as u64, expected, "{p}^{m}");
        }
    }

    #[test]
    fn conjugate_inverts_values() {
        for c in enumerate_characters(3, 2).unwrap() {
            let cb = c.conjugate();
            for a in 1..9 {
                if a % 3 != 0 {
                    assert!((&c.evaluate(a) * &cb.evaluate(a)).is_one());
                }
            }
        }
    }

    #[test]
    fn key_round_trip() {
        let key = chi(2, 5, &[1, 3]).key();
        assert_eq!(key.to_string(), "2^5:1,3");
        assert_eq!("2^5:1,3".parse::<CharacterKey>().unwrap(), key);
        assert_eq!(DirichletCharacter::from_key(&key).unwrap().key(), key);
        assert!("2^5".parse::<CharacterKey>().is_err());
    }

    fn moduli_up_to(bound: u64) -> Vec<(u64, u32)> {
        let mut v = Vec::new();
        for p in [2u64, 3, 5, 7, 11] {
            let mut m = 1;
            while p.pow(m) <= bound {
                v.push((p, m));
                m += 1;
            }
        }
        v
    }

    #[test]
    fn multiplicativity_full_sweep() {
        for (p, m) in moduli_up_to(128) {
            let md = p.pow(m) as i64;
            for c in enumerate_characters(p, m).unwrap() {
                let n = c.value_order();
                for a in 0..md {
                    for b in a..md {
                        let expected = match (c.value_exponent(a), c.value_exponent(b)) {
                            (Some(x), Some(y)) => Some((x + y) % n),
                            _ => None,
                        };
                        assert_eq!(c.value_exponent(a * b), expected, "{} at {a}*{b}", c.key());
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicativity_of_field_values() {
        for (p, m) in moduli_up_to(27) {
            let md = p.pow(m) as i64;
            for c in enumerate_characters(p, m).unwrap() {
                let vals: Vec<CyclotomicElement> = (0..md).map(|a| c.evaluate(a)).collect();
                for a in 0..md {
                    for b in a..md {
                        let ab = (a * b % md) as usize;
                        assert_eq!(&vals[a as usize] * &vals[b as usize], vals[ab]);
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality() {
        for (p, m) in moduli_up_to(128) {
            let md = p.pow(m) as i64;
            for c in enumerate_characters(p, m).unwrap() {
                let sum = (1..=md).fold(CyclotomicElement::zero(c.value_order()), |acc, a| &acc + &c.evaluate(a));
                if c.is_trivial() {
                    assert_eq!(sum, CyclotomicElement::from_rational(1, rat(totient(md as u64) as i64)));
                } else {
                    assert!(sum.is_zero(), "{}", c.key());
                }
            }
        }
    }

    #[test]
    fn lemma_2_3_orders() {
        for (p, m) in moduli_up_to(81) {
            for c in enumerate_primitive(p, m).unwrap() {
                if p == 2 && m >= 3 {
                    let v = c.evaluate(5);
                    assert!(!v.is_one());
                    assert!(v.pow(1 << (m - 2)).is_one());
                } else if p > 2 && m >= 2 {
                    for k in 1..m {
                        let x = c.evaluate(p.pow(m - k) as i64 + 1);
                        assert_eq!(root_of_unity_order(&x).unwrap(), p.pow(k), "{} k={k}", c.key());
                    }
                }
            }
        }
    }
}
