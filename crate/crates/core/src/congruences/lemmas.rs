//! Congruences for the twisted power sums `S_k(p^n, χ)` and the orders of
//! `χ(p^{m-k} + 1)` and `χ(5)`.
//!
//! Each statement has a `verify_*` function that rejects points outside its
//! hypotheses, and [`lemma_point`] which evaluates excluded points anyway and
//! tags them as probes.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{require, CongruenceVerdict};
use crate::characters::{enumerate_characters, DirichletCharacter};
use crate::cyclotomic::{is_p_unit, root_of_unity_order, CyclotomicElement};
use crate::power_sums::{one_minus_twisted, power_sum};
use crate::rational::Rational;
use crate::{Error, Result};

/// The power-sum statements, by verdict id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lemma {
    /// `S_k(p^n) ≡ p^{n-m} S_k(p^m) (mod p^n)`.
    Reduction,
    /// `(1 - χ(a) a^k) S_k(p^m) ≡ 0 (mod p^m)`.
    Twist,
    /// `S_k(p^n) ≡ 0 (mod p^n)` given a p-unit `1 - χ(a) a^k`.
    Vanishing,
    /// Orders of `χ(p^{m-k} + 1)` (odd p) and `χ(5)` (p = 2).
    Orders,
    /// `S_k(p^n) ≡ 0 (mod p^{n-1})`.
    Divisibility,
    /// `S_k(2^n) ≡ 0 (mod 2^n)` in the listed parity cases.
    FullDivisibility,
}

impl Lemma {
    pub const ALL: [Lemma; 6] = [
        Lemma::Reduction,
        Lemma::Twist,
        Lemma::Vanishing,
        Lemma::Orders,
        Lemma::Divisibility,
        Lemma::FullDivisibility,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Lemma::Reduction => "2.1",
            Lemma::Twist => "2.2",
            Lemma::Vanishing => "2.3",
            Lemma::Orders => "lemma2.3",
            Lemma::Divisibility => "2.4",
            Lemma::FullDivisibility => "2.5",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.id() == s)
            .ok_or_else(|| Error::domain(format!("unknown power-sum statement {s:?}")))
    }
}

/// Primitive, or the trivial character mod 2, which plays the role of the
/// primitive character for `p = 2, m = 1`.
fn primitive_enough(chi: &DirichletCharacter) -> bool {
    chi.is_primitive() || chi.modulus() == 2
}

fn require_primitive(chi: &DirichletCharacter) -> Result<()> {
    require(primitive_enough(chi), || format!("{} is not primitive", chi.key()))
}

fn require_n_at_least_m(chi: &DirichletCharacter, n: u32) -> Result<()> {
    require(n >= chi.m(), || format!("n = {n} < m = {}", chi.m()))
}

fn p_pow(chi: &DirichletCharacter, e: u32) -> Result<u64> {
    chi.p()
        .checked_pow(e)
        .filter(|&q| q <= 1 << 24)
        .ok_or_else(|| Error::domain(format!("{}^{e} too large", chi.p())))
}

fn tag(v: CongruenceVerdict, chi: &DirichletCharacter, k: u64) -> CongruenceVerdict {
    v.param("chi", chi.key()).param("k", k)
}

/// The reduction congruence fails for `p = 2`, odd `k` when `m = 1` and
/// `n ≥ 2`; the case `n = 1` is the literal exclusion.
pub fn reduction_excluded(p: u64, m: u32, n: u32, k: u64) -> bool {
    p == 2 && k % 2 == 1 && (n == 1 || m == 1)
}

fn reduction_instance(chi: &DirichletCharacter, k: u64, n: u32) -> Result<CongruenceVerdict> {
    require_n_at_least_m(chi, n)?;
    let lhs = power_sum(k, p_pow(chi, n)?, chi);
    let factor = Rational::from_integer(BigInt::from(chi.p()).pow(n - chi.m()));
    let rhs = power_sum(k, chi.modulus(), chi).scale(&factor);
    Ok(tag(CongruenceVerdict::congruence("2.1", chi.p(), lhs, rhs, n as i64), chi, k).param("n", n))
}

pub fn verify_reduction(chi: &DirichletCharacter, k: u64, n: u32) -> Result<CongruenceVerdict> {
    require(!reduction_excluded(chi.p(), chi.m(), n, k), || {
        format!("p = 2, m = {}, n = {n}, k = {k} is excluded", chi.m())
    })?;
    reduction_instance(chi, k, n)
}

fn twist_instance(chi: &DirichletCharacter, k: u64, a: i64) -> Result<CongruenceVerdict> {
    let p = chi.p();
    let lhs = &one_minus_twisted(chi, a, k) * &power_sum(k, chi.modulus(), chi);
    let zero = CyclotomicElement::zero(chi.value_order());
    Ok(tag(CongruenceVerdict::congruence("2.2", p, lhs, zero, chi.m() as i64), chi, k).param("a", a))
}

pub fn verify_twist(chi: &DirichletCharacter, k: u64, a: i64) -> Result<CongruenceVerdict> {
    require_primitive(chi)?;
    require(a.rem_euclid(chi.p() as i64) != 0, || format!("{} divides a = {a}", chi.p()))?;
    twist_instance(chi, k, a)
}

/// First `a` in a reduced residue system with `1 - χ(a) a^k` a p-unit.
pub fn vanishing_witness(chi: &DirichletCharacter, k: u64) -> Option<i64> {
    let p = chi.p() as i64;
    (1..chi.modulus() as i64)
        .filter(|a| a % p != 0)
        .find(|&a| is_p_unit(&one_minus_twisted(chi, a, k), p as u64))
}

pub fn verify_vanishing(chi: &DirichletCharacter, k: u64, n: u32) -> Result<CongruenceVerdict> {
    require_primitive(chi)?;
    require_n_at_least_m(chi, n)?;
    let witness = vanishing_witness(chi, k)
        .ok_or_else(|| Error::domain(format!("no a with 1 - χ(a)a^{k} prime to {} for {}", chi.p(), chi.key())))?;
    let lhs = power_sum(k, p_pow(chi, n)?, chi);
    let zero = CyclotomicElement::zero(chi.value_order());
    Ok(tag(CongruenceVerdict::congruence("2.3", chi.p(), lhs, zero, n as i64), chi, k)
        .param("n", n)
        .note("witness", witness))
}

fn order_el(n: u64) -> CyclotomicElement {
    CyclotomicElement::from(Rational::from_integer(n.into()))
}

/// Order checks for a character of conductor `p^m`: for odd `p` and
/// `1 ≤ k < m`, `χ(p^{m-k}+1)` has order exactly `p^k`; for `p = 2, m ≥ 3`,
/// `χ(5) ≠ 1` and `χ(5)^{2^{m-2}} = 1`.
pub fn verify_orders(chi: &DirichletCharacter) -> Result<Vec<CongruenceVerdict>> {
    let (p, m) = (chi.p(), chi.m());
    require(chi.is_primitive(), || format!("{} is not primitive", chi.key()))?;
    let base = |v: CongruenceVerdict| v.param("chi", chi.key());
    if p > 2 {
        require(m >= 2, || format!("{} has m = 1", chi.key()))?;
        (1..m)
            .map(|k| {
                let u = p.pow(m - k) + 1;
                let order = root_of_unity_order(&chi.evaluate(u as i64))?;
                Ok(base(CongruenceVerdict::equality("lemma2.3", p, order_el(order), order_el(p.pow(k))))
                    .param("part", "i")
                    .param("k", k))
            })
            .collect()
    } else {
        require(m >= 3, || format!("{} has m < 3", chi.key()))?;
        let v5 = chi.evaluate(5);
        let one = CyclotomicElement::one(chi.value_order());
        let root = CongruenceVerdict::equality("lemma2.3", 2, v5.pow(1 << (m - 2)), one.clone()).param("part", "ii-root");
        let nontrivial = CongruenceVerdict::equality("lemma2.3", 2, v5, one)
            .expect(false)
            .param("part", "ii-nontrivial");
        Ok(vec![base(root), base(nontrivial)])
    }
}

fn divisibility_instance(chi: &DirichletCharacter, k: u64, n: u32) -> Result<CongruenceVerdict> {
    require_n_at_least_m(chi, n)?;
    let lhs = power_sum(k, p_pow(chi, n)?, chi);
    let zero = CyclotomicElement::zero(chi.value_order());
    Ok(tag(CongruenceVerdict::congruence("2.4", chi.p(), lhs, zero, n as i64 - 1), chi, k).param("n", n))
}

pub fn verify_divisibility(chi: &DirichletCharacter, k: u64, n: u32) -> Result<CongruenceVerdict> {
    require_primitive(chi)?;
    divisibility_instance(chi, k, n)
}

/// `m ≥ 3`, or `m = 2` and `k` even, or `m = 1` and `k` odd.
pub fn full_divisibility_case(m: u32, k: u64) -> bool {
    m >= 3 || (m == 2 && k.is_multiple_of(2)) || (m == 1 && k % 2 == 1)
}

fn full_divisibility_instance(chi: &DirichletCharacter, k: u64, n: u32) -> Result<CongruenceVerdict> {
    require(chi.p() == 2, || format!("{} is not a character mod a power of 2", chi.key()))?;
    require(n >= chi.m().max(2), || format!("n = {n} < max(m, 2)"))?;
    let lhs = power_sum(k, p_pow(chi, n)?, chi);
    let zero = CyclotomicElement::zero(chi.value_order());
    Ok(tag(CongruenceVerdict::congruence("2.5", 2, lhs, zero, n as i64), chi, k).param("n", n))
}

pub fn verify_full_divisibility(chi: &DirichletCharacter, k: u64, n: u32) -> Result<CongruenceVerdict> {
    require_primitive(chi)?;
    require(full_divisibility_case(chi.m(), k), || format!("m = {}, k = {k} is excluded", chi.m()))?;
    full_divisibility_instance(chi, k, n)
}

/// Evaluates one grid point. Points in an excluded case come back as probes;
/// points where the statement does not make sense are domain errors.
/// `a` is only read by [`Lemma::Twist`]; `k`, `n` and `a` are ignored by
/// [`Lemma::Orders`].
pub fn lemma_point(
    lemma: Lemma,
    chi: &DirichletCharacter,
    k: u64,
    n: u32,
    a: Option<i64>,
) -> Result<Vec<CongruenceVerdict>> {
    let v = match lemma {
        Lemma::Reduction if reduction_excluded(chi.p(), chi.m(), n, k) => reduction_instance(chi, k, n)?.as_probe(),
        Lemma::Reduction => verify_reduction(chi, k, n)?,
        Lemma::Twist => {
            let a = a.ok_or_else(|| Error::domain("no value of a"))?;
            if primitive_enough(chi) && a.rem_euclid(chi.p() as i64) != 0 {
                verify_twist(chi, k, a)?
            } else {
                twist_instance(chi, k, a)?.as_probe()
            }
        }
        Lemma::Vanishing => verify_vanishing(chi, k, n)?,
        Lemma::Orders => return verify_orders(chi),
        Lemma::Divisibility if primitive_enough(chi) => verify_divisibility(chi, k, n)?,
        Lemma::Divisibility => divisibility_instance(chi, k, n)?.as_probe(),
        Lemma::FullDivisibility => {
            if primitive_enough(chi) && full_divisibility_case(chi.m(), k) {
                verify_full_divisibility(chi, k, n)?
            } else {
                full_divisibility_instance(chi, k, n)?.as_probe()
            }
        }
    };
    Ok(vec![v])
}

/// Parameter grid for [`check_lemma_sweep`]. Every character of each modulus
/// is visited. `a = None` means `1..p^m`, so multiples of `p` are probed.
#[derive(Clone, Debug)]
pub struct LemmaGrid {
    pub moduli: Vec<(u64, u32)>,
    pub k: Vec<u64>,
    pub n: Vec<u32>,
    pub a: Option<Vec<i64>>,
}

/// All verdicts and probes of `lemma` on `grid`, skipping points where the
/// statement does not apply.
pub fn check_lemma_sweep(lemma: Lemma, grid: &LemmaGrid) -> Result<Vec<CongruenceVerdict>> {
    let mut out = Vec::new();
    let mut push = |r: Result<Vec<CongruenceVerdict>>| match r {
        Ok(v) => {
            out.extend(v);
            Ok(())
        }
        Err(Error::Domain(_)) => Ok(()),
        Err(e) => Err(e),
    };
    for &(p, m) in &grid.moduli {
        for chi in enumerate_characters(p, m)? {
            match lemma {
                Lemma::Orders => push(lemma_point(lemma, &chi, 0, 0, None))?,
                Lemma::Twist => {
                    let q = chi.modulus() as i64;
                    let a_values: Vec<i64> = match &grid.a {
                        Some(a) => a.clone(),
                        None => (1..q.max(2)).collect(),
                    };
                    for &k in &grid.k {
                        for &a in &a_values {
                            push(lemma_point(lemma, &chi, k, 0, Some(a)))?;
                        }
                    }
                }
                _ => {
                    for &k in &grid.k {
                        for &n in &grid.n {
                            push(lemma_point(lemma, &chi, k, n, None))?;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{build_unit_group, enumerate_primitive, make_character};

    fn chi(p: u64, m: u32, e: &[u64]) -> DirichletCharacter {
        make_character(&build_unit_group(p, m).unwrap(), e).unwrap()
    }

    #[test]
    fn twist_example() {
        let chi8 = chi(2, 3, &[0, 1]);
        let v = verify_twist(&chi8, 2, 3).unwrap();
        assert_eq!(v.lhs, 160.into());
        assert!(v.holds);
    }

    #[test]
    fn twist_needs_a_prime_to_p() {
        let chi4 = chi(2, 2, &[1]);
        assert!(verify_twist(&chi4, 1, 2).is_err());
        // χ(2) = 0, leaving S_1(4, χ_{-4}) = 1 - 3
        let probe = &lemma_point(Lemma::Twist, &chi4, 1, 0, Some(2)).unwrap()[0];
        assert_eq!(probe.lhs, (-2).into());
        assert!(probe.probe && !probe.holds);
    }

    #[test]
    fn orders_mod_16() {
        for c in enumerate_primitive(2, 4).unwrap() {
            let order = root_of_unity_order(&c.evaluate(5)).unwrap();
            assert_eq!(order, 4);
            assert!(verify_orders(&c).unwrap().iter().all(|v| v.holds));
        }
        for c in enumerate_primitive(3, 3).unwrap() {
            let vs = verify_orders(&c).unwrap();
            assert_eq!(vs.len(), 2);
            assert!(vs.iter().all(|v| v.holds));
        }
    }

    #[test]
    fn reduction_exclusion_is_needed_at_modulus_two() {
        let trivial2 = chi(2, 1, &[0]);
        assert!(matches!(verify_reduction(&trivial2, 1, 2), Err(Error::Domain(_))));
        let probe = &lemma_point(Lemma::Reduction, &trivial2, 1, 2, None).unwrap()[0];
        assert!(probe.probe);
        // S_1(4) = 4 against 2·S_1(2) = 2
        assert_eq!((probe.lhs.clone(), probe.rhs.clone()), (4.into(), 2.into()));
        assert!(!probe.holds);
        assert!(verify_reduction(&trivial2, 2, 3).unwrap().holds);
        assert!(verify_reduction(&chi(2, 2, &[1]), 1, 3).unwrap().holds);
    }

    #[test]
    fn full_divisibility_excluded_cases_fail() {
        let chi4 = chi(2, 2, &[1]);
        assert!(verify_full_divisibility(&chi4, 1, 2).is_err());
        let probe = &lemma_point(Lemma::FullDivisibility, &chi4, 1, 2, None).unwrap()[0];
        assert_eq!(probe.lhs, (-2).into());
        assert!(probe.probe && !probe.holds);
        let trivial2 = chi(2, 1, &[0]);
        assert!(verify_full_divisibility(&trivial2, 3, 4).unwrap().holds);
        assert!(!lemma_point(Lemma::FullDivisibility, &trivial2, 0, 2, None).unwrap()[0].holds);
    }

    #[test]
    fn vanishing_needs_a_witness() {
        let chi8 = chi(2, 3, &[0, 1]);
        assert!(vanishing_witness(&chi8, 1).is_none());
        let c = enumerate_primitive(5, 1).unwrap().remove(0);
        let k = (0..4).find(|&k| vanishing_witness(&c, k).is_some()).unwrap();
        assert!(verify_vanishing(&c, k, 2).unwrap().holds);
    }

    #[test]
    fn sweep_small_grid() {
        let grid = LemmaGrid {
            moduli: vec![(2, 1), (2, 3), (3, 2), (5, 1)],
            k: (0..=5).collect(),
            n: (1..=3).collect(),
            a: None,
        };
        for lemma in Lemma::ALL {
            let vs = check_lemma_sweep(lemma, &grid).unwrap();
            assert!(!vs.is_empty(), "{lemma}");
            assert!(vs.iter().filter(|v| !v.probe).all(|v| v.holds), "{lemma}");
        }
        assert_eq!("lemma2.3".parse::<Lemma>().unwrap(), Lemma::Orders);
        assert!("2.9".parse::<Lemma>().is_err());
    }
}
