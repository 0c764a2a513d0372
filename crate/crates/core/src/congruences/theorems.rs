//! Stern-type congruences for `𝓛_{k,χ}` and the Voronoï-type congruence for `L(-k, χ)`.

use std::fmt;

use num_bigint::BigInt;

use super::{require, CongruenceVerdict};
use crate::arith::totient;
use crate::bernoulli::{l_value, script_l};
use crate::characters::DirichletCharacter;
use crate::cyclotomic::{divides_p_locally, is_p_unit, CyclotomicElement};
use crate::power_sums::{floor_weighted_sum, one_minus_twisted};
use crate::rational::Rational;
use crate::{Error, Result};

fn require_primitive(chi: &DirichletCharacter) -> Result<()> {
    require(chi.is_primitive(), || {
        format!("{} is not primitive (conductor {})", chi.key(), chi.conductor())
    })
}

fn require_parity(chi: &DirichletCharacter, k: u64) -> Result<()> {
    require(chi.opposite_parity(k), || {
        format!("k = {k} does not have the opposite parity to {}", chi.key())
    })
}

fn shifted(k: u64, step: u64, q: u64) -> Result<u64> {
    step.checked_mul(q)
        .and_then(|s| s.checked_add(k))
        .ok_or_else(|| Error::domain("index overflow"))
}

/// `scale / (1 - χ̄(u))` as a field element.
fn over_one_minus_conj(chi: &DirichletCharacter, u: i64, scale: BigInt) -> Result<CyclotomicElement> {
    let one = CyclotomicElement::one(chi.value_order());
    let denom = &one - &chi.conjugate().evaluate(u);
    CyclotomicElement::from(Rational::from_integer(scale)).checked_div(&denom)
}

fn check_two_power_hypotheses(chi: &DirichletCharacter, k: u64) -> Result<()> {
    require(chi.p() == 2 && chi.m() >= 3, || format!("{} is not a character mod 2^m, m ≥ 3", chi.key()))?;
    require_primitive(chi)?;
    require_parity(chi, k)
}

/// `𝓛_{k+2^n q} - 𝓛_k ≡ 2^{n+2}/(1 - χ̄(5)) · 𝓛_d (mod 2^{n+3})`, `d ≡ k (mod 2)`.
pub fn verify_thm11(chi: &DirichletCharacter, k: u64, n: u32, q: u64) -> Result<CongruenceVerdict> {
    check_two_power_hypotheses(chi, k)?;
    require((1..62).contains(&n), || format!("n = {n} out of range"))?;
    require(q % 2 == 1, || format!("q = {q} must be odd"))?;
    let d = k % 2;
    let lhs = &script_l(shifted(k, 1 << n, q)?, chi)? - &script_l(k, chi)?;
    let rhs = &over_one_minus_conj(chi, 5, BigInt::from(1) << (n + 2))? * &script_l(d, chi)?;
    let rhs_margin = rhs.p_content_valuation(2);
    Ok(CongruenceVerdict::congruence("1.4", 2, lhs, rhs, n as i64 + 3)
        .param("chi", chi.key())
        .param("k", k)
        .param("n", n)
        .param("q", q)
        .param("d", d)
        .note("rhs_margin", rhs_margin))
}

/// `𝓛_k ≡ 𝓛_l (mod 2^{n+2})`, expected exactly when `k ≡ l (mod 2^n)`.
pub fn verify_thm11_iff(chi: &DirichletCharacter, k: u64, l: u64, n: u32) -> Result<CongruenceVerdict> {
    check_two_power_hypotheses(chi, k)?;
    require_parity(chi, l)?;
    require((1..62).contains(&n), || format!("n = {n} out of range"))?;
    let expect = k % (1 << n) == l % (1 << n);
    Ok(
        CongruenceVerdict::congruence("1.5", 2, script_l(k, chi)?, script_l(l, chi)?, n as i64 + 2)
            .expect(expect)
            .param("chi", chi.key())
            .param("k", k)
            .param("l", l)
            .param("n", n),
    )
}

/// [`verify_thm11_iff`] over a list of `(k, l, n)`.
pub fn verify_thm11_iff_grid(chi: &DirichletCharacter, grid: &[(u64, u64, u32)]) -> Result<Vec<CongruenceVerdict>> {
    grid.iter().map(|&(k, l, n)| verify_thm11_iff(chi, k, l, n)).collect()
}

/// Which half of the odd-prime theorem applies to `(χ, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Thm12Branch {
    /// `1 - χ(a) a^{k+1}` is a p-unit for this `a`.
    I { witness: i64 },
    /// No such `a` exists.
    II,
}

impl fmt::Display for Thm12Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Thm12Branch::I { .. } => f.write_str("i"),
            Thm12Branch::II => f.write_str("ii"),
        }
    }
}

/// Scans a full reduced residue system mod `p^m` for a witness of branch (i).
pub fn thm12_branch(chi: &DirichletCharacter, k: u64) -> Thm12Branch {
    let p = chi.p();
    (1..chi.modulus() as i64)
        .filter(|a| a % p as i64 != 0)
        .find(|&a| is_p_unit(&one_minus_twisted(chi, a, k + 1), p))
        .map_or(Thm12Branch::II, |witness| Thm12Branch::I { witness })
}

fn check_odd_hypotheses(chi: &DirichletCharacter, k: u64) -> Result<()> {
    require(chi.p() > 2, || format!("{} is not a character mod an odd prime power", chi.key()))?;
    require_primitive(chi)?;
    require_parity(chi, k)
}

/// Odd `p`: `L(-k-φ(p^n)q) ≡ L(-k) (mod p^n)` in branch (i), and in branch (ii)
/// `𝓛_{k+φ(p^n)q} - 𝓛_k ≡ p^n q/(1 - χ̄(p+1)) · 𝓛_d (mod p^n)` with `d ≡ k (mod p-1)`.
///
/// In branch (ii) the verdict also notes whether the congruence holds one
/// power of `p` higher, and whether `(1 - χ(p+1))^2` divides `p`.
pub fn verify_thm12(chi: &DirichletCharacter, k: u64, n: u32, q: u64) -> Result<CongruenceVerdict> {
    check_odd_hypotheses(chi, k)?;
    let p = chi.p();
    require(n >= 1, || "n must be positive".into())?;
    require(q >= 1 && !q.is_multiple_of(p), || format!("q = {q} must be positive and prime to {p}"))?;
    let step = p
        .checked_pow(n)
        .map(totient)
        .ok_or_else(|| Error::domain(format!("{p}^{n} too large")))?;
    let big_k = shifted(k, step, q)?;
    let verdict = match thm12_branch(chi, k) {
        Thm12Branch::I { witness } => {
            CongruenceVerdict::congruence("1.6", p, l_value(big_k, chi)?, l_value(k, chi)?, n as i64)
                .branch("i")
                .note("witness", witness)
        }
        Thm12Branch::II => {
            require(chi.m() >= 2, || format!("{} lies in branch (ii) at k = {k} but m = 1", chi.key()))?;
            let d = k % (p - 1);
            let lhs = &script_l(big_k, chi)? - &script_l(k, chi)?;
            let scale = BigInt::from(p).pow(n) * q;
            let rhs = &over_one_minus_conj(chi, p as i64 + 1, scale)? * &script_l(d, chi)?;
            let one = CyclotomicElement::one(chi.value_order());
            let pi = &one - &chi.evaluate(p as i64 + 1);
            let v = CongruenceVerdict::congruence("1.7", p, lhs, rhs, n as i64);
            let one_higher = v.observed_margin.at_least(n as i64 + 1);
            let rhs_margin = v.rhs.p_content_valuation(p);
            v.branch("ii")
                .param("d", d)
                .note("holds_mod_p^(n+1)", one_higher)
                .note("rhs_margin", rhs_margin)
                .note("square_divides_p", divides_p_locally(&(&pi * &pi), &CyclotomicElement::from(p as i64), p)?)
        }
    };
    Ok(verdict
        .param("chi", chi.key())
        .param("k", k)
        .param("n", n)
        .param("q", q))
}

/// `𝓛_{k+(p-1)h} ≡ 𝓛_k (mod p^n)`, expected exactly when `p^{n-1} | h`.
///
/// Computation shows the congruence holds exactly when `p^n | h`; whether the
/// verdict agrees with that sharper condition is recorded as a note.
pub fn verify_thm12_iff(chi: &DirichletCharacter, k: u64, h: u64, n: u32) -> Result<CongruenceVerdict> {
    check_odd_hypotheses(chi, k)?;
    let p = chi.p();
    require(chi.m() >= 2, || format!("{} has m = 1", chi.key()))?;
    require(n >= 1, || "n must be positive".into())?;
    require(thm12_branch(chi, k) == Thm12Branch::II, || {
        format!("{} is in branch (i) at k = {k}", chi.key())
    })?;
    let period = p
        .checked_pow(n - 1)
        .ok_or_else(|| Error::domain(format!("{p}^{} too large", n - 1)))?;
    let lhs = script_l(shifted(k, p - 1, h)?, chi)?;
    let v = CongruenceVerdict::congruence("1.8", p, lhs, script_l(k, chi)?, n as i64).expect(h.is_multiple_of(period));
    // (1.7) with 𝓛_d a p-unit puts the difference just below p^{j+1} when p^j || h
    let sharp = p.checked_pow(n).map_or(h == 0, |pn| h.is_multiple_of(pn));
    let sharp_agrees = v.is_congruent() == sharp;
    Ok(v.note("agrees_with_p^n_divides_h", sharp_agrees)
        .branch("ii")
        .param("chi", chi.key())
        .param("k", k)
        .param("h", h)
        .param("n", n))
}

/// [`verify_thm12_iff`] for each `h`.
pub fn verify_thm12_iff_grid(chi: &DirichletCharacter, k: u64, hs: &[u64], n: u32) -> Result<Vec<CongruenceVerdict>> {
    hs.iter().map(|&h| verify_thm12_iff(chi, k, h, n)).collect()
}

/// `(1 - χ(a) a^{k+1}) L(-k, χ) ≡ χ(a) a^k Σ_{j<p^n} χ(j) j^k ⌊ja/p^n⌋ (mod p^n)`.
pub fn verify_thm31(chi: &DirichletCharacter, a: i64, k: u64, n: u32) -> Result<CongruenceVerdict> {
    let (p, m) = (chi.p(), chi.m());
    require(n >= m, || format!("n = {n} < m = {m}"))?;
    require(p >= 5 || n >= 2, || format!("p = {p} needs n ≥ 2"))?;
    require_parity(chi, k)?;
    let sum = floor_weighted_sum(k, a, p, n, chi)?;
    let lhs = &one_minus_twisted(chi, a, k + 1) * &l_value(k, chi)?;
    let factor = chi.evaluate(a).scale(&Rational::from_integer(BigInt::from(a).pow(k as u32)));
    Ok(CongruenceVerdict::congruence("3.2", p, lhs, &factor * &sum, n as i64)
        .param("chi", chi.key())
        .param("a", a)
        .param("k", k)
        .param("n", n))
}

/// `𝓛_{d,χ}` is not divisible by `p` (odd `p`, branch (ii)) or by 4 (`p = 2`).
///
/// Two finer notes are recorded: for `p = 2` whether `2(1 - χ(5))` divides
/// `𝓛_d`, for odd `p` whether `𝓛_d` is a p-unit.
pub fn check_nondivisibility(chi: &DirichletCharacter, d: u64) -> Result<CongruenceVerdict> {
    let p = chi.p();
    let value = script_l(d, chi)?;
    let zero = CyclotomicElement::zero(chi.value_order());
    let v = if p == 2 {
        require(d <= 1, || format!("d = {d} must be 0 or 1"))?;
        let one = CyclotomicElement::one(chi.value_order());
        let pi = (&one - &chi.evaluate(5)).scale(&Rational::from_integer(2.into()));
        let finer = divides_p_locally(&pi, &value, 2)?;
        CongruenceVerdict::congruence("nondiv", 2, value, zero, 2).note("divisible_by_2(1-chi(5))", finer)
    } else {
        require(d <= p - 2, || format!("d = {d} must lie in 0..={}", p - 2))?;
        require(thm12_branch(chi, d) == Thm12Branch::II, || {
            format!("{} is in branch (i) at d = {d}", chi.key())
        })?;
        let unit = is_p_unit(&value, p);
        CongruenceVerdict::congruence("nondiv", p, value, zero, 1).note("p_unit", unit)
    };
    Ok(v.expect(false).param("chi", chi.key()).param("d", d))
}

/// The `k` in `0..p-1` of the opposite parity to `χ` that land in branch (ii).
pub fn branch_ii_residues(chi: &DirichletCharacter) -> Vec<u64> {
    let p = chi.p();
    (0..p.saturating_sub(1))
        .filter(|&k| chi.opposite_parity(k) && thm12_branch(chi, k) == Thm12Branch::II)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{build_unit_group, enumerate_characters, enumerate_primitive, make_character};
    use crate::rational::Valuation;

    fn chi(p: u64, m: u32, e: &[u64]) -> DirichletCharacter {
        make_character(&build_unit_group(p, m).unwrap(), e).unwrap()
    }

    #[test]
    fn two_power_anchor() {
        let chi8 = chi(2, 3, &[0, 1]);
        let v = verify_thm11(&chi8, 1, 1, 1).unwrap();
        assert_eq!(v.lhs, 24.into());
        assert_eq!(v.rhs, (-8).into());
        assert!(v.holds);
        assert_eq!(v.observed_margin, Valuation::Finite(5));
        let iff = verify_thm11_iff(&chi8, 1, 3, 1).unwrap();
        assert!(iff.holds && iff.expect_congruent);
        let iff = verify_thm11_iff(&chi8, 1, 3, 2).unwrap();
        assert!(iff.holds && !iff.expect_congruent);
        assert!(matches!(verify_thm11(&chi(2, 2, &[1]), 0, 1, 1), Err(Error::Domain(_))));
        assert!(matches!(verify_thm11(&chi8, 2, 1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn two_power_small_sweep() {
        for c in enumerate_primitive(2, 4).unwrap() {
            for k in (0..8).filter(|&k| c.opposite_parity(k)) {
                for n in 1..=2 {
                    assert!(verify_thm11(&c, k, n, 1).unwrap().holds);
                }
            }
        }
    }

    #[test]
    fn odd_branch_detection() {
        // quadratic character mod 3 with k even is always in branch (ii), so m = 1 is out of scope
        let quad = chi(3, 1, &[1]);
        for k in (0..10).step_by(2) {
            assert_eq!(thm12_branch(&quad, k), Thm12Branch::II);
            assert!(matches!(verify_thm12(&quad, k, 1, 1), Err(Error::Domain(_))));
        }
        let mut seen_i = false;
        for c in enumerate_primitive(5, 1).unwrap() {
            for k in (0..8).filter(|&k| c.opposite_parity(k)) {
                if let Thm12Branch::I { witness } = thm12_branch(&c, k) {
                    seen_i = true;
                    assert!(is_p_unit(&one_minus_twisted(&c, witness, k + 1), 5));
                    let v = verify_thm12(&c, k, 1, 1).unwrap();
                    assert!(v.holds, "{v}");
                    assert_eq!(v.branch.as_deref(), Some("i"));
                }
            }
        }
        assert!(seen_i);
    }

    #[test]
    fn odd_branch_ii_mod_9() {
        let order6 = enumerate_primitive(3, 2)
            .unwrap()
            .into_iter()
            .find(|c| crate::cyclotomic::root_of_unity_order(&c.evaluate(2)).unwrap() == 6)
            .unwrap();
        let k = (0..20)
            .find(|&k| order6.opposite_parity(k) && thm12_branch(&order6, k) == Thm12Branch::II)
            .unwrap();
        let v = verify_thm12(&order6, k, 1, 1).unwrap();
        assert_eq!(v.id, "1.7");
        assert!(v.notes.contains_key("holds_mod_p^(n+1)"));
        assert!(matches!(verify_thm12(&order6, k, 1, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn shift_converse_needs_p_to_the_n() {
        let c = chi(3, 2, &[1]);
        assert_eq!(thm12_branch(&c, 0), Thm12Branch::II);
        // n = 1: p^0 divides every h, yet only multiples of 3 give a congruence mod 3
        for h in 0..=6 {
            let v = verify_thm12_iff(&c, 0, h, 1).unwrap();
            assert_eq!(v.is_congruent(), h % 3 == 0, "h = {h}");
            assert_eq!(v.holds, h % 3 == 0);
            assert_eq!(v.notes["agrees_with_p^n_divides_h"], "true");
        }
        // n = 2: h = 3 is a multiple of p^{n-1} but the congruence fails mod 9
        let v = verify_thm12_iff(&c, 0, 3, 2).unwrap();
        assert!(v.expect_congruent && !v.is_congruent());
        assert!(verify_thm12_iff(&c, 0, 9, 2).unwrap().is_congruent());
    }

    #[test]
    fn voronoi_type_anchor() {
        let chi8 = chi(2, 3, &[0, 1]);
        let v = verify_thm31(&chi8, 3, 1, 3).unwrap();
        assert_eq!(v.lhs, (-10).into());
        assert_eq!(v.rhs, (-18).into());
        assert!(v.holds);
        let one = verify_thm31(&chi8, 1, 1, 3).unwrap();
        assert!(one.lhs.is_zero() && one.rhs.is_zero());
        assert!(verify_thm31(&chi(2, 2, &[1]), 3, 2, 2).is_ok());
        assert!(matches!(verify_thm31(&chi8, 3, 1, 2), Err(Error::Domain(_))));
        assert!(matches!(verify_thm31(&chi8, 2, 1, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn voronoi_type_small_sweep() {
        for (p, m) in [(3, 1), (3, 2), (5, 1), (2, 2)] {
            for c in enumerate_characters(p, m).unwrap() {
                for k in (0..6).filter(|&k| c.opposite_parity(k)) {
                    for n in m.max(2)..=3 {
                        for a in [2i64, 4, 7, -1] {
                            if a.rem_euclid(p as i64) != 0 {
                                let v = verify_thm31(&c, a, k, n).unwrap();
                                assert!(v.holds, "{v}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn nondivisibility_examples() {
        let chi8 = chi(2, 3, &[0, 1]);
        let v = check_nondivisibility(&chi8, 1).unwrap();
        assert_eq!(v.lhs, (-2).into());
        assert_eq!(v.observed_margin, Valuation::Finite(1));
        assert!(v.holds);
        let trivial = chi(2, 3, &[0, 0]);
        assert!(check_nondivisibility(&trivial, 1).is_err());
        for c in enumerate_primitive(3, 3).unwrap() {
            for d in branch_ii_residues(&c) {
                check_nondivisibility(&c, d).unwrap();
            }
        }
    }
}
