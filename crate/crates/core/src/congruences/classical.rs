//! Kummer, Envall, Euler-number, Stern, Voronoï, Sun and Lerch congruences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{require, CongruenceVerdict};
use crate::arith::{gcd, is_prime, prime_power, totient};
use crate::bernoulli::{bernoulli_number, euler_number, generalized_bernoulli};
use crate::characters::DirichletCharacter;
use crate::cyclotomic::CyclotomicElement;
use crate::power_sums::plain_floor_weighted_sum;
use crate::rational::Rational;
use crate::Result;

fn big(n: impl Into<BigInt>) -> BigInt {
    n.into()
}

fn el(r: Rational) -> CyclotomicElement {
    r.into()
}

fn int_el(n: BigInt) -> CyclotomicElement {
    Rational::from_integer(n).into()
}

fn pow_u(base: u64, e: u64) -> BigInt {
    big(base).pow(e as u32)
}

/// `(1 - p^{k-1}) B_k / k`.
fn kummer_side(p: u64, k: u64) -> Rational {
    let one = Rational::one();
    let pk = Rational::from_integer(pow_u(p, k - 1));
    (one - pk) * bernoulli_number(k) / Rational::from_integer(big(k))
}

/// `(1 - p^{k-1}) B_k/k ≡ (1 - p^{l-1}) B_l/l (mod p^n)`.
pub fn verify_kummer_classical(p: u64, k: u64, l: u64, n: u32) -> Result<CongruenceVerdict> {
    require(is_prime(p) && p >= 5, || format!("p = {p} must be a prime ≥ 5"))?;
    require(n >= 1, || "n must be positive".into())?;
    require(k >= 2 && l >= 2 && k.is_multiple_of(2) && l.is_multiple_of(2), || format!("k = {k}, l = {l} must be even and ≥ 2"))?;
    let phi = totient(p.pow(n));
    require(k % phi == l % phi, || format!("k ≢ l (mod φ({p}^{n}) = {phi})"))?;
    require(!k.is_multiple_of(p - 1), || format!("p - 1 = {} divides k = {k}", p - 1))?;
    Ok(
        CongruenceVerdict::congruence("kummer", p, el(kummer_side(p, k)), el(kummer_side(p, l)), n as i64)
            .param("p", p)
            .param("k", k)
            .param("l", l)
            .param("n", n),
    )
}

/// `(1 - χ(p) p^{k-1}) B_{k,χ} / k`.
fn envall_side(chi: &DirichletCharacter, p: u64, k: u64) -> CyclotomicElement {
    let one = CyclotomicElement::one(chi.value_order());
    let euler_factor = &one - &chi.evaluate(p as i64).scale(&Rational::from_integer(pow_u(p, k - 1)));
    (&euler_factor * &generalized_bernoulli(k, chi)).scale(&Rational::new(BigInt::one(), big(k)))
}

/// Kummer congruence for `B_{k,χ}` when the conductor of `χ` is prime to `p`.
pub fn verify_envall(chi: &DirichletCharacter, p: u64, k: u64, l: u64, n: u32) -> Result<CongruenceVerdict> {
    require(is_prime(p), || format!("{p} is not prime"))?;
    require(n >= 1, || "n must be positive".into())?;
    require(k >= 1 && l >= 1, || "k and l must be positive".into())?;
    let f = chi.conductor();
    require(prime_power(f).is_some() && chi.p() != p, || {
        format!("conductor {f} of {} is a power of {p}", chi.key())
    })?;
    let phi = totient(p.pow(n));
    require(k % phi == l % phi, || format!("k ≢ l (mod φ({p}^{n}) = {phi})"))?;
    Ok(
        CongruenceVerdict::congruence("1.1", p, envall_side(chi, p, k), envall_side(chi, p, l), n as i64)
            .param("chi", chi.key())
            .param("p", p)
            .param("k", k)
            .param("l", l)
            .param("n", n),
    )
}

/// `E_k ≡ E_l (mod p)` for odd `p`, even `k ≡ l (mod p-1)`.
pub fn verify_euler_kummer(p: u64, k: u64, l: u64) -> Result<CongruenceVerdict> {
    require(is_prime(p) && p > 2, || format!("p = {p} must be an odd prime"))?;
    require(k.is_multiple_of(2) && l.is_multiple_of(2), || format!("k = {k}, l = {l} must be even"))?;
    require(k % (p - 1) == l % (p - 1), || format!("k ≢ l (mod {})", p - 1))?;
    Ok(
        CongruenceVerdict::congruence("1.2", p, int_el(euler_number(k)), int_el(euler_number(l)), 1)
            .param("p", p)
            .param("k", k)
            .param("l", l),
    )
}

/// `E_{k + 2^n q} ≡ E_k + 2^n (mod 2^{n+1})`.
pub fn verify_stern(k: u64, n: u32, q: u64) -> Result<CongruenceVerdict> {
    require(k.is_multiple_of(2), || format!("k = {k} must be even"))?;
    require(n >= 1, || "n must be positive".into())?;
    require(q % 2 == 1, || format!("q = {q} must be odd"))?;
    let shift = 1u64
        .checked_shl(n)
        .and_then(|t| t.checked_mul(q))
        .and_then(|t| t.checked_add(k))
        .ok_or_else(|| crate::Error::domain("index overflow"))?;
    let lhs = int_el(euler_number(shift));
    let rhs = int_el(euler_number(k) + (BigInt::one() << n));
    Ok(CongruenceVerdict::congruence("1.3", 2, lhs, rhs, n as i64 + 1)
        .param("k", k)
        .param("n", n)
        .param("q", q))
}

/// `E_k ≡ E_l (mod 2^n)`, expected exactly when `k ≡ l (mod 2^n)`.
pub fn verify_stern_iff(k: u64, l: u64, n: u32) -> Result<CongruenceVerdict> {
    require(k.is_multiple_of(2) && l.is_multiple_of(2), || format!("k = {k}, l = {l} must be even"))?;
    require((1..63).contains(&n), || format!("n = {n} out of range"))?;
    let expect = k % (1 << n) == l % (1 << n);
    Ok(
        CongruenceVerdict::congruence("1.3-iff", 2, int_el(euler_number(k)), int_el(euler_number(l)), n as i64)
            .expect(expect)
            .param("k", k)
            .param("l", l)
            .param("n", n),
    )
}

/// Voronoï: `(a^k - 1) B_k ≡ k a^{k-1} Σ_{j<p} j^{k-1} ⌊ja/p⌋ (mod p)`.
pub fn verify_voronoi(a: i64, p: u64, k: u64) -> Result<CongruenceVerdict> {
    require(is_prime(p), || format!("{p} is not prime"))?;
    require(a.rem_euclid(p as i64) != 0, || format!("{p} divides a = {a}"))?;
    require(k >= 2 && k.is_multiple_of(2), || format!("k = {k} must be even and ≥ 2"))?;
    let ak = big(a).pow(k as u32);
    let lhs = Rational::from_integer(ak - BigInt::one()) * bernoulli_number(k);
    let rhs = big(k) * big(a).pow(k as u32 - 1) * plain_floor_weighted_sum(k - 1, a, p);
    Ok(CongruenceVerdict::congruence("voronoi", p, el(lhs), int_el(rhs), 1)
        .param("a", a)
        .param("p", p)
        .param("k", k))
}

/// `(3^{k+1}+1)/4 · E_k ≡ (3^k/2) Σ_{j<2^n} (-1)^{j-1} (2j+1)^k ⌊(3j+1)/2^n⌋ (mod 2^n)`.
pub fn verify_sun(k: u64, n: u32) -> Result<CongruenceVerdict> {
    require(k.is_multiple_of(2), || format!("k = {k} must be even"))?;
    require((1..=24).contains(&n), || format!("n = {n} out of range"))?;
    let lhs = Rational::new(pow_u(3, k + 1) + BigInt::one(), big(4)) * Rational::from_integer(euler_number(k));
    let two_n = 1i64 << n;
    let mut sum = BigInt::zero();
    for j in 0..two_n {
        let fl = (3 * j + 1).div_euclid(two_n);
        if fl == 0 {
            continue;
        }
        // (-1)^{j-1}
        let term = big(2 * j + 1).pow(k as u32) * fl;
        if j % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let rhs = Rational::new(pow_u(3, k) * sum, big(2));
    Ok(CongruenceVerdict::congruence("3.1", 2, el(lhs), el(rhs), n as i64)
        .param("k", k)
        .param("n", n))
}

/// Lerch: `(a^{φ(n)} - 1)/n ≡ a^{-1} Σ_{j ≤ n, (j,n)=1} j^{-1} ⌊ja/n⌋ (mod n)`, for prime-power `n`.
///
/// Both sides are exact rationals with denominators prime to `n`.
pub fn verify_lerch(a: i64, n: u64) -> Result<CongruenceVerdict> {
    require(n >= 2, || format!("n = {n} must be at least 2"))?;
    let (p, e) = prime_power(n).ok_or_else(|| crate::Error::domain(format!("n = {n} is not a prime power")))?;
    require(gcd(a, n as i64) == 1, || format!("gcd({a}, {n}) > 1"))?;
    let phi = totient(n);
    let (quot, rem) = (big(a).pow(phi as u32) - BigInt::one()).div_rem(&big(n));
    debug_assert!(rem.is_zero());
    let ni = n as i64;
    let mut sum = Rational::zero();
    for j in 1..=ni {
        if gcd(j, ni) == 1 {
            let fl = (j * a).div_euclid(ni);
            if fl != 0 {
                sum += Rational::new(big(fl), big(j));
            }
        }
    }
    let rhs = sum / Rational::from_integer(big(a));
    Ok(CongruenceVerdict::congruence("lerch", p, int_el(quot), el(rhs), e as i64)
        .param("a", a)
        .param("n", n))
}

/// Number of `j` with `2^m ≤ 20j + 5 < 2^{m+1}` plus those with `3·2^m ≤ 20j + 5 < 2^{m+2}`.
pub fn floor_count(m: u32) -> u64 {
    let in_range = |lo: u64, hi: u64| (0..hi / 20 + 1).filter(|j| (lo..hi).contains(&(20 * j + 5))).count() as u64;
    in_range(1 << m, 1 << (m + 1)) + in_range(3 << m, 1 << (m + 2))
}

/// Whether [`floor_count`] is odd, for `3 ≤ m ≤ 6`.
pub fn floor_count_parity(m: u32) -> Result<bool> {
    require((3..=6).contains(&m), || format!("m = {m} outside 3..=6"))?;
    Ok(floor_count(m) % 2 == 1)
}

/// [`floor_count_parity`] as a verdict: the count is `≡ 1 (mod 2)`.
pub fn verify_floor_parity(m: u32) -> Result<CongruenceVerdict> {
    floor_count_parity(m)?;
    Ok(
        CongruenceVerdict::congruence("floor-parity", 2, int_el(big(floor_count(m))), 1.into(), 1)
            .param("m", m),
    )
}
