use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CyclotomicElement;
use crate::rational::Valuation;

/// One checked instance of a congruence.
///
/// `observed_margin` is the p-content valuation of `lhs - rhs`. The instance
/// is congruent when the margin reaches `required_modulus_exponent` (an infinite
/// requirement means exact equality). `holds` records whether the observed
/// relation matches the expected one: for ordinary congruences the
/// expectation is "congruent"; "if and only if" scans and non-divisibility
/// claims expect incongruence on some instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceVerdict {
    pub id: String,
    pub params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    pub prime: u64,
    pub holds: bool,
    pub expect_congruent: bool,
    pub required_modulus_exponent: Valuation,
    pub observed_margin: Valuation,
    pub lhs: CyclotomicElement,
    pub rhs: CyclotomicElement,
    /// Instance from a case the statement excludes, evaluated to show the exclusion matters.
    #[serde(default)]
    pub probe: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, String>,
}

impl CongruenceVerdict {
    /// `lhs ≡ rhs (mod prime^required)`.
    pub fn congruence(
        id: impl Into<String>,
        prime: u64,
        lhs: CyclotomicElement,
        rhs: CyclotomicElement,
        required: i64,
    ) -> Self {
        Self::build(id.into(), prime, lhs, rhs, Valuation::Finite(required))
    }

    /// `lhs = rhs` exactly.
    pub fn equality(id: impl Into<String>, prime: u64, lhs: CyclotomicElement, rhs: CyclotomicElement) -> Self {
        Self::build(id.into(), prime, lhs, rhs, Valuation::Infinite)
    }

    fn build(id: String, prime: u64, lhs: CyclotomicElement, rhs: CyclotomicElement, required: Valuation) -> Self {
        let observed_margin = (&lhs - &rhs).p_content_valuation(prime);
        let mut v = Self {
            id,
            params: BTreeMap::new(),
            branch: None,
            prime,
            holds: false,
            expect_congruent: true,
            required_modulus_exponent: required,
            observed_margin,
            lhs,
            rhs,
            probe: false,
            notes: BTreeMap::new(),
        };
        v.holds = v.recompute_holds();
        v
    }

    pub fn is_congruent(&self) -> bool {
        self.observed_margin >= self.required_modulus_exponent
    }

    fn recompute_holds(&self) -> bool {
        self.is_congruent() == self.expect_congruent
    }

    /// Whether `holds` agrees with the margin, requirement and expectation.
    pub fn is_consistent(&self) -> bool {
        self.holds == self.recompute_holds()
    }

    pub fn expect(mut self, congruent: bool) -> Self {
        self.expect_congruent = congruent;
        self.holds = self.recompute_holds();
        self
    }

    pub fn param(mut self, name: &str, value: impl ToString) -> Self {
        self.params.insert(name.to_owned(), value.to_string());
        self
    }

    pub fn branch(mut self, b: &str) -> Self {
        self.branch = Some(b.to_owned());
        self
    }

    pub fn note(mut self, name: &str, value: impl ToString) -> Self {
        self.notes.insert(name.to_owned(), value.to_string());
        self
    }

    pub fn as_probe(mut self) -> Self {
        self.probe = true;
        self
    }

    /// `k1=v1;k2=v2`, in key order.
    pub fn flat_params(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for CongruenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.expect_congruent { "≡" } else { "≢" };
        write!(
            f,
            "[{}] {} {}: {} {rel} {} (mod {}^{}), margin {}",
            if self.holds { "ok" } else { "FAIL" },
            self.id,
            self.flat_params(),
            self.lhs,
            self.rhs,
            self.prime,
            self.required_modulus_exponent,
            self.observed_margin
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holds_tracks_margin_and_expectation() {
        let v = CongruenceVerdict::congruence("t", 2, 24.into(), (-8).into(), 4);
        assert_eq!(v.observed_margin, Valuation::Finite(5));
        assert!(v.holds && v.is_consistent());
        let v = v.expect(false);
        assert!(!v.holds && v.is_consistent());
        let e = CongruenceVerdict::equality("t", 3, 1.into(), 1.into());
        assert!(e.holds);
        assert_eq!(e.observed_margin, Valuation::Infinite);
        let e = CongruenceVerdict::equality("t", 3, 1.into(), 4.into());
        assert!(!e.holds);
    }

    #[test]
    fn serde_round_trip() {
        let v = CongruenceVerdict::congruence("3.2", 2, (-10).into(), (-18).into(), 3)
            .param("k", 1)
            .param("chi", "2^3:0,1")
            .note("x", "y");
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains(r#""observed_margin":3"#));
        let back: CongruenceVerdict = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert_eq!(v.flat_params(), "chi=2^3:0,1;k=1");
    }
}
