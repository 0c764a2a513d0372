//! The verifier ids a job may name, and how a job expands into grid points.

use std::collections::BTreeMap;
use std::fmt;

use super::config::Job;
use super::CliError;
use crate::arith::prime_power;
use crate::characters::{enumerate_characters, CharacterKey, DirichletCharacter};
use crate::congruences::{self as cg, CongruenceVerdict, Lemma};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Param {
    P,
    M,
    K,
    L,
    N,
    Q,
    A,
    H,
    D,
}

impl Param {
    pub const ALL: [Param; 9] = [
        Param::P,
        Param::M,
        Param::K,
        Param::L,
        Param::N,
        Param::Q,
        Param::A,
        Param::H,
        Param::D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::P => "p",
            Param::M => "m",
            Param::K => "k",
            Param::L => "l",
            Param::N => "n",
            Param::Q => "q",
            Param::A => "a",
            Param::H => "h",
            Param::D => "d",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A registered verifier id.
#[derive(Debug)]
pub struct IdEntry {
    pub id: &'static str,
    /// Swept parameters, besides the character.
    pub params: &'static [Param],
    /// Whether grid points carry a character (from `chi`, or `p` and `m`).
    pub characters: bool,
    pub summary: &'static str,
}

use Param::*;

pub const REGISTRY: &[IdEntry] = &[
    IdEntry { id: "kummer", params: &[P, K, L, N], characters: false, summary: "classical Kummer congruence for B_k/k" },
    IdEntry { id: "1.1", params: &[P, K, L, N], characters: true, summary: "Kummer congruence for B_{k,χ}/k, conductor prime to p" },
    IdEntry { id: "1.2", params: &[P, K, L], characters: false, summary: "E_k ≡ E_l (mod p)" },
    IdEntry { id: "1.3", params: &[K, N, Q], characters: false, summary: "Stern: E_{k+2^n q} ≡ E_k + 2^n (mod 2^{n+1})" },
    IdEntry { id: "1.3-iff", params: &[K, L, N], characters: false, summary: "E_k ≡ E_l (mod 2^n) iff k ≡ l (mod 2^n)" },
    IdEntry { id: "1.4", params: &[K, N, Q], characters: true, summary: "𝓛 congruence mod 2^{n+3}" },
    IdEntry { id: "1.5", params: &[K, L, N], characters: true, summary: "𝓛_k ≡ 𝓛_l (mod 2^{n+2}) iff k ≡ l (mod 2^n)" },
    IdEntry { id: "thm1.2", params: &[K, N, Q], characters: true, summary: "odd p, either branch" },
    IdEntry { id: "1.6", params: &[K, N, Q], characters: true, summary: "odd p, branch (i) points only" },
    IdEntry { id: "1.7", params: &[K, N, Q], characters: true, summary: "odd p, branch (ii) points only" },
    IdEntry { id: "1.8", params: &[K, H, N], characters: true, summary: "𝓛_{k+(p-1)h} ≡ 𝓛_k (mod p^n) iff p^{n-1} | h" },
    IdEntry { id: "2.1", params: &[K, N], characters: true, summary: "S_k(p^n) ≡ p^{n-m} S_k(p^m) (mod p^n)" },
    IdEntry { id: "2.2", params: &[K], characters: true, summary: "(1 - χ(a)a^k) S_k(p^m) ≡ 0 (mod p^m); a defaults to 1..p^m" },
    IdEntry { id: "2.3", params: &[K, N], characters: true, summary: "S_k(p^n) ≡ 0 (mod p^n) given a unit 1 - χ(a)a^k" },
    IdEntry { id: "lemma2.3", params: &[], characters: true, summary: "orders of χ(p^{m-k}+1) and χ(5)" },
    IdEntry { id: "2.4", params: &[K, N], characters: true, summary: "S_k(p^n) ≡ 0 (mod p^{n-1})" },
    IdEntry { id: "2.5", params: &[K, N], characters: true, summary: "S_k(2^n) ≡ 0 (mod 2^n)" },
    IdEntry { id: "3.1", params: &[K, N], characters: false, summary: "Sun's congruence for E_k" },
    IdEntry { id: "3.2", params: &[A, K, N], characters: true, summary: "Voronoï-type congruence for L(-k, χ)" },
    IdEntry { id: "voronoi", params: &[A, P, K], characters: false, summary: "Voronoï's congruence for B_k" },
    IdEntry { id: "lerch", params: &[A, N], characters: false, summary: "Lerch's congruence for the Fermat quotient, n a prime power" },
    IdEntry { id: "nondiv", params: &[D], characters: true, summary: "𝓛_d not divisible by p (by 4 when p = 2)" },
    IdEntry { id: "floor-parity", params: &[M], characters: false, summary: "parity of the floor count, 3 ≤ m ≤ 6" },
];

pub fn lookup(id: &str) -> Option<&'static IdEntry> {
    REGISTRY.iter().find(|s| s.id == id)
}

/// One unit of work: an id, an optional character and parameter values.
#[derive(Clone, Debug)]
pub struct Task {
    pub entry: &'static IdEntry,
    pub chi: Option<DirichletCharacter>,
    pub values: BTreeMap<Param, i64>,
}

/// Outcome of a task: verdicts, or the reason it lies outside the hypotheses.
pub type TaskResult = std::result::Result<Vec<CongruenceVerdict>, String>;

/// The job's characters after the parity and primitivity filters.
pub fn characters_of(job: &Job) -> std::result::Result<Vec<DirichletCharacter>, CliError> {
    let cfg = |e: Error| CliError::Config(format!("job {}: {e}", job.id));
    let mut out = Vec::new();
    match &job.chi {
        Some(list) => {
            for s in list {
                if s.contains(':') {
                    let key: CharacterKey = s
                        .parse()
                        .map_err(|e: String| CliError::Config(format!("job {}: {e}", job.id)))?;
                    out.push(DirichletCharacter::from_key(&key).map_err(cfg)?);
                } else {
                    let (p, m) = parse_modulus(s).ok_or_else(|| {
                        CliError::Config(format!("job {}: {s:?} is not a prime-power modulus", job.id))
                    })?;
                    out.extend(enumerate_characters(p, m).map_err(cfg)?);
                }
            }
        }
        None => {
            let (ps, ms) = (job.p.as_ref().unwrap(), job.m.as_ref().unwrap());
            for &p in &ps.0 {
                for &m in &ms.0 {
                    if p < 2 || !(1..=64).contains(&m) {
                        return Err(CliError::Config(format!("job {}: bad modulus {p}^{m}", job.id)));
                    }
                    out.extend(enumerate_characters(p as u64, m as u32).map_err(cfg)?);
                }
            }
        }
    }
    Ok(out
        .into_iter()
        .filter(|c| job.parity.is_none_or(|par| c.parity() == par))
        .filter(|c| job.primitive.is_none_or(|prim| c.is_primitive() == prim))
        .collect())
}

/// `"p^m"` or a plain prime power.
fn parse_modulus(s: &str) -> Option<(u64, u32)> {
    match s.split_once('^') {
        Some((p, m)) => Some((p.trim().parse().ok()?, m.trim().parse().ok()?)),
        None => prime_power(s.trim().parse().ok()?),
    }
}

/// Cartesian product of the job's values for `params`, first parameter slowest.
fn product(job: &Job, params: &[Param]) -> Vec<BTreeMap<Param, i64>> {
    let mut out = vec![BTreeMap::new()];
    for &param in params {
        let vals = &job.values(param).expect("validated").0;
        out = out
            .into_iter()
            .flat_map(|base| {
                vals.iter().map(move |&v| {
                    let mut next = base.clone();
                    next.insert(param, v);
                    next
                })
            })
            .collect();
    }
    out
}

/// Expands a validated job into tasks, characters outermost.
pub fn expand(job: &Job) -> std::result::Result<Vec<Task>, CliError> {
    let entry = lookup(&job.id).ok_or_else(|| CliError::Config(format!("unknown congruence id {:?}", job.id)))?;
    let mut params = entry.params.to_vec();
    // `a` is optional for the twisted power sum
    if entry.id == "2.2" && job.a.is_some() {
        params.push(Param::A);
    }
    let points = product(job, &params);
    let mut tasks = Vec::new();
    if entry.characters {
        for chi in characters_of(job)? {
            let mut add = |values: BTreeMap<Param, i64>| tasks.push(Task { entry, chi: Some(chi.clone()), values });
            if entry.id == "2.2" && job.a.is_none() {
                let q = chi.modulus() as i64;
                for point in &points {
                    for a in 1..q.max(2) {
                        let mut values = point.clone();
                        values.insert(Param::A, a);
                        add(values);
                    }
                }
            } else {
                points.iter().cloned().for_each(add);
            }
        }
    } else {
        tasks.extend(points.into_iter().map(|values| Task { entry, chi: None, values }));
    }
    Ok(tasks)
}

fn get(values: &BTreeMap<Param, i64>, p: Param) -> Result<i64> {
    values.get(&p).copied().ok_or_else(|| Error::domain(format!("missing {p}")))
}

fn unsigned(values: &BTreeMap<Param, i64>, p: Param) -> Result<u64> {
    let v = get(values, p)?;
    u64::try_from(v).map_err(|_| Error::domain(format!("{p} = {v} is negative")))
}

fn small(values: &BTreeMap<Param, i64>, p: Param) -> Result<u32> {
    let v = get(values, p)?;
    u32::try_from(v).map_err(|_| Error::domain(format!("{p} = {v} out of range")))
}

impl Task {
    /// Runs the verifier. Library errors become skip reasons.
    pub fn evaluate(&self) -> TaskResult {
        self.run().map_err(|e| e.to_string())
    }

    fn run(&self) -> Result<Vec<CongruenceVerdict>> {
        let v = &self.values;
        let chi = || self.chi.as_ref().ok_or_else(|| Error::domain("no character"));
        let one = |r: Result<CongruenceVerdict>| r.map(|x| vec![x]);
        match self.entry.id {
            "kummer" => one(cg::verify_kummer_classical(
                unsigned(v, P)?,
                unsigned(v, K)?,
                unsigned(v, L)?,
                small(v, N)?,
            )),
            "1.1" => one(cg::verify_envall(chi()?, unsigned(v, P)?, unsigned(v, K)?, unsigned(v, L)?, small(v, N)?)),
            "1.2" => one(cg::verify_euler_kummer(unsigned(v, P)?, unsigned(v, K)?, unsigned(v, L)?)),
            "1.3" => one(cg::verify_stern(unsigned(v, K)?, small(v, N)?, unsigned(v, Q)?)),
            "1.3-iff" => one(cg::verify_stern_iff(unsigned(v, K)?, unsigned(v, L)?, small(v, N)?)),
            "1.4" => one(cg::verify_thm11(chi()?, unsigned(v, K)?, small(v, N)?, unsigned(v, Q)?)),
            "1.5" => one(cg::verify_thm11_iff(chi()?, unsigned(v, K)?, unsigned(v, L)?, small(v, N)?)),
            id @ ("thm1.2" | "1.6" | "1.7") => {
                let verdict = cg::verify_thm12(chi()?, unsigned(v, K)?, small(v, N)?, unsigned(v, Q)?)?;
                if id != "thm1.2" && verdict.id != id {
                    return Err(Error::domain(format!("point lies in the other branch ({})", verdict.id)));
                }
                Ok(vec![verdict])
            }
            "1.8" => one(cg::verify_thm12_iff(chi()?, unsigned(v, K)?, unsigned(v, H)?, small(v, N)?)),
            "3.1" => one(cg::verify_sun(unsigned(v, K)?, small(v, N)?)),
            "3.2" => one(cg::verify_thm31(chi()?, get(v, A)?, unsigned(v, K)?, small(v, N)?)),
            "voronoi" => one(cg::verify_voronoi(get(v, A)?, unsigned(v, P)?, unsigned(v, K)?)),
            "lerch" => one(cg::verify_lerch(get(v, A)?, unsigned(v, N)?)),
            "nondiv" => one(cg::check_nondivisibility(chi()?, unsigned(v, D)?)),
            "floor-parity" => one(cg::verify_floor_parity(small(v, M)?)),
            id => {
                let lemma: Lemma = id.parse()?;
                let (k, n) = match lemma {
                    Lemma::Orders => (0, 0),
                    Lemma::Twist => (unsigned(v, K)?, 0),
                    _ => (unsigned(v, K)?, small(v, N)?),
                };
                cg::lemma_point(lemma, chi()?, k, n, v.get(&A).copied())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::Values;

    #[test]
    fn every_id_dispatches() {
        for entry in REGISTRY {
            let mut job = Job { id: entry.id.into(), ..Job::default() };
            let one = |x: i64| Some(Values(vec![x]));
            job.p = one(5);
            job.m = one(2);
            job.k = one(1);
            job.l = one(1);
            job.n = one(2);
            job.q = one(1);
            job.a = one(2);
            job.h = one(0);
            job.d = one(1);
            job.m = if entry.id == "floor-parity" { one(3) } else { one(2) };
            job.validate().unwrap();
            let tasks = expand(&job).unwrap();
            assert!(!tasks.is_empty(), "{}", entry.id);
            for t in tasks.iter().take(3) {
                if let Err(e) = t.evaluate() {
                    assert!(!e.contains("missing"), "{}: {e}", entry.id);
                }
            }
        }
    }

    #[test]
    fn twist_defaults_to_a_full_residue_system() {
        let job = Job {
            id: "2.2".into(),
            chi: Some(vec!["2^3:0,1".into()]),
            k: Some(Values(vec![2])),
            ..Job::default()
        };
        let tasks = expand(&job).unwrap();
        assert_eq!(tasks.iter().map(|t| t.values[&Param::A]).collect::<Vec<_>>(), (1..8).collect::<Vec<_>>());
    }

    #[test]
    fn character_sources() {
        let job = Job { id: "1.4".into(), chi: Some(vec!["16".into()]), primitive: Some(true), ..Job::default() };
        assert_eq!(characters_of(&job).unwrap().len(), 4);
        let bad = Job { chi: Some(vec!["12".into()]), ..job.clone() };
        assert!(characters_of(&bad).is_err());
    }
}
