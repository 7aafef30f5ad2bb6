//! Sets of primes `p` for which a non-CM curve with rational `j`-invariant
//! has a `p`-isogeny over some number field of degree `≤ d`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::degrees::degree_lower_bound;
use crate::error::{Error, Result};
use crate::field::{MAX_PRIME, MIN_PRIME};

/// Prime degrees of rational isogenies of non-CM curves over `Q`.
pub const IQ1_PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 37];

/// Assumption tag carried by every conditional result.
pub const SERRE_UNIFORMITY: &str = "serre-uniformity";

/// Largest `d` the set constructors accept.
pub const MAX_D: u64 = 1_000_000;

pub fn in_iq1(p: u64) -> bool {
    IQ1_PRIMES.contains(&p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum SetRule {
    Base,
    UnconditionalUpperBound {
        d: u64,
    },
    /// Exact under the assumption that `ρ_{E,p}` is surjective for every
    /// non-CM `E/Q` and every `p ∉ I_Q(1)`.
    ConditionalExact {
        d: u64,
    },
}

impl SetRule {
    pub fn assumptions(&self) -> Vec<&'static str> {
        match self {
            SetRule::ConditionalExact { .. } => vec![SERRE_UNIFORMITY],
            _ => vec![],
        }
    }
}

impl fmt::Display for SetRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetRule::Base => write!(f, "I_Q(1)"),
            SetRule::UnconditionalUpperBound { d } => write!(f, "upper bound for I_Q({d})"),
            SetRule::ConditionalExact { d } => write!(f, "I_Q({d}) assuming Serre uniformity"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSet {
    /// Ascending, no duplicates.
    pub primes: Vec<u64>,
    #[serde(flatten)]
    pub rule: SetRule,
}

impl PrimeSet {
    fn new(mut primes: Vec<u64>, rule: SetRule) -> PrimeSet {
        primes.sort_unstable();
        primes.dedup();
        PrimeSet { primes, rule }
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn is_subset(&self, other: &PrimeSet) -> bool {
        self.primes.iter().all(|&p| other.contains(p))
    }

    /// Members outside `I_Q(1)`.
    pub fn added_primes(&self) -> Vec<u64> {
        self.primes.iter().copied().filter(|&p| !in_iq1(p)).collect()
    }
}

/// Primes `≤ n` by the sieve of Eratosthenes.
pub fn sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn check_d(d: u64) -> Result<()> {
    if d == 0 || d > MAX_D {
        return Err(Error::InvalidArgument(format!("d must lie in 1..={MAX_D}, got {d}")));
    }
    Ok(())
}

pub fn iq1() -> PrimeSet {
    PrimeSet::new(IQ1_PRIMES.to_vec(), SetRule::Base)
}

/// `I_Q(1) ∪ {p ≤ d−1 : p ≡ 1 (mod 3)} ∪ {p ≤ 3d−1 : p ≡ 2 (mod 3)}`.
pub fn unconditional_upper_bound(d: u64) -> Result<PrimeSet> {
    check_d(d)?;
    let extra = sieve(3 * d - 1).into_iter().filter(|&p| (p % 3 == 1 && p < d) || p % 3 == 2);
    Ok(PrimeSet::new(IQ1_PRIMES.iter().copied().chain(extra).collect(), SetRule::UnconditionalUpperBound { d }))
}

/// `I_Q(1) ∪ {p ≤ d−1}`, exact under Serre uniformity.
pub fn conditional_iq(d: u64) -> Result<PrimeSet> {
    check_d(d)?;
    let extra = sieve(d - 1);
    Ok(PrimeSet::new(IQ1_PRIMES.iter().copied().chain(extra).collect(), SetRule::ConditionalExact { d }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub p: u64,
    pub d: u64,
    pub set: &'static str,
    pub in_set: bool,
    pub predicted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FirstEntry {
    pub p: u64,
    pub d_lower: u64,
    /// Least `d ≤ d_max` with `p` in the unconditional bound.
    pub unconditional: Option<u64>,
    /// Least `d ≤ d_max` with `p` in the conditional set.
    pub conditional: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossValidation {
    pub d_max: u64,
    pub p_max: u64,
    pub primes_checked: usize,
    pub comparisons: u64,
    pub violations: Vec<Violation>,
    pub first_entries: Vec<FirstEntry>,
}

impl CrossValidation {
    pub fn first_entry(&self, p: u64) -> Option<&FirstEntry> {
        self.first_entries.iter().find(|e| e.p == p)
    }
}

/// Checks the set formulas against orbit computations: for every prime
/// `p ∉ I_Q(1)`, `p ≤ p_max`, and every `d ≤ d_max`,
/// `p ∈ U(d) ⟺ d ≥ d_lower(p)` and `p ∈ I_Q(d) ⟺ d ≥ p + 1`.
pub fn cross_validate(d_max: u64, p_max: u64) -> Result<CrossValidation> {
    check_d(d_max)?;
    if !(MIN_PRIME as u64..=MAX_PRIME as u64).contains(&p_max) {
        return Err(Error::InvalidArgument(format!("p_max must lie in {MIN_PRIME}..={MAX_PRIME}, got {p_max}")));
    }
    let primes: Vec<u64> = sieve(p_max).into_iter().filter(|&p| !in_iq1(p)).collect();
    let lowers = primes.par_iter().map(|&p| degree_lower_bound(p).map(|r| r.d_lower)).collect::<Result<Vec<u64>>>()?;

    let upper: Vec<PrimeSet> = (1..=d_max).map(unconditional_upper_bound).collect::<Result<_>>()?;
    let exact: Vec<PrimeSet> = (1..=d_max).map(conditional_iq).collect::<Result<_>>()?;

    let mut violations = Vec::new();
    let mut first_entries = Vec::with_capacity(primes.len());
    let mut comparisons = 0;
    for (&p, &d_lower) in primes.iter().zip(&lowers) {
        let mut entry = FirstEntry { p, d_lower, unconditional: None, conditional: None };
        for d in 1..=d_max {
            let (u, c) = (&upper[d as usize - 1], &exact[d as usize - 1]);
            for (set, name, predicted, first) in [
                (u, "unconditional", d >= d_lower, &mut entry.unconditional),
                (c, "conditional", d > p, &mut entry.conditional),
            ] {
                comparisons += 1;
                let in_set = set.contains(p);
                if in_set != predicted {
                    violations.push(Violation { p, d, set: name, in_set, predicted });
                }
                if in_set && first.is_none() {
                    *first = Some(d);
                }
            }
        }
        first_entries.push(entry);
    }
    Ok(CrossValidation { d_max, p_max, primes_checked: primes.len(), comparisons, violations, first_entries })
}
