//! Consistency suites: closed-form orders, orbit partitions, stabilizer
//! indices, ε-invariance, oracle equivalence and the prime-set identities.
//!
//! Each check runs over a range of primes and records every failing case
//! instead of stopping at the first one.

use rayon::prelude::*;
use serde::Serialize;

use crate::action::{
    line_point_stabilizer_index, orbit, orbit_partition, orbit_size_map, stabilizer, Point, ProjPoint, Space, VecPoint,
};
use crate::catalog::{self, power_subgroup, CatalogEntry, CatalogKind};
use crate::degrees::degree_lower_bound;
use crate::error::{Error, Result};
use crate::field::{check_nonresidue, gcd, is_prime, smallest_nonresidue, Fp, MAX_PRIME, MIN_PRIME};
use crate::isogeny_sets::{conditional_iq, cross_validate, in_iq1, iq1, sieve, unconditional_upper_bound};
use crate::oracle::{elements_by_shape, orbit_partition_bruteforce, powerset_vs_generated, ORACLE_MAX_PRIME};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub failures: Vec<String>,
}

#[derive(Default)]
struct Tally {
    cases: u64,
    failures: Vec<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(msg());
        }
    }
}

/// Runs `f` for every prime in parallel and merges the tallies in prime
/// order. An `Err` from `f` counts as a failed case.
fn check_over<F>(name: &str, primes: &[u32], f: F) -> CheckResult
where
    F: Fn(u32, &mut Tally) -> Result<()> + Sync,
{
    let tallies: Vec<Tally> = primes
        .par_iter()
        .map(|&p| {
            let mut t = Tally::default();
            if let Err(e) = f(p, &mut t) {
                t.cases += 1;
                t.failures.push(format!("p = {p}: {e}"));
            }
            t
        })
        .collect();
    let mut out = CheckResult { name: name.to_string(), passed: true, cases: 0, failures: vec![] };
    for t in tallies {
        out.cases += t.cases;
        out.failures.extend(t.failures);
    }
    out.passed = out.failures.is_empty();
    out
}

/// Primes in `MIN_PRIME..=p_max`.
pub fn primes_up_to(p_max: u64) -> Vec<u32> {
    sieve(p_max.min(MAX_PRIME as u64)).into_iter().filter(|&p| p >= MIN_PRIME as u64).map(|p| p as u32).collect()
}

fn oracle_primes(p_max: u64) -> Vec<u32> {
    primes_up_to(p_max.min(ORACLE_MAX_PRIME as u64))
}

fn entries(p: u32, epsilon: Fp) -> Result<Vec<CatalogEntry>> {
    CatalogKind::standard_kinds().iter().map(|k| catalog::entry(k, p, epsilon)).collect()
}

/// The second-smallest non-residue mod `p`.
pub fn alternate_nonresidue(p: u32) -> Option<Fp> {
    let first = smallest_nonresidue(p).ok()?.value();
    (first + 1..p).map(|e| Fp::new(e as i64, p)).find(|e| check_nonresidue(*e).is_ok())
}

/// For `p ∉ I_Q(1)`: `d_lower ≥ 8`, `= p + 1` for `p ≡ 1 (mod 3)` and
/// `= (p + 1)/3` for `p ≡ 2 (mod 3)`.
pub fn check_degree_sweep(p_max: u64) -> CheckResult {
    let primes: Vec<u32> = primes_up_to(p_max).into_iter().filter(|&p| !in_iq1(p as u64)).collect();
    check_over("degree-lower-bound", &primes, |p, t| {
        let r = degree_lower_bound(p as u64)?;
        let expected = if p % 3 == 1 { p as u64 + 1 } else { (p as u64 + 1) / 3 };
        t.expect(r.d_lower >= 8, || format!("p = {p}: d_lower = {} < 8", r.d_lower));
        t.expect(r.d_lower == expected, || format!("p = {p}: d_lower = {}, expected {expected}", r.d_lower));
        Ok(())
    })
}

/// `GL2(F_p)` is transitive on `P¹(F_p)`.
pub fn check_gl2_transitive(p_max: u64) -> CheckResult {
    check_over("gl2-min-orbit", &primes_up_to(p_max), |p, t| {
        let g = catalog::gl2(p)?;
        let part = orbit_partition(&g.group, Space::ProjectiveLine);
        t.expect(part.sizes == [p as u64 + 1], || format!("p = {p}: partition {:?}", part.sizes));
        Ok(())
    })
}

/// The stabilizer in `GL2(F_p)` of the line through `(1, 0)` is the Borel.
pub fn check_borel_stabilizer(p_max: u64) -> CheckResult {
    check_over("borel-is-line-stabilizer", &oracle_primes(p_max), |p, t| {
        let g = catalog::gl2(p)?;
        let stab = stabilizer(&g.group, &ProjPoint::affine(0, p))?;
        let b = catalog::borel(p)?;
        t.expect(stab.same_elements(&b.group)?, || format!("p = {p}: stabilizer differs from Borel"));
        Ok(())
    })
}

/// Closure order of every standard kind equals its closed form, and the
/// index of the Borel is `p + 1`.
pub fn check_order_formulas(p_max: u64) -> CheckResult {
    check_over("order-formulas", &oracle_primes(p_max), |p, t| {
        let eps = smallest_nonresidue(p)?;
        for e in entries(p, eps)? {
            let n = e.group.materialize()?.len() as u64;
            let want = e.kind.order(p).expect("standard kinds have closed forms");
            t.expect(n == want, || format!("p = {p}: |{}| = {n}, expected {want}", e.kind));
        }
        let g = crate::gl2::gl2_order(p);
        let b = CatalogKind::Borel.order(p).expect("closed form");
        t.expect(g.is_multiple_of(b) && g / b == p as u64 + 1, || format!("p = {p}: [GL2 : Borel] ≠ p + 1"));
        Ok(())
    })
}

/// Orbits partition both spaces and satisfy orbit–stabilizer.
pub fn check_orbit_partitions(p_max: u64) -> CheckResult {
    check_over("orbit-partitions", &oracle_primes(p_max), |p, t| {
        let eps = smallest_nonresidue(p)?;
        for e in entries(p, eps)? {
            let order = e.group.order()?;
            for space in [Space::ProjectiveLine, Space::NonzeroVectors] {
                let part = orbit_partition(&e.group, space);
                t.expect(part.total() == space.size(p), || {
                    format!("p = {p}: {} orbits on {space} sum to {}", e.kind, part.total())
                });
                for &rep in &part.representatives {
                    let o = match space {
                        Space::ProjectiveLine => orbit_at::<ProjPoint>(&e, rep)?,
                        Space::NonzeroVectors => orbit_at::<VecPoint>(&e, rep)?,
                    };
                    t.expect(o.0 * o.1 == order, || format!("p = {p}: {} orbit-stabilizer fails on {space}", e.kind));
                }
            }
        }
        Ok(())
    })
}

fn orbit_at<P: Point>(e: &CatalogEntry, index: usize) -> Result<(u64, u64)> {
    let pt = P::from_index(e.p, index).ok_or_else(|| Error::Inconsistent(format!("bad index {index}")))?;
    let o = orbit(&e.group, &pt)?;
    let explicit = stabilizer(&e.group, &pt)?.order()?;
    if explicit != o.stabilizer_order {
        return Err(Error::Inconsistent(format!(
            "{}: explicit stabilizer of {pt:?} has order {explicit}, orbit–stabilizer gives {}",
            e.kind, o.stabilizer_order
        )));
    }
    Ok((o.size, o.stabilizer_order))
}

/// `[Stab(⟨P⟩) : Stab(P)]` divides `p − 1` for every nonzero vector `P`.
///
/// Every vector is covered through orbit sizes
/// (`[Stab(C) : Stab(P)] = |G·P| / |G·C|`); one vector per orbit is also
/// checked with explicit stabilizer subgroups.
pub fn check_stabilizer_index(p_max: u64) -> CheckResult {
    check_over("stabilizer-index-divides-p-1", &oracle_primes(p_max), |p, t| {
        let eps = smallest_nonresidue(p)?;
        for e in entries(p, eps)? {
            let lines = orbit_size_map::<ProjPoint>(&e.group);
            let vectors = orbit_size_map::<VecPoint>(&e.group);
            for v in VecPoint::all(p) {
                let (pv, lc) = (vectors[v.index()], lines[v.line().index()]);
                let ok = pv % lc == 0 && (p as u64 - 1).is_multiple_of(pv / lc);
                t.expect(ok, || format!("p = {p}: {} at {v:?}: |G·P| = {pv}, |G·C| = {lc}", e.kind));
            }
            for &rep in &orbit_partition(&e.group, Space::NonzeroVectors).representatives {
                let v = VecPoint::from_index(p, rep).expect("representative is a point");
                let index = line_point_stabilizer_index(&e.group, &v)?;
                let via_orbits = vectors[rep] / lines[v.line().index()];
                t.expect((p as u64 - 1).is_multiple_of(index) && index == via_orbits, || {
                    format!("p = {p}: {} at {v:?}: explicit index {index}, via orbits {via_orbits}", e.kind)
                });
            }
        }
        Ok(())
    })
}

/// Vector orbits of `C_ns^a` have size `(p²−1)/gcd(a, p²−1)`, and every
/// group containing `C_ns^a` has vector orbits at least `(p²−1)/a`.
pub fn check_point_orbit_bound(p_max: u64) -> CheckResult {
    check_over("point-orbit-bound", &oracle_primes(p_max), |p, t| {
        let eps = smallest_nonresidue(p)?;
        let n = p as u64 * p as u64 - 1;
        for a in 1..=6u32 {
            let e = catalog::cns_power(p, eps, a)?;
            let part = orbit_partition(&e.group, Space::NonzeroVectors);
            let want = n / gcd(a as u64, n);
            t.expect(part.min() == want, || {
                format!("p = {p}: min vector orbit of Cns^{a} = {}, expected {want}", part.min())
            });
        }
        for e in entries(p, eps)? {
            if let Some(a) = e.kind.contained_cartan_power() {
                let min = orbit_partition(&e.group, Space::NonzeroVectors).min();
                t.expect(min * a as u64 >= n, || {
                    format!("p = {p}: {} has a vector orbit of size {min} < (p²−1)/{a}", e.kind)
                });
            }
        }
        Ok(())
    })
}

/// Orders and orbit-size multisets agree for two different non-residues.
pub fn check_epsilon_invariance(p_max: u64) -> CheckResult {
    check_over("epsilon-invariance", &oracle_primes(p_max), |p, t| {
        let Some(alt) = alternate_nonresidue(p) else { return Ok(()) };
        let eps = smallest_nonresidue(p)?;
        for (a, b) in entries(p, eps)?.iter().zip(entries(p, alt)?.iter()) {
            let (na, nb) = (a.group.materialize()?.len(), b.group.materialize()?.len());
            t.expect(na == nb, || format!("p = {p}: |{}| differs across ε ({na} vs {nb})", a.kind));
            for space in [Space::ProjectiveLine, Space::NonzeroVectors] {
                let (pa, pb) = (orbit_partition(&a.group, space), orbit_partition(&b.group, space));
                t.expect(pa.sizes == pb.sizes, || {
                    format!("p = {p}: {} orbits on {space} differ across ε: {:?} vs {:?}", a.kind, pa.sizes, pb.sizes)
                });
            }
        }
        Ok(())
    })
}

/// Generator closures, orbit partitions and stabilizer orders agree with
/// brute-force enumeration.
pub fn check_oracle_equivalence(p_max: u64) -> CheckResult {
    check_over("oracle-equivalence", &oracle_primes(p_max), |p, t| {
        let eps = smallest_nonresidue(p)?;
        for e in entries(p, eps)? {
            let oracle = elements_by_shape(&e.kind, p, eps.value())?;
            let ours = e.group.sorted_elements()?;
            t.expect(ours == oracle, || {
                format!("p = {p}: {} element sets differ ({} vs {})", e.kind, ours.len(), oracle.len())
            });
            for space in [Space::ProjectiveLine, Space::NonzeroVectors] {
                let brute = orbit_partition_bruteforce(&oracle, space, p)?;
                let part = orbit_partition(&e.group, space);
                t.expect(part.sizes == brute.sizes, || {
                    format!("p = {p}: {} partitions on {space} differ: {:?} vs {:?}", e.kind, part.sizes, brute.sizes)
                });
                let mut ours: Vec<(u64, u64)> = part
                    .representatives
                    .iter()
                    .map(|&i| match space {
                        Space::ProjectiveLine => orbit_at::<ProjPoint>(&e, i),
                        Space::NonzeroVectors => orbit_at::<VecPoint>(&e, i),
                    })
                    .collect::<Result<_>>()?;
                ours.sort_unstable();
                t.expect(ours == brute.orbit_stabilizers, || {
                    format!("p = {p}: {} stabilizer orders on {space} differ", e.kind)
                });
            }
        }
        let plus = catalog::nonsplit_cartan_normalizer(p, eps)?;
        for a in 1..=6 {
            let probe = powerset_vs_generated(&plus, a)?;
            let ours = power_subgroup(&plus, a)?.group.materialize()?.len() as u64;
            t.expect(probe.semidirect_order == Some(ours), || {
                format!("p = {p}: (Cns+)^{a} has {ours} elements, oracle {:?}", probe.semidirect_order)
            });
        }
        Ok(())
    })
}

/// Set formula identities at small `d`, containment and monotonicity up to `d_max`.
pub fn check_set_identities(d_max: u64) -> CheckResult {
    let mut t = Tally::default();
    let base = iq1();
    let run = |t: &mut Tally| -> Result<()> {
        t.expect(unconditional_upper_bound(7)?.primes == base.primes, || "U(7) ≠ I_Q(1)".into());
        t.expect(conditional_iq(7)?.primes == base.primes, || "I_Q(7) ≠ I_Q(1)".into());
        t.expect(conditional_iq(19)?.primes == base.primes, || "I_Q(19) ≠ I_Q(1)".into());
        t.expect(conditional_iq(20)?.contains(19), || "19 ∉ I_Q(20)".into());
        t.expect(unconditional_upper_bound(8)?.contains(23), || "23 ∉ U(8)".into());
        let mut prev: Option<(crate::isogeny_sets::PrimeSet, crate::isogeny_sets::PrimeSet)> = None;
        for d in 1..=d_max.max(1) {
            let (u, c) = (unconditional_upper_bound(d)?, conditional_iq(d)?);
            t.expect(c.is_subset(&u), || format!("I_Q({d}) ⊄ U({d})"));
            t.expect(base.is_subset(&c), || format!("I_Q(1) ⊄ I_Q({d})"));
            if let Some((pu, pc)) = &prev {
                t.expect(pu.is_subset(&u) && pc.is_subset(&c), || format!("sets shrink at d = {d}"));
            }
            prev = Some((u, c));
        }
        Ok(())
    };
    if let Err(e) = run(&mut t) {
        t.expect(false, || e.to_string());
    }
    CheckResult { name: "set-identities".into(), passed: t.failures.is_empty(), cases: t.cases, failures: t.failures }
}

pub fn check_cross_validation(d_max: u64, p_max: u64) -> CheckResult {
    let p_max = p_max.min(MAX_PRIME as u64);
    let mut out = CheckResult { name: "cross-validate".into(), passed: true, cases: 0, failures: vec![] };
    match cross_validate(d_max, p_max) {
        Ok(cv) => {
            out.cases = cv.comparisons;
            out.failures = cv
                .violations
                .iter()
                .map(|v| {
                    format!("p = {}, d = {}: {} membership {} but predicted {}", v.p, v.d, v.set, v.in_set, v.predicted)
                })
                .collect();
        }
        Err(e) => out.failures.push(e.to_string()),
    }
    out.passed = out.failures.is_empty();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    pub p_max: u64,
    pub d_max: u64,
    pub skip_oracle: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { p_max: 31, d_max: 50, skip_oracle: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// Runs every suite. Exhaustive small-prime suites stop at `p = 31`; sweeps
/// run to `p_max`.
pub fn run(opts: VerifyOptions) -> Result<VerifyReport> {
    if opts.p_max < MIN_PRIME as u64 || opts.p_max > MAX_PRIME as u64 {
        return Err(Error::PrimeOutOfRange { p: opts.p_max, min: MIN_PRIME as u64, max: MAX_PRIME as u64 });
    }
    if opts.d_max == 0 {
        return Err(Error::InvalidArgument("d_max must be at least 1".into()));
    }
    let mut checks = vec![
        check_order_formulas(opts.p_max),
        check_orbit_partitions(opts.p_max),
        check_borel_stabilizer(opts.p_max),
        check_stabilizer_index(opts.p_max),
        check_point_orbit_bound(opts.p_max),
        check_epsilon_invariance(opts.p_max),
    ];
    if !opts.skip_oracle {
        checks.push(check_oracle_equivalence(opts.p_max));
    }
    checks.push(check_gl2_transitive(opts.p_max));
    checks.push(check_degree_sweep(opts.p_max));
    checks.push(check_set_identities(opts.d_max));
    checks.push(check_cross_validation(opts.d_max, opts.p_max));
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport { options: opts, passed, checks })
}

/// `p` is in range for the exhaustive suites.
pub fn is_oracle_prime(p: u64) -> bool {
    is_prime(p) && (MIN_PRIME as u64..=ORACLE_MAX_PRIME as u64).contains(&p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let r = run(VerifyOptions { p_max: 13, d_max: 20, skip_oracle: false }).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{}: {:?}", c.name, c.failures);
            assert!(
                c.cases > 0 || matches!(c.name.as_str(), "degree-lower-bound" | "cross-validate"),
                "{} ran no cases",
                c.name
            );
        }
        assert!(r.passed);
    }

    #[test]
    fn run_rejects_bad_ranges() {
        assert!(run(VerifyOptions { p_max: 3, ..Default::default() }).is_err());
        assert!(run(VerifyOptions { p_max: 20000, ..Default::default() }).is_err());
        assert!(run(VerifyOptions { d_max: 0, ..Default::default() }).is_err());
    }

    #[test]
    fn alternate_nonresidues() {
        assert_eq!(alternate_nonresidue(5).map(Fp::value), Some(3));
        assert_eq!(alternate_nonresidue(7).map(Fp::value), Some(5));
        assert_eq!(alternate_nonresidue(23).map(Fp::value), Some(7));
    }

    #[test]
    fn failing_case_is_reported() {
        let r = check_over("demo", &[5, 7], |p, t| {
            t.expect(p == 5, || format!("p = {p}"));
            if p == 7 {
                return Err(Error::NotPrime(9));
            }
            Ok(())
        });
        assert!(!r.passed);
        assert_eq!(r.cases, 3);
        assert_eq!(r.failures.len(), 2);
    }
}
