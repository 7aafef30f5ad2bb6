//! The eight acceptance criteria, each printed as one PASS/FAIL line.
//! Runs without the libtest harness so the lines always show.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use isodeg::action::{orbit_partition, stabilizer, ProjPoint, Space};
use isodeg::catalog::{self, CatalogKind};
use isodeg::degrees::{degree_lower_bound, ImageTag};
use isodeg::field::{smallest_nonresidue, Fp};
use isodeg::isogeny_sets::{conditional_iq, cross_validate, unconditional_upper_bound};
use isodeg::verify::{self, CheckResult};

const IQ1: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 37];

fn primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| n > 1 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

type Criterion = fn() -> Result<String, String>;

fn check(c: CheckResult) -> Result<String, String> {
    if c.passed && c.cases > 0 {
        Ok(format!("{}: {} cases", c.name, c.cases))
    } else if c.cases == 0 {
        Err(format!("{}: no cases ran", c.name))
    } else {
        Err(format!("{}: {} failures, first: {}", c.name, c.failures.len(), c.failures[0]))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn degree_engine() -> Result<String, String> {
    let mut n = 0;
    for p in primes(5, 199).into_iter().filter(|p| !IQ1.contains(p)) {
        let r = degree_lower_bound(p).map_err(|e| e.to_string())?;
        let expected = if p % 3 == 1 { p + 1 } else { (p + 1) / 3 };
        ensure(r.d_lower == expected, || format!("p = {p}: d_lower {} != {expected}", r.d_lower))?;
        ensure(r.d_lower >= 8, || format!("p = {p}: d_lower {} < 8", r.d_lower))?;
        n += 1;
    }
    Ok(format!("{n} primes"))
}

fn gl2_and_borel() -> Result<String, String> {
    check(verify::check_gl2_transitive(199))?;
    for p in primes(5, 199) {
        let g = catalog::gl2(p as u32).map_err(|e| e.to_string())?;
        let part = orbit_partition(&g.group, Space::ProjectiveLine);
        ensure(part.sizes == vec![p + 1], || format!("p = {p}: GL2 line orbits {:?}", part.sizes))?;
    }
    for p in primes(5, 31) {
        let p = p as u32;
        let g = catalog::gl2(p).map_err(|e| e.to_string())?;
        let b = catalog::borel(p).map_err(|e| e.to_string())?;
        let line = ProjPoint::new(1, 0, p).map_err(|e| e.to_string())?;
        let stab = stabilizer(&g.group, &line).map_err(|e| e.to_string())?;
        let same = stab.same_elements(&b.group).map_err(|e| e.to_string())?;
        ensure(same, || format!("p = {p}: Stab(<e1>) differs from the Borel"))?;
        ensure(stab.order().unwrap() == (p as u64) * (p as u64 - 1).pow(2), || format!("p = {p}: |Stab| wrong"))?;
    }
    Ok("p ≤ 199 transitive, Borel = Stab(<e1>) for p ≤ 31".into())
}

fn desk_values() -> Result<String, String> {
    let r23 = degree_lower_bound(23).map_err(|e| e.to_string())?;
    let cubed = r23.min_orbit_for(ImageTag::CnsPlusCubed);
    let plus = r23.min_orbit_for(ImageTag::CnsPlus);
    ensure(cubed == Some(8), || format!("p = 23: (Cns+)^3 min orbit {cubed:?}"))?;
    ensure(plus == Some(24), || format!("p = 23: Cns+ min orbit {plus:?}"))?;
    let r19 = degree_lower_bound(19).map_err(|e| e.to_string())?;
    let plus19 = r19.min_orbit_for(ImageTag::CnsPlus);
    ensure(plus19 == Some(20), || format!("p = 19: Cns+ min orbit {plus19:?}"))?;
    Ok("8, 24, 20".into())
}

fn stabilizer_index() -> Result<String, String> {
    check(verify::check_stabilizer_index(31))
}

fn point_orbit_bound() -> Result<String, String> {
    let mut n = 0;
    for p in primes(5, 31) {
        let p32 = p as u32;
        let eps = smallest_nonresidue(p32).map_err(|e| e.to_string())?;
        for a in 1..=6u32 {
            let g = catalog::cns_power(p32, eps, a).map_err(|e| e.to_string())?;
            let part = orbit_partition(&g.group, Space::NonzeroVectors);
            let expected = (p * p - 1) / gcd(a as u64, p * p - 1);
            ensure(part.min() == expected, || format!("p = {p}, a = {a}: {} != {expected}", part.min()))?;
            n += 1;
        }
    }
    check(verify::check_point_orbit_bound(31))?;
    Ok(format!("{n} (p, a) pairs"))
}

fn set_identities() -> Result<String, String> {
    let iq1: Vec<u64> = IQ1.to_vec();
    let u7 = unconditional_upper_bound(7).map_err(|e| e.to_string())?;
    let c7 = conditional_iq(7).map_err(|e| e.to_string())?;
    let c19 = conditional_iq(19).map_err(|e| e.to_string())?;
    ensure(u7.primes == iq1, || format!("U(7) = {:?}", u7.primes))?;
    ensure(c7.primes == iq1, || format!("I_Q(7) = {:?}", c7.primes))?;
    ensure(c19.primes == iq1, || format!("I_Q(19) = {:?}", c19.primes))?;
    ensure(conditional_iq(20).unwrap().contains(19), || "19 ∉ I_Q(20)".into())?;
    ensure(unconditional_upper_bound(8).unwrap().contains(23), || "23 ∉ U(8)".into())?;
    let cv = cross_validate(50, 101).map_err(|e| e.to_string())?;
    ensure(cv.violations.is_empty(), || format!("{} violations, first {:?}", cv.violations.len(), cv.violations[0]))?;
    ensure(cv.comparisons > 0, || "cross-validation compared nothing".into())?;
    Ok(format!("cross_validate(50, 101): {} comparisons, 0 violations", cv.comparisons))
}

fn oracle_equivalence() -> Result<String, String> {
    check(verify::check_oracle_equivalence(31))
}

fn epsilon_invariance() -> Result<String, String> {
    let mut n = 0;
    for p in primes(5, 31) {
        let p32 = p as u32;
        let Some(alt) = verify::alternate_nonresidue(p32) else { continue };
        let first = smallest_nonresidue(p32).unwrap();
        for kind in CatalogKind::standard_kinds() {
            let shape = |eps: Fp| -> Result<(u64, Vec<u64>, Vec<u64>), String> {
                let e = catalog::entry(&kind, p32, eps).map_err(|e| e.to_string())?;
                Ok((
                    e.group.order().map_err(|e| e.to_string())?,
                    orbit_partition(&e.group, Space::ProjectiveLine).sizes,
                    orbit_partition(&e.group, Space::NonzeroVectors).sizes,
                ))
            };
            let (a, b) = (shape(first)?, shape(alt)?);
            ensure(a == b, || format!("p = {p}, {kind}: ε = {} vs {}", first.value(), alt.value()))?;
            n += 1;
        }
    }
    check(verify::check_epsilon_invariance(31))?;
    Ok(format!("{n} (p, group) pairs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("1 degree lower bound, 5 ≤ p ≤ 199", degree_engine),
        ("2 GL2 transitive on P^1, Borel = line stabilizer", gl2_and_borel),
        ("3 desk values at p = 23 and p = 19", desk_values),
        ("4 [Stab(C) : Stab(P)] divides p-1", stabilizer_index),
        ("5 vector orbits of Cns^a", point_orbit_bound),
        ("6 prime-set identities and cross-validation", set_identities),
        ("7 generator BFS vs brute-force oracle", oracle_equivalence),
        ("8 ε-invariance", epsilon_invariance),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name} ({detail}; {secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
