//! Output records for the CLI: one structured envelope per command,
//! rendered as JSON, CSV or an aligned text table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{orbit_partition, Space};
use crate::catalog::{self, CatalogKind};
use crate::degrees::{degree_lower_bound_with, DegreeReport, SEMANTICS};
use crate::error::{Error, Result};
use crate::field::{check_nonresidue, check_supported_prime, smallest_nonresidue, Fp};
use crate::isogeny_sets::{conditional_iq, in_iq1, unconditional_upper_bound, PrimeSet};
use crate::oracle::powerset_vs_generated;
use crate::verify::{is_oracle_prime, VerifyReport};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub assumptions: Vec<String>,
    pub warnings: Vec<String>,
    pub results: Value,
    #[serde(skip)]
    pub table: Table,
}

impl OutputRecord {
    fn new(command: &str) -> OutputRecord {
        OutputRecord {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            parameters: BTreeMap::new(),
            assumptions: vec![],
            warnings: vec![],
            results: Value::Null,
            table: Table::default(),
        }
    }

    fn param(mut self, key: &str, value: impl Serialize) -> OutputRecord {
        self.parameters.insert(key.to_string(), json!(value));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("records serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(vec![]);
                w.write_record(&self.table.header).expect("in-memory write");
                for row in &self.table.rows {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
            }
            Format::Table => self.render_table(),
        }
    }

    fn render_table(&self) -> String {
        let t = &self.table;
        let mut widths: Vec<usize> = t.header.iter().map(|h| h.chars().count()).collect();
        for row in &t.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let pad = w - cell.chars().count();
                s.push_str(cell);
                s.extend(std::iter::repeat_n(' ', pad));
            }
            s.trim_end().to_string()
        };
        let mut out = String::new();
        let _ = writeln!(out, "{}", line(&t.header));
        let _ = writeln!(out, "{}", line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>()));
        for row in &t.rows {
            let _ = writeln!(out, "{}", line(row));
        }
        for a in &self.assumptions {
            let _ = writeln!(out, "assumes: {a}");
        }
        for w in &self.warnings {
            let _ = writeln!(out, "note: {w}");
        }
        out
    }
}

fn join(sizes: &[u64]) -> String {
    sizes.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn degree_warnings(report: &DegreeReport) -> Vec<String> {
    let mut w = vec![format!("d_lower is a group-theoretic {SEMANTICS}")];
    if report.residue_class == 1 {
        w.push("p ≡ 1 (mod 3): the only non-surjective image is Cns+ (a = 1), giving the bound p+1; the cubed normalizer case applies only to p ≡ 2 (mod 3)".into());
    } else {
        w.push(
            "p ≡ 2 (mod 3): the cubed normalizer (Cns+)^3 is taken as Cns^3 ⋊ <N(1,0)>, the index-3 subgroup of Cns+"
                .into(),
        );
    }
    w
}

/// `degrees --prime p`.
pub fn degrees_record(p: u64, epsilon: Option<u32>) -> Result<OutputRecord> {
    let report = degree_lower_bound_with(p, epsilon)?;
    let mut rec = OutputRecord::new("degrees").param("prime", p).param("epsilon", report.epsilon);
    rec.warnings = degree_warnings(&report);
    let mut table = Table::new(&["p", "image", "group", "group_order", "min_orbit", "partition", "d_lower"]);
    for d in &report.per_image {
        table.push(vec![
            report.p.to_string(),
            d.image.to_string(),
            d.group.clone(),
            d.group_order.to_string(),
            d.min_orbit.to_string(),
            join(&d.partition),
            report.d_lower.to_string(),
        ]);
    }
    rec.table = table;
    rec.results = json!({ "report": report });
    Ok(rec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IqMode {
    UpperBound,
    AssumeUniformity,
}

/// `iq --d d (--upper-bound | --assume-uniformity)`.
pub fn iq_record(d: u64, mode: IqMode) -> Result<OutputRecord> {
    let set: PrimeSet = match mode {
        IqMode::UpperBound => unconditional_upper_bound(d)?,
        IqMode::AssumeUniformity => conditional_iq(d)?,
    };
    let mode_name = match mode {
        IqMode::UpperBound => "upper-bound",
        IqMode::AssumeUniformity => "assume-uniformity",
    };
    let mut rec = OutputRecord::new("iq").param("d", d).param("mode", mode_name);
    rec.assumptions = set.rule.assumptions().into_iter().map(String::from).collect();
    match mode {
        IqMode::UpperBound => rec.warnings.push("unconditional containment: the true set may be smaller".into()),
        IqMode::AssumeUniformity => rec
            .warnings
            .push("exact only if rho_{E,p} is surjective for every non-CM E/Q and every p outside I_Q(1)".into()),
    }
    let mut table = Table::new(&["prime", "in_iq1", "rule"]);
    for &p in &set.primes {
        table.push(vec![p.to_string(), in_iq1(p).to_string(), set.rule.to_string()]);
    }
    rec.table = table;
    rec.results = json!({ "set": set, "added": set.added_primes() });
    Ok(rec)
}

/// `verify`.
pub fn verify_record(report: &VerifyReport) -> OutputRecord {
    let mut rec = OutputRecord::new("verify")
        .param("pmax", report.options.p_max)
        .param("dmax", report.options.d_max)
        .param("skip_oracle", report.options.skip_oracle);
    if report.options.p_max > 31 {
        rec.warnings.push("exhaustive and oracle suites are capped at p ≤ 31; sweeps cover the full range".into());
    }
    let mut table = Table::new(&["check", "status", "cases", "failures"]);
    for c in &report.checks {
        let status = if c.passed { "pass" } else { "FAIL" };
        table.push(vec![c.name.clone(), status.into(), c.cases.to_string(), c.failures.len().to_string()]);
    }
    rec.table = table;
    rec.results = json!({ "passed": report.passed, "checks": report.checks });
    rec
}

/// Group names accepted by `orbits --group`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupName {
    Gl2,
    Borel,
    Cns,
    CnsPlus,
    CnsPower,
    CnsPlusPower,
}

impl GroupName {
    pub fn kind(self, exponent: u32) -> CatalogKind {
        match self {
            GroupName::Gl2 => CatalogKind::Gl2,
            GroupName::Borel => CatalogKind::Borel,
            GroupName::Cns => CatalogKind::Cns,
            GroupName::CnsPlus => CatalogKind::CnsPlus,
            GroupName::CnsPower => CatalogKind::CnsPower(exponent),
            GroupName::CnsPlusPower => CatalogKind::CnsPlusPower(exponent),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceName {
    Lines,
    Vectors,
    Both,
}

impl SpaceName {
    fn spaces(self) -> Vec<Space> {
        match self {
            SpaceName::Lines => vec![Space::ProjectiveLine],
            SpaceName::Vectors => vec![Space::NonzeroVectors],
            SpaceName::Both => vec![Space::ProjectiveLine, Space::NonzeroVectors],
        }
    }
}

/// `orbits --prime p --group g`.
pub fn orbits_record(
    p: u64,
    group: GroupName,
    exponent: u32,
    space: SpaceName,
    epsilon: Option<u32>,
) -> Result<OutputRecord> {
    let p32 = check_supported_prime(p)?;
    if exponent == 0 {
        return Err(Error::InvalidArgument("--exponent must be at least 1".into()));
    }
    let eps = match epsilon {
        Some(e) => {
            let e = Fp::new(e as i64, p32);
            check_nonresidue(e)?;
            e
        }
        None => smallest_nonresidue(p32)?,
    };
    let kind = group.kind(exponent);
    let entry = catalog::entry(&kind, p32, eps)?;
    let order = entry.group.order()?;
    let mut rec =
        OutputRecord::new("orbits").param("prime", p).param("group", kind.to_string()).param("epsilon", eps.value());
    let mut table = Table::new(&["p", "group", "space", "orbits", "min_orbit", "partition"]);
    let mut partitions = serde_json::Map::new();
    for s in space.spaces() {
        let part = orbit_partition(&entry.group, s);
        table.push(vec![
            p.to_string(),
            kind.to_string(),
            s.to_string(),
            part.sizes.len().to_string(),
            part.min().to_string(),
            join(&part.sizes),
        ]);
        partitions.insert(s.to_string(), json!({ "min": part.min(), "sizes": part.sizes }));
    }
    let mut results = json!({ "group": kind.to_string(), "order": order, "partitions": partitions });
    if group == GroupName::CnsPlusPower && is_oracle_prime(p) {
        let plus = catalog::nonsplit_cartan_normalizer(p32, eps)?;
        let probe = powerset_vs_generated(&plus, exponent)?;
        if !probe.raw_is_subgroup || probe.semidirect_order != Some(probe.generated_order) {
            rec.warnings.push(format!(
                "the {} elements x^{exponent} of Cns+ generate a group of order {}; this command uses Cns^{exponent} ⋊ <N(1,0)> of order {order}",
                probe.raw_power_set_size, probe.generated_order
            ));
        }
        results["power_conventions"] = json!(probe);
    }
    rec.table = table;
    rec.results = results;
    Ok(rec)
}
