//! The three subcommands. Each builds a serializable document first; the
//! table and CSV renderings are derived from it.

use std::fs;
use std::io::Write;

use serde::Serialize;
use smallsphere_core::curvature::random_derivative_jet;
use smallsphere_core::mass::{format_r_poly, full_expansion, LedgerEntry, MassReport};
use smallsphere_core::{CurvatureJet, DerivativeJet, Error, Rational, Result, RicciSource};
use smallsphere_oracle::{run_oracle, OracleRun, OracleSummary};

use crate::config::{Format, RunConfig};

/// Derivative jet paired with a curvature jet: random jets carry their own
/// random derivative tensor, presets carry none. `--delta-r` overrides `ΔR`.
fn derivative_for(source: &RicciSource, config: &RunConfig) -> DerivativeJet {
    let base = match source {
        RicciSource::Random(n) => random_derivative_jet(*n),
        _ if config.delta_r.is_some() => random_derivative_jet(config.seed),
        _ => DerivativeJet::zero(),
    };
    match &config.delta_r {
        Some(dr) => base.with_delta_r(dr.clone()),
        None => base,
    }
}

fn jets(config: &RunConfig) -> Result<Vec<(RicciSource, CurvatureJet)>> {
    let sources: Vec<RicciSource> = match &config.ricci {
        Some(s) => vec![s.clone()],
        None => {
            let randoms = (0..config.trials as u64).map(|i| RicciSource::Random(config.seed.wrapping_add(i)));
            let presets = match config.command {
                crate::config::CommandKind::Oracle => vec![RicciSource::Round(Rational::one())],
                _ => vec![RicciSource::Flat, RicciSource::Round(Rational::one())],
            };
            presets.into_iter().chain(randoms).collect()
        }
    };
    sources
        .into_iter()
        .map(|s| {
            let jet = s.load()?;
            Ok((s, jet))
        })
        .collect()
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

fn write_file(path: &std::path::Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct Failure<'a> {
    jet: &'a str,
    #[serde(flatten)]
    entry: &'a LedgerEntry,
}

#[derive(Serialize)]
struct VerifySummary<'a> {
    jets: usize,
    entries: usize,
    failures: Vec<Failure<'a>>,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    command: &'static str,
    seed: u64,
    trials: usize,
    reports: &'a [MassReport],
    summary: VerifySummary<'a>,
}

pub fn verify(config: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    let mut reports = Vec::new();
    for (source, jet) in jets(config)? {
        let d = derivative_for(&source, config);
        reports.push(full_expansion(&source.to_string(), &jet, &d, &config.radii)?);
    }
    let failures: Vec<Failure> = reports
        .iter()
        .flat_map(|r| r.failures().map(move |e| Failure { jet: &r.label, entry: e }))
        .collect();
    let pass = failures.is_empty();
    let doc = VerifyDoc {
        command: "verify",
        seed: config.seed,
        trials: config.trials,
        reports: &reports,
        summary: VerifySummary {
            jets: reports.len(),
            entries: reports.iter().map(|r| r.ledger.len()).sum(),
            failures,
            pass,
        },
    };
    let json = to_json(&doc);
    if let Some(path) = &config.out {
        write_file(path, &json)?;
    }
    let text = match config.format {
        Format::Json => json,
        Format::Table => verify_table(&doc),
        Format::Csv => ledger_csv(&reports)?,
    };
    emit(out, &text)?;
    Ok(pass)
}

fn verify_table(doc: &VerifyDoc) -> String {
    let mut s = format!(
        "{:<16} {:>7} {:>6} {:>10} {:>14} {:>14} {:>5}  status\n",
        "jet", "entries", "failed", "mDot", "mDdot", "deltaRCoeff", "flags"
    );
    for r in doc.reports {
        let c = &r.coefficients;
        s += &format!(
            "{:<16} {:>7} {:>6} {:>10} {:>14} {:>14} {:>5}  {}\n",
            r.label,
            r.ledger.len(),
            r.failures().count(),
            c.m_dot.to_string(),
            c.m_ddot.to_string(),
            c.delta_r_coeff.to_string(),
            r.flags.len(),
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    for f in &doc.summary.failures {
        s += &format!(
            "FAIL {} {}: computed {} expected {}\n",
            f.jet, f.entry.name, f.entry.computed, f.entry.paper
        );
    }
    s += &format!(
        "verify: {} jets, {} ledger entries, {} failures\n",
        doc.summary.jets,
        doc.summary.entries,
        doc.summary.failures.len()
    );
    s
}

fn csv_string<F>(fill: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    fill(&mut w).map_err(|e| Error::Input(format!("CSV output failed: {e}")))?;
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Input(format!("CSV output failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

fn ledger_csv(reports: &[MassReport]) -> Result<String> {
    csv_string(|w| {
        w.write_record(["jet", "name", "computed", "paper", "pass"])?;
        for r in reports {
            for e in &r.ledger {
                w.write_record([&r.label, &e.name, &e.computed, &e.paper, &e.pass.to_string()])?;
            }
        }
        Ok(())
    })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ExpandDoc<'a> {
    command: &'static str,
    expansion: String,
    hawking: String,
    /// Static minus Hawking `r⁵` coefficient.
    r5_gap: Rational,
    report: &'a MassReport,
}

pub fn expand(config: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    let source = config
        .ricci
        .clone()
        .ok_or_else(|| Error::Input("expand needs --ricci".into()))?;
    let jet = source.load()?;
    let d = derivative_for(&source, config);
    let report = full_expansion(&source.to_string(), &jet, &d, &config.radii)?;
    let c = &report.coefficients;
    let doc = ExpandDoc {
        command: "expand",
        expansion: format!("m(r) = {}", report.expansion_string()),
        hawking: format!("m_H(r) = {}", report.hawking_string()),
        r5_gap: &c.unscaled[1] - &c.hawking_ddot,
        report: &report,
    };
    let json = to_json(&doc);
    if let Some(path) = &config.out {
        write_file(path, &json)?;
    }
    let text = match config.format {
        Format::Json => json,
        Format::Table => expand_table(&doc),
        Format::Csv => csv_string(|w| {
            w.write_record(["r", "static", "hawking"])?;
            for v in &report.per_radius {
                w.write_record([v.r.0, v.static_mass.0, v.hawking.0].map(|x| format!("{x:.16e}")))?;
            }
            Ok(())
        })?,
    };
    emit(out, &text)?;
    Ok(report.pass)
}

fn expand_table(doc: &ExpandDoc) -> String {
    let r = doc.report;
    let c = &r.coefficients;
    let mut s = format!("jet: {}\n{}\n{}\n", r.label, doc.expansion, doc.hawking);
    s += &format!("mDot = {}\n", c.m_dot);
    s += &format!("mDdot (curvature squared) = {}\n", c.m_ddot);
    s += &format!("deltaR coefficient = {} (deltaR = {})\n", c.delta_r_coeff, r.jet.delta_r);
    s += &format!("A = {}, B = {}\n", c.a, c.b);
    s += &format!("static - Hawking r^5 gap = {}\n", doc.r5_gap);
    s += &format!(
        "rescaled m/r = {}\n",
        format_r_poly(&c.rescaled).replace("r^3", "r^2").replace("r^5", "r^4")
    );
    for f in &r.flags {
        s += &format!("flag {f}\n");
    }
    if !r.per_radius.is_empty() {
        s += &format!("{:>10} {:>24} {:>24}\n", "r", "m(r)", "m_H(r)");
        for v in &r.per_radius {
            s += &format!("{:>10} {:>24.16e} {:>24.16e}\n", v.r.0, v.static_mass.0, v.hawking.0);
        }
    }
    s += &format!(
        "ledger: {} entries, {} failures\n",
        r.ledger.len(),
        r.failures().count()
    );
    s
}

#[derive(Serialize)]
struct OracleDoc<'a> {
    command: &'static str,
    runs: Vec<&'a OracleSummary>,
    pass: bool,
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

pub fn oracle(config: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    let oc = config.oracle_config();
    oc.validate()?;
    let mut runs: Vec<OracleRun> = Vec::new();
    for (source, jet) in jets(config)? {
        runs.push(run_oracle(&source.to_string(), &jet, &oc)?);
    }
    let pass = runs.iter().all(|r| r.summary.pass);
    let doc = OracleDoc {
        command: "oracle",
        runs: runs.iter().map(|r| &r.summary).collect(),
        pass,
    };
    let json = to_json(&doc);
    if let Some(dir) = &config.out {
        let io = |e: std::io::Error| Error::Input(format!("cannot write {}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        write_file(&dir.join("oracle.json"), &json)?;
        for r in &runs {
            let sub = dir.join(sanitize(&r.summary.label));
            fs::create_dir_all(&sub).map_err(io)?;
            r.write_csv(&sub)?;
        }
    }
    let text = match config.format {
        Format::Json => json,
        Format::Table => oracle_table(&doc),
        Format::Csv => csv_string(|w| {
            w.write_record(["jet", "check", "relError", "tolerance", "meanNumeric", "meanExact", "pass"])?;
            for s in &doc.runs {
                for c in &s.checks {
                    w.write_record([
                        s.label.clone(),
                        c.name.clone(),
                        format!("{:.16e}", c.rel_error.0),
                        format!("{:.16e}", c.tolerance.0),
                        format!("{:.16e}", c.mean_numeric.0),
                        format!("{:.16e}", c.mean_exact.0),
                        c.pass.to_string(),
                    ])?;
                }
            }
            Ok(())
        })?,
    };
    emit(out, &text)?;
    Ok(pass)
}

fn oracle_table(doc: &OracleDoc) -> String {
    let mut s = String::new();
    for run in &doc.runs {
        s += &format!(
            "jet {} (scale {}, K-dot verdict: {})\n",
            run.label, run.jet_scale, run.kdot_arbiter.verdict
        );
        for c in &run.checks {
            s += &format!(
                "  {:<10} rel {:>10.3e}  tol {:>8.1e}  mean {:>+14.9} vs {:>+14.9}  {}\n",
                c.name,
                c.rel_error.0,
                c.tolerance.0,
                c.mean_numeric.0,
                c.mean_exact.0,
                if c.pass { "pass" } else { "FAIL" }
            );
        }
        for c in &run.convergence {
            let orders: Vec<String> = c
                .orders
                .iter()
                .map(|o| o.map_or("-".into(), |x| format!("{:.3}", x.0)))
                .collect();
            s += &format!("  order {:<4} {}  {}\n", c.quantity, orders.join(" "), if c.pass { "pass" } else { "FAIL" });
        }
        for f in &run.flags {
            s += &format!("  flag {f}\n");
        }
    }
    s += &format!("oracle: {}\n", if doc.pass { "pass" } else { "FAIL" });
    s
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::Input(format!("cannot write output: {e}")))
}
