//! Drives the built-in check runner the way the command-line binary does:
//! pick suites, run them against the default configuration, and print the
//! per-check outcomes plus the serialized report.

use theta122::report::{CheckStatus, RunConfig};
use theta122::runner;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = RunConfig::default();
    config.samples = 40;
    config.suites = vec!["theta".into(), "legendre".into(), "symbolic".into()];
    config.validate()?;

    let report = runner::run(&config)?;
    println!(
        "{} checks: {} passed, {} failed, {} findings\n",
        report.results.len(),
        report.passed,
        report.failed,
        report.findings
    );

    for r in &report.results {
        let tag = match r.status {
            CheckStatus::Pass => "pass   ",
            CheckStatus::Fail => "FAIL   ",
            CheckStatus::Finding => "finding",
        };
        println!(
            "[{}] {}/{}: max error {:.3e} over {} samples",
            tag, r.suite, r.check, r.max_error, r.count
        );
        if !matches!(r.status, CheckStatus::Pass) {
            println!("         {}", r.details);
            println!("         claim: {}", r.paper_anchor);
        }
    }

    // The same CSV the binary writes with --samples-out, reproducible from
    // the seed alone.
    let csv = runner::samples_csv(&config)?;
    let mut lines = csv.lines();
    let header = lines.next().unwrap_or("");
    println!("\nsample table: {} data rows", csv.lines().count().saturating_sub(1));
    println!("  columns: {}", header);
    if let Some(first) = lines.next() {
        let preview: Vec<&str> = first.split(',').take(4).collect();
        println!("  first row starts: {}, ...", preview.join(", "));
    }

    // Full JSON report, as written by --out.
    let json = serde_json::to_string(&report)?;
    println!("  serialized report: {} bytes of JSON", json.len());
    Ok(())
}
