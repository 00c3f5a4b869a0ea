//! The `verify` subcommand: run a module's seeded invariant suite and emit
//! a JSON report alongside per-check terminal lines.

use std::path::Path;

use intercept_core::verify as core_verify;

pub struct VerifyOutcome {
    pub all_pass: bool,
    pub report_json: String,
}

pub fn run_verify(selector: &str, seed: u64) -> Result<VerifyOutcome, String> {
    let reports = core_verify::run(selector, seed).map_err(|e| e.to_string())?;

    let mut all_pass = true;
    let mut modules = Vec::new();
    for report in &reports {
        let module_pass = report.all_pass();
        all_pass &= module_pass;
        modules.push(serde_json::json!({
            "module": report.module,
            "all_pass": module_pass,
            "checks": report
                .checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "name": c.name,
                        "measured": c.measured,
                        "tolerance": c.tolerance,
                        "pass": c.pass,
                    })
                })
                .collect::<Vec<_>>(),
        }));
    }
    let doc = serde_json::json!({
        "selector": selector,
        "seed": seed,
        "all_pass": all_pass,
        "modules": modules,
    });
    let report_json = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())? + "\n";

    for report in &reports {
        for c in &report.checks {
            println!(
                "{} {}::{} measured={:.3e} tolerance={:.3e}",
                if c.pass { "PASS" } else { "FAIL" },
                report.module,
                c.name,
                c.measured,
                c.tolerance
            );
        }
    }

    Ok(VerifyOutcome {
        all_pass,
        report_json,
    })
}

pub fn write_report(out_dir: &Path, selector: &str, json: &str) -> Result<(), String> {
    std::fs::create_dir_all(out_dir).map_err(|e| e.to_string())?;
    let path = out_dir.join(format!("verify_{selector}.json"));
    std::fs::write(&path, json).map_err(|e| format!("{}: {e}", path.display()))
}
