mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::*;
use labmetab::{FigureId, FiscalRecord, Item, LedgerSeries};
use tempfile::TempDir;

fn labmetab(args: &[&str], input: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_labmetab"))
        .args(args)
        .arg("--input")
        .arg(input)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_ledger_file(dir: &TempDir, ledger: &LedgerSeries) -> PathBuf {
    let path = dir.path().join("ledger.csv");
    std::fs::write(&path, ledger_csv_as(ledger, "EUR")).unwrap();
    path
}

fn setup() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = write_ledger_file(&dir, &random_ledger(42));
    (dir, path)
}

#[test]
fn report_text_has_every_section() {
    let (_dir, input) = setup();
    let text = stdout(&labmetab(&["report"], &input));
    for heading in [
        "Linear trends",
        "Arithmetic growth",
        "Allometric model",
        "Metabolism index",
        "Crossings",
        "Mean costs",
        "Cross-check",
        "Validation",
    ] {
        assert!(text.contains(heading), "missing {heading}:\n{text}");
    }
}

#[test]
fn report_json_parses() {
    let (_dir, input) = setup();
    let out = stdout(&labmetab(&["report", "--format", "json"], &input));
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["period"]["start"], 1997);
    assert_eq!(value["trend"].as_array().unwrap().len(), 3);
}

#[test]
fn report_csv_is_long_format() {
    let (_dir, input) = setup();
    let out = stdout(&labmetab(&["report", "--format", "csv"], &input));
    assert_eq!(out.lines().next().unwrap(), "field,value");
    assert!(out.lines().skip(1).all(|l| l.contains(',')));
}

#[test]
fn trend_selected_items() {
    let (_dir, input) = setup();
    let out = stdout(&labmetab(
        &["trend", "--item", "services", "--format", "json"],
        &input,
    ));
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["item"], "services");
}

#[test]
fn growth_window() {
    let (_dir, input) = setup();
    let out = stdout(&labmetab(
        &[
            "growth", "--from", "2000", "--to", "2010", "--format", "json",
        ],
        &input,
    ));
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    for row in rows.as_array().unwrap() {
        assert_eq!(row["rate"]["start"], 2000);
        assert_eq!(row["rate"]["end"], 2010);
        assert_eq!(row["rate"]["t_years"], 10);
    }
}

#[test]
fn metabolism_one_row_per_year() {
    let (_dir, input) = setup();
    let out = stdout(&labmetab(&["metabolism", "--format", "json"], &input));
    let series: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(series["points"].as_array().unwrap().len(), 19);
}

#[test]
fn allometric_and_crossover_run() {
    let (_dir, input) = setup();
    let out = stdout(&labmetab(&["allometric"], &input));
    assert!(out.contains("B"), "{out}");
    let out = stdout(&labmetab(&["crossover", "--format", "json"], &input));
    assert!(serde_json::from_str::<serde_json::Value>(&out)
        .unwrap()
        .is_array());
}

#[test]
fn figures_writes_every_file() {
    let (dir, input) = setup();
    let out_dir = dir.path().join("figs");
    std::fs::create_dir(&out_dir).unwrap();
    let listing = stdout(&labmetab(
        &["figures", "--out-dir", out_dir.to_str().unwrap()],
        &input,
    ));
    assert_eq!(listing.lines().count(), FigureId::ALL.len());
    for id in FigureId::ALL {
        let path = out_dir.join(id.file_name());
        assert!(path.exists(), "{}", path.display());
        let body = std::fs::read_to_string(path).unwrap();
        assert!(body.lines().count() > 1);
    }
}

#[test]
fn figures_single_id() {
    let (dir, input) = setup();
    let out_dir = dir.path().to_str().unwrap().to_string();
    stdout(&labmetab(
        &["figures", "--figure", "fig4", "--out-dir", &out_dir],
        &input,
    ));
    let written: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().into_string().unwrap())
        .filter(|n| n != "ledger.csv")
        .collect();
    assert_eq!(written, vec![FigureId::Fig4.file_name()]);
}

#[test]
fn figures_needs_out_dir() {
    let (_dir, input) = setup();
    let out = labmetab(&["figures"], &input);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--out-dir"));
}

#[test]
fn validate_reports_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let records = (2000..2004)
        .map(|y| {
            FiscalRecord::new(y, 100.0, 50.0, 90.0)
                .with(Item::Salary, 30.0)
                .with(Item::SocialSecurityTaxes, 10.0)
                .with(Item::SeverancePay, 2.0)
                .with(Item::PersonnelOtherCosts, if y == 2002 { 1.0 } else { 8.0 })
        })
        .collect();
    let input = write_ledger_file(&dir, &LedgerSeries::new("", records).unwrap());
    let out = stdout(&labmetab(&["validate", "--format", "json"], &input));
    let findings: serde_json::Value = serde_json::from_str(&out).unwrap();
    let findings = findings.as_array().unwrap();
    assert_eq!(findings.len(), 1, "{out}");
    assert_eq!(findings[0]["kind"], "decomposition_mismatch");
    assert_eq!(findings[0]["year"], 2002);
}

#[test]
fn tab_delimited_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ledger.tsv");
    std::fs::write(
        &path,
        ledger_csv_as(&random_ledger(3), "EUR").replace(',', "\t"),
    )
    .unwrap();
    stdout(&labmetab(&["growth", "--delimiter", "tab"], &path));
}

#[test]
fn missing_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = labmetab(&["report"], &dir.path().join("absent.csv"));
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("labmetab: "), "{stderr}");
    assert!(stderr.contains("absent.csv"), "{stderr}");
}

#[test]
fn bad_period_is_rejected() {
    let (_dir, input) = setup();
    let out = labmetab(&["report", "--from", "2010", "--to", "2000"], &input);
    assert!(!out.status.success());
}
