use std::fmt::Write as _;

use rirdist::io::{read_json, write_atomic};
use rirdist::sde::{EvalReport, EVAL_SCHEMA_VERSION};

use crate::args::ReportArgs;
use crate::error::{check_schema, CliError, CliResult};
use crate::lock::OutputLock;

pub const REPORT_FILE: &str = "report.md";
pub const SCATTER_FILE: &str = "scatter.svg";

fn opt(v: Option<f64>) -> String {
    v.map_or("n/a".to_string(), |x| format!("{x:.3}"))
}

/// Markdown tables built only from the stored report.
pub fn render_tables(r: &EvalReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Distance estimation\n");
    let _ = writeln!(s, "| metric | value |\n|---|---|");
    let _ = writeln!(s, "| samples | {} |", r.n_samples);
    let _ = writeln!(s, "| MAE (m) | {:.3} |", r.mae_m);
    let _ = writeln!(s, "| zero-model MAE (m) | {:.3} |", r.zero_model_mae_m);
    let _ = writeln!(s, "| Pearson r | {} |", opt(r.pearson_r));

    let _ = writeln!(s, "\n## Error by true distance\n");
    let _ = writeln!(s, "| range (m) | n | MAE (m) |\n|---|---|---|");
    for b in &r.per_range_mae {
        let _ = writeln!(s, "| {} | {} | {} |", b.label(), b.n, opt(b.mae_m));
    }

    let _ = writeln!(s, "\n## Distance histogram ({} m bins)\n", r.truth_histogram.bin_width);
    let _ = writeln!(s, "| bin (m) | true | predicted |\n|---|---|---|");
    let bins = r.truth_histogram.counts.len().max(r.predicted_histogram.counts.len());
    let w = r.truth_histogram.bin_width;
    for k in 0..bins {
        let t = r.truth_histogram.counts.get(k).copied().unwrap_or(0);
        let p = r.predicted_histogram.counts.get(k).copied().unwrap_or(0);
        let _ = writeln!(s, "| [{}, {}) | {t} | {p} |", k as f64 * w, (k + 1) as f64 * w);
    }
    s
}

/// Predicted against true distance with the identity line.
pub fn render_scatter(r: &EvalReport) -> String {
    let (size, pad) = (480.0, 40.0);
    let max = r
        .samples
        .iter()
        .flat_map(|s| [s.true_m, s.predicted_m])
        .fold(1.0f64, f64::max)
        .ceil();
    let px = |v: f64| pad + v / max * (size - 2.0 * pad);
    let py = |v: f64| size - pad - v / max * (size - 2.0 * pad);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-dasharray="4 3"/>"#,
        px(0.0), py(0.0), px(max), py(max)
    );
    let _ = writeln!(
        s,
        r#"<path d="M{} {} H{} M{} {} V{}" stroke="black" fill="none"/>"#,
        px(0.0), py(0.0), px(max), px(0.0), py(0.0), py(max)
    );
    for p in &r.samples {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="steelblue" fill-opacity="0.6"/>"#,
            px(p.true_m),
            py(p.predicted_m)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">true distance (m), 0 to {max}</text>"#,
        size / 2.0,
        size - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">predicted (m)</text>"#,
        size / 2.0,
        size / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" font-size="12">MAE {:.3} m</text>"#,
        pad,
        r.mae_m
    );
    s.push_str("</svg>\n");
    s
}

pub fn run(args: &ReportArgs) -> CliResult<String> {
    let report: EvalReport = read_json(&args.eval).map_err(CliError::input)?;
    check_schema(&args.eval.display().to_string(), &report.schema_version, EVAL_SCHEMA_VERSION)?;
    let tables = render_tables(&report);
    let _lock = OutputLock::acquire(&args.out)?;
    write_atomic(&args.out.join(REPORT_FILE), tables.as_bytes()).map_err(CliError::output)?;
    if args.svg {
        write_atomic(&args.out.join(SCATTER_FILE), render_scatter(&report).as_bytes())
            .map_err(CliError::output)?;
    }
    print!("{tables}");
    Ok(tables)
}
