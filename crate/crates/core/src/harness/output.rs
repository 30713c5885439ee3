use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use super::runs::{Record, SweepResult};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 4] = ["swept", "error", "leakage", "wall_ms"];

/// Floor used when nonpositive errors force the symlog axis.
pub const SYMLOG_FLOOR: f64 = 1e-16;

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn sci(x: f64) -> String {
    format!("{x:.11e}")
}

/// Series-major CSV with LF line endings and 12 significant digits.
pub fn csv_string(result: &SweepResult) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(io)?;
    for s in &result.series {
        for r in &s.records {
            w.write_record([sci(r.swept), sci(r.error), sci(r.leakage), sci(r.wall_ms)]).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(io)?;
    String::from_utf8(bytes).map_err(io)
}

pub fn write_csv(result: &SweepResult, destination: &Path) -> Result<()> {
    let text = csv_string(result)?;
    let mut f = std::fs::File::create(destination).map_err(|e| Error::Io(format!("{}: {e}", destination.display())))?;
    f.write_all(text.as_bytes()).map_err(io)
}

pub fn read_csv(text: &str) -> Result<Vec<Record>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(io)?.iter().map(String::from).collect();
    if header != CSV_HEADER {
        return Err(Error::Io(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for row in r.records() {
        let row = row.map_err(io)?;
        let v: Vec<f64> = row
            .iter()
            .map(|x| x.parse::<f64>().map_err(io))
            .collect::<Result<_>>()?;
        if v.len() != 4 {
            return Err(Error::Io(format!("row has {} fields", v.len())));
        }
        out.push(Record { swept: v[0], error: v[1], leakage: v[2], wall_ms: v[3] });
    }
    Ok(out)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const DASHES: [&str; 3] = ["", "6,4", "2,3"];

/// Log-log plot of error against the swept value, one polyline per series.
///
/// Falls back to a linear x axis when a swept value is nonpositive, and to
/// `log10(error + 1e-16)` on the y axis when an error is nonpositive.
pub fn svg_string(result: &SweepResult) -> String {
    let records: Vec<&Record> = result.series.iter().flat_map(|s| &s.records).collect();
    let log_x = records.iter().all(|r| r.swept > 0.0);
    let symlog = records.iter().any(|r| r.error <= 0.0);
    let fx = |x: f64| if log_x { x.log10() } else { x };
    let fy = |y: f64| if symlog { (y + SYMLOG_FLOOR).log10() } else { y.log10() };

    let range = |vals: Vec<f64>| {
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo < 1e-12 {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = range(records.iter().map(|r| fx(r.swept)).collect());
    let (y0, y1) = range(records.iter().map(|r| fy(r.error)).collect());
    let px = |x: f64| MARGIN + (fx(x) - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (fy(y) - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    if symlog {
        let _ = writeln!(s, "<!-- symlog y axis: nonpositive errors present, floor {SYMLOG_FLOOR:e} -->");
    }
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        MARGIN / 2.0,
        result.experiment.name()
    );
    let xlabel = if log_x { "log10(swept)" } else { "swept" };
    let ylabel = if symlog { "log10(error + 1e-16)" } else { "log10(error)" };
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{xlabel} [{x0:.2}, {x1:.2}]</text>"#,
        WIDTH / 2.0,
        HEIGHT - MARGIN / 3.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" font-size="12" transform="rotate(-90 14 {})" text-anchor="middle">{ylabel} [{y0:.2}, {y1:.2}]</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (i, series) in result.series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        if series.records.len() > 1 {
            let mut d = String::new();
            for (k, r) in series.records.iter().enumerate() {
                let _ = write!(d, "{}{:.2},{:.2}", if k == 0 { "M" } else { " L" }, px(r.swept), py(r.error));
            }
            let dash = DASHES[i % DASHES.len()];
            let dash = if dash.is_empty() { String::new() } else { format!(r#" stroke-dasharray="{dash}""#) };
            let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#);
        }
        for r in &series.records {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#, px(r.swept), py(r.error));
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" fill="{color}">{}</text>"#,
            WIDTH - MARGIN + 5.0,
            MARGIN + 16.0 * (i as f64 + 1.0),
            series.label
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_svg(result: &SweepResult, destination: &Path) -> Result<()> {
    std::fs::write(destination, svg_string(result)).map_err(|e| Error::Io(format!("{}: {e}", destination.display())))
}
