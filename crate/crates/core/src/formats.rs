//! Text formats: CSV tables for step functions, rearrangements, sampled
//! operator outputs, norm rows and resolution sweeps; the function
//! descriptor mini-language; atomic file output.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! table re-parses to the exact values it was written from. `inf` stands for
//! `+∞`.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::norms::{NormResult, SpaceSpec};
use crate::operators::Sampled;
use crate::rearrange::{Descriptor, GeometricGrid, GridDescriptor, Rearrangement, StepFunction};
use crate::report::InequalityReport;
use crate::verify::Source;

/// Writes `contents` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("`{}` is not a file path", path.display())))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp: PathBuf = path.with_file_name(tmp_name);
    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents)?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        x.to_string()
    }
}

fn parse_f64(field: &str, line: usize, what: &str) -> Result<f64> {
    let s = field.trim();
    s.parse::<f64>()
        .ok()
        .filter(|v| !v.is_nan() || s.eq_ignore_ascii_case("nan"))
        .ok_or_else(|| Error::parse(line, format!("{what}: `{s}` is not a number")))
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn expect_header(r: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<()> {
    let header = r.headers().map_err(|e| Error::parse(1, e.to_string()))?;
    let got: Vec<&str> = header.iter().collect();
    if got != expected {
        return Err(Error::parse(1, format!("expected header `{}`, got `{}`", expected.join(","), got.join(","))));
    }
    Ok(())
}

/// Iterates data rows as `(line, fields)`, checking the column count.
fn rows(text: &str, header: &[&str]) -> Result<Vec<(usize, Vec<String>)>> {
    let mut r = reader(text);
    expect_header(&mut r, header)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != header.len() {
            return Err(Error::parse(line, format!("expected {} fields, got {}", header.len(), rec.len())));
        }
        out.push((line, rec.iter().map(str::to_string).collect()));
    }
    Ok(out)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `breakpoint,value` with a final breakpoint row whose value is empty.
pub fn step_function_to_csv(f: &StepFunction) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["breakpoint", "value"])?;
    for (x, v) in f.breakpoints().iter().zip(f.values()) {
        w.write_record([fmt_f64(*x), fmt_f64(*v)])?;
    }
    w.write_record([fmt_f64(*f.breakpoints().last().unwrap()), String::new()])?;
    finish(w)
}

pub fn step_function_from_csv(text: &str) -> Result<StepFunction> {
    let rows = rows(text, &["breakpoint", "value"])?;
    let Some((last_line, last)) = rows.last() else {
        return Err(Error::parse(1, "no rows"));
    };
    if !last[1].is_empty() {
        return Err(Error::parse(*last_line, "the final row must have an empty value"));
    }
    let mut breakpoints = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len() - 1);
    for (i, (line, fields)) in rows.iter().enumerate() {
        breakpoints.push(parse_f64(&fields[0], *line, "breakpoint")?);
        if i + 1 < rows.len() {
            if fields[1].is_empty() {
                return Err(Error::parse(*line, "only the final row may omit the value"));
            }
            values.push(parse_f64(&fields[1], *line, "value")?);
        }
    }
    StepFunction::new(breakpoints, values).map_err(|e| Error::parse(*last_line, e.to_string()))
}

/// `t,fstar`, one row per grid cell, `t` the cell representative in
/// decreasing order.
pub fn rearrangement_to_csv(f: &Rearrangement) -> Result<String> {
    let grid = f.grid();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "fstar"])?;
    for (i, v) in f.samples().iter().enumerate() {
        w.write_record([fmt_f64(grid.rep(i)), fmt_f64(*v)])?;
    }
    finish(w)
}

/// Infers `J` from the ratio of the first two representatives and `M` from
/// the row count, then checks every `t` against the inferred grid. The
/// result carries a numeric descriptor.
pub fn rearrangement_from_csv(text: &str) -> Result<Rearrangement> {
    let rows = rows(text, &["t", "fstar"])?;
    if rows.len() < 2 {
        return Err(Error::parse(1, "need at least two rows to infer the grid"));
    }
    let mut ts = Vec::with_capacity(rows.len());
    let mut samples = Vec::with_capacity(rows.len());
    for (line, fields) in &rows {
        ts.push(parse_f64(&fields[0], *line, "t")?);
        samples.push(parse_f64(&fields[1], *line, "fstar")?);
    }
    let ratio = ts[0] / ts[1];
    if !(ratio > 1.0 && ratio.is_finite()) {
        return Err(Error::parse(rows[1].0, "t must decrease"));
    }
    let j = (std::f64::consts::LN_2 / ratio.ln()).round();
    if !(1.0..=1e6).contains(&j) || rows.len() % (j as usize) != 0 {
        return Err(Error::parse(rows[1].0, format!("cannot infer a grid from {} rows with J = {j}", rows.len())));
    }
    let grid = GeometricGrid::new((rows.len() / j as usize) as u32, j as u32)
        .map_err(|e| Error::parse(1, e.to_string()))?;
    for (i, t) in ts.iter().enumerate() {
        if ((t - grid.rep(i)) / grid.rep(i)).abs() > 1e-9 {
            return Err(Error::parse(rows[i].0, format!("t = {t} is not the representative of cell {i} on {}", grid.descriptor())));
        }
    }
    Rearrangement::from_samples(grid, samples, Descriptor::Numeric)
        .map_err(|e| Error::parse(1, e.to_string()))
}

/// `y,value` at the cell centers.
pub fn sampled_to_csv(s: &Sampled) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["y", "value"])?;
    for (y, v) in s.centers().into_iter().zip(&s.values) {
        w.write_record([fmt_f64(y), fmt_f64(*v)])?;
    }
    finish(w)
}

/// The cell width is twice the first center; later centers must follow it.
pub fn sampled_from_csv(text: &str) -> Result<Sampled> {
    let rows = rows(text, &["y", "value"])?;
    let Some((first_line, first)) = rows.first() else {
        return Err(Error::parse(1, "no rows"));
    };
    let h = 2.0 * parse_f64(&first[0], *first_line, "y")?;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::parse(*first_line, "the first center must be positive"));
    }
    let mut values = Vec::with_capacity(rows.len());
    for (i, (line, fields)) in rows.iter().enumerate() {
        let y = parse_f64(&fields[0], *line, "y")?;
        let expected = (i as f64 + 0.5) * h;
        if (y - expected).abs() > 1e-9 * expected.max(1.0) {
            return Err(Error::parse(*line, format!("y = {y} is not the center of cell {i}")));
        }
        values.push(parse_f64(&fields[1], *line, "value")?);
    }
    Ok(Sampled { h, values })
}

const NORM_HEADER: [&str; 8] = ["space", "value", "eps_star", "at_boundary", "tail_rel", "restricted_value", "M", "J"];

/// One row per space; empty cells for absent optional fields.
pub fn norms_to_csv(rows: &[(SpaceSpec, NormResult)]) -> Result<String> {
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(NORM_HEADER)?;
    for (spec, r) in rows {
        w.write_record([
            spec.to_string(),
            fmt_f64(r.value),
            opt(r.eps_star),
            r.at_boundary.to_string(),
            fmt_f64(r.tail_rel),
            opt(r.restricted_value),
            r.grid.octaves.to_string(),
            r.grid.subdivisions.to_string(),
        ])?;
    }
    finish(w)
}

pub fn norms_from_csv(text: &str) -> Result<Vec<(SpaceSpec, NormResult)>> {
    let opt = |s: &str, line, what| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            parse_f64(s, line, what).map(Some)
        }
    };
    let uint = |s: &str, line, what: &str| -> Result<u32> {
        s.parse().map_err(|_| Error::parse(line, format!("{what}: `{s}` is not a count")))
    };
    rows(text, &NORM_HEADER)?
        .into_iter()
        .map(|(line, f)| {
            let spec: SpaceSpec = f[0].parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
            let at_boundary = f[3]
                .parse()
                .map_err(|_| Error::parse(line, format!("at_boundary: `{}` is not a boolean", f[3])))?;
            let result = NormResult {
                value: parse_f64(&f[1], line, "value")?,
                eps_star: opt(&f[2], line, "eps_star")?,
                at_boundary,
                tail_rel: parse_f64(&f[4], line, "tail_rel")?,
                restricted_value: opt(&f[5], line, "restricted_value")?,
                grid: GridDescriptor { octaves: uint(&f[6], line, "M")?, subdivisions: uint(&f[7], line, "J")? },
            };
            Ok((spec, result))
        })
        .collect()
}

/// One row of a resolution sweep of an operator experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n_cells: usize,
    pub max_ratio: f64,
    pub argmax: String,
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n_cells", "max_ratio", "argmax"])?;
    for r in rows {
        w.write_record([r.n_cells.to_string(), fmt_f64(r.max_ratio), r.argmax.clone()])?;
    }
    finish(w)
}

/// Fields are trimmed, so labels keep interior spaces only.
pub fn sweep_from_csv(text: &str) -> Result<Vec<SweepRow>> {
    rows(text, &["n_cells", "max_ratio", "argmax"])?
        .into_iter()
        .map(|(line, f)| {
            Ok(SweepRow {
                n_cells: f[0]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("n_cells: `{}` is not a count", f[0])))?,
                max_ratio: parse_f64(&f[1], line, "max_ratio")?,
                argmax: f[2].clone(),
            })
        })
        .collect()
}

const SUMMARY_HEADER: [&str; 9] =
    ["suite", "verdict", "max_ratio", "min_ratio", "argmax", "stability", "pinned", "samples", "skipped"];

/// One line per report, in the order given.
pub fn summary_csv(reports: &[InequalityReport]) -> Result<String> {
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_HEADER)?;
    for r in reports {
        w.write_record([
            r.name.clone(),
            r.verdict.to_string(),
            fmt_f64(r.max_ratio),
            fmt_f64(r.min_ratio),
            r.argmax.clone().unwrap_or_default(),
            opt(r.stability),
            opt(r.pinned),
            r.ratios.len().to_string(),
            r.skipped.to_string(),
        ])?;
    }
    finish(w)
}

/// Parses a function descriptor:
///
/// * `powerlog:p=P,beta=B` for `t^{-1/P} |ln t|^B` (`p=inf` allowed),
/// * `indicator:s=S` for `χ_(0,S)`,
/// * `constant:c=C`,
/// * `zero`,
/// * anything else is a path to a `breakpoint,value` CSV file.
pub fn parse_function(desc: &str) -> Result<Source> {
    let desc = desc.trim();
    let (tag, params) = desc.split_once(':').unwrap_or((desc, ""));
    let keys: &[&str] = match tag {
        "powerlog" => &["p", "beta"],
        "indicator" => &["s"],
        "constant" => &["c"],
        "zero" if params.is_empty() => return Ok(Source::Analytic(Descriptor::Constant { c: 0.0 })),
        _ => {
            let text = fs::read_to_string(desc).map_err(|e| {
                Error::parse(0, format!("`{desc}` is neither a known function tag nor a readable file: {e}"))
            })?;
            return step_function_from_csv(&text).map(Source::Step);
        }
    };
    let mut vals = vec![None; keys.len()];
    for pair in params.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::parse(0, format!("expected key=value, got `{pair}`")))?;
        let slot = keys
            .iter()
            .position(|key| *key == k.trim())
            .ok_or_else(|| Error::parse(0, format!("{tag}: unknown key `{}`", k.trim())))?;
        vals[slot] = Some(parse_f64(v, 0, k.trim())?);
    }
    let get = |i: usize| vals[i].ok_or_else(|| Error::parse(0, format!("{tag}: missing {}", keys[i])));
    let d = match tag {
        "powerlog" => Descriptor::PowerLog { p: get(0)?, beta: get(1)? },
        "indicator" => Descriptor::Indicator { s: get(0)? },
        _ => Descriptor::Constant { c: get(0)? },
    };
    // Reject parameters the analytic sampler would refuse, while still
    // reporting them as parse errors.
    crate::rearrange::analytic_rearrangement(d, GeometricGrid::new(2, 1).expect("tiny grid"))
        .map_err(|e| Error::parse(0, e.to_string()))?;
    Ok(Source::Analytic(d))
}
