//! CSV tables with `# key = value` metadata headers, and JSON manifests.
//!
//! Numbers are written with 17 significant digits so that every table
//! reloads bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::beta::BetaResult;
use crate::error::{Error, Result};
use crate::model::NeutralFrequency;
use crate::profile::{Grid, ProfileSolution};
use crate::ytilde::{Method, YTildeSolution};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn meta_value(&self, key: &str) -> Result<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Format(format!("missing metadata key `{key}`")))
    }

    pub fn meta_f64(&self, key: &str) -> Result<f64> {
        let v = self.meta_value(key)?;
        v.parse()
            .map_err(|_| Error::Format(format!("metadata `{key}` is not a number: {v}")))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let c = self
            .columns
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Format(format!("missing column `{name}`")))?;
        Ok(self.rows.iter().map(|r| r[c]).collect())
    }
}

pub fn write_table(path: &Path, table: &CsvTable) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for (k, v) in &table.meta {
        writeln!(out, "# {k} = {v}")?;
    }
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(&table.columns)?;
        for row in &table.rows {
            w.write_record(row.iter().map(|v| fmt_f64(*v)))?;
        }
        w.flush()?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_table(path: &Path) -> Result<CsvTable> {
    let reader = BufReader::new(File::open(path)?);
    let mut meta = Vec::new();
    let mut body = String::new();
    for line in reader.lines() {
        let line = line?;
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("bad metadata line `{line}`")))?;
            meta.push((k.trim().to_string(), v.trim().to_string()));
        } else {
            body.push_str(&line);
            body.push('\n');
        }
    }
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let columns = rdr.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::Format(format!("not a number: `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(CsvTable {
        meta,
        columns,
        rows,
    })
}

fn grid_meta(grid: &Grid) -> [(String, String); 2] {
    [
        ("L".into(), fmt_f64(grid.half_width())),
        ("N".into(), grid.intervals().to_string()),
    ]
}

fn grid_from(table: &CsvTable) -> Result<Grid> {
    let n: usize = table
        .meta_value("N")?
        .parse()
        .map_err(|_| Error::Format("metadata `N` is not an integer".into()))?;
    let grid = Grid::new(table.meta_f64("L")?, n)?;
    if table.rows.len() != grid.len() {
        return Err(Error::Format(format!(
            "{} rows for a grid of {} nodes",
            table.rows.len(),
            grid.len()
        )));
    }
    Ok(grid)
}

/// `extra` metadata (flux, end states, ...) goes first.
pub fn profile_table(profile: &ProfileSolution, extra: &[(String, String)]) -> CsvTable {
    let mut meta = extra.to_vec();
    meta.extend(grid_meta(&profile.grid));
    meta.push((
        "method".into(),
        if profile.exact { "exact" } else { "numerical" }.into(),
    ));
    CsvTable {
        meta,
        columns: vec!["x".into(), "ubar".into(), "ubar_prime".into()],
        rows: (0..profile.grid.len())
            .map(|k| vec![profile.grid.x[k], profile.ubar[k], profile.ubar_prime[k]])
            .collect(),
    }
}

pub fn profile_from_table(table: &CsvTable) -> Result<ProfileSolution> {
    let grid = grid_from(table)?;
    let exact = match table.meta_value("method")? {
        "exact" => true,
        "numerical" => false,
        other => return Err(Error::Format(format!("unknown profile method `{other}`"))),
    };
    Ok(ProfileSolution {
        grid,
        ubar: table.column("ubar")?,
        ubar_prime: table.column("ubar_prime")?,
        exact,
    })
}

pub fn ytilde_table(y: &YTildeSolution, a: f64, b: f64, extra: &[(String, String)]) -> CsvTable {
    let mut meta = extra.to_vec();
    meta.extend(grid_meta(&y.grid));
    meta.extend([
        ("method".to_string(), y.method.as_str().to_string()),
        ("tau0".into(), fmt_f64(y.freq.tau0)),
        ("xi0".into(), fmt_f64(y.freq.xi0)),
        ("A".into(), fmt_f64(a)),
        ("B".into(), fmt_f64(b)),
    ]);
    CsvTable {
        meta,
        columns: vec!["x".into(), "w".into(), "v".into()],
        rows: (0..y.grid.len())
            .map(|k| vec![y.grid.x[k], y.w[k], y.v[k]])
            .collect(),
    }
}

pub fn ytilde_from_table(table: &CsvTable) -> Result<YTildeSolution> {
    let grid = grid_from(table)?;
    Ok(YTildeSolution {
        grid,
        w: table.column("w")?,
        v: table.column("v")?,
        method: table.meta_value("method")?.parse::<Method>()?,
        freq: NeutralFrequency {
            tau0: table.meta_f64("tau0")?,
            xi0: table.meta_f64("xi0")?,
        },
    })
}

/// Profile and `ytilde` side by side (one file per scan point).
pub fn solution_table(
    profile: &ProfileSolution,
    y: &YTildeSolution,
    extra: &[(String, String)],
) -> Result<CsvTable> {
    if profile.grid != y.grid {
        return Err(Error::GridMismatch(
            "profile and ytilde grids differ".into(),
        ));
    }
    let mut meta = extra.to_vec();
    meta.extend(grid_meta(&y.grid));
    meta.extend([
        ("method".to_string(), y.method.as_str().to_string()),
        ("tau0".into(), fmt_f64(y.freq.tau0)),
        ("xi0".into(), fmt_f64(y.freq.xi0)),
    ]);
    Ok(CsvTable {
        meta,
        columns: ["x", "ubar", "ubar_prime", "w", "v"]
            .map(String::from)
            .to_vec(),
        rows: (0..y.grid.len())
            .map(|k| {
                vec![
                    y.grid.x[k],
                    profile.ubar[k],
                    profile.ubar_prime[k],
                    y.w[k],
                    y.v[k],
                ]
            })
            .collect(),
    })
}

/// JSON form of a [`BetaResult`].
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BetaRecord {
    pub method: String,
    pub half_width: f64,
    pub intervals: usize,
    pub beta_re: f64,
    pub beta_im: f64,
    pub i_re: f64,
    pub i_im: f64,
    pub delta_lambda: f64,
    pub sign_re_beta: i8,
    pub quadrature: String,
}

impl From<&BetaResult> for BetaRecord {
    fn from(r: &BetaResult) -> Self {
        Self {
            method: r.method.as_str().into(),
            half_width: r.half_width,
            intervals: r.intervals,
            beta_re: r.beta.re,
            beta_im: r.beta.im,
            i_re: r.i_integral.re,
            i_im: r.i_integral.im,
            delta_lambda: r.delta_lambda,
            sign_re_beta: r.sign_re_beta,
            quadrature: r.quadrature.as_str().into(),
        }
    }
}

/// One row per method, one cell per half-width; failed cells are empty.
pub fn write_beta_summary(
    path: &Path,
    half_widths: &[f64],
    rows: &[(Method, Vec<Option<BetaResult>>)],
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["method".to_string(), "quantity".to_string()];
    header.extend(half_widths.iter().map(|l| format!("L={l}")));
    w.write_record(&header)?;
    for (method, cells) in rows {
        type Pick = fn(&BetaResult) -> String;
        let quantities: [(&str, Pick); 3] = [
            ("re_beta", |r| fmt_f64(r.beta.re)),
            ("im_beta", |r| fmt_f64(r.beta.im)),
            ("sign_re_beta", |r| r.sign_re_beta.to_string()),
        ];
        for (name, pick) in quantities {
            let mut rec = vec![method.as_str().to_string(), name.to_string()];
            rec.extend(
                cells
                    .iter()
                    .map(|c| c.as_ref().map(pick).unwrap_or_default()),
            );
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::exact_burgers_profile;
    use crate::ytilde::exact_ytilde;

    #[test]
    fn profile_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let g = Grid::new(7.5, 30).unwrap();
        let p = exact_burgers_profile(&g);
        write_table(
            &path,
            &profile_table(&p, &[("flux".into(), "burgers".into())]),
        )
        .unwrap();
        let t = read_table(&path).unwrap();
        assert_eq!(t.meta_value("flux").unwrap(), "burgers");
        assert_eq!(profile_from_table(&t).unwrap(), p);
    }

    #[test]
    fn ytilde_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("y.csv");
        let g = Grid::new(3.0, 12).unwrap();
        let y = exact_ytilde(
            &g,
            NeutralFrequency {
                tau0: 0.1,
                xi0: 1.0 / 3.0,
            },
        );
        write_table(&path, &ytilde_table(&y, 0.0, 0.0, &[])).unwrap();
        assert_eq!(ytilde_from_table(&read_table(&path).unwrap()).unwrap(), y);
    }

    #[test]
    fn malformed_tables() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(
            &path,
            "# L = 1\n# N = 2\n# method = exact\nx,ubar,ubar_prime\n0,1,2\n",
        )
        .unwrap();
        assert!(matches!(
            profile_from_table(&read_table(&path).unwrap()),
            Err(Error::Format(_))
        ));
        std::fs::write(&path, "x,ubar\nfoo,1\n").unwrap();
        assert!(read_table(&path).is_err());
    }
}
