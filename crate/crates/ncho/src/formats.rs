//! Grid, surface and sector exports.
//!
//! CSV numbers are written with 17 significant digits so that parsing gives
//! back the same bits; NaN marks cells outside the region or singular
//! residuals. JSON uses the shortest round-trip representation and `null`
//! for NaN.

use std::io::{Read, Write};

use ncho_core::region::{Axis, Manifold, RegionSample, ScanGrid, SurfacePanel, Tetrad};
use ncho_core::SectorOperator;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const GRID_HEADER: [&str; 9] =
    ["b", "a", "c", "xi_abs", "res_even_plus", "res_even_minus", "res_odd_plus", "res_odd_minus", "flags"];

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_owned()
    } else {
        format!("{x:.16e}")
    }
}

fn bits(flags: &[bool; 4]) -> String {
    flags.iter().map(|&f| if f { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Option<[bool; 4]> {
    let b = s.as_bytes();
    if b.len() != 4 {
        return None;
    }
    let mut out = [false; 4];
    for (o, c) in out.iter_mut().zip(b) {
        *o = match c {
            b'0' => false,
            b'1' => true,
            _ => return None,
        };
    }
    Some(out)
}

pub fn write_grid_csv<W: Write>(samples: &[RegionSample], w: W) -> CliResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(GRID_HEADER)?;
    for s in samples {
        let t = s.tetrad;
        let mut row: Vec<String> = [t.b, t.a, t.c, t.xi_abs].iter().map(|&x| fmt_f64(x)).collect();
        row.extend(s.residuals.iter().map(|&x| fmt_f64(x)));
        row.push(bits(&s.flags));
        out.write_record(&row)?;
    }
    out.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}

fn bad_row(line: usize, message: &str) -> CliError {
    CliError::Schema { path: "csv".to_owned(), field: format!("line {line}"), message: message.to_owned() }
}

/// Inverse of [`write_grid_csv`]. Region membership is recomputed from the
/// tetrad; a NaN residual inside the region marks a singular root.
pub fn read_grid_csv<R: Read>(r: R) -> CliResult<Vec<RegionSample>> {
    let mut rdr = csv::Reader::from_reader(r);
    if rdr.headers()?.iter().ne(GRID_HEADER) {
        return Err(bad_row(1, "unexpected header"));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != GRID_HEADER.len() {
            return Err(bad_row(line, "wrong number of columns"));
        }
        let mut v = [0.0; 8];
        for (k, x) in v.iter_mut().enumerate() {
            *x = rec[k].parse().map_err(|_| bad_row(line, "not a number"))?;
        }
        let flags = parse_bits(&rec[8]).ok_or_else(|| bad_row(line, "flags must be four 0/1 characters"))?;
        let tetrad = Tetrad::new(v[0], v[1], v[2], v[3]);
        let in_region = tetrad.in_region();
        let residuals = [v[4], v[5], v[6], v[7]];
        let singular = residuals.map(|x| in_region && x.is_nan());
        out.push(RegionSample { tetrad, in_region, residuals, flags, singular });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisJson {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl From<Axis> for AxisJson {
    fn from(a: Axis) -> Self {
        AxisJson { lo: a.lo, hi: a.hi, n: a.n }
    }
}

impl From<AxisJson> for Axis {
    fn from(a: AxisJson) -> Self {
        Axis::new(a.lo, a.hi, a.n)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleJson {
    pub b: f64,
    pub a: f64,
    pub c: f64,
    pub xi_abs: f64,
    pub in_region: bool,
    pub residuals: [Option<f64>; 4],
    pub flags: String,
    pub singular: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub b_axis: AxisJson,
    pub a_axis: AxisJson,
    pub c_axis: AxisJson,
    pub xi_abs: f64,
    pub tol: f64,
    /// Row major, `c` fastest.
    pub samples: Vec<SampleJson>,
}

impl From<&ScanGrid> for GridJson {
    fn from(g: &ScanGrid) -> Self {
        GridJson {
            b_axis: g.b_axis.into(),
            a_axis: g.a_axis.into(),
            c_axis: g.c_axis.into(),
            xi_abs: g.xi_abs,
            tol: g.tol,
            samples: g
                .samples
                .iter()
                .map(|s| SampleJson {
                    b: s.tetrad.b,
                    a: s.tetrad.a,
                    c: s.tetrad.c,
                    xi_abs: s.tetrad.xi_abs,
                    in_region: s.in_region,
                    residuals: s.residuals.map(|x| (!x.is_nan()).then_some(x)),
                    flags: bits(&s.flags),
                    singular: bits(&s.singular),
                })
                .collect(),
        }
    }
}

impl GridJson {
    pub fn into_grid(self) -> CliResult<ScanGrid> {
        let bad = |m: &str| CliError::Schema { path: "json".to_owned(), field: "samples".to_owned(), message: m.to_owned() };
        let samples = self
            .samples
            .into_iter()
            .map(|s| {
                Ok(RegionSample {
                    tetrad: Tetrad::new(s.b, s.a, s.c, s.xi_abs),
                    in_region: s.in_region,
                    residuals: s.residuals.map(|x| x.unwrap_or(f64::NAN)),
                    flags: parse_bits(&s.flags).ok_or_else(|| bad("bad flags"))?,
                    singular: parse_bits(&s.singular).ok_or_else(|| bad("bad singular flags"))?,
                })
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(ScanGrid {
            b_axis: self.b_axis.into(),
            a_axis: self.a_axis.into(),
            c_axis: self.c_axis.into(),
            xi_abs: self.xi_abs,
            tol: self.tol,
            samples,
        })
    }
}

pub fn write_grid_json<W: Write>(grid: &ScanGrid, w: W) -> CliResult<()> {
    serde_json::to_writer(w, &GridJson::from(grid)).map_err(json_io)
}

pub fn read_grid_json<R: Read>(r: R) -> CliResult<ScanGrid> {
    let g: GridJson = serde_json::from_reader(r).map_err(|e| CliError::Syntax {
        path: "json".to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    g.into_grid()
}

fn json_io(e: serde_json::Error) -> CliError {
    CliError::Io { path: "<output>".into(), source: e.into() }
}

pub const SURFACE_HEADER: [&str; 7] = ["manifold", "b", "rho", "a", "c", "xi_abs", "relative_residual"];

/// One row per root: the sampled zero-set surfaces, one panel per manifold.
pub fn write_surface_csv<W: Write>(panels: &[SurfacePanel], w: W) -> CliResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SURFACE_HEADER)?;
    for p in panels {
        for ib in 0..p.b_axis.n {
            for ir in 0..p.log_rho_axis.n {
                let rho = p.log_rho_axis.pow10(ir);
                for s in &p.cells[p.index(ib, ir)] {
                    let t = s.tetrad;
                    out.write_record([
                        p.manifold.name().to_owned(),
                        fmt_f64(t.b),
                        fmt_f64(rho),
                        fmt_f64(t.a),
                        fmt_f64(t.c),
                        fmt_f64(t.xi_abs),
                        fmt_f64(s.relative_residual),
                    ])?;
                }
            }
        }
    }
    out.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}

pub fn manifold_by_name(s: &str) -> Option<Manifold> {
    Manifold::ALL.into_iter().find(|m| m.name() == s)
}

/// Dense sector matrix, row major, entries as `re+imj`.
pub fn write_sector_csv<W: Write>(op: &SectorOperator, w: W) -> CliResult<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    let n = op.dim();
    for i in 0..n {
        let row: Vec<String> = op.storage.row(i).iter().map(|z| format!("{}{:+}j", z.re, z.im)).collect();
        out.write_record(&row)?;
    }
    out.flush().map_err(|e| CliError::Csv(e.into()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncho_core::operator::assemble_sector;
    use ncho_core::region::{scan_grid, VISUAL_TOL};
    use ncho_core::{CanonicalParams, Parity};

    fn small() -> ScanGrid {
        // a and c start at 0.4 so some cells fall outside the region.
        scan_grid(Axis::new(2.0, 4.0, 2), Axis::new(0.4, 11.0 / 14.0, 2), Axis::new(0.4, 22.0 / 7.0, 2), 1.0, VISUAL_TOL)
            .unwrap()
    }

    fn same_bits(x: &RegionSample, y: &RegionSample) -> bool {
        let t = |s: &RegionSample| [s.tetrad.b, s.tetrad.a, s.tetrad.c, s.tetrad.xi_abs].map(f64::to_bits);
        t(x) == t(y)
            && x.residuals.map(f64::to_bits) == y.residuals.map(f64::to_bits)
            && x.flags == y.flags
            && x.singular == y.singular
            && x.in_region == y.in_region
    }

    #[test]
    fn csv_has_header_and_rows() {
        let g = small();
        let mut buf = Vec::new();
        write_grid_csv(&g.samples, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[0], GRID_HEADER.join(","));
        assert!(lines[1].contains("NaN"));
    }

    #[test]
    fn csv_round_trip_is_bitwise() {
        let g = small();
        let mut buf = Vec::new();
        write_grid_csv(&g.samples, &mut buf).unwrap();
        let back = read_grid_csv(&buf[..]).unwrap();
        assert_eq!(back.len(), g.samples.len());
        assert!(g.samples.iter().zip(&back).all(|(x, y)| same_bits(x, y)));
    }

    #[test]
    fn json_round_trip_is_bitwise() {
        let g = small();
        let mut buf = Vec::new();
        write_grid_json(&g, &mut buf).unwrap();
        let back = read_grid_json(&buf[..]).unwrap();
        assert_eq!(back.b_axis, g.b_axis);
        assert!(g.samples.iter().zip(&back.samples).all(|(x, y)| same_bits(x, y)));
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(read_grid_csv(&b"x,y\n1,2\n"[..]).is_err());
        let mut bad = GRID_HEADER.join(",");
        bad.push_str("\n1,1,1,0,0,0,0,0,01x0\n");
        assert!(read_grid_csv(bad.as_bytes()).is_err());
    }

    #[test]
    fn sector_dump() {
        let p = CanonicalParams::from_tetrad(4.0, 1.0, 2.0, 1.0).unwrap();
        let op = assemble_sector(&p, 1.0, Parity::Even, 2).unwrap();
        let mut buf = Vec::new();
        write_sector_csv(&op, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().all(|l| l.split(',').count() == 4));
        assert!(text.lines().next().unwrap().ends_with('j'));
    }
}
