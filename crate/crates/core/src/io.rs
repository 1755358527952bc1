//! CSV readers and writers. Numbers are written with 17 significant digits
//! so that every value reads back bit-identical.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::{FunctionSamples, UniformGrid};
use crate::potential::Potential;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn read_two_columns<R: Read>(reader: R, names: [&str; 2]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.len() != 2 || headers[0] != *names[0] || headers[1] != *names[1] {
        return Err(Error::Parse(format!(
            "expected header '{},{}', found '{}'",
            names[0],
            names[1],
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let parse = |k: usize| -> Result<f64> {
            record[k]
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("row {}: '{}': {e}", line + 2, &record[k])))
        };
        xs.push(parse(0)?);
        ys.push(parse(1)?);
    }
    Ok((xs, ys))
}

/// Reads a potential table `x,q` whose abscissae cover `[0, pi]`.
pub fn read_potential_csv<R: Read>(reader: R) -> Result<Potential> {
    let (xs, qs) = read_two_columns(reader, ["x", "q"])?;
    let covers = xs.first().is_some_and(|&a| a <= 1e-9)
        && xs.last().is_some_and(|&b| b >= std::f64::consts::PI - 1e-9);
    if !covers {
        return Err(Error::Argument("potential table must cover [0, pi]".into()));
    }
    Potential::sampled(xs, qs)
}

pub fn read_potential_file(path: &Path) -> Result<Potential> {
    read_potential_csv(std::fs::File::open(path)?)
}

/// Reads samples `x,value` that sit on a uniform grid.
pub fn read_function_csv<R: Read>(reader: R) -> Result<FunctionSamples> {
    let (xs, ys) = read_two_columns(reader, ["x", "value"])?;
    if xs.len() < 2 {
        return Err(Error::Argument("need at least two samples".into()));
    }
    let grid = UniformGrid::new(xs[0], xs[xs.len() - 1], xs.len())?;
    let tol = 1e-9 * grid.step();
    if let Some(j) = (0..xs.len()).find(|&j| (xs[j] - grid.point(j)).abs() > tol) {
        return Err(Error::Argument(format!(
            "sample {j} at x = {} is off the uniform grid",
            xs[j]
        )));
    }
    FunctionSamples::new(grid, ys)
}

pub fn write_function_csv<W: Write>(samples: &FunctionSamples, mut w: W) -> Result<()> {
    write_columns(&mut w, "x,value", samples)
}

pub(crate) fn write_columns<W: Write>(
    w: &mut W,
    header: &str,
    samples: &FunctionSamples,
) -> Result<()> {
    writeln!(w, "{header}")?;
    for (j, v) in samples.values().iter().enumerate() {
        writeln!(w, "{},{}", fmt_f64(samples.grid().point(j)), fmt_f64(*v))?;
    }
    Ok(())
}
