//! Dense sampling of an objective over its search box, for plotting.

use std::fmt::Write as _;
use std::str::FromStr;

use quantopt::{Error, Objective64};

use crate::error::Result;

/// Fixes one coordinate of a two-dimensional objective, e.g. `y=0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slice {
    pub axis: usize,
    pub value: f64,
}

impl FromStr for Slice {
    type Err = Error;

    /// Accepts `x=<v>`, `y=<v>` or `x<i>=<v>`.
    fn from_str(s: &str) -> std::result::Result<Self, Error> {
        let bad = || Error::InvalidArgument(format!("slice `{s}` is not of the form y=0"));
        let (axis, value) = s.split_once('=').ok_or_else(bad)?;
        let axis = match axis.trim() {
            "x" => 0,
            "y" => 1,
            other => other.strip_prefix('x').and_then(|i| i.parse().ok()).ok_or_else(bad)?,
        };
        let value = value.trim().parse().map_err(|_| bad())?;
        Ok(Self { axis, value })
    }
}

/// Sampled values; each row is the coordinates followed by `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Grid {
    /// CSV with a header line; numbers use the shortest exact representation.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

fn linspace(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

/// Samples a two-dimensional objective on a `resolution × resolution` grid
/// over its box (rows ordered by `y`, then `x`), or along one axis with the
/// other coordinate fixed by `slice`.
pub fn grid_sample(objective: &Objective64, resolution: usize, slice: Option<Slice>) -> Result<Grid> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!("resolution must be at least 2, got {resolution}")).into());
    }
    if objective.dim() != 2 {
        return Err(Error::InvalidArgument(format!("grids need a two-dimensional objective, got {}", objective.dim())).into());
    }
    let (lo, hi) = (objective.box_lo(), objective.box_hi());
    match slice {
        None => {
            let mut rows = Vec::with_capacity(resolution * resolution);
            for j in 0..resolution {
                let y = linspace(lo[1], hi[1], resolution, j);
                for i in 0..resolution {
                    let x = linspace(lo[0], hi[0], resolution, i);
                    rows.push(vec![x, y, objective.evaluate(&[x, y])?]);
                }
            }
            Ok(Grid { columns: vec!["x".into(), "y".into(), "f".into()], rows })
        }
        Some(Slice { axis, value }) => {
            if axis > 1 {
                return Err(Error::InvalidArgument(format!("axis {axis} out of range for a 2-D objective")).into());
            }
            let free = 1 - axis;
            let mut rows = Vec::with_capacity(resolution);
            for i in 0..resolution {
                let mut point = [0.0; 2];
                point[axis] = value;
                point[free] = linspace(lo[free], hi[free], resolution, i);
                rows.push(vec![point[free], objective.evaluate(&point)?]);
            }
            let name = if free == 0 { "x" } else { "y" };
            Ok(Grid { columns: vec![name.into(), "f".into()], rows })
        }
    }
}
