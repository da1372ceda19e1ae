//! Runs a [`RunConfig`] and writes its artifacts.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::config::{Output, RunConfig, SliceAxis};
use crate::harness::csv::{self, Precision};
use crate::lop::TraceSink;
use crate::metrics::{self, ErrorReport};
use crate::problems::ProblemId;
use crate::solver1d::{Equation1D, Grid1D, Solver1D};
use crate::solver2d::{Grid2D, Solver2D};
use crate::time::IntegrationStats;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Line(Grid1D),
    Plane(Grid2D),
}

impl Geometry {
    pub fn for_problem(problem: ProblemId, nx: usize, ny: usize) -> Result<Self> {
        match problem.y_range() {
            None => Ok(Geometry::Line(Grid1D::new(problem.x_range().0, problem.x_range().1, nx)?)),
            Some(y) => Ok(Geometry::Plane(Grid2D::new(problem.x_range(), y, nx, ny)?)),
        }
    }

    /// Cells per axis.
    pub fn cells(&self) -> Vec<usize> {
        match self {
            Geometry::Line(g) => vec![g.n],
            Geometry::Plane(g) => vec![g.nx, g.ny],
        }
    }

    pub fn spacing(&self) -> Vec<f64> {
        match self {
            Geometry::Line(g) => vec![g.dx()],
            Geometry::Plane(g) => vec![g.dx(), g.dy()],
        }
    }

    pub fn label(&self) -> String {
        let n: Vec<String> = self.cells().iter().map(|n| n.to_string()).collect();
        n.join("x")
    }

    /// Cell averages of `problem` at time `t`.
    pub fn averages(&self, problem: ProblemId, t: f64) -> Result<Vec<f64>> {
        match self {
            Geometry::Line(g) => problem.cell_averages_1d(g, t),
            Geometry::Plane(g) => problem.cell_averages_2d(g, t),
        }
    }
}

/// Final state of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub problem: ProblemId,
    pub scheme: String,
    pub geometry: Geometry,
    pub state: Vec<f64>,
    pub stats: IntegrationStats,
}

impl Solution {
    /// Number of conserved fields per cell.
    pub fn fields(&self) -> usize {
        self.problem.fields()
    }

    /// The scalar, or the density, of every cell.
    pub fn primary(&self) -> Vec<f64> {
        self.state.iter().step_by(self.fields()).copied().collect()
    }

    /// Density along the grid line nearest `coordinate`, with the positions
    /// along the line.
    pub fn slice(&self, axis: SliceAxis, coordinate: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let Geometry::Plane(g) = self.geometry else {
            return Err(Error::invalid("slices need a 2D solution"));
        };
        let pick = |lo: f64, h: f64, n: usize| (((coordinate - lo) / h).floor().max(0.0) as usize).min(n - 1);
        let rho = |i: usize, j: usize| self.state[(j * g.nx + i) * 4];
        Ok(match axis {
            SliceAxis::Y => {
                let j = pick(g.y.0, g.dy(), g.ny);
                ((0..g.nx).map(|i| g.centre(i, j).0).collect(), (0..g.nx).map(|i| rho(i, j)).collect())
            }
            SliceAxis::X => {
                let i = pick(g.x.0, g.dx(), g.nx);
                ((0..g.ny).map(|j| g.centre(i, j).1).collect(), (0..g.ny).map(|j| rho(i, j)).collect())
            }
        })
    }

    pub fn field_table(&self, precision: Precision) -> Result<csv::Table> {
        match self.geometry {
            Geometry::Line(g) => csv::field_1d(&g.centres(), &self.state, self.fields(), precision),
            Geometry::Plane(g) => {
                let centres: Vec<(f64, f64)> = (0..g.ny)
                    .flat_map(|j| (0..g.nx).map(move |i| g.centre(i, j)))
                    .collect();
                csv::field_2d(&centres, &self.state, precision)
            }
        }
    }

    /// `(L1, L∞)` of the primary field against the exact cell averages.
    pub fn errors(&self) -> Result<(f64, f64)> {
        let exact = self.geometry.averages(self.problem, self.stats.time)?;
        let m = self.fields();
        let exact: Vec<f64> = exact.iter().step_by(m).copied().collect();
        metrics::error_norms(&self.primary(), &exact, &self.geometry.spacing())
    }
}

/// Solves `config` on the level with `nx` cells along x. A given `sink`
/// collects the mapping trace of a 1D run.
pub fn solve(config: &RunConfig, nx: usize, sink: Option<&mut TraceSink>) -> Result<Solution> {
    config.validate()?;
    let problem = config.problem;
    let geometry = Geometry::for_problem(problem, nx, config.cells_y(nx))?;
    let mut state = geometry.averages(problem, 0.0)?;
    let stats = match geometry {
        Geometry::Line(grid) => {
            let equation = if problem.is_euler() {
                Equation1D::Euler
            } else {
                Equation1D::Advection { speed: 1.0 }
            };
            let solver = Solver1D::new(grid, equation, config.scheme, config.boundary)?;
            match sink {
                Some(sink) => solver.run_traced(&mut state, config.t_final, config.cfl, config.trace_every, sink)?,
                None => solver.run(&mut state, config.t_final, config.cfl)?,
            }
        }
        Geometry::Plane(grid) => {
            if sink.is_some() {
                return Err(Error::invalid("mapping traces are recorded for 1D problems only"));
            }
            Solver2D::new(grid, config.scheme, config.boundary)?.run(&mut state, config.t_final, config.cfl)?
        }
    };
    Ok(Solution {
        problem,
        scheme: config.scheme.name(),
        geometry,
        state,
        stats,
    })
}

/// Errors of the primary field on every level of `config`.
pub fn error_report(config: &RunConfig) -> Result<ErrorReport> {
    let mut report = ErrorReport::new(config.scheme.name());
    for &n in &config.levels {
        let sol = solve(config, n, None)?;
        let (l1, linf) = sol.errors()?;
        report.push(sol.geometry.cells(), l1, linf)?;
    }
    Ok(report)
}

/// Knobs shared by config and preset runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub precision: Precision,
    /// Also write the mapping trace of 1D runs.
    pub trace: bool,
}

/// Runs `config` and writes its artifact into `out_dir`, returning the
/// paths written.
pub fn run_config(config: &RunConfig, out_dir: &Path, opts: RunOptions) -> Result<Vec<PathBuf>> {
    config.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();
    let finest = *config.levels.last().expect("validated levels");
    let want_trace = opts.trace || config.output == Output::Trace;
    if want_trace && config.problem.dimension() != 1 {
        return Err(Error::invalid("mapping traces are recorded for 1D problems only"));
    }
    match config.output {
        Output::Errors => {
            let report = error_report(config)?;
            let path = out_dir.join("errors.csv");
            csv::error_table(&[report], opts.precision).write(&path)?;
            written.push(path);
            if want_trace {
                written.extend(write_trace_run(config, finest, out_dir, opts)?);
            }
        }
        Output::Field | Output::Trace => {
            if want_trace {
                written.extend(write_trace_run(config, finest, out_dir, opts)?);
            } else {
                let sol = solve(config, finest, None)?;
                let path = out_dir.join("field.csv");
                sol.field_table(opts.precision)?.write(&path)?;
                written.push(path);
            }
        }
        Output::Slice { axis, coordinate } => {
            let sol = solve(config, finest, None)?;
            let (pos, rho) = sol.slice(axis, coordinate)?;
            let name = match axis {
                SliceAxis::Y => "x",
                SliceAxis::X => "y",
            };
            let path = out_dir.join("slice.csv");
            csv::slice(name, &pos, &rho, opts.precision).write(&path)?;
            written.push(path);
        }
    }
    Ok(written)
}

fn write_trace_run(config: &RunConfig, n: usize, out_dir: &Path, opts: RunOptions) -> Result<Vec<PathBuf>> {
    let mut sink = TraceSink::enabled();
    let sol = solve(config, n, Some(&mut sink))?;
    let trace = out_dir.join("trace.csv");
    sink.write_csv(&trace)?;
    let field = out_dir.join("field.csv");
    sol.field_table(opts.precision)?.write(&field)?;
    Ok(vec![trace, field])
}

/// File-name friendly form of a scheme name: `LOP-WENO-IM(2, 0.1)` becomes
/// `lop-weno-im-2-0-1`.
pub fn slug(name: &str) -> String {
    let mut s = String::with_capacity(name.len());
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            s.push(c.to_ascii_lowercase());
        } else if !s.ends_with('-') {
            s.push('-');
        }
    }
    s.trim_matches('-').to_string()
}
