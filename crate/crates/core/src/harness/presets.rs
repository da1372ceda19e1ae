//! Named experiments. Each full-size preset has a scaled-down `-desk`
//! sibling (or is already desk-sized) so every study runs without further
//! configuration.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harness::config::{Output, RunConfig, SliceAxis};
use crate::harness::csv::{self, Precision, SummaryRow};
use crate::harness::runner::{self, RunOptions, Solution};
use crate::lop::TraceSink;
use crate::mapping::MappingKind;
use crate::metrics::{self, ErrorReport};
use crate::problems::ProblemId;
use crate::scheme::Scheme;
use crate::time::CflRule;

/// A fine-grid solution other runs are measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub scheme: Scheme,
    pub cells: usize,
    pub cfl: CflRule,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Study {
    /// Error table over grid levels; increased errors when ILW is among
    /// the schemes.
    Errors { levels: Vec<usize> },
    /// Final profiles with a summary against the exact solution or a
    /// reference, and the overshoot beyond `bounds` when given.
    Profiles {
        cells: usize,
        reference: Option<Reference>,
        bounds: Option<(f64, f64)>,
    },
    /// Density along grid lines of a 2D run.
    Slices { cells: usize, lines: Vec<(SliceAxis, f64)> },
    /// Real-time mapping traces of a 1D run.
    Traces { cells: usize, every: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub about: &'static str,
    pub problem: ProblemId,
    pub schemes: Vec<Scheme>,
    pub cfl: CflRule,
    pub t_final: f64,
    pub study: Study,
}

/// ILW, JS, and every mapped family with and without LOP.
fn all_schemes() -> Vec<Scheme> {
    Scheme::catalogue()
}

/// JS and every mapped family with and without LOP.
fn shock_schemes() -> Vec<Scheme> {
    Scheme::catalogue().into_iter().skip(1).collect()
}

fn mapped_pairs() -> Vec<Scheme> {
    Scheme::catalogue().into_iter().skip(2).collect()
}

const SV_LINES: [(SliceAxis, f64); 4] = [
    (SliceAxis::Y, 0.65),
    (SliceAxis::Y, 0.75),
    (SliceAxis::Y, 0.25),
    (SliceAxis::Y, 0.3),
];

/// Every preset, in the order `weno list` prints them.
pub fn registry() -> Vec<Preset> {
    let h23 = CflRule::MeshPower(2.0 / 3.0);
    let js = Scheme::js();
    let mut v = vec![
        Preset {
            name: "longrun-n300-t15",
            about: "long-run advection of a profile with high-order critical points, N=300, t=15",
            problem: ProblemId::HighOrderCP,
            schemes: all_schemes(),
            cfl: h23,
            t_final: 15.0,
            study: Study::Errors { levels: vec![300] },
        },
        Preset {
            name: "longrun-n300-t600",
            about: "as longrun-n300-t15 at t=600",
            problem: ProblemId::HighOrderCP,
            schemes: all_schemes(),
            cfl: h23,
            t_final: 600.0,
            study: Study::Errors { levels: vec![300] },
        },
        Preset {
            name: "step-t2000",
            about: "step advection errors and orders at t=2000, N=200/400/800",
            problem: ProblemId::Step,
            schemes: all_schemes(),
            cfl: CflRule::Fixed(0.1),
            t_final: 2000.0,
            study: Study::Errors {
                levels: vec![200, 400, 800],
            },
        },
        Preset {
            name: "step-t2000-desk",
            about: "step advection errors at t=20, N=200/400",
            problem: ProblemId::Step,
            schemes: all_schemes(),
            cfl: CflRule::Fixed(0.1),
            t_final: 20.0,
            study: Study::Errors { levels: vec![200, 400] },
        },
        Preset {
            name: "step-n1600-t200",
            about: "step profiles at t=200, N=1600, with overshoot beyond [0, 1]",
            problem: ProblemId::Step,
            schemes: shock_schemes(),
            cfl: CflRule::Fixed(0.1),
            t_final: 200.0,
            study: Study::Profiles {
                cells: 1600,
                reference: None,
                bounds: Some((0.0, 1.0)),
            },
        },
        Preset {
            name: "step",
            about: "step profiles at t=50, N=400, with overshoot beyond [0, 1]",
            problem: ProblemId::Step,
            schemes: shock_schemes(),
            cfl: CflRule::Fixed(0.1),
            t_final: 50.0,
            study: Study::Profiles {
                cells: 400,
                reference: None,
                bounds: Some((0.0, 1.0)),
            },
        },
    ];
    for (name, problem) in [
        ("accuracy2d-1", ProblemId::DensityWave1),
        ("accuracy2d-2", ProblemId::DensityWave2),
    ] {
        v.push(Preset {
            name,
            about: if problem == ProblemId::DensityWave1 {
                "2D density wave errors and orders, 40..100 squared, t=2"
            } else {
                "2D density wave with critical points, 40..100 squared, t=2"
            },
            problem,
            schemes: all_schemes(),
            cfl: h23,
            t_final: 2.0,
            study: Study::Errors {
                levels: vec![40, 60, 80, 100],
            },
        });
    }
    v.extend([
        Preset {
            name: "accuracy2d-1-desk",
            about: "accuracy2d-1 on 40 and 60 squared",
            problem: ProblemId::DensityWave1,
            schemes: all_schemes(),
            cfl: h23,
            t_final: 2.0,
            study: Study::Errors { levels: vec![40, 60] },
        },
        Preset {
            name: "accuracy2d-2-desk",
            about: "accuracy2d-2 on 40 and 60 squared",
            problem: ProblemId::DensityWave2,
            schemes: all_schemes(),
            cfl: h23,
            t_final: 2.0,
            study: Study::Errors { levels: vec![40, 60] },
        },
        Preset {
            name: "shu-osher",
            about: "shock/entropy-wave interaction, N=300, t=1.8, against a N=10000 WENO-JS reference",
            problem: ProblemId::ShuOsher,
            schemes: shock_schemes(),
            cfl: CflRule::Fixed(0.1),
            t_final: 1.8,
            study: Study::Profiles {
                cells: 300,
                reference: Some(Reference {
                    scheme: js,
                    cells: 10_000,
                    cfl: CflRule::Fixed(0.5),
                }),
                bounds: None,
            },
        },
        Preset {
            name: "shu-osher-desk",
            about: "shu-osher with N=200 against a N=2000 reference",
            problem: ProblemId::ShuOsher,
            schemes: shock_schemes(),
            cfl: CflRule::Fixed(0.1),
            t_final: 1.8,
            study: Study::Profiles {
                cells: 200,
                reference: Some(Reference {
                    scheme: js,
                    cells: 2000,
                    cfl: CflRule::Fixed(0.5),
                }),
                bounds: None,
            },
        },
        Preset {
            name: "titarev-toro",
            about: "high-frequency shock/entropy-wave interaction, N=1500, t=5",
            problem: ProblemId::TitarevToro,
            schemes: shock_schemes(),
            cfl: ProblemId::TitarevToro.default_cfl(),
            t_final: 5.0,
            study: Study::Profiles {
                cells: 1500,
                reference: Some(Reference {
                    scheme: js,
                    cells: 10_000,
                    cfl: CflRule::Fixed(0.5),
                }),
                bounds: None,
            },
        },
        Preset {
            name: "titarev-toro-desk",
            about: "titarev-toro with N=500 against a N=3000 reference",
            problem: ProblemId::TitarevToro,
            schemes: shock_schemes(),
            cfl: ProblemId::TitarevToro.default_cfl(),
            t_final: 5.0,
            study: Study::Profiles {
                cells: 500,
                reference: Some(Reference {
                    scheme: js,
                    cells: 3000,
                    cfl: CflRule::Fixed(0.5),
                }),
                bounds: None,
            },
        },
        Preset {
            name: "shock-vortex",
            about: "shock-vortex interaction on 800 squared, t=0.35, density slices",
            problem: ProblemId::ShockVortex,
            schemes: shock_schemes(),
            cfl: ProblemId::ShockVortex.default_cfl(),
            t_final: 0.35,
            study: Study::Slices {
                cells: 800,
                lines: SV_LINES.to_vec(),
            },
        },
        Preset {
            name: "shock-vortex-desk",
            about: "shock-vortex interaction on 200 squared, t=0.35, density slices",
            problem: ProblemId::ShockVortex,
            schemes: shock_schemes(),
            cfl: ProblemId::ShockVortex.default_cfl(),
            t_final: 0.35,
            study: Study::Slices {
                cells: 200,
                lines: SV_LINES.to_vec(),
            },
        },
        Preset {
            name: "slp-trace",
            about: "mapping traces on the composite linear problem, N=800, t=2",
            problem: ProblemId::Slp,
            schemes: mapped_pairs(),
            cfl: CflRule::Fixed(0.1),
            t_final: 2.0,
            study: Study::Traces { cells: 800, every: 400 },
        },
        Preset {
            name: "slp-trace-desk",
            about: "slp-trace with N=200, t=0.5",
            problem: ProblemId::Slp,
            schemes: vec![Scheme::mapped(MappingKind::M), Scheme::lop(MappingKind::M)],
            cfl: CflRule::Fixed(0.1),
            t_final: 0.5,
            study: Study::Traces { cells: 200, every: 100 },
        },
        Preset {
            name: "sine-trace",
            about: "mapping traces on sine advection, N=200, t=2",
            problem: ProblemId::Sine1D,
            schemes: mapped_pairs(),
            cfl: CflRule::Fixed(0.1),
            t_final: 2.0,
            study: Study::Traces { cells: 200, every: 100 },
        },
        Preset {
            name: "sine-trace-desk",
            about: "sine-trace with N=40, t=0.5",
            problem: ProblemId::Sine1D,
            schemes: vec![Scheme::mapped(MappingKind::M), Scheme::lop(MappingKind::M)],
            cfl: CflRule::Fixed(0.1),
            t_final: 0.5,
            study: Study::Traces { cells: 40, every: 10 },
        },
    ]);
    v
}

pub fn find(name: &str) -> Result<Preset> {
    registry().into_iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<&str> = registry().iter().map(|p| p.name).collect();
        Error::invalid(format!("unknown preset '{name}'; available: {}", names.join(", ")))
    })
}

impl Preset {
    /// Run configuration of one scheme.
    pub fn config(&self, scheme: Scheme) -> RunConfig {
        let levels = match &self.study {
            Study::Errors { levels } => levels.clone(),
            Study::Profiles { cells, .. } | Study::Slices { cells, .. } | Study::Traces { cells, .. } => {
                vec![*cells]
            }
        };
        let output = match &self.study {
            Study::Errors { .. } => Output::Errors,
            Study::Traces { .. } => Output::Trace,
            _ => Output::Field,
        };
        let mut c = RunConfig::new(self.problem, scheme)
            .with_levels(&levels)
            .with_cfl(self.cfl)
            .with_t_final(self.t_final)
            .with_output(output);
        if let Study::Traces { every, .. } = self.study {
            c.trace_every = every;
        }
        c
    }

    /// Runs every scheme and writes the artifacts into `out_dir`. Schemes
    /// run concurrently on the current rayon pool; outputs do not depend on
    /// its size.
    pub fn run(&self, out_dir: &Path, opts: RunOptions) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        match &self.study {
            Study::Errors { .. } => self.run_errors(out_dir, opts),
            Study::Profiles {
                cells,
                reference,
                bounds,
            } => self.run_profiles(out_dir, opts, *cells, reference.as_ref(), *bounds),
            Study::Slices { cells, lines } => self.run_slices(out_dir, opts, *cells, lines),
            Study::Traces { cells, .. } => self.run_traces(out_dir, opts, *cells),
        }
    }

    fn for_each_scheme<T: Send>(&self, f: impl Fn(Scheme) -> Result<T> + Sync) -> Result<Vec<T>> {
        if rayon::current_num_threads() > 1 {
            self.schemes.par_iter().map(|s| f(*s)).collect()
        } else {
            self.schemes.iter().map(|s| f(*s)).collect()
        }
    }

    fn run_errors(&self, out_dir: &Path, opts: RunOptions) -> Result<Vec<PathBuf>> {
        let mut reports = self.for_each_scheme(|s| runner::error_report(&self.config(s)))?;
        if let Some(base) = self.schemes.iter().position(|s| *s == Scheme::ilw()) {
            let baseline = reports[base].clone();
            reports = reports
                .into_iter()
                .map(|r| r.with_baseline(&baseline))
                .collect::<Result<Vec<ErrorReport>>>()?;
        }
        let path = out_dir.join("errors.csv");
        csv::error_table(&reports, opts.precision).write(&path)?;
        Ok(vec![path])
    }

    fn run_profiles(
        &self,
        out_dir: &Path,
        opts: RunOptions,
        cells: usize,
        reference: Option<&Reference>,
        bounds: Option<(f64, f64)>,
    ) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        let reference = match reference {
            Some(r) => {
                let (path, values) = self.reference(r, out_dir)?;
                written.push(path);
                Some(metrics::restrict_uniform(&values, cells)?)
            }
            None => None,
        };
        let solutions = self.for_each_scheme(|s| runner::solve(&self.config(s), cells, None))?;
        let mut rows = Vec::new();
        for sol in &solutions {
            let path = out_dir.join(format!("profile_{}.csv", runner::slug(&sol.scheme)));
            sol.field_table(opts.precision)?.write(&path)?;
            written.push(path);
            rows.push(self.summary_row(sol, reference.as_deref(), bounds)?);
        }
        let path = out_dir.join("summary.csv");
        csv::summary(&rows, opts.precision).write(&path)?;
        written.push(path);
        Ok(written)
    }

    fn summary_row(&self, sol: &Solution, reference: Option<&[f64]>, bounds: Option<(f64, f64)>) -> Result<SummaryRow> {
        let primary = sol.primary();
        let (l1, linf) = match reference {
            Some(r) => {
                let (a, b) = metrics::error_norms(&primary, r, &sol.geometry.spacing())?;
                (Some(a), Some(b))
            }
            None if self.problem.has_exact() => {
                let (a, b) = sol.errors()?;
                (Some(a), Some(b))
            }
            None => (None, None),
        };
        Ok(SummaryRow {
            scheme: sol.scheme.clone(),
            case: format!("N={}", sol.geometry.label()),
            l1,
            linf,
            overshoot: bounds.map(|(lo, hi)| metrics::overshoot_metric(&primary, lo, hi)),
            oscillation: None,
        })
    }

    /// Primary field of the reference solution, read from the cache in
    /// `out_dir` when present.
    pub fn reference(&self, r: &Reference, out_dir: &Path) -> Result<(PathBuf, Vec<f64>)> {
        let path = out_dir.join(reference_file_name(self.problem, r.cells, self.t_final));
        if path.exists() {
            let (header, columns) = csv::read_columns(&path)?;
            if header.len() >= 2 && columns[1].len() == r.cells {
                return Ok((path, columns[1].clone()));
            }
        }
        let config = RunConfig::new(self.problem, r.scheme)
            .with_levels(&[r.cells])
            .with_cfl(r.cfl)
            .with_t_final(self.t_final)
            .with_output(Output::Field);
        let sol = runner::solve(&config, r.cells, None)?;
        sol.field_table(Precision::Full)?.write(&path)?;
        Ok((path, sol.primary()))
    }

    fn run_slices(
        &self,
        out_dir: &Path,
        opts: RunOptions,
        cells: usize,
        lines: &[(SliceAxis, f64)],
    ) -> Result<Vec<PathBuf>> {
        let solutions = self.for_each_scheme(|s| runner::solve(&self.config(s), cells, None))?;
        let mut written = Vec::new();
        let mut rows = Vec::new();
        for sol in &solutions {
            for &(axis, at) in lines {
                let (pos, rho) = sol.slice(axis, at)?;
                let (along, across) = match axis {
                    SliceAxis::Y => ("x", "y"),
                    SliceAxis::X => ("y", "x"),
                };
                let path = out_dir.join(format!("slice_{}_{across}{at}.csv", runner::slug(&sol.scheme)));
                csv::slice(along, &pos, &rho, opts.precision).write(&path)?;
                written.push(path);
                rows.push(SummaryRow {
                    scheme: sol.scheme.clone(),
                    case: format!("{across}={at}"),
                    l1: None,
                    linf: None,
                    overshoot: None,
                    oscillation: Some(post_shock_oscillation(&pos, &rho)),
                });
            }
        }
        let path = out_dir.join("summary.csv");
        csv::summary(&rows, opts.precision).write(&path)?;
        written.push(path);
        Ok(written)
    }

    fn run_traces(&self, out_dir: &Path, opts: RunOptions, cells: usize) -> Result<Vec<PathBuf>> {
        let runs = self.for_each_scheme(|s| {
            let mut sink = TraceSink::enabled();
            let sol = runner::solve(&self.config(s), cells, Some(&mut sink))?;
            Ok((sol, sink))
        })?;
        let mut written = Vec::new();
        for (sol, sink) in &runs {
            let slug = runner::slug(&sol.scheme);
            let trace = out_dir.join(format!("trace_{slug}.csv"));
            sink.write_csv(&trace)?;
            let profile = out_dir.join(format!("profile_{slug}.csv"));
            sol.field_table(opts.precision)?.write(&profile)?;
            written.extend([trace, profile]);
        }
        Ok(written)
    }
}

/// Cache file of a reference solution.
pub fn reference_file_name(problem: ProblemId, cells: usize, t_final: f64) -> String {
    format!("reference_{}_n{cells}_t{t_final}.csv", problem.name())
}

/// Half width of the moving average used as the smooth baseline of a
/// slice.
pub const OSCILLATION_HALF_WIDTH: usize = 3;

/// Length of the post-shock window scored by [`post_shock_oscillation`].
pub const POST_SHOCK_WINDOW: f64 = 0.15;

/// Oscillation amplitude of a shock-vortex density slice just behind the
/// shock. The shock is the first cell whose density exceeds the midpoint
/// of the slice extremes; the score covers [`POST_SHOCK_WINDOW`] beyond
/// it, so the vortex and any second shock stay out.
pub fn post_shock_oscillation(positions: &[f64], density: &[f64]) -> f64 {
    let lo = density.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = density.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    let shock = density.iter().position(|&r| r > mid).unwrap_or(0);
    // skip the cells inside the captured shock itself
    let start = (shock + 4).min(positions.len());
    let end = positions[start..]
        .iter()
        .position(|&x| x > positions[start.min(positions.len() - 1)] + POST_SHOCK_WINDOW)
        .map_or(positions.len(), |k| start + k);
    metrics::oscillation_amplitude(&density[start..end], OSCILLATION_HALF_WIDTH)
}
