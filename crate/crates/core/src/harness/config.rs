//! `key = value` run configuration.
//!
//! ```text
//! # long-run advection with the LOP-M scheme
//! problem = high-order-cp
//! scheme  = m
//! lop     = true
//! n       = 300
//! cfl     = h^0.6666666666666666
//! t_final = 15
//! output  = errors
//! ```
//!
//! Keys: `problem`, `scheme` (`ilw`, `js`, `m`, `pm`, `im`, `ppm5`,
//! `rm260`, `acm`), `lop`, `n` (one size or a comma list of levels), `nx`,
//! `ny`, `cfl` (a number or `h^e`), `t_final`, `boundary` (`periodic`,
//! `transmissive`), `output` (`errors`, `field`, `trace`, `slice`), `slice`
//! (`y=0.65` or `x=0.5`), `trace_every`, `epsilon`, `membership`
//! (`relaxed`, `strict`), and the mapping parameters `pm_k`, `im_k`, `im_a`,
//! `acm_a`, `acm_k`, `acm_delta`, `acm_cfs`, `acm_cfs_upper`. Omitted keys
//! take the defaults of the chosen problem.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lop::Membership;
use crate::mapping::{AcmParams, MappingKind};
use crate::problems::ProblemId;
use crate::scheme::{Scheme, Weighting};
use crate::solver1d::BoundaryKind;
use crate::time::CflRule;

/// Smallest grid size per axis.
pub const MIN_CELLS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceAxis {
    /// A line of constant `x`, varying `y`.
    X,
    /// A line of constant `y`, varying `x`.
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Output {
    /// L1/L∞ errors against the exact solution, one row per level.
    Errors,
    /// Every cell of the final state.
    Field,
    /// Real-time mapping trace of a 1D run plus the final field.
    Trace,
    /// Density along one grid line of a 2D run.
    Slice { axis: SliceAxis, coordinate: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub scheme: Scheme,
    /// Cells along x for each level; square grids in 2D unless `ny` is set.
    pub levels: Vec<usize>,
    pub ny: Option<usize>,
    pub cfl: CflRule,
    pub t_final: f64,
    pub boundary: BoundaryKind,
    pub output: Output,
    /// Record the trace every this many steps.
    pub trace_every: usize,
}

impl RunConfig {
    /// Defaults of `problem` with the given scheme.
    pub fn new(problem: ProblemId, scheme: Scheme) -> Self {
        RunConfig {
            problem,
            scheme,
            levels: vec![problem.default_cells()],
            ny: None,
            cfl: problem.default_cfl(),
            t_final: problem.default_t_final(),
            boundary: problem.boundary(),
            output: if problem.has_exact() {
                Output::Errors
            } else {
                Output::Field
            },
            trace_every: 1,
        }
    }

    pub fn with_levels(mut self, levels: &[usize]) -> Self {
        self.levels = levels.to_vec();
        self
    }

    pub fn with_t_final(mut self, t_final: f64) -> Self {
        self.t_final = t_final;
        self
    }

    pub fn with_cfl(mut self, cfl: CflRule) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn with_output(mut self, output: Output) -> Self {
        self.output = output;
        self
    }

    /// Cells along y of a 2D level.
    pub fn cells_y(&self, nx: usize) -> usize {
        self.ny.unwrap_or(nx)
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        if self.levels.is_empty() {
            return Err(Error::invalid("at least one grid size is required"));
        }
        for &n in self.levels.iter().chain(self.ny.iter()) {
            if n < MIN_CELLS {
                return Err(Error::invalid(format!("grid size {n} is below the minimum of {MIN_CELLS}")));
            }
        }
        if self.ny.is_some() && self.problem.dimension() == 1 {
            return Err(Error::invalid("ny given for a 1D problem"));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::invalid(format!("t_final must be non-negative, got {}", self.t_final)));
        }
        match self.cfl {
            CflRule::Fixed(c) if !(c > 0.0 && c <= 1.0) => {
                return Err(Error::invalid(format!("CFL number {c} outside (0, 1]")))
            }
            CflRule::MeshPower(e) if !(e > 0.0) || !e.is_finite() => {
                return Err(Error::invalid(format!("CFL exponent must be positive, got {e}")))
            }
            _ => {}
        }
        if self.trace_every == 0 {
            return Err(Error::invalid("trace_every must be at least 1"));
        }
        match self.output {
            Output::Errors if !self.problem.has_exact() => Err(Error::invalid(format!(
                "{} has no exact solution; use output = field",
                self.problem
            ))),
            Output::Trace if self.problem.dimension() != 1 => {
                Err(Error::invalid("mapping traces are recorded for 1D problems only"))
            }
            Output::Slice { axis, coordinate } => {
                let range = match (axis, self.problem.y_range()) {
                    (_, None) => return Err(Error::invalid("slices need a 2D problem")),
                    (SliceAxis::X, Some(_)) => self.problem.x_range(),
                    (SliceAxis::Y, Some(r)) => r,
                };
                if coordinate >= range.0 && coordinate <= range.1 {
                    Ok(())
                } else {
                    Err(Error::invalid(format!(
                        "slice coordinate {coordinate} outside [{}, {}]",
                        range.0, range.1
                    )))
                }
            }
            _ => Ok(()),
        }
    }
}

/// Parses a configuration; errors carry the 1-based offending line (0 for
/// problems with the configuration as a whole).
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected key = value, got '{body}'")))?;
        let key = key.trim().to_ascii_lowercase();
        if !KEYS.contains(&key.as_str()) {
            return Err(parse_err(line, format!("unknown key '{key}'")));
        }
        if let Some((first, ..)) = entries.iter().find(|(_, k, _)| *k == key) {
            return Err(parse_err(line, format!("duplicate key '{key}' (first on line {first})")));
        }
        entries.push((line, key, value.trim().to_string()));
    }
    let get = |key: &str| entries.iter().find(|(_, k, _)| k == key).map(|(l, _, v)| (*l, v.as_str()));
    let line_of = |keys: &[&str]| keys.iter().filter_map(|k| get(k).map(|(l, _)| l)).min().unwrap_or(0);

    let problem = match get("problem") {
        Some((l, v)) => ProblemId::from_str(v).map_err(|e| parse_err(l, e.to_string()))?,
        None => ProblemId::Sine1D,
    };

    let kind = parse_kind(&get)?;
    let lop = match get("lop") {
        Some((l, v)) => parse_bool(v).map_err(|m| parse_err(l, m))?,
        None => false,
    };
    let weighting = match (kind, lop) {
        (None, true) => {
            return Err(parse_err(line_of(&["lop"]), "lop = true needs a mapped scheme, not ilw"))
        }
        (None, false) => Weighting::Ideal,
        (Some(k), false) => Weighting::Mapped(k),
        (Some(k), true) => Weighting::Lop(k),
    };
    let mut scheme = Scheme::new(weighting);
    if let Some((l, v)) = get("epsilon") {
        scheme.epsilon = parse_num(v).map_err(|m| parse_err(l, m))?;
    }
    if let Some((l, v)) = get("membership") {
        scheme.membership = match v.to_ascii_lowercase().as_str() {
            "relaxed" => Membership::Relaxed,
            "strict" => Membership::Strict,
            _ => return Err(parse_err(l, format!("membership must be relaxed or strict, got '{v}'"))),
        };
    }
    let mut config = RunConfig::new(problem, scheme);

    match (get("n"), get("nx")) {
        (Some((l, _)), Some(_)) => return Err(parse_err(l, "give either n or nx, not both")),
        (Some((l, v)), None) => {
            config.levels = v
                .split(',')
                .map(|s| parse_count(s.trim()))
                .collect::<std::result::Result<_, _>>()
                .map_err(|m| parse_err(l, m))?;
        }
        (None, Some((l, v))) => config.levels = vec![parse_count(v).map_err(|m| parse_err(l, m))?],
        (None, None) => {}
    }
    if let Some((l, v)) = get("ny") {
        config.ny = Some(parse_count(v).map_err(|m| parse_err(l, m))?);
    }
    if let Some((l, v)) = get("cfl") {
        config.cfl = parse_cfl(v).map_err(|m| parse_err(l, m))?;
    }
    if let Some((l, v)) = get("t_final") {
        config.t_final = parse_num(v).map_err(|m| parse_err(l, m))?;
    }
    if let Some((l, v)) = get("boundary") {
        config.boundary = match v.to_ascii_lowercase().as_str() {
            "periodic" => BoundaryKind::Periodic,
            "transmissive" => BoundaryKind::Transmissive,
            _ => return Err(parse_err(l, format!("boundary must be periodic or transmissive, got '{v}'"))),
        };
    }
    if let Some((l, v)) = get("trace_every") {
        config.trace_every = parse_count(v).map_err(|m| parse_err(l, m))?;
    }
    let slice = match get("slice") {
        Some((l, v)) => Some((l, parse_slice(v).map_err(|m| parse_err(l, m))?)),
        None => None,
    };
    if let Some((l, v)) = get("output") {
        config.output = match v.to_ascii_lowercase().as_str() {
            "errors" => Output::Errors,
            "field" => Output::Field,
            "trace" => Output::Trace,
            "slice" => match slice {
                Some((_, (axis, coordinate))) => Output::Slice { axis, coordinate },
                None => return Err(parse_err(l, "output = slice needs a slice = y=<value> line")),
            },
            _ => return Err(parse_err(l, format!("unknown output '{v}'"))),
        };
    }
    if let (Some((l, _)), false) = (slice, matches!(config.output, Output::Slice { .. })) {
        return Err(parse_err(l, "slice given without output = slice"));
    }

    config.validate().map_err(|e| {
        let line = match e {
            Error::InvalidInput(ref m) if m.contains("grid size") || m.contains("ny") => line_of(&["n", "nx", "ny"]),
            Error::InvalidInput(ref m) if m.contains("t_final") => line_of(&["t_final"]),
            Error::InvalidInput(ref m) if m.contains("CFL") => line_of(&["cfl"]),
            Error::InvalidInput(ref m) if m.contains("slice") => line_of(&["slice", "output"]),
            Error::InvalidInput(ref m) if m.contains("exact") || m.contains("trace") => line_of(&["output"]),
            _ => line_of(&["scheme", "epsilon", "pm_k", "im_k", "im_a", "acm_a", "acm_k", "acm_delta"]),
        };
        parse_err(line, strip_prefix(&e))
    })?;
    Ok(config)
}

/// Canonical text of a configuration; `parse_config(render_config(c)) == c`.
pub fn render_config(config: &RunConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "problem = {}", config.problem);
    match config.scheme.weighting {
        Weighting::Ideal => {
            let _ = writeln!(s, "scheme = ilw");
        }
        Weighting::Mapped(k) | Weighting::Lop(k) => {
            let _ = writeln!(s, "scheme = {}", kind_key(&k));
            match k {
                MappingKind::Pm { k } => {
                    let _ = writeln!(s, "pm_k = {k}");
                }
                MappingKind::Im { k, a } => {
                    let _ = writeln!(s, "im_k = {k}\nim_a = {a:?}");
                }
                MappingKind::Acm(p) => {
                    let _ = writeln!(
                        s,
                        "acm_a = {:?}\nacm_k = {}\nacm_delta = {:?}\nacm_cfs = {:?}\nacm_cfs_upper = {:?}",
                        p.a, p.k, p.delta, p.cfs_factor, p.cfs_upper_factor
                    );
                }
                _ => {}
            }
            let _ = writeln!(s, "lop = {}", config.scheme.is_lop());
        }
    }
    let _ = writeln!(s, "epsilon = {:?}", config.scheme.epsilon);
    let membership = match config.scheme.membership {
        Membership::Relaxed => "relaxed",
        Membership::Strict => "strict",
    };
    let _ = writeln!(s, "membership = {membership}");
    let levels: Vec<String> = config.levels.iter().map(|n| n.to_string()).collect();
    let _ = writeln!(s, "n = {}", levels.join(","));
    if let Some(ny) = config.ny {
        let _ = writeln!(s, "ny = {ny}");
    }
    let _ = match config.cfl {
        CflRule::Fixed(c) => writeln!(s, "cfl = {c:?}"),
        CflRule::MeshPower(e) => writeln!(s, "cfl = h^{e:?}"),
    };
    let _ = writeln!(s, "t_final = {:?}", config.t_final);
    let boundary = match config.boundary {
        BoundaryKind::Periodic => "periodic",
        BoundaryKind::Transmissive => "transmissive",
    };
    let _ = writeln!(s, "boundary = {boundary}");
    let _ = match config.output {
        Output::Errors => writeln!(s, "output = errors"),
        Output::Field => writeln!(s, "output = field"),
        Output::Trace => writeln!(s, "output = trace"),
        Output::Slice { axis, coordinate } => {
            let axis = match axis {
                SliceAxis::X => 'x',
                SliceAxis::Y => 'y',
            };
            writeln!(s, "output = slice\nslice = {axis}={coordinate:?}")
        }
    };
    let _ = writeln!(s, "trace_every = {}", config.trace_every);
    s
}

const KEYS: &[&str] = &[
    "problem",
    "scheme",
    "lop",
    "n",
    "nx",
    "ny",
    "cfl",
    "t_final",
    "boundary",
    "output",
    "slice",
    "trace_every",
    "epsilon",
    "membership",
    "pm_k",
    "im_k",
    "im_a",
    "acm_a",
    "acm_k",
    "acm_delta",
    "acm_cfs",
    "acm_cfs_upper",
];

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn strip_prefix(e: &Error) -> String {
    match e {
        Error::InvalidInput(m) => m.clone(),
        other => other.to_string(),
    }
}

fn kind_key(k: &MappingKind) -> &'static str {
    match k {
        MappingKind::Identity => "js",
        MappingKind::M => "m",
        MappingKind::Pm { .. } => "pm",
        MappingKind::Im { .. } => "im",
        MappingKind::Ppm5 => "ppm5",
        MappingKind::Rm260 => "rm260",
        MappingKind::Acm(_) => "acm",
    }
}

type Lookup<'a> = dyn Fn(&str) -> Option<(usize, &'a str)> + 'a;

/// Mapping of the `scheme` key; `None` for ILW.
fn parse_kind<'a>(get: &Lookup<'a>) -> Result<Option<MappingKind>> {
    let (line, name) = get("scheme").unwrap_or((0, "js"));
    let param = |key: &str, default: f64| -> Result<f64> {
        match get(key) {
            Some((l, v)) => parse_num(v).map_err(|m| parse_err(l, m)),
            None => Ok(default),
        }
    };
    let int = |key: &str, default: u32| -> Result<u32> {
        match get(key) {
            Some((l, v)) => v
                .parse::<u32>()
                .map_err(|_| parse_err(l, format!("{key} must be a non-negative integer, got '{v}'"))),
            None => Ok(default),
        }
    };
    let name = name.to_ascii_lowercase();
    let owned: &[&str] = match name.as_str() {
        "pm" | "pm6" => &["pm_k"],
        "im" => &["im_k", "im_a"],
        "acm" => &["acm_a", "acm_k", "acm_delta", "acm_cfs", "acm_cfs_upper"],
        _ => &[],
    };
    for key in ["pm_k", "im_k", "im_a", "acm_a", "acm_k", "acm_delta", "acm_cfs", "acm_cfs_upper"] {
        if let (Some((l, _)), false) = (get(key), owned.contains(&key)) {
            return Err(parse_err(l, format!("{key} does not apply to scheme '{name}'")));
        }
    }
    let kind = match name.as_str() {
        "ilw" => return Ok(None),
        "js" => MappingKind::Identity,
        "m" => MappingKind::M,
        "pm" | "pm6" => MappingKind::Pm { k: int("pm_k", 6)? },
        "im" => MappingKind::Im {
            k: int("im_k", 2)?,
            a: param("im_a", 0.1)?,
        },
        "ppm5" => MappingKind::Ppm5,
        "rm260" | "rm" => MappingKind::Rm260,
        "acm" => {
            let d = AcmParams::default();
            let k = int("acm_k", d.k as u32)?;
            MappingKind::Acm(AcmParams {
                a: param("acm_a", d.a)?,
                k: i32::try_from(k).map_err(|_| parse_err(line_of(get, "acm_k"), "acm_k too large"))?,
                delta: param("acm_delta", d.delta)?,
                cfs_factor: param("acm_cfs", d.cfs_factor)?,
                cfs_upper_factor: param("acm_cfs_upper", d.cfs_upper_factor)?,
            })
        }
        _ => return Err(parse_err(line, format!("unknown scheme '{name}'"))),
    };
    Ok(Some(kind))
}

fn line_of(get: &Lookup<'_>, key: &str) -> usize {
    get(key).map(|(l, _)| l).unwrap_or(0)
}

fn parse_bool(v: &str) -> std::result::Result<bool, String> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, got '{v}'")),
    }
}

fn parse_num(v: &str) -> std::result::Result<f64, String> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number, got '{v}'")),
    }
}

fn parse_count(v: &str) -> std::result::Result<usize, String> {
    v.parse::<usize>()
        .map_err(|_| format!("expected a cell count, got '{v}'"))
}

fn parse_cfl(v: &str) -> std::result::Result<CflRule, String> {
    match v.strip_prefix("h^") {
        Some(e) => Ok(CflRule::MeshPower(parse_num(e.trim())?)),
        None => Ok(CflRule::Fixed(parse_num(v)?)),
    }
}

fn parse_slice(v: &str) -> std::result::Result<(SliceAxis, f64), String> {
    let (axis, value) = v
        .split_once('=')
        .ok_or_else(|| format!("slice must look like y=0.65, got '{v}'"))?;
    let axis = match axis.trim().to_ascii_lowercase().as_str() {
        "x" => SliceAxis::X,
        "y" => SliceAxis::Y,
        other => return Err(format!("slice axis must be x or y, got '{other}'")),
    };
    Ok((axis, parse_num(value.trim())?))
}
