use clap::{Args, Subcommand};
use hk_core::riemann::{
    berger_lookup, bianchi_residuals, christoffel, curvature, geodesic, holonomy_sample, is_einstein,
    is_ricci_flat, kahler_residuals, parallel_transport, rotation_angle, BergerFlags, LoopPath, MetricChart,
    DEFAULT_STEP, DEFAULT_STEPS_PER_UNIT,
};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::formats::{f64_array, f64_matrix, f64_str, load_json, metric_from_json, parse_f64_list, parse_f64_rows, polyline_from_json};
use crate::report::Outcome;
use crate::Globals;

/// Tolerance for curved catalog metrics when `--tol` is absent.
pub const DEFAULT_CURVED_TOL: f64 = 1e-4;

#[derive(Debug, Args)]
pub struct ChartArgs {
    /// Metric specification JSON, inline or as a file.
    #[arg(long)]
    pub metric: String,
    /// Finite-difference step.
    #[arg(long, default_value_t = DEFAULT_STEP)]
    pub step: f64,
}

impl ChartArgs {
    fn load(&self) -> CliResult<MetricChart> {
        Ok(MetricChart::with_step(metric_from_json(&load_json(&self.metric)?)?, self.step)?)
    }
}

#[derive(Debug, Subcommand)]
pub enum RiemannCmd {
    /// Christoffel symbols `Γ^k_{ij}` as `[k][i][j]`.
    Christoffel {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Ricci tensor, coordinate sectional curvatures and curvature identities.
    Curvature {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Fit `Ric = k·g` over points separated by `;`.
    Einstein {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// RK4 geodesic.
    Geodesic {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, allow_hyphen_values = true)]
        velocity: String,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        /// Defaults to 4096 per unit time.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Parallel transport along a polyline.
    Transport {
        #[command(flatten)]
        chart: ChartArgs,
        /// `{"vertices": [[…], …]}` inline or as a file.
        #[arg(long)]
        path: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        /// RK4 steps per segment.
        #[arg(long, default_value_t = DEFAULT_STEPS_PER_UNIT)]
        steps: usize,
    },
    /// Holonomy matrices of closed polylines.
    Holonomy {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long = "loop", required = true)]
        loops: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_STEPS_PER_UNIT)]
        steps: usize,
    },
    /// Residuals of `dω = 0` and `∇J = 0` for the catalog complex structure.
    Kahler {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Candidate restricted holonomy groups in dimension `n`.
    Berger {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        kahler: bool,
        #[arg(long)]
        ricci_flat: bool,
        /// The metric is known not to be locally symmetric.
        #[arg(long)]
        nonsymmetric: bool,
    },
}

fn tensor3(t: &[Vec<Vec<f64>>]) -> Value {
    Value::Array(t.iter().map(|m| f64_matrix(m)).collect())
}

pub fn run(cmd: &RiemannCmd, g: &Globals) -> CliResult<Outcome> {
    let tol = g.tol.unwrap_or(DEFAULT_CURVED_TOL);
    match cmd {
        RiemannCmd::Christoffel { chart, at } => {
            let c = chart.load()?;
            Ok(Outcome::ok(json!({ "christoffel": tensor3(&christoffel(&c, &parse_f64_list(at)?)?) })))
        }
        RiemannCmd::Curvature { chart, at } => {
            let c = chart.load()?;
            let cp = curvature(&c, &parse_f64_list(at)?)?;
            let n = cp.dim();
            let sectional: Vec<Value> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| json!({ "plane": [i.to_string(), j.to_string()], "value": f64_str(cp.sectional(i, j)) }))
                .collect();
            let b = bianchi_residuals(&cp);
            Ok(Outcome::ok(json!({
                "metric": f64_matrix(&cp.metric),
                "ricci": f64_matrix(&cp.ricci),
                "sectional": sectional,
            }))
            .with_residuals(json!({
                "first_bianchi": f64_str(b.first),
                "first_bianchi_mixed": f64_str(b.first_mixed),
                "pair_symmetry": f64_str(b.pair_symmetry),
                "antisymmetry": f64_str(b.antisymmetry),
            })))
        }
        RiemannCmd::Einstein { chart, at } => {
            let c = chart.load()?;
            let points = parse_f64_rows(at)?;
            let fit = is_einstein(&c, &points, tol)?;
            let flat = is_ricci_flat(&c, &points, tol)?;
            Ok(Outcome::ok(json!({
                "einstein": fit.einstein,
                "constant": f64_str(fit.constant),
                "ricci_flat": flat,
                "tolerance": f64_str(tol),
            }))
            .with_residuals(json!({ "einstein": f64_str(fit.residual) })))
        }
        RiemannCmd::Geodesic { chart, at, velocity, time, steps } => {
            let c = chart.load()?;
            let steps = steps.unwrap_or_else(|| ((time.abs() * DEFAULT_STEPS_PER_UNIT as f64).ceil() as usize).max(1));
            let geo = geodesic(&c, &parse_f64_list(at)?, &parse_f64_list(velocity)?, *time, steps)?;
            let last = geo.points.len() - 1;
            Ok(Outcome::ok(json!({
                "end": f64_array(&geo.points[last]),
                "velocity": f64_array(&geo.velocities[last]),
                "steps_taken": last.to_string(),
                "exited": geo.exited,
            }))
            .with_residuals(json!({ "speed_drift": f64_str(geo.speed_drift) })))
        }
        RiemannCmd::Transport { chart, path, vector, steps } => {
            let c = chart.load()?;
            let path = polyline_from_json(&load_json(path)?)?;
            let v = parallel_transport(&c, &path, &parse_f64_list(vector)?, *steps)?;
            Ok(Outcome::ok(json!({ "vector": f64_array(&v) })))
        }
        RiemannCmd::Holonomy { chart, loops, steps } => {
            let c = chart.load()?;
            let loops = loops
                .iter()
                .map(|s| Ok(LoopPath::new(&c, polyline_from_json(&load_json(s)?)?)?))
                .collect::<CliResult<Vec<_>>>()?;
            let base = loops[0].basepoint().to_vec();
            let samples = holonomy_sample(&c, &base, &loops, *steps)?;
            let g0 = c.metric_at(&base)?;
            let mut worst = 0.0f64;
            let mut out = Vec::with_capacity(samples.len());
            for s in &samples {
                worst = worst.max(s.isometry_residual);
                let mut entry = json!({ "matrix": f64_matrix(&s.matrix) });
                if c.dim() == 2 {
                    entry["angle"] = f64_str(rotation_angle(&g0, &s.matrix)?);
                }
                out.push(entry);
            }
            Ok(Outcome::ok(json!({ "basepoint": f64_array(&base), "holonomy": out }))
                .with_residuals(json!({ "isometry": f64_str(worst) })))
        }
        RiemannCmd::Kahler { chart, at } => {
            let c = chart.load()?;
            let j = c
                .metric()
                .complex_structure()
                .ok_or_else(|| CliError::input("this metric has no catalog complex structure"))?;
            let r = kahler_residuals(&c, &j, &parse_f64_rows(at)?)?;
            Ok(Outcome::ok(json!({ "kahler": r.d_omega <= tol && r.nabla_j <= tol, "tolerance": f64_str(tol) }))
                .with_residuals(json!({ "d_omega": f64_str(r.d_omega), "nabla_j": f64_str(r.nabla_j) })))
        }
        RiemannCmd::Berger { dim, kahler, ricci_flat, nonsymmetric } => {
            let flags = BergerFlags { kahler: *kahler, ricci_flat: *ricci_flat, symmetric_excluded: *nonsymmetric };
            let lookup = berger_lookup(*dim, flags)?;
            let candidates: Vec<Value> = lookup
                .candidates
                .iter()
                .map(|c| json!({ "group": c.label, "kahler": c.kahler, "ricci_flat": c.ricci_flat, "note": c.note }))
                .collect();
            Ok(Outcome::ok(json!({ "candidates": candidates, "caveat": lookup.caveat })))
        }
    }
}
