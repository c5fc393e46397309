use clap::{Args, Subcommand};
use hk_core::lattice::IntegralLattice;
use hk_core::period::check::verify_chain;
use hk_core::period::{
    conic_through, hodge_structure_from_period, in_period_domain, period_residual, sample_period_point,
    twistor_conic, twistor_path_search, PathSearchOutcome, PeriodPoint, PositiveThreePlane, TwistorChain,
    DEFAULT_MAX_STEPS,
};
use hk_core::exact::Rational;
use num_traits::One;
use serde_json::{json, Value};

use super::lattice::LatticeArg;
use crate::error::{CliError, CliResult};
use crate::formats::{
    load_json, parse_rational, parse_rational_list, parse_rational_rows, point_from_json, point_json, rational_matrix,
    rational_str,
};
use crate::report::{Outcome, Status};
use crate::Globals;

#[derive(Debug, Args)]
pub struct PointArgs {
    /// Real part `x` of `x + i√s·y`.
    #[arg(long, allow_hyphen_values = true, requires = "im", conflicts_with = "point")]
    pub re: Option<String>,
    #[arg(long, allow_hyphen_values = true, requires = "re")]
    pub im: Option<String>,
    /// The `s` above; defaults to 1.
    #[arg(long)]
    pub im_scale: Option<String>,
    /// `{"re": […], "im": […], "im_scale": "s"}` inline or as a file.
    #[arg(long)]
    pub point: Option<String>,
}

impl PointArgs {
    fn load(&self) -> CliResult<PeriodPoint> {
        if let Some(p) = &self.point {
            return point_from_json(&load_json(p)?);
        }
        let (Some(re), Some(im)) = (&self.re, &self.im) else {
            return Err(CliError::input("give --re and --im, or --point"));
        };
        let scale = match &self.im_scale {
            Some(s) => parse_rational(s)?,
            None => Rational::one(),
        };
        Ok(PeriodPoint::with_im_scale(parse_rational_list(re)?, parse_rational_list(im)?, scale)?)
    }
}

#[derive(Debug, Subcommand)]
pub enum PeriodCmd {
    /// Period-domain membership.
    Check {
        #[command(flatten)]
        lattice: LatticeArg,
        #[command(flatten)]
        point: PointArgs,
    },
    /// The weight-two Hodge structure of a period point.
    Hodge {
        #[command(flatten)]
        lattice: LatticeArg,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Seeded sample of points on the twistor conic of a positive 3-plane.
    Conic {
        #[command(flatten)]
        lattice: LatticeArg,
        /// Three vectors separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        plane: String,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
    /// The positive 3-plane through a point and a third direction.
    Through {
        #[command(flatten)]
        lattice: LatticeArg,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, allow_hyphen_values = true)]
        w3: String,
    },
    /// Seeded random period point.
    Sample {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, default_value_t = 2)]
        reflections: usize,
    },
    /// Chain of twistor conics joining two points, re-verified independently.
    Path {
        #[command(flatten)]
        lattice: LatticeArg,
        /// Start point JSON; sampled from the seed when omitted.
        #[arg(long)]
        from: Option<String>,
        /// End point JSON; sampled from the seed when omitted.
        #[arg(long)]
        to: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
}

fn plane_json(p: &PositiveThreePlane) -> Value {
    rational_matrix(p.basis())
}

fn chain_json(chain: &TwistorChain) -> Value {
    let links: Vec<Value> =
        chain.links.iter().map(|l| json!({ "plane": plane_json(&l.plane), "exit": point_json(&l.exit) })).collect();
    json!({
        "links": links,
        "length": chain.links.len().to_string(),
        "irrational_junctions": chain.irrational_junctions().to_string(),
        "restart": chain.restart.to_string(),
    })
}

fn endpoint(l: &IntegralLattice, arg: &Option<String>, seed: u64) -> CliResult<PeriodPoint> {
    match arg {
        Some(p) => point_from_json(&load_json(p)?),
        None => Ok(sample_period_point(l, seed, 3)?),
    }
}

pub fn run(cmd: &PeriodCmd, g: &Globals) -> CliResult<Outcome> {
    match cmd {
        PeriodCmd::Check { lattice, point } => {
            let l = lattice.load()?;
            let p = point.load()?;
            let member = in_period_domain(&l, &p)?;
            let (re, b) = period_residual(&l, &p)?;
            Ok(Outcome::ok(json!({ "in_domain": member }))
                .with_residuals(json!({ "q_real": rational_str(&re), "b_xy": rational_str(&b) })))
        }
        PeriodCmd::Hodge { lattice, point } => {
            let l = lattice.load()?;
            let h = hodge_structure_from_period(&l, &point.load()?)?;
            Ok(Outcome::ok(json!({
                "h20": h.h20.to_string(),
                "h11": h.h11.to_string(),
                "h02": h.h02.to_string(),
                "h11_basis": rational_matrix(&h.h11_basis),
            })))
        }
        PeriodCmd::Conic { lattice, plane, samples } => {
            let l = lattice.load()?;
            let w = PositiveThreePlane::new(&l, parse_rational_rows(plane)?)?;
            let points = twistor_conic(&l, &w, *samples, g.seed)?;
            let all_members = points.iter().map(|p| in_period_domain(&l, p)).collect::<Result<Vec<_>, _>>()?;
            if all_members.iter().any(|m| !m) {
                return Err(CliError::Inconsistent("a conic point failed the membership check".into()));
            }
            Ok(Outcome::ok(json!({ "points": points.iter().map(point_json).collect::<Vec<_>>() })))
        }
        PeriodCmd::Through { lattice, point, w3 } => {
            let l = lattice.load()?;
            let w = conic_through(&l, &point.load()?, &parse_rational_list(w3)?)?;
            Ok(Outcome::ok(json!({ "plane": plane_json(&w) })))
        }
        PeriodCmd::Sample { lattice, reflections } => {
            let l = lattice.load()?;
            Ok(Outcome::ok(json!({ "point": point_json(&sample_period_point(&l, g.seed, *reflections)?) })))
        }
        PeriodCmd::Path { lattice, from, to, max_steps } => {
            let l = lattice.load()?;
            let start = endpoint(&l, from, g.seed.wrapping_mul(2))?;
            let end = endpoint(&l, to, g.seed.wrapping_mul(2).wrapping_add(1))?;
            let (status, chain, reason) = match twistor_path_search(&l, &start, &end, *max_steps, g.seed)? {
                PathSearchOutcome::Found(c) => (Status::Ok, c, None),
                PathSearchOutcome::Inconclusive { partial, reason } => (Status::Inconclusive, partial, Some(reason)),
            };
            let mut payload = json!({
                "start": point_json(&start),
                "end": point_json(&end),
                "chain": chain_json(&chain),
            });
            if let Some(r) = reason {
                payload["reason"] = Value::String(r);
                return Ok(Outcome { status, payload, residuals: None });
            }
            let report = verify_chain(&l, &start, &end, &chain.links);
            if !report.verified {
                return Err(CliError::Inconsistent(format!(
                    "search returned a chain that fails verification: {}",
                    report.failures.join("; ")
                )));
            }
            payload["verification"] =
                json!({ "verified": true, "incidences": report.incidences.to_string() });
            Ok(Outcome { status, payload, residuals: None })
        }
    }
}
