use clap::{Args, Subcommand};
use hk_core::lattice::{IntegralLattice, StandardLattice};
use serde_json::json;

use crate::error::CliResult;
use crate::formats::{integer_str, lattice_json, parse_integer, parse_integer_list, parse_lattice};
use crate::report::Outcome;
use crate::Globals;

#[derive(Debug, Args)]
pub struct LatticeArg {
    /// `diag:a,b,…`, `name:U|E8_minus|K3`, inline JSON or a JSON file.
    #[arg(long, alias = "file", allow_hyphen_values = true)]
    pub lattice: String,
}

impl LatticeArg {
    pub fn load(&self) -> CliResult<IntegralLattice> {
        parse_lattice(&self.lattice)
    }
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Rank, signature, determinant and parity.
    Signature(LatticeArg),
    /// The bilinear value `b(v, w)`; `w` defaults to `v`.
    Evaluate {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
    },
    /// Print one of U, E8_minus, K3.
    Standard {
        #[arg(long)]
        name: String,
    },
    /// Orthogonal direct sum with a second lattice.
    Sum {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true)]
        with: String,
    },
    /// Multiply the form by a nonzero integer.
    Rescale {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true)]
        by: String,
    },
    /// Adjoin one orthogonal generator of the given square.
    Extend {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, allow_hyphen_values = true)]
        square: String,
    },
}

pub fn run(cmd: &LatticeCmd, _g: &Globals) -> CliResult<Outcome> {
    match cmd {
        LatticeCmd::Signature(arg) => {
            let l = arg.load()?;
            let s = l.signature();
            Ok(Outcome::ok(json!({
                "rank": l.rank().to_string(),
                "signature": s.to_string(),
                "positive": s.positive.to_string(),
                "negative": s.negative.to_string(),
                "zero": s.zero.to_string(),
                "determinant": integer_str(&l.determinant()),
                "even": l.is_even(),
            })))
        }
        LatticeCmd::Evaluate { lattice, v, w } => {
            let l = lattice.load()?;
            let v = parse_integer_list(v)?;
            let w = match w {
                Some(w) => parse_integer_list(w)?,
                None => v.clone(),
            };
            Ok(Outcome::ok(json!({ "value": integer_str(&l.evaluate(&v, &w)?) })))
        }
        LatticeCmd::Standard { name } => {
            let l = IntegralLattice::standard(name.parse::<StandardLattice>()?);
            Ok(Outcome::ok(lattice_json(&l)))
        }
        LatticeCmd::Sum { lattice, with } => {
            let l = lattice.load()?.direct_sum(&parse_lattice(with)?);
            Ok(Outcome::ok(lattice_json(&l)))
        }
        LatticeCmd::Rescale { lattice, by } => {
            let l = lattice.load()?.rescale(&parse_integer(by)?)?;
            Ok(Outcome::ok(lattice_json(&l)))
        }
        LatticeCmd::Extend { lattice, square } => {
            let l = lattice.load()?.extend_by_rank_one(parse_integer(square)?);
            Ok(Outcome::ok(lattice_json(&l)))
        }
    }
}
