use clap::{Args, Subcommand};
use hk_core::bbform::{
    bb_eval, bb_recover, matsushita_expand, numerically_trivial_test, DivisorPairData, FujikiData,
    HodgeDecomposedClass, IntersectionTable, RecoverOptions, RecoveredForm,
};
use hk_core::exact::{gaussian, GaussianRational, Rational};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::formats::{
    f64_matrix, f64_str, fujiki_from_json, fujiki_json, load_json, parse_rational, parse_rational_list,
    parse_rational_rows, rational_array, rational_str, table_from_json,
};
use crate::report::Outcome;
use crate::Globals;

#[derive(Debug, Args)]
pub struct FujikiArg {
    /// `{"n": n, "c": "p/q", "gram": [[…]]}` inline or as a file.
    #[arg(long)]
    pub fujiki: String,
}

impl FujikiArg {
    fn load(&self) -> CliResult<FujikiData> {
        fujiki_from_json(&load_json(&self.fujiki)?)
    }
}

#[derive(Debug, Args)]
pub struct DivisorArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub qe: String,
    #[arg(long, allow_hyphen_values = true)]
    pub qa: String,
    #[arg(long, allow_hyphen_values = true)]
    pub qea: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value = "1")]
    pub c: String,
}

impl DivisorArgs {
    fn load(&self) -> CliResult<DivisorPairData> {
        Ok(DivisorPairData {
            q_e: parse_rational(&self.qe)?,
            q_a: parse_rational(&self.qa)?,
            q_ea: parse_rational(&self.qea)?,
            n: self.n,
            c: parse_rational(&self.c)?,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum BbCmd {
    /// `q(α) = λμ + (n/2)·Q11(β, β)` for `α = λσ + β + μσ̄`.
    Eval {
        #[arg(long)]
        n: u32,
        /// `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        beta: String,
        /// Rows separated by `;`, entries by `,`.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        q11: String,
        /// `σ` is not normalized by `∫(σσ̄)ⁿ = 1`.
        #[arg(long)]
        unnormalized: bool,
    },
    /// `∫ α^{2n} = c·q(α)ⁿ`.
    Top {
        #[command(flatten)]
        fujiki: FujikiArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// `∫ α₁ ⋯ α_{2n}` from the polarized Fujiki relation.
    Mixed {
        #[command(flatten)]
        fujiki: FujikiArg,
        #[arg(long = "alpha", allow_hyphen_values = true)]
        alphas: Vec<String>,
    },
    /// Mixed intersection with `copies` slots taken by an isotropic class.
    Isotropic {
        #[command(flatten)]
        fujiki: FujikiArg,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long = "filler", allow_hyphen_values = true)]
        fillers: Vec<String>,
        #[arg(long)]
        copies: usize,
    },
    /// `E^m·A^{2n−m}` for `m = 0..2n`.
    Matsushita(DivisorArgs),
    /// Whether `E^{2n} = 0` and `E·A^{2n−1} = 0` force `q(E) = q(E, A) = 0`.
    Trivial {
        #[command(flatten)]
        divisors: DivisorArgs,
        #[arg(long, allow_hyphen_values = true)]
        top_e: String,
        #[arg(long, allow_hyphen_values = true)]
        mixed: String,
    },
    /// Recover `q` from a top-intersection table (`n ∈ {1, 2}`).
    Recover {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        c: String,
        /// `{"dim": d, "order": 2n, "values": […]}`.
        #[arg(long, conflicts_with = "fujiki")]
        table: Option<String>,
        /// Build the table from Fujiki data instead.
        #[arg(long)]
        fujiki: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        reference: String,
        #[arg(long)]
        allow_float: bool,
    },
}

fn parse_gaussian(s: &str) -> CliResult<GaussianRational> {
    let parts = parse_rational_list(s)?;
    match parts.as_slice() {
        [re] => Ok(gaussian(re.clone(), Rational::zero())),
        [re, im] => Ok(gaussian(re.clone(), im.clone())),
        _ => Err(CliError::input(format!("expected re or re,im, got {s:?}"))),
    }
}

fn gaussian_json(z: &GaussianRational) -> Value {
    json!({ "re": rational_str(&z.re), "im": rational_str(&z.im) })
}

fn alphas(list: &[String]) -> CliResult<Vec<Vec<Rational>>> {
    list.iter().map(|s| parse_rational_list(s)).collect()
}

pub fn run(cmd: &BbCmd, g: &Globals) -> CliResult<Outcome> {
    match cmd {
        BbCmd::Eval { n, lambda, mu, beta, q11, unnormalized } => {
            let q11 = if q11.trim().is_empty() { Vec::new() } else { parse_rational_rows(q11)? };
            let alpha = HodgeDecomposedClass {
                lambda: parse_gaussian(lambda)?,
                mu: parse_gaussian(mu)?,
                beta: parse_rational_list(beta)?,
                q11,
                unit_volume: !unnormalized,
            };
            Ok(Outcome::ok(json!({ "q": gaussian_json(&bb_eval(&alpha, *n)?) })))
        }
        BbCmd::Top { fujiki, alpha } => {
            let fd = fujiki.load()?;
            let a = parse_rational_list(alpha)?;
            Ok(Outcome::ok(json!({
                "q": rational_str(&fd.quadratic(&a)?),
                "top": rational_str(&fd.top_intersection(&a)?),
            })))
        }
        BbCmd::Mixed { fujiki, alphas: list } => {
            let fd = fujiki.load()?;
            Ok(Outcome::ok(json!({ "value": rational_str(&fd.mixed_intersection(&alphas(list)?)?) })))
        }
        BbCmd::Isotropic { fujiki, beta, fillers, copies } => {
            let fd = fujiki.load()?;
            let v = fd.isotropic_power_vanishing(&parse_rational_list(beta)?, &alphas(fillers)?, *copies)?;
            Ok(Outcome::ok(json!({ "value": rational_str(&v), "copies": copies.to_string() })))
        }
        BbCmd::Matsushita(args) => {
            let d = args.load()?;
            let numbers = matsushita_expand(&d)?;
            let two_n = numbers.len() - 1;
            let labelled: Vec<Value> = numbers
                .iter()
                .enumerate()
                .map(|(m, v)| json!({ "m": m.to_string(), "a_power": (two_n - m).to_string(), "value": rational_str(v) }))
                .collect();
            Ok(Outcome::ok(json!({ "numbers": rational_array(&numbers), "terms": labelled })))
        }
        BbCmd::Trivial { divisors, top_e, mixed } => {
            let d = divisors.load()?;
            let r = numerically_trivial_test(&d, &parse_rational(top_e)?, &parse_rational(mixed)?)?;
            Ok(Outcome::ok(json!({
                "trivial": r.trivial,
                "q_e": rational_str(&r.q_e),
                "q_ea": rational_str(&r.q_ea),
            })))
        }
        BbCmd::Recover { n, c, table, fujiki, reference, allow_float } => {
            let c = parse_rational(c)?;
            let table = match (table, fujiki) {
                (Some(t), None) => table_from_json(&load_json(t)?)?,
                (None, Some(f)) => IntersectionTable::from_fujiki(&fujiki_from_json(&load_json(f)?)?),
                _ => return Err(CliError::input("give exactly one of --table and --fujiki")),
            };
            let mut opts = RecoverOptions { allow_float_fallback: *allow_float, ..RecoverOptions::default() };
            if let Some(t) = g.tol {
                opts.tolerance = t;
            }
            let reference = parse_rational_list(reference)?;
            match bb_recover(*n, &c, &table, &reference, opts)? {
                RecoveredForm::Exact(q) => {
                    let fd = FujikiData::new(*n, q, c)?;
                    Ok(Outcome::ok(json!({ "exact": true, "form": fujiki_json(&fd) })))
                }
                RecoveredForm::Approximate { gram, residual } => Ok(Outcome::ok(json!({
                    "exact": false,
                    "gram": f64_matrix(&gram),
                    "tolerance": f64_str(opts.tolerance),
                }))
                .with_residuals(json!({ "table": f64_str(residual) }))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hk_core::exact::{rat, ratio};

    #[test]
    fn gaussian_arguments() {
        assert_eq!(parse_gaussian("1/2").unwrap(), gaussian(ratio(1, 2), rat(0)));
        assert_eq!(parse_gaussian("0,-1").unwrap(), gaussian(rat(0), rat(-1)));
        assert!(parse_gaussian("1,2,3").is_err());
    }
}
