use clap::{Subcommand, ValueEnum};
use hk_core::hrr::{
    bitangent_count_sextic, chi_decomposition_enumerate, elliptic_fiber_count, goettsche_series, hilb2_euler,
    hilb_h2_rank, hrr_chi_surface_with, jacobian_euler, k3_hodge_diamond, kummer_b2, moduli_dims,
    plane_curve_bitangents, slope, solve_c2, stability, sym_power_h2_rank, BundleChernData, SurfaceChernData,
    ToddClass,
};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::formats::{integer_str, parse_integer, parse_integer_list, parse_rational, rational_str, series_json};
use crate::report::Outcome;
use crate::Globals;

pub const DEFAULT_ORDER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ToddChoice {
    /// `1 + c₁/2 + (c₁² + c₂)/12`.
    Standard,
    /// Degree-one term written as `c₁²/2`.
    SquaredDegreeOne,
}

impl ToddChoice {
    pub fn class(self) -> ToddClass {
        match self {
            ToddChoice::Standard => ToddClass::standard(),
            ToddChoice::SquaredDegreeOne => ToddClass::squared_degree_one(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum CountCmd {
    /// Coefficients of `Π (1 − q^k)^(−e)` up to `--order`.
    Goettsche {
        #[arg(long, allow_negative_numbers = true)]
        e: i64,
    },
    /// Euler number of the Hilbert square of a surface with Euler number `e`.
    Hilb2 {
        #[arg(long, allow_negative_numbers = true)]
        e: i64,
    },
    /// `χ(X, F)` on a surface by Riemann–Roch.
    Chi {
        /// `k3`, `p2`, or `c1sq,c2`.
        #[arg(long, default_value = "k3", allow_hyphen_values = true)]
        surface: String,
        #[arg(long, default_value_t = 1)]
        rank: u32,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        c1_sq: i64,
        /// `c₁(F)·c₁(X)`.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        c1_dot: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        c2: i64,
        #[arg(long, value_enum, default_value_t = ToddChoice::Standard)]
        todd: ToddChoice,
    },
    /// `c₂` from `χ(𝒪)` and `c₁²`.
    SolveC2 {
        #[arg(long, allow_hyphen_values = true)]
        chi: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        c1_sq: String,
    },
    /// Hodge diamond, Betti numbers and Euler number of a K3 surface.
    K3Diamond,
    /// `b₂` of the symmetric power and Hilbert scheme of a surface.
    H2Ranks {
        #[arg(long)]
        b1: u64,
        #[arg(long)]
        b2: u64,
    },
    /// `b₂` of a generalized Kummer from `b₂` of the torus.
    Kummer {
        #[arg(long)]
        b2: u64,
    },
    /// Singular fibers of an elliptic fibration.
    Fibers {
        #[arg(long, allow_negative_numbers = true)]
        total: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        singular: i64,
    },
    /// Euler number of a compactified Jacobian of a nodal curve.
    Jacobian {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        nodes: u32,
    },
    /// Dimensions of `X^[n]` and of the compactified Jacobian family.
    Dims {
        #[arg(long)]
        n: u64,
    },
    /// Products of irreducible factors with given dimension and `χ(𝒪)`.
    Decompose {
        #[arg(long)]
        dim: u32,
        #[arg(long, allow_negative_numbers = true)]
        chi: i64,
    },
    /// `deg / rank`.
    Slope {
        #[arg(long, allow_hyphen_values = true)]
        deg: String,
        #[arg(long)]
        rank: u32,
    },
    /// Slope stability against the slopes of proper subsheaves.
    Stability {
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
        #[arg(long = "sub", allow_hyphen_values = true)]
        subs: Vec<String>,
    },
    /// Bitangents of a plane curve; without `--degree`, the sextic count
    /// cross-checked against the K3 series.
    Bitangents {
        #[arg(long)]
        degree: Option<u64>,
    },
}

fn surface(spec: &str) -> CliResult<SurfaceChernData> {
    match spec {
        "k3" | "K3" => Ok(SurfaceChernData::k3()),
        "p2" | "P2" => Ok(SurfaceChernData::projective_plane()),
        other => {
            let v = parse_integer_list(other)?;
            let [c1, c2] = v.as_slice() else {
                return Err(CliError::input("surface must be k3, p2 or c1sq,c2"));
            };
            Ok(SurfaceChernData { c1_sq: c1.clone(), c2: c2.clone() })
        }
    }
}

pub fn run(cmd: &CountCmd, g: &Globals) -> CliResult<Outcome> {
    let payload: Value = match cmd {
        CountCmd::Goettsche { e } => {
            let order = g.order.unwrap_or(DEFAULT_ORDER);
            let mut v = series_json(&goettsche_series(*e, order));
            v["e"] = Value::String(e.to_string());
            v
        }
        CountCmd::Hilb2 { e } => json!({ "e": e.to_string(), "euler": integer_str(&hilb2_euler(*e)) }),
        CountCmd::Chi { surface: s, rank, c1_sq, c1_dot, c2, todd } => {
            let x = surface(s)?;
            let f = BundleChernData::new(*rank, *c1_sq, *c1_dot, *c2)?;
            let chi = hrr_chi_surface_with(&x, &f, &todd.class())?;
            json!({ "chi": integer_str(&chi) })
        }
        CountCmd::SolveC2 { chi, c1_sq } => {
            json!({ "c2": integer_str(&solve_c2(&parse_integer(chi)?, &parse_integer(c1_sq)?)) })
        }
        CountCmd::K3Diamond => {
            let d = k3_hodge_diamond()?;
            let rows: Vec<Vec<Value>> = d.h.iter().map(|r| r.iter().map(integer_str).collect()).collect();
            json!({
                "h": rows,
                "betti": d.betti().iter().map(integer_str).collect::<Vec<_>>(),
                "euler": integer_str(&d.euler()),
            })
        }
        CountCmd::H2Ranks { b1, b2 } => json!({
            "symmetric_power": integer_str(&sym_power_h2_rank(*b1, *b2)),
            "hilbert_scheme": integer_str(&hilb_h2_rank(*b1, *b2)),
        }),
        CountCmd::Kummer { b2 } => json!({ "b2": integer_str(&kummer_b2(*b2)) }),
        CountCmd::Fibers { total, singular } => {
            json!({ "singular_fibers": integer_str(&elliptic_fiber_count(*total, *singular)?) })
        }
        CountCmd::Jacobian { genus, nodes } => json!({ "euler": integer_str(&jacobian_euler(*genus, *nodes)) }),
        CountCmd::Dims { n } => {
            let (hilb, jac) = moduli_dims(*n);
            json!({ "hilbert_scheme": hilb.to_string(), "compactified_jacobian": jac.to_string() })
        }
        CountCmd::Decompose { dim, chi } => {
            let report = chi_decomposition_enumerate(*dim, *chi)?;
            let list: Vec<Vec<String>> =
                report.decompositions.iter().map(|fs| fs.iter().map(|f| f.label()).collect()).collect();
            json!({ "decompositions": list, "ambiguous": report.ambiguous })
        }
        CountCmd::Slope { deg, rank } => json!({ "slope": rational_str(&slope(&parse_rational(deg)?, *rank)?) }),
        CountCmd::Stability { slope: s, subs } => {
            let f = parse_rational(s)?;
            let subs = subs.iter().map(|t| parse_rational(t)).collect::<CliResult<Vec<_>>>()?;
            let st = stability(&f, &subs);
            json!({ "stable": st.stable, "semistable": st.semistable })
        }
        CountCmd::Bitangents { degree: Some(d) } => json!({ "bitangents": integer_str(&plane_curve_bitangents(*d)?) }),
        CountCmd::Bitangents { degree: None } => json!({ "bitangents": integer_str(&bitangent_count_sextic()?) }),
    };
    Ok(Outcome::ok(payload))
}
