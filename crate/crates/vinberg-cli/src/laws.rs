//! Law selection flags shared by `theory` and `compare`.

use crate::{CliError, Result};
use clap::Args;
use serde_json::{json, Value};
use vinberg::lambert_tsallis::{Kappa, LTParams};
use vinberg::wigner_limit::{wigner_law, WignerLawParams};
use vinberg::wishart_limit::{mp_law, trapezoid_to_lt, wishart_law, TrapezoidProfile};
use vinberg::{SpectralLaw, ZeroBehavior};

/// `(κ, γ)` pair; `--kappa inf` selects `κ = +∞`.
#[derive(Args, Debug, Clone)]
pub struct ParamsSpec {
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
}

impl ParamsSpec {
    pub fn build(&self) -> Result<LTParams> {
        let (Some(k), Some(g)) = (&self.kappa, self.gamma) else {
            return Err(CliError::Param("need both --kappa and --gamma".into()));
        };
        let kappa = match k.trim() {
            "inf" | "+inf" => Kappa::Infinite,
            s => Kappa::Finite(s.parse().map_err(|_| CliError::Param(format!("bad --kappa {s:?}")))?),
        };
        Ok(LTParams::new(kappa, g)?)
    }
}

#[derive(Args, Debug, Clone)]
pub struct LawSpec {
    /// wigner, wishart, mp or trapezoid.
    #[arg(long)]
    pub law: String,
    /// Hub fraction (wigner).
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    /// Aspect ratio (mp).
    #[arg(long = "C", default_value_t = 1.0)]
    pub ratio: f64,
    #[arg(long, default_value_t = 1.0)]
    pub v: f64,
    #[command(flatten)]
    pub params: ParamsSpec,
    /// Row fraction (trapezoid).
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Slope (trapezoid).
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

impl LawSpec {
    pub fn build(&self) -> Result<SpectralLaw> {
        match self.law.as_str() {
            "wigner" => Ok(wigner_law(WignerLawParams::new(self.c, self.v)?)),
            "wishart" => Ok(wishart_law(&self.params.build()?, self.v)),
            "mp" => Ok(mp_law(self.ratio, self.v)?),
            "trapezoid" => {
                let prof = TrapezoidProfile::new(self.p, self.alpha, self.v)?;
                Ok(wishart_law(&trapezoid_to_lt(&prof)?, self.v))
            }
            other => Err(CliError::Param(format!("unknown law {other:?}"))),
        }
    }

    fn params_json(&self) -> Value {
        match self.law.as_str() {
            "wigner" => json!({ "c": self.c, "v": self.v }),
            "wishart" => json!({ "kappa": self.params.kappa, "gamma": self.params.gamma, "v": self.v }),
            "mp" => json!({ "C": self.ratio, "v": self.v }),
            _ => json!({ "p": self.p, "alpha": self.alpha, "v": self.v }),
        }
    }
}

/// Atoms, support and behaviour at 0 of `law`.
pub fn describe(law: &SpectralLaw, spec: &LawSpec) -> Value {
    let zero = match law.zero_behavior() {
        ZeroBehavior::FiniteLimit(d) => json!({ "kind": "finite", "density": d }),
        ZeroBehavior::InfiniteLimit => json!({ "kind": "infinite" }),
        ZeroBehavior::Atom(m) => json!({ "kind": "atom", "mass": m }),
    };
    json!({
        "kind": spec.law,
        "params": spec.params_json(),
        "atoms": law.atoms().iter().map(|a| json!({ "loc": a.loc, "mass": a.mass })).collect::<Vec<_>>(),
        "support": law.support().iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
        "zero_behavior": zero,
    })
}
