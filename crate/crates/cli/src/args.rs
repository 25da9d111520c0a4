//! Construction parameters on the command line and in `meta.json`.

use std::f64::consts::PI;

use clap::Args;
use serde_json::{json, Map, Value};

use qutrit_zx::phase::{format_rational, parse_rational, rat, Rational};
use qutrit_zx::synth::BuildParams;

#[derive(Args, Debug, Default)]
pub struct PhaseArgs {
    #[arg(short = 'n', long = "n")]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// Control level for controlled-phase (0, 1 or 2).
    #[arg(long)]
    pub level: Option<u8>,
    /// Comma-separated phases for qubit-diag-emulation.
    #[arg(long, allow_hyphen_values = true)]
    pub alphas: Option<String>,
    /// Read phases as radians instead of multiples of 2π/3.
    #[arg(long)]
    pub radians: bool,
}

/// `x` in radians, written as a float or as `[c]pi[/d]`.
fn parse_radians(s: &str) -> Result<f64, String> {
    let bad = || format!("not an angle: {s:?}");
    let s = s.trim();
    let Some((coef, rest)) = s.split_once("pi") else {
        return s.parse::<f64>().map_err(|_| bad());
    };
    let coef = coef.trim_end_matches('*');
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let d = match rest {
        "" => 1.0,
        r => r.strip_prefix('/').and_then(|x| x.parse::<f64>().ok()).ok_or_else(bad)?,
    };
    Ok(c * PI / d)
}

/// Nearest rational with denominator at most 96, if within `1e-12`.
pub fn snap(x: f64) -> Option<Rational> {
    (1..=96i64).find_map(|d| {
        let n = (x * d as f64).round();
        ((x - n / d as f64).abs() <= 1e-12).then(|| rat(n as i64, d))
    })
}

fn phase(s: &str, radians: bool) -> Result<Rational, String> {
    if !radians {
        return parse_rational(s).map_err(|e| e.to_string());
    }
    let units = parse_radians(s)? / (2.0 * PI / 3.0);
    snap(units).ok_or_else(|| format!("{s} rad is {units} in units of 2π/3, not a rational with denominator ≤ 96"))
}

impl PhaseArgs {
    pub fn to_params(&self) -> Result<BuildParams, String> {
        let one = |v: &Option<String>| v.as_deref().map(|s| phase(s, self.radians)).transpose();
        let alphas = match &self.alphas {
            Some(list) => list.split(',').map(|s| phase(s, self.radians)).collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        Ok(BuildParams {
            n: self.n,
            alpha: one(&self.alpha)?,
            beta: one(&self.beta)?,
            theta: one(&self.theta)?,
            phi: one(&self.phi)?,
            eta: one(&self.eta)?,
            level: self.level,
            alphas,
        })
    }
}

pub fn params_json(p: &BuildParams) -> Value {
    let mut m = Map::new();
    if let Some(n) = p.n {
        m.insert("n".into(), json!(n));
    }
    for (k, v) in [("alpha", &p.alpha), ("beta", &p.beta), ("theta", &p.theta), ("phi", &p.phi), ("eta", &p.eta)] {
        if let Some(v) = v {
            m.insert(k.into(), json!(format_rational(v)));
        }
    }
    if let Some(l) = p.level {
        m.insert("level".into(), json!(l));
    }
    if !p.alphas.is_empty() {
        m.insert("alphas".into(), json!(p.alphas.iter().map(format_rational).collect::<Vec<_>>()));
    }
    Value::Object(m)
}

pub fn params_from_json(v: &Value) -> Result<BuildParams, String> {
    let obj = v.as_object().ok_or("params must be an object")?;
    let rational = |k: &str| -> Result<Option<Rational>, String> {
        obj.get(k)
            .map(|x| x.as_str().ok_or(format!("{k} must be a string")).and_then(|s| parse_rational(s).map_err(|e| e.to_string())))
            .transpose()
    };
    let alphas = match obj.get("alphas") {
        Some(Value::Array(xs)) => xs
            .iter()
            .map(|x| x.as_str().ok_or("alphas must be strings".to_string()).and_then(|s| parse_rational(s).map_err(|e| e.to_string())))
            .collect::<Result<_, _>>()?,
        Some(_) => return Err("alphas must be a list".into()),
        None => Vec::new(),
    };
    Ok(BuildParams {
        n: obj.get("n").and_then(Value::as_u64).map(|n| n as usize),
        alpha: rational("alpha")?,
        beta: rational("beta")?,
        theta: rational("theta")?,
        phi: rational("phi")?,
        eta: rational("eta")?,
        level: obj.get("level").and_then(Value::as_u64).map(|l| l as u8),
        alphas,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radians_snap_to_omega_units() {
        assert_eq!(phase("pi", true).unwrap(), rat(3, 2));
        assert_eq!(phase("2pi/3", true).unwrap(), rat(1, 1));
        assert_eq!(phase("-pi/2", true).unwrap(), rat(-3, 4));
        let x = (2.0 * PI / 3.0 / 7.0).to_string();
        assert_eq!(phase(&x, true).unwrap(), rat(1, 7));
        assert!(phase("1.0", true).is_err());
        assert!(phase("pi/x", true).is_err());
    }

    #[test]
    fn params_roundtrip() {
        let p = BuildParams { n: Some(3), alpha: Some(rat(-1, 3)), level: Some(1), alphas: vec![rat(1, 2)], ..Default::default() };
        assert_eq!(params_from_json(&params_json(&p)).unwrap(), p);
    }
}
