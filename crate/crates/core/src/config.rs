//! Experiment configuration files.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perturbation::Perturbation;
use crate::scalar::{gauss, qstr, Q};
use crate::scheme::{CoefficientScheme, Seq};

pub const SCHEMA_VERSION: u32 = 1;

/// Constant-coefficient scheme description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum SchemeSpec {
    Example,
    Special {
        #[serde(with = "qstr")]
        rho: Q,
        #[serde(with = "qstr")]
        c: Q,
        #[serde(with = "qstr")]
        lambda: Q,
        #[serde(with = "qstr")]
        omega: Q,
    },
    Oprl {
        #[serde(with = "qstr")]
        rho: Q,
        #[serde(with = "qstr")]
        c: Q,
        #[serde(with = "qstr")]
        lambda: Q,
    },
    /// Real nodes `a`, `b`.
    General {
        #[serde(with = "qstr")]
        rho: Q,
        #[serde(with = "qstr")]
        c: Q,
        #[serde(with = "qstr")]
        lambda: Q,
        #[serde(with = "qstr")]
        a: Q,
        #[serde(with = "qstr")]
        b: Q,
    },
}

impl SchemeSpec {
    pub fn build(&self) -> Result<CoefficientScheme> {
        use num_traits::Zero;
        Ok(match self {
            SchemeSpec::Example => CoefficientScheme::example(),
            SchemeSpec::Special { rho, c, lambda, omega } => {
                CoefficientScheme::special(Seq::Constant(rho.clone()), Seq::Constant(c.clone()), Seq::Constant(lambda.clone()), omega.clone())?
            }
            SchemeSpec::Oprl { rho, c, lambda } => {
                CoefficientScheme::oprl(Seq::Constant(rho.clone()), Seq::Constant(c.clone()), Seq::Constant(lambda.clone()))
            }
            SchemeSpec::General { rho, c, lambda, a, b } => CoefficientScheme::general(
                Seq::Constant(rho.clone()),
                Seq::Constant(c.clone()),
                Seq::Constant(lambda.clone()),
                Seq::Constant(gauss(a.clone(), Q::zero())),
                Seq::Constant(gauss(b.clone(), Q::zero())),
            ),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub scheme: SchemeSpec,
    #[serde(default)]
    pub perturbations: Vec<Perturbation>,
    pub n: Vec<usize>,
    #[serde(default = "default_integrand")]
    pub integrand: String,
    #[serde(default)]
    pub output: OutputFormat,
    #[serde(default)]
    pub seed: u64,
}

fn default_integrand() -> String {
    "example3".into()
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.n.is_empty() || self.n.contains(&0) {
            return Err(Error::Config("n must be a nonempty list of positive degrees".into()));
        }
        for p in &self.perturbations {
            p.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        self.scheme.build().map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn sample() -> ExperimentConfig {
        ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            scheme: SchemeSpec::Special {
                rho: q(1, 1),
                c: q(0, 1),
                lambda: q(1, 4),
                omega: q(1, 1),
            },
            perturbations: vec![Perturbation::both(0, q(1, 100), 3, q(251, 250))],
            n: vec![4, 10],
            integrand: "pi*exp(-x^2)/(x^2+1)^7".into(),
            output: OutputFormat::Json,
            seed: 7,
        }
    }

    #[test]
    fn json_round_trip() {
        let cfg = sample();
        let text = cfg.to_json().unwrap();
        assert!(text.contains("\"251/250\""));
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
    }

    #[test]
    fn wrong_version_and_bad_degrees_are_rejected() {
        let mut cfg = sample();
        cfg.schema_version = 9;
        assert!(ExperimentConfig::from_json(&cfg.to_json().unwrap()).is_err());
        let mut cfg = sample();
        cfg.n = vec![0];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn defaults_fill_optional_fields() {
        let cfg = ExperimentConfig::from_json(r#"{"schema_version":1,"scheme":{"form":"example"},"n":[4]}"#).unwrap();
        assert_eq!(cfg.integrand, "example3");
        assert_eq!(cfg.output, OutputFormat::Csv);
    }
}
