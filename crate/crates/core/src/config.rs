//! Run configuration: one document grammar shared by every command.

use std::fmt;
use std::path::PathBuf;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::composition::{CounterexampleKind, FamilyKind, TauMap};
use crate::measure::{FunctionSpec, MeasureSpace};
use crate::quadrature::QuadratureSettings;
use crate::young::YoungFunction;
use crate::{Error, Result};

/// A positive exponent that may be `∞`, written as a number or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(pub f64);

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() && self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exponent;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Exponent, E> {
                Ok(Exponent(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Exponent, E> {
                Ok(Exponent(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Exponent, E> {
                Ok(Exponent(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Exponent, E> {
                match v {
                    "inf" | "infinity" => Ok(Exponent(f64::INFINITY)),
                    _ => v.parse().map(Exponent).map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    #[serde(rename = "example-1")]
    Example1,
    #[serde(rename = "example-2")]
    Example2,
    #[serde(rename = "example-3")]
    Example3,
    #[serde(rename = "example-4")]
    Example4,
    LemmaLayerCake,
    LemmaIndicators,
    Oneil,
    #[serde(rename = "nabla2-demo")]
    Nabla2Demo,
    #[serde(rename = "section-5-demo")]
    Section5Demo,
    All,
}

impl Target {
    pub const EACH: [Target; 9] = [
        Target::Example1,
        Target::Example2,
        Target::Example3,
        Target::Example4,
        Target::LemmaLayerCake,
        Target::LemmaIndicators,
        Target::Oneil,
        Target::Nabla2Demo,
        Target::Section5Demo,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Target::Example1 => "example-1",
            Target::Example2 => "example-2",
            Target::Example3 => "example-3",
            Target::Example4 => "example-4",
            Target::LemmaLayerCake => "lemma-layer-cake",
            Target::LemmaIndicators => "lemma-indicators",
            Target::Oneil => "oneil",
            Target::Nabla2Demo => "nabla2-demo",
            Target::Section5Demo => "section-5-demo",
            Target::All => "all",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum DemoSpec {
    Counterexample {
        kind: CounterexampleKind,
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<f64>,
    },
    Holder {
        phi: YoungFunction,
        #[serde(default = "one")]
        d: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<f64>,
        /// Grid `h = 2^-1, ..., 2^-steps`.
        #[serde(default = "twenty")]
        steps: u32,
    },
    Continuity {
        p: f64,
        gamma: f64,
        /// Radii `2^-1, ..., 2^-levels`.
        #[serde(default = "thirty")]
        levels: u32,
    },
}

fn one() -> f64 {
    1.0
}
fn twenty() -> u32 {
    20
}
fn thirty() -> u32 {
    30
}
fn default_n_max() -> i64 {
    1000
}
fn default_seed() -> u64 {
    42
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    YoungValidate {
        phi: YoungFunction,
    },
    YoungComplementary {
        phi: YoungFunction,
        t: Vec<f64>,
    },
    YoungNabla2 {
        phi: YoungFunction,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k_candidates: Option<Vec<f64>>,
    },
    NormOrlicz {
        phi: YoungFunction,
        f: FunctionSpec,
        space: MeasureSpace,
    },
    NormLorentz {
        p: f64,
        q: Exponent,
        f: FunctionSpec,
        space: MeasureSpace,
    },
    Certify {
        tau: TauMap,
        phi: YoungFunction,
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        d: Option<f64>,
        family: FamilyKind,
        #[serde(default = "default_n_max")]
        n_max: i64,
        #[serde(default)]
        include_zero: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lorentz_q: Option<f64>,
    },
    Demo {
        demo: DemoSpec,
    },
    ReproducePaper {
        target: Target,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::YoungValidate { .. } => "young-validate",
            Command::YoungComplementary { .. } => "young-complementary",
            Command::YoungNabla2 { .. } => "young-nabla2",
            Command::NormOrlicz { .. } => "norm-orlicz",
            Command::NormLorentz { .. } => "norm-lorentz",
            Command::Certify { .. } => "certify",
            Command::Demo { .. } => "demo",
            Command::ReproducePaper { .. } => "reproduce-paper",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub quadrature: QuadratureSettings,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            output_path: None,
            format: OutputFormat::Json,
            seed: default_seed(),
            quadrature: QuadratureSettings::default(),
        }
    }
}

/// Parses and range-checks a JSON configuration document.
pub fn parse_config(document: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(document);
    let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::config(if path == "?" { "." } else { &path }, e.into_inner().to_string())
    })?;
    validate_config(&config)?;
    Ok(config)
}

/// Same as [`parse_config`] for an already parsed JSON value.
pub fn config_from_value(value: serde_json::Value) -> Result<RunConfig> {
    parse_config(&value.to_string())
}

fn at(path: &str, r: Result<()>) -> Result<()> {
    r.map_err(|e| match e {
        Error::Config { .. } => e,
        other => Error::config(path, other.to_string()),
    })
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(path, format!("must be positive and finite, got {v}")))
    }
}

fn validate_config(c: &RunConfig) -> Result<()> {
    at("quadrature", c.quadrature.validate())?;
    match &c.command {
        Command::YoungValidate { phi } | Command::YoungNabla2 { phi, .. } => {
            at("phi", phi.check_parameters())?;
            if let Command::YoungNabla2 { k_candidates: Some(ks), .. } = &c.command {
                if ks.is_empty() || ks.iter().any(|k| !(*k > 1.0 && k.is_finite())) {
                    return Err(Error::config("k_candidates", "every k must exceed 1"));
                }
            }
        }
        Command::YoungComplementary { phi, t } => {
            at("phi", phi.check_parameters())?;
            if let Some(bad) = t.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
                return Err(Error::config("t", format!("points must be finite and >= 0, got {bad}")));
            }
        }
        Command::NormOrlicz { phi, f, space } => {
            at("phi", phi.check_parameters())?;
            at("space", space.validate())?;
            at("f", f.validate(space))?;
        }
        Command::NormLorentz { p, q, f, space } => {
            positive("p", *p)?;
            if !(q.0 > 0.0) {
                return Err(Error::config("q", format!("must be positive or \"inf\", got {}", q.0)));
            }
            at("space", space.validate())?;
            at("f", f.validate(space))?;
        }
        Command::Certify { tau, phi, p, d, n_max, lorentz_q, .. } => {
            at("tau", tau.validate())?;
            at("phi", phi.check_parameters())?;
            positive("p", *p)?;
            if let Some(d) = d {
                if !(*d >= 1.0 && d.is_finite()) {
                    return Err(Error::config("d", format!("must be >= 1, got {d}")));
                }
            }
            if !(1..=5000).contains(n_max) {
                return Err(Error::config("n_max", format!("must be in 1..=5000, got {n_max}")));
            }
            if let Some(q) = lorentz_q {
                positive("lorentz_q", *q)?;
            }
        }
        Command::Demo { demo } => match demo {
            DemoSpec::Counterexample { p, q, .. } => {
                positive("demo.p", *p)?;
                if let Some(q) = q {
                    positive("demo.q", *q)?;
                }
            }
            DemoSpec::Holder { phi, d, gamma, steps } => {
                at("demo.phi", phi.check_parameters())?;
                positive("demo.d", *d)?;
                if let Some(g) = gamma {
                    positive("demo.gamma", *g)?;
                }
                if !(1..=60).contains(steps) {
                    return Err(Error::config("demo.steps", "must be in 1..=60"));
                }
            }
            DemoSpec::Continuity { p, gamma, levels } => {
                positive("demo.p", *p)?;
                positive("demo.gamma", *gamma)?;
                if !(1..=60).contains(levels) {
                    return Err(Error::config("demo.levels", "must be in 1..=60"));
                }
            }
        },
        Command::ReproducePaper { .. } => {}
    }
    Ok(())
}
