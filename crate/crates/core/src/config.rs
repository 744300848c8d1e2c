//! Run configuration: a sectioned TOML document naming a valued field, an
//! algebra presentation (or a bare lattice) and the checks to run.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::{BaseField, Valuation, ValuedField};
use crate::freealg::{parse_presentation, AlgebraElement, FiltrationMode, Presentation};
use crate::group::GroupElement;
use crate::lattice::{Cut, Lattice};
use crate::registry::CheckId;

pub const DEFAULT_MAX_DEGREE: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub field: FieldSection,
    pub valuation: ValuationSection,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSection>,
    pub checks: ChecksSection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    /// `Q` or `F<p>`
    pub base: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vars: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ValuationSection {
    PAdic { p: u64 },
    Monomial,
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relations: Vec<String>,
    #[serde(default = "default_mode")]
    pub mode: FiltrationMode,
}

fn default_mode() -> FiltrationMode {
    FiltrationMode::GeneratorFiltered
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub summands: Vec<SummandSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "cut", rename_all = "lowercase", deny_unknown_fields)]
pub enum SummandSection {
    Principal { gamma: Vec<i64>, vector: Vec<String> },
    Limit { c: i64, vector: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksSection {
    pub run: Vec<String>,
    /// Degrees `γ` for the strong, lemma and crossed checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subalgebra: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subalgebra_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor_bound: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// What the checks run against.
#[derive(Debug, Clone)]
pub enum Subject {
    Algebra(Presentation),
    Lattice(Lattice),
}

/// Check parameters after defaults and clamping to the degree bound.
#[derive(Debug, Clone)]
pub struct Params {
    pub gammas: Vec<GroupElement>,
    pub lemma_max: u32,
    pub pair_degree: u32,
    pub strategy_degree: u32,
    pub subalgebra: Vec<AlgebraElement>,
    pub subalgebra_cap: usize,
    pub tensor_bound: u32,
}

/// A validated configuration.
#[derive(Debug, Clone)]
pub struct Instance {
    pub config: RunConfig,
    pub field: ValuedField,
    pub subject: Subject,
    pub checks: Vec<CheckId>,
    pub params: Params,
    pub max_degree: u32,
    pub seed: Option<u64>,
}

fn line_of(source: Option<&str>, needle: &str) -> Option<usize> {
    let src = source?;
    let pos = src.find(needle)?;
    Some(src[..pos].matches('\n').count() + 1)
}

impl RunConfig {
    pub fn from_toml(source: &str) -> Result<RunConfig, ConfigError> {
        toml::from_str(source).map_err(|e| ConfigError {
            field: "config".into(),
            line: e.span().map(|s| source[..s.start].matches('\n').count() + 1),
            message: e.message().to_string(),
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Parse and validate TOML source, keeping it for line diagnostics.
    pub fn load(source: &str) -> Result<Instance, ConfigError> {
        RunConfig::from_toml(source)?.validate_with(Some(source))
    }

    pub fn validate(&self) -> Result<Instance, ConfigError> {
        self.validate_with(None)
    }

    fn validate_with(&self, source: Option<&str>) -> Result<Instance, ConfigError> {
        let err = |field: &str, needle: &str, message: String| ConfigError { field: field.into(), line: line_of(source, needle), message };
        let base = match self.field.base.as_str() {
            "Q" => BaseField::Rationals,
            s => match s.strip_prefix('F').map(|p| p.trim_start_matches('_').parse::<u64>()) {
                Some(Ok(p)) => BaseField::Prime(p),
                _ => return Err(err("field.base", "base", format!("expected `Q` or `F<p>`, got `{s}`"))),
            },
        };
        let valuation = match &self.valuation {
            ValuationSection::PAdic { p } => Valuation::PAdic(*p),
            ValuationSection::Monomial => Valuation::Monomial,
            ValuationSection::Trivial => Valuation::Trivial,
        };
        let field = ValuedField::new(base, self.field.vars.clone(), valuation).map_err(|e| err("valuation", "kind", e.to_string()))?;
        let max_degree = self.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);

        if self.checks.run.is_empty() {
            return Err(err("checks.run", "run", "the checks list is empty".into()));
        }
        let mut checks = Vec::new();
        for (i, name) in self.checks.run.iter().enumerate() {
            let id = CheckId::from_name(name).ok_or_else(|| err(&format!("checks.run[{i}]"), &format!("\"{name}\""), format!("unknown check `{name}`")))?;
            if checks.contains(&id) {
                return Err(err(&format!("checks.run[{i}]"), &format!("\"{name}\""), format!("check `{name}` listed twice")));
            }
            checks.push(id);
        }
        checks.sort();

        for (name, value) in &self.constants {
            field.parse(value).map_err(|e| err(&format!("constants.{name}"), name, e.to_string()))?;
        }
        let subject = match (&self.algebra, &self.lattice) {
            (Some(a), None) => Subject::Algebra(self.presentation(&field, a, source)?),
            (None, Some(l)) => Subject::Lattice(self.lattice(&field, l, source)?),
            (Some(_), Some(_)) => return Err(err("algebra", "[lattice]", "give either [algebra] or [lattice], not both".into())),
            (None, None) => return Err(err("algebra", "", "missing [algebra] or [lattice] section".into())),
        };
        for c in &checks {
            let ok = match subject {
                Subject::Algebra(_) => c.applies_to_algebras(),
                Subject::Lattice(_) => c.applies_to_lattices(),
            };
            if !ok {
                let what = if matches!(subject, Subject::Algebra(_)) { "an algebra" } else { "a lattice" };
                return Err(err("checks.run", &format!("\"{}\"", c.name()), format!("check `{}` does not apply to {what}", c.name())));
            }
        }

        let params = self.params(&field, &subject, max_degree, source)?;
        Ok(Instance { config: self.clone(), field, subject, checks, params, max_degree, seed: self.seed })
    }

    fn presentation(&self, field: &ValuedField, a: &AlgebraSection, source: Option<&str>) -> Result<Presentation, ConfigError> {
        let weights = match &a.weights {
            Some(w) if w.len() != a.generators.len() => {
                return Err(ConfigError {
                    field: "algebra.weights".into(),
                    line: line_of(source, "weights"),
                    message: format!("{} weights for {} generators", w.len(), a.generators.len()),
                })
            }
            Some(w) => w.clone(),
            None => vec![1; a.generators.len()],
        };
        let gens: Vec<(&str, u32)> = a.generators.iter().map(String::as_str).zip(weights).collect();
        let consts: Vec<(&str, &str)> = self.constants.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        let rels: Vec<&str> = a.relations.iter().map(String::as_str).collect();
        parse_presentation(field, &gens, &consts, &rels, a.mode).map_err(|e| {
            let index = presentation_error_index(&e, &rels);
            let (fieldname, needle) = match index {
                Some(i) if i < rels.len() => (format!("algebra.relations[{i}]"), rels[i].to_string()),
                _ => ("algebra".to_string(), "[algebra]".to_string()),
            };
            ConfigError { field: fieldname, line: line_of(source, &needle), message: e.to_string() }
        })
    }

    fn lattice(&self, field: &ValuedField, l: &LatticeSection, source: Option<&str>) -> Result<Lattice, ConfigError> {
        let err = |f: String, message: String| ConfigError { field: f, line: line_of(source, "[lattice]"), message };
        let vector = |f: String, xs: &[String]| -> Result<Vec<_>, ConfigError> {
            if xs.len() != l.dim {
                return Err(err(f, format!("expected {} entries, got {}", l.dim, xs.len())));
            }
            xs.iter().map(|x| field.parse(x).map_err(|e| err(f.clone(), e.to_string()))).collect()
        };
        match (l.generators.is_empty(), l.summands.is_empty()) {
            (false, true) => {
                let gens = l.generators.iter().enumerate().map(|(i, g)| vector(format!("lattice.generators[{i}]"), g)).collect::<Result<_, _>>()?;
                Lattice::fg(field, l.dim, "M", gens).map_err(|e| err("lattice".into(), e.to_string()))
            }
            (true, false) => {
                let mut summands = Vec::new();
                for (i, s) in l.summands.iter().enumerate() {
                    let f = format!("lattice.summands[{i}]");
                    summands.push(match s {
                        SummandSection::Principal { gamma, vector: v } => (Cut::Principal(GroupElement::new(gamma)), vector(f, v)?),
                        SummandSection::Limit { c, vector: v } => (Cut::Limit(*c), vector(f, v)?),
                    });
                }
                Lattice::ideal_sum(field, l.dim, "M", summands).map_err(|e| err("lattice".into(), e.to_string()))
            }
            _ => Err(err("lattice".into(), "give exactly one of `generators` or `summands`".into())),
        }
    }

    fn params(&self, field: &ValuedField, subject: &Subject, n: u32, source: Option<&str>) -> Result<Params, ConfigError> {
        let c = &self.checks;
        let rank = field.rank();
        let gammas = match &c.gammas {
            Some(gs) => {
                if let Some(g) = gs.iter().find(|g| g.len() != rank) {
                    return Err(ConfigError {
                        field: "checks.gammas".into(),
                        line: line_of(source, "gammas"),
                        message: format!("degree {g:?} has rank {}, the value group has rank {rank}", g.len()),
                    });
                }
                gs.iter().map(|g| GroupElement::new(g)).collect()
            }
            None if rank == 1 => (-2..=2).map(|a| GroupElement::new(&[a])).collect(),
            None => (-1..=1).flat_map(|a| (-1..=1).map(move |b| GroupElement::new(&[a, b]))).collect(),
        };
        let subalgebra = match (&c.subalgebra, subject) {
            (Some(gs), Subject::Algebra(p)) => gs
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    p.parse_element(g).map_err(|e| ConfigError {
                        field: format!("checks.subalgebra[{i}]"),
                        line: line_of(source, "subalgebra"),
                        message: e.to_string(),
                    })
                })
                .collect::<Result<_, _>>()?,
            (Some(_), Subject::Lattice(_)) => {
                return Err(ConfigError { field: "checks.subalgebra".into(), line: line_of(source, "subalgebra"), message: "needs an algebra".into() })
            }
            (None, _) => Vec::new(),
        };
        if self.checks.run.iter().any(|r| r == CheckId::Subalgebra.name()) && subalgebra.is_empty() {
            return Err(ConfigError {
                field: "checks.subalgebra".into(),
                line: line_of(source, "[checks]"),
                message: "the subalgebra check needs generators".into(),
            });
        }
        Ok(Params {
            gammas,
            lemma_max: c.lemma_max.unwrap_or(4).min(n),
            pair_degree: c.pair_degree.unwrap_or(2).min(n),
            strategy_degree: c.strategy_degree.unwrap_or(4),
            subalgebra,
            subalgebra_cap: c.subalgebra_cap.unwrap_or(12),
            tensor_bound: c.tensor_bound.unwrap_or(4).min(n),
        })
    }
}

fn presentation_error_index(e: &crate::freealg::PresentationError, rels: &[&str]) -> Option<usize> {
    use crate::freealg::PresentationError as P;
    let mentions = |name: &str| rels.iter().position(|r| r.split(|c: char| !(c.is_alphanumeric() || c == '_')).any(|t| t == name));
    match e {
        P::Syntax { index, .. } | P::MissingEquals { index } | P::LhsNotMonomial(index) => Some(*index),
        P::UnknownIdent { name, .. } | P::UnknownConstant(name) => mentions(name),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QPLANE: &str = r#"
max_degree = 4

[field]
base = "Q"

[valuation]
kind = "p-adic"
p = 3

[constants]
q = "2"

[algebra]
generators = ["Y", "X"]
relations = ["X*Y = q*Y*X"]
mode = "graded"

[checks]
run = ["valuation_axioms", "unramified"]
"#;

    #[test]
    fn parses_and_orders_checks() {
        let inst = RunConfig::load(QPLANE).unwrap();
        assert_eq!(inst.checks, [CheckId::Unramified, CheckId::ValuationAxioms]);
        assert_eq!(inst.max_degree, 4);
        assert_eq!(inst.params.gammas.len(), 5);
        let Subject::Algebra(p) = &inst.subject else { panic!() };
        assert_eq!(p.rules().len(), 1);
        let round = RunConfig::from_toml(&inst.config.to_toml()).unwrap();
        assert_eq!(round, inst.config);
    }

    #[test]
    fn diagnostics_carry_lines() {
        let e = RunConfig::load(&QPLANE.replace("[\"valuation_axioms\", \"unramified\"]", "[]")).unwrap_err();
        assert_eq!((e.field.as_str(), e.line), ("checks.run", Some(20)));
        let e = RunConfig::load(&QPLANE.replace("\"unramified\"]", "\"bogus\"]")).unwrap_err();
        assert_eq!(e.field, "checks.run[1]");
        assert_eq!(e.line, Some(20));
        let e = RunConfig::load(&QPLANE.replace("q*Y*X", "r*Y*X")).unwrap_err();
        assert_eq!((e.field.as_str(), e.line), ("algebra.relations[0]", Some(16)));
        let e = RunConfig::load(&QPLANE.replace("p = 3", "p = \"3\"")).unwrap_err();
        assert_eq!(e.line, Some(7));
        let e = RunConfig::load(&QPLANE.replace("p = 3", "p = 4")).unwrap_err();
        assert_eq!(e.field, "valuation");
        assert!(RunConfig::load(&QPLANE.replace("mode", "moda")).is_err());
    }

    #[test]
    fn lattice_configs() {
        let src = r#"
[field]
base = "Q"
vars = ["X", "Y"]

[valuation]
kind = "monomial"

[lattice]
dim = 2
summands = [
  { cut = "principal", gamma = [0, 0], vector = ["1", "0"] },
  { cut = "limit", c = 1, vector = ["0", "1"] },
]

[checks]
run = ["unramified", "lattice"]
"#;
        let inst = RunConfig::load(src).unwrap();
        assert!(matches!(inst.subject, Subject::Lattice(_)));
        assert_eq!(inst.params.gammas.len(), 9);
        let e = RunConfig::load(&src.replace("\"lattice\"]", "\"reduction\"]")).unwrap_err();
        assert!(e.message.contains("does not apply"));
    }
}
