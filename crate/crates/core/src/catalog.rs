//! Built-in examples with expected report values, re-verified on every run.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{AlgebraSection, ChecksSection, FieldSection, LatticeSection, RunConfig, SummandSection, ValuationSection};
use crate::freealg::FiltrationMode;
use crate::par;
use crate::report::{self, Report};

pub const NAMES: [&str; 7] = ["quadratic_ext", "usl2", "weyl_a1", "quantum_plane", "quantum_weyl", "ramified_lattice", "bad_q_plane"];

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated outright for the example.
    Stated,
    /// Computed by an independent count or oracle.
    Derived,
    /// Holds by construction.
    Trivial,
}

/// A JSON pointer into the timing-free report and the value expected there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expectation {
    pub pointer: String,
    pub value: Value,
    pub provenance: Provenance,
}

type ExpectationsFn = fn(u32) -> Vec<Expectation>;

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// Largest degree bound the entry is run at.
    pub degree_bound: u32,
    pub config: RunConfig,
    pub expected: Vec<Expectation>,
    expectations: ExpectationsFn,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub entry: String,
    pub pointer: String,
    pub expected: Value,
    pub actual: Option<Value>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryOutcome {
    pub name: String,
    pub max_degree: u32,
    pub expectations: usize,
    pub mismatches: Vec<Mismatch>,
    #[serde(skip)]
    pub report: Report,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub max_degree: u32,
    pub entries: Vec<EntryOutcome>,
    pub mismatches: usize,
}

fn e(pointer: impl Into<String>, value: Value, provenance: Provenance) -> Expectation {
    Expectation { pointer: pointer.into(), value, provenance }
}

fn pass(check: &str) -> Expectation {
    e(format!("/checks/{check}/status"), json!("pass"), Provenance::Derived)
}

fn q3() -> (FieldSection, ValuationSection) {
    (FieldSection { base: "Q".into(), vars: vec![] }, ValuationSection::PAdic { p: 3 })
}

fn algebra_config(
    (field, valuation): (FieldSection, ValuationSection),
    constants: &[(&str, &str)],
    generators: &[&str],
    relations: &[&str],
    mode: FiltrationMode,
    checks: ChecksSection,
) -> RunConfig {
    RunConfig {
        max_degree: None,
        format: None,
        seed: None,
        field,
        valuation,
        constants: constants.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect::<BTreeMap<_, _>>(),
        algebra: Some(AlgebraSection {
            generators: generators.iter().map(|g| g.to_string()).collect(),
            weights: None,
            relations: relations.iter().map(|r| r.to_string()).collect(),
            mode,
        }),
        lattice: None,
        checks,
    }
}

fn run_list(names: &[&str]) -> ChecksSection {
    ChecksSection { run: names.iter().map(|s| s.to_string()).collect(), ..Default::default() }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Per-degree `dim`/`rank` expectations from a closed-form count.
fn component_counts(n: u32, field: &str, count: impl Fn(u64) -> u64) -> Vec<Expectation> {
    (0..=n).map(|k| e(format!("/build/components/{k}/{field}"), json!(count(k as u64)), Provenance::Derived)).collect()
}

fn quadratic_ext(n: u32) -> Vec<Expectation> {
    let mut v = vec![e("/build/status", json!("ok"), Provenance::Trivial), pass("normal_form"), pass("lattice"), pass("unramified")];
    v.extend(component_counts(n, "rank", |k| (k + 1).min(2)));
    if n >= 2 {
        v.push(e("/checks/reduction/details/presentation", json!("F5, trivial<xi>; xi^2 -> xi"), Provenance::Stated));
        v.push(pass("reduction"));
        let ce = "/checks/valuation_axioms/details";
        v.push(e(format!("{ce}/verdict"), json!("counterexample"), Provenance::Derived));
        v.push(e(format!("{ce}/a"), json!("xi"), Provenance::Derived));
        v.push(e(format!("{ce}/b"), json!("xi + 4"), Provenance::Derived));
        v.push(e(format!("{ce}/value_a"), json!("(0)"), Provenance::Derived));
        v.push(e(format!("{ce}/value_b"), json!("(0)"), Provenance::Derived));
        v.push(e(format!("{ce}/value"), json!("(1)"), Provenance::Derived));
        v.push(e(format!("{ce}/product"), json!(true), Provenance::Derived));
    }
    if n >= 1 {
        v.push(e("/checks/valuation_ring/details/is_valuation_ring", json!(false), Provenance::Derived));
        v.push(e("/checks/valuation_ring/details/pool_consistent", json!(true), Provenance::Derived));
    }
    v
}

fn usl2(n: u32) -> Vec<Expectation> {
    let mut v = vec![pass("normal_form"), pass("lattice"), pass("unramified"), pass("connection"), pass("symbols_commute"), pass("crossed")];
    v.extend(component_counts(n, "dim", |k| binom(k + 3, 3)));
    v.extend(component_counts(n, "rank", |k| binom(k + 3, 3)));
    if n >= 2 {
        v.push(e(
            "/checks/reduction/details/presentation",
            json!("F3, trivial<f < h < e>; e*f -> f*e + h; h*f -> f*h + f; e*h -> h*e + e"),
            Provenance::Derived,
        ));
        v.push(pass("reduction"));
    }
    for k in 0..=n {
        v.push(e(format!("/checks/subalgebra/details/rows/{k}/rank"), json!(k + 1), Provenance::Derived));
    }
    v.push(pass("subalgebra"));
    v
}

fn weyl_a1(n: u32) -> Vec<Expectation> {
    let mut v = vec![
        pass("normal_form"),
        pass("lattice"),
        pass("unramified"),
        pass("valuation_axioms"),
        pass("connection"),
        pass("symbols_commute"),
        pass("strong"),
        e("/checks/valuation_axioms/details/verdict", json!("valuation"), Provenance::Derived),
    ];
    v.extend(component_counts(n, "dim", |k| (k + 1) * (k + 2) / 2));
    v.extend(component_counts(n, "rank", |k| (k + 1) * (k + 2) / 2));
    if n >= 2 {
        v.push(e("/checks/reduction/details/presentation", json!("F3, trivial<X < D>; D*X -> X*D + 1"), Provenance::Derived));
        v.push(pass("reduction"));
    }
    v
}

fn quantum_plane(n: u32) -> Vec<Expectation> {
    let mut v = vec![
        pass("normal_form"),
        pass("lattice"),
        pass("unramified"),
        pass("valuation_axioms"),
        pass("connection"),
        pass("connected_graded"),
        pass("strong"),
        pass("lemma"),
        pass("crossed"),
        pass("subalgebra"),
        pass("tensor"),
    ];
    v.extend(component_counts(n, "graded_dim", |k| k + 1));
    v.extend(component_counts(n, "gr_rank", |k| k + 1));
    if n >= 2 {
        v.push(e("/checks/reduction/details/presentation", json!("F3, trivial<Y < X>; X*Y -> 2*Y*X"), Provenance::Derived));
        v.push(pass("reduction"));
    }
    for k in 0..=n {
        v.push(e(format!("/checks/subalgebra/details/rows/{k}/rank"), json!(k / 2 + 1), Provenance::Derived));
    }
    let t = n.min(4) as u64;
    let conv: Vec<u64> = (0..=t).map(|k| (0..=k).map(|i| (i + 1) * (k - i + 1)).sum()).collect();
    v.push(e("/checks/tensor/details/graded_dims", json!(conv), Provenance::Derived));
    v.push(e("/checks/tensor/details/unramified", json!(true), Provenance::Derived));
    v
}

fn quantum_weyl(n: u32) -> Vec<Expectation> {
    let mut v = vec![
        pass("normal_form"),
        pass("lattice"),
        pass("unramified"),
        pass("valuation_axioms"),
        pass("connection"),
        pass("strong"),
        e("/checks/valuation_axioms/details/verdict", json!("valuation"), Provenance::Derived),
    ];
    v.extend(component_counts(n, "rank", |k| (k + 1) * (k + 2) / 2));
    if n >= 2 {
        v.push(e("/checks/reduction/details/presentation", json!("F3, trivial<Y < X>; X*Y -> 2*Y*X + 1"), Provenance::Derived));
        v.push(pass("reduction"));
    }
    v
}

fn ramified_lattice(_: u32) -> Vec<Expectation> {
    let row = "/checks/unramified/details/rows/0";
    vec![
        pass("lattice"),
        e(format!("{row}/residue_dim"), json!(1), Provenance::Derived),
        e(format!("{row}/dim"), json!(2), Provenance::Trivial),
        e(format!("{row}/unramified"), json!(false), Provenance::Derived),
        e("/checks/unramified/status", json!("fail"), Provenance::Derived),
    ]
}

fn bad_q_plane(n: u32) -> Vec<Expectation> {
    if n < 2 {
        return vec![e("/build/status", json!("ok"), Provenance::Trivial), pass("normal_form")];
    }
    vec![
        pass("normal_form"),
        e("/build/status", json!("error"), Provenance::Derived),
        e("/build/error/kind", json!("coefficient-escape"), Provenance::Derived),
        e("/build/error/degree", json!(2), Provenance::Derived),
        e("/build/error/word", json!("X*Y"), Provenance::Derived),
        e("/checks/unramified/status", json!("error"), Provenance::Trivial),
        e("/passed", json!(false), Provenance::Trivial),
    ]
}

pub fn get_example(name: &str) -> Result<CatalogEntry, String> {
    let graded = FiltrationMode::Graded;
    let filtered = FiltrationMode::GeneratorFiltered;
    let (summary, degree_bound, config, expectations): (&str, u32, RunConfig, ExpectationsFn) = match name {
        "quadratic_ext" => (
            "O_v[xi] over F_5(X) with xi^2 = (1 - X)xi - X; reduces to k[u] with u^2 = u",
            6,
            algebra_config(
                (FieldSection { base: "F5".into(), vars: vec!["X".into()] }, ValuationSection::Monomial),
                &[],
                &["xi"],
                &["xi^2 = (1 - X)*xi - X"],
                filtered,
                run_list(&["normal_form", "lattice", "unramified", "reduction", "valuation_axioms", "valuation_ring"]),
            ),
            quadratic_ext,
        ),
        "usl2" => (
            "enveloping algebra of sl2 over Q, 3-adic, PBW filtration",
            5,
            algebra_config(
                q3(),
                &[],
                &["f", "h", "e"],
                &["e*f = f*e + h", "h*f = f*h - 2*f", "e*h = h*e - 2*e"],
                filtered,
                ChecksSection {
                    subalgebra: Some(vec!["h".into()]),
                    ..run_list(&["normal_form", "lattice", "unramified", "reduction", "connection", "symbols_commute", "crossed", "subalgebra"])
                },
            ),
            usl2,
        ),
        "weyl_a1" => (
            "first Weyl algebra over Q, 3-adic, Bernstein filtration",
            6,
            algebra_config(
                q3(),
                &[],
                &["X", "D"],
                &["D*X = X*D + 1"],
                filtered,
                run_list(&["normal_form", "lattice", "unramified", "reduction", "valuation_axioms", "connection", "symbols_commute", "strong"]),
            ),
            weyl_a1,
        ),
        "quantum_plane" => (
            "quantum plane XY = qYX, q = 2, over Q, 3-adic, graded",
            6,
            algebra_config(
                q3(),
                &[("q", "2")],
                &["Y", "X"],
                &["X*Y = q*Y*X"],
                graded,
                ChecksSection {
                    subalgebra: Some(vec!["X^2".into()]),
                    ..run_list(&[
                        "normal_form",
                        "lattice",
                        "unramified",
                        "reduction",
                        "valuation_axioms",
                        "connection",
                        "connected_graded",
                        "strong",
                        "lemma",
                        "crossed",
                        "subalgebra",
                        "tensor",
                    ])
                },
            ),
            quantum_plane,
        ),
        "quantum_weyl" => (
            "quantum Weyl algebra XY = qYX + 1, q = 2, over Q, 3-adic",
            6,
            algebra_config(
                q3(),
                &[("q", "2")],
                &["Y", "X"],
                &["X*Y = q*Y*X + 1"],
                filtered,
                run_list(&["normal_form", "lattice", "unramified", "reduction", "valuation_axioms", "connection", "strong"]),
            ),
            quantum_weyl,
        ),
        "ramified_lattice" => (
            "ideal-sum lattice O_v e1 + m e2 over Q(X,Y) with the lex valuation, m = {first coordinate >= 1}",
            6,
            RunConfig {
                max_degree: None,
                format: None,
                seed: None,
                field: FieldSection { base: "Q".into(), vars: vec!["X".into(), "Y".into()] },
                valuation: ValuationSection::Monomial,
                constants: BTreeMap::new(),
                algebra: None,
                lattice: Some(LatticeSection {
                    dim: 2,
                    generators: vec![],
                    summands: vec![
                        SummandSection::Principal { gamma: vec![0, 0], vector: vec!["1".into(), "0".into()] },
                        SummandSection::Limit { c: 1, vector: vec!["0".into(), "1".into()] },
                    ],
                }),
                checks: run_list(&["lattice", "unramified"]),
            },
            ramified_lattice,
        ),
        "bad_q_plane" => (
            "quantum plane with q = 1/3: the normal form of XY leaves O_v",
            6,
            algebra_config(q3(), &[("q", "1/3")], &["Y", "X"], &["X*Y = q*Y*X"], graded, run_list(&["normal_form", "unramified", "valuation_axioms"])),
            bad_q_plane,
        ),
        _ => return Err(format!("unknown example `{name}` (known: {})", NAMES.join(", "))),
    };
    let mut entry = CatalogEntry { name: NAMES.iter().find(|n| **n == name).expect("listed"), summary, degree_bound, config, expected: vec![], expectations };
    entry.set_max_degree(degree_bound);
    Ok(entry)
}

pub fn entries() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| get_example(n).expect("listed")).collect()
}

impl CatalogEntry {
    /// Run at `min(n, degree_bound)`, recomputing the expectations.
    pub fn set_max_degree(&mut self, n: u32) {
        let n = n.min(self.degree_bound);
        self.config.max_degree = Some(n);
        self.expected = (self.expectations)(n);
    }

    pub fn max_degree(&self) -> u32 {
        self.config.max_degree.unwrap_or(self.degree_bound)
    }

    pub fn run(&self) -> EntryOutcome {
        self.run_with_seed(None)
    }

    pub fn run_with_seed(&self, seed: Option<u64>) -> EntryOutcome {
        let mut config = self.config.clone();
        config.seed = seed;
        let inst = config.validate().expect("catalog configs validate");
        let report = report::run(&inst);
        let value = report.to_value(false);
        let mismatches = self
            .expected
            .iter()
            .filter_map(|x| {
                let actual = value.pointer(&x.pointer).cloned();
                (actual.as_ref() != Some(&x.value)).then(|| Mismatch {
                    entry: self.name.into(),
                    pointer: x.pointer.clone(),
                    expected: x.value.clone(),
                    actual,
                    provenance: x.provenance,
                })
            })
            .collect();
        EntryOutcome { name: self.name.into(), max_degree: self.max_degree(), expectations: self.expected.len(), mismatches, report }
    }
}

/// Run the given entries (concurrently) at bound `n`. Entries already set to
/// that bound keep their expectations as given.
pub fn run_entries(entries: &[CatalogEntry], n: u32) -> Summary {
    let entries: Vec<CatalogEntry> = entries
        .iter()
        .map(|x| {
            let mut x = x.clone();
            if x.max_degree() != n.min(x.degree_bound) {
                x.set_max_degree(n);
            }
            x
        })
        .collect();
    let outcomes = par::map(&entries, CatalogEntry::run);
    let mismatches = outcomes.iter().map(|o| o.mismatches.len()).sum();
    Summary { max_degree: n, entries: outcomes, mismatches }
}

pub fn run_all(n: u32) -> Summary {
    run_entries(&entries(), n)
}

impl Summary {
    /// Timing-free JSON: the summary plus every entry report.
    pub fn to_json(&self) -> String {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|o| {
                let mut v = serde_json::to_value(o).expect("serializes");
                v["report"] = o.report.to_value(false);
                v
            })
            .collect();
        let v = json!({ "max_degree": self.max_degree, "mismatches": self.mismatches, "entries": entries });
        serde_json::to_string_pretty(&v).expect("serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for o in &self.entries {
            let verdict = if o.mismatches.is_empty() { "ok" } else { "MISMATCH" };
            s.push_str(&format!("{:<18} N={}  {:>3} expectations  {verdict}\n", o.name, o.max_degree, o.expectations));
            for m in &o.mismatches {
                let actual = m.actual.as_ref().map_or("missing".to_string(), Value::to_string);
                s.push_str(&format!("    {}: expected {}, got {actual}\n", m.pointer, m.expected));
            }
        }
        s.push_str(&format!("{} mismatches\n", self.mismatches));
        s
    }
}
