//! The known checks, in the order a run executes them.

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Instance, Params, Subject};
use crate::field::ValuedField;
use crate::freealg::Presentation;
use crate::group::GroupElement;
use crate::lattice::{Cut, Lattice, LatticeKind};
use crate::reductor::{Reductor, ReductorError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckId {
    NormalForm,
    Lattice,
    Unramified,
    Reduction,
    ValuationAxioms,
    ValuationRing,
    Connection,
    SymbolsCommute,
    ConnectedGraded,
    Strong,
    Lemma,
    Crossed,
    Subalgebra,
    Tensor,
}

pub const ALL_CHECKS: [CheckId; 14] = [
    CheckId::NormalForm,
    CheckId::Lattice,
    CheckId::Unramified,
    CheckId::Reduction,
    CheckId::ValuationAxioms,
    CheckId::ValuationRing,
    CheckId::Connection,
    CheckId::SymbolsCommute,
    CheckId::ConnectedGraded,
    CheckId::Strong,
    CheckId::Lemma,
    CheckId::Crossed,
    CheckId::Subalgebra,
    CheckId::Tensor,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub status: Status,
    pub summary: String,
    pub details: Value,
}

impl Outcome {
    fn verdict(passed: bool, summary: String, details: Value) -> Outcome {
        Outcome { status: if passed { Status::Pass } else { Status::Fail }, summary, details }
    }

    pub fn error(message: String, details: Value) -> Outcome {
        Outcome { status: Status::Error, summary: message, details }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Structured form of a reductor error for reports.
pub fn error_json(e: &ReductorError) -> Value {
    match e {
        ReductorError::CoefficientEscape { degree, word } => {
            json!({ "kind": "coefficient-escape", "degree": degree, "word": word, "message": e.to_string() })
        }
        ReductorError::DegreeOverflow { degree, bound } => {
            json!({ "kind": "degree-overflow", "degree": degree, "bound": bound, "message": e.to_string() })
        }
        ReductorError::Precondition(_) => json!({ "kind": "precondition", "message": e.to_string() }),
        ReductorError::Inconclusive(_) => json!({ "kind": "inconclusive", "message": e.to_string() }),
        ReductorError::Unsupported(_) => json!({ "kind": "unsupported", "message": e.to_string() }),
        _ => json!({ "kind": "error", "message": e.to_string() }),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report data serializes")
}

impl CheckId {
    pub fn name(self) -> &'static str {
        match self {
            CheckId::NormalForm => "normal_form",
            CheckId::Lattice => "lattice",
            CheckId::Unramified => "unramified",
            CheckId::Reduction => "reduction",
            CheckId::ValuationAxioms => "valuation_axioms",
            CheckId::ValuationRing => "valuation_ring",
            CheckId::Connection => "connection",
            CheckId::SymbolsCommute => "symbols_commute",
            CheckId::ConnectedGraded => "connected_graded",
            CheckId::Strong => "strong",
            CheckId::Lemma => "lemma",
            CheckId::Crossed => "crossed",
            CheckId::Subalgebra => "subalgebra",
            CheckId::Tensor => "tensor",
        }
    }

    pub fn from_name(name: &str) -> Option<CheckId> {
        ALL_CHECKS.into_iter().find(|c| c.name() == name)
    }

    pub fn applies_to_algebras(self) -> bool {
        true
    }

    pub fn applies_to_lattices(self) -> bool {
        matches!(self, CheckId::Lattice | CheckId::Unramified)
    }

    /// Whether the check runs on the reductor rather than the presentation.
    fn needs_reductor(self) -> bool {
        !matches!(self, CheckId::NormalForm)
    }

    /// Definition of the check and the notion it tests.
    pub fn explain(self) -> &'static str {
        match self {
            CheckId::NormalForm => {
                "normal_form: the rewriting system is confluent (every overlap and inclusion of rule \
                 left-hand sides resolves) and leftmost and rightmost reduction agree on every word up \
                 to the strategy degree.\nanchor: diamond lemma, normal words as a PBW-type basis."
            }
            CheckId::Lattice => {
                "lattice: the triangular O_v-basis of each lattice and its original generators span \
                 the same module (generators have integral coordinates whose residues have full rank).\n\
                 For an ideal sum, boundary elements of each summand lie inside and just outside.\n\
                 anchor: O_v-lattices in a finite-dimensional K-space."
            }
            CheckId::Unramified => {
                "unramified: for every degree n, dim over k_v of F_nL / m_v F_nL equals dim_K F_nA, and \
                 likewise for L ∩ R_n in the degree-n piece.\nanchor: unramified reduction, free lattices."
            }
            CheckId::Reduction => {
                "reduction: structure constants of L / m_v L on the residues of the basis of L, with \
                 associativity, unit, and agreement between multiplying in the reduced presentation and \
                 reducing the product taken over K.\nanchor: the reduction of A at the reductor."
            }
            CheckId::ValuationAxioms => {
                "valuation_axioms: v_F(ab) = v_F(a) + v_F(b) and v_F(a+b) >= min(v_F(a), v_F(b)) over \
                 every ordered pair of a deterministic element pool (extended by --seed). Reports the \
                 first counterexample.\nanchor: value function of a separated filtration; valuation when \
                 the associated graded ring is a domain."
            }
            CheckId::ValuationRing => {
                "valuation_ring: for a commutative extension O_v[xi] of O_v, whether L is a valuation \
                 ring, decided through the residue polynomial, and cross-checked on a pool of fractions.\n\
                 anchor: valuation rings of K(xi) over O_v."
            }
            CheckId::Connection => {
                "connection: per degree, F_nL unramified, its associated graded piece unramified, and the \
                 Rees module torsion free; the three verdicts must agree.\nanchor: unramified reductors \
                 versus their associated graded and Rees rings."
            }
            CheckId::SymbolsCommute => {
                "symbols_commute: the principal symbols of the generators commute in G_F(L), so G_F(L) \
                 is a quotient of a polynomial ring; graded dimensions are compared with the polynomial \
                 ones.\nanchor: polynomial associated graded ring."
            }
            CheckId::ConnectedGraded => {
                "connected_graded: for a graded presentation, L ∩ R_n equals the image of O_v<X>_n and \
                 L ∩ R_1 is spanned by the generators.\nanchor: connected graded reductor."
            }
            CheckId::Strong => {
                "strong: the valuation filtration F_g = (f_g K) L satisfies F_g F_d = F_{g+d} for the \
                 configured degrees, i.e. it is Γ-separated and strong.\nanchor: valuation filtration."
            }
            CheckId::Lemma => {
                "lemma: m_v F_j L ∩ F_i A = m_v F_i L for i <= j, and (f_g K) L ∩ F_n A = (f_g K) F_n L.\n\
                 anchor: intersections of lattice filtrations."
            }
            CheckId::Crossed => {
                "crossed: the associated graded ring of the valuation filtration is the twisted group \
                 ring A-bar * Γ: each piece is a copy of A-bar transported by a uniformizer, and the \
                 section multiplies with the expected twist.\nanchor: twisted group ring, crossed product."
            }
            CheckId::Subalgebra => {
                "subalgebra: L' = L ∩ A' for the subalgebra A' generated by the configured elements, \
                 degree by degree, and whether L' is an unramified reductor of A'.\nanchor: reductors of \
                 subalgebras."
            }
            CheckId::Tensor => {
                "tensor: the tensor product of the algebra with itself, with reductor generated by the \
                 factors; per-degree dimensions, the product filtration and unramifiedness.\nanchor: \
                 tensor products of reductors."
            }
        }
    }
}

pub fn explain(name: &str) -> Result<&'static str, String> {
    CheckId::from_name(name).map(CheckId::explain).ok_or_else(|| {
        let known: Vec<&str> = ALL_CHECKS.iter().map(|c| c.name()).collect();
        format!("unknown check `{name}` (known: {})", known.join(", "))
    })
}

fn run_normal_form(p: &Presentation, params: &Params, n: u32) -> Result<Outcome, ReductorError> {
    let overlaps = p.confluence_check(n.max(params.strategy_degree) + 1)?;
    let discrepancies = p.strategy_discrepancies(params.strategy_degree)?;
    let ok = overlaps.is_empty() && discrepancies.is_empty();
    let details = json!({
        "unresolved_overlaps": overlaps.iter().map(|o| p.fmt_word(&o.word)).collect::<Vec<_>>(),
        "strategy_degree": params.strategy_degree,
        "discrepancies": discrepancies.iter().map(|w| p.fmt_word(w)).collect::<Vec<_>>(),
    });
    let summary = format!("{} unresolved overlaps, {} strategy discrepancies", overlaps.len(), discrepancies.len());
    Ok(Outcome::verdict(ok, summary, details))
}

fn run_lattice_algebra(r: &Reductor) -> Result<Outcome, ReductorError> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 0..=r.bound() {
        let f = r.filtered_lattice(n)?.mutual_membership()?;
        let g = r.graded_lattice(n)?.mutual_membership()?;
        ok &= f && g;
        rows.push(json!({ "degree": n, "filtered": f, "graded": g }));
    }
    let summary = format!("{} lattices checked against their generators", 2 * rows.len());
    Ok(Outcome::verdict(ok, summary, json!({ "rows": rows })))
}

/// For an ideal sum: each summand's boundary element lies in the lattice and
/// a slightly larger multiple does not.
fn run_lattice_bare(field: &ValuedField, l: &Lattice) -> Result<Outcome, ReductorError> {
    match l.kind() {
        LatticeKind::Fg(_) => {
            let ok = l.mutual_membership()?;
            let rank = l.rank()?;
            Ok(Outcome::verdict(ok, format!("triangular basis of rank {rank}"), json!({ "rank": rank, "mutual_membership": ok })))
        }
        LatticeKind::IdealSum(summands) => {
            let rank = field.rank();
            let mut rows = Vec::new();
            let mut ok = true;
            for (cut, d) in summands {
                let (inside, outside): (Vec<GroupElement>, GroupElement) = match cut {
                    Cut::Principal(g) => {
                        let mut below = g.coords().expect("finite cut").to_vec();
                        *below.last_mut().expect("rank >= 1") -= 1;
                        (vec![g.clone()], GroupElement::new(&below))
                    }
                    Cut::Limit(c) => {
                        let deep = |k: i64| {
                            let mut v = vec![0; rank];
                            v[0] = *c;
                            v[rank - 1] -= k;
                            GroupElement::new(&v)
                        };
                        let mut out = vec![0; rank];
                        out[0] = c - 1;
                        ((0..4).map(|k| deep(10_i64.pow(k))).collect(), GroupElement::new(&out))
                    }
                };
                let scaled = |g: &GroupElement| -> Result<Vec<_>, ReductorError> {
                    let t = field.uniformizer_for(g)?;
                    Ok(d.iter().map(|x| x * &t).collect())
                };
                let mut inside_ok = true;
                for g in &inside {
                    inside_ok &= l.member(&scaled(g)?)?;
                }
                let outside_ok = !l.member(&scaled(&outside)?)?;
                ok &= inside_ok && outside_ok;
                rows.push(json!({ "cut": cut.to_string(), "inside": inside_ok, "outside": outside_ok }));
            }
            Ok(Outcome::verdict(ok, "ideal sum membership at the cut boundaries".into(), json!({ "summands": rows })))
        }
    }
}

fn all_unramified(rows: &[crate::reductor::UnramifiedRow]) -> bool {
    rows.iter().all(|r| r.filtered.unramified && r.graded.unramified)
}

fn run_on_reductor(id: CheckId, r: &Reductor, params: &Params, seed: Option<u64>) -> Result<Outcome, ReductorError> {
    let p = r.presentation();
    Ok(match id {
        CheckId::NormalForm => run_normal_form(p, params, r.bound())?,
        CheckId::Lattice => run_lattice_algebra(r)?,
        CheckId::Unramified => {
            let rows = r.check_unramified()?;
            let ok = all_unramified(&rows);
            let bad: Vec<u32> = rows.iter().filter(|x| !(x.filtered.unramified && x.graded.unramified)).map(|x| x.filtered.degree).collect();
            let summary = if ok { format!("unramified at degrees 0..={}", r.bound()) } else { format!("ramified at degrees {bad:?}") };
            Outcome::verdict(ok, summary, json!({ "rows": to_value(&rows), "components": to_value(&r.components()) }))
        }
        CheckId::Reduction => {
            let red = r.reduction()?;
            Outcome::verdict(red.passed(), red.presentation.clone(), to_value(&red))
        }
        CheckId::ValuationAxioms => {
            let rep = r.valuation_axioms_check(&r.element_pool(seed))?;
            let summary = match &rep.verdict {
                crate::reductor::AxiomsVerdict::Valuation => format!("valuation on {} pairs", rep.pairs_checked),
                crate::reductor::AxiomsVerdict::Counterexample { a, b, value, product, .. } => {
                    let op = if *product { "product" } else { "sum" };
                    format!("counterexample ({a}, {b}): {op} value {value}")
                }
            };
            Outcome::verdict(rep.passed(), summary, to_value(&rep))
        }
        CheckId::ValuationRing => {
            let rep = r.valuation_ring_check()?;
            let summary = format!("residue polynomial {}; valuation ring: {}", rep.residue_polynomial, rep.is_valuation_ring);
            Outcome::verdict(rep.passed, summary, to_value(&rep))
        }
        CheckId::Connection => {
            let rep = r.connection_check()?;
            Outcome::verdict(rep.passed, format!("verdicts agree: {}", rep.verdicts_agree), to_value(&rep))
        }
        CheckId::SymbolsCommute => {
            let rep = r.symbols_commute_check()?;
            let summary = format!("{} noncommuting symbol pairs", rep.noncommuting.len());
            Outcome::verdict(rep.passed, summary, to_value(&rep))
        }
        CheckId::ConnectedGraded => {
            let rep = r.connected_graded_check()?;
            let summary = format!("degree one residue dim {} of {}", rep.degree_one_residue_dim, rep.degree_one_dim);
            Outcome::verdict(rep.passed, summary, to_value(&rep))
        }
        CheckId::Strong => {
            let pairs: Vec<_> = params.gammas.iter().flat_map(|g| params.gammas.iter().map(move |d| (g.clone(), d.clone()))).collect();
            let rep = r.strong_filtration_check(&pairs)?;
            let summary = format!("{} degree pairs, {} failures", rep.pairs.len(), rep.failures.len());
            Outcome::verdict(rep.passed, summary, to_value(&rep))
        }
        CheckId::Lemma => {
            let rep = r.lemma_identities_check(params.lemma_max, &params.gammas, r.bound())?;
            let total = rep.maximal_ideal.len() + rep.field_filtration.len();
            Outcome::verdict(rep.passed, format!("{total} identities"), to_value(&rep))
        }
        CheckId::Crossed => {
            let rep = r.crossed_product_check(&params.gammas, params.pair_degree)?;
            let summary = format!("{} pairs, {} failures", rep.pairs_checked, rep.failures.len());
            Outcome::verdict(rep.passed, summary, to_value(&rep))
        }
        CheckId::Subalgebra => {
            let rep = r.subalgebra_reductor(&params.subalgebra, params.subalgebra_cap)?;
            let ranks: Vec<Option<usize>> = rep.rows.iter().map(|x| x.rank).collect();
            Outcome::verdict(rep.passed, format!("ranks {ranks:?}"), to_value(&rep))
        }
        CheckId::Tensor => {
            let bound = params.tensor_bound;
            let base = if bound < r.bound() { crate::reductor::build_reductor(p, bound)? } else { r.clone() };
            let rep = base.tensor_reductor(&base, bound)?;
            Outcome::verdict(rep.passed, format!("graded dims {:?}", rep.graded_dims), to_value(&rep))
        }
    })
}

/// Build the reductor (for algebras) and run one check. Check failures are
/// outcomes; errors become `Status::Error` outcomes.
pub fn run_check(id: CheckId, inst: &Instance, reductor: Option<&Result<Reductor, ReductorError>>) -> Outcome {
    let result = match (&inst.subject, reductor) {
        (Subject::Algebra(p), _) if !id.needs_reductor() => run_normal_form(p, &inst.params, inst.max_degree),
        (Subject::Algebra(_), Some(Ok(r))) => run_on_reductor(id, r, &inst.params, inst.seed),
        (Subject::Algebra(_), Some(Err(e))) => return Outcome::error(format!("no reductor: {e}"), json!({ "build": error_json(e) })),
        (Subject::Algebra(_), None) => return Outcome::error("no reductor".into(), Value::Null),
        (Subject::Lattice(l), _) => match id {
            CheckId::Lattice => run_lattice_bare(&inst.field, l),
            CheckId::Unramified => (|| {
                let row = l.row(1, l.dim())?;
                let summary = format!("residue dim {} of {}", row.residue_dim, row.dim);
                Ok(Outcome::verdict(row.unramified, summary, json!({ "rows": [to_value(&row)] })))
            })(),
            _ => unreachable!("validated"),
        },
    };
    result.unwrap_or_else(|e| Outcome::error(e.to_string(), error_json(&e)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip_in_order() {
        for (i, c) in ALL_CHECKS.iter().enumerate() {
            assert_eq!(CheckId::from_name(c.name()), Some(*c));
            assert!(c.explain().starts_with(c.name()));
            if i > 0 {
                assert!(ALL_CHECKS[i - 1] < *c);
            }
        }
        assert!(explain("crossed").unwrap().contains("twisted group ring"));
        assert!(explain("strong").unwrap().contains("Γ-separated and strong"));
        assert!(explain("bogus").unwrap_err().contains("unknown check"));
    }
}
