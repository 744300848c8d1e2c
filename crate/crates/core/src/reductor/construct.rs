use std::collections::BTreeMap;

use serde::Serialize;

use super::{build_reductor, Reductor, ReductorError};
use crate::field::{FieldElement, ValuedField};
use crate::freealg::{AlgebraElement, Presentation, Word};
use crate::lattice::{Lattice, LatticeRow};
use crate::linalg::{self, combine, KSolver};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubalgebraReductor {
    pub generators: Vec<String>,
    /// Product length at which `F_nA'` stopped growing for all `n ≤ N`.
    pub product_length: usize,
    pub rows: Vec<LatticeRow>,
    pub bases: Vec<Vec<String>>,
    pub passed: bool,
    #[serde(skip)]
    pub lattices: Vec<Lattice>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TensorReport {
    pub presentation: String,
    pub dims: Vec<usize>,
    pub graded_dims: Vec<usize>,
    /// `F_nΛ'' = Σ_{i+j=n} F_iΛ ⊗ F_jΛ'` per degree
    pub filtration_matches: Vec<bool>,
    pub unramified: bool,
    pub factors_unramified: bool,
    pub passed: bool,
    #[serde(skip)]
    pub reductor: Reductor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationRingReport {
    pub dimension: usize,
    pub residue_polynomial: String,
    /// A root or factor of the residue polynomial, when it is reducible.
    pub factor: Option<String>,
    pub is_valuation_ring: bool,
    pub pool_checked: usize,
    /// A pool element `x` with neither `x` nor `x^{-1}` in `Λ`.
    pub pool_witness: Option<String>,
    pub pool_consistent: bool,
    pub passed: bool,
}

/// Echelon basis keyed by leading (largest) word, each element monic.
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<Word, AlgebraElement>,
}

impl Echelon {
    fn insert(&mut self, mut a: AlgebraElement) -> bool {
        loop {
            let Some((w, c)) = a.terms().next_back().map(|(w, c)| (w.clone(), c.clone())) else {
                return false;
            };
            match self.rows.get(&w) {
                Some(r) => {
                    let t = r.scale(&c);
                    a = a.sub(&t);
                }
                None => {
                    let inv = c.inv().expect("nonzero");
                    self.rows.insert(w, a.scale(&inv));
                    return true;
                }
            }
        }
    }

    fn profile(&self, n: u32) -> Vec<usize> {
        (0..=n).map(|k| self.rows.keys().filter(|w| w.degree() <= k).count()).collect()
    }
}

impl Reductor {
    /// `Λ' = Λ ∩ A'` for the subalgebra `A'` generated by `gens`. `F_nA'` is
    /// the span of products of the generators lying in `F_nA`, grown by
    /// product length until it stops changing; `F_nΛ'` is the saturation of
    /// `F_nA'` inside `F_nΛ`.
    pub fn subalgebra_reductor(&self, gens: &[AlgebraElement], cap: usize) -> Result<SubalgebraReductor, ReductorError> {
        let p = self.presentation();
        let n_top = self.bound();
        let mut span = Echelon::default();
        span.insert(p.one());
        let mut layer = vec![p.one()];
        let mut profile = span.profile(n_top);
        let mut length = 0;
        loop {
            if length >= cap {
                return Err(ReductorError::Inconclusive(format!("F_nA' still growing at product length {cap}")));
            }
            length += 1;
            let mut next = Vec::new();
            for x in &layer {
                for g in gens {
                    let y = p.multiply(x, g)?;
                    if span.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            let np = span.profile(n_top);
            let stable = np == profile;
            profile = np;
            layer = next;
            if stable {
                break;
            }
        }
        let f = self.field();
        let mut rows = Vec::new();
        let mut bases = Vec::new();
        let mut lattices = Vec::new();
        for n in 0..=n_top {
            let in_fn: Vec<&AlgebraElement> = span.rows.iter().filter(|(w, _)| w.degree() <= n).map(|(_, a)| a).collect();
            let coords: Vec<_> = in_fn.iter().map(|a| self.coordinates(a)).collect::<Result<_, _>>()?;
            let d = self.dim(n);
            let gens: Vec<_> = linalg::saturate(f, &coords).iter().map(|u| combine(f, self.words().len(), u, self.basis().rows())[..d].to_vec()).collect();
            let lattice = Lattice::fg(f, d, format!("F_{n}Λ'"), gens)?;
            let tri = lattice.triangularize()?;
            bases.push(tri.iter().map(|v| p.fmt_element(&self.element(v))).collect());
            rows.push(lattice.row(n, in_fn.len())?);
            lattices.push(lattice);
        }
        let passed = rows.iter().all(|r| r.unramified);
        Ok(SubalgebraReductor { generators: gens.iter().map(|g| p.fmt_element(g)).collect(), product_length: length, rows, bases, passed, lattices })
    }

    /// Reductor of the tensor product, compared against the tensor
    /// filtration `Σ F_iΛ ⊗ F_jΛ'`.
    pub fn tensor_reductor(&self, other: &Reductor, bound: u32) -> Result<TensorReport, ReductorError> {
        let bound = bound.min(self.bound()).min(other.bound());
        let tp = self.presentation().tensor(other.presentation())?;
        let r = build_reductor(&tp, bound)?;
        let shift = self.presentation().generators().len() as u8;
        let embed = |a: &AlgebraElement, by: u8| {
            let mut out = AlgebraElement::zero();
            for (w, c) in a.terms() {
                let letters: Vec<u8> = w.letters().iter().map(|l| l + by).collect();
                out.add_term(tp.word(&letters), c.clone());
            }
            out
        };
        let left: Vec<(u32, AlgebraElement)> = (0..self.rank(bound)).map(|i| (self.row_degree(i), embed(&self.basis_element(i), 0))).collect();
        let right: Vec<(u32, AlgebraElement)> = (0..other.rank(bound)).map(|j| (other.row_degree(j), embed(&other.basis_element(j), shift))).collect();
        let mut matches = Vec::new();
        for n in 0..=bound {
            let d = r.dim(n);
            let mut gens = Vec::new();
            for (di, a) in &left {
                for (dj, b) in &right {
                    if di + dj <= n {
                        gens.push(r.vector(&tp.multiply(a, b)?)?[..d].to_vec());
                    }
                }
            }
            let product = Lattice::fg(r.field(), d, format!("ΣF_iΛ⊗F_jΛ' ({n})"), gens)?;
            matches.push(product.same_module(&r.filtered_lattice(n)?)?);
        }
        let unramified = r.check_unramified()?.iter().all(|row| row.filtered.unramified);
        let factors_unramified = [self, other]
            .iter()
            .all(|x| x.check_unramified().map(|rows| rows.iter().take(bound as usize + 1).all(|row| row.filtered.unramified)).unwrap_or(false));
        let passed = matches.iter().all(|&m| m) && (!factors_unramified || unramified);
        Ok(TensorReport {
            presentation: tp.to_string(),
            dims: r.components().iter().map(|c| c.dim).collect(),
            graded_dims: r.components().iter().map(|c| c.graded_dim).collect(),
            filtration_matches: matches,
            unramified,
            factors_unramified,
            passed,
            reductor: r,
        })
    }

    /// For `A = K[T]/(f)` with `Λ = O_v[ξ]`: `Λ` is a valuation ring iff
    /// `Ā = k_v[T]/(f̄)` is a field, cross-checked on the element pool.
    pub fn valuation_ring_check(&self) -> Result<ValuationRingReport, ReductorError> {
        let p = self.presentation();
        let f = self.field();
        let kf = f.residue_field();
        if p.generators().is_empty() {
            return Ok(ValuationRingReport {
                dimension: 1,
                residue_polynomial: "T".into(),
                factor: None,
                is_valuation_ring: true,
                pool_checked: 0,
                pool_witness: None,
                pool_consistent: true,
                passed: true,
            });
        }
        let shape_err = || ReductorError::Unsupported("needs one generator with a single rule xi^d -> (lower powers), d <= 4".into());
        if p.generators().len() != 1 || p.rules().len() != 1 {
            return Err(shape_err());
        }
        let rule = &p.rules()[0];
        let d = rule.lhs.len();
        if d > 4 {
            return Err(shape_err());
        }
        // f(T) = T^d - sum c_k T^k, coefficients low to high
        let mut poly: Vec<FieldElement> = vec![f.zero(); d + 1];
        poly[d] = f.one();
        for (w, c) in rule.rhs.terms() {
            poly[w.len()] = -c;
        }
        if poly.iter().any(|c| !f.is_integral(c)) {
            return Err(ReductorError::Precondition("minimal polynomial has coefficients outside O_v".into()));
        }
        let bar: Vec<FieldElement> = poly.iter().map(|c| f.residue(c)).collect::<Result<_, _>>()?;
        let elements = kf.elements().ok_or_else(|| ReductorError::Unsupported("residue field is infinite".into()))?;
        let factor = find_factor(&kf, &bar, &elements);
        let residue_field = factor.is_none();
        if d == 2 {
            if f.characteristic() == 2 {
                return Err(ReductorError::Unsupported("characteristic 2".into()));
            }
            let disc = &(&poly[1] * &poly[1]) - &(&f.from_i64(4) * &poly[0]);
            match f.is_square(&disc) {
                Some(false) => {}
                Some(true) => return Err(ReductorError::Precondition("A is not a field: the discriminant is a square".into())),
                None => return Err(ReductorError::Unsupported("square test unavailable for this field".into())),
            }
        } else if !residue_field {
            return Err(ReductorError::Unsupported("cannot certify that A is a field".into()));
        }
        let is_valuation_ring = residue_field;

        let pool: Vec<AlgebraElement> = self.element_pool(None).into_iter().filter(|a| !a.is_zero()).collect();
        let powers: Vec<AlgebraElement> = (0..d).map(|k| p.pow(&p.generator_element(0), k as u32)).collect::<Result<_, _>>()?;
        let mut witness = None;
        for x in &pool {
            if self.contains(x)? {
                continue;
            }
            let rows: Vec<_> = powers.iter().map(|e| self.vector(&p.multiply(x, e)?)).collect::<Result<_, _>>()?;
            let solver = KSolver::new(f, d, &rows);
            let Some(y) = solver.solve(&linalg::unit_vec(f, d, 0)) else {
                witness = Some(format!("{} is a zero divisor", p.fmt_element(x)));
                break;
            };
            let inv = self.element(&y);
            if !self.contains(&inv)? {
                witness = Some(p.fmt_element(x));
                break;
            }
        }
        let pool_consistent = witness.is_none() == is_valuation_ring;
        Ok(ValuationRingReport {
            dimension: d,
            residue_polynomial: fmt_poly(&kf, &bar),
            factor,
            is_valuation_ring,
            pool_checked: pool.len(),
            pool_witness: witness,
            pool_consistent,
            passed: is_valuation_ring && pool_consistent,
        })
    }
}

fn eval(poly: &[FieldElement], x: &FieldElement) -> FieldElement {
    poly.iter().rev().fold(x.zero_like(), |acc, c| &(&acc * x) + c)
}

/// Remainder of `a` modulo a monic `b`.
fn rem_monic(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = r.pop().expect("nonempty");
        let shift = r.len() - db;
        for (k, bk) in b[..db].iter().enumerate() {
            r[shift + k] = &r[shift + k] - &(&c * bk);
        }
    }
    r
}

/// A root, or for degree 4 a monic quadratic factor, of `poly` over a finite field.
fn find_factor(kf: &ValuedField, poly: &[FieldElement], elements: &[FieldElement]) -> Option<String> {
    if let Some(r) = elements.iter().find(|x| eval(poly, x).is_zero()) {
        return Some(fmt_poly(kf, &[-r, kf.one()]));
    }
    if poly.len() == 5 {
        for a in elements {
            for b in elements {
                let q = [b.clone(), a.clone(), kf.one()];
                if rem_monic(poly, &q).iter().all(FieldElement::is_zero) {
                    return Some(fmt_poly(kf, &q));
                }
            }
        }
    }
    None
}

fn fmt_poly(kf: &ValuedField, poly: &[FieldElement]) -> String {
    let mut parts = Vec::new();
    for (k, c) in poly.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "T".into(),
            _ => format!("T^{k}"),
        };
        let cs = kf.fmt_elem(c);
        parts.push(match (k, c.is_one()) {
            (0, _) => cs,
            (_, true) => mono,
            _ => format!("{cs}*{mono}"),
        });
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join(" + ")
}

/// Convenience for tests and the catalog: the presentation `K` with no generators.
pub fn ground_reductor(field: &ValuedField, mode: crate::freealg::FiltrationMode, bound: u32) -> Result<Reductor, ReductorError> {
    build_reductor(&Presentation::trivial(field.clone(), mode), bound)
}
