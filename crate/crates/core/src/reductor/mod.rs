//! The affine reductor `Λ = π(O_v<X>)` of a presented algebra, cut off at a
//! degree bound, with the checks built on top of it.

mod axioms;
mod checks;
mod construct;
mod reduction;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use axioms::{AxiomsReport, AxiomsVerdict};
pub use checks::{ConnectedGradedReport, ConnectionReport, ConnectionRow, CrossedReport, LemmaReport, StrongReport, SymbolsCommuteReport, UnramifiedRow};
pub use construct::{ground_reductor, SubalgebraReductor, TensorReport, ValuationRingReport};
pub use reduction::{domain_certificate, Reduction};

use crate::field::{FieldElement, FieldError, ValuedField};
use crate::freealg::{AlgebraElement, NormalFormError, Presentation, PresentationError, Word};
use crate::group::GroupElement;
use crate::lattice::{Lattice, LatticeError, TriangularBasis};
use crate::linalg::{self, Vector};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductorError {
    #[error("coefficient escapes O_v at degree {degree}: normal form of {word}")]
    CoefficientEscape { degree: u32, word: String },
    #[error("element has degree {degree}, beyond the bound {bound}")]
    DegreeOverflow { degree: u32, bound: u32 },
    #[error("the principal symbol of 0 is undefined")]
    ZeroSymbol,
    #[error("division by zero")]
    DivisionByZero,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `((i, j), NF(b_i·b_j))`
pub(crate) type ProductEntry = ((usize, usize), AlgebraElement);

/// Per-degree data of the filtration `F_nΛ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub degree: u32,
    /// `dim_K F_nA`
    pub dim: usize,
    /// rank of `F_nΛ`, the length of its basis prefix
    pub rank: usize,
    /// `dim_K` of the span of the normal words of degree exactly `n`
    pub graded_dim: usize,
    /// rank of `F_nΛ / F_{n-1}Λ`
    pub gr_rank: usize,
    /// `F_nΛ ∩ F_{n-1}A = F_{n-1}Λ` held while extending the basis
    pub torsion_free: bool,
    /// the `K`-span of `F_nΛ` is all of `F_nA`
    pub is_lattice: bool,
}

/// `Λ` truncated at degree `N`: nested triangular `O_v`-bases of every
/// `F_nΛ`, in coordinates on the normal words of degree at most `N`.
#[derive(Debug, Clone)]
pub struct Reductor {
    presentation: Presentation,
    bound: u32,
    words: Vec<Word>,
    offsets: Vec<usize>,
    index: HashMap<Word, usize>,
    basis: TriangularBasis,
    row_degree: Vec<u32>,
    components: Vec<Component>,
    standard: bool,
}

/// `O_v`-generators of `F_nΛ` beyond `F_{n-1}Λ`: the normal words of degree
/// `n` and the normal forms of `u·g` for normal `u` and generators `g`.
fn degree_generators(p: &Presentation, n: u32, by_degree: &[Vec<Word>]) -> Result<Vec<AlgebraElement>, ReductorError> {
    let one = p.field().one();
    let mut pairs: Vec<(Word, usize)> = Vec::new();
    for (gi, g) in p.generators().iter().enumerate() {
        if g.weight <= n {
            for u in &by_degree[(n - g.weight) as usize] {
                pairs.push((u.clone(), gi));
            }
        }
    }
    pairs.sort();
    let products = par::map(&pairs, |(u, gi)| {
        let w = u.concat(&p.generator_word(*gi));
        p.reduce_word(&w).map(|nf| (w, nf))
    });
    let mut gens: Vec<AlgebraElement> = by_degree[n as usize].iter().map(|w| AlgebraElement::term(w.clone(), one.clone())).collect();
    for r in products {
        let (w, nf) = r?;
        if nf.terms().any(|(_, c)| !p.field().is_integral(c)) {
            return Err(ReductorError::CoefficientEscape { degree: n, word: p.fmt_word(&w) });
        }
        if !(nf.terms().len() == 1 && nf.coeff(&w).is_some_and(FieldElement::is_one)) {
            gens.push(nf);
        }
    }
    Ok(gens)
}

/// Build `F_nΛ` for `n ≤ N`, extending the basis one degree at a time.
pub fn build_reductor(presentation: &Presentation, bound: u32) -> Result<Reductor, ReductorError> {
    let p = presentation.clone();
    let field = p.field().clone();
    let words = p.words_up_to(bound);
    let dim = words.len();
    let mut offsets = vec![0usize; bound as usize + 2];
    for w in &words {
        offsets[w.degree() as usize + 1] += 1;
    }
    for n in 1..offsets.len() {
        offsets[n] += offsets[n - 1];
    }
    let index: HashMap<Word, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let by_degree: Vec<Vec<Word>> = (0..=bound).map(|n| words[offsets[n as usize]..offsets[n as usize + 1]].to_vec()).collect();
    let to_vec = |a: &AlgebraElement| -> Vector {
        let mut v = linalg::zero_vec(&field, dim);
        for (w, c) in a.terms() {
            v[index[w]] = c.clone();
        }
        v
    };
    let mut basis = TriangularBasis::empty(&field, dim);
    let mut row_degree = Vec::new();
    let mut components = Vec::new();
    for n in 0..=bound {
        let gens: Vec<Vector> =
            if n == 0 { vec![linalg::unit_vec(&field, dim, 0)] } else { degree_generators(&p, n, &by_degree)?.iter().map(to_vec).collect() };
        let cols: Vec<usize> = (offsets[n as usize]..offsets[n as usize + 1]).collect();
        let before = basis.rank();
        let (next, leftover) = basis.extend_on(&gens, &cols);
        let torsion_free = leftover.iter().all(|r| basis.contains(r));
        basis = next;
        row_degree.resize(basis.rank(), n);
        let span = linalg::rank(&field, dim, basis.rows());
        components.push(Component {
            degree: n,
            dim: offsets[n as usize + 1],
            rank: basis.rank(),
            graded_dim: cols.len(),
            gr_rank: basis.rank() - before,
            torsion_free,
            is_lattice: span == offsets[n as usize + 1],
        });
    }
    let standard = basis.rows().iter().zip(basis.pivots()).all(|(r, &p)| r[p].is_one() && r.iter().filter(|x| !x.is_zero()).count() == 1);
    Ok(Reductor { presentation: p, bound, words, offsets, index, basis, row_degree, components, standard })
}

/// The principal symbol of an element for the valuation filtration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    /// `deg σ(a) = -v_F(a)`
    pub degree: GroupElement,
    /// The part of `a` on basis vectors whose coefficient has least value.
    pub representative: AlgebraElement,
    /// `a / t` reduced into `Λ / m_vΛ`, where `v(t) = v_F(a)`.
    pub residue: AlgebraElement,
}

/// One homogeneous component of an associated graded object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedPiece {
    pub degree: String,
    pub dim: usize,
    pub basis: Vec<String>,
}

impl Reductor {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn field(&self) -> &ValuedField {
        self.presentation.field()
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn basis(&self) -> &TriangularBasis {
        &self.basis
    }

    pub fn is_standard(&self) -> bool {
        self.standard
    }

    /// Number of normal words of degree less than `n`.
    pub fn offset(&self, n: u32) -> usize {
        self.offsets[(n as usize).min(self.offsets.len() - 1)]
    }

    /// `dim_K F_nA`
    pub fn dim(&self, n: u32) -> usize {
        self.offset(n + 1)
    }

    pub fn rank(&self, n: u32) -> usize {
        self.components[n as usize].rank
    }

    /// Degree at which basis row `i` entered.
    pub fn row_degree(&self, i: usize) -> u32 {
        self.row_degree[i]
    }

    pub fn vector(&self, a: &AlgebraElement) -> Result<Vector, ReductorError> {
        let mut v = linalg::zero_vec(self.field(), self.words.len());
        for (w, c) in a.terms() {
            let i = *self.index.get(w).ok_or(ReductorError::DegreeOverflow { degree: w.degree(), bound: self.bound })?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn element(&self, v: &[FieldElement]) -> AlgebraElement {
        let mut a = AlgebraElement::zero();
        for (w, c) in self.words.iter().zip(v) {
            a.add_term(w.clone(), c.clone());
        }
        a
    }

    /// Basis row `i` as an algebra element.
    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        self.element(&self.basis.rows()[i])
    }

    /// Coordinates on the `O_v`-basis of `F_NΛ`.
    pub fn coordinates(&self, a: &AlgebraElement) -> Result<Vector, ReductorError> {
        if self.standard {
            let mut out = linalg::zero_vec(self.field(), self.basis.rank());
            let v = self.vector(a)?;
            for (i, &p) in self.basis.pivots().iter().enumerate() {
                out[i] = v[p].clone();
            }
            return Ok(out);
        }
        self.basis.coordinates(&self.vector(a)?).ok_or(ReductorError::Lattice(LatticeError::OutsideSpan))
    }

    pub fn contains(&self, a: &AlgebraElement) -> Result<bool, ReductorError> {
        Ok(self.coordinates(a)?.iter().all(|c| self.field().is_integral(c)))
    }

    /// `v_F(a)`: the least value of a coordinate on the `O_v`-basis.
    pub fn value_function(&self, a: &AlgebraElement) -> Result<GroupElement, ReductorError> {
        let f = self.field();
        if self.standard {
            let mut m = GroupElement::Infinity;
            for (w, c) in a.terms() {
                if !self.index.contains_key(w) {
                    return Err(ReductorError::DegreeOverflow { degree: w.degree(), bound: self.bound });
                }
                let v = f.value(c);
                if v < m {
                    m = v;
                }
            }
            return Ok(m);
        }
        Ok(self.basis.module_value(&self.vector(a)?)?)
    }

    /// The reduced presentation over `k_v`.
    pub fn residue_presentation(&self) -> Result<Presentation, ReductorError> {
        let f = self.field().clone();
        self.presentation.map_coefficients(f.residue_field(), |c| f.residue(c).map_err(ReductorError::from))
    }

    /// Image in `Λ/m_vΛ` of an element of `Λ`, written on the residues of the basis.
    pub fn reduce(&self, a: &AlgebraElement, reduced: &Presentation) -> Result<AlgebraElement, ReductorError> {
        let f = self.field();
        let coords = self.coordinates(a)?;
        let mut out = AlgebraElement::zero();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = f.residue(c)?;
            if r.is_zero() {
                continue;
            }
            for (w, b) in self.basis.rows()[i].iter().zip(&self.words).filter(|(b, _)| !b.is_zero()).map(|(b, w)| (w, b)) {
                out.add_term(w.clone(), &r * &f.residue(b)?);
            }
        }
        Ok(reduced.normal_form(out.into_map())?)
    }

    pub fn principal_symbol(&self, a: &AlgebraElement, reduced: &Presentation) -> Result<Symbol, ReductorError> {
        if a.is_zero() {
            return Err(ReductorError::ZeroSymbol);
        }
        let f = self.field();
        let v = self.value_function(a)?;
        let coords = self.coordinates(a)?;
        let mut rep = AlgebraElement::zero();
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() && f.value(c) == v {
                rep = rep.add(&self.basis_element(i).scale(c));
            }
        }
        let t = f.uniformizer_for(&v)?;
        let residue = self.reduce(&a.scale(&t.inv().expect("nonzero")), reduced)?;
        Ok(Symbol { degree: v.neg().expect("finite"), representative: rep, residue })
    }

    /// `σ(a)σ(b)` is `σ(ab)` or zero, never a symbol of another degree.
    pub fn symbols_multiply(&self, a: &AlgebraElement, b: &AlgebraElement, reduced: &Presentation) -> Result<bool, ReductorError> {
        let (sa, sb) = (self.principal_symbol(a, reduced)?, self.principal_symbol(b, reduced)?);
        let prod = reduced.multiply(&sa.residue, &sb.residue)?;
        let ab = self.presentation.multiply(a, b)?;
        let expected = sa.degree.add(&sb.degree).expect("same rank");
        if prod.is_zero() {
            return Ok(ab.is_zero() || self.value_function(&ab)?.neg().expect("finite") < expected);
        }
        let sab = self.principal_symbol(&ab, reduced)?;
        Ok(sab.degree == expected && sab.residue == prod)
    }

    /// `G_v(A)_γ = F^v_γA / F^v_{<γ}A`, spanned by `t·b_i` with `v(t) = -γ`.
    pub fn assoc_graded_piece(&self, gamma: &GroupElement) -> Result<GradedPiece, ReductorError> {
        let f = self.field();
        let t = f.uniformizer_for(&gamma.neg().map_err(|_| FieldError::Infinite)?)?;
        let ts = f.fmt_elem(&t);
        let basis: Vec<String> = (0..self.basis.rank())
            .map(|i| {
                let b = self.presentation.fmt_element(&self.basis_element(i));
                if t.is_one() {
                    b
                } else {
                    format!("{ts}*{b}")
                }
            })
            .collect();
        Ok(GradedPiece { degree: gamma.to_string(), dim: basis.len(), basis })
    }

    /// `G_F(A)_n` with its normal-word basis.
    pub fn filtration_graded_piece(&self, n: u32) -> GradedPiece {
        let basis: Vec<String> = self.words[self.offset(n)..self.offset(n + 1)].iter().map(|w| self.presentation.fmt_word(w)).collect();
        GradedPiece { degree: n.to_string(), dim: basis.len(), basis }
    }

    /// `F_nΛ` as a lattice in `F_nA`.
    pub fn filtered_lattice(&self, n: u32) -> Result<Lattice, ReductorError> {
        let d = self.dim(n);
        let gens = self.basis.rows()[..self.rank(n)].iter().map(|r| r[..d].to_vec()).collect();
        Ok(Lattice::fg(self.field(), d, format!("F_{n}Λ"), gens)?)
    }

    /// Unit vectors of the words of degree less than `n`, inside `F_mA`.
    pub(crate) fn lower_subspace(&self, n: u32, m: u32) -> Vec<Vector> {
        (0..self.offset(n)).map(|i| linalg::unit_vec(self.field(), self.dim(m), i)).collect()
    }

    /// Unit vectors of the words of degree exactly `n`, inside `F_mA`.
    pub(crate) fn graded_subspace(&self, n: u32, m: u32) -> Vec<Vector> {
        (self.offset(n)..self.offset(n + 1)).map(|i| linalg::unit_vec(self.field(), self.dim(m), i)).collect()
    }

    /// `O_v`-generators of `F_nΛ` straight from the words, without the
    /// nested basis.
    pub fn raw_generators(&self, n: u32) -> Result<Vec<Vector>, ReductorError> {
        let by_degree: Vec<Vec<Word>> = (0..=n).map(|k| self.words[self.offset(k)..self.offset(k + 1)].to_vec()).collect();
        let d = self.dim(n);
        let mut out = vec![linalg::unit_vec(self.field(), d, 0)];
        for k in 1..=n {
            for g in degree_generators(&self.presentation, k, &by_degree)? {
                out.push(self.vector(&g)?[..d].to_vec());
            }
        }
        Ok(out)
    }

    /// Normal forms of all products `b_i·b_j` of basis rows up to total degree `max`.
    pub(crate) fn basis_products(&self, max: u32) -> Result<Vec<ProductEntry>, ReductorError> {
        let r = self.rank(max.min(self.bound));
        let pairs: Vec<(usize, usize)> =
            (0..r).flat_map(|i| (0..r).map(move |j| (i, j))).filter(|&(i, j)| self.row_degree[i] + self.row_degree[j] <= max).collect();
        let elems: Vec<AlgebraElement> = (0..r).map(|i| self.basis_element(i)).collect();
        let prods = par::map(&pairs, |&(i, j)| self.presentation.multiply(&elems[i], &elems[j]));
        pairs.into_iter().zip(prods).map(|(ij, p)| Ok((ij, p?))).collect()
    }
}

#[cfg(test)]
mod tests;
