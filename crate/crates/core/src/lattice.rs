//! `O_v`-submodules of a coordinatized finite-dimensional `K`-space.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldElement, FieldError, ValuedField};
use crate::group::GroupElement;
use crate::linalg::{self, axpy, combine, is_zero_vec, scale_vec, KSolver, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("vector of length {got} in a space of dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("not a lattice: K-span has dimension {span}, ambient dimension is {dim}")]
    NotALattice { span: usize, dim: usize },
    #[error("expected {expected} independent residue vectors, got rank {got}")]
    Rank { expected: usize, got: usize },
    #[error("`{0}` needs a finitely generated lattice")]
    IdealSum(&'static str),
    #[error("ideal-sum directions are linearly dependent")]
    DependentDirections,
    #[error("limit cuts need a rank-2 value group")]
    LimitRank,
    #[error("vector lies outside the K-span of the lattice")]
    OutsideSpan,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A fractional ideal of `O_v` used as the coefficient range of one summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cut {
    /// `{x : v(x) >= γ}`
    Principal(GroupElement),
    /// `{x : first coordinate of v(x) >= c}`
    Limit(i64),
}

impl Cut {
    pub fn contains(&self, field: &ValuedField, x: &FieldElement) -> bool {
        if x.is_zero() {
            return true;
        }
        let v = field.value(x);
        match self {
            Cut::Principal(g) => v.ge(g),
            Cut::Limit(c) => v.coords().is_some_and(|cs| cs[0] >= *c),
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::Principal(g) => write!(f, "principal{g}"),
            Cut::Limit(c) => write!(f, "limit({c})"),
        }
    }
}

/// One report row: `(degree, dim_K V, rank, residue dim, unramified)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeRow {
    pub degree: u32,
    pub dim: usize,
    /// `None` for ideal sums, which need not be free.
    pub rank: Option<usize>,
    pub residue_dim: usize,
    pub unramified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeKind {
    Fg(Vec<Vector>),
    IdealSum(Vec<(Cut, Vector)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    field: ValuedField,
    dim: usize,
    label: String,
    kind: LatticeKind,
}

/// An `O_v`-basis in triangular shape: row `i` has a uniformizer power at
/// `pivots[i]`, and every row eliminated after it is zero there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularBasis {
    field: ValuedField,
    dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
    order: Vec<usize>,
}

/// Pick pivots among `cols` only. Returns the chosen rows with their pivot
/// columns (in selection order) and the nonzero rows left over once all of
/// `cols` is cleared.
fn triangularize_on(field: &ValuedField, rows: Vec<Vector>, cols: &[usize]) -> (Vec<(Vector, usize)>, Vec<Vector>) {
    let mut rest: Vec<Vector> = Vec::new();
    let mut leftover = Vec::new();
    for r in rows {
        if cols.iter().any(|&c| !r[c].is_zero()) {
            rest.push(r);
        } else if !is_zero_vec(&r) {
            leftover.push(r);
        }
    }
    let mut chosen = Vec::new();
    while !rest.is_empty() {
        let mut best: Option<(usize, usize, GroupElement)> = None;
        for (i, r) in rest.iter().enumerate() {
            for &c in cols {
                if r[c].is_zero() {
                    continue;
                }
                let v = field.value(&r[c]);
                if best.as_ref().is_none_or(|b| v < b.2) {
                    best = Some((i, c, v));
                }
            }
        }
        let (i, c, v) = best.expect("remaining rows are nonzero on cols");
        let r = rest.remove(i);
        let t = field.uniformizer_for(&v).expect("finite value");
        let r = scale_vec(&r, &t.div(&r[c]).expect("nonzero pivot"));
        let mut next = Vec::with_capacity(rest.len());
        for mut o in rest {
            if !o[c].is_zero() {
                let m = o[c].div(&r[c]).expect("nonzero pivot");
                axpy(&mut o, &-&m, &r);
            }
            if cols.iter().any(|&k| !o[k].is_zero()) {
                next.push(o);
            } else if !is_zero_vec(&o) {
                leftover.push(o);
            }
        }
        rest = next;
        chosen.push((r, c));
    }
    (chosen, leftover)
}

impl TriangularBasis {
    pub fn empty(field: &ValuedField, dim: usize) -> Self {
        TriangularBasis { field: field.clone(), dim, rows: vec![], pivots: vec![], order: vec![] }
    }

    pub fn from_generators(field: &ValuedField, dim: usize, gens: &[Vector]) -> Self {
        let cols: Vec<usize> = (0..dim).collect();
        let (chosen, leftover) = triangularize_on(field, gens.to_vec(), &cols);
        debug_assert!(leftover.is_empty());
        let mut b = TriangularBasis::empty(field, dim);
        b.push_block(chosen);
        b
    }

    /// Extend by generators whose pivots are restricted to `cols`, where every
    /// existing row vanishes on `cols`. The new rows are appended, so the old
    /// basis stays a prefix. Returns the generator combinations that vanish on
    /// `cols` without being zero.
    pub fn extend_on(&self, gens: &[Vector], cols: &[usize]) -> (TriangularBasis, Vec<Vector>) {
        debug_assert!(self.rows.iter().all(|r| cols.iter().all(|&c| r[c].is_zero())));
        let (chosen, leftover) = triangularize_on(&self.field, gens.to_vec(), cols);
        let mut b = self.clone();
        b.push_block(chosen);
        (b, leftover)
    }

    fn push_block(&mut self, chosen: Vec<(Vector, usize)>) {
        let start = self.rows.len();
        let n = chosen.len();
        for (r, c) in chosen {
            self.rows.push(r);
            self.pivots.push(c);
        }
        let mut order: Vec<usize> = (start..start + n).collect();
        order.extend(self.order.iter().copied());
        self.order = order;
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &ValuedField {
        &self.field
    }

    /// `K`-coordinates of `x` on the basis rows, if `x` is in their span.
    pub fn coordinates(&self, x: &[FieldElement]) -> Option<Vector> {
        let mut rest = x.to_vec();
        let mut a = vec![self.field.zero(); self.rows.len()];
        for &i in &self.order {
            let p = self.pivots[i];
            if rest[p].is_zero() {
                continue;
            }
            let c = rest[p].div(&self.rows[i][p]).expect("nonzero pivot");
            axpy(&mut rest, &-&c, &self.rows[i]);
            a[i] = c;
        }
        is_zero_vec(&rest).then_some(a)
    }

    pub fn contains(&self, x: &[FieldElement]) -> bool {
        self.coordinates(x).is_some_and(|a| a.iter().all(|c| self.field.is_integral(c)))
    }

    /// `min_i v(a_i)` for `x = sum a_i x_i`.
    pub fn module_value(&self, x: &[FieldElement]) -> Result<GroupElement, LatticeError> {
        let a = self.coordinates(x).ok_or(LatticeError::OutsideSpan)?;
        Ok(a.iter().map(|c| self.field.value(c)).fold(GroupElement::Infinity, |m, v| m.min(&v).clone()))
    }
}

impl Lattice {
    pub fn fg(field: &ValuedField, dim: usize, label: impl Into<String>, generators: Vec<Vector>) -> Result<Self, LatticeError> {
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(LatticeError::Dimension { expected: dim, got: g.len() });
        }
        Ok(Lattice { field: field.clone(), dim, label: label.into(), kind: LatticeKind::Fg(generators) })
    }

    /// `O_v^dim` on the reference basis.
    pub fn standard(field: &ValuedField, dim: usize, label: impl Into<String>) -> Self {
        let gens = (0..dim).map(|i| linalg::unit_vec(field, dim, i)).collect();
        Lattice { field: field.clone(), dim, label: label.into(), kind: LatticeKind::Fg(gens) }
    }

    pub fn ideal_sum(field: &ValuedField, dim: usize, label: impl Into<String>, summands: Vec<(Cut, Vector)>) -> Result<Self, LatticeError> {
        if let Some((_, d)) = summands.iter().find(|(_, d)| d.len() != dim) {
            return Err(LatticeError::Dimension { expected: dim, got: d.len() });
        }
        if summands.iter().any(|(c, _)| matches!(c, Cut::Limit(_))) && field.rank() != 2 {
            return Err(LatticeError::LimitRank);
        }
        let dirs: Vec<Vector> = summands.iter().map(|(_, d)| d.clone()).collect();
        if linalg::rank(field, dim, &dirs) != dirs.len() {
            return Err(LatticeError::DependentDirections);
        }
        Ok(Lattice { field: field.clone(), dim, label: label.into(), kind: LatticeKind::IdealSum(summands) })
    }

    pub fn field(&self) -> &ValuedField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> &LatticeKind {
        &self.kind
    }

    fn generators(&self, op: &'static str) -> Result<&[Vector], LatticeError> {
        match &self.kind {
            LatticeKind::Fg(g) => Ok(g),
            LatticeKind::IdealSum(_) => Err(LatticeError::IdealSum(op)),
        }
    }

    /// Dimension of the `K`-span.
    pub fn span_dim(&self) -> usize {
        match &self.kind {
            LatticeKind::Fg(g) => linalg::rank(&self.field, self.dim, g),
            LatticeKind::IdealSum(s) => s.len(),
        }
    }

    pub fn basis(&self) -> Result<TriangularBasis, LatticeError> {
        Ok(TriangularBasis::from_generators(&self.field, self.dim, self.generators("triangularize")?))
    }

    pub fn triangularize(&self) -> Result<Vec<Vector>, LatticeError> {
        Ok(self.basis()?.rows)
    }

    pub fn rank(&self) -> Result<usize, LatticeError> {
        Ok(self.basis()?.rank())
    }

    /// Every generator lies in the `O_v`-span of the triangular basis, and the
    /// residues of their coordinates span `k_v^r`, so by Nakayama the basis
    /// lies in the `O_v`-span of the generators.
    pub fn mutual_membership(&self) -> Result<bool, LatticeError> {
        let gens = self.generators("mutual membership")?;
        let basis = self.basis()?;
        let mut residues = Vec::with_capacity(gens.len());
        for g in gens {
            let Some(c) = basis.coordinates(g) else {
                return Ok(false);
            };
            let Ok(r) = c.iter().map(|x| self.field.residue(x)).collect::<Result<Vector, _>>() else {
                return Ok(false);
            };
            residues.push(r);
        }
        Ok(linalg::rank(&self.field.residue_field(), basis.rank(), &residues) == basis.rank())
    }

    /// `dim_{k_v} M / m_v M`
    pub fn residue_dim(&self) -> usize {
        match &self.kind {
            LatticeKind::Fg(g) => TriangularBasis::from_generators(&self.field, self.dim, g).rank(),
            LatticeKind::IdealSum(s) => s.iter().filter(|(c, _)| matches!(c, Cut::Principal(_))).count(),
        }
    }

    pub fn is_unramified(&self, v_dim: usize) -> Result<bool, LatticeError> {
        let span = self.span_dim();
        if span != v_dim {
            return Err(LatticeError::NotALattice { span, dim: v_dim });
        }
        Ok(self.residue_dim() == v_dim)
    }

    pub fn row(&self, degree: u32, v_dim: usize) -> Result<LatticeRow, LatticeError> {
        let rank = match self.kind {
            LatticeKind::Fg(_) => Some(self.rank()?),
            LatticeKind::IdealSum(_) => None,
        };
        Ok(LatticeRow { degree, dim: v_dim, rank, residue_dim: self.residue_dim(), unramified: self.is_unramified(v_dim)? })
    }

    fn check_len(&self, x: &[FieldElement]) -> Result<(), LatticeError> {
        if x.len() != self.dim {
            return Err(LatticeError::Dimension { expected: self.dim, got: x.len() });
        }
        Ok(())
    }

    pub fn member(&self, x: &[FieldElement]) -> Result<bool, LatticeError> {
        self.check_len(x)?;
        match &self.kind {
            LatticeKind::Fg(g) => Ok(TriangularBasis::from_generators(&self.field, self.dim, g).contains(x)),
            LatticeKind::IdealSum(s) => {
                let dirs: Vec<Vector> = s.iter().map(|(_, d)| d.clone()).collect();
                let Some(a) = KSolver::new(&self.field, self.dim, &dirs).solve(x) else {
                    return Ok(false);
                };
                Ok(s.iter().zip(&a).all(|((cut, _), c)| cut.contains(&self.field, c)))
            }
        }
    }

    /// Every generator of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &Lattice) -> Result<bool, LatticeError> {
        let basis = self.basis()?;
        Ok(other.generators("contains")?.iter().all(|g| basis.contains(g)))
    }

    pub fn same_module(&self, other: &Lattice) -> Result<bool, LatticeError> {
        Ok(self.contains_lattice(other)? && other.contains_lattice(self)?)
    }

    /// Residue vectors are coordinates on the triangular basis, over `k_v`.
    pub fn lift_residue_basis(&self, residues: &[Vector]) -> Result<Vec<Vector>, LatticeError> {
        let basis = self.basis()?;
        let n = basis.rank();
        let kf = self.field.residue_field();
        if let Some(r) = residues.iter().find(|r| r.len() != n) {
            return Err(LatticeError::Dimension { expected: n, got: r.len() });
        }
        let got = linalg::rank(&kf, n, residues);
        if residues.len() != n || got != n {
            return Err(LatticeError::Rank { expected: n, got });
        }
        Ok(residues
            .iter()
            .map(|r| {
                let coeffs: Vector = r.iter().map(|c| self.field.lift(c)).collect();
                combine(&self.field, self.dim, &coeffs, &basis.rows)
            })
            .collect())
    }

    /// Image in `V / V'`, in the coordinates left after clearing the pivot
    /// columns of an echelon basis of `V'`.
    pub fn quotient_lattice(&self, subspace: &[Vector]) -> Result<Lattice, LatticeError> {
        let gens = self.generators("quotient_lattice")?;
        let solver = KSolver::new(&self.field, self.dim, subspace);
        let images = gens.iter().map(|g| solver.quotient_coords(g)).filter(|v| !is_zero_vec(v)).collect();
        Lattice::fg(&self.field, self.dim - solver.rank(), format!("{}/V'", self.label), images)
    }

    /// `M ∩ V'` as a finitely generated lattice in ambient coordinates.
    pub fn intersect_subspace(&self, subspace: &[Vector]) -> Result<Lattice, LatticeError> {
        let basis = self.basis()?;
        let solver = KSolver::new(&self.field, self.dim, subspace);
        let images: Vec<Vector> = basis.rows.iter().map(|b| solver.quotient_coords(b)).collect();
        let kernel = KSolver::new(&self.field, self.dim - solver.rank(), &images).left_kernel().to_vec();
        let gens = linalg::saturate(&self.field, &kernel).iter().map(|u| combine(&self.field, self.dim, u, &basis.rows)).collect();
        Lattice::fg(&self.field, self.dim, format!("{}∩V'", self.label), gens)
    }

    pub fn module_value(&self, x: &[FieldElement]) -> Result<GroupElement, LatticeError> {
        self.check_len(x)?;
        self.basis()?.module_value(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, BaseField};

    fn z3() -> ValuedField {
        ValuedField::p_adic(3).unwrap()
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&n| q(n, 1)).collect()
    }

    fn m31() -> Lattice {
        Lattice::fg(&z3(), 2, "M", vec![v(&[3, 1]), v(&[6, 1])]).unwrap()
    }

    #[test]
    fn triangularize_examples() {
        let m = m31();
        let b = m.triangularize().unwrap();
        assert_eq!(b.len(), 2);
        let tri = Lattice::fg(&z3(), 2, "B", b.clone()).unwrap();
        assert!(tri.same_module(&m).unwrap());
        assert!(tri.same_module(&Lattice::fg(&z3(), 2, "E", vec![v(&[3, 1]), v(&[3, 0])]).unwrap()).unwrap());
        let zero = Lattice::fg(&z3(), 2, "Z", vec![v(&[0, 0])]).unwrap();
        assert!(zero.triangularize().unwrap().is_empty());
        let l = Lattice::fg(&z3(), 2, "L", vec![v(&[3, 0]), v(&[1, 0])]).unwrap();
        assert_eq!(l.triangularize().unwrap(), vec![v(&[1, 0])]);
    }

    #[test]
    fn mutual_membership_oracle() {
        assert!(m31().mutual_membership().unwrap());
        let dependent = Lattice::fg(&z3(), 3, "D", vec![v(&[3, 1, 0]), v(&[6, 2, 0]), v(&[1, 0, 9]), v(&[0, 0, 27])]).unwrap();
        assert!(dependent.mutual_membership().unwrap());
        let (_, ramified) = ramified();
        assert!(matches!(ramified.mutual_membership(), Err(LatticeError::IdealSum(_))));
    }

    #[test]
    fn residue_dims_and_unramified() {
        assert_eq!(m31().residue_dim(), 2);
        assert!(m31().is_unramified(2).unwrap());
        assert!(Lattice::standard(&z3(), 2, "O").is_unramified(2).unwrap());
        let deficient = Lattice::fg(&z3(), 2, "D", vec![v(&[1, 0])]).unwrap();
        assert_eq!(deficient.is_unramified(2), Err(LatticeError::NotALattice { span: 1, dim: 2 }));
        assert_eq!(Lattice::fg(&z3(), 2, "E", vec![]).unwrap().residue_dim(), 0);
    }

    fn ramified() -> (ValuedField, Lattice) {
        let f = ValuedField::lex_monomial(BaseField::Rationals).unwrap();
        let e1 = vec![f.one(), f.zero()];
        let e2 = vec![f.zero(), f.one()];
        let l = Lattice::ideal_sum(&f, 2, "J", vec![(Cut::Principal(GroupElement::zero(2)), e1), (Cut::Limit(1), e2)]).unwrap();
        (f, l)
    }

    #[test]
    fn ramified_ideal_sum() {
        let (f, l) = ramified();
        assert_eq!(l.residue_dim(), 1);
        assert_eq!(l.is_unramified(2), Ok(false));
        assert_eq!(l.triangularize(), Err(LatticeError::IdealSum("triangularize")));
        let (x, y) = (f.var(0), f.var(1));
        for m in 0..30 {
            // X·Y^{-m} = Y · (X·Y^{-m-1}) with the cofactor still in the cut
            let g = &x * &y.pow(-m).unwrap();
            let cof = &x * &y.pow(-m - 1).unwrap();
            assert_eq!(&y * &cof, g);
            assert!(l.member(&[f.zero(), g]).unwrap());
            assert!(l.member(&[f.zero(), cof]).unwrap());
            assert!(f.value(&y) > GroupElement::zero(2));
        }
        assert!(!l.member(&[f.zero(), f.one()]).unwrap());
        assert!(l.member(&[f.one(), f.zero()]).unwrap());
        // the principal summand is not swallowed by m_v: 1/Y is not in O_v
        assert!(!l.member(&[y.inv().unwrap(), f.zero()]).unwrap());
        let x100 = &x * &y.pow(-100).unwrap();
        assert!(l.member(&[f.zero(), x100]).unwrap());
        assert_eq!(Lattice::ideal_sum(&z3(), 1, "bad", vec![(Cut::Limit(1), v(&[1]))]), Err(LatticeError::LimitRank));
    }

    #[test]
    fn membership() {
        let m = m31();
        assert!(m.member(&v(&[3, 1])).unwrap());
        assert!(!m.member(&v(&[1, 0])).unwrap());
        assert!(m.member(&v(&[3, 0])).unwrap());
    }

    #[test]
    fn lifting_residue_bases() {
        let f = z3();
        let k = f.residue_field();
        let r = |a: u64, b: u64| vec![FieldElement::modular(a, 3), FieldElement::modular(b, 3)];
        let o = Lattice::standard(&f, 2, "O");
        let lifts = o.lift_residue_basis(&[r(1, 1), r(0, 1)]).unwrap();
        assert_eq!(lifts, vec![v(&[1, 1]), v(&[0, 1])]);
        assert!(matches!(o.lift_residue_basis(&[r(1, 0), r(1, 0)]), Err(LatticeError::Rank { .. })));
        let m = m31();
        let lifts = m.lift_residue_basis(&[r(1, 2), r(0, 1)]).unwrap();
        assert!(Lattice::fg(&f, 2, "L", lifts).unwrap().same_module(&m).unwrap());
        assert_eq!(k.elements().unwrap().len(), 3);
    }

    #[test]
    fn quotients_and_intersections() {
        let f = z3();
        let o = Lattice::standard(&f, 2, "O");
        let qo = o.quotient_lattice(&[v(&[1, 0])]).unwrap();
        assert_eq!((qo.dim(), qo.rank().unwrap()), (1, 1));
        assert!(qo.same_module(&Lattice::standard(&f, 1, "O")).unwrap());
        let qm = m31().quotient_lattice(&[v(&[0, 1])]).unwrap();
        assert_eq!((qm.rank().unwrap(), qm.residue_dim()), (1, 1));
        assert!(qm.same_module(&Lattice::fg(&f, 1, "3", vec![v(&[3])]).unwrap()).unwrap());
        let empty = Lattice::fg(&f, 2, "0", vec![]).unwrap().quotient_lattice(&[v(&[1, 1])]).unwrap();
        assert_eq!(empty.rank().unwrap(), 0);

        // M ∩ span{(1,0)} for M = span{(3,1),(3,0)} is 3·O_v·(1,0)
        let i = m31().intersect_subspace(&[v(&[1, 0])]).unwrap();
        assert!(i.same_module(&Lattice::fg(&f, 2, "I", vec![v(&[3, 0])]).unwrap()).unwrap());
        for (m, sub) in [(m31(), vec![v(&[1, 0])]), (m31(), vec![v(&[1, 1])]), (o.clone(), vec![v(&[2, 9])]), (o, vec![])] {
            let inter = m.intersect_subspace(&sub).unwrap();
            let quot = m.quotient_lattice(&sub).unwrap();
            assert_eq!(m.rank().unwrap(), inter.rank().unwrap() + quot.rank().unwrap());
        }
    }

    #[test]
    fn module_values() {
        let o = Lattice::standard(&z3(), 2, "O");
        assert_eq!(o.module_value(&[q(3, 1), q(1, 3)]).unwrap(), GroupElement::new(&[-1]));
        assert_eq!(o.module_value(&v(&[9, 0])).unwrap(), GroupElement::new(&[2]));
        assert_eq!(o.module_value(&v(&[0, 0])).unwrap(), GroupElement::Infinity);
        let d = Lattice::fg(&z3(), 2, "D", vec![v(&[1, 0])]).unwrap();
        assert_eq!(d.module_value(&v(&[0, 1])), Err(LatticeError::OutsideSpan));
    }

    #[test]
    fn module_value_axioms_and_separation() {
        let f = z3();
        let m = m31();
        let basis = m.basis().unwrap();
        let pool = f.coefficient_pool();
        let mut vecs = Vec::new();
        for a in &pool {
            for b in &pool {
                vecs.push(combine(&f, 2, &[a.clone(), b.clone()], basis.rows()));
            }
        }
        for x in &vecs {
            let vx = m.module_value(x).unwrap();
            for y in &vecs {
                let s: Vector = x.iter().zip(y).map(|(a, b)| a + b).collect();
                assert!(m.module_value(&s).unwrap().ge(vx.min(&m.module_value(y).unwrap())));
            }
            for c in &pool {
                let cx = scale_vec(x, c);
                let expect = f.value(c).add(&vx).unwrap_or(GroupElement::Infinity);
                assert_eq!(m.module_value(&cx).unwrap(), expect);
            }
            // x ∈ f_γ·M  iff  module_value(x) ≥ -γ
            for g in -3..=3 {
                let gamma = GroupElement::new(&[g]);
                let t = f.uniformizer_for(&gamma.neg().unwrap()).unwrap();
                let inside = basis.contains(&scale_vec(x, &t.inv().unwrap()));
                assert_eq!(inside, vx.ge(&gamma.neg().unwrap()));
            }
        }
    }
}
