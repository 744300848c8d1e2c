//! Dense linear algebra over a field of `FieldElement`s.

use crate::field::{FieldElement, ValuedField};

pub type Vector = Vec<FieldElement>;

pub fn zero_vec(field: &ValuedField, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vec(field: &ValuedField, n: usize, i: usize) -> Vector {
    let mut v = zero_vec(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vec(v: &[FieldElement]) -> bool {
    v.iter().all(FieldElement::is_zero)
}

/// `y += a * x`
pub fn axpy(y: &mut [FieldElement], a: &FieldElement, x: &[FieldElement]) {
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = &*yi + &(a * xi);
        }
    }
}

pub fn scale_vec(v: &[FieldElement], a: &FieldElement) -> Vector {
    v.iter().map(|x| x * a).collect()
}

/// Linear combination `sum coeffs[i] * rows[i]`.
pub fn combine(field: &ValuedField, n: usize, coeffs: &[FieldElement], rows: &[Vector]) -> Vector {
    let mut out = zero_vec(field, n);
    for (c, r) in coeffs.iter().zip(rows) {
        axpy(&mut out, c, r);
    }
    out
}

/// Reduced row echelon form of a list of row vectors, with a record of how
/// each echelon row is built from the input rows.
#[derive(Debug, Clone)]
pub struct KSolver {
    field: ValuedField,
    width: usize,
    inputs: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
    transform: Vec<Vector>,
    kernel: Vec<Vector>,
}

impl KSolver {
    pub fn new(field: &ValuedField, width: usize, input: &[Vector]) -> Self {
        let m = input.len();
        let mut work: Vec<(Vector, Vector)> = input.iter().enumerate().map(|(i, r)| (r.clone(), unit_vec(field, m, i))).collect();
        let mut rows: Vec<Vector> = Vec::new();
        let mut pivots = Vec::new();
        let mut transform: Vec<Vector> = Vec::new();
        for col in 0..width {
            let Some(k) = work.iter().position(|(r, _)| !r[col].is_zero()) else {
                continue;
            };
            let (mut r, mut t) = work.swap_remove(k);
            let inv = r[col].inv().expect("nonzero pivot");
            r = scale_vec(&r, &inv);
            t = scale_vec(&t, &inv);
            for (o, ot) in work.iter_mut() {
                let c = -&o[col];
                axpy(o, &c, &r);
                axpy(ot, &c, &t);
            }
            for (o, ot) in rows.iter_mut().zip(transform.iter_mut()) {
                let c = -&o[col];
                axpy(o, &c, &r);
                axpy(ot, &c, &t);
            }
            rows.push(r);
            transform.push(t);
            pivots.push(col);
        }
        let kernel = work.into_iter().map(|(_, t)| t).collect();
        KSolver { field: field.clone(), width, inputs: m, rows, pivots, transform, kernel }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn echelon(&self) -> (&[Vector], &[usize]) {
        (&self.rows, &self.pivots)
    }

    /// Relations `sum a_i input_i = 0` spanning all of them.
    pub fn left_kernel(&self) -> &[Vector] {
        &self.kernel
    }

    /// Coefficients `a` with `x = sum a_i input_i`, if `x` is in the span.
    pub fn solve(&self, x: &[FieldElement]) -> Option<Vector> {
        let mut rest = x.to_vec();
        let mut coeffs = zero_vec(&self.field, self.inputs);
        for ((r, t), &p) in self.rows.iter().zip(&self.transform).zip(&self.pivots) {
            let c = rest[p].clone();
            if c.is_zero() {
                continue;
            }
            axpy(&mut rest, &-&c, r);
            axpy(&mut coeffs, &c, t);
        }
        is_zero_vec(&rest).then_some(coeffs)
    }

    pub fn in_span(&self, x: &[FieldElement]) -> bool {
        let mut rest = x.to_vec();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = rest[p].clone();
            axpy(&mut rest, &-&c, r);
        }
        is_zero_vec(&rest)
    }

    /// Linear map `K^width -> K^(width - rank)` whose kernel is the span:
    /// reduce against the echelon rows and keep the non-pivot coordinates.
    pub fn quotient_coords(&self, x: &[FieldElement]) -> Vector {
        let mut rest = x.to_vec();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = rest[p].clone();
            axpy(&mut rest, &-&c, r);
        }
        rest.into_iter().enumerate().filter(|(i, _)| !self.pivots.contains(i)).map(|(_, v)| v).collect()
    }
}

pub fn rank(field: &ValuedField, width: usize, rows: &[Vector]) -> usize {
    KSolver::new(field, width, rows).rank()
}

/// Basis of `W ∩ O_v^r` for the K-subspace `W` spanned by `rows`: repeatedly
/// take the entry of least value, divide its row by it, and clear that
/// column from the other rows over `K`.
pub fn saturate(field: &ValuedField, rows: &[Vector]) -> Vec<Vector> {
    let width = rows.first().map_or(0, Vec::len);
    let solver = KSolver::new(field, width, rows);
    let mut rest: Vec<Vector> = solver.echelon().0.to_vec();
    let mut out = Vec::new();
    while !rest.is_empty() {
        let mut best: Option<(usize, usize, crate::group::GroupElement)> = None;
        for (i, r) in rest.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let v = field.value(x);
                if best.as_ref().is_none_or(|b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let (i, j, _) = best.expect("echelon rows are nonzero");
        let r = rest.remove(i);
        let r = scale_vec(&r, &r[j].inv().expect("nonzero"));
        for o in rest.iter_mut() {
            let c = -&o[j];
            axpy(o, &c, &r);
        }
        out.push(r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    fn qv(xs: &[(i64, i64)]) -> Vector {
        xs.iter().map(|&(n, d)| q(n, d)).collect()
    }

    #[test]
    fn solve_and_kernel() {
        let f = ValuedField::p_adic(3).unwrap();
        let rows = vec![qv(&[(1, 1), (2, 1), (0, 1)]), qv(&[(2, 1), (4, 1), (0, 1)]), qv(&[(0, 1), (1, 1), (1, 1)])];
        let s = KSolver::new(&f, 3, &rows);
        assert_eq!(s.rank(), 2);
        assert_eq!(s.left_kernel().len(), 1);
        let k = &s.left_kernel()[0];
        assert!(is_zero_vec(&combine(&f, 3, k, &rows)));
        let x = qv(&[(3, 1), (7, 1), (1, 1)]);
        let a = s.solve(&x).unwrap();
        assert_eq!(combine(&f, 3, &a, &rows), x);
        assert!(s.solve(&qv(&[(1, 1), (0, 1), (0, 1)])).is_none());
        assert_eq!(s.quotient_coords(&rows[2]).len(), 1);
        assert!(is_zero_vec(&s.quotient_coords(&x)));
    }

    #[test]
    fn saturation_is_integral_and_primitive() {
        let f = ValuedField::p_adic(3).unwrap();
        // W = span{(1/9, 1/3)}: W ∩ Z_(3)^2 = Z_(3)·(1, 3)
        let s = saturate(&f, &[qv(&[(1, 9), (1, 3)])]);
        assert_eq!(s, vec![qv(&[(1, 1), (3, 1)])]);
        let s = saturate(&f, &[qv(&[(3, 1), (1, 1), (0, 1)]), qv(&[(0, 1), (9, 1), (1, 1)])]);
        assert_eq!(s.len(), 2);
        for r in &s {
            assert!(r.iter().all(|x| f.is_integral(x)));
            assert!(r.iter().any(|x| !x.is_zero() && f.value(x).is_zero()));
        }
    }
}
