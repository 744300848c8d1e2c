use std::collections::HashMap;

use serde::Serialize;

use super::{Reductor, ReductorError};
use crate::field::FieldElement;
use crate::freealg::{AlgebraElement, FiltrationMode, Presentation};
use crate::linalg::{self, axpy, Vector};

/// `Λ / m_vΛ` up to the degree bound: structure constants over `k_v` on the
/// residues of the basis of `Λ`.
#[derive(Debug, Clone, Serialize)]
pub struct Reduction {
    pub residue_field: String,
    pub presentation: String,
    pub basis: Vec<String>,
    pub table: Vec<String>,
    /// Entries where multiplying in the reduced presentation disagrees with
    /// reducing the product taken over `K`.
    pub dual_route_mismatches: Vec<String>,
    pub associativity_failures: Vec<String>,
    pub unit_failures: Vec<String>,
    pub domain_certificate: Option<String>,
    #[serde(skip)]
    reduced: Presentation,
    #[serde(skip)]
    constants: HashMap<(usize, usize), Vector>,
    #[serde(skip)]
    degrees: Vec<u32>,
}

impl Reduction {
    pub fn reduced(&self) -> &Presentation {
        &self.reduced
    }

    /// Residue coordinates of `b_i·b_j` on the residues of the basis.
    pub fn structure_constants(&self, i: usize, j: usize) -> Option<&Vector> {
        self.constants.get(&(i, j))
    }

    pub fn ring_axioms_hold(&self) -> bool {
        self.associativity_failures.is_empty() && self.unit_failures.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.ring_axioms_hold() && self.dual_route_mismatches.is_empty()
    }

    fn mul_vectors(&self, x: &[FieldElement], y: &[FieldElement]) -> Option<Vector> {
        let kf = self.reduced.field();
        let mut out = linalg::zero_vec(kf, self.degrees.len());
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                axpy(&mut out, &(a * b), self.constants.get(&(i, j))?);
            }
        }
        Some(out)
    }
}

impl Reductor {
    pub fn reduction(&self) -> Result<Reduction, ReductorError> {
        let f = self.field();
        let reduced = self.residue_presentation()?;
        let kf = reduced.field().clone();
        let n = self.bound();
        let r = self.rank(n);
        let bars: Vec<AlgebraElement> = (0..r).map(|i| self.reduce(&self.basis_element(i), &reduced)).collect::<Result<_, _>>()?;
        let labels: Vec<String> = bars.iter().map(|b| reduced.fmt_element(b)).collect();
        let mut constants = HashMap::new();
        let mut table = Vec::new();
        let mut mismatches = Vec::new();
        for ((i, j), prod) in self.basis_products(n)? {
            let coords = self.coordinates(&prod)?;
            let res: Vector = coords.iter().map(|c| f.residue(c)).collect::<Result<_, _>>()?;
            let mut via_table = AlgebraElement::zero();
            for (k, c) in res.iter().enumerate() {
                via_table = via_table.add(&bars[k].scale(c));
            }
            let direct = reduced.multiply(&bars[i], &bars[j])?;
            let line = format!("({})*({}) = {}", labels[i], labels[j], reduced.fmt_element(&via_table));
            if direct != via_table {
                mismatches.push(format!("{line}, reduced presentation gives {}", reduced.fmt_element(&direct)));
            }
            table.push(line);
            constants.insert((i, j), res);
        }
        let degrees: Vec<u32> = (0..r).map(|i| self.row_degree(i)).collect();
        let mut red = Reduction {
            residue_field: kf.describe(),
            presentation: reduced.to_string(),
            basis: labels,
            table,
            dual_route_mismatches: mismatches,
            associativity_failures: vec![],
            unit_failures: vec![],
            domain_certificate: domain_certificate(&reduced)?,
            reduced,
            constants,
            degrees,
        };
        let unit = linalg::unit_vec(&kf, r, 0);
        for j in 0..r {
            let e = linalg::unit_vec(&kf, r, j);
            if red.mul_vectors(&unit, &e).as_ref() != Some(&e) || red.mul_vectors(&e, &unit).as_ref() != Some(&e) {
                red.unit_failures.push(red.basis[j].clone());
            }
        }
        let triples: Vec<(usize, usize, usize)> = (0..r)
            .flat_map(|i| (0..r).flat_map(move |j| (0..r).map(move |k| (i, j, k))))
            .filter(|&(i, j, k)| red.degrees[i] + red.degrees[j] + red.degrees[k] <= n)
            .collect();
        let failures: Vec<Option<String>> = crate::par::map(&triples, |&(i, j, k)| {
            let ij = red.constants.get(&(i, j))?;
            let jk = red.constants.get(&(j, k))?;
            let left = red.mul_vectors(ij, &linalg::unit_vec(&kf, r, k));
            let right = red.mul_vectors(&linalg::unit_vec(&kf, r, i), jk);
            (left != right).then(|| format!("({})({})({})", red.basis[i], red.basis[j], red.basis[k]))
        });
        red.associativity_failures = failures.into_iter().flatten().collect();
        Ok(red)
    }
}

/// A structural reason for the reduced algebra to be a domain: one generator
/// and no rules, or a confluent system whose only rules are
/// `g_j g_i -> c·g_i g_j + (lower degree)` with `i < j`, `c ≠ 0`, one per
/// pair, so that the associated graded algebra is a quantum affine space.
pub fn domain_certificate(p: &Presentation) -> Result<Option<String>, ReductorError> {
    let n = p.generators().len();
    if p.rules().is_empty() {
        return Ok((n <= 1).then(|| if n == 0 { "field".to_string() } else { "polynomial ring in one variable".to_string() }));
    }
    if p.rules().len() != n * (n - 1) / 2 {
        return Ok(None);
    }
    let mut seen = vec![false; n * n];
    let mut coeffs = Vec::new();
    for r in p.rules() {
        let l = r.lhs.letters();
        if l.len() != 2 || l[0] <= l[1] {
            return Ok(None);
        }
        let (j, i) = (l[0] as usize, l[1] as usize);
        if std::mem::replace(&mut seen[i * n + j], true) {
            return Ok(None);
        }
        let swapped = p.word(&[i as u8, j as u8]);
        let Some(c) = r.rhs.coeff(&swapped) else {
            return Ok(None);
        };
        if r.rhs.terms().any(|(w, _)| *w != swapped && w.degree() >= r.lhs.degree()) {
            return Ok(None);
        }
        coeffs.push(p.field().fmt_elem(c));
    }
    if !p.confluence_check(3 * p.generators().iter().map(|g| g.weight).max().unwrap_or(1))?.is_empty() {
        return Ok(None);
    }
    let kind = if p.mode() == FiltrationMode::Graded { "quantum affine space" } else { "filtered deformation of a quantum affine space" };
    Ok(Some(format!("{kind} with commutation scalars [{}]", coeffs.join(", "))))
}
