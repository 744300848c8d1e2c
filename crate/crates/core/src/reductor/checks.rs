use serde::Serialize;

use super::{Reductor, ReductorError};
use crate::freealg::FiltrationMode;
use crate::group::GroupElement;
use crate::lattice::{Lattice, LatticeRow};
use crate::linalg::{self, scale_vec, Vector};
use crate::par;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnramifiedRow {
    /// `F_nΛ` in `F_nA`
    pub filtered: LatticeRow,
    /// `Λ ∩ R_n` in `R_n`
    pub graded: LatticeRow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectionRow {
    pub degree: u32,
    pub filtered: bool,
    pub associated_graded: bool,
    pub rees: bool,
    pub torsion_free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectionReport {
    pub rows: Vec<ConnectionRow>,
    pub verdicts_agree: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymbolsCommuteReport {
    pub noncommuting: Vec<String>,
    pub commutators_in_lambda: bool,
    pub graded_dims: Vec<usize>,
    pub polynomial_dims: Vec<usize>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnectedGradedReport {
    /// `π(O_v<X>_n) = Λ ∩ R_n` per degree
    pub pieces_agree: Vec<bool>,
    pub degree_one_residue_dim: usize,
    pub degree_one_dim: usize,
    /// Degrees where `dim_K R_n` differs from the residue dimension of `Λ_n`.
    pub dimension_gaps: Vec<u32>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    /// `(i, j, m_vF_jΛ ∩ F_iA = m_vF_iΛ)`
    pub maximal_ideal: Vec<(u32, u32, bool)>,
    /// `(γ, n, (f_γK)Λ ∩ F_nA = (f_γK)F_nΛ)`
    pub field_filtration: Vec<(GroupElement, u32, bool)>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongReport {
    pub pairs: Vec<(GroupElement, GroupElement, bool)>,
    pub products_checked: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossedReport {
    pub gammas: Vec<GroupElement>,
    pub transports_bijective: bool,
    pub section_multiplicative: bool,
    pub pairs_checked: usize,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// Commutative monomials of each weighted degree up to `n`.
fn polynomial_dims(weights: &[u32], n: u32) -> Vec<usize> {
    let mut dims = vec![0usize; n as usize + 1];
    dims[0] = 1;
    for &w in weights {
        for d in (w as usize)..=(n as usize) {
            dims[d] += dims[d - w as usize];
        }
    }
    dims
}

impl Reductor {
    fn restrict(&self, lattice: &Lattice, lo: usize, hi: usize, label: String) -> Result<Lattice, ReductorError> {
        let gens = match lattice.kind() {
            crate::lattice::LatticeKind::Fg(g) => g.iter().map(|v| v[lo..hi].to_vec()).collect(),
            crate::lattice::LatticeKind::IdealSum(_) => unreachable!("reductor lattices are finitely generated"),
        };
        Ok(Lattice::fg(self.field(), hi - lo, label, gens)?)
    }

    /// `Λ ∩ R_n` as a lattice in `R_n`.
    pub fn graded_lattice(&self, n: u32) -> Result<Lattice, ReductorError> {
        let inter = self.filtered_lattice(n)?.intersect_subspace(&self.graded_subspace(n, n))?;
        self.restrict(&inter, self.offset(n), self.dim(n), format!("Λ∩R_{n}"))
    }

    /// Unramified reduction per degree, for `F_nΛ` and for `Λ ∩ R_n`.
    pub fn check_unramified(&self) -> Result<Vec<UnramifiedRow>, ReductorError> {
        (0..=self.bound())
            .map(|n| {
                let filtered = self.filtered_lattice(n)?.row(n, self.dim(n))?;
                let graded = self.graded_lattice(n)?.row(n, self.dim(n) - self.offset(n))?;
                Ok(UnramifiedRow { filtered, graded })
            })
            .collect()
    }

    /// Three routes to unramifiedness: `F_nΛ` in `F_nA`, `G_F(Λ)_n` in
    /// `G_F(A)_n`, and the Rees component rebuilt from raw generators;
    /// plus `F_nΛ ∩ F_{n-1}A = F_{n-1}Λ`.
    pub fn connection_check(&self) -> Result<ConnectionReport, ReductorError> {
        let mut rows = Vec::new();
        for n in 0..=self.bound() {
            let fl = self.filtered_lattice(n)?;
            let filtered = fl.is_unramified(self.dim(n))?;
            let gr = fl.quotient_lattice(&self.lower_subspace(n, n))?;
            let associated_graded = gr.is_unramified(self.dim(n) - self.offset(n))?;
            let rees = Lattice::fg(self.field(), self.dim(n), format!("Rees_{n}"), self.raw_generators(n)?)?.is_unramified(self.dim(n))?;
            let torsion_free = if n == 0 {
                true
            } else {
                let inter = fl.intersect_subspace(&self.lower_subspace(n, n))?;
                let inter = self.restrict(&inter, 0, self.offset(n), String::new())?;
                inter.same_module(&self.filtered_lattice(n - 1)?)?
            };
            rows.push(ConnectionRow { degree: n, filtered, associated_graded, rees, torsion_free });
        }
        let verdicts_agree = rows.iter().all(|r| r.filtered == r.associated_graded && r.filtered == r.rees);
        let passed = verdicts_agree && rows.iter().all(|r| r.filtered && r.torsion_free);
        Ok(ConnectionReport { rows, verdicts_agree, passed })
    }

    /// Symbols of generators commute in `G_F(A)` (commutators drop degree,
    /// with the commutator in `Λ`), and `G_F(A)` has the dimensions of a
    /// polynomial ring, which together make it one.
    pub fn symbols_commute_check(&self) -> Result<SymbolsCommuteReport, ReductorError> {
        let p = self.presentation();
        let k = p.generators().len();
        let mut noncommuting = Vec::new();
        let mut in_lambda = true;
        for i in 0..k {
            for j in i + 1..k {
                let (a, b) = (p.generator_element(i), p.generator_element(j));
                let c = p.multiply(&a, &b)?.sub(&p.multiply(&b, &a)?);
                let top = p.generators()[i].weight + p.generators()[j].weight;
                if c.degree().is_some_and(|d| d >= top) {
                    noncommuting.push(format!("[{}, {}] = {}", p.generators()[i].name, p.generators()[j].name, p.fmt_element(&c)));
                }
                if top <= self.bound() && !self.contains(&c)? {
                    in_lambda = false;
                }
            }
        }
        let weights: Vec<u32> = p.generators().iter().map(|g| g.weight).collect();
        let polynomial = polynomial_dims(&weights, self.bound());
        let graded: Vec<usize> = self.components().iter().map(|c| c.graded_dim).collect();
        let ranks_match = self.components().iter().all(|c| c.gr_rank == c.graded_dim);
        let passed = noncommuting.is_empty() && in_lambda && graded == polynomial && ranks_match;
        Ok(SymbolsCommuteReport { noncommuting, commutators_in_lambda: in_lambda, graded_dims: graded, polynomial_dims: polynomial, passed })
    }

    /// For a graded presentation: `π(O_v<X>_n) = Λ ∩ R_n`, and the degree-1
    /// piece reduces without loss of dimension.
    pub fn connected_graded_check(&self) -> Result<ConnectedGradedReport, ReductorError> {
        let p = self.presentation();
        if p.mode() != FiltrationMode::Graded {
            return Err(ReductorError::Precondition("presentation is not graded".into()));
        }
        let by_degree: Vec<Vec<_>> = (0..=self.bound()).map(|k| self.words()[self.offset(k)..self.offset(k + 1)].to_vec()).collect();
        let mut agree = Vec::new();
        let mut gaps = Vec::new();
        let mut deg1 = (0, 0);
        for n in 0..=self.bound() {
            let (lo, hi) = (self.offset(n), self.dim(n));
            let elems = if n == 0 { vec![p.one()] } else { super::degree_generators(p, n, &by_degree)? };
            let mut homogeneous = true;
            let mut gens: Vec<Vector> = Vec::new();
            for e in &elems {
                homogeneous &= e.terms().all(|(w, _)| w.degree() == n);
                gens.push(self.vector(e)?[lo..hi].to_vec());
            }
            let direct = Lattice::fg(self.field(), hi - lo, format!("Λ_{n}"), gens)?;
            let meet = self.graded_lattice(n)?;
            agree.push(homogeneous && direct.same_module(&meet)?);
            if direct.residue_dim() != hi - lo {
                gaps.push(n);
            }
            if n == 1 {
                deg1 = (direct.residue_dim(), hi - lo);
            }
        }
        let passed = agree.iter().all(|&b| b) && (self.bound() == 0 || deg1.0 == deg1.1);
        Ok(ConnectedGradedReport { pieces_agree: agree, degree_one_residue_dim: deg1.0, degree_one_dim: deg1.1, dimension_gaps: gaps, passed })
    }

    /// `m_vF_jΛ ∩ F_iA = m_vF_iΛ` for `i ≤ j ≤ max_ij`, and
    /// `(f_γK)Λ ∩ F_nA = (f_γK)F_nΛ` for sampled `γ` and `n ≤ max_n`, with
    /// `F_NΛ` standing in for `Λ`.
    pub fn lemma_identities_check(&self, max_ij: u32, gammas: &[GroupElement], max_n: u32) -> Result<LemmaReport, ReductorError> {
        let f = self.field();
        let rows = self.basis().rows();
        let scaled =
            |t: &crate::field::FieldElement, count: usize, width: usize| -> Vec<Vector> { rows[..count].iter().map(|r| scale_vec(&r[..width], t)).collect() };
        let pi = f.maximal_ideal_generator();
        let max_ij = max_ij.min(self.bound());
        let mut maximal_ideal = Vec::new();
        for j in 0..=max_ij {
            let d = self.dim(j);
            let mfj = Lattice::fg(f, d, "m F_j", scaled(&pi, self.rank(j), d))?;
            for i in 0..=j {
                let meet = mfj.intersect_subspace(&self.lower_subspace(i + 1, j))?;
                let mfi = Lattice::fg(f, d, "m F_i", scaled(&pi, self.rank(i), d))?;
                maximal_ideal.push((i, j, meet.same_module(&mfi)?));
            }
        }
        let n_top = self.bound();
        let d = self.dim(n_top);
        let mut field_filtration = Vec::new();
        for g in gammas {
            let t = f.uniformizer_for(&g.neg().map_err(|_| crate::field::FieldError::Infinite)?)?;
            let whole = Lattice::fg(f, d, "fΛ", scaled(&t, self.rank(n_top), d))?;
            for n in 0..=max_n.min(n_top) {
                let meet = whole.intersect_subspace(&self.lower_subspace(n + 1, n_top))?;
                let part = Lattice::fg(f, d, "fF_nΛ", scaled(&t, self.rank(n), d))?;
                field_filtration.push((g.clone(), n, meet.same_module(&part)?));
            }
        }
        let passed = maximal_ideal.iter().all(|r| r.2) && field_filtration.iter().all(|r| r.2);
        Ok(LemmaReport { maximal_ideal, field_filtration, passed })
    }

    /// `F^v_γA · F^v_δA = F^v_{γ+δ}A` inside `F_NA`: products of generators
    /// land in the target, and every target generator factors.
    pub fn strong_filtration_check(&self, pairs: &[(GroupElement, GroupElement)]) -> Result<StrongReport, ReductorError> {
        let f = self.field();
        let p = self.presentation();
        let products = self.basis_products(self.bound())?;
        let mut out = Vec::new();
        let mut failures = Vec::new();
        let mut checked = 0;
        for (g, d) in pairs {
            let gd = g.add(d).map_err(|_| crate::field::FieldError::Infinite)?;
            let neg = |x: &GroupElement| x.neg().map_err(|_| crate::field::FieldError::Infinite);
            let (tg, td, tgd) = (f.uniformizer_for(&neg(g)?)?, f.uniformizer_for(&neg(d)?)?, f.uniformizer_for(&neg(&gd)?)?);
            let mut ok = true;
            let scale = &tg * &td;
            let bound = neg(&gd)?;
            for ((i, j), prod) in &products {
                checked += 1;
                if !self.value_function(&prod.scale(&scale))?.ge(&bound) {
                    ok = false;
                    failures.push(format!("{g}+{d}: product of basis {i},{j} leaves the target"));
                }
            }
            for k in 0..self.basis().rank() {
                let b = self.basis_element(k);
                let x = b.scale(&tg);
                let y = p.scalar(td.clone());
                let fits = self.value_function(&x)?.ge(&neg(g)?) && self.value_function(&y)?.ge(&neg(d)?);
                if !fits || p.multiply(&x, &y)? != b.scale(&tgd) {
                    ok = false;
                    failures.push(format!("{g}+{d}: generator {} does not factor", p.fmt_element(&b)));
                }
            }
            out.push((g.clone(), d.clone(), ok));
        }
        let passed = out.iter().all(|r| r.2);
        Ok(StrongReport { pairs: out, products_checked: checked, failures, passed })
    }

    /// `G_v(A) ≅ Ā*Γ` under the monomial section: multiplying by
    /// `σ(t_γ)` carries `G_v(A)_γ` bijectively onto `Ā`, the section is
    /// multiplicative, and products of homogeneous elements transport to
    /// products in `Ā`.
    pub fn crossed_product_check(&self, gammas: &[GroupElement], pair_degree: u32) -> Result<CrossedReport, ReductorError> {
        let f = self.field();
        let p = self.presentation();
        let reduced = self.residue_presentation()?;
        let kf = reduced.field().clone();
        let r = self.basis().rank();
        let neg = |x: &GroupElement| x.neg().map_err(|_| crate::field::FieldError::Infinite);
        let mut failures = Vec::new();
        let mut bijective = true;
        for g in gammas {
            let t = f.uniformizer_for(&neg(g)?)?;
            let s = f.uniformizer_for(g)?;
            let mut images = Vec::new();
            for i in 0..r {
                let e = self.basis_element(i).scale(&t);
                if self.value_function(&e)? != neg(g)? {
                    failures.push(format!("t*b_{i} is not homogeneous of degree {g}"));
                }
                let bar = self.reduce(&e.scale(&s), &reduced)?;
                let mut v = linalg::zero_vec(&kf, self.words().len());
                for (w, c) in bar.terms() {
                    v[self.words().iter().position(|x| x == w).expect("normal word")] = c.clone();
                }
                images.push(v);
            }
            if linalg::rank(&kf, self.words().len(), &images) != r {
                bijective = false;
                failures.push(format!("transport from degree {g} is not bijective"));
            }
        }
        let mut multiplicative = true;
        for g in gammas {
            for d in gammas {
                let lhs = &f.uniformizer_for(&neg(g)?)? * &f.uniformizer_for(&neg(d)?)?;
                if lhs != f.uniformizer_for(&neg(&g.add(d).expect("finite"))?)? {
                    multiplicative = false;
                    failures.push(format!("section not multiplicative at {g}, {d}"));
                }
            }
        }
        let low: Vec<usize> = (0..r).filter(|&i| self.row_degree(i) <= pair_degree).collect();
        let mut jobs = Vec::new();
        for g in gammas {
            for d in gammas {
                for &i in &low {
                    for &j in &low {
                        jobs.push((g.clone(), d.clone(), i, j));
                    }
                }
            }
        }
        let results = par::map(&jobs, |(g, d, i, j)| -> Result<Option<String>, ReductorError> {
            let x = self.basis_element(*i).scale(&f.uniformizer_for(&neg(g)?)?);
            let y = self.basis_element(*j).scale(&f.uniformizer_for(&neg(d)?)?);
            let z = p.multiply(&x, &y)?.scale(&f.uniformizer_for(&g.add(d).expect("finite"))?);
            if !self.contains(&z)? {
                return Ok(Some(format!("product of degrees {g}, {d} leaves F^v")));
            }
            let direct = self.reduce(&z, &reduced)?;
            let tx = self.reduce(&x.scale(&f.uniformizer_for(g)?), &reduced)?;
            let ty = self.reduce(&y.scale(&f.uniformizer_for(d)?), &reduced)?;
            let twisted = reduced.multiply(&tx, &ty)?;
            Ok((direct != twisted).then(|| {
                format!(
                    "{} * {}: transported {} but Ā gives {}",
                    p.fmt_element(&x),
                    p.fmt_element(&y),
                    reduced.fmt_element(&direct),
                    reduced.fmt_element(&twisted)
                )
            }))
        });
        let mut pairs_checked = 0;
        for res in results {
            pairs_checked += 1;
            if let Some(msg) = res? {
                failures.push(msg);
            }
        }
        let passed = failures.is_empty();
        Ok(CrossedReport { gammas: gammas.to_vec(), transports_bijective: bijective, section_multiplicative: multiplicative, pairs_checked, failures, passed })
    }
}
