use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Reductor, ReductorError};
use crate::freealg::{AlgebraElement, Word};
use crate::group::GroupElement;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum AxiomsVerdict {
    Valuation,
    Counterexample {
        a: String,
        b: String,
        value_a: GroupElement,
        value_b: GroupElement,
        /// `v_F(ab)` for a product failure, `v_F(a+b)` for a sum failure.
        value: GroupElement,
        product: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomsReport {
    pub pool_size: usize,
    pub pairs_checked: usize,
    #[serde(flatten)]
    pub verdict: AxiomsVerdict,
}

impl AxiomsReport {
    pub fn passed(&self) -> bool {
        self.verdict == AxiomsVerdict::Valuation
    }
}

impl Reductor {
    /// Normal words used for pools: degree at most 2, and at most half the
    /// bound so that products stay inside `F_NA`.
    fn pool_words(&self) -> Vec<Word> {
        let d = 2.min(self.bound() / 2);
        self.words().iter().filter(|w| w.degree() <= d).cloned().collect()
    }

    /// Deterministic element pool: zero, `c·w`, then `c·w + c'·w'` with
    /// `w > w'`, over the nonzero field pool coefficients. A seed appends
    /// random three-term combinations.
    pub fn element_pool(&self, seed: Option<u64>) -> Vec<AlgebraElement> {
        let coeffs: Vec<_> = self.field().coefficient_pool().into_iter().filter(|c| !c.is_zero()).collect();
        let words = self.pool_words();
        let mut pool = vec![AlgebraElement::zero()];
        for c in &coeffs {
            for w in &words {
                pool.push(AlgebraElement::term(w.clone(), c.clone()));
            }
        }
        for (hi, whi) in words.iter().enumerate() {
            for wlo in &words[..hi] {
                for c in &coeffs {
                    for d in &coeffs {
                        let mut a = AlgebraElement::term(whi.clone(), c.clone());
                        a.add_term(wlo.clone(), d.clone());
                        pool.push(a);
                    }
                }
            }
        }
        if let Some(s) = seed {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            for _ in 0..16 {
                let mut a = AlgebraElement::zero();
                for _ in 0..3 {
                    let w = &words[rng.gen_range(0..words.len())];
                    let c = &coeffs[rng.gen_range(0..coeffs.len())];
                    a.add_term(w.clone(), c.clone());
                }
                pool.push(a);
            }
        }
        pool
    }

    /// Check `v_F(ab) = v_F(a) + v_F(b)` and `v_F(a+b) ≥ min` over all
    /// ordered pool pairs, stopping at the first violation.
    pub fn valuation_axioms_check(&self, pool: &[AlgebraElement]) -> Result<AxiomsReport, ReductorError> {
        let p = self.presentation();
        let mut words: Vec<Word> = pool.iter().flat_map(|a| a.terms().map(|(w, _)| w.clone())).collect();
        words.sort();
        words.dedup();
        let mut products: HashMap<(Word, Word), AlgebraElement> = HashMap::new();
        for u in &words {
            for w in &words {
                let uw = p.reduce_word(&u.concat(w))?;
                products.insert((u.clone(), w.clone()), uw);
            }
        }
        let values: Vec<GroupElement> = pool.iter().map(|a| self.value_function(a)).collect::<Result<_, _>>()?;
        let mut checked = 0;
        for (a, va) in pool.iter().zip(&values) {
            for (b, vb) in pool.iter().zip(&values) {
                checked += 1;
                let mut ab = AlgebraElement::zero();
                for (u, c) in a.terms() {
                    for (w, d) in b.terms() {
                        let cd = c * d;
                        for (x, e) in products[&(u.clone(), w.clone())].terms() {
                            ab.add_term(x.clone(), e * &cd);
                        }
                    }
                }
                let vab = self.value_function(&ab)?;
                let expect = va.add(vb).expect("same rank");
                let sum = a.add(b);
                let vsum = self.value_function(&sum)?;
                let violation = if vab != expect {
                    Some((vab, true))
                } else if !vsum.ge(va.min(vb)) {
                    Some((vsum, false))
                } else {
                    None
                };
                if let Some((value, product)) = violation {
                    return Ok(AxiomsReport {
                        pool_size: pool.len(),
                        pairs_checked: checked,
                        verdict: AxiomsVerdict::Counterexample {
                            a: p.fmt_element(a),
                            b: p.fmt_element(b),
                            value_a: va.clone(),
                            value_b: vb.clone(),
                            value,
                            product,
                        },
                    });
                }
            }
        }
        Ok(AxiomsReport { pool_size: pool.len(), pairs_checked: checked, verdict: AxiomsVerdict::Valuation })
    }

    /// `v_F(a) - v_F(b)`, the value of the formal fraction `a/b`. Only
    /// meaningful once the axioms check has passed.
    pub fn fraction_value(&self, a: &AlgebraElement, b: &AlgebraElement, axioms: &AxiomsReport) -> Result<GroupElement, ReductorError> {
        if !axioms.passed() {
            return Err(ReductorError::Precondition("valuation axioms check did not pass".into()));
        }
        if b.is_zero() {
            return Err(ReductorError::DivisionByZero);
        }
        let va = self.value_function(a)?;
        let vb = self.value_function(b)?;
        if va.is_infinite() {
            return Ok(GroupElement::Infinity);
        }
        Ok(va.sub(&vb).expect("finite"))
    }
}
