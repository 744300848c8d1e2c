//! Exact valued fields: `Q` with a p-adic valuation, `k(X)` with the order
//! of vanishing at `X = 0`, and `k(X,Y)` with the lex-monomial valuation.
//! Each comes with its valuation ring, residue field, residue and lifting
//! maps, and a fixed system of uniformizers.

mod element;
mod poly;
mod scalar;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

pub use element::{FieldElement, RatFunc};
pub use poly::{Mono, Poly};
pub use scalar::{BaseField, Fp, Scalar};

use crate::expr::{self, Evaluator, ParseError};
use crate::group::GroupElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("element {0} is not integral (negative value)")]
    NotIntegral(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid field configuration: {0}")]
    Config(String),
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdent { name: String, pos: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("group rank mismatch: field has rank {0}, got {1}")]
    Rank(usize, usize),
    #[error("infinite value has no uniformizer")]
    Infinite,
}

/// Which valuation the field carries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    /// Exponent of `p` on `Q`.
    PAdic(u64),
    /// Lex-minimal exponent vector of a function-field element: order at
    /// `X = 0` for one variable, the `(exp_X, exp_Y)` monomial valuation for two.
    Monomial,
    /// `v(x) = 0` for all nonzero `x`; used for residue fields.
    Trivial,
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// A field `K` together with a surjective valuation onto `Z^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuedField {
    base: BaseField,
    vars: Vec<String>,
    valuation: Valuation,
}

impl ValuedField {
    pub fn new(base: BaseField, vars: Vec<String>, valuation: Valuation) -> Result<Self, FieldError> {
        if let BaseField::Prime(p) = base {
            if !is_prime(p) || p >= 1 << 31 {
                return Err(FieldError::NotPrime(p));
            }
        }
        match &valuation {
            Valuation::PAdic(p) => {
                if !is_prime(*p) {
                    return Err(FieldError::NotPrime(*p));
                }
                if base != BaseField::Rationals || !vars.is_empty() {
                    return Err(FieldError::Config("p-adic valuation needs K = Q".into()));
                }
            }
            Valuation::Monomial => {
                if vars.is_empty() || vars.len() > 2 {
                    return Err(FieldError::Config("monomial valuation needs one or two variables".into()));
                }
            }
            Valuation::Trivial => {
                if !vars.is_empty() {
                    return Err(FieldError::Config("trivial valuation is only used on Q and F_p".into()));
                }
            }
        }
        Ok(ValuedField { base, vars, valuation })
    }

    /// `Q` with the `p`-adic valuation.
    pub fn p_adic(p: u64) -> Result<Self, FieldError> {
        ValuedField::new(BaseField::Rationals, vec![], Valuation::PAdic(p))
    }

    /// `base(X)` with the order-at-`X` valuation.
    pub fn x_adic(base: BaseField) -> Result<Self, FieldError> {
        ValuedField::new(base, vec!["X".into()], Valuation::Monomial)
    }

    /// `base(X,Y)` with the lex-monomial valuation of rank two.
    pub fn lex_monomial(base: BaseField) -> Result<Self, FieldError> {
        ValuedField::new(base, vec!["X".into(), "Y".into()], Valuation::Monomial)
    }

    /// `base` with the trivial valuation.
    pub fn trivial(base: BaseField) -> Self {
        ValuedField { base, vars: vec![], valuation: Valuation::Trivial }
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    /// Rank `k` of the value group `Z^k`.
    pub fn rank(&self) -> usize {
        match self.valuation {
            Valuation::Monomial => self.vars.len(),
            _ => 1,
        }
    }

    pub fn is_function_field(&self) -> bool {
        !self.vars.is_empty()
    }

    pub fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    pub fn describe(&self) -> String {
        let k = if self.vars.is_empty() { self.base.name() } else { format!("{}({})", self.base.name(), self.vars.join(",")) };
        match &self.valuation {
            Valuation::PAdic(p) => format!("{k}, {p}-adic"),
            Valuation::Monomial if self.vars.len() == 1 => format!("{k}, order at {}", self.vars[0]),
            Valuation::Monomial => format!("{k}, lex-monomial"),
            Valuation::Trivial => format!("{k}, trivial"),
        }
    }

    fn lift_scalar(&self, s: Scalar) -> FieldElement {
        if self.vars.is_empty() {
            FieldElement::Scalar(s)
        } else {
            FieldElement::Function(RatFunc::from_poly(Poly::constant(s, self.vars.len())))
        }
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.lift_scalar(self.base.from_i64(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        self.lift_scalar(self.base.from_bigint(n))
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn ratio(&self, n: i64, d: i64) -> Result<FieldElement, FieldError> {
        self.from_i64(n).div(&self.from_i64(d)).ok_or(FieldError::DivisionByZero)
    }

    /// The `i`-th variable of a function field.
    pub fn var(&self, i: usize) -> FieldElement {
        FieldElement::Function(RatFunc::from_poly(Poly::var(self.base, self.vars.len(), i)))
    }

    /// Does `x` belong to this field's representation.
    pub fn contains(&self, x: &FieldElement) -> bool {
        match x {
            FieldElement::Scalar(s) => self.vars.is_empty() && s.base() == self.base,
            FieldElement::Function(r) => r.nvars() == self.vars.len() && r.base() == self.base,
        }
    }

    pub fn value(&self, x: &FieldElement) -> GroupElement {
        if x.is_zero() {
            return GroupElement::Infinity;
        }
        match (&self.valuation, x) {
            (Valuation::Trivial, _) => GroupElement::zero(1),
            (Valuation::PAdic(p), FieldElement::Scalar(Scalar::Rational(r))) => {
                let p = BigInt::from(*p);
                GroupElement::new(&[multiplicity(r.numer(), &p) - multiplicity(r.denom(), &p)])
            }
            (Valuation::Monomial, FieldElement::Function(f)) => {
                let n = f.num().trailing().unwrap().0;
                let d = f.den().trailing().unwrap().0;
                GroupElement::Finite(n.iter().zip(d).map(|(a, b)| *a as i64 - *b as i64).collect())
            }
            _ => panic!("element {x} does not belong to {}", self.describe()),
        }
    }

    /// `x ∈ f^v_γ K`, i.e. `v(x) ≥ -γ`.
    pub fn in_field_filtration(&self, x: &FieldElement, gamma: &GroupElement) -> bool {
        match gamma.neg() {
            Ok(ng) => self.value(x).ge(&ng),
            Err(_) => true,
        }
    }

    pub fn is_integral(&self, x: &FieldElement) -> bool {
        self.value(x).ge(&GroupElement::zero(self.rank()))
    }

    pub fn residue_field(&self) -> ValuedField {
        match self.valuation {
            Valuation::PAdic(p) => ValuedField::trivial(BaseField::Prime(p)),
            _ => ValuedField::trivial(self.base),
        }
    }

    /// Image of `x ∈ O_v` in `k_v`.
    pub fn residue(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        let v = self.value(x);
        let zero = GroupElement::zero(self.rank());
        if !v.ge(&zero) {
            return Err(FieldError::NotIntegral(self.fmt_elem(x)));
        }
        let rf = self.residue_field();
        if v != zero {
            return Ok(rf.zero());
        }
        match (&self.valuation, x) {
            (Valuation::Trivial, _) => Ok(x.clone()),
            (Valuation::PAdic(p), FieldElement::Scalar(Scalar::Rational(r))) => {
                let fp = BaseField::Prime(*p);
                let n = fp.from_bigint(r.numer());
                let d = fp.from_bigint(r.denom());
                Ok(FieldElement::Scalar(&n * &d.inv().expect("unit denominator")))
            }
            (Valuation::Monomial, FieldElement::Function(f)) => {
                let n = f.num().trailing().unwrap().1;
                let d = f.den().trailing().unwrap().1;
                Ok(FieldElement::Scalar(n * &d.inv().unwrap()))
            }
            _ => unreachable!(),
        }
    }

    /// Canonical lift of a residue to `O_v`.
    pub fn lift(&self, r: &FieldElement) -> FieldElement {
        match (&self.valuation, r) {
            (Valuation::Trivial, _) => r.clone(),
            (Valuation::PAdic(_), FieldElement::Scalar(Scalar::Modular(x))) => FieldElement::from(BigRational::from_integer(BigInt::from(x.value()))),
            (Valuation::Monomial, FieldElement::Scalar(s)) => self.lift_scalar(s.clone()),
            _ => panic!("{r} is not a residue of {}", self.describe()),
        }
    }

    /// Uniformizers `t_i` with `v(t_i) = e_i`.
    pub fn uniformizers(&self) -> Vec<FieldElement> {
        match self.valuation {
            Valuation::PAdic(p) => vec![self.from_i64(p as i64)],
            Valuation::Monomial => (0..self.vars.len()).map(|i| self.var(i)).collect(),
            Valuation::Trivial => vec![self.one()],
        }
    }

    /// Product of uniformizer powers with value exactly `gamma`.
    pub fn uniformizer_for(&self, gamma: &GroupElement) -> Result<FieldElement, FieldError> {
        let c = gamma.coords().ok_or(FieldError::Infinite)?;
        if c.len() != self.rank() {
            return Err(FieldError::Rank(self.rank(), c.len()));
        }
        if self.valuation == Valuation::Trivial {
            return Ok(self.one());
        }
        let mut acc = self.one();
        for (t, &e) in self.uniformizers().iter().zip(c) {
            acc = &acc * &t.pow(e).expect("uniformizer is nonzero");
        }
        Ok(acc)
    }

    /// Generator of the maximal ideal: the uniformizer of the smallest positive value.
    pub fn maximal_ideal_generator(&self) -> FieldElement {
        let r = self.rank();
        self.uniformizer_for(&GroupElement::unit(r, r - 1)).expect("finite")
    }

    pub fn parse(&self, s: &str) -> Result<FieldElement, FieldError> {
        FieldEval { field: self }.eval(&expr::parse(s)?)
    }

    pub fn fmt_elem(&self, x: &FieldElement) -> String {
        match x {
            FieldElement::Function(r) => r.to_string_with(&self.vars),
            _ => x.to_string(),
        }
    }

    /// Deterministic coefficient pool for axiom checks.
    pub fn coefficient_pool(&self) -> Vec<FieldElement> {
        match self.valuation {
            Valuation::PAdic(p) => {
                let p = p as i64;
                vec![self.zero(), self.one(), self.from_i64(-1), self.from_i64(p), self.ratio(1, p).unwrap(), self.from_i64(2)]
            }
            Valuation::Monomial => {
                let x = self.var(0);
                vec![self.zero(), self.one(), self.from_i64(-1), x.clone(), x.inv().unwrap(), &self.one() + &x]
            }
            Valuation::Trivial => vec![self.zero(), self.one(), self.from_i64(-1), self.from_i64(2)],
        }
    }

    /// Every element, for a finite (residue) field.
    pub fn elements(&self) -> Option<Vec<FieldElement>> {
        if self.is_function_field() {
            return None;
        }
        self.base.elements().map(|v| v.into_iter().map(FieldElement::Scalar).collect())
    }

    /// Whether `x` is a square in this field. `None` when the test is unsupported.
    pub fn is_square(&self, x: &FieldElement) -> Option<bool> {
        match x {
            FieldElement::Scalar(s) => Some(s.sqrt().is_some()),
            FieldElement::Function(r) if r.nvars() == 1 => {
                if r.is_zero() {
                    return Some(true);
                }
                Some(univariate_is_square(&r.num().mul(r.den())))
            }
            FieldElement::Function(_) => None,
        }
    }
}

fn multiplicity(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.abs();
    let mut k = 0;
    while !n.is_zero() && n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// Square test for a univariate polynomial over a field of odd or zero characteristic.
fn univariate_is_square(f: &Poly) -> bool {
    let base = f.base();
    let deg = f.leading().map_or(0, |(m, _)| m[0] as usize);
    if deg % 2 == 1 {
        return false;
    }
    let coeff = |i: usize| f.terms().find(|(m, _)| m[0] as usize == i).map(|(_, c)| c.clone()).unwrap_or_else(|| base.zero());
    let lc = coeff(deg);
    let Some(root) = lc.sqrt() else { return false };
    let half = deg / 2;
    // determine g top-down from g_half = sqrt(lc)
    let mut g = vec![base.zero(); half + 1];
    g[half] = root;
    let two_g = &g[half] + &g[half];
    let inv = match two_g.inv() {
        Some(i) => i,
        None => return false,
    };
    for k in 1..=half {
        let target = coeff(deg - k);
        let mut acc = base.zero();
        for i in (half - k + 1)..=half {
            let j = deg - k - i;
            if j > half || j < half - k + 1 {
                continue;
            }
            acc = &acc + &(&g[i] * &g[j]);
        }
        g[half - k] = &(&target - &acc) * &inv;
    }
    let mut gp = Poly::zero(base, 1);
    for (i, c) in g.into_iter().enumerate() {
        gp = gp.add(&Poly::monomial(c, SmallVec::from_elem(i as u32, 1)));
    }
    gp.mul(&gp) == *f
}

struct FieldEval<'a> {
    field: &'a ValuedField,
}

impl Evaluator for FieldEval<'_> {
    type Value = FieldElement;
    type Error = FieldError;

    fn int(&self, n: &BigInt) -> Result<FieldElement, FieldError> {
        Ok(self.field.from_bigint(n))
    }

    fn ident(&self, name: &str, pos: usize) -> Result<FieldElement, FieldError> {
        match self.field.vars.iter().position(|v| v == name) {
            Some(i) => Ok(self.field.var(i)),
            None => Err(FieldError::UnknownIdent { name: name.into(), pos }),
        }
    }

    fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(&a + &b)
    }

    fn neg(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(-a)
    }

    fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(&a * &b)
    }

    fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        a.div(&b).ok_or(FieldError::DivisionByZero)
    }

    fn pow(&self, a: FieldElement, e: i64) -> Result<FieldElement, FieldError> {
        a.pow(e).ok_or(FieldError::DivisionByZero)
    }
}

/// Element of `Q` from a numerator/denominator pair.
pub fn q(n: i64, d: i64) -> FieldElement {
    FieldElement::from(BigRational::new(n.into(), d.into()))
}

impl FieldElement {
    /// `1` in the rational numbers; handy in tests.
    pub fn q_one() -> Self {
        FieldElement::from(BigRational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(c: &[i64]) -> GroupElement {
        GroupElement::new(c)
    }

    #[test]
    fn values() {
        let k = ValuedField::p_adic(3).unwrap();
        assert_eq!(k.value(&q(9, 2)), g(&[2]));
        assert_eq!(k.value(&q(0, 1)), GroupElement::Infinity);
        let fx = ValuedField::x_adic(BaseField::Rationals).unwrap();
        assert_eq!(fx.value(&fx.parse("X^2/(1+X)").unwrap()), g(&[2]));
        let lex = ValuedField::lex_monomial(BaseField::Rationals).unwrap();
        assert_eq!(lex.value(&lex.parse("X^2*Y + Y^3").unwrap()), g(&[0, 3]));
    }

    #[test]
    fn lex_value_matches_monomial_enumeration() {
        // oracle: expand and take the lex-min exponent vector over monomials
        let lex = ValuedField::lex_monomial(BaseField::Rationals).unwrap();
        for s in ["X^2*Y + Y^3", "X*Y^5 + X^2 + X*Y", "3*X^3*Y - 2*X^3", "(X + Y)^3"] {
            let e = lex.parse(s).unwrap();
            let FieldElement::Function(r) = &e else { panic!() };
            let min = r.num().terms().map(|(m, _)| m.clone()).min().unwrap();
            assert_eq!(lex.value(&e), GroupElement::Finite(min.iter().map(|&x| x as i64).collect()));
        }
    }

    #[test]
    fn field_filtration_membership() {
        let k = ValuedField::p_adic(3).unwrap();
        assert!(k.in_field_filtration(&q(1, 3), &g(&[1])));
        assert!(!k.in_field_filtration(&q(1, 3), &g(&[0])));
        assert!(k.in_field_filtration(&q(0, 1), &g(&[-7])));
    }

    #[test]
    fn residues() {
        let k = ValuedField::p_adic(3).unwrap();
        assert_eq!(k.residue(&q(7, 2)).unwrap(), FieldElement::modular(2, 3));
        assert_eq!(k.residue(&q(0, 1)).unwrap(), FieldElement::modular(0, 3));
        assert!(matches!(k.residue(&q(1, 3)), Err(FieldError::NotIntegral(_))));
        let f5 = ValuedField::x_adic(BaseField::Prime(5)).unwrap();
        let x = f5.parse("(2+X)/(1+3*X)").unwrap();
        assert_eq!(f5.residue(&x).unwrap(), FieldElement::modular(2, 5));
        for v in 0..5 {
            let r = FieldElement::modular(v, 5);
            assert_eq!(f5.residue(&f5.lift(&r)).unwrap(), r);
        }
    }

    #[test]
    fn uniformizer_products() {
        let k = ValuedField::p_adic(3).unwrap();
        assert_eq!(k.uniformizer_for(&g(&[-2])).unwrap(), q(1, 9));
        assert_eq!(k.uniformizer_for(&g(&[0])).unwrap(), q(1, 1));
        let lex = ValuedField::lex_monomial(BaseField::Rationals).unwrap();
        let t = lex.uniformizer_for(&g(&[1, -3])).unwrap();
        assert_eq!(t, lex.parse("X/Y^3").unwrap());
        assert_eq!(lex.value(&t), g(&[1, -3]));
        assert_eq!(lex.maximal_ideal_generator(), lex.var(1));
    }

    #[test]
    fn canonical_forms_are_syntactic() {
        let f = ValuedField::lex_monomial(BaseField::Rationals).unwrap();
        let a = f.parse("(X^2 - Y^2)/(X + Y)").unwrap();
        assert_eq!(a, f.parse("X - Y").unwrap());
        let b = f.parse("(2*X + 2)/(4*Y)").unwrap();
        assert_eq!(b, f.parse("(X+1)/(2*Y)").unwrap());
        assert_eq!(f.fmt_elem(&f.parse("X*Y^-3").unwrap()), "X/Y^3");
    }

    #[test]
    fn square_tests() {
        let f5 = ValuedField::x_adic(BaseField::Prime(5)).unwrap();
        assert_eq!(f5.is_square(&f5.parse("(X+2)^2/(X^2+1)^2").unwrap()), Some(true));
        assert_eq!(f5.is_square(&f5.parse("X+2").unwrap()), Some(false));
        assert_eq!(f5.is_square(&f5.parse("4*(X+2)").unwrap()), Some(false));
        let q3 = ValuedField::p_adic(3).unwrap();
        assert_eq!(q3.is_square(&q(4, 9)), Some(true));
        assert_eq!(q3.is_square(&q(2, 1)), Some(false));
    }

    fn pool_rich(k: &ValuedField) -> Vec<FieldElement> {
        let mut pool = k.coefficient_pool();
        let extra: Vec<_> = pool.iter().flat_map(|a| pool.iter().map(move |b| a + b)).collect();
        pool.extend(extra.into_iter().step_by(3));
        pool
    }

    fn check_valuation_axioms(k: &ValuedField) {
        let pool = pool_rich(k);
        for a in &pool {
            for b in &pool {
                let (va, vb) = (k.value(a), k.value(b));
                assert_eq!(k.value(&(a * b)), va.add(&vb).unwrap(), "{a} * {b}");
                assert!(k.value(&(a + b)).ge(va.min(&vb)), "{a} + {b}");
                if k.is_integral(a) && k.is_integral(b) {
                    let rf = k.residue_field();
                    let _ = rf;
                    assert_eq!(k.residue(&(a * b)).unwrap(), &k.residue(a).unwrap() * &k.residue(b).unwrap());
                    assert_eq!(k.residue(&(a + b)).unwrap(), &k.residue(a).unwrap() + &k.residue(b).unwrap());
                    assert_eq!(k.residue(a).unwrap().is_zero(), !k.value(a).is_zero());
                }
            }
        }
    }

    #[test]
    fn valuation_axioms_on_pools() {
        check_valuation_axioms(&ValuedField::p_adic(3).unwrap());
        check_valuation_axioms(&ValuedField::x_adic(BaseField::Prime(5)).unwrap());
        check_valuation_axioms(&ValuedField::x_adic(BaseField::Rationals).unwrap());
        check_valuation_axioms(&ValuedField::lex_monomial(BaseField::Rationals).unwrap());
    }

    #[test]
    fn field_filtration_is_a_filtration() {
        let k = ValuedField::p_adic(3).unwrap();
        let pool = pool_rich(&k);
        let gammas: Vec<_> = (-3..=3).map(|i| g(&[i])).collect();
        for x in &pool {
            for (i, a) in gammas.iter().enumerate() {
                // monotone in gamma
                for b in &gammas[i..] {
                    if k.in_field_filtration(x, a) {
                        assert!(k.in_field_filtration(x, b));
                    }
                }
                for y in &pool {
                    for b in &gammas {
                        if k.in_field_filtration(x, a) && k.in_field_filtration(y, b) {
                            assert!(k.in_field_filtration(&(x * y), &a.add(b).unwrap()));
                        }
                    }
                }
            }
        }
        assert!(k.in_field_filtration(&k.one(), &g(&[0])));
    }

    #[test]
    fn rejects_bad_configs() {
        assert_eq!(ValuedField::p_adic(4), Err(FieldError::NotPrime(4)));
        assert!(ValuedField::x_adic(BaseField::Prime(6)).is_err());
        assert!(matches!(ValuedField::p_adic(3).unwrap().parse("Z + 1"), Err(FieldError::UnknownIdent { .. })));
    }
}
