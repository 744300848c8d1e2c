use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::scalar::{BaseField, Fp, Scalar};

/// A reduced fraction of polynomials with monic (lex-leading) denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            let (b, n) = (num.base(), num.nvars());
            return Some(RatFunc { num, den: Poly::one(b, n) });
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides")) };
        let lc = d.leading().unwrap().1.clone();
        if !lc.is_one() {
            let inv = lc.inv().unwrap();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Some(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.base(), p.nvars());
        RatFunc { num: p, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn base(&self) -> BaseField {
        self.num.base()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn inv(&self) -> Option<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn to_string_with(&self, vars: &[String]) -> String {
        struct D<'a>(&'a RatFunc, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, self.1)
            }
        }
        D(self, vars).to_string()
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, vars: &[String]) -> fmt::Result {
        struct P<'a>(&'a Poly, &'a [String]);
        impl fmt::Display for P<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, self.1)
            }
        }
        if self.den.is_one() {
            return self.num.fmt_with(f, vars);
        }
        let wrap = |p: &Poly| p.terms().count() > 1 || p.leading().is_some_and(|(_, c)| c.is_negative());
        let n = if wrap(&self.num) { format!("({})", P(&self.num, vars)) } else { P(&self.num, vars).to_string() };
        let d = if self.den.terms().count() > 1 { format!("({})", P(&self.den, vars)) } else { P(&self.den, vars).to_string() };
        write!(f, "{n}/{d}")
    }
}

/// Default variable names used when printing a function-field element.
pub(crate) fn default_vars(n: usize) -> Vec<String> {
    ["X", "Y"].iter().take(n).map(|s| s.to_string()).collect()
}

/// An exact element of one of the supported fields.
///
/// Elements of a function field are always stored as [`FieldElement::Function`],
/// constants included, so that equality stays syntactic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldElement {
    Scalar(Scalar),
    Function(RatFunc),
}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            FieldElement::Scalar(s) => s.hash(state),
            FieldElement::Function(r) => r.hash(state),
        }
    }
}

impl FieldElement {
    pub fn rational(n: i64, d: i64) -> Self {
        FieldElement::Scalar(Scalar::Rational(BigRational::new(n.into(), d.into())))
    }

    pub fn modular(v: u64, p: u64) -> Self {
        FieldElement::Scalar(Scalar::Modular(Fp::new(v, p)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Scalar(s) => s.is_zero(),
            FieldElement::Function(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Scalar(s) => s.is_one(),
            FieldElement::Function(r) => r.is_one(),
        }
    }

    /// Zero of the same field as `self`.
    pub fn zero_like(&self) -> Self {
        match self {
            FieldElement::Scalar(s) => FieldElement::Scalar(s.base().zero()),
            FieldElement::Function(r) => FieldElement::Function(RatFunc::from_poly(Poly::zero(r.base(), r.nvars()))),
        }
    }

    pub fn one_like(&self) -> Self {
        match self {
            FieldElement::Scalar(s) => FieldElement::Scalar(s.base().one()),
            FieldElement::Function(r) => FieldElement::Function(RatFunc::from_poly(Poly::one(r.base(), r.nvars()))),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        match self {
            FieldElement::Scalar(s) => s.inv().map(FieldElement::Scalar),
            FieldElement::Function(r) => r.inv().map(FieldElement::Function),
        }
    }

    pub fn pow(&self, e: i64) -> Option<Self> {
        let b = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = self.one_like();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &b;
        }
        Some(acc)
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self * &i)
    }

    /// Sign-aware printing helper: true for negative rationals and for
    /// functions whose numerator leads with a negative coefficient.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElement::Scalar(s) => s.is_negative(),
            FieldElement::Function(r) => r.den().is_one() && r.num().leading().is_some_and(|(_, c)| c.is_negative()) && r.num().terms().count() == 1,
        }
    }

    /// True when the element prints as a single atom (no `+`/`-` inside).
    pub fn is_atomic(&self) -> bool {
        match self {
            FieldElement::Scalar(_) => true,
            FieldElement::Function(r) => r.num().terms().count() <= 1 && r.den().is_one(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Scalar(Scalar::Rational(r)) => Some(r),
            _ => None,
        }
    }

    fn promote(s: &Scalar, like: &RatFunc) -> RatFunc {
        RatFunc::from_poly(Poly::constant(s.clone(), like.nvars()))
    }

    fn binop(&self, o: &Self, sop: impl Fn(&Scalar, &Scalar) -> Scalar, rop: impl Fn(&RatFunc, &RatFunc) -> RatFunc) -> Self {
        match (self, o) {
            (FieldElement::Scalar(a), FieldElement::Scalar(b)) => FieldElement::Scalar(sop(a, b)),
            (FieldElement::Function(a), FieldElement::Function(b)) => FieldElement::Function(rop(a, b)),
            (FieldElement::Scalar(a), FieldElement::Function(b)) => FieldElement::Function(rop(&Self::promote(a, b), b)),
            (FieldElement::Function(a), FieldElement::Scalar(b)) => FieldElement::Function(rop(a, &Self::promote(b, a))),
        }
    }
}

fn rf_add(a: &RatFunc, b: &RatFunc) -> RatFunc {
    if a.den == b.den {
        return RatFunc::new(a.num.add(&b.num), a.den.clone()).unwrap();
    }
    RatFunc::new(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den)).unwrap()
}

fn rf_mul(a: &RatFunc, b: &RatFunc) -> RatFunc {
    RatFunc::new(a.num.mul(&b.num), a.den.mul(&b.den)).unwrap()
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        self.binop(o, |a, b| a + b, rf_add)
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        self.binop(o, |a, b| a * b, rf_mul)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Scalar(s) => FieldElement::Scalar(-s),
            FieldElement::Function(r) => FieldElement::Function(RatFunc { num: r.num.neg(), den: r.den.clone() }),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        self + &(-o)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, o: FieldElement) -> FieldElement {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Scalar(s) => write!(f, "{s}"),
            FieldElement::Function(r) => r.fmt_with(f, &default_vars(r.nvars())),
        }
    }
}

impl From<BigRational> for FieldElement {
    fn from(r: BigRational) -> Self {
        FieldElement::Scalar(Scalar::Rational(r))
    }
}

impl FieldElement {
    pub fn rational_zero() -> Self {
        FieldElement::from(BigRational::zero())
    }

    pub fn rational_one() -> Self {
        FieldElement::from(BigRational::one())
    }
}
