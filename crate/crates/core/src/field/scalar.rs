use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Coefficient field of polynomials: `Q` or a prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

impl BaseField {
    pub fn characteristic(self) -> u64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            BaseField::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            BaseField::Prime(p) => Scalar::Modular(Fp::new(n.rem_euclid(p as i64) as u64, p)),
        }
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            BaseField::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            BaseField::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p)).to_u64().expect("reduced");
                Scalar::Modular(Fp::new(r, p))
            }
        }
    }

    /// All elements, when the field is finite.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        match self {
            BaseField::Rationals => None,
            BaseField::Prime(p) => Some((0..p).map(|v| Scalar::Modular(Fp::new(v, p))).collect()),
        }
    }

    pub fn name(self) -> String {
        match self {
            BaseField::Rationals => "Q".into(),
            BaseField::Prime(p) => format!("F{p}"),
        }
    }
}

/// Element of `F_p` for a word-sized prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        Fp { value: value % modulus, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    fn check(self, other: Fp) {
        assert_eq!(self.modulus, other.modulus, "mixed prime fields");
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp::new(1, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Option<Fp> {
        if self.value == 0 {
            return None;
        }
        let g = (self.value as i128).extended_gcd(&(self.modulus as i128));
        debug_assert_eq!(g.gcd, 1);
        Some(Fp::new(g.x.rem_euclid(self.modulus as i128) as u64, self.modulus))
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        self.check(o);
        Fp::new(((self.value as u128 + o.value as u128) % self.modulus as u128) as u64, self.modulus)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::new((self.modulus - self.value) % self.modulus, self.modulus)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        self.check(o);
        Fp::new(((self.value as u128 * o.value as u128) % self.modulus as u128) as u64, self.modulus)
    }
}

/// An element of the base field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular(Fp),
}

impl Scalar {
    pub fn base(&self) -> BaseField {
        match self {
            Scalar::Rational(_) => BaseField::Rationals,
            Scalar::Modular(x) => BaseField::Prime(x.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular(x) => x.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Modular(x) => x.value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) if r.is_zero() => None,
            Scalar::Rational(r) => Some(Scalar::Rational(r.recip())),
            Scalar::Modular(x) => x.inv().map(Scalar::Modular),
        }
    }

    /// A square root in the same field, if one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.is_negative() {
                    return None;
                }
                let (n, d) = (r.numer(), r.denom());
                let (sn, sd) = (n.sqrt(), d.sqrt());
                (&sn * &sn == *n && &sd * &sd == *d).then(|| Scalar::Rational(BigRational::new(sn, sd)))
            }
            Scalar::Modular(x) => (0..x.modulus).map(|v| Fp::new(v, x.modulus)).find(|y| *y * *y == *x).map(Scalar::Modular),
        }
    }

    /// Is this element a negative rational (used for sign-aware printing).
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }

    fn pair<'a>(&'a self, o: &'a Scalar) -> (&'a Scalar, &'a Scalar) {
        assert_eq!(self.base(), o.base(), "mixed base fields");
        (self, o)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match self.pair(o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular(a), Scalar::Modular(b)) => Scalar::Modular(*a + *b),
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match self.pair(o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular(a), Scalar::Modular(b)) => Scalar::Modular(*a * *b),
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular(a) => Scalar::Modular(-*a),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Modular(x) => write!(f, "{}", x.value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_inverse() {
        let f3 = BaseField::Prime(3);
        // 7/2 in F_3 is 7 * 2^{-1} = 1 * 2 = 2
        let seven = f3.from_i64(7);
        let two_inv = f3.from_i64(2).inv().unwrap();
        assert_eq!(&seven * &two_inv, f3.from_i64(2));
        for p in [3u64, 5, 7, 101] {
            for v in 1..p {
                let x = Fp::new(v, p);
                assert_eq!(x * x.inv().unwrap(), Fp::new(1, p));
            }
        }
    }

    #[test]
    fn square_roots() {
        let f5 = BaseField::Prime(5);
        assert!(f5.from_i64(2).sqrt().is_none());
        assert!(f5.from_i64(4).sqrt().is_some());
        let q = BaseField::Rationals;
        let r = Scalar::Rational(BigRational::new(9.into(), 4.into()));
        assert_eq!(r.sqrt().unwrap(), Scalar::Rational(BigRational::new(3.into(), 2.into())));
        assert!(q.from_i64(2).sqrt().is_none());
        assert!(q.from_i64(-4).sqrt().is_none());
    }
}
