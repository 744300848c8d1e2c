//! Sparse polynomials in one or two variables over a [`BaseField`], plus the
//! gcd machinery needed to keep rational functions in lowest terms.

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::scalar::{BaseField, Scalar};

/// Exponent vector, ordered lexicographically with the first variable most significant.
pub type Mono = SmallVec<[u32; 2]>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    base: BaseField,
    nvars: usize,
    terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero(base: BaseField, nvars: usize) -> Self {
        Poly { base, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let mut p = Poly::zero(c.base(), nvars);
        if !c.is_zero() {
            p.terms.insert(SmallVec::from_elem(0, nvars), c);
        }
        p
    }

    pub fn one(base: BaseField, nvars: usize) -> Self {
        Poly::constant(base.one(), nvars)
    }

    pub fn var(base: BaseField, nvars: usize, i: usize) -> Self {
        let mut m: Mono = SmallVec::from_elem(0, nvars);
        m[i] = 1;
        Poly::monomial(base.one(), m)
    }

    pub fn monomial(c: Scalar, m: Mono) -> Self {
        let mut p = Poly::zero(c.base(), m.len());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().all(|(m, c)| m.iter().all(|&e| e == 0) && c.is_one())
    }

    /// Constant value, when the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.base.zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Lex-largest term.
    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Lex-smallest term.
    pub fn trailing(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next()
    }

    fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly { base: self.base, nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.base, self.nvars);
        }
        Poly { base: self.base, nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.base, self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m: Mono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                r.add_term(m, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.base, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let dinv = dc.inv()?;
        let mut r = self.clone();
        let mut q = Poly::zero(self.base, self.nvars);
        while let Some((rm, rc)) = r.leading() {
            if rm.iter().zip(dm).any(|(a, b)| a < b) {
                return None;
            }
            let m: Mono = rm.iter().zip(dm).map(|(a, b)| a - b).collect();
            let t = Poly::monomial(rc * &dinv, m);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Scale so the lex-leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        match self.nvars {
            0 => Poly::one(self.base, 0),
            1 => from_dense(&dense_gcd(&to_dense(self), &to_dense(o)), self.base),
            2 => bivariate_gcd(self, o),
            n => panic!("gcd in {n} variables is not supported"),
        }
    }

    pub fn eval_scalar_at_zero(&self) -> Scalar {
        self.terms.iter().find(|(m, _)| m.iter().all(|&e| e == 0)).map(|(_, c)| c.clone()).unwrap_or_else(|| self.base.zero())
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, vars: &[String]) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let vars_part: Vec<String> =
                m.iter().enumerate().filter(|(_, &e)| e > 0).map(|(j, &e)| if e == 1 { vars[j].clone() } else { format!("{}^{}", vars[j], e) }).collect();
            if vars_part.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", vars_part.join("*"))?;
            }
        }
        Ok(())
    }
}

type Dense = Vec<Scalar>;

fn trim(mut a: Dense) -> Dense {
    while a.last().is_some_and(Scalar::is_zero) {
        a.pop();
    }
    a
}

fn to_dense(p: &Poly) -> Dense {
    let deg = p.terms.keys().map(|m| m[0] as usize).max().map_or(0, |d| d + 1);
    let mut v = vec![p.base.zero(); deg];
    for (m, c) in &p.terms {
        v[m[0] as usize] = c.clone();
    }
    v
}

fn from_dense(a: &Dense, base: BaseField) -> Poly {
    let mut p = Poly::zero(base, 1);
    for (i, c) in a.iter().enumerate() {
        p.add_term(SmallVec::from_elem(i as u32, 1), c.clone());
    }
    p
}

fn dense_divrem(a: &Dense, b: &Dense) -> (Dense, Dense) {
    let b = trim(b.clone());
    let lc_inv = b.last().expect("division by zero").inv().unwrap();
    let mut r = trim(a.clone());
    let base = lc_inv.base();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![base.zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lc_inv;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&c * bc);
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn dense_monic(a: Dense) -> Dense {
    match a.last() {
        Some(lc) => {
            let inv = lc.inv().unwrap();
            a.iter().map(|c| c * &inv).collect()
        }
        None => a,
    }
}

fn dense_gcd(a: &Dense, b: &Dense) -> Dense {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let (_, r) = dense_divrem(&a, &b);
        a = b;
        b = r;
    }
    dense_monic(a)
}

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let base = a[0].base();
    let mut r = vec![base.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = &r[i + j] + &(x * y);
        }
    }
    trim(r)
}

fn dense_sub(a: &Dense, b: &Dense) -> Dense {
    let base = a.first().or(b.first()).map(Scalar::base).unwrap_or(BaseField::Rationals);
    let n = a.len().max(b.len());
    let z = base.zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn dense_div_exact(a: &Dense, b: &Dense) -> Dense {
    let (q, r) = dense_divrem(a, b);
    debug_assert!(r.is_empty());
    q
}

/// `k[X][Y]` view: index = Y-degree, entry = dense polynomial in X.
type Rec = Vec<Dense>;

fn to_rec(p: &Poly) -> Rec {
    let deg = p.terms.keys().map(|m| m[1] as usize).max().map_or(0, |d| d + 1);
    let mut v: Rec = vec![Vec::new(); deg];
    for (m, c) in &p.terms {
        let row = &mut v[m[1] as usize];
        let i = m[0] as usize;
        if row.len() <= i {
            row.resize(i + 1, p.base.zero());
        }
        row[i] = c.clone();
    }
    v
}

fn from_rec(r: &Rec, base: BaseField) -> Poly {
    let mut p = Poly::zero(base, 2);
    for (j, row) in r.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            p.add_term(SmallVec::from_slice(&[i as u32, j as u32]), c.clone());
        }
    }
    p
}

fn rec_trim(mut a: Rec) -> Rec {
    while a.last().is_some_and(|c| c.is_empty()) {
        a.pop();
    }
    a
}

fn rec_content(a: &Rec) -> Dense {
    a.iter().filter(|c| !c.is_empty()).fold(Vec::new(), |g, c| dense_gcd(&g, c))
}

fn rec_primitive(a: &Rec) -> Rec {
    let c = rec_content(a);
    a.iter().map(|x| if x.is_empty() { Vec::new() } else { dense_div_exact(x, &c) }).collect()
}

/// Pseudo-remainder of `a` by `b` as polynomials in Y.
fn rec_prem(a: &Rec, b: &Rec) -> Rec {
    let b = rec_trim(b.clone());
    let lb = b.last().unwrap().clone();
    let mut r = rec_trim(a.clone());
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let lr = r.last().unwrap().clone();
        let mut next: Rec = r.iter().map(|c| dense_mul(c, &lb)).collect();
        for (i, bc) in b.iter().enumerate() {
            next[i + shift] = dense_sub(&next[i + shift], &dense_mul(&lr, bc));
        }
        r = rec_trim(next);
    }
    r
}

fn bivariate_gcd(a: &Poly, b: &Poly) -> Poly {
    let base = a.base;
    let (ra, rb) = (rec_trim(to_rec(a)), rec_trim(to_rec(b)));
    let content = dense_gcd(&rec_content(&ra), &rec_content(&rb));
    let (mut x, mut y) = (rec_primitive(&ra), rec_primitive(&rb));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = rec_prem(&x, &y);
        x = y;
        y = if r.is_empty() { r } else { rec_primitive(&r) };
    }
    let g: Rec = x.iter().map(|c| dense_mul(c, &content)).collect();
    from_rec(&g, base).monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> BaseField {
        BaseField::Rationals
    }

    fn x2() -> (Poly, Poly) {
        (Poly::var(q(), 2, 0), Poly::var(q(), 2, 1))
    }

    #[test]
    fn univariate_gcd() {
        let x = Poly::var(q(), 1, 0);
        let one = Poly::one(q(), 1);
        let a = x.add(&one).mul(&x.sub(&one)); // x^2 - 1
        let b = x.add(&one).mul(&x.add(&one)); // (x+1)^2
        assert_eq!(a.gcd(&b), x.add(&one));
    }

    #[test]
    fn bivariate_gcd_recovers_common_factor() {
        let (x, y) = x2();
        let one = Poly::one(q(), 2);
        let f = x.mul(&y).add(&one); // xy + 1
        let g1 = x.add(&y.pow(2)); // x + y^2
        let g2 = y.sub(&x.mul(&x)); // y - x^2
        let a = f.mul(&g1);
        let b = f.mul(&g2).mul(&x);
        assert_eq!(a.gcd(&b), f.monic());
        assert!(g1.gcd(&g2).is_one());
        assert_eq!(x.pow(3).gcd(&x.pow(2).mul(&y)), x.pow(2));
    }

    #[test]
    fn exact_division() {
        let (x, y) = x2();
        let a = x.add(&y).mul(&x.sub(&y));
        assert_eq!(a.div_exact(&x.add(&y)).unwrap(), x.sub(&y));
        assert!(x.div_exact(&y).is_none());
    }
}
