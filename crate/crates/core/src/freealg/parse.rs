use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{AlgebraElement, FiltrationMode, Generator, Presentation, PresentationError, Rule, Word};
use crate::expr::{self, Evaluator, ParseError};
use crate::field::{FieldElement, ValuedField};

/// Raw (unreduced) elements of the free algebra, used while evaluating
/// relation strings.
struct FreeEval<'a> {
    field: &'a ValuedField,
    names: &'a [Generator],
    weights: Vec<u32>,
    constants: &'a [(String, FieldElement)],
}

type Raw = BTreeMap<Word, FieldElement>;

impl FreeEval<'_> {
    fn scalar(&self, c: FieldElement) -> Raw {
        let mut m = Raw::new();
        if !c.is_zero() {
            m.insert(Word::empty(), c);
        }
        m
    }

    fn as_scalar(&self, a: &Raw) -> Option<FieldElement> {
        match a.len() {
            0 => Some(self.field.zero()),
            1 => a.get(&Word::empty()).cloned(),
            _ => None,
        }
    }
}

impl Evaluator for FreeEval<'_> {
    type Value = Raw;
    type Error = PresentationError;

    fn int(&self, n: &BigInt) -> Result<Raw, PresentationError> {
        Ok(self.scalar(self.field.from_bigint(n)))
    }

    fn ident(&self, name: &str, pos: usize) -> Result<Raw, PresentationError> {
        if let Some(i) = self.names.iter().position(|g| g.name == name) {
            let w = Word::from_parts(self.weights[i], [i as u8].into_iter().collect());
            return Ok(Raw::from([(w, self.field.one())]));
        }
        if let Some((_, c)) = self.constants.iter().find(|(n, _)| n == name) {
            return Ok(self.scalar(c.clone()));
        }
        if let Some(i) = self.field.vars().iter().position(|v| v == name) {
            return Ok(self.scalar(self.field.var(i)));
        }
        Err(PresentationError::UnknownIdent { name: name.into(), pos })
    }

    fn add(&self, a: Raw, b: Raw) -> Result<Raw, PresentationError> {
        Ok(AlgebraElement::from_map(a).add(&AlgebraElement::from_map(b)).into_map())
    }

    fn neg(&self, a: Raw) -> Result<Raw, PresentationError> {
        Ok(AlgebraElement::from_map(a).neg().into_map())
    }

    fn mul(&self, a: Raw, b: Raw) -> Result<Raw, PresentationError> {
        Ok(AlgebraElement::from_map(a).concat_product(&AlgebraElement::from_map(b)))
    }

    fn div(&self, a: Raw, b: Raw) -> Result<Raw, PresentationError> {
        let c = self.as_scalar(&b).ok_or(PresentationError::NonScalarDivision)?;
        let inv = c.inv().ok_or(crate::field::FieldError::DivisionByZero)?;
        Ok(AlgebraElement::from_map(a).scale(&inv).into_map())
    }

    fn pow(&self, a: Raw, e: i64) -> Result<Raw, PresentationError> {
        if let Some(c) = self.as_scalar(&a) {
            return Ok(self.scalar(c.pow(e).ok_or(crate::field::FieldError::DivisionByZero)?));
        }
        if e < 0 {
            return Err(PresentationError::NegativePower);
        }
        let mut acc = self.scalar(self.field.one());
        for _ in 0..e {
            acc = self.mul(acc, a.clone())?;
        }
        Ok(acc)
    }
}

fn with_index(index: usize) -> impl Fn(PresentationError) -> PresentationError {
    move |e| match e {
        PresentationError::Syntax { source, .. } => PresentationError::Syntax { index, source },
        other => other,
    }
}

fn parse_raw(ev: &FreeEval<'_>, src: &str, index: usize) -> Result<Raw, PresentationError> {
    let e = expr::parse(src).map_err(|source: ParseError| PresentationError::Syntax { index, source })?;
    ev.eval(&e).map_err(with_index(index))
}

/// Build a presentation from generator names (in increasing precedence),
/// named constants, and relations `lhs = rhs` with a single-word `lhs`.
pub fn parse_presentation(
    field: &ValuedField,
    generators: &[(&str, u32)],
    constants: &[(&str, &str)],
    relations: &[&str],
    mode: FiltrationMode,
) -> Result<Presentation, PresentationError> {
    let gens: Vec<Generator> = generators.iter().map(|(n, w)| Generator { name: n.to_string(), weight: *w }).collect();
    let mut consts = Vec::new();
    for (name, value) in constants {
        consts.push((name.to_string(), field.parse(value)?));
    }
    let ev = FreeEval { field, names: &gens, weights: gens.iter().map(|g| g.weight).collect(), constants: &consts };
    let mut rules = Vec::new();
    for (index, rel) in relations.iter().enumerate() {
        let (l, r) = rel.split_once('=').ok_or(PresentationError::MissingEquals { index })?;
        let lhs = parse_raw(&ev, l, index)?;
        let rhs = parse_raw(&ev, r, index)?;
        let word = match lhs.iter().next() {
            Some((w, c)) if lhs.len() == 1 && c.is_one() && w.len() >= 2 => w.clone(),
            _ => return Err(PresentationError::LhsNotMonomial(index)),
        };
        rules.push(Rule { lhs: word, rhs: AlgebraElement::from_map(rhs) });
    }
    Presentation::new(field.clone(), gens, consts, rules, mode)
}

impl Presentation {
    /// Parse an element over this presentation and reduce it to normal form.
    pub fn parse_element(&self, src: &str) -> Result<AlgebraElement, PresentationError> {
        let ev =
            FreeEval { field: &self.field, names: &self.generators, weights: self.generators.iter().map(|g| g.weight).collect(), constants: &self.constants };
        let raw = parse_raw(&ev, src, 0)?;
        // the step limit is the only failure and it cannot be hit by a parse
        Ok(self.normal_form(raw).expect("normal form within step limit"))
    }

    /// Parse a single word such as `X*Y^2`.
    pub fn parse_word(&self, src: &str) -> Result<Word, PresentationError> {
        let ev = FreeEval { field: &self.field, names: &self.generators, weights: self.generators.iter().map(|g| g.weight).collect(), constants: &[] };
        let raw = parse_raw(&ev, src, 0)?;
        match raw.iter().next() {
            Some((w, c)) if raw.len() == 1 && c.is_one() => Ok(w.clone()),
            _ => Err(PresentationError::LhsNotMonomial(0)),
        }
    }
}
