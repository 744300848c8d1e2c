//! Presented algebras `K<X_1..X_n> / (rules)`: oriented rewriting to PBW
//! normal form under a degree-then-lex order, per-degree bases of the
//! generator filtration, confluence certificates, and tensor products.

mod parse;
mod word;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::parse_presentation;
pub use word::{AlgebraElement, Letters, Word};

use crate::expr::ParseError;
use crate::field::{FieldElement, FieldError, ValuedField};
use crate::par;

/// Rewrite steps allowed per normal-form computation.
pub const STEP_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("relation {index}: {source}")]
    Syntax { index: usize, source: ParseError },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdent { name: String, pos: usize },
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("relation {0}: left-hand side must be a single word of length at least 2 with coefficient 1")]
    LhsNotMonomial(usize),
    #[error("relation {index}: missing `=`")]
    MissingEquals { index: usize },
    #[error("rule {lhs} -> ... is not terminating: right-hand word {word} is not smaller")]
    NonTerminating { lhs: String, word: String },
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("generator `{0}` must have positive weight")]
    BadWeight(String),
    #[error("division by a non-scalar element")]
    NonScalarDivision,
    #[error("negative power of a non-scalar element")]
    NegativePower,
    #[error("too many generators (at most 255)")]
    TooManyGenerators,
    #[error("presentations live over different fields")]
    FieldMismatch,
}

impl From<ParseError> for PresentationError {
    fn from(source: ParseError) -> Self {
        PresentationError::Syntax { index: 0, source }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("rewrite step limit {0} exceeded")]
    StepLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiltrationMode {
    /// `F_n A` = span of words of degree at most `n`.
    GeneratorFiltered,
    /// Homogeneous rules; `R_n` = span of words of degree exactly `n`.
    Graded,
}

/// Which redex position the rewriter picks inside a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: AlgebraElement,
}

/// A critical pair that does not resolve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub word: Word,
    pub rules: (usize, usize),
    pub left: AlgebraElement,
    pub right: AlgebraElement,
}

#[derive(Debug, Clone)]
pub struct Presentation {
    field: ValuedField,
    generators: Vec<Generator>,
    constants: Vec<(String, FieldElement)>,
    rules: Vec<Rule>,
    mode: FiltrationMode,
    by_first: Vec<Vec<usize>>,
}

impl Presentation {
    /// Assemble a presentation from already-oriented rules, checking termination.
    pub fn new(
        field: ValuedField,
        generators: Vec<Generator>,
        constants: Vec<(String, FieldElement)>,
        rules: Vec<Rule>,
        mode: FiltrationMode,
    ) -> Result<Self, PresentationError> {
        if generators.len() > 255 {
            return Err(PresentationError::TooManyGenerators);
        }
        let mut seen: Vec<&str> = field.vars().iter().map(String::as_str).collect();
        for name in generators.iter().map(|g| g.name.as_str()).chain(constants.iter().map(|c| c.0.as_str())) {
            if seen.contains(&name) {
                return Err(PresentationError::DuplicateName(name.into()));
            }
            seen.push(name);
        }
        if let Some(g) = generators.iter().find(|g| g.weight == 0) {
            return Err(PresentationError::BadWeight(g.name.clone()));
        }
        let mut by_first = vec![Vec::new(); generators.len()];
        let mut p = Presentation { field, generators, constants, rules: Vec::new(), mode, by_first: Vec::new() };
        for (i, r) in rules.iter().enumerate() {
            if r.lhs.len() < 2 {
                return Err(PresentationError::LhsNotMonomial(i));
            }
            if let Some((w, _)) = r.rhs.terms().find(|(w, _)| (*w).cmp(&r.lhs) != Ordering::Less) {
                return Err(PresentationError::NonTerminating { lhs: p.fmt_word(&r.lhs), word: p.fmt_word(w) });
            }
            by_first[r.lhs.letters()[0] as usize].push(i);
        }
        p.rules = rules;
        p.by_first = by_first;
        Ok(p)
    }

    pub fn field(&self) -> &ValuedField {
        &self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn constants(&self) -> &[(String, FieldElement)] {
        &self.constants
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn mode(&self) -> FiltrationMode {
        self.mode
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn word(&self, letters: &[u8]) -> Word {
        let degree = letters.iter().map(|&l| self.generators[l as usize].weight).sum();
        Word::from_parts(degree, Letters::from_slice(letters))
    }

    pub fn generator_word(&self, i: usize) -> Word {
        self.word(&[i as u8])
    }

    pub fn generator_element(&self, i: usize) -> AlgebraElement {
        AlgebraElement::term(self.generator_word(i), self.field.one())
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement::scalar(self.field.one())
    }

    pub fn scalar(&self, c: FieldElement) -> AlgebraElement {
        AlgebraElement::scalar(c)
    }

    /// Leftmost (or rightmost) position where some rule applies.
    fn find_redex(&self, w: &Word, strategy: Strategy) -> Option<(usize, usize)> {
        let letters = w.letters();
        let try_at =
            |pos: usize| self.by_first[letters[pos] as usize].iter().find(|&&ri| letters[pos..].starts_with(self.rules[ri].lhs.letters())).map(|&ri| (pos, ri));
        match strategy {
            Strategy::Leftmost => (0..letters.len()).find_map(try_at),
            Strategy::Rightmost => (0..letters.len()).rev().find_map(try_at),
        }
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.find_redex(w, Strategy::Leftmost).is_none()
    }

    /// One rewrite step with rule `ri` at position `pos`.
    fn rewrite_at(&self, w: &Word, pos: usize, ri: usize) -> BTreeMap<Word, FieldElement> {
        let rule = &self.rules[ri];
        let mut out = AlgebraElement::zero();
        for (mid, c) in rule.rhs.terms() {
            out.add_term(w.splice(pos, rule.lhs.len(), rule.lhs.degree(), mid), c.clone());
        }
        out.into_map()
    }

    pub fn normal_form(&self, raw: BTreeMap<Word, FieldElement>) -> Result<AlgebraElement, NormalFormError> {
        self.normal_form_with(raw, Strategy::Leftmost)
    }

    /// Rewrite to the unique irreducible representative. Words are processed
    /// largest first; every rewrite produces strictly smaller words, so a word
    /// that is irreducible when popped is final.
    pub fn normal_form_with(&self, raw: BTreeMap<Word, FieldElement>, strategy: Strategy) -> Result<AlgebraElement, NormalFormError> {
        let mut pending = AlgebraElement::from_map(raw.into_iter().filter(|(_, c)| !c.is_zero()).collect()).into_map();
        let mut out = BTreeMap::new();
        let mut steps = 0usize;
        while let Some((w, c)) = pending.pop_last() {
            match self.find_redex(&w, strategy) {
                None => {
                    out.insert(w, c);
                }
                Some((pos, ri)) => {
                    steps += 1;
                    if steps > STEP_LIMIT {
                        return Err(NormalFormError::StepLimit(STEP_LIMIT));
                    }
                    for (nw, nc) in self.rewrite_at(&w, pos, ri) {
                        let v = &c * &nc;
                        match pending.get_mut(&nw) {
                            Some(old) => {
                                let s = &*old + &v;
                                if s.is_zero() {
                                    pending.remove(&nw);
                                } else {
                                    *old = s;
                                }
                            }
                            None => {
                                pending.insert(nw, v);
                            }
                        }
                    }
                }
            }
        }
        Ok(AlgebraElement::from_map(out))
    }

    pub fn reduce_word(&self, w: &Word) -> Result<AlgebraElement, NormalFormError> {
        self.normal_form(BTreeMap::from([(w.clone(), self.field.one())]))
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, NormalFormError> {
        self.normal_form(a.concat_product(b))
    }

    pub fn add(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        a.add(b)
    }

    pub fn pow(&self, a: &AlgebraElement, e: u32) -> Result<AlgebraElement, NormalFormError> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    /// Irreducible words of degree exactly `n`, ascending.
    pub fn words_of_degree(&self, n: u32) -> Vec<Word> {
        self.words_up_to(n).into_iter().filter(|w| w.degree() == n).collect()
    }

    /// Irreducible words of degree at most `n`, ascending.
    pub fn words_up_to(&self, n: u32) -> Vec<Word> {
        let mut by_degree: Vec<Vec<Word>> = vec![Vec::new(); n as usize + 1];
        by_degree[0].push(Word::empty());
        for d in 1..=n {
            let mut layer = Vec::new();
            for (gi, g) in self.generators.iter().enumerate() {
                if g.weight > d {
                    continue;
                }
                let gw = self.generator_word(gi);
                for w in &by_degree[(d - g.weight) as usize] {
                    let cand = w.concat(&gw);
                    if self.suffix_irreducible(&cand) {
                        layer.push(cand);
                    }
                }
            }
            layer.sort();
            by_degree[d as usize] = layer;
        }
        by_degree.into_iter().flatten().collect()
    }

    fn suffix_irreducible(&self, w: &Word) -> bool {
        !self.rules.iter().any(|r| w.letters().ends_with(r.lhs.letters()))
    }

    /// Basis of `F_n A` (filtered mode) or `R_n` (graded mode).
    pub fn filtration_basis(&self, n: u32) -> Vec<Word> {
        match self.mode {
            FiltrationMode::GeneratorFiltered => self.words_up_to(n),
            FiltrationMode::Graded => self.words_of_degree(n),
        }
    }

    /// Critical pairs of degree at most `n` whose two reductions disagree.
    pub fn confluence_check(&self, n: u32) -> Result<Vec<Overlap>, NormalFormError> {
        let mut candidates = Vec::new();
        for (i, r1) in self.rules.iter().enumerate() {
            let l1 = r1.lhs.letters();
            for (j, r2) in self.rules.iter().enumerate() {
                let l2 = r2.lhs.letters();
                // proper overlaps: suffix of l1 equals prefix of l2
                for k in 1..l1.len().min(l2.len()) {
                    if l1[l1.len() - k..] == l2[..k] {
                        let mut letters: Vec<u8> = l1.to_vec();
                        letters.extend_from_slice(&l2[k..]);
                        candidates.push((self.word(&letters), i, 0, j, l1.len() - k));
                    }
                }
                // inclusions: l2 inside l1
                if i != j && l2.len() <= l1.len() {
                    for pos in 0..=(l1.len() - l2.len()) {
                        if l1[pos..pos + l2.len()] == *l2 {
                            candidates.push((r1.lhs.clone(), i, 0, j, pos));
                        }
                    }
                }
            }
        }
        candidates.retain(|c| c.0.degree() <= n);
        let results = par::map(&candidates, |(w, i, p1, j, p2)| -> Result<Option<Overlap>, NormalFormError> {
            let left = self.normal_form(self.rewrite_at(w, *p1, *i))?;
            let right = self.normal_form(self.rewrite_at(w, *p2, *j))?;
            Ok((left != right).then(|| Overlap { word: w.clone(), rules: (*i, *j), left, right }))
        });
        results.into_iter().filter_map(Result::transpose).collect()
    }

    /// Words of degree at most `n` whose leftmost and rightmost reductions differ.
    pub fn strategy_discrepancies(&self, n: u32) -> Result<Vec<Word>, NormalFormError> {
        let mut all = vec![Word::empty()];
        let mut frontier = vec![Word::empty()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for gi in 0..self.generators.len() {
                    let c = w.concat(&self.generator_word(gi));
                    if c.degree() <= n {
                        next.push(c);
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        let checks = par::map(&all, |w| -> Result<Option<Word>, NormalFormError> {
            let one = BTreeMap::from([(w.clone(), self.field.one())]);
            let l = self.normal_form_with(one.clone(), Strategy::Leftmost)?;
            let r = self.normal_form_with(one, Strategy::Rightmost)?;
            Ok((l != r).then(|| w.clone()))
        });
        checks.into_iter().filter_map(Result::transpose).collect()
    }

    /// Tensor product over the common field: generators of `other` follow
    /// those of `self` in precedence and commute with them.
    pub fn tensor(&self, other: &Presentation) -> Result<Presentation, PresentationError> {
        if self.field != other.field {
            return Err(PresentationError::FieldMismatch);
        }
        let mut taken: Vec<String> = self.field.vars().to_vec();
        taken.extend(self.generators.iter().map(|g| g.name.clone()));
        taken.extend(self.constants.iter().map(|c| c.0.clone()));
        let fresh = |name: &str, taken: &mut Vec<String>| {
            let mut n = name.to_string();
            let mut k = 2;
            while taken.contains(&n) {
                n = format!("{name}_{k}");
                k += 1;
            }
            taken.push(n.clone());
            n
        };
        let mut generators = self.generators.clone();
        for g in &other.generators {
            generators.push(Generator { name: fresh(&g.name, &mut taken), weight: g.weight });
        }
        let mut constants = self.constants.clone();
        for (name, c) in &other.constants {
            constants.push((fresh(name, &mut taken), c.clone()));
        }
        let shift = self.generators.len() as u8;
        let tmp =
            Presentation { field: self.field.clone(), generators: generators.clone(), constants: vec![], rules: vec![], mode: self.mode, by_first: vec![] };
        let shift_word = |w: &Word| tmp.word(&w.letters().iter().map(|l| l + shift).collect::<Vec<_>>());
        let mut rules = self.rules.clone();
        for r in &other.rules {
            let mut rhs = AlgebraElement::zero();
            for (w, c) in r.rhs.terms() {
                rhs.add_term(shift_word(w), c.clone());
            }
            rules.push(Rule { lhs: shift_word(&r.lhs), rhs });
        }
        for j in 0..other.generators.len() as u8 {
            for i in 0..shift {
                rules.push(Rule { lhs: tmp.word(&[j + shift, i]), rhs: AlgebraElement::term(tmp.word(&[i, j + shift]), self.field.one()) });
            }
        }
        let mode = if self.mode == FiltrationMode::Graded && other.mode == FiltrationMode::Graded {
            FiltrationMode::Graded
        } else {
            FiltrationMode::GeneratorFiltered
        };
        Presentation::new(self.field.clone(), generators, constants, rules, mode)
    }

    /// The same generators and rule shapes over another field, with every
    /// coefficient sent through `f`.
    pub fn map_coefficients<E>(&self, field: ValuedField, f: impl Fn(&FieldElement) -> Result<FieldElement, E>) -> Result<Presentation, E>
    where
        E: From<PresentationError>,
    {
        let mut rules = Vec::with_capacity(self.rules.len());
        for r in &self.rules {
            rules.push(Rule { lhs: r.lhs.clone(), rhs: map_element(&r.rhs, &f)? });
        }
        let mut constants = Vec::new();
        for (name, c) in &self.constants {
            if let Ok(m) = f(c) {
                constants.push((name.clone(), m));
            }
        }
        Ok(Presentation::new(field, self.generators.clone(), constants, rules, self.mode)?)
    }

    /// The ground field as a presented algebra with no generators.
    pub fn trivial(field: ValuedField, mode: FiltrationMode) -> Presentation {
        Presentation::new(field, vec![], vec![], vec![], mode).expect("no rules")
    }

    pub fn fmt_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let mut parts: Vec<String> = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            let name = &self.generators[letters[i] as usize].name;
            parts.push(if j - i == 1 { name.clone() } else { format!("{name}^{}", j - i) });
            i = j;
        }
        parts.join("*")
    }

    pub fn fmt_element(&self, a: &AlgebraElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (w, c)) in a.terms().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let cs = self.field.fmt_elem(&abs);
            let cs = if abs.is_atomic() { cs } else { format!("({cs})") };
            if w.is_empty() {
                s.push_str(&cs);
            } else if abs.is_one() {
                s.push_str(&self.fmt_word(w));
            } else {
                s.push_str(&format!("{cs}*{}", self.fmt_word(w)));
            }
        }
        s
    }

    pub fn fmt_rule(&self, r: &Rule) -> String {
        format!("{} -> {}", self.fmt_word(&r.lhs), self.fmt_element(&r.rhs))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| if g.weight == 1 { g.name.clone() } else { format!("{}:{}", g.name, g.weight) }).collect();
        write!(f, "{}<{}>", self.field.describe(), gens.join(" < "))?;
        for r in &self.rules {
            write!(f, "; {}", self.fmt_rule(r))?;
        }
        Ok(())
    }
}

/// Apply `f` to every coefficient, dropping terms that become zero.
pub fn map_element<E>(a: &AlgebraElement, f: impl Fn(&FieldElement) -> Result<FieldElement, E>) -> Result<AlgebraElement, E> {
    let mut out = AlgebraElement::zero();
    for (w, c) in a.terms() {
        out.add_term(w.clone(), f(c)?);
    }
    Ok(out)
}
