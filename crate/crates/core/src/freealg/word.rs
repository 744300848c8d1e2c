use std::collections::BTreeMap;

use smallvec::SmallVec;

use crate::field::FieldElement;

pub type Letters = SmallVec<[u8; 12]>;

/// A word in the generators. Ordering is by weighted degree, then
/// lexicographic in generator precedence (index order).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    degree: u32,
    letters: Letters,
}

impl Word {
    pub fn empty() -> Self {
        Word { degree: 0, letters: Letters::new() }
    }

    pub(crate) fn from_parts(degree: u32, letters: Letters) -> Self {
        Word { degree, letters }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { degree: self.degree + other.degree, letters }
    }

    /// Replace `len` letters starting at `pos` (of total degree `cut`) by `mid`.
    pub(crate) fn splice(&self, pos: usize, len: usize, cut: u32, mid: &Word) -> Word {
        let mut letters = Letters::with_capacity(self.letters.len() - len + mid.letters.len());
        letters.extend_from_slice(&self.letters[..pos]);
        letters.extend_from_slice(&mid.letters);
        letters.extend_from_slice(&self.letters[pos + len..]);
        Word { degree: self.degree - cut + mid.degree, letters }
    }
}

/// A finite `K`-linear combination of words. Produced by the rewriting
/// engine, all words are normal and no coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, FieldElement>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement { terms: BTreeMap::new() }
    }

    pub fn term(w: Word, c: FieldElement) -> Self {
        let mut a = AlgebraElement::zero();
        a.add_term(w, c);
        a
    }

    pub fn scalar(c: FieldElement) -> Self {
        AlgebraElement::term(Word::empty(), c)
    }

    pub(crate) fn from_map(terms: BTreeMap<Word, FieldElement>) -> Self {
        AlgebraElement { terms }
    }

    pub(crate) fn into_map(self) -> BTreeMap<Word, FieldElement> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &FieldElement)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&FieldElement> {
        self.terms.get(w)
    }

    /// Largest word degree occurring, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Word::degree)
    }

    /// The element as a scalar, when it only involves the empty word.
    pub fn as_scalar(&self) -> Option<Option<&FieldElement>> {
        match self.terms.len() {
            0 => Some(None),
            1 => self.terms.get(&Word::empty()).map(Some),
            _ => None,
        }
    }

    pub fn add_term(&mut self, w: Word, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, o: &AlgebraElement) -> AlgebraElement {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &AlgebraElement) -> AlgebraElement {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> AlgebraElement {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement { terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect() }
    }

    /// Concatenation product without any rewriting.
    pub(crate) fn concat_product(&self, o: &AlgebraElement) -> BTreeMap<Word, FieldElement> {
        let mut acc = AlgebraElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                acc.add_term(u.concat(v), a * b);
            }
        }
        acc.terms
    }
}
