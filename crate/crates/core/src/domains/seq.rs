//! Cantor and Baire domains: finite sequences under the prefix order, with
//! `ι` of infinite sequences.

use std::sync::Arc;

use crate::cert::{HausdorffCert, MemberEvidence, StrongMaxAnswer};
use crate::error::{Error, Result};
use crate::ideal::ApproxElement;
use crate::order::rational::unpair;
use crate::order::BasisDescriptor;
use crate::separation::sharp_from_strongmax;

pub type Word = Vec<u32>;

/// `A*` under `⪯`. `Some(k)` is the alphabet `{0..k-1}`; `None` is ℕ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeqBasis {
    alphabet: Option<u32>,
}

impl SeqBasis {
    pub const CANTOR: SeqBasis = SeqBasis { alphabet: Some(2) };
    pub const BAIRE: SeqBasis = SeqBasis { alphabet: None };

    pub fn alphabet(&self) -> Option<u32> {
        self.alphabet
    }

    pub fn check_letter(&self, letter: u32) -> Result<()> {
        match self.alphabet {
            Some(k) if letter >= k => Err(Error::InvalidCode(format!("letter {letter} outside alphabet of size {k}"))),
            _ => Ok(()),
        }
    }

    pub fn parse_letter(&self, text: &str) -> Result<u32> {
        let letter = text
            .parse::<u32>()
            .map_err(|_| Error::Parse(format!("`{text}` is not a letter")))?;
        if self.alphabet.is_some() && text.len() != 1 {
            return Err(Error::Parse(format!("`{text}` is not a single binary digit")));
        }
        self.check_letter(letter)?;
        Ok(letter)
    }
}

pub fn is_prefix(a: &[u32], b: &[u32]) -> bool {
    a.len() <= b.len() && a == &b[..a.len()]
}

fn comparable(a: &[u32], b: &[u32]) -> bool {
    is_prefix(a, b) || is_prefix(b, a)
}

impl BasisDescriptor for SeqBasis {
    type Code = Word;

    fn id(&self) -> String {
        match self.alphabet {
            Some(2) => "cantor".into(),
            Some(k) => format!("seq{k}"),
            None => "baire".into(),
        }
    }

    /// Cantor: bijective binary numeration. Baire: `0 ↦ ε`, `n+1 ↦ a·w` for
    /// `(a, m) = unpair(n)` and `w` the `m`-th word.
    fn enumerate(&self, index: usize) -> Word {
        match self.alphabet {
            Some(k) => {
                let k = k as usize;
                let mut n = index;
                let mut word = Vec::new();
                while n > 0 {
                    n -= 1;
                    word.push((n % k) as u32);
                    n /= k;
                }
                word.reverse();
                word
            }
            None => {
                let mut n = index;
                let mut word = Vec::new();
                while n > 0 {
                    let (a, m) = unpair(n - 1);
                    word.push(a as u32);
                    n = m;
                }
                word
            }
        }
    }

    fn prec(&self, a: &Word, b: &Word) -> bool {
        is_prefix(a, b)
    }

    fn is_reflexive(&self) -> bool {
        true
    }

    fn serialize(&self, w: &Word) -> String {
        match self.alphabet {
            Some(_) => w.iter().map(|d| d.to_string()).collect(),
            None => w.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("."),
        }
    }

    fn parse(&self, text: &str) -> Result<Word> {
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let word: Word = match self.alphabet {
            Some(_) => text
                .chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::Parse(format!("`{c}` is not a digit"))))
                .collect::<Result<_>>()?,
            None => text
                .split('.')
                .map(|part| part.parse::<u32>().map_err(|_| Error::Parse(format!("`{part}` is not a natural number"))))
                .collect::<Result<_>>()?,
        };
        self.validate(&word)?;
        Ok(word)
    }

    fn validate(&self, w: &Word) -> Result<()> {
        w.iter().try_for_each(|&d| self.check_letter(d))
    }

    fn bottom(&self) -> Option<Word> {
        Some(Vec::new())
    }

    fn delta_waybelow(&self, a: &Word, b: &Word) -> Option<bool> {
        Some(is_prefix(a, b))
    }

    fn delta_below(&self, a: &Word, b: &Word) -> Option<bool> {
        Some(is_prefix(a, b))
    }

    fn bounded_pair(&self, a: &Word, b: &Word) -> Option<bool> {
        Some(comparable(a, b))
    }

    fn refine(&self, a: &Word, b: &Word) -> Option<bool> {
        Some(comparable(a, b))
    }

    fn join(&self, a: &Word, b: &Word) -> Option<Option<Word>> {
        Some(comparable(a, b).then(|| if a.len() >= b.len() { a.clone() } else { b.clone() }))
    }

    fn jointly_bounded(&self, codes: &[Word]) -> Option<bool> {
        Some(codes.iter().all(|a| codes.iter().all(|b| comparable(a, b))))
    }
}

/// An infinite sequence `α : ℕ → A`, given as a deterministic function.
#[derive(Clone)]
pub struct SeqPoint {
    label: String,
    stream: Arc<dyn Fn(usize) -> u32 + Send + Sync>,
}

impl std::fmt::Debug for SeqPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SeqPoint").field("label", &self.label).finish()
    }
}

impl SeqPoint {
    pub fn new(label: impl Into<String>, stream: impl Fn(usize) -> u32 + Send + Sync + 'static) -> Self {
        SeqPoint { label: label.into(), stream: Arc::new(stream) }
    }

    /// `www…`; the word must be inhabited.
    pub fn periodic(basis: &SeqBasis, word: Word) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::PreconditionViolated("periodic word must be inhabited".into()));
        }
        basis.validate(&word)?;
        let label = format!("seq:periodic:{}", basis.serialize(&word));
        Ok(SeqPoint::new(label, move |n| word[n % word.len()]))
    }

    /// `w` followed by `ccc…`.
    pub fn eventually_constant(basis: &SeqBasis, word: Word, letter: u32) -> Result<Self> {
        basis.validate(&word)?;
        basis.check_letter(letter)?;
        let label = format!("seq:evconst:{};{letter}", basis.serialize(&word));
        Ok(SeqPoint::new(label, move |n| word.get(n).copied().unwrap_or(letter)))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn at(&self, n: usize) -> u32 {
        (self.stream)(n)
    }

    /// `α|n`.
    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.at(i)).collect()
    }

    pub fn has_prefix(&self, w: &[u32]) -> bool {
        w.iter().enumerate().all(|(i, &d)| self.at(i) == d)
    }
}

/// `ι(α)` with chain `α|n` and the strong-maximality oracle from prefix
/// comparison.
pub fn iota_seq(basis: &Arc<SeqBasis>, point: &SeqPoint) -> Result<ApproxElement<SeqBasis>> {
    for i in 0..64 {
        basis.check_letter(point.at(i))?;
    }
    let chain_point = point.clone();
    let oracle_point = point.clone();
    let strongmax = move |_x: &ApproxElement<SeqBasis>, u: &Word, v: &Word| -> Result<StrongMaxAnswer<Word>> {
        if !is_prefix(u, v) {
            return Err(Error::PreconditionViolated("strong-maximality query needs u ⪯ v".into()));
        }
        if oracle_point.has_prefix(u) {
            return Ok(StrongMaxAnswer::Left(MemberEvidence { code: u.clone(), index: u.len() }));
        }
        // same length, different letters: incomparable
        Ok(StrongMaxAnswer::Right(HausdorffCert {
            left: MemberEvidence { code: u.clone(), index: 0 },
            right: MemberEvidence { code: oracle_point.prefix(u.len()), index: u.len() },
        }))
    };
    Ok(ApproxElement::from_chain(Arc::clone(basis), point.label(), Arc::new(move |n| chain_point.prefix(n)))
        .with_strongmax_oracle(Arc::new(strongmax))
        .with_sharp_oracle(Arc::new(sharp_from_strongmax)))
}

/// Least `n < fuel` with `α|n ≠ β|n`, the same prefixes the fuelled search sees.
pub fn seq_apart_native(p: &SeqPoint, q: &SeqPoint, fuel: usize) -> Option<usize> {
    (0..fuel.saturating_sub(1)).find(|&i| p.at(i) != q.at(i)).map(|i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn cantor_enumeration_is_bijective_on_short_words() {
        let words: Vec<Word> = (0..(1 << 6) - 1).map(|i| SeqBasis::CANTOR.enumerate(i)).collect();
        let distinct: HashSet<&Word> = words.iter().collect();
        assert_eq!(distinct.len(), words.len());
        assert!(words.iter().all(|w| w.len() < 6));
    }

    #[test]
    fn baire_enumeration_reaches_words() {
        let seen: HashSet<String> = (0..20000).map(|i| SeqBasis::BAIRE.serialize(&SeqBasis::BAIRE.enumerate(i))).collect();
        for w in ["", "0", "3", "1.2", "0.0.0", "12"] {
            assert!(seen.contains(w), "{w} missing");
        }
    }

    #[test]
    fn serialization_roundtrip() {
        let c = SeqBasis::CANTOR;
        assert_eq!(c.serialize(&c.parse("0110").unwrap()), "0110");
        assert!(c.parse("012").is_err());
        let b = SeqBasis::BAIRE;
        assert_eq!(b.parse("10.0.7").unwrap(), vec![10, 0, 7]);
        assert_eq!(b.serialize(&vec![10, 0, 7]), "10.0.7");
    }

    #[test]
    fn native_apartness_examples() {
        let c = SeqBasis::CANTOR;
        let zeros = SeqPoint::periodic(&c, vec![0]).unwrap();
        let z1 = SeqPoint::eventually_constant(&c, vec![0, 0, 1], 0).unwrap();
        assert_eq!(seq_apart_native(&zeros, &z1, 3), None);
        assert_eq!(seq_apart_native(&zeros, &z1, 4), Some(3));
        assert_eq!(seq_apart_native(&zeros, &zeros, 100), None);
        let alt = SeqPoint::periodic(&c, vec![0, 1]).unwrap();
        assert_eq!(seq_apart_native(&alt, &zeros, 2), None);
        assert_eq!(seq_apart_native(&alt, &zeros, 3), Some(2));
    }
}
