//! Finite posets as algebraic bases: every element is compact, `≺` is `⊑`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finite::poset::FinitePoset;
use crate::ideal::{principal, ApproxElement};
use crate::order::BasisDescriptor;

/// Largest `n` accepted by [`sierpinski_and_powerset`].
pub const POWERSET_LIMIT: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDomain {
    poset: Arc<FinitePoset>,
    id: String,
}

impl FiniteDomain {
    pub fn new(poset: FinitePoset) -> Self {
        let n = poset.size();
        let covers: Vec<String> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| poset.covers(a, b))
            .map(|(a, b)| format!("{}<{}", poset.label(a), poset.label(b)))
            .collect();
        let id = format!("finite[{}|{}]", poset.labels().join(","), covers.join(","));
        FiniteDomain { poset: Arc::new(poset), id }
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    /// The principal ideal of the element with this label.
    pub fn element(self: &Arc<Self>, label: &str) -> Result<ApproxElement<FiniteDomain>> {
        let code = self.parse(label)?;
        principal(self, code)
    }

    /// Every element as a principal ideal, in carrier order.
    pub fn elements(self: &Arc<Self>) -> Vec<ApproxElement<FiniteDomain>> {
        (0..self.poset.size())
            .map(|i| principal(self, i).expect("carrier indices are valid codes"))
            .collect()
    }
}

impl BasisDescriptor for FiniteDomain {
    type Code = usize;

    fn id(&self) -> String {
        self.id.clone()
    }

    fn enumerate(&self, index: usize) -> usize {
        index % self.poset.size()
    }

    fn prec(&self, a: &usize, b: &usize) -> bool {
        self.poset.leq(*a, *b)
    }

    fn is_reflexive(&self) -> bool {
        true
    }

    fn serialize(&self, code: &usize) -> String {
        self.poset.label(*code).to_string()
    }

    fn parse(&self, text: &str) -> Result<usize> {
        self.poset
            .index_of(text)
            .ok_or_else(|| Error::InvalidCode(format!("`{text}` is not an element")))
    }

    fn validate(&self, code: &usize) -> Result<()> {
        if *code < self.poset.size() {
            Ok(())
        } else {
            Err(Error::InvalidCode(format!("element index {code} out of range")))
        }
    }

    fn bottom(&self) -> Option<usize> {
        self.poset.bottom()
    }

    fn delta_bot(&self, b: &usize) -> Option<bool> {
        self.poset.bottom().map(|bot| bot == *b)
    }

    fn delta_waybelow(&self, a: &usize, b: &usize) -> Option<bool> {
        Some(self.poset.leq(*a, *b))
    }

    fn delta_below(&self, a: &usize, b: &usize) -> Option<bool> {
        Some(self.poset.leq(*a, *b))
    }

    fn bounded_pair(&self, a: &usize, b: &usize) -> Option<bool> {
        self.jointly_bounded(&[*a, *b])
    }

    fn refine(&self, a: &usize, b: &usize) -> Option<bool> {
        self.jointly_bounded(&[*a, *b])
    }

    /// `None` when bounded without a least upper bound.
    fn join(&self, a: &usize, b: &usize) -> Option<Option<usize>> {
        let m = (1 << a) | (1 << b);
        if self.poset.upper_bounds(m) == 0 {
            Some(None)
        } else {
            self.poset.lub(m).map(Some)
        }
    }

    fn jointly_bounded(&self, codes: &[usize]) -> Option<bool> {
        let m = codes.iter().fold(0, |m, &c| m | 1 << c);
        Some(self.poset.upper_bounds(m) != 0)
    }
}

/// `𝕊` and `𝒫({0..n-1})`.
pub fn sierpinski_and_powerset(n: usize) -> Result<(FinitePoset, FinitePoset)> {
    if n > POWERSET_LIMIT {
        return Err(Error::SizeTooLarge { size: n, limit: POWERSET_LIMIT });
    }
    Ok((FinitePoset::sierpinski(), FinitePoset::powerset(n)?))
}
