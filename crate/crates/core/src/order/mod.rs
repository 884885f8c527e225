//! Abstract bases with decidability data.
//!
//! A [`BasisDescriptor`] is the computational seed of a continuous dcpo: a
//! countable carrier of codes enumerated by natural-number indices, a
//! decidable transitive interpolative relation `≺`, and optional decisions
//! for `b = ⊥`, `a ≪ b`, `a ⊑ b`, boundedness and refinement. The dcpo itself
//! is the rounded ideal completion, whose elements live in [`crate::ideal`].

pub mod rational;

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{Error, Result};

/// Budget bounding the enumeration indices and chain depths a search inspects.
///
/// Any `Yes`/`No` answer found at fuel `n` is reproduced verbatim at every
/// fuel `m ≥ n`; only `Unknown` may change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fuel(usize);

impl Fuel {
    pub const fn new(budget: usize) -> Self {
        Fuel(budget)
    }

    pub const fn get(self) -> usize {
        self.0
    }
}

impl From<usize> for Fuel {
    fn from(n: usize) -> Self {
        Fuel(n)
    }
}

impl std::fmt::Display for Fuel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Three-valued outcome of a semi-decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Semi<Y, N> {
    Yes(Y),
    No(N),
    Unknown,
}

impl<Y, N> Semi<Y, N> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Semi::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Semi::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Semi::Unknown)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Semi::Yes(_) => "yes",
            Semi::No(_) => "no",
            Semi::Unknown => "unknown",
        }
    }
}

/// Countable basis with `≺`, canonical code serialization and optional
/// decidability data.
///
/// Codes stand for principal ideals `↓b`, so `delta_below(a, b)` decides
/// `↓a ⊑ ↓b` and `delta_waybelow(a, b)` decides `↓a ≪ ↓b`. Code equality is
/// serialization equality.
pub trait BasisDescriptor: Send + Sync + 'static {
    type Code: Clone + Eq + Hash + Debug + Send + Sync + 'static;

    /// Stable identifier; elements over descriptors with different ids never mix.
    fn id(&self) -> String;

    /// Total surjection ℕ → codes.
    fn enumerate(&self, index: usize) -> Self::Code;

    /// Decision for `a ≺ b`.
    fn prec(&self, a: &Self::Code, b: &Self::Code) -> bool;

    /// `true` when `≺` is reflexive, so the completion is algebraic.
    fn is_reflexive(&self) -> bool;

    fn serialize(&self, code: &Self::Code) -> String;

    fn parse(&self, text: &str) -> Result<Self::Code>;

    fn validate(&self, _code: &Self::Code) -> Result<()> {
        Ok(())
    }

    /// Constructive interpolant `a ≺ c ≺ b`. Reflexive bases may return `b`;
    /// non-reflexive bases must override.
    fn interpolate(&self, a: &Self::Code, b: &Self::Code) -> Result<Self::Code> {
        if self.is_reflexive() && self.prec(a, b) {
            Ok(b.clone())
        } else {
            Err(Error::PreconditionViolated(format!(
                "{} ≺ {} fails or basis `{}` has no interpolation",
                self.serialize(a),
                self.serialize(b),
                self.id()
            )))
        }
    }

    /// The k-th code of a `≺`-increasing sequence below `b` whose union is `↓b`.
    /// Reflexive bases return `b` itself; non-reflexive bases must override.
    fn approach_below(&self, b: &Self::Code, _k: usize) -> Self::Code {
        debug_assert!(self.is_reflexive(), "non-reflexive basis must override approach_below");
        b.clone()
    }

    /// Least code, when the completion is pointed.
    fn bottom(&self) -> Option<Self::Code> {
        None
    }

    /// δ⊥: is `b` the least code.
    fn delta_bot(&self, b: &Self::Code) -> Option<bool> {
        self.bottom().map(|bot| &bot == b)
    }

    /// δ≪ on codes.
    fn delta_waybelow(&self, _a: &Self::Code, _b: &Self::Code) -> Option<bool> {
        None
    }

    /// δ⊑ on codes.
    fn delta_below(&self, _a: &Self::Code, _b: &Self::Code) -> Option<bool> {
        None
    }

    /// Do `a` and `b` have an upper bound in the basis.
    fn bounded_pair(&self, _a: &Self::Code, _b: &Self::Code) -> Option<bool> {
        None
    }

    /// Refinement `↓a ⇈ ↓b`: some ideal has both `a` and `b` as members.
    fn refine(&self, _a: &Self::Code, _b: &Self::Code) -> Option<bool> {
        None
    }

    /// A code `a ≺ b` that is not refinable with `anchor`, if one exists.
    /// An ideal containing `anchor` then cannot contain `a`, which refutes
    /// `↓b ⊑` that ideal.
    fn incompatible_probe(&self, b: &Self::Code, anchor: &Self::Code) -> Option<Self::Code> {
        if self.is_reflexive() && self.refine(b, anchor) == Some(false) {
            Some(b.clone())
        } else {
            None
        }
    }

    /// Binary join on codes: `Some(Some(j))` is the least upper bound,
    /// `Some(None)` means unbounded, `None` means unsupported.
    fn join(&self, _a: &Self::Code, _b: &Self::Code) -> Option<Option<Self::Code>> {
        None
    }

    /// Do the given codes have a common upper bound.
    fn jointly_bounded(&self, _codes: &[Self::Code]) -> Option<bool> {
        None
    }
}

/// Interpolation with both pre- and postcondition checked against `≺`.
pub fn interpolate<B: BasisDescriptor>(basis: &B, a: &B::Code, b: &B::Code) -> Result<B::Code> {
    if !basis.prec(a, b) {
        return Err(Error::PreconditionViolated(format!(
            "{} ≺ {} does not hold",
            basis.serialize(a),
            basis.serialize(b)
        )));
    }
    let c = basis.interpolate(a, b)?;
    if basis.prec(a, &c) && basis.prec(&c, b) {
        Ok(c)
    } else {
        Err(Error::PreconditionViolated(format!(
            "interpolant {} fails to re-validate between {} and {}",
            basis.serialize(&c),
            basis.serialize(a),
            basis.serialize(b)
        )))
    }
}

/// Which law a triple violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrderLaw {
    /// `a ≺ b ≺ c` but not `a ≺ c`.
    Transitivity,
    /// `a ⊑ b ≪ c` but not `a ≪ c`.
    BelowThenWayBelow,
    /// `a ≪ b ⊑ c` but not `a ≪ c`.
    WayBelowThenBelow,
    /// `a ≪ b` but not `a ⊑ b`.
    WayBelowImpliesBelow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation<C> {
    pub law: OrderLaw,
    pub codes: Vec<C>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitivityReport<C> {
    pub triples_checked: usize,
    pub violation: Option<LawViolation<C>>,
}

impl<C> TransitivityReport<C> {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks transitivity of `≺` and the two mixed monotonicity laws over every
/// triple of codes with enumeration index below `fuel`.
///
/// `≪` is read from δ≪ when present and from `≺` otherwise; the mixed laws
/// are only checked when δ⊑ is present.
pub fn prec_transitive_probe<B: BasisDescriptor>(basis: &B, fuel: Fuel) -> TransitivityReport<B::Code> {
    let codes: Vec<B::Code> = (0..fuel.get()).map(|i| basis.enumerate(i)).collect();
    let way_below = |a: &B::Code, b: &B::Code| basis.delta_waybelow(a, b).unwrap_or_else(|| basis.prec(a, b));
    let mut checked = 0;
    for a in &codes {
        for b in &codes {
            let ab_prec = basis.prec(a, b);
            let ab_wb = way_below(a, b);
            let ab_below = basis.delta_below(a, b);
            for c in &codes {
                checked += 1;
                let violation = |law| LawViolation { law, codes: vec![a.clone(), b.clone(), c.clone()] };
                if ab_prec && basis.prec(b, c) && !basis.prec(a, c) {
                    return TransitivityReport { triples_checked: checked, violation: Some(violation(OrderLaw::Transitivity)) };
                }
                if ab_below == Some(true) && way_below(b, c) && !way_below(a, c) {
                    return TransitivityReport {
                        triples_checked: checked,
                        violation: Some(violation(OrderLaw::BelowThenWayBelow)),
                    };
                }
                if ab_wb && basis.delta_below(b, c) == Some(true) && !way_below(a, c) {
                    return TransitivityReport {
                        triples_checked: checked,
                        violation: Some(violation(OrderLaw::WayBelowThenBelow)),
                    };
                }
            }
        }
    }
    TransitivityReport { triples_checked: checked, violation: None }
}

/// δ-consistency: wherever both decisions exist, `a ≪ b` implies `a ⊑ b`.
pub fn delta_consistency_probe<B: BasisDescriptor>(basis: &B, fuel: Fuel) -> Option<LawViolation<B::Code>> {
    let codes: Vec<B::Code> = (0..fuel.get()).map(|i| basis.enumerate(i)).collect();
    for a in &codes {
        for b in &codes {
            if basis.delta_waybelow(a, b) == Some(true) && basis.delta_below(a, b) == Some(false) {
                return Some(LawViolation { law: OrderLaw::WayBelowImpliesBelow, codes: vec![a.clone(), b.clone()] });
            }
        }
    }
    None
}

/// Evaluates a monotone search at the least fuel `g ≤ fuel` where it succeeds.
///
/// `probe` must be monotone: success at `g` implies success at every larger
/// fuel. The returned value depends only on that least `g`, which makes the
/// answer identical for every budget above it.
pub(crate) fn least_fuel<T>(fuel: Fuel, mut probe: impl FnMut(Fuel) -> Result<Option<T>>) -> Result<Option<T>> {
    let Some(mut best) = probe(fuel)? else {
        return Ok(None);
    };
    // invariant: probe(hi) = Some(best), probe(lo) = None (or lo is below every index)
    let (mut lo, mut hi) = (0usize, fuel.get());
    if let Some(found) = probe(Fuel(0))? {
        return Ok(Some(found));
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match probe(Fuel(mid))? {
            Some(found) => {
                hi = mid;
                best = found;
            }
            None => lo = mid,
        }
    }
    Ok(Some(best))
}
