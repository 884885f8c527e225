//! Elements of rounded ideal completions, presented as `≺`-increasing chains
//! of basis codes, and the fuel-bounded semi-deciders every other module
//! builds on.
//!
//! The ideal denoted by a chain is `⋃ₙ ↓chain(n)`. Because the chain is
//! `≺`-increasing, each entry is itself a member, so membership of a code `b`
//! is witnessed by an index `n` with `b = chain(n)` or `b ≺ chain(n)`.
//! Non-membership needs positive evidence, supplied either by refinement
//! incompatibility with a member or by a membership decision the element
//! carries.

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::cert::{
    MemberEvidence, NonMember, NotNotBelowCert, RefuteBelowWitness, SharpAnswer, StrongMaxAnswer,
};
use crate::error::{Error, Result};
use crate::order::{least_fuel, BasisDescriptor, Fuel, Semi};

pub type Code<B> = <B as BasisDescriptor>::Code;
pub type ChainFn<C> = Arc<dyn Fn(usize) -> C + Send + Sync>;
pub type DecideFn<C> = Arc<dyn Fn(&C) -> bool + Send + Sync>;
pub type RefuterFn<B> =
    Arc<dyn Fn(&ApproxElement<B>, &Code<B>, Fuel) -> Option<RefuteBelowWitness<Code<B>>> + Send + Sync>;
pub type SharpFn<B> =
    Arc<dyn Fn(&ApproxElement<B>, &Code<B>, &Code<B>) -> Result<SharpAnswer<Code<B>>> + Send + Sync>;
pub type StrongMaxFn<B> =
    Arc<dyn Fn(&ApproxElement<B>, &Code<B>, &Code<B>) -> Result<StrongMaxAnswer<Code<B>>> + Send + Sync>;

/// Chain backed by a synchronized cache: `chain(n + 1) = step(chain(n), n)`.
pub fn memo_chain<C, F>(first: C, step: F) -> ChainFn<C>
where
    C: Clone + Send + Sync + 'static,
    F: Fn(&C, usize) -> C + Send + Sync + 'static,
{
    let cache = Mutex::new(vec![first]);
    Arc::new(move |n| {
        let mut entries = cache.lock().unwrap_or_else(|poisoned| poisoned.into_inner());
        while entries.len() <= n {
            let last = entries.len() - 1;
            let next = step(&entries[last], last);
            entries.push(next);
        }
        entries[n].clone()
    })
}

/// An ideal of a basis, given by an approximant chain plus optional decision
/// procedures and oracles.
pub struct ApproxElement<B: BasisDescriptor> {
    descriptor: Arc<B>,
    label: String,
    chain: ChainFn<Code<B>>,
    principal: Option<Code<B>>,
    decide: Option<DecideFn<Code<B>>>,
    refuter: Option<RefuterFn<B>>,
    sharp: Option<SharpFn<B>>,
    strongmax: Option<StrongMaxFn<B>>,
}

impl<B: BasisDescriptor> Clone for ApproxElement<B> {
    fn clone(&self) -> Self {
        ApproxElement {
            descriptor: Arc::clone(&self.descriptor),
            label: self.label.clone(),
            chain: Arc::clone(&self.chain),
            principal: self.principal.clone(),
            decide: self.decide.clone(),
            refuter: self.refuter.clone(),
            sharp: self.sharp.clone(),
            strongmax: self.strongmax.clone(),
        }
    }
}

impl<B: BasisDescriptor> fmt::Debug for ApproxElement<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ApproxElement")
            .field("basis", &self.descriptor.id())
            .field("label", &self.label)
            .field("decidable", &self.decide.is_some())
            .field("sharp", &self.sharp.is_some())
            .field("strongly_maximal", &self.strongmax.is_some())
            .finish()
    }
}

impl<B: BasisDescriptor> ApproxElement<B> {
    /// `chain` must be `≺`-increasing.
    pub fn from_chain(descriptor: Arc<B>, label: impl Into<String>, chain: ChainFn<Code<B>>) -> Self {
        ApproxElement {
            descriptor,
            label: label.into(),
            chain,
            principal: None,
            decide: None,
            refuter: None,
            sharp: None,
            strongmax: None,
        }
    }

    /// Attach a total membership decision; it must agree with the chain.
    pub fn with_decision(mut self, decide: DecideFn<Code<B>>) -> Self {
        self.decide = Some(decide);
        self
    }

    pub fn with_refuter(mut self, refuter: RefuterFn<B>) -> Self {
        self.refuter = Some(refuter);
        self
    }

    pub fn with_sharp_oracle(mut self, oracle: SharpFn<B>) -> Self {
        self.sharp = Some(oracle);
        self
    }

    pub fn with_strongmax_oracle(mut self, oracle: StrongMaxFn<B>) -> Self {
        self.strongmax = Some(oracle);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn descriptor(&self) -> &B {
        &self.descriptor
    }

    pub fn descriptor_arc(&self) -> &Arc<B> {
        &self.descriptor
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn chain(&self, n: usize) -> Code<B> {
        (self.chain)(n)
    }

    pub fn chain_fn(&self) -> &ChainFn<Code<B>> {
        &self.chain
    }

    /// The code `b` when this element is the principal ideal `↓b`.
    pub fn principal_code(&self) -> Option<&Code<B>> {
        self.principal.as_ref()
    }

    pub fn decide(&self, b: &Code<B>) -> Option<bool> {
        self.decide.as_ref().map(|d| d(b))
    }

    pub fn is_decidable(&self) -> bool {
        self.decide.is_some()
    }

    pub fn sharp_oracle(&self) -> Option<&SharpFn<B>> {
        self.sharp.as_ref()
    }

    pub fn strongmax_oracle(&self) -> Option<&StrongMaxFn<B>> {
        self.strongmax.as_ref()
    }

    pub fn same_basis(&self, other: &ApproxElement<B>) -> Result<()> {
        let (l, r) = (self.descriptor.id(), other.descriptor.id());
        if l == r {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch { left: l, right: r })
        }
    }

    /// Semi-decides `b ∈ x` (equivalently `↓b ≪ x`) by scanning chain indices below `fuel`.
    pub fn member(&self, b: &Code<B>, fuel: Fuel) -> Option<MemberEvidence<Code<B>>> {
        let basis = &*self.descriptor;
        (0..fuel.get()).find_map(|n| {
            let entry = self.chain(n);
            (entry == *b || basis.prec(b, &entry)).then(|| MemberEvidence { code: b.clone(), index: n })
        })
    }

    /// Semi-decides `↓b ⋢ x`.
    ///
    /// A supplied refuter is consulted first. The generic search then runs in
    /// stages `k < fuel`. Each stage looks for a probe below `b` that cannot be
    /// refined with `chain(k)`, then tests the `k`-th approach code below `b`
    /// against the membership decision, or failing that against the sharpness
    /// oracle when the basis has no refinement decision. Oracle refutations
    /// count only if they replay within `fuel`.
    pub fn refute_below(&self, b: &Code<B>, fuel: Fuel) -> Result<Option<RefuteBelowWitness<Code<B>>>> {
        if let Some(refuter) = &self.refuter {
            if let Some(w) = refuter(self, b, fuel) {
                return Ok(Some(w));
            }
        }
        let basis = &*self.descriptor;
        // the sharp fallback only runs where incompatibility probes cannot
        let refine_undecided = basis.refine(b, b).is_none();
        for k in 0..fuel.get() {
            let anchor = self.chain(k);
            if let Some(probe) = basis.incompatible_probe(b, &anchor) {
                return Ok(Some(RefuteBelowWitness {
                    target: b.clone(),
                    probe,
                    evidence: NonMember::Incompatible { anchor: MemberEvidence { code: anchor, index: k } },
                }));
            }
            if let Some(decide) = &self.decide {
                let probe = basis.approach_below(b, k);
                if !decide(&probe) {
                    return Ok(Some(RefuteBelowWitness { target: b.clone(), probe, evidence: NonMember::Decided }));
                }
            } else if let (Some(sharp), true) = (&self.sharp, refine_undecided) {
                let probe = basis.approach_below(b, k);
                if let SharpAnswer::Right(w) = sharp(self, &probe, b)? {
                    if w.replay_fuel() <= fuel.get() {
                        return Ok(Some(w));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Why `x ⊑ y` was answered exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BelowEvidence<C> {
    /// Both are principal and the basis decides `↓left ⊑ ↓right`.
    PrincipalDecision { left: C, right: C },
}

/// The principal ideal `↓b`.
///
/// For reflexive bases the chain is constantly `b`; otherwise it is the
/// basis' approach sequence below `b`. Principal ideals carry the membership
/// decision `a ↦ a ≺ b` and the sharpness oracle that decision induces.
pub fn principal<B: BasisDescriptor>(basis: &Arc<B>, b: Code<B>) -> Result<ApproxElement<B>> {
    principal_arc(basis, b)
}

pub(crate) fn principal_arc<B: BasisDescriptor>(basis: &Arc<B>, b: Code<B>) -> Result<ApproxElement<B>> {
    basis.validate(&b).map_err(|e| match e {
        Error::InvalidCode(_) => e,
        other => Error::InvalidCode(other.to_string()),
    })?;
    let label = format!("principal:{}", basis.serialize(&b));
    let chain: ChainFn<Code<B>> = if basis.is_reflexive() {
        let top = b.clone();
        Arc::new(move |_| top.clone())
    } else {
        let inner = Arc::clone(basis);
        let top = b.clone();
        Arc::new(move |k| inner.approach_below(&top, k))
    };
    let decide_basis = Arc::clone(basis);
    let top = b.clone();
    let decide: DecideFn<Code<B>> = Arc::new(move |a| decide_basis.prec(a, &top));
    let mut element = ApproxElement::from_chain(Arc::clone(basis), label, chain)
        .with_decision(decide)
        .with_sharp_oracle(Arc::new(decidable_sharp));
    element.principal = Some(b);
    Ok(element)
}

/// Sharpness oracle of any element with a membership decision: `a ∈ x` gives
/// the left answer, otherwise `a` itself refutes `↓b ⊑ x`.
pub fn decidable_sharp<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    a: &Code<B>,
    b: &Code<B>,
) -> Result<SharpAnswer<Code<B>>> {
    if !x.descriptor().prec(a, b) {
        return Err(Error::PreconditionViolated("sharpness query needs a ≺ b".into()));
    }
    let decided = x
        .decide(a)
        .ok_or_else(|| Error::NotDecidable(x.label().to_string()))?;
    if decided {
        Ok(SharpAnswer::Left(find_member(x, a)?))
    } else {
        Ok(SharpAnswer::Right(RefuteBelowWitness { target: b.clone(), probe: a.clone(), evidence: NonMember::Decided }))
    }
}

/// Chain scan for a code already known to be a member.
pub(crate) fn find_member<B: BasisDescriptor>(x: &ApproxElement<B>, a: &Code<B>) -> Result<MemberEvidence<Code<B>>> {
    const LIMIT: usize = 1 << 16;
    x.member(a, Fuel::new(LIMIT)).ok_or_else(|| {
        Error::OracleFailure(format!(
            "{} was decided a member of {} but no chain entry above it appears within {LIMIT} steps",
            x.descriptor().serialize(a),
            x.label()
        ))
    })
}

/// Semi-decides `↓b ≪ y`: yes with a chain witness, no with a refutation of `↓b ⊑ y`.
pub fn way_below<B: BasisDescriptor>(
    y: &ApproxElement<B>,
    b: &Code<B>,
    fuel: Fuel,
) -> Result<Semi<MemberEvidence<Code<B>>, RefuteBelowWitness<Code<B>>>> {
    y.descriptor().validate(b)?;
    let found = least_fuel(fuel, |f| {
        if let Some(m) = y.member(b, f) {
            return Ok(Some(Semi::Yes(m)));
        }
        Ok(y.refute_below(b, f)?.map(Semi::No))
    })?;
    Ok(found.unwrap_or(Semi::Unknown))
}

/// Same as [`way_below`] with an explicit descriptor check against `x`.
pub fn way_below_checked<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
    b: &Code<B>,
    fuel: Fuel,
) -> Result<Semi<MemberEvidence<Code<B>>, RefuteBelowWitness<Code<B>>>> {
    x.same_basis(y)?;
    way_below(y, b, fuel)
}

/// `x ⋢̸̸ y` search at exactly this fuel: candidate codes are chain entries of
/// `x`, then enumerated codes, each below `fuel`.
pub(crate) fn not_not_below_at<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
    fuel: Fuel,
) -> Result<Option<NotNotBelowCert<Code<B>>>> {
    let basis = x.descriptor();
    for i in 0..fuel.get() {
        let b = x.chain(i);
        if let Some(refutation) = y.refute_below(&b, fuel)? {
            return Ok(Some(NotNotBelowCert { member: MemberEvidence { code: b, index: i }, refutation }));
        }
    }
    for e in 0..fuel.get() {
        let b = basis.enumerate(e);
        let Some(member) = x.member(&b, fuel) else { continue };
        if let Some(refutation) = y.refute_below(&b, fuel)? {
            return Ok(Some(NotNotBelowCert { member, refutation }));
        }
    }
    Ok(None)
}

/// Fuel-stable `x ⋢̸̸ y` search.
pub fn search_not_not_below<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
    fuel: Fuel,
) -> Result<Option<NotNotBelowCert<Code<B>>>> {
    x.same_basis(y)?;
    least_fuel(fuel, |f| not_not_below_at(x, y, f))
}

/// `x ⊑ y`: `No` carries a `x ⋢̸̸ y` certificate; `Yes` only for principal
/// pairs over a basis with δ⊑.
pub fn below<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
    fuel: Fuel,
) -> Result<Semi<BelowEvidence<Code<B>>, NotNotBelowCert<Code<B>>>> {
    x.same_basis(y)?;
    if let (Some(b), Some(c)) = (x.principal_code(), y.principal_code()) {
        if x.descriptor().delta_below(b, c) == Some(true) {
            return Ok(Semi::Yes(BelowEvidence::PrincipalDecision { left: b.clone(), right: c.clone() }));
        }
    }
    Ok(match search_not_not_below(x, y, fuel)? {
        Some(cert) => Semi::No(cert),
        None => Semi::Unknown,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainFailure {
    /// `chain(index) ≺ chain(index + 1)` fails.
    NotIncreasing { index: usize },
    /// `chain(index)` is not confirmed a member at fuel `index + 1`.
    MemberMissing { index: usize },
    /// A code is both a confirmed member and refuted as below the element.
    Incoherent { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub checked: usize,
    pub failure: Option<ChainFailure>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Validates the chain invariant and member/refuter coherence below `fuel`.
pub fn chain_monotone_check<B: BasisDescriptor>(x: &ApproxElement<B>, fuel: Fuel) -> Result<ChainReport> {
    let basis = x.descriptor();
    let n = fuel.get();
    let report = |checked, failure| Ok(ChainReport { checked, failure: Some(failure) });
    for i in 0..n {
        if i + 1 < n && !basis.prec(&x.chain(i), &x.chain(i + 1)) {
            return report(i, ChainFailure::NotIncreasing { index: i });
        }
        let entry = x.chain(i);
        if x.member(&entry, Fuel::new(i + 1)).is_none() {
            return report(i, ChainFailure::MemberMissing { index: i });
        }
        if x.refute_below(&entry, fuel)?.is_some() {
            return report(i, ChainFailure::Incoherent { index: i });
        }
        let probe = basis.enumerate(i);
        if x.member(&probe, fuel).is_some() && x.refute_below(&probe, fuel)?.is_some() {
            return report(i, ChainFailure::Incoherent { index: i });
        }
    }
    Ok(ChainReport { checked: n, failure: None })
}
