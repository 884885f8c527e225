//! Products of bases and the compact basis of exponentials: bounded finite
//! joins of single-step functions.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cert::{MemberEvidence, NonMember, RefuteBelowWitness, SharpAnswer};
use crate::error::{Error, Result};
use crate::ideal::{ApproxElement, Code, DecideFn, SharpFn};
use crate::order::rational::unpair;
use crate::order::BasisDescriptor;

// ---- products -----------------------------------------------------------

/// `B_D × B_E` with componentwise order data.
#[derive(Debug, Clone)]
pub struct ProductBasis<L, R> {
    left: Arc<L>,
    right: Arc<R>,
}

impl<L: BasisDescriptor, R: BasisDescriptor> ProductBasis<L, R> {
    pub fn new(left: Arc<L>, right: Arc<R>) -> Self {
        ProductBasis { left, right }
    }

    pub fn left(&self) -> &Arc<L> {
        &self.left
    }

    pub fn right(&self) -> &Arc<R> {
        &self.right
    }
}

fn both(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    Some(a? && b?)
}

impl<L: BasisDescriptor, R: BasisDescriptor> BasisDescriptor for ProductBasis<L, R> {
    type Code = (L::Code, R::Code);

    fn id(&self) -> String {
        format!("product({},{})", self.left.id(), self.right.id())
    }

    fn enumerate(&self, index: usize) -> Self::Code {
        let (i, j) = unpair(index);
        (self.left.enumerate(i), self.right.enumerate(j))
    }

    fn prec(&self, a: &Self::Code, b: &Self::Code) -> bool {
        self.left.prec(&a.0, &b.0) && self.right.prec(&a.1, &b.1)
    }

    fn is_reflexive(&self) -> bool {
        self.left.is_reflexive() && self.right.is_reflexive()
    }

    /// A JSON array of the two component codes.
    fn serialize(&self, c: &Self::Code) -> String {
        serde_json::to_string(&[self.left.serialize(&c.0), self.right.serialize(&c.1)]).expect("strings serialize")
    }

    fn parse(&self, text: &str) -> Result<Self::Code> {
        let parts: [String; 2] = serde_json::from_str(text).map_err(|e| Error::Parse(format!("pair `{text}`: {e}")))?;
        Ok((self.left.parse(&parts[0])?, self.right.parse(&parts[1])?))
    }

    fn validate(&self, c: &Self::Code) -> Result<()> {
        self.left.validate(&c.0)?;
        self.right.validate(&c.1)
    }

    fn interpolate(&self, a: &Self::Code, b: &Self::Code) -> Result<Self::Code> {
        Ok((self.left.interpolate(&a.0, &b.0)?, self.right.interpolate(&a.1, &b.1)?))
    }

    fn approach_below(&self, b: &Self::Code, k: usize) -> Self::Code {
        (self.left.approach_below(&b.0, k), self.right.approach_below(&b.1, k))
    }

    fn bottom(&self) -> Option<Self::Code> {
        Some((self.left.bottom()?, self.right.bottom()?))
    }

    fn delta_bot(&self, b: &Self::Code) -> Option<bool> {
        both(self.left.delta_bot(&b.0), self.right.delta_bot(&b.1))
    }

    fn delta_waybelow(&self, a: &Self::Code, b: &Self::Code) -> Option<bool> {
        both(self.left.delta_waybelow(&a.0, &b.0), self.right.delta_waybelow(&a.1, &b.1))
    }

    fn delta_below(&self, a: &Self::Code, b: &Self::Code) -> Option<bool> {
        both(self.left.delta_below(&a.0, &b.0), self.right.delta_below(&a.1, &b.1))
    }

    fn bounded_pair(&self, a: &Self::Code, b: &Self::Code) -> Option<bool> {
        both(self.left.bounded_pair(&a.0, &b.0), self.right.bounded_pair(&a.1, &b.1))
    }

    fn refine(&self, a: &Self::Code, b: &Self::Code) -> Option<bool> {
        both(self.left.refine(&a.0, &b.0), self.right.refine(&a.1, &b.1))
    }

    fn incompatible_probe(&self, b: &Self::Code, anchor: &Self::Code) -> Option<Self::Code> {
        if let Some(p) = self.left.incompatible_probe(&b.0, &anchor.0) {
            return Some((p, self.right.approach_below(&b.1, 0)));
        }
        self.right
            .incompatible_probe(&b.1, &anchor.1)
            .map(|p| (self.left.approach_below(&b.0, 0), p))
    }

    fn join(&self, a: &Self::Code, b: &Self::Code) -> Option<Option<Self::Code>> {
        let l = self.left.join(&a.0, &b.0)?;
        let r = self.right.join(&a.1, &b.1)?;
        Some(l.zip(r))
    }

    fn jointly_bounded(&self, codes: &[Self::Code]) -> Option<bool> {
        let ls: Vec<L::Code> = codes.iter().map(|c| c.0.clone()).collect();
        let rs: Vec<R::Code> = codes.iter().map(|c| c.1.clone()).collect();
        both(self.left.jointly_bounded(&ls), self.right.jointly_bounded(&rs))
    }
}

/// `(x, y)` with chain `(x_n, y_n)`.
///
/// A membership decision is attached when both factors have one, and a
/// sharpness oracle when both factors have one.
pub fn product<L: BasisDescriptor, R: BasisDescriptor>(
    x: &ApproxElement<L>,
    y: &ApproxElement<R>,
) -> ApproxElement<ProductBasis<L, R>> {
    let basis = Arc::new(ProductBasis::new(Arc::clone(x.descriptor_arc()), Arc::clone(y.descriptor_arc())));
    let (cx, cy) = (Arc::clone(x.chain_fn()), Arc::clone(y.chain_fn()));
    let label = format!("({},{})", x.label(), y.label());
    let mut element = ApproxElement::from_chain(basis, label, Arc::new(move |n| (cx(n), cy(n))));
    if x.is_decidable() && y.is_decidable() {
        let (dx, dy) = (x.clone(), y.clone());
        let decide: DecideFn<Code<ProductBasis<L, R>>> =
            Arc::new(move |c| dx.decide(&c.0) == Some(true) && dy.decide(&c.1) == Some(true));
        element = element.with_decision(decide);
    }
    if x.sharp_oracle().is_some() && y.sharp_oracle().is_some() {
        let (sx, sy) = (x.clone(), y.clone());
        let oracle: SharpFn<ProductBasis<L, R>> = Arc::new(move |p, a, b| product_sharp(&sx, &sy, p, a, b));
        element = element.with_sharp_oracle(oracle);
    }
    element
}

fn product_sharp<L: BasisDescriptor, R: BasisDescriptor>(
    x: &ApproxElement<L>,
    y: &ApproxElement<R>,
    p: &ApproxElement<ProductBasis<L, R>>,
    a: &Code<ProductBasis<L, R>>,
    b: &Code<ProductBasis<L, R>>,
) -> Result<SharpAnswer<Code<ProductBasis<L, R>>>> {
    let basis = p.descriptor();
    let left = x.sharp_oracle().expect("checked when attached")(x, &a.0, &b.0)?;
    let right = y.sharp_oracle().expect("checked when attached")(y, &a.1, &b.1)?;
    let lift = |probe: (L::Code, R::Code), evidence: NonMember<_>| {
        Ok(SharpAnswer::Right(RefuteBelowWitness { target: b.clone(), probe, evidence }))
    };
    match (left, right) {
        (SharpAnswer::Left(l), SharpAnswer::Left(r)) => {
            let index = l.index.max(r.index);
            Ok(SharpAnswer::Left(MemberEvidence { code: a.clone(), index }))
        }
        (SharpAnswer::Right(w), _) => match w.evidence {
            NonMember::Incompatible { anchor } => {
                let anchor = MemberEvidence { code: p.chain(anchor.index), index: anchor.index };
                lift((w.probe, basis.right().approach_below(&b.1, 0)), NonMember::Incompatible { anchor })
            }
            NonMember::Decided if p.is_decidable() => lift((w.probe, basis.right().approach_below(&b.1, 0)), NonMember::Decided),
            NonMember::Decided => Err(Error::NotDecidable(p.label().to_string())),
        },
        (_, SharpAnswer::Right(w)) => match w.evidence {
            NonMember::Incompatible { anchor } => {
                let anchor = MemberEvidence { code: p.chain(anchor.index), index: anchor.index };
                lift((basis.left().approach_below(&b.0, 0), w.probe), NonMember::Incompatible { anchor })
            }
            NonMember::Decided if p.is_decidable() => lift((basis.left().approach_below(&b.0, 0), w.probe), NonMember::Decided),
            NonMember::Decided => Err(Error::NotDecidable(p.label().to_string())),
        },
    }
}

// ---- step functions -----------------------------------------------------

/// Largest step set considered when enumerating the exponential basis.
pub const MAX_STEPS: usize = 6;
/// Largest step set [`bounded_steps`] scans the subsets of.
pub const MAX_BOUNDED_SCAN: usize = 16;

/// `[source ⇒ target]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingleStep<A, B> {
    pub source: A,
    pub target: B,
}

/// A finite join of single-step functions in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StepFunction<A, B> {
    steps: Vec<SingleStep<A, B>>,
}

impl<A, B> StepFunction<A, B> {
    pub fn steps(&self) -> &[SingleStep<A, B>] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn below_in<B: BasisDescriptor>(basis: &B, a: &B::Code, b: &B::Code) -> Result<bool> {
    basis.delta_below(a, b).ok_or_else(|| Error::MissingDelta(basis.id()))
}

fn step_text<D: BasisDescriptor, E: BasisDescriptor>(d: &D, e: &E, s: &SingleStep<D::Code, E::Code>) -> String {
    format!("{}=>{}", d.serialize(&s.source), e.serialize(&s.target))
}

/// Drops steps with target `⊥` and steps dominated by another
/// (`[a'⇒b']` with `a' ⊑ a`, `b ⊑ b'`), then sorts by serialization.
pub fn canonicalize<D: BasisDescriptor, E: BasisDescriptor>(
    d: &D,
    e: &E,
    steps: &[SingleStep<D::Code, E::Code>],
) -> Result<StepFunction<D::Code, E::Code>> {
    let mut kept: Vec<SingleStep<D::Code, E::Code>> = Vec::new();
    for s in steps {
        if e.delta_bot(&s.target) == Some(true) || kept.contains(s) {
            continue;
        }
        kept.push(s.clone());
    }
    let mut out = Vec::new();
    for (i, s) in kept.iter().enumerate() {
        let mut dominated = false;
        for (j, t) in kept.iter().enumerate() {
            if i != j && below_in(d, &t.source, &s.source)? && below_in(e, &s.target, &t.target)? {
                // of two mutually dominating steps keep the first
                let mutual = below_in(d, &s.source, &t.source)? && below_in(e, &t.target, &s.target)?;
                if !mutual || j < i {
                    dominated = true;
                    break;
                }
            }
        }
        if !dominated {
            out.push(s.clone());
        }
    }
    out.sort_by_cached_key(|s| step_text(d, e, s));
    Ok(StepFunction { steps: out })
}

/// `⊔{b | [a⇒b] ∈ S, a ⊑ x}`, or `⊥` when no step fires.
pub fn apply<D: BasisDescriptor, E: BasisDescriptor>(
    d: &D,
    e: &E,
    s: &StepFunction<D::Code, E::Code>,
    x: &D::Code,
) -> Result<E::Code> {
    let mut acc = e.bottom().ok_or_else(|| Error::MissingDeltaBot(e.id()))?;
    for step in &s.steps {
        if below_in(d, &step.source, x)? {
            acc = match e.join(&acc, &step.target) {
                Some(Some(j)) => j,
                Some(None) => {
                    return Err(Error::UnboundedJoin(format!(
                        "{} and {} at {}",
                        e.serialize(&acc),
                        e.serialize(&step.target),
                        d.serialize(x)
                    )))
                }
                None => return Err(Error::MissingDelta(e.id())),
            };
        }
    }
    Ok(acc)
}

/// `S ⊑ T` iff `b ⊑ T(a)` for every `[a⇒b] ∈ S`.
pub fn step_below<D: BasisDescriptor, E: BasisDescriptor>(
    d: &D,
    e: &E,
    s: &StepFunction<D::Code, E::Code>,
    t: &StepFunction<D::Code, E::Code>,
) -> Result<bool> {
    for step in &s.steps {
        if !below_in(e, &step.target, &apply(d, e, t, &step.source)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every subset whose sources are jointly bounded in `D` must have targets
/// jointly bounded in `E`. All subsets are scanned; pairwise consistency is
/// not enough in general.
pub fn bounded_steps<D: BasisDescriptor, E: BasisDescriptor>(
    d: &D,
    e: &E,
    steps: &[SingleStep<D::Code, E::Code>],
) -> Result<bool> {
    if steps.len() > MAX_BOUNDED_SCAN {
        return Err(Error::SizeTooLarge { size: steps.len(), limit: MAX_BOUNDED_SCAN });
    }
    for mask in 1u32..(1 << steps.len()) {
        let chosen: Vec<&SingleStep<D::Code, E::Code>> =
            (0..steps.len()).filter(|i| mask & (1 << i) != 0).map(|i| &steps[i]).collect();
        let sources: Vec<D::Code> = chosen.iter().map(|s| s.source.clone()).collect();
        let sources_bounded = d
            .jointly_bounded(&sources)
            .ok_or_else(|| Error::MissingBoundednessData(d.id()))?;
        if !sources_bounded {
            continue;
        }
        let targets: Vec<E::Code> = chosen.iter().map(|s| s.target.clone()).collect();
        let targets_bounded = e
            .jointly_bounded(&targets)
            .ok_or_else(|| Error::MissingBoundednessData(e.id()))?;
        if !targets_bounded {
            return Ok(false);
        }
    }
    Ok(true)
}

fn distinct_codes<B: BasisDescriptor>(basis: &B, n: usize) -> Vec<B::Code> {
    let mut seen = Vec::new();
    for i in 0..n {
        let c = basis.enumerate(i);
        if !seen.contains(&c) {
            seen.push(c);
        }
    }
    seen
}

/// Bounded step functions over codes of enumeration index below `n`, up to
/// [`MAX_STEPS`] steps, one canonical representative per `step_below`
/// equivalence class, sorted by serialization.
///
/// The representative of a class is its canonical form with fewest steps,
/// ties broken by serialization.
pub fn exp_basis_enumerate<D: BasisDescriptor, E: BasisDescriptor>(
    d: &D,
    e: &E,
    n: usize,
) -> Result<Vec<StepFunction<D::Code, E::Code>>> {
    if !d.is_reflexive() || !e.is_reflexive() {
        return Err(Error::PreconditionViolated("both bases must be algebraic (reflexive ≺)".into()));
    }
    if e.bottom().is_none() {
        return Err(Error::PreconditionViolated(format!("codomain basis `{}` is not pointed", e.id())));
    }
    if n == 0 {
        return Err(Error::PreconditionViolated("size bound must be positive".into()));
    }
    let sources = distinct_codes(d, n);
    let targets: Vec<E::Code> = distinct_codes(e, n).into_iter().filter(|t| e.delta_bot(t) != Some(true)).collect();
    let singles: Vec<SingleStep<D::Code, E::Code>> = sources
        .iter()
        .flat_map(|a| targets.iter().map(move |b| SingleStep { source: a.clone(), target: b.clone() }))
        .collect();

    let mut candidates: BTreeSet<(usize, String)> = BTreeSet::new();
    let mut by_text = std::collections::HashMap::new();
    let mut chosen = Vec::new();
    subsets(singles.len(), MAX_STEPS, &mut chosen, &mut |idx| {
        let steps: Vec<SingleStep<D::Code, E::Code>> = idx.iter().map(|&i| singles[i].clone()).collect();
        if !bounded_steps(d, e, &steps)? {
            return Ok(());
        }
        let f = canonicalize(d, e, &steps)?;
        let text = serialize_steps(d, e, &f);
        candidates.insert((f.steps.len(), text.clone()));
        by_text.entry(text).or_insert(f);
        Ok(())
    })?;

    let mut classes: Vec<StepFunction<D::Code, E::Code>> = Vec::new();
    for (_, text) in candidates {
        let f = by_text.remove(&text).expect("recorded with its text");
        let mut known = false;
        for c in &classes {
            if step_below(d, e, &f, c)? && step_below(d, e, c, &f)? {
                known = true;
                break;
            }
        }
        if !known {
            classes.push(f);
        }
    }
    classes.sort_by_cached_key(|f| serialize_steps(d, e, f));
    Ok(classes)
}

fn subsets(
    n: usize,
    max: usize,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    visit(chosen)?;
    if chosen.len() == max {
        return Ok(());
    }
    let start = chosen.last().map_or(0, |&l| l + 1);
    for i in start..n {
        chosen.push(i);
        subsets(n, max, chosen, visit)?;
        chosen.pop();
    }
    Ok(())
}

/// `{a1=>b1, a2=>b2}`.
pub fn serialize_steps<D: BasisDescriptor, E: BasisDescriptor>(d: &D, e: &E, f: &StepFunction<D::Code, E::Code>) -> String {
    let parts: Vec<String> = f.steps.iter().map(|s| step_text(d, e, s)).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn parse_steps<D: BasisDescriptor, E: BasisDescriptor>(d: &D, e: &E, text: &str) -> Result<Vec<SingleStep<D::Code, E::Code>>> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("step function `{text}` must be braced")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(", ")
        .map(|part| {
            let (a, b) = part
                .split_once("=>")
                .ok_or_else(|| Error::Parse(format!("step `{part}` needs `=>`")))?;
            Ok(SingleStep { source: d.parse(a)?, target: e.parse(b)? })
        })
        .collect()
}

/// The compact basis of `[D → E]` for finite-index enumerations: one code per
/// class from [`exp_basis_enumerate`], ordered by [`step_below`].
#[derive(Debug, Clone)]
pub struct ExponentialBasis<D: BasisDescriptor, E: BasisDescriptor> {
    dom: Arc<D>,
    cod: Arc<E>,
    classes: Vec<StepFunction<D::Code, E::Code>>,
}

impl<D: BasisDescriptor, E: BasisDescriptor> ExponentialBasis<D, E> {
    pub fn new(dom: Arc<D>, cod: Arc<E>, size_bound: usize) -> Result<Self> {
        let classes = exp_basis_enumerate(&*dom, &*cod, size_bound)?;
        Ok(ExponentialBasis { dom, cod, classes })
    }

    pub fn classes(&self) -> &[StepFunction<D::Code, E::Code>] {
        &self.classes
    }

    pub fn apply(&self, f: &StepFunction<D::Code, E::Code>, x: &D::Code) -> Result<E::Code> {
        apply(&*self.dom, &*self.cod, f, x)
    }

    /// The class representative of a bounded step set.
    pub fn normalize(&self, steps: &[SingleStep<D::Code, E::Code>]) -> Result<StepFunction<D::Code, E::Code>> {
        if !bounded_steps(&*self.dom, &*self.cod, steps)? {
            return Err(Error::UnboundedJoin(format!("{} steps without an upper bound", steps.len())));
        }
        let f = canonicalize(&*self.dom, &*self.cod, steps)?;
        for c in &self.classes {
            if self.below(&f, c)? && self.below(c, &f)? {
                return Ok(c.clone());
            }
        }
        Err(Error::InvalidCode(format!(
            "{} is outside the enumerated basis",
            serialize_steps(&*self.dom, &*self.cod, &f)
        )))
    }

    fn below(&self, s: &StepFunction<D::Code, E::Code>, t: &StepFunction<D::Code, E::Code>) -> Result<bool> {
        step_below(&*self.dom, &*self.cod, s, t)
    }

    fn union(&self, a: &StepFunction<D::Code, E::Code>, b: &StepFunction<D::Code, E::Code>) -> Vec<SingleStep<D::Code, E::Code>> {
        a.steps.iter().chain(&b.steps).cloned().collect()
    }
}

impl<D: BasisDescriptor, E: BasisDescriptor> BasisDescriptor for ExponentialBasis<D, E> {
    type Code = StepFunction<D::Code, E::Code>;

    fn id(&self) -> String {
        format!("exp({},{};{})", self.dom.id(), self.cod.id(), self.classes.len())
    }

    fn enumerate(&self, index: usize) -> Self::Code {
        self.classes[index % self.classes.len()].clone()
    }

    fn prec(&self, a: &Self::Code, b: &Self::Code) -> bool {
        self.below(a, b).unwrap_or(false)
    }

    fn is_reflexive(&self) -> bool {
        true
    }

    fn serialize(&self, code: &Self::Code) -> String {
        serialize_steps(&*self.dom, &*self.cod, code)
    }

    fn parse(&self, text: &str) -> Result<Self::Code> {
        self.normalize(&parse_steps(&*self.dom, &*self.cod, text)?)
    }

    fn validate(&self, code: &Self::Code) -> Result<()> {
        if self.classes.contains(code) {
            Ok(())
        } else {
            Err(Error::InvalidCode(format!("{} is not a class representative", self.serialize(code))))
        }
    }

    fn bottom(&self) -> Option<Self::Code> {
        Some(StepFunction { steps: Vec::new() })
    }

    fn delta_bot(&self, b: &Self::Code) -> Option<bool> {
        Some(b.is_empty())
    }

    fn delta_waybelow(&self, a: &Self::Code, b: &Self::Code) -> Option<bool> {
        self.below(a, b).ok()
    }

    fn delta_below(&self, a: &Self::Code, b: &Self::Code) -> Option<bool> {
        self.below(a, b).ok()
    }

    fn bounded_pair(&self, a: &Self::Code, b: &Self::Code) -> Option<bool> {
        bounded_steps(&*self.dom, &*self.cod, &self.union(a, b)).ok()
    }

    fn refine(&self, a: &Self::Code, b: &Self::Code) -> Option<bool> {
        self.bounded_pair(a, b)
    }

    fn join(&self, a: &Self::Code, b: &Self::Code) -> Option<Option<Self::Code>> {
        let steps = self.union(a, b);
        match bounded_steps(&*self.dom, &*self.cod, &steps).ok()? {
            false => Some(None),
            true => self.normalize(&steps).ok().map(Some),
        }
    }

    fn jointly_bounded(&self, codes: &[Self::Code]) -> Option<bool> {
        let steps: Vec<_> = codes.iter().flat_map(|c| c.steps.iter().cloned()).collect();
        bounded_steps(&*self.dom, &*self.cod, &steps).ok()
    }
}
