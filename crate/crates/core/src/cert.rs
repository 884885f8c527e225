//! Replayable positive evidence.
//!
//! Every certificate here is checked by [`replay`](ApartCert::replay) using
//! only decidable basis data, chain lookups of the elements involved, and (for
//! elements that carry one) their membership decision. Nothing is trusted
//! from the search that produced it.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ideal::ApproxElement;
use crate::order::BasisDescriptor;

/// `code ∈ x`, witnessed by `code = chain(index)` or `code ≺ chain(index)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MemberEvidence<C> {
    pub code: C,
    pub index: usize,
}

/// Why a probe code is not a member of an element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NonMember<C> {
    /// `anchor ∈ x` and the probe cannot be refined with it; ideals are directed.
    Incompatible { anchor: MemberEvidence<C> },
    /// The element's membership decision answers no.
    Decided,
}

/// `↓target ⋢ x`: `probe ≺ target` and `probe ∉ x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RefuteBelowWitness<C> {
    pub target: C,
    pub probe: C,
    pub evidence: NonMember<C>,
}

/// `x ⋢̸̸ y`: a basis code way below `x` whose principal ideal is not below `y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NotNotBelowCert<C> {
    pub member: MemberEvidence<C>,
    pub refutation: RefuteBelowWitness<C>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// The inner certificate shows `x ⋢̸̸ y`.
    Forward,
    /// The inner certificate shows `y ⋢̸̸ x`.
    Backward,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Backward,
            Orientation::Backward => Orientation::Forward,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Orientation::Forward => "forward",
            Orientation::Backward => "backward",
        }
    }
}

/// Intrinsic apartness `x # y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ApartCert<C> {
    pub orientation: Orientation,
    pub inner: NotNotBelowCert<C>,
}

/// Disjoint basic opens `↟left ∋ x` and `↟right ∋ y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HausdorffCert<C> {
    pub left: MemberEvidence<C>,
    pub right: MemberEvidence<C>,
}

/// Answer of a sharpness oracle to a query `a ≺ b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SharpAnswer<C> {
    /// `a ≪ x`.
    Left(MemberEvidence<C>),
    /// `↓b ⋢ x`.
    Right(RefuteBelowWitness<C>),
}

/// Answer of a strong-maximality oracle to a query `u ≺ v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StrongMaxAnswer<C> {
    /// `u ≪ x`.
    Left(MemberEvidence<C>),
    /// `↓v` and `x` are Hausdorff separated; `left` lives in `principal(v)`.
    Right(HausdorffCert<C>),
}

fn fail(msg: impl Into<String>) -> Error {
    Error::ReplayFailed(msg.into())
}

impl<C: Clone + Eq> MemberEvidence<C> {
    pub fn replay<B: BasisDescriptor<Code = C>>(&self, x: &ApproxElement<B>) -> Result<()> {
        let entry = x.chain(self.index);
        if entry == self.code || x.descriptor().prec(&self.code, &entry) {
            Ok(())
        } else {
            Err(fail(format!(
                "{} is not below chain entry {} of {}",
                x.descriptor().serialize(&self.code),
                self.index,
                x.label()
            )))
        }
    }

    pub fn replay_fuel(&self) -> usize {
        self.index + 1
    }
}

impl<C: Clone + Eq> RefuteBelowWitness<C> {
    pub fn replay<B: BasisDescriptor<Code = C>>(&self, x: &ApproxElement<B>) -> Result<()> {
        let basis = x.descriptor();
        if !basis.prec(&self.probe, &self.target) {
            return Err(fail(format!(
                "probe {} is not ≺ {}",
                basis.serialize(&self.probe),
                basis.serialize(&self.target)
            )));
        }
        match &self.evidence {
            NonMember::Incompatible { anchor } => {
                anchor.replay(x)?;
                match basis.refine(&self.probe, &anchor.code) {
                    Some(false) => Ok(()),
                    Some(true) => Err(fail(format!(
                        "probe {} refines with anchor {}",
                        basis.serialize(&self.probe),
                        basis.serialize(&anchor.code)
                    ))),
                    None => Err(Error::MissingRefineDecision(basis.id())),
                }
            }
            NonMember::Decided => match x.decide(&self.probe) {
                Some(false) => Ok(()),
                Some(true) => Err(fail(format!("{} decides {} as a member", x.label(), basis.serialize(&self.probe)))),
                None => Err(fail(format!("{} carries no membership decision", x.label()))),
            },
        }
    }

    pub fn replay_fuel(&self) -> usize {
        match &self.evidence {
            NonMember::Incompatible { anchor } => anchor.replay_fuel(),
            NonMember::Decided => 1,
        }
    }
}

impl<C: Clone + Eq> NotNotBelowCert<C> {
    /// Checks `member.code ≪ x` and `↓member.code ⋢ y`.
    pub fn replay<B: BasisDescriptor<Code = C>>(&self, x: &ApproxElement<B>, y: &ApproxElement<B>) -> Result<()> {
        self.member.replay(x)?;
        if self.refutation.target != self.member.code {
            return Err(fail("refutation targets a different code than the member witness"));
        }
        self.refutation.replay(y)
    }

    pub fn replay_fuel(&self) -> usize {
        self.member.replay_fuel().max(self.refutation.replay_fuel())
    }
}

impl<C: Clone + Eq> ApartCert<C> {
    pub fn replay<B: BasisDescriptor<Code = C>>(&self, x: &ApproxElement<B>, y: &ApproxElement<B>) -> Result<()> {
        match self.orientation {
            Orientation::Forward => self.inner.replay(x, y),
            Orientation::Backward => self.inner.replay(y, x),
        }
    }

    /// The same evidence read as `y # x`.
    pub fn symmetric(&self) -> Self {
        ApartCert { orientation: self.orientation.flip(), inner: self.inner.clone() }
    }

    pub fn replay_fuel(&self) -> usize {
        self.inner.replay_fuel()
    }
}

impl<C: Clone + Eq> HausdorffCert<C> {
    pub fn replay<B: BasisDescriptor<Code = C>>(&self, x: &ApproxElement<B>, y: &ApproxElement<B>) -> Result<()> {
        self.left.replay(x)?;
        self.right.replay(y)?;
        let basis = x.descriptor();
        match basis.refine(&self.left.code, &self.right.code) {
            Some(false) => Ok(()),
            Some(true) => Err(fail(format!(
                "{} and {} are refinable",
                basis.serialize(&self.left.code),
                basis.serialize(&self.right.code)
            ))),
            None => Err(Error::MissingRefineDecision(basis.id())),
        }
    }

    pub fn symmetric(&self) -> Self {
        HausdorffCert { left: self.right.clone(), right: self.left.clone() }
    }

    pub fn replay_fuel(&self) -> usize {
        self.left.replay_fuel().max(self.right.replay_fuel())
    }
}

impl<C: Clone + Eq> SharpAnswer<C> {
    /// Checks the answer is about the query `(a, b)` and that its evidence holds.
    pub fn replay<B: BasisDescriptor<Code = C>>(&self, x: &ApproxElement<B>, a: &C, b: &C) -> Result<()> {
        match self {
            SharpAnswer::Left(m) if &m.code == a => m.replay(x),
            SharpAnswer::Right(r) if &r.target == b => r.replay(x),
            _ => Err(fail("sharp answer does not match its query")),
        }
    }
}

impl<C: Clone + Eq> StrongMaxAnswer<C> {
    pub fn replay<B: BasisDescriptor<Code = C>>(&self, x: &ApproxElement<B>, u: &C, v: &C) -> Result<()> {
        match self {
            StrongMaxAnswer::Left(m) if &m.code == u => m.replay(x),
            StrongMaxAnswer::Right(h) => {
                let upper = crate::ideal::principal_arc(x.descriptor_arc(), v.clone())?;
                h.replay(&upper, x)
            }
            _ => Err(fail("strong-maximality answer does not match its query")),
        }
    }
}

// ---- JSON ---------------------------------------------------------------

fn member_parts<B: BasisDescriptor>(basis: &B, m: &MemberEvidence<B::Code>) -> (String, usize) {
    (basis.serialize(&m.code), m.index)
}

/// Schema of a standalone refutation `↓target ⋢ y`.
pub fn refute_json<B: BasisDescriptor>(basis: &B, r: &RefuteBelowWitness<B::Code>, y_label: &str) -> Value {
    let evidence = match &r.evidence {
        NonMember::Incompatible { anchor } => json!({
            "evidence": "incompatible",
            "anchor": basis.serialize(&anchor.code),
            "anchor_index": anchor.index,
        }),
        NonMember::Decided => json!({ "evidence": "decided" }),
    };
    json!({
        "kind": "refute",
        "direction": [basis.serialize(&r.target), y_label],
        "witness": basis.serialize(&r.probe),
        "replay_fuel": r.replay_fuel(),
        "refutation": evidence,
    })
}

pub fn not_not_below_json<B: BasisDescriptor>(basis: &B, c: &NotNotBelowCert<B::Code>, dir: [&str; 2]) -> Value {
    let (witness, index) = member_parts(basis, &c.member);
    json!({
        "kind": "notnotbelow",
        "direction": dir,
        "witness": witness,
        "member_index": index,
        "replay_fuel": c.replay_fuel(),
        "refutation": refute_json(basis, &c.refutation, dir[1]),
    })
}

pub fn apart_json<B: BasisDescriptor>(basis: &B, c: &ApartCert<B::Code>, dir: [&str; 2]) -> Value {
    let (witness, index) = member_parts(basis, &c.inner.member);
    let refuted = match c.orientation {
        Orientation::Forward => dir[1],
        Orientation::Backward => dir[0],
    };
    json!({
        "kind": "apart",
        "direction": dir,
        "orientation": c.orientation.as_str(),
        "witness": witness,
        "member_index": index,
        "replay_fuel": c.replay_fuel(),
        "refutation": refute_json(basis, &c.inner.refutation, refuted),
    })
}

pub fn hausdorff_json<B: BasisDescriptor>(basis: &B, c: &HausdorffCert<B::Code>, dir: [&str; 2]) -> Value {
    json!({
        "kind": "hausdorff",
        "direction": dir,
        "witness": [basis.serialize(&c.left.code), basis.serialize(&c.right.code)],
        "member_index": [c.left.index, c.right.index],
        "replay_fuel": c.replay_fuel(),
        "refutation": Value::Null,
    })
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.get(name).ok_or_else(|| Error::Parse(format!("certificate lacks field `{name}`")))
}

fn str_field<'a>(v: &'a Value, name: &str) -> Result<&'a str> {
    field(v, name)?
        .as_str()
        .ok_or_else(|| Error::Parse(format!("field `{name}` is not a string")))
}

fn usize_of(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| Error::Parse(format!("`{what}` is not a natural number")))
}

fn expect_kind(v: &Value, kind: &str) -> Result<()> {
    let found = str_field(v, "kind")?;
    if found == kind {
        Ok(())
    } else {
        Err(Error::Parse(format!("expected a `{kind}` certificate, found `{found}`")))
    }
}

pub fn refute_from_json<B: BasisDescriptor>(basis: &B, v: &Value) -> Result<RefuteBelowWitness<B::Code>> {
    expect_kind(v, "refute")?;
    let dir = field(v, "direction")?
        .as_array()
        .filter(|d| d.len() == 2)
        .ok_or_else(|| Error::Parse("`direction` must be a pair".into()))?;
    let target = basis.parse(dir[0].as_str().ok_or_else(|| Error::Parse("bad refutation target".into()))?)?;
    let probe = basis.parse(str_field(v, "witness")?)?;
    let ev = field(v, "refutation")?;
    let evidence = match str_field(ev, "evidence")? {
        "incompatible" => NonMember::Incompatible {
            anchor: MemberEvidence {
                code: basis.parse(str_field(ev, "anchor")?)?,
                index: usize_of(field(ev, "anchor_index")?, "anchor_index")?,
            },
        },
        "decided" => NonMember::Decided,
        other => return Err(Error::Parse(format!("unknown evidence `{other}`"))),
    };
    Ok(RefuteBelowWitness { target, probe, evidence })
}

fn nnb_parts<B: BasisDescriptor>(basis: &B, v: &Value) -> Result<NotNotBelowCert<B::Code>> {
    let member = MemberEvidence {
        code: basis.parse(str_field(v, "witness")?)?,
        index: usize_of(field(v, "member_index")?, "member_index")?,
    };
    let refutation = refute_from_json(basis, field(v, "refutation")?)?;
    Ok(NotNotBelowCert { member, refutation })
}

pub fn not_not_below_from_json<B: BasisDescriptor>(basis: &B, v: &Value) -> Result<NotNotBelowCert<B::Code>> {
    expect_kind(v, "notnotbelow")?;
    nnb_parts(basis, v)
}

pub fn apart_from_json<B: BasisDescriptor>(basis: &B, v: &Value) -> Result<ApartCert<B::Code>> {
    expect_kind(v, "apart")?;
    let orientation = match str_field(v, "orientation")? {
        "forward" => Orientation::Forward,
        "backward" => Orientation::Backward,
        other => return Err(Error::Parse(format!("unknown orientation `{other}`"))),
    };
    Ok(ApartCert { orientation, inner: nnb_parts(basis, v)? })
}

pub fn hausdorff_from_json<B: BasisDescriptor>(basis: &B, v: &Value) -> Result<HausdorffCert<B::Code>> {
    expect_kind(v, "hausdorff")?;
    let codes = field(v, "witness")?
        .as_array()
        .filter(|w| w.len() == 2)
        .ok_or_else(|| Error::Parse("hausdorff witness must be a pair of codes".into()))?;
    let idx = field(v, "member_index")?
        .as_array()
        .filter(|w| w.len() == 2)
        .ok_or_else(|| Error::Parse("hausdorff member_index must be a pair".into()))?;
    let code = |i: usize| -> Result<B::Code> {
        basis.parse(codes[i].as_str().ok_or_else(|| Error::Parse("hausdorff code must be a string".into()))?)
    };
    Ok(HausdorffCert {
        left: MemberEvidence { code: code(0)?, index: usize_of(&idx[0], "member_index")? },
        right: MemberEvidence { code: code(1)?, index: usize_of(&idx[1], "member_index")? },
    })
}

/// Schema of a bare membership witness `code ≪ x`.
pub fn member_json<B: BasisDescriptor>(basis: &B, m: &MemberEvidence<B::Code>, x_label: &str) -> Value {
    json!({
        "kind": "member",
        "direction": [basis.serialize(&m.code), x_label],
        "witness": basis.serialize(&m.code),
        "member_index": m.index,
        "replay_fuel": m.replay_fuel(),
        "refutation": Value::Null,
    })
}

pub fn member_from_json<B: BasisDescriptor>(basis: &B, v: &Value) -> Result<MemberEvidence<B::Code>> {
    expect_kind(v, "member")?;
    Ok(MemberEvidence {
        code: basis.parse(str_field(v, "witness")?)?,
        index: usize_of(field(v, "member_index")?, "member_index")?,
    })
}

/// `{"kind": "sharp", "answer": "left"|"right", "query": [a, b], "certificate": …}`.
pub fn sharp_json<B: BasisDescriptor>(basis: &B, ans: &SharpAnswer<B::Code>, query: [&B::Code; 2], x_label: &str) -> Value {
    let (answer, cert, fuel) = match ans {
        SharpAnswer::Left(m) => ("left", member_json(basis, m, x_label), m.replay_fuel()),
        SharpAnswer::Right(r) => ("right", refute_json(basis, r, x_label), r.replay_fuel()),
    };
    json!({
        "kind": "sharp",
        "answer": answer,
        "query": [basis.serialize(query[0]), basis.serialize(query[1])],
        "replay_fuel": fuel,
        "certificate": cert,
    })
}

pub fn sharp_from_json<B: BasisDescriptor>(basis: &B, v: &Value) -> Result<SharpAnswer<B::Code>> {
    expect_kind(v, "sharp")?;
    let cert = field(v, "certificate")?;
    match str_field(v, "answer")? {
        "left" => Ok(SharpAnswer::Left(member_from_json(basis, cert)?)),
        "right" => Ok(SharpAnswer::Right(refute_from_json(basis, cert)?)),
        other => Err(Error::Parse(format!("unknown sharp answer `{other}`"))),
    }
}

/// `{"kind": "strongmax", "answer": "left"|"right", "query": [u, v], "certificate": …}`;
/// a right answer separates `↓v` from `x`.
pub fn strongmax_json<B: BasisDescriptor>(
    basis: &B,
    ans: &StrongMaxAnswer<B::Code>,
    query: [&B::Code; 2],
    x_label: &str,
) -> Value {
    let v_label = basis.serialize(query[1]);
    let (answer, cert, fuel) = match ans {
        StrongMaxAnswer::Left(m) => ("left", member_json(basis, m, x_label), m.replay_fuel()),
        StrongMaxAnswer::Right(h) => ("right", hausdorff_json(basis, h, [&v_label, x_label]), h.replay_fuel()),
    };
    json!({
        "kind": "strongmax",
        "answer": answer,
        "query": [basis.serialize(query[0]), v_label],
        "replay_fuel": fuel,
        "certificate": cert,
    })
}

pub fn strongmax_from_json<B: BasisDescriptor>(basis: &B, v: &Value) -> Result<StrongMaxAnswer<B::Code>> {
    expect_kind(v, "strongmax")?;
    let cert = field(v, "certificate")?;
    match str_field(v, "answer")? {
        "left" => Ok(StrongMaxAnswer::Left(member_from_json(basis, cert)?)),
        "right" => Ok(StrongMaxAnswer::Right(hausdorff_from_json(basis, cert)?)),
        other => Err(Error::Parse(format!("unknown strong-maximality answer `{other}`"))),
    }
}

/// The `[a, b]` pair of a sharp or strong-maximality answer.
pub fn query_from_json<B: BasisDescriptor>(basis: &B, v: &Value) -> Result<(B::Code, B::Code)> {
    let q = field(v, "query")?
        .as_array()
        .filter(|q| q.len() == 2)
        .ok_or_else(|| Error::Parse("`query` must be a pair of codes".into()))?;
    let code = |i: usize| basis.parse(q[i].as_str().ok_or_else(|| Error::Parse("query code must be a string".into()))?);
    Ok((code(0)?, code(1)?))
}
