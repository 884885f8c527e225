//! Certificate-producing searches for `⋢̸̸`, intrinsic apartness, Hausdorff
//! separation, and the oracle-driven operations on sharp and strongly
//! maximal elements.

use crate::cert::{
    ApartCert, HausdorffCert, MemberEvidence, NonMember, NotNotBelowCert, Orientation, RefuteBelowWitness,
    SharpAnswer, StrongMaxAnswer,
};
use crate::error::{Error, Result};
use crate::ideal::{
    self, not_not_below_at, principal, way_below, ApproxElement, BelowEvidence, Code,
};
use crate::order::{least_fuel, BasisDescriptor, Fuel, Semi};

/// `x ⋢̸̸ y`; `None` means unknown at this fuel, never "below".
pub fn not_not_below<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
    fuel: Fuel,
) -> Result<Option<NotNotBelowCert<Code<B>>>> {
    ideal::search_not_not_below(x, y, fuel)
}

/// `x # y`, trying `x ⋢̸̸ y` then `y ⋢̸̸ x` at each fuel level.
pub fn intrinsic_apart<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
    fuel: Fuel,
) -> Result<Option<ApartCert<Code<B>>>> {
    x.same_basis(y)?;
    least_fuel(fuel, |f| {
        if let Some(inner) = not_not_below_at(x, y, f)? {
            return Ok(Some(ApartCert { orientation: Orientation::Forward, inner }));
        }
        Ok(not_not_below_at(y, x, f)?.map(|inner| ApartCert { orientation: Orientation::Backward, inner }))
    })
}

/// The least element `↓⊥` of a pointed basis.
pub fn bottom_element<B: BasisDescriptor>(basis: &std::sync::Arc<B>) -> Result<ApproxElement<B>> {
    let bot = basis.bottom().ok_or_else(|| Error::MissingDeltaBot(basis.id()))?;
    principal(basis, bot)
}

/// `x # ⊥` from a chain entry that δ⊥ reports as non-bottom. The certificate
/// is oriented from `x` to [`bottom_element`].
pub fn apart_from_bottom<B: BasisDescriptor>(x: &ApproxElement<B>, fuel: Fuel) -> Result<Option<ApartCert<Code<B>>>> {
    let bot = bottom_element(x.descriptor_arc())?;
    let basis = x.descriptor();
    least_fuel(fuel, |f| {
        for i in 0..f.get() {
            let b = x.chain(i);
            match basis.delta_bot(&b) {
                None => return Err(Error::MissingDeltaBot(basis.id())),
                Some(true) => continue,
                Some(false) => {}
            }
            if let Some(refutation) = bot.refute_below(&b, f)? {
                let inner = NotNotBelowCert { member: MemberEvidence { code: b, index: i }, refutation };
                return Ok(Some(ApartCert { orientation: Orientation::Forward, inner }));
            }
        }
        Ok(None)
    })
}

fn sharp_oracle_of<B: BasisDescriptor>(z: &ApproxElement<B>) -> Result<&crate::ideal::SharpFn<B>> {
    z.sharp_oracle()
        .ok_or_else(|| Error::MissingOracle(z.label().to_string(), "sharpness"))
}

/// Asks `x`'s sharpness oracle about `a ≺ b` and replays the answer.
pub fn sharp_query<B: BasisDescriptor>(x: &ApproxElement<B>, a: &Code<B>, b: &Code<B>) -> Result<SharpAnswer<Code<B>>> {
    let basis = x.descriptor();
    basis.validate(a)?;
    basis.validate(b)?;
    if !basis.prec(a, b) {
        return Err(Error::PreconditionViolated(format!(
            "sharpness query needs {} ≺ {}",
            basis.serialize(a),
            basis.serialize(b)
        )));
    }
    let answer = sharp_oracle_of(x)?(x, a, b)?;
    answer
        .replay(x, a, b)
        .map_err(|e| Error::OracleFailure(format!("sharpness oracle of {}: {e}", x.label())))?;
    Ok(answer)
}

/// Asks `x`'s strong-maximality oracle about `u ≺ v` and replays the answer.
pub fn strongmax_query<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    u: &Code<B>,
    v: &Code<B>,
) -> Result<StrongMaxAnswer<Code<B>>> {
    let basis = x.descriptor();
    basis.validate(u)?;
    basis.validate(v)?;
    if !basis.prec(u, v) {
        return Err(Error::PreconditionViolated(format!(
            "strong-maximality query needs {} ≺ {}",
            basis.serialize(u),
            basis.serialize(v)
        )));
    }
    let oracle = x
        .strongmax_oracle()
        .ok_or_else(|| Error::MissingOracle(x.label().to_string(), "strong-maximality"))?;
    let answer = oracle(x, u, v)?;
    answer
        .replay(x, u, v)
        .map_err(|e| Error::OracleFailure(format!("strong-maximality oracle of {}: {e}", x.label())))?;
    Ok(answer)
}

/// Sharpness oracle obtained from a strong-maximality oracle: a Hausdorff
/// separation of `↓b` from `x` refutes `↓b ⊑ x` through its left code.
pub fn sharp_from_strongmax<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    a: &Code<B>,
    b: &Code<B>,
) -> Result<SharpAnswer<Code<B>>> {
    let oracle = x
        .strongmax_oracle()
        .ok_or_else(|| Error::MissingOracle(x.label().to_string(), "strong-maximality"))?;
    Ok(match oracle(x, a, b)? {
        StrongMaxAnswer::Left(m) => SharpAnswer::Left(m),
        StrongMaxAnswer::Right(h) => SharpAnswer::Right(RefuteBelowWitness {
            target: b.clone(),
            probe: h.left.code,
            evidence: NonMember::Incompatible { anchor: h.right },
        }),
    })
}

/// Which new apartness [`cotransit`] produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cotransit<C> {
    /// `x # z`, oriented from `x` to `z`.
    WithX(ApartCert<C>),
    /// `y # z`, oriented from `y` to `z`.
    WithY(ApartCert<C>),
}

/// From `x # y` and a sharp `z`, produce `x # z` or `y # z`.
///
/// With `b ≪ p` and `↓b ⋢ q` for `{p, q} = {x, y}`, interpolate `b ≺ c` inside
/// `p`'s chain and ask `z` about `b ≺ c`: `b ≪ z` gives `z ⋢̸̸ q`, while
/// `↓c ⋢ z` gives `p ⋢̸̸ z`.
pub fn cotransit<B: BasisDescriptor>(
    cert: &ApartCert<Code<B>>,
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
    z: &ApproxElement<B>,
    fuel: Fuel,
) -> Result<Cotransit<Code<B>>> {
    x.same_basis(y)?;
    x.same_basis(z)?;
    cert.replay(x, y)
        .map_err(|e| Error::PreconditionViolated(format!("input certificate does not replay: {e}")))?;
    let oracle = sharp_oracle_of(z)?;
    let basis = x.descriptor();
    let (p, p_is_x) = match cert.orientation {
        Orientation::Forward => (x, true),
        Orientation::Backward => (y, false),
    };
    let b = &cert.inner.member.code;
    let start = cert.inner.member.index;
    let m = (start..fuel.get().max(start + 2))
        .find(|&m| basis.prec(b, &p.chain(m)))
        .ok_or(Error::FuelExhausted(fuel.get()))?;
    let c = crate::order::interpolate(basis, b, &p.chain(m))?;
    let out = match oracle(z, b, &c)? {
        SharpAnswer::Left(in_z) => {
            // z ⋢̸̸ q, i.e. q # z read backwards
            let inner = NotNotBelowCert { member: in_z, refutation: cert.inner.refutation.clone() };
            let apart = ApartCert { orientation: Orientation::Backward, inner };
            if p_is_x {
                Cotransit::WithY(apart)
            } else {
                Cotransit::WithX(apart)
            }
        }
        SharpAnswer::Right(refutation) => {
            let inner = NotNotBelowCert { member: MemberEvidence { code: c, index: m }, refutation };
            let apart = ApartCert { orientation: Orientation::Forward, inner };
            if p_is_x {
                Cotransit::WithX(apart)
            } else {
                Cotransit::WithY(apart)
            }
        }
    };
    let check = match &out {
        Cotransit::WithX(c) => c.replay(x, z),
        Cotransit::WithY(c) => c.replay(y, z),
    };
    check.map_err(|e| Error::OracleFailure(format!("sharpness oracle of {} gave unusable evidence: {e}", z.label())))?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TightReport<C> {
    /// Every consecutive chain pair of `x` was answered `Left` by `y`'s oracle
    /// and no `x ⋢̸̸ y` certificate exists at this fuel.
    Consistent { pairs_checked: usize },
    /// `x ⋢̸̸ y`, so the pair is not a tightness counterexample.
    Separated(NotNotBelowCert<C>),
}

/// Tightness harness: either `x` looks below `y` through `y`'s sharpness
/// oracle and the certificate search agrees, or a `x ⋢̸̸ y` certificate
/// explains why not.
pub fn tight_consequence<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
    fuel: Fuel,
) -> Result<TightReport<Code<B>>> {
    x.same_basis(y)?;
    let oracle = sharp_oracle_of(y)?;
    if let Some(cert) = not_not_below(x, y, fuel)? {
        return Ok(TightReport::Separated(cert));
    }
    for i in 0..fuel.get() {
        let (a, b) = (x.chain(i), x.chain(i + 1));
        if let SharpAnswer::Right(refutation) = oracle(y, &a, &b)? {
            let cert = NotNotBelowCert { member: MemberEvidence { code: b, index: i + 1 }, refutation };
            return Ok(TightReport::Separated(cert));
        }
    }
    Ok(TightReport::Consistent { pairs_checked: fuel.get() })
}

/// Non-refinable chain entries `a ≪ x`, `b ≪ y`.
///
/// Refinement is inherited downward along `≺`, so it suffices to compare
/// entries at equal depth.
pub fn hausdorff_separated<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
    fuel: Fuel,
) -> Result<Option<HausdorffCert<Code<B>>>> {
    x.same_basis(y)?;
    let basis = x.descriptor();
    least_fuel(fuel, |f| {
        let Some(i) = f.get().checked_sub(1) else { return Ok(None) };
        let (a, b) = (x.chain(i), y.chain(i));
        match basis.refine(&a, &b) {
            None => Err(Error::MissingRefineDecision(basis.id())),
            Some(true) => Ok(None),
            Some(false) => Ok(Some(HausdorffCert {
                left: MemberEvidence { code: a, index: i },
                right: MemberEvidence { code: b, index: i },
            })),
        }
    })
}

/// Disjoint basic opens give `x ⋢̸̸ y`: a chain entry `a' ≻ a` of `x` is
/// refuted in `y` by the probe `a`, which cannot refine with `y`'s code.
pub fn hausdorff_to_apart<B: BasisDescriptor>(
    h: &HausdorffCert<Code<B>>,
    x: &ApproxElement<B>,
    y: &ApproxElement<B>,
) -> Result<ApartCert<Code<B>>> {
    h.replay(x, y)?;
    let basis = x.descriptor();
    let a = &h.left.code;
    let m = if basis.prec(a, &x.chain(h.left.index)) { h.left.index } else { h.left.index + 1 };
    let upper = x.chain(m);
    if !basis.prec(a, &upper) {
        return Err(Error::PreconditionViolated(format!("{} is not below later chain entries", x.label())));
    }
    let refutation = RefuteBelowWitness {
        target: upper.clone(),
        probe: a.clone(),
        evidence: NonMember::Incompatible { anchor: h.right.clone() },
    };
    let inner = NotNotBelowCert { member: MemberEvidence { code: upper, index: m }, refutation };
    Ok(ApartCert { orientation: Orientation::Forward, inner })
}

/// Smyth-form evidence for the pair `u ≺ v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmythWitness<C> {
    /// `d ≪ x` with `u ≺ d` and `d ≠ u`.
    Above { d: MemberEvidence<C> },
    /// `d ≪ x` with `¬(v ⇈ d)`.
    Separated { d: MemberEvidence<C> },
}

impl<C: Clone + Eq> SmythWitness<C> {
    pub fn replay<B: BasisDescriptor<Code = C>>(&self, x: &ApproxElement<B>, u: &C, v: &C) -> Result<()> {
        let basis = x.descriptor();
        match self {
            SmythWitness::Above { d } => {
                d.replay(x)?;
                if basis.prec(u, &d.code) && &d.code != u {
                    Ok(())
                } else {
                    Err(Error::ReplayFailed(format!("{} is not strictly above {}", basis.serialize(&d.code), basis.serialize(u))))
                }
            }
            SmythWitness::Separated { d } => {
                d.replay(x)?;
                match basis.refine(v, &d.code) {
                    Some(false) => Ok(()),
                    Some(true) => Err(Error::ReplayFailed(format!(
                        "{} refines with {}",
                        basis.serialize(v),
                        basis.serialize(&d.code)
                    ))),
                    None => Err(Error::MissingRefineDecision(basis.id())),
                }
            }
        }
    }
}

/// Smyth maximality witness computed from the strong-maximality oracle.
pub fn smyth_maximal_probe<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    u: &Code<B>,
    v: &Code<B>,
    fuel: Fuel,
) -> Result<SmythWitness<Code<B>>> {
    let basis = x.descriptor();
    let witness = match strongmax_query(x, u, v)? {
        StrongMaxAnswer::Left(m) => {
            let from = m.index;
            let index = (from..from + fuel.get().max(2))
                .find(|&i| {
                    let d = x.chain(i);
                    d != *u && basis.prec(u, &d)
                })
                .ok_or(Error::FuelExhausted(fuel.get()))?;
            SmythWitness::Above { d: MemberEvidence { code: x.chain(index), index } }
        }
        StrongMaxAnswer::Right(h) => SmythWitness::Separated { d: h.right },
    };
    witness
        .replay(x, u, v)
        .map_err(|e| Error::OracleFailure(format!("Smyth witness for {}: {e}", x.label())))?;
    Ok(witness)
}

/// Lawson subbasic open.
#[derive(Debug, Clone)]
pub enum LawsonSubbasic<B: BasisDescriptor> {
    /// `↟b`.
    ScottBasic(Code<B>),
    /// `{y | z ⋢̸̸ y}`.
    CoSpecialization(ApproxElement<B>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawsonIn<C> {
    WayBelow(MemberEvidence<C>),
    NotNotBelow(NotNotBelowCert<C>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawsonOut<C> {
    Refuted(RefuteBelowWitness<C>),
    Below(BelowEvidence<C>),
}

pub fn lawson_neighbourhood_member<B: BasisDescriptor>(
    x: &ApproxElement<B>,
    sub: &LawsonSubbasic<B>,
    fuel: Fuel,
) -> Result<Semi<LawsonIn<Code<B>>, LawsonOut<Code<B>>>> {
    Ok(match sub {
        LawsonSubbasic::ScottBasic(b) => match way_below(x, b, fuel)? {
            Semi::Yes(m) => Semi::Yes(LawsonIn::WayBelow(m)),
            Semi::No(r) => Semi::No(LawsonOut::Refuted(r)),
            Semi::Unknown => Semi::Unknown,
        },
        LawsonSubbasic::CoSpecialization(z) => match ideal::below(z, x, fuel)? {
            Semi::No(cert) => Semi::Yes(LawsonIn::NotNotBelow(cert)),
            Semi::Yes(ev) => Semi::No(LawsonOut::Below(ev)),
            Semi::Unknown => Semi::Unknown,
        },
    })
}
