//! Lower reals: rounded ideals of `(ℚ, <)`, i.e. rounded lower cuts `L`.

use std::sync::Arc;

use num_traits::Signed;

use crate::cert::{MemberEvidence, NonMember, RefuteBelowWitness, SharpAnswer};
use crate::error::{Error, Result};
use crate::ideal::{decidable_sharp, find_member, memo_chain, ApproxElement, SharpFn};
use crate::order::rational::{cmp_square, fmt_q, half_pow, midpoint, parse_q, q_int, rational_at, sqrt_floor_scaled, Q};
use crate::order::{least_fuel, BasisDescriptor, Fuel};

/// `(ℚ, <)`. Not pointed: ℚ has no least element.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RationalBasis;

impl BasisDescriptor for RationalBasis {
    type Code = Q;

    fn id(&self) -> String {
        "lower".into()
    }

    fn enumerate(&self, index: usize) -> Q {
        rational_at(index)
    }

    fn prec(&self, a: &Q, b: &Q) -> bool {
        a < b
    }

    fn is_reflexive(&self) -> bool {
        false
    }

    fn serialize(&self, code: &Q) -> String {
        fmt_q(code)
    }

    fn parse(&self, text: &str) -> Result<Q> {
        parse_q(text)
    }

    fn interpolate(&self, a: &Q, b: &Q) -> Result<Q> {
        if a < b {
            Ok(midpoint(a, b))
        } else {
            Err(Error::PreconditionViolated(format!("{} < {} does not hold", fmt_q(a), fmt_q(b))))
        }
    }

    fn approach_below(&self, b: &Q, k: usize) -> Q {
        b - half_pow(k)
    }

    fn delta_waybelow(&self, a: &Q, b: &Q) -> Option<bool> {
        Some(a < b)
    }

    fn delta_below(&self, a: &Q, b: &Q) -> Option<bool> {
        Some(a <= b)
    }

    fn bounded_pair(&self, _a: &Q, _b: &Q) -> Option<bool> {
        Some(true)
    }

    fn refine(&self, _a: &Q, _b: &Q) -> Option<bool> {
        Some(true)
    }

    fn join(&self, a: &Q, b: &Q) -> Option<Option<Q>> {
        Some(Some(a.max(b).clone()))
    }

    fn jointly_bounded(&self, _codes: &[Q]) -> Option<bool> {
        Some(true)
    }
}

fn basis() -> Arc<RationalBasis> {
    Arc::new(RationalBasis)
}

/// `L = {p | p < r}`.
pub fn lower_rational(r: Q) -> ApproxElement<RationalBasis> {
    let label = format!("lower:rat:{}", fmt_q(&r));
    let top = r.clone();
    ApproxElement::from_chain(basis(), label, Arc::new(move |n| &r - half_pow(n)))
        .with_decision(Arc::new(move |p: &Q| p < &top))
        .with_sharp_oracle(Arc::new(decidable_sharp))
}

/// `L = {p | p < 0 ∨ p² < n}`.
pub fn lower_sqrt(n: u64) -> ApproxElement<RationalBasis> {
    let label = format!("lower:sqrt:{n}");
    let chain = memo_chain(sqrt_floor_scaled(n, 2, 0) - q_int(1), move |_, k| {
        sqrt_floor_scaled(n, 2, k + 1) - half_pow(k + 1)
    });
    ApproxElement::from_chain(basis(), label, chain)
        .with_decision(Arc::new(move |p: &Q| p.is_negative() || cmp_square(p, n) == std::cmp::Ordering::Less))
        .with_sharp_oracle(Arc::new(decidable_sharp))
}

/// `L = {p | p < 0} ∪ {p | p < 1 ∧ flag}` for a flag observed in stages:
/// `flag(n)` reports whether the flag has been confirmed by stage `n` and
/// must be monotone in `n`. Membership of `p ∈ [0, 1)` is only
/// semi-decidable, so no decision or sharpness oracle is attached.
pub fn lower_flagged(label: impl Into<String>, flag: impl Fn(usize) -> bool + Send + Sync + 'static) -> ApproxElement<RationalBasis> {
    ApproxElement::from_chain(
        basis(),
        label,
        Arc::new(move |n| if flag(n) { q_int(1) - half_pow(n) } else { -half_pow(n) }),
    )
}

/// The sharpness oracle of a decidable lower real: `p ∈ L` answers left,
/// otherwise `p` refutes `↓q ⊑ L`.
pub fn lower_real_sharp_oracle(l: &ApproxElement<RationalBasis>) -> Result<SharpFn<RationalBasis>> {
    if l.is_decidable() {
        Ok(Arc::new(decidable_sharp))
    } else {
        Err(Error::NotDecidable(l.label().to_string()))
    }
}

/// Outcome of a locatedness query `p < q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Located {
    /// `p ∈ L`.
    Lower(MemberEvidence<Q>),
    /// `q ∈ U`: `s < q` with `s ∉ L`.
    Upper { witness: Q },
}

/// Locatedness decision `p ∈ L ∨ q ∈ U` read off a sharpness oracle.
pub fn locate(l: &ApproxElement<RationalBasis>, p: &Q, q: &Q) -> Result<Located> {
    let oracle = l
        .sharp_oracle()
        .ok_or_else(|| Error::MissingOracle(l.label().to_string(), "sharpness"))?;
    if p >= q {
        return Err(Error::PreconditionViolated(format!("locate needs {} < {}", fmt_q(p), fmt_q(q))));
    }
    Ok(match oracle(l, p, q)? {
        SharpAnswer::Left(m) => Located::Lower(m),
        SharpAnswer::Right(r) => Located::Upper { witness: r.probe },
    })
}

/// One side of a locatedness decision for `p < q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Side {
    /// `p ∈ L`.
    Lower,
    /// `q ∈ U`, because `witness < q` and `witness ∉ L`.
    Upper(Q),
}

/// Sharpness oracle built from a locatedness decision. Right answers carry
/// the locator's witness, so the element needs a membership decision to
/// replay them.
pub fn sharp_from_locator(
    locator: impl Fn(&Q, &Q) -> Side + Send + Sync + 'static,
) -> SharpFn<RationalBasis> {
    Arc::new(move |l: &ApproxElement<RationalBasis>, a: &Q, b: &Q| {
        if a >= b {
            return Err(Error::PreconditionViolated("sharpness query needs a < b".into()));
        }
        match locator(a, b) {
            Side::Lower => Ok(SharpAnswer::Left(find_member(l, a)?)),
            Side::Upper(s) if &s < b => {
                Ok(SharpAnswer::Right(RefuteBelowWitness { target: b.clone(), probe: s, evidence: NonMember::Decided }))
            }
            Side::Upper(s) => Err(Error::OracleFailure(format!("locator witness {} is not below {}", fmt_q(&s), fmt_q(b)))),
        }
    })
}

/// Semi-decision for `q ∈ U = {q | ∃ s ∉ L, s < q}`, returning the witness `s`.
///
/// Candidates are refutation probes of `↓q ⊑ L` and enumerated rationals below
/// `q` whose non-membership is decided.
pub fn upper_from_lower(l: &ApproxElement<RationalBasis>, q: &Q, fuel: Fuel) -> Result<Option<Q>> {
    least_fuel(fuel, |f| {
        if let Some(r) = l.refute_below(q, f)? {
            return Ok(Some(r.probe));
        }
        Ok((0..f.get())
            .map(rational_at)
            .find(|s| s < q && l.decide(s) == Some(false)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::rational::q;

    #[test]
    fn sqrt_chain_increases_below_root() {
        let l = lower_sqrt(2);
        for n in 0..60 {
            let (a, b) = (l.chain(n), l.chain(n + 1));
            assert!(a < b);
            assert_eq!(l.decide(&b), Some(true));
        }
    }

    #[test]
    fn sharp_oracle_examples() {
        let half = lower_rational(q(1, 2));
        let oracle = lower_real_sharp_oracle(&half).unwrap();
        assert!(matches!(oracle(&half, &q(0, 1), &q(1, 1)).unwrap(), SharpAnswer::Left(_)));
        match oracle(&half, &q(1, 2), &q(1, 1)).unwrap() {
            SharpAnswer::Right(r) => assert_eq!(r.probe, q(1, 2)),
            other => panic!("{other:?}"),
        }
        let root = lower_sqrt(2);
        let oracle = lower_real_sharp_oracle(&root).unwrap();
        assert!(matches!(oracle(&root, &q(14, 10), &q(15, 10)).unwrap(), SharpAnswer::Left(_)));
    }

    #[test]
    fn upper_set_examples() {
        let half = lower_rational(q(1, 2));
        assert!(upper_from_lower(&half, &q(1, 1), Fuel::new(8)).unwrap().is_some());
        assert_eq!(upper_from_lower(&half, &q(1, 2), Fuel::new(200)).unwrap(), None);
        let flagged = lower_flagged("flagged", |_| false);
        assert_eq!(upper_from_lower(&flagged, &q(1, 2), Fuel::new(200)).unwrap(), None);
        assert!(matches!(lower_real_sharp_oracle(&flagged), Err(Error::NotDecidable(_))));
    }
}
