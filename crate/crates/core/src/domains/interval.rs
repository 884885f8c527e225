//! Partial Dedekind reals: rounded ideals of rational open intervals under
//! strict nesting, with `ι` of located reals given by shrinking interval
//! chains.

use std::sync::Arc;

use num_traits::One;

use crate::cert::{HausdorffCert, MemberEvidence, StrongMaxAnswer};
use crate::error::{Error, Result};
use crate::ideal::{memo_chain, ApproxElement, ChainFn};
use crate::order::rational::{
    fmt_q, half_pow, is_perfect_square, midpoint, parse_q, q_int, rational_at, sqrt_floor_scaled, unpair, Q,
};
use crate::order::BasisDescriptor;
use crate::separation::sharp_from_strongmax;

/// Open interval `(lo, hi)` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Result<Self> {
        if lo < hi {
            Ok(Interval { lo, hi })
        } else {
            Err(Error::InvalidCode(format!("({},{}) is empty", fmt_q(&lo), fmt_q(&hi))))
        }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    /// `lo < r < hi`.
    pub fn contains(&self, r: &Q) -> bool {
        &self.lo < r && r < &self.hi
    }
}

/// `ℚ ×< ℚ` ordered by `(p,q) ≺ (r,s) ⇔ p < r < s < q`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntervalBasis;

impl BasisDescriptor for IntervalBasis {
    type Code = Interval;

    fn id(&self) -> String {
        "interval".into()
    }

    fn enumerate(&self, index: usize) -> Interval {
        let (i, j) = unpair(index);
        let (r, s) = (rational_at(i), rational_at(j));
        match r.cmp(&s) {
            std::cmp::Ordering::Less => Interval { lo: r, hi: s },
            std::cmp::Ordering::Greater => Interval { lo: s, hi: r },
            std::cmp::Ordering::Equal => Interval { hi: &r + Q::one(), lo: r },
        }
    }

    fn prec(&self, a: &Interval, b: &Interval) -> bool {
        a.lo < b.lo && b.hi < a.hi
    }

    fn is_reflexive(&self) -> bool {
        false
    }

    fn serialize(&self, c: &Interval) -> String {
        format!("({},{})", fmt_q(&c.lo), fmt_q(&c.hi))
    }

    fn parse(&self, text: &str) -> Result<Interval> {
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("interval `{text}` must look like (p/q,r/s)")))?;
        let (lo, hi) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("interval `{text}` needs two endpoints")))?;
        Interval::new(parse_q(lo)?, parse_q(hi)?)
    }

    fn validate(&self, c: &Interval) -> Result<()> {
        Interval::new(c.lo.clone(), c.hi.clone()).map(|_| ())
    }

    fn interpolate(&self, a: &Interval, b: &Interval) -> Result<Interval> {
        if !self.prec(a, b) {
            return Err(Error::PreconditionViolated(format!(
                "{} ≺ {} does not hold",
                self.serialize(a),
                self.serialize(b)
            )));
        }
        Ok(Interval { lo: midpoint(&a.lo, &b.lo), hi: midpoint(&b.hi, &a.hi) })
    }

    fn approach_below(&self, b: &Interval, k: usize) -> Interval {
        let pad = b.width() * half_pow(k);
        Interval { lo: &b.lo - &pad, hi: &b.hi + &pad }
    }

    fn delta_waybelow(&self, a: &Interval, b: &Interval) -> Option<bool> {
        Some(self.prec(a, b))
    }

    fn delta_below(&self, a: &Interval, b: &Interval) -> Option<bool> {
        Some(a.lo <= b.lo && b.hi <= a.hi)
    }

    fn bounded_pair(&self, a: &Interval, b: &Interval) -> Option<bool> {
        self.refine(a, b)
    }

    fn refine(&self, a: &Interval, b: &Interval) -> Option<bool> {
        Some(a.lo.clone().max(b.lo.clone()) < a.hi.clone().min(b.hi.clone()))
    }

    fn incompatible_probe(&self, b: &Interval, anchor: &Interval) -> Option<Interval> {
        let half = b.width() / q_int(2);
        if anchor.hi < b.lo {
            Some(Interval { lo: anchor.hi.clone(), hi: &b.hi + half })
        } else if anchor.lo > b.hi {
            Some(Interval { lo: &b.lo - half, hi: anchor.lo.clone() })
        } else {
            None
        }
    }

    fn jointly_bounded(&self, codes: &[Interval]) -> Option<bool> {
        let lo = codes.iter().map(|c| &c.lo).max()?;
        let hi = codes.iter().map(|c| &c.hi).min()?;
        Some(lo < hi)
    }
}

/// A located real as a strictly nested interval chain whose widths obey
/// `width(n) ≤ w0 · 2⁻ⁿ`.
#[derive(Clone)]
pub struct RealPoint {
    label: String,
    w0: Q,
    chain: ChainFn<Interval>,
}

impl std::fmt::Debug for RealPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RealPoint").field("label", &self.label).field("w0", &fmt_q(&self.w0)).finish()
    }
}

/// Entries inspected eagerly when a point is constructed.
const EAGER_CHECK: usize = 64;

impl RealPoint {
    /// Wraps a chain after checking nesting and the width schedule on a prefix.
    pub fn new(label: impl Into<String>, w0: Q, chain: ChainFn<Interval>) -> Result<Self> {
        let point = RealPoint { label: label.into(), w0, chain };
        point.check_schedule(EAGER_CHECK)?;
        Ok(point)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn w0(&self) -> &Q {
        &self.w0
    }

    pub fn interval(&self, n: usize) -> Interval {
        (self.chain)(n)
    }

    pub fn check_schedule(&self, upto: usize) -> Result<()> {
        let basis = IntervalBasis;
        for n in 0..upto {
            self.check_entry(n)?;
            if !basis.prec(&self.interval(n), &self.interval(n + 1)) {
                return Err(Error::ScheduleViolation { index: n, detail: "entries are not strictly nested".into() });
            }
        }
        Ok(())
    }

    fn check_entry(&self, n: usize) -> Result<Interval> {
        let entry = self.interval(n);
        if entry.width() > &self.w0 * half_pow(n) {
            return Err(Error::ScheduleViolation {
                index: n,
                detail: format!("width of {} exceeds {}·2^-{n}", IntervalBasis.serialize(&entry), fmt_q(&self.w0)),
            });
        }
        Ok(entry)
    }

    /// First index whose scheduled width is below `gap`.
    pub fn index_below_width(&self, gap: &Q) -> usize {
        let mut n = 0;
        while &self.w0 * half_pow(n) >= *gap {
            n += 1;
        }
        n
    }

    /// Bisection of `[a, a+1]` driven by `below(m) ⇔ m < x`, published with
    /// padding so that entries nest strictly: `w0 = 2`.
    pub fn bisection(label: impl Into<String>, start: Q, below: impl Fn(&Q) -> bool + Send + Sync + 'static) -> Result<Self> {
        let end = &start + Q::one();
        let cores = memo_chain((start, end), move |(a, b), _| {
            let m = midpoint(a, b);
            if below(&m) {
                (m, b.clone())
            } else {
                (a.clone(), m)
            }
        });
        let chain: ChainFn<Interval> = Arc::new(move |n| {
            let (a, b) = cores(n);
            let pad = half_pow(n + 1);
            Interval { lo: a - &pad, hi: b + pad }
        });
        RealPoint::new(label, q_int(2), chain)
    }

    /// Chain `(r_k − 3β⁻ᵏ, r_k + 3β⁻ᵏ)` from lower approximations with
    /// `r_k ≤ x < r_k + β⁻ᵏ` and `r_k` non-decreasing: `w0 = 6`.
    pub fn from_lower_approximations(
        label: impl Into<String>,
        base: u32,
        approx: impl Fn(usize) -> Q + Send + Sync + 'static,
    ) -> Result<Self> {
        assert!(base >= 2, "approximation base must be at least 2");
        let chain: ChainFn<Interval> = Arc::new(move |k| {
            let r = approx(k);
            let radius = q_int(3) / Q::from_integer(crate::order::rational::pow_int(base, k));
            Interval { lo: &r - &radius, hi: r + radius }
        });
        RealPoint::new(label, q_int(6), chain)
    }

    pub fn rational(r: Q) -> Result<Self> {
        let label = format!("rat:{}", fmt_q(&r));
        let start = Q::from_integer(r.floor().to_integer());
        RealPoint::bisection(label, start, move |m| m <= &r)
    }

    /// `√n` by bisection; `n` must not be a perfect square.
    pub fn sqrt(n: u64) -> Result<Self> {
        if is_perfect_square(n) {
            return Err(Error::PreconditionViolated(format!("{n} is a perfect square; use rat:")));
        }
        let start = sqrt_floor_scaled(n, 2, 0);
        RealPoint::bisection(format!("sqrt:{n}"), start, move |m| {
            crate::order::rational::cmp_square(m, n) == std::cmp::Ordering::Less
        })
    }

    /// `√n` through ternary digit expansions: same real, unrelated chain.
    pub fn sqrt_ternary(n: u64) -> Result<Self> {
        RealPoint::from_lower_approximations(format!("sqrt:{n}~ternary"), 3, move |k| sqrt_floor_scaled(n, 3, k))
    }

    /// `r` through its truncated base-`base` expansions.
    pub fn rational_expansion(r: Q, base: u32) -> Result<Self> {
        let label = format!("rat:{}~base{base}", fmt_q(&r));
        RealPoint::from_lower_approximations(label, base, move |k| {
            let scale = Q::from_integer(crate::order::rational::pow_int(base, k));
            (&r * &scale).floor() / scale
        })
    }
}

/// `ι(x)` with its strong-maximality oracle and the sharpness oracle derived from it.
pub fn iota_real(point: &RealPoint) -> ApproxElement<IntervalBasis> {
    let p = point.clone();
    let strongmax = move |x: &ApproxElement<IntervalBasis>, u: &Interval, v: &Interval| real_strongmax(&p, x, u, v);
    ApproxElement::from_chain(Arc::new(IntervalBasis), point.label.clone(), Arc::clone(&point.chain))
        .with_strongmax_oracle(Arc::new(strongmax))
        .with_sharp_oracle(Arc::new(sharp_from_strongmax))
}

/// Locatedness at work: refine `x` below the gap between `u` and `v`, then
/// either the approximant sits inside `u`, or it misses `v` on one side.
fn real_strongmax(
    point: &RealPoint,
    x: &ApproxElement<IntervalBasis>,
    u: &Interval,
    v: &Interval,
) -> Result<StrongMaxAnswer<Interval>> {
    let basis = IntervalBasis;
    if !basis.prec(u, v) {
        return Err(Error::PreconditionViolated("strong-maximality query needs u ≺ v".into()));
    }
    let gap = (&v.lo - &u.lo).min(&u.hi - &v.hi);
    let n = point.index_below_width(&gap);
    let entry = point.check_entry(n)?;
    if basis.prec(u, &entry) {
        return Ok(StrongMaxAnswer::Left(MemberEvidence { code: u.clone(), index: n }));
    }
    // entry leaves u, so it lies entirely beyond one end of v
    let separated = |k: usize| {
        let c = basis.approach_below(v, k);
        (basis.refine(&c, &entry) == Some(false)).then_some(c)
    };
    let k = (0..approach_steps(&entry, v))
        .find(|&k| separated(k).is_some())
        .ok_or_else(|| Error::OracleFailure(format!("{} approximant overlaps the query", x.label())))?;
    let left = basis.approach_below(v, k);
    Ok(StrongMaxAnswer::Right(HausdorffCert {
        left: MemberEvidence { code: left, index: k },
        right: MemberEvidence { code: entry, index: n },
    }))
}

/// Enough approach steps below `v` to clear any approximant disjoint from `v`'s closure.
fn approach_steps(entry: &Interval, v: &Interval) -> usize {
    let distance = if entry.hi < v.lo { &v.lo - &entry.hi } else { &entry.lo - &v.hi };
    let mut k = 0;
    while v.width() * half_pow(k) >= distance && k < 4096 {
        k += 1;
    }
    k + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::rational::q;

    #[test]
    fn interpolation_example() {
        let a = Interval::new(q_int(0), q_int(1)).unwrap();
        let b = Interval::new(q(1, 4), q(3, 4)).unwrap();
        let c = IntervalBasis.interpolate(&a, &b).unwrap();
        assert_eq!(IntervalBasis.serialize(&c), "(1/8,7/8)");
    }

    #[test]
    fn parse_roundtrip() {
        let c = IntervalBasis.parse("(-1/2,3/4)").unwrap();
        assert_eq!(IntervalBasis.serialize(&c), "(-1/2,3/4)");
        assert!(IntervalBasis.parse("(1/1,1/1)").is_err());
        assert!(IntervalBasis.parse("1/1,2/1").is_err());
    }

    #[test]
    fn bisection_brackets_sqrt2() {
        let p = RealPoint::sqrt(2).unwrap();
        for n in 0..80 {
            let i = p.interval(n);
            assert_eq!(crate::order::rational::cmp_square(&i.lo.clone().max(q_int(0)), 2), std::cmp::Ordering::Less);
            assert_eq!(crate::order::rational::cmp_square(&i.hi, 2), std::cmp::Ordering::Greater);
        }
        p.check_schedule(200).unwrap();
        RealPoint::sqrt_ternary(2).unwrap().check_schedule(200).unwrap();
    }

    #[test]
    fn broken_schedule_is_reported() {
        let chain: ChainFn<Interval> = Arc::new(|n| Interval { lo: q(-1, 1) - q_int(1) / q_int(n as i64 + 1), hi: q_int(1) });
        let err = RealPoint::new("slow", q_int(2), chain).unwrap_err();
        assert!(matches!(err, Error::ScheduleViolation { .. }));
    }
}
