//! Classical ground truth on a finite poset, computed by enumeration.
//!
//! Every relation here is obtained from its definition by scanning subsets:
//! way-below by quantifying over directed subsets, Scott opens as sets
//! inaccessible by directed suprema, `⋢̸̸` by scanning opens. Shortcuts valid
//! on finite posets are computed separately and cross-checked.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::finite::poset::{FinitePoset, Mask};

/// Default size cap for exhaustive checks.
pub const DEFAULT_SIZE_CAP: usize = 12;

pub struct FiniteOracle<'a> {
    poset: &'a FinitePoset,
    directed: Vec<(Mask, usize)>,
    way_below: Vec<Vec<bool>>,
    opens: Vec<Mask>,
    open_set: HashSet<Mask>,
    nnb: Vec<Vec<bool>>,
    least_nbhd: Vec<Mask>,
    refine: Vec<Vec<bool>>,
}

fn bit(i: usize) -> Mask {
    1 << i
}

impl<'a> FiniteOracle<'a> {
    pub fn new(poset: &'a FinitePoset, cap: usize) -> Result<Self> {
        let n = poset.size();
        if n > cap {
            return Err(Error::SizeTooLarge { size: n, limit: cap });
        }
        let directed = directed_subsets(poset);
        let way_below: Vec<Vec<bool>> = (0..n)
            .map(|x| (0..n).map(|y| way_below_scan(poset, &directed, x, y)).collect())
            .collect();
        for x in 0..n {
            for y in 0..n {
                if way_below[x][y] != poset.leq(x, y) {
                    return Err(Error::OracleFailure(format!(
                        "directed-subset scan and the finite shortcut disagree on {} ≪ {}",
                        poset.label(x),
                        poset.label(y)
                    )));
                }
            }
        }
        let opens = scott_opens_checked(poset, &directed)?;
        let open_set: HashSet<Mask> = opens.iter().copied().collect();
        let nnb = (0..n)
            .map(|x| (0..n).map(|y| opens.iter().any(|&u| u & bit(x) != 0 && u & bit(y) == 0)).collect())
            .collect();
        let least_nbhd = (0..n)
            .map(|x| opens.iter().filter(|&&u| u & bit(x) != 0).fold(poset.full(), |acc, &u| acc & u))
            .collect();
        let refine = (0..n)
            .map(|a| (0..n).map(|b| (0..n).any(|z| way_below[a][z] && way_below[b][z])).collect())
            .collect();
        Ok(FiniteOracle { poset, directed, way_below, opens, open_set, nnb, least_nbhd, refine })
    }

    pub fn poset(&self) -> &FinitePoset {
        self.poset
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn all(&self) -> Mask {
        self.poset.full()
    }

    pub fn directed(&self) -> &[(Mask, usize)] {
        &self.directed
    }

    pub fn opens(&self) -> &[Mask] {
        &self.opens
    }

    pub fn is_open(&self, m: Mask) -> bool {
        self.open_set.contains(&m)
    }

    pub fn way_below(&self, x: usize, y: usize) -> bool {
        self.way_below[x][y]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    /// Union of the opens contained in `m`.
    pub fn interior(&self, m: Mask) -> Mask {
        self.opens.iter().filter(|&&u| u & !m == 0).fold(0, |acc, &u| acc | u)
    }

    /// Scott closed: a lower set containing the suprema of its directed subsets.
    pub fn is_closed(&self, c: Mask) -> bool {
        let lower = self.poset.members(c).all(|x| self.poset.down(x) & !c == 0);
        lower && self.directed.iter().all(|&(s, sup)| s & !c != 0 || c & bit(sup) != 0)
    }

    /// `x ⋢̸̸ y` by definition: some open contains `x` but not `y`.
    pub fn not_not_below(&self, x: usize, y: usize) -> bool {
        self.nnb[x][y]
    }

    pub fn nnb_witness(&self, x: usize, y: usize) -> Option<Mask> {
        self.opens.iter().copied().find(|&u| u & bit(x) != 0 && u & bit(y) == 0)
    }

    /// `x ⋢̸̸ y` through basis elements: some `b ≪ x` with `b ⋢ y`.
    pub fn not_not_below_via_basis(&self, x: usize, y: usize) -> bool {
        (0..self.size()).any(|b| self.way_below(b, x) && !self.leq(b, y))
    }

    pub fn apart(&self, x: usize, y: usize) -> bool {
        self.nnb[x][y] || self.nnb[y][x]
    }

    /// `a ⇈ b`: some `z` with `a ≪ z` and `b ≪ z`.
    pub fn refine(&self, a: usize, b: usize) -> bool {
        self.refine[a][b]
    }

    /// Disjoint open neighbourhoods. Every neighbourhood contains the least
    /// one, so these are the candidates to compare.
    pub fn hausdorff(&self, x: usize, y: usize) -> bool {
        self.least_nbhd[x] & self.least_nbhd[y] == 0
    }

    /// Hausdorff separation through non-refinable approximants.
    pub fn hausdorff_via_basis(&self, x: usize, y: usize) -> bool {
        let n = self.size();
        (0..n).any(|a| self.way_below(a, x) && (0..n).any(|b| self.way_below(b, y) && !self.refine(a, b)))
    }

    /// For all `a ≪ b`: `a ≪ x` or `b ⋢ x`.
    pub fn sharp(&self, x: usize) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| !self.way_below(a, b) || self.way_below(a, x) || !self.leq(b, x)))
    }

    /// For all `u ≪ v`: `u ≪ x` or `v` and `x` are Hausdorff separated.
    pub fn strongly_maximal(&self, x: usize) -> bool {
        let n = self.size();
        (0..n).all(|u| (0..n).all(|v| !self.way_below(u, v) || self.way_below(u, x) || self.hausdorff(v, x)))
    }

    /// For all `u ≪ v` some `d ≪ x` has `u ≪ d`, or non-refinable `a ≪ v`, `b ≪ d`.
    pub fn smyth_maximal(&self, x: usize) -> bool {
        let n = self.size();
        (0..n).all(|u| {
            (0..n).all(|v| {
                !self.way_below(u, v)
                    || (0..n).any(|d| self.way_below(d, x) && (self.way_below(u, d) || self.hausdorff_via_basis(v, d)))
            })
        })
    }

    /// Subbasic Lawson opens: the Scott opens and `{y | z ⋢̸̸ y}`.
    pub fn lawson_subbasics(&self) -> Vec<Mask> {
        let mut subs: Vec<Mask> = self.opens.clone();
        for z in 0..self.size() {
            let co = (0..self.size()).filter(|&y| self.nnb[z][y]).fold(0, |m, y| m | bit(y));
            subs.push(co);
        }
        subs.sort_unstable();
        subs.dedup();
        subs
    }

    /// The smallest Scott neighbourhood of `x`: the intersection of all opens containing it.
    pub fn least_neighbourhood(&self, x: usize) -> Mask {
        self.least_nbhd[x]
    }

    /// Does some Scott neighbourhood of `x` fit inside `m`.
    pub fn contains_scott_neighbourhood(&self, x: usize, m: Mask) -> bool {
        self.opens.iter().any(|&u| u & bit(x) != 0 && u & !m == 0)
    }

    /// Every subbasic Lawson neighbourhood of `x`, and every intersection of
    /// two, contains a Scott neighbourhood of `x`.
    pub fn lawson_depth2(&self, x: usize) -> bool {
        let least = self.least_neighbourhood(x);
        let around: Vec<Mask> = self.lawson_subbasics().into_iter().filter(|&s| s & bit(x) != 0).collect();
        around.iter().all(|&s| {
            self.contains_scott_neighbourhood(x, s) && around.iter().all(|&t| least & !(s & t) == 0)
        })
    }

    /// As [`lawson_depth2`](Self::lawson_depth2) for arbitrary finite
    /// intersections, whose smallest member is the intersection of all
    /// subbasics around `x`.
    pub fn lawson_all_intersections(&self, x: usize) -> bool {
        let smallest = self
            .lawson_subbasics()
            .into_iter()
            .filter(|&s| s & bit(x) != 0)
            .fold(self.all(), |acc, s| acc & s);
        self.contains_scott_neighbourhood(x, smallest)
    }

    pub fn lawson_criterion(&self, x: usize) -> bool {
        self.sharp(x) && self.lawson_depth2(x)
    }
}

/// Inhabited subsets whose pairs have upper bounds inside, with their suprema.
pub fn directed_subsets(poset: &FinitePoset) -> Vec<(Mask, usize)> {
    let mut out = Vec::new();
    for s in 1..=poset.full() {
        let members: Vec<usize> = poset.members(s).collect();
        let directed = members
            .iter()
            .all(|&a| members.iter().all(|&b| members.iter().any(|&c| poset.leq(a, c) && poset.leq(b, c))));
        if directed {
            let sup = poset.lub(s).expect("finite directed subsets have a greatest element");
            out.push((s, sup));
        }
    }
    out
}

fn way_below_scan(poset: &FinitePoset, directed: &[(Mask, usize)], x: usize, y: usize) -> bool {
    directed
        .iter()
        .all(|&(s, sup)| !poset.leq(y, sup) || poset.members(s).any(|d| poset.leq(x, d)))
}

fn is_upper(poset: &FinitePoset, m: Mask) -> bool {
    poset.members(m).all(|x| poset.up(x) & !m == 0)
}

fn scott_opens_checked(poset: &FinitePoset, directed: &[(Mask, usize)]) -> Result<Vec<Mask>> {
    let uppers: Vec<Mask> = (0..=poset.full()).filter(|&m| is_upper(poset, m)).collect();
    let inaccessible: Vec<Mask> = uppers
        .iter()
        .copied()
        .filter(|&m| directed.iter().all(|&(s, sup)| m & bit(sup) == 0 || s & m != 0))
        .collect();
    if uppers != inaccessible {
        return Err(Error::OracleFailure("upper sets and Scott opens differ on a finite poset".into()));
    }
    Ok(inaccessible)
}

/// All Scott opens, computed as upper sets and as directed-sup-inaccessible
/// upper sets, cross-checked.
pub fn scott_opens(poset: &FinitePoset) -> Result<Vec<Mask>> {
    scott_opens_checked(poset, &directed_subsets(poset))
}

/// `x ≪ y` by quantifying over directed subsets, cross-checked against `x ⊑ y`.
pub fn way_below_oracle(poset: &FinitePoset, x: usize, y: usize) -> Result<bool> {
    let scanned = way_below_scan(poset, &directed_subsets(poset), x, y);
    if scanned != poset.leq(x, y) {
        return Err(Error::OracleFailure(format!("way-below scan disagrees with ⊑ on ({x}, {y})")));
    }
    Ok(scanned)
}

/// A Scott open containing one point and missing the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeparatingOpen {
    pub open: Mask,
    /// `true` when the open contains the first point.
    pub contains_first: bool,
}

pub fn apart_oracle(poset: &FinitePoset, x: usize, y: usize) -> Result<Option<SeparatingOpen>> {
    let opens = scott_opens(poset)?;
    let found = opens.iter().find_map(|&u| {
        let (hx, hy) = (u & bit(x) != 0, u & bit(y) != 0);
        (hx != hy).then_some(SeparatingOpen { open: u, contains_first: hx })
    });
    Ok(found)
}

/// All monotone maps `P → Q` as value tables.
pub fn monotone_maps(dom: &FinitePoset, cod: &FinitePoset) -> Vec<Vec<usize>> {
    let (n, m) = (dom.size(), cod.size());
    let mut out = Vec::new();
    let mut table = vec![0usize; n];
    loop {
        let monotone = (0..n).all(|a| (0..n).all(|b| !dom.leq(a, b) || cod.leq(table[a], table[b])));
        if monotone {
            out.push(table.clone());
        }
        let mut i = 0;
        while i < n {
            table[i] += 1;
            if table[i] < m {
                break;
            }
            table[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
    }
}

/// Labels of a mask, for reports.
pub fn describe(poset: &FinitePoset, m: Mask) -> String {
    let items: Vec<&str> = poset.members(m).map(|i| poset.label(i)).collect();
    format!("{{{}}}", items.join(","))
}
