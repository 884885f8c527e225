//! Exhaustive check of the order-theoretic and topological facts about
//! apartness on one finite poset.

use serde::Serialize;

use crate::error::Result;
use crate::finite::oracle::{describe, FiniteOracle};
use crate::finite::poset::{FinitePoset, Mask};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub size: usize,
    pub scott_opens: usize,
    pub directed_subsets: usize,
    pub maximal: Vec<String>,
    pub strongly_maximal: Vec<String>,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Recorder<'a> {
    poset: &'a FinitePoset,
    checks: Vec<CheckOutcome>,
}

impl Recorder<'_> {
    fn check(&mut self, id: &'static str, title: &'static str, first_failure: Option<String>) {
        self.checks.push(CheckOutcome { id, title, passed: first_failure.is_none(), counterexample: first_failure });
    }

    fn l(&self, i: usize) -> &str {
        self.poset.label(i)
    }

    fn set(&self, m: Mask) -> String {
        describe(self.poset, m)
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |x| (0..n).map(move |y| (x, y)))
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
}

/// Runs every check on `poset`; fails only if the poset exceeds `cap`.
pub fn theorem_suite(poset: &FinitePoset, cap: usize) -> Result<SuiteReport> {
    let o = FiniteOracle::new(poset, cap)?;
    let n = poset.size();
    let all = o.all();
    let mut r = Recorder { poset, checks: Vec::new() };

    // (a)
    let bad = o.opens().iter().copied().find(|&u| !o.is_closed(all & !u));
    r.check("a", "complement of a Scott open is Scott closed", bad.map(|u| format!("open {}", r.set(u))));

    // (b)
    let bad = (0..n).find_map(|y| {
        let not_below = (0..n).filter(|&x| !o.leq(x, y)).fold(0, |m, x| m | 1 << x);
        let nnb = (0..n).filter(|&x| o.not_not_below_via_basis(x, y)).fold(0, |m, x| m | 1 << x);
        (o.interior(not_below) != nnb).then(|| format!("y = {}", r.l(y)))
    });
    r.check("b", "interior of {x | x ⋢ y} is {x | x ⋢̸̸ y}", bad);

    // (c)
    let bad = pairs(n).find_map(|(x, y)| {
        let specializes = o.opens().iter().all(|&u| u & (1 << x) == 0 || u & (1 << y) != 0);
        (specializes != o.leq(x, y)).then(|| format!("({}, {})", r.l(x), r.l(y)))
    });
    r.check("c", "specialization order is ⊑", bad);

    // (d)
    let mut bad = None;
    let mut nearly_open: Vec<Mask> = Vec::new();
    for a in 0..=all {
        let apart_compl = (0..n)
            .filter(|&x| r.poset.members(a).all(|y| o.apart(x, y)))
            .fold(0, |m, x| m | 1 << x);
        let logical_compl = all & !a;
        if o.interior(logical_compl) != o.interior(apart_compl) {
            bad.get_or_insert_with(|| format!("interiors of ¬A and ∼A differ for A = {}", r.set(a)));
        }
        nearly_open.push(o.interior(apart_compl));
    }
    nearly_open.sort_unstable();
    nearly_open.dedup();
    if nearly_open != o.opens() {
        bad.get_or_insert_with(|| "nearly open sets differ from Scott opens".into());
    }
    r.check("d", "Scott open iff nearly open", bad);

    // (e)
    let bad = (0..n).find_map(|x| {
        let algebraic = (0..n).filter(|&c| o.way_below(c, c)).all(|c| o.leq(c, x) || !o.leq(c, x));
        (!o.sharp(x) || o.sharp(x) != algebraic).then(|| r.l(x).to_string())
    });
    r.check("e", "every element is sharp, matching the compact-element criterion", bad);

    // (f)
    let mut bad = pairs(n)
        .find(|&(x, y)| !o.apart(x, y) && x != y)
        .map(|(x, y)| format!("tightness fails on ({}, {})", r.l(x), r.l(y)));
    if bad.is_none() {
        bad = pairs(n)
            .find(|&(x, y)| o.sharp(y) && !o.not_not_below(x, y) && !o.leq(x, y))
            .map(|(x, y)| format!("¬(x ⋢̸̸ y) without x ⊑ y on ({}, {})", r.l(x), r.l(y)));
    }
    if bad.is_none() {
        bad = triples(n)
            .find(|&(x, y, z)| o.sharp(z) && o.apart(x, y) && !o.apart(x, z) && !o.apart(y, z))
            .map(|(x, y, z)| format!("cotransitivity fails on ({}, {}, {})", r.l(x), r.l(y), r.l(z)));
    }
    r.check("f", "apartness is tight and cotransitive", bad);

    // (g)
    let mut bad = pairs(n)
        .find(|&(x, y)| o.hausdorff(x, y) != o.hausdorff_via_basis(x, y))
        .map(|(x, y)| format!("Hausdorff criterion differs on ({}, {})", r.l(x), r.l(y)));
    if bad.is_none() {
        bad = (0..n).find_map(|x| {
            let answers = [o.strongly_maximal(x), o.smyth_maximal(x), o.lawson_criterion(x)];
            (answers[0] != answers[1] || answers[0] != answers[2]).then(|| {
                format!("{}: strong {}, Smyth {}, Lawson {}", r.l(x), answers[0], answers[1], answers[2])
            })
        });
    }
    r.check("g", "strongly maximal = Smyth maximal = Lawson criterion", bad);

    let bad = (0..n).find_map(|x| {
        let full = o.sharp(x) && o.lawson_all_intersections(x);
        (full != o.strongly_maximal(x)).then(|| r.l(x).to_string())
    });
    r.check("g+", "Lawson criterion over all finite intersections", bad);

    // (h)
    let bad = (0..n)
        .find(|&x| o.strongly_maximal(x) && !(poset.is_maximal(x) && o.sharp(x)))
        .map(|x| r.l(x).to_string());
    r.check("h", "strongly maximal implies maximal and sharp", bad);

    // (i)
    let bad = pairs(n)
        .find(|&(x, y)| o.apart(x, y) && o.leq(x, y) && x == y)
        .map(|(x, y)| format!("({}, {})", r.l(x), r.l(y)));
    r.check("i", "apart and below implies strictly below", bad);

    // (j): the basis of compact elements
    let basis = (0..n).filter(|&c| o.way_below(c, c)).fold(0, |m, c| m | 1 << c);
    let bad = o.opens().iter().copied().find(|&u| u != 0 && u & basis == 0).map(|u| r.set(u));
    r.check("j", "every inhabited Scott open meets the basis", bad);

    // (k): ≪ between opens in the finite lattice of opens is inclusion
    let bad = (0..n).find_map(|x| {
        let located = o.opens().iter().all(|&s| {
            o.opens().iter().all(|&t| s & !t != 0 || t & (1 << x) != 0 || s & (1 << x) == 0)
        });
        (located != o.sharp(x)).then(|| r.l(x).to_string())
    });
    r.check("k", "sharp iff the neighbourhood filter is located", bad);

    // (l)
    let strong: Vec<usize> = (0..n).filter(|&x| o.strongly_maximal(x)).collect();
    let strong_mask = strong.iter().fold(0, |m, &x| m | 1 << x);
    let mut closed_traces: Vec<Mask> = o.opens().iter().map(|&u| (all & !u) & strong_mask).collect();
    closed_traces.sort_unstable();
    closed_traces.dedup();
    let mut bad = None;
    for &x in &strong {
        for &y in &strong {
            if o.apart(x, y) != o.hausdorff(x, y) {
                bad.get_or_insert_with(|| format!("Hausdorff fails on ({}, {})", r.l(x), r.l(y)));
            }
        }
        // shrinking the open neighbourhood only helps, so the least one decides
        let w = o.least_neighbourhood(x) & strong_mask;
        for &u in o.opens().iter().filter(|&&u| u & (1 << x) != 0) {
            let regular = closed_traces.iter().any(|&c| w & !c == 0 && c & !(u & strong_mask) == 0);
            if !regular {
                bad.get_or_insert_with(|| format!("no closed neighbourhood of {} inside {}", r.l(x), r.set(u)));
            }
        }
    }
    r.check("l", "strongly maximal subspace is Hausdorff and regular", bad);

    // positivity: in a pointed poset, apart from ⊥ exactly when different from ⊥
    if let Some(bot) = poset.bottom() {
        let bad = (0..n).find(|&x| o.apart(x, bot) != (x != bot)).map(|x| r.l(x).to_string());
        r.check("p", "apart from ⊥ iff different from ⊥", bad);
    }

    Ok(SuiteReport {
        size: n,
        scott_opens: o.opens().len(),
        directed_subsets: o.directed().len(),
        maximal: (0..n).filter(|&x| poset.is_maximal(x)).map(|x| poset.label(x).to_string()).collect(),
        strongly_maximal: strong.iter().map(|&x| poset.label(x).to_string()).collect(),
        checks: r.checks,
    })
}
