//! Explicit finite posets with subsets as bitmasks.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Subsets of a finite poset, bit `i` for element `i`.
pub type Mask = u64;

/// Hard ceiling imposed by the mask width.
pub const MAX_ELEMENTS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PosetFile {
    elements: Vec<String>,
    leq: Vec<(String, String)>,
}

impl FinitePoset {
    /// Builds the reflexive-transitive closure of `pairs` and checks antisymmetry.
    pub fn new(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidPoset("a poset needs at least one element".into()));
        }
        if n > MAX_ELEMENTS {
            return Err(Error::SizeTooLarge { size: n, limit: MAX_ELEMENTS });
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate element `{l}`")));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("pair ({a},{b}) out of range")));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::from_matrix(labels, leq)
    }

    /// Validates an explicit order matrix without closing it.
    pub fn from_matrix(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::SizeTooLarge { size: n, limit: MAX_ELEMENTS });
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidPoset("order matrix has the wrong shape".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(Error::InvalidPoset(format!("`{}` ≤ `{}` missing", labels[i], labels[i])));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidPoset(format!(
                        "`{}` and `{}` are distinct but below each other",
                        labels[i], labels[j]
                    )));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(Error::InvalidPoset(format!(
                            "transitivity fails on `{}`, `{}`, `{}`",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }
        Ok(FinitePoset { labels, leq })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PosetFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let index: HashMap<&str, usize> = file.elements.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let lookup = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::InvalidPoset(format!("`{l}` is not a listed element")))
        };
        let pairs = file
            .leq
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        FinitePoset::new(file.elements.clone(), &pairs)
    }

    /// Covering pairs only, in element order.
    pub fn to_json(&self) -> String {
        let mut leq = Vec::new();
        for i in 0..self.size() {
            for j in 0..self.size() {
                if self.covers(i, j) {
                    leq.push((self.labels[i].clone(), self.labels[j].clone()));
                }
            }
        }
        serde_json::to_string_pretty(&PosetFile { elements: self.labels.clone(), leq }).expect("poset serializes")
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// `a < b` with nothing strictly between.
    pub fn covers(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b] && (0..self.size()).all(|c| c == a || c == b || !(self.leq[a][c] && self.leq[c][b]))
    }

    pub fn full(&self) -> Mask {
        (1 << self.size()) - 1
    }

    pub fn members(&self, m: Mask) -> impl Iterator<Item = usize> + '_ {
        (0..self.size()).filter(move |&i| m & (1 << i) != 0)
    }

    pub fn up(&self, a: usize) -> Mask {
        (0..self.size()).filter(|&b| self.leq[a][b]).fold(0, |m, b| m | 1 << b)
    }

    pub fn down(&self, a: usize) -> Mask {
        (0..self.size()).filter(|&b| self.leq[b][a]).fold(0, |m, b| m | 1 << b)
    }

    pub fn upper_bounds(&self, m: Mask) -> Mask {
        self.members(m).fold(self.full(), |acc, a| acc & self.up(a))
    }

    /// Least element of a mask, if it has one.
    pub fn least_of(&self, m: Mask) -> Option<usize> {
        self.members(m).find(|&a| self.members(m).all(|b| self.leq[a][b]))
    }

    pub fn greatest_of(&self, m: Mask) -> Option<usize> {
        self.members(m).find(|&a| self.members(m).all(|b| self.leq[b][a]))
    }

    pub fn lub(&self, m: Mask) -> Option<usize> {
        self.least_of(self.upper_bounds(m))
    }

    pub fn bottom(&self) -> Option<usize> {
        self.least_of(self.full())
    }

    pub fn is_maximal(&self, a: usize) -> bool {
        (0..self.size()).all(|b| !self.leq[a][b] || a == b)
    }

    // ---- catalog ----

    fn named(labels: &[&str], pairs: &[(usize, usize)]) -> Self {
        FinitePoset::new(labels.iter().map(|s| s.to_string()).collect(), pairs).expect("catalog poset is valid")
    }

    /// `𝕊 = {⊥ ≤ ⊤}`.
    pub fn sierpinski() -> Self {
        Self::named(&["bot", "top"], &[(0, 1)])
    }

    pub fn chain(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FinitePoset::new(labels, &pairs).expect("chain is valid")
    }

    pub fn antichain(n: usize) -> Self {
        FinitePoset::new((0..n).map(|i| format!("a{i}")).collect(), &[]).expect("antichain is valid")
    }

    /// An `n`-antichain with a new least element.
    pub fn lifted_antichain(n: usize) -> Self {
        let mut labels = vec!["bot".to_string()];
        labels.extend((0..n).map(|i| format!("a{i}")));
        let pairs: Vec<(usize, usize)> = (1..=n).map(|i| (0, i)).collect();
        FinitePoset::new(labels, &pairs).expect("lifted antichain is valid")
    }

    pub fn diamond() -> Self {
        Self::named(&["bot", "a", "b", "top"], &[(0, 1), (0, 2), (1, 3), (2, 3)])
    }

    /// `ℙ`: `⊥ ≤ 0, 1` with `0`, `1` unrelated.
    pub fn three_element() -> Self {
        Self::named(&["bot", "0", "1"], &[(0, 1), (0, 2)])
    }

    /// `𝒫({0..n-1})` under inclusion; element `i` is the set with bitmask `i`.
    pub fn powerset(n: usize) -> Result<Self> {
        if n > 5 {
            return Err(Error::SizeTooLarge { size: n, limit: 5 });
        }
        let labels: Vec<String> = (0..1usize << n)
            .map(|s| {
                let items: Vec<String> = (0..n).filter(|i| s & (1 << i) != 0).map(|i| i.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        let mut pairs = Vec::new();
        for a in 0..1usize << n {
            for b in 0..1usize << n {
                if a & b == a {
                    pairs.push((a, b));
                }
            }
        }
        FinitePoset::new(labels, &pairs)
    }

    /// Builtin catalog by name: `sierpinski`, `P`, `diamond`, `chain:N`,
    /// `antichain:N`, `lifted:N`, `powerset:N`. `None` for other names.
    pub fn builtin(spec: &str) -> Option<Result<Self>> {
        let count = |text: &str| -> Result<usize> {
            let n: usize = text.parse().map_err(|_| Error::Parse(format!("`{text}` is not a size")))?;
            if n == 0 || n > MAX_ELEMENTS {
                return Err(Error::SizeTooLarge { size: n, limit: MAX_ELEMENTS });
            }
            Ok(n)
        };
        Some(match spec.split_once(':') {
            None if spec == "sierpinski" => Ok(Self::sierpinski()),
            None if spec == "P" => Ok(Self::three_element()),
            None if spec == "diamond" => Ok(Self::diamond()),
            Some(("chain", n)) => count(n).map(Self::chain),
            Some(("antichain", n)) => count(n).map(Self::antichain),
            Some(("lifted", n)) => count(n).and_then(|n| {
                if n == MAX_ELEMENTS {
                    Err(Error::SizeTooLarge { size: n + 1, limit: MAX_ELEMENTS })
                } else {
                    Ok(Self::lifted_antichain(n))
                }
            }),
            Some(("powerset", n)) => count(n).and_then(Self::powerset),
            _ => return None,
        })
    }

    /// A builtin name, or else the path of a poset JSON file.
    pub fn load(spec: &str) -> Result<Self> {
        if let Some(p) = Self::builtin(spec) {
            return p;
        }
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("reading poset `{spec}`: {e}")))?;
        Self::from_json(&text)
    }

    /// Random poset: a random DAG on a random linear extension, closed transitively.
    pub fn random<R: Rng>(rng: &mut R, size: usize, density: f64) -> Self {
        let labels: Vec<String> = (0..size).map(|i| format!("p{i}")).collect();
        let mut order: Vec<usize> = (0..size).collect();
        for i in (1..size).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut pairs = Vec::new();
        for i in 0..size {
            for j in i + 1..size {
                if rng.gen_bool(density) {
                    pairs.push((order[i], order[j]));
                }
            }
        }
        FinitePoset::new(labels, &pairs).expect("random DAG closure is a poset")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_closes_order() {
        let p = FinitePoset::from_json(r#"{"elements":["a","b","c"],"leq":[["a","b"],["b","c"]]}"#).unwrap();
        assert!(p.leq(0, 2));
        let again = FinitePoset::from_json(&p.to_json()).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn rejects_cycles_and_unknown_labels() {
        assert!(matches!(
            FinitePoset::from_json(r#"{"elements":["a","b"],"leq":[["a","b"],["b","a"]]}"#),
            Err(Error::InvalidPoset(_))
        ));
        assert!(FinitePoset::from_json(r#"{"elements":["a"],"leq":[["a","z"]]}"#).is_err());
    }

    #[test]
    fn powerset_is_inclusion() {
        let p = FinitePoset::powerset(2).unwrap();
        assert_eq!(p.labels(), ["{}", "{0}", "{1}", "{0,1}"]);
        assert!(p.leq(1, 3) && !p.leq(1, 2));
        assert_eq!(p.bottom(), Some(0));
    }
}
