use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// A finite poset read as a topological space: `le[i][j]` means `i ⤳ j`,
/// i.e. `j` lies in the closure of `i`. Opens are the generalization-closed
/// subsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PosetDoc", into = "PosetDoc")]
pub struct FinPoset {
    labels: Vec<String>,
    le: Vec<Vec<bool>>,
}

/// JSON form: point labels and the strict relations `[i, j]` meaning `i ⤳ j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDoc {
    pub points: Vec<String>,
    pub specializations: Vec<[usize; 2]>,
}

impl TryFrom<PosetDoc> for FinPoset {
    type Error = Error;

    fn try_from(d: PosetDoc) -> Result<Self> {
        let n = d.points.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for [i, j] in d.specializations {
            if i >= n || j >= n {
                return Err(Error::InvalidPoset(format!("relation ({i}, {j}) out of range")));
            }
            le[i][j] = true;
        }
        FinPoset::new(d.points, le)
    }
}

impl From<FinPoset> for PosetDoc {
    fn from(p: FinPoset) -> Self {
        let n = p.len();
        let mut specializations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && p.le[i][j] {
                    specializations.push([i, j]);
                }
            }
        }
        PosetDoc { points: p.labels, specializations }
    }
}

pub(crate) fn check_partial_order(le: &[Vec<bool>]) -> std::result::Result<(), String> {
    let n = le.len();
    if le.iter().any(|r| r.len() != n) {
        return Err("relation table is not square".into());
    }
    for i in 0..n {
        if !le[i][i] {
            return Err(format!("not reflexive at {i}"));
        }
        for j in 0..n {
            if i != j && le[i][j] && le[j][i] {
                return Err(format!("not antisymmetric at ({i}, {j})"));
            }
            for k in 0..n {
                if le[i][j] && le[j][k] && !le[i][k] {
                    return Err(format!("not transitive at ({i}, {j}, {k})"));
                }
            }
        }
    }
    Ok(())
}

/// Covering pairs `(i, j)`: `i < j` with nothing strictly between.
pub(crate) fn covers(le: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let n = le.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || !le[i][j] {
                continue;
            }
            if !(0..n).any(|k| k != i && k != j && le[i][k] && le[k][j]) {
                out.push((i, j));
            }
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hasse diagram in DOT, nodes and edges in index order.
pub(crate) fn hasse_dot(name: &str, labels: &[String], le: &[Vec<bool>]) -> String {
    let mut s = String::new();
    writeln!(s, "digraph {name} {{").unwrap();
    writeln!(s, "  rankdir=BT;").unwrap();
    for (i, l) in labels.iter().enumerate() {
        writeln!(s, "  n{i} [label=\"{}\"];", dot_escape(l)).unwrap();
    }
    for (i, j) in covers(le) {
        writeln!(s, "  n{i} -> n{j};").unwrap();
    }
    s.push_str("}\n");
    s
}

impl FinPoset {
    pub fn new(labels: Vec<String>, le: Vec<Vec<bool>>) -> Result<Self> {
        if labels.len() != le.len() {
            return Err(Error::InvalidPoset("label count does not match relation size".into()));
        }
        if labels.len() > crate::pointset::MAX_POINTS {
            return Err(Error::InvalidPoset(format!("more than {} points", crate::pointset::MAX_POINTS)));
        }
        check_partial_order(&le).map_err(Error::InvalidPoset)?;
        Ok(FinPoset { labels, le })
    }

    /// Poset from strict specializations `i ⤳ j`, transitively closed.
    pub fn from_relations(labels: Vec<String>, rels: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in rels {
            if i >= n || j >= n {
                return Err(Error::InvalidPoset(format!("relation ({i}, {j}) out of range")));
            }
            le[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if le[i][k] && le[k][j] {
                        le[i][j] = true;
                    }
                }
            }
        }
        FinPoset::new(labels, le)
    }

    pub fn discrete(n: usize) -> Self {
        FinPoset::from_relations((0..n).map(|i| format!("p{i}")).collect(), &[]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relation(&self) -> &[Vec<bool>] {
        &self.le
    }

    /// `i ⤳ j`: `j` is a specialization of `i`.
    pub fn specializes(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    pub fn all(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn is_open(&self, s: PointSet) -> bool {
        s.iter().all(|j| (0..self.len()).all(|i| !self.le[i][j] || s.contains(i)))
    }

    pub fn is_closed(&self, s: PointSet) -> bool {
        self.is_open(self.all().difference(s))
    }

    /// Smallest closed set containing `s`.
    pub fn closure(&self, s: PointSet) -> PointSet {
        let mut out = PointSet::EMPTY;
        for i in s.iter() {
            for j in 0..self.len() {
                if self.le[i][j] {
                    out.insert(j);
                }
            }
        }
        out
    }

    /// Smallest open set containing `s`.
    pub fn generalization(&self, s: PointSet) -> PointSet {
        let mut out = PointSet::EMPTY;
        for j in s.iter() {
            for i in 0..self.len() {
                if self.le[i][j] {
                    out.insert(i);
                }
            }
        }
        out
    }

    /// Largest open set inside `s`.
    pub fn interior(&self, s: PointSet) -> PointSet {
        self.all().difference(self.closure(self.all().difference(s)))
    }

    /// Points with no proper generization.
    pub fn generic_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| (0..self.len()).all(|i| i == j || !self.le[i][j])).collect()
    }

    /// Points with no proper specialization.
    pub fn closed_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| (0..self.len()).all(|j| i == j || !self.le[i][j])).collect()
    }

    /// All open subsets, sorted by size then bit pattern.
    pub fn open_sets(&self) -> Vec<PointSet> {
        let n = self.len();
        assert!(n <= 20, "open-set enumeration limited to 20 points");
        let mut out: Vec<PointSet> = (0u64..(1u64 << n)).map(PointSet).filter(|&s| self.is_open(s)).collect();
        out.sort_by_key(|s| (s.len(), s.0));
        out
    }

    /// Whether the map `f` (point images in `target`) is continuous.
    pub fn is_continuous(&self, target: &FinPoset, f: &[usize]) -> bool {
        (0..self.len()).all(|i| (0..self.len()).all(|j| !self.le[i][j] || target.le[f[i]][f[j]]))
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.len());
        FinPoset { labels, le: self.le.clone() }
    }

    pub fn to_dot(&self) -> String {
        hasse_dot("space", &self.labels, &self.le)
    }

    /// Disjoint union.
    pub fn disjoint_union(&self, o: &FinPoset) -> FinPoset {
        let n = self.len() + o.len();
        let mut le = vec![vec![false; n]; n];
        for i in 0..self.len() {
            for j in 0..self.len() {
                le[i][j] = self.le[i][j];
            }
        }
        for i in 0..o.len() {
            for j in 0..o.len() {
                le[self.len() + i][self.len() + j] = o.le[i][j];
            }
        }
        let mut labels = self.labels.clone();
        labels.extend(o.labels.iter().cloned());
        FinPoset { labels, le }
    }

    /// Induced subposet on `s`, in increasing index order.
    /// `{a, b}`-style rendering of a point set.
    pub fn labels_of(&self, s: PointSet) -> String {
        let l: Vec<&str> = s.iter().map(|i| self.labels[i].as_str()).collect();
        format!("{{{}}}", l.join(", "))
    }

    pub fn restrict(&self, s: PointSet) -> FinPoset {
        let idx: Vec<usize> = s.iter().collect();
        let le = idx.iter().map(|&i| idx.iter().map(|&j| self.le[i][j]).collect()).collect();
        FinPoset { labels: idx.iter().map(|&i| self.labels[i].clone()).collect(), le }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sierpinski() -> FinPoset {
        FinPoset::from_relations(vec!["g".into(), "c".into()], &[(0, 1)]).unwrap()
    }

    #[test]
    fn opens_of_sierpinski() {
        let p = sierpinski();
        let o = p.open_sets();
        assert_eq!(o, vec![PointSet::EMPTY, PointSet::singleton(0), PointSet::full(2)]);
        assert!(p.is_closed(PointSet::singleton(1)));
        assert_eq!(p.closure(PointSet::singleton(0)), PointSet::full(2));
        assert_eq!(p.generic_points(), vec![0]);
        assert_eq!(p.closed_points(), vec![1]);
    }

    #[test]
    fn rejects_cycles() {
        assert!(FinPoset::from_relations(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = sierpinski();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"points":["g","c"],"specializations":[[0,1]]}"#);
        let q: FinPoset = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}
