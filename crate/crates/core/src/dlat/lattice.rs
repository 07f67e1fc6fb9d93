use serde::{Deserialize, Serialize};

use super::poset::{check_partial_order, hasse_dot, FinPoset};
use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// An explicit finite bounded distributive lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LatticeDoc", into = "LatticeDoc")]
pub struct FinDLat {
    labels: Vec<String>,
    le: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
}

/// JSON form: element labels and strict order pairs `[a, b]` meaning `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub elements: Vec<String>,
    pub order: Vec<[usize; 2]>,
    pub bottom: usize,
    pub top: usize,
}

impl TryFrom<LatticeDoc> for FinDLat {
    type Error = Error;

    fn try_from(d: LatticeDoc) -> Result<Self> {
        let n = d.elements.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for [a, b] in d.order {
            if a >= n || b >= n {
                return Err(Error::InvalidLattice(format!("order pair ({a}, {b}) out of range")));
            }
            le[a][b] = true;
        }
        let l = FinDLat::from_order(d.elements, le)?;
        if l.bottom != d.bottom || l.top != d.top {
            return Err(Error::InvalidLattice("declared bounds disagree with the order".into()));
        }
        Ok(l)
    }
}

impl From<FinDLat> for LatticeDoc {
    fn from(l: FinDLat) -> Self {
        let n = l.len();
        let mut order = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && l.le[a][b] {
                    order.push([a, b]);
                }
            }
        }
        LatticeDoc { elements: l.labels, order, bottom: l.bottom, top: l.top }
    }
}

impl FinDLat {
    /// Builds the lattice from its order, computing joins and meets and
    /// verifying boundedness and distributivity.
    pub fn from_order(labels: Vec<String>, le: Vec<Vec<bool>>) -> Result<Self> {
        let n = le.len();
        if labels.len() != n {
            return Err(Error::InvalidLattice("label count does not match order size".into()));
        }
        if n == 0 {
            return Err(Error::InvalidLattice("empty lattice".into()));
        }
        check_partial_order(&le).map_err(Error::InvalidLattice)?;
        let bound = |up: bool, a: usize, b: usize| -> Option<usize> {
            let rel = |x: usize, y: usize| if up { le[x][y] } else { le[y][x] };
            let cands: Vec<usize> = (0..n).filter(|&c| rel(a, c) && rel(b, c)).collect();
            cands.iter().copied().find(|&c| cands.iter().all(|&d| rel(c, d)))
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                join[a][b] = bound(true, a, b).ok_or_else(|| Error::InvalidLattice(format!("no join of {} and {}", labels[a], labels[b])))?;
                meet[a][b] = bound(false, a, b).ok_or_else(|| Error::InvalidLattice(format!("no meet of {} and {}", labels[a], labels[b])))?;
            }
        }
        let bottom = (0..n).find(|&b| (0..n).all(|x| le[b][x])).ok_or_else(|| Error::InvalidLattice("no bottom".into()))?;
        let top = (0..n).find(|&t| (0..n).all(|x| le[x][t])).ok_or_else(|| Error::InvalidLattice("no top".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]] {
                        return Err(Error::InvalidLattice(format!("not distributive at ({}, {}, {})", labels[a], labels[b], labels[c])));
                    }
                }
            }
        }
        Ok(FinDLat { labels, le, join, meet, bottom, top })
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

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Elements that are not bottom and not the join of two strictly
    /// smaller elements.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&a| {
                if a == self.bottom {
                    return false;
                }
                let below: Vec<usize> = (0..n).filter(|&b| b != a && self.le[b][a]).collect();
                self.join_all(below.iter().copied()) != a
            })
            .collect()
    }

    /// The prime-filter spectrum via join-irreducibles. Point `p` is the
    /// filter `↑j_p`; `p ⤳ q` iff `j_p ≤ j_q`. Returns the poset together
    /// with `j_p` for each point.
    pub fn spec(&self) -> (FinPoset, Vec<usize>) {
        let ji = self.join_irreducibles();
        let le: Vec<Vec<bool>> = ji.iter().map(|&a| ji.iter().map(|&b| self.le[a][b]).collect()).collect();
        let labels = ji.iter().map(|&j| format!("↑{}", self.labels[j])).collect();
        (FinPoset::new(labels, le).expect("restriction of a partial order"), ji)
    }

    /// The element `a` as the set of points (prime filters) containing it.
    pub fn birkhoff(&self, ji: &[usize], a: usize) -> PointSet {
        PointSet::from_indices(ji.iter().enumerate().filter(|(_, &j)| self.le[j][a]).map(|(p, _)| p))
    }

    /// All prime filters by direct search, as element sets; independent of
    /// [`FinDLat::spec`].
    pub fn prime_filters(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        // linear extension: fewer elements below first
        let mut lin: Vec<usize> = (0..n).collect();
        lin.sort_by_key(|&a| ((0..n).filter(|&b| self.le[b][a]).count(), a));
        let mut out = Vec::new();
        let mut state: Vec<Option<bool>> = vec![None; n];
        self.filter_search(&lin, 0, &mut state, &mut out);
        out.sort();
        out
    }

    /// Direct check of the prime-filter axioms on a membership vector.
    pub fn is_prime_filter(&self, f: &[bool]) -> bool {
        let n = self.len();
        if !f[self.top] || f[self.bottom] {
            return false;
        }
        for a in 0..n {
            for b in 0..n {
                if f[a] && self.le[a][b] && !f[b] {
                    return false;
                }
                if f[a] && f[b] && !f[self.meet[a][b]] {
                    return false;
                }
                if f[self.join[a][b]] && !f[a] && !f[b] {
                    return false;
                }
            }
        }
        true
    }

    fn filter_search(&self, lin: &[usize], k: usize, state: &mut Vec<Option<bool>>, out: &mut Vec<Vec<bool>>) {
        let n = self.len();
        if k == lin.len() {
            let f: Vec<bool> = state.iter().map(|s| s.unwrap()).collect();
            if self.is_prime_filter(&f) {
                out.push(f);
            }
            return;
        }
        let x = lin[k];
        for choice in [false, true] {
            state[x] = Some(choice);
            let ok = (0..n).all(|y| match state[y] {
                None => true,
                Some(sy) => {
                    // upward closed
                    if sy && self.le[y][x] && !choice {
                        return false;
                    }
                    if choice && self.le[x][y] && !sy {
                        return false;
                    }
                    // meets of members are members, once decided
                    if sy && choice {
                        if let Some(m) = state[self.meet[x][y]] {
                            if !m {
                                return false;
                            }
                        }
                    }
                    // primality on decided joins
                    if !sy && !choice {
                        if let Some(true) = state[self.join[x][y]] {
                            return false;
                        }
                    }
                    true
                }
            }) && self.filter_consistent_with(x, state);
            if ok {
                self.filter_search(lin, k + 1, state, out);
            }
        }
        state[x] = None;
    }

    fn filter_consistent_with(&self, x: usize, state: &[Option<bool>]) -> bool {
        let n = self.len();
        // x may itself be a meet or join of decided elements
        for a in 0..n {
            for b in 0..n {
                let (Some(sa), Some(sb)) = (state[a], state[b]) else { continue };
                if self.meet[a][b] == x && sa && sb && state[x] == Some(false) {
                    return false;
                }
                if self.join[a][b] == x && !sa && !sb && state[x] == Some(true) {
                    return false;
                }
            }
        }
        true
    }

    /// Poset of prime filters ordered by reverse inclusion, from
    /// [`FinDLat::prime_filters`].
    pub fn spec_by_filters(&self) -> FinPoset {
        let fs = self.prime_filters();
        let le: Vec<Vec<bool>> = fs.iter().map(|f| fs.iter().map(|g| (0..self.len()).all(|a| !g[a] || f[a])).collect()).collect();
        let labels = (0..fs.len()).map(|i| format!("F{i}")).collect();
        FinPoset::new(labels, le).expect("inclusion is a partial order")
    }

    /// Lattice of opens of a finite space, with the point set of each element.
    pub fn opens(p: &FinPoset) -> (FinDLat, Vec<PointSet>) {
        let sets = p.open_sets();
        let le = sets.iter().map(|a| sets.iter().map(|b| a.is_subset(*b)).collect()).collect();
        let labels = sets
            .iter()
            .map(|s| {
                let names: Vec<&str> = s.iter().map(|i| p.labels()[i].as_str()).collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        (FinDLat::from_order(labels, le).expect("opens form a distributive lattice"), sets)
    }

    /// A chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Self {
        let le = (0..n).map(|i| (0..n).map(|j| i <= j).collect()).collect();
        FinDLat::from_order((0..n).map(|i| i.to_string()).collect(), le).unwrap()
    }

    /// The Boolean lattice of subsets of `{0..k}`.
    pub fn boolean(k: usize) -> Self {
        let n = 1usize << k;
        let le = (0..n).map(|a| (0..n).map(|b| a & b == a).collect()).collect();
        FinDLat::from_order((0..n).map(|a| format!("{a:0k$b}")).collect(), le).unwrap()
    }

    /// Divisors of `m` under divisibility.
    pub fn divisors(m: u64) -> Self {
        let ds: Vec<u64> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
        let le = ds.iter().map(|a| ds.iter().map(|b| b % a == 0).collect()).collect();
        FinDLat::from_order(ds.iter().map(|d| d.to_string()).collect(), le).unwrap()
    }

    /// Cartesian product, ordered componentwise.
    pub fn product(&self, o: &FinDLat) -> FinDLat {
        let mut labels = Vec::new();
        let mut pairs = Vec::new();
        for a in 0..self.len() {
            for b in 0..o.len() {
                labels.push(format!("({},{})", self.labels[a], o.labels[b]));
                pairs.push((a, b));
            }
        }
        let le = pairs.iter().map(|&(a, b)| pairs.iter().map(|&(c, d)| self.le[a][c] && o.le[b][d]).collect()).collect();
        FinDLat::from_order(labels, le).unwrap()
    }

    pub fn to_dot(&self) -> String {
        hasse_dot("lattice", &self.labels, &self.le)
    }
}
