use std::collections::HashMap;

use super::lattice::FinDLat;
use super::term::{leq_free, LatTerm};
use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 10_000;

/// A lattice given by representatives and a decision procedure for `≤`.
pub trait OracleLat {
    type Elem: Clone;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn bottom(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn label(&self, a: &Self::Elem) -> String;
}

/// The free bounded distributive lattice on the given generators.
#[derive(Clone, Debug, Default)]
pub struct FreeLat {
    pub gens: Vec<String>,
}

impl FreeLat {
    pub fn new(gens: &[&str]) -> Self {
        FreeLat { gens: gens.iter().map(|s| s.to_string()).collect() }
    }

    pub fn generators(&self) -> Vec<LatTerm> {
        self.gens.iter().map(|g| LatTerm::generator(g)).collect()
    }
}

impl OracleLat for FreeLat {
    type Elem = LatTerm;

    fn leq(&self, a: &LatTerm, b: &LatTerm) -> bool {
        leq_free(a, b)
    }

    fn join(&self, a: &LatTerm, b: &LatTerm) -> LatTerm {
        a.join(b)
    }

    fn meet(&self, a: &LatTerm, b: &LatTerm) -> LatTerm {
        a.meet(b)
    }

    fn bottom(&self) -> LatTerm {
        LatTerm::bottom()
    }

    fn top(&self) -> LatTerm {
        LatTerm::top()
    }

    fn label(&self, a: &LatTerm) -> String {
        a.to_string()
    }
}

/// A finite sublattice of an oracle lattice with its representatives.
#[derive(Clone, Debug)]
pub struct Fragment<E> {
    pub lattice: FinDLat,
    pub elems: Vec<E>,
    /// Lattice index of each requested generator.
    pub gen_index: Vec<usize>,
}

impl<E> Fragment<E> {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

struct Builder<'a, O: OracleLat> {
    oracle: &'a O,
    reps: Vec<O::Elem>,
    cache: HashMap<(usize, usize), bool>,
    cap: usize,
}

impl<O: OracleLat> Builder<'_, O> {
    fn leq_idx(&mut self, i: usize, j: usize) -> bool {
        if i == j {
            return true;
        }
        if let Some(&b) = self.cache.get(&(i, j)) {
            return b;
        }
        let b = self.oracle.leq(&self.reps[i], &self.reps[j]);
        self.cache.insert((i, j), b);
        b
    }

    fn insert(&mut self, e: O::Elem) -> Result<usize> {
        for i in 0..self.reps.len() {
            let up = self.oracle.leq(&e, &self.reps[i]);
            if up && self.oracle.leq(&self.reps[i], &e) {
                return Ok(i);
            }
        }
        if self.reps.len() >= self.cap {
            return Err(Error::FragmentCap { cap: self.cap });
        }
        self.reps.push(e);
        Ok(self.reps.len() - 1)
    }
}

/// Closes `gens ∪ {bottom, top}` under join and meet, merging mutually
/// `≤`-related representatives.
pub fn materialize<O: OracleLat>(oracle: &O, gens: &[O::Elem], cap: usize) -> Result<Fragment<O::Elem>> {
    let mut b = Builder { oracle, reps: Vec::new(), cache: HashMap::new(), cap: cap.max(2) };
    let bot = b.insert(oracle.bottom())?;
    let top = b.insert(oracle.top())?;
    let mut gen_index = Vec::with_capacity(gens.len());
    for g in gens {
        gen_index.push(b.insert(g.clone())?);
    }
    let mut join_t: HashMap<(usize, usize), usize> = HashMap::new();
    let mut meet_t: HashMap<(usize, usize), usize> = HashMap::new();
    let mut j = 0;
    while j < b.reps.len() {
        for i in 0..=j {
            let jn = oracle.join(&b.reps[i], &b.reps[j]);
            let jn = b.insert(jn)?;
            let mt = oracle.meet(&b.reps[i], &b.reps[j]);
            let mt = b.insert(mt)?;
            join_t.insert((i, j), jn);
            meet_t.insert((i, j), mt);
        }
        j += 1;
    }
    let n = b.reps.len();
    let mut le = vec![vec![false; n]; n];
    for x in 0..n {
        for y in 0..n {
            le[x][y] = b.leq_idx(x, y);
        }
    }
    let labels: Vec<String> = b.reps.iter().map(|e| oracle.label(e)).collect();
    for x in 0..n {
        if !le[bot][x] || !le[x][top] {
            return Err(Error::OracleInconsistent { left: labels[bot].clone(), right: labels[x].clone(), reason: "bounds are not extremal".into() });
        }
        for y in 0..n {
            for z in 0..n {
                if le[x][y] && le[y][z] && !le[x][z] {
                    return Err(Error::OracleInconsistent {
                        left: labels[x].clone(),
                        right: labels[z].clone(),
                        reason: format!("transitivity fails through {}", labels[y]),
                    });
                }
            }
        }
    }
    let lattice = FinDLat::from_order(labels.clone(), le).map_err(|e| Error::OracleInconsistent {
        left: String::new(),
        right: String::new(),
        reason: e.to_string(),
    })?;
    for (&(x, y), &jn) in &join_t {
        if lattice.join(x, y) != jn || lattice.meet(x, y) != meet_t[&(x, y)] {
            return Err(Error::OracleInconsistent {
                left: labels[x].clone(),
                right: labels[y].clone(),
                reason: "oracle join/meet differs from the order-theoretic one".into(),
            });
        }
    }
    Ok(Fragment { lattice, elems: b.reps, gen_index })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_fragments() {
        let f = FreeLat::new(&[]);
        assert_eq!(materialize(&f, &[], DEFAULT_CAP).unwrap().len(), 2);
        let f = FreeLat::new(&["x", "y"]);
        assert_eq!(materialize(&f, &f.generators(), DEFAULT_CAP).unwrap().len(), 6);
        let f = FreeLat::new(&["x", "y", "z"]);
        assert_eq!(materialize(&f, &f.generators(), DEFAULT_CAP).unwrap().len(), 20);
    }

    #[test]
    fn cap_enforced() {
        let f = FreeLat::new(&["x", "y", "z"]);
        assert_eq!(materialize(&f, &f.generators(), 10).unwrap_err(), Error::FragmentCap { cap: 10 });
    }

    struct Broken;

    impl OracleLat for Broken {
        type Elem = u8;
        fn leq(&self, a: &u8, b: &u8) -> bool {
            // 2 ≤ 1 ≤ 3 but 2 ≰ 3
            a == b || *a == 0 || (*a == 2 && *b == 1) || (*b == 3 && *a != 2)
        }
        fn join(&self, a: &u8, b: &u8) -> u8 {
            *a.max(b)
        }
        fn meet(&self, a: &u8, b: &u8) -> u8 {
            *a.min(b)
        }
        fn bottom(&self) -> u8 {
            0
        }
        fn top(&self) -> u8 {
            3
        }
        fn label(&self, a: &u8) -> String {
            a.to_string()
        }
    }

    #[test]
    fn inconsistency_reported() {
        let r = materialize(&Broken, &[1, 2], DEFAULT_CAP);
        assert!(matches!(r, Err(Error::OracleInconsistent { .. })), "{r:?}");
    }
}
