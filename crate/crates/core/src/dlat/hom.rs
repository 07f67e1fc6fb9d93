use serde::{Deserialize, Serialize};

use super::lattice::FinDLat;
use crate::error::{Error, Result};

/// A bounded-lattice homomorphism between finite lattices, given on
/// generators and extended through joins and meets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatHom {
    pub source: FinDLat,
    pub target: FinDLat,
    /// `(source generator, image)` pairs.
    pub assignment: Vec<(usize, usize)>,
    pub map: Vec<usize>,
}

impl LatHom {
    /// Extends a generator assignment. Fails if the generators do not
    /// generate the source or the extension is not well defined.
    pub fn from_generators(source: FinDLat, target: FinDLat, assignment: Vec<(usize, usize)>) -> Result<Self> {
        let n = source.len();
        let mut map: Vec<Option<usize>> = vec![None; n];
        let set = |map: &mut Vec<Option<usize>>, a: usize, v: usize| -> Result<bool> {
            match map[a] {
                Some(w) if w != v => {
                    Err(Error::InvalidHom(format!("{} forced to both {} and {}", source.labels()[a], target.labels()[w], target.labels()[v])))
                }
                Some(_) => Ok(false),
                None => {
                    map[a] = Some(v);
                    Ok(true)
                }
            }
        };
        set(&mut map, source.bottom(), target.bottom())?;
        set(&mut map, source.top(), target.top())?;
        for &(g, v) in &assignment {
            if g >= n || v >= target.len() {
                return Err(Error::InvalidHom(format!("assignment ({g}, {v}) out of range")));
            }
            set(&mut map, g, v)?;
        }
        loop {
            let mut changed = false;
            for a in 0..n {
                for b in 0..n {
                    let (Some(x), Some(y)) = (map[a], map[b]) else { continue };
                    changed |= set(&mut map, source.join(a, b), target.join(x, y))?;
                    changed |= set(&mut map, source.meet(a, b), target.meet(x, y))?;
                }
            }
            if !changed {
                break;
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(a, m)| m.ok_or_else(|| Error::InvalidHom(format!("{} not generated", source.labels()[a]))))
            .collect::<Result<Vec<_>>>()?;
        let h = LatHom { source, target, assignment, map };
        h.check()?;
        Ok(h)
    }

    /// Exhaustive check of bottom, top, binary joins and meets.
    pub fn check(&self) -> Result<()> {
        let (s, t, f) = (&self.source, &self.target, &self.map);
        if f.len() != s.len() {
            return Err(Error::InvalidHom("map has the wrong length".into()));
        }
        if f[s.bottom()] != t.bottom() || f[s.top()] != t.top() {
            return Err(Error::InvalidHom("bounds not preserved".into()));
        }
        for a in 0..s.len() {
            for b in 0..s.len() {
                if f[s.join(a, b)] != t.join(f[a], f[b]) || f[s.meet(a, b)] != t.meet(f[a], f[b]) {
                    return Err(Error::InvalidHom(format!("operations not preserved at ({}, {})", s.labels()[a], s.labels()[b])));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_into_boolean() {
        let c = FinDLat::chain(3);
        let b = FinDLat::boolean(2);
        // middle of the chain to {0}
        let h = LatHom::from_generators(c.clone(), b.clone(), vec![(1, 1)]).unwrap();
        assert_eq!(h.map, vec![0, 1, 3]);
        // boolean → chain collapsing both atoms to the middle is not a hom
        assert!(LatHom::from_generators(b, c, vec![(1, 1), (2, 1)]).is_err());
    }
}
