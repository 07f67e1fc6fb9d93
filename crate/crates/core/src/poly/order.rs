use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Monomial orders used by the Gröbner engine.
///
/// `Block(k)` compares the first `k` variables by graded reverse lexicographic
/// order and breaks ties on the remaining ones; `BlockLast(k)` does the same
/// with the last `k` variables forming the dominant block. Both are elimination
/// orders for the dominant block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
#[derive(Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
    Block(usize),
    BlockLast(usize),
}

fn lex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::Grevlex => grevlex(a, b),
            MonomialOrder::Block(k) => {
                let k = k.min(a.len());
                grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..]))
            }
            MonomialOrder::BlockLast(k) => {
                let s = a.len().saturating_sub(k);
                grevlex(&a[s..], &b[s..]).then_with(|| grevlex(&a[..s], &b[..s]))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::Grevlex;
        // x^2 > xy > y^2 > x > y > 1
        let seq: [&[u32]; 6] = [&[2, 0], &[1, 1], &[0, 2], &[1, 0], &[0, 1], &[0, 0]];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(w[0], w[1]), Ordering::Greater);
        }
        // x*z^0*y... grevlex: xz < y^2 in 3 vars? x y z: compare [1,0,1] vs [0,2,0]
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
    }

    #[test]
    fn block_eliminates() {
        let o = MonomialOrder::Block(1);
        assert_eq!(o.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
        let o = MonomialOrder::BlockLast(1);
        assert_eq!(o.cmp(&[0, 1], &[5, 0]), Ordering::Greater);
    }
}
