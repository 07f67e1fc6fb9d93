//! Order isomorphisms and exhaustive enumeration of small posets.

use std::collections::BTreeSet;

use super::poset::FinPoset;

/// Finds a bijection `f` with `a[i][j] ⟺ b[f i][f j]`, by backtracking.
pub fn order_isomorphism(a: &[Vec<bool>], b: &[Vec<bool>]) -> Option<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    let sig = |m: &[Vec<bool>], i: usize| {
        let up = (0..n).filter(|&j| m[i][j]).count();
        let down = (0..n).filter(|&j| m[j][i]).count();
        (up, down)
    };
    let sa: Vec<_> = (0..n).map(|i| sig(a, i)).collect();
    let sb: Vec<_> = (0..n).map(|i| sig(b, i)).collect();
    let mut x = sa.clone();
    let mut y = sb.clone();
    x.sort();
    y.sort();
    if x != y {
        return None;
    }
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        k: usize,
        a: &[Vec<bool>],
        b: &[Vec<bool>],
        sa: &[(usize, usize)],
        sb: &[(usize, usize)],
        f: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let n = a.len();
        if k == n {
            return true;
        }
        for c in 0..n {
            if used[c] || sa[k] != sb[c] {
                continue;
            }
            if (0..k).all(|i| a[i][k] == b[f[i]][c] && a[k][i] == b[c][f[i]]) {
                f[k] = c;
                used[c] = true;
                if go(k + 1, a, b, sa, sb, f, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        false
    }
    if go(0, a, b, &sa, &sb, &mut f, &mut used) {
        Some(f)
    } else {
        None
    }
}

/// Every order isomorphism from `a` to `b`.
pub fn all_order_isomorphisms(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = a.len();
    if b.len() != n {
        return vec![];
    }
    let mut out = Vec::new();
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(k: usize, a: &[Vec<bool>], b: &[Vec<bool>], f: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = a.len();
        if k == n {
            out.push(f.clone());
            return;
        }
        for c in 0..n {
            if !used[c] && (0..k).all(|i| a[i][k] == b[f[i]][c] && a[k][i] == b[c][f[i]]) && a[k][k] == b[c][c] {
                f[k] = c;
                used[c] = true;
                go(k + 1, a, b, f, used, out);
                used[c] = false;
            }
        }
    }
    go(0, a, b, &mut f, &mut used, &mut out);
    out
}

pub fn posets_isomorphic(a: &FinPoset, b: &FinPoset) -> bool {
    order_isomorphism(a.relation(), b.relation()).is_some()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn encode(le: &[Vec<bool>], perm: &[usize]) -> u64 {
    let n = le.len();
    let mut code = 0u64;
    for i in 0..n {
        for j in 0..n {
            code = (code << 1) | le[perm[i]][perm[j]] as u64;
        }
    }
    code
}

/// One representative of every isomorphism class of posets on `n` points.
pub fn all_posets(n: usize) -> Vec<FinPoset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let total = 3usize.pow(pairs.len() as u32);
    for mut code in 0..total {
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in &pairs {
            match code % 3 {
                1 => le[i][j] = true,
                2 => le[j][i] = true,
                _ => {}
            }
            code /= 3;
        }
        let transitive = (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(le[i][j] && le[j][k]) || le[i][k])));
        if !transitive {
            continue;
        }
        let canon = perms.iter().map(|p| encode(&le, p)).min().unwrap();
        if seen.insert(canon) {
            let labels = (0..n).map(|i| format!("p{i}")).collect();
            out.push(FinPoset::new(labels, le).unwrap());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16]);
    }

    #[test]
    fn isomorphism_found() {
        let a = FinPoset::from_relations(vec!["a".into(), "b".into(), "c".into()], &[(0, 2), (1, 2)]).unwrap();
        let b = FinPoset::from_relations(vec!["x".into(), "y".into(), "z".into()], &[(1, 0), (2, 0)]).unwrap();
        let f = order_isomorphism(a.relation(), b.relation()).unwrap();
        assert_eq!(f[2], 0);
        let c = FinPoset::from_relations(vec!["x".into(), "y".into(), "z".into()], &[(0, 1), (0, 2)]).unwrap();
        assert!(!posets_isomorphic(&a, &c));
    }
}
