use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coxeter::GroupPresentation;

/// Nonzero invariant factors `d1 | d2 | ...` of an integer matrix, all
/// positive. Their count is the rank.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero entry in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let sub = &q * &a[t][j];
                    a[i][j] -= sub;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let sub = &q * &row[t];
                    row[j] -= sub;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let add = a[i][j].clone();
                        a[t][j] += add;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Finitely generated abelian group `Z^free_rank + sum Z/d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    /// Number of cyclic factors of even order.
    pub fn two_rank(&self) -> usize {
        self.torsion.iter().filter(|d| *d % 2 == 0).count()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = self.torsion[i];
            let k = self.torsion[i..].iter().take_while(|&&x| x == d).count();
            parts.push(if k == 1 { format!("Z/{d}") } else { format!("(Z/{d})^{k}") });
            i += k;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Exponent-sum matrix: one row per relator, one column per generator.
pub fn relation_matrix(p: &GroupPresentation) -> Vec<Vec<BigInt>> {
    let index: std::collections::BTreeMap<&str, usize> =
        p.generators.iter().enumerate().map(|(i, g)| (g.as_str(), i)).collect();
    p.relators
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); p.generators.len()];
            for (g, e) in r {
                if let Some(&i) = index.get(g.as_str()) {
                    row[i] += BigInt::from(*e);
                }
            }
            row
        })
        .collect()
}

pub fn abelianization(p: &GroupPresentation) -> AbelianInvariants {
    let factors = smith_normal_form(&relation_matrix(p));
    let torsion = factors
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| u64::try_from(d).expect("invariant factor fits in 64 bits"))
        .collect();
    AbelianInvariants { free_rank: p.generators.len() - factors.len(), torsion }
}

/// Betti numbers `(b1, b2)` of the presentation 2-complex.
pub fn presentation_betti(p: &GroupPresentation) -> (usize, usize) {
    let rank = smith_normal_form(&relation_matrix(p)).len();
    (p.generators.len() - rank, p.relators.len() - rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{racg_presentation, DefiningGraph};

    fn big(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn small_matrices() {
        assert_eq!(smith_normal_form(&big(&[&[2]])), vec![BigInt::from(2)]);
        assert_eq!(smith_normal_form(&big(&[&[2, 4], &[6, 8]])), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(smith_normal_form(&big(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), vec![BigInt::from(1); 3]);
        assert_eq!(smith_normal_form(&big(&[&[2, 0], &[0, 3]])), vec![BigInt::from(1), BigInt::from(6)]);
        assert!(smith_normal_form(&big(&[&[0, 0]])).is_empty());
        assert!(smith_normal_form(&[]).is_empty());
    }

    #[test]
    fn abelianizations() {
        let p = racg_presentation(&DefiningGraph::new(&["s"], &[]));
        assert_eq!(abelianization(&p), AbelianInvariants { free_rank: 0, torsion: vec![2] });
        let path = DefiningGraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let ab = abelianization(&racg_presentation(&path));
        assert_eq!(ab.to_string(), "(Z/2)^3");
        let free = GroupPresentation { generators: (0..9).map(|i| format!("g{i}")).collect(), relators: vec![] };
        assert_eq!(abelianization(&free).free_rank, 9);
    }
}
