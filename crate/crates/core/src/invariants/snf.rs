use serde::Serialize;

use crate::error::{Error, Result};

/// A finitely presented abelian group `Zᵍ / ⟨relations⟩`, reduced to Smith
/// normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianGroupPresentation {
    pub generators: Vec<String>,
    /// Sparse relations as `(generator, coefficient)` lists.
    pub relations: Vec<Vec<(usize, i64)>>,
    /// Nontrivial invariant factors in dividing order; `0` stands for `Z`.
    pub invariant_factors: Vec<u64>,
    #[serde(skip)]
    diagonal: Vec<i128>,
    #[serde(skip)]
    transform: Vec<Vec<i128>>,
}

fn overflow() -> Error {
    Error::Unsupported("integer overflow in Smith normal form".into())
}

fn sub_mul(a: i128, q: i128, b: i128) -> Result<i128> {
    q.checked_mul(b).and_then(|p| a.checked_sub(p)).ok_or_else(overflow)
}

impl AbelianGroupPresentation {
    pub fn new(generators: Vec<String>, relations: Vec<Vec<(usize, i64)>>) -> Result<Self> {
        let g = generators.len();
        let mut m: Vec<Vec<i128>> = Vec::with_capacity(relations.len());
        for rel in &relations {
            let mut row = vec![0i128; g];
            for &(j, c) in rel {
                if j >= g {
                    return Err(Error::Malformed(format!("relation mentions generator {j} of {g}")));
                }
                row[j] += c as i128;
            }
            if row.iter().any(|&x| x != 0) {
                m.push(row);
            }
        }
        let (diagonal, transform) = smith(m, g)?;
        let invariant_factors = diagonal.iter().filter(|&&d| d != 1).map(|&d| d as u64).collect();
        Ok(AbelianGroupPresentation { generators, relations, invariant_factors, diagonal, transform })
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u128> {
        self.invariant_factors.iter().try_fold(1u128, |acc, &d| (d != 0).then(|| acc.saturating_mul(d as u128)))
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// `Z/2 ⊕ Z`-style description; `0` for the trivial group.
    pub fn describe(&self) -> String {
        if self.is_trivial() {
            return "0".into();
        }
        let parts: Vec<String> =
            self.invariant_factors.iter().map(|&d| if d == 0 { "Z".into() } else { format!("Z/{d}") }).collect();
        parts.join(" ⊕ ")
    }

    /// Coordinates of a combination of generators in the decomposition
    /// `⊕ Z/dᵢ`, reduced into `[0, dᵢ)` (kept as is for free factors).
    pub fn coordinates(&self, v: &[(usize, i64)]) -> Vec<i128> {
        let g = self.generators.len();
        let mut out = Vec::new();
        for (t, &d) in self.diagonal.iter().enumerate() {
            if d == 1 {
                continue;
            }
            let mut x: i128 = 0;
            for &(j, c) in v {
                if j < g {
                    x += c as i128 * self.transform[j][t];
                }
            }
            out.push(if d == 0 { x } else { x.rem_euclid(d) });
        }
        out
    }

    pub fn is_zero(&self, v: &[(usize, i64)]) -> bool {
        self.coordinates(v).iter().all(|&x| x == 0)
    }
}

/// Diagonal of the Smith form of `m` (one entry per column, `0` for free
/// columns) together with the column transform `V` with `U·m·V = D`.
fn smith(mut m: Vec<Vec<i128>>, cols: usize) -> Result<(Vec<i128>, Vec<Vec<i128>>)> {
    let rows = m.len();
    let mut v: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| i128::from(i == j)).collect()).collect();
    let swap_cols = |m: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        if a != b {
            for row in m.iter_mut() {
                row.swap(a, b);
            }
            for row in v.iter_mut() {
                row.swap(a, b);
            }
        }
    };
    let mut diag = vec![0i128; cols];
    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the remaining block becomes the pivot
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| (m[i][j].unsigned_abs(), i, j))
        else {
            break;
        };
        m.swap(t, pi);
        swap_cols(&mut m, &mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = m[i][t].div_euclid(m[t][t]);
                    for j in t..cols {
                        m[i][j] = sub_mul(m[i][j], q, m[t][j])?;
                    }
                    clean &= m[i][t] == 0;
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = m[t][j].div_euclid(m[t][t]);
                    for i in t..rows {
                        m[i][j] = sub_mul(m[i][j], q, m[i][t])?;
                    }
                    for row in v.iter_mut() {
                        row[j] = sub_mul(row[j], q, row[t])?;
                    }
                    clean &= m[t][j] == 0;
                }
            }
            if !clean {
                // a smaller remainder appeared in the pivot row or column
                let (bi, bj) = (t..rows)
                    .map(|i| (i, t))
                    .chain((t..cols).map(|j| (t, j)))
                    .filter(|&(i, j)| m[i][j] != 0)
                    .min_by_key(|&(i, j)| m[i][j].unsigned_abs())
                    .expect("pivot is nonzero");
                m.swap(t, bi);
                swap_cols(&mut m, &mut v, t, bj);
                continue;
            }
            let p = m[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        m[t][j] = m[t][j].checked_add(m[i][j]).ok_or_else(overflow)?;
                    }
                }
                None => break,
            }
        }
        diag[t] = m[t][t].abs();
    }
    Ok((diag, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("g{i}")).collect()
    }

    #[test]
    fn cyclic_and_free() {
        let p = AbelianGroupPresentation::new(gens(1), vec![vec![(0, 2)]]).unwrap();
        assert_eq!(p.invariant_factors, vec![2]);
        let p = AbelianGroupPresentation::new(gens(2), vec![vec![(0, 3)]]).unwrap();
        assert_eq!(p.invariant_factors, vec![3, 0]);
        assert_eq!(p.order(), None);
        let p = AbelianGroupPresentation::new(gens(1), vec![vec![(0, 1)]]).unwrap();
        assert!(p.is_trivial());
        assert_eq!(p.describe(), "0");
    }

    #[test]
    fn z2_times_z3_is_z6() {
        let p = AbelianGroupPresentation::new(gens(2), vec![vec![(0, 2)], vec![(1, 3)]]).unwrap();
        assert_eq!(p.invariant_factors, vec![6]);
        assert_eq!(p.order(), Some(6));
        assert!(!p.is_zero(&[(0, 1)]));
        assert!(p.is_zero(&[(0, 2), (1, 3)]));
        assert!(p.is_zero(&[(0, 4), (1, 6)]));
    }

    #[test]
    fn coordinates_respect_relations() {
        let rels = vec![vec![(0, 4), (1, 6)], vec![(0, 6), (1, 4), (2, 2)], vec![(2, 8)]];
        let p = AbelianGroupPresentation::new(gens(3), rels.clone()).unwrap();
        for r in &rels {
            assert!(p.is_zero(r));
        }
        let prod: u64 = p.invariant_factors.iter().product();
        // |det| of the 3×3 relation matrix
        assert_eq!(prod, 160);
        for w in p.invariant_factors.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }
}
