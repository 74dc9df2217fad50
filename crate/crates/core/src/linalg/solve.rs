use crate::config::{pow_saturating, Caps};
use crate::error::{Error, Result};
use crate::ring::{El, FiniteRing};

use super::{all_matrices, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    First,
    All,
}

/// Solves `map(X) = rhs` for an unknown `rows×cols` matrix `X`, where `map`
/// is additive (any combination of sums, products with fixed matrices and
/// conjugate-transposes qualifies).
///
/// Small systems are solved by trying every candidate. Larger ones are
/// solved by elimination on `Z/p`-coordinates, which needs a prime
/// characteristic. Solutions come back sorted by their entries.
pub fn solve_linear(
    r: &FiniteRing,
    rows: usize,
    cols: usize,
    map: &dyn Fn(&Mat<El>) -> Mat<El>,
    rhs: &Mat<El>,
    mode: SolveMode,
    caps: &Caps,
) -> Result<Vec<Mat<El>>> {
    let candidates = pow_saturating(r.size() as u128, rows * cols);
    if candidates <= caps.candidates {
        let mut out = Vec::new();
        for x in all_matrices(r, rows, cols) {
            if map(&x) == *rhs {
                out.push(x);
                if mode == SolveMode::First {
                    break;
                }
            }
        }
        return Ok(out);
    }
    if !crate::ring::finite_is_prime(r.characteristic_modulus()) {
        return Err(Error::CapExceeded { what: "brute-force linear solve".into(), needed: candidates, cap: caps.candidates });
    }
    eliminate(r, rows, cols, map, rhs, mode, caps)
}

fn eliminate(
    r: &FiniteRing,
    rows: usize,
    cols: usize,
    map: &dyn Fn(&Mat<El>) -> Mat<El>,
    rhs: &Mat<El>,
    mode: SolveMode,
    caps: &Caps,
) -> Result<Vec<Mat<El>>> {
    let p = r.characteristic_modulus() as u64;
    let rank = r.rank();
    let unknowns = rows * cols * rank;
    let to_digits = |m: &Mat<El>| -> Vec<u64> {
        m.entries().iter().flat_map(|&a| r.digits(a)).map(u64::from).collect()
    };
    let target = to_digits(rhs);
    let eqs = target.len();
    // Column c of the coefficient matrix is the image of the c-th coordinate vector.
    let mut columns = Vec::with_capacity(unknowns);
    for c in 0..unknowns {
        let (cell, k) = (c / rank, c % rank);
        let mut x = Mat::zeros(r, rows, cols);
        x.set(cell / cols, cell % cols, r.basis(k));
        let img = to_digits(&map(&x));
        if img.len() != eqs {
            return Err(Error::Shape("map output does not match the right-hand side".into()));
        }
        columns.push(img);
    }
    let mut aug: Vec<Vec<u64>> = (0..eqs)
        .map(|i| {
            let mut row: Vec<u64> = columns.iter().map(|col| col[i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let inv = |a: u64| (1..p).find(|&b| a * b % p == 1).expect("nonzero element of a prime field");
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(pr) = (row..eqs).find(|&i| aug[i][col] != 0) else { continue };
        aug.swap(row, pr);
        let s = inv(aug[row][col]);
        for v in aug[row].iter_mut() {
            *v = *v * s % p;
        }
        for i in 0..eqs {
            if i != row && aug[i][col] != 0 {
                let f = aug[i][col];
                for j in 0..=unknowns {
                    aug[i][j] = (aug[i][j] + (p - f) * aug[row][j]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if aug[row..].iter().any(|r| r[unknowns] != 0) {
        return Ok(Vec::new());
    }
    let free: Vec<usize> = (0..unknowns).filter(|c| !pivots.contains(c)).collect();
    let count = pow_saturating(p as u128, free.len());
    let wanted = if mode == SolveMode::First { 1 } else { count };
    caps.check("solutions of a linear system", wanted)?;
    let mut out = Vec::new();
    for code in 0..wanted {
        let mut x = vec![0u64; unknowns];
        let mut c = code;
        for &f in &free {
            x[f] = (c % p as u128) as u64;
            c /= p as u128;
        }
        for (i, &pc) in pivots.iter().enumerate() {
            let mut v = aug[i][unknowns];
            for &f in &free {
                v = (v + (p - aug[i][f]) * x[f]) % p;
            }
            x[pc] = v;
        }
        let entries: Vec<El> = x
            .chunks(rank)
            .map(|d| r.from_digits(&d.iter().map(|&v| v as u32).collect::<Vec<_>>()))
            .collect();
        let m = Mat::new(rows, cols, entries)?;
        debug_assert!(map(&m) == *rhs);
        out.push(m);
    }
    out.sort();
    Ok(out)
}
