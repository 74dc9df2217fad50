use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::report::Report;
use crate::ring::{El, FiniteRing, InvolutiveRing};
use crate::Matrix;

/// A uniformly random invertible `n×n` matrix, by rejection.
pub fn random_invertible(r: &FiniteRing, n: usize, rng: &mut impl Rng, caps: &Caps) -> Result<Matrix> {
    for _ in 0..10_000 {
        let m = Mat::from_fn(n, n, |_, _| El(rng.gen_range(0..r.size() as u32)));
        if m.invert(r, caps)?.is_some() {
            return Ok(m);
        }
    }
    Err(Error::Precondition(format!("no invertible {n}×{n} matrix found over {}", r.name())))
}

/// `3×3` block matrix from a grid of `n×n` blocks given by a selector.
fn blocks3(r: &FiniteRing, n: usize, pick: impl Fn(usize, usize) -> Option<Matrix>) -> Matrix {
    let grid: Vec<Vec<Matrix>> =
        (0..3).map(|i| (0..3).map(|j| pick(i, j).unwrap_or_else(|| Mat::zeros(r, n, n))).collect()).collect();
    Mat::from_blocks(&grid).expect("square blocks of equal size")
}

fn diag3(r: &FiniteRing, a: &Matrix, b: &Matrix, c: &Matrix) -> Matrix {
    let n = a.rows();
    blocks3(r, n, |i, j| match (i, j) {
        (0, 0) => Some(a.clone()),
        (1, 1) => Some(b.clone()),
        (2, 2) => Some(c.clone()),
        _ => None,
    })
}

/// Block permutation matrix sending block `j` to block `perm[j]`, with the
/// block in row 0 optionally replaced by `lead`.
fn perm3(r: &FiniteRing, n: usize, perm: [usize; 3], lead: Option<&Matrix>) -> Matrix {
    let one = Mat::identity(r, n);
    blocks3(r, n, |i, j| {
        (perm[j] == i).then(|| if i == 0 { lead.cloned().unwrap_or_else(|| one.clone()) } else { one.clone() })
    })
}

/// The three stabilisation identities for `GL₃ₙ`, checked exactly:
///
/// 1. `diag(αβα⁻¹β⁻¹, 1, 1) = diag(α, α⁻¹, 1)·diag(β, 1, β⁻¹)·diag(α⁻¹, α, 1)·diag(β⁻¹, 1, β)`
/// 2. `diag(α, α⁻¹, 1)·P = [[0, α, 0], [0, 0, α⁻¹], [1, 0, 0]]` for the cyclic block shift `P`
/// 3. that matrix equals the commutator `X·Y·X⁻¹·Y` with
///    `X = [[α, 0, 0], [0, 0, 1], [0, 1, 0]]` and `Y` the swap of blocks 1 and 3.
///
/// Two commonly printed variants (`αβα⁻¹β` in 1, and `Y` swapping blocks
/// 1 and 2 in 3) are evaluated too and reported as values, not checks.
pub fn whitehead_factorization(r: &FiniteRing, alpha: &Matrix, beta: &Matrix, caps: &Caps) -> Result<Report> {
    let n = alpha.rows();
    if !alpha.is_square() || beta.rows() != n || !beta.is_square() {
        return Err(Error::Shape("α and β must be square of the same size".into()));
    }
    let ai = alpha.invert(r, caps)?.ok_or_else(|| Error::Precondition("α is not invertible".into()))?;
    let bi = beta.invert(r, caps)?.ok_or_else(|| Error::Precondition("β is not invertible".into()))?;
    let one = Mat::identity(r, n);
    let mut rep = Report::new("block identities in GL_3n");

    let lhs1 = diag3(r, &alpha.mul(r, beta).mul(r, &ai).mul(r, &bi), &one, &one);
    let rhs1 = diag3(r, alpha, &ai, &one)
        .mul(r, &diag3(r, beta, &one, &bi))
        .mul(r, &diag3(r, &ai, alpha, &one))
        .mul(r, &diag3(r, &bi, &one, beta));
    rep.check("commutator diag(αβα⁻¹β⁻¹, 1, 1) as four block diagonals", lhs1 == rhs1);
    let printed1 = diag3(r, &alpha.mul(r, beta).mul(r, &ai).mul(r, beta), &one, &one);
    rep.value("variant_alpha_beta_alpha_inv_beta_holds", printed1 == rhs1);

    let shift = perm3(r, n, [2, 0, 1], None);
    let target = blocks3(r, n, |i, j| match (i, j) {
        (0, 1) => Some(alpha.clone()),
        (1, 2) => Some(ai.clone()),
        (2, 0) => Some(one.clone()),
        _ => None,
    });
    rep.check("diag(α, α⁻¹, 1)·P is the twisted cyclic shift", diag3(r, alpha, &ai, &one).mul(r, &shift) == target);

    let x = perm3(r, n, [0, 2, 1], Some(alpha));
    let x_inv = perm3(r, n, [0, 2, 1], Some(&ai));
    let y = perm3(r, n, [2, 1, 0], None);
    rep.check("twisted cyclic shift is X·Y·X⁻¹·Y", x.mul(r, &y).mul(r, &x_inv).mul(r, &y) == target);
    let y12 = perm3(r, n, [1, 0, 2], None);
    rep.value("variant_swap_blocks_1_2_holds", x.mul(r, &y12).mul(r, &x_inv).mul(r, &y12) == target);
    rep.check("X·X⁻¹ = 1", x.mul(r, &x_inv).is_identity(r));
    Ok(rep)
}

/// [`whitehead_factorization`] on `count` seeded random pairs of size `n`.
pub fn whitehead_random(r: &FiniteRing, count: usize, n: usize, seed: u64, caps: &Caps) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new(format!("block identities on {count} random pairs over {}", r.name()));
    rep.value("seed", seed);
    let mut failed = 0;
    for i in 0..count {
        let a = random_invertible(r, n, &mut rng, caps)?;
        let b = random_invertible(r, n, &mut rng, caps)?;
        let sub = whitehead_factorization(r, &a, &b, caps)?;
        if !sub.passed() {
            failed += 1;
            if failed == 1 {
                rep.value("first_failure", serde_json::json!({"pair": i, "alpha": a.to_json(r), "beta": b.to_json(r)}));
            }
        }
    }
    rep.check_with("every pair satisfies every identity", failed == 0, format!("{failed} of {count} pairs fail"));
    Ok(rep)
}
