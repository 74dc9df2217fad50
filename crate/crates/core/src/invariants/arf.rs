use serde_json::json;

use super::xi::ArfQuotient;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::forms::QuadFormEl;
use crate::groups::{check_min, enumerate_group};
use crate::linalg::{vectors, Mat};
use crate::report::Report;
use crate::ring::{El, FiniteRing, InvolutiveRing};
use crate::{Matrix, Variant};

fn require_char2_field(r: &FiniteRing, trivial: bool) -> Result<()> {
    if !r.is_field() || r.characteristic_modulus() != 2 {
        return Err(Error::Precondition(format!("{} is not a field of characteristic 2", r.name())));
    }
    if trivial && r.elements().any(|a| r.conj(&a) != a) {
        return Err(Error::Precondition(format!("{} does not carry the trivial involution", r.name())));
    }
    Ok(())
}

fn dot(r: &FiniteRing, x: &[El], m: &Matrix, y: &[El]) -> El {
    let mut acc = r.zero();
    for i in 0..x.len() {
        if r.is_zero(&x[i]) {
            continue;
        }
        for j in 0..y.len() {
            acc = r.add(&acc, &r.mul(&r.mul(&x[i], m.get(i, j)), &y[j]));
        }
    }
    acc
}

/// `q(v) = vᵗ·φ₀·v`.
pub fn quadratic_value(q: &QuadFormEl, v: &[El]) -> El {
    dot(&q.ring, v, &q.phi0, v)
}

/// Number of zeros of `v ↦ vᵗφ₀v` on `Fⁿ`.
pub fn zero_count(q: &QuadFormEl, caps: &Caps) -> Result<u128> {
    let r = &q.ring;
    caps.check("vectors", crate::config::pow_saturating(r.size() as u128, q.rank()))?;
    Ok(vectors(r, q.rank()).filter(|v| r.is_zero(&quadratic_value(q, v))).count() as u128)
}

/// Arf invariant in `G = F/{a² − a}`, as the least element of its class.
///
/// A symplectic basis `(eᵢ, fᵢ)` of `φ = φ₀ + φ₀ᵗ` is built greedily and
/// `Σ q(eᵢ)q(fᵢ)` is reduced modulo `{a² − a}`.
pub fn arf(q: &QuadFormEl, caps: &Caps) -> Result<El> {
    let r = &q.ring;
    require_char2_field(r, true)?;
    let n = q.rank();
    if n % 2 == 1 {
        return Err(Error::Degenerate("odd rank form has no Arf invariant".into()));
    }
    if !q.is_nondegenerate(caps)? {
        return Err(Error::Degenerate("associated φ is not invertible".into()));
    }
    let phi = q.associated_phi();
    let b = |x: &[El], y: &[El]| dot(r, x, &phi, y);
    let mut pool: Vec<Vec<El>> = (0..n).map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect()).collect();
    let mut total = r.zero();
    while let Some(e) = pool.first().cloned() {
        let k = (1..pool.len())
            .find(|&k| !r.is_zero(&b(&e, &pool[k])))
            .ok_or_else(|| Error::Degenerate("no symplectic partner found".into()))?;
        let scale = r.unit_inverse(&b(&e, &pool[k])).expect("field");
        let f: Vec<El> = pool[k].iter().map(|x| r.mul(x, &scale)).collect();
        total = r.add(&total, &r.mul(&quadratic_value(q, &e), &quadratic_value(q, &f)));
        pool = pool
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != 0 && i != k)
            .map(|(_, w)| {
                let (alpha, beta) = (r.neg(&b(&f, w)), r.neg(&b(&e, w)));
                w.iter().zip(e.iter().zip(&f)).map(|(x, (ei, fi))| r.add(x, &r.add(&r.mul(&alpha, ei), &r.mul(&beta, fi)))).collect()
            })
            .collect();
    }
    let g = ArfQuotient::new(r);
    Ok(g.reps[g.class_of(total)])
}

/// Arf invariant as a bit, for fields where `G ≅ Z/2`.
pub fn arf_bit(q: &QuadFormEl, caps: &Caps) -> Result<u8> {
    Ok(u8::from(!q.ring.is_zero(&arf(q, caps)?)))
}

/// `|q⁻¹(0)| = q^{2m−1} + ν(q^m − q^{m−1})` with `ν = ±1` by Arf value.
pub fn expected_zero_count(field_size: u128, m: u32, arf_bit: u8) -> u128 {
    let q = field_size;
    let base = q.pow(2 * m - 1);
    let delta = q.pow(m) - q.pow(m - 1);
    if arf_bit == 0 {
        base + delta
    } else {
        base - delta
    }
}

/// `rank(f + 1) mod 2` for `f ∈ O^min(q)` over a field of characteristic 2.
pub fn dickson(f: &Matrix, q: &QuadFormEl) -> Result<u8> {
    let r = &q.ring;
    require_char2_field(r, false)?;
    if check_min(f, q)?.is_none() {
        return Err(Error::Precondition("f is not in O^min of the form".into()));
    }
    let shifted = f.add(r, &Mat::identity(r, f.rows()));
    Ok((shifted.rank_over_field(r) % 2) as u8)
}

/// Dickson on all of `O^min(q)`: homomorphism, onto `Z/2`, kernel of index 2.
pub fn dickson_check(q: &QuadFormEl, caps: &Caps) -> Result<Report> {
    let r = &q.ring;
    let g = enumerate_group(Variant::Min, q, caps)?;
    let values: Vec<u8> = g.elements.iter().map(|e| dickson(&e.f, q)).collect::<Result<_>>()?;
    let index: std::collections::HashMap<&Matrix, usize> =
        g.elements.iter().enumerate().map(|(i, e)| (&e.f, i)).collect();
    caps.check("pairs of group elements", (g.order() as u128).pow(2))?;
    let mut hom = true;
    let mut closed = true;
    for (a, va) in g.elements.iter().zip(&values) {
        for (b, vb) in g.elements.iter().zip(&values) {
            match index.get(&a.f.mul(r, &b.f)) {
                Some(&k) => hom &= values[k] == (va ^ vb),
                None => closed = false,
            }
        }
    }
    let kernel = values.iter().filter(|&&v| v == 0).count();
    let mut rep = Report::new(format!("Dickson invariant on O^min over {}", r.name()));
    rep.value("order", g.order());
    rep.value("kernel", kernel);
    rep.check("group is closed under products", closed);
    rep.check("identity maps to 0", values[index[&Mat::identity(r, q.rank())]] == 0);
    rep.check("dickson is a homomorphism", hom);
    rep.check("dickson is onto Z/2", values.contains(&1));
    rep.check_with("kernel has index 2", kernel * 2 == g.order(), json!({"kernel": kernel, "order": g.order()}).to_string());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Epsilon;
    use crate::linalg::all_matrices;
    use crate::ring::RingSpec;

    fn f2() -> FiniteRing {
        FiniteRing::new(&RingSpec::fp(2)).unwrap()
    }

    fn form(r: &FiniteRing, rows: &[&[i64]]) -> QuadFormEl {
        let m = Mat::from_rows(rows.iter().map(|row| row.iter().map(|&x| r.from_int(x)).collect()).collect()).unwrap();
        QuadFormEl::new(r.clone(), Epsilon::Plus, m).unwrap()
    }

    #[test]
    fn examples_over_f2() {
        let caps = Caps::default();
        let r = f2();
        assert_eq!(arf_bit(&QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1), &caps).unwrap(), 0);
        let a1 = form(&r, &[&[1, 1], &[0, 1]]);
        assert_eq!(arf_bit(&a1, &caps).unwrap(), 1);
        assert_eq!(zero_count(&a1, &caps).unwrap(), 1);
        assert_eq!(zero_count(&QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1), &caps).unwrap(), 3);
        assert!(arf(&form(&r, &[&[1]]), &caps).is_err());
        assert!(arf(&form(&r, &[&[1, 0], &[0, 1]]), &caps).is_err());
    }

    #[test]
    fn zero_count_oracle_on_every_form_of_rank_2_and_4() {
        let caps = Caps::default();
        for spec in [RingSpec::fp(2), RingSpec::f4_trivial()] {
            let r = FiniteRing::new(&spec).unwrap();
            let ranks: &[usize] = if r.size() == 2 { &[2, 4] } else { &[2] };
            for &n in ranks {
                for m in all_matrices(&r, n, n) {
                    let q = QuadFormEl::new(r.clone(), Epsilon::Plus, m).unwrap();
                    if !q.is_nondegenerate(&caps).unwrap() {
                        continue;
                    }
                    let bit = arf_bit(&q, &caps).unwrap();
                    let expected = expected_zero_count(r.size() as u128, (n / 2) as u32, bit);
                    assert_eq!(zero_count(&q, &caps).unwrap(), expected, "{q:?}");
                }
            }
        }
    }

    #[test]
    fn additivity_on_rank_2_pairs() {
        let caps = Caps::default();
        let r = f2();
        let forms: Vec<QuadFormEl> = all_matrices(&r, 2, 2)
            .map(|m| QuadFormEl::new(r.clone(), Epsilon::Plus, m).unwrap())
            .filter(|q| q.is_nondegenerate(&caps).unwrap())
            .collect();
        for a in &forms {
            for b in &forms {
                let s = arf_bit(&a.direct_sum(b).unwrap(), &caps).unwrap();
                assert_eq!(s, arf_bit(a, &caps).unwrap() ^ arf_bit(b, &caps).unwrap());
            }
        }
    }

    #[test]
    fn dickson_examples() {
        let caps = Caps::default();
        let r = f2();
        let h = QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1);
        assert_eq!(dickson(&Mat::identity(&r, 2), &h).unwrap(), 0);
        let g = enumerate_group(Variant::Min, &h, &caps).unwrap();
        let other = g.elements.iter().find(|e| !e.f.is_identity(&r)).unwrap();
        assert_eq!(dickson(&other.f, &h).unwrap(), 1);
        let upper = form(&r, &[&[1, 1], &[0, 1]]).phi0;
        assert!(dickson(&upper, &h).is_err());
        for m in 1..=2 {
            let rep = dickson_check(&QuadFormEl::hyperbolic(&r, Epsilon::Plus, m), &caps).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures());
        }
    }
}
