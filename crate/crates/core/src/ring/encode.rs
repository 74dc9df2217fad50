//! Canonical element strings.

use super::finite::{El, FiniteRing};
use super::spec::RingKind;
use super::InvolutiveRing;
use crate::error::{malformed, Result};

pub(crate) fn format(ring: &FiniteRing, a: El) -> String {
    match &ring.spec().kind {
        RingKind::Fp { .. } | RingKind::Zn { .. } => a.0.to_string(),
        RingKind::Fq { .. } => format_poly_w(&ring.digits(a)),
        RingKind::Dual { .. } => {
            let base = ring.base().expect("composite ring has a base");
            let c = ring.split(a);
            let wrap = |x: El| {
                let s = base.format_elem(x);
                let bare = s.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '^')
                    && !(matches!(base.spec().kind, RingKind::Dual { .. }) && s.contains('e'));
                if bare { s } else { format!("({s})") }
            };
            let e_part = if base.is_one(&c[1]) { "e".to_string() } else { format!("{}*e", wrap(c[1])) };
            match (base.is_zero(&c[0]), base.is_zero(&c[1])) {
                (_, true) if matches!(base.spec().kind, RingKind::Dual { .. }) => wrap(c[0]),
                (_, true) => base.format_elem(c[0]),
                (true, false) => e_part,
                (false, false) => format!("{}+{}", wrap(c[0]), e_part),
            }
        }
        RingKind::Mat2 { .. } => {
            let base = ring.base().expect("composite ring has a base");
            let c: Vec<String> = ring.split(a).into_iter().map(|x| base.format_elem(x)).collect();
            format!("[[{},{}],[{},{}]]", c[0], c[1], c[2], c[3])
        }
        RingKind::ProductOp { .. } => {
            let base = ring.base().expect("composite ring has a base");
            let c = ring.split(a);
            format!("({}|{})", base.format_elem(c[0]), base.format_elem(c[1]))
        }
        RingKind::TruncPoly { .. } => {
            let base = ring.base().expect("composite ring has a base");
            let c: Vec<String> = ring.split(a).into_iter().map(|x| base.format_elem(x)).collect();
            format!("[{}]", c.join(","))
        }
        RingKind::PolyS { .. } => unreachable!("PolyS has no finite carrier"),
    }
}

fn format_poly_w(digits: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in digits.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
        let term = match i {
            0 => coef,
            1 => format!("{coef}w"),
            _ => format!("{coef}w^{i}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

pub(crate) fn parse(ring: &FiniteRing, text: &str) -> Result<El> {
    let t = text.trim();
    if t.is_empty() {
        return malformed("empty element");
    }
    if let Ok(n) = t.parse::<i64>() {
        return Ok(ring.from_int(n));
    }
    match &ring.spec().kind {
        RingKind::Fp { .. } | RingKind::Zn { .. } => malformed(format!("expected an integer, got {t:?}")),
        RingKind::Fq { .. } => sum_terms(ring, t, |term| parse_w_term(ring, term)),
        RingKind::Dual { .. } => {
            let base = ring.base().expect("composite ring has a base").clone();
            let e = ring.dual_e().expect("dual ring has e");
            sum_terms(ring, t, |term| {
                if term == "e" {
                    return Ok(e);
                }
                if let Some(coef) = term.strip_suffix("*e") {
                    let c = base.parse_elem(strip_parens(coef))?;
                    return Ok(ring.mul(&ring.embed_base(c), &e));
                }
                Ok(ring.embed_base(base.parse_elem(strip_parens(term))?))
            })
        }
        RingKind::Mat2 { .. } => {
            let base = ring.base().expect("composite ring has a base");
            let rows = bracket_list(t)?;
            if rows.len() != 2 {
                return malformed(format!("Mat2 element needs 2 rows: {t:?}"));
            }
            let mut comps = Vec::with_capacity(4);
            for row in rows {
                let cells = bracket_list(row)?;
                if cells.len() != 2 {
                    return malformed(format!("Mat2 row needs 2 entries: {row:?}"));
                }
                for c in cells {
                    comps.push(base.parse_elem(c)?);
                }
            }
            Ok(ring.join(&comps))
        }
        RingKind::ProductOp { .. } => {
            let base = ring.base().expect("composite ring has a base");
            let inner = t
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| crate::Error::Malformed(format!("expected (a|b), got {t:?}")))?;
            let parts = split_top(inner, '|');
            if parts.len() != 2 {
                return malformed(format!("expected (a|b), got {t:?}"));
            }
            Ok(ring.join(&[base.parse_elem(parts[0])?, base.parse_elem(parts[1])?]))
        }
        RingKind::TruncPoly { k, .. } => {
            let base = ring.base().expect("composite ring has a base");
            let cells = bracket_list(t)?;
            if cells.len() > *k {
                return malformed(format!("more than {k} coefficients in {t:?}"));
            }
            let mut comps = vec![base.zero(); *k];
            for (i, c) in cells.into_iter().enumerate() {
                comps[i] = base.parse_elem(c)?;
            }
            Ok(ring.join(&comps))
        }
        RingKind::PolyS { .. } => unreachable!("PolyS has no finite carrier"),
    }
}

fn parse_w_term(ring: &FiniteRing, term: &str) -> Result<El> {
    let bad = || crate::Error::Malformed(format!("bad polynomial term {term:?}"));
    let Some(pos) = term.find('w') else {
        return term.parse::<i64>().map(|n| ring.from_int(n)).map_err(|_| bad());
    };
    let coef = term[..pos].trim_end_matches('*');
    let coef = if coef.is_empty() { 1 } else { coef.parse::<i64>().map_err(|_| bad())? };
    let rest = &term[pos + 1..];
    let exp = if rest.is_empty() {
        1
    } else {
        rest.strip_prefix('^').and_then(|e| e.parse::<usize>().ok()).ok_or_else(bad)?
    };
    let w = if ring.rank() > 1 { ring.basis(1) } else { ring.from_int(0) };
    Ok(ring.mul(&ring.from_int(coef), &ring.pow(&w, exp)))
}

/// Adds up top-level `+`/`-` separated terms.
fn sum_terms(ring: &FiniteRing, t: &str, term: impl Fn(&str) -> Result<El>) -> Result<El> {
    let mut acc = ring.zero();
    let mut depth = 0i32;
    let bytes = t.as_bytes();
    let mut negative = bytes.first() == Some(&b'-');
    let mut start = usize::from(negative);
    for i in start..=bytes.len() {
        let ch = bytes.get(i).copied();
        match ch {
            Some(b'(') | Some(b'[') => depth += 1,
            Some(b')') | Some(b']') => depth -= 1,
            _ => {}
        }
        let boundary = match ch {
            None => true,
            Some(b'+') | Some(b'-') => depth == 0 && i > start && bytes[i - 1] != b'^',
            _ => false,
        };
        if boundary {
            let piece = t[start..i].trim();
            if piece.is_empty() {
                return malformed(format!("empty term in {t:?}"));
            }
            let v = term(piece)?;
            acc = if negative { ring.sub(&acc, &v) } else { ring.add(&acc, &v) };
            negative = ch == Some(b'-');
            start = i + 1;
        }
    }
    if depth != 0 {
        return malformed(format!("unbalanced brackets in {t:?}"));
    }
    Ok(acc)
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') && split_top(&s[1..s.len() - 1], ')').len() == 1 {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

/// Splits `[x,y,...]` at top-level commas.
fn bracket_list(t: &str) -> Result<Vec<&str>> {
    let inner = t
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| crate::Error::Malformed(format!("expected a bracketed list, got {t:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(split_top(inner, ',').into_iter().map(str::trim).collect())
}

/// Splits at `sep` occurrences outside any brackets or parentheses.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}
