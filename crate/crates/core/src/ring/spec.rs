use serde_json::{json, Map, Value};

use crate::error::{malformed, Result};

/// Involution offered on `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldInvolution {
    Trivial,
    /// `x ↦ x^(p^(deg/2))`, the unique field automorphism of order two.
    Frobenius,
}

/// Sign of the involution on an adjoined variable (`ē = ±e`, `t̄ = ±t`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignFlag {
    Plus,
    Minus,
}

impl SignFlag {
    fn parse(v: &Value, var: &str) -> Result<Self> {
        match v.as_str() {
            Some(s) if s == format!("+{var}") || s == var => Ok(SignFlag::Plus),
            Some(s) if s == format!("-{var}") => Ok(SignFlag::Minus),
            _ => malformed(format!("expected \"+{var}\" or \"-{var}\", got {v}")),
        }
    }

    fn render(self, var: &str) -> String {
        match self {
            SignFlag::Plus => format!("+{var}"),
            SignFlag::Minus => format!("-{var}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Fp { p: u32 },
    /// `F_p[w]/(modulus)`, modulus little-endian.
    Fq { p: u32, deg: usize, modulus: Vec<u32>, involution: FieldInvolution },
    Zn { n: u32 },
    /// Dual numbers `A[e]/e²`.
    Dual { base: Box<RingSpec>, conj_e: SignFlag },
    /// `M₂(A)` with `[[a,b],[c,d]] ↦ [[d̄,b̄],[c̄,ā]]`.
    Mat2 { base: Box<RingSpec> },
    /// `A × A^op` with the factors swapped.
    ProductOp { base: Box<RingSpec> },
    /// `A[s]` with `s̄ = 1 − s`; `bound` limits enumeration only.
    PolyS { base: Box<RingSpec>, bound: Option<usize> },
    /// `A[t]/(t^k)` with `t̄ = ±t`.
    TruncPoly { base: Box<RingSpec>, k: usize, conj_t: SignFlag },
}

/// A ring description as read from JSON, plus an optional split unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub kind: RingKind,
    /// Canonical encoding of a user-supplied `λ` with `λ + λ̄ = 1`.
    pub split_unit: Option<String>,
}

impl From<RingKind> for RingSpec {
    fn from(kind: RingKind) -> Self {
        RingSpec { kind, split_unit: None }
    }
}

impl RingSpec {
    pub fn fp(p: u32) -> Self {
        RingKind::Fp { p }.into()
    }

    pub fn zn(n: u32) -> Self {
        RingKind::Zn { n }.into()
    }

    pub fn fq(p: u32, modulus: Vec<u32>, involution: FieldInvolution) -> Self {
        let deg = modulus.len().saturating_sub(1);
        RingKind::Fq { p, deg, modulus, involution }.into()
    }

    /// `F_4 = F_2[w]/(w² + w + 1)` with the Frobenius involution.
    pub fn f4() -> Self {
        Self::fq(2, vec![1, 1, 1], FieldInvolution::Frobenius)
    }

    pub fn f4_trivial() -> Self {
        Self::fq(2, vec![1, 1, 1], FieldInvolution::Trivial)
    }

    pub fn dual(base: RingSpec, conj_e: SignFlag) -> Self {
        RingKind::Dual { base: Box::new(base), conj_e }.into()
    }

    pub fn mat2(base: RingSpec) -> Self {
        RingKind::Mat2 { base: Box::new(base) }.into()
    }

    pub fn product_op(base: RingSpec) -> Self {
        RingKind::ProductOp { base: Box::new(base) }.into()
    }

    pub fn poly_s(base: RingSpec, bound: Option<usize>) -> Self {
        RingKind::PolyS { base: Box::new(base), bound }.into()
    }

    pub fn trunc_poly(base: RingSpec, k: usize, conj_t: SignFlag) -> Self {
        RingKind::TruncPoly { base: Box::new(base), k, conj_t }.into()
    }

    pub fn with_split_unit(mut self, lambda: impl Into<String>) -> Self {
        self.split_unit = Some(lambda.into());
        self
    }

    /// Parses either a JSON document or a shorthand such as `F2`, `F4`,
    /// `F4-trivial`, `Z/9`, `Dual(F4)`, `Mat2(F2)`, `ProductOp(F3)`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            let v: Value = serde_json::from_str(t).map_err(|e| crate::Error::Malformed(format!("ring JSON: {e}")))?;
            Self::from_json(&v)
        } else {
            Self::from_shorthand(t)
        }
    }

    pub fn from_shorthand(t: &str) -> Result<Self> {
        let t = t.trim();
        if let Some(open) = t.find('(') {
            if !t.ends_with(')') {
                return malformed(format!("unbalanced ring shorthand {t:?}"));
            }
            let head = &t[..open];
            let inner = Self::from_shorthand(&t[open + 1..t.len() - 1])?;
            return match head {
                "Dual" => Ok(Self::dual(inner, SignFlag::Minus)),
                "Dual+" => Ok(Self::dual(inner, SignFlag::Plus)),
                "Mat2" | "M2" => Ok(Self::mat2(inner)),
                "ProductOp" => Ok(Self::product_op(inner)),
                "PolyS" => Ok(Self::poly_s(inner, None)),
                _ => malformed(format!("unknown ring constructor {head:?}")),
            };
        }
        match t {
            "F4" => return Ok(Self::f4()),
            "F4-trivial" => return Ok(Self::f4_trivial()),
            "F8" => return Ok(Self::fq(2, vec![1, 1, 0, 1], FieldInvolution::Trivial)),
            "F9" => return Ok(Self::fq(3, vec![1, 0, 1], FieldInvolution::Frobenius)),
            "F9-trivial" => return Ok(Self::fq(3, vec![1, 0, 1], FieldInvolution::Trivial)),
            "F16" => return Ok(Self::fq(2, vec![1, 1, 0, 0, 1], FieldInvolution::Frobenius)),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix('F') {
            if let Ok(p) = rest.parse::<u32>() {
                return Ok(Self::fp(p));
            }
        }
        let zrest = t.strip_prefix("Z/").or_else(|| t.strip_prefix('Z'));
        if let Some(rest) = zrest {
            if let Ok(n) = rest.parse::<u32>() {
                return Ok(Self::zn(n));
            }
        }
        malformed(format!("unknown ring shorthand {t:?}"))
    }

    /// `Fq` specs may give `deg` alone; the modulus is then the first monic
    /// irreducible polynomial of that degree, coefficients read low to high.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = match v {
            Value::Object(o) => o,
            Value::String(s) => return Self::from_shorthand(s),
            _ => return malformed(format!("ring spec must be an object, got {v}")),
        };
        let kind = get_str(obj, "kind")?;
        let allowed: &[&str] = match kind {
            "Fp" => &["p"],
            "Fq" => &["p", "deg", "modulus", "involution"],
            "Zn" => &["n", "involution"],
            "Dual" => &["base", "conj_e"],
            "Mat2" | "ProductOp" => &["base"],
            "PolyS" => &["base", "bound"],
            "TruncPoly" => &["base", "k", "conj_t"],
            other => return malformed(format!("unknown ring kind {other:?}")),
        };
        for key in obj.keys() {
            if key != "kind" && key != "split_unit" && !allowed.contains(&key.as_str()) {
                return malformed(format!("unknown field {key:?} in {kind} ring spec"));
            }
        }
        let base = || -> Result<Box<RingSpec>> {
            Ok(Box::new(RingSpec::from_json(obj.get("base").ok_or_else(|| missing("base"))?)?))
        };
        let kind = match kind {
            "Fp" => RingKind::Fp { p: get_u32(obj, "p")? },
            "Zn" => {
                if let Some(inv) = obj.get("involution") {
                    if inv.as_str() != Some("trivial") {
                        return malformed("Z/n only supports the trivial involution");
                    }
                }
                RingKind::Zn { n: get_u32(obj, "n")? }
            }
            "Fq" => {
                let p = get_u32(obj, "p")?;
                let modulus: Vec<u32> = match obj.get("modulus") {
                    Some(Value::Array(a)) => a
                        .iter()
                        .map(|x| x.as_u64().map(|u| u as u32).ok_or_else(|| missing("modulus entries")))
                        .collect::<Result<_>>()?,
                    None => {
                        let deg = obj.get("deg").and_then(Value::as_u64).ok_or_else(|| missing("modulus or deg"))?;
                        first_irreducible(p, deg as usize)?
                    }
                    _ => return Err(missing("modulus")),
                };
                let deg = match obj.get("deg") {
                    Some(d) => d.as_u64().ok_or_else(|| missing("deg"))? as usize,
                    None => modulus.len().saturating_sub(1),
                };
                let involution = match obj.get("involution").and_then(Value::as_str) {
                    None | Some("trivial") => FieldInvolution::Trivial,
                    Some("frobenius") => FieldInvolution::Frobenius,
                    Some(other) => return malformed(format!("unknown involution {other:?}")),
                };
                RingKind::Fq { p, deg, modulus, involution }
            }
            "Dual" => RingKind::Dual {
                base: base()?,
                conj_e: match obj.get("conj_e") {
                    Some(v) => SignFlag::parse(v, "e")?,
                    None => SignFlag::Minus,
                },
            },
            "Mat2" => RingKind::Mat2 { base: base()? },
            "ProductOp" => RingKind::ProductOp { base: base()? },
            "PolyS" => RingKind::PolyS {
                base: base()?,
                bound: match obj.get("bound") {
                    Some(Value::Null) | None => None,
                    Some(b) => Some(b.as_u64().ok_or_else(|| missing("bound"))? as usize),
                },
            },
            "TruncPoly" => RingKind::TruncPoly {
                base: base()?,
                k: get_u32(obj, "k")? as usize,
                conj_t: match obj.get("conj_t") {
                    Some(v) => SignFlag::parse(v, "t")?,
                    None => SignFlag::Plus,
                },
            },
            _ => unreachable!(),
        };
        let split_unit = match obj.get("split_unit") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(other) => Some(other.to_string()),
        };
        Ok(RingSpec { kind, split_unit })
    }

    pub fn to_json(&self) -> Value {
        let mut v = match &self.kind {
            RingKind::Fp { p } => json!({"kind": "Fp", "p": p}),
            RingKind::Zn { n } => json!({"kind": "Zn", "n": n, "involution": "trivial"}),
            RingKind::Fq { p, deg, modulus, involution } => json!({
                "kind": "Fq", "p": p, "deg": deg, "modulus": modulus,
                "involution": match involution { FieldInvolution::Trivial => "trivial", FieldInvolution::Frobenius => "frobenius" },
            }),
            RingKind::Dual { base, conj_e } => json!({"kind": "Dual", "base": base.to_json(), "conj_e": conj_e.render("e")}),
            RingKind::Mat2 { base } => json!({"kind": "Mat2", "base": base.to_json()}),
            RingKind::ProductOp { base } => json!({"kind": "ProductOp", "base": base.to_json()}),
            RingKind::PolyS { base, bound } => json!({"kind": "PolyS", "base": base.to_json(), "bound": bound}),
            RingKind::TruncPoly { base, k, conj_t } => {
                json!({"kind": "TruncPoly", "base": base.to_json(), "k": k, "conj_t": conj_t.render("t")})
            }
        };
        if let (Some(l), Value::Object(o)) = (&self.split_unit, &mut v) {
            o.insert("split_unit".into(), Value::String(l.clone()));
        }
        v
    }

    /// Short human-readable name, e.g. `Dual(F4/frob)`.
    pub fn short_name(&self) -> String {
        match &self.kind {
            RingKind::Fp { p } => format!("F{p}"),
            RingKind::Zn { n } => format!("Z/{n}"),
            RingKind::Fq { p, deg, involution, .. } => {
                let q = (*p as u64).pow(*deg as u32);
                match involution {
                    FieldInvolution::Trivial => format!("F{q}"),
                    FieldInvolution::Frobenius => format!("F{q}/frob"),
                }
            }
            RingKind::Dual { base, conj_e } => match conj_e {
                SignFlag::Minus => format!("Dual({})", base.short_name()),
                SignFlag::Plus => format!("Dual+({})", base.short_name()),
            },
            RingKind::Mat2 { base } => format!("Mat2({})", base.short_name()),
            RingKind::ProductOp { base } => format!("ProductOp({})", base.short_name()),
            RingKind::PolyS { base, .. } => format!("{}[s]", base.short_name()),
            RingKind::TruncPoly { base, k, .. } => format!("{}[t]/t^{k}", base.short_name()),
        }
    }
}

fn missing(field: &str) -> crate::Error {
    crate::Error::Malformed(format!("missing or invalid field {field:?}"))
}

fn get_str<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a str> {
    obj.get(key).and_then(Value::as_str).ok_or_else(|| missing(key))
}

fn get_u32(obj: &Map<String, Value>, key: &str) -> Result<u32> {
    obj.get(key)
        .and_then(Value::as_u64)
        .filter(|&v| v <= u32::MAX as u64)
        .map(|v| v as u32)
        .ok_or_else(|| missing(key))
}

fn first_irreducible(p: u32, deg: usize) -> Result<Vec<u32>> {
    if deg == 0 || p < 2 || (p as u128).checked_pow(deg as u32).is_none_or(|q| q > 1 << 24) {
        return malformed(format!("no default modulus for F_{p}^{deg}"));
    }
    let count = (p as u64).pow(deg as u32);
    for code in 0..count {
        let mut c = code;
        let mut modulus: Vec<u32> = (0..deg)
            .map(|_| {
                let d = (c % p as u64) as u32;
                c /= p as u64;
                d
            })
            .collect();
        modulus.push(1);
        if super::finite::is_irreducible(&modulus, p) {
            return Ok(modulus);
        }
    }
    malformed(format!("no irreducible polynomial of degree {deg} over F_{p}"))
}
