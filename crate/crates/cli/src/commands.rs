use std::io::Read;

use hermkq::clauwens::{
    cup_product, delta_from_json, find_projector_instances, lemma1_check, lemma4_recursion, linearization_soundness,
    linearize, projector_conjugator, sqrt_check, sqrt_one_plus_nu_t, AlmostHermitian, PolyQuadForm, SquareZeroIdeal,
};
use hermkq::forms::{is_even, FormSpec};
use hermkq::groups::{enumerate_group, enumerate_unitary, extension_check, whitehead_factorization, whitehead_random};
use hermkq::invariants::{
    arf, arf_bit, arf_retraction_check, dickson_check, expected_zero_count, grothendieck_witt_monoid, witt_classify,
    xi_char2_field, xi_group, zero_count,
};
use hermkq::report::Report;
use hermkq::ring::{find_split_unit, verify_involution, verify_involution_sampled};
use hermkq::verify::{criterion, verify_all, Outcome};
use hermkq::{Caps, Epsilon, Error, FiniteRing, InvolutiveRing, Mat, Matrix, Result, RingSpec, Variant, VERSION};
use serde_json::{json, Map, Value};

use crate::{ClauwensCommand, Command};

pub struct Output {
    command: String,
    input: Value,
    result: Value,
    text: String,
    pub passed: bool,
}

impl Output {
    fn new(command: &str, input: Value, result: Value, text: String, passed: bool) -> Self {
        Output { command: command.to_string(), input, result, text, passed }
    }

    fn from_report(command: &str, input: Value, mut result: Value, rep: Report) -> Self {
        let text = report_table(&rep);
        let passed = rep.passed();
        result["checks"] = rep.to_json();
        Output::new(command, input, result, text, passed)
    }

    pub fn document(&self) -> Value {
        json!({
            "command": self.command,
            "version": VERSION,
            "input": self.input,
            "passed": self.passed,
            "result": self.result,
        })
    }

    pub fn table(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("hermkq {} {}: {status}\n{}", VERSION, self.command, self.text)
    }
}

pub fn error_document(cmd: &Command, e: &Error) -> Value {
    json!({"command": command_name(cmd), "version": VERSION, "error": e.to_string()})
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::RingCheck { .. } => "ring-check".into(),
        Command::FormCheck { .. } => "form-check".into(),
        Command::Group { .. } => "group".into(),
        Command::Witt { .. } => "witt".into(),
        Command::Gw { .. } => "gw".into(),
        Command::Arf { .. } => "arf".into(),
        Command::Dickson { .. } => "dickson".into(),
        Command::Xi { .. } => "xi".into(),
        Command::Clauwens { command } => format!(
            "clauwens {}",
            match command {
                ClauwensCommand::Product { .. } => "product",
                ClauwensCommand::Linearize { .. } => "linearize",
                ClauwensCommand::Lemma4 { .. } => "lemma4",
                ClauwensCommand::SqrtNilpotent { .. } => "sqrt-nilpotent",
                ClauwensCommand::ConjugateProjectors { .. } => "conjugate-projectors",
            }
        ),
        Command::Whitehead { .. } => "whitehead".into(),
        Command::Verify { .. } => "verify".into(),
    }
}

fn report_table(rep: &Report) -> String {
    let mut out = format!("{}\n", rep.title);
    for c in &rep.checks {
        let mark = if c.passed { "pass" } else { "FAIL" };
        match &c.detail {
            Some(d) => out.push_str(&format!("  [{mark}] {} ({d})\n", c.name)),
            None => out.push_str(&format!("  [{mark}] {}\n", c.name)),
        }
    }
    for (k, v) in &rep.values {
        out.push_str(&format!("  {k} = {v}\n"));
    }
    out
}

/// Inline text, `@path`, or `-` for stdin.
fn read_text(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Malformed(format!("stdin: {e}")))?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn read_json(arg: &str) -> Result<Value> {
    serde_json::from_str(&read_text(arg)?).map_err(|e| Error::Malformed(format!("JSON input: {e}")))
}

fn read_object(arg: &str, allowed: &[&str]) -> Result<Map<String, Value>> {
    let v = read_json(arg)?;
    let obj = v.as_object().cloned().ok_or_else(|| Error::Malformed("input must be a JSON object".into()))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(Error::Malformed(format!("unknown field {k:?}")));
    }
    Ok(obj)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Malformed(format!("missing field {key:?}")))
}

fn ring_of(arg: &str) -> Result<FiniteRing> {
    FiniteRing::new(&RingSpec::parse(&read_text(arg)?)?)
}

fn ring_field(obj: &Map<String, Value>) -> Result<FiniteRing> {
    FiniteRing::new(&RingSpec::from_json(field(obj, "ring")?)?)
}

fn epsilon_field(obj: &Map<String, Value>) -> Result<Epsilon> {
    match obj.get("epsilon") {
        None => Ok(Epsilon::Plus),
        Some(e) => Epsilon::from_i64(e.as_i64().ok_or_else(|| Error::Malformed(format!("bad epsilon {e}")))?),
    }
}

fn matrix_field(r: &FiniteRing, obj: &Map<String, Value>, key: &str) -> Result<Matrix> {
    Mat::from_json(r, field(obj, key)?)
}

pub fn run(cmd: &Command, caps: &Caps) -> Result<Output> {
    let name = command_name(cmd);
    let name = name.as_str();
    match cmd {
        Command::RingCheck { ring, samples, seed } => {
            let r = ring_of(ring)?;
            let rep = match samples {
                Some(n) => verify_involution_sampled(&r, *n, *seed),
                None => verify_involution(&r),
            };
            let split = find_split_unit(&r)?;
            let result = json!({
                "ring": r.name(),
                "size": r.size(),
                "commutative": r.is_commutative(),
                "split_unit": split.map(|l| r.format_elem(l)),
                "involution": rep,
            });
            let mut text = format!(
                "  {}: {} elements, {} pairs checked, {} violations\n",
                r.name(),
                r.size(),
                rep.pairs_checked,
                rep.violation_count
            );
            for v in &rep.violations {
                text.push_str(&format!("  violated {} at {:?}\n", v.axiom, v.elements));
            }
            Ok(Output::new(name, json!({"ring": r.spec().to_json()}), result, text, rep.passed()))
        }
        Command::FormCheck { form } => {
            let fs = FormSpec::parse(&read_text(form)?)?;
            let r = &fs.ring;
            let h = fs.herm()?;
            let mut rep = Report::new(format!("{} form of rank {}", fs.variant.as_str(), fs.matrix.rows()));
            rep.check("associated hermitian form is nondegenerate", h.is_nondegenerate(caps)?);
            let mut result = json!({"associated_phi": h.phi.to_json(r)});
            if fs.variant == Variant::Max {
                let even = is_even(&h, caps)?;
                rep.value("even", even.is_some());
                if let Some(p0) = even {
                    result["even_witness"] = p0.to_json(r);
                }
            } else {
                let q = fs.quad()?;
                result["min_canonical"] = q.min_canonical().to_json(r);
                if h.is_nondegenerate(caps)? {
                    result["psi"] = q.psi_normalize(caps)?.to_json(r);
                }
            }
            Ok(Output::from_report(name, fs.to_json(), result, rep))
        }
        Command::Group { form, variant, list, extension } => {
            let fs = FormSpec::parse(&read_text(form)?)?;
            let r = &fs.ring;
            let variant = match variant {
                Some(v) => Variant::parse(v)?,
                None => fs.variant,
            };
            let g = match variant {
                Variant::Max => enumerate_unitary(&fs.herm()?, caps)?,
                v => enumerate_group(v, &fs.quad()?, caps)?,
            };
            let mut rep = Report::new(format!("{} group of {}", variant.as_str(), r.name()));
            rep.value("order", g.order());
            rep.absorb("axioms", g.verify_axioms(r, caps)?);
            if *extension {
                rep.absorb("extension", extension_check(&fs.quad()?, caps)?);
            }
            let mut result = json!({"variant": variant.as_str(), "order": g.order()});
            if *list {
                result["elements"] = g.elements.iter().map(|e| e.to_json(r)).collect();
            }
            let mut input = fs.to_json();
            input["group_variant"] = json!(variant.as_str());
            Ok(Output::from_report(name, input, result, rep))
        }
        Command::Witt { ring, epsilon, variant, max_rank } | Command::Gw { ring, epsilon, variant, max_rank } => {
            let r = ring_of(ring)?;
            let eps = Epsilon::from_i64(*epsilon)?;
            let v = Variant::parse(variant)?;
            let input = json!({"ring": r.spec().to_json(), "epsilon": eps.as_i64(), "variant": v.as_str(), "max_rank": max_rank});
            if matches!(cmd, Command::Witt { .. }) {
                let t = witt_classify(&r, eps, v, *max_rank, caps)?;
                Ok(Output::new(name, input, t.to_json(), t.to_table(), true))
            } else {
                let gw = grothendieck_witt_monoid(&r, eps, v, *max_rank, caps)?;
                let result = gw.to_json();
                let text = format!("  {} classes, {} sums\n", gw.orbits.len(), gw.sums.len());
                Ok(Output::new(name, input, result, text, true))
            }
        }
        Command::Arf { form } => {
            let fs = FormSpec::parse(&read_text(form)?)?;
            let q = fs.quad()?;
            let r = &q.ring;
            let value = arf(&q, caps)?;
            let bit = arf_bit(&q, caps)?;
            let zeros = zero_count(&q, caps)?;
            let expected = expected_zero_count(r.size() as u128, (q.rank() / 2) as u32, bit);
            let mut rep = Report::new("Arf invariant");
            rep.check_with(
                "zero count matches the Arf value",
                zeros == expected,
                format!("{zeros} zeros, expected {expected}"),
            );
            let result = json!({"arf": r.format_elem(value), "arf_bit": bit, "zero_count": zeros.to_string()});
            Ok(Output::from_report(name, fs.to_json(), result, rep))
        }
        Command::Dickson { form } => {
            let fs = FormSpec::parse(&read_text(form)?)?;
            let rep = dickson_check(&fs.quad()?, caps)?;
            Ok(Output::from_report(name, fs.to_json(), json!({}), rep))
        }
        Command::Xi { ring, epsilon, retraction } => {
            let r = ring_of(ring)?;
            let eps = Epsilon::from_i64(*epsilon)?;
            let xi = xi_group(&r, eps, caps)?;
            let mut result = json!({"xi": xi.describe(), "presentation": xi});
            if let Ok(field) = xi_char2_field(&r, caps) {
                result["xi_char2_field"] = json!(field.describe());
            }
            let input = json!({"ring": r.spec().to_json(), "epsilon": eps.as_i64()});
            if *retraction {
                let rep = arf_retraction_check(&r, caps)?;
                return Ok(Output::from_report(name, input, result, rep));
            }
            let text = format!("  Ξ({}) = {}\n", r.name(), xi.describe());
            Ok(Output::new(name, input, result, text, true))
        }
        Command::Clauwens { command } => clauwens(name, command, caps),
        Command::Whitehead { ring, alpha, beta, random, size, seed } => {
            let r = ring_of(ring)?;
            let mut input = json!({"ring": r.spec().to_json()});
            let rep = match (alpha, beta) {
                (Some(a), Some(b)) => {
                    let a = Mat::from_json(&r, &read_json(a)?)?;
                    let b = Mat::from_json(&r, &read_json(b)?)?;
                    input["alpha"] = a.to_json(&r);
                    input["beta"] = b.to_json(&r);
                    whitehead_factorization(&r, &a, &b, caps)?
                }
                (None, None) => {
                    let count = random.unwrap_or(100);
                    input["random"] = json!(count);
                    input["size"] = json!(size);
                    input["seed"] = json!(seed);
                    whitehead_random(&r, count, *size, *seed, caps)?
                }
                _ => return Err(Error::Malformed("give both --alpha and --beta, or neither".into())),
            };
            Ok(Output::from_report(name, input, json!({}), rep))
        }
        Command::Verify { which } => {
            let outcomes: Vec<Outcome> = if which == "all" {
                verify_all(caps)
            } else {
                let n: usize = which.parse().map_err(|_| Error::Malformed(format!("bad criterion {which:?}")))?;
                vec![criterion(n)?.run(caps)]
            };
            let passed = outcomes.iter().all(Outcome::passed);
            let text: String = outcomes.iter().map(|o| format!("{}\n", o.summary_line())).collect();
            let result = json!({"criteria": outcomes.iter().map(Outcome::to_json).collect::<Vec<_>>()});
            Ok(Output::new(name, json!({"which": which}), result, text, passed))
        }
    }
}

fn clauwens(name: &str, cmd: &ClauwensCommand, caps: &Caps) -> Result<Output> {
    match cmd {
        ClauwensCommand::Product { input } => {
            let obj = read_object(input, &["theta", "delta"])?;
            let theta = PolyQuadForm::from_json(field(&obj, "theta")?)?;
            let d = delta_from_json(&theta.ring, field(&obj, "delta")?, caps)?;
            let k = cup_product(&theta, &d)?;
            let rep = lemma1_check(&theta, &d)?;
            let result = json!({"epsilon": k.eps.as_i64(), "kappa": k.phi0.to_json(&k.ring), "rank": k.rank()});
            Ok(Output::from_report(name, Value::Object(obj), result, rep))
        }
        ClauwensCommand::Linearize { input } => {
            let obj = read_object(input, &["theta", "delta"])?;
            let theta = PolyQuadForm::from_json(field(&obj, "theta")?)?;
            let lin = linearize(&theta, caps)?;
            let mut rep = Report::new("linearization");
            for s in &lin.steps {
                rep.check(format!("step {}", s.step), s.passed);
            }
            rep.check("g* = εg(1 + N) with N nilpotent", lin.output.identity_holds());
            if let Some(dv) = obj.get("delta") {
                let d = delta_from_json(&theta.ring, dv, caps)?;
                rep.absorb("cup-product", linearization_soundness(&lin, &d)?);
            }
            let text = format!("  {} steps, stabilization {:?}\n", lin.steps.len(), lin.stabilization);
            let mut out = Output::from_report(name, Value::Object(obj), lin.to_json(), rep);
            out.text.push_str(&text);
            Ok(out)
        }
        ClauwensCommand::Lemma4 { input } => {
            let obj = read_object(input, &["ring", "epsilon", "g", "delta", "zeta", "depth"])?;
            let r = ring_field(&obj)?;
            let eps = epsilon_field(&obj)?;
            let sigma = AlmostHermitian::new(r.clone(), eps, matrix_field(&r, &obj, "g")?, caps)?;
            let d = delta_from_json(&r, field(&obj, "delta")?, caps)?;
            let zeta = matrix_field(&r, &obj, "zeta")?;
            let depth = match obj.get("depth") {
                None => sigma.index,
                Some(v) => v.as_u64().ok_or_else(|| Error::Malformed(format!("bad depth {v}")))? as usize,
            };
            let out = lemma4_recursion(&sigma, &d, &zeta, depth)?;
            Ok(Output::from_report(name, Value::Object(obj), out.to_json(), out.report()))
        }
        ClauwensCommand::SqrtNilpotent { input } => {
            let obj = read_object(input, &["ring", "nu", "lambda"])?;
            let r = ring_field(&obj)?;
            let nu = matrix_field(&r, &obj, "nu")?;
            let lambda = match obj.get("lambda") {
                None => None,
                Some(Value::String(s)) => Some(r.parse_elem(s)?),
                Some(Value::Number(n)) => Some(r.from_int(n.as_i64().ok_or_else(|| Error::Malformed("bad λ".into()))?)),
                Some(v) => return Err(Error::Malformed(format!("bad λ {v}"))),
            };
            let sq = sqrt_one_plus_nu_t(&r, &nu, lambda)?;
            let rep = sqrt_check(&sq);
            Ok(Output::from_report(name, Value::Object(obj), sq.to_json(), rep))
        }
        ClauwensCommand::ConjugateProjectors { input } => {
            let obj = read_object(input, &["ring", "ideal", "p0", "p1", "form", "rank"])?;
            let r = ring_field(&obj)?;
            let gen = match field(&obj, "ideal")? {
                Value::String(s) => r.parse_elem(s)?,
                Value::Number(n) => r.from_int(n.as_i64().ok_or_else(|| Error::Malformed("bad ideal generator".into()))?),
                v => return Err(Error::Malformed(format!("bad ideal generator {v}"))),
            };
            let ideal = SquareZeroIdeal::new(&r, gen);
            let p0 = obj.get("p0").map(|v| Mat::from_json(&r, v)).transpose()?;
            let p1 = obj.get("p1").map(|v| Mat::from_json(&r, v)).transpose()?;
            let rank = match (&p0, obj.get("rank")) {
                (Some(p), _) => p.rows(),
                (None, Some(v)) => v.as_u64().ok_or_else(|| Error::Malformed(format!("bad rank {v}")))? as usize,
                (None, None) => 2,
            };
            let form = match obj.get("form") {
                Some(v) => Mat::from_json(&r, v)?,
                None => Mat::identity(&r, rank),
            };
            let ideal_json: Vec<String> = ideal.elements.iter().map(|a| r.format_elem(*a)).collect();
            match (p0, p1) {
                (Some(p0), Some(p1)) => {
                    let (alpha, rep) = projector_conjugator(&r, &p0, &p1, &form, &ideal, caps)?;
                    let result = json!({"alpha": alpha.to_json(&r), "ideal": ideal_json});
                    Ok(Output::from_report(name, Value::Object(obj), result, rep))
                }
                (None, None) => {
                    let instances = find_projector_instances(&r, &ideal, &form, caps)?;
                    let mut rep = Report::new(format!("every rank-{rank} instance over {}", r.name()));
                    let mut alphas = Vec::new();
                    for inst in &instances {
                        let (alpha, sub) = projector_conjugator(&r, &inst.p0, &inst.p1, &form, &ideal, caps)?;
                        let mut entry = inst.to_json(&r);
                        entry["alpha"] = alpha.to_json(&r);
                        entry["passed"] = json!(sub.passed());
                        rep.check(format!("instance {}", alphas.len()), sub.passed());
                        alphas.push(entry);
                    }
                    rep.value("instances", instances.len());
                    let result = json!({"ideal": ideal_json, "instances": alphas});
                    Ok(Output::from_report(name, Value::Object(obj), result, rep))
                }
                _ => Err(Error::Malformed("give both p0 and p1, or neither".into())),
            }
        }
    }
}
