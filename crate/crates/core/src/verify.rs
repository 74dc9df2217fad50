//! The bundled acceptance suites: twelve exact checks at desk scale.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::clauwens::{
    find_projector_instances, kappa_nondegenerate, lemma1_check, lemma2_check, lemma4_recursion, linearization_soundness,
    linearize, projector_conjugator, sqrt_check, sqrt_one_plus_nu_t, AlmostHermitian, DeltaDatum, PolyQuadForm,
    SquareZeroIdeal,
};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::forms::{Epsilon, QuadFormEl, Variant};
use crate::groups::{
    dual_numbers_iso, enumerate_group, enumerate_unitary, extension_check, random_invertible, section_check,
    whitehead_factorization,
};
use crate::invariants::{arf_retraction_check, dickson_check, witt_classify, xi_char2_field, xi_group, WittTable};
use crate::linalg::{all_matrices, Mat};
use crate::report::Report;
use crate::ring::{FiniteRing, InvolutiveRing, RingSpec, SignFlag};
use crate::Matrix;

const SEED: u64 = 0x5eed_2a11;

/// One acceptance suite.
#[derive(Clone, Copy)]
pub struct Criterion {
    pub number: usize,
    pub name: &'static str,
    pub budget: Duration,
    run: fn(&Caps) -> Result<Report>,
}

impl Criterion {
    pub fn run(&self, caps: &Caps) -> Outcome {
        let start = Instant::now();
        let report = match (self.run)(caps) {
            Ok(rep) => rep,
            Err(e) => {
                let mut rep = Report::new(self.name);
                rep.check_with("suite ran to completion", false, e.to_string());
                rep
            }
        };
        Outcome { number: self.number, name: self.name, budget: self.budget, elapsed: start.elapsed(), report }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub number: usize,
    pub name: &'static str,
    pub budget: Duration,
    pub elapsed: Duration,
    pub report: Report,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }

    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    /// Timing is left out so that the document is reproducible.
    pub fn to_json(&self) -> Value {
        json!({
            "criterion": self.number,
            "name": self.name,
            "passed": self.passed(),
            "budget_seconds": self.budget.as_secs(),
            "report": self.report.to_json(),
        })
    }

    pub fn summary_line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "criterion {:>2}: {status} {} ({:.2}s, budget {}s)",
            self.number,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        );
        if !self.within_budget() {
            line.push_str(" [over budget]");
        }
        for c in self.report.failures() {
            line.push_str(&format!("\n    failed: {}", c.name));
            if let Some(d) = &c.detail {
                line.push_str(&format!(" ({d})"));
            }
        }
        line
    }
}

pub fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        Criterion { number: 1, name: "Witt group of F2", budget: s(10), run: witt_f2 },
        Criterion { number: 2, name: "split unit collapses min and max", budget: s(30), run: split_unit_collapse },
        Criterion { number: 3, name: "extension exactness", budget: s(10), run: extension_exactness },
        Criterion { number: 4, name: "section and dual numbers", budget: s(60), run: section_and_dual },
        Criterion { number: 5, name: "Xi computations", budget: s(10), run: xi_computations },
        Criterion { number: 6, name: "Whitehead identities", budget: s(10), run: whitehead_identities },
        Criterion { number: 7, name: "cup-product sweep", budget: s(300), run: cup_product_sweep },
        Criterion { number: 8, name: "linearization", budget: s(300), run: linearization_sweep },
        Criterion { number: 9, name: "f_p, Z_p recursion", budget: s(30), run: lemma4_suite },
        Criterion { number: 10, name: "square root of 1 + νt", budget: s(10), run: sqrt_suite },
        Criterion { number: 11, name: "projector conjugation", budget: s(10), run: projector_suite },
        Criterion { number: 12, name: "Dickson invariant", budget: s(60), run: dickson_suite },
    ]
}

pub fn criterion(number: usize) -> Result<Criterion> {
    criteria()
        .into_iter()
        .find(|c| c.number == number)
        .ok_or_else(|| Error::Precondition(format!("no criterion {number}; expected 1 to 12")))
}

pub fn verify_all(caps: &Caps) -> Vec<Outcome> {
    criteria().iter().map(|c| c.run(caps)).collect()
}

fn ring(spec: RingSpec) -> Result<FiniteRing> {
    FiniteRing::new(&spec)
}

/// Counts failures of a property over many cases, keeping the first counterexample.
struct Tally {
    name: String,
    cases: u64,
    failed: u64,
    first: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally { name: name.to_string(), cases: 0, failed: 0, first: None }
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.first.is_none() {
                self.first = Some(case());
            }
        }
    }

    fn into_report(self, rep: &mut Report) {
        let detail = match self.first {
            Some(c) => format!("{} of {} cases fail, first: {c}", self.failed, self.cases),
            None => format!("{} cases", self.cases),
        };
        rep.check_with(self.name, self.failed == 0 && self.cases > 0, detail);
    }
}

fn witt_f2(caps: &Caps) -> Result<Report> {
    let r = ring(RingSpec::fp(2))?;
    let t = witt_classify(&r, Epsilon::Plus, Variant::Min, 4, caps)?;
    let mut rep = Report::new("quadratic Witt classes over F2 up to rank 4");
    rep.value("table", t.to_json());
    rep.check_with("exactly two stable classes", t.classes.len() == 2, format!("{} classes", t.classes.len()));
    let arfs: BTreeSet<Option<u8>> = t.classes.iter().map(|c| c.arf).collect();
    rep.check("the Arf invariant separates the classes", arfs.len() == t.classes.len() && !arfs.contains(&None));
    Ok(rep)
}

fn table_shape(t: &WittTable) -> Vec<Vec<(usize, usize)>> {
    t.classes.iter().map(|c| c.orbits.iter().map(|&o| (t.orbits[o].rank, t.orbits[o].size)).collect()).collect()
}

fn split_unit_collapse(caps: &Caps) -> Result<Report> {
    let r = ring(RingSpec::f4())?;
    let q = QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1);
    let mut rep = Report::new("O^min = O^max over F4 with λ = w");
    rep.value("lambda", r.split_unit().map(|l| r.format_elem(l)));
    let omin = enumerate_group(Variant::Min, &q, caps)?;
    let omax = enumerate_unitary(&q.associated_hermitian(), caps)?;
    rep.value("order_min", omin.order());
    rep.value("order_max", omax.order());
    rep.check("O^min and O^max are equal as sets", omin.matrix_set() == omax.matrix_set());
    let tmin = witt_classify(&r, Epsilon::Plus, Variant::Min, 2, caps)?;
    let tmax = witt_classify(&r, Epsilon::Plus, Variant::Max, 2, caps)?;
    rep.value("classes_min", tmin.classes.len());
    rep.value("classes_max", tmax.classes.len());
    rep.check("min and max Witt tables coincide up to rank 2", table_shape(&tmin) == table_shape(&tmax));
    Ok(rep)
}

fn extension_exactness(caps: &Caps) -> Result<Report> {
    let mut rep = Report::new("S(E) → O^el → O^min on hyperbolic(1)");
    for spec in [RingSpec::fp(2), RingSpec::f4()] {
        let r = ring(spec)?;
        let sub = extension_check(&QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1), caps)?;
        rep.absorb(&r.name(), sub);
    }
    Ok(rep)
}

fn section_and_dual(caps: &Caps) -> Result<Report> {
    let r = ring(RingSpec::f4())?;
    let q = QuadFormEl::hyperbolic(&r, Epsilon::Plus, 1);
    let mut rep = Report::new("split section and O^el(E) ≅ O^max(E(e)) over F4");
    rep.absorb("section", section_check(&q, caps)?);
    rep.absorb("dual numbers", dual_numbers_iso(&q, caps)?);
    Ok(rep)
}

fn xi_computations(caps: &Caps) -> Result<Report> {
    let f2 = ring(RingSpec::fp(2))?;
    let f4 = ring(RingSpec::f4())?;
    let mut rep = Report::new("Ξ and the Arf retraction");
    let xi_f2 = xi_group(&f2, Epsilon::Plus, caps)?;
    let xi_f2_field = xi_char2_field(&f2, caps)?;
    let xi_f4 = xi_group(&f4, Epsilon::Plus, caps)?;
    rep.value("xi_F2", xi_f2.describe());
    rep.value("xi_F2_field", xi_f2_field.describe());
    rep.value("xi_F4", xi_f4.describe());
    rep.check("Ξ(F2) ≅ Z/2", xi_f2.invariant_factors == vec![2]);
    rep.check("both presentations of Ξ(F2) agree", xi_f2.invariant_factors == xi_f2_field.invariant_factors);
    rep.check("Ξ(F4, frobenius) = 0", xi_f4.is_trivial());
    for spec in [RingSpec::fp(2), RingSpec::f4_trivial()] {
        let r = ring(spec)?;
        rep.absorb(&format!("retraction {}", r.name()), arf_retraction_check(&r, caps)?);
    }
    Ok(rep)
}

fn whitehead_identities(caps: &Caps) -> Result<Report> {
    let mut rep = Report::new("Whitehead block identities on 100 random pairs per ring");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for spec in [RingSpec::fp(2), RingSpec::f4(), RingSpec::zn(7), RingSpec::zn(8)] {
        let r = ring(spec)?;
        let mut tally = Tally::new(&format!("{}: all identities hold", r.name()));
        for _ in 0..100 {
            let n = rng.gen_range(1..=3);
            let a = random_invertible(&r, n, &mut rng, caps)?;
            let b = random_invertible(&r, n, &mut rng, caps)?;
            let sub = whitehead_factorization(&r, &a, &b, caps)?;
            tally.record(sub.passed(), || {
                json!({"alpha": a.to_json(&r), "beta": b.to_json(&r), "failed": sub.failures()}).to_string()
            });
        }
        tally.into_report(&mut rep);
    }
    Ok(rep)
}

/// Every θ of rank 1 or 2 and degree at most 2 over `r`, split by nondegeneracy.
pub fn theta_sweep(r: &FiniteRing, eps: Epsilon) -> Result<(Vec<PolyQuadForm>, usize)> {
    let mut good = Vec::new();
    let mut degenerate = 0;
    for n in 1..=2 {
        for stacked in all_matrices(r, 3 * n, n) {
            let coeffs: Vec<Matrix> = (0..3).map(|k| stacked.submatrix(k * n, 0, n, n)).collect();
            let theta = PolyQuadForm::new(r.clone(), eps, coeffs)?;
            if theta.is_nondegenerate()? {
                good.push(theta);
            } else {
                degenerate += 1;
            }
        }
    }
    Ok((good, degenerate))
}

fn small_data(r: &FiniteRing, caps: &Caps) -> Result<Vec<DeltaDatum>> {
    let mut data = Vec::new();
    for eta in [Epsilon::Plus, Epsilon::Minus] {
        if eta.is_minus() && eta.elem(r) == r.one() {
            continue;
        }
        for m in 1..=2 {
            data.extend(DeltaDatum::all(r, eta, m, caps)?);
        }
    }
    Ok(data)
}

/// Shifts `Z − εZ*`: every `Z` of degree ≤ 2 at rank 1, the monomials
/// `E_ij sᵏ` at rank 2.
fn shifts(r: &FiniteRing, n: usize) -> Vec<Vec<Matrix>> {
    if n == 1 {
        return all_matrices(r, 3, 1)
            .filter(|m| !m.is_zero(r))
            .map(|m| (0..3).map(|k| m.submatrix(k, 0, 1, 1)).collect())
            .collect();
    }
    let mut out = Vec::new();
    for k in 0..3 {
        for i in 0..n {
            for j in 0..n {
                let mut z = vec![Mat::zeros(r, n, n); k + 1];
                z[k].set(i, j, r.one());
                out.push(z);
            }
        }
    }
    out
}

fn theta_label(theta: &PolyQuadForm, d: &DeltaDatum) -> String {
    json!({"theta": theta.to_json(), "delta": d.form.phi0.to_json(&d.form.ring), "eta": d.eta().as_i64()}).to_string()
}

fn cup_product_sweep(caps: &Caps) -> Result<Report> {
    let r = ring(RingSpec::fp(2))?;
    let (thetas, degenerate) = theta_sweep(&r, Epsilon::Plus)?;
    let data = small_data(&r, caps)?;
    let mut rep = Report::new("κ over rank ≤ 2, degree ≤ 2 θ over F2 against every rank ≤ 2 δ");
    rep.value("nondegenerate_theta", thetas.len());
    rep.value("degenerate_theta_skipped", degenerate);
    rep.value("delta_data", data.len());
    let mut nondeg = Tally::new("κ + εηκ* is invertible");
    let mut lemma1 = Tally::new("κ + εηκ* = (1 ⊗ Δ)·H(φ)");
    let mut lemma2 = Tally::new("Z − εZ* leaves κ min-equal");
    for theta in &thetas {
        let zs = shifts(&r, theta.rank());
        for d in &data {
            nondeg.record(kappa_nondegenerate(theta, d)?, || theta_label(theta, d));
            let l1 = lemma1_check(theta, d)?;
            lemma1.record(l1.passed(), || theta_label(theta, d));
            for z in &zs {
                let l2 = lemma2_check(theta, z, d)?;
                lemma2.record(l2.passed(), || theta_label(theta, d));
            }
        }
    }
    for t in [nondeg, lemma1, lemma2] {
        t.into_report(&mut rep);
    }
    Ok(rep)
}

fn linearization_sweep(caps: &Caps) -> Result<Report> {
    let r = ring(RingSpec::fp(2))?;
    let (thetas, _) = theta_sweep(&r, Epsilon::Plus)?;
    let data = small_data(&r, caps)?;
    let mut rep = Report::new("linearization of every nondegenerate θ in the sweep");
    let mut transcript = Tally::new("every transcript step verifies");
    let mut almost = Tally::new("output satisfies g* = εg(1 + N) with N nilpotent");
    let mut sound = Tally::new("cup-products agree up to the recorded stabilization");
    let mut stabilizations: BTreeMap<String, usize> = BTreeMap::new();
    let mut max_index = 0;
    for theta in &thetas {
        let lin = linearize(theta, caps)?;
        transcript.record(lin.steps.iter().all(|s| s.passed), || theta.to_json().to_string());
        let n = &lin.output.n;
        let nilpotent = n.pow(&r, lin.output.index).is_zero(&r);
        almost.record(lin.output.identity_holds() && nilpotent, || theta.to_json().to_string());
        max_index = max_index.max(lin.output.index);
        *stabilizations.entry(format!("{:?}", lin.stabilization)).or_default() += 1;
        for d in &data {
            let s = linearization_soundness(&lin, d)?;
            sound.record(s.passed(), || theta_label(theta, d));
        }
    }
    rep.value("inputs", thetas.len());
    rep.value("stabilizations", json!(stabilizations));
    rep.value("max_nilpotency_index", max_index);
    for t in [transcript, almost, sound] {
        t.into_report(&mut rep);
    }
    Ok(rep)
}

/// One almost-hermitian `σ` per nilpotency index, from all of `M_n(A)`.
fn sigma_by_index(r: &FiniteRing, eps: Epsilon, n: usize, caps: &Caps) -> BTreeMap<usize, AlmostHermitian> {
    let mut found = BTreeMap::new();
    for g in all_matrices(r, n, n) {
        if let Ok(h) = AlmostHermitian::new(r.clone(), eps, g, caps) {
            found.entry(h.index).or_insert(h);
        }
    }
    found
}

/// Random search at rank `n` until indices `1..=max` are all met.
fn sigma_by_index_random(
    r: &FiniteRing,
    eps: Epsilon,
    n: usize,
    max: usize,
    rng: &mut ChaCha8Rng,
    caps: &Caps,
) -> Result<BTreeMap<usize, AlmostHermitian>> {
    let mut found = BTreeMap::new();
    for _ in 0..200_000 {
        let g = random_invertible(r, n, rng, caps)?;
        if let Ok(h) = AlmostHermitian::new(r.clone(), eps, g, caps) {
            found.entry(h.index).or_insert(h);
        }
        if (1..=max).all(|k| found.contains_key(&k)) {
            break;
        }
    }
    Ok(found)
}

fn lemma4_suite(caps: &Caps) -> Result<Report> {
    let mut rep = Report::new("residual of the f_p, Z_p recursion vanishes once p ≥ index");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let f2 = ring(RingSpec::fp(2))?;
    let mut sig_f2 = sigma_by_index(&f2, Epsilon::Plus, 3, caps);
    for (k, s) in sigma_by_index_random(&f2, Epsilon::Plus, 4, 3, &mut rng, caps)? {
        sig_f2.entry(k).or_insert(s);
    }
    let data_f2 = DeltaDatum::all(&f2, Epsilon::Plus, 2, caps)?;
    let zetas_f2: Vec<Matrix> = all_matrices(&f2, 2, 2).collect();

    let f4 = ring(RingSpec::f4())?;
    let mut sig_f4 = sigma_by_index(&f4, Epsilon::Plus, 2, caps);
    for (k, s) in sigma_by_index_random(&f4, Epsilon::Plus, 3, 3, &mut rng, caps)? {
        sig_f4.entry(k).or_insert(s);
    }
    let mut data_f4 = DeltaDatum::all(&f4, Epsilon::Plus, 1, caps)?;
    data_f4.push(DeltaDatum::new(QuadFormEl::hyperbolic(&f4, Epsilon::Plus, 1), caps)?);

    for (r, sigmas, data, zetas) in
        [(&f2, &sig_f2, &data_f2, Some(&zetas_f2)), (&f4, &sig_f4, &data_f4, None)]
    {
        let name = r.name();
        let indices: Vec<usize> = sigmas.keys().copied().filter(|&k| k <= 3).collect();
        rep.value(&format!("indices_{name}"), json!(indices));
        rep.check_with(
            format!("{name}: σ of every index 1, 2, 3 constructed"),
            (1..=3).all(|k| sigmas.contains_key(&k)),
            format!("{indices:?}"),
        );
        let mut tally = Tally::new(&format!("{name}: recursion checks hold"));
        for (&k, sigma) in sigmas.iter().filter(|(&k, _)| k <= 3) {
            for d in data.iter() {
                let m = d.rank();
                let zs: Vec<Matrix> = match zetas {
                    Some(z) if m == 2 => z.clone(),
                    _ if m == 1 => all_matrices(r, 1, 1).collect(),
                    _ => (0..16).map(|_| Mat::from_fn(m, m, |_, _| crate::El(rng.gen_range(0..r.size() as u32)))).collect(),
                };
                for zeta in &zs {
                    let out = lemma4_recursion(sigma, d, zeta, k + 1)?;
                    let sub = out.report();
                    tally.record(sub.passed(), || out.to_json().to_string());
                }
            }
        }
        tally.into_report(&mut rep);
    }
    Ok(rep)
}

/// Every `ν` with `ν* = ν`, from its upper triangle.
fn self_adjoint_matrices(r: &FiniteRing, n: usize) -> impl Iterator<Item = Matrix> + '_ {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    all_matrices(r, 1, pairs.len()).filter_map(move |row| {
        let mut nu = Mat::zeros(r, n, n);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let a = *row.get(0, k);
            if i == j && r.conj(&a) != a {
                return None;
            }
            nu.set(i, j, a);
            nu.set(j, i, r.conj(&a));
        }
        Some(nu)
    })
}

fn sqrt_suite(_caps: &Caps) -> Result<Report> {
    let mut rep = Report::new("γ(t)*γ(t) = 1 + νt");
    let cases: [(RingSpec, &str, Vec<usize>); 2] =
        [(RingSpec::f4(), "w", vec![1, 2, 3]), (RingSpec::zn(9), "5", vec![1, 2, 3])];
    for (spec, lambda, sizes) in cases {
        let r = ring(spec)?;
        let l = r.parse_elem(lambda)?;
        let name = r.name();
        let mut tally = Tally::new(&format!("{name}, λ = {lambda}: identity holds for every self-adjoint nilpotent ν"));
        let mut indices = BTreeSet::new();
        for n in sizes {
            for nu in self_adjoint_matrices(&r, n) {
                match nu.nilpotency_index(&r) {
                    Some(k) if k <= 3 => {}
                    _ => continue,
                }
                let sq = sqrt_one_plus_nu_t(&r, &nu, Some(l))?;
                indices.insert(sq.index);
                let sub = sqrt_check(&sq);
                tally.record(sub.passed(), || sq.to_json().to_string());
            }
        }
        rep.value(&format!("indices_{name}"), json!(indices));
        tally.into_report(&mut rep);
    }
    let z9 = ring(RingSpec::zn(9))?;
    let nu = Mat::from_fn(2, 2, |i, j| if i != j { z9.from_int(3) } else { z9.zero() });
    let sq = sqrt_one_plus_nu_t(&z9, &nu, Some(z9.from_int(5)))?;
    rep.value("example_Z9", sq.to_json());
    rep.absorb("ν = 3E12 + 3E21 over Z/9", sqrt_check(&sq));
    Ok(rep)
}

fn projector_suite(caps: &Caps) -> Result<Report> {
    let mut rep = Report::new("α conjugates p1 to p0 on every rank-2 instance");
    let cases = [
        (RingSpec::zn(4), "2"),
        (RingSpec::zn(9), "3"),
        (RingSpec::dual(RingSpec::fp(3), SignFlag::Minus), "e"),
        (RingSpec::dual(RingSpec::fp(2), SignFlag::Minus), "e"),
    ];
    let mut nontrivial_total = 0;
    for (spec, gen) in cases {
        let r = ring(spec)?;
        let ideal = SquareZeroIdeal::new(&r, r.parse_elem(gen)?);
        let swap = Mat::from_fn(2, 2, |i, j| if i != j { r.one() } else { r.zero() });
        let mut tally = Tally::new(&format!("{}, I = ({gen}): all conclusions hold", r.name()));
        let mut instances = 0;
        let mut nontrivial = 0;
        for form in [Mat::identity(&r, 2), swap] {
            for inst in find_projector_instances(&r, &ideal, &form, caps)? {
                instances += 1;
                if inst.p0 != inst.p1 {
                    nontrivial += 1;
                }
                let (_, sub) = projector_conjugator(&r, &inst.p0, &inst.p1, &form, &ideal, caps)?;
                tally.record(sub.passed(), || inst.to_json(&r).to_string());
            }
        }
        rep.value(&format!("instances_{}", r.name()), json!({"all": instances, "p0 ≠ p1": nontrivial}));
        nontrivial_total += nontrivial;
        tally.into_report(&mut rep);
    }
    rep.check("some instance has p0 ≠ p1", nontrivial_total > 0);
    Ok(rep)
}

fn dickson_suite(caps: &Caps) -> Result<Report> {
    let r = ring(RingSpec::fp(2))?;
    let mut rep = Report::new("Dickson invariant on O^min(hyperbolic(m)) over F2");
    for m in 1..=2 {
        rep.absorb(&format!("m = {m}"), dickson_check(&QuadFormEl::hyperbolic(&r, Epsilon::Plus, m), caps)?);
    }
    Ok(rep)
}
