//! Seeded verification suites: per-model defining-equation reports plus the
//! randomized coboundary-vanishing, Markov-invariance, cochain-complex, and
//! obstruction runs. The command-line `check` verb and the acceptance
//! harness both drive these; every case becomes one pass/fail line, and the
//! same seed always reproduces the same lines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braid::{markov_transform, trace_invariant, BraidWord, MarkovMove};
use crate::bracket::{
    build_bracket_model, cobounded_model, evaluate_morse, passcup_passcap_report,
    random_morse_word, BracketForm, BracketModel,
};
use crate::catalog::{
    bracket_crossing_at_i, cocycle_by_name, jones_deformation, jones_eybo_at, pre_ybo_catalog,
    quandle_by_name, quandle_eybo, quandle_quantum_trace, quandle_weight_verification,
    transposition, transposition_deformation, transposition_eybo, transposition_mu1,
    transposition_phi, transposition_ring, weighted_classical_eybo,
};
use crate::eybo::{
    coboundary_enhancement, theta, verify_enhanced_2cocycle, verify_eybo, DeformedEybo,
    DEFORMATION_VAR,
};
use crate::jones_alex::{build_alexander_model, build_jones_model};
use crate::quandle::{r_operator, Quandle, QuandleCocycle};
use crate::report::Report;
use crate::ring::Ring;
use crate::tensor::TensorOperator;
use crate::ybcoh::{delta1, delta2, full_diff, ybe_defect, Cochain};
use crate::{Error, Result};

/// Suite names the `check` verb accepts.
pub const SUITES: &[&str] = &["ybe", "coboundary", "markov", "complex", "obstruction"];

/// A uniformly random braid word with 2..=max_strands strands and
/// 1..=max_letters letters.
pub fn random_braid<RNG: Rng>(rng: &mut RNG, max_strands: usize, max_letters: usize) -> BraidWord {
    let m = rng.gen_range(2..=max_strands);
    let len = rng.gen_range(1..=max_letters);
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..m) as i32;
            if rng.gen() {
                i
            } else {
                -i
            }
        })
        .collect();
    BraidWord::new(m, letters).expect("letters fit the strand count")
}

fn random_cochain<RNG: Rng>(rng: &mut RNG, ring: &Ring, d: usize, degree: usize) -> Cochain {
    let dim = d.pow(degree as u32);
    let entries = (0..dim * dim).map(|_| ring.int(rng.gen_range(-3..=3))).collect();
    Cochain::new(TensorOperator::from_entries(ring, d, degree, entries).expect("square block"))
        .expect("valid cochain")
}

fn unknown_model(model: &str) -> Error {
    Error::Parse(format!(
        "unknown model `{model}` (expected tau-deform, quandle:<name>, bracket, jones, or alexander)"
    ))
}

/// The cocycle a named quandle model carries by default: the chi weight on
/// the four-element field quandle, the zero weight elsewhere.
fn default_cocycle(name: &str, q: &Quandle) -> Result<QuandleCocycle> {
    if name.eq_ignore_ascii_case("f4") {
        cocycle_by_name(q, "chi")
    } else {
        cocycle_by_name(q, "zero")
    }
}

/// Per-equation report of the defining identities behind a named model.
pub fn construction_suite(model: &str) -> Result<Report> {
    if let Some(rest) = model.strip_prefix("quandle:") {
        return quandle_construction(rest);
    }
    match model {
        "tau-deform" => tau_construction(),
        "bracket" => bracket_construction(),
        "jones" => laurent_construction("jones"),
        "alexander" => laurent_construction("alexander"),
        other => Err(unknown_model(other)),
    }
}

fn tau_construction() -> Result<Report> {
    let ring = transposition_ring();
    let base = transposition_eybo(&ring)?;
    let mut rep = Report::new("tau-deform construction");
    rep.residual(
        "transposition satisfies the braid relation",
        ybe_defect(&transposition(&ring))?.is_zero(),
        "nonzero defect",
    );
    rep.absorb(verify_eybo(&base), "base: ");
    let phi = Cochain::new(transposition_phi(&ring)?)?;
    let (vrep, def) = verify_enhanced_2cocycle(&base, &phi, &transposition_mu1(&ring))?;
    rep.absorb(vrep, "family: ");
    rep.residual(
        "family: deformation object produced",
        def.is_some(),
        "verification refused the family",
    );
    Ok(rep)
}

fn quandle_construction(name: &str) -> Result<Report> {
    let q = quandle_by_name(name)?;
    let psi = default_cocycle(name, &q)?;
    let qq = Ring::rationals();
    let mut rep = Report::new(&format!("quandle:{name} construction"));
    rep.residual(
        "braiding satisfies the braid relation",
        ybe_defect(&r_operator(&q, &qq))?.is_zero(),
        "nonzero defect",
    );
    rep.absorb(verify_eybo(&quandle_eybo(&q, &qq)?), "plain: ");
    let weighted = weighted_classical_eybo(&q, &psi)?;
    rep.residual(
        "weighted braiding satisfies the braid relation",
        ybe_defect(&weighted.r)?.is_zero(),
        "nonzero defect",
    );
    rep.absorb(verify_eybo(&weighted), "weighted: ");
    rep.absorb(quandle_weight_verification(&q, &psi)?, "lift: ");
    Ok(rep)
}

fn bracket_construction() -> Result<Report> {
    let mut rep = Report::new("bracket construction");
    let generic = build_bracket_model(false, BracketForm::GenericA)?;
    let id2 = TensorOperator::identity(generic.ring(), 2, 2);
    rep.residual(
        "crossing satisfies the braid relation",
        ybe_defect(generic.crossing())?.is_zero(),
        "nonzero defect",
    );
    rep.residual(
        "crossing and inverse crossing are mutually inverse",
        generic.crossing().compose(generic.crossing_inverse())? == id2
            && generic.crossing_inverse().compose(generic.crossing())? == id2,
        "composite differs from the identity",
    );
    rep.residual(
        "loop value is -A^2 - A^-2",
        *generic.loop_value() == generic.ring().parse("-A^2 - A^-2")?,
        format!("loop value {}", generic.loop_value()),
    );
    rep.residual(
        "deformed family is rejected at generic A",
        build_bracket_model(true, BracketForm::GenericA).is_err(),
        "generic-A deformation was accepted",
    );

    let deformed = build_bracket_model(true, BracketForm::AEqualsI)?;
    let ring = deformed.ring().clone();
    let base = BracketModel::undeformed_over(&ring, ring.imag()?)?;
    let b = ring.var("B")?;
    let b_bar = base.skein_variable().invert_unit()?.pow(2).try_mul(&b)?.neg();
    let e = base.cap_cup_operator()?;
    let idt = TensorOperator::identity(&ring, 2, 2);
    let phi = idt.scale(&b)?.add(&e.scale(&b_bar)?)?;
    let phi_hat = e.scale(&b)?.add(&idt.scale(&b_bar)?)?;
    rep.residual(
        "first-order term is closed over the undeformed crossing",
        delta2(base.crossing(), &Cochain::new(phi.clone())?)?.op.is_zero(),
        "nonzero residual",
    );
    rep.residual(
        "deformed crossings are mutually inverse to first order",
        deformed.crossing().compose(deformed.crossing_inverse())? == idt
            && deformed.crossing_inverse().compose(deformed.crossing())? == idt,
        "composite differs from the identity",
    );
    rep.residual(
        "kink scalars multiply to 1 to first order",
        deformed.w_plus().try_mul(deformed.w_minus())? == ring.one(),
        format!("w+ w- = {}", deformed.w_plus().try_mul(deformed.w_minus())?),
    );
    rep.absorb(passcup_passcap_report(&base, &phi, &phi_hat)?, "sliding: ");
    // The sliding identities pin the inverse-side coefficients: perturbing
    // either one must break at least one line.
    let off_c = phi_hat.add(&e)?;
    rep.residual(
        "perturbed identity-coefficient on the inverse side is rejected",
        !passcup_passcap_report(&base, &phi, &off_c)?.all_pass(),
        "perturbed terms slipped through",
    );
    let off_cbar = phi_hat.add(&idt)?;
    rep.residual(
        "perturbed loop-coefficient on the inverse side is rejected",
        !passcup_passcap_report(&base, &phi, &off_cbar)?.all_pass(),
        "perturbed terms slipped through",
    );
    Ok(rep)
}

fn laurent_construction(which: &str) -> Result<Report> {
    let model = match which {
        "jones" => build_jones_model()?,
        _ => build_alexander_model()?,
    };
    let ring = model.ring().clone();
    let mut rep = Report::new(&format!("{which} construction"));
    let id2 = TensorOperator::identity(&ring, 2, 2);
    rep.residual(
        "assembled crossing satisfies the braid relation",
        ybe_defect(model.crossing())?.is_zero(),
        "nonzero defect",
    );
    rep.residual(
        "crossing and inverse crossing are mutually inverse",
        model.crossing().compose(model.crossing_inverse())? == id2
            && model.crossing_inverse().compose(model.crossing())? == id2,
        "composite differs from the identity",
    );
    let c = model.components();
    rep.residual(
        "degree-0 part satisfies the braid relation",
        ybe_defect(&c[0])?.is_zero(),
        "nonzero defect",
    );
    rep.residual(
        "degree-0 part is singular",
        matches!(c[0].invert(), Err(Error::Singular { .. })),
        "degree-0 part is invertible",
    );
    rep.residual(
        "degree-1 part is closed over the degree-0 part",
        delta2(&c[0], &Cochain::new(c[1].clone())?)?.op.is_zero(),
        "nonzero residual",
    );
    let id1 = TensorOperator::identity(&ring, 2, 1);
    let one_mu = id1.tensor(model.weight())?;
    let (fwd, bwd) = if which == "jones" {
        (ring.var_pow(DEFORMATION_VAR, -1)?, ring.var(DEFORMATION_VAR)?)
    } else {
        (ring.var(DEFORMATION_VAR)?, ring.var_pow(DEFORMATION_VAR, -1)?)
    };
    rep.residual(
        "positive kink absorbs to its unit scalar",
        one_mu.compose(model.crossing())?.partial_trace(&[2])? == id1.scale(&fwd)?,
        "wrong absorption scalar",
    );
    rep.residual(
        "negative kink absorbs to its unit scalar",
        one_mu.compose(model.crossing_inverse())?.partial_trace(&[2])? == id1.scale(&bwd)?,
        "wrong absorption scalar",
    );
    rep.residual(
        "graded parts assemble to the crossing matrices",
        model.deformed().phis().assemble(&ring, DEFORMATION_VAR)? == *model.crossing()
            && model.deformed().phi_hats().assemble(&ring, DEFORMATION_VAR)?
                == *model.crossing_inverse(),
        "assembly mismatch",
    );
    Ok(rep)
}

/// Randomized coboundary vanishing: for each case, a random single-strand
/// operator is turned into the coboundary deformation of the model's base,
/// and the degree-1 part of the resulting closed-braid (or Morse) invariant
/// must vanish exactly.
pub fn coboundary_suite(model: &str, seed: u64, cases: usize) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep =
        Report::new(&format!("{model} coboundary vanishing, seed {seed}, {cases} cases"));
    if model == "bracket" {
        for case in 0..cases {
            let plain = Ring::gaussian_rationals();
            let entries = (0..4).map(|_| plain.int(rng.gen_range(-3..=3))).collect();
            let f = TensorOperator::from_entries(&plain, 2, 1, entries)?;
            let m = cobounded_model(&f)?;
            let w = random_morse_word(&mut rng, 6);
            let first = evaluate_morse(&w, &m)?.grade("h", 1)?;
            rep.residual(
                &format!("case {case}: degree-1 part vanishes on {w}"),
                first.is_zero(),
                format!("degree-1 part {first}"),
            );
        }
        return Ok(rep);
    }
    let qq = Ring::rationals();
    let (base, max_strands) = if let Some(rest) = model.strip_prefix("quandle:") {
        (quandle_eybo(&quandle_by_name(rest)?, &qq)?, 4)
    } else {
        match model {
            "tau-deform" => (transposition_eybo(&qq)?, 4),
            "jones" => (jones_eybo_at(&qq, &qq.int(2))?, 4),
            other => return Err(unknown_model(other)),
        }
    };
    let d = base.r.local_dim();
    for case in 0..cases {
        let f = random_cochain(&mut rng, &qq, d, 1);
        let def = coboundary_enhancement(&base, &f)?;
        let b = random_braid(&mut rng, max_strands, 6);
        let first = trace_invariant(&b, &def)?.grade(DEFORMATION_VAR, 1)?;
        rep.residual(
            &format!("case {case}: degree-1 part vanishes on {}", b.render()),
            first.is_zero(),
            format!("degree-1 part {first}"),
        );
    }
    Ok(rep)
}

fn random_move<RNG: Rng>(rng: &mut RNG, b: &BraidWord) -> MarkovMove {
    let conjugate = |rng: &mut RNG| {
        let i = rng.gen_range(1..b.strands.max(2)) as i32;
        MarkovMove::Conjugate(if rng.gen() { i } else { -i })
    };
    match rng.gen_range(0..4) {
        0 => MarkovMove::StabilizePositive,
        1 => MarkovMove::StabilizeNegative,
        2 => conjugate(rng),
        _ => {
            // Destabilization needs the word to end in a unique occurrence
            // of the top generator; fall back to conjugation otherwise.
            if markov_transform(b, MarkovMove::Destabilize).is_ok() {
                MarkovMove::Destabilize
            } else {
                conjugate(rng)
            }
        }
    }
}

/// Randomized Markov invariance: for each case, a random braid and a random
/// move; the model's closed-braid invariant must agree exactly before and
/// after the move.
pub fn markov_suite(model: &str, seed: u64, pairs: usize) -> Result<Report> {
    enum Machine {
        Deformed(DeformedEybo),
        QuandleDirect(Quandle, QuandleCocycle),
    }
    let machine = if let Some(rest) = model.strip_prefix("quandle:") {
        let q = quandle_by_name(rest)?;
        let psi = default_cocycle(rest, &q)?;
        Machine::QuandleDirect(q, psi)
    } else {
        match model {
            "tau-deform" => Machine::Deformed(transposition_deformation()?),
            "jones" => Machine::Deformed(jones_deformation()?),
            other => return Err(unknown_model(other)),
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new(&format!("{model} Markov invariance, seed {seed}, {pairs} pairs"));
    for k in 0..pairs {
        let b = random_braid(&mut rng, 4, 6);
        let mv = random_move(&mut rng, &b);
        let moved = markov_transform(&b, mv)?;
        let (before, after) = match &machine {
            Machine::Deformed(def) => (trace_invariant(&b, def)?, trace_invariant(&moved, def)?),
            Machine::QuandleDirect(q, psi) => {
                (quandle_quantum_trace(&b, q, psi)?, quandle_quantum_trace(&moved, q, psi)?)
            }
        };
        rep.residual(
            &format!("pair {k}: {} under {mv:?}", b.render()),
            before == after,
            format!("{before} changed to {after}"),
        );
    }
    Ok(rep)
}

/// The cochain-complex identity: applying the full differential twice kills
/// random cochains of degrees 1 and 2 over each of the three local-dimension-2
/// operators, and the degree-1-into-degree-2 composite vanishes across the
/// whole operator catalog.
pub fn complex_suite(seed: u64, cases: usize) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new(&format!("cochain complex, seed {seed}, {cases} cases per degree"));
    let qq = Ring::rationals();
    let bases = vec![
        ("transposition".to_string(), transposition(&qq)),
        ("jones degree zero".to_string(), build_jones_model()?.components()[0].clone()),
        ("skein crossing at i".to_string(), bracket_crossing_at_i()?),
    ];
    for (name, r) in &bases {
        let ring = r.ring().clone();
        let d = r.local_dim();
        for degree in 1..=2usize {
            for case in 0..cases {
                let c = random_cochain(&mut rng, &ring, d, degree);
                let twice = full_diff(r, &full_diff(r, &c)?)?;
                rep.residual(
                    &format!("{name}: case {case}, twice-differentiated degree-{degree} cochain"),
                    twice.op.is_zero(),
                    "nonzero composite",
                );
            }
        }
    }
    for (name, r) in pre_ybo_catalog()? {
        let ring = r.ring().clone();
        let d = r.local_dim();
        for case in 0..cases.min(3) {
            let f = random_cochain(&mut rng, &ring, d, 1);
            let ddf = delta2(&r, &delta1(&r, &f)?)?;
            rep.residual(
                &format!("{name}: case {case}, coboundary is closed"),
                ddf.op.is_zero(),
                "nonzero composite",
            );
        }
    }
    Ok(rep)
}

/// The degree-2 obstruction identity: for arbitrary operators a0, a1, a2 at
/// local dimension 2, the degree-2 coefficient of the braid-relation defect
/// of a0 + h a1 + h^2 a2 equals the hexagonal part in a2 plus the cubic
/// obstruction term in (a0, a1).
pub fn obstruction_suite(seed: u64, cases: usize) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new(&format!("degree-2 obstruction, seed {seed}, {cases} cases"));
    let qq = Ring::rationals();
    let ext = Ring::builder(crate::ring::Base::Rationals).poly(DEFORMATION_VAR).build();
    let h = ext.var(DEFORMATION_VAR)?;
    let h2 = h.try_mul(&h)?;
    for case in 0..cases {
        let a: Vec<TensorOperator> =
            (0..3).map(|_| random_cochain(&mut rng, &qq, 2, 2).op).collect();
        let total = a[0]
            .coerce_into(&ext)?
            .add(&a[1].coerce_into(&ext)?.scale(&h)?)?
            .add(&a[2].coerce_into(&ext)?.scale(&h2)?)?;
        let defect2 = ybe_defect(&total)?.grade(DEFORMATION_VAR, 2)?;
        let closed = delta2(&a[0], &Cochain::new(a[2].clone())?)?.op;
        let split = closed.add(&theta(&[a[0].clone(), a[1].clone()], 2)?)?;
        rep.residual(
            &format!("case {case}: degree-2 defect coefficient splits"),
            defect2 == split,
            "split disagrees with the defect coefficient",
        );
    }
    Ok(rep)
}

/// Dispatch for the command-line `check` verb, with the default case counts.
pub fn run_suite(suite: &str, model: Option<&str>, seed: u64) -> Result<Report> {
    let need = || {
        model.ok_or_else(|| Error::Parse(format!("suite `{suite}` needs --model")))
    };
    let none = || match model {
        Some(m) => Err(Error::Parse(format!("suite `{suite}` takes no model, got `{m}`"))),
        None => Ok(()),
    };
    match suite {
        "ybe" => construction_suite(need()?),
        "coboundary" => coboundary_suite(need()?, seed, 25),
        "markov" => markov_suite(need()?, seed, 50),
        "complex" => {
            none()?;
            complex_suite(seed, 10)
        }
        "obstruction" => {
            none()?;
            obstruction_suite(seed, 20)
        }
        other => Err(Error::Parse(format!(
            "unknown suite `{other}` (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}
