//! Ready-made models: the named operators, verified deformations, and braid
//! words that the randomized suites, the acceptance tests, and the
//! command-line tool all share.
//!
//! Every deformation handed out here goes through the public verification
//! entry points, so asking for a model by name re-checks its defining
//! equations on the spot.

use std::collections::BTreeMap;

use crate::braid::{braid_operator, BraidWord};
use crate::bracket::BracketModel;
use crate::eybo::{
    verify_enhanced_2cocycle, DeformedEybo, Eybo, Mode, DEFORMATION_VAR,
};
use crate::jones_alex::{build_alexander_model, build_jones_model};
use crate::quandle::{
    alexander_quandle_f4, chi_cocycle, dihedral_quandle, phi_hat_operator, phi_operator,
    r_inverse_operator, r_operator, Quandle, QuandleCocycle,
};
use crate::report::Report;
use crate::ring::{Base, Ring, RingElement};
use crate::tensor::TensorOperator;
use crate::ybcoh::Cochain;
use crate::{Error, Result};

/// The flip x tensor y -> y tensor x on a two-dimensional local space.
pub fn transposition(ring: &Ring) -> TensorOperator {
    TensorOperator::from_permutation(ring, 2, 2, &[0, 2, 1, 3]).expect("valid permutation")
}

/// Coefficient ring for the one-parameter deformation family of the flip.
pub fn transposition_ring() -> Ring {
    Ring::builder(Base::Rationals).poly("q").build()
}

/// (flip, 1, 1, identity) as an enhanced operator over any coefficient ring.
pub fn transposition_eybo(ring: &Ring) -> Result<Eybo> {
    Eybo::new(
        transposition(ring),
        transposition(ring),
        ring.one(),
        ring.one(),
        TensorOperator::identity(ring, 2, 1),
    )
}

/// The deformation direction of the flip: it feeds both mixed states and
/// the top state into 01 and 10 with opposite signs, with the crossed
/// entries carrying the free parameter q.
pub fn transposition_phi(ring: &Ring) -> Result<TensorOperator> {
    let q = ring.var("q")?;
    let mut t = TensorOperator::zero(ring, 2, 2);
    t.set(1, 1, ring.one());
    t.set(2, 1, q.clone());
    t.set(3, 1, ring.one());
    t.set(1, 2, q);
    t.set(2, 2, ring.int(-1));
    t.set(3, 2, ring.int(-1));
    Ok(t)
}

/// Weight correction attached to the family by the partial-trace rule
/// mu_i^k = -phi_{i0}^{k0} - phi_{i1}^{k1}.
pub fn transposition_mu1(ring: &Ring) -> TensorOperator {
    TensorOperator::from_int_rows(ring, 2, 1, &[[-1, 0], [-1, 1]]).expect("2 x 2 rows")
}

fn verified(rep: Report, def: Option<DeformedEybo>, what: &str) -> Result<DeformedEybo> {
    def.ok_or_else(|| {
        Error::InternalAssertion(format!("{what} failed its own verification:\n{}", rep.render()))
    })
}

/// The verified first-order deformation of the flip, with q symbolic.
pub fn transposition_deformation() -> Result<DeformedEybo> {
    let ring = transposition_ring();
    let base = transposition_eybo(&ring)?;
    let phi = Cochain::new(transposition_phi(&ring)?)?;
    let (rep, def) = verify_enhanced_2cocycle(&base, &phi, &transposition_mu1(&ring))?;
    verified(rep, def, "the flip deformation family")
}

/// Look up a quandle by its command-line name: `F4` or `dihedral:<n>`.
pub fn quandle_by_name(name: &str) -> Result<Quandle> {
    if name.eq_ignore_ascii_case("f4") {
        return Ok(alexander_quandle_f4());
    }
    if let Some(rest) = name.strip_prefix("dihedral:") {
        let n: usize = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad dihedral order `{rest}`")))?;
        return dihedral_quandle(n);
    }
    Err(Error::Parse(format!(
        "unknown quandle `{name}` (expected F4 or dihedral:<n>)"
    )))
}

/// Look up a cocycle for a quandle by name: `chi` (four-element field
/// quandle only) or `zero`.
pub fn cocycle_by_name(q: &Quandle, name: &str) -> Result<QuandleCocycle> {
    match name {
        "chi" => {
            if q.size() != 4 {
                return Err(Error::Unsupported(format!(
                    "the chi cocycle lives on the 4-element field quandle, not on {} elements",
                    q.size()
                )));
            }
            Ok(chi_cocycle(q))
        }
        "zero" => QuandleCocycle::new(q, vec![vec![0; q.size()]; q.size()], vec![2]),
        other => Err(Error::Parse(format!("unknown cocycle `{other}` (expected chi or zero)"))),
    }
}

/// (R_Q, 1, 1, identity): the braiding of a quandle as an enhanced operator.
pub fn quandle_eybo(q: &Quandle, ring: &Ring) -> Result<Eybo> {
    Eybo::new(
        r_operator(q, ring),
        r_inverse_operator(q, ring),
        ring.one(),
        ring.one(),
        TensorOperator::identity(ring, q.size(), 1),
    )
}

/// Verification report for the first-order integer lift of a quandle
/// braiding by a cocycle weight: phi(x tensor y) = psi(x,y) R(x tensor y),
/// no weight correction. The closedness check compares integer sums of
/// weights, so for a weight that only satisfies its condition modulo the
/// group order it fails with an even residual; the commutation and trace
/// lines hold outright because the weight operator is the identity and psi
/// vanishes on the diagonal.
pub fn quandle_weight_verification(q: &Quandle, psi: &QuandleCocycle) -> Result<Report> {
    let ring = Ring::builder(Base::Integers).build();
    let base = quandle_eybo(q, &ring)?;
    let phi = Cochain::new(phi_operator(q, psi, &ring))?;
    let mu1 = TensorOperator::zero(&ring, q.size(), 1);
    let (rep, _) = verify_enhanced_2cocycle(&base, &phi, &mu1)?;
    Ok(rep)
}

/// The braid trace of the first-order weighted braiding R + h psi R (and
/// R^-1 + h phi_hat on negative letters) over the integers with h^2 = 0.
/// The degree-0 part counts colorings of the closure; the degree-1
/// coefficient sums signed crossing weights over all colorings. This walks
/// the tensor representation of the word; `state_sum_invariants` computes
/// the same quantity by enumerating colorings, and the two must agree.
pub fn quandle_quantum_trace(
    b: &BraidWord,
    q: &Quandle,
    psi: &QuandleCocycle,
) -> Result<RingElement> {
    let ring = Ring::builder(Base::Integers).trunc(DEFORMATION_VAR, 1).build();
    let h = ring.var(DEFORMATION_VAR)?;
    let fwd = r_operator(q, &ring).add(&phi_operator(q, psi, &ring).scale(&h)?)?;
    let bwd =
        r_inverse_operator(q, &ring).add(&phi_hat_operator(q, psi, &ring).scale(&h)?)?;
    Ok(braid_operator(b, &fwd, &bwd)?.trace())
}

/// The quandle braiding with each crossing scaled by zeta^{psi(x,y)}, over
/// the integral group ring of the cocycle's target. Its braid trace is the
/// classical cocycle state sum.
pub fn weighted_classical_eybo(q: &Quandle, psi: &QuandleCocycle) -> Result<Eybo> {
    let order = psi.group_orders[0];
    let ring = Ring::builder(Base::Integers).group("zeta", order).build();
    let d = q.size();
    let mut r = TensorOperator::zero(&ring, d, 2);
    let mut r_inv = TensorOperator::zero(&ring, d, 2);
    for x in 0..d {
        for y in 0..d {
            r.set(y * d + q.op(x, y), x * d + y, ring.gen_pow("zeta", psi.value(x, y))?);
            let z = q.left_divide(x, y);
            r_inv.set(z * d + x, x * d + y, ring.gen_pow("zeta", -psi.value(z, x))?);
        }
    }
    Eybo::new(r, r_inv, ring.one(), ring.one(), TensorOperator::identity(&ring, d, 1))
}

/// The Jones crossing with the deformation variable specialized to an
/// invertible scalar c, enhanced by the weight diag(1, c^2) and the kink
/// scalars alpha = c^-1, beta = c. A small honest enhanced operator for
/// suites that need a base with a nonvanishing coboundary map.
pub fn jones_eybo_at(ring: &Ring, c: &RingElement) -> Result<Eybo> {
    let ci = c.invert_unit()?;
    let c2 = c.try_mul(c)?;
    let one = ring.one();
    let mut r = TensorOperator::zero(ring, 2, 2);
    r.set(0, 0, one.clone());
    r.set(1, 2, c.clone());
    r.set(2, 1, c.clone());
    r.set(2, 2, one.try_sub(&c2)?);
    r.set(3, 3, one.clone());
    let mut r_inv = TensorOperator::zero(ring, 2, 2);
    r_inv.set(0, 0, one.clone());
    r_inv.set(1, 1, one.try_sub(&ci.try_mul(&ci)?)?);
    r_inv.set(1, 2, ci.clone());
    r_inv.set(2, 1, ci.clone());
    r_inv.set(3, 3, one.clone());
    let mut mu = TensorOperator::zero(ring, 2, 1);
    mu.set(0, 0, one);
    mu.set(1, 1, c2);
    Eybo::new(r, r_inv, ci, c.clone(), mu)
}

/// The Jones crossing as an exact Laurent deformation carrying its honest
/// kink scalars alpha = h^-1, beta = h, so that the normalized braid trace
/// is Markov-invariant as is.
pub fn jones_deformation() -> Result<DeformedEybo> {
    let model = build_jones_model()?;
    let base = Ring::rationals();
    let ext = DeformedEybo::extended_ring(&base, Mode::Laurent)?;
    let alpha = ext.var_pow(DEFORMATION_VAR, -1)?;
    let beta = ext.var(DEFORMATION_VAR)?;
    let comps = model.components();
    let hats = model.hat_components();
    let mut phis = BTreeMap::new();
    let mut phi_hats = BTreeMap::new();
    for k in 0..3usize {
        if !comps[k].is_zero() {
            phis.insert(k as i64, comps[k].clone());
        }
        if !hats[k].is_zero() {
            phi_hats.insert(-(k as i64), hats[k].clone());
        }
    }
    DeformedEybo::laurent_partial(
        &base,
        2,
        2,
        phis,
        phi_hats,
        model.weight_components().clone(),
        alpha,
        beta,
    )
}

/// The skein crossing with its variable specialized at i, over the Gaussian
/// rationals.
pub fn bracket_crossing_at_i() -> Result<TensorOperator> {
    let ring = Ring::gaussian_rationals();
    let i = ring.imag()?;
    let model = BracketModel::undeformed_over(&ring, i)?;
    Ok(model.crossing().clone())
}

/// Named braid-relation solutions for the randomized suites: the flip, two
/// quandle braidings, the singular degree-zero Jones and Alexander
/// operators, and the skein crossing at i.
pub fn pre_ybo_catalog() -> Result<Vec<(String, TensorOperator)>> {
    let qq = Ring::rationals();
    Ok(vec![
        ("transposition".into(), transposition(&qq)),
        ("dihedral-3 braiding".into(), r_operator(&dihedral_quandle(3)?, &qq)),
        ("field-quandle braiding".into(), r_operator(&alexander_quandle_f4(), &qq)),
        ("jones degree zero".into(), build_jones_model()?.components()[0].clone()),
        ("alexander degree zero".into(), build_alexander_model()?.components()[0].clone()),
        ("skein crossing at i".into(), bracket_crossing_at_i()?),
    ])
}

/// Every enhanced operator the catalog knows how to build outright.
pub fn eybo_catalog() -> Result<Vec<(String, Eybo)>> {
    let qq = Ring::rationals();
    let f4 = alexander_quandle_f4();
    let chi = chi_cocycle(&f4);
    Ok(vec![
        ("flip".into(), transposition_eybo(&qq)?),
        ("dihedral-3 braiding".into(), quandle_eybo(&dihedral_quandle(3)?, &qq)?),
        ("field-quandle braiding".into(), quandle_eybo(&f4, &qq)?),
        ("weighted field-quandle braiding".into(), weighted_classical_eybo(&f4, &chi)?),
        ("jones crossing at 2".into(), jones_eybo_at(&qq, &qq.int(2))?),
    ])
}

/// Every verified deformation the catalog knows how to build outright;
/// the braid trace of each one is expected to be Markov-invariant.
pub fn deformation_catalog() -> Result<Vec<(String, DeformedEybo)>> {
    let qq = Ring::rationals();
    let f4 = alexander_quandle_f4();
    let chi = chi_cocycle(&f4);
    Ok(vec![
        ("flip family".into(), transposition_deformation()?),
        ("jones".into(), jones_deformation()?),
        ("flip undeformed".into(), DeformedEybo::from_eybo(&transposition_eybo(&qq)?)?),
        (
            "classical quandle weight".into(),
            DeformedEybo::from_eybo(&weighted_classical_eybo(&f4, &chi)?)?,
        ),
        ("jones at 2".into(), DeformedEybo::from_eybo(&jones_eybo_at(&qq, &qq.int(2))?)?),
    ])
}

/// Closed-braid representatives of the links the pinned-value tests use.
pub fn curated_braids() -> Vec<(String, BraidWord)> {
    let mk = |m: usize, letters: &[i32]| BraidWord::new(m, letters.to_vec()).expect("valid word");
    vec![
        ("unknot".into(), mk(2, &[1])),
        ("two-component unlink".into(), mk(2, &[])),
        ("positive hopf link".into(), mk(2, &[1, 1])),
        ("negative hopf link".into(), mk(2, &[-1, -1])),
        ("trefoil".into(), mk(2, &[1, 1, 1])),
        ("mirror trefoil".into(), mk(2, &[-1, -1, -1])),
        ("trefoil on three strands".into(), mk(3, &[1, 2, 1, 2])),
        ("figure eight".into(), mk(3, &[1, -2, 1, -2])),
        ("cinquefoil".into(), mk(2, &[1, 1, 1, 1, 1])),
    ]
}
