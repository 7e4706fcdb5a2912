//! Diagram evaluation through a fixed height function: cup/cap events, a
//! two-dimensional skein crossing operator, and its degree-one deformation.
//!
//! Diagrams are Morse words — top-to-bottom event lists of local maxima
//! (`cap`), local minima (`cup`) and crossings (`x+`/`x-`). Evaluation
//! composes the events against a state vector and lands in the coefficient
//! ring; closed diagrams give scalars.

use rand::Rng;

use crate::report::Report;
use crate::ring::{Base, Ring, RingElement};
use crate::tensor::TensorOperator;
use crate::ybcoh::{delta1, Cochain};
use crate::{Error, Result};

/// One height slice of a diagram. Positions are 1-based strand indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorseEvent {
    /// Local maximum: creates an adjacent strand pair at the position.
    Cap(usize),
    /// Local minimum: joins the strand pair at the position.
    Cup(usize),
    /// Crossing on the strand pair at the position; sign +1 or -1.
    Cross(usize, i8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseWord {
    events: Vec<MorseEvent>,
}

impl MorseWord {
    pub fn new(events: Vec<MorseEvent>) -> Result<Self> {
        let mut count = 0usize;
        for (index, ev) in events.iter().enumerate() {
            match *ev {
                MorseEvent::Cap(i) => {
                    if i == 0 || i > count + 1 {
                        return Err(Error::InvalidWord {
                            index,
                            reason: format!("cap position {i} out of range with {count} strands"),
                        });
                    }
                    count += 2;
                }
                MorseEvent::Cup(i) => {
                    if count < 2 || i == 0 || i > count - 1 {
                        return Err(Error::InvalidWord {
                            index,
                            reason: format!("cup position {i} out of range with {count} strands"),
                        });
                    }
                    count -= 2;
                }
                MorseEvent::Cross(i, sign) => {
                    if sign != 1 && sign != -1 {
                        return Err(Error::InvalidWord {
                            index,
                            reason: format!("crossing sign must be +1 or -1, found {sign}"),
                        });
                    }
                    if count < 2 || i == 0 || i > count - 1 {
                        return Err(Error::InvalidWord {
                            index,
                            reason: format!("crossing position {i} out of range with {count} strands"),
                        });
                    }
                }
            }
        }
        if count != 0 {
            return Err(Error::InvalidWord {
                index: events.len(),
                reason: format!("word leaves {count} strands open"),
            });
        }
        Ok(MorseWord { events })
    }

    /// Token format: `cap:i`, `cup:i`, `x+:i`, `x-:i`, whitespace separated.
    pub fn parse(input: &str) -> Result<Self> {
        let mut events = Vec::new();
        for tok in input.split_whitespace() {
            let (kind, pos) = tok
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad event token `{tok}`")))?;
            let i: usize = pos
                .parse()
                .map_err(|_| Error::Parse(format!("bad position in event token `{tok}`")))?;
            let ev = match kind {
                "cap" => MorseEvent::Cap(i),
                "cup" => MorseEvent::Cup(i),
                "x+" => MorseEvent::Cross(i, 1),
                "x-" => MorseEvent::Cross(i, -1),
                _ => return Err(Error::Parse(format!("unknown event `{kind}` in `{tok}`"))),
            };
            events.push(ev);
        }
        MorseWord::new(events)
    }

    pub fn render(&self) -> String {
        let toks: Vec<String> = self
            .events
            .iter()
            .map(|ev| match *ev {
                MorseEvent::Cap(i) => format!("cap:{i}"),
                MorseEvent::Cup(i) => format!("cup:{i}"),
                MorseEvent::Cross(i, 1) => format!("x+:{i}"),
                MorseEvent::Cross(i, _) => format!("x-:{i}"),
            })
            .collect();
        toks.join(" ")
    }

    pub fn events(&self) -> &[MorseEvent] {
        &self.events
    }

    pub fn crossing_count(&self) -> usize {
        self.events
            .iter()
            .filter(|ev| matches!(ev, MorseEvent::Cross(..)))
            .count()
    }

    /// Counts of (`x+`, `x-`) events.
    pub fn sign_counts(&self) -> (usize, usize) {
        let mut p = 0;
        let mut n = 0;
        for ev in &self.events {
            match ev {
                MorseEvent::Cross(_, 1) => p += 1,
                MorseEvent::Cross(_, _) => n += 1,
                _ => {}
            }
        }
        (p, n)
    }
}

impl std::fmt::Display for MorseWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

/// Closure of the two-strand braid with `m` positive crossings.
pub fn torus_morse(m: usize) -> MorseWord {
    let mut events = vec![MorseEvent::Cap(1), MorseEvent::Cap(2)];
    for _ in 0..m {
        events.push(MorseEvent::Cross(1, 1));
    }
    events.push(MorseEvent::Cup(2));
    events.push(MorseEvent::Cup(1));
    MorseWord::new(events).expect("torus word is well formed")
}

/// Seeded random well-formed word with at most `max_crossings` crossings.
pub fn random_morse_word<RNG: Rng>(rng: &mut RNG, max_crossings: usize) -> MorseWord {
    let mut events = vec![MorseEvent::Cap(1)];
    let mut k = 2usize;
    let mut crossings = 0usize;
    for _ in 0..14 {
        let roll = rng.gen_range(0..10);
        if roll < 3 && k <= 4 {
            let i = rng.gen_range(1..=k + 1);
            events.push(MorseEvent::Cap(i));
            k += 2;
        } else if roll < 7 && crossings < max_crossings {
            let i = rng.gen_range(1..=k - 1);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            events.push(MorseEvent::Cross(i, sign));
            crossings += 1;
        } else if k >= 4 {
            let i = rng.gen_range(1..=k - 1);
            events.push(MorseEvent::Cup(i));
            k -= 2;
        }
    }
    while k > 0 {
        let i = rng.gen_range(1..=(k - 1).max(1));
        events.push(MorseEvent::Cup(i));
        k -= 2;
    }
    MorseWord::new(events).expect("generated word is well formed")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketForm {
    GenericA,
    AEqualsI,
}

/// The cup/cap skein model: pairing and copairing vectors, the crossing
/// operator and its inverse, the loop value, and the kink factors.
///
/// The stored crossing operators are the *total* ones — for a deformed model
/// they already contain the degree-one terms of the truncated ring.
#[derive(Debug, Clone)]
pub struct BracketModel {
    ring: Ring,
    a: RingElement,
    d: usize,
    cup: Vec<RingElement>,
    cap: Vec<RingElement>,
    r: TensorOperator,
    r_inv: TensorOperator,
    delta: RingElement,
    w_plus: RingElement,
    w_minus: RingElement,
}

fn base_pieces(
    ring: &Ring,
    a: &RingElement,
) -> Result<(Vec<RingElement>, Vec<RingElement>, TensorOperator, TensorOperator)> {
    let i = ring.imag()?;
    let a_inv = a.invert_unit()?;
    let d = 2usize;
    let mut cup = vec![ring.zero(); d * d];
    // cup(e1 x e2) = i a, cup(e2 x e1) = -i a^-1, diagonal pairs vanish.
    cup[1] = i.try_mul(a)?;
    cup[2] = i.try_mul(&a_inv)?.neg();
    let cap = cup.clone();
    // e = cap cup as a rank-one operator on the strand pair.
    let mut entries = Vec::with_capacity(16);
    for out in 0..d * d {
        for inp in 0..d * d {
            entries.push(cap[out].try_mul(&cup[inp])?);
        }
    }
    let e = TensorOperator::from_entries(ring, d, 2, entries)?;
    let id = TensorOperator::identity(ring, d, 2);
    let r = id.scale(a)?.add(&e.scale(&a_inv)?)?;
    let r_inv = id.scale(&a_inv)?.add(&e.scale(a)?)?;
    Ok((cup, cap, r, r_inv))
}

impl BracketModel {
    /// Undeformed model over any ring containing i, with a chosen invertible
    /// skein variable.
    pub fn undeformed_over(ring: &Ring, a: RingElement) -> Result<BracketModel> {
        if a.ring() != ring {
            return Err(Error::RingMismatch {
                left: ring.id().to_string(),
                right: a.ring().id().to_string(),
            });
        }
        let (cup, cap, r, r_inv) = base_pieces(ring, &a)?;
        let a_inv = a.invert_unit()?;
        let delta = a.try_mul(&a)?.try_add(&a_inv.try_mul(&a_inv)?)?.neg();
        let mut model = BracketModel {
            ring: ring.clone(),
            a,
            d: 2,
            cup,
            cap,
            r,
            r_inv,
            delta,
            w_plus: ring.one(),
            w_minus: ring.one(),
        };
        model.compute_kink_factors()?;
        Ok(model)
    }

    fn compute_kink_factors(&mut self) -> Result<()> {
        let kink = torus_morse(1);
        let eval = evaluate_morse(&kink, self)?;
        self.w_plus = eval.divide_exact(&self.delta)?;
        self.w_minus = self.w_plus.invert_unit()?;
        Ok(())
    }

    /// Replaces the crossing operators and cup/cap vectors by deformed totals
    /// and recomputes the kink factors. The caller guarantees coherence; the
    /// mutual-inverse identity is re-checked here.
    fn with_totals(
        mut self,
        r: TensorOperator,
        r_inv: TensorOperator,
        cup: Vec<RingElement>,
        cap: Vec<RingElement>,
    ) -> Result<BracketModel> {
        let id = TensorOperator::identity(&self.ring, self.d, 2);
        if r.compose(&r_inv)? != id || r_inv.compose(&r)? != id {
            return Err(Error::InternalAssertion(
                "deformed crossing operators are not mutually inverse".into(),
            ));
        }
        self.r = r;
        self.r_inv = r_inv;
        self.cup = cup;
        self.cap = cap;
        self.compute_kink_factors()?;
        Ok(self)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn skein_variable(&self) -> &RingElement {
        &self.a
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn crossing(&self) -> &TensorOperator {
        &self.r
    }

    pub fn crossing_inverse(&self) -> &TensorOperator {
        &self.r_inv
    }

    pub fn pairing(&self) -> &[RingElement] {
        &self.cup
    }

    pub fn copairing(&self) -> &[RingElement] {
        &self.cap
    }

    pub fn loop_value(&self) -> &RingElement {
        &self.delta
    }

    pub fn w_plus(&self) -> &RingElement {
        &self.w_plus
    }

    pub fn w_minus(&self) -> &RingElement {
        &self.w_minus
    }

    /// The composite cap-after-cup operator on a strand pair.
    pub fn cap_cup_operator(&self) -> Result<TensorOperator> {
        let dd = self.d * self.d;
        let mut entries = Vec::with_capacity(dd * dd);
        for out in 0..dd {
            for inp in 0..dd {
                entries.push(self.cap[out].try_mul(&self.cup[inp])?);
            }
        }
        TensorOperator::from_entries(&self.ring, self.d, 2, entries)
    }
}

/// Builds the standard model. `deform` adds the degree-one crossing terms
/// B*1 + Bbar*(cap cup) with Bbar = -a^-2 B over a truncated ring; that
/// family is only consistent when a^4 = 1, so it requires the `AEqualsI`
/// form.
pub fn build_bracket_model(deform: bool, form: BracketForm) -> Result<BracketModel> {
    match (deform, form) {
        (false, BracketForm::GenericA) => {
            let ring = Ring::builder(Base::GaussianRationals).laurent("A").build();
            let a = ring.var("A")?;
            BracketModel::undeformed_over(&ring, a)
        }
        (false, BracketForm::AEqualsI) => {
            let ring = Ring::builder(Base::GaussianRationals).build();
            let a = ring.imag()?;
            BracketModel::undeformed_over(&ring, a)
        }
        (true, BracketForm::GenericA) => Err(Error::Unsupported(
            "the deformed crossing family needs 2*(A^4 - 1)*B = 0, which fails for a \
             generic invertible A; specialize A to i"
                .into(),
        )),
        (true, BracketForm::AEqualsI) => {
            let ring = Ring::builder(Base::GaussianRationals)
                .poly("B")
                .trunc("h", 1)
                .build();
            let a = ring.imag()?;
            let base = BracketModel::undeformed_over(&ring, a)?;
            let b = ring.var("B")?;
            let a_inv2 = base.a.invert_unit()?.pow(2);
            let b_bar = a_inv2.try_mul(&b)?.neg();
            let id = TensorOperator::identity(&ring, 2, 2);
            let e = base.cap_cup_operator()?;
            let phi = id.scale(&b)?.add(&e.scale(&b_bar)?)?;
            // The inverse-side terms use the same coefficients with the roles
            // of 1 and (cap cup) exchanged.
            let phi_hat = e.scale(&b)?.add(&id.scale(&b_bar)?)?;
            let h = ring.var("h")?;
            let r = base.r.add(&phi.scale(&h)?)?;
            let r_inv = base.r_inv.add(&phi_hat.scale(&h)?)?;
            verify_deformed_crossing(&base, &phi, &phi_hat)?;
            let cup = base.cup.clone();
            let cap = base.cap.clone();
            base.with_totals(r, r_inv, cup, cap)
        }
    }
}

fn verify_deformed_crossing(
    base: &BracketModel,
    phi: &TensorOperator,
    phi_hat: &TensorOperator,
) -> Result<()> {
    let rep = passcup_passcap_report(base, phi, phi_hat)?;
    if !rep.all_pass() {
        return Err(Error::InternalAssertion(format!(
            "deformed crossing terms break a sliding identity:\n{rep}"
        )));
    }
    let cocycle = crate::ybcoh::delta2(&base.r, &Cochain::new(phi.clone())?)?;
    if !cocycle.op.is_zero() {
        return Err(Error::InternalAssertion(
            "deformed crossing term is not a degree-two cocycle".into(),
        ));
    }
    Ok(())
}

/// Model deformed by the coboundary of a strand operator `f`, including the
/// matching cup/cap corrections, over the generic-A ring extended by a
/// square-zero deformation variable.
pub fn cobounded_model(f: &TensorOperator) -> Result<BracketModel> {
    let ring = Ring::builder(Base::GaussianRationals)
        .laurent("A")
        .trunc("h", 1)
        .build();
    let a = ring.var("A")?;
    let base = BracketModel::undeformed_over(&ring, a)?;
    let f = f.coerce_into(&ring)?;
    let (phi, cup1, cap1) = coboundary_cupcap_data(&base, &f)?;
    let phi_hat = base
        .r_inv
        .compose(&phi.op)?
        .compose(&base.r_inv)?
        .neg();
    let h = ring.var("h")?;
    let r = base.r.add(&phi.op.scale(&h)?)?;
    let r_inv = base.r_inv.add(&phi_hat.scale(&h)?)?;
    let mut cup = Vec::with_capacity(4);
    let mut cap = Vec::with_capacity(4);
    for k in 0..4 {
        cup.push(base.cup[k].try_add(&cup1[k].try_mul(&h)?)?);
        cap.push(base.cap[k].try_add(&cap1[k].try_mul(&h)?)?);
    }
    base.with_totals(r, r_inv, cup, cap)
}

/// Degree-one deformation data induced by a strand operator: the coboundary
/// cochain together with the cup/cap corrections cup(f x 1 + 1 x f) and
/// -(f x 1 + 1 x f)cap. The model must be undeformed.
pub fn coboundary_cupcap_data(
    model: &BracketModel,
    f: &TensorOperator,
) -> Result<(Cochain, Vec<RingElement>, Vec<RingElement>)> {
    if f.factors() != 1 || f.local_dim() != model.d {
        return Err(Error::ShapeMismatch {
            expected: format!("single-strand operator of local dimension {}", model.d),
            found: format!("{} factors, local dimension {}", f.factors(), f.local_dim()),
        });
    }
    let f = f.coerce_into(&model.ring)?;
    let phi = delta1(&model.r, &Cochain::new(f.clone())?)?;
    let d = model.d;
    let mut cup1 = vec![model.ring.zero(); d * d];
    let mut cap1 = vec![model.ring.zero(); d * d];
    for a in 0..d {
        for b in 0..d {
            let mut cu = model.ring.zero();
            let mut ca = model.ring.zero();
            for x in 0..d {
                cu = cu.try_add(&f.get(x, a).try_mul(&model.cup[x * d + b])?)?;
                cu = cu.try_add(&f.get(x, b).try_mul(&model.cup[a * d + x])?)?;
                ca = ca.try_add(&f.get(a, x).try_mul(&model.cap[x * d + b])?)?;
                ca = ca.try_add(&f.get(b, x).try_mul(&model.cap[a * d + x])?)?;
            }
            cup1[a * d + b] = cu;
            cap1[a * d + b] = ca.neg();
        }
    }
    Ok((phi, cup1, cap1))
}

// --- state-vector evaluation --------------------------------------------

fn dim_pow(d: usize, k: usize) -> usize {
    d.checked_pow(k as u32).expect("state dimension overflow")
}

fn apply_cap(
    ring: &Ring,
    d: usize,
    state: &[RingElement],
    strands: usize,
    pos: usize,
    cap: &[RingElement],
) -> Result<Vec<RingElement>> {
    let right = dim_pow(d, strands - (pos - 1));
    let mut out = vec![ring.zero(); state.len() * d * d];
    for (idx, c) in state.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let left = idx / right;
        let rest = idx % right;
        for pair in 0..d * d {
            if cap[pair].is_zero() {
                continue;
            }
            let target = (left * d * d + pair) * right + rest;
            out[target] = out[target].try_add(&c.try_mul(&cap[pair])?)?;
        }
    }
    Ok(out)
}

fn apply_cup(
    ring: &Ring,
    d: usize,
    state: &[RingElement],
    strands: usize,
    pos: usize,
    cup: &[RingElement],
) -> Result<Vec<RingElement>> {
    let right = dim_pow(d, strands - (pos + 1));
    let mut out = vec![ring.zero(); state.len() / (d * d)];
    for (idx, c) in state.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let left = idx / (right * d * d);
        let pair = (idx / right) % (d * d);
        let rest = idx % right;
        if cup[pair].is_zero() {
            continue;
        }
        let target = left * right + rest;
        out[target] = out[target].try_add(&c.try_mul(&cup[pair])?)?;
    }
    Ok(out)
}

fn apply_pair_op(
    ring: &Ring,
    d: usize,
    state: &[RingElement],
    strands: usize,
    pos: usize,
    op: &TensorOperator,
) -> Result<Vec<RingElement>> {
    let right = dim_pow(d, strands - (pos + 1));
    let mut out = vec![ring.zero(); state.len()];
    for (idx, c) in state.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let left = idx / (right * d * d);
        let pair_in = (idx / right) % (d * d);
        let rest = idx % right;
        for pair_out in 0..d * d {
            let coeff = op.get(pair_out, pair_in);
            if coeff.is_zero() {
                continue;
            }
            let target = (left * d * d + pair_out) * right + rest;
            out[target] = out[target].try_add(&c.try_mul(coeff)?)?;
        }
    }
    Ok(out)
}

/// Composes the word against the model, slice by slice. A closed word yields
/// the scalar value of the diagram (the loop power is not divided out).
pub fn evaluate_morse(w: &MorseWord, model: &BracketModel) -> Result<RingElement> {
    let ring = &model.ring;
    let d = model.d;
    let mut state = vec![ring.one()];
    let mut strands = 0usize;
    for ev in w.events() {
        match *ev {
            MorseEvent::Cap(i) => {
                state = apply_cap(ring, d, &state, strands, i, &model.cap)?;
                strands += 2;
            }
            MorseEvent::Cup(i) => {
                state = apply_cup(ring, d, &state, strands, i, &model.cup)?;
                strands -= 2;
            }
            MorseEvent::Cross(i, sign) => {
                let op = if sign > 0 { &model.r } else { &model.r_inv };
                state = apply_pair_op(ring, d, &state, strands, i, op)?;
            }
        }
    }
    Ok(state.into_iter().next().expect("closed word leaves a scalar"))
}

/// Regular-isotopy and writhe-normalized values of a closed word: the
/// evaluation divided by the loop value, and that scaled by the kink
/// factors for the supplied positive/negative crossing counts.
pub fn normalized_invariants(
    w: &MorseWord,
    model: &BracketModel,
    orientation_signs: (usize, usize),
) -> Result<(RingElement, RingElement)> {
    let (p, n) = orientation_signs;
    let eval = evaluate_morse(w, model)?;
    let phi_m = eval.divide_exact(&model.delta)?;
    let factor = model.w_minus.pow(p as u32).try_mul(&model.w_plus.pow(n as u32))?;
    let phi_w = factor.try_mul(&phi_m)?;
    Ok((phi_m, phi_w))
}

// --- smoothing oracle ----------------------------------------------------

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new() -> Self {
        UnionFind { parent: Vec::new() }
    }

    fn make(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Independent evaluation of an undeformed word by full smoothing: each
/// crossing resolves into the identity or the cup/cap pair, loops are
/// counted combinatorially, and each state contributes a power of the skein
/// variable times a power of the loop value -a^2 - a^-2.
pub fn smoothing_oracle(w: &MorseWord, ring: &Ring, a: &RingElement) -> Result<RingElement> {
    let a = a.coerce_into(ring)?;
    let a_inv = a.invert_unit()?;
    let delta = a.try_mul(&a)?.try_add(&a_inv.try_mul(&a_inv)?)?.neg();
    let crossings = w.crossing_count();
    let mut total = ring.zero();
    for mask in 0u64..(1u64 << crossings) {
        let mut uf = UnionFind::new();
        let mut strands: Vec<usize> = Vec::new();
        let mut loops = 0u32;
        let mut exponent = 0i64;
        let mut seen = 0usize;
        for ev in w.events() {
            match *ev {
                MorseEvent::Cap(i) => {
                    let node = uf.make();
                    strands.insert(i - 1, node);
                    strands.insert(i - 1, node);
                }
                MorseEvent::Cup(i) => {
                    let x = strands.remove(i - 1);
                    let y = strands.remove(i - 1);
                    if !uf.union(x, y) {
                        loops += 1;
                    }
                }
                MorseEvent::Cross(i, sign) => {
                    let smooth_identity = (mask >> seen) & 1 == 0;
                    seen += 1;
                    exponent += match (sign > 0, smooth_identity) {
                        (true, true) | (false, false) => 1,
                        _ => -1,
                    };
                    if !smooth_identity {
                        // cup then cap on the same pair
                        let x = strands.remove(i - 1);
                        let y = strands.remove(i - 1);
                        if !uf.union(x, y) {
                            loops += 1;
                        }
                        let node = uf.make();
                        strands.insert(i - 1, node);
                        strands.insert(i - 1, node);
                    }
                }
            }
        }
        debug_assert!(strands.is_empty());
        let term = a.pow_signed(exponent)?.try_mul(&delta.pow(loops))?;
        total = total.try_add(&term)?;
    }
    Ok(total)
}

// --- degree-one cup/cap condition reports --------------------------------

type Columns = Vec<Vec<RingElement>>;

fn columns<F>(ring: &Ring, d: usize, in_factors: usize, apply: F) -> Result<Columns>
where
    F: Fn(Vec<RingElement>, usize) -> Result<Vec<RingElement>>,
{
    let dim = dim_pow(d, in_factors);
    let mut cols = Vec::with_capacity(dim);
    for basis in 0..dim {
        let mut state = vec![ring.zero(); dim];
        state[basis] = ring.one();
        cols.push(apply(state, in_factors)?);
    }
    Ok(cols)
}

fn add_columns(lhs: &Columns, rhs: &Columns) -> Result<Columns> {
    let mut out = Vec::with_capacity(lhs.len());
    for (a, b) in lhs.iter().zip(rhs) {
        let mut col = Vec::with_capacity(a.len());
        for (x, y) in a.iter().zip(b) {
            col.push(x.try_add(y)?);
        }
        out.push(col);
    }
    Ok(out)
}

fn columns_equal_note(lhs: &Columns, rhs: &Columns) -> Option<String> {
    for (c, (a, b)) in lhs.iter().zip(rhs).enumerate() {
        for (r, (x, y)) in a.iter().zip(b).enumerate() {
            if x != y {
                return Some(format!("first mismatch at column {c}, row {r}: {x} vs {y}"));
            }
        }
    }
    None
}

fn columns_zero_note(cols: &Columns) -> Option<String> {
    for (c, col) in cols.iter().enumerate() {
        for (r, x) in col.iter().enumerate() {
            if !x.is_zero() {
                return Some(format!("first nonzero entry at column {c}, row {r}: {x}"));
            }
        }
    }
    None
}

/// The four degree-one strand-sliding identities between the crossing
/// deformation terms and the *undeformed* cup/cap of the model.
pub fn passcup_passcap_report(
    model: &BracketModel,
    phi: &TensorOperator,
    phi_hat: &TensorOperator,
) -> Result<Report> {
    let zero = vec![model.ring.zero(); model.d * model.d];
    cupcap_condition_report(model, phi, phi_hat, &zero, &zero, false)
}

/// Per-equation report for a degree-one deformation of the whole evaluation
/// data: crossing terms phi (and its inverse-side term, derived from the
/// model when not supplied) plus cup/cap corrections. Lines cover the two
/// switchback identities, both strand-sliding pairs, and the two kink
/// absorption identities.
pub fn verify_deformed_cupcap(
    model: &BracketModel,
    phi: &Cochain,
    phi_hat: Option<&TensorOperator>,
    cup1: &[RingElement],
    cap1: &[RingElement],
) -> Result<Report> {
    let derived;
    let hat = match phi_hat {
        Some(h) => h,
        None => {
            derived = model
                .r_inv
                .compose(&phi.op)?
                .compose(&model.r_inv)?
                .neg();
            &derived
        }
    };
    cupcap_condition_report(model, &phi.op, hat, cup1, cap1, true)
}

fn cupcap_condition_report(
    model: &BracketModel,
    phi: &TensorOperator,
    phi_hat: &TensorOperator,
    cup1: &[RingElement],
    cap1: &[RingElement],
    full: bool,
) -> Result<Report> {
    let ring = &model.ring;
    let d = model.d;
    let phi = phi.coerce_into(ring)?;
    let phi_hat = phi_hat.coerce_into(ring)?;
    let mut rep = Report::new("degree-one cup/cap conditions");

    let cup_of = |which: usize| -> &[RingElement] {
        if which == 0 {
            &model.cup
        } else {
            cup1
        }
    };
    let cap_of = |which: usize| -> &[RingElement] {
        if which == 0 {
            &model.cap
        } else {
            cap1
        }
    };
    let op_of = |which: usize| -> &TensorOperator {
        if which == 0 {
            &model.r
        } else {
            &phi
        }
    };
    let hat_of = |which: usize| -> &TensorOperator {
        if which == 0 {
            &model.r_inv
        } else {
            &phi_hat
        }
    };

    if full {
        // switchback: cup_1 and cap_1 cancel against the undeformed zigzags
        let mut total: Columns = vec![vec![ring.zero(); d]; d];
        for (i, j) in [(1usize, 0usize), (0, 1)] {
            let side = columns(ring, d, 1, |state, k| {
                let s = apply_cap(ring, d, &state, k, 2, cap_of(j))?;
                apply_cup(ring, d, &s, k + 2, 1, cup_of(i))
            })?;
            total = add_columns(&total, &side)?;
        }
        let note = columns_zero_note(&total);
        rep.residual("switchback correction, cup over cap", note.is_none(), note.unwrap_or_default());

        let mut total: Columns = vec![vec![ring.zero(); d]; d];
        for (i, j) in [(1usize, 0usize), (0, 1)] {
            let side = columns(ring, d, 1, |state, k| {
                let s = apply_cap(ring, d, &state, k, 1, cap_of(j))?;
                apply_cup(ring, d, &s, k + 2, 2, cup_of(i))
            })?;
            total = add_columns(&total, &side)?;
        }
        let note = columns_zero_note(&total);
        rep.residual("switchback correction, cap over cup", note.is_none(), note.unwrap_or_default());
    }

    // passcup, first form
    let mut lhs: Columns = vec![vec![ring.zero(); d]; dim_pow(d, 3)];
    let mut rhs = lhs.clone();
    for (i, j) in [(1usize, 0usize), (0, 1)] {
        let l = columns(ring, d, 3, |state, k| {
            let s = apply_pair_op(ring, d, &state, k, 1, op_of(j))?;
            apply_cup(ring, d, &s, k, 2, cup_of(i))
        })?;
        lhs = add_columns(&lhs, &l)?;
        let r = columns(ring, d, 3, |state, k| {
            let s = apply_pair_op(ring, d, &state, k, 2, hat_of(j))?;
            apply_cup(ring, d, &s, k, 1, cup_of(i))
        })?;
        rhs = add_columns(&rhs, &r)?;
    }
    let note = columns_equal_note(&lhs, &rhs);
    rep.residual("passcup, first form", note.is_none(), note.unwrap_or_default());

    // passcup, second form
    let mut lhs: Columns = vec![vec![ring.zero(); d]; dim_pow(d, 3)];
    let mut rhs = lhs.clone();
    for (i, j) in [(1usize, 0usize), (0, 1)] {
        let l = columns(ring, d, 3, |state, k| {
            let s = apply_pair_op(ring, d, &state, k, 1, hat_of(j))?;
            apply_cup(ring, d, &s, k, 2, cup_of(i))
        })?;
        lhs = add_columns(&lhs, &l)?;
        let r = columns(ring, d, 3, |state, k| {
            let s = apply_pair_op(ring, d, &state, k, 2, op_of(j))?;
            apply_cup(ring, d, &s, k, 1, cup_of(i))
        })?;
        rhs = add_columns(&rhs, &r)?;
    }
    let note = columns_equal_note(&lhs, &rhs);
    rep.residual("passcup, second form", note.is_none(), note.unwrap_or_default());

    // passcap, first form
    let mut lhs: Columns = vec![vec![ring.zero(); dim_pow(d, 3)]; d];
    let mut rhs = lhs.clone();
    for (i, j) in [(1usize, 0usize), (0, 1)] {
        let l = columns(ring, d, 1, |state, k| {
            let s = apply_cap(ring, d, &state, k, 2, cap_of(j))?;
            apply_pair_op(ring, d, &s, k + 2, 1, op_of(i))
        })?;
        lhs = add_columns(&lhs, &l)?;
        let r = columns(ring, d, 1, |state, k| {
            let s = apply_cap(ring, d, &state, k, 1, cap_of(j))?;
            apply_pair_op(ring, d, &s, k + 2, 2, hat_of(i))
        })?;
        rhs = add_columns(&rhs, &r)?;
    }
    let note = columns_equal_note(&lhs, &rhs);
    rep.residual("passcap, first form", note.is_none(), note.unwrap_or_default());

    // passcap, second form
    let mut lhs: Columns = vec![vec![ring.zero(); dim_pow(d, 3)]; d];
    let mut rhs = lhs.clone();
    for (i, j) in [(1usize, 0usize), (0, 1)] {
        let l = columns(ring, d, 1, |state, k| {
            let s = apply_cap(ring, d, &state, k, 2, cap_of(j))?;
            apply_pair_op(ring, d, &s, k + 2, 1, hat_of(i))
        })?;
        lhs = add_columns(&lhs, &l)?;
        let r = columns(ring, d, 1, |state, k| {
            let s = apply_cap(ring, d, &state, k, 1, cap_of(j))?;
            apply_pair_op(ring, d, &s, k + 2, 2, op_of(i))
        })?;
        rhs = add_columns(&rhs, &r)?;
    }
    let note = columns_equal_note(&lhs, &rhs);
    rep.residual("passcap, second form", note.is_none(), note.unwrap_or_default());

    if full {
        // first Reidemeister compatibility, pairing side:
        // cup_1 after the crossing plus cup after phi returns cup_1
        let mut lhs: Columns = vec![vec![ring.zero(); 1]; dim_pow(d, 2)];
        for (i, j) in [(1usize, 0usize), (0, 1)] {
            let side = columns(ring, d, 2, |state, k| {
                let s = apply_pair_op(ring, d, &state, k, 1, op_of(i))?;
                apply_cup(ring, d, &s, k, 1, cup_of(j))
            })?;
            lhs = add_columns(&lhs, &side)?;
        }
        let rhs = columns(ring, d, 2, |state, k| apply_cup(ring, d, &state, k, 1, cup1))?;
        let note = columns_equal_note(&lhs, &rhs);
        rep.residual(
            "first Reidemeister compatibility, pairing side",
            note.is_none(),
            note.unwrap_or_default(),
        );

        // first Reidemeister compatibility, copairing side
        let mut lhs: Columns = vec![vec![ring.zero(); dim_pow(d, 2)]; 1];
        for (i, j) in [(1usize, 0usize), (0, 1)] {
            let side = columns(ring, d, 0, |state, k| {
                let s = apply_cap(ring, d, &state, k, 1, cap_of(i))?;
                apply_pair_op(ring, d, &s, k + 2, 1, op_of(j))
            })?;
            lhs = add_columns(&lhs, &side)?;
        }
        let rhs = columns(ring, d, 0, |state, k| apply_cap(ring, d, &state, k, 1, cap1))?;
        let note = columns_equal_note(&lhs, &rhs);
        rep.residual(
            "first Reidemeister compatibility, copairing side",
            note.is_none(),
            note.unwrap_or_default(),
        );
    }

    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn generic_model() -> BracketModel {
        build_bracket_model(false, BracketForm::GenericA).unwrap()
    }

    fn deformed_model() -> BracketModel {
        build_bracket_model(true, BracketForm::AEqualsI).unwrap()
    }

    #[test]
    fn words_validate_and_round_trip() {
        let w = MorseWord::parse("cap:1 cap:2 x+:1 x-:2 cup:2 cup:1").unwrap();
        assert_eq!(w.render(), "cap:1 cap:2 x+:1 x-:2 cup:2 cup:1");
        assert_eq!(w.crossing_count(), 2);
        assert_eq!(w.sign_counts(), (1, 1));
        assert!(matches!(
            MorseWord::parse("cup:1"),
            Err(Error::InvalidWord { index: 0, .. })
        ));
        assert!(matches!(
            MorseWord::parse("cap:2"),
            Err(Error::InvalidWord { index: 0, .. })
        ));
        assert!(matches!(
            MorseWord::parse("cap:1 x+:2 cup:1"),
            Err(Error::InvalidWord { index: 1, .. })
        ));
        assert!(matches!(
            MorseWord::parse("cap:1"),
            Err(Error::InvalidWord { index: 1, .. })
        ));
        assert!(MorseWord::parse("cap:1 swirl:2 cup:1").is_err());
    }

    #[test]
    fn unknots_evaluate_to_loop_powers() {
        let model = generic_model();
        let delta = model.loop_value().clone();
        let one_loop = MorseWord::parse("cap:1 cup:1").unwrap();
        assert_eq!(evaluate_morse(&one_loop, &model).unwrap(), delta);
        let sequential = MorseWord::parse("cap:1 cup:1 cap:1 cup:1").unwrap();
        let nested = MorseWord::parse("cap:1 cap:2 cup:2 cup:1").unwrap();
        let delta2 = delta.try_mul(&delta).unwrap();
        assert_eq!(evaluate_morse(&sequential, &model).unwrap(), delta2);
        assert_eq!(evaluate_morse(&nested, &model).unwrap(), delta2);
    }

    #[test]
    fn kink_factors_match_the_word_evaluations() {
        let model = generic_model();
        let ring = model.ring();
        assert_eq!(model.w_plus(), &ring.parse("-A^3").unwrap());
        assert_eq!(model.w_minus(), &ring.parse("-A^-3").unwrap());
        let neg_kink = MorseWord::parse("cap:1 cap:2 x-:1 cup:2 cup:1").unwrap();
        let (phi_m, _) = normalized_invariants(&neg_kink, &model, (0, 1)).unwrap();
        assert_eq!(&phi_m, model.w_minus());
    }

    #[test]
    fn crossing_operators_satisfy_the_closure_conditions() {
        let model = generic_model();
        let ring = model.ring();
        let id = TensorOperator::identity(ring, 2, 2);
        assert_eq!(model.crossing().compose(model.crossing_inverse()).unwrap(), id);
        assert!(crate::ybcoh::is_yang_baxter(model.crossing()).unwrap());
        // undeformed switchback via the state primitives
        let left = columns(ring, 2, 1, |state, k| {
            let s = apply_cap(ring, 2, &state, k, 2, model.copairing()).unwrap();
            apply_cup(ring, 2, &s, k + 2, 1, model.pairing())
        })
        .unwrap();
        let id_cols = columns(ring, 2, 1, |state, _| Ok(state)).unwrap();
        assert_eq!(left, id_cols);
        // undeformed crossing slides over the cup
        let lhs = columns(ring, 2, 3, |state, k| {
            let s = apply_pair_op(ring, 2, &state, k, 1, model.crossing()).unwrap();
            apply_cup(ring, 2, &s, k, 2, model.pairing())
        })
        .unwrap();
        let rhs = columns(ring, 2, 3, |state, k| {
            let s = apply_pair_op(ring, 2, &state, k, 2, model.crossing_inverse()).unwrap();
            apply_cup(ring, 2, &s, k, 1, model.pairing())
        })
        .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn operator_evaluation_matches_the_smoothing_oracle() {
        let model = generic_model();
        let ring = model.ring();
        let a = model.skein_variable();
        for m in 1..=5 {
            let w = torus_morse(m);
            assert_eq!(
                evaluate_morse(&w, &model).unwrap(),
                smoothing_oracle(&w, ring, a).unwrap(),
                "torus word m = {m}"
            );
        }
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for case in 0..12 {
            let w = random_morse_word(&mut rng, 6);
            assert_eq!(
                evaluate_morse(&w, &model).unwrap(),
                smoothing_oracle(&w, ring, a).unwrap(),
                "case {case}: {w}"
            );
        }
    }

    #[test]
    fn deformation_needs_the_fourth_root_of_unity() {
        assert!(matches!(
            build_bracket_model(true, BracketForm::GenericA),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn deformed_kink_factors_are_pinned() {
        let model = deformed_model();
        let ring = model.ring();
        let i = ring.imag().unwrap();
        let bh3 = ring.parse("3*B*h").unwrap();
        assert_eq!(model.w_plus(), &i.try_add(&bh3).unwrap());
        assert_eq!(model.w_minus(), &i.neg().try_add(&bh3).unwrap());
        let product = model.w_plus().try_mul(model.w_minus()).unwrap();
        assert_eq!(product, ring.one());
        let neg_kink = MorseWord::parse("cap:1 cap:2 x-:1 cup:2 cup:1").unwrap();
        let (phi_m, phi_w) = normalized_invariants(&neg_kink, &model, (0, 1)).unwrap();
        assert_eq!(&phi_m, model.w_minus());
        assert_eq!(phi_w, ring.one());
    }

    #[test]
    fn first_torus_words_have_exact_deformed_values() {
        let model = deformed_model();
        let ring = model.ring();
        let (m1, w1) = normalized_invariants(&torus_morse(1), &model, (1, 0)).unwrap();
        assert_eq!(&m1, model.w_plus());
        assert_eq!(w1, ring.one());
        let (m2, w2) = normalized_invariants(&torus_morse(2), &model, (2, 0)).unwrap();
        assert_eq!(m2, ring.int(-2));
        assert_eq!(w2, ring.parse("2 + 12*i*B*h").unwrap());
    }

    #[test]
    fn torus_recursion_holds_with_the_negative_kink_tail() {
        let model = deformed_model();
        let ring = model.ring();
        let h = ring.var("h").unwrap();
        let b = ring.var("B").unwrap();
        let a = model.skein_variable();
        let head = a.try_add(&h.try_mul(&b).unwrap()).unwrap();
        let a_inv = a.invert_unit().unwrap();
        let tail_coeff = a_inv
            .try_sub(&h.try_mul(&a_inv.pow(2)).unwrap().try_mul(&b).unwrap())
            .unwrap();
        let mut prev = normalized_invariants(&torus_morse(1), &model, (1, 0)).unwrap().0;
        for m in 1..=8usize {
            let next = normalized_invariants(&torus_morse(m + 1), &model, (m + 1, 0)).unwrap().0;
            let tail = tail_coeff.try_mul(&model.w_minus().pow(m as u32)).unwrap();
            let predicted = head.try_mul(&prev).unwrap().try_add(&tail).unwrap();
            assert_eq!(next, predicted, "m = {m}");
            prev = next;
        }
    }

    #[test]
    fn torus_closed_form_at_the_fourth_root() {
        let model = deformed_model();
        let ring = model.ring();
        for m in 1..=8usize {
            let (_, w) = normalized_invariants(&torus_morse(m), &model, (m, 0)).unwrap();
            let expected = if m % 2 == 1 {
                ring.one()
            } else {
                ring.parse(&format!("2 + {}*i*B*h", 6 * m)).unwrap()
            };
            assert_eq!(w, expected, "m = {m}");
        }
    }

    #[test]
    fn cobounded_deformations_leave_no_first_order_part() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for case in 0..4 {
            let plain = Ring::builder(Base::GaussianRationals).build();
            let entries: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
            let f = TensorOperator::from_int_rows(
                &plain,
                2,
                1,
                &[[entries[0], entries[1]], [entries[2], entries[3]]],
            )
            .unwrap();
            let model = cobounded_model(&f).unwrap();
            for wcase in 0..4 {
                let w = random_morse_word(&mut rng, 5);
                let eval = evaluate_morse(&w, &model).unwrap();
                let first = eval.grade("h", 1).unwrap();
                assert!(
                    first.is_zero(),
                    "case {case}.{wcase}: word {w} has first-order part {first}"
                );
            }
            assert!(
                evaluate_morse(&torus_morse(3), &model)
                    .unwrap()
                    .grade("h", 1)
                    .unwrap()
                    .is_zero()
            );
        }
    }

    #[test]
    fn coboundary_data_passes_the_condition_report() {
        let model = generic_model();
        let ring = model.ring();
        let f = TensorOperator::from_int_rows(ring, 2, 1, &[[1, -2], [3, 0]]).unwrap();
        let (phi, cup1, cap1) = coboundary_cupcap_data(&model, &f).unwrap();
        let rep = verify_deformed_cupcap(&model, &phi, None, &cup1, &cap1).unwrap();
        for label in [
            "switchback correction, cup over cap",
            "switchback correction, cap over cup",
            "passcup, first form",
            "passcup, second form",
            "passcap, first form",
            "passcap, second form",
        ] {
            let line = rep.lines().iter().find(|l| l.label == label).unwrap();
            assert_eq!(line.status, crate::report::CheckStatus::Pass, "{label}");
        }
    }

    #[test]
    fn zero_deformation_passes_trivially() {
        let model = generic_model();
        let ring = model.ring();
        let zero_phi = Cochain::new(TensorOperator::zero(ring, 2, 2)).unwrap();
        let zeros = vec![ring.zero(); 4];
        let rep = verify_deformed_cupcap(&model, &zero_phi, None, &zeros, &zeros).unwrap();
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn crossing_terms_slide_only_with_matched_coefficients() {
        let ring = Ring::builder(Base::GaussianRationals)
            .poly("B")
            .poly("Bb")
            .poly("C")
            .poly("Cb")
            .build();
        let a = ring.imag().unwrap();
        let model = BracketModel::undeformed_over(&ring, a).unwrap();
        let e = model.cap_cup_operator().unwrap();
        let id = TensorOperator::identity(&ring, 2, 2);
        let b = ring.var("B").unwrap();
        let bb = ring.var("Bb").unwrap();
        let phi = id.scale(&b).unwrap().add(&e.scale(&bb).unwrap()).unwrap();
        // matched: C = B, Cb = Bb
        let matched = e.scale(&b).unwrap().add(&id.scale(&bb).unwrap()).unwrap();
        let rep = passcup_passcap_report(&model, &phi, &matched).unwrap();
        assert!(rep.all_pass(), "{rep}");
        // violations in either coefficient break at least one identity
        let c = ring.var("C").unwrap();
        let cb = ring.var("Cb").unwrap();
        let off_c = e.scale(&c).unwrap().add(&id.scale(&bb).unwrap()).unwrap();
        let rep = passcup_passcap_report(&model, &phi, &off_c).unwrap();
        assert!(rep.failure_count() > 0);
        let off_cb = e.scale(&b).unwrap().add(&id.scale(&cb).unwrap()).unwrap();
        let rep = passcup_passcap_report(&model, &phi, &off_cb).unwrap();
        assert!(rep.failure_count() > 0);
    }

    #[test]
    fn bracket_deformation_slides_but_fails_kink_absorption() {
        let model = deformed_model();
        let ring = model.ring();
        let base = BracketModel::undeformed_over(
            ring,
            ring.imag().unwrap(),
        )
        .unwrap();
        let b = ring.var("B").unwrap();
        let e = base.cap_cup_operator().unwrap();
        let id = TensorOperator::identity(ring, 2, 2);
        // at a = i the conjugate coefficient -a^-2 B equals B
        let phi = Cochain::new(id.scale(&b).unwrap().add(&e.scale(&b).unwrap()).unwrap()).unwrap();
        let zeros = vec![ring.zero(); 4];
        let rep = verify_deformed_cupcap(&base, &phi, None, &zeros, &zeros).unwrap();
        for line in rep.lines() {
            let pass = line.status == crate::report::CheckStatus::Pass;
            if line.label.starts_with("first Reidemeister") {
                assert!(!pass, "{}", line.label);
            } else {
                assert!(pass, "{}", line.label);
            }
        }
        let cocycle = crate::ybcoh::delta2(&base.r, &phi).unwrap();
        assert!(cocycle.op.is_zero());
    }
}
