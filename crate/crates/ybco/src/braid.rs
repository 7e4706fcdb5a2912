//! Braid words with an explicit strand count, the Markov-move
//! transformations used by the invariance test harness, and the braid-group
//! representation induced by a (deformed) crossing operator.

use crate::eybo::{DeformedEybo, GradedOperator};
use crate::ring::RingElement;
use crate::tensor::TensorOperator;
use crate::{Error, Result};

/// A word in the braid group B_m. Letters are signed generator indices:
/// `3` is the positive crossing of strands 3,4 and `-3` its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands < 1 {
            return Err(Error::InvalidWord { index: 0, reason: "need at least one strand".into() });
        }
        for (k, &l) in letters.iter().enumerate() {
            if l == 0 || l.unsigned_abs() as usize > strands.saturating_sub(1) {
                return Err(Error::InvalidWord {
                    index: k,
                    reason: format!("letter {l} out of range for {strands} strands"),
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Text form `strands=m; l1 l2 ...`; the letter list may be empty.
    pub fn parse(input: &str) -> Result<Self> {
        let s = input.trim();
        let rest = s
            .strip_prefix("strands=")
            .ok_or_else(|| Error::Parse("braid word must start with `strands=`".into()))?;
        let (count, letters_part) = rest
            .split_once(';')
            .ok_or_else(|| Error::Parse("missing `;` after strand count".into()))?;
        let strands: usize = count
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad strand count `{}`", count.trim())))?;
        let mut letters = Vec::new();
        for tok in letters_part.split_whitespace() {
            let l: i32 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad braid letter `{tok}`")))?;
            letters.push(l);
        }
        Self::new(strands, letters)
    }

    pub fn render(&self) -> String {
        let mut s = format!("strands={};", self.strands);
        for l in &self.letters {
            s.push_str(&format!(" {l}"));
        }
        s
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|&l| if l > 0 { 1i64 } else { -1 }).sum()
    }

    pub fn positive_count(&self) -> usize {
        self.letters.iter().filter(|&&l| l > 0).count()
    }

    pub fn negative_count(&self) -> usize {
        self.letters.iter().filter(|&&l| l < 0).count()
    }

    /// Permutation of strand positions induced by the word (signs ignored):
    /// `perm[i]` is where the strand entering at position i exits.
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        // perm as built maps positions through the word bottom-up per swap
        // order; invert the tracking so perm[entry] = exit.
        let mut out = vec![0usize; self.strands];
        for (exit, &entry) in perm.iter().enumerate() {
            out[entry] = exit;
        }
        out
    }

    /// Number of link components of the closure.
    pub fn component_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut count = 0;
        for start in 0..self.strands {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = perm[cur];
            }
        }
        count
    }
}

/// The closure of sigma_1^n in B_2: unknot, Hopf link, trefoil, ... as n =
/// 1, 2, 3, ...
pub fn torus_braid(n: usize) -> BraidWord {
    assert!(n >= 1);
    BraidWord { strands: 2, letters: vec![1; n] }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkovMove {
    /// Replace w by g^-1 w g for a generator (or inverse) g.
    Conjugate(i32),
    /// Add a strand and append the new positive generator.
    StabilizePositive,
    /// Add a strand and append the new negative generator.
    StabilizeNegative,
    /// Remove a final letter that is the unique occurrence of the top
    /// generator, dropping a strand.
    Destabilize,
}

/// Cancel adjacent inverse pairs anywhere in the word until stable.
fn free_reduce(mut letters: Vec<i32>) -> Vec<i32> {
    let mut reduced = true;
    while reduced {
        reduced = false;
        let mut out: Vec<i32> = Vec::with_capacity(letters.len());
        for l in letters {
            if out.last().map(|&p| p == -l).unwrap_or(false) {
                out.pop();
                reduced = true;
            } else {
                out.push(l);
            }
        }
        letters = out;
    }
    letters
}

pub fn markov_transform(b: &BraidWord, mv: MarkovMove) -> Result<BraidWord> {
    match mv {
        MarkovMove::Conjugate(g) => {
            if g == 0 || g.unsigned_abs() as usize > b.strands.saturating_sub(1) {
                return Err(Error::InvalidWord {
                    index: 0,
                    reason: format!("conjugating letter {g} out of range"),
                });
            }
            let mut letters = Vec::with_capacity(b.letters.len() + 2);
            letters.push(-g);
            letters.extend_from_slice(&b.letters);
            letters.push(g);
            BraidWord::new(b.strands, free_reduce(letters))
        }
        MarkovMove::StabilizePositive | MarkovMove::StabilizeNegative => {
            let g = b.strands as i32;
            let sign = if matches!(mv, MarkovMove::StabilizePositive) { 1 } else { -1 };
            let mut letters = b.letters.clone();
            letters.push(sign * g);
            BraidWord::new(b.strands + 1, letters)
        }
        MarkovMove::Destabilize => {
            let top = b.strands as i32 - 1;
            if top < 1 {
                return Err(Error::InvalidWord { index: 0, reason: "nothing to destabilize".into() });
            }
            let last = *b.letters.last().ok_or(Error::InvalidWord {
                index: 0,
                reason: "empty word cannot destabilize".into(),
            })?;
            if last.abs() != top {
                return Err(Error::InvalidWord {
                    index: b.letters.len() - 1,
                    reason: format!("final letter {last} is not the top generator {top}"),
                });
            }
            let occurrences = b.letters.iter().filter(|l| l.abs() == top).count();
            if occurrences != 1 {
                return Err(Error::InvalidWord {
                    index: b.letters.len() - 1,
                    reason: format!("top generator occurs {occurrences} times, need exactly 1"),
                });
            }
            let mut letters = b.letters.clone();
            letters.pop();
            BraidWord::new(b.strands - 1, letters)
        }
    }
}

/// The graded braid representation: each letter maps to the padded deformed
/// crossing operator (or its inverse), all composed with degrees convolved.
pub fn psi(b: &BraidWord, def: &DeformedEybo) -> Result<GradedOperator> {
    let m = b.strands;
    let mut acc = GradedOperator::graded_identity(def.base_ring(), def.local_dim(), m, def.mode());
    for (k, &l) in b.letters.iter().enumerate() {
        let i = l.unsigned_abs() as usize;
        if i > m.saturating_sub(1) {
            return Err(Error::InvalidWord { index: k, reason: format!("letter {l} needs more strands") });
        }
        let factor = if l > 0 { def.phis() } else { def.phi_hats() };
        let padded = factor.pad(m, i)?;
        acc = padded.compose(&acc)?;
    }
    Ok(acc)
}

/// The plain (ungraded) braid representation: each letter becomes the given
/// crossing operator or its inverse padded to the strand count, composed in
/// word order. The two operators must act on the same two-factor space.
pub fn braid_operator(
    b: &BraidWord,
    r: &TensorOperator,
    r_inv: &TensorOperator,
) -> Result<TensorOperator> {
    if r.ring() != r_inv.ring() || r.factors() != 2 || r_inv.factors() != 2
        || r.local_dim() != r_inv.local_dim()
    {
        return Err(Error::ShapeMismatch {
            expected: "a crossing and its inverse on one two-factor space".into(),
            found: format!(
                "factors {}/{}, local dims {}/{}",
                r.factors(),
                r_inv.factors(),
                r.local_dim(),
                r_inv.local_dim()
            ),
        });
    }
    let m = b.strands;
    let mut acc = TensorOperator::identity(r.ring(), r.local_dim(), m);
    for (k, &l) in b.letters.iter().enumerate() {
        let i = l.unsigned_abs() as usize;
        if i > m.saturating_sub(1) {
            return Err(Error::InvalidWord { index: k, reason: format!("letter {l} needs more strands") });
        }
        let factor = if l > 0 { r } else { r_inv };
        acc = factor.pad(m, i)?.compose(&acc)?;
    }
    Ok(acc)
}

/// The normalized closed-braid invariant: alpha^{-w} beta^{-m} times the
/// graded trace of psi(b) against the tensor power of the graded weight
/// operator, assembled into a single element of the extended ring.
pub fn trace_invariant(b: &BraidWord, def: &DeformedEybo) -> Result<RingElement> {
    let m = b.strands;
    let rep = psi(b, def)?;
    let mut weights = GradedOperator::graded_identity(def.base_ring(), def.local_dim(), 0, def.mode());
    for _ in 0..m {
        weights = weights.tensor(def.mus())?;
    }
    let composed = rep.compose(&weights)?;
    let raw = composed.graded_trace(def.ext_ring(), def.deformation_var())?;
    let alpha_pow = def.alpha().pow_signed(-b.writhe())?;
    let beta_pow = def.beta().pow_signed(-(m as i64))?;
    raw.try_mul(&alpha_pow)?.try_mul(&beta_pow)
}
