//! Yang-Baxter operators and their cohomology: the equation defect, the
//! low-degree differentials on 1- and 2-cochains, the general-arity
//! differential built from padded crossing operators, and exact linear
//! algebra for deciding coboundaries over fields.

use crate::ring::{Ring, RingElement};
use crate::tensor::TensorOperator;
use crate::{Error, Result};

/// A degree-n cochain: a linear endomorphism of the n-fold tensor power.
/// Degree zero is excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    n: usize,
    pub op: TensorOperator,
}

impl Cochain {
    pub fn new(op: TensorOperator) -> Result<Self> {
        if op.factors() == 0 {
            return Err(Error::ShapeMismatch {
                expected: "cochain degree >= 1".into(),
                found: "0 tensor factors".into(),
            });
        }
        Ok(Cochain { n: op.factors(), op })
    }

    pub fn degree(&self) -> usize {
        self.n
    }
}

fn require_two_site(r: &TensorOperator) -> Result<()> {
    if r.factors() != 2 {
        return Err(Error::ShapeMismatch {
            expected: "operator on V tensor V".into(),
            found: format!("{} factors", r.factors()),
        });
    }
    Ok(())
}

/// (R x 1)(1 x R)(R x 1) - (1 x R)(R x 1)(1 x R) on three factors; the zero
/// operator exactly when R satisfies the braid relation.
pub fn ybe_defect(r: &TensorOperator) -> Result<TensorOperator> {
    require_two_site(r)?;
    let s1 = r.pad(3, 1)?;
    let s2 = r.pad(3, 2)?;
    let lhs = s1.compose(&s2)?.compose(&s1)?;
    let rhs = s2.compose(&s1)?.compose(&s2)?;
    Ok(lhs.sub(&rhs)?)
}

pub fn is_yang_baxter(r: &TensorOperator) -> Result<bool> {
    Ok(ybe_defect(r)?.is_zero())
}

pub(crate) fn delta1_op(r: &TensorOperator, f: &TensorOperator) -> Result<TensorOperator> {
    require_two_site(r)?;
    if f.factors() != 1 {
        return Err(Error::ShapeMismatch {
            expected: "1-cochain".into(),
            found: format!("{} factors", f.factors()),
        });
    }
    let f1 = f.pad(2, 1)?;
    let f2 = f.pad(2, 2)?;
    let plus = r.compose(&f1)?.add(&r.compose(&f2)?)?;
    let minus = f1.compose(r)?.add(&f2.compose(r)?)?;
    plus.sub(&minus)
}

/// delta1(f) = R(f x 1) + R(1 x f) - (f x 1)R - (1 x f)R.
pub fn delta1(r: &TensorOperator, f: &Cochain) -> Result<Cochain> {
    if f.degree() != 1 {
        return Err(Error::ShapeMismatch {
            expected: "degree-1 cochain".into(),
            found: format!("degree {}", f.degree()),
        });
    }
    Cochain::new(delta1_op(r, &f.op)?)
}

pub(crate) fn delta2_op(r: &TensorOperator, phi: &TensorOperator) -> Result<TensorOperator> {
    require_two_site(r)?;
    require_two_site(phi)?;
    let r1 = r.pad(3, 1)?;
    let r2 = r.pad(3, 2)?;
    let p1 = phi.pad(3, 1)?;
    let p2 = phi.pad(3, 2)?;
    let mut acc = r1.compose(&r2)?.compose(&p1)?;
    acc = acc.add(&r1.compose(&p2)?.compose(&r1)?)?;
    acc = acc.add(&p1.compose(&r2)?.compose(&r1)?)?;
    acc = acc.sub(&r2.compose(&r1)?.compose(&p2)?)?;
    acc = acc.sub(&r2.compose(&p1)?.compose(&r2)?)?;
    acc = acc.sub(&p2.compose(&r1)?.compose(&r2)?)?;
    Ok(acc)
}

/// The six-term differential on 2-cochains:
/// (Rx1)(1xR)(phix1) + (Rx1)(1xphi)(Rx1) + (phix1)(1xR)(Rx1)
/// - (1xR)(Rx1)(1xphi) - (1xR)(phix1)(1xR) - (1xphi)(Rx1)(1xR).
pub fn delta2(r: &TensorOperator, phi: &Cochain) -> Result<Cochain> {
    if phi.degree() != 2 {
        return Err(Error::ShapeMismatch {
            expected: "degree-2 cochain".into(),
            found: format!("degree {}", phi.degree()),
        });
    }
    Cochain::new(delta2_op(r, &phi.op)?)
}

fn compose_chain(factors: &[TensorOperator], ring: &Ring, d: usize, m: usize) -> Result<TensorOperator> {
    let mut acc = TensorOperator::identity(ring, d, m);
    for f in factors {
        acc = acc.compose(f)?;
    }
    Ok(acc)
}

/// The i-th partial differential taking degree-n cochains to degree n+1,
/// written as a difference of two sandwiches of padded crossing operators.
pub(crate) fn partial_diff_op(
    r: &TensorOperator,
    phi: &TensorOperator,
    i: usize,
) -> Result<TensorOperator> {
    require_two_site(r)?;
    let n = phi.factors();
    if n == 0 || i == 0 || i > n {
        return Err(Error::ShapeMismatch {
            expected: format!("1 <= i <= {n}"),
            found: format!("i = {i}"),
        });
    }
    let ring = r.ring();
    let d = r.local_dim();
    let m = n + 1;
    let sigma = |k: usize| r.pad(m, k);
    // Left and right crossing products around (1 x phi).
    let mut left_one: Vec<TensorOperator> = Vec::new();
    for k in (1..=(n + 1 - i)).rev() {
        left_one.push(sigma(k)?);
    }
    let mut right_one: Vec<TensorOperator> = Vec::new();
    for k in 1..=i {
        right_one.push(sigma(k)?);
    }
    // Products around (phi x 1).
    let mut left_two: Vec<TensorOperator> = Vec::new();
    for k in (n + 2 - i)..=n {
        left_two.push(sigma(k)?);
    }
    let mut right_two: Vec<TensorOperator> = Vec::new();
    for k in ((i + 1)..=n).rev() {
        right_two.push(sigma(k)?);
    }
    let term_one = compose_chain(&left_one, &ring, d, m)?
        .compose(&phi.pad(m, 2)?)?
        .compose(&compose_chain(&right_one, &ring, d, m)?)?;
    let term_two = compose_chain(&left_two, &ring, d, m)?
        .compose(&phi.pad(m, 1)?)?
        .compose(&compose_chain(&right_two, &ring, d, m)?)?;
    term_one.sub(&term_two)
}

pub fn partial_diff(r: &TensorOperator, phi: &Cochain, i: usize) -> Result<Cochain> {
    Cochain::new(partial_diff_op(r, &phi.op, i)?)
}

pub(crate) fn full_diff_op(r: &TensorOperator, phi: &TensorOperator) -> Result<TensorOperator> {
    let n = phi.factors();
    let mut acc = TensorOperator::zero(&r.ring(), r.local_dim(), n + 1);
    for i in 1..=n {
        let d_i = partial_diff_op(r, phi, i)?;
        acc = if i % 2 == 1 { acc.sub(&d_i)? } else { acc.add(&d_i)? };
    }
    Ok(acc)
}

/// The alternating sum of partial differentials.
pub fn full_diff(r: &TensorOperator, phi: &Cochain) -> Result<Cochain> {
    Cochain::new(full_diff_op(r, &phi.op)?)
}

/// Exact Gauss-Jordan solve of rows * x = rhs over a scalar field.
/// Returns one solution (free unknowns set to zero) or None if inconsistent.
fn solve_rows(
    ring: &Ring,
    rows: &mut [Vec<RingElement>],
    rhs: &mut [RingElement],
    ncols: usize,
) -> Result<(Option<Vec<RingElement>>, usize)> {
    let nrows = rows.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    for col in 0..ncols {
        let mut pivot = None;
        for row in rank..nrows {
            if !rows[row][col].is_zero() {
                pivot = Some(row);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        rhs.swap(rank, p);
        let inv = rows[rank][col].invert_unit()?;
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].try_mul(&inv)?;
        }
        rhs[rank] = rhs[rank].try_mul(&inv)?;
        for row in 0..nrows {
            if row != rank && !rows[row][col].is_zero() {
                let factor = rows[row][col].clone();
                for c in col..ncols {
                    let t = rows[rank][c].try_mul(&factor)?;
                    rows[row][c] = rows[row][c].try_sub(&t)?;
                }
                let t = rhs[rank].try_mul(&factor)?;
                rhs[row] = rhs[row].try_sub(&t)?;
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    for row in rank..nrows {
        if !rhs[row].is_zero() {
            return Ok((None, rank));
        }
    }
    let mut solution = vec![ring.zero(); ncols];
    for (col, pv) in pivot_of_col.iter().enumerate() {
        if let Some(row) = pv {
            solution[col] = rhs[*row].clone();
        }
    }
    Ok((Some(solution), rank))
}

fn basis_one_cochains(ring: &Ring, d: usize) -> Vec<TensorOperator> {
    let mut out = Vec::with_capacity(d * d);
    for o in 0..d {
        for i in 0..d {
            let mut e = TensorOperator::zero(ring, d, 1);
            e.set(o, i, ring.one());
            out.push(e);
        }
    }
    out
}

fn require_scalar_field(ring: &Ring, context: &str) -> Result<()> {
    if !ring.is_scalar_field() {
        return Err(Error::NonField { ring: ring.id().to_string(), context: context.into() });
    }
    Ok(())
}

/// Find f with delta1(R, f) = phi over a scalar field, or certify that phi
/// is not a coboundary (the linear system is inconsistent).
pub fn cobound_solve(r: &TensorOperator, phi: &Cochain) -> Result<Option<Cochain>> {
    if phi.degree() != 2 {
        return Err(Error::ShapeMismatch {
            expected: "degree-2 cochain".into(),
            found: format!("degree {}", phi.degree()),
        });
    }
    require_two_site(r)?;
    let ring = r.ring();
    require_scalar_field(&ring, "coboundary solve")?;
    let d = r.local_dim();
    let dim2 = d * d;
    let ncols = d * d;
    let columns: Vec<TensorOperator> = basis_one_cochains(&ring, d)
        .iter()
        .map(|e| delta1_op(r, e))
        .collect::<Result<_>>()?;
    let mut rows: Vec<Vec<RingElement>> = Vec::with_capacity(dim2 * dim2);
    let mut rhs: Vec<RingElement> = Vec::with_capacity(dim2 * dim2);
    for out in 0..dim2 {
        for input in 0..dim2 {
            rows.push(columns.iter().map(|c| c.get(out, input).clone()).collect());
            rhs.push(phi.op.get(out, input).clone());
        }
    }
    let (solution, _rank) = solve_rows(&ring, &mut rows, &mut rhs, ncols)?;
    match solution {
        None => Ok(None),
        Some(values) => {
            let mut f = TensorOperator::zero(&ring, d, 1);
            for o in 0..d {
                for i in 0..d {
                    f.set(o, i, values[o * d + i].clone());
                }
            }
            Ok(Some(Cochain::new(f)?))
        }
    }
}

/// Dimensions in degree two over a scalar field: the full cochain space,
/// the cocycles (kernel of delta2), and the coboundaries (image of delta1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeTwoRanks {
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
}

impl DegreeTwoRanks {
    pub fn cohomology(&self) -> usize {
        self.cocycles - self.coboundaries
    }
}

fn operator_rank(ring: &Ring, columns: &[TensorOperator]) -> Result<usize> {
    let nrows = columns.first().map(|c| c.dim() * c.dim()).unwrap_or(0);
    let ncols = columns.len();
    let mut rows: Vec<Vec<RingElement>> = Vec::with_capacity(nrows);
    let mut rhs: Vec<RingElement> = vec![ring.zero(); nrows];
    if let Some(first) = columns.first() {
        let dim = first.dim();
        for out in 0..dim {
            for input in 0..dim {
                rows.push(columns.iter().map(|c| c.get(out, input).clone()).collect());
            }
        }
    }
    let (_, rank) = solve_rows(ring, &mut rows, &mut rhs, ncols)?;
    Ok(rank)
}

pub fn degree_two_ranks(r: &TensorOperator) -> Result<DegreeTwoRanks> {
    require_two_site(r)?;
    let ring = r.ring();
    require_scalar_field(&ring, "rank computation")?;
    let d = r.local_dim();
    let dim2 = d * d;
    let mut delta1_cols = Vec::with_capacity(dim2);
    for e in basis_one_cochains(&ring, d) {
        delta1_cols.push(delta1_op(r, &e)?);
    }
    let coboundaries = operator_rank(&ring, &delta1_cols)?;
    let mut delta2_cols = Vec::with_capacity(dim2 * dim2);
    for o in 0..dim2 {
        for i in 0..dim2 {
            let mut e = TensorOperator::zero(&ring, d, 2);
            e.set(o, i, ring.one());
            delta2_cols.push(delta2_op(r, &e)?);
        }
    }
    let delta2_rank = operator_rank(&ring, &delta2_cols)?;
    Ok(DegreeTwoRanks {
        cochains: dim2 * dim2,
        cocycles: dim2 * dim2 - delta2_rank,
        coboundaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::{alexander_quandle_f4, r_operator};
    use crate::ring::{Base, Ring};

    fn swap2(ring: &Ring) -> TensorOperator {
        TensorOperator::from_permutation(ring, 2, 2, &[0, 2, 1, 3]).unwrap()
    }

    fn jones_at_2(ring: &Ring) -> TensorOperator {
        TensorOperator::from_int_rows(
            ring,
            2,
            2,
            &[
                vec![1, 0, 0, 0],
                vec![0, 0, 2, 0],
                vec![0, 2, -3, 0],
                vec![0, 0, 0, 1],
            ],
        )
        .unwrap()
    }

    fn diag4(ring: &Ring, entries: [i64; 4]) -> TensorOperator {
        let mut t = TensorOperator::zero(ring, 2, 2);
        for (k, &e) in entries.iter().enumerate() {
            if e != 0 {
                t.set(k, k, ring.int(e));
            }
        }
        t
    }

    #[test]
    fn defect_vanishes_for_braiding_operators() {
        let qq = Ring::rationals();
        assert!(is_yang_baxter(&swap2(&qq)).unwrap());
        let tau3 = TensorOperator::from_permutation(&qq, 3, 2, &{
            let mut p = vec![0usize; 9];
            for a in 0..3 {
                for b in 0..3 {
                    p[a * 3 + b] = b * 3 + a;
                }
            }
            p
        })
        .unwrap();
        assert!(is_yang_baxter(&tau3).unwrap());
        assert!(is_yang_baxter(&jones_at_2(&qq)).unwrap());
        assert!(is_yang_baxter(&diag4(&qq, [1, 0, 1, 1])).unwrap());
        assert!(is_yang_baxter(&diag4(&qq, [1, 0, 1, 0])).unwrap());
        let zr = Ring::builder(Base::Integers).group("zeta", 2).build();
        let q = alexander_quandle_f4();
        assert!(is_yang_baxter(&r_operator(&q, &zr)).unwrap());
    }

    #[test]
    fn defect_catches_a_non_solution() {
        let qq = Ring::rationals();
        let a = TensorOperator::from_int_rows(&qq, 2, 1, &[vec![1, 1], vec![0, 1]]).unwrap();
        let r = a.tensor(&TensorOperator::identity(&qq, 2, 1)).unwrap();
        assert!(!is_yang_baxter(&r).unwrap());
    }

    #[test]
    fn delta1_vanishes_for_the_transposition() {
        let qq = Ring::rationals();
        let tau = swap2(&qq);
        for e in basis_one_cochains(&qq, 2) {
            assert!(delta1_op(&tau, &e).unwrap().is_zero());
        }
    }

    #[test]
    fn delta1_on_identity_and_zero() {
        let qq = Ring::rationals();
        let r = jones_at_2(&qq);
        let id = TensorOperator::identity(&qq, 2, 1);
        assert!(delta1_op(&r, &id).unwrap().is_zero());
        assert!(delta1_op(&r, &TensorOperator::zero(&qq, 2, 1)).unwrap().is_zero());
    }

    #[test]
    fn delta2_vanishes_for_the_transposition() {
        let qq = Ring::rationals();
        let tau = swap2(&qq);
        for o in 0..4 {
            for i in 0..4 {
                let mut phi = TensorOperator::zero(&qq, 2, 2);
                phi.set(o, i, qq.one());
                assert!(delta2_op(&tau, &phi).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn degree_zero_part_kills_its_degree_one_partner() {
        // R = diag(1,0,1,1), phi = the (01)<->(10) swap block.
        let qq = Ring::rationals();
        let j0 = diag4(&qq, [1, 0, 1, 1]);
        let mut j1 = TensorOperator::zero(&qq, 2, 2);
        j1.set(1, 2, qq.one());
        j1.set(2, 1, qq.one());
        assert!(delta2_op(&j0, &j1).unwrap().is_zero());
        // The general-arity differential does not vanish on the same pair.
        assert!(!full_diff_op(&j0, &j1).unwrap().is_zero());
    }

    #[test]
    fn quandle_r_is_a_two_cocycle_for_itself() {
        let zr = Ring::builder(Base::Integers).group("zeta", 2).build();
        let q = alexander_quandle_f4();
        let r = r_operator(&q, &zr);
        assert!(delta2_op(&r, &r).unwrap().is_zero());
    }

    #[test]
    fn delta2_after_delta1_vanishes() {
        let qq = Ring::rationals();
        let mut rs = vec![
            swap2(&qq),
            jones_at_2(&qq),
            diag4(&qq, [1, 0, 1, 1]),
            diag4(&qq, [1, 0, 1, 0]),
        ];
        let zr = Ring::builder(Base::Integers).group("zeta", 2).build();
        rs.push(r_operator(&alexander_quandle_f4(), &zr));
        for r in &rs {
            let ring = r.ring();
            for e in basis_one_cochains(&ring, r.local_dim()) {
                let phi = delta1_op(r, &e).unwrap();
                assert!(delta2_op(r, &phi).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn partial_differentials_commute_simplicially() {
        // For i < j: d_j . d_i = d_i . d_(j-1).
        let qq = Ring::rationals();
        let r = jones_at_2(&qq);
        let mut phi = TensorOperator::zero(&qq, 2, 2);
        phi.set(0, 3, qq.int(2));
        phi.set(2, 1, qq.int(-1));
        phi.set(1, 1, qq.int(5));
        for n in [2usize, 3] {
            let cochain = if n == 2 {
                phi.clone()
            } else {
                phi.tensor(&TensorOperator::from_int_rows(&qq, 2, 1, &[vec![1, 2], vec![0, 1]]).unwrap())
                    .unwrap()
            };
            for i in 1..=n {
                for j in (i + 1)..=(n + 1) {
                    let lhs = partial_diff_op(&r, &partial_diff_op(&r, &cochain, i).unwrap(), j)
                        .unwrap();
                    let rhs = partial_diff_op(&r, &partial_diff_op(&r, &cochain, j - 1).unwrap(), i)
                        .unwrap();
                    assert_eq!(lhs, rhs, "n={n} i={i} j={j}");
                }
            }
        }
        let zr = Ring::builder(Base::Integers).group("zeta", 2).build();
        let rq = r_operator(&alexander_quandle_f4(), &zr);
        let lhs = partial_diff_op(&rq, &partial_diff_op(&rq, &rq, 1).unwrap(), 2).unwrap();
        let rhs = partial_diff_op(&rq, &partial_diff_op(&rq, &rq, 1).unwrap(), 1).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn full_differential_squares_to_zero() {
        let qq = Ring::rationals();
        let f = TensorOperator::from_int_rows(&qq, 2, 1, &[vec![3, -1], vec![2, 7]]).unwrap();
        let mut phi = TensorOperator::zero(&qq, 2, 2);
        phi.set(0, 3, qq.int(2));
        phi.set(2, 1, qq.int(-1));
        phi.set(3, 0, qq.int(4));
        for r in [swap2(&qq), jones_at_2(&qq)] {
            let once = full_diff_op(&r, &f).unwrap();
            assert!(full_diff_op(&r, &once).unwrap().is_zero());
            let once2 = full_diff_op(&r, &phi).unwrap();
            assert!(full_diff_op(&r, &once2).unwrap().is_zero());
        }
        let zr = Ring::builder(Base::Integers).group("zeta", 2).build();
        let rq = r_operator(&alexander_quandle_f4(), &zr);
        let once = full_diff_op(&rq, &rq).unwrap();
        assert!(full_diff_op(&rq, &once).unwrap().is_zero());
    }

    #[test]
    fn low_degree_comparison_is_pinned() {
        // For the transposition both conventions give zero in degrees 1 and 2.
        let qq = Ring::rationals();
        let tau = swap2(&qq);
        let f = TensorOperator::from_int_rows(&qq, 2, 1, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert!(full_diff_op(&tau, &f).unwrap().is_zero());
        assert!(delta1_op(&tau, &f).unwrap().is_zero());
        // For a generic braiding operator the general-arity differential is a
        // different map from the low-degree ones, under either sign.
        let r = jones_at_2(&qq);
        let fd = full_diff_op(&r, &f).unwrap();
        let d1 = delta1_op(&r, &f).unwrap();
        assert_ne!(fd, d1);
        assert_ne!(fd, d1.neg());
        let mut phi = TensorOperator::zero(&qq, 2, 2);
        phi.set(1, 2, qq.one());
        phi.set(2, 1, qq.one());
        let fd2 = full_diff_op(&r, &phi).unwrap();
        let d2 = delta2_op(&r, &phi).unwrap();
        assert_ne!(fd2, d2);
        assert_ne!(fd2, d2.neg());
    }

    #[test]
    fn cobound_solve_finds_witnesses() {
        let qq = Ring::rationals();
        let r = jones_at_2(&qq);
        let f = TensorOperator::from_int_rows(&qq, 2, 1, &[vec![1, 2], vec![3, 4]]).unwrap();
        let phi = Cochain::new(delta1_op(&r, &f).unwrap()).unwrap();
        let g = cobound_solve(&r, &phi).unwrap().expect("coboundary has a witness");
        assert_eq!(delta1_op(&r, &g.op).unwrap(), phi.op);
        let zero = Cochain::new(TensorOperator::zero(&qq, 2, 2)).unwrap();
        let g0 = cobound_solve(&r, &zero).unwrap().unwrap();
        assert!(delta1_op(&r, &g0.op).unwrap().is_zero());
    }

    #[test]
    fn cobound_solve_certifies_non_coboundaries() {
        let qq = Ring::rationals();
        let tau = swap2(&qq);
        let mut phi = TensorOperator::zero(&qq, 2, 2);
        phi.set(0, 0, qq.one());
        assert!(cobound_solve(&tau, &Cochain::new(phi).unwrap()).unwrap().is_none());
    }

    #[test]
    fn cobound_solve_requires_a_field() {
        let zz = Ring::builder(Base::Integers).build();
        let tau = TensorOperator::from_permutation(&zz, 2, 2, &[0, 2, 1, 3]).unwrap();
        let phi = Cochain::new(TensorOperator::zero(&zz, 2, 2)).unwrap();
        assert!(matches!(cobound_solve(&tau, &phi), Err(Error::NonField { .. })));
    }

    #[test]
    fn ranks_for_the_transposition() {
        let qq = Ring::rationals();
        let ranks = degree_two_ranks(&swap2(&qq)).unwrap();
        assert_eq!(ranks.cochains, 16);
        assert_eq!(ranks.cocycles, 16);
        assert_eq!(ranks.coboundaries, 0);
        assert_eq!(ranks.cohomology(), 16);
    }

    #[test]
    fn ranks_nest_for_a_generic_operator() {
        let qq = Ring::rationals();
        let ranks = degree_two_ranks(&jones_at_2(&qq)).unwrap();
        assert!(ranks.coboundaries <= ranks.cocycles);
        assert!(ranks.cocycles <= ranks.cochains);
    }

    #[test]
    fn conjugating_preserves_the_equation() {
        let qq = Ring::rationals();
        let r = jones_at_2(&qq);
        // A weight operator commuting with R leaves it fixed.
        let mu = TensorOperator::from_int_rows(&qq, 2, 1, &[vec![1, 0], vec![0, 4]]).unwrap();
        let mm = mu.tensor(&mu).unwrap();
        assert_eq!(mm.compose(&r).unwrap(), r.compose(&mm).unwrap());
        // A generic invertible gauge keeps the defect zero.
        let g = TensorOperator::from_int_rows(&qq, 2, 1, &[vec![1, 1], vec![0, 1]]).unwrap();
        let gg = g.tensor(&g).unwrap();
        let conj = gg.compose(&r).unwrap().compose(&gg.invert().unwrap()).unwrap();
        assert!(is_yang_baxter(&conj).unwrap());
    }
}
