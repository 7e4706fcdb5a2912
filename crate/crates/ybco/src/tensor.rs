//! Dense linear endomorphisms of V^{tensor m} for a d-dimensional V, with
//! entries in an exact coefficient ring.
//!
//! Storage is row-major: `coeffs[out * d^m + in]`, where a basis multi-index
//! packs its leftmost tensor factor most significantly. Composition skips
//! zero entries, so permutation-like operators (most of the interesting
//! ones) compose in roughly nnz * dim time.

use crate::ring::{Ring, RingElement};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorOperator {
    ring: Ring,
    d: usize,
    m: usize,
    coeffs: Vec<RingElement>,
}

fn pow_dim(d: usize, m: usize) -> usize {
    d.checked_pow(m as u32).expect("dimension overflow")
}

impl TensorOperator {
    pub fn zero(ring: &Ring, d: usize, m: usize) -> Self {
        assert!(d >= 1);
        let dim = pow_dim(d, m);
        TensorOperator { ring: ring.clone(), d, m, coeffs: vec![ring.zero(); dim * dim] }
    }

    pub fn identity(ring: &Ring, d: usize, m: usize) -> Self {
        let mut t = Self::zero(ring, d, m);
        let dim = t.dim();
        for i in 0..dim {
            t.coeffs[i * dim + i] = ring.one();
        }
        t
    }

    /// Operator sending basis vector `j` to basis vector `perm[j]`.
    pub fn from_permutation(ring: &Ring, d: usize, m: usize, perm: &[usize]) -> Result<Self> {
        let mut t = Self::zero(ring, d, m);
        let dim = t.dim();
        if perm.len() != dim {
            return Err(Error::ShapeMismatch {
                expected: format!("permutation of length {dim}"),
                found: format!("length {}", perm.len()),
            });
        }
        for (j, &o) in perm.iter().enumerate() {
            if o >= dim {
                return Err(Error::ShapeMismatch {
                    expected: format!("indices below {dim}"),
                    found: format!("{o}"),
                });
            }
            t.coeffs[o * dim + j] = ring.one();
        }
        Ok(t)
    }

    pub fn from_entries(ring: &Ring, d: usize, m: usize, entries: Vec<RingElement>) -> Result<Self> {
        let dim = pow_dim(d, m);
        if entries.len() != dim * dim {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", dim * dim),
                found: format!("{}", entries.len()),
            });
        }
        for e in &entries {
            if e.ring() != ring {
                return Err(Error::RingMismatch { left: ring.id().into(), right: e.ring().id().into() });
            }
        }
        Ok(TensorOperator { ring: ring.clone(), d, m, coeffs: entries })
    }

    /// Build from integer rows, `rows[out][in]`.
    pub fn from_int_rows<R: AsRef<[i64]>>(ring: &Ring, d: usize, m: usize, rows: &[R]) -> Result<Self> {
        let dim = pow_dim(d, m);
        if rows.len() != dim || rows.iter().any(|r| r.as_ref().len() != dim) {
            return Err(Error::ShapeMismatch {
                expected: format!("{dim} x {dim} rows"),
                found: format!("{} rows", rows.len()),
            });
        }
        let mut t = Self::zero(ring, d, m);
        for (o, row) in rows.iter().enumerate() {
            for (i, v) in row.as_ref().iter().enumerate() {
                if *v != 0 {
                    t.coeffs[o * dim + i] = ring.int(*v);
                }
            }
        }
        Ok(t)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn factors(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        pow_dim(self.d, self.m)
    }

    pub fn get(&self, out: usize, inp: usize) -> &RingElement {
        &self.coeffs[out * self.dim() + inp]
    }

    pub fn set(&mut self, out: usize, inp: usize, v: RingElement) {
        assert!(v.ring() == &self.ring, "ring mismatch in set");
        let dim = self.dim();
        self.coeffs[out * dim + inp] = v;
    }

    /// Nonzero entries as (out, in, value).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RingElement)> {
        let dim = self.dim();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(move |(k, e)| (k / dim, k % dim, e))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|e| e.is_zero())
    }

    fn check_same_shape(&self, other: &TensorOperator) -> Result<()> {
        if self.d != other.d || self.m != other.m {
            return Err(Error::ShapeMismatch {
                expected: format!("d={} m={}", self.d, self.m),
                found: format!("d={} m={}", other.d, other.m),
            });
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.id().into(),
                right: other.ring.id().into(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TensorOperator) -> Result<TensorOperator> {
        self.check_same_shape(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(TensorOperator { ring: self.ring.clone(), d: self.d, m: self.m, coeffs })
    }

    pub fn sub(&self, other: &TensorOperator) -> Result<TensorOperator> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TensorOperator {
        let coeffs = self.coeffs.iter().map(|e| e.neg()).collect();
        TensorOperator { ring: self.ring.clone(), d: self.d, m: self.m, coeffs }
    }

    pub fn scale(&self, s: &RingElement) -> Result<TensorOperator> {
        if s.ring() != &self.ring {
            return Err(Error::RingMismatch {
                left: self.ring.id().into(),
                right: s.ring().id().into(),
            });
        }
        let coeffs = self.coeffs.iter().map(|e| e.try_mul(s)).collect::<Result<Vec<_>>>()?;
        Ok(TensorOperator { ring: self.ring.clone(), d: self.d, m: self.m, coeffs })
    }

    pub fn scale_int(&self, n: i64) -> TensorOperator {
        let coeffs = self.coeffs.iter().map(|e| e.scale_int(n)).collect();
        TensorOperator { ring: self.ring.clone(), d: self.d, m: self.m, coeffs }
    }

    /// `self` composed after `other` (matrix product self * other).
    pub fn compose(&self, other: &TensorOperator) -> Result<TensorOperator> {
        self.check_same_shape(other)?;
        let dim = self.dim();
        let mut out = vec![self.ring.zero(); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = &self.coeffs[i * dim + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let b = &other.coeffs[k * dim + j];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.try_mul(b)?;
                    out[i * dim + j] = out[i * dim + j].try_add(&prod)?;
                }
            }
        }
        Ok(TensorOperator { ring: self.ring.clone(), d: self.d, m: self.m, coeffs: out })
    }

    /// Kronecker product; `self` occupies the leftmost factors.
    pub fn tensor(&self, other: &TensorOperator) -> Result<TensorOperator> {
        if self.d != other.d {
            return Err(Error::ShapeMismatch {
                expected: format!("local dimension {}", self.d),
                found: format!("{}", other.d),
            });
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.id().into(),
                right: other.ring.id().into(),
            });
        }
        let d2 = other.dim();
        let m = self.m + other.m;
        let mut t = TensorOperator::zero(&self.ring, self.d, m);
        let dim = t.dim();
        for (o1, i1, a) in self.entries() {
            for (o2, i2, b) in other.entries() {
                let o = o1 * d2 + o2;
                let i = i1 * d2 + i2;
                t.coeffs[o * dim + i] = a.try_mul(b)?;
            }
        }
        Ok(t)
    }

    /// Embed into `total` factors with this operator starting at 1-based
    /// factor `pos`, identity elsewhere.
    pub fn pad(&self, total: usize, pos: usize) -> Result<TensorOperator> {
        if pos < 1 || pos + self.m - 1 > total {
            return Err(Error::ShapeMismatch {
                expected: format!("1 <= pos <= {}", total + 1 - self.m),
                found: format!("pos={pos}"),
            });
        }
        let left = TensorOperator::identity(&self.ring, self.d, pos - 1);
        let right = TensorOperator::identity(&self.ring, self.d, total - (pos - 1) - self.m);
        left.tensor(self)?.tensor(&right)
    }

    /// Trace over the listed 1-based factors; the result acts on the
    /// remaining factors in their original order.
    pub fn partial_trace(&self, positions: &[usize]) -> Result<TensorOperator> {
        let mut traced = vec![false; self.m];
        for &p in positions {
            if p < 1 || p > self.m {
                return Err(Error::ShapeMismatch {
                    expected: format!("factor positions in 1..={}", self.m),
                    found: format!("{p}"),
                });
            }
            if traced[p - 1] {
                return Err(Error::ShapeMismatch {
                    expected: "distinct factor positions".into(),
                    found: format!("{p} repeated"),
                });
            }
            traced[p - 1] = true;
        }
        let kept: Vec<usize> = (0..self.m).filter(|k| !traced[*k]).collect();
        let m_out = kept.len();
        let mut t = TensorOperator::zero(&self.ring, self.d, m_out);
        let dim_out = t.dim();
        let unpack = |mut idx: usize| -> Vec<usize> {
            let mut digits = vec![0usize; self.m];
            for k in (0..self.m).rev() {
                digits[k] = idx % self.d;
                idx /= self.d;
            }
            digits
        };
        let pack_kept = |digits: &[usize]| -> usize {
            kept.iter().fold(0usize, |acc, &k| acc * self.d + digits[k])
        };
        for (o, i, e) in self.entries() {
            let od = unpack(o);
            let id = unpack(i);
            if (0..self.m).any(|k| traced[k] && od[k] != id[k]) {
                continue;
            }
            let oo = pack_kept(&od);
            let ii = pack_kept(&id);
            t.coeffs[oo * dim_out + ii] = t.coeffs[oo * dim_out + ii].try_add(e)?;
        }
        Ok(t)
    }

    pub fn trace(&self) -> RingElement {
        let dim = self.dim();
        let mut acc = self.ring.zero();
        for i in 0..dim {
            acc = acc.try_add(&self.coeffs[i * dim + i]).expect("same ring");
        }
        acc
    }

    /// Inverse by Gaussian elimination. Only over a plain field (QQ or
    /// QQ(i), no variables, no group part); rings of formal series should
    /// use the degree-by-degree inverse instead.
    pub fn invert(&self) -> Result<TensorOperator> {
        if !self.ring.is_scalar_field() {
            return Err(Error::NonField {
                ring: self.ring.id().into(),
                context: "operator inversion by elimination".into(),
            });
        }
        let dim = self.dim();
        let mut a = self.coeffs.clone();
        let mut b = TensorOperator::identity(&self.ring, self.d, self.m).coeffs;
        for col in 0..dim {
            let pivot = (col..dim).find(|&r| !a[r * dim + col].is_zero()).ok_or_else(|| {
                Error::Singular { context: format!("no pivot in column {col}") }
            })?;
            if pivot != col {
                for j in 0..dim {
                    a.swap(pivot * dim + j, col * dim + j);
                    b.swap(pivot * dim + j, col * dim + j);
                }
            }
            let inv = a[col * dim + col].invert_unit()?;
            for j in 0..dim {
                a[col * dim + j] = a[col * dim + j].try_mul(&inv)?;
                b[col * dim + j] = b[col * dim + j].try_mul(&inv)?;
            }
            for r in 0..dim {
                if r == col || a[r * dim + col].is_zero() {
                    continue;
                }
                let f = a[r * dim + col].clone();
                for j in 0..dim {
                    let xa = a[col * dim + j].try_mul(&f)?;
                    a[r * dim + j] = a[r * dim + j].try_sub(&xa)?;
                    let xb = b[col * dim + j].try_mul(&f)?;
                    b[r * dim + j] = b[r * dim + j].try_sub(&xb)?;
                }
            }
        }
        Ok(TensorOperator { ring: self.ring.clone(), d: self.d, m: self.m, coeffs: b })
    }

    pub fn map_entries<F>(&self, f: F) -> Result<TensorOperator>
    where
        F: Fn(&RingElement) -> Result<RingElement>,
    {
        let coeffs = self.coeffs.iter().map(|e| f(e)).collect::<Result<Vec<_>>>()?;
        let ring = coeffs
            .first()
            .map(|e| e.ring().clone())
            .unwrap_or_else(|| self.ring.clone());
        for e in &coeffs {
            if e.ring() != &ring {
                return Err(Error::RingMismatch { left: ring.id().into(), right: e.ring().id().into() });
            }
        }
        Ok(TensorOperator { ring, d: self.d, m: self.m, coeffs })
    }

    pub fn coerce_into(&self, target: &Ring) -> Result<TensorOperator> {
        self.map_entries(|e| e.coerce_into(target))
    }

    pub fn specialize(&self, assignments: &[(&str, &RingElement)]) -> Result<TensorOperator> {
        self.map_entries(|e| e.specialize(assignments))
    }

    /// Entry-wise coefficient of `var^degree`, over the reduced ring.
    pub fn grade(&self, var: &str, degree: i64) -> Result<TensorOperator> {
        self.map_entries(|e| e.grade(var, degree))
    }

    fn multi_index_str(&self, mut idx: usize) -> String {
        if self.m == 0 {
            return "-".into();
        }
        let mut digits = vec![0usize; self.m];
        for k in (0..self.m).rev() {
            digits[k] = idx % self.d;
            idx /= self.d;
        }
        digits.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
    }

    /// Text form: a header line `d m ring`, then nonzero entries
    /// `out in value` in row-major order with dotted multi-indices.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.d, self.m, self.ring.id());
        for (o, i, e) in self.entries() {
            s.push_str(&format!("{} {} {}\n", self.multi_index_str(o), self.multi_index_str(i), e));
        }
        s
    }

    fn parse_multi_index(&self, s: &str) -> Result<usize> {
        if self.m == 0 {
            return if s == "-" {
                Ok(0)
            } else {
                Err(Error::Parse(format!("bad multi-index `{s}`")))
            };
        }
        let digits: Vec<usize> = s
            .split('.')
            .map(|p| p.parse::<usize>().map_err(|_| Error::Parse(format!("bad multi-index `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        if digits.len() != self.m || digits.iter().any(|&x| x >= self.d) {
            return Err(Error::Parse(format!("bad multi-index `{s}`")));
        }
        Ok(digits.iter().fold(0usize, |acc, &x| acc * self.d + x))
    }

    pub fn from_text(ring: &Ring, input: &str) -> Result<TensorOperator> {
        let mut lines = input.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty operator text".into()))?;
        let mut parts = header.split_whitespace();
        let d: usize = parts
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::Parse("bad header".into()))?;
        let m: usize = parts
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::Parse("bad header".into()))?;
        let stated_ring = parts.collect::<Vec<_>>().join(" ");
        if stated_ring != ring.id() {
            return Err(Error::RingMismatch { left: ring.id().into(), right: stated_ring });
        }
        let mut t = TensorOperator::zero(ring, d, m);
        let dim = t.dim();
        for line in lines {
            let mut ps = line.splitn(3, ' ');
            let o = t.parse_multi_index(ps.next().ok_or_else(|| Error::Parse("short line".into()))?)?;
            let i = t.parse_multi_index(ps.next().ok_or_else(|| Error::Parse("short line".into()))?)?;
            let v = ring.parse(ps.next().ok_or_else(|| Error::Parse("short line".into()))?)?;
            t.coeffs[o * dim + i] = v;
        }
        Ok(t)
    }
}
