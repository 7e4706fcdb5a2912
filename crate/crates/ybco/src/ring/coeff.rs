use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A Gaussian rational `re + im*i`, the scalar type under every ring.
///
/// Purely real values keep `im = 0` and take fast paths in multiplication,
/// so rings over QQ or ZZ pay nothing for the imaginary slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coeff {
    pub re: BigRational,
    pub im: BigRational,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Coeff { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn i() -> Self {
        Coeff { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Coeff { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coeff {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn real(re: BigRational) -> Self {
        Coeff { re, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True when both parts have denominator one.
    pub fn is_integral(&self) -> bool {
        self.re.denom().is_one() && self.im.denom().is_one()
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        Coeff { re: &self.re + &other.re, im: &self.im + &other.im }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        Coeff { re: &self.re - &other.re, im: &self.im - &other.im }
    }

    pub fn neg(&self) -> Coeff {
        Coeff { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        if self.im.is_zero() && other.im.is_zero() {
            return Coeff { re: &self.re * &other.re, im: BigRational::zero() };
        }
        Coeff {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn mul_int(&self, n: i64) -> Coeff {
        let k = BigRational::from_integer(BigInt::from(n));
        Coeff { re: &self.re * &k, im: &self.im * &k }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Coeff { re: self.re.recip(), im: BigRational::zero() });
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Coeff { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    /// Renders a rational without sign handling done by the caller.
    fn rat_abs_str(r: &BigRational) -> String {
        let a = r.abs();
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    /// Canonical text for a bare coefficient, e.g. `4`, `-3/2`, `i`, `-2*i`,
    /// `1+i`, `1-2*i`. Mixed values never carry outer parentheses here; the
    /// term renderer adds them when a monomial follows.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let re_part = if self.re.is_zero() {
            None
        } else {
            let s = Self::rat_abs_str(&self.re);
            Some(if self.re.is_negative() { format!("-{s}") } else { s })
        };
        let im_part = if self.im.is_zero() {
            None
        } else {
            let mag = self.im.abs();
            let body = if mag.is_one() { "i".to_string() } else { format!("{}*i", Self::rat_abs_str(&self.im)) };
            Some((self.im.is_negative(), body))
        };
        match (re_part, im_part) {
            (Some(r), None) => r,
            (None, Some((neg, b))) => {
                if neg {
                    format!("-{b}")
                } else {
                    b
                }
            }
            (Some(r), Some((neg, b))) => {
                if neg {
                    format!("{r}-{b}")
                } else {
                    format!("{r}+{b}")
                }
            }
            (None, None) => unreachable!(),
        }
    }
}
