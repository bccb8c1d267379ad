//! Polynomials with nonnegative arbitrary-precision integer coefficients.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Dense coefficient vector, lowest degree first, without trailing zeros.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigUint>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1u32)
    }

    /// `x`.
    pub fn x() -> Self {
        Self::from_u64s(&[0, 1])
    }

    pub fn constant<T: Into<BigUint>>(c: T) -> Self {
        Self::new(vec![c.into()])
    }

    /// `x + c`.
    pub fn x_plus<T: Into<BigUint>>(c: T) -> Self {
        Self::new(vec![c.into(), BigUint::one()])
    }

    pub fn new(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigUint {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale<T: Into<BigUint>>(&self, k: T) -> Polynomial {
        let k = k.into();
        Self::new(self.coeffs.iter().map(|c| c * &k).collect())
    }

    pub fn pow(&self, mut exp: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplies by `x^k`.
    pub fn shift_degree(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigUint::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    /// `P(x + c)`, by Horner's scheme in the ring of polynomials.
    pub fn shift<T: Into<BigUint>>(&self, c: T) -> Polynomial {
        let step = Self::x_plus(c);
        let mut acc = Self::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc.mul(&step).add(&Self::constant(a.clone()));
        }
        acc
    }

    pub fn eval<T: Into<BigUint>>(&self, t: T) -> BigUint {
        let t = t.into();
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, a| acc * &t + a)
    }

    /// Value at `x = -1`, computed in signed arithmetic.
    pub fn eval_minus_one(&self) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let c = BigInt::from(c.clone());
                if i % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// Coefficientwise `<=` on normalized forms.
    pub fn leq(&self, other: &Polynomial) -> bool {
        self.coeffs.len() <= other.coeffs.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }

    /// `leq` and not equal.
    pub fn lt(&self, other: &Polynomial) -> bool {
        self.leq(other) && self != other
    }

    pub fn is_unimodal(&self) -> bool {
        is_unimodal(&self.coeffs)
    }

    pub fn is_log_concave(&self) -> bool {
        is_log_concave(&self.coeffs)
    }

    pub fn has_internal_zeros(&self) -> bool {
        has_internal_zeros(&self.coeffs)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

/// Nondecreasing up to the first maximum and nonincreasing from there on.
pub fn is_unimodal<T: Ord>(seq: &[T]) -> bool {
    let Some(max) = seq.iter().max() else {
        return true;
    };
    let peak = seq.iter().position(|x| x == max).unwrap();
    seq[..=peak].windows(2).all(|w| w[0] <= w[1]) && seq[peak..].windows(2).all(|w| w[0] >= w[1])
}

/// `s[i-1] * s[i+1] <= s[i]^2` at every interior index.
pub fn is_log_concave(seq: &[BigUint]) -> bool {
    seq.windows(3).all(|w| &w[0] * &w[2] <= &w[1] * &w[1])
}

/// A zero strictly between two positive entries.
pub fn has_internal_zeros(seq: &[BigUint]) -> bool {
    let first = seq.iter().position(|x| !x.is_zero());
    let last = seq.iter().rposition(|x| !x.is_zero());
    match (first, last) {
        (Some(a), Some(b)) => seq[a..=b].iter().any(|x| x.is_zero()),
        _ => false,
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{c}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::add(self, rhs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::mul(self, rhs)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse::<BigUint>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()
            .map(Polynomial::new)
    }
}
