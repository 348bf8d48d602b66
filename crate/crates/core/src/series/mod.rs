//! Exact truncated Laurent series in `q`.
//!
//! A [`LaurentSeries`] stores the coefficients for exponents
//! `min_exp .. prec` over a single common denominator. Coefficients below
//! `min_exp` are exactly zero; coefficients at or above `prec` are unknown.
//! Every operation propagates the tightest precision it can justify, so a
//! coefficient that is reported is a coefficient that is known.

mod convolve;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub(crate) use convolve::convolve;

#[derive(Clone, Debug)]
pub struct LaurentSeries {
    min_exp: i64,
    prec: i64,
    /// Numerators for exponents `min_exp .. prec`.
    num: Vec<BigInt>,
    /// Positive, coprime to the gcd of `num`.
    den: BigInt,
}

fn ceil_div(a: i64, m: i64) -> i64 {
    a.div_euclid(m) + i64::from(a.rem_euclid(m) != 0)
}

impl LaurentSeries {
    /// Integer coefficients for exponents `min_exp, min_exp + 1, ...`;
    /// missing entries up to `prec` are zero.
    pub fn from_integers(min_exp: i64, prec: i64, mut coeffs: Vec<BigInt>) -> Self {
        assert!(prec > min_exp, "prec {prec} must exceed min_exp {min_exp}");
        let len = (prec - min_exp) as usize;
        assert!(coeffs.len() <= len, "{} coefficients do not fit below q^{prec}", coeffs.len());
        coeffs.resize(len, BigInt::zero());
        LaurentSeries { min_exp, prec, num: coeffs, den: BigInt::one() }
    }

    pub fn from_i64s(min_exp: i64, prec: i64, coeffs: &[i64]) -> Self {
        Self::from_integers(min_exp, prec, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_rationals(min_exp: i64, prec: i64, coeffs: Vec<BigRational>) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut s = Self::from_integers(min_exp, prec, num);
        s.den = den;
        s.reduce();
        s
    }

    /// Sparse constructor from `(exponent, coefficient)` pairs.
    pub fn from_terms(min_exp: i64, prec: i64, terms: &[(i64, i64)]) -> Self {
        let mut s = Self::zero_from(min_exp, prec);
        for &(e, c) in terms {
            assert!(e >= min_exp, "term q^{e} below min_exp {min_exp}");
            if e < prec {
                s.num[(e - min_exp) as usize] += c;
            }
        }
        s
    }

    pub fn zero(prec: i64) -> Self {
        Self::zero_from(0.min(prec - 1), prec)
    }

    pub fn zero_from(min_exp: i64, prec: i64) -> Self {
        Self::from_integers(min_exp, prec, Vec::new())
    }

    pub fn one(prec: i64) -> Self {
        Self::monomial(0, BigInt::one(), prec)
    }

    /// `c q^exp`, known modulo `q^prec`.
    pub fn monomial(exp: i64, c: BigInt, prec: i64) -> Self {
        if exp >= prec {
            return Self::zero_from(prec - 1, prec);
        }
        let mut coeffs = vec![BigInt::zero(); (prec - exp) as usize];
        coeffs[0] = c;
        Self::from_integers(exp, prec, coeffs)
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Coefficient at `q^n`; `None` when `n >= prec`.
    pub fn coeff(&self, n: i64) -> Option<BigRational> {
        if n >= self.prec {
            return None;
        }
        if n < self.min_exp {
            return Some(BigRational::zero());
        }
        let c = &self.num[(n - self.min_exp) as usize];
        Some(BigRational::new(c.clone(), self.den.clone()))
    }

    /// Coefficient at `q^n` when it is known and an integer.
    pub fn integer_coeff(&self, n: i64) -> Option<BigInt> {
        let c = self.coeff(n)?;
        c.is_integer().then(|| c.to_integer())
    }

    /// Numerators over [`Self::denominator`], for exponents `min_exp .. prec`.
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    /// Exponent of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.num.iter().position(|c| !c.is_zero()).map(|i| self.min_exp + i as i64)
    }

    /// Drops leading zero coefficients so that `min_exp` is the valuation.
    pub fn normalized(mut self) -> Self {
        match self.valuation() {
            Some(v) => {
                self.num.drain(..(v - self.min_exp) as usize);
                self.min_exp = v;
            }
            None => {
                self.num.truncate(1);
                self.min_exp = self.prec - 1;
            }
        }
        self
    }

    /// Forgets every coefficient at or above `q^prec`.
    pub fn truncated(mut self, prec: i64) -> Self {
        if prec >= self.prec {
            return self;
        }
        if prec <= self.min_exp {
            return Self::zero_from(prec - 1, prec);
        }
        self.num.truncate((prec - self.min_exp) as usize);
        self.prec = prec;
        self.reduce();
        self
    }

    /// Re-expresses the series with a lower storage start (padding zeros).
    pub fn with_min_exp(mut self, min_exp: i64) -> Self {
        if min_exp < self.min_exp {
            let pad = (self.min_exp - min_exp) as usize;
            self.num.splice(0..0, std::iter::repeat_n(BigInt::zero(), pad));
            self.min_exp = min_exp;
        }
        self
    }

    /// Multiplication by `q^k`.
    pub fn shift(mut self, k: i64) -> Self {
        self.min_exp += k;
        self.prec += k;
        self
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero_from(self.min_exp, self.prec);
        }
        let mut out = self.clone();
        for n in out.num.iter_mut() {
            *n *= c.numer();
        }
        out.den *= c.denom();
        if out.den.is_negative() {
            out.den = -out.den;
            for n in out.num.iter_mut() {
                *n = -&*n;
            }
        }
        out.reduce();
        out
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    /// Restores `gcd(den, num...) == 1`.
    fn reduce(&mut self) {
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if g.is_one() {
                return;
            }
            g = g.gcd(n);
        }
        if !g.is_one() {
            for n in self.num.iter_mut() {
                *n /= &g;
            }
            self.den /= &g;
        }
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let min_exp = self.min_exp.min(other.min_exp);
        let prec = self.prec.min(other.prec);
        if prec <= min_exp {
            return Self::zero_from(prec - 1, prec);
        }
        let len = (prec - min_exp) as usize;
        let same_den = self.den == other.den;
        let (fa, fb) = if same_den {
            (BigInt::one(), BigInt::one())
        } else {
            (other.den.clone(), self.den.clone())
        };
        let mut num = vec![BigInt::zero(); len];
        for (src, f, sign) in [(self, &fa, false), (other, &fb, negate)] {
            for (i, c) in src.num.iter().enumerate() {
                let e = src.min_exp + i as i64;
                if e >= prec || c.is_zero() {
                    continue;
                }
                let slot = &mut num[(e - min_exp) as usize];
                let term = if f.is_one() { c.clone() } else { c * f };
                if sign {
                    *slot -= term;
                } else {
                    *slot += term;
                }
            }
        }
        let den = if same_den { self.den.clone() } else { &self.den * &other.den };
        let mut out = LaurentSeries { min_exp, prec, num, den };
        out.reduce();
        out
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let min_exp = self.min_exp + other.min_exp;
        let prec = (self.prec + other.min_exp).min(other.prec + self.min_exp);
        let len = (prec - min_exp) as usize;
        let num = convolve(&self.num, &other.num, len);
        let mut out = LaurentSeries { min_exp, prec, num, den: &self.den * &other.den };
        out.reduce();
        out
    }

    /// In-place `self += other`, avoiding a fresh allocation when `other`
    /// lives inside the stored range of `self` over the same denominator.
    pub fn add_assign(&mut self, other: &Self) {
        if self.den != other.den || other.min_exp < self.min_exp || other.prec < self.prec {
            *self = self.add_impl(other, false);
            return;
        }
        let offset = (other.min_exp - self.min_exp) as usize;
        for (i, c) in other.num.iter().enumerate() {
            match self.num.get_mut(offset + i) {
                Some(slot) if !c.is_zero() => *slot += c,
                Some(_) => {}
                None => break,
            }
        }
        self.reduce();
    }

    /// Multiplicative inverse. The coefficient at `min_exp` must be nonzero;
    /// call [`Self::normalized`] first if the stored range has leading zeros.
    pub fn inv(&self) -> Result<Self> {
        let lead = &self.num[0];
        if lead.is_zero() {
            return Err(Error::ZeroLeadingCoefficient { exponent: self.min_exp });
        }
        let len = self.num.len();
        let nonzero: Vec<(usize, &BigInt)> =
            self.num.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();

        // With b_n = B_n / c^(n+1), the recurrence for B is division-free.
        let unit = lead.abs().is_one();
        let mut b: Vec<BigInt> = Vec::with_capacity(len);
        b.push(if unit { lead.clone() } else { BigInt::one() });
        let mut lead_pows = vec![BigInt::one()];
        if !unit {
            for k in 1..len {
                let next = &lead_pows[k - 1] * lead;
                lead_pows.push(next);
            }
        }
        for n in 1..len {
            let mut acc = BigInt::zero();
            for &(k, c) in &nonzero {
                if k > n {
                    break;
                }
                if unit {
                    acc += c * &b[n - k];
                } else {
                    acc += c * &b[n - k] * &lead_pows[k - 1];
                }
            }
            b.push(if unit { -(acc * lead) } else { -acc });
        }

        let mut out = if unit {
            LaurentSeries { min_exp: 0, prec: len as i64, num: b, den: BigInt::one() }
        } else {
            // b_n = B_n c^(len-1-n) / c^len
            let num = b
                .into_iter()
                .enumerate()
                .map(|(n, bn)| bn * &lead_pows[len - 1 - n])
                .collect();
            let mut den = &lead_pows[len - 1] * lead;
            let mut s = LaurentSeries { min_exp: 0, prec: len as i64, num, den: BigInt::one() };
            if den.is_negative() {
                den = -den;
                for v in s.num.iter_mut() {
                    *v = -&*v;
                }
            }
            s.den = den;
            s.reduce();
            s
        };
        // Undo the common denominator: 1/(N/D) = D/N.
        if !self.den.is_one() {
            for v in out.num.iter_mut() {
                *v *= &self.den;
            }
            out.reduce();
        }
        out.min_exp = -self.min_exp;
        out.prec = -self.min_exp + len as i64;
        Ok(out)
    }

    /// `self^k` by repeated squaring; negative `k` inverts first.
    pub fn pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(Self::one(self.prec - self.min_exp));
        }
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut result: Option<Self> = None;
        let mut square = base;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => square.clone(),
                    Some(r) => &r * &square,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            square = &square * &square;
        }
        Ok(result.expect("k != 0"))
    }

    /// Substitution `q -> q^k`.
    pub fn subst_power(&self, k: i64) -> Self {
        assert!(k >= 1, "subst_power needs k >= 1, got {k}");
        if k == 1 {
            return self.clone();
        }
        let len = self.num.len() * k as usize;
        let mut num = vec![BigInt::zero(); len];
        for (i, c) in self.num.iter().enumerate() {
            num[i * k as usize] = c.clone();
        }
        LaurentSeries { min_exp: self.min_exp * k, prec: self.prec * k, num, den: self.den.clone() }
    }

    /// Substitution `q -> -q`.
    pub fn negate_q(&self) -> Self {
        let mut out = self.clone();
        for (i, c) in out.num.iter_mut().enumerate() {
            if (self.min_exp + i as i64).rem_euclid(2) == 1 {
                *c = -&*c;
            }
        }
        out
    }

    /// The `r`-th `m`-dissection component: `sum_{n = r mod m} a_n q^((n-r)/m)`.
    pub fn dissect(&self, m: i64, r: i64) -> Self {
        assert!(m >= 1 && (0..m).contains(&r), "dissect needs 0 <= r < m, got m={m}, r={r}");
        let prec = ceil_div(self.prec - r, m);
        let mut min_exp = ceil_div(self.min_exp - r, m);
        if min_exp >= prec {
            // Nothing known lies in this class; every coefficient below
            // prec is then below the original min_exp and therefore zero.
            min_exp = prec - 1;
        }
        let num = (min_exp..prec)
            .map(|t| {
                let e = t * m + r;
                if e < self.min_exp {
                    BigInt::zero()
                } else {
                    self.num[(e - self.min_exp) as usize].clone()
                }
            })
            .collect();
        let mut out = LaurentSeries { min_exp, prec, num, den: self.den.clone() };
        out.reduce();
        out
    }

    /// The Atkin operator `U_3`: keeps exponents divisible by 3 and divides them by 3.
    pub fn u3(&self) -> Self {
        self.dissect(3, 0)
    }

    /// Multiplication by the binomial `1 + c q^k`, `k >= 1`. Exact.
    pub fn mul_one_plus(&mut self, c: i64, k: i64) {
        assert!(k >= 1);
        let k = k as usize;
        for i in (k..self.num.len()).rev() {
            let (lo, hi) = self.num.split_at_mut(i);
            let t = &lo[i - k] * c;
            hi[0] += t;
        }
        self.reduce();
    }

    /// Division by the binomial `1 + c q^k`, `k >= 1`. Exact.
    pub fn div_one_plus(&mut self, c: i64, k: i64) {
        assert!(k >= 1);
        let k = k as usize;
        for i in k..self.num.len() {
            let (lo, hi) = self.num.split_at_mut(i);
            if lo[i - k].is_zero() {
                continue;
            }
            let t = &lo[i - k] * c;
            hi[0] -= t;
        }
    }

    /// First exponent on the common known range where `self` and `other`
    /// differ, with both coefficients.
    pub fn first_mismatch(&self, other: &Self) -> Option<(i64, BigRational, BigRational)> {
        let prec = self.prec.min(other.prec);
        let start = self.min_exp.min(other.min_exp);
        let zero = BigInt::zero();
        fn at<'a>(s: &'a LaurentSeries, e: i64, zero: &'a BigInt) -> &'a BigInt {
            if e < s.min_exp {
                zero
            } else {
                &s.num[(e - s.min_exp) as usize]
            }
        }
        let same_den = self.den == other.den;
        for e in start..prec {
            let (x, y) = (at(self, e, &zero), at(other, e, &zero));
            let equal = if same_den { x == y } else { x * &other.den == y * &self.den };
            if !equal {
                return Some((e, self.coeff(e).unwrap(), other.coeff(e).unwrap()));
            }
        }
        None
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }

    /// Coefficients as decimal strings (`"p"` or `"p/q"`) for `min_exp .. prec`.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        (self.min_exp..self.prec).map(|e| self.coeff(e).unwrap().to_string()).collect()
    }

    pub fn from_decimal_strings(min_exp: i64, prec: i64, coeffs: &[String]) -> Result<Self> {
        if prec <= min_exp || coeffs.len() as i64 != prec - min_exp {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for exponent range [{min_exp}, {prec})",
                coeffs.len()
            )));
        }
        let parsed = coeffs
            .iter()
            .map(|s| {
                s.parse::<BigRational>()
                    .map_err(|e| Error::InvalidArgument(format!("bad coefficient {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_rationals(min_exp, prec, parsed))
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.add_impl(rhs, false)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.add_impl(rhs, true)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        let mut out = self.clone();
        for c in out.num.iter_mut() {
            *c = -&*c;
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: &LaurentSeries) -> LaurentSeries {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentSeries> for &LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

/// `1 - q + 2*q^3 + O(q^10)`
impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in self.min_exp..self.prec {
            let c = self.coeff(e).unwrap();
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}*q^{e}")?,
            }
        }
        if first {
            write!(f, "O(q^{})", self.prec)
        } else {
            write!(f, " + O(q^{})", self.prec)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(min_exp: i64, prec: i64, c: &[i64]) -> LaurentSeries {
        LaurentSeries::from_i64s(min_exp, prec, c)
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn add_cancels() {
        let sum = &s(0, 10, &[1, 1]) + &s(0, 10, &[1, -1]);
        assert!(sum.agrees_with(&s(0, 10, &[2])));
    }

    #[test]
    fn add_takes_min_precision() {
        let sum = &s(0, 10, &[1]) + &s(-1, 4, &[1]);
        assert_eq!((sum.min_exp(), sum.prec()), (-1, 4));
    }

    #[test]
    fn mul_binomials() {
        let p = &s(0, 10, &[1, 1]) * &s(0, 10, &[1, -1]);
        assert!(p.agrees_with(&s(0, 10, &[1, 0, -1])));
    }

    #[test]
    fn mul_laurent_offsets() {
        let p = &LaurentSeries::monomial(-2, 1.into(), 5) * &LaurentSeries::monomial(3, 1.into(), 20);
        assert_eq!(p.valuation(), Some(1));
        assert_eq!(p.min_exp(), 1);
        // min(5 + 3, 20 - 2)
        assert_eq!(p.prec(), 8);
        assert_eq!(p.coeff(1), Some(rat(1, 1)));
    }

    #[test]
    fn inv_geometric() {
        let g = s(0, 12, &[1, -1]).inv().unwrap();
        for n in 0..12 {
            assert_eq!(g.coeff(n), Some(rat(1, 1)));
        }
        assert_eq!(g.prec(), 12);
    }

    #[test]
    fn inv_with_laurent_shift() {
        // 1 / (q^-1 (1 + q)) = q (1 - q + q^2 - ...)
        let g = s(-1, 10, &[1, 1]).inv().unwrap();
        assert_eq!(g.min_exp(), 1);
        assert_eq!(g.prec(), 12);
        for n in 1..12 {
            let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
            assert_eq!(g.coeff(n), Some(rat(sign, 1)));
        }
    }

    #[test]
    fn inv_non_unit_leading_coefficient() {
        let a = s(0, 15, &[3, 1, -2, 5]);
        let prod = &a * &a.inv().unwrap();
        assert!(prod.agrees_with(&LaurentSeries::one(15)));
        let b = LaurentSeries::from_rationals(0, 8, vec![rat(-2, 3), rat(1, 5)]);
        let prod = &b * &b.inv().unwrap();
        assert!(prod.agrees_with(&LaurentSeries::one(8)));
    }

    #[test]
    fn inv_rejects_zero_leading() {
        let err = s(0, 5, &[0, 1]).inv().unwrap_err();
        assert!(matches!(err, Error::ZeroLeadingCoefficient { exponent: 0 }));
        assert!(s(0, 5, &[0, 1]).normalized().inv().is_ok());
    }

    #[test]
    fn pow_small_cases() {
        let a = s(0, 10, &[1, 1]);
        assert!(a.pow(2).unwrap().agrees_with(&s(0, 10, &[1, 2, 1])));
        assert!(a.pow(0).unwrap().agrees_with(&LaurentSeries::one(10)));
        let lhs = a.pow(-3).unwrap();
        let rhs = a.inv().unwrap().pow(3).unwrap();
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn subst_power_cases() {
        let a = s(0, 5, &[1, 1]).subst_power(2);
        assert!(a.agrees_with(&s(0, 10, &[1, 0, 1])));
        assert_eq!(a.prec(), 10);
        let b = s(-1, 0, &[1]).subst_power(3);
        assert_eq!((b.min_exp(), b.prec(), b.valuation()), (-3, 0, Some(-3)));
    }

    #[test]
    fn negate_q_is_involution() {
        let a = s(-3, 7, &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
        assert!(s(0, 5, &[1, 1]).negate_q().agrees_with(&s(0, 5, &[1, -1])));
        assert!(a.negate_q().negate_q().agrees_with(&a));
        assert_eq!(a.negate_q().coeff(-3), Some(rat(-1, 1)));
    }

    #[test]
    fn dissect_cases() {
        let d = s(0, 4, &[1, 1, 1, 1]).dissect(2, 0);
        assert!(d.agrees_with(&s(0, 2, &[1, 1])));
        assert_eq!(d.prec(), 2);
        let d = s(-2, 5, &[1]).dissect(3, 1);
        assert_eq!(d.valuation(), Some(-1));
        // input known below q^5; class 1 mod 3 known for 3t+1 < 5
        assert_eq!(d.prec(), 2);
    }

    #[test]
    fn u3_precision_rule() {
        let xi_like = s(-2, 11, &[1, 0, 4, 0, 9]);
        let u = xi_like.u3();
        assert_eq!((u.min_exp(), u.prec()), (0, 4));
        assert_eq!(u.coeff(0), Some(rat(4, 1)));
        let geo = s(0, 30, &[1; 30]).u3();
        assert!(geo.agrees_with(&s(0, 10, &[1; 10])));
    }

    #[test]
    fn dissect_empty_class_is_zero() {
        // exponents 0..2 only: nothing in class 2 mod 3
        let d = s(0, 2, &[5, 6]).dissect(3, 2);
        assert_eq!(d.prec(), 0);
        assert_eq!(d.valuation(), None);
    }

    #[test]
    fn binomial_mul_div_roundtrip() {
        let mut a = s(0, 20, &[3, -1, 4, 1, -5, 9]);
        let orig = a.clone();
        a.mul_one_plus(-2, 3);
        a.div_one_plus(-2, 3);
        assert!(a.agrees_with(&orig));
        let mut g = LaurentSeries::one(8);
        g.div_one_plus(-1, 1);
        assert!(g.agrees_with(&s(0, 8, &[1; 8])));
    }

    #[test]
    fn rationals_reduce() {
        let a = LaurentSeries::from_rationals(0, 3, vec![rat(1, 2), rat(1, 4)]);
        let b = a.scale_int(4);
        assert!(b.is_integral());
        assert!(b.agrees_with(&s(0, 3, &[2, 1])));
        assert_eq!(a.denominator(), &BigInt::from(4));
    }

    #[test]
    fn display_format() {
        assert_eq!(s(0, 10, &[1, -1, 0, 2]).to_string(), "1 - q + 2*q^3 + O(q^10)");
        assert_eq!(s(-2, 1, &[1]).to_string(), "q^-2 + O(q^1)");
        assert_eq!(LaurentSeries::zero(4).to_string(), "O(q^4)");
    }

    #[test]
    fn decimal_strings_roundtrip() {
        let a = LaurentSeries::from_rationals(-1, 3, vec![rat(1, 2), rat(-3, 1), rat(0, 1), rat(7, 6)]);
        let strings = a.to_decimal_strings();
        assert_eq!(strings, ["1/2", "-3", "0", "7/6"]);
        let b = LaurentSeries::from_decimal_strings(-1, 3, &strings).unwrap();
        assert!(a.agrees_with(&b));
        assert!(LaurentSeries::from_decimal_strings(0, 2, &["x".into(), "1".into()]).is_err());
    }
}
