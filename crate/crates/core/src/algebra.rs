//! Exact rationals, small integer helpers and truncated q-series.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// "p/q", or "p" when q = 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Serde adapter storing a rational as its "p/q" string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a vector of rationals.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(format_rational).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Sum of the k-th powers of the positive divisors of n.
pub fn sigma(k: u32, n: u64) -> Result<BigInt, Error> {
    if n == 0 {
        return Err(Error::Domain("divisor sum needs n >= 1".into()));
    }
    let mut total = BigInt::zero();
    let mut e = 1u64;
    while e * e <= n {
        if n % e == 0 {
            total += BigInt::from(e).pow(k);
            let f = n / e;
            if f != e {
                total += BigInt::from(f).pow(k);
            }
        }
        e += 1;
    }
    Ok(total)
}

/// sigma_1 as a machine integer; the caller keeps n small enough not to overflow.
pub fn sigma1(n: i64) -> Result<u64, Error> {
    if n <= 0 {
        return Err(Error::Domain(format!("sigma1 needs n >= 1, got {n}")));
    }
    Ok(sigma(1, n as u64)?.to_u64().expect("sigma1 fits in u64"))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Power series in q known modulo q^order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QSeriesJson", into = "QSeriesJson")]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct QSeriesJson {
    #[serde(with = "rational_vec")]
    coefficients: Vec<Rational>,
    order: usize,
}

impl TryFrom<QSeriesJson> for QSeries {
    type Error = Error;
    fn try_from(j: QSeriesJson) -> Result<Self, Error> {
        if j.coefficients.len() != j.order {
            return Err(Error::Parse(format!(
                "series has {} coefficients but order {}",
                j.coefficients.len(),
                j.order
            )));
        }
        Ok(QSeries::new(j.coefficients))
    }
}

impl From<QSeries> for QSeriesJson {
    fn from(s: QSeries) -> Self {
        QSeriesJson { order: s.order(), coefficients: s.coeffs }
    }
}

impl QSeries {
    /// Coefficients of q^0 .. q^(len-1); the series is known modulo q^len.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        QSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = Rational::one();
        }
        s
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        QSeries { coeffs: (0..order).map(f).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> Option<&Rational> {
        self.coeffs.get(k)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries { coeffs: self.coeffs[..order.min(self.order())].to_vec() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QSeries::one(self.order());
        for _ in 0..e {
            acc = series_mul(&acc, self);
        }
        acc
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let a = c.abs();
            let mag = match (k, a.is_one()) {
                (0, _) => a.to_string(),
                (_, true) => String::new(),
                _ => format!("{a}*"),
            };
            let var = match k {
                0 => String::new(),
                1 => "q".into(),
                _ => format!("q^{k}"),
            };
            write!(f, "{}{}{}", if first { sign.to_string() } else { format!(" {sign} ") }, mag, var)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order())
    }
}

/// Truncated product; the result is known to the smaller of the two orders.
pub fn series_mul(a: &QSeries, b: &QSeries) -> QSeries {
    let n = a.order().min(b.order());
    let mut out = vec![Rational::zero(); n];
    for (i, ai) in a.coeffs.iter().take(n).enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().take(n - i).enumerate() {
            out[i + j] += ai * bj;
        }
    }
    QSeries { coeffs: out }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let n = self.order().min(rhs.order());
        QSeries::from_fn(n, |k| &self.coeffs[k] + &rhs.coeffs[k])
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let n = self.order().min(rhs.order());
        QSeries::from_fn(n, |k| &self.coeffs[k] - &rhs.coeffs[k])
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        series_mul(self, rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for s in ["0", "3", "-7/2", "1/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn display_series() {
        let s = QSeries::new(vec![rat(1), rat(-24), ratio(1, 2)]);
        assert_eq!(s.to_string(), "1 - 24*q + 1/2*q^2 + O(q^3)");
    }
}
