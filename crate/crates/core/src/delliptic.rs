//! Intersection numbers of the genus-2 d-elliptic locus with the boundary
//! divisors of M̄_2, assembled stratum by stratum from admissible-cover data.
//!
//! Every value keeps the `(d−2)!²` factor coming from labelling the unramified
//! marked points. The normalized q-series divide it out.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{big, factorial, gcd, lcm, rat, sigma1, QSeries, Rational};
use crate::qmod::{is_quasimodular, minimal_weight, QmodVerdict};
use crate::Error;

/// Topological type of an admissible cover meeting a boundary divisor: the
/// source stratum followed by the target stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StratumType {
    #[serde(rename = "(D00,D01)")]
    D00D01,
    #[serde(rename = "(D001,D01)")]
    D001D01,
    #[serde(rename = "(D000,D00)")]
    D000D00,
    #[serde(rename = "(D00,D0)")]
    D00D0,
    #[serde(rename = "(D000,D0)")]
    D000D0,
}

/// Parameters of a stratum. `k` is present only for the three-chain types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumParams {
    pub a: u64,
    pub b: u64,
    pub m: u64,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u64>,
}

impl StratumParams {
    /// Degree of the cover encoded by the parameters.
    pub fn degree(&self, stratum: StratumType) -> u64 {
        match stratum {
            StratumType::D00D01 => self.a * self.m,
            StratumType::D001D01 | StratumType::D00D0 => self.a * self.m + self.b * self.n,
            StratumType::D000D00 | StratumType::D000D0 => {
                (self.a + self.b) * self.k.unwrap_or(0) + self.a * self.m + self.b * self.n
            }
        }
    }
}

/// One parameterized family of components of the intersection.
///
/// For zero-dimensional families `total = count · reduced_degree · multiplicity`
/// and `excess_value` is 1. For one-dimensional families the reduced degree and
/// multiplicity enter through the Segre class, so `excess_value` is the
/// integral over a single component and `total = count · excess_value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumContribution {
    pub stratum_type: StratumType,
    /// Distinguishes the ways of choosing nodes within one topological type.
    pub subcase: String,
    pub parameters: StratumParams,
    #[serde(with = "crate::algebra::rational_str")]
    pub count: Rational,
    #[serde(with = "crate::algebra::rational_str")]
    pub reduced_degree: Rational,
    #[serde(with = "crate::algebra::rational_str")]
    pub multiplicity: Rational,
    #[serde(with = "crate::algebra::rational_str")]
    pub excess_value: Rational,
    #[serde(with = "crate::algebra::rational_str")]
    pub total: Rational,
}

/// Which one-dimensional family a Segre computation is for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegreVariant {
    /// Two node chains of ramification `a` and `b`.
    #[serde(rename = "(D00,D0)")]
    D00D0,
    /// Three node chains, the chosen nodes having ramification `a` and `b`.
    #[serde(rename = "(D000,D0)")]
    D000D0,
    /// Three node chains, the chosen nodes having ramification `a + b` and `a`.
    #[serde(rename = "(D000,D0) sum node")]
    D000D0SumNode,
}

fn marking_factor(d: u64) -> Rational {
    let f = factorial(d - 2);
    big(&f * &f)
}

fn rpow(base: u64, e: i64) -> Rational {
    let p = big(BigInt::from(base).pow(e.unsigned_abs() as u32));
    if e >= 0 {
        p
    } else {
        Rational::one() / p
    }
}

fn r(n: u64) -> Rational {
    big(n)
}

fn check_degree(d: u64) -> Result<(), Error> {
    if d < 2 {
        return Err(Error::Domain(format!("cover degree must be at least 2, got {d}")));
    }
    Ok(())
}

/// Solutions of `a·m + b·n = rest` with `a, b, m, n ≥ 1`, in lexicographic order.
fn two_chain_range(rest: u64) -> Vec<(u64, u64, u64, u64)> {
    let mut out = Vec::new();
    for a in 1..=rest {
        for m in 1..=rest / a {
            let left = rest - a * m;
            let start = out.len();
            let mut b = 1;
            while b * b <= left {
                if left % b == 0 {
                    out.push((a, b, m, left / b));
                    if b * b != left {
                        out.push((a, left / b, m, b));
                    }
                }
                b += 1;
            }
            out[start..].sort_unstable();
        }
    }
    out
}

/// Solutions of `(a+b)k + a·m + b·n = d` with `a, b, k ≥ 1` and `m, n ≥ min_mn`.
fn three_chain_range(d: u64, min_mn: u64) -> Vec<(u64, u64, u64, u64, u64)> {
    let mut out = Vec::new();
    for a in 1..d {
        for b in 1..d - a + 1 {
            let mut k = 1;
            while (a + b) * k + (a + b) * min_mn <= d {
                let after_k = d - (a + b) * k;
                let mut m = min_mn;
                while a * m + b * min_mn <= after_k {
                    let left = after_k - a * m;
                    if left % b == 0 && left / b >= min_mn {
                        out.push((a, b, k, m, left / b));
                    }
                    m += 1;
                }
                k += 1;
            }
        }
    }
    out
}

/// Degree of the target map of the space of covers of P^1 with two simple
/// branch points and two points of profile `(a, b)`.
pub fn target_degree_two_profiles(a: u64, b: u64) -> u64 {
    2 * a.max(b)
}

fn excess_from_local_data(x: u64, y: u64, l: u64, mu: Rational, deg_target: Rational, reduced: Rational) -> Rational {
    // psi^1 coefficient of (1 - (l/x)psi)(1 - (l/y)psi)(mu + mu^2 psi)
    let chern1 = -(ratio_u(l, x) + ratio_u(l, y));
    let c1 = &mu * &mu + &mu * chern1;
    let integral_psi = ratio_u(2, l) * deg_target * reduced;
    c1 * integral_psi
}

fn ratio_u(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Excess contribution of one component of a one-dimensional family, per unit
/// of its chain-automorphism factor (`a^{m−1}b^{n−1}`, times `(a+b)^{k−1}` for
/// the three-chain types).
pub fn segre_excess_contribution(a: u64, b: u64, variant: SegreVariant) -> Result<Rational, Error> {
    if a == 0 || b == 0 {
        return Err(Error::Domain("ramification indices must be positive".into()));
    }
    let g = gcd(a, b);
    Ok(match variant {
        SegreVariant::D00D0 => {
            let l = lcm(a, b);
            let mu = ratio_u(l, a.max(b));
            excess_from_local_data(a, b, l, mu, r(target_degree_two_profiles(a, b)), r(g))
        }
        SegreVariant::D000D0 => {
            let l = lcm(lcm(a, b), a + b);
            let mu = ratio_u(l, a.max(b));
            excess_from_local_data(a, b, l, mu, rat(1), r(g * g))
        }
        SegreVariant::D000D0SumNode => {
            let l = lcm(lcm(a, b), a + b);
            let mu = ratio_u(l, a + b);
            excess_from_local_data(a + b, a, l, mu, rat(1), r(g * g))
        }
    })
}

fn zero_dim(
    stratum_type: StratumType,
    subcase: &str,
    parameters: StratumParams,
    count: Rational,
    reduced_degree: Rational,
    multiplicity: Rational,
) -> StratumContribution {
    let total = &count * &reduced_degree * &multiplicity;
    StratumContribution {
        stratum_type,
        subcase: subcase.into(),
        parameters,
        count,
        reduced_degree,
        multiplicity,
        excess_value: rat(1),
        total,
    }
}

fn one_dim(
    stratum_type: StratumType,
    subcase: &str,
    parameters: StratumParams,
    count: Rational,
    reduced_degree: Rational,
    multiplicity: Rational,
    excess_value: Rational,
) -> StratumContribution {
    let total = &count * &excess_value;
    StratumContribution {
        stratum_type,
        subcase: subcase.into(),
        parameters,
        count,
        reduced_degree,
        multiplicity,
        excess_value,
        total,
    }
}

/// Components of the intersection with the separating boundary divisor.
pub fn delta01_strata(d: u64) -> Result<Vec<StratumContribution>, Error> {
    check_degree(d)?;
    let f = marking_factor(d);
    Ok(two_chain_range(d)
        .into_iter()
        .map(|(a, b, m, n)| {
            let unit = rpow(a, m as i64 - 1) * rpow(b, n as i64 - 1);
            zero_dim(
                StratumType::D001D01,
                "",
                StratumParams { a, b, m, n, k: None },
                rat(2) * r(m) * &f / &unit,
                unit * r(gcd(a, b)),
                ratio_u(lcm(a, b), a),
            )
        })
        .collect())
}

/// `2(d−2)!² Σ_{d1+d2=d} σ1(d1)σ1(d2)`.
pub fn delta01_closed_form(d: u64) -> Result<Rational, Error> {
    check_degree(d)?;
    let mut conv = 0u64;
    for d1 in 1..d {
        conv += sigma1(d1 as i64)? * sigma1((d - d1) as i64)?;
    }
    Ok(rat(2) * marking_factor(d) * r(conv))
}

/// Intersection number with the separating divisor. The stratum sum is checked
/// against the divisor convolution.
pub fn delta01_number(d: u64) -> Result<Rational, Error> {
    let strata: Rational = delta01_strata(d)?.iter().map(|c| &c.total).sum();
    let closed = delta01_closed_form(d)?;
    if strata != closed {
        return Err(Error::Internal(format!(
            "separating divisor at d={d}: stratum sum {strata} but closed form {closed}"
        )));
    }
    Ok(strata)
}

/// Components of the intersection with the irreducible divisor, grouped in the
/// order (D00,D01), (D000,D00), (D00,D0), (D000,D0).
pub fn delta00_strata(d: u64) -> Result<Vec<StratumContribution>, Error> {
    check_degree(d)?;
    let f = marking_factor(d);
    let mut out = Vec::new();

    // A cycle of m curves of degree a, bridged by a degree 2 component.
    for a in 1..=d {
        if d % a != 0 {
            continue;
        }
        let m = d / a;
        let params = StratumParams { a, b: 0, m, n: 0, k: None };
        let reduced = rpow(a, m as i64 - 1);
        let across = rat(4) * &f * r(m * (m - 1)) / rpow(a, m as i64 - 2);
        let same = rat(4) * &f * r((a - 1) * m) / rpow(a, m as i64 - 1);
        for (subcase, count) in [("bridge across two curves", across), ("bridge on one curve", same)] {
            if !count.is_zero() {
                out.push(zero_dim(StratumType::D00D01, subcase, params, count, reduced.clone(), rat(1)));
            }
        }
    }

    // Two curves joined by three chains; zero-dimensional.
    for (a, b, k, m, n) in three_chain_range(d, 0) {
        let g = gcd(a, b);
        let params = StratumParams { a, b, m, n, k: Some(k) };
        let (ki, mi, ni) = (k as i64, m as i64, n as i64);
        let aut = rpow(a + b, 2 * ki - 2) * rpow(a, 2 * mi) * rpow(b, 2 * ni);
        let reduced = rpow(g, 4) * rpow(a + b, 2 * ki - 3) * rpow(a, 2 * mi - 1) * rpow(b, 2 * ni - 1);
        let l = lcm(lcm(a, b), a + b);
        let subcases = [
            ("nodes a over y+, b over y-", 4 * m * (n + 1), ratio_u(l, a) * ratio_u(l, b)),
            ("nodes a over y-, b over y+", 4 * (m + 1) * n, ratio_u(l, a) * ratio_u(l, b)),
            ("nodes a+b and a", 8 * (k * (m + 1) + (k - 1) * m), ratio_u(l, a + b) * ratio_u(l, a)),
        ];
        for (subcase, choices, mult) in subcases {
            if choices > 0 {
                let count = r(choices) * &f / &aut;
                out.push(zero_dim(StratumType::D000D00, subcase, params, count, reduced.clone(), mult));
            }
        }
    }

    // Two chains over a moving four-pointed target.
    let per_unit = |a, b| segre_excess_contribution(a, b, SegreVariant::D00D0);
    for (a, b, m, n) in two_chain_range(d) {
        let unit = rpow(a, m as i64 - 1) * rpow(b, n as i64 - 1);
        out.push(one_dim(
            StratumType::D00D0,
            "",
            StratumParams { a, b, m, n, k: None },
            rat(2) * r(m * n) * &f / &unit,
            &unit * r(gcd(a, b)),
            ratio_u(lcm(a, b), a.max(b)),
            per_unit(a, b)? * &unit,
        ));
    }

    // Three chains over a moving four-pointed target.
    for (a, b, k, m, n) in three_chain_range(d, 1) {
        let g = gcd(a, b);
        let l = lcm(lcm(a, b), a + b);
        let params = StratumParams { a, b, m, n, k: Some(k) };
        let unit = rpow(a, m as i64 - 1) * rpow(b, n as i64 - 1) * rpow(a + b, k as i64 - 1);
        let reduced = r(g * g) * &unit;
        out.push(one_dim(
            StratumType::D000D0,
            "nodes a and b",
            params,
            rat(4) * r(m * n) * &f / &unit,
            reduced.clone(),
            ratio_u(l, a.max(b)),
            segre_excess_contribution(a, b, SegreVariant::D000D0)? * &unit,
        ));
        out.push(one_dim(
            StratumType::D000D0,
            "nodes a+b and a",
            params,
            rat(8) * r(k * m) * &f / &unit,
            reduced,
            ratio_u(l, a + b),
            segre_excess_contribution(a, b, SegreVariant::D000D0SumNode)? * &unit,
        ));
    }
    Ok(out)
}

const DELTA00_ORDER: [StratumType; 4] =
    [StratumType::D00D01, StratumType::D000D00, StratumType::D00D0, StratumType::D000D0];

/// The four aggregate contributions to the intersection with the irreducible
/// divisor, in the order of [`delta00_strata`].
pub fn delta00_stratum_contributions(d: u64) -> Result<[Rational; 4], Error> {
    let strata = delta00_strata(d)?;
    let mut out: [Rational; 4] = Default::default();
    for c in &strata {
        let i = DELTA00_ORDER.iter().position(|t| *t == c.stratum_type).expect("irreducible divisor stratum");
        out[i] += &c.total;
    }
    Ok(out)
}

/// `4(d−2)!²(d−1)σ1(d)`.
pub fn delta00_closed_form(d: u64) -> Result<Rational, Error> {
    check_degree(d)?;
    Ok(rat(4) * marking_factor(d) * r(d - 1) * r(sigma1(d as i64)?))
}

/// Intersection number with the irreducible divisor, summed over strata and
/// checked against the closed form.
pub fn delta00_number(d: u64) -> Result<Rational, Error> {
    let total: Rational = delta00_stratum_contributions(d)?.iter().sum();
    let closed = delta00_closed_form(d)?;
    if total != closed {
        return Err(Error::Internal(format!(
            "irreducible divisor at d={d}: stratum sum {total} but closed form {closed}"
        )));
    }
    Ok(total)
}

/// `Σ_{am+bn=d} (mn − am)·min(a,b)` over positive integers.
pub fn david_identity(d: u64) -> Rational {
    signed_min_sum(d, |_, _, m, n| (m * n) as i64, |a, _, m, _| (a * m) as i64)
}

/// `Σ_{am+bn=d} (mn − bn)·min(a,b)` over positive integers.
pub fn david_identity_mirrored(d: u64) -> Rational {
    signed_min_sum(d, |_, _, m, n| (m * n) as i64, |_, b, _, n| (b * n) as i64)
}

fn signed_min_sum(
    d: u64,
    plus: impl Fn(u64, u64, u64, u64) -> i64,
    minus: impl Fn(u64, u64, u64, u64) -> i64,
) -> Rational {
    let mut total = 0i128;
    for (a, b, m, n) in two_chain_range(d) {
        total += (plus(a, b, m, n) - minus(a, b, m, n)) as i128 * a.min(b) as i128;
    }
    big(total)
}

/// Both normalized generating series and their quasimodularity verdicts.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasimodularityReport {
    pub d_max: u64,
    pub weight_bound: u32,
    pub delta01_series: QSeries,
    pub delta00_series: QSeries,
    pub delta01: QmodVerdict,
    pub delta00: QmodVerdict,
    pub delta01_minimal_weight: Option<u32>,
    pub delta00_minimal_weight: Option<u32>,
}

/// `Σ_{d=2}^{d_max} value(d)/(d−2)!² q^d`, known modulo `q^{d_max+1}`.
pub fn normalized_series(d_max: u64, value: impl Fn(u64) -> Result<Rational, Error>) -> Result<QSeries, Error> {
    let mut coeffs = vec![Rational::zero(); d_max as usize + 1];
    for d in 2..=d_max {
        coeffs[d as usize] = value(d)? / marking_factor(d);
    }
    Ok(QSeries::new(coeffs))
}

/// Fit on 20 coefficients (fewer when `d_max` is small) and hold out the rest.
pub fn quasimodularity_report(d_max: u64) -> Result<QuasimodularityReport, Error> {
    let order = d_max as usize + 1;
    let fit = 20.min(order / 2);
    quasimodularity_report_with(d_max, 4, fit, order - fit)
}

pub fn quasimodularity_report_with(
    d_max: u64,
    weight_bound: u32,
    fit_len: usize,
    holdout_len: usize,
) -> Result<QuasimodularityReport, Error> {
    if d_max < 10 {
        return Err(Error::Domain(format!("quasimodularity report needs d_max >= 10, got {d_max}")));
    }
    let s01 = normalized_series(d_max, delta01_number)?;
    let s00 = normalized_series(d_max, delta00_number)?;
    Ok(QuasimodularityReport {
        d_max,
        weight_bound,
        delta01: is_quasimodular(&s01, weight_bound, fit_len, holdout_len)?,
        delta00: is_quasimodular(&s00, weight_bound, fit_len, holdout_len)?,
        delta01_minimal_weight: minimal_weight(&s01, weight_bound, fit_len, holdout_len)?,
        delta00_minimal_weight: minimal_weight(&s00, weight_bound, fit_len, holdout_len)?,
        delta01_series: s01,
        delta00_series: s00,
    })
}
