//! Eisenstein series, the graded monomial basis of quasimodular forms and an
//! exact membership test for truncated rational q-series.
//!
//! A positive verdict means the series agrees with a quasimodular form on every
//! supplied coefficient. It is evidence limited by the truncation, not a proof.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{big, rat, series_mul, sigma, QSeries, Rational};
use crate::Error;

/// `E_2 = 1 − 24Σσ_1(n)q^n`, `E_4 = 1 + 240Σσ_3(n)q^n`, `E_6 = 1 − 504Σσ_5(n)q^n`,
/// known modulo `q^order`.
pub fn eisenstein(k: u32, order: usize) -> Result<QSeries, Error> {
    if order == 0 {
        return Err(Error::Domain("series order must be at least 1".into()));
    }
    let (c, p) = match k {
        2 => (-24, 1),
        4 => (240, 3),
        6 => (-504, 5),
        _ => return Err(Error::Domain(format!("no Eisenstein series E_{k} here (use 2, 4 or 6)"))),
    };
    let mut coeffs = vec![Rational::one()];
    for n in 1..order {
        coeffs.push(rat(c) * big(sigma(p, n as u64)?));
    }
    Ok(QSeries::new(coeffs))
}

/// Exponents `(i, j, k)` of `E_2^i E_4^j E_6^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub e2: u32,
    pub e4: u32,
    pub e6: u32,
}

impl Monomial {
    pub fn weight(&self) -> u32 {
        2 * self.e2 + 4 * self.e4 + 6 * self.e6
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        for (name, e) in [("E2", self.e2), ("E4", self.e4), ("E6", self.e6)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// All monomials of weight at most `weight_bound`, ordered by weight and then
/// by decreasing power of `E_2`.
#[derive(Clone, Debug)]
pub struct QuasimodularBasis {
    pub weight_bound: u32,
    pub order: usize,
    pub basis: Vec<(Monomial, QSeries)>,
}

impl QuasimodularBasis {
    pub fn new(weight_bound: u32, order: usize) -> Result<Self, Error> {
        let e2 = eisenstein(2, order)?;
        let e4 = eisenstein(4, order)?;
        let e6 = eisenstein(6, order)?;
        let mut monomials = Vec::new();
        for w in (0..=weight_bound).step_by(2) {
            let mut at_w = Vec::new();
            for k in 0..=w / 6 {
                for j in 0..=(w - 6 * k) / 4 {
                    let rest = w - 6 * k - 4 * j;
                    if rest % 2 == 0 {
                        at_w.push(Monomial { e2: rest / 2, e4: j, e6: k });
                    }
                }
            }
            at_w.sort_by(|a, b| b.e2.cmp(&a.e2).then(b.e4.cmp(&a.e4)));
            monomials.extend(at_w);
        }
        let basis = monomials
            .into_iter()
            .map(|m| {
                let s = series_mul(&series_mul(&e2.pow(m.e2), &e4.pow(m.e4)), &e6.pow(m.e6));
                (m, s)
            })
            .collect();
        Ok(QuasimodularBasis { weight_bound, order, basis })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitCoefficient {
    pub monomial: String,
    #[serde(with = "crate::algebra::rational_str")]
    pub coefficient: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QmodVerdict {
    pub member: bool,
    pub weight_bound: u32,
    pub fit_len: usize,
    pub holdout_len: usize,
    /// Present when the fit window has a solution.
    pub coefficients: Option<Vec<FitCoefficient>>,
    /// First coefficient index where the fitted combination disagrees.
    pub witness: Option<usize>,
}

/// Solves for the basis combination matching the first `fit_len` coefficients
/// and checks it on the next `holdout_len`.
pub fn is_quasimodular(s: &QSeries, weight_bound: u32, fit_len: usize, holdout_len: usize) -> Result<QmodVerdict, Error> {
    let need = fit_len + holdout_len;
    if s.order() < need {
        return Err(Error::Domain(format!(
            "series known to order {} but fit plus holdout needs {need}",
            s.order()
        )));
    }
    let basis = QuasimodularBasis::new(weight_bound, need.max(1))?;
    let m = basis.len();
    if fit_len < m {
        return Err(Error::Domain(format!("fit window {fit_len} shorter than the basis size {m}")));
    }
    let rows: Vec<Vec<Rational>> = (0..fit_len)
        .map(|k| {
            let mut r: Vec<Rational> = basis.basis.iter().map(|(_, b)| b.coeffs()[k].clone()).collect();
            r.push(s.coeffs()[k].clone());
            r
        })
        .collect();
    let mut verdict = QmodVerdict {
        member: false,
        weight_bound,
        fit_len,
        holdout_len,
        coefficients: None,
        witness: None,
    };
    let solution = match solve_exact(rows, m)? {
        Ok(x) => x,
        Err(row) => {
            verdict.witness = Some(row);
            return Ok(verdict);
        }
    };
    for k in 0..need {
        let v: Rational = basis.basis.iter().zip(&solution).map(|((_, b), c)| &b.coeffs()[k] * c).sum();
        if v != s.coeffs()[k] {
            verdict.witness = Some(k);
            verdict.coefficients = Some(coefficients(&basis, &solution));
            return Ok(verdict);
        }
    }
    verdict.member = true;
    verdict.coefficients = Some(coefficients(&basis, &solution));
    Ok(verdict)
}

fn coefficients(basis: &QuasimodularBasis, x: &[Rational]) -> Vec<FitCoefficient> {
    basis
        .basis
        .iter()
        .zip(x)
        .map(|((m, _), c)| FitCoefficient { monomial: m.label(), coefficient: c.clone() })
        .collect()
}

/// Smallest even weight bound up to `max_weight` giving a positive verdict.
pub fn minimal_weight(s: &QSeries, max_weight: u32, fit_len: usize, holdout_len: usize) -> Result<Option<u32>, Error> {
    for w in (0..=max_weight).step_by(2) {
        if is_quasimodular(s, w, fit_len, holdout_len)?.member {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Gaussian elimination on an augmented matrix with `m` unknowns. Returns the
/// unique solution, or the index of an inconsistent row. Rank deficiency is an
/// error: the fit window does not separate the basis.
fn solve_exact(mut rows: Vec<Vec<Rational>>, m: usize) -> Result<Result<Vec<Rational>, usize>, Error> {
    let nrows = rows.len();
    let mut origin: Vec<usize> = (0..nrows).collect();
    let mut r = 0;
    for col in 0..m {
        let Some(p) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            return Err(Error::Domain("fit window does not separate the basis".into()));
        };
        rows.swap(r, p);
        origin.swap(r, p);
        let inv = Rational::one() / rows[r][col].clone();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in col..=m {
                    let delta = &f * &rows[r][c];
                    rows[i][c] -= delta;
                }
            }
        }
        r += 1;
    }
    if let Some(i) = (r..nrows).filter(|&i| !rows[i][m].is_zero()).map(|i| origin[i]).min() {
        return Ok(Err(i));
    }
    Ok(Ok((0..m).map(|i| rows[i][m].clone()).collect()))
}
