//! Pullbacks of ψ and κ classes along restriction, corestriction and
//! forgetful maps between spaces of admissible G-covers, as symbolic linear
//! combinations.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::element_from_json;
use crate::algebra::{format_rational, rat, Rational};
use crate::groups::{FiniteGroup, GroupJson};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Symbol {
    /// `ψ^exponent` at marked orbit `point` (one based). `lifted` marks the
    /// point of the source space lying over `point`.
    Psi { point: usize, exponent: u32, lifted: bool },
    Kappa { index: u32 },
    /// The divisor where the new point and `coset · p_point` bubble off
    /// together on a rational tail.
    RationalTail { point: usize, coset: Vec<u32> },
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Psi { point, exponent, lifted } => {
                write!(f, "psi{}[{point}]", if *lifted { "~" } else { "" })?;
                if *exponent != 1 {
                    write!(f, "^{exponent}")?;
                }
                Ok(())
            }
            Symbol::Kappa { index } => write!(f, "kappa[{index}]"),
            Symbol::RationalTail { point, coset } => write!(f, "tail[{point}; {coset:?}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackTerm {
    #[serde(with = "crate::algebra::rational_str")]
    pub coefficient: Rational,
    pub symbol: Symbol,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackFormula {
    pub terms: Vec<PullbackTerm>,
}

impl fmt::Display for PullbackFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coefficient < rat(0);
            let abs = if neg { -t.coefficient.clone() } else { t.coefficient.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if abs != rat(1) {
                write!(f, "{}*", format_rational(&abs))?;
            }
            write!(f, "{}", t.symbol)?;
        }
        Ok(())
    }
}

fn single(coefficient: Rational, symbol: Symbol) -> PullbackFormula {
    PullbackFormula { terms: vec![PullbackTerm { coefficient, symbol }] }
}

/// Which class is pulled back.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassRequest {
    /// ψ at the given marked orbit, one based.
    Psi(usize),
    Kappa(u32),
}

/// A pullback question. Groups and elements are in JSON form so requests
/// can be read from files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "kebab-case")]
pub enum PullbackRequest {
    Restriction {
        class: ClassRequest,
    },
    /// `normal` lists generators of N. `monodromy` is the element `h` at the
    /// point, needed for ψ.
    Corestriction {
        group: GroupJson,
        normal: Vec<Vec<u32>>,
        #[serde(default)]
        monodromy: Option<Vec<u32>>,
        class: ClassRequest,
    },
    /// Forgetting an added free orbit from `H_{g,G,ξ+{1}}` where `ξ` has `b`
    /// entries. `monodromy` is the element at the point, needed for ψ.
    Forgetful {
        group: GroupJson,
        b: usize,
        #[serde(default)]
        monodromy: Option<Vec<u32>>,
        class: ClassRequest,
    },
}

fn check_point(p: usize) -> Result<(), Error> {
    if p == 0 {
        return Err(Error::Domain("marked orbits are numbered from 1".into()));
    }
    Ok(())
}

pub fn pullback_psi_kappa_hurwitz(req: &PullbackRequest) -> Result<PullbackFormula, Error> {
    match req {
        PullbackRequest::Restriction { class } => match *class {
            ClassRequest::Psi(p) => {
                check_point(p)?;
                Ok(single(rat(1), Symbol::Psi { point: p, exponent: 1, lifted: false }))
            }
            ClassRequest::Kappa(i) => Ok(single(rat(1), Symbol::Kappa { index: i })),
        },
        PullbackRequest::Corestriction { group, normal, monodromy, class } => {
            let g = FiniteGroup::from_json(group)?;
            let gens = normal.iter().map(|p| element_from_json(&g, p)).collect::<Result<Vec<_>, _>>()?;
            let n = g.generate(&gens);
            let q = g.quotient(&n)?;
            match *class {
                ClassRequest::Psi(p) => {
                    check_point(p)?;
                    let Some(h) = monodromy else {
                        return Err(Error::Domain("ψ pullback along corestriction needs the monodromy element".into()));
                    };
                    let h = element_from_json(&g, h)?;
                    let c = Rational::new(q.group.order_of(q.project(h)).into(), g.order_of(h).into());
                    Ok(single(c, Symbol::Psi { point: p, exponent: 1, lifted: true }))
                }
                ClassRequest::Kappa(i) => {
                    Ok(single(Rational::new(1.into(), n.order().into()), Symbol::Kappa { index: i }))
                }
            }
        }
        PullbackRequest::Forgetful { group, b, monodromy, class } => {
            let g = FiniteGroup::from_json(group)?;
            match *class {
                ClassRequest::Kappa(i) => Ok(PullbackFormula {
                    terms: vec![
                        PullbackTerm { coefficient: rat(1), symbol: Symbol::Kappa { index: i } },
                        PullbackTerm {
                            coefficient: -rat(g.order() as i64),
                            symbol: Symbol::Psi { point: b + 1, exponent: i, lifted: false },
                        },
                    ],
                }),
                ClassRequest::Psi(p) => {
                    check_point(p)?;
                    if p > *b {
                        return Err(Error::Domain(format!("point {p} is not among the {b} kept orbits")));
                    }
                    let Some(h) = monodromy else {
                        return Err(Error::Domain("ψ pullback along a forgetful map needs the monodromy element".into()));
                    };
                    let h = element_from_json(&g, h)?;
                    let mut terms =
                        vec![PullbackTerm { coefficient: rat(1), symbol: Symbol::Psi { point: p, exponent: 1, lifted: false } }];
                    for t in g.left_cosets(&g.cyclic_subgroup(h))? {
                        terms.push(PullbackTerm {
                            coefficient: rat(-1),
                            symbol: Symbol::RationalTail { point: p, coset: super::element_to_json(&g, t) },
                        });
                    }
                    Ok(PullbackFormula { terms })
                }
            }
        }
    }
}
