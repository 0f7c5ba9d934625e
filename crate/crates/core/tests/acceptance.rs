//! One PASS/FAIL line per acceptance criterion. Every comparison is exact;
//! the only tolerances are the wall-clock budgets below.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use htaut::algebra::{factorial, rat, Rational};
use htaut::delliptic::{
    david_identity, delta00_number, delta00_strata, delta01_number, delta01_strata, normalized_series,
};
use htaut::gcover::{
    boundary_intersection_h, degeneration_count, four_point_cover_count, unique_cover_count, AdmissibleGGraph,
};
use htaut::graphs::{stable_graphs, StableGraph};
use htaut::mbar::{boundary_intersection, integrate_psi, integrate_stratum_class, psi_monomials, StratumClass};
use htaut::qmod::is_quasimodular;
use htaut::Error;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{mutate, random_ggraph, small_groups, Mutation};

const DIVISOR_BUDGET: Duration = Duration::from_secs(1);
const HURWITZ_BUDGET: Duration = Duration::from_secs(30);
const IDENTITY_BUDGET: Duration = Duration::from_secs(1);

const QMOD_D_MAX: u64 = 40;
const QMOD_WEIGHT: u32 = 4;
const QMOD_FIT: usize = 20;
const QMOD_HOLDOUT: usize = 18;
const QMOD_SHIFT: usize = 5;

const MUTATIONS: usize = 200;
const VALID: usize = 200;
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;

fn sigma1(n: u64) -> u64 {
    (1..=n).filter(|k| n % k == 0).sum()
}

fn sq_factorial(n: u64) -> Rational {
    let f = Rational::from_integer(factorial(n));
    &f * &f
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f()?;
    let took = start.elapsed();
    if took > budget {
        return Err(format!("{out}; took {took:?}, budget {budget:?}"));
    }
    Ok(format!("{out}; {took:?}"))
}

fn err(e: Error) -> String {
    e.to_string()
}

fn irreducible_divisor() -> Outcome {
    timed(DIVISOR_BUDGET, || {
        for d in 2..=12u64 {
            let strata: Rational = delta00_strata(d).map_err(err)?.iter().map(|c| &c.total).sum();
            let expected = rat(4) * sq_factorial(d - 2) * rat((d - 1) as i64) * rat(sigma1(d) as i64);
            if strata != expected || delta00_number(d).map_err(err)? != expected {
                return Err(format!("d={d}: stratum sum {strata}, expected {expected}"));
            }
        }
        for (d, v) in [(2, 12), (3, 32)] {
            if delta00_number(d).map_err(err)? != rat(v) {
                return Err(format!("spot value at d={d}"));
            }
        }
        Ok("2 <= d <= 12 exact".into())
    })
}

fn separating_divisor() -> Outcome {
    timed(DIVISOR_BUDGET, || {
        for d in 2..=12u64 {
            let strata: Rational = delta01_strata(d).map_err(err)?.iter().map(|c| &c.total).sum();
            let conv: u64 = (1..d).map(|k| sigma1(k) * sigma1(d - k)).sum();
            let expected = rat(2) * sq_factorial(d - 2) * rat(conv as i64);
            if strata != expected || delta01_number(d).map_err(err)? != expected {
                return Err(format!("d={d}: stratum sum {strata}, expected {expected}"));
            }
        }
        for (d, v) in [(2, 2), (3, 12)] {
            if delta01_number(d).map_err(err)? != rat(v) {
                return Err(format!("spot value at d={d}"));
            }
        }
        Ok("2 <= d <= 12 exact".into())
    })
}

fn unique_covers() -> Outcome {
    timed(HURWITZ_BUDGET, || {
        let mut n = 0;
        for s in 2..=7u32 {
            for a in 1..s {
                let c = unique_cover_count(a, s - a).map_err(err)?;
                if c != rat(1) {
                    return Err(format!("(a,b)=({a},{}): {c}", s - a));
                }
                n += 1;
            }
        }
        Ok(format!("{n} pairs"))
    })
}

fn degeneration() -> Outcome {
    let mut n = 0;
    for s in 2..=6u32 {
        for a in 1..s {
            let b = s - a;
            let expected = rat(2 * a.max(b) as i64);
            let deg = degeneration_count(a, b).map_err(err)?;
            let direct = four_point_cover_count(a, b).map_err(err)?;
            if deg != expected || direct != expected {
                return Err(format!("(a,b)=({a},{b}): degeneration {deg}, enumeration {direct}, expected {expected}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} pairs, degeneration and enumeration agree"))
}

fn identity_sum() -> Outcome {
    timed(IDENTITY_BUDGET, || match (1..=500).find(|&d| !david_identity(d).is_zero()) {
        Some(d) => Err(format!("nonzero at d={d}")),
        None => Ok("1 <= d <= 500".into()),
    })
}

fn genus_zero_correlators() -> Outcome {
    let mut n_checked = 0;
    for n in 3..=8usize {
        for a in psi_monomials(n, (n - 3) as u32) {
            let mut expected = Rational::from_integer(factorial(n as u64 - 3));
            for &x in &a {
                expected /= Rational::from_integer(factorial(x as u64));
            }
            let got = integrate_psi(0, &a).map_err(err)?;
            if got != expected {
                return Err(format!("{a:?}: {got}, expected {expected}"));
            }
            n_checked += 1;
        }
    }
    Ok(format!("{n_checked} exponent vectors"))
}

/// Stable graphs of genus at most two with at most two legs and two edges,
/// grouped by `(g, n)`.
fn corpus() -> Result<Vec<(u32, usize, Vec<StableGraph>)>, Error> {
    let mut out = Vec::new();
    for g in 0..=2u32 {
        for n in 0..=2usize {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let mut graphs = Vec::new();
            for e in 0..=2 {
                graphs.extend(stable_graphs(g, n, e)?);
            }
            out.push((g, n, graphs));
        }
    }
    Ok(out)
}

fn top_pairing(class: &StratumClass, g: u32, n: usize, degree: u32) -> Result<Rational, Error> {
    let mut psi = vec![0; n];
    let mut kappa = BTreeMap::new();
    if n == 0 {
        kappa.insert(1, degree);
    } else {
        psi[0] = degree;
    }
    let monomial = StratumClass::monomial(g, &psi, &kappa)?;
    integrate_stratum_class(&class.times_pullback(&monomial)?)
}

fn pushforward_symmetry() -> Outcome {
    let mut pairs = 0;
    for (g, n, graphs) in corpus().map_err(err)? {
        let dim = 3 * g as usize - 3 + n;
        for a in &graphs {
            for b in &graphs {
                let codim = a.num_edges() + b.num_edges();
                if codim > dim {
                    continue;
                }
                let deg = (dim - codim) as u32;
                let ab = boundary_intersection(a, b).map_err(err)?.class();
                let ba = boundary_intersection(b, a).map_err(err)?.class();
                let x = top_pairing(&ab, g, n, deg).map_err(err)?;
                let y = top_pairing(&ba, g, n, deg).map_err(err)?;
                if x != y {
                    return Err(format!("g={g} n={n}: {a:?} / {b:?} gives {x} and {y}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn trivial_group_reduction() -> Outcome {
    let mut pairs = 0;
    for (g, n, graphs) in corpus().map_err(err)? {
        for a in &graphs {
            for b in &graphs {
                let plain = boundary_intersection(a, b).map_err(err)?;
                let ga = AdmissibleGGraph::with_trivial_group(a.clone());
                let gb = AdmissibleGGraph::with_trivial_group(b.clone());
                let equivariant = boundary_intersection_h(&ga, &gb).map_err(err)?;
                if equivariant.terms.len() != plain.terms.len() || equivariant.class(g, n) != plain.class() {
                    return Err(format!("g={g} n={n}: {a:?} / {b:?}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn quasimodularity() -> Outcome {
    let s01 = normalized_series(QMOD_D_MAX, delta01_number).map_err(err)?;
    let s00 = normalized_series(QMOD_D_MAX, delta00_number).map_err(err)?;
    let splits = [
        (QMOD_FIT, QMOD_HOLDOUT),
        (QMOD_FIT - QMOD_SHIFT, QMOD_HOLDOUT + QMOD_SHIFT),
        (QMOD_FIT + QMOD_SHIFT, QMOD_HOLDOUT - QMOD_SHIFT),
    ];
    for (name, s) in [("separating", &s01), ("irreducible", &s00)] {
        for &(fit, holdout) in &splits {
            let v = is_quasimodular(s, QMOD_WEIGHT, fit, holdout).map_err(err)?;
            if !v.member {
                return Err(format!("{name} series rejected at fit {fit}, holdout {holdout}: {:?}", v.witness));
            }
        }
    }
    Ok(format!("both series, weight <= {QMOD_WEIGHT}, splits {splits:?}"))
}

fn validator() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    let groups = small_groups();
    let mut accepted = 0;
    for i in 0..VALID {
        let (name, g) = &groups[i % groups.len()];
        let gg = random_ggraph(&mut rng, g, 3);
        let id = gg.id().map_err(err)?;
        match gg.validate(&id) {
            Ok(()) => accepted += 1,
            Err(e) => return Err(format!("valid {name} graph rejected: {e}")),
        }
    }
    let mut rejected = BTreeMap::new();
    for i in 0..MUTATIONS {
        let m = Mutation::ALL[i % Mutation::ALL.len()];
        let mut attempt = 0;
        let (name, bad, id) = loop {
            let (name, g) = &groups[attempt % groups.len()];
            attempt += 1;
            let gg = random_ggraph(&mut rng, g, 3);
            if let Some((bad, id)) = mutate(&gg, m, &mut rng) {
                break (name, bad, id);
            }
        };
        match bad.validate(&id) {
            Err(Error::Violation { label, .. }) if label == m.label() => *rejected.entry(m.label()).or_insert(0) += 1,
            other => return Err(format!("{m:?} on a {name} graph: {other:?}")),
        }
    }
    Ok(format!("{accepted} valid accepted, mutations rejected {rejected:?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("irreducible divisor stratum sum", irreducible_divisor),
        ("separating divisor stratum sum", separating_divisor),
        ("unique (a,b) cover count", unique_covers),
        ("degeneration count 2max(a,b)", degeneration),
        ("min(a,b) weighted identity", identity_sum),
        ("genus zero correlators", genus_zero_correlators),
        ("pushforward pairing symmetry", pushforward_symmetry),
        ("trivial group reduction", trivial_group_reduction),
        ("quasimodularity of both series", quasimodularity),
        ("validator mutations", validator),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
