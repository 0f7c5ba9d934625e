mod common;

use std::collections::HashMap;

use htaut::algebra::{factorial, rat, QSeries, Rational};
use htaut::gcover::{
    corestrict_graph, corestriction_boundary_multiplicity, hurwitz_cover_count, restrict_graph,
    restriction_boundary_exponents, BranchFiber,
};
use htaut::graphs::{stable_graphs, GraphIso, GraphMorphism};
use htaut::groups::FiniteGroup;
use htaut::mbar::integrate_psi;
use htaut::qmod::is_quasimodular;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{random_ggraph, small_groups};

/// `(2k − 1)!!`, with `(−1)!! = 1`.
fn double_factorial_odd(k: i64) -> Rational {
    let mut out = Rational::one();
    let mut x = 2 * k - 1;
    while x > 1 {
        out *= rat(x);
        x -= 2;
    }
    out
}

/// Correlators from the Dijkgraaf–Verlinde–Verlinde recursion, independent
/// of the string/dilaton route used by the library.
struct Dvv(HashMap<(u32, Vec<u32>), Rational>);

impl Dvv {
    fn get(&mut self, g: u32, mut a: Vec<u32>) -> Rational {
        a.sort_unstable_by(|x, y| y.cmp(x));
        let n = a.len() as i64;
        let sum: i64 = a.iter().map(|&x| x as i64).sum();
        if n == 0 || sum != 3 * g as i64 - 3 + n {
            return Rational::zero();
        }
        if g == 0 && a == [0, 0, 0] {
            return Rational::one();
        }
        if g == 1 && a == [1] {
            return Rational::new(1.into(), 24.into());
        }
        if let Some(v) = self.0.get(&(g, a.clone())) {
            return v.clone();
        }
        let v = self.compute(g, &a);
        self.0.insert((g, a), v.clone());
        v
    }

    fn compute(&mut self, g: u32, a: &[u32]) -> Rational {
        if a[0] == 0 {
            return Rational::zero();
        }
        let k = a[0] as i64 - 1;
        let s = &a[1..];
        let mut acc = Rational::zero();
        for j in 0..s.len() {
            let dj = s[j] as i64;
            let mut rest: Vec<u32> = s.to_vec();
            rest[j] = (dj + k) as u32;
            acc += double_factorial_odd(k + dj + 1) / double_factorial_odd(dj) * self.get(g, rest);
        }
        for r in 0..k {
            let sr = k - 1 - r;
            let c = double_factorial_odd(r + 1) * double_factorial_odd(sr + 1) / rat(2);
            if g >= 1 {
                let mut v = vec![r as u32, sr as u32];
                v.extend_from_slice(s);
                acc += &c * self.get(g - 1, v);
            }
            for mask in 0..1usize << s.len() {
                let (mut left, mut right) = (vec![r as u32], vec![sr as u32]);
                for (i, &x) in s.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        left.push(x);
                    } else {
                        right.push(x);
                    }
                }
                for g1 in 0..=g {
                    let l = self.get(g1, left.clone());
                    if !l.is_zero() {
                        acc += &c * l * self.get(g - g1, right.clone());
                    }
                }
            }
        }
        acc / double_factorial_odd(k + 2)
    }
}

fn exponents(g: u32, n: usize) -> impl Strategy<Value = Vec<u32>> {
    let top = 3 * g + n as u32 - 3;
    proptest::collection::vec(0..=top, n - 1).prop_map(move |mut v| {
        // a random composition of `top` into `n` parts
        v.sort_unstable();
        let mut out = Vec::new();
        let mut prev = 0;
        for x in v {
            out.push(x - prev);
            prev = x;
        }
        out.push(top - prev);
        out
    })
}

fn stable_gn() -> impl Strategy<Value = (u32, usize)> {
    (0u32..=2, 1usize..=5).prop_filter("stable", |&(g, n)| 2 * g as i64 - 2 + n as i64 > 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn correlators_match_dvv((a, g) in stable_gn().prop_flat_map(|(g, n)| (exponents(g, n), Just(g)))) {
        let mut dvv = Dvv(HashMap::new());
        prop_assert_eq!(integrate_psi(g, &a).unwrap(), dvv.get(g, a.clone()));
    }

    #[test]
    fn string_equation((a, g) in stable_gn().prop_flat_map(|(g, n)| (exponents(g, n), Just(g)))) {
        // raise one exponent so that adding a τ_0 insertion stays in top degree
        let mut lifted = a.clone();
        lifted[0] += 1;
        let mut lhs_args = lifted.clone();
        lhs_args.push(0);
        let mut rhs = Rational::zero();
        for i in 0..lifted.len() {
            if lifted[i] > 0 {
                let mut b = lifted.clone();
                b[i] -= 1;
                rhs += integrate_psi(g, &b).unwrap();
            }
        }
        prop_assert_eq!(integrate_psi(g, &lhs_args).unwrap(), rhs);
    }

    #[test]
    fn dilaton_equation((a, g) in stable_gn().prop_flat_map(|(g, n)| (exponents(g, n), Just(g)))) {
        let mut with1 = a.clone();
        with1.push(1);
        let factor = rat(2 * g as i64 - 2 + a.len() as i64);
        prop_assert_eq!(integrate_psi(g, &with1).unwrap(), factor * integrate_psi(g, &a).unwrap());
    }

    #[test]
    fn group_axioms_and_lagrange(gi in 0usize..6, x in 0usize..24, y in 0usize..24, z in 0usize..24, k in 0usize..24) {
        let (_, g) = &small_groups()[gi];
        let o = g.order();
        let (x, y, z) = (x % o, y % o, z % o);
        prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        prop_assert_eq!(g.mul(x, g.inv(x)), g.identity());
        prop_assert_eq!(o % g.order_of(x), 0);
        let h = g.generate(&[k % o]);
        let (reps, which) = g.coset_table(&h);
        prop_assert_eq!(reps.len() * h.order(), o);
        prop_assert_eq!(which[g.mul(x, h.elements()[y % h.order()])], which[x]);
        let orbits = g.orbit_on_cosets(&g.generate(&[y]), &h).unwrap();
        prop_assert_eq!(orbits.iter().map(|c| c.cosets.len()).sum::<usize>(), reps.len());
    }

    #[test]
    fn graph_automorphisms_form_a_group(g in 0u32..=2, n in 0usize..=2, e in 0usize..=2, pick in 0usize..64) {
        prop_assume!(2 * g as i64 - 2 + n as i64 > 0);
        let graphs = stable_graphs(g, n, e).unwrap();
        prop_assume!(!graphs.is_empty());
        let gamma = &graphs[pick % graphs.len()];
        let auts = gamma.automorphisms();
        prop_assert!(auts.contains(&GraphIso::identity(gamma)));
        for a in &auts {
            prop_assert!(auts.contains(&a.inverse()));
            prop_assert_eq!(&gamma.relabel(a), gamma);
            for b in &auts {
                prop_assert!(auts.contains(&a.compose(b)));
            }
        }
        for other in &graphs {
            prop_assert_eq!(other.is_isomorphic(gamma), other == gamma);
        }
    }

    #[test]
    fn qmod_split_stability(c in proptest::collection::vec(-20i64..=20, 4), fit in 10usize..=25) {
        let order = 40;
        let sigma = |k: u32, m: usize| -> i64 { (1..=m as i64).filter(|d| m as i64 % d == 0).map(|d| d.pow(k)).sum() };
        let e2 = QSeries::from_fn(order, |m| if m == 0 { rat(1) } else { rat(-24 * sigma(1, m)) });
        let e4 = QSeries::from_fn(order, |m| if m == 0 { rat(1) } else { rat(240 * sigma(3, m)) });
        let e2sq = htaut::algebra::series_mul(&e2, &e2);
        let s = QSeries::from_fn(order, |m| {
            rat(c[0]) * rat(i64::from(m == 0)) + rat(c[1]) * &e2.coeffs()[m] + rat(c[2]) * &e2sq.coeffs()[m] + rat(c[3]) * &e4.coeffs()[m]
        });
        let holdout = order - fit;
        prop_assert!(is_quasimodular(&s, 4, fit, holdout).unwrap().member);
        let mut bumped = s.coeffs().to_vec();
        bumped[fit + holdout / 2] += rat(1);
        let v = is_quasimodular(&QSeries::new(bumped), 4, fit, holdout).unwrap();
        prop_assert!(!v.member);
        prop_assert_eq!(v.witness, Some(fit + holdout / 2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn restriction_and_corestriction_stay_admissible(seed in any::<u64>(), gi in 0usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (_, g) = &small_groups()[gi];
        let gg = random_ggraph(&mut rng, g, 2);
        let g1 = g.generate(&[rng.gen_range(0..g.order())]);
        let res = restrict_graph(&gg, &g1, None).unwrap();
        prop_assert_eq!(res.validate(&res.id().unwrap()), Ok(()));
        prop_assert_eq!(res.graph(), gg.graph());

        let normals: Vec<_> = g.elements().map(|x| g.generate(&[x])).filter(|n| g.is_normal(n)).collect();
        let n = &normals[rng.gen_range(0..normals.len())];
        let c = corestrict_graph(&gg, n).unwrap();
        prop_assert_eq!(c.graph.validate(&c.graph.id().unwrap()), Ok(()));
        prop_assert_eq!(c.graph.graph().genus(), c.graph.id().unwrap().g as i64);

        // corestrict, then restrict inside the quotient
        let q = c.graph.group();
        let sub = q.generate(&[rng.gen_range(0..q.order())]);
        let both = restrict_graph(&c.graph, &sub, None).unwrap();
        prop_assert_eq!(both.validate(&both.id().unwrap()), Ok(()));
    }

    #[test]
    fn trivial_kernel_has_multiplicity_one(seed in any::<u64>(), gi in 0usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (_, g) = &small_groups()[gi];
        let gg = random_ggraph(&mut rng, g, 2);
        let c = corestrict_graph(&gg, &g.trivial_subgroup()).unwrap();
        let m = corestriction_boundary_multiplicity(&gg, &g.trivial_subgroup(), &c.graph, &GraphIso::identity(c.graph.graph())).unwrap();
        prop_assert_eq!(m.multiplicity, rat(1));
        prop_assert_eq!(m.automorphisms, 1);
    }

    #[test]
    fn restriction_exponents_are_positive(seed in any::<u64>(), gi in 0usize..6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (_, g) = &small_groups()[gi];
        let gg = random_ggraph(&mut rng, g, 2);
        let g1 = g.generate(&[rng.gen_range(0..g.order())]);
        let id = GraphMorphism::from_iso(&GraphIso::identity(gg.graph()));
        let ks = restriction_boundary_exponents(&gg, &g1, gg.graph(), &id).unwrap();
        prop_assert_eq!(ks.len(), gg.edge_orbits().len());
        for (k, orbit) in ks.iter().zip(gg.edge_orbits()) {
            prop_assert!(k.k >= 1 && k.k <= orbit.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hurwitz_counts_ignore_fiber_order(
        d in 2usize..=5,
        parts in proptest::collection::vec(proptest::collection::vec(1u32..=5, 1..4), 3..=4),
        labelled in proptest::collection::vec(any::<bool>(), 4),
        rot in 0usize..4,
    ) {
        // turn each draw into a partition of d
        let fibers: Vec<BranchFiber> = parts
            .iter()
            .zip(&labelled)
            .map(|(p, &l)| {
                let mut profile = Vec::new();
                let mut left = d as u32;
                for &x in p {
                    if left == 0 {
                        break;
                    }
                    let x = x.min(left);
                    profile.push(x);
                    left -= x;
                }
                if left > 0 {
                    profile.push(left);
                }
                BranchFiber::new(&profile, l)
            })
            .collect();
        let base = hurwitz_cover_count(d, &fibers, 0).unwrap();
        let mut rotated = fibers.clone();
        rotated.rotate_left(rot % fibers.len());
        prop_assert_eq!(hurwitz_cover_count(d, &rotated, 0).unwrap(), base.clone());
        rotated.reverse();
        prop_assert_eq!(hurwitz_cover_count(d, &rotated, 0).unwrap(), base);
    }
}

#[test]
fn symmetric_group_orders() {
    for d in 1..=5u64 {
        let s = FiniteGroup::symmetric(d as usize).unwrap();
        assert_eq!(Rational::from_integer(s.order().into()), Rational::from_integer(factorial(d)));
    }
}
