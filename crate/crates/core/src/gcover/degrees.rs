//! Degree and count formulas for fiber products of restriction and
//! corestriction maps. The group data is supplied by the caller.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{big, factorial, Rational};
use crate::groups::{Elt, FiniteGroup, Subgroup};
use crate::Error;

/// One leg orbit of an augmented admissible H-graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentedLeg {
    /// `ord_{H_ℓ}(h_ℓ)`, the order of the leg's monodromy in `G_v/N_v`.
    pub monodromy_order: u64,
    /// `#N_v` at the leg's vertex.
    pub kernel_order: u64,
}

/// Number of augmented graphs over a point of a fiber product of two
/// restrictions: `(#L')! · ∏ #H/(ord_{H_ℓ}(h_ℓ)·#N_{v_ℓ})` over leg orbit
/// representatives.
pub fn res_res_count(h_order: u64, legs: &[AugmentedLeg]) -> Result<Rational, Error> {
    let mut out = factorial(legs.len() as u64);
    for (i, l) in legs.iter().enumerate() {
        let stab = l.monodromy_order.checked_mul(l.kernel_order).unwrap_or(0);
        if stab == 0 || h_order % stab != 0 {
            return Err(Error::Domain(format!(
                "leg orbit {i}: stabilizer order {} · {} does not divide #H = {h_order}",
                l.monodromy_order, l.kernel_order
            )));
        }
        out *= BigInt::from(h_order / stab);
    }
    Ok(big(out))
}

/// `∏_i #(K̃_2/(<h̃_i> ∩ K̃_2)) · (#K̃_1/(<h̃_i> ∩ K̃_1))^{#H_2/#G}` for
/// `K̃_1 ⊆ K̃_2 ⊆ H̃`.
pub fn res_cores_degree(
    group: &FiniteGroup,
    k1: &Subgroup,
    k2: &Subgroup,
    monodromy: &[Elt],
    h2_order: u64,
    g_order: u64,
) -> Result<Rational, Error> {
    if !k1.is_subset(k2) {
        return Err(Error::Domain("K̃_1 is not contained in K̃_2".into()));
    }
    group.check_normal(k2)?;
    if g_order == 0 || h2_order % g_order != 0 {
        return Err(Error::Domain(format!("#G = {g_order} does not divide #H_2 = {h2_order}")));
    }
    let e = (h2_order / g_order) as u32;
    let mut out = BigInt::one();
    for &h in monodromy {
        if h >= group.order() {
            return Err(Error::Domain(format!("element index {h} outside the group")));
        }
        let c = group.cyclic_subgroup(h);
        let a = k2.order() / group.intersection(&c, k2).order();
        let b = k1.order() / group.intersection(&c, k1).order();
        out *= BigInt::from(a) * BigInt::from(b).pow(e);
    }
    Ok(big(out))
}

/// Fiber product data for two corestrictions `H_j → G`.
pub struct CoresCoresData<'a> {
    pub h1: &'a FiniteGroup,
    pub p1: &'a [Elt],
    pub h2: &'a FiniteGroup,
    pub p2: &'a [Elt],
    pub g: &'a FiniteGroup,
    /// Generators of `H_0` as pairs `(x_1, x_2)` with `p1(x_1) = p2(x_2)`.
    pub h0_generators: &'a [(Elt, Elt)],
    pub b: usize,
}

/// `#H_• · (#H_0)^{b−1}` with `H_• = H_1 ×_G H_2`, after checking that `H_0`
/// surjects onto both factors.
pub fn cores_cores_degree(d: &CoresCoresData) -> Result<Rational, Error> {
    if !d.h1.is_homomorphism(d.g, d.p1) || !d.h2.is_homomorphism(d.g, d.p2) {
        return Err(Error::Domain("the maps to G are not homomorphisms".into()));
    }
    if d.b == 0 {
        return Err(Error::Domain("need at least one marked orbit".into()));
    }
    let (hb, pr1, pr2) = FiniteGroup::fiber_product(d.h1, d.p1, d.h2, d.p2)?;
    let mut gens = Vec::new();
    for &(x1, x2) in d.h0_generators {
        let found = hb.elements().find(|&z| pr1[z] == x1 && pr2[z] == x2);
        match found {
            Some(z) => gens.push(z),
            None => return Err(Error::Domain(format!("({x1}, {x2}) is not in the fiber product"))),
        }
    }
    let h0 = hb.generate(&gens);
    for (j, pr, target) in [(1, &pr1, d.h1), (2, &pr2, d.h2)] {
        let image: std::collections::BTreeSet<Elt> = h0.elements().iter().map(|&z| pr[z]).collect();
        if image.len() != target.order() {
            return Err(Error::Domain(format!("H_0 does not surject onto H_{j}")));
        }
    }
    Ok(big(BigInt::from(hb.order()) * BigInt::from(h0.order()).pow(d.b as u32 - 1)))
}
