//! Seeded random actions for property tests and benchmarks.

use alloc::vec::Vec;

use rand::Rng;

use crate::coh::{enumerate_h2_representatives, DEFAULT_BUDGET};
use crate::error::CatError;
use crate::grp::FiniteGroup;
use crate::root::UnitRoot;
use crate::sscat::{SSAction, SSCategory};

/// Denominator of the random gauge phases `μ`.
pub const GAUGE_DENOMINATOR: i64 = 12;

/// A random action of `group`: simples are a disjoint union of `1..=max_orbits`
/// coset spaces `G/K` with `K` generated by at most two random elements.
/// Phases are a random `H²` representative, constant per orbit, plus a random
/// gauge term `μ_g(π_h s) + μ_h(s) − μ_{gh}(s)`.
pub fn random_action<R: Rng>(group: &FiniteGroup, max_orbits: usize, rng: &mut R) -> Result<SSAction, CatError> {
    let m = group.order();
    let h2 = enumerate_h2_representatives(group, DEFAULT_BUDGET)?;
    let n_orbits = rng.random_range(1..=max_orbits.max(1));
    let mut perms: Vec<Vec<usize>> = (0..m).map(|_| Vec::new()).collect();
    let mut orbit_of = Vec::new();
    let mut classes = Vec::new();
    for o in 0..n_orbits {
        let k = rng.random_range(0..=2);
        let gens: Vec<usize> = (0..k).map(|_| rng.random_range(0..m)).collect();
        let sub = group.generated_subgroup(&gens);
        let cosets = group.left_cosets(&sub)?;
        let base = orbit_of.len();
        for _ in &cosets.representatives {
            orbit_of.push(o);
        }
        for (x, p) in perms.iter_mut().enumerate() {
            for &r in &cosets.representatives {
                p.push(base + cosets.coset_of[group.mul(x, r)]);
            }
        }
        classes.push(rng.random_range(0..h2.len()));
    }
    let n = orbit_of.len();
    let mu: Vec<Vec<UnitRoot>> = (0..m)
        .map(|x| {
            (0..n)
                .map(|_| {
                    if x == group.identity() {
                        UnitRoot::ZERO
                    } else {
                        UnitRoot::new(rng.random_range(0..GAUGE_DENOMINATOR), GAUGE_DENOMINATOR)
                    }
                })
                .collect()
        })
        .collect();
    let mut theta = Vec::with_capacity(m * m * n);
    for x in 0..m {
        for y in 0..m {
            for s in 0..n {
                let gauge = mu[x][perms[y][s]] + mu[y][s] - mu[group.mul(x, y)][s];
                theta.push(h2[classes[orbit_of[s]]].get(&[x, y]) + gauge);
            }
        }
    }
    Ok(SSAction::from_parts(group, SSCategory::numbered(n), perms, theta))
}
