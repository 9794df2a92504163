//! Seeded random inputs for the property suites: spaces, units, graded
//! classes, and consistent manifold/structure pairs. Everything is driven by
//! a caller-supplied RNG; there is no hidden entropy.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use crate::arith::{PadicInt, PadicUnit};
use crate::char_classes::RootData;
use crate::error::Result;
use crate::ring::{Coeff, GradedClass, RingSpec, SpaceModel};
use crate::structure::{
    FormalManifold2, FormalManifoldOdd, OddStructure, TwoAdicStructure,
};

/// Random `CP^a` or `CP^a x CP^b` with truncations at most 6.
pub fn space<R: Rng>(rng: &mut R) -> SpaceModel {
    if rng.gen_bool(0.5) {
        SpaceModel::cp(rng.gen_range(2..=6))
    } else {
        SpaceModel::cp_product(&[rng.gen_range(2..=6), rng.gen_range(1..=6)])
            .expect("valid product")
    }
}

/// Random space of real dimension at most 14, the largest the built-in
/// Kervaire presets (defined through `f_5`) can serve.
pub fn space_small<R: Rng>(rng: &mut R) -> SpaceModel {
    if rng.gen_bool(0.5) {
        SpaceModel::cp(rng.gen_range(2..=6))
    } else {
        let a = rng.gen_range(2..=5);
        SpaceModel::cp_product(&[a, rng.gen_range(1..=(7 - a))]).expect("valid product")
    }
}

fn rand_biguint<R: Rng>(rng: &mut R, modulus: &BigUint) -> BigUint {
    let words = (modulus.bits() as usize + 63) / 64 + 1;
    let raw: Vec<u64> = (0..words).map(|_| rng.gen()).collect();
    BigUint::new(raw.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect()) % modulus
}

/// Random residue mod `p^k`.
pub fn padic_int<R: Rng>(rng: &mut R, prime: u64, precision: u32) -> PadicInt {
    let modulus = BigUint::from(prime).pow(precision);
    PadicInt::new(prime, precision, rand_biguint(rng, &modulus)).expect("valid residue")
}

/// Random unit mod `p^k`.
pub fn padic_unit<R: Rng>(rng: &mut R, prime: u64, precision: u32) -> PadicUnit {
    loop {
        if let Ok(u) = PadicUnit::new(padic_int(rng, prime, precision)) {
            return u;
        }
    }
}

fn exp_vectors(space: &SpaceModel) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for g in space.gens() {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=g.trunc).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

/// Random class over a mod ring supported on the degrees accepted by `keep`.
pub fn graded_class<R: Rng>(
    rng: &mut R,
    space: &SpaceModel,
    ring: &RingSpec,
    keep: impl Fn(u32) -> bool,
) -> GradedClass {
    let RingSpec::Mod { prime, precision } = ring else {
        panic!("random classes are generated over mod rings only");
    };
    let terms = exp_vectors(space)
        .into_iter()
        .filter(|e| keep(2 * e.iter().sum::<u32>()))
        .map(|e| (e, Coeff::Mod(padic_int(rng, *prime, *precision))))
        .collect();
    GradedClass::from_terms(space, ring, terms).expect("exponents enumerated from the space")
}

/// Random root data on `space`: 1..=4 roots, each a random nonzero `Z/2`
/// linear combination of the generators, with multiplicities 1..=3.
pub fn root_data<R: Rng>(rng: &mut R, space: &SpaceModel) -> RootData {
    let count = rng.gen_range(1..=4);
    let roots = (0..count)
        .map(|_| {
            let class = loop {
                let picked: Vec<usize> =
                    (0..space.gens().len()).filter(|_| rng.gen_bool(0.5)).collect();
                let terms = picked
                    .into_iter()
                    .map(|i| {
                        let mut exps = vec![0; space.gens().len()];
                        exps[i] = 1;
                        (exps, Coeff::one_of(&RingSpec::F2))
                    })
                    .collect::<Vec<_>>();
                if !terms.is_empty() {
                    break GradedClass::from_terms(space, &RingSpec::F2, terms)
                        .expect("degree-2 terms");
                }
            };
            (class, rng.gen_range(1..=3))
        })
        .collect();
    RootData::new(space, roots).expect("homogeneous degree-2 roots")
}

/// Random valid odd-prime manifold/structure pair at precision `p^k`.
///
/// When the dimension is divisible by 4 the top coefficient of `phi` is
/// adjusted so the orientation constraint holds on the nose.
pub fn odd_pair<R: Rng>(
    rng: &mut R,
    prime: u64,
    precision: u32,
) -> Result<(FormalManifoldOdd, OddStructure)> {
    let sp = space(rng);
    let ring = RingSpec::modring(prime, precision);
    let one = GradedClass::one(&sp, &ring);
    let positive_4star = |d: u32| d > 0 && d % 4 == 0;

    let delta = one.add(&graded_class(rng, &sp, &ring, positive_4star))?;
    let mut phi = one.add(&graded_class(rng, &sp, &ring, positive_4star))?;
    let beta = padic_unit(rng, prime, precision);

    let m = sp.dim_real();
    if m % 4 == 0 {
        let lhs = match phi.mul(&delta)?.pair_fundamental() {
            Coeff::Mod(v) => v,
            Coeff::Rat(_) => unreachable!("mod ring"),
        };
        let target = match delta.pair_fundamental() {
            Coeff::Mod(v) => beta.pow(i64::from(m / 2)).as_int().mul(&v)?,
            Coeff::Rat(_) => unreachable!("mod ring"),
        };
        let diff = target.sub(&lhs)?;
        if !diff.residue().is_zero() {
            phi = phi.add(&GradedClass::monomial(
                &sp,
                &ring,
                sp.top_exps(),
                Coeff::Mod(diff),
            )?)?;
        }
    }

    let x = FormalManifoldOdd::new(sp, prime, delta)?;
    let s = OddStructure::new(phi, beta)?;
    Ok((x, s))
}

/// Random 2-adic manifold/structure pair: `L_X` mod `2^{lx_precision}`,
/// `l` mod `2^{l_precision}`, `k` over `Z/2`, canonical normal roots.
pub fn two_pair<R: Rng>(
    rng: &mut R,
    lx_precision: u32,
    l_precision: u32,
) -> Result<(FormalManifold2, TwoAdicStructure)> {
    let sp = space_small(rng);
    let m = sp.dim_real();
    let ring_lx = RingSpec::modring(2, lx_precision);
    let one = GradedClass::one(&sp, &ring_lx);
    let l_x = one.add(&graded_class(rng, &sp, &ring_lx, |d| d > 0 && d % 4 == 0))?;
    let roots = RootData::cp_normal(&sp)?;
    let x = FormalManifold2::new(sp.clone(), l_x, true, roots)?;

    let ring_l = RingSpec::modring(2, l_precision);
    let l = graded_class(rng, &sp, &ring_l, |d| d > 0 && d % 4 == 0 && d < m);
    let k = graded_class(rng, &sp, &RingSpec::F2, |d| d % 4 == 2 && d < m);
    let s = TwoAdicStructure::new(l, k)?;
    Ok((x, s))
}
