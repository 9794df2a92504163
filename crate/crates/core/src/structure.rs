//! Formal-manifold data, structure-set elements, and the abelianized Galois
//! actions on them.
//!
//! At an odd prime the manifold datum is the normalized Pontryagin character
//! of the orientation (constant term 1, degrees `4*`); a structure is a pair
//! `(phi, beta)` with `phi` a character of the same shape and `beta` a
//! p-adic unit absorbing the fundamental-class ambiguity. At the prime 2 the
//! manifold datum is an integral lift `L_X` of the mod-8 class together with
//! normal root data; a structure is a pair `(l, k)` with the degree-`m`
//! components excluded.
//!
//! Actions are written as right actions: acting by `sigma` then `tau`
//! equals acting by `tau * sigma` (the units commute, so the order is only
//! a bookkeeping convention).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{AdelicUnit, PadicInt, PadicUnit};
use crate::char_classes::RootData;
use crate::error::{Error, Result};
use crate::kervaire::{kervaire_class_up_to, KervaireCoeffs, KervaireMode};
use crate::ring::{Coeff, GradedClass, RingSpec, SpaceModel};

fn check_character_shape(class: &GradedClass, prime: u64, name: &str) -> Result<()> {
    match class.ring() {
        RingSpec::Rational => {
            for (_, coeff) in class.terms() {
                if let Coeff::Rat(r) = coeff {
                    if r.denom().mod_floor(&BigInt::from(prime)).is_zero() {
                        return Err(Error::DenominatorDivisible {
                            den: r.denom().to_string(),
                            prime,
                        });
                    }
                }
            }
        }
        RingSpec::Mod { prime: p, .. } => {
            if *p != prime {
                return Err(Error::PrimeMismatch { expected: prime, found: *p });
            }
        }
    }
    match class.constant_term() {
        c if c == Coeff::one_of(class.ring()) => {}
        _ => {
            return Err(Error::InvalidClass(format!("{name} must have constant term 1")));
        }
    }
    if class.degrees().iter().any(|d| d % 4 != 0) {
        return Err(Error::InvalidClass(format!("{name} must live in degrees 4*")));
    }
    Ok(())
}

/// Odd-prime formal manifold: model space plus the normalized character of
/// its orientation. The character may be stored rationally or already
/// reduced mod `p^k` (the action lands in the latter form).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalManifoldOdd {
    space: SpaceModel,
    prime: u64,
    dim_real: u32,
    delta_hat: GradedClass,
}

impl FormalManifoldOdd {
    pub fn new(space: SpaceModel, prime: u64, delta_hat: GradedClass) -> Result<Self> {
        if prime == 2 {
            return Err(Error::InvalidInput("odd-prime manifold at prime 2".into()));
        }
        if delta_hat.space() != &space {
            return Err(Error::SpaceMismatch);
        }
        check_character_shape(&delta_hat, prime, "delta_hat")?;
        let dim_real = space.dim_real();
        Ok(FormalManifoldOdd { space, prime, dim_real, delta_hat })
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim_real(&self) -> u32 {
        self.dim_real
    }

    pub fn delta_hat(&self) -> &GradedClass {
        &self.delta_hat
    }
}

/// Odd-prime structure: a character `phi` with constant term 1 and a unit
/// `beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddStructure {
    phi_char: GradedClass,
    beta: PadicUnit,
}

impl OddStructure {
    pub fn new(phi_char: GradedClass, beta: PadicUnit) -> Result<Self> {
        check_character_shape(&phi_char, beta.prime(), "phi")?;
        Ok(OddStructure { phi_char, beta })
    }

    pub fn phi_char(&self) -> &GradedClass {
        &self.phi_char
    }

    pub fn beta(&self) -> &PadicUnit {
        &self.beta
    }
}

/// 2-adic formal manifold: integral lift `L_X`, the vanishing assertion for
/// the odd-degree obstruction class, and normal root data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalManifold2 {
    space: SpaceModel,
    dim_real: u32,
    l_x: GradedClass,
    kg_vanishes: bool,
    normal_roots: RootData,
}

impl FormalManifold2 {
    pub fn new(
        space: SpaceModel,
        l_x: GradedClass,
        kg_vanishes: bool,
        normal_roots: RootData,
    ) -> Result<Self> {
        if !kg_vanishes {
            return Err(Error::InvalidInput(
                "the obstruction class must vanish for a 2-adic formal manifold".into(),
            ));
        }
        if l_x.space() != &space || normal_roots.space() != &space {
            return Err(Error::SpaceMismatch);
        }
        check_character_shape(&l_x, 2, "L_X")?;
        match l_x.ring() {
            RingSpec::Mod { prime: 2, precision } if *precision >= 3 => {}
            other => {
                return Err(Error::InvalidClass(format!(
                    "L_X must be stored mod 2^k with k >= 3, found {other}"
                )));
            }
        }
        let dim_real = space.dim_real();
        Ok(FormalManifold2 { space, dim_real, l_x, kg_vanishes, normal_roots })
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn dim_real(&self) -> u32 {
        self.dim_real
    }

    pub fn l_x(&self) -> &GradedClass {
        &self.l_x
    }

    pub fn kg_vanishes(&self) -> bool {
        self.kg_vanishes
    }

    pub fn normal_roots(&self) -> &RootData {
        &self.normal_roots
    }

    pub fn l_x_precision(&self) -> u32 {
        match self.l_x.ring() {
            RingSpec::Mod { precision, .. } => *precision,
            RingSpec::Rational => unreachable!("constructor enforces a mod-2^k ring"),
        }
    }
}

/// 2-adic structure `(l, k)` with the degree-`m` components excluded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoAdicStructure {
    l: GradedClass,
    k: GradedClass,
}

impl TwoAdicStructure {
    pub fn new(l: GradedClass, k: GradedClass) -> Result<Self> {
        if l.space() != k.space() {
            return Err(Error::SpaceMismatch);
        }
        let m = l.space().dim_real();
        match l.ring() {
            RingSpec::Mod { prime: 2, .. } => {}
            other => {
                return Err(Error::InvalidClass(format!(
                    "l must be stored mod 2^k, found {other}"
                )));
            }
        }
        if k.ring() != &RingSpec::F2 {
            return Err(Error::InvalidClass("k must be a Z/2 class".into()));
        }
        if l.degrees().iter().any(|d| *d == 0 || d % 4 != 0 || *d >= m) {
            return Err(Error::InvalidClass(format!(
                "l must live in degrees 4k with 0 < 4k < {m}"
            )));
        }
        if k.degrees().iter().any(|d| d % 4 != 2 || *d >= m) {
            return Err(Error::InvalidClass(format!(
                "k must live in degrees 4k+2 < {m}"
            )));
        }
        Ok(TwoAdicStructure { l, k })
    }

    pub fn l(&self) -> &GradedClass {
        &self.l
    }

    pub fn k(&self) -> &GradedClass {
        &self.k
    }

    pub fn l_precision(&self) -> u32 {
        match self.l.ring() {
            RingSpec::Mod { precision, .. } => *precision,
            RingSpec::Rational => unreachable!("constructor enforces a mod-2^k ring"),
        }
    }
}

/// Cohomological Adams operation: multiply the `H^{2n}` component by
/// `sigma^n`. Rational inputs are reduced mod `p^k` first, so the output
/// always lives mod `p^k` at the shared precision.
pub fn adams_h(sigma: &PadicUnit, a: &GradedClass) -> Result<GradedClass> {
    let p = sigma.prime();
    let k_out = match a.ring() {
        RingSpec::Mod { prime, precision } => {
            if *prime != p {
                return Err(Error::PrimeMismatch { expected: p, found: *prime });
            }
            sigma.precision().min(*precision)
        }
        RingSpec::Rational => sigma.precision(),
    };
    let target = RingSpec::modring(p, k_out);
    let reduced = a.coefficient_map(&target)?;
    let s = sigma.reduce_precision(k_out)?;
    let mut terms = Vec::new();
    for (exps, coeff) in reduced.terms() {
        let Coeff::Mod(v) = coeff else { unreachable!("reduced above") };
        let n = exps.iter().sum::<u32>() as i64;
        terms.push((exps.clone(), Coeff::Mod(v.mul(s.pow(n).as_int())?)));
    }
    GradedClass::from_terms(reduced.space(), &target, terms)
}

fn pairing_residue(class: &GradedClass, prime: u64, precision: u32) -> Result<PadicInt> {
    match class.pair_fundamental() {
        Coeff::Mod(v) => v.reduce_precision(precision.min(v.precision())),
        Coeff::Rat(r) => PadicInt::from_rational(prime, precision, &r)
            .map_err(|e| Error::IndeterminatePairing(e.to_string())),
    }
}

/// Check the orientation constraint tying `phi` to `beta` when the
/// dimension is divisible by 4:
/// `<phi . delta, [X]> = beta^{m/2} <delta, [X]>` mod `p^k`.
/// Dimensions `m = 2 mod 4` carry no constraint and always validate.
pub fn validate_odd(x: &FormalManifoldOdd, s: &OddStructure) -> Result<bool> {
    let p = x.prime();
    if s.beta().prime() != p {
        return Err(Error::PrimeMismatch { expected: p, found: s.beta().prime() });
    }
    if x.space() != s.phi_char().space() {
        return Err(Error::SpaceMismatch);
    }
    let m = x.dim_real();
    if m % 4 != 0 {
        return Ok(true);
    }
    let mut k = s.beta().precision();
    for class in [x.delta_hat(), s.phi_char()] {
        if let RingSpec::Mod { precision, .. } = class.ring() {
            k = k.min(*precision);
        }
    }
    // Evaluate in the ring the classes are stored in, then reduce: for
    // rational data only the cleared top-degree denominators can obstruct.
    let common: Option<RingSpec> = match (x.delta_hat().ring(), s.phi_char().ring()) {
        (RingSpec::Rational, RingSpec::Rational) => None,
        _ => Some(RingSpec::modring(p, k)),
    };
    let (product, delta) = match &common {
        None => (
            s.phi_char().mul(x.delta_hat())?,
            x.delta_hat().clone(),
        ),
        Some(ring) => {
            let d = x.delta_hat().coefficient_map(ring)?;
            let f = s.phi_char().coefficient_map(ring)?;
            (f.mul(&d)?, d)
        }
    };
    let lhs = pairing_residue(&product, p, k)?;
    let rhs_pairing = pairing_residue(&delta, p, k)?;
    let beta_pow = s.beta().reduce_precision(k)?.pow(i64::from(m / 2));
    let rhs = beta_pow.as_int().mul(&rhs_pairing)?;
    Ok(lhs == rhs)
}

/// The odd-prime Galois action: the target manifold carries
/// `psi^{sigma^{-1}} delta`, the structure becomes
/// `(phi . delta / psi^{sigma^{-1}} delta, beta sigma)`.
pub fn galois_odd(
    x: &FormalManifoldOdd,
    s: &OddStructure,
    sigma: &PadicUnit,
) -> Result<(FormalManifoldOdd, OddStructure)> {
    let p = x.prime();
    if sigma.prime() != p {
        return Err(Error::PrimeMismatch { expected: p, found: sigma.prime() });
    }
    if s.beta().prime() != p {
        return Err(Error::PrimeMismatch { expected: p, found: s.beta().prime() });
    }
    let mut k = sigma.precision();
    for class in [x.delta_hat(), s.phi_char()] {
        if let RingSpec::Mod { precision, .. } = class.ring() {
            k = k.min(*precision);
        }
    }
    let sigma_r = sigma.reduce_precision(k)?;
    let delta_new = adams_h(&sigma_r.inverse(), x.delta_hat())?;
    let ring = RingSpec::modring(p, k);
    let delta_red = x.delta_hat().coefficient_map(&ring)?;
    let phi_red = s.phi_char().coefficient_map(&ring)?;
    let phi_new = phi_red.mul(&delta_red)?.mul(&delta_new.ring_inverse()?)?;
    let beta_new = s.beta().mul(&sigma_r)?;
    Ok((
        FormalManifoldOdd::new(x.space().clone(), p, delta_new)?,
        OddStructure::new(phi_new, beta_new)?,
    ))
}

/// Lift `l` mod `2^k` to `8 l` mod `2^{k+3}`.
fn times_8_lifted(l: &GradedClass, precision_out: u32) -> Result<GradedClass> {
    let ring = RingSpec::modring(2, precision_out);
    let terms = l
        .terms()
        .map(|(exps, coeff)| {
            let Coeff::Mod(v) = coeff else {
                return Err(Error::InvalidClass("l must be a mod-2^k class".into()));
            };
            Ok((
                exps.clone(),
                Coeff::Mod(PadicInt::new(2, precision_out, v.residue() * 8u32)?),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    GradedClass::from_terms(l.space(), &ring, terms)
}

/// Divide every coefficient by 8 exactly, dropping 3 bits of precision.
fn div_8_exact(t: &GradedClass) -> Result<GradedClass> {
    let RingSpec::Mod { precision, .. } = t.ring() else {
        return Err(Error::InvalidClass("expected a mod-2^k class".into()));
    };
    let ring = RingSpec::modring(2, precision - 3);
    let terms = t
        .terms()
        .map(|(exps, coeff)| {
            let Coeff::Mod(v) = coeff else { unreachable!("mod ring") };
            Ok((exps.clone(), Coeff::Mod(v.div_exact_prime_pow(3)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    GradedClass::from_terms(t.space(), &ring, terms)
}

/// The 2-adic Galois action with explicit Kervaire coefficients. The
/// coefficients are taken to describe the Kervaire class of the *inverse*
/// twist `k^{sigma2^{-1}}`; use [`galois_two`] to derive them from a mode.
///
/// Transport equation: `(1 + 8 l') psi^{sigma^{-1}} L_X = (1 + 8 l) L_X`,
/// solved for `l'` by exact division by 8 (every unit square is `1 mod 8`,
/// so the division never fails on valid input); `k' = k + k^{sigma^{-1}}_X`.
/// Degree-`m` components are dropped from both outputs.
pub fn galois_two_with_coeffs(
    x: &FormalManifold2,
    s: &TwoAdicStructure,
    sigma2: &PadicUnit,
    coeffs: &KervaireCoeffs,
) -> Result<(FormalManifold2, TwoAdicStructure)> {
    if sigma2.prime() != 2 {
        return Err(Error::PrimeMismatch { expected: 2, found: sigma2.prime() });
    }
    if x.space() != s.l().space() {
        return Err(Error::SpaceMismatch);
    }
    let m = x.dim_real();
    let k_l = s.l_precision();
    let k_work = k_l + 3;
    if x.l_x_precision() < k_work {
        return Err(Error::PrecisionTooLow { needed: k_work, found: x.l_x_precision() });
    }
    if sigma2.precision() < k_work {
        return Err(Error::PrecisionTooLow { needed: k_work, found: sigma2.precision() });
    }

    let ring_w = RingSpec::modring(2, k_work);
    let l_big = x.l_x().coefficient_map(&ring_w)?;
    let sigma_w = sigma2.reduce_precision(k_work)?;
    let psi = adams_h(&sigma_w.inverse(), &l_big)?;
    let one = GradedClass::one(x.space(), &ring_w);
    let lhs = one.add(&times_8_lifted(s.l(), k_work)?)?.mul(&l_big)?;
    let transported = lhs.mul(&psi.ring_inverse()?)?;
    let l_new = div_8_exact(&transported.sub(&one)?)?.drop_degree(m);

    let k_twist = kervaire_class_up_to(coeffs, x.normal_roots(), m.saturating_sub(2))?;
    let k_new = s.k().add(&k_twist)?.drop_degree(m);

    let l_x_new = adams_h(&sigma2.inverse(), x.l_x())?;
    Ok((
        FormalManifold2::new(x.space().clone(), l_x_new, true, x.normal_roots().clone())?,
        TwoAdicStructure::new(l_new, k_new)?,
    ))
}

fn required_entries(m: u32) -> usize {
    if m < 4 {
        return 0;
    }
    let max_i = (m - 2) / 2;
    let max_odd = if max_i % 2 == 1 { max_i } else { max_i.saturating_sub(1) };
    if max_odd == 0 {
        0
    } else {
        ((max_odd + 1) / 2) as usize
    }
}

/// The 2-adic Galois action, deriving the Kervaire coefficients for
/// `sigma2^{-1}` from the given mode at the length the space requires.
pub fn galois_two(
    x: &FormalManifold2,
    s: &TwoAdicStructure,
    sigma2: &PadicUnit,
    mode: &KervaireMode,
) -> Result<(FormalManifold2, TwoAdicStructure)> {
    let coeffs = mode.coeffs_for(&sigma2.inverse(), required_entries(x.dim_real()))?;
    galois_two_with_coeffs(x, s, sigma2, &coeffs)
}

/// Per-prime manifold datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeManifold {
    Odd(FormalManifoldOdd),
    Two(FormalManifold2),
}

/// Per-prime structure datum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeStructure {
    Odd(OddStructure),
    Two(TwoAdicStructure),
}

/// A formal manifold split into per-prime data.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EtaleManifold {
    components: BTreeMap<u64, PrimeManifold>,
}

impl EtaleManifold {
    pub fn new(components: Vec<(u64, PrimeManifold)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, c) in components {
            match (&c, p) {
                (PrimeManifold::Two(_), 2) => {}
                (PrimeManifold::Odd(x), q) if q != 2 && x.prime() == q => {}
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "manifold component type does not match prime {p}"
                    )));
                }
            }
            if map.insert(p, c).is_some() {
                return Err(Error::InvalidInput(format!("duplicate prime {p}")));
            }
        }
        Ok(EtaleManifold { components: map })
    }

    pub fn component(&self, prime: u64) -> Option<&PrimeManifold> {
        self.components.get(&prime)
    }

    pub fn components(&self) -> impl Iterator<Item = (u64, &PrimeManifold)> {
        self.components.iter().map(|(p, c)| (*p, c))
    }
}

/// An element of the all-primes structure set: one component per prime,
/// odd components at odd primes and a `(l, k)` pair at 2.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EtaleStructure {
    components: BTreeMap<u64, PrimeStructure>,
}

impl EtaleStructure {
    pub fn new(components: Vec<(u64, PrimeStructure)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, c) in components {
            match (&c, p) {
                (PrimeStructure::Two(_), 2) => {}
                (PrimeStructure::Odd(s), q) if q != 2 && s.beta().prime() == q => {}
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "structure component type does not match prime {p}"
                    )));
                }
            }
            if map.insert(p, c).is_some() {
                return Err(Error::InvalidInput(format!("duplicate prime {p}")));
            }
        }
        Ok(EtaleStructure { components: map })
    }

    pub fn component(&self, prime: u64) -> Option<&PrimeStructure> {
        self.components.get(&prime)
    }

    pub fn components(&self) -> impl Iterator<Item = (u64, &PrimeStructure)> {
        self.components.iter().map(|(p, c)| (*p, c))
    }
}

/// Apply the Galois action componentwise. Primes absent from `sigma` act as
/// the identity. Manifold components without a structure component are still
/// transported to the twisted basepoint.
pub fn galois_etale(
    x: &EtaleManifold,
    s: &EtaleStructure,
    sigma: &AdelicUnit,
    mode: &KervaireMode,
) -> Result<(EtaleManifold, EtaleStructure)> {
    for (p, _) in s.components() {
        if x.component(p).is_none() {
            return Err(Error::InvalidInput(format!(
                "structure has a component at prime {p} but the manifold does not"
            )));
        }
    }
    let mut xs = Vec::new();
    let mut ss = Vec::new();
    for (p, mx) in x.components() {
        let unit = sigma.component(p);
        match (mx, s.component(p), unit) {
            (_, _, None) => {
                xs.push((p, mx.clone()));
                if let Some(c) = s.component(p) {
                    ss.push((p, c.clone()));
                }
            }
            (PrimeManifold::Odd(xo), Some(PrimeStructure::Odd(so)), Some(u)) => {
                let (x2, s2) = galois_odd(xo, so, u)?;
                xs.push((p, PrimeManifold::Odd(x2)));
                ss.push((p, PrimeStructure::Odd(s2)));
            }
            (PrimeManifold::Two(xt), Some(PrimeStructure::Two(st)), Some(u)) => {
                let (x2, s2) = galois_two(xt, st, u, mode)?;
                xs.push((p, PrimeManifold::Two(x2)));
                ss.push((p, PrimeStructure::Two(s2)));
            }
            (PrimeManifold::Odd(xo), None, Some(u)) => {
                let delta = adams_h(&u.inverse(), xo.delta_hat())?;
                xs.push((p, PrimeManifold::Odd(FormalManifoldOdd::new(
                    xo.space().clone(),
                    p,
                    delta,
                )?)));
            }
            (PrimeManifold::Two(xt), None, Some(u)) => {
                let l = adams_h(&u.inverse(), xt.l_x())?;
                xs.push((p, PrimeManifold::Two(FormalManifold2::new(
                    xt.space().clone(),
                    l,
                    true,
                    xt.normal_roots().clone(),
                )?)));
            }
            _ => {
                return Err(Error::InvalidInput(format!(
                    "mismatched component kinds at prime {p}"
                )));
            }
        }
    }
    Ok((EtaleManifold::new(xs)?, EtaleStructure::new(ss)?))
}

/// Validate every component: odd primes run the orientation constraint,
/// the prime 2 carries no pointwise constraint here.
pub fn validate_etale(x: &EtaleManifold, s: &EtaleStructure) -> Result<BTreeMap<u64, bool>> {
    let mut out = BTreeMap::new();
    for (p, sc) in s.components() {
        let mx = x.component(p).ok_or_else(|| {
            Error::InvalidInput(format!("no manifold data at prime {p}"))
        })?;
        let ok = match (mx, sc) {
            (PrimeManifold::Odd(xo), PrimeStructure::Odd(so)) => validate_odd(xo, so)?,
            (PrimeManifold::Two(_), PrimeStructure::Two(_)) => true,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "mismatched component kinds at prime {p}"
                )));
            }
        };
        out.insert(p, ok);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn unit(prime: u64, precision: u32, residue: u64) -> PadicUnit {
        PadicUnit::new(PadicInt::from_u64(prime, precision, residue).unwrap()).unwrap()
    }

    #[test]
    fn adams_h_scales_by_powers() {
        let cp3 = SpaceModel::cp(3);
        let ring = RingSpec::modring(7, 2);
        let class = GradedClass::from_terms(
            &cp3,
            &ring,
            vec![
                (vec![0], Coeff::from_i64(&ring, 1)),
                (vec![1], Coeff::from_i64(&ring, 1)),
                (vec![2], Coeff::from_i64(&ring, 1)),
            ],
        )
        .unwrap();
        let s = unit(7, 2, 3);
        let out = adams_h(&s, &class).unwrap();
        assert_eq!(
            out.coefficient(&[1]),
            Coeff::from_i64(&ring, 3),
            "H^2 scales by sigma"
        );
        assert_eq!(
            out.coefficient(&[2]),
            Coeff::from_i64(&ring, 9),
            "H^4 scales by sigma^2"
        );
        assert_eq!(out.constant_term(), Coeff::one_of(&ring));
    }

    #[test]
    fn validate_odd_square_constraint_on_cp2() {
        // CP^2, m = 4: <phi delta> = beta^2 <delta> mod 7 with
        // delta = 1 + w^2 and phi = 1 + w^2 forces beta^2 = 2.
        let cp2 = SpaceModel::cp(2);
        let ring = RingSpec::modring(7, 1);
        let class = GradedClass::from_terms(
            &cp2,
            &ring,
            vec![
                (vec![0], Coeff::from_i64(&ring, 1)),
                (vec![2], Coeff::from_i64(&ring, 1)),
            ],
        )
        .unwrap();
        let x = FormalManifoldOdd::new(cp2, 7, class.clone()).unwrap();
        for b in 1..7 {
            let s = OddStructure::new(class.clone(), unit(7, 1, b)).unwrap();
            let ok = validate_odd(&x, &s).unwrap();
            assert_eq!(ok, b == 3 || b == 4, "beta = {b}");
        }
    }

    #[test]
    fn validate_odd_unconstrained_off_4_fold_dimensions() {
        let cp3 = SpaceModel::cp(3);
        let ring = RingSpec::modring(5, 2);
        let one = GradedClass::one(&cp3, &ring);
        let x = FormalManifoldOdd::new(cp3, 5, one.clone()).unwrap();
        let s = OddStructure::new(one, unit(5, 2, 7)).unwrap();
        assert!(validate_odd(&x, &s).unwrap(), "m = 6 carries no constraint");
    }

    #[test]
    fn galois_odd_identity_fixes_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (x, s) = sample::odd_pair(&mut rng, 5, 6).unwrap();
        let (x2, s2) = galois_odd(&x, &s, &unit(5, 6, 1)).unwrap();
        assert_eq!(x2.delta_hat(), x.delta_hat());
        assert_eq!(s2.phi_char(), s.phi_char());
        assert_eq!(s2.beta(), s.beta());
    }

    #[test]
    fn galois_odd_round_trip_and_composition() {
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (x, s) = sample::odd_pair(&mut rng, 3, 12).unwrap();
            let sigma = sample::padic_unit(&mut rng, 3, 12);
            let tau = sample::padic_unit(&mut rng, 3, 12);

            let (xa, sa) = galois_odd(&x, &s, &sigma).unwrap();
            let (xb, sb) = galois_odd(&xa, &sa, &sigma.inverse()).unwrap();
            assert_eq!(xb.delta_hat(), x.delta_hat());
            assert_eq!(sb.phi_char(), s.phi_char());
            assert_eq!(sb.beta(), s.beta());

            let (xc, sc) = galois_odd(&xa, &sa, &tau).unwrap();
            let (xd, sd) = galois_odd(&x, &s, &tau.mul(&sigma).unwrap()).unwrap();
            assert_eq!(xc, xd);
            assert_eq!(sc, sd);
        }
    }

    #[test]
    fn galois_odd_transports_the_constraint() {
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let (x, s) = sample::odd_pair(&mut rng, 5, 8).unwrap();
            assert!(validate_odd(&x, &s).unwrap());
            let sigma = sample::padic_unit(&mut rng, 5, 8);
            let (x2, s2) = galois_odd(&x, &s, &sigma).unwrap();
            assert!(validate_odd(&x2, &s2).unwrap());
        }
    }

    #[test]
    fn galois_two_identity_fixes_everything() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (x, s) = sample::two_pair(&mut rng, 20, 17).unwrap();
        let (x2, s2) =
            galois_two(&x, &s, &unit(2, 20, 1), &KervaireMode::PaperPreset).unwrap();
        assert_eq!(s2.l(), s.l());
        assert_eq!(s2.k(), s.k());
        assert_eq!(
            x2.l_x().coefficient_map(x.l_x().ring()).unwrap(),
            *x.l_x()
        );
    }

    #[test]
    fn galois_two_degree_four_coefficient() {
        // Degree-4 part of the transport equation on CP^4:
        // l'_4 = l_4 + ((1 - sigma^{-2}) / 8) L_4.
        let cp4 = SpaceModel::cp(4);
        let ring_lx = RingSpec::modring(2, 8);
        let l4 = 5u64;
        let lx = GradedClass::from_terms(
            &cp4,
            &ring_lx,
            vec![
                (vec![0], Coeff::from_i64(&ring_lx, 1)),
                (vec![2], Coeff::from_i64(&ring_lx, l4 as i64)),
            ],
        )
        .unwrap();
        let roots = RootData::cp_normal(&cp4).unwrap();
        let x = FormalManifold2::new(cp4.clone(), lx, true, roots).unwrap();

        let ring_l = RingSpec::modring(2, 5);
        let l = GradedClass::monomial(&cp4, &ring_l, vec![2], Coeff::from_i64(&ring_l, 3))
            .unwrap();
        let k = GradedClass::zero(&cp4, &RingSpec::F2);
        let s = TwoAdicStructure::new(l, k).unwrap();

        let sigma = unit(2, 8, 11);
        let (_, s2) = galois_two(&x, &s, &sigma, &KervaireMode::PaperPreset).unwrap();

        let one = PadicInt::from_u64(2, 8, 1).unwrap();
        let correction = one
            .sub(sigma.pow(-2).as_int())
            .unwrap()
            .div_exact_prime_pow(3)
            .unwrap()
            .mul(&PadicInt::from_u64(2, 5, l4).unwrap())
            .unwrap();
        let expected = PadicInt::from_u64(2, 5, 3)
            .unwrap()
            .add(&correction)
            .unwrap();
        assert_eq!(s2.l().coefficient(&[2]), Coeff::Mod(expected));
    }

    #[test]
    fn galois_two_mod8_shadow_is_fixed() {
        // Unit squares are 1 mod 8, so the transported L_X agrees with the
        // original mod 8 in every degree-4k component.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let (x, s) = sample::two_pair(&mut rng, 20, 17).unwrap();
        let sigma = sample::padic_unit(&mut rng, 2, 20);
        let (x2, _) = galois_two(&x, &s, &sigma, &KervaireMode::PaperPreset).unwrap();
        let ring8 = RingSpec::modring(2, 3);
        assert_eq!(
            x2.l_x().coefficient_map(&ring8).unwrap(),
            x.l_x().coefficient_map(&ring8).unwrap()
        );
    }

    #[test]
    fn galois_two_round_trip_and_composition() {
        for mode in [KervaireMode::PaperPreset, KervaireMode::ConstantLegendre] {
            for seed in 0..10u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
                let (x, s) = sample::two_pair(&mut rng, 20, 17).unwrap();
                let sigma = sample::padic_unit(&mut rng, 2, 20);
                let tau = sample::padic_unit(&mut rng, 2, 20);

                let (xa, sa) = galois_two(&x, &s, &sigma, &mode).unwrap();
                let (_, sb) = galois_two(&xa, &sa, &sigma.inverse(), &mode).unwrap();
                assert_eq!(sb.l(), s.l());
                assert_eq!(sb.k(), s.k());

                let (_, sc) = galois_two(&xa, &sa, &tau, &mode).unwrap();
                let (_, sd) =
                    galois_two(&x, &s, &tau.mul(&sigma).unwrap(), &mode).unwrap();
                assert_eq!(sc.l(), sd.l());
                assert_eq!(sc.k(), sd.k());
            }
        }
    }

    #[test]
    fn galois_two_requires_working_precision() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (x, s) = sample::two_pair(&mut rng, 19, 17).unwrap();
        let sigma = sample::padic_unit(&mut rng, 2, 20);
        assert!(matches!(
            galois_two(&x, &s, &sigma, &KervaireMode::PaperPreset),
            Err(Error::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn etale_absent_primes_act_as_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (x3, s3) = sample::odd_pair(&mut rng, 3, 8).unwrap();
        let (x5, s5) = sample::odd_pair(&mut rng, 5, 8).unwrap();
        let x = EtaleManifold::new(vec![
            (3, PrimeManifold::Odd(x3.clone())),
            (5, PrimeManifold::Odd(x5.clone())),
        ])
        .unwrap();
        let s = EtaleStructure::new(vec![
            (3, PrimeStructure::Odd(s3.clone())),
            (5, PrimeStructure::Odd(s5.clone())),
        ])
        .unwrap();
        let sigma5 = sample::padic_unit(&mut rng, 5, 8);
        let sigma = AdelicUnit::new(vec![sigma5.clone()]).unwrap();

        let (x2, s2) = galois_etale(&x, &s, &sigma, &KervaireMode::PaperPreset).unwrap();
        assert_eq!(x2.component(3), x.component(3), "prime 3 untouched");
        assert_eq!(s2.component(3), s.component(3));
        let (x5b, s5b) = galois_odd(&x5, &s5, &sigma5).unwrap();
        assert_eq!(x2.component(5), Some(&PrimeManifold::Odd(x5b)));
        assert_eq!(s2.component(5), Some(&PrimeStructure::Odd(s5b)));
    }

    #[test]
    fn etale_validation_reports_per_prime() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let (x3, s3) = sample::odd_pair(&mut rng, 3, 6).unwrap();
        let (x2m, s2m) = sample::two_pair(&mut rng, 20, 17).unwrap();
        let x = EtaleManifold::new(vec![
            (2, PrimeManifold::Two(x2m)),
            (3, PrimeManifold::Odd(x3)),
        ])
        .unwrap();
        let s = EtaleStructure::new(vec![
            (2, PrimeStructure::Two(s2m)),
            (3, PrimeStructure::Odd(s3)),
        ])
        .unwrap();
        let report = validate_etale(&x, &s).unwrap();
        assert_eq!(report.get(&2), Some(&true));
        assert_eq!(report.get(&3), Some(&true));
    }

    #[test]
    fn etale_rejects_kind_prime_mismatch() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let (x3, _) = sample::odd_pair(&mut rng, 3, 6).unwrap();
        assert!(EtaleManifold::new(vec![(5, PrimeManifold::Odd(x3.clone()))]).is_err());
        assert!(EtaleManifold::new(vec![(2, PrimeManifold::Odd(x3))]).is_err());
    }
}
