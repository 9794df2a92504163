//! Truncated graded-commutative polynomial rings modeling the cohomology of
//! products of complex projective spaces.
//!
//! A [`SpaceModel`] is a list of degree-2 generators with truncation orders;
//! the ring of a product `CP^{N_1} x ... x CP^{N_r}` is the polynomial ring
//! on those generators with `w_i^{N_i+1} = 0`. All generators sit in even
//! degree, so the ring is strictly commutative. The fundamental class is
//! dual to the top monomial `w_1^{N_1} ... w_r^{N_r}` with coefficient +1.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::{rational_mod, PadicInt, Rational};
use crate::error::{Error, Result};

/// One degree-2 generator with its truncation order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub trunc: u32,
}

/// A product of complex projective spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceModel {
    gens: Vec<Generator>,
}

impl SpaceModel {
    pub fn new(gens: Vec<Generator>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidInput("space needs at least one generator".into()));
        }
        for g in &gens {
            if g.trunc == 0 {
                return Err(Error::InvalidInput(format!("generator {} has truncation 0", g.name)));
            }
        }
        let mut names: Vec<&str> = gens.iter().map(|g| g.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != gens.len() {
            return Err(Error::InvalidInput("generator names must be unique".into()));
        }
        Ok(SpaceModel { gens })
    }

    /// `CP^n` with a single generator `w`.
    pub fn cp(n: u32) -> Self {
        SpaceModel::new(vec![Generator { name: "w".into(), trunc: n }]).expect("valid")
    }

    /// `CP^{a_1} x ... x CP^{a_r}` with generators `w1, ..., wr`.
    pub fn cp_product(truncs: &[u32]) -> Result<Self> {
        SpaceModel::new(
            truncs
                .iter()
                .enumerate()
                .map(|(i, &n)| Generator { name: format!("w{}", i + 1), trunc: n })
                .collect(),
        )
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Real dimension `2 * sum N_i`.
    pub fn dim_real(&self) -> u32 {
        2 * self.gens.iter().map(|g| g.trunc).sum::<u32>()
    }

    /// Largest total exponent of a surviving monomial.
    pub fn top_total_exp(&self) -> u32 {
        self.gens.iter().map(|g| g.trunc).sum()
    }

    pub fn top_exps(&self) -> Vec<u32> {
        self.gens.iter().map(|g| g.trunc).collect()
    }

    pub fn label(&self) -> String {
        self.gens
            .iter()
            .map(|g| format!("CP^{}", g.trunc))
            .collect::<Vec<_>>()
            .join("x")
    }

    fn fits(&self, exps: &[u32]) -> bool {
        exps.len() == self.gens.len()
            && exps.iter().zip(&self.gens).all(|(e, g)| *e <= g.trunc)
    }
}

/// Supported coefficient rings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// Integers mod `p^k`; `Z/2` is `(2, 1)` and `Z/8` is `(2, 3)`.
    Mod { prime: u64, precision: u32 },
    /// Exact rationals.
    Rational,
}

impl RingSpec {
    pub const F2: RingSpec = RingSpec::Mod { prime: 2, precision: 1 };
    pub const Z8: RingSpec = RingSpec::Mod { prime: 2, precision: 3 };

    pub fn modring(prime: u64, precision: u32) -> RingSpec {
        RingSpec::Mod { prime, precision }
    }

    pub fn parse(s: &str) -> Result<RingSpec> {
        if s == "Q" {
            return Ok(RingSpec::Rational);
        }
        let body = s
            .strip_prefix("Z/")
            .ok_or_else(|| Error::InvalidInput(format!("unknown ring {s:?}")))?;
        if let Some((base, exp)) = body.split_once('^') {
            let prime: u64 = base
                .parse()
                .map_err(|_| Error::InvalidInput(format!("unknown ring {s:?}")))?;
            let precision: u32 = exp
                .parse()
                .map_err(|_| Error::InvalidInput(format!("unknown ring {s:?}")))?;
            return Ok(RingSpec::Mod { prime, precision });
        }
        let n: u64 = body
            .parse()
            .map_err(|_| Error::InvalidInput(format!("unknown ring {s:?}")))?;
        // factor n as a prime power
        if n < 2 {
            return Err(Error::InvalidInput(format!("unknown ring {s:?}")));
        }
        let mut p = 2;
        while n % p != 0 {
            p += 1;
        }
        let mut k = 0u32;
        let mut rest = n;
        while rest % p == 0 {
            rest /= p;
            k += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidInput(format!("{n} is not a prime power")));
        }
        Ok(RingSpec::Mod { prime: p, precision: k })
    }
}

impl std::fmt::Display for RingSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingSpec::Rational => write!(f, "Q"),
            RingSpec::Mod { prime, precision } => match (prime, precision) {
                (2, 1) => write!(f, "Z/2"),
                (2, 3) => write!(f, "Z/8"),
                (p, 1) => write!(f, "Z/{p}"),
                (p, k) => write!(f, "Z/{p}^{k}"),
            },
        }
    }
}

/// A coefficient, matching the ring of the class that owns it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Mod(PadicInt),
    Rat(Rational),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Mod(v) => v.is_zero(),
            Coeff::Rat(v) => v.is_zero(),
        }
    }

    pub fn ring(&self) -> RingSpec {
        match self {
            Coeff::Mod(v) => RingSpec::Mod { prime: v.prime(), precision: v.precision() },
            Coeff::Rat(_) => RingSpec::Rational,
        }
    }

    fn add(&self, other: &Coeff) -> Result<Coeff> {
        match (self, other) {
            (Coeff::Mod(a), Coeff::Mod(b)) => Ok(Coeff::Mod(a.add(b)?)),
            (Coeff::Rat(a), Coeff::Rat(b)) => Ok(Coeff::Rat(a + b)),
            _ => Err(Error::RingMismatch {
                left: self.ring().to_string(),
                right: other.ring().to_string(),
            }),
        }
    }

    fn mul(&self, other: &Coeff) -> Result<Coeff> {
        match (self, other) {
            (Coeff::Mod(a), Coeff::Mod(b)) => Ok(Coeff::Mod(a.mul(b)?)),
            (Coeff::Rat(a), Coeff::Rat(b)) => Ok(Coeff::Rat(a * b)),
            _ => Err(Error::RingMismatch {
                left: self.ring().to_string(),
                right: other.ring().to_string(),
            }),
        }
    }

    fn neg(&self) -> Coeff {
        match self {
            Coeff::Mod(a) => Coeff::Mod(a.neg()),
            Coeff::Rat(a) => Coeff::Rat(-a),
        }
    }

    /// Multiplicative inverse; `None` if not a unit.
    fn invert(&self) -> Option<Coeff> {
        match self {
            Coeff::Mod(a) => crate::arith::PadicUnit::new(a.clone())
                .ok()
                .map(|u| Coeff::Mod(u.inverse().as_int().clone())),
            Coeff::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Coeff::Rat(a.recip()))
                }
            }
        }
    }

    pub fn zero_of(ring: &RingSpec) -> Coeff {
        match ring {
            RingSpec::Mod { prime, precision } => {
                Coeff::Mod(PadicInt::zero(*prime, *precision).expect("valid ring"))
            }
            RingSpec::Rational => Coeff::Rat(Rational::zero()),
        }
    }

    pub fn one_of(ring: &RingSpec) -> Coeff {
        match ring {
            RingSpec::Mod { prime, precision } => {
                Coeff::Mod(PadicInt::one(*prime, *precision).expect("valid ring"))
            }
            RingSpec::Rational => Coeff::Rat(Rational::one()),
        }
    }

    pub fn from_i64(ring: &RingSpec, value: i64) -> Coeff {
        match ring {
            RingSpec::Mod { prime, precision } => Coeff::Mod(
                PadicInt::from_bigint(*prime, *precision, &value.into()).expect("valid ring"),
            ),
            RingSpec::Rational => Coeff::Rat(Rational::from_integer(value.into())),
        }
    }
}

/// Element of the truncated cohomology ring of a [`SpaceModel`].
///
/// Terms map exponent vectors to nonzero coefficients; the monomial
/// `w_1^{e_1} ... w_r^{e_r}` has cohomological degree `2 * sum e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedClass {
    space: SpaceModel,
    ring: RingSpec,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

impl GradedClass {
    pub fn zero(space: &SpaceModel, ring: &RingSpec) -> Self {
        GradedClass { space: space.clone(), ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(space: &SpaceModel, ring: &RingSpec) -> Self {
        let mut c = Self::zero(space, ring);
        c.terms.insert(vec![0; space.rank()], Coeff::one_of(ring));
        c
    }

    pub fn from_terms(
        space: &SpaceModel,
        ring: &RingSpec,
        terms: Vec<(Vec<u32>, Coeff)>,
    ) -> Result<Self> {
        let mut c = Self::zero(space, ring);
        for (exps, coeff) in terms {
            c.insert_term(exps, coeff)?;
        }
        Ok(c)
    }

    pub fn monomial(
        space: &SpaceModel,
        ring: &RingSpec,
        exps: Vec<u32>,
        coeff: Coeff,
    ) -> Result<Self> {
        Self::from_terms(space, ring, vec![(exps, coeff)])
    }

    /// The generator `w_i` as a class over the given ring.
    pub fn generator(space: &SpaceModel, ring: &RingSpec, index: usize) -> Result<Self> {
        if index >= space.rank() {
            return Err(Error::InvalidInput(format!("no generator with index {index}")));
        }
        let mut exps = vec![0; space.rank()];
        exps[index] = 1;
        Self::monomial(space, ring, exps, Coeff::one_of(ring))
    }

    fn insert_term(&mut self, exps: Vec<u32>, coeff: Coeff) -> Result<()> {
        if !self.space.fits(&exps) {
            return Err(Error::InvalidClass(format!(
                "exponents {exps:?} exceed the truncation of {}",
                self.space.label()
            )));
        }
        if coeff.ring() != self.ring {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: coeff.ring().to_string(),
            });
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff)?;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a monomial; zero of the ring when absent.
    pub fn coefficient(&self, exps: &[u32]) -> Coeff {
        self.terms.get(exps).cloned().unwrap_or_else(|| Coeff::zero_of(&self.ring))
    }

    pub fn constant_term(&self) -> Coeff {
        self.coefficient(&vec![0; self.space.rank()])
    }

    fn check_compatible(&self, other: &GradedClass) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedClass) -> Result<GradedClass> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (exps, coeff) in &other.terms {
            out.insert_term(exps.clone(), coeff.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> GradedClass {
        let mut out = self.clone();
        for coeff in out.terms.values_mut() {
            *coeff = coeff.neg();
        }
        out
    }

    pub fn sub(&self, other: &GradedClass) -> Result<GradedClass> {
        self.add(&other.neg())
    }

    /// Cup product; monomials exceeding any truncation are dropped.
    pub fn mul(&self, other: &GradedClass) -> Result<GradedClass> {
        self.check_compatible(other)?;
        let mut out = Self::zero(&self.space, &self.ring);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if !self.space.fits(&exps) {
                    continue;
                }
                out.insert_term(exps, ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, scalar: &Coeff) -> Result<GradedClass> {
        let mut out = Self::zero(&self.space, &self.ring);
        for (exps, coeff) in &self.terms {
            out.insert_term(exps.clone(), coeff.mul(scalar)?)?;
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Result<GradedClass> {
        let mut out = Self::one(&self.space, &self.ring);
        for _ in 0..exp {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Two-sided inverse in the truncated ring, by a finite geometric series.
    /// Requires the constant term to be a unit.
    pub fn ring_inverse(&self) -> Result<GradedClass> {
        let c = self.constant_term();
        let c_inv = c.invert().ok_or(Error::NonUnitConstantTerm)?;
        // a = c (1 + n) with n nilpotent: a^{-1} = c^{-1} sum (-n)^i.
        let mut nil = self.clone();
        nil.terms.remove(&vec![0; self.space.rank()]);
        let x = nil.scalar_mul(&c_inv)?.neg();
        let mut acc = Self::one(&self.space, &self.ring);
        let mut pow = Self::one(&self.space, &self.ring);
        for _ in 0..self.space.top_total_exp() {
            pow = pow.mul(&x)?;
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow)?;
        }
        acc.scalar_mul(&c_inv)
    }

    /// Evaluation against the fundamental class: the coefficient of the top
    /// monomial in the preferred orientation.
    pub fn pair_fundamental(&self) -> Coeff {
        self.coefficient(&self.space.top_exps())
    }

    /// Image under the truncation surjection onto a smaller model.
    pub fn restrict(&self, sub: &SpaceModel) -> Result<GradedClass> {
        if sub.rank() != self.space.rank()
            || sub
                .gens()
                .iter()
                .zip(self.space.gens())
                .any(|(s, g)| s.name != g.name || s.trunc > g.trunc)
        {
            return Err(Error::NotATruncation);
        }
        let mut out = Self::zero(sub, &self.ring);
        for (exps, coeff) in &self.terms {
            if sub.fits(exps) {
                out.insert_term(exps.clone(), coeff.clone())?;
            }
        }
        Ok(out)
    }

    /// Apply the canonical coefficient morphism into `target`.
    ///
    /// Supported: identity, `Z/p^K -> Z/p^k` for `k <= K`, and
    /// `Q -> Z/p^k` when every denominator is coprime to `p`.
    pub fn coefficient_map(&self, target: &RingSpec) -> Result<GradedClass> {
        if &self.ring == target {
            return Ok(self.clone());
        }
        let unsupported = || Error::UnsupportedCoefficientMap {
            from: self.ring.to_string(),
            to: target.to_string(),
        };
        let mut out = Self::zero(&self.space, target);
        for (exps, coeff) in &self.terms {
            let mapped = match (coeff, target) {
                (Coeff::Mod(v), RingSpec::Mod { prime, precision }) => {
                    if v.prime() != *prime || *precision > v.precision() {
                        return Err(unsupported());
                    }
                    Coeff::Mod(v.reduce_precision(*precision)?)
                }
                (Coeff::Rat(v), RingSpec::Mod { prime, precision }) => {
                    Coeff::Mod(rational_mod(v, *prime, *precision)?)
                }
                _ => return Err(unsupported()),
            };
            out.insert_term(exps.clone(), mapped)?;
        }
        Ok(out)
    }

    /// The part of the class in a single cohomological degree.
    pub fn component_of_degree(&self, degree: u32) -> GradedClass {
        self.filter_terms(|exps| 2 * exps.iter().sum::<u32>() == degree)
    }

    /// Drop all terms of the given cohomological degree.
    pub fn drop_degree(&self, degree: u32) -> GradedClass {
        self.filter_terms(|exps| 2 * exps.iter().sum::<u32>() != degree)
    }

    pub fn filter_terms(&self, keep: impl Fn(&[u32]) -> bool) -> GradedClass {
        let mut out = Self::zero(&self.space, &self.ring);
        out.terms = self
            .terms
            .iter()
            .filter(|(exps, _)| keep(exps))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        out
    }

    /// Degrees (with nonzero terms) present in the class.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| 2 * e.iter().sum::<u32>()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

impl std::fmt::Display for GradedClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names: Vec<&str> = self.space.gens().iter().map(|g| g.name.as_str()).collect();
        let mut first = true;
        for (exps, coeff) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = exps
                .iter()
                .zip(&names)
                .filter(|(e, _)| **e > 0)
                .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
                .collect();
            let cs = match coeff {
                Coeff::Mod(v) => v.residue().to_string(),
                Coeff::Rat(v) => crate::arith::rational_to_string(v),
            };
            if mono.is_empty() {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{cs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}
