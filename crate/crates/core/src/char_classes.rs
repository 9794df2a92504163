//! Characteristic-class computations on projective-space models: squared Wu
//! classes (a closed formula and an independent Steenrod-square oracle), the
//! multiplicative sequence of `x/tanh x`, total L-classes, and odd Newton
//! power sums of line-bundle root data.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{binom_mod2, Rational};
use crate::error::{Error, Result};
use crate::ring::{Coeff, GradedClass, RingSpec, SpaceModel};

/// Sum-of-line-bundles data for a stable bundle: degree-2 roots with
/// multiplicities. Conventionally records the normal bundle; mod 2 the dual
/// sign is invisible and tangent/normal Kervaire data agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootData {
    space: SpaceModel,
    roots: Vec<(GradedClass, u32)>,
}

impl RootData {
    pub fn new(space: &SpaceModel, roots: Vec<(GradedClass, u32)>) -> Result<Self> {
        for (class, mult) in &roots {
            if class.space() != space {
                return Err(Error::SpaceMismatch);
            }
            if class.ring() != &RingSpec::F2 {
                return Err(Error::RingMismatch {
                    left: RingSpec::F2.to_string(),
                    right: class.ring().to_string(),
                });
            }
            if *mult == 0 {
                return Err(Error::InvalidInput("root multiplicity must be >= 1".into()));
            }
            let homogeneous_deg2 =
                class.terms().all(|(exps, _)| exps.iter().sum::<u32>() == 1);
            if class.is_zero() || !homogeneous_deg2 {
                return Err(Error::InvalidClass(
                    "roots must be homogeneous of degree 2".into(),
                ));
            }
        }
        Ok(RootData { space: space.clone(), roots })
    }

    /// Normal root data of `CP^{N_1} x ... x CP^{N_r}`: `N_i + 1` copies of
    /// each generator.
    pub fn cp_normal(space: &SpaceModel) -> Result<Self> {
        let roots = space
            .gens()
            .iter()
            .enumerate()
            .map(|(i, g)| {
                GradedClass::generator(space, &RingSpec::F2, i).map(|w| (w, g.trunc + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, roots)
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn roots(&self) -> &[(GradedClass, u32)] {
        &self.roots
    }

    /// Whitney sum: concatenation of root lists.
    pub fn concat(&self, other: &RootData) -> Result<RootData> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let mut roots = self.roots.clone();
        roots.extend(other.roots.iter().cloned());
        RootData::new(&self.space, roots)
    }
}

/// Coefficients of the even series `x/tanh x`; entry `n` multiplies `x^{2n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LSeries {
    coefficients: Vec<Rational>,
}

impl LSeries {
    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coefficient(&self, n: usize) -> Option<&Rational> {
        self.coefficients.get(n)
    }
}

/// Divide two even power series given by their `x^{2n}` coefficients.
fn divide_even_series(num: &[Rational], den: &[Rational], terms: usize) -> Vec<Rational> {
    assert!(!den[0].is_zero());
    let mut q = Vec::with_capacity(terms);
    for n in 0..terms {
        let mut acc = num.get(n).cloned().unwrap_or_else(Rational::zero);
        for (i, qi) in q.iter().enumerate().take(n) {
            let d: &Rational = &den[n - i];
            acc -= d * qi;
        }
        q.push(acc / &den[0]);
    }
    q
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Coefficients of `x/tanh x` through `x^{2 max_n}`, by exact division of
/// the even exponential series `sum x^{2i}/(2i)!` by `sum x^{2i}/(2i+1)!`.
pub fn l_series(max_n: usize) -> LSeries {
    let terms = max_n + 1;
    let cosh: Vec<Rational> = (0..terms)
        .map(|i| Rational::new(BigInt::one(), factorial(2 * i as u64)))
        .collect();
    let sinh_over_x: Vec<Rational> = (0..terms)
        .map(|i| Rational::new(BigInt::one(), factorial(2 * i as u64 + 1)))
        .collect();
    LSeries { coefficients: divide_even_series(&cosh, &sinh_over_x, terms) }
}

/// Coefficients of `tanh(x)/x` through `x^{2 max_n}` (sinh/x divided by cosh).
/// Used as the reconstruction check against [`l_series`].
pub fn tanh_over_x_series(max_n: usize) -> Vec<Rational> {
    let terms = max_n + 1;
    let cosh: Vec<Rational> = (0..terms)
        .map(|i| Rational::new(BigInt::one(), factorial(2 * i as u64)))
        .collect();
    let sinh_over_x: Vec<Rational> = (0..terms)
        .map(|i| Rational::new(BigInt::one(), factorial(2 * i as u64 + 1)))
        .collect();
    divide_even_series(&sinh_over_x, &cosh, terms)
}

/// Squared Wu class of `CP^{2m+1}` by the closed binomial formula:
/// `sum_j C(2m+1-j, j) w^{2j}` over `Z/2`.
pub fn wu_square_formula(m: u32) -> GradedClass {
    let n = 2 * m + 1;
    let space = SpaceModel::cp(n);
    let terms = (0..=m)
        .filter(|j| binom_mod2((n - j) as u64, *j as u64) == 1)
        .map(|j| (vec![2 * j], Coeff::one_of(&RingSpec::F2)))
        .collect();
    GradedClass::from_terms(&space, &RingSpec::F2, terms).expect("exponents fit: 2j <= 2m+1")
}

/// Squared Wu class of `CP^{2m+1}` computed without the binomial formula:
/// take the total Stiefel-Whitney class `(1+w)^{2m+2}`, solve `Sq(v) = w`
/// degree by degree using `Sq(w^a) = w^a (1+w)^a`, then square `v`.
pub fn wu_square_oracle(m: u32) -> GradedClass {
    let n = 2 * m + 1;
    // w_a = C(2m+2, a) mod 2
    let w: Vec<u8> = (0..=n).map(|a| binom_mod2((n + 1) as u64, a as u64)).collect();
    // Coefficient of w^k in Sq(v): sum_a v_a C(a, k-a); the a = k term is v_k.
    let mut v = vec![0u8; (n + 1) as usize];
    for k in 0..=n {
        let mut acc = w[k as usize];
        for a in 0..k {
            acc ^= v[a as usize] & binom_mod2(a as u64, (k - a) as u64);
        }
        v[k as usize] = acc;
    }
    let space = SpaceModel::cp(n);
    let total = GradedClass::from_terms(
        &space,
        &RingSpec::F2,
        v.iter()
            .enumerate()
            .filter(|(_, bit)| **bit == 1)
            .map(|(a, _)| (vec![a as u32], Coeff::one_of(&RingSpec::F2)))
            .collect(),
    )
    .expect("exponents bounded by truncation");
    total.mul(&total).expect("same space and ring")
}

/// Total L-class of a projective-space product: the product over generators
/// of `(w_i / tanh w_i)^{N_i + 1}`, truncated.
pub fn l_class_cp(space: &SpaceModel) -> Result<GradedClass> {
    let max_n = space.gens().iter().map(|g| g.trunc / 2).max().unwrap_or(0) as usize;
    let series = l_series(max_n);
    let mut out = GradedClass::one(space, &RingSpec::Rational);
    for (i, gen) in space.gens().iter().enumerate() {
        let mut factor = GradedClass::zero(space, &RingSpec::Rational);
        for (n, c) in series.coefficients().iter().enumerate() {
            let e = 2 * n as u32;
            if e > gen.trunc {
                break;
            }
            let mut exps = vec![0; space.rank()];
            exps[i] = e;
            factor = factor.add(&GradedClass::monomial(
                space,
                &RingSpec::Rational,
                exps,
                Coeff::Rat(c.clone()),
            )?)?;
        }
        out = out.mul(&factor.pow(gen.trunc + 1)?)?;
    }
    Ok(out)
}

/// Odd Newton power sum of root data over `Z/2`:
/// `sum_roots mult * root^i`, truncated.
pub fn power_sum(roots: &RootData, i: u32) -> Result<GradedClass> {
    if i == 0 || i % 2 == 0 {
        return Err(Error::InvalidInput(format!("power sum index must be odd, got {i}")));
    }
    let mut out = GradedClass::zero(roots.space(), &RingSpec::F2);
    for (class, mult) in roots.roots() {
        if mult % 2 == 0 {
            continue;
        }
        out = out.add(&class.pow(i)?)?;
    }
    Ok(out)
}
