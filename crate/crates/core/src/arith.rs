//! Exact coefficient arithmetic: fixed-precision p-adic residues, p-adic
//! units with inversion, adelic units of finite support, and the two small
//! mod-2 kernels (Lucas binomials and the modified Legendre symbol).
//!
//! A [`PadicInt`] is a residue mod `p^k` with the precision `k` carried as an
//! explicit field. Operations never silently increase precision: combining
//! values of precision `k1` and `k2` yields precision `min(k1, k2)`.
//! Operations between different primes are rejected.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient. Always reduced, denominator positive.
pub type Rational = BigRational;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Residue mod `p^k` with explicit precision tracking.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    prime: u64,
    precision: u32,
    residue: BigUint,
}

impl PadicInt {
    pub fn new(prime: u64, precision: u32, residue: BigUint) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if precision == 0 {
            return Err(Error::PrecisionTooLow { needed: 1, found: 0 });
        }
        let modulus = BigUint::from(prime).pow(precision);
        Ok(PadicInt { prime, precision, residue: residue % modulus })
    }

    pub fn from_u64(prime: u64, precision: u32, value: u64) -> Result<Self> {
        Self::new(prime, precision, BigUint::from(value))
    }

    pub fn from_bigint(prime: u64, precision: u32, value: &BigInt) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if precision == 0 {
            return Err(Error::PrecisionTooLow { needed: 1, found: 0 });
        }
        let modulus = BigInt::from(prime).pow(precision);
        let r = value.mod_floor(&modulus);
        Ok(PadicInt {
            prime,
            precision,
            residue: r.to_biguint().expect("mod_floor is nonnegative"),
        })
    }

    /// Canonical residue of a rational with denominator coprime to `p`.
    pub fn from_rational(prime: u64, precision: u32, value: &Rational) -> Result<Self> {
        rational_mod(value, prime, precision)
    }

    pub fn zero(prime: u64, precision: u32) -> Result<Self> {
        Self::new(prime, precision, BigUint::zero())
    }

    pub fn one(prime: u64, precision: u32) -> Result<Self> {
        Self::new(prime, precision, BigUint::one())
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.prime).is_zero()
    }

    fn check_prime(&self, other: &PadicInt) -> Result<(u64, u32)> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch { expected: self.prime, found: other.prime });
        }
        Ok((self.prime, self.precision.min(other.precision)))
    }

    pub fn add(&self, other: &PadicInt) -> Result<PadicInt> {
        let (p, k) = self.check_prime(other)?;
        PadicInt::new(p, k, &self.residue + &other.residue)
    }

    pub fn sub(&self, other: &PadicInt) -> Result<PadicInt> {
        let (p, k) = self.check_prime(other)?;
        let m = BigUint::from(p).pow(k);
        let a = &self.residue % &m;
        let b = &other.residue % &m;
        let r = if a >= b { a - b } else { &m + a - b };
        PadicInt::new(p, k, r)
    }

    pub fn mul(&self, other: &PadicInt) -> Result<PadicInt> {
        let (p, k) = self.check_prime(other)?;
        PadicInt::new(p, k, &self.residue * &other.residue)
    }

    pub fn neg(&self) -> PadicInt {
        let m = self.modulus();
        let r = if self.residue.is_zero() { BigUint::zero() } else { m - &self.residue };
        PadicInt { prime: self.prime, precision: self.precision, residue: r }
    }

    pub fn pow(&self, exp: u64) -> PadicInt {
        let r = self.residue.modpow(&BigUint::from(exp), &self.modulus());
        PadicInt { prime: self.prime, precision: self.precision, residue: r }
    }

    /// Forget bits: same residue class at a smaller precision.
    pub fn reduce_precision(&self, precision: u32) -> Result<PadicInt> {
        if precision > self.precision {
            return Err(Error::PrecisionTooLow { needed: precision, found: self.precision });
        }
        PadicInt::new(self.prime, precision, self.residue.clone())
    }

    /// Exact division by `p^e`; consumes `e` digits of precision.
    pub fn div_exact_prime_pow(&self, e: u32) -> Result<PadicInt> {
        if self.precision <= e {
            return Err(Error::PrecisionTooLow { needed: e + 1, found: self.precision });
        }
        let d = BigUint::from(self.prime).pow(e);
        if !(&self.residue % &d).is_zero() {
            return Err(Error::InexactDivision {
                divisor: d.to_u64().unwrap_or(u64::MAX),
                residue: self.residue.to_string(),
            });
        }
        PadicInt::new(self.prime, self.precision - e, &self.residue / &d)
    }
}

impl std::fmt::Display for PadicInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.prime, self.precision)
    }
}

/// Invertible residue mod `p^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicUnit(PadicInt);

impl PadicUnit {
    pub fn new(value: PadicInt) -> Result<Self> {
        if !value.is_unit() {
            return Err(Error::NotAUnit {
                residue: value.residue.to_string(),
                prime: value.prime,
            });
        }
        Ok(PadicUnit(value))
    }

    pub fn from_u64(prime: u64, precision: u32, value: u64) -> Result<Self> {
        Self::new(PadicInt::from_u64(prime, precision, value)?)
    }

    pub fn as_int(&self) -> &PadicInt {
        &self.0
    }

    pub fn prime(&self) -> u64 {
        self.0.prime
    }

    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    pub fn residue(&self) -> &BigUint {
        self.0.residue()
    }

    pub fn one(prime: u64, precision: u32) -> Result<Self> {
        Self::new(PadicInt::one(prime, precision)?)
    }

    pub fn is_one(&self) -> bool {
        self.0.residue.is_one()
    }

    pub fn mul(&self, other: &PadicUnit) -> Result<PadicUnit> {
        Self::new(self.0.mul(&other.0)?)
    }

    pub fn reduce_precision(&self, precision: u32) -> Result<PadicUnit> {
        Self::new(self.0.reduce_precision(precision)?)
    }

    /// The unique `v` with `u * v = 1` mod `p^k`, same precision.
    pub fn inverse(&self) -> PadicUnit {
        let m = BigInt::from(self.0.modulus());
        let a = BigInt::from(self.0.residue.clone());
        let ext = a.extended_gcd(&m);
        debug_assert!(ext.gcd.is_one());
        let inv = ext.x.mod_floor(&m).to_biguint().expect("mod_floor is nonnegative");
        PadicUnit(PadicInt { prime: self.0.prime, precision: self.0.precision, residue: inv })
    }

    /// `u^e` at the same precision, through the inverse for negative `e`.
    pub fn pow(&self, exp: i64) -> PadicUnit {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        PadicUnit(base.0.pow(exp.unsigned_abs()))
    }
}

impl std::fmt::Display for PadicUnit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Element of the idele class data with explicit finite support: a map
/// prime -> unit. A prime absent from the map acts as 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdelicUnit {
    components: std::collections::BTreeMap<u64, PadicUnit>,
}

impl AdelicUnit {
    pub fn new(components: Vec<PadicUnit>) -> Result<Self> {
        let mut map = std::collections::BTreeMap::new();
        for u in components {
            if map.insert(u.prime(), u.clone()).is_some() {
                return Err(Error::InvalidInput(format!(
                    "duplicate component at prime {}",
                    u.prime()
                )));
            }
        }
        Ok(AdelicUnit { components: map })
    }

    pub fn empty() -> Self {
        AdelicUnit::default()
    }

    pub fn component(&self, prime: u64) -> Option<&PadicUnit> {
        self.components.get(&prime)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.components.keys().copied()
    }

    pub fn components(&self) -> impl Iterator<Item = (u64, &PadicUnit)> {
        self.components.iter().map(|(p, u)| (*p, u))
    }

    pub fn inverse(&self) -> AdelicUnit {
        AdelicUnit {
            components: self.components.iter().map(|(p, u)| (*p, u.inverse())).collect(),
        }
    }
}

/// `C(n, j) mod 2` by Lucas' criterion: odd iff every binary digit of `j`
/// is dominated by the corresponding digit of `n`.
pub fn binom_mod2(n: u64, j: u64) -> u8 {
    if j > n {
        return 0;
    }
    u8::from(n & j == j)
}

/// The modified Legendre symbol of a 2-adic unit: 0 for residues `±1 mod 8`,
/// 1 for residues `±3 mod 8`. Needs at least 3 bits of precision.
pub fn legendre_mod8(sigma2: &PadicUnit) -> Result<u8> {
    if sigma2.prime() != 2 {
        return Err(Error::PrimeMismatch { expected: 2, found: sigma2.prime() });
    }
    if sigma2.precision() < 3 {
        return Err(Error::PrecisionTooLow { needed: 3, found: sigma2.precision() });
    }
    let r = (sigma2.residue() % 8u32).to_u8().expect("residue mod 8 fits in u8");
    match r {
        1 | 7 => Ok(0),
        3 | 5 => Ok(1),
        _ => unreachable!("unit residues mod 8 are odd"),
    }
}

/// Reduce a rational to a residue mod `p^k`; the denominator must be coprime
/// to `p`.
pub fn rational_mod(value: &Rational, prime: u64, precision: u32) -> Result<PadicInt> {
    let num = PadicInt::from_bigint(prime, precision, value.numer())?;
    let den = PadicInt::from_bigint(prime, precision, value.denom())?;
    let den = PadicUnit::new(den).map_err(|_| Error::DenominatorDivisible {
        den: value.denom().to_string(),
        prime,
    })?;
    num.mul(den.inverse().as_int())
}

/// Parse a rational from `"n"` or `"n/d"`.
pub fn rational_from_str(s: &str) -> Result<Rational> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidInput(format!("not an integer: {t:?}")))
    };
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::InvalidInput("zero denominator".into()));
            }
            Rational::new(parse_int(n)?, den)
        }
        None => Rational::from_integer(parse_int(s)?),
    };
    Ok(r)
}

/// Render a rational as `"n"` or `"n/d"`.
pub fn rational_to_string(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn rational_is_negative(value: &Rational) -> bool {
    value.numer().is_negative()
}
