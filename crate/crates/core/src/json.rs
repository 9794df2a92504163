//! JSON wire formats. Numbers that can exceed machine range travel as
//! decimal strings; maps keyed by primes use the prime's decimal string as
//! the key. Serialization is canonical: object keys are sorted and term
//! lists follow the class's monomial order, so equal values produce
//! byte-identical documents.

use num_bigint::BigUint;
use serde_json::{json, Map, Value};

use crate::arith::{
    rational_from_str, rational_to_string, AdelicUnit, PadicInt, PadicUnit,
};
use crate::char_classes::RootData;
use crate::error::{Error, Result};
use crate::kervaire::{CoeffProvenance, KervaireCoeffs};
use crate::ring::{Coeff, Generator, GradedClass, RingSpec, SpaceModel};
use crate::structure::{
    EtaleManifold, EtaleStructure, FormalManifold2, FormalManifoldOdd, OddStructure,
    PrimeManifold, PrimeStructure, TwoAdicStructure,
};

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

pub fn padic_to_json(v: &PadicInt) -> Value {
    json!({
        "prime": v.prime(),
        "precision": v.precision(),
        "residue": v.residue().to_string(),
    })
}

pub fn padic_from_json(v: &Value) -> Result<PadicInt> {
    let prime = as_u64(get(v, "prime")?, "prime")?;
    let precision = as_u64(get(v, "precision")?, "precision")? as u32;
    let residue = as_str(get(v, "residue")?, "residue")?
        .parse::<BigUint>()
        .map_err(|_| bad("residue must be a decimal string"))?;
    PadicInt::new(prime, precision, residue)
}

pub fn unit_to_json(v: &PadicUnit) -> Value {
    padic_to_json(v.as_int())
}

pub fn unit_from_json(v: &Value) -> Result<PadicUnit> {
    PadicUnit::new(padic_from_json(v)?)
}

pub fn rational_to_json(v: &crate::arith::Rational) -> Value {
    json!({ "num": v.numer().to_string(), "den": v.denom().to_string() })
}

pub fn rational_from_json(v: &Value) -> Result<crate::arith::Rational> {
    let num = as_str(get(v, "num")?, "num")?;
    let den = as_str(get(v, "den")?, "den")?;
    rational_from_str(&format!("{num}/{den}"))
}

pub fn space_to_json(space: &SpaceModel) -> Value {
    json!({
        "gens": space
            .gens()
            .iter()
            .map(|g| json!({ "name": g.name, "trunc": g.trunc }))
            .collect::<Vec<_>>(),
    })
}

pub fn space_from_json(v: &Value) -> Result<SpaceModel> {
    let gens = get(v, "gens")?
        .as_array()
        .ok_or_else(|| bad("gens must be an array"))?
        .iter()
        .map(|g| {
            Ok(Generator {
                name: as_str(get(g, "name")?, "name")?.to_string(),
                trunc: as_u64(get(g, "trunc")?, "trunc")? as u32,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SpaceModel::new(gens)
}

fn coeff_to_string(c: &Coeff) -> String {
    match c {
        Coeff::Mod(v) => v.residue().to_string(),
        Coeff::Rat(r) => rational_to_string(r),
    }
}

fn coeff_from_string(s: &str, ring: &RingSpec) -> Result<Coeff> {
    match ring {
        RingSpec::Rational => Ok(Coeff::Rat(rational_from_str(s)?)),
        RingSpec::Mod { prime, precision } => {
            let r = rational_from_str(s)?;
            Ok(Coeff::Mod(PadicInt::from_rational(*prime, *precision, &r)?))
        }
    }
}

fn terms_to_json(class: &GradedClass) -> Value {
    Value::Array(
        class
            .terms()
            .map(|(exps, coeff)| json!({ "exps": exps, "coeff": coeff_to_string(coeff) }))
            .collect(),
    )
}

fn terms_from_json(
    v: &Value,
    space: &SpaceModel,
    ring: &RingSpec,
) -> Result<GradedClass> {
    let terms = v
        .as_array()
        .ok_or_else(|| bad("terms must be an array"))?
        .iter()
        .map(|t| {
            let exps = get(t, "exps")?
                .as_array()
                .ok_or_else(|| bad("exps must be an array"))?
                .iter()
                .map(|e| Ok(as_u64(e, "exponent")? as u32))
                .collect::<Result<Vec<_>>>()?;
            let coeff = coeff_from_string(as_str(get(t, "coeff")?, "coeff")?, ring)?;
            Ok((exps, coeff))
        })
        .collect::<Result<Vec<_>>>()?;
    GradedClass::from_terms(space, ring, terms)
}

pub fn class_to_json(class: &GradedClass) -> Value {
    json!({
        "space": space_to_json(class.space()),
        "ring": class.ring().to_string(),
        "terms": terms_to_json(class),
    })
}

pub fn class_from_json(v: &Value) -> Result<GradedClass> {
    let space = space_from_json(get(v, "space")?)?;
    let ring = RingSpec::parse(as_str(get(v, "ring")?, "ring")?)?;
    terms_from_json(get(v, "terms")?, &space, &ring)
}

pub fn root_data_to_json(roots: &RootData) -> Value {
    json!({
        "space": space_to_json(roots.space()),
        "roots": roots
            .roots()
            .iter()
            .map(|(class, mult)| json!({ "class": terms_to_json(class), "mult": mult }))
            .collect::<Vec<_>>(),
    })
}

pub fn root_data_from_json(v: &Value) -> Result<RootData> {
    let space = space_from_json(get(v, "space")?)?;
    let roots = get(v, "roots")?
        .as_array()
        .ok_or_else(|| bad("roots must be an array"))?
        .iter()
        .map(|r| {
            let class = terms_from_json(get(r, "class")?, &space, &RingSpec::F2)?;
            let mult = as_u64(get(r, "mult")?, "mult")? as u32;
            Ok((class, mult))
        })
        .collect::<Result<Vec<_>>>()?;
    RootData::new(&space, roots)
}

pub fn coeffs_to_json(coeffs: &KervaireCoeffs) -> Value {
    json!({
        "sigma2": unit_to_json(coeffs.sigma2()),
        "f": coeffs.entries(),
        "mode": coeffs.mode().as_str(),
    })
}

pub fn coeffs_from_json(v: &Value) -> Result<KervaireCoeffs> {
    let sigma2 = unit_from_json(get(v, "sigma2")?)?;
    let f = get(v, "f")?
        .as_array()
        .ok_or_else(|| bad("f must be an array of bits"))?
        .iter()
        .map(|b| Ok(as_u64(b, "f entry")? as u8))
        .collect::<Result<Vec<_>>>()?;
    let mode = CoeffProvenance::parse(as_str(get(v, "mode")?, "mode")?)?;
    KervaireCoeffs::new(sigma2, f, mode)
}

pub fn odd_manifold_to_json(x: &FormalManifoldOdd) -> Value {
    json!({
        "space": space_to_json(x.space()),
        "prime": x.prime(),
        "delta_hat": class_to_json(x.delta_hat()),
    })
}

pub fn odd_manifold_from_json(v: &Value) -> Result<FormalManifoldOdd> {
    let space = space_from_json(get(v, "space")?)?;
    let prime = as_u64(get(v, "prime")?, "prime")?;
    let delta_hat = class_from_json(get(v, "delta_hat")?)?;
    FormalManifoldOdd::new(space, prime, delta_hat)
}

pub fn two_manifold_to_json(x: &FormalManifold2) -> Value {
    json!({
        "space": space_to_json(x.space()),
        "l_x": class_to_json(x.l_x()),
        "kg_vanishes": x.kg_vanishes(),
        "normal_roots": root_data_to_json(x.normal_roots()),
    })
}

pub fn two_manifold_from_json(v: &Value) -> Result<FormalManifold2> {
    let space = space_from_json(get(v, "space")?)?;
    let l_x = class_from_json(get(v, "l_x")?)?;
    let kg = get(v, "kg_vanishes")?
        .as_bool()
        .ok_or_else(|| bad("kg_vanishes must be a boolean"))?;
    let roots = root_data_from_json(get(v, "normal_roots")?)?;
    FormalManifold2::new(space, l_x, kg, roots)
}

pub fn odd_structure_to_json(s: &OddStructure) -> Value {
    json!({
        "phi": class_to_json(s.phi_char()),
        "beta": unit_to_json(s.beta()),
    })
}

pub fn odd_structure_from_json(v: &Value) -> Result<OddStructure> {
    OddStructure::new(class_from_json(get(v, "phi")?)?, unit_from_json(get(v, "beta")?)?)
}

pub fn two_structure_to_json(s: &TwoAdicStructure) -> Value {
    json!({
        "l": class_to_json(s.l()),
        "k": class_to_json(s.k()),
    })
}

pub fn two_structure_from_json(v: &Value) -> Result<TwoAdicStructure> {
    TwoAdicStructure::new(class_from_json(get(v, "l")?)?, class_from_json(get(v, "k")?)?)
}

fn prime_key(v: &str) -> Result<u64> {
    v.parse::<u64>().map_err(|_| bad(format!("map key {v:?} is not a prime")))
}

pub fn etale_manifold_to_json(x: &EtaleManifold) -> Value {
    let mut map = Map::new();
    for (p, c) in x.components() {
        let v = match c {
            PrimeManifold::Odd(m) => odd_manifold_to_json(m),
            PrimeManifold::Two(m) => two_manifold_to_json(m),
        };
        map.insert(p.to_string(), v);
    }
    Value::Object(map)
}

pub fn etale_manifold_from_json(v: &Value) -> Result<EtaleManifold> {
    let obj = v.as_object().ok_or_else(|| bad("manifold must be an object keyed by primes"))?;
    let comps = obj
        .iter()
        .map(|(key, val)| {
            let p = prime_key(key)?;
            let c = if p == 2 {
                PrimeManifold::Two(two_manifold_from_json(val)?)
            } else {
                PrimeManifold::Odd(odd_manifold_from_json(val)?)
            };
            Ok((p, c))
        })
        .collect::<Result<Vec<_>>>()?;
    EtaleManifold::new(comps)
}

pub fn etale_structure_to_json(s: &EtaleStructure) -> Value {
    let mut map = Map::new();
    for (p, c) in s.components() {
        let v = match c {
            PrimeStructure::Odd(t) => odd_structure_to_json(t),
            PrimeStructure::Two(t) => two_structure_to_json(t),
        };
        map.insert(p.to_string(), v);
    }
    Value::Object(map)
}

pub fn etale_structure_from_json(v: &Value) -> Result<EtaleStructure> {
    let obj = v.as_object().ok_or_else(|| bad("structure must be an object keyed by primes"))?;
    let comps = obj
        .iter()
        .map(|(key, val)| {
            let p = prime_key(key)?;
            let c = if p == 2 {
                PrimeStructure::Two(two_structure_from_json(val)?)
            } else {
                PrimeStructure::Odd(odd_structure_from_json(val)?)
            };
            Ok((p, c))
        })
        .collect::<Result<Vec<_>>>()?;
    EtaleStructure::new(comps)
}

pub fn adelic_to_json(u: &AdelicUnit) -> Value {
    let mut map = Map::new();
    for (p, c) in u.components() {
        map.insert(p.to_string(), unit_to_json(c));
    }
    Value::Object(map)
}

pub fn adelic_from_json(v: &Value) -> Result<AdelicUnit> {
    let obj = v.as_object().ok_or_else(|| bad("sigma must be an object keyed by primes"))?;
    let comps = obj
        .iter()
        .map(|(key, val)| {
            let p = prime_key(key)?;
            let u = unit_from_json(val)?;
            if u.prime() != p {
                return Err(bad(format!(
                    "component keyed {p} has prime {}",
                    u.prime()
                )));
            }
            Ok(u)
        })
        .collect::<Result<Vec<_>>>()?;
    AdelicUnit::new(comps)
}

/// Canonical compact rendering; equal values give byte-identical output.
pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("serialization of a finite value cannot fail")
}
