//! The graded mod-2 Kervaire class in degrees `4*+2`: its expansion in odd
//! Newton power sums with bit coefficients `f_1, f_3, ...`, the unitriangular
//! solver recovering those bits from per-dimension Kervaire invariants, and
//! the characteristic-variety pairing used to check them.
//!
//! Two built-in readings of the invariant data are provided and they
//! disagree; see [`KervaireCoeffs::paper_preset`].

use crate::arith::{binom_mod2, legendre_mod8, PadicUnit};
use crate::char_classes::{power_sum, wu_square_formula, RootData};
use crate::error::{Error, Result};
use crate::ring::{GradedClass, RingSpec, SpaceModel};

/// How a coefficient vector was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffProvenance {
    /// The literature preset for units `= ±3 mod 8`: `(f_1, f_3, f_5) = (1, 0, 1)`.
    PaperPreset,
    /// Solved from a constant invariant, the modified Legendre symbol of the
    /// unit in every dimension.
    ConstantInvariant,
    /// Solved from (or supplied as) an explicit invariant table.
    CustomOracle,
}

impl CoeffProvenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoeffProvenance::PaperPreset => "paper-preset",
            CoeffProvenance::ConstantInvariant => "constant-invariant",
            CoeffProvenance::CustomOracle => "custom-oracle",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "paper-preset" => Ok(CoeffProvenance::PaperPreset),
            "constant-invariant" => Ok(CoeffProvenance::ConstantInvariant),
            "custom-oracle" => Ok(CoeffProvenance::CustomOracle),
            _ => Err(Error::InvalidInput(format!("unknown coefficient mode {s:?}"))),
        }
    }
}

/// Bit coefficients of the power-sum expansion; entry `j` is `f_{2j+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KervaireCoeffs {
    sigma2: PadicUnit,
    entries: Vec<u8>,
    mode: CoeffProvenance,
}

impl KervaireCoeffs {
    pub fn new(sigma2: PadicUnit, entries: Vec<u8>, mode: CoeffProvenance) -> Result<Self> {
        if sigma2.prime() != 2 {
            return Err(Error::PrimeMismatch { expected: 2, found: sigma2.prime() });
        }
        if entries.iter().any(|b| *b > 1) {
            return Err(Error::InvalidInput("coefficient entries must be bits".into()));
        }
        Ok(KervaireCoeffs { sigma2, entries, mode })
    }

    pub fn sigma2(&self) -> &PadicUnit {
        &self.sigma2
    }

    /// Entry `j` is `f_{2j+1}`.
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn mode(&self) -> CoeffProvenance {
        self.mode
    }

    /// `f_i` for odd `i` inside the stored range.
    pub fn f(&self, i: u32) -> Result<u8> {
        if i % 2 == 0 {
            return Err(Error::InvalidInput(format!("f_{i} is not defined for even {i}")));
        }
        let j = ((i - 1) / 2) as usize;
        self.entries.get(j).copied().ok_or(Error::InsufficientCoeffs {
            needed: i,
            have: self.max_index(),
        })
    }

    /// Largest odd index covered, `2 len - 1`; 0 when empty.
    pub fn max_index(&self) -> u32 {
        if self.entries.is_empty() {
            0
        } else {
            2 * self.entries.len() as u32 - 1
        }
    }

    /// The literature preset: all bits zero for units `= ±1 mod 8`, and
    /// `(f_1, f_3, f_5) = (1, 0, 1)` for units `= ±3 mod 8`.
    ///
    /// The preset is stated only through `f_5` and is *not* what the solver
    /// produces from a constant modified-Legendre invariant (that yields
    /// `(1, 1, 0)`): reading the pairing formula with a constant right-hand
    /// side forces `f_3 = 1` on `CP^3`, where the squared Wu class is 1.
    /// Both readings are kept; neither is silently preferred.
    pub fn paper_preset(sigma2: PadicUnit) -> Result<Self> {
        let entries = match legendre_mod8(&sigma2)? {
            0 => vec![0, 0, 0],
            _ => vec![1, 0, 1],
        };
        Self::new(sigma2, entries, CoeffProvenance::PaperPreset)
    }

    /// Solve with the invariant held constant at the modified Legendre
    /// symbol of the unit, for `m = 0..=m_max`.
    pub fn constant_invariant(sigma2: PadicUnit, m_max: u32) -> Result<Self> {
        let bit = legendre_mod8(&sigma2)?;
        let oracle = InvariantOracle::constant(bit, m_max);
        let solved = solve_coeffs(&oracle, m_max)?;
        Self::new(sigma2, solved, CoeffProvenance::ConstantInvariant)
    }
}

/// Per-dimension Kervaire invariants: entry `m` is the invariant over
/// `CP^{2m+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantOracle {
    table: Vec<u8>,
}

impl InvariantOracle {
    pub fn from_table(table: Vec<u8>) -> Result<Self> {
        if table.iter().any(|b| *b > 1) {
            return Err(Error::InvalidInput("invariant table entries must be bits".into()));
        }
        Ok(InvariantOracle { table })
    }

    pub fn constant(bit: u8, m_max: u32) -> Self {
        InvariantOracle { table: vec![bit; m_max as usize + 1] }
    }

    pub fn value(&self, m: u32) -> Result<u8> {
        self.table.get(m as usize).copied().ok_or(Error::InvalidInput(format!(
            "invariant oracle not defined at m = {m}"
        )))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Solve for the bits `f_1, f_3, ..., f_{2 m_max + 1}` from per-dimension
/// invariants. For each `m` the pairing on `CP^{2m+1}` gives
/// `sum_j C(2m+1-j, j) f_{2m+1-2j} = oracle(m)`; the `j = 0` coefficient is
/// 1, so the system is unitriangular and forward substitution solves it
/// uniquely.
pub fn solve_coeffs(oracle: &InvariantOracle, m_max: u32) -> Result<Vec<u8>> {
    let mut f = vec![0u8; m_max as usize + 1]; // f[j] = f_{2j+1}
    for m in 0..=m_max {
        let mut bit = oracle.value(m)?;
        for j in 1..=m {
            let c = binom_mod2((2 * m + 1 - j) as u64, j as u64);
            bit ^= c & f[(m - j) as usize];
        }
        f[m as usize] = bit;
    }
    Ok(f)
}

fn max_odd_at_most(n: u32) -> u32 {
    if n == 0 {
        0
    } else if n % 2 == 1 {
        n
    } else {
        n - 1
    }
}

/// The Kervaire class of root data: `sum_i f_i * power_sum(roots, i)` over
/// odd `i`. Lives in degrees `4*+2` automatically (odd `i` means degree
/// `2i = 2 mod 4`). The coefficients must cover every odd power that can
/// survive truncation.
pub fn kervaire_class(coeffs: &KervaireCoeffs, roots: &RootData) -> Result<GradedClass> {
    let needed = max_odd_at_most(roots.space().top_total_exp());
    kervaire_class_up_to(coeffs, roots, 2 * needed)
}

/// The Kervaire class through cohomological degree `max_degree` only; odd
/// powers contributing above that degree are ignored. Errors if the stored
/// coefficients do not reach `max_degree`.
pub fn kervaire_class_up_to(
    coeffs: &KervaireCoeffs,
    roots: &RootData,
    max_degree: u32,
) -> Result<GradedClass> {
    let needed = max_odd_at_most((max_degree / 2).min(roots.space().top_total_exp()));
    if needed > coeffs.max_index() {
        return Err(Error::InsufficientCoeffs { needed, have: coeffs.max_index() });
    }
    let mut out = GradedClass::zero(roots.space(), &RingSpec::F2);
    let mut i = 1;
    while i <= needed {
        if coeffs.f(i)? == 1 {
            out = out.add(&power_sum(roots, i)?)?;
        }
        i += 2;
    }
    Ok(out)
}

/// Policy for producing Kervaire coefficients for a given 2-adic unit; the
/// Galois action uses this to build the coefficients of the inverse twist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KervaireMode {
    /// The literature preset; only defined through `f_5`.
    PaperPreset,
    /// Solve from the constant modified-Legendre invariant of the unit.
    ConstantLegendre,
    /// Use an explicit bit vector as-is.
    Custom(Vec<u8>),
}

impl KervaireMode {
    /// Coefficients for `unit`, with at least `min_entries` entries
    /// (`f_1 .. f_{2 min_entries - 1}`).
    pub fn coeffs_for(&self, unit: &PadicUnit, min_entries: usize) -> Result<KervaireCoeffs> {
        match self {
            KervaireMode::ConstantLegendre => {
                let m_max = min_entries.max(1) as u32 - 1;
                KervaireCoeffs::constant_invariant(unit.clone(), m_max)
            }
            KervaireMode::PaperPreset => {
                let coeffs = KervaireCoeffs::paper_preset(unit.clone())?;
                if coeffs.entries().len() < min_entries {
                    return Err(Error::InsufficientCoeffs {
                        needed: 2 * min_entries as u32 - 1,
                        have: coeffs.max_index(),
                    });
                }
                Ok(coeffs)
            }
            KervaireMode::Custom(bits) => {
                if bits.len() < min_entries {
                    return Err(Error::InsufficientCoeffs {
                        needed: 2 * min_entries as u32 - 1,
                        have: if bits.is_empty() { 0 } else { 2 * bits.len() as u32 - 1 },
                    });
                }
                KervaireCoeffs::new(unit.clone(), bits.clone(), CoeffProvenance::CustomOracle)
            }
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            KervaireMode::PaperPreset => "paper-preset",
            KervaireMode::ConstantLegendre => "constant",
            KervaireMode::Custom(_) => "custom",
        }
    }
}

/// The characteristic-variety pairing on `CP^{2m+1}`: evaluate
/// `<k . V^2, [CP^{2m+1}]>` with `k` the Kervaire class of a single line
/// bundle root and `V^2` the squared Wu class.
pub fn check_pairing(coeffs: &KervaireCoeffs, m: u32) -> Result<u8> {
    if 2 * m + 1 > coeffs.max_index() {
        return Err(Error::InsufficientCoeffs { needed: 2 * m + 1, have: coeffs.max_index() });
    }
    let space = SpaceModel::cp(2 * m + 1);
    let w = GradedClass::generator(&space, &RingSpec::F2, 0)?;
    let roots = RootData::new(&space, vec![(w, 1)])?;
    let k = kervaire_class(coeffs, &roots)?;
    let v2 = wu_square_formula(m);
    let paired = k.mul(&v2)?.pair_fundamental();
    Ok(u8::from(!paired.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit3() -> PadicUnit {
        PadicUnit::from_u64(2, 20, 3).unwrap()
    }

    fn unit7() -> PadicUnit {
        PadicUnit::from_u64(2, 20, 7).unwrap()
    }

    fn custom(entries: Vec<u8>) -> KervaireCoeffs {
        KervaireCoeffs::new(unit3(), entries, CoeffProvenance::CustomOracle).unwrap()
    }

    #[test]
    fn zero_oracle_solves_to_zero() {
        let oracle = InvariantOracle::constant(0, 6);
        assert_eq!(solve_coeffs(&oracle, 6).unwrap(), vec![0; 7]);
    }

    #[test]
    fn constant_oracle_first_entries() {
        let oracle = InvariantOracle::constant(1, 2);
        assert_eq!(solve_coeffs(&oracle, 2).unwrap(), vec![1, 1, 0]);
    }

    #[test]
    fn constant_oracle_brute_force_uniqueness() {
        // For every oracle with M <= 4 the solver output is the unique bit
        // vector satisfying all pairing equations.
        for m_max in 0..=4u32 {
            let len = m_max as usize + 1;
            for mask in 0..(1u32 << len) {
                let table: Vec<u8> = (0..len).map(|j| ((mask >> j) & 1) as u8).collect();
                let oracle = InvariantOracle::from_table(table.clone()).unwrap();
                let solved = solve_coeffs(&oracle, m_max).unwrap();

                let mut matches = Vec::new();
                for cand_mask in 0..(1u32 << len) {
                    let cand: Vec<u8> =
                        (0..len).map(|j| ((cand_mask >> j) & 1) as u8).collect();
                    let coeffs = custom(cand.clone());
                    let ok = (0..=m_max)
                        .all(|m| check_pairing(&coeffs, m).unwrap() == table[m as usize]);
                    if ok {
                        matches.push(cand);
                    }
                }
                assert_eq!(matches, vec![solved], "oracle {table:?}");
            }
        }
    }

    #[test]
    fn paper_preset_values() {
        let p = KervaireCoeffs::paper_preset(unit3()).unwrap();
        assert_eq!(p.entries(), &[1, 0, 1]);
        assert_eq!(p.mode(), CoeffProvenance::PaperPreset);
        let q = KervaireCoeffs::paper_preset(unit7()).unwrap();
        assert_eq!(q.entries(), &[0, 0, 0]);
    }

    #[test]
    fn preset_pairing_on_cp3_is_zero() {
        // The preset disagrees with the constant-invariant reading here:
        // f_3 = 0 makes the CP^3 pairing vanish.
        let p = KervaireCoeffs::paper_preset(unit3()).unwrap();
        assert_eq!(check_pairing(&p, 1).unwrap(), 0);
    }

    #[test]
    fn all_zero_coeffs_give_zero_class_and_pairing() {
        let z = custom(vec![0; 8]);
        let roots = RootData::cp_normal(&SpaceModel::cp(6)).unwrap();
        assert!(kervaire_class(&z, &roots).unwrap().is_zero());
        for m in 0..=3 {
            assert_eq!(check_pairing(&z, m).unwrap(), 0);
        }
    }

    #[test]
    fn preset_class_on_normal_bundle_of_cp_2n() {
        // (2N+1) copies of w: the odd multiplicity leaves w^i for each
        // available odd i; with the preset this is w + w^5 through degree 10.
        for n in [3u32, 4, 5] {
            let space = SpaceModel::cp(2 * n);
            let roots = RootData::cp_normal(&space).unwrap();
            let p = KervaireCoeffs::paper_preset(unit3()).unwrap();
            let k = kervaire_class_up_to(&p, &roots, 10).unwrap();
            let w = GradedClass::generator(&space, &RingSpec::F2, 0).unwrap();
            let expected = w.add(&w.pow(5).unwrap()).unwrap();
            assert_eq!(k, expected, "N = {n}");
        }
    }

    #[test]
    fn constant_mode_class_on_normal_bundle() {
        let space = SpaceModel::cp(6);
        let roots = RootData::cp_normal(&space).unwrap();
        let coeffs = KervaireCoeffs::constant_invariant(unit3(), 2).unwrap();
        assert_eq!(coeffs.entries(), &[1, 1, 0]);
        let k = kervaire_class(&coeffs, &roots).unwrap();
        let w = GradedClass::generator(&space, &RingSpec::F2, 0).unwrap();
        let expected = w.add(&w.pow(3).unwrap()).unwrap();
        assert_eq!(k, expected);
    }

    #[test]
    fn round_trip_all_oracles() {
        for m_max in 0..=6u32 {
            let len = m_max as usize + 1;
            for mask in 0..(1u32 << len) {
                let table: Vec<u8> = (0..len).map(|j| ((mask >> j) & 1) as u8).collect();
                let oracle = InvariantOracle::from_table(table.clone()).unwrap();
                let coeffs = custom(solve_coeffs(&oracle, m_max).unwrap());
                for m in 0..=m_max {
                    assert_eq!(
                        check_pairing(&coeffs, m).unwrap(),
                        table[m as usize],
                        "oracle {table:?}, m = {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn additivity_over_root_concatenation() {
        let space = SpaceModel::cp_product(&[4, 5]).unwrap();
        let w1 = GradedClass::generator(&space, &RingSpec::F2, 0).unwrap();
        let w2 = GradedClass::generator(&space, &RingSpec::F2, 1).unwrap();
        let r1 = RootData::new(&space, vec![(w1, 5)]).unwrap();
        let r2 = RootData::new(&space, vec![(w2, 3)]).unwrap();
        let coeffs = custom(vec![1, 0, 1, 1, 0]);
        let lhs = kervaire_class(&coeffs, &r1.concat(&r2).unwrap()).unwrap();
        let rhs = kervaire_class(&coeffs, &r1)
            .unwrap()
            .add(&kervaire_class(&coeffs, &r2).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn n_independence_under_restriction() {
        // The class of (2N+1) line-bundle copies restricted to a fixed CP^n
        // does not depend on N.
        let coeffs = custom(vec![1, 1, 0, 1, 1, 0, 1]);
        let target = SpaceModel::cp(5);
        let mut images = Vec::new();
        for n in [3u32, 4, 5, 6] {
            let space = SpaceModel::cp(2 * n);
            let roots = RootData::cp_normal(&space).unwrap();
            let k = kervaire_class(&coeffs, &roots).unwrap();
            images.push(k.restrict(&target).unwrap());
        }
        for img in &images[1..] {
            assert_eq!(img, &images[0]);
        }
    }

    #[test]
    fn insufficient_coefficients_rejected() {
        let coeffs = custom(vec![1]);
        let roots = RootData::cp_normal(&SpaceModel::cp(6)).unwrap();
        assert!(matches!(
            kervaire_class(&coeffs, &roots),
            Err(Error::InsufficientCoeffs { .. })
        ));
        assert!(matches!(check_pairing(&coeffs, 3), Err(Error::InsufficientCoeffs { .. })));
    }

    #[test]
    fn kervaire_class_degrees_are_2_mod_4() {
        let coeffs = custom(vec![1, 1, 1, 1]);
        let roots = RootData::cp_normal(&SpaceModel::cp(6)).unwrap();
        let k = kervaire_class(&coeffs, &roots).unwrap();
        assert!(!k.is_zero());
        for d in k.degrees() {
            assert_eq!(d % 4, 2);
        }
    }
}
