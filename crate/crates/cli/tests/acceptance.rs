//! Acceptance suite: one check per criterion, each printing a single
//! PASS/FAIL line (visible with `cargo test -- --nocapture`).

use std::time::{Duration, Instant};

use formal_galois::arith::{binom_mod2, legendre_mod8, PadicInt, PadicUnit};
use formal_galois::char_classes::l_class_cp;
use formal_galois::kervaire::{
    check_pairing, solve_coeffs, CoeffProvenance, InvariantOracle, KervaireCoeffs,
};
use formal_galois::ring::{Coeff, RingSpec, SpaceModel};
use formal_galois::{wu_square_formula, wu_square_oracle};
use formal_galois_cli::run;

fn report(n: u32, what: &str, ok: bool, elapsed: Duration, budget: Duration) {
    let timely = elapsed <= budget;
    println!(
        "{}: criterion {n} ({what}) in {elapsed:?} (budget {budget:?})",
        if ok && timely { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} ({what}) failed");
    assert!(timely, "criterion {n} ({what}) exceeded {budget:?}: {elapsed:?}");
}

fn unit2(residue: u64) -> PadicUnit {
    PadicUnit::new(PadicInt::from_u64(2, 5, residue).unwrap()).unwrap()
}

#[test]
fn criterion_1_legendre_table() {
    let start = Instant::now();
    let ok = [(1u64, 0u8), (3, 1), (5, 1), (7, 0)]
        .iter()
        .all(|(r, want)| legendre_mod8(&unit2(*r)).unwrap() == *want);
    report(1, "modified Legendre table", ok, start.elapsed(), Duration::from_millis(1));
}

#[test]
fn criterion_2_wu_agreement() {
    let start = Instant::now();
    let ok = (0..=10).all(|m| wu_square_formula(m) == wu_square_oracle(m));
    report(2, "squared Wu formula vs oracle", ok, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_3_binomials() {
    let start = Instant::now();
    let mut pascal = vec![vec![0u8; 65]; 65];
    for n in 0..=64usize {
        pascal[n][0] = 1;
        for j in 1..=n {
            pascal[n][j] = (pascal[n - 1][j - 1] + pascal[n - 1][j]) % 2;
        }
    }
    let ok = (0..=64u64)
        .all(|n| (0..=64u64).all(|j| binom_mod2(n, j) == pascal[n as usize][j as usize]));
    report(3, "binom_mod2 vs Pascal", ok, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_4_signature() {
    let start = Instant::now();
    let ok = (1..=5u32).all(|k| {
        let class = l_class_cp(&SpaceModel::cp(2 * k)).unwrap();
        class.pair_fundamental() == Coeff::from_i64(&RingSpec::Rational, 1)
    });
    report(4, "signature of CP^{2k}", ok, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_5_kervaire_solver() {
    let start = Instant::now();
    let sigma = unit2(3);
    let mut ok = true;
    // Every oracle table f: {0..4} -> bits has exactly one coefficient
    // vector reproducing it through the pairing, and solve_coeffs finds it.
    for mask in 0u32..32 {
        let table: Vec<u8> = (0..5).map(|i| ((mask >> i) & 1) as u8).collect();
        let oracle = InvariantOracle::from_table(table.clone()).unwrap();
        let solved = solve_coeffs(&oracle, 4).unwrap();
        let coeffs = KervaireCoeffs::new(
            sigma.clone(),
            solved.clone(),
            CoeffProvenance::CustomOracle,
        )
        .unwrap();
        ok &= (0..5u32).all(|m| check_pairing(&coeffs, m).unwrap() == table[m as usize]);
        let mut matches = 0;
        for cand in 0u32..32 {
            let bits: Vec<u8> = (0..5).map(|i| ((cand >> i) & 1) as u8).collect();
            let c = KervaireCoeffs::new(sigma.clone(), bits.clone(), CoeffProvenance::CustomOracle)
                .unwrap();
            if (0..5u32).all(|m| check_pairing(&c, m).unwrap() == table[m as usize]) {
                matches += 1;
                ok &= bits == solved;
            }
        }
        ok &= matches == 1;
    }
    // The stored preset (1,0,1) for sigma2 = +-3 disagrees with the
    // constant-invariant solution (1,1,0); both are surfaced as modes.
    let preset = KervaireCoeffs::paper_preset(unit2(3)).unwrap();
    ok &= preset.entries() == [1, 0, 1];
    ok &= preset.mode() == CoeffProvenance::PaperPreset;
    let constant = KervaireCoeffs::constant_invariant(unit2(3), 2).unwrap();
    ok &= constant.entries() == [1, 1, 0];
    ok &= (0..3u32).all(|m| check_pairing(&constant, m).unwrap() == 1);
    ok &= preset.entries() != constant.entries();
    report(5, "Kervaire solver round trip + uniqueness", ok, start.elapsed(), Duration::from_secs(1));
}

fn verify_suite(suite: &str, trials: &str) -> bool {
    let argv: Vec<String> = ["fgal", "verify", "--suite", suite, "--seed", "7", "--trials", trials]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let (code, out, _) = run(&argv);
    code == 0 && out.contains(&format!(r#""failed":0,"passed":{trials}"#))
}

#[test]
fn criterion_6_additivity() {
    let start = Instant::now();
    let ok = verify_suite("additivity", "100");
    report(6, "Kervaire class additivity", ok, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_7_group_laws() {
    let start = Instant::now();
    let ok = verify_suite("group-laws", "100");
    report(7, "Galois action group laws", ok, start.elapsed(), Duration::from_secs(5));
}

#[test]
fn criterion_8_integrality() {
    let start = Instant::now();
    let ok = verify_suite("integrality", "200");
    report(8, "2-adic division-by-8 integrality", ok, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_9_cli_round_trip() {
    use formal_galois::arith::AdelicUnit;
    use formal_galois::json as fgjson;
    use formal_galois::sample;
    use formal_galois::structure::{
        EtaleManifold, EtaleStructure, PrimeManifold, PrimeStructure,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    let start = Instant::now();
    let mut ok = true;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x3, s3) = sample::odd_pair(&mut rng, 3, 12).unwrap();
        let (x2, s2) = sample::two_pair(&mut rng, 20, 17).unwrap();
        let x = EtaleManifold::new(vec![
            (2, PrimeManifold::Two(x2)),
            (3, PrimeManifold::Odd(x3)),
        ])
        .unwrap();
        let s = EtaleStructure::new(vec![
            (2, PrimeStructure::Two(s2)),
            (3, PrimeStructure::Odd(s3)),
        ])
        .unwrap();
        let sigma = AdelicUnit::new(vec![
            sample::padic_unit(&mut rng, 2, 20),
            sample::padic_unit(&mut rng, 3, 12),
        ])
        .unwrap();

        let original = fgjson::to_canonical_string(&fgjson::etale_structure_to_json(&s));
        let doc = fgjson::to_canonical_string(&serde_json::json!({
            "manifold": fgjson::etale_manifold_to_json(&x),
            "structure": fgjson::etale_structure_to_json(&s),
            "sigma": fgjson::adelic_to_json(&sigma),
        }));
        let path = std::env::temp_dir()
            .join(format!("fgal-acc9-{}-{seed}.json", std::process::id()));
        std::fs::write(&path, &doc).unwrap();
        let argv: Vec<String> =
            ["fgal", "act", "--input", path.to_str().unwrap()].iter().map(|a| a.to_string()).collect();
        let (code, out, _) = run(&argv);
        ok &= code == 0;
        let forward: serde_json::Value = serde_json::from_str(&out).unwrap();
        let doc2 = fgjson::to_canonical_string(&serde_json::json!({
            "manifold": forward["manifold"],
            "structure": forward["structure"],
            "sigma": fgjson::adelic_to_json(&sigma.inverse()),
        }));
        std::fs::write(&path, &doc2).unwrap();
        let (code, out2, _) = run(&argv);
        ok &= code == 0;
        let back: serde_json::Value = serde_json::from_str(&out2).unwrap();
        ok &= fgjson::to_canonical_string(&back["structure"]) == original;
        std::fs::remove_file(&path).ok();
    }
    report(9, "CLI act round trip, byte-identical", ok, start.elapsed(), Duration::from_secs(1));
}
