//! Command-line front end: every subcommand reads flags (and JSON documents
//! where noted), writes one deterministic JSON document to stdout, and exits
//! 0 on success, 1 with `{"error": …}` on domain errors, 2 on usage errors.

use std::fs;
use std::io::Read;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use formal_galois::arith::{PadicInt, PadicUnit};
use formal_galois::char_classes::{l_class_cp, l_series, RootData};
use formal_galois::json as fgjson;
use formal_galois::kervaire::{
    kervaire_class, kervaire_class_up_to, CoeffProvenance, KervaireCoeffs, KervaireMode,
};
use formal_galois::ring::{Coeff, GradedClass, SpaceModel};
use formal_galois::sample;
use formal_galois::structure::{galois_etale, galois_two, galois_odd, validate_etale, validate_odd};
use formal_galois::{legendre_mod8, wu_square_formula, wu_square_oracle};

#[derive(Parser)]
#[command(name = "fgal", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Squared Wu class of CP^{2m+1}
    Wu {
        #[arg(long)]
        m: u32,
        /// "formula" or "oracle"
        #[arg(long, default_value = "formula")]
        method: String,
    },
    /// L-genus series coefficients or the L-class of a projective space
    Lgenus {
        /// Number of series coefficients l_0..l_{terms-1}
        #[arg(long)]
        terms: Option<usize>,
        /// Emit the L-class of CP^n instead
        #[arg(long)]
        cp: Option<u32>,
    },
    /// Kervaire coefficient vectors (f_1, f_3, ...)
    KervaireF {
        /// "constant", "preset", or "custom"
        #[arg(long)]
        mode: String,
        /// Constant invariant bit (picks a representative sigma2)
        #[arg(long)]
        invariant: Option<u8>,
        /// Number of entries to produce
        #[arg(long)]
        count: Option<usize>,
        /// 2-adic unit residue for sigma2
        #[arg(long)]
        sigma: Option<u64>,
        /// Comma-separated bits for --mode custom
        #[arg(long)]
        f: Option<String>,
        #[arg(long, default_value_t = 20)]
        precision: u32,
    },
    /// Kervaire class of the normal roots of a space
    KervaireClass {
        /// Space label, e.g. "CP^5" or "CP^3xCP^2"
        #[arg(long)]
        space: String,
        #[arg(long)]
        mode: String,
        #[arg(long)]
        invariant: Option<u8>,
        #[arg(long)]
        sigma: Option<u64>,
        #[arg(long)]
        f: Option<String>,
        /// Truncate the expansion at this degree (default: the dimension)
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, default_value_t = 20)]
        precision: u32,
    },
    /// Apply the Galois action to a JSON document
    /// {"manifold": ..., "structure": ..., "sigma": ...}
    Act {
        /// Path to the input document, or "-" for stdin
        #[arg(long, default_value = "-")]
        input: String,
        /// Kervaire mode at the prime 2: "paper-preset" or "constant"
        #[arg(long, default_value = "paper-preset")]
        mode: String,
    },
    /// Validate a {"manifold": ..., "structure": ...} document per prime
    Validate {
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Run a randomized verification suite
    Verify {
        /// "group-laws", "additivity", or "integrality"
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: u32,
    },
}

/// Execute `argv` (including the program name) and return
/// (exit code, stdout, stderr).
pub fn run(argv: &[String]) -> (i32, String, String) {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // Help/version are usage-level output, not errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return (code, String::new(), e.to_string());
        }
    };
    match dispatch(cli.command) {
        Ok(doc) => (0, fgjson::to_canonical_string(&doc), String::new()),
        Err(CliError::Usage(msg)) => (2, String::new(), format!("usage error: {msg}\n")),
        Err(CliError::Domain(msg)) => (
            1,
            fgjson::to_canonical_string(&json!({ "error": msg })),
            String::new(),
        ),
    }
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl From<formal_galois::Error> for CliError {
    fn from(e: formal_galois::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult = Result<Value, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn domain(msg: impl Into<String>) -> CliError {
    CliError::Domain(msg.into())
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Wu { m, method } => cmd_wu(m, &method),
        Command::Lgenus { terms, cp } => cmd_lgenus(terms, cp),
        Command::KervaireF { mode, invariant, count, sigma, f, precision } => {
            let coeffs = build_coeffs(&mode, invariant, count, sigma, f.as_deref(), precision)?;
            Ok(fgjson::coeffs_to_json(&coeffs))
        }
        Command::KervaireClass { space, mode, invariant, sigma, f, max_degree, precision } => {
            cmd_kervaire_class(&space, &mode, invariant, sigma, f.as_deref(), max_degree, precision)
        }
        Command::Act { input, mode } => cmd_act(&input, &mode),
        Command::Validate { input } => cmd_validate(&input),
        Command::Verify { suite, seed, trials } => cmd_verify(&suite, seed, trials),
    }
}

fn terms_json(class: &GradedClass) -> Value {
    Value::Array(
        class
            .terms()
            .map(|(exps, coeff)| {
                let s = match coeff {
                    Coeff::Mod(v) => v.residue().to_string(),
                    Coeff::Rat(r) => formal_galois::arith::rational_to_string(r),
                };
                json!({ "exps": exps, "coeff": s })
            })
            .collect(),
    )
}

fn cmd_wu(m: u32, method: &str) -> CliResult {
    let class = match method {
        "formula" => wu_square_formula(m),
        "oracle" => wu_square_oracle(m),
        other => return Err(usage(format!("unknown method {other:?}"))),
    };
    Ok(json!({ "space": class.space().label(), "class": terms_json(&class) }))
}

fn cmd_lgenus(terms: Option<usize>, cp: Option<u32>) -> CliResult {
    match (terms, cp) {
        (Some(n), None) => {
            let series = l_series(n.saturating_sub(1));
            Ok(json!({
                "series": series
                    .coefficients()
                    .iter()
                    .take(n)
                    .map(fgjson::rational_to_json)
                    .collect::<Vec<_>>(),
            }))
        }
        (None, Some(n)) => {
            let space = SpaceModel::cp(n);
            let class = l_class_cp(&space)?;
            let mut doc = json!({ "space": space.label(), "class": terms_json(&class) });
            if space.dim_real() % 4 == 0 {
                let Coeff::Rat(sig) = class.pair_fundamental() else {
                    return Err(domain("L-class must be rational".to_string()));
                };
                doc["signature"] =
                    Value::String(formal_galois::arith::rational_to_string(&sig));
            }
            Ok(doc)
        }
        _ => Err(usage("pass exactly one of --terms or --cp")),
    }
}

fn parse_bits(s: &str) -> Result<Vec<u8>, CliError> {
    s.split(',')
        .map(|b| match b.trim() {
            "0" => Ok(0),
            "1" => Ok(1),
            other => Err(usage(format!("bit entries must be 0 or 1, got {other:?}"))),
        })
        .collect()
}

fn sigma_unit(
    sigma: Option<u64>,
    invariant: Option<u8>,
    precision: u32,
    default_residue: u64,
) -> Result<PadicUnit, CliError> {
    let residue = match (sigma, invariant) {
        (Some(r), _) => r,
        // Representatives: legendre 0 -> 1 mod 8, legendre 1 -> 3 mod 8.
        (None, Some(0)) => 1,
        (None, Some(1)) => 3,
        (None, Some(b)) => return Err(usage(format!("--invariant must be 0 or 1, got {b}"))),
        (None, None) => default_residue,
    };
    let unit = PadicUnit::new(PadicInt::from_u64(2, precision, residue)?)?;
    if let (Some(_), Some(inv)) = (sigma, invariant) {
        if legendre_mod8(&unit)? != inv {
            return Err(usage("--sigma and --invariant disagree"));
        }
    }
    Ok(unit)
}

fn build_coeffs(
    mode: &str,
    invariant: Option<u8>,
    count: Option<usize>,
    sigma: Option<u64>,
    f: Option<&str>,
    precision: u32,
) -> Result<KervaireCoeffs, CliError> {
    match mode {
        "constant" => {
            let unit = sigma_unit(sigma, invariant, precision, 1)?;
            let entries = count.unwrap_or(3);
            if entries == 0 {
                return Err(usage("--count must be positive"));
            }
            Ok(KervaireCoeffs::constant_invariant(unit, entries as u32 - 1)?)
        }
        "preset" | "paper-preset" => {
            let unit = sigma_unit(sigma, invariant, precision, 1)?;
            let coeffs = KervaireCoeffs::paper_preset(unit)?;
            if let Some(n) = count {
                if n > coeffs.entries().len() {
                    return Err(domain(format!(
                        "the preset defines {} entries, {n} requested",
                        coeffs.entries().len()
                    )));
                }
            }
            Ok(coeffs)
        }
        "custom" => {
            let bits = parse_bits(f.ok_or_else(|| usage("--mode custom requires --f"))?)?;
            let unit = sigma_unit(sigma, invariant, precision, 1)?;
            Ok(KervaireCoeffs::new(unit, bits, CoeffProvenance::CustomOracle)?)
        }
        other => Err(usage(format!("unknown mode {other:?}"))),
    }
}

fn parse_space_label(label: &str) -> Result<SpaceModel, CliError> {
    let truncs = label
        .split('x')
        .map(|part| {
            part.strip_prefix("CP^")
                .and_then(|n| n.parse::<u32>().ok())
                .ok_or_else(|| usage(format!("cannot parse space label {label:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    match truncs.as_slice() {
        [] => Err(usage("empty space label")),
        [n] => Ok(SpaceModel::cp(*n)),
        many => Ok(SpaceModel::cp_product(many)?),
    }
}

fn cmd_kervaire_class(
    space: &str,
    mode: &str,
    invariant: Option<u8>,
    sigma: Option<u64>,
    f: Option<&str>,
    max_degree: Option<u32>,
    precision: u32,
) -> CliResult {
    let sp = parse_space_label(space)?;
    let coeffs = build_coeffs(mode, invariant, None, sigma, f, precision)?;
    let roots = RootData::cp_normal(&sp)?;
    let class = match max_degree {
        Some(d) => kervaire_class_up_to(&coeffs, &roots, d)?,
        None => kervaire_class_up_to(&coeffs, &roots, sp.dim_real())?,
    };
    Ok(json!({
        "space": sp.label(),
        "class": terms_json(&class),
        "mode": coeffs.mode().as_str(),
    }))
}

fn read_input(path: &str) -> Result<Value, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| domain(format!("invalid JSON: {e}")))
}

fn parse_action_mode(mode: &str) -> Result<KervaireMode, CliError> {
    match mode {
        "paper-preset" => Ok(KervaireMode::PaperPreset),
        "constant" => Ok(KervaireMode::ConstantLegendre),
        other => Err(usage(format!("unknown Kervaire mode {other:?}"))),
    }
}

fn cmd_act(input: &str, mode: &str) -> CliResult {
    let doc = read_input(input)?;
    let mode = parse_action_mode(mode)?;
    let x = fgjson::etale_manifold_from_json(
        doc.get("manifold").ok_or_else(|| domain("missing field \"manifold\""))?,
    )?;
    let s = fgjson::etale_structure_from_json(
        doc.get("structure").ok_or_else(|| domain("missing field \"structure\""))?,
    )?;
    let sigma = fgjson::adelic_from_json(
        doc.get("sigma").ok_or_else(|| domain("missing field \"sigma\""))?,
    )?;
    let (x2, s2) = galois_etale(&x, &s, &sigma, &mode)?;
    Ok(json!({
        "manifold": fgjson::etale_manifold_to_json(&x2),
        "structure": fgjson::etale_structure_to_json(&s2),
    }))
}

fn cmd_validate(input: &str) -> CliResult {
    let doc = read_input(input)?;
    let x = fgjson::etale_manifold_from_json(
        doc.get("manifold").ok_or_else(|| domain("missing field \"manifold\""))?,
    )?;
    let s = fgjson::etale_structure_from_json(
        doc.get("structure").ok_or_else(|| domain("missing field \"structure\""))?,
    )?;
    let report = validate_etale(&x, &s)?;
    let mut results = serde_json::Map::new();
    let mut all = true;
    for (p, ok) in &report {
        all &= ok;
        results.insert(p.to_string(), Value::Bool(*ok));
    }
    Ok(json!({ "results": Value::Object(results), "valid": all }))
}

fn cmd_verify(suite: &str, seed: u64, trials: u32) -> CliResult {
    let (passed, failed) = match suite {
        "group-laws" => suite_group_laws(seed, trials)?,
        "additivity" => suite_additivity(seed, trials)?,
        "integrality" => suite_integrality(seed, trials)?,
        other => return Err(usage(format!("unknown suite {other:?}"))),
    };
    Ok(json!({ "suite": suite, "passed": passed, "failed": failed }))
}

fn odd_trial(rng: &mut ChaCha8Rng, prime: u64) -> Result<bool, CliError> {
    let (x, s) = sample::odd_pair(rng, prime, 12)?;
    let sigma = sample::padic_unit(rng, prime, 12);
    let tau = sample::padic_unit(rng, prime, 12);

    let one = PadicUnit::one(prime, 12)?;
    let (xi, si) = galois_odd(&x, &s, &one)?;
    let identity = xi.delta_hat() == x.delta_hat()
        && si.phi_char() == s.phi_char()
        && si.beta() == s.beta();

    let (xa, sa) = galois_odd(&x, &s, &sigma)?;
    let (xc, sc) = galois_odd(&xa, &sa, &tau)?;
    let (xd, sd) = galois_odd(&x, &s, &tau.mul(&sigma)?)?;
    let composition = xc == xd && sc == sd;

    let transport = validate_odd(&x, &s)? && validate_odd(&xa, &sa)?;
    Ok(identity && composition && transport)
}

fn two_trial(rng: &mut ChaCha8Rng) -> Result<bool, CliError> {
    let (x, s) = sample::two_pair(rng, 20, 17)?;
    let sigma = sample::padic_unit(rng, 2, 20);
    let tau = sample::padic_unit(rng, 2, 20);
    let mode = KervaireMode::PaperPreset;

    let one = PadicUnit::one(2, 20)?;
    let (xi, si) = galois_two(&x, &s, &one, &mode)?;
    let identity = xi.l_x() == x.l_x() && &si == &s;

    let (xa, sa) = galois_two(&x, &s, &sigma, &mode)?;
    let (_, sc) = galois_two(&xa, &sa, &tau, &mode)?;
    let (_, sd) = galois_two(&x, &s, &tau.mul(&sigma)?, &mode)?;
    let composition = sc == sd;

    let (_, sr) = galois_two(&xa, &sa, &sigma.inverse(), &mode)?;
    let round_trip = sr == s;
    Ok(identity && composition && round_trip)
}

fn suite_group_laws(seed: u64, trials: u32) -> Result<(u32, u32), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut failed = 0;
    for _ in 0..trials {
        let ok = odd_trial(&mut rng, 3)? && odd_trial(&mut rng, 5)? && two_trial(&mut rng)?;
        if ok {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    Ok((passed, failed))
}

fn suite_additivity(seed: u64, trials: u32) -> Result<(u32, u32), CliError> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut failed = 0;
    for _ in 0..trials {
        let sp = SpaceModel::cp_product(&[rng.gen_range(1..=6), rng.gen_range(1..=6)])?;
        let r1 = sample::root_data(&mut rng, &sp);
        let r2 = sample::root_data(&mut rng, &sp);
        let top = sp.top_total_exp();
        let max_odd = if top % 2 == 1 { top } else { top - 1 };
        let bits: Vec<u8> =
            (0..(max_odd + 1) / 2).map(|_| rng.gen_range(0..=1u8)).collect();
        let coeffs = KervaireCoeffs::new(
            PadicUnit::one(2, 20)?,
            bits,
            CoeffProvenance::CustomOracle,
        )?;
        let lhs = kervaire_class(&coeffs, &r1.concat(&r2)?)?;
        let rhs = kervaire_class(&coeffs, &r1)?.add(&kervaire_class(&coeffs, &r2)?)?;
        if lhs == rhs {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    Ok((passed, failed))
}

fn suite_integrality(seed: u64, trials: u32) -> Result<(u32, u32), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut failed = 0;
    for t in 0..trials {
        let u = sample::padic_unit(&mut rng, 2, 20);
        let one = PadicInt::from_u64(2, 20, 1)?;
        let integral = one.sub(u.pow(-2).as_int())?.div_exact_prime_pow(3).is_ok();
        // Exercise the full action's division as well, on a rotating subset.
        let action_ok = if t % 10 == 0 {
            let (x, s) = sample::two_pair(&mut rng, 20, 17)?;
            galois_two(&x, &s, &u, &KervaireMode::PaperPreset).is_ok()
        } else {
            true
        };
        if integral && action_ok {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    Ok((passed, failed))
}
