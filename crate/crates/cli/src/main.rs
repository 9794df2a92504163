use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let (code, stdout, stderr) = formal_galois_cli::run(&argv);
    if !stdout.is_empty() {
        println!("{stdout}");
    }
    if !stderr.is_empty() {
        let _ = write!(std::io::stderr(), "{stderr}");
    }
    std::process::exit(code);
}
