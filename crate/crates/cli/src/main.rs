use std::io::Write;

fn main() {
    let (code, out) = resonance_cli::run(std::env::args_os());
    if code != resonance_cli::EXIT_OK && out.starts_with("error") {
        eprint!("{out}");
    } else {
        print!("{out}");
        let _ = std::io::stdout().flush();
    }
    std::process::exit(code);
}
