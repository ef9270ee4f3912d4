use clap::Parser;
use theta_forge::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(&cli);
    let mut text = out.text;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                std::process::exit(1);
            }
        }
        None => print!("{text}"),
    }
    std::process::exit(out.code);
}
