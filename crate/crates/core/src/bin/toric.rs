use clap::Parser;

fn main() {
    let args = toric_heights::cli::Args::parse();
    let code = toric_heights::cli::run(&args, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
