fn main() {
    std::process::exit(polycarve::cli::run(std::env::args_os(), &mut std::io::stdout()));
}
