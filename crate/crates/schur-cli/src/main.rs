fn main() {
    std::process::exit(schur_cli::run(std::env::args()));
}
