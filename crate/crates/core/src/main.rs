fn main() {
    std::process::exit(casimir_pws::cli::run(std::env::args()));
}
