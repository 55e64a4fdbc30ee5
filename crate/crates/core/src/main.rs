fn main() {
    std::process::exit(harmonic_schwarz::cli::run());
}
