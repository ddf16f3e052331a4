fn main() {
    std::process::exit(aperiodic_spectra::cli::main());
}
