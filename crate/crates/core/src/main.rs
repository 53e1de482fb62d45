fn main() {
    std::process::exit(riskest::cli::main());
}
