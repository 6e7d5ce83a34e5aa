fn main() {
    std::process::exit(edge34::cli::run());
}
