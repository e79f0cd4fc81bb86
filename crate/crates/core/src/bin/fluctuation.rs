fn main() {
    std::process::exit(fluctuation::cli::run());
}
