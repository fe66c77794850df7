fn main() {
    std::process::exit(glpoisson::cli::run());
}
