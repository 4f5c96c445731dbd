fn main() {
    std::process::exit(cbne::cli::run());
}
