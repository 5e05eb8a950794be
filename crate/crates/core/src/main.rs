fn main() {
    std::process::exit(sharplp::cli::main_from_env());
}
