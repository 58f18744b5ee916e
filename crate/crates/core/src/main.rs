fn main() {
    std::process::exit(gqsm::cli::main_with_env())
}
