fn main() {
    std::process::exit(valivt::cli::main_with_env());
}
