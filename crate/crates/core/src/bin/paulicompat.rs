fn main() {
    std::process::exit(paulicompat::cli::main_with_args(std::env::args_os()));
}
