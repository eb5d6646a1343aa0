fn main() {
    std::process::exit(coinduce_cli::main_with_args(std::env::args_os()));
}
