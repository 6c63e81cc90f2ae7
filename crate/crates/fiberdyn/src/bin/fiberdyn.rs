fn main() {
    std::process::exit(fiberdyn::cli::main_with_args(std::env::args_os()));
}
