fn main() {
    std::process::exit(toral::cli::main_with_args(std::env::args_os()));
}
