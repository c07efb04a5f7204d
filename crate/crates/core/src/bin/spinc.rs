fn main() {
    std::process::exit(spinc::cli::main_with_args(std::env::args_os()));
}
