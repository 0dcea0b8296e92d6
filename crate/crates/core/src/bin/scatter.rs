fn main() {
    std::process::exit(scatter_core::cli::main_with_args(std::env::args_os()));
}
