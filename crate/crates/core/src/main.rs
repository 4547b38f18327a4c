fn main() {
    std::process::exit(localorder::cli::main_with_args(std::env::args_os()));
}
