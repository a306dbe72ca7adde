fn main() {
    std::process::exit(finsurf_cli::main_with_args(std::env::args_os()));
}
