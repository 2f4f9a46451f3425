fn main() {
    std::process::exit(fermat_ws::cli::main_with_args(std::env::args_os()));
}
