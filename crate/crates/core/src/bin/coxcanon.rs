fn main() {
    std::process::exit(coxcanon::cli::main_with_args(std::env::args_os()));
}
