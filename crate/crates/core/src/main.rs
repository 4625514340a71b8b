fn main() {
    let code = leafatlas::cli::main_with_args(std::env::args_os());
    std::process::exit(code);
}
