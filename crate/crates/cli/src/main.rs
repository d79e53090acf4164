fn main() {
    std::process::exit(pdiv_cli::main_with(std::env::args_os()));
}
