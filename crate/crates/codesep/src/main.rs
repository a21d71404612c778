fn main() {
    std::process::exit(codesep::cli::main_with(std::env::args_os()));
}
