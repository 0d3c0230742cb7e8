fn main() {
    std::process::exit(empathy_ca::cli::main_from(std::env::args_os()));
}
