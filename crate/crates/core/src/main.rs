fn main() {
    let code = apartdomain::cli::run(std::env::args_os());
    std::process::exit(code);
}
