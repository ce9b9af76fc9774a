fn main() {
    std::process::exit(nsk_limit::cli::run(std::env::args_os()));
}
