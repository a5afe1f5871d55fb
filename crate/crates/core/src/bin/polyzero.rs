fn main() {
    std::process::exit(polyzero::cli::run(std::env::args_os()));
}
