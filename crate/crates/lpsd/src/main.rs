fn main() {
    std::process::exit(lpsd::cli::run(std::env::args_os()));
}
