fn main() {
    std::process::exit(dualrisk::cli::run(std::env::args_os()));
}
