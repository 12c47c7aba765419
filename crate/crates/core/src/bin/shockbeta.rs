fn main() {
    std::process::exit(shockbeta::cli::run(std::env::args_os()));
}
