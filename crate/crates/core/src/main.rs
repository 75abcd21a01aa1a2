fn main() {
    std::process::exit(zeromode::cli::run(std::env::args_os()));
}
