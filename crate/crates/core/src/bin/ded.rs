fn main() {
    std::process::exit(ded::cli::run(std::env::args_os()));
}
