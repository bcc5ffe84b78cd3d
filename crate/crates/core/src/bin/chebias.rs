fn main() {
    std::process::exit(chebias::cli::run(std::env::args_os()));
}
