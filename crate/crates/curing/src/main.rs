fn main() {
    std::process::exit(curing::cli::run(std::env::args_os()));
}
