fn main() {
    std::process::exit(qa2nli::cli::run(std::env::args_os()));
}
