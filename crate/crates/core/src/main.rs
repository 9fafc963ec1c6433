fn main() {
    std::process::exit(docrel::cli::run(std::env::args_os()));
}
