fn main() {
    std::process::exit(qembed::cli::run(std::env::args_os()));
}
