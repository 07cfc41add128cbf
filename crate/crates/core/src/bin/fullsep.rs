fn main() {
    std::process::exit(fullsep::cli::run(std::env::args_os()));
}
