fn main() {
    std::process::exit(sdsp::cli::run(std::env::args_os()));
}
