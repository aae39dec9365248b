fn main() {
    std::process::exit(blockrace::cli::run(std::env::args_os()));
}
