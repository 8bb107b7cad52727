fn main() {
    std::process::exit(fzener::cli::run(std::env::args_os()));
}
