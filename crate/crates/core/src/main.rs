fn main() {
    std::process::exit(apg::cli::run(std::env::args_os()));
}
