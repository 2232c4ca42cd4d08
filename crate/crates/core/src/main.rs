fn main() {
    std::process::exit(duplex_em::cli::run(std::env::args_os()));
}
