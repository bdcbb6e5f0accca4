fn main() {
    std::process::exit(pibi_cli::run(std::env::args_os()));
}
