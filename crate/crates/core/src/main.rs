fn main() {
    std::process::exit(quadkoszul::cli::run(std::env::args_os()));
}
