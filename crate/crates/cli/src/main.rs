fn main() {
    std::process::exit(hypercover_cli::run(std::env::args().collect()));
}
