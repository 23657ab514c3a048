fn main() {
    std::process::exit(latfold::cli::run(std::env::args().skip(1)));
}
