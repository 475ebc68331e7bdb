fn main() {
    std::process::exit(knotvol::cli::run(std::env::args().skip(1).collect()));
}
