fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(tll::cli::run(argv));
}
