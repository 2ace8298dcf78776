fn main() {
    std::process::exit(holdfix::cli::main());
}
