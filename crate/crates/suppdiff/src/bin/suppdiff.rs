fn main() {
    std::process::exit(suppdiff::cli::main());
}
