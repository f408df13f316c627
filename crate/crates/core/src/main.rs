fn main() {
    std::process::exit(finsler_lie::cli::main());
}
