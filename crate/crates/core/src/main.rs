fn main() {
    std::process::exit(hicarbon::cli::main());
}
