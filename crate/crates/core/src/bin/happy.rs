fn main() {
    std::process::exit(consecutive_happy::cli::main());
}
