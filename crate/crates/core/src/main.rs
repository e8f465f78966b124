fn main() {
    std::process::exit(iadof::cli::main());
}
