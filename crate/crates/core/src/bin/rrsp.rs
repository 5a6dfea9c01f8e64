fn main() {
    std::process::exit(rrsp::cli::main());
}
