fn main() {
    std::process::exit(abelreg::cli::main());
}
