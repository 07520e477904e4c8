fn main() {
    heegner_core::cli::main()
}
