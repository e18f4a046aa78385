fn main() {
    std::process::exit(qorth_harness::cli::main_with(std::env::args_os()));
}
