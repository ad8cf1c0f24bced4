fn main() {
    std::process::exit(cyclemod::cli::main_with_args(std::env::args_os()));
}
