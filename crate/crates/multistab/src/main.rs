fn main() {
    std::process::exit(multistab::cli::main_with(std::env::args_os()));
}
