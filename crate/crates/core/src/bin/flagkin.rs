fn main() {
    std::process::exit(flagkin::cli::main_with_args(std::env::args_os()));
}
