fn main() {
    std::process::exit(xsec::cli::main_with_args(std::env::args_os()));
}
