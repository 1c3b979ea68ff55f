fn main() {
    std::process::exit(varexp::cli::run(std::env::args_os()));
}
