fn main() {
    std::process::exit(finite_jj::cli::run(std::env::args_os()));
}
