fn main() {
    std::process::exit(gll_core::cli::run(std::env::args_os()));
}
