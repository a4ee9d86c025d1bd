fn main() {
    std::process::exit(framedprod::cli::run(std::env::args_os()));
}
