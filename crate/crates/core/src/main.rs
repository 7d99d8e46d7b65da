fn main() {
    std::process::exit(shapeinv::cli::run(std::env::args_os()));
}
