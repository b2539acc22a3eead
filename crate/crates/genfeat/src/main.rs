fn main() {
    std::process::exit(genfeat::cli::run(std::env::args_os()));
}
