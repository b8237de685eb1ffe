fn main() {
    std::process::exit(ramsey_stepup::cli::run(std::env::args_os()));
}
