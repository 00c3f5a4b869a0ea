fn main() {
    std::process::exit(intercept_cli::run_cli());
}
