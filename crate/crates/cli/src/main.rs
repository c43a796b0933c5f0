fn main() {
    std::process::exit(markoff_cli::run_cli(std::env::args_os()));
}
