fn main() {
    std::process::exit(gatewalk::cli::run_cli(std::env::args_os()));
}
