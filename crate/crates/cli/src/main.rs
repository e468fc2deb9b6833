fn main() {
    std::process::exit(wignerghz_cli::run(std::env::args_os()));
}
