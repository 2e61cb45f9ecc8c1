fn main() {
    std::process::exit(vpconfine_cli::run(std::env::args_os()));
}
