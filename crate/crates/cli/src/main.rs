fn main() {
    std::process::exit(smd_cli::run(std::env::args_os()));
}
