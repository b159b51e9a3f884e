fn main() {
    std::process::exit(fglab_cli::run(std::env::args_os()));
}
