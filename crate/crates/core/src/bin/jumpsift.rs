fn main() {
    std::process::exit(jumpsift::cli::run(std::env::args_os()));
}
