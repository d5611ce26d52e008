fn main() {
    std::process::exit(coxlimits::cli::run(std::env::args_os()));
}
