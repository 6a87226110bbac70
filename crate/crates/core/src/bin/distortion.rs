fn main() {
    std::process::exit(circle_distortion::cli::run(std::env::args_os()));
}
