fn main() {
    std::process::exit(weylp::cli::run());
}
