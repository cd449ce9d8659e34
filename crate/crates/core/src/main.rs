fn main() {
    std::process::exit(abexp::cli::run());
}
