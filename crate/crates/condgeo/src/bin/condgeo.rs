fn main() {
    std::process::exit(condgeo::cli::run());
}
