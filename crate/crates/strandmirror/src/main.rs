fn main() {
    std::process::exit(strandmirror::cli::run());
}
