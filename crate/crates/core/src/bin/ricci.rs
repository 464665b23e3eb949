fn main() {
    std::process::exit(ricci_graph::cli::run(std::env::args_os()));
}
