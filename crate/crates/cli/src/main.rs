fn main() {
    std::process::exit(nopo_xy_cli::main_with_args(std::env::args_os()));
}
