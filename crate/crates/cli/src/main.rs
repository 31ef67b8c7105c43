fn main() {
    std::process::exit(effort_cli::main_with_args(std::env::args_os()));
}
