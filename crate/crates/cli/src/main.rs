fn main() -> std::process::ExitCode {
    curvelab_cli::main_with_args(std::env::args_os())
}
