fn main() -> std::process::ExitCode {
    setcoh::cli::main_with(std::env::args_os())
}
