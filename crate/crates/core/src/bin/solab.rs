fn main() -> std::process::ExitCode {
    solab::cli::run()
}
