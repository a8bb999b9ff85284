fn main() -> std::process::ExitCode {
    qkd_trojan::cli::run()
}
