fn main() -> std::process::ExitCode {
    bsieve_cli::main_entry()
}
