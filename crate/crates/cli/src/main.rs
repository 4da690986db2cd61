use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(det_waring_cli::run::run(std::env::args_os()) as u8)
}
