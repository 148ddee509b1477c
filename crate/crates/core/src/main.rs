use std::process::ExitCode;

fn main() -> ExitCode {
    let out = valq::cli::run_args(std::env::args_os().skip(1));
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
