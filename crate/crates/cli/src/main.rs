use std::io::Write;

fn main() {
    let env = vf_cli::Env::from_process();
    let out = vf_cli::run(std::env::args_os().skip(1), &env);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
