use std::io::Write;

fn main() {
    let out = dcover_cli::run(std::env::args_os(), &mut std::io::stdin().lock());
    print!("{}", out.stdout);
    std::io::stdout().flush().ok();
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
