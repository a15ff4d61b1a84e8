use std::io::Write;

fn main() {
    let out = purekit::cli::run(std::env::args_os(), &mut std::io::stdin());
    let mut stdout = std::io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stdout.flush();
    std::process::exit(out.code);
}
