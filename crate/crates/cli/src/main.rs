use clap::Parser;

fn main() {
    let cli = match drep::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { drep::EXIT_INPUT } else { drep::EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let stdout = std::io::stdout();
    let code = drep::run(cli, &mut stdout.lock());
    std::process::exit(code);
}
